mod expr;

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spinor10::count::{count_report, count_section_points, to_csv, verify_blowup_identity, Side, DEFAULT_COUNT_BUDGET};
use spinor10::field::FieldSpec;
use spinor10::line_complex::{gamma, rho, rho_form};
use spinor10::linalg::Subspace;
use spinor10::linear_spaces::{f4_points_linear, f4_scan, span_pi4};
use spinor10::pure::{annihilator, annihilator_kernel, is_pure, mu, PureSpinorWitness};
use spinor10::scene::{basis_value, coords_value, emit_scene, parse_scene, scalar_value, Ambient, Scene, SceneObject};
use spinor10::section::{classify, make_section, ScanConfig, SectionKind};
use spinor10::spinor::{Half, HalfSpinor, VecV, DIM_HALF, DIM_V};
use spinor10::verify::{k6, run_suite, SuiteResult, SUITES};
use spinor10::Error;

#[derive(Parser)]
#[command(name = "spinor10", version, about = "Exact computations on the ten-dimensional spinor variety")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(clap::Args)]
struct Opts {
    /// A prime p or Q. Defaults to the scene's field, else 2.
    #[arg(long, global = true)]
    field: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Extension degree: the largest degree for smoothness scans, or the
    /// degree m of F_{q^m} for counts.
    #[arg(long = "ext-degree", global = true)]
    ext_degree: Option<u32>,
    /// Maximum number of points per scan.
    #[arg(long, global = true)]
    budget: Option<u128>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Scene file; objects are looked up with --object.
    #[arg(long, global = true)]
    scene: Option<String>,
    #[arg(long, global = true)]
    object: Option<String>,
    /// Spinor literal such as `e1+e234`; may repeat.
    #[arg(long, global = true)]
    spinor: Vec<String>,
    /// Vector literal such as `e1+2*f3`; may repeat.
    #[arg(long, global = true)]
    vector: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Special,
    VerySpecial,
    Generic,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpanOf {
    /// Spinors killed by an isotropic subspace of V.
    Kernel,
    /// The 4-space through a pure spinor.
    Pi4,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    X,
    Dual,
}

#[derive(Subcommand)]
enum Cmd {
    /// Whether a spinor is pure.
    Member,
    /// The isotropic vector attached to an impure spinor of S-.
    Gamma,
    /// Annihilator in V of a spinor.
    Annihilator,
    /// Spinor spans of isotropic subspaces or of pure spinors.
    Span {
        #[arg(long, value_enum, default_value_t = SpanOf::Kernel)]
        of: SpanOf,
        /// Half for --of kernel: plus or minus.
        #[arg(long, default_value = "plus")]
        half: String,
    },
    /// The line-complex value on a pencil, and the rank of its Pluecker form.
    Rho,
    /// Classify the section defined by K in S-.
    Classify,
    /// Construct a section of a given kind and write it as a scene.
    MakeSection {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        k: Option<usize>,
        /// Write the scene here instead of standard output.
        #[arg(long)]
        out: Option<String>,
    },
    /// The 4-spaces of the spinor variety contained in a section.
    F4 {
        /// Enumerate all pure spinors instead of solving the linear system.
        #[arg(long)]
        scan: bool,
    },
    /// Count points of a section (k = 0 is the whole variety).
    Count {
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = SideArg::X)]
        side: SideArg,
    },
    /// Run a named invariant suite, or `all`.
    Verify { suite: String },
    /// Counts and predictions for seeded sections of every codimension.
    Report {
        #[arg(long = "k-max", default_value_t = 5)]
        k_max: usize,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded(_) | Error::RetryBudgetExhausted(_) => Failure::Verification(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

type Out = std::result::Result<(String, bool), Failure>;

struct Ctx {
    opts: Opts,
    scene: Option<Scene>,
    field: FieldSpec,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

impl Ctx {
    fn new(opts: Opts) -> std::result::Result<Self, Failure> {
        let scene = match &opts.scene {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
                Some(parse_scene(&text).map_err(|e| usage(format!("{path}: {e}")))?)
            }
            None => None,
        };
        let field = match (&opts.field, &scene) {
            (Some(f), Some(s)) => {
                let f = FieldSpec::parse(f)?;
                if f != s.field {
                    return Err(usage(format!("--field {f} disagrees with the scene field {}", s.field)));
                }
                f
            }
            (Some(f), None) => FieldSpec::parse(f)?,
            (None, Some(s)) => s.field,
            (None, None) => FieldSpec::prime(2)?,
        };
        Ok(Ctx { opts, scene, field })
    }

    fn budget(&self) -> u128 {
        self.opts.budget.unwrap_or(DEFAULT_COUNT_BUDGET)
    }

    fn scan_config(&self) -> ScanConfig {
        let mut cfg = ScanConfig::default();
        if let Some(m) = self.opts.ext_degree {
            cfg.max_degree = m;
        }
        if let Some(b) = self.opts.budget {
            cfg.budget = b;
        }
        cfg
    }

    fn scene_object(&self) -> std::result::Result<Option<&SceneObject>, Failure> {
        match &self.scene {
            Some(s) => Ok(Some(s.get(self.opts.object.as_deref())?)),
            None if self.opts.object.is_some() => Err(usage("--object needs --scene")),
            None => Ok(None),
        }
    }

    fn spinors(&self) -> std::result::Result<Vec<HalfSpinor>, Failure> {
        if !self.opts.spinor.is_empty() {
            return self.opts.spinor.iter().map(|t| Ok(expr::parse_spinor(self.field, t)?)).collect();
        }
        match self.scene_object()? {
            Some(SceneObject::Spinor(s)) => Ok(vec![s.clone()]),
            Some(SceneObject::Section(k)) | Some(SceneObject::Subspace { ambient: Ambient::SMinus, space: k }) => {
                Ok(k.basis_rows().iter().map(|r| HalfSpinor::new(Half::Minus, r.to_vec())).collect())
            }
            Some(SceneObject::Subspace { ambient: Ambient::SPlus, space }) => {
                Ok(space.basis_rows().iter().map(|r| HalfSpinor::new(Half::Plus, r.to_vec())).collect())
            }
            Some(_) => Err(usage("the selected scene object is not a spinor")),
            None => Err(usage("give a spinor with --spinor or --scene")),
        }
    }

    fn spinor(&self) -> std::result::Result<HalfSpinor, Failure> {
        let mut v = self.spinors()?;
        if v.len() != 1 {
            return Err(usage(format!("expected one spinor, found {}", v.len())));
        }
        Ok(v.pop().expect("one"))
    }

    /// `K ⊂ S₋` from a scene section, an `S-` subspace, or spinor literals.
    fn section(&self) -> std::result::Result<Subspace, Failure> {
        let spinors = self.spinors()?;
        if spinors.iter().any(|s| s.half() != Half::Minus) {
            return Err(usage("sections are subspaces of S-"));
        }
        let rows = spinors.into_iter().map(|s| s.coords().to_vec()).collect();
        Ok(Subspace::span(self.field, DIM_HALF, rows))
    }

    fn v_subspace(&self) -> std::result::Result<Subspace, Failure> {
        if !self.opts.vector.is_empty() {
            let rows = self
                .opts
                .vector
                .iter()
                .map(|t| Ok(expr::parse_vector(self.field, t)?.into_coords()))
                .collect::<std::result::Result<Vec<_>, Failure>>()?;
            return Ok(Subspace::span(self.field, DIM_V, rows));
        }
        match self.scene_object()? {
            Some(SceneObject::Subspace { ambient: Ambient::V, space }) => Ok(space.clone()),
            Some(SceneObject::Vector(v)) => Ok(Subspace::span(self.field, DIM_V, vec![v.coords().to_vec()])),
            _ => Err(usage("give a subspace of V with --vector or a scene object")),
        }
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn coords_text(xs: &[spinor10::Scalar]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_text()).collect();
    format!("[{}]", parts.join(", "))
}

fn rows_text(sub: &Subspace) -> String {
    let mut s = format!("dim {}\n", sub.dim());
    for r in sub.basis_rows() {
        s.push_str(&coords_text(r));
        s.push('\n');
    }
    s
}

fn no_csv(ctx: &Ctx) -> std::result::Result<(), Failure> {
    if ctx.opts.format == Format::Csv {
        return Err(usage("csv output is only available for count and report"));
    }
    Ok(())
}

fn run(cmd: &Cmd, ctx: &Ctx) -> Out {
    let json_out = ctx.opts.format == Format::Json;
    match cmd {
        Cmd::Member => {
            no_csv(ctx)?;
            let s = ctx.spinor()?;
            let pure = is_pure(&s);
            let m = mu(&s);
            if json_out {
                return Ok((json_text(&json!({"half": s.half(), "pure": pure, "mu": coords_value(m.coords())})), true));
            }
            Ok((format!("{}\n", if pure { "pure" } else { "not pure" }), true))
        }
        Cmd::Gamma => {
            no_csv(ctx)?;
            let v: VecV = gamma(&ctx.spinor()?)?;
            if json_out {
                return Ok((json_text(&json!({"gamma": coords_value(v.coords())})), true));
            }
            Ok((format!("{}\n", coords_text(v.coords())), true))
        }
        Cmd::Annihilator => {
            no_csv(ctx)?;
            let a = annihilator(&ctx.spinor()?)?;
            if json_out {
                return Ok((json_text(&json!({"ambient": "V", "dim": a.dim(), "basis": basis_value(&a)})), true));
            }
            Ok((rows_text(&a), true))
        }
        Cmd::Span { of, half } => {
            no_csv(ctx)?;
            let (sub, half) = match of {
                SpanOf::Kernel => {
                    let half = match half.as_str() {
                        "plus" | "+" | "S+" => Half::Plus,
                        "minus" | "-" | "S-" => Half::Minus,
                        other => return Err(usage(format!("unknown half {other:?}"))),
                    };
                    (annihilator_kernel(&ctx.v_subspace()?, half)?, half)
                }
                SpanOf::Pi4 => {
                    let s = ctx.spinor()?;
                    let h = s.half().opposite();
                    (span_pi4(&PureSpinorWitness::from_spinor(s)?)?, h)
                }
            };
            if json_out {
                return Ok((json_text(&json!({"half": half, "dim": sub.dim(), "basis": basis_value(&sub)})), true));
            }
            Ok((rows_text(&sub), true))
        }
        Cmd::Rho => {
            no_csv(ctx)?;
            let k = ctx.section()?;
            let b: Vec<HalfSpinor> = k.basis_rows().iter().map(|r| HalfSpinor::new(Half::Minus, r.to_vec())).collect();
            let form = rho_form(&k)?;
            let value = if b.len() == 2 { Some(rho(&b[0], &b[1])?.value) } else { None };
            if json_out {
                return Ok((
                    json_text(&json!({
                        "k": k.dim(),
                        "value": value.as_ref().map(scalar_value),
                        "rank": form.rank(),
                    })),
                    true,
                ));
            }
            let mut s = String::new();
            if let Some(v) = value {
                s.push_str(&format!("rho {}\n", v.to_text()));
            }
            s.push_str(&format!("rank {}\n", form.rank()));
            Ok((s, true))
        }
        Cmd::Classify => {
            no_csv(ctx)?;
            let report = classify(&ctx.section()?, &ctx.scan_config())?;
            if json_out {
                return Ok((json_text(&serde_json::to_value(&report).expect("json")), true));
            }
            Ok((format!("{}\n", report.label.as_str()), true))
        }
        Cmd::MakeSection { kind, k, out } => {
            no_csv(ctx)?;
            let kind = match (kind, k) {
                (KindArg::Special, _) => SectionKind::Special,
                (KindArg::VerySpecial, _) => SectionKind::VerySpecial,
                (KindArg::Generic, Some(k)) => SectionKind::Generic(*k),
                (KindArg::Generic, None) => return Err(usage("--kind generic needs --k")),
            };
            let (sec, report) = make_section(kind, ctx.field, ctx.opts.seed, &ctx.scan_config())?;
            let mut scene = Scene::new(ctx.field, ctx.opts.seed);
            scene.push("K", SceneObject::Section(sec.k));
            let text = emit_scene(&scene);
            match out {
                Some(path) => {
                    fs::write(path, &text).map_err(|e| usage(format!("{path}: {e}")))?;
                    Ok((format!("{}\n", report.label.as_str()), true))
                }
                None => Ok((text, true)),
            }
        }
        Cmd::F4 { scan } => {
            no_csv(ctx)?;
            let k = ctx.section()?;
            let points = if *scan { f4_scan(&k)? } else { f4_points_linear(&k)? };
            if json_out {
                let pts: Vec<Value> = points.iter().map(|w| json!(coords_value(w.spinor.coords()))).collect();
                return Ok((json_text(&json!({"count": points.len(), "points": pts})), true));
            }
            let mut s = format!("{}\n", points.len());
            for w in &points {
                s.push_str(&coords_text(w.spinor.coords()));
                s.push('\n');
            }
            Ok((s, true))
        }
        Cmd::Count { k, side } => {
            let m = ctx.opts.ext_degree.unwrap_or(1);
            let side = match side {
                SideArg::X => Side::X,
                SideArg::Dual => Side::Dual,
            };
            let kk = match (k, ctx.opts.scene.is_some() || !ctx.opts.spinor.is_empty()) {
                (_, true) => ctx.section()?,
                (Some(0), false) => Subspace::zero(ctx.field, DIM_HALF),
                (Some(k), false) => make_section(SectionKind::Generic(*k), ctx.field, ctx.opts.seed, &ctx.scan_config())?.0.k,
                (None, false) => return Err(usage("give --k or a section")),
            };
            if let Some(k) = k {
                if *k != kk.dim() {
                    return Err(usage(format!("--k {k} disagrees with the section dimension {}", kk.dim())));
                }
            }
            match ctx.opts.format {
                Format::Text => Ok((format!("{}\n", count_section_points(&kk, side, m, ctx.budget())?), true)),
                Format::Json => Ok((json_text(&serde_json::to_value(count_report(&kk, m, ctx.budget())?).expect("json")), true)),
                Format::Csv => Ok((to_csv(&[count_report(&kk, m, ctx.budget())?]), true)),
            }
        }
        Cmd::Verify { suite } => verify(suite, ctx),
        Cmd::Report { k_max } => {
            let m = ctx.opts.ext_degree.unwrap_or(1);
            let mut reports = Vec::new();
            for k in 0..=*k_max {
                let kk = if k == 0 {
                    Subspace::zero(ctx.field, DIM_HALF)
                } else {
                    make_section(SectionKind::Generic(k), ctx.field, ctx.opts.seed.wrapping_add(k as u64), &ctx.scan_config())?.0.k
                };
                reports.push(if k == 0 { count_report(&kk, m, ctx.budget())? } else { verify_blowup_identity(&kk, m, ctx.budget())? });
            }
            let ok = reports.iter().all(|r| r.pass);
            match ctx.opts.format {
                Format::Json => Ok((json_text(&serde_json::to_value(&reports).expect("json")), ok)),
                _ => Ok((to_csv(&reports), ok)),
            }
        }
    }
}

fn suite_text(r: &SuiteResult) -> String {
    let mut s = format!(
        "{} {}: {} checks, {} failures\n",
        if r.passed() { "PASS" } else { "FAIL" },
        r.name,
        r.checks,
        r.failures.len()
    );
    for f in r.failures.iter().take(10) {
        s.push_str(&format!("  {f}\n"));
    }
    s
}

fn verify(suite: &str, ctx: &Ctx) -> Out {
    no_csv(ctx)?;
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut results = Vec::new();
    for name in names {
        if !SUITES.contains(&name) {
            return Err(usage(format!("unknown suite {name:?} (known: {}, all)", SUITES.join(", "))));
        }
        let r = if name == "k6" {
            k6(ctx.field, 3, ctx.opts.budget.unwrap_or(1 << 22), ctx.opts.seed).0
        } else {
            run_suite(name, ctx.field, ctx.opts.seed)?
        };
        results.push(r);
    }
    let ok = results.iter().all(|r| r.passed());
    if ctx.opts.format == Format::Json {
        return Ok((json_text(&serde_json::to_value(&results).expect("json")), ok));
    }
    Ok((results.iter().map(suite_text).collect(), ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.opts.workers {
        if n == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(2);
        }
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let result = Ctx::new(cli.opts).and_then(|ctx| run(&cli.cmd, &ctx));
    match result {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

//! Named invariant suites over seeded random samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::count::{predicted_count, reduced_k6_section, verify_blowup_identity, count_section_points, Side, DEFAULT_COUNT_BUDGET};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::line_complex::{gamma, is_totally_singular, polarization_span, r_kappa_form, rho};
use crate::linalg::Subspace;
use crate::linear_spaces::{f4_points_linear, f4_scan, pi4_meet_quadric};
use crate::pure::{
    annihilator, is_pure, mu, phi_v, random_impure, random_isotropic_vector, random_pure, PureSpinorWitness,
};
use crate::section::{make_section, smoothness_scan, q_kappa_k, ScanConfig, SectionKind};
use crate::spinor::{clifford_mul, q_v, Half, HalfSpinor, DIM_HALF};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult {
            name: name.into(),
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const SUITES: [&str; 9] = [
    "motive", "blowup", "purity", "gamma", "line-complex", "corank", "phi", "dichotomy", "k6",
];

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Pure spinors have `μ = 0` and 5-dimensional annihilators, impure ones
/// `μ ≠ 0`; maximal isotropics of equal family meet in odd dimension.
pub fn purity(field: FieldSpec, n: usize, seed: u64) -> SuiteResult {
    let mut r = SuiteResult::new("purity");
    let mut g = rng(seed);
    for i in 0..n {
        let half = if i % 2 == 0 { Half::Plus } else { Half::Minus };
        let w = random_pure(field, half, &mut g);
        let dim = annihilator(&w.spinor).map(|a| a.dim()).unwrap_or(0);
        r.check(mu(&w.spinor).is_zero() && dim == 5, || format!("pure sample {i}: annihilator dim {dim}"));
        let s = random_impure(field, half, &mut g);
        r.check(!mu(&s).is_zero(), || format!("impure sample {i} has μ = 0"));
        let (h1, h2) = (
            if g.gen() { Half::Plus } else { Half::Minus },
            if g.gen() { Half::Plus } else { Half::Minus },
        );
        let (a, b) = (random_pure(field, h1, &mut g), random_pure(field, h2, &mut g));
        let meet = a.annihilator.intersect(&b.annihilator).map(|m| m.dim()).unwrap_or(usize::MAX);
        r.check((h1 == h2) == (meet % 2 == 1), || format!("parity pair {i}: families {h1}/{h2}, meet {meet}"));
    }
    r
}

/// `γ(κ)` is isotropic and kills `κ`; `μ` is quadratic and its polar form
/// is bilinear.
pub fn gamma_suite(field: FieldSpec, n: usize, seed: u64) -> SuiteResult {
    let mut r = SuiteResult::new("gamma");
    let mut g = rng(seed);
    for i in 0..n {
        let kappa = random_impure(field, Half::Minus, &mut g);
        match gamma(&kappa) {
            Ok(v) => {
                r.check(q_v(&v).is_zero(), || format!("sample {i}: q(γ) ≠ 0"));
                r.check(clifford_mul(&v, &kappa).is_zero(), || format!("sample {i}: γ·κ ≠ 0"));
            }
            Err(e) => r.check(false, || format!("sample {i}: {e}")),
        }
        // homogeneity of degree 2 and bilinearity of the polarization
        let c = field.random_nonzero(&mut g);
        let scaled = mu(&kappa.scale(&c));
        r.check(scaled == mu(&kappa).scale(&(&c * &c)), || format!("sample {i}: μ(cκ) ≠ c²μ(κ)"));
        let other = HalfSpinor::random(field, Half::Minus, &mut g);
        let third = HalfSpinor::random(field, Half::Minus, &mut g);
        let lhs = crate::pure::mu_polar(&kappa.add(&other), &third);
        let rhs = crate::pure::mu_polar(&kappa, &third).add(&crate::pure::mu_polar(&other, &third));
        r.check(lhs == rhs, || format!("sample {i}: polarization not additive"));
    }
    r
}

fn random_k<R: Rng + ?Sized>(field: FieldSpec, dim: usize, rng: &mut R) -> Subspace {
    let rows = (0..dim).map(|_| HalfSpinor::random(field, Half::Minus, rng).coords().to_vec()).collect();
    Subspace::span(field, DIM_HALF, rows)
}

/// On smooth codimension-2 sections: `ρ = 0` ⟺ `F₄` nonempty ⟺ the span
/// of the polarization vectors is a totally singular 3-space. Also the
/// determinant-square law and vanishing on secants through `X^∨`.
pub fn line_complex(field: FieldSpec, random: usize, special: usize, scaling: usize, secant: usize, seed: u64) -> SuiteResult {
    let mut r = SuiteResult::new("line-complex");
    let mut g = rng(seed);
    let cfg = ScanConfig::default();
    let mut sections = Vec::new();
    while sections.len() < random {
        let k = random_k(field, 2, &mut g);
        if k.dim() == 2 && !smoothness_scan(&k, &cfg).map(|s| s.is_singular()).unwrap_or(true) {
            sections.push(k);
        }
    }
    for i in 0..special {
        match make_section(SectionKind::Special, field, seed.wrapping_add(1000 + i as u64), &cfg) {
            Ok((s, _)) => sections.push(s.k),
            Err(e) => r.check(false, || format!("special construction {i}: {e}")),
        }
    }
    let small = matches!(field, FieldSpec::Prime { p } if p <= 3);
    for (i, k) in sections.iter().enumerate() {
        let b: Vec<HalfSpinor> = k.basis_rows().iter().map(|x| HalfSpinor::new(Half::Minus, x.to_vec())).collect();
        let rho_zero = rho(&b[0], &b[1]).map(|v| v.vanishes()).unwrap_or(false);
        let f4 = if small { f4_scan(k).map(|v| v.len()) } else { f4_points_linear(k).map(|v| v.len()) };
        let f4_nonempty = f4.map(|n| n > 0).unwrap_or(false);
        let span = polarization_span(k).expect("section space");
        let isotropic3 = span.dim() == 3 && is_totally_singular(&span);
        r.check(rho_zero == f4_nonempty && f4_nonempty == isotropic3, || {
            format!("section {i}: ρ = 0 {rho_zero}, F₄ nonempty {f4_nonempty}, isotropic span {isotropic3}")
        });
        if i >= random {
            r.check(rho_zero, || format!("constructed special section {i} has ρ ≠ 0"));
        }
    }
    for i in 0..scaling {
        let (k1, k2) = (HalfSpinor::random(field, Half::Minus, &mut g), HalfSpinor::random(field, Half::Minus, &mut g));
        let (a, b, c, d) = (field.random(&mut g), field.random(&mut g), field.random(&mut g), field.random(&mut g));
        let x = k1.scale(&a).add(&k2.scale(&b));
        let y = k1.scale(&c).add(&k2.scale(&d));
        let det = &(&a * &d) - &(&b * &c);
        let lhs = rho(&x, &y).map(|v| v.value);
        let rhs = rho(&k1, &k2).map(|v| &(&det * &det) * &v.value);
        r.check(lhs.is_ok() && lhs == rhs, || format!("scaling sample {i}"));
    }
    for i in 0..secant {
        let k1 = random_pure(field, Half::Minus, &mut g).spinor;
        let k2 = HalfSpinor::random(field, Half::Minus, &mut g);
        r.check(rho(&k1, &k2).map(|v| v.vanishes()).unwrap_or(false), || format!("secant sample {i}"));
    }
    r
}

/// `corank Q_{κ,K} = corank R_{κ,K}` on smooth sections with `k ∈ {3,4,5}`.
pub fn corank(field: FieldSpec, n: usize, seed: u64) -> SuiteResult {
    let mut r = SuiteResult::new("corank");
    let mut g = rng(seed);
    let cfg = ScanConfig::default();
    for i in 0..n {
        let k = 3 + i % 3;
        let (sec, _) = match make_section(SectionKind::Generic(k), field, seed.wrapping_add(i as u64), &cfg) {
            Ok(x) => x,
            Err(e) => {
                r.check(false, || format!("sample {i}: {e}"));
                continue;
            }
        };
        let kappa = loop {
            let s = HalfSpinor::new(Half::Minus, sec.k.random_element(&mut g));
            if !s.is_zero() {
                break s;
            }
        };
        let q = q_kappa_k(&kappa, &sec.k).map(|q| q.corank);
        let rk = r_kappa_form(&kappa, &sec.k).map(|(_, c)| c);
        r.check(q.is_ok() && q == rk, || format!("sample {i} (k = {k}): Q corank {q:?}, R corank {rk:?}"));
    }
    r
}

/// The ten coordinates of `μ` restricted to `S₈,v` span one quadric `Φ_v`,
/// which is nondegenerate.
pub fn phi(field: FieldSpec, n: usize, seed: u64) -> SuiteResult {
    let mut r = SuiteResult::new("phi");
    let mut g = rng(seed);
    for i in 0..n {
        let v = random_isotropic_vector(field, &mut g);
        for half in [Half::Plus, Half::Minus] {
            match phi_v(&v, half) {
                Ok(s8) => {
                    let corank = s8.phi.as_ref().map(|f| f.corank());
                    r.check(s8.restricted_rank == 1 && corank.unwrap_or(0) == 0, || {
                        format!("sample {i} ({half}): rank {}, corank {corank:?}", s8.restricted_rank)
                    });
                }
                Err(e) => r.check(false, || format!("sample {i}: {e}")),
            }
        }
    }
    r
}

/// `Π⁴_τ ∩ Q_v` is a 3-space exactly when `v ∈ U₅,₋`, and a point otherwise.
pub fn dichotomy(field: FieldSpec, n: usize, seed: u64) -> SuiteResult {
    let mut r = SuiteResult::new("dichotomy");
    let mut g = rng(seed);
    for i in 0..n {
        let tau = random_pure(field, Half::Minus, &mut g);
        // half of the samples take v inside U₅,₋
        let v = if i % 2 == 0 {
            loop {
                let v = crate::spinor::VecV::new(tau.annihilator.random_element(&mut g));
                if !v.is_zero() {
                    break v;
                }
            }
        } else {
            random_isotropic_vector(field, &mut g)
        };
        let inside = tau.annihilator.contains(v.coords());
        let d = pi4_meet_quadric(&tau, &v);
        r.check(d == Ok(if inside { 4 } else { 1 }), || format!("sample {i}: {d:?}, v ∈ U₅ {inside}"));
    }
    r
}

/// `#X(F_q)` and `#X_K(F_q)` for smooth random sections against the
/// predicted counts.
pub fn motive(field: FieldSpec, per_k: usize, seed: u64) -> SuiteResult {
    let mut r = SuiteResult::new("motive");
    let FieldSpec::Prime { p } = field else {
        r.check(false, || "motive counts need a finite field".into());
        return r;
    };
    let cfg = ScanConfig::default();
    let full = count_section_points(&Subspace::zero(field, DIM_HALF), Side::X, 1, DEFAULT_COUNT_BUDGET);
    let expected = predicted_count(0, p as u64).ok();
    r.check(full.as_ref().ok().map(|&n| n as u128) == expected, || format!("k = 0: {full:?} vs {expected:?}"));
    for k in 1..=5 {
        for j in 0..per_k {
            let s = seed.wrapping_add((k * 1000 + j) as u64);
            let out = make_section(SectionKind::Generic(k), field, s, &cfg)
                .and_then(|(sec, _)| verify_blowup_identity(&sec.k, 1, DEFAULT_COUNT_BUDGET));
            match out {
                Ok(rep) => r.check(rep.pass, || format!("k = {k}, seed {s}: {rep:?}")),
                Err(Error::BudgetExceeded(_)) => {}
                Err(e) => r.check(false, || format!("k = {k}, seed {s}: {e}")),
            }
        }
    }
    r
}

/// `#X_K = 1 + q + q³ + q⁴ + q²·#X^∨_K` on codimension-6 sections with
/// reduced dual scheme. Experimental: a failure is a finding.
pub fn k6(field: FieldSpec, n: usize, budget: u128, seed: u64) -> (SuiteResult, Vec<Subspace>) {
    let mut r = SuiteResult::new("k6");
    let mut g = rng(seed);
    let mut counterexamples = Vec::new();
    for i in 0..n {
        match reduced_k6_section(field, budget, 100, &mut g) {
            Ok((k, rep)) => {
                if !rep.pass {
                    counterexamples.push(k);
                }
                r.check(rep.pass, || format!("sample {i}: {rep:?}"));
            }
            Err(e) => r.check(false, || format!("sample {i}: {e}")),
        }
    }
    (r, counterexamples)
}

/// Runs a suite by name at its default size.
pub fn run_suite(name: &str, field: FieldSpec, seed: u64) -> Result<SuiteResult> {
    Ok(match name {
        "motive" | "blowup" => {
            let mut r = motive(field, 4, seed);
            r.name = name.into();
            r
        }
        "purity" => purity(field, 200, seed),
        "gamma" => gamma_suite(field, 200, seed),
        "line-complex" => {
            field.require_odd_characteristic()?;
            line_complex(field, 20, 4, 200, 100, seed)
        }
        "corank" => {
            field.require_odd_characteristic()?;
            corank(field, 15, seed)
        }
        "phi" => phi(field, 50, seed),
        "dichotomy" => dichotomy(field, 200, seed),
        "k6" => k6(field, 3, 1 << 22, seed).0,
        other => return Err(Error::Usage(format!("unknown suite {other:?} (known: {})", SUITES.join(", ")))),
    })
}

/// Witness for a pure spinor of `S₋` given by coordinates.
pub fn pure_witness(coords: Vec<crate::field::Scalar>) -> Result<PureSpinorWitness> {
    let s = HalfSpinor::new(Half::Minus, coords);
    if !is_pure(&s) {
        return Err(Error::NotPure);
    }
    PureSpinorWitness::from_spinor(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let f5 = FieldSpec::prime(5).unwrap();
        for name in ["purity", "gamma", "phi", "dichotomy"] {
            let r = run_suite(name, f5, 1).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        assert!(run_suite("nope", f5, 1).is_err());
        assert!(run_suite("corank", FieldSpec::prime(2).unwrap(), 1).is_err());
    }
}

//! Linear sections `X_K = X ∩ P(K⊥)` for `K ⊂ S₋`: smoothness scans,
//! classification, the quadrics `Q_{κ,K}` and constructors of special and
//! very special sections.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, GaloisField, PrimeField, Scalar, SmallField};
use crate::line_complex::{gamma, is_totally_singular, polarization_span, rho, rho_form};
use crate::linalg::{Subspace, SymBilinearForm};
use crate::linear_spaces::{f4_points_linear, span_pi4};
use crate::pure::{annihilator_kernel, is_pure, is_pure_small, phi_v, random_isotropic, random_pure, PureSpinorWitness};
use crate::scan::{basis_residues, embed_rows, find_projective, projective_size, Point};
use crate::spinor::{pairing_perp, Half, HalfSpinor, DIM_HALF};

/// Primes used to reduce sections defined over `Q`.
pub const DEFAULT_REDUCTION_PRIMES: [u32; 3] = [5, 7, 11];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    /// Largest extension degree `m` scanned.
    pub max_degree: u32,
    /// Largest number of projective points scanned per degree.
    pub budget: u128,
    pub reduction_primes: Vec<u32>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            max_degree: 6,
            budget: 1 << 21,
            reduction_primes: DEFAULT_REDUCTION_PRIMES.to_vec(),
        }
    }
}

/// `K ⊂ S₋` together with `K⊥ ⊂ S₊`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionK {
    pub k: Subspace,
    pub kperp: Subspace,
}

impl SectionK {
    pub fn new(k: Subspace) -> Result<Self> {
        if k.ambient() != DIM_HALF {
            return Err(Error::AmbientMismatch {
                left: k.ambient(),
                right: DIM_HALF,
            });
        }
        if k.dim() > 8 {
            return Err(Error::CodimensionOutOfRange(k.dim()));
        }
        let kperp = pairing_perp(&k, Half::Minus);
        Ok(SectionK { k, kperp })
    }

    pub fn from_spinors(field: FieldSpec, spinors: &[HalfSpinor]) -> Result<Self> {
        for s in spinors {
            s.expect_half(Half::Minus)?;
        }
        Self::new(Subspace::span(
            field,
            DIM_HALF,
            spinors.iter().map(|s| s.coords().to_vec()).collect(),
        ))
    }

    pub fn field(&self) -> FieldSpec {
        self.k.field()
    }

    pub fn dim(&self) -> usize {
        self.k.dim()
    }

    pub fn basis_spinors(&self) -> Vec<HalfSpinor> {
        self.k
            .basis_rows()
            .iter()
            .map(|r| HalfSpinor::new(Half::Minus, r.to_vec()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Certificate {
    /// A point of `X^∨ ∩ P(K)` over `F_{p^degree}`, in element codes.
    CertifiedSingular { prime: u32, degree: u32, point: Vec<u32> },
    /// No such point over `F_{p^m}` for the scanned degrees.
    NoPointUpToDegree {
        prime: u32,
        max_degree: u32,
        scanned: Vec<u32>,
        skipped: Vec<u32>,
    },
}

impl Certificate {
    pub fn is_singular(&self) -> bool {
        matches!(self, Certificate::CertifiedSingular { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub certificate: Certificate,
    /// Per-prime certificates for sections over `Q`.
    pub reductions: Vec<Certificate>,
}

impl SmoothnessReport {
    /// Over `Q` a point modulo one prime proves nothing, so singularity is
    /// only asserted when the exact check or every reduction finds a point.
    pub fn is_singular(&self) -> bool {
        self.certificate.is_singular()
    }
}

fn scan_degree<F: SmallField>(field: &F, rows: &[Point]) -> Option<Point> {
    let rows = embed_rows(field, rows);
    find_projective(field, &rows, DIM_HALF, |p| is_pure_small(field, Half::Minus, p)).map(|(_, p)| p)
}

fn scan_prime(rows: &[Point], p: u32, cfg: &ScanConfig) -> Result<Certificate> {
    let mut scanned = Vec::new();
    let mut skipped = Vec::new();
    for m in 1..=cfg.max_degree {
        let order = (p as u64).checked_pow(m);
        let size = order.and_then(|o| projective_size(o, rows.len()));
        if size.is_none_or(|s| s > cfg.budget) {
            skipped.push(m);
            continue;
        }
        let hit = if m == 1 {
            scan_degree(&PrimeField { p }, rows)
        } else {
            scan_degree(&GaloisField::new(p, m)?, rows)
        };
        if let Some(point) = hit {
            return Ok(Certificate::CertifiedSingular {
                prime: p,
                degree: m,
                point: point.to_vec(),
            });
        }
        scanned.push(m);
    }
    Ok(Certificate::NoPointUpToDegree {
        prime: p,
        max_degree: cfg.max_degree,
        scanned,
        skipped,
    })
}

fn reduce_subspace(k: &Subspace, p: u32) -> Option<Subspace> {
    let field = FieldSpec::prime(p).ok()?;
    let rows = k
        .basis_rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| x.reduce_mod(p).map(|v| field.from_i64(v as i64)))
                .collect::<Option<Vec<Scalar>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    let reduced = Subspace::span(field, DIM_HALF, rows);
    (reduced.dim() == k.dim()).then_some(reduced)
}

/// Searches `X^∨ ∩ P(K)` over `F_{q^m}`, `m = 1..M`, skipping degrees whose
/// point count exceeds the budget. Over `Q` the exact test is used for a
/// single spinor, and otherwise reductions modulo the configured primes.
pub fn smoothness_scan(k: &Subspace, cfg: &ScanConfig) -> Result<SmoothnessReport> {
    if k.ambient() != DIM_HALF {
        return Err(Error::AmbientMismatch {
            left: k.ambient(),
            right: DIM_HALF,
        });
    }
    match k.field() {
        FieldSpec::Prime { p } => Ok(SmoothnessReport {
            certificate: scan_prime(&basis_residues(k)?, p, cfg)?,
            reductions: Vec::new(),
        }),
        FieldSpec::Rationals => {
            let mut reductions = Vec::new();
            for &p in &cfg.reduction_primes {
                if let Some(red) = reduce_subspace(k, p) {
                    reductions.push(scan_prime(&basis_residues(&red)?, p, cfg)?);
                }
            }
            let exact_point = k.dim() == 1 && is_pure(&HalfSpinor::new(Half::Minus, k.basis_vec(0).to_vec()));
            let certificate = if exact_point {
                Certificate::CertifiedSingular {
                    prime: 0,
                    degree: 1,
                    point: Vec::new(),
                }
            } else if let Some(clean) = reductions.iter().find(|c| !c.is_singular()) {
                clean.clone()
            } else if let Some(first) = reductions.first().filter(|_| k.dim() > 1) {
                first.clone()
            } else {
                Certificate::NoPointUpToDegree {
                    prime: 0,
                    max_degree: 0,
                    scanned: Vec::new(),
                    skipped: Vec::new(),
                }
            };
            Ok(SmoothnessReport {
                certificate,
                reductions,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectionLabel {
    SingularHyperplane,
    SmoothHyperplane,
    Special,
    Nonspecial,
    VerySpecial,
    Generic,
    /// A singular section of codimension at least 2.
    Singular,
}

impl SectionLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SectionLabel::SingularHyperplane => "singular-hyperplane",
            SectionLabel::SmoothHyperplane => "smooth-hyperplane",
            SectionLabel::Special => "special",
            SectionLabel::Nonspecial => "nonspecial",
            SectionLabel::VerySpecial => "very-special",
            SectionLabel::Generic => "generic",
            SectionLabel::Singular => "singular",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoData {
    /// `ρ` on the echelon basis, for `k = 2`.
    pub value: Option<String>,
    pub rank: usize,
    pub corank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub k: usize,
    pub smoothness: SmoothnessReport,
    pub label: SectionLabel,
    pub rho_data: Option<RhoData>,
    /// Dimension of the span of `γ` on `P(K)`, and whether `Q` contains it.
    pub gamma_span_dim: Option<usize>,
    pub gamma_span_in_quadric: Option<bool>,
    pub f4_count: Option<usize>,
}

/// Classifies `X_K`: hyperplane sections by smoothness, codimension 2 by
/// `ρ` (by the span of `γ` in characteristic 2), codimension 3 by whether
/// `γ(P(K))` spans a 4-space inside `Q`.
pub fn classify(k: &Subspace, cfg: &ScanConfig) -> Result<ClassificationReport> {
    let dim = k.dim();
    if dim == 0 || dim > 8 {
        return Err(Error::CodimensionOutOfRange(dim));
    }
    let field = k.field();
    let smoothness = smoothness_scan(k, cfg)?;
    let f4_count = match field {
        FieldSpec::Prime { .. } => Some(f4_points_linear(k)?.len()),
        FieldSpec::Rationals => None,
    };
    let mut report = ClassificationReport {
        k: dim,
        smoothness,
        label: SectionLabel::Generic,
        rho_data: None,
        gamma_span_dim: None,
        gamma_span_in_quadric: None,
        f4_count,
    };
    if dim <= 5 && report.smoothness.is_singular() {
        report.label = if dim == 1 {
            SectionLabel::SingularHyperplane
        } else {
            SectionLabel::Singular
        };
        return Ok(report);
    }
    if dim == 1 {
        report.label = SectionLabel::SmoothHyperplane;
        return Ok(report);
    }
    if dim <= 3 {
        let span = polarization_span(k)?;
        report.gamma_span_dim = Some(span.dim());
        report.gamma_span_in_quadric = Some(is_totally_singular(&span));
    }
    let odd = field.characteristic() != 2;
    if odd {
        if let Ok(form) = rho_form(k) {
            let value = (dim == 2).then(|| {
                let b = SectionK::new(k.clone()).expect("valid section").basis_spinors();
                rho(&b[0], &b[1]).expect("odd characteristic").value.to_text()
            });
            report.rho_data = Some(RhoData {
                value,
                rank: form.rank(),
                corank: form.gram.corank(),
            });
        }
    }
    let in_quadric = report.gamma_span_in_quadric.unwrap_or(false);
    report.label = match dim {
        2 => {
            let special = match &report.rho_data {
                Some(r) => r.rank == 0,
                None => in_quadric,
            };
            if special {
                SectionLabel::Special
            } else {
                SectionLabel::Nonspecial
            }
        }
        3 if in_quadric && report.gamma_span_dim == Some(5) => SectionLabel::VerySpecial,
        _ => SectionLabel::Generic,
    };
    Ok(report)
}

/// `Q_{κ,K}`: the restriction of `Φ_v`, `v = γ(κ)`, to `S₈,v ∩ K⊥`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricRestriction {
    pub form: SymBilinearForm,
    pub ambient_dim: usize,
    pub corank: usize,
}

pub fn q_kappa_k(kappa: &HalfSpinor, k: &Subspace) -> Result<QuadricRestriction> {
    let field = k.field();
    field.require_odd_characteristic()?;
    kappa.expect_half(Half::Minus)?;
    if !k.contains(kappa.coords()) {
        return Err(Error::NotInSubspace);
    }
    let v = gamma(kappa)?;
    let s8 = phi_v(&v, Half::Plus)?;
    let phi = s8.phi.as_ref().ok_or(Error::CharacteristicTwo)?;
    let meet = s8.space.intersect(&pairing_perp(k, Half::Minus))?;
    let expected = 9 - k.dim();
    if meet.dim() != expected {
        return Err(Error::NonTransversal {
            expected,
            found: meet.dim(),
        });
    }
    let coords: Vec<Vec<Scalar>> = meet
        .basis_rows()
        .iter()
        .map(|r| s8.space.coordinates(r).expect("inside S8"))
        .collect();
    let sub = Subspace::span(field, s8.space.dim(), coords);
    let (form, corank) = phi.restrict(&sub)?;
    Ok(QuadricRestriction {
        form,
        ambient_dim: expected,
        corank,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "k")]
pub enum SectionKind {
    Special,
    VerySpecial,
    Generic(usize),
}

impl SectionKind {
    pub fn expected_label(self) -> SectionLabel {
        match self {
            SectionKind::Special => SectionLabel::Special,
            SectionKind::VerySpecial => SectionLabel::VerySpecial,
            SectionKind::Generic(1) => SectionLabel::SmoothHyperplane,
            SectionKind::Generic(2) => SectionLabel::Nonspecial,
            SectionKind::Generic(_) => SectionLabel::Generic,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            SectionKind::Special => 2,
            SectionKind::VerySpecial => 3,
            SectionKind::Generic(k) => k,
        }
    }
}

pub const RETRY_BUDGET: usize = 200;

fn random_subspace_of<R: Rng + ?Sized>(ambient: &Subspace, dim: usize, rng: &mut R) -> Subspace {
    let rows = (0..dim).map(|_| ambient.random_element(rng)).collect();
    Subspace::span(ambient.field(), ambient.ambient(), rows)
}

/// `W_{U₃} ⊂ S₊`: the span of the 4-spaces `Π⁴_τ` over the points `τ` of
/// the line `L⁻_{U₃}`, an 8-dimensional space.
pub fn w_u3(u3: &Subspace) -> Result<Subspace> {
    let line = annihilator_kernel(u3, Half::Minus)?;
    let field = u3.field();
    let (a, b) = (line.basis_vec(0).to_vec(), line.basis_vec(1).to_vec());
    let c = crate::linalg::add_vec(&a, &b);
    let mut rows = Vec::new();
    for t in [a, b, c] {
        let tau = PureSpinorWitness::from_spinor(HalfSpinor::new(Half::Minus, t))?;
        rows.extend(span_pi4(&tau)?.basis_rows().iter().map(|r| r.to_vec()));
    }
    let w = Subspace::span(field, DIM_HALF, rows);
    if w.dim() != 8 {
        return Err(Error::WrongDimension {
            expected: 8,
            found: w.dim(),
        });
    }
    Ok(w)
}

fn draw_until<R, G>(kind: SectionKind, cfg: &ScanConfig, rng: &mut R, mut draw: G) -> Result<(Subspace, ClassificationReport)>
where
    R: Rng + ?Sized,
    G: FnMut(&mut R) -> Result<Subspace>,
{
    for _ in 0..RETRY_BUDGET {
        let k = draw(rng)?;
        if k.dim() != kind.dim() {
            continue;
        }
        let report = classify(&k, cfg)?;
        if report.label == kind.expected_label() {
            return Ok((k, report));
        }
    }
    Err(Error::RetryBudgetExhausted(RETRY_BUDGET))
}

/// A special codimension-2 section through a given isotropic `U₃`.
pub fn make_special_from<R: Rng + ?Sized>(u3: &Subspace, cfg: &ScanConfig, rng: &mut R) -> Result<(SectionK, ClassificationReport)> {
    let room = pairing_perp(&w_u3(u3)?, Half::Plus);
    let (k, report) = draw_until(SectionKind::Special, cfg, rng, |r| Ok(random_subspace_of(&room, 2, r)))?;
    Ok((SectionK::new(k)?, report))
}

/// A section of the requested kind, drawn from a generator seeded by
/// `seed`, together with its classification.
pub fn make_section(kind: SectionKind, field: FieldSpec, seed: u64, cfg: &ScanConfig) -> Result<(SectionK, ClassificationReport)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        SectionKind::Special => {
            let u3 = random_isotropic(field, 3, Half::Plus, &mut rng);
            make_special_from(&u3, cfg, &mut rng)
        }
        SectionKind::VerySpecial => {
            let (k, report) = draw_until(kind, cfg, &mut rng, |r| {
                let tau = random_pure(field, Half::Minus, r);
                let room = pairing_perp(&span_pi4(&tau)?, Half::Plus);
                Ok(random_subspace_of(&room, 3, r))
            })?;
            Ok((SectionK::new(k)?, report))
        }
        SectionKind::Generic(dim) => {
            if dim == 0 || dim > 8 {
                return Err(Error::CodimensionOutOfRange(dim));
            }
            let full = Subspace::full(field, DIM_HALF);
            let (k, report) = draw_until(kind, cfg, &mut rng, |r| Ok(random_subspace_of(&full, dim, r)))?;
            Ok((SectionK::new(k)?, report))
        }
    }
}

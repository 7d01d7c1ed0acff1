//! Point counts of `X_K` and `X^∨_K` over finite fields, the counts
//! predicted by the Lefschetz decomposition, and two cross-check identities.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, GaloisField, PrimeField, SmallField};
use crate::linalg::Subspace;
use crate::pure::{is_pure_small, random_pure};
use crate::scan::{basis_residues, count_projective, embed_rows, pn_count, projective_size, Point};
use crate::spinor::{pairing_perp, Half, HalfSpinor, DIM_HALF, DIM_V};

/// Multiplicities `n_i` of `L^i` in the motive of a smooth `X_K`, by
/// codimension. The last row is the `k = 6` profile with all twelve dual
/// points rational.
const MOTIVE_ROWS: [&[u64]; 7] = [
    &[1, 1, 1, 2, 2, 2, 2, 2, 1, 1, 1],
    &[1, 1, 1, 2, 2, 2, 2, 1, 1, 1],
    &[1, 1, 1, 2, 2, 2, 1, 1, 1],
    &[1, 1, 1, 2, 2, 1, 1, 1],
    &[1, 1, 1, 2, 1, 1, 1],
    &[1, 1, 1, 1, 1, 1],
    &[1, 1, 12, 1, 1],
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotiveProfile {
    pub k: usize,
    pub multiplicities: Vec<u64>,
}

impl MotiveProfile {
    pub fn for_codim(k: usize) -> Result<Self> {
        let row = MOTIVE_ROWS.get(k).ok_or(Error::CodimensionOutOfRange(k))?;
        Ok(MotiveProfile {
            k,
            multiplicities: row.to_vec(),
        })
    }

    /// `Σ nᵢ qⁱ`.
    pub fn count_at(&self, q: u64) -> u128 {
        self.multiplicities
            .iter()
            .rev()
            .fold(0u128, |acc, &n| acc * q as u128 + n as u128)
    }
}

/// Predicted `#X_K(F_q)` for a smooth section of codimension `k ≤ 5`.
pub fn predicted_count(k: usize, q: u64) -> Result<u128> {
    if k > 5 {
        return Err(Error::CodimensionOutOfRange(k));
    }
    Ok(MotiveProfile::for_codim(k)?.count_at(q))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `X_K = X ∩ P(K⊥)`.
    X,
    /// `X^∨_K = X^∨ ∩ P(K)`.
    Dual,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::X => "x",
            Side::Dual => "dual",
        })
    }
}

pub const DEFAULT_COUNT_BUDGET: u128 = 50_000_000;

fn prime_of(sub: &Subspace) -> Result<u32> {
    match sub.field() {
        FieldSpec::Prime { p } => Ok(p),
        FieldSpec::Rationals => Err(Error::UnsupportedField(0)),
    }
}

fn check_budget(p: u32, m: u32, d: usize, budget: u128) -> Result<()> {
    let size = (p as u64)
        .checked_pow(m)
        .and_then(|q| projective_size(q, d));
    match size {
        Some(s) if s <= budget => Ok(()),
        _ => Err(Error::BudgetExceeded(format!(
            "P^{}(F_{}^{}) has more than {} points",
            d as i64 - 1,
            p,
            m,
            budget
        ))),
    }
}

fn count_in_span(rows: &[Point], p: u32, m: u32, n: usize, pred: impl Fn(&dyn SmallFieldRef, &Point) -> bool + Sync) -> Result<u64> {
    if m == 1 {
        let field = PrimeField { p };
        Ok(count_projective(&field, rows, n, |pt| pred(&field, pt)))
    } else {
        let field = GaloisField::new(p, m)?;
        let rows = embed_rows(&field, rows);
        Ok(count_projective(&field, &rows, n, |pt| pred(&field, pt)))
    }
}

/// Object-safe view of a [`SmallField`], so one predicate serves both the
/// prime and the extension kernels.
pub trait SmallFieldRef: Sync {
    fn pure(&self, half: Half, p: &Point) -> bool;
    fn quadric(&self, p: &Point) -> bool;
}

impl<F: SmallField> SmallFieldRef for F {
    fn pure(&self, half: Half, p: &Point) -> bool {
        is_pure_small(self, half, p)
    }
    fn quadric(&self, p: &Point) -> bool {
        (0..5).fold(0, |acc, i| self.add(acc, self.mul(p[i], p[i + 5]))) == 0
    }
}

/// Exact `#X_K(F_{p^m})` or `#X^∨_K(F_{p^m})` by enumeration of `P(K⊥)`
/// resp. `P(K)`.
pub fn count_section_points(k: &Subspace, side: Side, m: u32, budget: u128) -> Result<u64> {
    let p = prime_of(k)?;
    let (space, half) = match side {
        Side::X => (pairing_perp(k, Half::Minus), Half::Plus),
        Side::Dual => (k.clone(), Half::Minus),
    };
    check_budget(p, m, space.dim(), budget)?;
    let rows = basis_residues(&space)?;
    count_in_span(&rows, p, m, DIM_HALF, |f, pt| f.pure(half, pt))
}

/// `#Q(F_{p^m})` for the quadric `Q ⊂ P⁹`, by enumeration.
pub fn quadric_count(p: u32, m: u32) -> Result<u64> {
    FieldSpec::prime(p)?;
    let rows: Vec<Point> = (0..DIM_V)
        .map(|i| {
            let mut r = [0u32; DIM_HALF];
            r[i] = 1;
            r
        })
        .collect();
    count_in_span(&rows, p, m, DIM_V, |f, pt| f.quadric(pt))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub q: u64,
    pub m: u32,
    pub k: usize,
    pub side: Side,
    pub actual: u128,
    pub predicted: Option<u128>,
    pub identity_lhs: Option<u128>,
    pub identity_rhs: Option<u128>,
    pub pass: bool,
}

pub const CSV_HEADER: &str = "q,m,k,side,actual,predicted,pass";

impl CountReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.q,
            self.m,
            self.k,
            self.side,
            self.actual,
            self.predicted.map(|p| p.to_string()).unwrap_or_default(),
            self.pass
        )
    }
}

pub fn to_csv(reports: &[CountReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Counts `X_K` and compares with the prediction for its codimension.
pub fn count_report(k: &Subspace, m: u32, budget: u128) -> Result<CountReport> {
    let p = prime_of(k)?;
    let q = (p as u64).pow(m);
    let actual = count_section_points(k, Side::X, m, budget)? as u128;
    let predicted = predicted_count(k.dim(), q).ok();
    Ok(CountReport {
        q: p as u64,
        m,
        k: k.dim(),
        side: Side::X,
        actual,
        predicted,
        identity_lhs: None,
        identity_rhs: None,
        pass: predicted == Some(actual),
    })
}

/// `(lhs, rhs)` of `#P^{15−k} + #X_K(#P⁴ − 1) = #Q #P^{7−k} + #P^{k−1} q^{8−k}`.
pub fn blowup_sides(k: usize, q: u64, x_count: u128, q_count: u128) -> (u128, u128) {
    let k = k as i64;
    let lhs = pn_count(q, 15 - k) + x_count * (pn_count(q, 4) - 1);
    let rhs = q_count * pn_count(q, 7 - k) + pn_count(q, k - 1) * (q as u128).pow((8 - k) as u32);
    (lhs, rhs)
}

/// Checks the fibration identity with enumerated `#X_K` and `#Q`.
pub fn verify_blowup_identity(k: &Subspace, m: u32, budget: u128) -> Result<CountReport> {
    let dim = k.dim();
    if !(1..=5).contains(&dim) {
        return Err(Error::CodimensionOutOfRange(dim));
    }
    let mut report = count_report(k, m, budget)?;
    let q = report.q.pow(m);
    let q_count = quadric_count(report.q as u32, m)? as u128;
    let (lhs, rhs) = blowup_sides(dim, q, report.actual, q_count);
    report.identity_lhs = Some(lhs);
    report.identity_rhs = Some(rhs);
    report.pass = lhs == rhs && report.predicted == Some(report.actual);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K6Report {
    pub q: u64,
    pub x_count: u128,
    pub dual_count: u128,
    /// `1 + q + q³ + q⁴ + q²·#X^∨_K`.
    pub predicted: u128,
    /// `#X^∨_K(F_{q^m})` for `m = 1, 2, ...` as far as the budget allows.
    pub dual_counts: Vec<u64>,
    /// Geometric points of `X^∨_K` of degree at most `dual_counts.len()`.
    pub geometric_points: u64,
    pub reduced: bool,
    pub pass: bool,
}

fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Geometric points of degree `≤ counts.len()` from `N_m = #Z(F_{q^m})`:
/// `Σ_d d·a_d` with `a_d = (1/d) Σ_{e|d} μ(d/e) N_e`.
pub fn geometric_points(counts: &[u64]) -> u64 {
    (1..=counts.len() as u64)
        .map(|d| {
            (1..=d)
                .filter(|e| d % e == 0)
                .map(|e| mobius(d / e) * counts[e as usize - 1] as i64)
                .sum::<i64>() as u64
        })
        .sum()
}

/// The experimental `k = 6` relation `#X_K = 1 + q + q³ + q⁴ + q²·#X^∨_K`.
///
/// The dual scheme has length 12; it is reduced exactly when 12 distinct
/// geometric points are found, which is checked with extension scans
/// within the budget.
pub fn verify_k6_relation(k: &Subspace, budget: u128) -> Result<K6Report> {
    if k.dim() != 6 {
        return Err(Error::CodimensionOutOfRange(k.dim()));
    }
    let p = prime_of(k)?;
    let q = p as u64;
    let x_count = count_section_points(k, Side::X, 1, budget)? as u128;
    let mut dual_counts = Vec::new();
    let mut geometric = 0;
    for m in 1.. {
        match count_section_points(k, Side::Dual, m, budget) {
            Ok(n) => dual_counts.push(n),
            Err(Error::BudgetExceeded(_)) | Err(Error::UnsupportedField(_)) => break,
            Err(e) => return Err(e),
        }
        geometric = geometric_points(&dual_counts);
        if geometric >= 12 {
            break;
        }
    }
    let dual_count = dual_counts.first().copied().unwrap_or(0) as u128;
    let qq = q as u128;
    let predicted = 1 + qq + qq.pow(3) + qq.pow(4) + qq * qq * dual_count;
    let reduced = geometric == 12;
    Ok(K6Report {
        q,
        x_count,
        dual_count,
        predicted,
        dual_counts,
        geometric_points: geometric,
        reduced,
        pass: x_count == predicted,
    })
}

/// A codimension-6 `K` spanned by `j ∈ [2, 5]` random pure spinors and
/// `6 − j` uniform ones. Uniform draws over `F_2` rarely have all twelve
/// dual points in scan range; the pure generators put some of them at
/// degree 1.
pub fn random_k6_section<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R) -> Subspace {
    loop {
        let j = rng.gen_range(2..=5);
        let rows = (0..6)
            .map(|i| {
                if i < j {
                    random_pure(field, Half::Minus, rng).spinor.coords().to_vec()
                } else {
                    HalfSpinor::random(field, Half::Minus, rng).coords().to_vec()
                }
            })
            .collect();
        let k = Subspace::span(field, DIM_HALF, rows);
        if k.dim() == 6 {
            return k;
        }
    }
}

/// Draws codimension-6 sections until one has a reduced dual scheme.
pub fn reduced_k6_section<R: Rng + ?Sized>(
    field: FieldSpec,
    budget: u128,
    attempts: usize,
    rng: &mut R,
) -> Result<(Subspace, K6Report)> {
    for _ in 0..attempts {
        let k = random_k6_section(field, rng);
        let report = verify_k6_relation(&k, budget)?;
        if report.reduced {
            return Ok((k, report));
        }
    }
    Err(Error::RetryBudgetExhausted(attempts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn predicted_counts() {
        let expected = [2295u128, 1143, 567, 279, 135, 63];
        for (k, &e) in expected.iter().enumerate() {
            assert_eq!(predicted_count(k, 2).unwrap(), e);
        }
        assert_eq!(predicted_count(1, 3).unwrap(), 30604);
        assert_eq!(predicted_count(0, 2).unwrap(), 3 * 5 * 9 * 17);
        assert!(predicted_count(6, 2).is_err());
        assert_eq!(MotiveProfile::for_codim(6).unwrap().count_at(2), 75);
    }

    #[test]
    fn rows_drop_one_middle_multiplicity() {
        // row k+1 is row k with one entry of the upper half decremented
        // and the top entry removed
        for k in 0..5 {
            let a = MOTIVE_ROWS[k];
            let b = MOTIVE_ROWS[k + 1];
            assert_eq!(a.len(), b.len() + 1);
            let diff: Vec<i64> = (0..b.len()).map(|i| a[i] as i64 - b[i] as i64).collect();
            assert_eq!(diff.iter().sum::<i64>() + a[a.len() - 1] as i64, 2);
        }
    }

    #[test]
    fn blowup_arithmetic() {
        assert_eq!(blowup_sides(2, 2, 567, 527), (33393, 33393));
        assert_eq!(blowup_sides(1, 2, 1143, 527), (67057, 67057));
    }

    #[test]
    fn quadric_counts() {
        assert_eq!(quadric_count(2, 1).unwrap(), 527);
        // #Q⁸(F_q) = (q⁴ + 1)(q⁵ − 1)/(q − 1)
        assert_eq!(quadric_count(3, 1).unwrap(), 82 * 121);
        assert_eq!(quadric_count(2, 2).unwrap(), 257 * 341);
    }

    #[test]
    fn full_variety_count() {
        let field = FieldSpec::prime(2).unwrap();
        let k = Subspace::zero(field, DIM_HALF);
        assert_eq!(count_section_points(&k, Side::X, 1, DEFAULT_COUNT_BUDGET).unwrap(), 2295);
        assert_eq!(count_section_points(&k, Side::Dual, 1, DEFAULT_COUNT_BUDGET).unwrap(), 0);
        assert!(count_section_points(&k, Side::X, 3, 1000).is_err());
    }

    #[test]
    fn geometric_point_bookkeeping() {
        // one rational point, one conjugate pair, one triple
        let counts = [1, 3, 4, 3];
        assert_eq!(geometric_points(&counts), 6);
        assert_eq!(geometric_points(&[12]), 12);
    }

    #[test]
    fn k6_relation_is_consistent_on_a_sample() {
        let field = FieldSpec::prime(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let rows = (0..6).map(|_| HalfSpinor::random(field, Half::Minus, &mut rng).coords().to_vec()).collect();
        let k = Subspace::span(field, DIM_HALF, rows);
        if k.dim() == 6 {
            let rep = verify_k6_relation(&k, 1 << 20).unwrap();
            assert_eq!(rep.dual_count, rep.dual_counts[0] as u128);
            assert!(rep.geometric_points <= 12 || !rep.reduced);
        }
    }

    #[test]
    fn reduced_k6_sample() {
        let field = FieldSpec::prime(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (_, rep) = reduced_k6_section(field, 1 << 22, 50, &mut rng).unwrap();
        assert_eq!(rep.geometric_points, 12);
        assert_eq!(rep.x_count, rep.predicted);
    }

    #[test]
    fn csv_layout() {
        let r = CountReport {
            q: 2,
            m: 1,
            k: 0,
            side: Side::X,
            actual: 2295,
            predicted: Some(2295),
            identity_lhs: None,
            identity_rhs: None,
            pass: true,
        };
        assert_eq!(to_csv(&[r]), "q,m,k,side,actual,predicted,pass\n2,1,0,x,2295,2295,true\n");
    }
}

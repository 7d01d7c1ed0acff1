//! Linear spaces on `X ⊂ P(S₊)`: lines, planes, the two kinds of 3-spaces
//! and the 4-spaces `Π⁴` indexed by pure spinors of `S₋`, plus the `F₄`
//! scans of sections.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, PrimeField, Scalar, SmallField};
use crate::linalg::{DenseMatrix, Subspace};
use crate::pure::{
    annihilator_kernel, clifford_image, extend_isotropic4, family_of, is_pure_small, PureSpinorWitness,
};
use crate::scan::{basis_residues, collect_projective, pure_points, Point};
use crate::spinor::{clifford_mul, pairing, Half, HalfSpinor, VecV, DIM_HALF, DIM_V};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinearSpaceKind {
    Line,
    Plane,
    ThreeSpaceA,
    ThreeSpaceB,
    FourSpace,
}

impl LinearSpaceKind {
    pub fn span_dim(self) -> usize {
        match self {
            LinearSpaceKind::Line => 2,
            LinearSpaceKind::Plane => 3,
            LinearSpaceKind::ThreeSpaceA | LinearSpaceKind::ThreeSpaceB => 4,
            LinearSpaceKind::FourSpace => 5,
        }
    }
}

/// A linear space on `X` with its defining isotropic data, smallest
/// subspace first (`U₃`; `U₂ ⊂ U₅,₋`; `U₂`; `U₁ ⊂ U₅,₋`; `U₅,₋`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSpaceOnX {
    pub kind: LinearSpaceKind,
    pub witness: Vec<Subspace>,
    pub span: Subspace,
}

fn expect_dim(sub: &Subspace, expected: usize) -> Result<()> {
    if sub.dim() != expected {
        return Err(Error::WrongDimension {
            expected,
            found: sub.dim(),
        });
    }
    Ok(())
}

fn expect_minus_maximal(u5: &Subspace) -> Result<()> {
    if family_of(u5)? != Half::Minus {
        return Err(Error::HalfMismatch {
            expected: Half::Minus,
            found: Half::Plus,
        });
    }
    Ok(())
}

fn finish(kind: LinearSpaceKind, witness: Vec<Subspace>, span: Subspace) -> Result<LinearSpaceOnX> {
    expect_dim(&span, kind.span_dim())?;
    Ok(LinearSpaceOnX { kind, witness, span })
}

impl LinearSpaceOnX {
    /// The line `L_{U₃}`: pure spinors whose annihilator contains `U₃`.
    pub fn line(u3: &Subspace) -> Result<Self> {
        expect_dim(u3, 3)?;
        finish(LinearSpaceKind::Line, vec![u3.clone()], annihilator_kernel(u3, Half::Plus)?)
    }

    /// The plane of `W ⊃ U₄` with `U₂ ⊂ U₄ ⊂ U₅,₋`.
    pub fn plane(u2: &Subspace, u5: &Subspace) -> Result<Self> {
        expect_dim(u2, 2)?;
        expect_minus_maximal(u5)?;
        if !u2.is_subspace_of(u5) {
            return Err(Error::NotInSubspace);
        }
        let span = annihilator_kernel(u2, Half::Plus)?.intersect(&pi4_span_of(u5)?)?;
        finish(LinearSpaceKind::Plane, vec![u2.clone(), u5.clone()], span)
    }

    /// `Π³_{U₂}`: all `W` containing the isotropic plane `U₂`.
    pub fn three_space_a(u2: &Subspace) -> Result<Self> {
        expect_dim(u2, 2)?;
        finish(LinearSpaceKind::ThreeSpaceA, vec![u2.clone()], annihilator_kernel(u2, Half::Plus)?)
    }

    /// `Π³_{U₁,U₅,₋}`: `W ⊃ U₄` with `U₁ ⊂ U₄ ⊂ U₅,₋`.
    pub fn three_space_b(u1: &Subspace, u5: &Subspace) -> Result<Self> {
        expect_dim(u1, 1)?;
        expect_minus_maximal(u5)?;
        if !u1.is_subspace_of(u5) {
            return Err(Error::NotInSubspace);
        }
        let span = annihilator_kernel(u1, Half::Plus)?.intersect(&pi4_span_of(u5)?)?;
        finish(LinearSpaceKind::ThreeSpaceB, vec![u1.clone(), u5.clone()], span)
    }

    pub fn four_space(tau: &PureSpinorWitness) -> Result<Self> {
        Ok(LinearSpaceOnX {
            kind: LinearSpaceKind::FourSpace,
            witness: vec![tau.annihilator.clone()],
            span: span_pi4(tau)?,
        })
    }
}

/// Span of `Π⁴_{U₅,₋}` from the plus extensions of the five coordinate
/// hyperplanes of the echelon basis of `U₅,₋`.
fn pi4_span_of(u5: &Subspace) -> Result<Subspace> {
    let field = u5.field();
    let rows = u5.basis_rows();
    let mut spinors = Vec::with_capacity(5);
    for drop in 0..5 {
        let u4 = Subspace::span(
            field,
            DIM_V,
            (0..5).filter(|&i| i != drop).map(|i| rows[i].to_vec()).collect(),
        );
        let (plus, _) = extend_isotropic4(&u4)?;
        spinors.push(plus.spinor.coords().to_vec());
    }
    let span = Subspace::span(field, DIM_HALF, spinors);
    expect_dim(&span, 5)?;
    Ok(span)
}

/// `span Π⁴_{U₅,₋} ⊂ S₊` for a pure `τ ∈ S₋` with annihilator `U₅,₋`.
pub fn span_pi4(tau: &PureSpinorWitness) -> Result<Subspace> {
    tau.spinor.expect_half(Half::Minus)?;
    if tau.annihilator.dim() != 5 {
        return Err(Error::NotPure);
    }
    pi4_span_of(&tau.annihilator)
}

/// The same span as the Clifford image `V · τ`.
pub fn span_pi4_clifford(tau: &HalfSpinor) -> Result<Subspace> {
    tau.expect_half(Half::Minus)?;
    let image = clifford_image(tau);
    expect_dim(&image, 5).map_err(|_| Error::NotPure)?;
    Ok(image)
}

/// Whether `L ⊂ X_K`, i.e. `span L ⊂ K⊥` under the pairing.
pub fn contains(k: &Subspace, l: &LinearSpaceOnX) -> Result<bool> {
    for kappa in k.basis_rows() {
        let kappa = HalfSpinor::new(Half::Minus, kappa.to_vec());
        for s in l.span.basis_rows() {
            if !pairing(&kappa, &HalfSpinor::new(Half::Plus, s.to_vec()))?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Rows of the linear conditions `τ ↦ ⟨κ_j, v_i · τ⟩` on `S₋`, which vanish
/// exactly when `V · τ ⊂ K⊥`.
pub fn f4_conditions(k: &Subspace) -> Result<DenseMatrix> {
    let field = k.field();
    let images: Vec<Vec<HalfSpinor>> = (0..DIM_V)
        .map(|i| {
            (0..DIM_HALF)
                .map(|t| clifford_mul(&VecV::basis(field, i), &HalfSpinor::basis(field, Half::Minus, t)))
                .collect()
        })
        .collect();
    let mut rows = Vec::with_capacity(k.dim() * DIM_V);
    for kappa in k.basis_rows() {
        let kappa = HalfSpinor::new(Half::Minus, kappa.to_vec());
        for row in &images {
            rows.push(row.iter().map(|s| pairing(&kappa, s)).collect::<Result<Vec<Scalar>>>()?);
        }
    }
    Ok(DenseMatrix::from_rows(field, DIM_HALF, rows))
}

/// The subspace `N ⊂ S₋` of spinors `τ` with `V · τ ⊂ K⊥`; `F₄(X_K)` is
/// `X^∨ ∩ P(N)`.
pub fn f4_linear_span(k: &Subspace) -> Result<Subspace> {
    if k.ambient() != DIM_HALF {
        return Err(Error::AmbientMismatch {
            left: k.ambient(),
            right: DIM_HALF,
        });
    }
    if k.dim() == 0 {
        return Ok(Subspace::full(k.field(), DIM_HALF));
    }
    Ok(f4_conditions(k)?.kernel())
}

fn prime_of(k: &Subspace) -> Result<u32> {
    match k.field() {
        FieldSpec::Prime { p } => Ok(p),
        FieldSpec::Rationals => Err(Error::UnsupportedField(0)),
    }
}

fn to_witness(field: FieldSpec, p: &Point) -> Result<PureSpinorWitness> {
    let coords = p.iter().map(|&x| field.from_i64(x as i64)).collect();
    PureSpinorWitness::from_spinor(HalfSpinor::new(Half::Minus, coords))
}

/// The 4-spaces on `X_K` over `F_q`, `q ∈ {2, 3}`: every `F_q`-point `τ` of
/// `X^∨` (full scan of `P(S₋)`) with `Π⁴_τ ⊂ X_K`, in scan order.
pub fn f4_scan(k: &Subspace) -> Result<Vec<PureSpinorWitness>> {
    let q = prime_of(k)?;
    if !(2..=3).contains(&q) {
        return Err(Error::UnsupportedField(q));
    }
    let points = pure_points(q, Half::Minus)?;
    let field = PrimeField { p: q };
    let conds: Vec<Point> = if k.dim() == 0 {
        Vec::new()
    } else {
        basis_residues(&Subspace::from_matrix(&f4_conditions(k)?))?
    };
    let fs = k.field();
    points
        .iter()
        .filter(|tau| {
            conds.iter().all(|c| {
                let dot = (0..DIM_HALF).fold(0, |acc, t| field.add(acc, field.mul(c[t], tau[t])));
                dot == 0
            })
        })
        .map(|tau| to_witness(fs, tau))
        .collect()
}

/// `F₄(X_K)(F_p)` for any prime field, by scanning `P(N)` only.
pub fn f4_points_linear(k: &Subspace) -> Result<Vec<PureSpinorWitness>> {
    let p = prime_of(k)?;
    let n = f4_linear_span(k)?;
    let rows = basis_residues(&n)?;
    let field = PrimeField { p };
    let fs = k.field();
    collect_projective(&field, &rows, DIM_HALF, |_, pt| {
        is_pure_small(&field, Half::Minus, pt).then_some(*pt)
    })
    .iter()
    .map(|pt| to_witness(fs, pt))
    .collect()
}

/// `dim(span Π⁴_τ ∩ S₈,v)`: 4 when `v ∈ U₅,₋` (a 3-space), else 1 (a point).
pub fn pi4_meet_quadric(tau: &PureSpinorWitness, v: &VecV) -> Result<usize> {
    if v.is_zero() {
        return Err(Error::WrongDimension {
            expected: 1,
            found: 0,
        });
    }
    let line = Subspace::span(v.field(), DIM_V, vec![v.coords().to_vec()]);
    let s8 = annihilator_kernel(&line, Half::Plus)?;
    Ok(span_pi4(tau)?.intersect(&s8)?.dim())
}

/// Whether the points are collinear (span of dimension ≤ 2).
pub fn collinear(points: &[PureSpinorWitness]) -> bool {
    let Some(first) = points.first() else {
        return true;
    };
    let field = first.spinor.field();
    Subspace::span(field, DIM_HALF, points.iter().map(|w| w.spinor.coords().to_vec()).collect()).dim() <= 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinor::pairing_perp;
    use crate::pure::{is_pure, random_isotropic, random_isotropic_vector, random_pure};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u32) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn span_of(field: FieldSpec, subsets: &[&str]) -> Subspace {
        Subspace::span(
            field,
            DIM_HALF,
            subsets.iter().map(|s| HalfSpinor::monomial(field, s).coords().to_vec()).collect(),
        )
    }

    fn witness(field: FieldSpec, subset: &str) -> PureSpinorWitness {
        PureSpinorWitness::from_spinor(HalfSpinor::monomial(field, subset)).unwrap()
    }

    #[test]
    fn span_pi4_examples() {
        let field = f(5);
        assert_eq!(
            span_pi4(&witness(field, "1")).unwrap(),
            span_of(field, &["", "12", "13", "14", "15"])
        );
        assert_eq!(
            span_pi4(&witness(field, "12345")).unwrap(),
            span_of(field, &["1234", "1235", "1245", "1345", "2345"])
        );
    }

    #[test]
    fn span_pi4_routes_agree_and_contain_extensions() {
        let field = f(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let tau = random_pure(field, Half::Minus, &mut rng);
            let span = span_pi4(&tau).unwrap();
            assert_eq!(span.dim(), 5);
            assert_eq!(span, span_pi4_clifford(&tau.spinor).unwrap());
            for _ in 0..3 {
                // a random hyperplane U₄ ⊂ U₅,₋
                let rows: Vec<Vec<Scalar>> = (0..4).map(|_| tau.annihilator.random_element(&mut rng)).collect();
                let u4 = Subspace::span(field, DIM_V, rows);
                if u4.dim() != 4 {
                    continue;
                }
                let (plus, _) = extend_isotropic4(&u4).unwrap();
                assert!(span.contains(plus.spinor.coords()));
            }
        }
    }

    #[test]
    fn span_pi4_rejects_plus_spinors() {
        assert!(span_pi4(&witness(f(5), "")).is_err());
    }

    #[test]
    fn linear_space_dimensions_and_points() {
        let field = f(5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let tau = random_pure(field, Half::Minus, &mut rng);
            let u5 = tau.annihilator.clone();
            let rows = u5.basis_rows();
            let u1 = Subspace::span(field, DIM_V, vec![rows[0].to_vec()]);
            let u2 = Subspace::span(field, DIM_V, vec![rows[0].to_vec(), rows[1].to_vec()]);
            let u3 = random_isotropic(field, 3, Half::Plus, &mut rng);
            let spaces = [
                LinearSpaceOnX::line(&u3).unwrap(),
                LinearSpaceOnX::plane(&u2, &u5).unwrap(),
                LinearSpaceOnX::three_space_a(&u2).unwrap(),
                LinearSpaceOnX::three_space_b(&u1, &u5).unwrap(),
                LinearSpaceOnX::four_space(&tau).unwrap(),
            ];
            for l in &spaces {
                assert_eq!(l.span.dim(), l.kind.span_dim());
                // sampled points of a linear space on X are pure
                for _ in 0..5 {
                    let s = HalfSpinor::new(Half::Plus, l.span.random_element(&mut rng));
                    if !s.is_zero() {
                        assert!(is_pure(&s), "{:?}", l.kind);
                    }
                }
            }
        }
    }

    #[test]
    fn pure_points_of_pi4_meet_annihilator_in_four() {
        let field = f(5);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let tau = random_pure(field, Half::Minus, &mut rng);
        let span = span_pi4(&tau).unwrap();
        for _ in 0..10 {
            let s = HalfSpinor::new(Half::Plus, span.random_element(&mut rng));
            if s.is_zero() {
                continue;
            }
            let w = PureSpinorWitness::from_spinor(s).unwrap();
            assert!(w.annihilator.intersect(&tau.annihilator).unwrap().dim() >= 4);
        }
    }

    #[test]
    fn contains_examples() {
        let field = f(3);
        let l = LinearSpaceOnX::four_space(&witness(field, "1")).unwrap();
        assert!(contains(&Subspace::zero(field, DIM_HALF), &l).unwrap());
        // the dual vector of 1 ∈ S₊ is e12345 ∈ S₋
        let k = span_of(field, &["12345"]);
        assert!(!contains(&k, &l).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let tau = random_pure(field, Half::Minus, &mut rng);
        let l = LinearSpaceOnX::four_space(&tau).unwrap();
        let kperp = pairing_perp(&l.span, Half::Plus);
        assert_eq!(kperp.dim(), 11);
        let rows: Vec<Vec<Scalar>> = (0..3).map(|_| kperp.random_element(&mut rng)).collect();
        let k = Subspace::span(field, DIM_HALF, rows);
        assert!(contains(&k, &l).unwrap());
    }

    #[test]
    fn f4_scan_whole_dual_variety() {
        let field = f(2);
        let all = f4_scan(&Subspace::zero(field, DIM_HALF)).unwrap();
        assert_eq!(all.len(), 2295);
        assert!(f4_scan(&Subspace::zero(f(5), DIM_HALF)).is_err());
    }

    #[test]
    fn f4_routes_agree() {
        let field = f(2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for k in 1..=2 {
            let rows: Vec<Vec<Scalar>> =
                (0..k).map(|_| HalfSpinor::random(field, Half::Minus, &mut rng).coords().to_vec()).collect();
            let ks = Subspace::span(field, DIM_HALF, rows);
            let full = f4_scan(&ks).unwrap();
            let linear = f4_points_linear(&ks).unwrap();
            assert_eq!(full.len(), linear.len());
            for w in &full {
                let l = LinearSpaceOnX::four_space(w).unwrap();
                assert!(contains(&ks, &l).unwrap());
            }
        }
    }

    #[test]
    fn pi4_meet_quadric_examples() {
        let field = f(5);
        let tau = witness(field, "1");
        assert_eq!(pi4_meet_quadric(&tau, &VecV::e(field, 1)).unwrap(), 4);
        assert_eq!(pi4_meet_quadric(&tau, &VecV::f(field, 1)).unwrap(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let tau = random_pure(field, Half::Minus, &mut rng);
            let v = random_isotropic_vector(field, &mut rng);
            let d = pi4_meet_quadric(&tau, &v).unwrap();
            let inside = tau.annihilator.contains(v.coords());
            assert_eq!(d, if inside { 4 } else { 1 });
        }
    }
}

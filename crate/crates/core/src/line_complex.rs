//! The map `γ : P(S₋) \\ X^∨ → Q`, its polarization, and the spinor
//! quadratic line complex `R ⊂ Gr(2, S₋)`.
//!
//! On a pair `(κ₁, κ₂)` the line complex is evaluated as
//! `ρ = b_V(q̃₁₂, q̃₁₂)`. Because `q_V ∘ μ ≡ 0`, the identity
//! `b_V(q̃₁₁, q̃₂₂) = −2 b_V(q̃₁₂, q̃₁₂)` holds, so the longer expression
//! `b_V(q̃₁₂, q̃₁₂) − b_V(q̃₁₁, q̃₂₂)` equals `3ρ` and is useless over `F_3`.
//! On `Λ²K` the Gram entries are
//! `(b_V(q̃ᵢₘ, q̃ⱼₗ) − b_V(q̃ᵢₗ, q̃ⱼₘ)) / 3`, whose diagonal is `ρ`.

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{DenseMatrix, Subspace, SymBilinearForm};
use crate::pure::{mu, mu_polar};
use crate::spinor::{b_v, Half, HalfSpinor, VecV, DIM_HALF};

/// `γ(κ) = μ(κ)` for a non-pure `κ ∈ S₋`, a point of the quadric `Q`.
pub fn gamma(kappa: &HalfSpinor) -> Result<VecV> {
    kappa.expect_half(Half::Minus)?;
    let v = mu(kappa);
    if v.is_zero() {
        return Err(Error::PureSpinor);
    }
    Ok(v)
}

/// `q̃(κ₁, κ₂) = (μ(κ₁+κ₂) − μ(κ₁) − μ(κ₂)) / 2`.
pub fn polarize_mu(k1: &HalfSpinor, k2: &HalfSpinor) -> Result<VecV> {
    let field = k1.field();
    field.require_odd_characteristic()?;
    k1.expect_half(Half::Minus)?;
    k2.expect_half(Half::Minus)?;
    let half = field.from_i64(2).inv().expect("odd characteristic");
    Ok(mu_polar(k1, k2).scale(&half))
}

/// Value of the line-complex quadric on the line `⟨κ₁, κ₂⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineComplexValue {
    pub value: Scalar,
    pub basis_pair: (HalfSpinor, HalfSpinor),
}

impl LineComplexValue {
    /// Whether the line lies on `R` (basis independent).
    pub fn vanishes(&self) -> bool {
        self.value.is_zero()
    }
}

/// `ρ(κ₁, κ₂) = b_V(q̃(κ₁,κ₂), q̃(κ₁,κ₂))`. It vanishes exactly when the
/// line `⟨κ₁, κ₂⟩` lies on `R`, and scales by `(ad − bc)²` under a change
/// of basis of the pair.
pub fn rho(k1: &HalfSpinor, k2: &HalfSpinor) -> Result<LineComplexValue> {
    let q12 = polarize_mu(k1, k2)?;
    Ok(LineComplexValue {
        value: b_v(&q12, &q12),
        basis_pair: (k1.clone(), k2.clone()),
    })
}

/// The expression `b_V(q̃₁₂, q̃₁₂) − b_V(q̃₁₁, q̃₂₂)`, identically `3ρ`.
pub fn rho_unnormalized(k1: &HalfSpinor, k2: &HalfSpinor) -> Result<Scalar> {
    let q12 = polarize_mu(k1, k2)?;
    let q11 = polarize_mu(k1, k1)?;
    let q22 = polarize_mu(k2, k2)?;
    Ok(b_v(&q12, &q12) - b_v(&q11, &q22))
}

/// The line-complex form restricted to `Λ²K`, in the basis `κₐ ∧ κ_b`
/// (`a < b`) built from the echelon basis of `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlueckerQuadric {
    pub k: usize,
    pub gram: SymBilinearForm,
}

impl PlueckerQuadric {
    pub fn rank(&self) -> usize {
        self.gram.rank()
    }

    pub fn is_identically_zero(&self) -> bool {
        self.gram.is_zero()
    }
}

fn check_section_space(k: &Subspace) -> Result<()> {
    if k.ambient() != DIM_HALF {
        return Err(Error::AmbientMismatch {
            left: k.ambient(),
            right: DIM_HALF,
        });
    }
    Ok(())
}

fn minus_basis(k: &Subspace) -> Vec<HalfSpinor> {
    k.basis_rows()
        .iter()
        .map(|r| HalfSpinor::new(Half::Minus, r.to_vec()))
        .collect()
}

/// Gram entry on `κ_a ∧ κ_b`, `κ_c ∧ κ_d` when the pairs share a vector:
/// the sum is decomposable, so the entry is a polarization of `ρ`.
fn overlapping_entry(basis: &[HalfSpinor], (a, b): (usize, usize), (c, d): (usize, usize)) -> Result<Scalar> {
    let field = basis[0].field();
    let r = |x: &HalfSpinor, y: &HalfSpinor| rho(x, y).map(|v| v.value);
    let neg = |s: &HalfSpinor| s.scale(&field.from_i64(-1));
    // write κ_c ∧ κ_d as κ_x ∧ y with κ_x shared with (a, b), up to sign
    let (shared, first_other, second_other, sign) = if a == c {
        (a, b, d, 1)
    } else if a == d {
        (a, b, c, -1)
    } else if b == c {
        (b, a, d, 1)
    } else if b == d {
        (b, a, c, -1)
    } else {
        unreachable!("pairs are disjoint")
    };
    // κ_a ∧ κ_b = ± κ_s ∧ κ_{first}
    let first_sign = if shared == a { 1 } else { -1 };
    let x = &basis[shared];
    let mut y1 = basis[first_other].clone();
    if first_sign < 0 {
        y1 = neg(&y1);
    }
    let mut y2 = basis[second_other].clone();
    if sign < 0 {
        y2 = neg(&y2);
    }
    let two_inv = field.from_i64(2).inv().ok_or(Error::CharacteristicTwo)?;
    let total = r(x, &y1.add(&y2))? - r(x, &y1)? - r(x, &y2)?;
    Ok(&total * &two_inv)
}

/// `R_K = R ∩ Gr(2, K)` as a symmetric form on `Λ²K`, in the basis
/// `κ_a ∧ κ_b` (`a < b`) of the echelon basis of `K`. Its diagonal is `ρ`.
///
/// For `k ≥ 4` the form is only defined modulo Plücker relations and needs
/// the division by 3, so characteristic 3 is rejected there.
pub fn rho_form(k: &Subspace) -> Result<PlueckerQuadric> {
    check_section_space(k)?;
    let field = k.field();
    field.require_odd_characteristic()?;
    if k.dim() < 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: k.dim(),
        });
    }
    let basis = minus_basis(k);
    let n = basis.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let third = field.from_i64(3).inv();
    if third.is_none() && n >= 4 {
        return Err(Error::UnsupportedCharacteristic(3));
    }
    let q: Vec<Vec<VecV>> = basis
        .iter()
        .map(|x| basis.iter().map(|y| polarize_mu(x, y)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let m = pairs.len();
    let mut g = DenseMatrix::zeros(field, m, m);
    for (ii, &(i, j)) in pairs.iter().enumerate() {
        for (jj, &(l, mm)) in pairs.iter().enumerate().skip(ii) {
            let x = match &third {
                Some(t) => &(b_v(&q[i][mm], &q[j][l]) - b_v(&q[i][l], &q[j][mm])) * t,
                None => overlapping_entry(&basis, (i, j), (l, mm))?,
            };
            g[(ii, jj)] = x.clone();
            g[(jj, ii)] = x;
        }
    }
    Ok(PlueckerQuadric {
        k: n,
        gram: SymBilinearForm::new(g)?,
    })
}

/// Basis of a complement of `κ` inside `K`: the echelon basis with one
/// vector dropped where `κ` has a nonzero coordinate.
pub fn complement_basis(kappa: &HalfSpinor, k: &Subspace) -> Result<Vec<Vec<Scalar>>> {
    let coords = k.coordinates(kappa.coords()).ok_or(Error::NotInSubspace)?;
    let drop = coords
        .iter()
        .position(|c| !c.is_zero())
        .ok_or(Error::ZeroSpinor)?;
    Ok((0..k.dim())
        .filter(|&i| i != drop)
        .map(|i| k.basis_vec(i).to_vec())
        .collect())
}

/// `R_{κ,K}`: the quadratic form `λ ↦ ρ(κ, λ)` on `K/⟨κ⟩`, with its corank.
pub fn r_kappa_form(kappa: &HalfSpinor, k: &Subspace) -> Result<(SymBilinearForm, usize)> {
    check_section_space(k)?;
    kappa.expect_half(Half::Minus)?;
    let field = k.field();
    field.require_odd_characteristic()?;
    let comp: Vec<HalfSpinor> = complement_basis(kappa, k)?
        .into_iter()
        .map(|c| HalfSpinor::new(Half::Minus, c))
        .collect();
    let two_inv = field.from_i64(2).inv().expect("odd characteristic");
    let diag: Vec<Scalar> = comp
        .iter()
        .map(|l| rho(kappa, l).map(|v| v.value))
        .collect::<Result<_>>()?;
    let n = comp.len();
    let mut g = DenseMatrix::zeros(field, n, n);
    for i in 0..n {
        g[(i, i)] = diag[i].clone();
        for j in i + 1..n {
            let sum = rho(kappa, &comp[i].add(&comp[j]))?.value;
            let x = &(sum - &diag[i] - &diag[j]) * &two_inv;
            g[(i, j)] = x.clone();
            g[(j, i)] = x;
        }
    }
    let form = SymBilinearForm::new(g)?;
    let corank = form.corank();
    Ok((form, corank))
}

/// Span of the polarization vectors `q̃(κᵢ, κⱼ)`, `i ≤ j`, over a basis of
/// `K`; in characteristic 2 the values `μ(κᵢ)` and `μ(κᵢ+κⱼ)−μ(κᵢ)−μ(κⱼ)`
/// are used, which span the same space as the values of `γ`.
pub fn polarization_span(k: &Subspace) -> Result<Subspace> {
    check_section_space(k)?;
    let field = k.field();
    let basis: Vec<HalfSpinor> = k
        .basis_rows()
        .iter()
        .map(|r| HalfSpinor::new(Half::Minus, r.to_vec()))
        .collect();
    let mut rows = Vec::new();
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let v = if i == j {
                mu(&basis[i])
            } else {
                mu_polar(&basis[i], &basis[j])
            };
            rows.push(v.into_coords());
        }
    }
    Ok(Subspace::span(field, crate::spinor::DIM_V, rows))
}

/// Whether `q_V` vanishes identically on a subspace of `V` (valid in every
/// characteristic).
pub fn is_totally_singular(sub: &Subspace) -> bool {
    crate::pure::is_isotropic(sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::pure::{random_impure, random_pure};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u32) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn gamma_example() {
        let field = f(5);
        let k = HalfSpinor::monomial(field, "1").add(&HalfSpinor::monomial(field, "234"));
        let g = gamma(&k).unwrap();
        assert!(g.is_proportional(&VecV::f(field, 5)));
        assert_eq!(gamma(&HalfSpinor::monomial(field, "1")), Err(Error::PureSpinor));
    }

    #[test]
    fn polarize_examples() {
        let field = f(5);
        let e1 = HalfSpinor::monomial(field, "1");
        let e234 = HalfSpinor::monomial(field, "234");
        assert!(polarize_mu(&e1, &e234).unwrap().is_proportional(&VecV::f(field, 5)));
        assert!(polarize_mu(&e1, &e1).unwrap().is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let k = random_impure(field, Half::Minus, &mut rng);
        assert_eq!(polarize_mu(&k, &k).unwrap(), mu(&k));
        assert_eq!(polarize_mu(&HalfSpinor::monomial(f(2), "1"), &HalfSpinor::monomial(f(2), "3")), Err(Error::CharacteristicTwo));
    }

    #[test]
    fn explicit_expression_is_three_rho() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for field in [FieldSpec::Rationals, f(5), f(7)] {
            let three = field.from_i64(3);
            for _ in 0..5 {
                let a = HalfSpinor::random(field, Half::Minus, &mut rng);
                let b = HalfSpinor::random(field, Half::Minus, &mut rng);
                let r = rho(&a, &b).unwrap().value;
                assert_eq!(rho_unnormalized(&a, &b).unwrap(), &three * &r);
                // b(q̃11, q̃22) = -2 b(q̃12, q̃12)
                let q11 = polarize_mu(&a, &a).unwrap();
                let q22 = polarize_mu(&b, &b).unwrap();
                assert_eq!(b_v(&q11, &q22), &field.from_i64(-2) * &r);
            }
        }
    }

    #[test]
    fn rho_survives_characteristic_three() {
        let field = f(3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut nonzero = 0;
        for _ in 0..30 {
            let a = HalfSpinor::random(field, Half::Minus, &mut rng);
            let b = HalfSpinor::random(field, Half::Minus, &mut rng);
            assert!(rho_unnormalized(&a, &b).unwrap().is_zero());
            nonzero += !rho(&a, &b).unwrap().vanishes() as usize;
        }
        assert!(nonzero > 10, "only {nonzero} nonzero values");
    }

    #[test]
    fn rho_trivial_cases() {
        let field = f(7);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let k = HalfSpinor::random(field, Half::Minus, &mut rng);
        assert!(rho(&k, &k).unwrap().vanishes());
        let pure = random_pure(field, Half::Minus, &mut rng);
        let other = HalfSpinor::random(field, Half::Minus, &mut rng);
        assert!(rho(&pure.spinor, &other).unwrap().vanishes());
    }

    #[test]
    fn rho_form_k2_matches_rho() {
        let field = f(5);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = HalfSpinor::random(field, Half::Minus, &mut rng);
        let b = HalfSpinor::random(field, Half::Minus, &mut rng);
        let k = Subspace::span(field, DIM_HALF, vec![a.coords().to_vec(), b.coords().to_vec()]);
        let form = rho_form(&k).unwrap();
        let basis = k.basis_rows();
        let r = rho(
            &HalfSpinor::new(Half::Minus, basis[0].to_vec()),
            &HalfSpinor::new(Half::Minus, basis[1].to_vec()),
        )
        .unwrap();
        assert_eq!(form.gram.gram()[(0, 0)], r.value);
        assert!(rho_form(&Subspace::span(field, DIM_HALF, vec![a.coords().to_vec()])).is_err());
    }

    #[test]
    fn rho_form_char3_agrees_with_char_free_entries() {
        // for k = 3 the decomposable polarization and the divided Gram agree;
        // compare both routes over F_7 where both are available
        let field = f(7);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rows: Vec<Vec<Scalar>> = (0..3)
            .map(|_| HalfSpinor::random(field, Half::Minus, &mut rng).coords().to_vec())
            .collect();
        let k = Subspace::span(field, DIM_HALF, rows);
        let form = rho_form(&k).unwrap();
        let basis = minus_basis(&k);
        // the Gram restricted to decomposables is ρ: κ₀∧(κ₁+κ₂), (κ₀+κ₁)∧κ₂
        let one = field.one();
        let z = field.zero();
        let cases = [
            (vec![one.clone(), one.clone(), z.clone()], rho(&basis[0], &basis[1].add(&basis[2])).unwrap().value),
            (vec![z.clone(), one.clone(), one.clone()], rho(&basis[0].add(&basis[1]), &basis[2]).unwrap().value),
        ];
        for (w, expected) in cases {
            assert_eq!(form.gram.eval(&w, &w), expected);
        }
        for (ii, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            for (jj, (l, m)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
                if (i, j) == (l, m) {
                    continue;
                }
                let e = overlapping_entry(&basis, (i, j), (l, m)).unwrap();
                assert_eq!(form.gram.gram()[(ii, jj)], e);
            }
        }
        let f3 = f(3);
        let rows: Vec<Vec<Scalar>> = (0..4)
            .map(|_| HalfSpinor::random(f3, Half::Minus, &mut rng).coords().to_vec())
            .collect();
        assert_eq!(
            rho_form(&Subspace::span(f3, DIM_HALF, rows)),
            Err(Error::UnsupportedCharacteristic(3))
        );
    }
}

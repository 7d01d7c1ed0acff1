//! The 10-dimensional split quadratic space `V` and its half-spinor modules.
//!
//! `V` has the hyperbolic basis `e1..e5, f1..f5` with `q(Σ aᵢeᵢ + bᵢfᵢ) =
//! Σ aᵢbᵢ`. Spinors live in `Λ•E` for `E = ⟨e1..e5⟩`: `S₊` is the even part,
//! `S₋` the odd part. `eᵢ` acts by wedging, `fᵢ` by contraction.
//!
//! Coordinates of a half spinor are indexed by subsets of `{1..5}` of the
//! right parity, sorted by size and then lexicographically. This order is
//! part of the scene wire format:
//!
//! ```text
//! S₊: ∅, 12, 13, 14, 15, 23, 24, 25, 34, 35, 45, 1234, 1235, 1245, 1345, 2345
//! S₋: 1, 2, 3, 4, 5, 123, 124, 125, 134, 135, 145, 234, 235, 245, 345, 12345
//! ```

use std::fmt;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{DenseMatrix, Subspace, SymBilinearForm};

pub const DIM_V: usize = 10;
pub const DIM_HALF: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Half {
    Plus,
    Minus,
}

impl Half {
    pub fn opposite(self) -> Half {
        match self {
            Half::Plus => Half::Minus,
            Half::Minus => Half::Plus,
        }
    }

    fn slot(self) -> usize {
        match self {
            Half::Plus => 0,
            Half::Minus => 1,
        }
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Half::Plus => "+",
            Half::Minus => "-",
        })
    }
}

/// Index tables for the exterior-algebra model.
pub(crate) struct SpinorTables {
    /// subset bitmask (bit i-1 for element i) per half and index
    pub subsets: [[u8; DIM_HALF]; 2],
    /// position of each bitmask in its half
    pub index_of: [u8; 32],
    /// `action[j][half][idx]`: image of basis spinor `idx` of `half` under
    /// basis vector `j` of `V`, as (index in the opposite half, sign).
    pub action: [[[Option<(u8, i8)>; DIM_HALF]; 2]; DIM_V],
    /// For a minus index `t`, the complementary plus index and the sign of
    /// the top coefficient of `rev(e_T) ∧ e_{T'}`.
    pub pairing: [(u8, i8); DIM_HALF],
}

fn sorted_subsets(parity: u32) -> [u8; DIM_HALF] {
    let mut all: Vec<u8> = (0u8..32).filter(|m| m.count_ones() % 2 == parity).collect();
    let key = |m: &u8| {
        let elems: Vec<u8> = (0..5).filter(|i| m & (1 << i) != 0).collect();
        (m.count_ones(), elems)
    };
    all.sort_by_key(key);
    all.try_into().expect("16 subsets of each parity")
}

fn count_below(mask: u8, i: usize) -> u32 {
    (mask & ((1u8 << i) - 1)).count_ones()
}

pub(crate) fn tables() -> &'static SpinorTables {
    static T: OnceLock<SpinorTables> = OnceLock::new();
    T.get_or_init(|| {
        let subsets = [sorted_subsets(0), sorted_subsets(1)];
        let mut index_of = [0u8; 32];
        for half in &subsets {
            for (idx, &m) in half.iter().enumerate() {
                index_of[m as usize] = idx as u8;
            }
        }
        let mut action = [[[None; DIM_HALF]; 2]; DIM_V];
        for (j, per_vec) in action.iter_mut().enumerate() {
            let i = j % 5;
            let is_e = j < 5;
            for h in 0..2 {
                for idx in 0..DIM_HALF {
                    let m = subsets[h][idx];
                    let has = m & (1 << i) != 0;
                    let sign = if count_below(m, i).is_multiple_of(2) { 1 } else { -1 };
                    per_vec[h][idx] = match (is_e, has) {
                        (true, false) => Some((index_of[(m | (1 << i)) as usize], sign)),
                        (false, true) => Some((index_of[(m & !(1 << i)) as usize], sign)),
                        _ => None,
                    };
                }
            }
        }
        let mut pairing = [(0u8, 0i8); DIM_HALF];
        for (idx, slot) in pairing.iter_mut().enumerate() {
            let t = subsets[1][idx];
            let s = 0b11111 & !t;
            let d = t.count_ones();
            let rev = if (d * (d - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
            // sign of the shuffle taking (T, T') to sorted order
            let inversions: u32 = (0..5)
                .filter(|&a| t & (1 << a) != 0)
                .map(|a| count_below(s, a))
                .sum();
            let shuffle = if inversions.is_multiple_of(2) { 1 } else { -1 };
            *slot = (index_of[s as usize], rev * shuffle);
        }
        SpinorTables {
            subsets,
            index_of,
            action,
            pairing,
        }
    })
}

/// Subset labels of a half, in coordinate order, e.g. `"1234"` or `"∅"`.
pub fn subset_labels(half: Half) -> Vec<String> {
    tables().subsets[half.slot()]
        .iter()
        .map(|&m| {
            if m == 0 {
                "∅".to_string()
            } else {
                (0..5)
                    .filter(|i| m & (1 << i) != 0)
                    .map(|i| char::from(b'1' + i as u8))
                    .collect()
            }
        })
        .collect()
}

/// A vector of `V`: `coords[0..5]` are the `e`-coordinates `a₁..a₅`,
/// `coords[5..10]` the `f`-coordinates `b₁..b₅`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VecV {
    coords: Vec<Scalar>,
}

impl VecV {
    pub fn new(coords: Vec<Scalar>) -> Self {
        assert_eq!(coords.len(), DIM_V, "a vector of V has 10 coordinates");
        VecV { coords }
    }

    pub fn zero(field: FieldSpec) -> Self {
        VecV::new(vec![field.zero(); DIM_V])
    }

    /// Basis vector number `j` in `0..10` (`e1..e5` then `f1..f5`).
    pub fn basis(field: FieldSpec, j: usize) -> Self {
        let mut v = Self::zero(field);
        v.coords[j] = field.one();
        v
    }

    /// `eᵢ`, 1-based.
    pub fn e(field: FieldSpec, i: usize) -> Self {
        Self::basis(field, i - 1)
    }

    /// `fᵢ`, 1-based.
    pub fn f(field: FieldSpec, i: usize) -> Self {
        Self::basis(field, i + 4)
    }

    pub fn from_i64(field: FieldSpec, coords: [i64; DIM_V]) -> Self {
        VecV::new(coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn random<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R) -> Self {
        VecV::new((0..DIM_V).map(|_| field.random(rng)).collect())
    }

    pub fn field(&self) -> FieldSpec {
        self.coords[0].field()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &VecV) -> VecV {
        VecV::new(crate::linalg::add_vec(&self.coords, &other.coords))
    }

    pub fn scale(&self, c: &Scalar) -> VecV {
        VecV::new(crate::linalg::scale_vec(c, &self.coords))
    }

    /// Whether `self` and `other` span the same line (both nonzero).
    pub fn is_proportional(&self, other: &VecV) -> bool {
        if self.is_zero() || other.is_zero() {
            return false;
        }
        let m = DenseMatrix::from_rows(self.field(), DIM_V, vec![
            self.coords.clone(),
            other.coords.clone(),
        ]);
        m.rank() == 1
    }
}

/// `q_V(v) = Σ aᵢbᵢ`.
pub fn q_v(v: &VecV) -> Scalar {
    let c = &v.coords;
    let mut acc = v.field().zero();
    for i in 0..5 {
        acc += &(&c[i] * &c[i + 5]);
    }
    acc
}

/// Polar form of `q_V`: `b_V(v, w) = Σ (aᵢ w.bᵢ + bᵢ w.aᵢ)`. Computed
/// directly, so it is correct in characteristic 2 as well.
pub fn b_v(v: &VecV, w: &VecV) -> Scalar {
    let (x, y) = (&v.coords, &w.coords);
    let mut acc = v.field().zero();
    for i in 0..5 {
        acc += &(&x[i] * &y[i + 5]);
        acc += &(&x[i + 5] * &y[i]);
    }
    acc
}

/// Gram matrix of `b_V` on `e1..e5, f1..f5`.
pub fn b_v_form(field: FieldSpec) -> SymBilinearForm {
    let mut g = DenseMatrix::zeros(field, DIM_V, DIM_V);
    for i in 0..5 {
        g[(i, i + 5)] = field.one();
        g[(i + 5, i)] = field.one();
    }
    SymBilinearForm::new(g).expect("symmetric")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfSpinor {
    half: Half,
    coords: Vec<Scalar>,
}

impl HalfSpinor {
    pub fn new(half: Half, coords: Vec<Scalar>) -> Self {
        assert_eq!(coords.len(), DIM_HALF, "a half spinor has 16 coordinates");
        HalfSpinor { half, coords }
    }

    pub fn zero(field: FieldSpec, half: Half) -> Self {
        HalfSpinor::new(half, vec![field.zero(); DIM_HALF])
    }

    /// Basis spinor at coordinate `idx`.
    pub fn basis(field: FieldSpec, half: Half, idx: usize) -> Self {
        let mut s = Self::zero(field, half);
        s.coords[idx] = field.one();
        s
    }

    /// The basis spinor `e_T` for `T` written as digits, e.g. `"1234"`;
    /// the empty string is `1 ∈ Λ⁰E`. The half follows from the parity.
    pub fn monomial(field: FieldSpec, subset: &str) -> Self {
        let mut mask = 0u8;
        for ch in subset.chars() {
            let d = ch.to_digit(10).expect("digits 1..5") as u8;
            assert!((1..=5).contains(&d), "subset elements are 1..5");
            mask |= 1 << (d - 1);
        }
        let half = if mask.count_ones().is_multiple_of(2) {
            Half::Plus
        } else {
            Half::Minus
        };
        Self::basis(field, half, tables().index_of[mask as usize] as usize)
    }

    pub fn random<R: Rng + ?Sized>(field: FieldSpec, half: Half, rng: &mut R) -> Self {
        HalfSpinor::new(half, (0..DIM_HALF).map(|_| field.random(rng)).collect())
    }

    pub fn half(&self) -> Half {
        self.half
    }

    pub fn field(&self) -> FieldSpec {
        self.coords[0].field()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &HalfSpinor) -> HalfSpinor {
        assert_eq!(self.half, other.half, "adding spinors of different halves");
        HalfSpinor::new(self.half, crate::linalg::add_vec(&self.coords, &other.coords))
    }

    pub fn scale(&self, c: &Scalar) -> HalfSpinor {
        HalfSpinor::new(self.half, crate::linalg::scale_vec(c, &self.coords))
    }

    /// Whether both spinors are nonzero and span the same line.
    pub fn is_proportional_to(&self, other: &HalfSpinor) -> bool {
        if self.half != other.half || self.is_zero() || other.is_zero() {
            return false;
        }
        let m = DenseMatrix::from_rows(self.field(), DIM_HALF, vec![
            self.coords.clone(),
            other.coords.clone(),
        ]);
        m.rank() == 1
    }

    pub fn expect_half(&self, half: Half) -> Result<()> {
        if self.half != half {
            return Err(Error::HalfMismatch {
                expected: half,
                found: self.half,
            });
        }
        Ok(())
    }
}

/// Clifford multiplication `v · s`; the result lies in the opposite half.
pub fn clifford_mul(v: &VecV, s: &HalfSpinor) -> HalfSpinor {
    let field = s.field();
    let t = tables();
    let mut out = vec![field.zero(); DIM_HALF];
    for (j, vj) in v.coords.iter().enumerate() {
        if vj.is_zero() {
            continue;
        }
        for (idx, x) in s.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if let Some((target, sign)) = t.action[j][s.half.slot()][idx] {
                let term = vj * x;
                if sign > 0 {
                    out[target as usize] += &term;
                } else {
                    out[target as usize] -= &term;
                }
            }
        }
    }
    HalfSpinor::new(s.half.opposite(), out)
}

/// Matrix of `s ↦ v · s` on `half` (rows index the opposite half).
pub fn clifford_matrix(v: &VecV, half: Half) -> DenseMatrix {
    let field = v.field();
    let mut m = DenseMatrix::zeros(field, DIM_HALF, DIM_HALF);
    for idx in 0..DIM_HALF {
        let img = clifford_mul(v, &HalfSpinor::basis(field, half, idx));
        for r in 0..DIM_HALF {
            m[(r, idx)] = img.coords[r].clone();
        }
    }
    m
}

/// The duality pairing `S₋ × S₊ → k`: the top coefficient of `rev(t) ∧ s`,
/// where `rev` multiplies degree `d` by `(-1)^{d(d-1)/2}`.
pub fn pairing(t: &HalfSpinor, s: &HalfSpinor) -> Result<Scalar> {
    t.expect_half(Half::Minus)?;
    s.expect_half(Half::Plus)?;
    let tab = tables();
    let mut acc = t.field().zero();
    for (idx, x) in t.coords.iter().enumerate() {
        let (partner, sign) = tab.pairing[idx];
        let y = &s.coords[partner as usize];
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let term = x * y;
        if sign > 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
    }
    Ok(acc)
}

/// Pairs two spinors of opposite halves in whichever order they come.
pub fn pair_any(a: &HalfSpinor, b: &HalfSpinor) -> Result<Scalar> {
    match (a.half, b.half) {
        (Half::Minus, Half::Plus) => pairing(a, b),
        (Half::Plus, Half::Minus) => pairing(b, a),
        _ => Err(Error::HalfMismatch {
            expected: a.half.opposite(),
            found: b.half,
        }),
    }
}

/// 16×16 matrix `P[t][s] = ⟨e_t, e_s⟩` (rows: `S₋` index, cols: `S₊`).
pub fn pairing_matrix(field: FieldSpec) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(field, DIM_HALF, DIM_HALF);
    for (t, &(s, sign)) in tables().pairing.iter().enumerate() {
        m[(t, s as usize)] = field.from_i64(sign as i64);
    }
    m
}

/// The annihilator of `sub ⊂ S_half` under the pairing, inside the
/// opposite half.
pub fn pairing_perp(sub: &Subspace, half: Half) -> Subspace {
    let pm = pairing_matrix(sub.field());
    let dual_rows = match half {
        // ⟨t, s⟩ = tᵀ P s, so t ∈ S₋ pairs with s through the row t·P
        Half::Minus => sub.basis().mul(&pm),
        Half::Plus => sub.basis().mul(&pm.transpose()),
    };
    if sub.dim() == 0 {
        return Subspace::full(sub.field(), DIM_HALF);
    }
    Subspace::from_matrix(&dual_rows).annihilator()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f5() -> FieldSpec {
        FieldSpec::prime(5).unwrap()
    }

    #[test]
    fn subset_order_is_documented_order() {
        assert_eq!(
            subset_labels(Half::Plus).join(" "),
            "∅ 12 13 14 15 23 24 25 34 35 45 1234 1235 1245 1345 2345"
        );
        assert_eq!(
            subset_labels(Half::Minus).join(" "),
            "1 2 3 4 5 123 124 125 134 135 145 234 235 245 345 12345"
        );
    }

    #[test]
    fn quadratic_form_examples() {
        let f = f5();
        assert!(q_v(&VecV::e(f, 1)).is_zero());
        assert!(b_v(&VecV::e(f, 1), &VecV::f(f, 1)).is_one());
        assert!(q_v(&VecV::e(f, 1).add(&VecV::f(f, 1))).is_one());
        let f2 = FieldSpec::prime(2).unwrap();
        // b_V stays correct in characteristic 2
        assert!(b_v(&VecV::e(f2, 3), &VecV::f(f2, 3)).is_one());
    }

    #[test]
    fn clifford_examples() {
        let f = f5();
        let one = HalfSpinor::monomial(f, "");
        assert_eq!(clifford_mul(&VecV::e(f, 1), &one), HalfSpinor::monomial(f, "1"));
        let e1 = HalfSpinor::monomial(f, "1");
        assert_eq!(clifford_mul(&VecV::f(f, 1), &e1), one);
        assert!(clifford_mul(&VecV::f(f, 2), &e1).is_zero());
        let v = VecV::e(f, 1).add(&VecV::f(f, 1));
        assert_eq!(clifford_mul(&v, &e1), one);
        let s = HalfSpinor::random(f, Half::Plus, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(clifford_mul(&v, &clifford_mul(&v, &s)), s);
    }

    #[test]
    fn wedge_signs() {
        let f = f5();
        // e2 ∧ e13 = -e123
        let out = clifford_mul(&VecV::e(f, 2), &HalfSpinor::monomial(f, "13"));
        assert_eq!(out, HalfSpinor::monomial(f, "123").scale(&f.from_i64(-1)));
        // ι_{f3} e123 = e12
        let out = clifford_mul(&VecV::f(f, 3), &HalfSpinor::monomial(f, "123"));
        assert_eq!(out, HalfSpinor::monomial(f, "12"));
    }

    #[test]
    fn pairing_examples() {
        let f = f5();
        let m = |s: &str| HalfSpinor::monomial(f, s);
        assert!(pairing(&m("12345"), &m("")).unwrap().is_one());
        assert!(pairing(&m("1"), &m("2345")).unwrap().is_one());
        assert!(pairing(&m("1"), &m("1234")).unwrap().is_zero());
        assert!(matches!(
            pairing(&m(""), &m("1")),
            Err(Error::HalfMismatch { .. })
        ));
    }

    #[test]
    fn pairing_is_nondegenerate() {
        for field in [
            FieldSpec::prime(2).unwrap(),
            FieldSpec::prime(3).unwrap(),
            f5(),
            FieldSpec::Rationals,
        ] {
            assert_eq!(pairing_matrix(field).rank(), DIM_HALF);
        }
    }
}

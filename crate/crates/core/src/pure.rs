//! Pure spinors: the quadratic equations `μ` of `X ⊂ P(S₊)` and
//! `X^∨ ⊂ P(S₋)`, annihilators, spinor spans of isotropic subspaces, and
//! the maximal quadrics `Q_v` with their forms `Φ_v`.

use std::sync::OnceLock;

use num_integer::Integer;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar, SmallField};
use crate::linalg::{DenseMatrix, Subspace, SymBilinearForm};
use crate::spinor::{
    b_v, clifford_matrix, clifford_mul, pairing, q_v, tables, Half, HalfSpinor, VecV, DIM_HALF,
    DIM_V,
};

/// One monomial `coef · s_a · s_b` (with `a ≤ b`) of a quadric in spinor
/// coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadTerm {
    pub a: u8,
    pub b: u8,
    pub coef: i32,
}

/// Sign choice of the duality pairing, fixed once at startup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairingVariant {
    /// top coefficient of `rev(t) ∧ s`
    Reversal,
    /// top coefficient of `α(t) ∧ s` with `α` the grade involution
    GradeInvolution,
}

/// Calibrated conventions: pairing variant, adjunction sign, and the ten
/// integral quadrics of `μ` for each half.
#[derive(Debug)]
pub struct Conventions {
    pub variant: PairingVariant,
    /// `⟨v·s, t⟩ = ε ⟨s, v·t⟩`
    pub adjunction_sign: i8,
    /// `μ` is `½⟨v·s, s⟩` divided by this content (1 in practice); kept for
    /// reporting.
    pub content: i64,
    /// `mu[half][j]`: terms of the `j`-th coordinate of `μ` on that half.
    pub mu: [[Vec<QuadTerm>; DIM_V]; 2],
}

fn slot(h: Half) -> usize {
    match h {
        Half::Plus => 0,
        Half::Minus => 1,
    }
}

/// Integer `⟨e_t, e_s⟩` for minus index `t` and plus index `s`.
fn pairing_int(variant: PairingVariant, t: usize, s: usize) -> i64 {
    let (partner, sign) = tables().pairing[t];
    if partner as usize != s {
        return 0;
    }
    match variant {
        PairingVariant::Reversal => sign as i64,
        PairingVariant::GradeInvolution => {
            let d = tables().subsets[1][t].count_ones();
            // undo the reversal sign, apply (-1)^d
            let rev = if (d * (d - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
            let inv = if d.is_multiple_of(2) { 1 } else { -1 };
            sign as i64 * rev * inv
        }
    }
}

/// Integer image `w_j · e_idx` as (target, sign).
fn act(j: usize, half: Half, idx: usize) -> Option<(usize, i64)> {
    tables().action[j][slot(half)][idx].map(|(t, s)| (t as usize, s as i64))
}

/// `⟨w_j · e_a, e_b⟩` oriented per half: for `S₊`, `pairing(w·e_a, e_b)`;
/// for `S₋`, `pairing(e_b, w·e_a)`.
fn gamma_entry(variant: PairingVariant, half: Half, j: usize, a: usize, b: usize) -> i64 {
    let Some((img, sign)) = act(j, half, a) else {
        return 0;
    };
    sign * match half {
        Half::Plus => pairing_int(variant, img, b),
        Half::Minus => pairing_int(variant, b, img),
    }
}

/// `b_V`-dual basis index: coordinate `j` of `μ` is `b_V(μ, w_{dual(j)})`.
fn dual_index(j: usize) -> usize {
    (j + 5) % DIM_V
}

fn build_mu(variant: PairingVariant) -> ([[Vec<QuadTerm>; DIM_V]; 2], i64) {
    let mut raw: Vec<Vec<Vec<(u8, u8, i64)>>> = Vec::new();
    let mut content = 0i64;
    for half in [Half::Plus, Half::Minus] {
        let mut per_half = Vec::new();
        for j in 0..DIM_V {
            let w = dual_index(j);
            let mut terms = Vec::new();
            for a in 0..DIM_HALF {
                for b in a..DIM_HALF {
                    let c = if a == b {
                        gamma_entry(variant, half, w, a, a)
                    } else {
                        gamma_entry(variant, half, w, a, b) + gamma_entry(variant, half, w, b, a)
                    };
                    if c != 0 {
                        content = content.gcd(&c);
                        terms.push((a as u8, b as u8, c));
                    }
                }
            }
            per_half.push(terms);
        }
        raw.push(per_half);
    }
    let content = content.max(1);
    let to_terms = |v: &Vec<(u8, u8, i64)>| -> Vec<QuadTerm> {
        v.iter()
            .map(|&(a, b, c)| QuadTerm {
                a,
                b,
                coef: (c / content) as i32,
            })
            .collect()
    };
    let mu = [0, 1].map(|h| {
        let arr: [Vec<QuadTerm>; DIM_V] = std::array::from_fn(|j| to_terms(&raw[h][j]));
        arr
    });
    (mu, content)
}

fn eval_terms(terms: &[QuadTerm], s: &[Scalar], field: FieldSpec) -> Scalar {
    let mut acc = field.zero();
    for t in terms {
        let (x, y) = (&s[t.a as usize], &s[t.b as usize]);
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc += &(&field.from_i64(t.coef as i64) * &(x * y));
    }
    acc
}

fn calibration_passes(mu: &[[Vec<QuadTerm>; DIM_V]; 2]) -> bool {
    let f = FieldSpec::Rationals;
    let eval = |s: &HalfSpinor| -> Vec<Scalar> {
        mu[slot(s.half())]
            .iter()
            .map(|t| eval_terms(t, s.coords(), f))
            .collect()
    };
    let zero = |v: &[Scalar]| v.iter().all(Scalar::is_zero);
    let one = HalfSpinor::monomial(f, "");
    let e12 = HalfSpinor::monomial(f, "12");
    let witness = one.add(&HalfSpinor::monomial(f, "1234"));
    let e1 = HalfSpinor::monomial(f, "1");
    let dual_witness = e1.add(&HalfSpinor::monomial(f, "234"));
    zero(&eval(&one)) && zero(&eval(&e12)) && !zero(&eval(&witness)) && !zero(&eval(&dual_witness))
}

/// Global conventions, calibrated on first use: the reversal variant is
/// tried first and the grade-involution variant only if the calibration
/// fails.
pub fn conventions() -> &'static Conventions {
    static C: OnceLock<Conventions> = OnceLock::new();
    C.get_or_init(|| {
        for variant in [PairingVariant::Reversal, PairingVariant::GradeInvolution] {
            let (mu, content) = build_mu(variant);
            if calibration_passes(&mu) {
                let adjunction_sign = adjunction_sign(variant);
                return Conventions {
                    variant,
                    adjunction_sign,
                    content,
                    mu,
                };
            }
        }
        panic!("spinor convention calibration failed for both pairing variants");
    })
}

/// `ε` with `⟨v·s, t⟩ = ε⟨s, v·t⟩` for `s, t ∈ S₊`, read off the basis.
fn adjunction_sign(variant: PairingVariant) -> i8 {
    for j in 0..DIM_V {
        for a in 0..DIM_HALF {
            for b in 0..DIM_HALF {
                let lhs = gamma_entry(variant, Half::Plus, j, a, b);
                if lhs != 0 {
                    let rhs = gamma_entry(variant, Half::Plus, j, b, a);
                    return if lhs == rhs { 1 } else { -1 };
                }
            }
        }
    }
    1
}

/// The quadratic map `μ : S_± → V`, with `b_V(μ(s), v) = ½⟨v·s, s⟩`.
/// `μ(s) = 0` exactly when `s` is a pure spinor.
pub fn mu(s: &HalfSpinor) -> VecV {
    let field = s.field();
    let c = conventions();
    VecV::new(
        c.mu[slot(s.half())]
            .iter()
            .map(|t| eval_terms(t, s.coords(), field))
            .collect(),
    )
}

/// The symmetric bilinear map `μ(x + y) − μ(x) − μ(y)` (no division, valid
/// in every characteristic).
pub fn mu_polar(x: &HalfSpinor, y: &HalfSpinor) -> VecV {
    assert_eq!(x.half(), y.half());
    let field = x.field();
    let c = conventions();
    let (xs, ys) = (x.coords(), y.coords());
    VecV::new(
        c.mu[slot(x.half())]
            .iter()
            .map(|terms| {
                let mut acc = field.zero();
                for t in terms {
                    let (a, b) = (t.a as usize, t.b as usize);
                    let mut m = &xs[a] * &ys[b];
                    m += &(&xs[b] * &ys[a]);
                    if !m.is_zero() {
                        acc += &(&field.from_i64(t.coef as i64) * &m);
                    }
                }
                acc
            })
            .collect(),
    )
}

pub fn is_pure(s: &HalfSpinor) -> bool {
    !s.is_zero() && mu(s).is_zero()
}

/// Coordinates of `μ` on a finite field with `u32`-encoded elements.
pub fn mu_small<F: SmallField>(field: &F, half: Half, s: &[u32; DIM_HALF]) -> [u32; DIM_V] {
    let c = conventions();
    let mut out = [0u32; DIM_V];
    for (o, terms) in out.iter_mut().zip(&c.mu[slot(half)]) {
        *o = eval_small(field, terms, s);
    }
    out
}

#[inline]
fn eval_small<F: SmallField>(field: &F, terms: &[QuadTerm], s: &[u32; DIM_HALF]) -> u32 {
    let mut acc = 0u32;
    for t in terms {
        let (x, y) = (s[t.a as usize], s[t.b as usize]);
        if x == 0 || y == 0 {
            continue;
        }
        let m = field.mul(x, y);
        let c = t.coef;
        let m = if c < 0 { field.neg(m) } else { m };
        for _ in 0..c.unsigned_abs() {
            acc = field.add(acc, m);
        }
    }
    acc
}

/// `μ(s) = 0` with early exit; `s` is assumed nonzero.
#[inline]
pub fn is_pure_small<F: SmallField>(field: &F, half: Half, s: &[u32; DIM_HALF]) -> bool {
    conventions().mu[slot(half)]
        .iter()
        .all(|terms| eval_small(field, terms, s) == 0)
}

/// Matrix of `v ↦ v · s` (16 × 10).
fn action_on_vectors(s: &HalfSpinor) -> DenseMatrix {
    let field = s.field();
    let mut m = DenseMatrix::zeros(field, DIM_HALF, DIM_V);
    for j in 0..DIM_V {
        let img = clifford_mul(&VecV::basis(field, j), s);
        for r in 0..DIM_HALF {
            m[(r, j)] = img.coords()[r].clone();
        }
    }
    m
}

/// `{v ∈ V : v · s = 0}`; of dimension 5 exactly when `s` is pure.
pub fn annihilator(s: &HalfSpinor) -> Result<Subspace> {
    if s.is_zero() {
        return Err(Error::ZeroSpinor);
    }
    Ok(action_on_vectors(s).kernel())
}

/// The image `V · s = {v · s}` inside the opposite half.
pub fn clifford_image(s: &HalfSpinor) -> Subspace {
    Subspace::from_matrix(&action_on_vectors(s).transpose())
}

pub fn is_isotropic(u: &Subspace) -> bool {
    let vs: Vec<VecV> = u.basis_rows().iter().map(|r| VecV::new(r.to_vec())).collect();
    vs.iter().all(|v| q_v(v).is_zero())
        && vs
            .iter()
            .enumerate()
            .all(|(i, v)| vs[..i].iter().all(|w| b_v(v, w).is_zero()))
}

/// `{s ∈ S_half : u · s = 0 for all u ∈ U}` for an isotropic `U`; its
/// dimension is `2^{4 − dim U}`.
pub fn annihilator_kernel(u: &Subspace, half: Half) -> Result<Subspace> {
    if u.ambient() != DIM_V {
        return Err(Error::AmbientMismatch {
            left: u.ambient(),
            right: DIM_V,
        });
    }
    if !is_isotropic(u) {
        return Err(Error::NotIsotropic);
    }
    let d = u.dim();
    if !(1..=5).contains(&d) {
        return Err(Error::WrongDimension {
            expected: 1,
            found: d,
        });
    }
    let field = u.field();
    let mut eqs = DenseMatrix::zeros(field, 0, DIM_HALF);
    for row in u.basis_rows() {
        eqs = eqs.stack(&clifford_matrix(&VecV::new(row.to_vec()), half));
    }
    let k = eqs.kernel();
    let expected = 1usize << (4 - (d as u32).min(4));
    let expected = if d == 5 { 1 } else { expected };
    if d < 5 && k.dim() != expected {
        return Err(Error::WrongDimension {
            expected,
            found: k.dim(),
        });
    }
    Ok(k)
}

/// The maximal isotropic `F = ⟨f1..f5⟩` (spinor `1 ∈ S₊`).
pub fn reference_f(field: FieldSpec) -> Subspace {
    Subspace::span(field, DIM_V, (1..=5).map(|i| VecV::f(field, i).into_coords()).collect())
}

/// The maximal isotropic `E = ⟨e1..e5⟩` (spinor `e12345 ∈ S₋`).
pub fn reference_e(field: FieldSpec) -> Subspace {
    Subspace::span(field, DIM_V, (1..=5).map(|i| VecV::e(field, i).into_coords()).collect())
}

/// Family of a maximal isotropic subspace: `S₊` iff `dim(W ∩ F)` is odd.
pub fn family_of(w: &Subspace) -> Result<Half> {
    if w.dim() != 5 {
        return Err(Error::WrongDimension {
            expected: 5,
            found: w.dim(),
        });
    }
    if !is_isotropic(w) {
        return Err(Error::NotIsotropic);
    }
    let meet = w.intersect(&reference_f(w.field()))?.dim();
    Ok(if meet % 2 == 1 { Half::Plus } else { Half::Minus })
}

/// A pure spinor together with its maximal isotropic annihilator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PureSpinorWitness {
    pub spinor: HalfSpinor,
    pub annihilator: Subspace,
}

impl PureSpinorWitness {
    pub fn from_spinor(spinor: HalfSpinor) -> Result<Self> {
        let annihilator = annihilator(&spinor)?;
        if annihilator.dim() != 5 {
            return Err(Error::NotPure);
        }
        Ok(PureSpinorWitness {
            spinor,
            annihilator,
        })
    }

    /// The spinor line of a maximal isotropic `W`, in its own family.
    pub fn from_maximal_isotropic(w: &Subspace) -> Result<Self> {
        let half = family_of(w)?;
        let line = annihilator_kernel(w, half)?;
        if line.dim() != 1 {
            return Err(Error::WrongDimension {
                expected: 1,
                found: line.dim(),
            });
        }
        let spinor = HalfSpinor::new(half, line.basis_vec(0).to_vec());
        Ok(PureSpinorWitness {
            spinor,
            annihilator: w.clone(),
        })
    }

    pub fn half(&self) -> Half {
        self.spinor.half()
    }
}

/// The two maximal isotropic extensions of an isotropic 4-space, one per
/// family: `(plus, minus)`.
pub fn extend_isotropic4(u4: &Subspace) -> Result<(PureSpinorWitness, PureSpinorWitness)> {
    if u4.dim() != 4 {
        return Err(Error::WrongDimension {
            expected: 4,
            found: u4.dim(),
        });
    }
    let ext = |half| -> Result<PureSpinorWitness> {
        let line = annihilator_kernel(u4, half)?;
        PureSpinorWitness::from_spinor(HalfSpinor::new(half, line.basis_vec(0).to_vec()))
    };
    Ok((ext(Half::Plus)?, ext(Half::Minus)?))
}

/// A quadratic polynomial in `n` variables, stored as coefficients of
/// `x_i x_j` for `i ≤ j` in row-major upper-triangular order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticPoly {
    pub n: usize,
    pub coeffs: Vec<Scalar>,
}

impl QuadraticPoly {
    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        let field = x[0].field();
        let mut acc = field.zero();
        let mut k = 0;
        for i in 0..self.n {
            for j in i..self.n {
                let c = &self.coeffs[k];
                k += 1;
                if !c.is_zero() {
                    acc += &(c * &(&x[i] * &x[j]));
                }
            }
        }
        acc
    }

    /// Polar Gram matrix `b(x, y) = Q(x + y) − Q(x) − Q(y)`.
    pub fn polar_form(&self, field: FieldSpec) -> SymBilinearForm {
        let mut g = DenseMatrix::zeros(field, self.n, self.n);
        let mut k = 0;
        for i in 0..self.n {
            for j in i..self.n {
                let c = self.coeffs[k].clone();
                k += 1;
                if i == j {
                    g[(i, i)] = &c + &c;
                } else {
                    g[(i, j)] = c.clone();
                    g[(j, i)] = c;
                }
            }
        }
        SymBilinearForm::new(g).expect("symmetric")
    }
}

/// Restriction of coordinate `j` of `μ` to the span of `basis` rows.
fn restrict_mu_component(half: Half, j: usize, basis: &[&[Scalar]]) -> QuadraticPoly {
    let field = basis[0][0].field();
    let terms = &conventions().mu[slot(half)][j];
    let n = basis.len();
    let q = |x: &[Scalar]| eval_terms(terms, x, field);
    let values: Vec<Scalar> = basis.iter().map(|b| q(b)).collect();
    let mut coeffs = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for k in i..n {
            if i == k {
                coeffs.push(values[i].clone());
            } else {
                let sum = crate::linalg::add_vec(basis[i], basis[k]);
                coeffs.push(q(&sum) - &values[i] - &values[k]);
            }
        }
    }
    QuadraticPoly { n, coeffs }
}

/// The spinor 8-space `S₈,v` of an isotropic `v` in one half, and the
/// quadric `Φ_v` cutting out `Q_v = X ∩ P(S₈,v)` inside it.
#[derive(Clone, Debug)]
pub struct SpinorEightSpace {
    pub v: VecV,
    pub half: Half,
    pub space: Subspace,
    /// `Φ_v` as a polynomial in the echelon coordinates of `space`.
    pub quadric: QuadraticPoly,
    /// Rank of the span of the ten restricted quadrics.
    pub restricted_rank: usize,
    /// Polar Gram form of `Φ_v`; `None` in characteristic 2.
    pub phi: Option<SymBilinearForm>,
}

impl SpinorEightSpace {
    pub fn contains_point(&self, s: &HalfSpinor) -> bool {
        s.half() == self.half && self.space.contains(s.coords())
    }

    /// `Φ_v` at a spinor of the space.
    pub fn phi_value(&self, s: &HalfSpinor) -> Result<Scalar> {
        let coords = self.space.coordinates(s.coords()).ok_or(Error::NotInSubspace)?;
        Ok(self.quadric.eval(&coords))
    }
}

pub fn phi_v(v: &VecV, half: Half) -> Result<SpinorEightSpace> {
    if v.is_zero() || !q_v(v).is_zero() {
        return Err(Error::NotIsotropic);
    }
    let field = v.field();
    let line = Subspace::span(field, DIM_V, vec![v.coords().to_vec()]);
    let space = annihilator_kernel(&line, half)?;
    let basis = space.basis_rows();
    let polys: Vec<QuadraticPoly> = (0..DIM_V)
        .map(|j| restrict_mu_component(half, j, &basis))
        .collect();
    let m = DenseMatrix::from_rows(
        field,
        polys[0].coeffs.len(),
        polys.iter().map(|p| p.coeffs.clone()).collect(),
    );
    let restricted_rank = m.rank();
    let quadric = polys
        .into_iter()
        .find(|p| p.coeffs.iter().any(|c| !c.is_zero()))
        .ok_or(Error::WrongDimension {
            expected: 1,
            found: 0,
        })?;
    let phi = (field.characteristic() != 2).then(|| quadric.polar_form(field));
    Ok(SpinorEightSpace {
        v: v.clone(),
        half,
        space,
        quadric,
        restricted_rank,
        phi,
    })
}

/// Eichler transformation `x ↦ x + b(x,u)w − b(x,w)u − q(w)b(x,u)u` for an
/// isotropic `u` and `w ⊥ u`, as a 10×10 matrix acting on column vectors.
fn eichler(u: &VecV, w: &VecV) -> DenseMatrix {
    let field = u.field();
    let qw = q_v(w);
    let mut m = DenseMatrix::zeros(field, DIM_V, DIM_V);
    for j in 0..DIM_V {
        let x = VecV::basis(field, j);
        let bxu = b_v(&x, u);
        let bxw = b_v(&x, w);
        let img = x
            .add(&w.scale(&bxu))
            .add(&u.scale(&(-&bxw)))
            .add(&u.scale(&(-&(&qw * &bxu))));
        for r in 0..DIM_V {
            m[(r, j)] = img.coords()[r].clone();
        }
    }
    m
}

/// A random element of the spinorial kernel `Ω(V)`, as a product of
/// Eichler transformations along the coordinate isotropic lines. It
/// preserves `q_V` and both families of maximal isotropic subspaces.
pub fn random_isometry<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R) -> DenseMatrix {
    let steps = if field == FieldSpec::Rationals { 10 } else { 24 };
    let mut g = DenseMatrix::identity(field, DIM_V);
    for _ in 0..steps {
        let j = rng.gen_range(0..DIM_V);
        let u = VecV::basis(field, j);
        let mut coords: Vec<Scalar> = (0..DIM_V)
            .map(|_| match field {
                FieldSpec::Rationals => field.from_i64(rng.gen_range(-1..=1)),
                _ => field.random(rng),
            })
            .collect();
        // w ⊥ u: zero the coordinate paired with u (and u's own)
        coords[dual_index(j)] = field.zero();
        coords[j] = field.zero();
        g = eichler(&u, &VecV::new(coords)).mul(&g);
    }
    g
}

fn apply(g: &DenseMatrix, sub: &Subspace) -> Subspace {
    Subspace::from_matrix(&sub.basis().mul(&g.transpose()))
}

/// A random isotropic subspace of dimension `dim` (1..=5). For `dim = 5`
/// the family is `half`; otherwise `half` is ignored.
pub fn random_isotropic<R: Rng + ?Sized>(
    field: FieldSpec,
    dim: usize,
    half: Half,
    rng: &mut R,
) -> Subspace {
    assert!((1..=5).contains(&dim));
    let base = if dim == 5 {
        match half {
            Half::Plus => reference_f(field),
            Half::Minus => reference_e(field),
        }
    } else {
        Subspace::span(
            field,
            DIM_V,
            (1..=dim).map(|i| VecV::e(field, i).into_coords()).collect(),
        )
    };
    apply(&random_isometry(field, rng), &base)
}

/// A random pure spinor of the given half, with its annihilator.
pub fn random_pure<R: Rng + ?Sized>(field: FieldSpec, half: Half, rng: &mut R) -> PureSpinorWitness {
    let w = random_isotropic(field, 5, half, rng);
    let mut witness = PureSpinorWitness::from_maximal_isotropic(&w).expect("maximal isotropic");
    // random scaling of the representative
    witness.spinor = witness.spinor.scale(&field.random_nonzero(rng));
    witness
}

/// A random isotropic nonzero vector.
pub fn random_isotropic_vector<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R) -> VecV {
    let line = random_isotropic(field, 1, Half::Plus, rng);
    VecV::new(line.basis_vec(0).to_vec()).scale(&field.random_nonzero(rng))
}

/// A random spinor whose annihilator has dimension < 5.
pub fn random_impure<R: Rng + ?Sized>(field: FieldSpec, half: Half, rng: &mut R) -> HalfSpinor {
    loop {
        let s = HalfSpinor::random(field, half, rng);
        if !s.is_zero() && annihilator(&s).map(|a| a.dim() < 5).unwrap_or(false) {
            return s;
        }
    }
}

/// Convenience: `⟨v · s, t⟩` oriented so that both arguments are in the
/// same half as `s`.
pub fn bracket(v: &VecV, s: &HalfSpinor, t: &HalfSpinor) -> Result<Scalar> {
    let vs = clifford_mul(v, s);
    match s.half() {
        Half::Plus => pairing(&vs, t),
        Half::Minus => pairing(t, &vs),
    }
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
    fn calibration_uses_reversal() {
        let c = conventions();
        assert_eq!(c.variant, PairingVariant::Reversal);
        assert!(c.mu[0].iter().all(|t| !t.is_empty()));
    }

    #[test]
    fn mu_examples() {
        let f = f5();
        assert!(mu(&HalfSpinor::monomial(f, "")).is_zero());
        assert!(mu(&HalfSpinor::monomial(f, "12")).is_zero());
        let w = HalfSpinor::monomial(f, "").add(&HalfSpinor::monomial(f, "1234"));
        let m = mu(&w);
        assert!(!m.is_zero());
        assert!(m.is_proportional(&VecV::f(f, 5)));
        // in characteristic 2 the witness is still detected
        let f2 = FieldSpec::prime(2).unwrap();
        let w2 = HalfSpinor::monomial(f2, "").add(&HalfSpinor::monomial(f2, "1234"));
        assert!(!mu(&w2).is_zero());
    }

    #[test]
    fn mu_matches_bracket() {
        let f = FieldSpec::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let two = f.from_i64(2);
        for half in [Half::Plus, Half::Minus] {
            for _ in 0..20 {
                let s = HalfSpinor::random(f, half, &mut rng);
                let v = VecV::random(f, &mut rng);
                let lhs = &b_v(&mu(&s), &v) * &two;
                let rhs = bracket(&v, &s, &s).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn annihilator_examples() {
        let f = f5();
        assert_eq!(annihilator(&HalfSpinor::monomial(f, "")).unwrap(), reference_f(f));
        let a = annihilator(&HalfSpinor::monomial(f, "2345")).unwrap();
        let expected = Subspace::span(f, DIM_V, vec![
            VecV::f(f, 1).into_coords(),
            VecV::e(f, 2).into_coords(),
            VecV::e(f, 3).into_coords(),
            VecV::e(f, 4).into_coords(),
            VecV::e(f, 5).into_coords(),
        ]);
        assert_eq!(a, expected);
        let w = HalfSpinor::monomial(f, "").add(&HalfSpinor::monomial(f, "1234"));
        let a = annihilator(&w).unwrap();
        assert_eq!(a, Subspace::span(f, DIM_V, vec![VecV::f(f, 5).into_coords()]));
        assert_eq!(annihilator(&HalfSpinor::zero(f, Half::Plus)), Err(Error::ZeroSpinor));
    }

    #[test]
    fn annihilator_kernel_examples() {
        let f = f5();
        let span = |vs: Vec<VecV>| Subspace::span(f, DIM_V, vs.into_iter().map(VecV::into_coords).collect());
        let k = annihilator_kernel(&span(vec![VecV::e(f, 1)]), Half::Plus).unwrap();
        assert_eq!(k.dim(), 8);
        let labels = crate::spinor::subset_labels(Half::Plus);
        for (idx, l) in labels.iter().enumerate() {
            let b = HalfSpinor::basis(f, Half::Plus, idx);
            assert_eq!(k.contains(b.coords()), l.contains('1'), "label {l}");
        }
        let u3 = span(vec![VecV::e(f, 1), VecV::e(f, 2), VecV::e(f, 3)]);
        let k = annihilator_kernel(&u3, Half::Plus).unwrap();
        let expected = Subspace::span(f, DIM_HALF, vec![
            HalfSpinor::monomial(f, "1234").coords().to_vec(),
            HalfSpinor::monomial(f, "1235").coords().to_vec(),
        ]);
        assert_eq!(k, expected);
        let u4 = span((2..=5).map(|i| VecV::f(f, i)).collect());
        let k = annihilator_kernel(&u4, Half::Plus).unwrap();
        assert_eq!(k, Subspace::span(f, DIM_HALF, vec![HalfSpinor::monomial(f, "").coords().to_vec()]));
        let bad = span(vec![VecV::e(f, 1).add(&VecV::f(f, 1))]);
        assert_eq!(annihilator_kernel(&bad, Half::Plus), Err(Error::NotIsotropic));
    }

    #[test]
    fn extend_examples() {
        let f = f5();
        let span = |vs: Vec<VecV>| Subspace::span(f, DIM_V, vs.into_iter().map(VecV::into_coords).collect());
        let (p, m) = extend_isotropic4(&span((2..=5).map(|i| VecV::f(f, i)).collect())).unwrap();
        assert_eq!(p.annihilator, reference_f(f));
        assert!(p.spinor.is_proportional_to(&HalfSpinor::monomial(f, "")));
        assert!(m.spinor.is_proportional_to(&HalfSpinor::monomial(f, "1")));
        let (p, m) = extend_isotropic4(&span((1..=4).map(|i| VecV::e(f, i)).collect())).unwrap();
        assert_eq!(m.annihilator, reference_e(f));
        assert!(m.spinor.is_proportional_to(&HalfSpinor::monomial(f, "12345")));
        assert!(p.spinor.is_proportional_to(&HalfSpinor::monomial(f, "1234")));
    }

    #[test]
    fn phi_f1_is_pfaffian_quadric() {
        let f = FieldSpec::prime(3).unwrap();
        let e8 = phi_v(&VecV::f(f, 1), Half::Plus).unwrap();
        assert_eq!(e8.space.dim(), 8);
        assert_eq!(e8.restricted_rank, 1);
        assert_eq!(e8.phi.as_ref().unwrap().corank(), 0);
        // zero locus of Φ inside P(S8) equals the pure spinors there
        let basis = e8.space.basis_rows();
        let mut count = 0;
        for code in 1..3u32.pow(8) {
            let mut c = code;
            let coeffs: Vec<Scalar> = (0..8)
                .map(|_| {
                    let d = c % 3;
                    c /= 3;
                    f.from_i64(d as i64)
                })
                .collect();
            let s = HalfSpinor::new(Half::Plus, crate::linalg::combine(f, DIM_HALF, &coeffs, &basis));
            let on_quadric = e8.quadric.eval(&coeffs).is_zero();
            assert_eq!(on_quadric, is_pure(&s));
            count += on_quadric as u32;
        }
        // affine cone over a smooth 6-dim quadric over F_3: (3-1) * #Q6(F_3)
        assert_eq!(count, 2 * (1 + 3 + 9 + 27 + 27 + 81 + 243 + 729));
    }
}

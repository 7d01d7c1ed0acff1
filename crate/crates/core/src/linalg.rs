//! Dense exact linear algebra: matrices, subspaces in reduced echelon form,
//! and symmetric bilinear forms.

use std::fmt;
use std::ops::{Index, IndexMut};

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>, // row-major
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_text()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl DenseMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        DenseMatrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<Vec<Scalar>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            debug_assert!(row.iter().all(|x| field.contains(x)));
            data.extend(row);
        }
        DenseMatrix {
            field,
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_i64_rows(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            field,
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        )
    }

    pub fn random<R: Rng + ?Sized>(field: FieldSpec, rows: usize, cols: usize, rng: &mut R) -> Self {
        DenseMatrix {
            field,
            rows,
            cols,
            data: (0..rows * cols).map(|_| field.random(rng)).collect(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += &prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }

    pub fn stack(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.cols, "stacking matrices of different widths");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        DenseMatrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Reduced row-echelon form with zero rows dropped, and the pivot columns.
    pub fn rref(&self) -> (DenseMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, pr);
            let inv = m[(row, col)].inv().expect("nonzero pivot");
            for c in col..m.cols {
                let x = &m[(row, c)] * &inv;
                m[(row, c)] = x;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    let x = &factor * &m[(row, c)];
                    m[(r, c)] -= &x;
                }
            }
            pivots.push(col);
            row += 1;
        }
        m.data.truncate(row * m.cols);
        m.rows = row;
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Right null space `{x : M x = 0}`.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let field = self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let rows = free
            .iter()
            .map(|&fc| {
                let mut v = vec![field.zero(); self.cols];
                v[fc] = field.one();
                for (pr, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&r[(pr, fc)];
                }
                v
            })
            .collect();
        Subspace::span(field, self.cols, rows)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    assert_eq!(a.len(), b.len());
    let field = a.first().map(Scalar::field);
    let mut acc = match field {
        Some(f) => f.zero(),
        None => return FieldSpec::Rationals.zero(),
    };
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

pub fn add_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale_vec(c: &Scalar, a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| c * x).collect()
}

/// Linear combination `Σ coeffs[i] * rows[i]`.
pub fn combine(field: FieldSpec, len: usize, coeffs: &[Scalar], rows: &[&[Scalar]]) -> Vec<Scalar> {
    let mut out = vec![field.zero(); len];
    for (c, row) in coeffs.iter().zip(rows) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row.iter()) {
            *o += &(c * x);
        }
    }
    out
}

/// A linear subspace of `field^ambient`, stored by its reduced echelon basis.
///
/// Two subspaces are equal exactly when their echelon bases are identical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: DenseMatrix,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) ", self.dim(), self.ambient)?;
        self.basis.fmt(f)
    }
}

impl Subspace {
    pub fn span(field: FieldSpec, ambient: usize, rows: Vec<Vec<Scalar>>) -> Self {
        Self::from_matrix(&DenseMatrix::from_rows(field, ambient, rows))
    }

    /// Row space of `m`.
    pub fn from_matrix(m: &DenseMatrix) -> Self {
        let (basis, pivots) = m.rref();
        Subspace {
            ambient: m.cols(),
            basis,
            pivots,
        }
    }

    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Self::from_matrix(&DenseMatrix::zeros(field, 0, ambient))
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        Self::from_matrix(&DenseMatrix::identity(field, ambient))
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &DenseMatrix {
        &self.basis
    }

    pub fn basis_vec(&self, i: usize) -> &[Scalar] {
        self.basis.row(i)
    }

    pub fn basis_rows(&self) -> Vec<&[Scalar]> {
        (0..self.dim()).map(|i| self.basis.row(i)).collect()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient);
        // reduce v against the echelon basis
        let mut w = v.to_vec();
        for (r, &pc) in self.pivots.iter().enumerate() {
            if w[pc].is_zero() {
                continue;
            }
            let c = w[pc].clone();
            for (x, b) in w.iter_mut().zip(self.basis.row(r)) {
                *x -= &(&c * b);
            }
        }
        w.iter().all(Scalar::is_zero)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis_rows().into_iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Subspace::from_matrix(&self.basis.stack(&other.basis)))
    }

    /// Annihilator under the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        self.basis.kernel()
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let eqs = self
            .annihilator()
            .basis
            .stack(&other.annihilator().basis);
        Ok(eqs.kernel())
    }

    pub fn orth_complement(&self, form: &SymBilinearForm) -> Result<Subspace> {
        if form.dim() != self.ambient {
            return Err(Error::AmbientMismatch {
                left: self.ambient,
                right: form.dim(),
            });
        }
        Ok(self.basis.mul(form.gram()).kernel())
    }

    /// A random element `Σ c_i b_i` with independent uniform coefficients.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Scalar> {
        let field = self.field();
        let coeffs: Vec<Scalar> = (0..self.dim()).map(|_| field.random(rng)).collect();
        combine(field, self.ambient, &coeffs, &self.basis_rows())
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is not in
    /// the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc].clone()).collect())
    }
}

/// Symmetric bilinear form given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymBilinearForm {
    gram: DenseMatrix,
}

impl SymBilinearForm {
    pub fn new(gram: DenseMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::Usage("Gram matrix is not symmetric".into()));
        }
        Ok(SymBilinearForm { gram })
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn field(&self) -> FieldSpec {
        self.gram.field()
    }

    pub fn gram(&self) -> &DenseMatrix {
        &self.gram
    }

    pub fn eval(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        dot(x, &self.gram.mul_vec(y))
    }

    /// `f(x, x) / 2`, the quadratic form whose polar form is `f`.
    pub fn quadratic_value(&self, x: &[Scalar]) -> Result<Scalar> {
        self.field().require_odd_characteristic()?;
        let two_inv = self.field().from_i64(2).inv().expect("odd characteristic");
        Ok(&self.eval(x, x) * &two_inv)
    }

    pub fn rank(&self) -> usize {
        self.gram.rank()
    }

    pub fn corank(&self) -> usize {
        self.dim() - self.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.gram.is_zero()
    }

    /// Gram matrix on the echelon basis of `sub`, together with its corank.
    pub fn restrict(&self, sub: &Subspace) -> Result<(SymBilinearForm, usize)> {
        if sub.ambient() != self.dim() {
            return Err(Error::AmbientMismatch {
                left: sub.ambient(),
                right: self.dim(),
            });
        }
        let b = sub.basis();
        let gram = b.mul(&self.gram).mul(&b.transpose());
        let form = SymBilinearForm { gram };
        let corank = form.corank();
        Ok((form, corank))
    }

    /// Whether every vector of `sub` is orthogonal to all of `sub`.
    pub fn is_totally_isotropic_on(&self, sub: &Subspace) -> Result<bool> {
        Ok(self.restrict(sub)?.0.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u32) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = DenseMatrix::identity(f(7), 3);
        let (r, piv) = id.rref();
        assert_eq!(r, id);
        assert_eq!(piv.len(), 3);
        let z = DenseMatrix::zeros(f(7), 2, 4);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.rref().0.rows(), 0);
    }

    #[test]
    fn rref_dependent_rows_f5() {
        let m = DenseMatrix::from_i64_rows(f(5), &[&[1, 2], &[2, 4]]);
        let (r, piv) = m.rref();
        assert_eq!(piv, vec![0]);
        assert_eq!(r, DenseMatrix::from_i64_rows(f(5), &[&[1, 2]]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(DenseMatrix::identity(f(3), 4).kernel().dim(), 0);
        assert_eq!(DenseMatrix::zeros(f(3), 2, 3).kernel().dim(), 3);
        let m = DenseMatrix::from_i64_rows(f(3), &[&[1, 1, 0]]);
        let k = m.kernel();
        assert_eq!(k.dim(), 2);
        for v in k.basis_rows() {
            assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn intersect_examples() {
        let field = f(5);
        let a = Subspace::span(field, 4, vec![
            vec![field.one(), field.zero(), field.zero(), field.zero()],
            vec![field.zero(), field.one(), field.zero(), field.zero()],
        ]);
        let b = Subspace::span(field, 4, vec![
            vec![field.zero(), field.zero(), field.one(), field.zero()],
            vec![field.zero(), field.zero(), field.zero(), field.one()],
        ]);
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert_eq!(a.intersect(&b).unwrap().dim(), 0);
        let c = Subspace::zero(field, 3);
        assert!(matches!(a.intersect(&c), Err(Error::AmbientMismatch { .. })));

        // generic 5-dim subspaces of an 8-space meet in dimension 2
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let big = f(65521);
        for _ in 0..10 {
            let a = Subspace::from_matrix(&DenseMatrix::random(big, 5, 8, &mut rng));
            let b = Subspace::from_matrix(&DenseMatrix::random(big, 5, 8, &mut rng));
            assert_eq!(a.intersect(&b).unwrap().dim(), 2);
        }
    }

    fn hyperbolic(field: FieldSpec, pairs: usize) -> SymBilinearForm {
        let n = 2 * pairs;
        let mut g = DenseMatrix::zeros(field, n, n);
        for i in 0..pairs {
            g[(i, i + pairs)] = field.one();
            g[(i + pairs, i)] = field.one();
        }
        SymBilinearForm::new(g).unwrap()
    }

    #[test]
    fn orth_complement_examples() {
        let field = f(3);
        let h = hyperbolic(field, 1);
        let zero = Subspace::zero(field, 2);
        assert_eq!(zero.orth_complement(&h).unwrap(), Subspace::full(field, 2));
        let e = Subspace::span(field, 2, vec![vec![field.one(), field.zero()]]);
        assert_eq!(e.orth_complement(&h).unwrap(), e);
        let v = Subspace::span(field, 2, vec![vec![field.one(), field.one()]]);
        let vp = v.orth_complement(&h).unwrap();
        assert_eq!(vp.dim(), 1);
        assert!(!v.is_subspace_of(&vp));
    }

    #[test]
    fn restrict_examples() {
        let field = f(5);
        let h = hyperbolic(field, 2);
        // <e1, e2> is totally isotropic
        let iso = Subspace::span(field, 4, vec![
            vec![field.one(), field.zero(), field.zero(), field.zero()],
            vec![field.zero(), field.one(), field.zero(), field.zero()],
        ]);
        let (r, corank) = h.restrict(&iso).unwrap();
        assert!(r.is_zero());
        assert_eq!(corank, 2);
        let (full, corank) = h.restrict(&Subspace::full(field, 4)).unwrap();
        assert_eq!(full, h);
        assert_eq!(corank, 0);
        // <e1, f1>
        let plane = Subspace::span(field, 4, vec![
            vec![field.one(), field.zero(), field.zero(), field.zero()],
            vec![field.zero(), field.zero(), field.one(), field.zero()],
        ]);
        let (r, corank) = h.restrict(&plane).unwrap();
        assert_eq!(r.gram(), &DenseMatrix::from_i64_rows(field, &[&[0, 1], &[1, 0]]));
        assert_eq!(corank, 0);
        assert!(matches!(
            hyperbolic(f(2), 1).quadratic_value(&[f(2).one(), f(2).one()]),
            Err(Error::CharacteristicTwo)
        ));
    }

    #[test]
    fn rational_rank() {
        let q = FieldSpec::Rationals;
        let m = DenseMatrix::from_i64_rows(q, &[&[2, 4, 6], &[1, 3, 5], &[3, 7, 11]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.kernel().dim(), 1);
    }
}

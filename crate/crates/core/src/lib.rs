//! Exact computations with the spinor tenfold `X = OGr₊(5,10) ⊂ P(S₊)`, its
//! projective dual `X^∨ ⊂ P(S₋)`, and their linear sections.
//!
//! Everything is exact: scalars live in a prime field `F_p` or in `Q`.
//! Point counts over finite fields are obtained by deterministic parallel
//! scans of projective spaces.

pub mod count;
pub mod error;
pub mod field;
pub mod line_complex;
pub mod linalg;
pub mod linear_spaces;
pub mod pure;
pub mod scan;
pub mod scene;
pub mod section;
pub mod spinor;
pub mod verify;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use linalg::{DenseMatrix, Subspace, SymBilinearForm};
pub use spinor::{Half, HalfSpinor, VecV};

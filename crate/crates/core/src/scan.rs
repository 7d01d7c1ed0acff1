//! Enumeration of projective points `P(W)(F_q)` for a subspace `W ⊂ F_q^n`.
//!
//! Points are visited in normalized-lexicographic order of their coefficient
//! vectors: the first nonzero coefficient is 1, earlier leading positions
//! first, and the tail runs as a big-endian odometer over element codes.
//! Work is split into contiguous chunks of that order, so collected results
//! are identical for any number of workers.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, PrimeField, SmallField};
use crate::linalg::Subspace;
use crate::pure::is_pure_small;
use crate::spinor::{Half, DIM_HALF};

/// A point buffer; only the first `n` coordinates are meaningful.
pub type Point = [u32; DIM_HALF];

const CHUNK_DIGITS_TARGET: u64 = 4096;

/// `#P^{d−1}(F_order) = (order^d − 1)/(order − 1)`, or `None` on overflow.
pub fn projective_size(order: u64, d: usize) -> Option<u128> {
    let order = order as u128;
    let mut total: u128 = 0;
    let mut power: u128 = 1;
    for _ in 0..d {
        total = total.checked_add(power)?;
        power = power.checked_mul(order)?;
    }
    Some(total)
}

/// `#P^n(F_order)` for `n ≥ −1` (empty for `n = −1`).
pub fn pn_count(order: u64, n: i64) -> u128 {
    if n < 0 {
        0
    } else {
        projective_size(order, n as usize + 1).expect("projective count overflow")
    }
}

/// Residues of an echelon basis over `F_p`.
pub fn basis_residues(sub: &Subspace) -> Result<Vec<Point>> {
    let FieldSpec::Prime { p } = sub.field() else {
        return Err(Error::UnsupportedField(0));
    };
    if sub.ambient() > DIM_HALF {
        return Err(Error::WrongDimension {
            expected: DIM_HALF,
            found: sub.ambient(),
        });
    }
    Ok(sub
        .basis_rows()
        .iter()
        .map(|row| {
            let mut out = [0u32; DIM_HALF];
            for (o, x) in out.iter_mut().zip(row.iter()) {
                *o = x.residue() % p;
            }
            out
        })
        .collect())
}

/// Embeds prime-field rows into an extension (identity on codes `0..p`).
pub fn embed_rows<F: SmallField>(field: &F, rows: &[Point]) -> Vec<Point> {
    rows.iter()
        .map(|r| {
            let mut out = [0u32; DIM_HALF];
            for (o, &x) in out.iter_mut().zip(r) {
                *o = field.from_prime_residue(x);
            }
            out
        })
        .collect()
}

#[derive(Clone, Copy, Debug)]
struct Chunk {
    lead: usize,
    /// Value of the high tail digits, as a base-q number.
    prefix: u64,
    low_digits: usize,
}

fn chunks(order: u64, d: usize) -> Vec<Chunk> {
    let mut out = Vec::new();
    for lead in 0..d {
        let tail = d - 1 - lead;
        let mut low = 0;
        let mut size = 1u64;
        while low < tail && size * order <= CHUNK_DIGITS_TARGET {
            size *= order;
            low += 1;
        }
        let high = tail - low;
        let prefixes = order.pow(high as u32);
        out.extend((0..prefixes).map(|prefix| Chunk {
            lead,
            prefix,
            low_digits: low,
        }));
    }
    out
}

fn axpy<F: SmallField>(field: &F, n: usize, acc: &mut Point, c: u32, row: &Point) {
    if c == 0 {
        return;
    }
    for t in 0..n {
        if row[t] != 0 {
            acc[t] = field.add(acc[t], field.mul(c, row[t]));
        }
    }
}

/// Visits every point of `P(span rows)` in the chunk, calling `visit` with
/// the coefficient vector and the point.
fn run_chunk<F, V>(field: &F, rows: &[Point], n: usize, chunk: Chunk, visit: &mut V)
where
    F: SmallField,
    V: FnMut(&[u32], &Point),
{
    let d = rows.len();
    let q = field.order() as u64;
    let mut coeffs = vec![0u32; d];
    coeffs[chunk.lead] = 1;
    let tail_start = chunk.lead + 1;
    let low_start = d - chunk.low_digits;
    let mut rem = chunk.prefix;
    for j in (tail_start..low_start).rev() {
        coeffs[j] = (rem % q) as u32;
        rem /= q;
    }
    let mut point = [0u32; DIM_HALF];
    for (j, &c) in coeffs.iter().enumerate() {
        axpy(field, n, &mut point, c, &rows[j]);
    }
    loop {
        visit(&coeffs, &point);
        // odometer over the low digits
        let mut j = d;
        loop {
            if j == low_start {
                return;
            }
            j -= 1;
            let old = coeffs[j];
            let new = if old + 1 == q as u32 { 0 } else { old + 1 };
            coeffs[j] = new;
            axpy(field, n, &mut point, field.sub(new, old), &rows[j]);
            if new != 0 {
                break;
            }
        }
    }
}

/// Ordered list of `f(coeffs, point)` over all points where it is `Some`.
pub fn collect_projective<F, T, G>(field: &F, rows: &[Point], n: usize, f: G) -> Vec<T>
where
    F: SmallField,
    T: Send,
    G: Fn(&[u32], &Point) -> Option<T> + Sync,
{
    if rows.is_empty() {
        return Vec::new();
    }
    chunks(field.order() as u64, rows.len())
        .into_par_iter()
        .map(|chunk| {
            let mut local = Vec::new();
            run_chunk(field, rows, n, chunk, &mut |c: &[u32], p: &Point| {
                if let Some(x) = f(c, p) {
                    local.push(x);
                }
            });
            local
        })
        .flatten()
        .collect()
}

/// Number of points of `P(span rows)` satisfying `pred`.
pub fn count_projective<F, G>(field: &F, rows: &[Point], n: usize, pred: G) -> u64
where
    F: SmallField,
    G: Fn(&Point) -> bool + Sync,
{
    if rows.is_empty() {
        return 0;
    }
    chunks(field.order() as u64, rows.len())
        .into_par_iter()
        .map(|chunk| {
            let mut local = 0u64;
            run_chunk(field, rows, n, chunk, &mut |_: &[u32], p: &Point| {
                local += pred(p) as u64;
            });
            local
        })
        .sum()
}

/// First point (in scan order) satisfying `pred`, as coefficients and point.
pub fn find_projective<F, G>(field: &F, rows: &[Point], n: usize, pred: G) -> Option<(Vec<u32>, Point)>
where
    F: SmallField,
    G: Fn(&Point) -> bool + Sync,
{
    if rows.is_empty() {
        return None;
    }
    // chunks are searched in order; within a batch the earliest hit wins
    let all = chunks(field.order() as u64, rows.len());
    for batch in all.chunks(64) {
        let hits: Vec<Option<(Vec<u32>, Point)>> = batch
            .par_iter()
            .map(|&chunk| {
                let mut hit = None;
                run_chunk(field, rows, n, chunk, &mut |c: &[u32], p: &Point| {
                    if hit.is_none() && pred(p) {
                        hit = Some((c.to_vec(), *p));
                    }
                });
                hit
            })
            .collect();
        if let Some(h) = hits.into_iter().flatten().next() {
            return Some(h);
        }
    }
    None
}

fn standard_rows(n: usize) -> Vec<Point> {
    (0..n)
        .map(|i| {
            let mut r = [0u32; DIM_HALF];
            r[i] = 1;
            r
        })
        .collect()
}

/// `X(F_q)` or `X^∨(F_q)` for `q ∈ {2, 3}`, by a full scan of `P¹⁵(F_q)`;
/// computed once per process.
pub fn pure_points(q: u32, half: Half) -> Result<&'static [Point]> {
    static CACHE: [[OnceLock<Vec<Point>>; 2]; 2] =
        [[OnceLock::new(), OnceLock::new()], [OnceLock::new(), OnceLock::new()]];
    let qi = match q {
        2 => 0,
        3 => 1,
        _ => return Err(Error::UnsupportedField(q)),
    };
    let hi = match half {
        Half::Plus => 0,
        Half::Minus => 1,
    };
    Ok(CACHE[qi][hi].get_or_init(|| {
        let field = PrimeField { p: q };
        collect_projective(&field, &standard_rows(DIM_HALF), DIM_HALF, |_, p| {
            is_pure_small(&field, half, p).then_some(*p)
        })
    }))
}

//! Spinor and vector literals on the command line.
//!
//! Spinors are sums of monomials `c*e<digits>` where the digits name a
//! subset of `{1..5}` and `1` is the empty monomial: `e1+e234`, `2*e12-1`.
//! Vectors use `e1..e5`, `f1..f5`: `e1+3*f2`.

use spinor10::field::{FieldSpec, Scalar};
use spinor10::spinor::{HalfSpinor, VecV};
use spinor10::{Error, Result};

fn terms(text: &str) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for ch in text.chars().filter(|c| !c.is_whitespace()) {
        if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('/') {
            out.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if (ch == '+' || ch == '-') && cur.is_empty() {
            neg ^= ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(Error::Usage(format!("empty term in {text:?}")));
    }
    out.push((neg, cur));
    Ok(out)
}

fn coefficient(field: FieldSpec, text: &str) -> Result<Scalar> {
    let q = Scalar::parse_rational(text).map_err(|_| Error::Usage(format!("bad coefficient {text:?}")))?;
    match (field, &q) {
        (FieldSpec::Rationals, _) => Ok(q),
        (FieldSpec::Prime { p }, _) => q
            .reduce_mod(p)
            .map(|v| field.from_i64(v as i64))
            .ok_or_else(|| Error::Usage(format!("coefficient {text:?} has a denominator divisible by {p}"))),
    }
}

fn split_term(field: FieldSpec, term: &str) -> Result<(Scalar, &str)> {
    match term.split_once('*') {
        Some((c, m)) => Ok((coefficient(field, c)?, m)),
        None => Ok((field.one(), term)),
    }
}

pub fn parse_spinor(field: FieldSpec, text: &str) -> Result<HalfSpinor> {
    let mut acc: Option<HalfSpinor> = None;
    for (neg, term) in terms(text)? {
        let (mut c, mono) = split_term(field, &term)?;
        let digits = match mono {
            "1" => "",
            m => m
                .strip_prefix('e')
                .filter(|d| !d.is_empty() && d.chars().all(|c| ('1'..='5').contains(&c)))
                .ok_or_else(|| Error::Usage(format!("bad spinor monomial {mono:?}")))?,
        };
        let mut seen = [false; 6];
        for d in digits.bytes() {
            let i = (d - b'0') as usize;
            if seen[i] {
                return Err(Error::Usage(format!("repeated index in {mono:?}")));
            }
            seen[i] = true;
        }
        if neg {
            c = -&c;
        }
        // monomials index sorted subsets; reorder with the sign of the permutation
        let mut idx: Vec<u8> = digits.bytes().collect();
        let mut swaps = 0;
        for i in 0..idx.len() {
            for j in 0..idx.len() - 1 - i {
                if idx[j] > idx[j + 1] {
                    idx.swap(j, j + 1);
                    swaps += 1;
                }
            }
        }
        if swaps % 2 == 1 {
            c = -&c;
        }
        let m = HalfSpinor::monomial(field, std::str::from_utf8(&idx).expect("ascii"));
        let m = m.scale(&c);
        acc = Some(match acc {
            None => m,
            Some(a) if a.half() == m.half() => a.add(&m),
            Some(_) => return Err(Error::Usage(format!("{text:?} mixes even and odd monomials"))),
        });
    }
    Ok(acc.expect("at least one term"))
}

pub fn parse_vector(field: FieldSpec, text: &str) -> Result<VecV> {
    let mut acc = VecV::zero(field);
    for (neg, term) in terms(text)? {
        let (mut c, mono) = split_term(field, &term)?;
        let bad = || Error::Usage(format!("bad vector term {mono:?} (expected e1..e5 or f1..f5)"));
        let (kind, digit) = mono.split_at(1.min(mono.len()));
        let i: usize = digit.parse().map_err(|_| bad())?;
        if !(1..=5).contains(&i) {
            return Err(bad());
        }
        let basis = match kind {
            "e" => VecV::e(field, i),
            "f" => VecV::f(field, i),
            _ => return Err(bad()),
        };
        if neg {
            c = -&c;
        }
        acc = acc.add(&basis.scale(&c));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use spinor10::spinor::Half;

    #[test]
    fn spinor_literals() {
        let f5 = FieldSpec::prime(5).unwrap();
        let s = parse_spinor(f5, "e1 + e234").unwrap();
        assert_eq!(s.half(), Half::Minus);
        assert_eq!(s, HalfSpinor::monomial(f5, "1").add(&HalfSpinor::monomial(f5, "234")));
        // e21 = -e12
        let a = parse_spinor(f5, "e21").unwrap();
        assert_eq!(a, HalfSpinor::monomial(f5, "12").scale(&f5.from_i64(-1)));
        let b = parse_spinor(f5, "2*e12-1").unwrap();
        assert_eq!(b.half(), Half::Plus);
        assert!(parse_spinor(f5, "e1+e12").is_err());
        assert!(parse_spinor(f5, "e6").is_err());
        assert!(parse_spinor(f5, "e11").is_err());
        let q = parse_spinor(FieldSpec::Rationals, "1/2*e1 - 3/4*e123").unwrap();
        assert_eq!(q.coords()[0].to_text(), "1/2");
    }

    #[test]
    fn vector_literals() {
        let f3 = FieldSpec::prime(3).unwrap();
        let v = parse_vector(f3, "e1+2*f1").unwrap();
        assert_eq!(v, VecV::e(f3, 1).add(&VecV::f(f3, 1).scale(&f3.from_i64(2))));
        assert!(parse_vector(f3, "g1").is_err());
        assert!(parse_vector(f3, "e0").is_err());
    }
}

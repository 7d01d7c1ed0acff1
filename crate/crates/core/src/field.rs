//! Exact scalars: prime fields `F_p` (p < 2^16) and the rationals.
//!
//! [`Scalar`] carries its field with it, so a matrix or spinor never needs a
//! separate context object. Mixing scalars of different fields is a logic
//! error and panics.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible prime (exclusive).
pub const MAX_PRIME: u32 = 1 << 16;

/// Which field the scalars of a computation live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    Prime { p: u32 },
    Rationals,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= MAX_PRIME {
            return Err(Error::PrimeTooLarge(p));
        }
        Ok(FieldSpec::Prime { p })
    }

    /// Parses `"Q"`, `"rationals"`, or a prime number.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rationals") {
            return Ok(FieldSpec::Rationals);
        }
        let p: u32 = t
            .parse()
            .map_err(|_| Error::Usage(format!("field must be a prime or Q, got {t:?}")))?;
        Self::prime(p)
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Prime { p } => *p,
            FieldSpec::Rationals => 0,
        }
    }

    pub fn require_odd_characteristic(&self) -> Result<()> {
        if self.characteristic() == 2 {
            Err(Error::CharacteristicTwo)
        } else {
            Ok(())
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            FieldSpec::Prime { p } => Scalar::Mod {
                value: n.rem_euclid(p as i64) as u32,
                p,
            },
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
        }
    }

    /// Random element. Over the rationals the sample is a small integer in
    /// `[-5, 5]`, which keeps heights manageable.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match *self {
            FieldSpec::Prime { p } => Scalar::Mod {
                value: rng.gen_range(0..p),
                p,
            },
            FieldSpec::Rationals => self.from_i64(rng.gen_range(-5..=5)),
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        loop {
            let x = self.random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// Whether `s` is an element of this field.
    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (FieldSpec::Prime { p }, Scalar::Mod { value, p: q }) => p == q && value < p,
            (FieldSpec::Rationals, Scalar::Rat(_)) => true,
            _ => false,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime { p } => write!(f, "F_{p}"),
            FieldSpec::Rationals => write!(f, "Q"),
        }
    }
}

/// An element of `F_p` or of `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod { value: u32, p: u32 },
    Rat(BigRational),
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Mod { p, .. } => FieldSpec::Prime { p: *p },
            Scalar::Rat(_) => FieldSpec::Rationals,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Mod { value, p } => Scalar::Mod {
                value: mod_pow(*value as u64, *p as u64 - 2, *p as u64) as u32,
                p: *p,
            },
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
        })
    }

    /// Residue in `[0, p)`; panics for rationals.
    pub fn residue(&self) -> u32 {
        match self {
            Scalar::Mod { value, .. } => *value,
            Scalar::Rat(_) => panic!("residue() called on a rational scalar"),
        }
    }

    /// Reduction of a rational modulo `p`; `None` when `p` divides the
    /// denominator.
    pub fn reduce_mod(&self, p: u32) -> Option<u32> {
        match self {
            Scalar::Mod { value, p: q } => (*q == p).then_some(*value),
            Scalar::Rat(r) => {
                let pb = BigInt::from(p);
                let num = (r.numer() % &pb + &pb) % &pb;
                let den = (r.denom() % &pb + &pb) % &pb;
                let den = den.to_u64()?;
                if den == 0 {
                    return None;
                }
                let inv = mod_pow(den, p as u64 - 2, p as u64);
                Some((num.to_u64()? * inv % p as u64) as u32)
            }
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Mod { .. } => None,
        }
    }

    /// Canonical text: residue for `F_p`, `a/b` (or `a`) for rationals.
    pub fn to_text(&self) -> String {
        match self {
            Scalar::Mod { value, .. } => value.to_string(),
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
        }
    }

    pub fn parse_rational(text: &str) -> Result<Scalar> {
        let bad = || Error::Scene(format!("invalid rational {text:?}"));
        let (n, d) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        if d.is_negative() {
            return Err(Error::Scene(format!(
                "rational {text:?} must have a positive denominator"
            )));
        }
        Ok(Scalar::Rat(BigRational::new(n, d)))
    }

    fn same_field(&self, other: &Scalar) {
        match (self, other) {
            (Scalar::Mod { p, .. }, Scalar::Mod { p: q, .. }) if p == q => {}
            (Scalar::Rat(_), Scalar::Rat(_)) => {}
            _ => panic!("field mismatch: {:?} vs {:?}", self.field(), other.field()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.same_field(rhs);
        match (self, rhs) {
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: (a + b) % p,
                p: *p,
            },
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.same_field(rhs);
        match (self, rhs) {
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: (a + p - b) % p,
                p: *p,
            },
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.same_field(rhs);
        match (self, rhs) {
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: ((*a as u64 * *b as u64) % *p as u64) as u32,
                p: *p,
            },
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod { value, p } => Scalar::Mod {
                value: (p - value) % p,
                p: *p,
            },
            Scalar::Rat(a) => Scalar::Rat(-a),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

/// Arithmetic on a finite field whose elements are encoded as `u32`
/// indices `0..order`. Used by the enumeration kernels, where the enum
/// dispatch of [`Scalar`] is too slow.
pub trait SmallField: Sync + Send {
    fn order(&self) -> u32;
    fn characteristic(&self) -> u32;
    fn add(&self, a: u32, b: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    fn neg(&self, a: u32) -> u32;
    /// Embedding of an integer residue of the prime subfield.
    fn from_prime_residue(&self, r: u32) -> u32;

    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
}

/// `F_p` with residues as elements.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    pub p: u32,
}

impl SmallField for PrimeField {
    fn order(&self) -> u32 {
        self.p
    }
    fn characteristic(&self) -> u32 {
        self.p
    }
    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        a * b % self.p
    }
    #[inline]
    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn from_prime_residue(&self, r: u32) -> u32 {
        r % self.p
    }
}

/// `F_{p^m}` via exp/log tables over a primitive polynomial.
///
/// Element encoding: the polynomial `c_0 + c_1 x + ... + c_{m-1} x^{m-1}`
/// is stored as the integer `Σ c_i p^i`, so the prime subfield is `0..p`.
#[derive(Clone, Debug)]
pub struct GaloisField {
    p: u32,
    degree: u32,
    order: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[d] = log(1 + g^d)`, `u32::MAX` where `1 + g^d = 0`.
    zech: Vec<u32>,
    /// Coefficients `c_0..c_{m-1}` of the modulus `x^m - Σ c_i x^i`.
    modulus_tail: Vec<u32>,
}

impl GaloisField {
    /// Builds `F_{p^degree}`. Searches monic polynomials in increasing
    /// encoding order for the first primitive one.
    pub fn new(p: u32, degree: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let order = (p as u64).checked_pow(degree).filter(|&q| q <= 1 << 26);
        let Some(order) = order else {
            return Err(Error::BudgetExceeded(format!(
                "extension field F_{p}^{degree} is too large for table arithmetic"
            )));
        };
        let order = order as u32;
        let m = degree as usize;
        if m == 1 {
            // x - g for a primitive root g
            return (1..p)
                .find_map(|g| Self::try_primitive(p, 1, order, &[g]))
                .ok_or(Error::NotPrime(p));
        }
        let mut tail = vec![0u32; m];
        // iterate tails as base-p counters, skipping c_0 = 0 (reducible)
        loop {
            let mut i = 0;
            loop {
                tail[i] += 1;
                if tail[i] < p {
                    break;
                }
                tail[i] = 0;
                i += 1;
                assert!(i < m, "no primitive polynomial found");
            }
            if tail[0] == 0 {
                continue;
            }
            if let Some(field) = Self::try_primitive(p, degree, order, &tail) {
                return Ok(field);
            }
        }
    }

    fn try_primitive(p: u32, degree: u32, order: u32, tail: &[u32]) -> Option<Self> {
        let m = degree as usize;
        let n = (order - 1) as usize;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![u32::MAX; order as usize];
        let mut cur = vec![0u32; m];
        cur[0] = 1;
        let encode = |c: &[u32]| c.iter().rev().fold(0u32, |acc, &d| acc * p + d);
        for k in 0..n {
            let code = encode(&cur);
            if log[code as usize] != u32::MAX {
                return None;
            }
            log[code as usize] = k as u32;
            exp.push(code);
            // multiply by x
            let top = cur[m - 1];
            for i in (1..m).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if m == 1 {
                cur[0] = (top * tail[0]) % p;
            } else {
                for i in 0..m {
                    cur[i] = (cur[i] + top * tail[i]) % p;
                }
            }
        }
        if encode(&cur) != 1 {
            return None;
        }
        let digit_add = |a: u32, b: u32| {
            let (mut a, mut b, mut out, mut place) = (a, b, 0u32, 1u32);
            while a > 0 || b > 0 {
                out += (a % p + b % p) % p * place;
                place *= p;
                a /= p;
                b /= p;
            }
            out
        };
        let zech = exp
            .iter()
            .map(|&x| match digit_add(1, x) {
                0 => u32::MAX,
                y => log[y as usize],
            })
            .collect();
        Some(GaloisField {
            p,
            degree,
            order,
            exp,
            log,
            zech,
            modulus_tail: tail.to_vec(),
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus_tail(&self) -> &[u32] {
        &self.modulus_tail
    }
}

impl SmallField for GaloisField {
    fn order(&self) -> u32 {
        self.order
    }
    fn characteristic(&self) -> u32 {
        self.p
    }
    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        // g^x + g^y = g^x (1 + g^{y-x})
        let n = self.order - 1;
        let (la, lb) = (self.log[a as usize], self.log[b as usize]);
        let d = if lb >= la { lb - la } else { lb + n - la };
        match self.zech[d as usize] {
            u32::MAX => 0,
            z => {
                let e = la + z;
                self.exp[(if e >= n { e - n } else { e }) as usize]
            }
        }
    }
    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.order - 1;
        let e = self.log[a as usize] + self.log[b as usize];
        self.exp[(if e >= n { e - n } else { e }) as usize]
    }
    #[inline]
    fn neg(&self, a: u32) -> u32 {
        if self.p == 2 || a == 0 {
            return a;
        }
        // -1 = g^{n/2}
        let n = self.order - 1;
        let e = self.log[a as usize] + n / 2;
        self.exp[(if e >= n { e - n } else { e }) as usize]
    }
    fn from_prime_residue(&self, r: u32) -> u32 {
        r % self.p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_checks() {
        assert!(FieldSpec::prime(5).is_ok());
        assert!(matches!(FieldSpec::prime(6), Err(Error::NotPrime(6))));
        assert!(matches!(
            FieldSpec::prime(65537),
            Err(Error::PrimeTooLarge(65537))
        ));
        assert_eq!(FieldSpec::parse("Q").unwrap(), FieldSpec::Rationals);
    }

    #[test]
    fn modular_arithmetic() {
        let f = FieldSpec::prime(7).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!(&a + &b, f.from_i64(1));
        assert_eq!(&a - &b, f.from_i64(5));
        assert_eq!(&a * &b, f.from_i64(1));
        assert_eq!(a.inv().unwrap(), f.from_i64(5));
        assert_eq!(-&a, f.from_i64(4));
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn rational_text_round_trip() {
        let s = Scalar::parse_rational("-6/4").unwrap();
        assert_eq!(s.to_text(), "-3/2");
        assert_eq!(Scalar::parse_rational("7").unwrap().to_text(), "7");
        assert!(Scalar::parse_rational("1/-2").is_err());
        assert!(Scalar::parse_rational("1/0").is_err());
        assert_eq!(s.reduce_mod(5), Some(1)); // -3 * 2^{-1} = 2 * 3 = 6 = 1
        assert_eq!(s.reduce_mod(2), None);
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixing_fields_panics() {
        let _ = &FieldSpec::prime(3).unwrap().one() + &FieldSpec::prime(5).unwrap().one();
    }

    fn check_field_axioms<F: SmallField>(f: &F) {
        let q = f.order();
        let step = (q / 37).max(1);
        for a in (0..q).step_by(step as usize) {
            assert_eq!(f.add(a, f.neg(a)), 0);
            assert_eq!(f.mul(a, 1), a);
            for b in (0..q).step_by(step as usize * 3) {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in [0, 1, q - 1, q / 2] {
                    assert_eq!(
                        f.mul(a, f.add(b, c)),
                        f.add(f.mul(a, b), f.mul(a, c))
                    );
                }
            }
        }
    }

    #[test]
    fn galois_fields_are_fields() {
        for (p, m) in [(2, 1), (2, 4), (2, 12), (3, 1), (3, 3), (5, 2), (7, 1)] {
            let f = GaloisField::new(p, m).unwrap();
            assert_eq!(f.order(), p.pow(m));
            check_field_axioms(&f);
            // every nonzero element has an inverse
            let a = f.order() - 1;
            assert!((1..f.order()).any(|b| f.mul(a, b) == 1));
        }
        check_field_axioms(&PrimeField { p: 13 });
    }

    #[test]
    fn galois_prime_subfield_matches_integers() {
        let f = GaloisField::new(3, 4).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(f.add(a, b), (a + b) % 3);
                assert_eq!(f.mul(a, b), a * b % 3);
            }
        }
    }
}

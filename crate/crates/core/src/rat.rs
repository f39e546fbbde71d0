//! Exact rational scalars and the field abstraction used by the linear
//! algebra kernel.

use num::{BigInt, BigRational, Signed, Zero};
use std::str::FromStr;

use crate::Error;

/// Exact rational number. Every coordinate, matrix entry and distance in the
/// crate is one of these; no floating point appears anywhere.
pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Parses "p/q" or "p" into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))?;
    let den = BigInt::from_str(den).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("bad rational {s:?}: zero denominator")));
    }
    Ok(Rat::new(num, den))
}

/// Renders a rational as "p" or "p/q", matching the JSON wire format.
pub fn format_rat(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Minimal field interface for the elimination routines in [`crate::linalg`].
pub trait Field: Clone + PartialEq + std::fmt::Debug {
    /// Zero element for matrices with no entries to clone from. Fields with a
    /// runtime modulus have no such element; they never hit this path.
    fn static_zero() -> Self {
        panic!("operation on an empty matrix requires a prototype element")
    }
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Multiplicative inverse; caller guarantees the element is nonzero.
    fn inv(&self) -> Self;
    fn neg(&self) -> Self;
}

impl Field for Rat {
    fn static_zero() -> Self {
        Rat::zero()
    }
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        rat_int(1)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn inv(&self) -> Self {
        rat_int(1) / self
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Element of the prime field F_p with a runtime modulus. Used as a fast
/// cross-check backend for rank computations.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fp {
    pub val: u64,
    pub p: u64,
}

impl Fp {
    pub fn new(val: i64, p: u64) -> Self {
        let v = val.rem_euclid(p as i64) as u64;
        Fp { val: v, p }
    }

    /// Reduces an exact rational mod p. Fails when the denominator is
    /// divisible by p.
    pub fn from_rat(r: &Rat, p: u64) -> Result<Self, Error> {
        let pb = BigInt::from(p);
        let num = r.numer().clone() % &pb;
        let den = r.denom().clone() % &pb;
        let to_u64 = |b: BigInt| -> u64 {
            let m = ((b % &pb) + &pb) % &pb;
            // modulus fits in u64 by construction
            m.magnitude().to_u64_digits().first().copied().unwrap_or(0)
        };
        let den = to_u64(den);
        if den == 0 {
            return Err(Error::BadModulus);
        }
        let num = to_u64(num);
        let inv = Fp { val: den, p }.inv();
        Ok(Fp { val: mulmod(num, inv.val, p), p })
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

impl Field for Fp {
    fn zero_like(&self) -> Self {
        Fp { val: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Fp { val: 1, p: self.p }
    }
    fn is_zero(&self) -> bool {
        self.val == 0
    }
    fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        Fp { val: (self.val + other.val) % self.p, p: self.p }
    }
    fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        Fp { val: (self.val + self.p - other.val) % self.p, p: self.p }
    }
    fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        Fp { val: mulmod(self.val, other.val, self.p), p: self.p }
    }
    fn inv(&self) -> Self {
        // p prime, val != 0
        Fp { val: powmod(self.val, self.p - 2, self.p), p: self.p }
    }
    fn neg(&self) -> Self {
        Fp { val: (self.p - self.val) % self.p, p: self.p }
    }
}

/// Coefficient field selector, parsed from `SCOTTPERSIST_FIELD`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldMode {
    Rational,
    /// Prime modulus; default 32003.
    Fp(u64),
}

impl FieldMode {
    pub fn from_env() -> Result<Self, Error> {
        match std::env::var("SCOTTPERSIST_FIELD") {
            Err(_) => Ok(FieldMode::Rational),
            Ok(s) => Self::parse(&s),
        }
    }

    pub fn parse(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s == "rational" || s.is_empty() {
            return Ok(FieldMode::Rational);
        }
        if s == "fp" {
            return Ok(FieldMode::Fp(32003));
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u64 = p
                .parse()
                .map_err(|e| Error::Parse(format!("bad field mode {s:?}: {e}")))?;
            if !is_prime(p) {
                return Err(Error::BadModulus);
            }
            return Ok(FieldMode::Fp(p));
        }
        Err(Error::Parse(format!(
            "bad field mode {s:?}: expected `rational` or `fp:<prime>`"
        )))
    }
}

pub fn abs(r: &Rat) -> Rat {
    Signed::abs(r)
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

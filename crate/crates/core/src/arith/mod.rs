//! Exact integer and rational arithmetic.
//!
//! Valuations, perfect powers, Hilbert symbols and Newton polygons, plus the
//! polynomial machinery the curve code is built on: dense polynomials over Q
//! and F_l, factor search over Z by Hensel lifting, roots in Z_l and real
//! root isolation.

mod factor;
mod hilbert;
pub mod modp;
mod newton;
pub mod padic;
pub mod poly;
pub mod sturm;
pub mod zfactor;

use core::cmp::Ordering;
use core::fmt;
use core::ops::Add;

use num_bigint::{BigInt, Sign};
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use factor::{factor, is_prime, is_prime_u64, prime_divisors};
pub use hilbert::{hilbert_symbol, legendre, Place};
pub use newton::{newton_polygon, NewtonPolygon};
pub use poly::QPoly;

pub type Integer = BigInt;
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Integer {
    BigInt::from(n)
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_from(n: &Integer) -> Rational {
    Rational::from_integer(n.clone())
}

/// `l`-adic valuation, `Infinite` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinite
    }

    /// The finite value; panics on `Infinite`.
    pub fn value(self) -> i64 {
        self.finite().expect("valuation of zero")
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Exponent of `l` in a nonzero integer; 0 for `n = 0` is never returned, use
/// [`val_int`] for the total version.
pub fn val_nonzero(n: &Integer, l: u64) -> u32 {
    debug_assert!(!n.is_zero());
    if let Some(mut m) = n.abs().to_u128() {
        let l = l as u128;
        let mut k = 0;
        while m % l == 0 {
            m /= l;
            k += 1;
        }
        return k;
    }
    let lb = BigInt::from(l);
    let mut m = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = m.div_rem(&lb);
        if !r.is_zero() {
            return k;
        }
        m = q;
        k += 1;
    }
}

pub fn val_int(n: &Integer, l: u64) -> Valuation {
    if n.is_zero() {
        Valuation::Infinite
    } else {
        Valuation::Finite(val_nonzero(n, l) as i64)
    }
}

pub fn val(x: &Rational, l: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(val_nonzero(x.numer(), l) as i64 - val_nonzero(x.denom(), l) as i64)
}

/// Removes all factors of `l` from `n`, returning `(n / l^k, k)`.
pub fn split_off(n: &Integer, l: u64) -> (Integer, u32) {
    let k = val_nonzero(n, l);
    (n / BigInt::from(l).pow(k), k)
}

/// Removes all powers of `l` from a nonzero rational.
pub fn unit_part(x: &Rational, l: u64) -> (Rational, i64) {
    let (n, a) = split_off(x.numer(), l);
    let (d, b) = split_off(x.denom(), l);
    (Rational::new(n, d), a as i64 - b as i64)
}

pub fn pow_l(l: u64, e: u32) -> Integer {
    BigInt::from(l).pow(e)
}

/// `x^e` for a possibly negative exponent; `x` must be nonzero if `e < 0`.
pub fn rat_pow(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

fn exact_root(n: &Integer, k: u32) -> Option<Integer> {
    if n.sign() == Sign::Minus {
        if k.is_multiple_of(2) {
            return None;
        }
        return exact_root(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    if r.pow(k) == *n {
        Some(r)
    } else {
        None
    }
}

/// Rational `w` with `w^n = x`, if one exists. For even `n` the positive root is returned.
pub fn is_nth_power(x: &Rational, n: u32) -> Option<Rational> {
    assert!(n >= 1, "is_nth_power needs n >= 1");
    if x.is_zero() {
        return Some(Rational::zero());
    }
    let num = exact_root(x.numer(), n)?;
    let den = exact_root(x.denom(), n)?;
    Some(Rational::new(num, den))
}

/// Symmetric residue of `n` modulo `m`, in `(-m/2, m/2]`.
pub fn symmetric_mod(n: &Integer, m: &Integer) -> Integer {
    let r = n.mod_floor(m);
    if (&r << 1u32) > *m {
        r - m
    } else {
        r
    }
}

/// `x mod m` for a rational whose denominator is prime to `m`.
pub fn rat_mod(x: &Rational, m: &Integer) -> Integer {
    let inv = mod_inverse(&x.denom().mod_floor(m), m).expect("denominator not invertible");
    (x.numer() * inv).mod_floor(m)
}

pub fn mod_inverse(a: &Integer, m: &Integer) -> Option<Integer> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Lowest common multiple of the denominators.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a Rational>>(xs: I) -> Integer {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Compares `|a|` against `|b|`.
pub fn cmp_abs(a: &Rational, b: &Rational) -> Ordering {
    a.abs().cmp(&b.abs())
}

/// Squarefree integer in the square class of a nonzero rational.
pub fn squarefree_part(x: &Rational) -> Integer {
    assert!(!x.is_zero());
    let n = x.numer() * x.denom();
    let mut out = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    for (q, e) in factor(&n) {
        if e % 2 == 1 {
            out *= q;
        }
    }
    out
}

pub fn is_squarefree(d: &Integer) -> bool {
    !d.is_zero() && factor(d).iter().all(|(_, e)| *e == 1)
}

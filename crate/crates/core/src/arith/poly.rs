//! Dense univariate polynomials over Q.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::{common_denominator, Rational};

/// Coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    c: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn from_integers(c: &[BigInt]) -> Self {
        Self::new(c.iter().map(|x| Rational::from_integer(x.clone())).collect())
    }

    pub fn zero() -> Self {
        QPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn x() -> Self {
        QPoly { c: vec![Rational::zero(), Rational::one()] }
    }

    pub fn constant(a: Rational) -> Self {
        Self::new(vec![a])
    }

    /// `x - a`
    pub fn linear_root(a: &Rational) -> Self {
        QPoly { c: vec![-a.clone(), Rational::one()] }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.c.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.c.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.c.iter().rev().fold(Rational::zero(), |acc, a| acc * x + a)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * Rational::from_integer((i as u64).into()))
                .collect(),
        )
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.c.iter().map(|a| a * k).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let inv = d.leading().recip();
        let mut q = vec![Rational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let k = &r[i + dd] * &inv;
            if !k.is_zero() {
                for (j, dc) in d.c.iter().enumerate() {
                    r[i + j] -= &k * dc;
                }
            }
            q[i] = k;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.divrem(d).1
    }

    /// Exact quotient, `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &QPoly) -> Option<QPoly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.primitive_scaled();
        }
        a.monic()
    }

    /// Inverse of `self` modulo `m`, `None` if they share a factor.
    pub fn inverse_mod(&self, m: &QPoly) -> Option<QPoly> {
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let t = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        Some(t0.scale(&r0.leading().recip()).rem(m))
    }

    /// `self(g(x)) mod m`, never forming the full composition.
    pub fn compose_mod(&self, g: &QPoly, m: &QPoly) -> QPoly {
        let g = g.rem(m);
        let mut acc = QPoly::zero();
        for a in self.c.iter().rev() {
            acc = (&(&acc * &g) + &QPoly::constant(a.clone())).rem(m);
        }
        acc
    }

    /// Same polynomial up to a rational scalar, with small integer coefficients.
    /// Keeps Euclid's remainders from growing.
    fn primitive_scaled(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        QPoly::from_integers(&self.primitive_integer())
    }

    pub fn pow(&self, n: u32) -> QPoly {
        let mut acc = QPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `self(g(x))` by Horner.
    pub fn compose(&self, g: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * g) + &QPoly::constant(a.clone());
        }
        acc
    }

    /// `self(a x + b)`
    pub fn compose_linear(&self, a: &Rational, b: &Rational) -> QPoly {
        self.compose(&QPoly::new(vec![b.clone(), a.clone()]))
    }

    /// Integer polynomial with content 1 and positive leading coefficient,
    /// proportional to `self`.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let den = common_denominator(self.c.iter());
        let ints: Vec<BigInt> = self.c.iter().map(|a| (a * Rational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let sign = if ints.last().is_some_and(|x| x.is_negative()) { -BigInt::one() } else { BigInt::one() };
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|x| x / &g * &sign).collect()
    }

    /// Squarefree part, monic.
    pub fn squarefree_part(&self) -> QPoly {
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Power sums `s_1..s_k` of the roots of a monic polynomial (Newton's identities).
    pub fn power_sums(&self, k: usize) -> Vec<Rational> {
        let n = self.degree().unwrap_or(0);
        let m = self.monic();
        // e-coefficients: x^n + c_{n-1} x^{n-1} + ... ; s_j = -j c_{n-j} - sum_{i<j} c_{n-i} s_{j-i}
        let coef = |i: usize| -> Rational { if i > n { Rational::zero() } else { m.coeff(n - i) } };
        let mut s: Vec<Rational> = Vec::with_capacity(k);
        for j in 1..=k {
            let mut v = -coef(j) * Rational::from_integer((j as u64).into());
            for i in 1..j {
                v -= coef(i) * &s[j - i - 1];
            }
            s.push(v);
        }
        s
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut r = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        QPoly::new(r)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly { c: self.c.iter().map(|a| -a).collect() }
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl $tr for QPoly {
            type Output = QPoly;
            fn $m(self, o: QPoly) -> QPoly {
                (&self).$m(&o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut s = String::new();
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let abs = a.abs();
            let unit = abs.is_one() && i > 0;
            if !unit {
                s.push_str(&alloc::format!("{abs}"));
            }
            match i {
                0 => {}
                1 => s.push_str(if unit { "x" } else { "*x" }),
                _ => s.push_str(&alloc::format!("{}x^{i}", if unit { "" } else { "*" })),
            }
        }
        f.write_str(&s)
    }
}

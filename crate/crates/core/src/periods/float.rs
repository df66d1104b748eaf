//! Binary floating point on a big-integer mantissa, and complex numbers over it.
//!
//! A `Float` is `m * 2^e` carrying its own working precision. Binary
//! operations round to the larger of the two precisions, so there is no
//! global precision state.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer as _;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::Rational;

#[derive(Clone, Debug)]
pub struct Float {
    m: BigInt,
    e: i64,
    prec: u32,
}

fn bits(m: &BigInt) -> i64 {
    m.bits() as i64
}

/// Shift right with round-half-up on the absolute value.
fn shr_round(m: &BigInt, k: i64) -> BigInt {
    if k <= 0 {
        return m << (-k) as usize;
    }
    let neg = m.is_negative();
    let a = m.abs();
    let r = (a + (BigInt::from(1) << (k - 1) as usize)) >> k as usize;
    if neg {
        -r
    } else {
        r
    }
}

impl Float {
    pub fn zero(prec: u32) -> Float {
        Float { m: BigInt::zero(), e: 0, prec }
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Float {
        Float { m: n.clone(), e: 0, prec }.round()
    }

    pub fn from_i64(n: i64, prec: u32) -> Float {
        Float::from_int(&BigInt::from(n), prec)
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Float {
        if q.is_zero() {
            return Float::zero(prec);
        }
        let (n, d) = (q.numer(), q.denom());
        let s = prec as i64 + 2 + bits(d) - bits(n);
        let s = s.max(0);
        let m = (n << s as usize) / d;
        Float { m, e: -s, prec }.round()
    }

    /// `m * 2^e` exactly, then rounded.
    pub fn from_parts(m: BigInt, e: i64, prec: u32) -> Float {
        Float { m, e, prec }.round()
    }

    pub fn from_f64(x: f64, prec: u32) -> Float {
        if x == 0.0 || !x.is_finite() {
            return Float::zero(prec);
        }
        let bits = x.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & ((1u64 << 52) - 1)) as i64;
        let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1 << 52), exp - 1075) };
        let m = if x < 0.0 { -m } else { m };
        Float::from_parts(BigInt::from(m), e, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Float {
        Float { m: self.m.clone(), e: self.e, prec }.round()
    }

    fn round(mut self) -> Float {
        if self.m.is_zero() {
            self.e = 0;
            return self;
        }
        let excess = bits(&self.m) - self.prec as i64;
        if excess > 0 {
            self.m = shr_round(&self.m, excess);
            self.e += excess;
        }
        // strip trailing zeros so equal values compare structurally
        let tz = self.m.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.m >>= tz as usize;
            self.e += tz as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.m.is_positive()
    }

    pub fn abs(&self) -> Float {
        Float { m: self.m.abs(), e: self.e, prec: self.prec }
    }

    /// Exponent of the leading bit: `2^(mag-1) <= |x| < 2^mag`.
    pub fn magnitude(&self) -> i64 {
        if self.is_zero() {
            i64::MIN / 4
        } else {
            bits(&self.m) + self.e
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Float {
        Float { m: self.m.clone(), e: self.e + k, prec: self.prec }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let shift = bits(&self.m) - 60;
        let (m, e) = if shift > 0 { (shr_round(&self.m, shift), self.e + shift) } else { (self.m.clone(), self.e) };
        let m = m.to_f64().unwrap_or(0.0);
        if e > 1000 {
            return m * f64::INFINITY;
        }
        if e < -1100 {
            return 0.0;
        }
        m * libm_pow2(e)
    }

    /// Nearest integer (half away from zero).
    pub fn round_to_int(&self) -> BigInt {
        if self.e >= 0 {
            return &self.m << self.e as usize;
        }
        shr_round(&self.m, -self.e)
    }

    /// Exact rational value.
    pub fn to_rational(&self) -> Rational {
        if self.e >= 0 {
            Rational::from_integer(&self.m << self.e as usize)
        } else {
            Rational::new(self.m.clone(), BigInt::from(1) << (-self.e) as usize)
        }
    }

    pub fn sqrt(&self) -> Float {
        assert!(!self.is_negative(), "sqrt of a negative float");
        if self.is_zero() {
            return self.clone();
        }
        // want m' with about prec + 2 bits: shift so the mantissa has 2 * prec + 4 bits and e is even
        let p = self.prec as i64;
        let mut s = 2 * p + 4 - bits(&self.m);
        if (self.e - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let m = if s >= 0 { &self.m << s as usize } else { &self.m >> (-s) as usize };
        Float { m: m.sqrt(), e: (self.e - s) / 2, prec: self.prec }.round()
    }

    pub fn recip(&self) -> Float {
        Float::from_i64(1, self.prec) / self
    }

    pub fn powi(&self, mut n: u32) -> Float {
        let mut base = self.clone();
        let mut acc = Float::from_i64(1, self.prec);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// `|self - other| <= tol * max(|self|, |other|)`, with `tol = 2^-bits`.
    pub fn rel_close(&self, other: &Float, bits: u32) -> bool {
        let d = (self - other).abs();
        if d.is_zero() {
            return true;
        }
        let m = self.magnitude().max(other.magnitude());
        d.magnitude() <= m - bits as i64
    }

    /// `|self - other| / max(|self|, |other|)` as an `f64` (0 when both vanish).
    pub fn rel_error(&self, other: &Float) -> f64 {
        let d = (self - other).abs();
        if d.is_zero() {
            return 0.0;
        }
        let m = if self.abs() > other.abs() { self.abs() } else { other.abs() };
        (&d / &m).to_f64()
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        if self.is_zero() {
            out.push('0');
            return out;
        }
        if self.is_negative() {
            out.push('-');
        }
        let a = self.abs().with_prec(self.prec.max(64));
        // decimal exponent estimate from the binary one
        let est = (a.magnitude() - 1) as f64 * core::f64::consts::LOG10_2;
        let mut k = est as i64 - (est < 0.0 && est != (est as i64) as f64) as i64;
        let ten = BigInt::from(10);
        let scaled = |k: i64| -> BigInt {
            // round(a * 10^(digits - 1 - k))
            let s = digits as i64 - 1 - k;
            let q = if s >= 0 {
                a.to_rational() * Rational::from_integer(num_traits::pow(ten.clone(), s as usize))
            } else {
                a.to_rational() / Rational::from_integer(num_traits::pow(ten.clone(), (-s) as usize))
            };
            q.round().to_integer()
        };
        let mut n = scaled(k);
        let lim = num_traits::pow(ten.clone(), digits);
        if n >= lim {
            k += 1;
            n = scaled(k);
        } else if n < num_traits::pow(ten.clone(), digits - 1) {
            k -= 1;
            n = scaled(k);
        }
        let s = n.to_str_radix(10);
        if (-5..16).contains(&k) {
            if k >= 0 {
                let k = k as usize;
                if s.len() > k + 1 {
                    let (a, b) = s.split_at(k + 1);
                    let _ = write!(out, "{a}.{b}");
                } else {
                    out.push_str(&s);
                    for _ in s.len()..=k {
                        out.push('0');
                    }
                }
            } else {
                out.push_str("0.");
                for _ in 0..(-k - 1) {
                    out.push('0');
                }
                out.push_str(&s);
            }
        } else {
            let (a, b) = s.split_at(1);
            let _ = write!(out, "{a}.{b}e{k}");
        }
        out
    }
}

fn libm_pow2(e: i64) -> f64 {
    let mut r = 1.0f64;
    let (base, mut n) = if e >= 0 { (2.0f64, e) } else { (0.5f64, -e) };
    let mut b = base;
    while n > 0 {
        if n & 1 == 1 {
            r *= b;
        }
        b *= b;
        n >>= 1;
    }
    r
}

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(((self.prec as f64) * core::f64::consts::LOG10_2) as usize).max(1);
        f.write_str(&self.to_decimal(digits))
    }
}

impl PartialEq for Float {
    fn eq(&self, other: &Float) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Float {}

impl PartialOrd for Float {
    fn partial_cmp(&self, other: &Float) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Float {
    fn cmp(&self, other: &Float) -> Ordering {
        let (sa, sb) = (self.m.sign(), other.m.sign());
        if sa != sb || sa == Sign::NoSign {
            return sa.cmp(&sb);
        }
        let e = self.e.min(other.e);
        let a = &self.m << (self.e - e) as usize;
        let b = &other.m << (other.e - e) as usize;
        a.cmp(&b)
    }
}

impl<'a> Add<&'a Float> for &'a Float {
    type Output = Float;
    fn add(self, rhs: &Float) -> Float {
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() {
            return rhs.with_prec(prec);
        }
        if rhs.is_zero() {
            return self.with_prec(prec);
        }
        // a term far below the other's last bit only affects rounding
        let (big, small) = if self.magnitude() >= rhs.magnitude() { (self, rhs) } else { (rhs, self) };
        if big.magnitude() - small.magnitude() > prec as i64 + 4 {
            let floor = big.magnitude() - prec as i64 - 4;
            let tiny = Float { m: small.m.signum(), e: floor, prec };
            return (big + &tiny).with_prec(prec);
        }
        let e = self.e.min(rhs.e);
        let m = (&self.m << (self.e - e) as usize) + (&rhs.m << (rhs.e - e) as usize);
        Float { m, e, prec }.round()
    }
}

impl<'a> Sub<&'a Float> for &'a Float {
    type Output = Float;
    fn sub(self, rhs: &Float) -> Float {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Float> for &'a Float {
    type Output = Float;
    fn mul(self, rhs: &Float) -> Float {
        Float { m: &self.m * &rhs.m, e: self.e + rhs.e, prec: self.prec.max(rhs.prec) }.round()
    }
}

impl<'a> Div<&'a Float> for &'a Float {
    type Output = Float;
    fn div(self, rhs: &Float) -> Float {
        assert!(!rhs.is_zero(), "float division by zero");
        let prec = self.prec.max(rhs.prec) as i64;
        let s = (prec + 2 + bits(&rhs.m) - bits(&self.m)).max(0);
        let (q, r) = (&self.m << s as usize).div_rem(&rhs.m);
        // sticky bit keeps round-half-up honest
        let q = (q << 1usize) + if r.is_zero() { BigInt::zero() } else { q_sign(&self.m, &rhs.m) };
        Float { m: q, e: self.e - rhs.e - s - 1, prec: prec as u32 }.round()
    }
}

fn q_sign(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_negative() == b.is_negative() {
        BigInt::from(1)
    } else {
        BigInt::from(-1)
    }
}

impl Neg for &Float {
    type Output = Float;
    fn neg(self) -> Float {
        Float { m: -&self.m, e: self.e, prec: self.prec }
    }
}

impl Neg for Float {
    type Output = Float;
    fn neg(self) -> Float {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident, $t:ty) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $f(self, rhs: $t) -> $t {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $f(self, rhs: &$t) -> $t {
                (&self).$f(rhs)
            }
        }
        impl<'a> $tr<$t> for &'a $t {
            type Output = $t;
            fn $f(self, rhs: $t) -> $t {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add, Float);
forward_owned!(Sub, sub, Float);
forward_owned!(Mul, mul, Float);
forward_owned!(Div, div, Float);

/// `pi` to `prec` bits (Machin's formula in fixed point).
pub fn pi(prec: u32) -> Float {
    let w = prec as usize + 32;
    let one = BigInt::from(1) << w;
    // atan(1/k) = sum (-1)^n / ((2n+1) k^(2n+1))
    let atan_inv = |k: i64| -> BigInt {
        let k2 = BigInt::from(k * k);
        let mut term = &one / BigInt::from(k);
        let mut sum = BigInt::zero();
        let mut n = 0i64;
        while !term.is_zero() {
            let t = &term / BigInt::from(2 * n + 1);
            if n % 2 == 0 {
                sum += t;
            } else {
                sum -= t;
            }
            term /= &k2;
            n += 1;
        }
        sum
    };
    let m = atan_inv(5) * 16 - atan_inv(239) * 4;
    Float::from_parts(m, -(w as i64), prec)
}

/// Arithmetic-geometric mean of two positive reals.
pub fn agm(a: &Float, b: &Float) -> Float {
    let prec = a.prec.max(b.prec);
    let (mut a, mut b) = (a.with_prec(prec), b.with_prec(prec));
    for _ in 0..4 * prec {
        if a.rel_close(&b, prec - 2) {
            break;
        }
        let a1 = (&a + &b).mul_pow2(-1);
        b = (&a * &b).sqrt();
        a = a1;
    }
    a
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Complex {
        Complex { re, im }
    }

    pub fn real(re: Float) -> Complex {
        let p = re.prec();
        Complex { re, im: Float::zero(p) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn conj(&self) -> Complex {
        Complex { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> Float {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn scale(&self, k: &Float) -> Complex {
        Complex { re: &self.re * k, im: &self.im * k }
    }

    pub fn mul_pow2(&self, k: i64) -> Complex {
        Complex { re: self.re.mul_pow2(k), im: self.im.mul_pow2(k) }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Complex {
        Complex { re: -&self.im, im: self.re.clone() }
    }

    pub fn recip(&self) -> Complex {
        let n = self.norm_sqr();
        Complex { re: &self.re / &n, im: -(&self.im / &n) }
    }

    pub fn powi(&self, mut n: u32) -> Complex {
        let mut base = self.clone();
        let mut acc = Complex::real(Float::from_i64(1, self.prec()));
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// Principal square root (non-negative real part).
    pub fn sqrt(&self) -> Complex {
        let p = self.prec();
        if self.is_zero() {
            return self.clone();
        }
        let r = self.abs();
        if !self.re.is_negative() {
            let s = (&r + &self.re).mul_pow2(-1).sqrt();
            let im = &self.im / &s.mul_pow2(1);
            Complex { re: s, im }
        } else {
            let t = (&r - &self.re).mul_pow2(-1).sqrt();
            let re = &self.im.abs() / &t.mul_pow2(1);
            let im = if self.im.is_negative() { -t } else { t };
            Complex { re: re.with_prec(p), im }
        }
    }

    /// `exp(z)`: Taylor series on `z / 2^s`, then `s` squarings.
    pub fn exp(&self) -> Complex {
        let p = self.prec();
        let mag = self.re.magnitude().max(self.im.magnitude());
        let s = (mag + 8).max(0);
        let w = p + s as u32 + 16 + (bits_of(self.re.magnitude()) as u32);
        let z = Complex { re: self.re.with_prec(w), im: self.im.with_prec(w) }.mul_pow2(-s);
        let one = Complex::real(Float::from_i64(1, w));
        let mut sum = one.clone();
        let mut term = one;
        let mut k = 1i64;
        loop {
            term = (&term * &z).scale(&Float::from_i64(k, w).recip());
            if term.is_zero() || term.re.magnitude().max(term.im.magnitude()) < -(w as i64) - 4 {
                break;
            }
            sum = &sum + &term;
            k += 1;
        }
        for _ in 0..s {
            sum = &sum * &sum;
        }
        Complex { re: sum.re.with_prec(p), im: sum.im.with_prec(p) }
    }
}

fn bits_of(m: i64) -> i64 {
    // guard bits for large real parts, whose exp loses relative precision in the squarings
    if m > 0 {
        m
    } else {
        0
    }
}

impl<'a> Add<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        Complex { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        Complex { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        Complex {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl<'a> Div<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn div(self, rhs: &Complex) -> Complex {
        self * &rhs.recip()
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex { re: -&self.re, im: -&self.im }
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        -&self
    }
}

forward_owned!(Add, add, Complex);
forward_owned!(Sub, sub, Complex);
forward_owned!(Mul, mul, Complex);
forward_owned!(Div, div, Complex);

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(20);
        let im = self.im.abs().to_decimal(d);
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{} {} {}i", self.re.to_decimal(d), sign, im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, rat};
    use proptest::prelude::*;

    #[test]
    fn basic_arithmetic() {
        let a = Float::from_rational(&frac(1, 3), 128);
        let b = &a * &Float::from_i64(3, 128);
        assert!(b.rel_close(&Float::from_i64(1, 128), 126));
        assert_eq!(Float::from_i64(12, 64), Float::from_rational(&rat(12), 64));
        assert!(Float::from_i64(-2, 64) < Float::from_i64(1, 64));
        let two = Float::from_i64(2, 200);
        let r = two.sqrt();
        assert!((&r * &r).rel_close(&two, 196));
        assert_eq!(Float::from_rational(&frac(7, 2), 64).round_to_int(), BigInt::from(4));
        assert_eq!(Float::from_f64(0.375, 64).to_rational(), frac(3, 8));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Float::from_rational(&frac(1, 3), 128).to_decimal(5), "0.33333");
        assert_eq!(Float::from_i64(1234567, 64).to_decimal(3), "1230000");
        assert_eq!(Float::from_rational(&frac(-1, 8000000), 64).to_decimal(2), "-1.3e-7");
        assert_eq!(Float::from_i64(999, 64).to_decimal(2), "1000");
    }

    #[test]
    fn constants() {
        // digits of pi
        let p = pi(300);
        assert_eq!(p.to_decimal(50), "3.1415926535897932384626433832795028841971693993751");
        // exp(i pi) = -1
        let z = Complex::new(Float::zero(256), pi(256)).exp();
        assert!(z.re.rel_close(&Float::from_i64(-1, 256), 240));
        assert!(z.im.magnitude() < -240);
        // e from exp(1)
        let e = Complex::real(Float::from_i64(1, 200)).exp();
        assert_eq!(e.re.to_decimal(30), "2.71828182845904523536028747135");
        // exp(-50) against its inverse
        let big = Complex::real(Float::from_i64(50, 200)).exp();
        let small = Complex::real(Float::from_i64(-50, 200)).exp();
        assert!((&big.re * &small.re).rel_close(&Float::from_i64(1, 200), 180));
    }

    #[test]
    fn agm_value() {
        // Gauss's constant: 1 / agm(1, sqrt 2)
        let g = agm(&Float::from_i64(1, 128), &Float::from_i64(2, 128).sqrt()).recip();
        assert_eq!(g.to_decimal(20), "0.83462684167407318628");
    }

    proptest! {
        #[test]
        fn field_axioms(a in -1.0e6f64..1.0e6, b in -1.0e6f64..1.0e6, c in 0.001f64..1.0e3) {
            let (x, y, z) = (Float::from_f64(a, 128), Float::from_f64(b, 128), Float::from_f64(c, 128));
            let lhs = &(&x + &y) * &z;
            let rhs = &(&x * &z) + &(&y * &z);
            prop_assert!(lhs.rel_error(&rhs) < 1e-30 || (&lhs - &rhs).magnitude() < -80);
            prop_assert!((&(&x / &z) * &z).rel_error(&x) < 1e-35);
            prop_assert!(((&x - &y) + &y).rel_error(&x) < 1e-30 || x.is_zero());
            prop_assert!((x.to_f64() - a).abs() <= a.abs() * 1e-15);
        }

        #[test]
        fn complex_sqrt_squares_back(a in -1.0e3f64..1.0e3, b in -1.0e3f64..1.0e3) {
            let z = Complex::new(Float::from_f64(a, 128), Float::from_f64(b, 128));
            let r = z.sqrt();
            prop_assert!(!r.re.is_negative());
            let back = &r * &r;
            prop_assert!((&back - &z).abs().magnitude() < z.abs().magnitude() - 110);
        }

        #[test]
        fn exp_is_a_homomorphism(a in -20.0f64..20.0, b in -20.0f64..20.0, c in -5.0f64..5.0) {
            let z = Complex::new(Float::from_f64(a, 160), Float::from_f64(b, 160));
            let w = Complex::new(Float::from_f64(c, 160), Float::from_f64(a / 7.0, 160));
            let lhs = (&z + &w).exp();
            let rhs = &z.exp() * &w.exp();
            prop_assert!((&lhs - &rhs).abs().magnitude() < lhs.abs().magnitude() - 140);
            let bits = (a + c) * core::f64::consts::LOG2_E;
            prop_assert!((lhs.abs().magnitude() as f64 - bits).abs() < 2.0);
        }
    }
}

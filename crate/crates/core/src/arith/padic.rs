//! Roots in Z_l of integer polynomials and square classes in Q_l.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, ToPrimitive, Zero};

use super::hilbert::legendre;
use super::modp::FpPoly;
use super::{mod_inverse, pow_l, unit_part, val_nonzero, Rational};

fn eval(f: &[BigInt], x: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn deriv(f: &[BigInt]) -> Vec<BigInt> {
    f.iter().enumerate().skip(1).map(|(i, c)| c * i).collect()
}

/// `f(a + s*y)` as a polynomial in `y`.
fn substitute(f: &[BigInt], a: &BigInt, s: &BigInt) -> Vec<BigInt> {
    let mut acc: Vec<BigInt> = Vec::new();
    for c in f.iter().rev() {
        // acc = acc * (a + s y) + c
        let mut next = alloc::vec![BigInt::zero(); acc.len() + 1];
        for (i, x) in acc.iter().enumerate() {
            next[i] += x * a;
            next[i + 1] += x * s;
        }
        next[0] += c;
        acc = next;
    }
    while acc.last().is_some_and(|x| x.is_zero()) {
        acc.pop();
    }
    acc
}

fn strip_content(f: &mut [BigInt], l: u64) {
    if f.iter().all(|c| c.is_zero()) {
        return;
    }
    let k = f.iter().filter(|c| !c.is_zero()).map(|c| val_nonzero(c, l)).min().unwrap();
    if k > 0 {
        let d = pow_l(l, k);
        for c in f.iter_mut() {
            *c /= &d;
        }
    }
}

fn roots_mod_l(f: &[BigInt], l: u64) -> Vec<u64> {
    let fb = FpPoly::from_bigints(l, f);
    if fb.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    fb.roots()
}

/// Roots in Z_l of a separable integer polynomial, each returned modulo
/// `l^prec`. Every returned residue class contains exactly one true root.
pub fn zl_roots(f: &[BigInt], l: u64, prec: u32) -> Vec<BigInt> {
    let mut g = f.to_vec();
    while g.last().is_some_and(|x| x.is_zero()) {
        g.pop();
    }
    let mut out = Vec::new();
    if g.len() < 2 {
        return out;
    }
    let modulus = pow_l(l, prec);
    descend(g, BigInt::zero(), BigInt::one(), l, prec, &modulus, 0, &mut out);
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn descend(
    mut g: Vec<BigInt>,
    base: BigInt,
    scale: BigInt,
    l: u64,
    prec: u32,
    modulus: &BigInt,
    depth: u32,
    out: &mut Vec<BigInt>,
) {
    strip_content(&mut g, l);
    // a separable polynomial separates its roots long before this
    if depth > 4 * prec + 64 {
        return;
    }
    let dg = deriv(&g);
    for a in roots_mod_l(&g, l) {
        let a = BigInt::from(a);
        let lb = BigInt::from(l);
        if !(eval(&dg, &a) % &lb).is_zero() {
            // simple root: Newton iteration converges in the residue class of a
            let m = modulus * &lb;
            let mut y = a;
            loop {
                let num = eval(&g, &y).mod_floor(&m);
                if num.is_zero() {
                    break;
                }
                let den = eval(&dg, &y).mod_floor(&m);
                let inv = mod_inverse(&den, &m).unwrap();
                let next = (&y - num * inv).mod_floor(&m);
                if next == y {
                    break;
                }
                y = next;
            }
            out.push((&base + &scale * y).mod_floor(modulus));
        } else {
            let h = substitute(&g, &a, &lb);
            descend(h, &base + &scale * &a, &scale * &lb, l, prec, modulus, depth + 1, out);
        }
    }
}

/// Whether `x` is a nonzero square in Q_l.
pub fn is_square_ql(x: &Rational, l: u64) -> bool {
    if x.is_zero() {
        return false;
    }
    let (u, v) = unit_part(x, l);
    if v % 2 != 0 {
        return false;
    }
    if l == 2 {
        let n = u.numer().mod_floor(&BigInt::from(8)).to_u8().unwrap();
        let d = u.denom().mod_floor(&BigInt::from(8)).to_u8().unwrap();
        (n * d) % 8 == 1
    } else {
        legendre(u.numer(), l) * legendre(u.denom(), l) == 1
    }
}

/// Square-class test for an l-adic integer known modulo `l^prec`.
/// `None` when the precision does not determine the answer.
pub fn is_square_mod_power(x: &BigInt, l: u64, prec: u32) -> Option<bool> {
    let m = pow_l(l, prec);
    let x = x.mod_floor(&m);
    if x.is_zero() {
        return None;
    }
    let v = val_nonzero(&x, l);
    let need = if l == 2 { 3 } else { 1 };
    if prec - v < need {
        return None;
    }
    if v % 2 == 1 {
        return Some(false);
    }
    let u = x / pow_l(l, v);
    Some(if l == 2 {
        (u % 8u32).to_u8() == Some(1)
    } else {
        legendre(&u, l) == 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, rat};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn sqrt_minus_one_in_z5() {
        let roots = zl_roots(&ints(&[1, 0, 1]), 5, 10);
        assert_eq!(roots.len(), 2);
        let m = pow_l(5, 10);
        for r in roots {
            assert!(((&r * &r + 1u32) % &m).is_zero());
        }
        assert!(zl_roots(&ints(&[1, 0, 1]), 7, 10).is_empty());
    }

    #[test]
    fn clustered_roots() {
        // roots 1 and 1 + 3^4 share a residue class for several digits
        let f = ints(&[82, -83, 1]);
        let roots = zl_roots(&f, 3, 12);
        assert_eq!(roots, [BigInt::from(1), BigInt::from(82)]);
        // x^2 - 2 over Z_7 has two roots, over Z_2 none
        assert_eq!(zl_roots(&ints(&[-2, 0, 1]), 7, 8).len(), 2);
        assert!(zl_roots(&ints(&[-2, 0, 1]), 2, 8).is_empty());
        // 2x - 1 has root 1/2 in Z_3
        let r = zl_roots(&ints(&[-1, 2]), 3, 5);
        assert_eq!(r, [BigInt::from(122)]);
    }

    #[test]
    fn square_classes() {
        assert!(is_square_ql(&rat(-7), 2));
        assert!(!is_square_ql(&rat(3), 2));
        assert!(is_square_ql(&frac(4, 9), 3));
        assert!(!is_square_ql(&rat(2), 3));
        assert!(is_square_ql(&rat(-1), 5));
        assert_eq!(is_square_mod_power(&BigInt::from(17), 2, 6), Some(true));
        assert_eq!(is_square_mod_power(&BigInt::from(16), 2, 6), None);
        assert_eq!(is_square_mod_power(&BigInt::from(18), 3, 4), Some(false));
    }
}

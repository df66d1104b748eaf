use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{unit_part, Rational};
use crate::{Error, Result};

/// A place of Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(u64),
    Infinity,
}

/// Legendre symbol `(a/p)` for an odd prime `p`; 0 when `p | a`.
pub fn legendre(a: &BigInt, p: u64) -> i8 {
    let r = a.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    if r == 0 {
        return 0;
    }
    let mut e = (p - 1) / 2;
    let mut b = r as u128;
    let m = p as u128;
    let mut acc = 1u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

fn legendre_unit(u: &Rational, p: u64) -> i8 {
    legendre(u.numer(), p) * legendre(u.denom(), p)
}

/// A 2-adic unit modulo 8, as 1, 3, 5 or 7.
fn mod8(u: &Rational) -> u8 {
    let n = u.numer().mod_floor(&BigInt::from(8)).to_u8().unwrap();
    // odd d satisfies d^2 = 1 mod 8, so d^{-1} = d
    let d = u.denom().mod_floor(&BigInt::from(8)).to_u8().unwrap();
    (n * d) % 8
}

/// Hilbert symbol `(a, b)` over the completion of Q at `place`.
pub fn hilbert_symbol(a: &Rational, b: &Rational, place: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroInput);
    }
    match place {
        Place::Infinity => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Finite(2) => {
            let (u, alpha) = unit_part(a, 2);
            let (v, beta) = unit_part(b, 2);
            let (u8_, v8) = (mod8(&u), mod8(&v));
            let eps = |x: u8| ((x as u32 - 1) / 2) % 2;
            let omega = |x: u8| ((x as u32 * x as u32 - 1) / 8) % 2;
            let e = eps(u8_) * eps(v8)
                + (alpha.rem_euclid(2) as u32) * omega(v8)
                + (beta.rem_euclid(2) as u32) * omega(u8_);
            Ok(if e.is_multiple_of(2) { 1 } else { -1 })
        }
        Place::Finite(l) => {
            let (u, alpha) = unit_part(a, l);
            let (v, beta) = unit_part(b, l);
            let mut s: i8 = 1;
            if (alpha * beta).rem_euclid(2) == 1 && (l - 1) / 2 % 2 == 1 {
                s = -s;
            }
            if beta.rem_euclid(2) == 1 {
                s *= legendre_unit(&u, l);
            }
            if alpha.rem_euclid(2) == 1 {
                s *= legendre_unit(&v, l);
            }
            Ok(s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factor, frac, rat};
    use alloc::vec::Vec;

    /// Solvability of `a x^2 + b y^2 = z^2` in Q_l by a search for primitive
    /// solutions modulo `l^3` (odd l) or `2^5`, after reducing `a, b` mod squares.
    fn oracle(a: i64, b: i64, l: u64) -> i8 {
        let reduce = |mut x: i64| {
            while x % (l * l) as i64 == 0 {
                x /= (l * l) as i64;
            }
            x
        };
        let (a, b) = (reduce(a), reduce(b));
        let m = if l == 2 { 32 } else { (l * l * l) as i64 };
        let li = l as i64;
        let mut square = alloc::vec![false; m as usize];
        let mut unit_square = alloc::vec![false; m as usize];
        for z in 0..m {
            square[(z * z % m) as usize] = true;
            if z % li != 0 {
                unit_square[(z * z % m) as usize] = true;
            }
        }
        for x in 0..m {
            for y in 0..m {
                let t = (a * x * x + b * y * y).rem_euclid(m) as usize;
                let xy_unit = x % li != 0 || y % li != 0;
                if (xy_unit && square[t]) || unit_square[t] {
                    return 1;
                }
            }
        }
        -1
    }

    #[test]
    fn known_values() {
        assert_eq!(hilbert_symbol(&rat(-1), &rat(-1), Place::Finite(2)), Ok(-1));
        assert_eq!(hilbert_symbol(&rat(2), &rat(5), Place::Finite(5)), Ok(-1));
        assert_eq!(hilbert_symbol(&rat(1), &rat(7), Place::Finite(7)), Ok(1));
        assert_eq!(hilbert_symbol(&rat(-1), &rat(-1), Place::Infinity), Ok(-1));
        assert_eq!(hilbert_symbol(&rat(0), &rat(3), Place::Finite(3)), Err(Error::ZeroInput));
        assert_eq!(hilbert_symbol(&frac(3, 4), &rat(-1), Place::Finite(2)), Ok(-1));
    }

    #[test]
    fn squares_mod_5() {
        let squares: Vec<i64> = (1..5).map(|x| x * x % 5).collect();
        assert!(!squares.contains(&2));
        assert_eq!(legendre(&BigInt::from(2), 5), -1);
        assert_eq!(legendre(&BigInt::from(4), 5), 1);
    }

    #[test]
    fn brute_force_oracle() {
        let vals = [-15i64, -6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10, 14, 15, 21];
        for l in [2u64, 3, 5, 7] {
            for &a in &vals {
                for &b in &vals {
                    let h = hilbert_symbol(&rat(a), &rat(b), Place::Finite(l)).unwrap();
                    assert_eq!(h, oracle(a, b, l), "({a},{b})_{l}");
                }
            }
        }
    }

    #[test]
    fn product_formula_small() {
        for a in -20i64..=20 {
            for b in -20i64..=20 {
                if a == 0 || b == 0 {
                    continue;
                }
                let mut places: Vec<u64> = factor(&BigInt::from(2 * a * b))
                    .into_iter()
                    .map(|(p, _)| p.to_u64().unwrap())
                    .collect();
                places.dedup();
                let mut prod = hilbert_symbol(&rat(a), &rat(b), Place::Infinity).unwrap();
                for l in places {
                    prod *= hilbert_symbol(&rat(a), &rat(b), Place::Finite(l)).unwrap();
                }
                assert_eq!(prod, 1, "({a},{b})");
            }
        }
    }
}

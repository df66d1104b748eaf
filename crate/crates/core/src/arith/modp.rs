//! Polynomials over F_l for word-sized primes, with root finding and
//! Cantor-Zassenhaus factorization of squarefree polynomials.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer as _;
use num_traits::ToPrimitive;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    pub p: u64,
    c: Vec<u64>,
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn addm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn subm(a: u64, b: u64, p: u64) -> u64 {
    addm(a, p - b, p)
}

pub fn powm(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, b, p);
        }
        b = mulm(b, b, p);
        e >>= 1;
    }
    r
}

pub fn invm(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "inverse of 0 mod {p}");
    powm(a, p - 2, p)
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn from_bigints(p: u64, c: &[BigInt]) -> Self {
        let m = BigInt::from(p);
        Self::new(p, c.iter().map(|x| x.mod_floor(&m).to_u64().unwrap()).collect())
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c.iter().rev().fold(0, |acc, &a| addm(mulm(acc, x, self.p), a, self.p))
    }

    pub fn add(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        let g = |v: &Vec<u64>, i: usize| v.get(i).copied().unwrap_or(0);
        FpPoly::new(self.p, (0..n).map(|i| addm(g(&self.c, i), g(&o.c, i), self.p)).collect())
    }

    pub fn sub(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        let g = |v: &Vec<u64>, i: usize| v.get(i).copied().unwrap_or(0);
        FpPoly::new(self.p, (0..n).map(|i| subm(g(&self.c, i), g(&o.c, i), self.p)).collect())
    }

    pub fn mul(&self, o: &FpPoly) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p;
        let mut r = vec![0u128; self.c.len() + o.c.len() - 1];
        let pp = p as u128;
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                r[i + j] = (r[i + j] + a as u128 * b as u128) % pp;
            }
        }
        FpPoly::new(p, r.into_iter().map(|x| x as u64).collect())
    }

    pub fn scale(&self, k: u64) -> FpPoly {
        FpPoly::new(self.p, self.c.iter().map(|&a| mulm(a, k, self.p)).collect())
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invm(self.leading(), self.p))
    }

    pub fn divrem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        let p = self.p;
        let dd = d.degree().expect("division by zero polynomial");
        if self.c.len() <= dd {
            return (FpPoly::zero(p), self.clone());
        }
        let inv = invm(d.leading(), p);
        let mut r = self.c.clone();
        let mut q = vec![0u64; r.len() - dd];
        for i in (0..q.len()).rev() {
            let k = mulm(r[i + dd], inv, p);
            if k != 0 {
                for (j, &dc) in d.c.iter().enumerate() {
                    r[i + j] = subm(r[i + j], mulm(k, dc, p), p);
                }
            }
            q[i] = k;
        }
        r.truncate(dd);
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn rem(&self, d: &FpPoly) -> FpPoly {
        self.divrem(d).1
    }

    pub fn gcd(&self, o: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &FpPoly) -> (FpPoly, FpPoly, FpPoly) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
        let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = core::mem::replace(&mut r1, r);
            let s2 = s0.sub(&q.mul(&s1));
            s0 = core::mem::replace(&mut s1, s2);
            let t2 = t0.sub(&q.mul(&t1));
            t0 = core::mem::replace(&mut t1, t2);
        }
        let k = invm(r0.leading(), p);
        (r0.scale(k), s0.scale(k), t0.scale(k))
    }

    pub fn derivative(&self) -> FpPoly {
        FpPoly::new(
            self.p,
            self.c.iter().enumerate().skip(1).map(|(i, &a)| mulm(a, i as u64 % self.p, self.p)).collect(),
        )
    }

    /// `self^e mod m`
    pub fn powmod(&self, e: &BigUint, m: &FpPoly) -> FpPoly {
        let mut r = FpPoly::one(self.p).rem(m);
        let b = self.rem(m);
        for i in (0..e.bits()).rev() {
            r = r.mul(&r).rem(m);
            if e.bit(i) {
                r = r.mul(&b).rem(m);
            }
        }
        r
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Distinct roots in F_p, ascending.
    pub fn roots(&self) -> Vec<u64> {
        let p = self.p;
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let f = self.monic();
        let mut roots = if p < 64 {
            (0..p).filter(|&x| f.eval(x) == 0).collect()
        } else {
            let xp = FpPoly::x(p).powmod(&BigUint::from(p), &f);
            let g = xp.sub(&FpPoly::x(p)).gcd(&f);
            let mut rng = ChaCha8Rng::seed_from_u64(p ^ 0x5eed);
            let mut out = Vec::new();
            for h in equal_degree(&g, 1, &mut rng) {
                out.push(subm(0, h.c[0], p));
            }
            out
        };
        roots.sort_unstable();
        roots
    }

    /// Monic irreducible factors of a squarefree polynomial (odd `p`).
    pub fn factor_squarefree(&self) -> Vec<FpPoly> {
        let p = self.p;
        assert!(p > 2, "factorization needs an odd prime");
        let mut f = self.monic();
        let mut rng = ChaCha8Rng::seed_from_u64(p.wrapping_mul(0x9e37_79b9) ^ self.c.len() as u64);
        let mut out = Vec::new();
        let x = FpPoly::x(p);
        let mut h = x.clone();
        let mut d = 0;
        let pb = BigUint::from(p);
        while f.degree().unwrap_or(0) > 0 {
            d += 1;
            if 2 * d > f.degree().unwrap() {
                out.push(f.clone());
                break;
            }
            h = h.powmod(&pb, &f);
            let g = h.sub(&x).gcd(&f);
            if g.degree().unwrap() > 0 {
                out.extend(equal_degree(&g, d, &mut rng));
                f = f.divrem(&g).0;
                h = h.rem(&f);
            }
        }
        out.sort_by(|a, b| a.c.len().cmp(&b.c.len()).then(a.c.cmp(&b.c)));
        out
    }
}

/// Splits a product of distinct monic irreducibles of degree `d`.
fn equal_degree(f: &FpPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let p = f.p;
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![f.monic()];
    }
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = FpPoly::new(p, (0..n).map(|_| rng.next_u64() % p).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = a.powmod(&e, f).sub(&FpPoly::one(p));
        let g = b.gcd(f);
        let k = g.degree().unwrap_or(0);
        if k > 0 && k < n {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&f.divrem(&g).0, d, rng));
            return out;
        }
    }
}

/// Reduces `x mod p` for a signed integer.
pub fn reduce(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Whether `a` is a nonzero square mod an odd prime.
pub fn is_square_mod(a: u64, p: u64) -> bool {
    !a.is_multiple_of(p) && powm(a % p, (p - 1) / 2, p) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_small_and_large() {
        // (x-1)(x-2)(x-3) mod 7
        let f = FpPoly::new(7, vec![7 - 6, 11, 7 - 6, 1]);
        assert_eq!(f.roots(), [1, 2, 3]);
        let p = 1_000_003;
        let f = FpPoly::new(p, vec![p - 6, 11, p - 6, 1]);
        assert_eq!(f.roots(), [1, 2, 3]);
        // x^2 + 1 has no roots mod 1000003 (= 3 mod 4)
        assert!(FpPoly::new(p, vec![1, 0, 1]).roots().is_empty());
    }

    #[test]
    fn factorization_reassembles() {
        let p = 101;
        let f = FpPoly::new(p, vec![3, 1, 4, 1, 5, 9, 2, 6, 1]);
        if f.is_squarefree() {
            let fs = f.factor_squarefree();
            let prod = fs.iter().fold(FpPoly::one(p), |acc, g| acc.mul(g));
            assert_eq!(prod, f.monic());
            for g in &fs {
                let deg = g.degree().unwrap();
                // irreducible of degree d divides x^{p^d} - x and no smaller one
                let xp = FpPoly::x(p).powmod(&BigUint::from(p).pow(deg as u32), g);
                assert!(xp.sub(&FpPoly::x(p)).rem(g).is_zero());
            }
        }
    }

    #[test]
    fn ext_gcd_identity() {
        let p = 13;
        let a = FpPoly::new(p, vec![1, 2, 3, 4]);
        let b = FpPoly::new(p, vec![5, 0, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }
}

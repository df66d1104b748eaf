//! Factors of prescribed degree of integer polynomials: factor modulo a good
//! prime, Hensel-lift the factorization, recombine subsets, and keep the
//! candidates that divide exactly over Z.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::modp::{invm, FpPoly};
use super::{is_prime_u64, symmetric_mod, QPoly, Rational};

type ZPoly = Vec<BigInt>;

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    r
}

fn zmod(a: &mut ZPoly, m: &BigInt) {
    for x in a.iter_mut() {
        *x = x.mod_floor(m);
    }
}

fn lift(f: &FpPoly) -> ZPoly {
    f.coeffs().iter().map(|&c| BigInt::from(c)).collect()
}

fn zadd_scaled(a: &mut ZPoly, b: &FpPoly, m: &BigInt) {
    for (i, &c) in b.coeffs().iter().enumerate() {
        if i >= a.len() {
            a.push(BigInt::zero());
        }
        a[i] += m * c;
    }
}

/// Lifts `f = lc * g0 * h0 (mod l)` to `f = lc * g * h (mod l^k)` with `g, h` monic.
fn hensel(f: &[BigInt], g0: &FpPoly, h0: &FpPoly, l: u64, k: u32) -> (ZPoly, ZPoly) {
    let lc = f.last().unwrap().clone();
    let lc_inv = invm(super::modp::reduce(&lc, l), l);
    let (one, _, t) = g0.ext_gcd(h0);
    debug_assert_eq!(one.degree(), Some(0));
    let mut g = lift(g0);
    let mut h = lift(h0);
    let mut m = BigInt::from(l);
    let target = BigInt::from(l).pow(k);
    while m < target {
        let gh = zmul(&g, &h);
        let n = f.len().max(gh.len());
        let e: ZPoly = (0..n)
            .map(|i| {
                let fi = f.get(i).cloned().unwrap_or_default();
                let pi = gh.get(i).map(|x| x * &lc).unwrap_or_default();
                debug_assert!(((&fi - &pi) % &m).is_zero());
                (fi - pi) / &m
            })
            .collect();
        let e = FpPoly::from_bigints(l, &e).scale(lc_inv);
        let (_, r) = e.mul(&t).divrem(g0);
        let dh = e.sub(&r.mul(h0)).divrem(g0).0;
        zadd_scaled(&mut g, &r, &m);
        zadd_scaled(&mut h, &dh, &m);
        m *= l;
        zmod(&mut g, &m);
        zmod(&mut h, &m);
    }
    (g, h)
}

fn subset_sum_possible(degs: &[usize], d: usize) -> bool {
    let mut reach = vec![false; d + 1];
    reach[0] = true;
    for &x in degs {
        for s in (x..=d).rev() {
            if reach[s - x] {
                reach[s] = true;
            }
        }
    }
    reach[d]
}

/// All monic factors over Q of degree `d` of the squarefree part of `f`.
pub fn factors_of_degree(f: &QPoly, d: usize) -> Vec<QPoly> {
    let sf = f.squarefree_part();
    let n = match sf.degree() {
        Some(n) => n,
        None => return Vec::new(),
    };
    if d == 0 {
        return vec![QPoly::one()];
    }
    if d > n {
        return Vec::new();
    }
    if d == n {
        return vec![sf];
    }
    let fz = sf.primitive_integer();
    let lc = fz[n].clone();

    // pick the good prime giving the fewest modular factors among a few candidates
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    let mut l = 2u64;
    while tried < 4 && l < 10_000 {
        l += 1;
        if !is_prime_u64(l) || (&lc % l).is_zero() {
            continue;
        }
        let fb = FpPoly::from_bigints(l, &fz);
        if fb.degree() != Some(n) || !fb.is_squarefree() {
            continue;
        }
        tried += 1;
        let fs = fb.factor_squarefree();
        let degs: Vec<usize> = fs.iter().map(|g| g.degree().unwrap()).collect();
        if !subset_sum_possible(&degs, d) {
            return Vec::new();
        }
        if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
            best = Some((l, fs));
        }
    }
    let (l, modular) = best.expect("no good prime below 10^4");

    // Mignotte-type bound on coefficients of lc(f)/lc(g) * g for a degree-d factor g
    let norm2 = fz.iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1u32;
    let bound = lc.abs() * (BigInt::one() << d) * norm2 * 2u32;
    let mut k = 1u32;
    let mut m = BigInt::from(l);
    while m <= bound {
        m *= l;
        k += 1;
    }

    // lift the full factorization one factor at a time
    let r = modular.len();
    let mut lifted: Vec<ZPoly> = Vec::with_capacity(r);
    let mut target = fz.clone();
    for i in 0..r - 1 {
        let rest = modular[i + 1..].iter().fold(FpPoly::one(l), |acc, g| acc.mul(g));
        let (g, h) = hensel(&target, &modular[i], &rest, l, k);
        lifted.push(g);
        target = h;
    }
    lifted.push({
        let mut t = target;
        zmod(&mut t, &m);
        t
    });

    let degs: Vec<usize> = modular.iter().map(|g| g.degree().unwrap()).collect();
    let fq = QPoly::from_integers(&fz);
    let mut out: Vec<QPoly> = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    recombine(0, d, &degs, &mut chosen, &mut |idx: &[usize]| {
        let mut prod: ZPoly = vec![lc.clone()];
        for &i in idx {
            prod = zmul(&prod, &lifted[i]);
            zmod(&mut prod, &m);
        }
        let cand: ZPoly = prod.iter().map(|c| symmetric_mod(c, &m)).collect();
        let g = QPoly::from_integers(&cand);
        if g.degree() == Some(d) && fq.div_exact(&g).is_some() {
            let g = g.monic();
            if !out.contains(&g) {
                out.push(g);
            }
        }
    });
    out.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
    out
}

fn recombine(start: usize, left: usize, degs: &[usize], chosen: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if left == 0 {
        f(chosen);
        return;
    }
    for i in start..degs.len() {
        if degs[i] <= left {
            chosen.push(i);
            recombine(i + 1, left - degs[i], degs, chosen, f);
            chosen.pop();
        }
    }
}

/// Distinct rational roots, ascending.
pub fn rational_roots(f: &QPoly) -> Vec<Rational> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut roots: Vec<Rational> = factors_of_degree(f, 1).into_iter().map(|g| -g.coeff(0)).collect();
    roots.sort();
    roots
}

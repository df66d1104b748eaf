use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

const TRIAL_BOUND: u64 = 1_000_000;
const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES[..12] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with the first 13 prime bases; deterministic below 3.3e24.
pub fn is_prime(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    if let Some(m) = n.to_u64() {
        return is_prime_u64(m);
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// A nontrivial factor of an odd composite by Pollard-Brent.
fn rho(n: &BigInt) -> BigInt {
    let one = BigInt::one();
    let mut c = BigInt::one();
    loop {
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2u32);
        let mut x = y.clone();
        let mut g = one.clone();
        let mut r = 1u64;
        let mut q = one.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..core::cmp::min(128, r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1;
    }
}

fn push_large(n: BigInt, out: &mut BTreeMap<BigInt, u32>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let r = n.sqrt();
    if &r * &r == n {
        push_large(r.clone(), out);
        push_large(r, out);
        return;
    }
    let d = rho(&n);
    let e = &n / &d;
    push_large(d, out);
    push_large(e, out);
}

/// Prime factorization of a nonzero integer, primes ascending. The sign is dropped.
pub fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(!n.is_zero(), "factor(0)");
    let mut out = BTreeMap::new();
    let mut n = n.abs();
    let mut d;
    let mut step_idx = 0;
    const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut small = |n: &mut BigInt, d: u64| {
        if let Some(m) = n.to_u64() {
            let mut m = m;
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            if e > 0 {
                out.insert(BigInt::from(d), e);
                *n = BigInt::from(m);
            }
        } else if (&*n % d).is_zero() {
            let mut e = 0;
            while (&*n % d).is_zero() {
                *n /= d;
                e += 1;
            }
            out.insert(BigInt::from(d), e);
        }
    };
    for p in [2u64, 3, 5] {
        small(&mut n, p);
    }
    d = 7;
    while d <= TRIAL_BOUND {
        if let Some(m) = n.to_u64() {
            if (d as u128) * (d as u128) > m as u128 {
                break;
            }
        }
        small(&mut n, d);
        d += WHEEL[step_idx];
        step_idx = (step_idx + 1) % 8;
    }
    if !n.is_one() {
        if n.to_u64().is_some_and(|m| (m as u128) < (TRIAL_BOUND as u128).pow(2)) {
            *out.entry(n).or_insert(0) += 1;
        } else {
            push_large(n, &mut out);
        }
    }
    out.into_iter().collect()
}

/// Distinct prime divisors, ascending.
pub fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

//! Dedekind eta, the discriminant and j on the upper half plane.

use alloc::vec::Vec;

use num_traits::ToPrimitive;

use super::float::{pi, Complex, Float};

/// `exp(2 pi i z)`.
pub fn qexp(z: &Complex) -> Complex {
    let two_pi = pi(z.prec()).mul_pow2(1);
    z.scale(&two_pi).mul_i().exp()
}

/// Moves `tau` into the standard fundamental domain. Returns the reduced point
/// and the sequence of moves: `Shift(n)` is `tau -> tau - n`, `Invert` is `tau -> -1/tau`.
pub fn reduce(tau: &Complex) -> (Complex, Vec<Move>) {
    let p = tau.prec();
    let mut t = tau.clone();
    let mut moves = Vec::new();
    let one = Float::from_i64(1, p);
    for _ in 0..10_000 {
        let n = t.re.round_to_int();
        if n != 0.into() {
            t.re = &t.re - &Float::from_int(&n, p);
            moves.push(Move::Shift(n.to_i64().expect("shift fits in i64")));
        }
        // the 2^-20 slack stops ping-pong on the unit circle
        if t.norm_sqr() < &one - &Float::from_parts(1.into(), -20, p) {
            t = -t.recip();
            moves.push(Move::Invert);
        } else {
            break;
        }
    }
    (t, moves)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    Shift(i64),
    Invert,
}

/// Applies the moves reducing `w2 / w1` to the basis itself.
pub fn reduce_basis(w1: &Complex, w2: &Complex) -> (Complex, Complex) {
    let (_, moves) = reduce(&(w2 / w1));
    let (mut w1, mut w2) = (w1.clone(), w2.clone());
    for m in moves {
        match m {
            Move::Shift(n) => w2 = &w2 - &w1.scale(&Float::from_i64(n, w1.prec())),
            Move::Invert => (w1, w2) = (w2, -&w1),
        }
    }
    (w1, w2)
}

/// Factors of `prod (1 - q^n)` needed for the tail to drop below `2^-bits`.
pub fn terms_needed(q: &Complex, bits: u32) -> usize {
    let m = q.abs().magnitude();
    if m >= 0 {
        return 10_000;
    }
    (bits as usize + 8) / (-m) as usize + 1
}

/// `prod_{n=1}^{terms} (1 - q^n)`.
pub fn euler_product(q: &Complex, terms: usize) -> Complex {
    let p = q.prec();
    let one = Complex::real(Float::from_i64(1, p));
    let mut acc = one.clone();
    let mut qn = one.clone();
    for _ in 0..terms {
        qn = &qn * q;
        if qn.abs().magnitude() < -(p as i64) - 8 {
            break;
        }
        acc = &acc * &(&one - &qn);
    }
    acc
}

/// `eta(tau) = q^(1/24) prod (1 - q^n)`, evaluated at the reduced point and carried
/// back with `eta(tau + 1) = e^(pi i/12) eta(tau)` and `eta(-1/tau) = sqrt(-i tau) eta(tau)`.
/// The product runs to at least `min_terms` factors, and further while they matter.
pub fn eta(tau: &Complex, min_terms: usize) -> Complex {
    let p = tau.prec();
    let (t, moves) = reduce(tau);
    let q = qexp(&t);
    let n = terms_needed(&q, p).max(min_terms);
    let mut val = &qexp(&t.scale(&Float::from_rational(&crate::arith::frac(1, 24), p))) * &euler_product(&q, n);
    // undo the moves from last to first
    let mut cur = t;
    for m in moves.iter().rev() {
        match *m {
            Move::Shift(k) => {
                // eta(cur + k) = e^(pi i k/12) eta(cur)
                let phase = qexp(&Complex::real(Float::from_rational(&crate::arith::frac(k, 24), p)));
                val = &val * &phase;
                cur.re = &cur.re + &Float::from_i64(k, p);
            }
            Move::Invert => {
                // cur = -1/prev, so eta(prev) = eta(-1/cur) = sqrt(-i cur) eta(cur)
                let f = (-cur.mul_i()).sqrt();
                val = &val * &f;
                cur = -cur.recip();
            }
        }
    }
    val
}

/// `Delta(tau) = q prod (1 - q^n)^24` with exactly `terms` factors, no reduction.
pub fn delta_series(tau: &Complex, terms: usize) -> Complex {
    let q = qexp(tau);
    &q * &euler_product(&q, terms).powi(24)
}

/// `E_4(tau) = 1 + 240 sum n^3 q^n / (1 - q^n)`.
pub fn e4_series(q: &Complex, terms: usize) -> Complex {
    lambert(q, terms, 3, 240)
}

/// `E_6(tau) = 1 - 504 sum n^5 q^n / (1 - q^n)`.
pub fn e6_series(q: &Complex, terms: usize) -> Complex {
    lambert(q, terms, 5, -504)
}

fn lambert(q: &Complex, terms: usize, k: u32, c: i64) -> Complex {
    let p = q.prec();
    let one = Complex::real(Float::from_i64(1, p));
    let mut sum = Complex::real(Float::zero(p));
    let mut qn = one.clone();
    for n in 1..=terms as i64 {
        qn = &qn * q;
        if qn.abs().magnitude() < -(p as i64) - 24 {
            break;
        }
        let t = (&qn / &(&one - &qn)).scale(&Float::from_i64(n.pow(k), p));
        sum = &sum + &t;
    }
    &one + &sum.scale(&Float::from_i64(c, p))
}

/// Klein's `j` function.
pub fn j_invariant(tau: &Complex) -> Complex {
    let p = tau.prec();
    let (t, _) = reduce(tau);
    let q = qexp(&t);
    let n = terms_needed(&q, p + 16);
    let e4 = e4_series(&q, n);
    let d = &q * &euler_product(&q, n).powi(24);
    &e4.powi(3) / &d
}

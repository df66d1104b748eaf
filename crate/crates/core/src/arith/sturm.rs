//! Real root isolation with Sturm sequences.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::{QPoly, Rational};

pub fn sturm_sequence(f: &QPoly) -> Vec<QPoly> {
    let mut seq = alloc::vec![f.clone(), f.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let r = -&seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        // positive rescaling keeps the sign pattern and the numbers small
        let k = r.leading().abs().recip();
        seq.push(r.scale(&k));
    }
    seq
}

fn sign_changes(seq: &[QPoly], x: &Rational) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| {
            let v = p.eval(x);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in `(a, b]`.
pub fn count_roots(seq: &[QPoly], a: &Rational, b: &Rational) -> usize {
    sign_changes(seq, a) - sign_changes(seq, b)
}

/// Bound exceeding the absolute value of every complex root.
pub fn root_bound(f: &QPoly) -> Rational {
    let lc = f.leading().abs();
    let m = f.coeffs().iter().map(|c| c.abs() / &lc).max().unwrap_or_else(Rational::zero);
    m + Rational::one()
}

/// Disjoint intervals `(a, b]`, ascending, each holding exactly one real root
/// of `f` (whose distinct roots are isolated).
pub fn isolate_real_roots(f: &QPoly) -> Vec<(Rational, Rational)> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let seq = sturm_sequence(f);
    let b = root_bound(f);
    let mut out = Vec::new();
    let mut stack = alloc::vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        match count_roots(&seq, &lo, &hi) {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / Rational::from_integer(2.into());
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort();
    out
}

/// Shrinks an isolating interval of `f` by bisection until it is narrower than `width`.
pub fn refine(f: &QPoly, seq: &[QPoly], mut lo: Rational, mut hi: Rational, width: &Rational) -> (Rational, Rational) {
    let two = Rational::from_integer(2.into());
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        if f.eval(&mid).is_zero() {
            return (mid.clone(), mid);
        }
        if count_roots(seq, &lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

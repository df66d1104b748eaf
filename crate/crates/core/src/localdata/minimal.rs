use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{factor, pow_l, rat_from, rat_pow, val_nonzero};
use crate::curves::{isomorphism, Curve, ModelMap};

use super::tate_local;

/// Primes dividing the discriminant of an integral model of `e`.
pub fn bad_primes(e: &Curve) -> Vec<u64> {
    let (ei, _) = e.integral_model();
    factor(&ei.disc().to_integer())
        .into_iter()
        .map(|(p, _)| p.to_u64().expect("prime factor beyond 64 bits"))
        .collect()
}

/// Reduced integral model with the given invariants, if `(c4, c6)` come from one.
fn model_from_c4c6(c4: &BigInt, c6: &BigInt) -> Option<Curve> {
    let twelve = BigInt::from(12);
    let mut b2 = (-c6).mod_floor(&twelve);
    if b2 > BigInt::from(6) {
        b2 -= &twelve;
    }
    let (b4, r) = (&b2 * &b2 - c4).div_rem(&BigInt::from(24));
    if r != BigInt::ZERO {
        return None;
    }
    let (b6, r) = (-(&b2 * &b2 * &b2) + BigInt::from(36) * &b2 * &b4 - c6).div_rem(&BigInt::from(216));
    if r != BigInt::ZERO {
        return None;
    }
    let two = BigInt::from(2);
    let a1 = b2.mod_floor(&two);
    let a3 = b6.mod_floor(&two);
    let a2 = (&b2 - &a1) / 4;
    let a4 = (&b4 - &a1 * &a3) / 2;
    let a6 = (&b6 - &a3) / 4;
    let e = Curve::from_integers(&[a1, a2, a3, a4, a6]).ok()?;
    (e.invariants().c4 == rat_from(c4) && e.invariants().c6 == rat_from(c6)).then_some(e)
}

/// Global minimal model and the map reaching it from `e`. `primes` may list
/// the bad primes to skip factoring the discriminant.
pub fn global_minimal_model(e: &Curve, primes: Option<&[u64]>) -> (Curve, ModelMap) {
    let (ei, m0) = e.integral_model();
    let owned;
    let primes = match primes {
        Some(p) => p,
        None => {
            owned = bad_primes(&ei);
            &owned
        }
    };
    let disc = ei.disc().to_integer();
    let mut u = BigInt::one();
    for &l in primes {
        if !(&disc % l).is_zero() {
            continue;
        }
        let delta = tate_local(&ei, l).disc_valuation;
        let excess = val_nonzero(&disc, l) - delta;
        debug_assert_eq!(excess % 12, 0);
        u *= pow_l(l, excess / 12);
    }
    if u.is_one() && ei_is_reduced(&ei) {
        return (ei, m0);
    }
    let ur = rat_from(&u);
    let inv = ei.invariants();
    let c4 = (&inv.c4 / rat_pow(&ur, 4)).to_integer();
    let c6 = (&inv.c6 / rat_pow(&ur, 6)).to_integer();
    let min = model_from_c4c6(&c4, &c6).expect("minimal invariants satisfy Kraus' conditions");
    let iso = isomorphism(&ei, &min).expect("same invariants up to u");
    (min, m0.then(&iso))
}

fn ei_is_reduced(e: &Curve) -> bool {
    let a = e.integer_ainvs();
    let small = |x: &BigInt, lo: i64, hi: i64| *x >= BigInt::from(lo) && *x <= BigInt::from(hi);
    small(&a[0], 0, 1) && small(&a[1], -1, 1) && small(&a[2], 0, 1)
}

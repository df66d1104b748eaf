//! Tate's algorithm at a single prime.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::modp::FpPoly;
use crate::arith::{legendre, rat, rat_from, rat_mod, val, Rational, Valuation};
use crate::curves::{Curve, ModelMap};

use super::{KodairaSymbol, LocalInvariants};

fn v(x: &Rational, l: u64) -> i64 {
    match val(x, l) {
        Valuation::Finite(k) => k,
        Valuation::Infinite => i64::MAX,
    }
}

/// `x mod l` as an integer in `[0, l)`; `x` must be l-integral.
fn md(x: &Rational, l: u64) -> BigInt {
    rat_mod(x, &BigInt::from(l))
}

fn modi(x: &Rational, l: u64) -> Rational {
    rat_from(&md(x, l))
}

/// Whether `a T^2 + b T + c` (with distinct roots mod l) splits over F_l.
fn quadratic_splits(a: &Rational, b: &Rational, c: &Rational, l: u64) -> bool {
    if l == 2 {
        // a and b are odd; T^2 + T + c splits iff c is even
        md(c, 2).is_zero()
    } else {
        let disc = b * b - rat(4) * a * c;
        legendre(&md(&disc, l), l) == 1
    }
}

fn roots_mod(b: &Rational, c: &Rational, d: &Rational, l: u64) -> u32 {
    let poly = FpPoly::from_bigints(l, &[md(d, l), md(c, l), md(b, l), BigInt::from(1)]);
    poly.roots().len() as u32
}

struct State {
    e: Curve,
    map: ModelMap,
}

impl State {
    fn apply(&mut self, m: ModelMap) {
        self.e = self.e.transform(&m).expect("valid change of model");
        self.map = self.map.then(&m);
    }

    fn a(&self, i: usize) -> Rational {
        self.e.a()[i].clone()
    }
}

/// Runs Tate's algorithm on `e` at the prime `l`.
pub fn tate_local(e: &Curve, l: u64) -> LocalInvariants {
    let (integral, m0) = e.integral_model();
    let mut st = State { e: integral, map: m0 };
    let lr = rat(l as i64);
    let half_inv = |x: Rational| -> Rational {
        // -x / 2 reduced mod l for odd l
        modi(&(-x / rat(2)), l)
    };
    loop {
        let inv = st.e.invariants().clone();
        let vd = v(&inv.disc, l) as u32;
        let finish = |st: &State, kod: KodairaSymbol, f: u32, c: u32, split: Option<bool>| LocalInvariants {
            prime: l,
            minimal_model: st.e.clone(),
            map_to_minimal: st.map.clone(),
            kodaira: kod,
            conductor_exponent: f,
            components: kod.components(),
            tamagawa: c,
            disc_valuation: vd,
            split,
        };
        if vd == 0 {
            return finish(&st, KodairaSymbol::I(0), 0, 1, None);
        }

        // move the singular point of the reduction to (0, 0)
        let (r, t) = if l == 2 {
            if v(&inv.b2, 2) > 0 {
                let r = st.a(3);
                let t = &r * (rat(1) + st.a(1) + st.a(3)) + st.a(4);
                (r, t)
            } else {
                let r = st.a(2);
                let t = &r + st.a(3);
                (r, t)
            }
        } else if l == 3 {
            let r = if v(&inv.b2, 3) > 0 { -inv.b6.clone() } else { -(&inv.b2 * &inv.b4) };
            let t = st.a(0) * &r + st.a(2);
            (r, t)
        } else {
            let r = if v(&inv.c4, l) > 0 {
                modi(&(-&inv.b2 / rat(12)), l)
            } else {
                modi(&(-(&inv.c6 + &inv.b2 * &inv.c4) / (rat(12) * &inv.c4)), l)
            };
            let t = half_inv(st.a(0) * &r + st.a(2));
            (r, t)
        };
        let (r, t) = (modi(&r, l), modi(&t, l));
        st.apply(ModelMap::new(rat(1), r, rat(0), t));
        let b2 = st.e.invariants().b2.clone();

        if v(&b2, l) == 0 {
            // multiplicative: tangent directions T^2 + a1 T - a2 at the node
            let split = quadratic_splits(&rat(1), &st.a(0), &-st.a(1), l);
            let c = if split {
                vd
            } else if vd.is_multiple_of(2) {
                2
            } else {
                1
            };
            return finish(&st, KodairaSymbol::I(vd), 1, c, Some(split));
        }
        if v(&st.a(4), l) < 2 {
            return finish(&st, KodairaSymbol::II, vd, 1, None);
        }
        let b8 = st.e.invariants().b8.clone();
        if v(&b8, l) < 3 {
            return finish(&st, KodairaSymbol::III, vd - 1, 2, None);
        }
        let b6 = st.e.invariants().b6.clone();
        if v(&b6, l) < 3 {
            let a3p = st.a(2) / &lr;
            let a6p = st.a(4) / (&lr * &lr);
            let c = if quadratic_splits(&rat(1), &a3p, &-a6p, l) { 3 } else { 1 };
            return finish(&st, KodairaSymbol::IV, vd - 2, c, None);
        }

        // arrange l | a1, a2; l^2 | a3, a4; l^3 | a6
        let (s, t) = if l == 2 {
            (modi(&st.a(1), 2), rat(2) * modi(&(st.a(4) / rat(4)), 2))
        } else if l == 3 {
            (st.a(0), st.a(2))
        } else {
            let l2 = BigInt::from(l) * BigInt::from(l);
            (half_inv(st.a(0)), rat_from(&rat_mod(&(-st.a(2) / rat(2)), &l2)))
        };
        st.apply(ModelMap::new(rat(1), rat(0), s, t));

        let l2 = &lr * &lr;
        let l3 = &l2 * &lr;
        let b = st.a(1) / &lr;
        let c = st.a(3) / &l2;
        let d = st.a(4) / &l3;
        let w = rat(27) * &d * &d - &b * &b * &c * &c + rat(4) * &b * &b * &b * &d - rat(18) * &b * &c * &d
            + rat(4) * &c * &c * &c;
        let x = rat(3) * &c - &b * &b;

        if v(&w, l) == 0 {
            let cp = 1 + roots_mod(&b, &c, &d, l);
            return finish(&st, KodairaSymbol::IStar(0), vd - 4, cp, None);
        }

        if v(&x, l) == 0 {
            // double root: move it to T = 0, then climb the I_n^* chain
            let root = if l == 2 {
                c.clone()
            } else if l == 3 {
                &b * &c
            } else {
                modi(&((&b * &c - rat(9) * &d) / (rat(2) * &x)), l)
            };
            st.apply(ModelMap::translation(&lr * modi(&root, l)));
            let mut ix = 3u32;
            let mut iy = 3u32;
            let mut mx = l2.clone();
            let mut my = l2.clone();
            let cp;
            loop {
                let xa2 = st.a(1) / &lr;
                let xa3 = st.a(2) / &my;
                let xa6 = st.a(4) / (&mx * &my);
                if v(&(&xa3 * &xa3 + rat(4) * &xa6), l) == 0 {
                    cp = if quadratic_splits(&rat(1), &xa3, &-xa6, l) { 4 } else { 2 };
                    break;
                }
                let t = if l == 2 { modi(&xa6, 2) } else { half_inv(xa3.clone()) };
                st.apply(ModelMap::new(rat(1), rat(0), rat(0), &my * t));
                my *= &lr;
                iy += 1;
                let xa4 = st.a(3) / (&lr * &mx);
                let xa6 = st.a(4) / (&mx * &my);
                if v(&(&xa4 * &xa4 - rat(4) * &xa2 * &xa6), l) == 0 {
                    cp = if quadratic_splits(&xa2, &xa4, &xa6, l) { 4 } else { 2 };
                    break;
                }
                let r = if l == 2 {
                    modi(&(&xa6 * &xa2), 2)
                } else {
                    modi(&(-&xa4 / (rat(2) * &xa2)), l)
                };
                st.apply(ModelMap::translation(&mx * r));
                mx *= &lr;
                ix += 1;
            }
            let n = ix + iy - 5;
            return finish(&st, KodairaSymbol::IStar(n), vd - 4 - n, cp, None);
        }

        // triple root: move it to T = 0
        let root = if l == 2 {
            b.clone()
        } else if l == 3 {
            -d.clone()
        } else {
            modi(&(-&b / rat(3)), l)
        };
        st.apply(ModelMap::translation(&lr * modi(&root, l)));
        let l4 = &l2 * &l2;
        let x3 = st.a(2) / &l2;
        let x6 = st.a(4) / &l4;
        if v(&(&x3 * &x3 + rat(4) * &x6), l) == 0 {
            let cp = if quadratic_splits(&rat(1), &x3, &-x6, l) { 3 } else { 1 };
            return finish(&st, KodairaSymbol::IVStar, vd - 6, cp, None);
        }
        let t = if l == 2 { modi(&x6, 2) } else { half_inv(x3) };
        st.apply(ModelMap::new(rat(1), rat(0), rat(0), &l2 * t));
        if v(&st.a(3), l) < 4 {
            return finish(&st, KodairaSymbol::IIIStar, vd - 7, 2, None);
        }
        if v(&st.a(4), l) < 6 {
            return finish(&st, KodairaSymbol::IIStar, vd - 8, 1, None);
        }
        // not minimal: rescale by l and start over
        st.apply(ModelMap::scaling(lr.clone()));
    }
}

//! Weierstrass models over Q.

mod divpoly;
mod points;

use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{common_denominator, is_nth_power, is_squarefree, rat, rat_from, rat_pow, Integer, QPoly, Rational};
use crate::{Error, Result};

pub use divpoly::{eval_ratio, DivisionPolynomials};
pub use points::Point;

/// Standard quantities attached to a Weierstrass model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub b2: Rational,
    pub b4: Rational,
    pub b6: Rational,
    pub b8: Rational,
    pub c4: Rational,
    pub c6: Rational,
    pub disc: Rational,
    pub j: Rational,
}

fn compute_invariants(a: &[Rational; 5]) -> Option<Invariants> {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1 * a1 + rat(4) * a2;
    let b4 = rat(2) * a4 + a1 * a3;
    let b6 = a3 * a3 + rat(4) * a6;
    let b8 = a1 * a1 * a6 + rat(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    let c4 = &b2 * &b2 - rat(24) * &b4;
    let c6 = -(&b2 * &b2 * &b2) + rat(36) * &b2 * &b4 - rat(216) * &b6;
    let disc = -(&b2 * &b2 * &b8) - rat(8) * &b4 * &b4 * &b4 - rat(27) * &b6 * &b6 + rat(9) * &b2 * &b4 * &b6;
    if disc.is_zero() {
        return None;
    }
    let j = &c4 * &c4 * &c4 / &disc;
    Some(Invariants { b2, b4, b6, b8, c4, c6, disc, j })
}

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`, nonsingular.
#[derive(Clone, Debug)]
pub struct Curve {
    a: [Rational; 5],
    inv: Invariants,
}

impl PartialEq for Curve {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
    }
}

impl Eq for Curve {}

impl Curve {
    pub fn new(a: [Rational; 5]) -> Result<Curve> {
        let inv = compute_invariants(&a).ok_or(Error::SingularCurve)?;
        Ok(Curve { a, inv })
    }

    pub fn from_ints(a: [i64; 5]) -> Result<Curve> {
        Curve::new(a.map(rat))
    }

    pub fn from_integers(a: &[Integer; 5]) -> Result<Curve> {
        Curve::new([0, 1, 2, 3, 4].map(|i| rat_from(&a[i])))
    }

    /// `y^2 = x^3 + a x^2 + b x + c`
    pub fn from_cubic(a: &Rational, b: &Rational, c: &Rational) -> Result<Curve> {
        Curve::new([Rational::zero(), a.clone(), Rational::zero(), b.clone(), c.clone()])
    }

    pub fn a(&self) -> &[Rational; 5] {
        &self.a
    }

    pub fn a1(&self) -> &Rational {
        &self.a[0]
    }
    pub fn a2(&self) -> &Rational {
        &self.a[1]
    }
    pub fn a3(&self) -> &Rational {
        &self.a[2]
    }
    pub fn a4(&self) -> &Rational {
        &self.a[3]
    }
    pub fn a6(&self) -> &Rational {
        &self.a[4]
    }

    pub fn invariants(&self) -> &Invariants {
        &self.inv
    }

    pub fn disc(&self) -> &Rational {
        &self.inv.disc
    }

    pub fn j(&self) -> &Rational {
        &self.inv.j
    }

    pub fn is_integral(&self) -> bool {
        self.a.iter().all(|x| x.is_integer())
    }

    /// The a-invariants as integers; panics unless the model is integral.
    pub fn integer_ainvs(&self) -> [Integer; 5] {
        assert!(self.is_integral(), "model is not integral");
        [0, 1, 2, 3, 4].map(|i| self.a[i].to_integer())
    }

    /// The curve in coordinates `x = u^2 x' + r`, `y = u^3 y' + s u^2 x' + t`.
    pub fn transform(&self, m: &ModelMap) -> Result<Curve> {
        if m.u.is_zero() {
            return Err(Error::ZeroScaling);
        }
        let [a1, a2, a3, a4, a6] = &self.a;
        let ModelMap { u, r, s, t } = m;
        let two = rat(2);
        let three = rat(3);
        let n1 = a1 + &two * s;
        let n2 = a2 - s * a1 + &three * r - s * s;
        let n3 = a3 + r * a1 + &two * t;
        let n4 = a4 - s * a3 + &two * r * a2 - (t + r * s) * a1 + &three * r * r - &two * s * t;
        let n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        let ui = u.recip();
        Curve::new([
            n1 * &ui,
            n2 * rat_pow(&ui, 2),
            n3 * rat_pow(&ui, 3),
            n4 * rat_pow(&ui, 4),
            n6 * rat_pow(&ui, 6),
        ])
    }

    /// Integral model obtained by clearing denominators with `u = 1/D`.
    pub fn integral_model(&self) -> (Curve, ModelMap) {
        let d = common_denominator(self.a.iter());
        let m = ModelMap::scaling(Rational::new(BigInt::one(), d));
        (self.transform(&m).expect("scaling is invertible"), m)
    }

    /// `y^2 = x^3 - 27 c4 x - 54 c6` together with the map reaching it.
    pub fn short_model(&self) -> (Curve, ModelMap) {
        let half = Rational::new(1.into(), 2.into());
        let m = ModelMap::new(rat(1), rat(0), -self.a1() * &half, -self.a3() * &half)
            .then(&ModelMap::new(rat(1), -&self.inv.b2 / rat(12), rat(0), rat(0)))
            .then(&ModelMap::scaling(Rational::new(1.into(), 6.into())));
        (self.transform(&m).expect("valid map"), m)
    }

    /// Quadratic twist by a squarefree integer, as `y^2 = x^3 - 27 d^2 c4 x - 54 d^3 c6`.
    pub fn quadratic_twist(&self, d: &Integer) -> Result<Curve> {
        if !is_squarefree(d) {
            return Err(Error::NotSquarefree);
        }
        let d = rat_from(d);
        Curve::from_cubic(
            &Rational::zero(),
            &(rat(-27) * &d * &d * &self.inv.c4),
            &(rat(-54) * &d * &d * &d * &self.inv.c6),
        )
    }

    /// `4x^3 + b2 x^2 + 2 b4 x + b6`, the square of `2y + a1 x + a3` on the curve.
    pub fn two_torsion_polynomial(&self) -> QPoly {
        let i = &self.inv;
        QPoly::new(alloc::vec![i.b6.clone(), rat(2) * &i.b4, i.b2.clone(), rat(4)])
    }

    /// `psi_p` for odd `p`; for `p = 2` the polynomial `4x^3 + b2 x^2 + 2 b4 x + b6`.
    pub fn division_polynomial(&self, p: u64) -> QPoly {
        if p == 2 {
            return self.two_torsion_polynomial();
        }
        DivisionPolynomials::new(self, p as usize).f(p as usize).clone()
    }

    /// Cubic right-hand side after completing the square: `y'^2 = x^3 + (b2/4) x^2 + (b4/2) x + b6/4`.
    pub fn completed_cubic(&self) -> QPoly {
        self.two_torsion_polynomial().scale(&Rational::new(1.into(), 4.into()))
    }

    pub fn is_on_curve(&self, x: &Rational, y: &Rational) -> bool {
        let [a1, a2, a3, a4, a6] = &self.a;
        y * y + a1 * x * y + a3 * y == x * x * x + a2 * x * x + a4 * x + a6
    }

    /// The automorphism `[-1]` as a model map of the curve onto itself.
    pub fn negation_map(&self) -> ModelMap {
        ModelMap::new(rat(-1), rat(0), -self.a1().clone(), -self.a3().clone())
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4, a6] = &self.a;
        write!(f, "[{a1},{a2},{a3},{a4},{a6}]")
    }
}

/// Change of Weierstrass coordinates `x = u^2 x' + r`, `y = u^3 y' + s u^2 x' + t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelMap {
    pub u: Rational,
    pub r: Rational,
    pub s: Rational,
    pub t: Rational,
}

impl ModelMap {
    pub fn new(u: Rational, r: Rational, s: Rational, t: Rational) -> Self {
        ModelMap { u, r, s, t }
    }

    pub fn identity() -> Self {
        Self::new(rat(1), rat(0), rat(0), rat(0))
    }

    pub fn scaling(u: Rational) -> Self {
        Self::new(u, rat(0), rat(0), rat(0))
    }

    pub fn translation(r: Rational) -> Self {
        Self::new(rat(1), r, rat(0), rat(0))
    }

    /// Apply `self`, then `next` (in the new coordinates).
    pub fn then(&self, next: &ModelMap) -> ModelMap {
        let u1 = &self.u;
        let u1sq = u1 * u1;
        ModelMap {
            u: u1 * &next.u,
            r: &self.r + &u1sq * &next.r,
            s: &self.s + u1 * &next.s,
            t: &self.t + &u1sq * u1 * &next.t + &self.s * &u1sq * &next.r,
        }
    }

    pub fn inverse(&self) -> ModelMap {
        let u = &self.u;
        ModelMap {
            u: u.recip(),
            r: -&self.r / (u * u),
            s: -&self.s / u,
            t: (&self.r * &self.s - &self.t) / (u * u * u),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// New coordinates of an old point.
    pub fn apply(&self, x: &Rational, y: &Rational) -> (Rational, Rational) {
        let u2 = &self.u * &self.u;
        let xn = (x - &self.r) / &u2;
        let yn = (y - &self.s * &u2 * &xn - &self.t) / (&u2 * &self.u);
        (xn, yn)
    }
}

impl fmt::Display for ModelMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[u={},r={},s={},t={}]", self.u, self.r, self.s, self.t)
    }
}

/// A model map taking `e1` onto `e2`, if the curves are isomorphic over Q.
/// The returned `u` is positive whenever a positive choice exists.
pub fn isomorphism(e1: &Curve, e2: &Curve) -> Option<ModelMap> {
    let (i1, i2) = (e1.invariants(), e2.invariants());
    if i1.j != i2.j {
        return None;
    }
    let u = if !i1.c4.is_zero() && !i1.c6.is_zero() {
        // u^2 = (c6/c6') / (c4/c4')
        let u2 = (&i1.c6 / &i2.c6) / (&i1.c4 / &i2.c4);
        is_nth_power(&u2, 2)?
    } else if i1.c6.is_zero() {
        is_nth_power(&(&i1.c4 / &i2.c4), 4)?
    } else {
        let u6 = &i1.c6 / &i2.c6;
        let u = is_nth_power(&u6.abs(), 6)?;
        if u6.is_negative() {
            -u
        } else {
            u
        }
    };
    for u in [u.clone(), -u] {
        let [a1, a2, a3, ..] = e1.a();
        let [b1, b2, b3, ..] = e2.a();
        let s = (&u * b1 - a1) / rat(2);
        let r = (&u * &u * b2 - a2 + &s * a1 + &s * &s) / rat(3);
        let t = (&u * &u * &u * b3 - a3 - &r * a1) / rat(2);
        let m = ModelMap::new(u, r, s, t);
        if e1.transform(&m).ok().as_ref() == Some(e2) {
            return Some(m);
        }
    }
    None
}

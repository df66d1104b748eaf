use crate::arith::{rat, Rational};

use super::Curve;

/// A rational point in affine coordinates, or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Infinity,
    Affine(Rational, Rational),
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point::Affine(x, y)
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn neg(&self, e: &Curve) -> Point {
        match self {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.clone(), -y - e.a1() * x - e.a3()),
        }
    }

    pub fn add(&self, other: &Point, e: &Curve) -> Point {
        let (x1, y1, x2, y2) = match (self, other) {
            (Point::Infinity, q) | (q, Point::Infinity) => return q.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let [a1, a2, a3, a4, a6] = e.a();
        let (lambda, nu) = if x1 != x2 {
            let dx = x2 - x1;
            ((y2 - y1) / &dx, (y1 * x2 - y2 * x1) / &dx)
        } else {
            let den = rat(2) * y1 + a1 * x1 + a3;
            if num_traits::Zero::is_zero(&den) || y1 + y2 + a1 * x2 + a3 == rat(0) {
                return Point::Infinity;
            }
            (
                (rat(3) * x1 * x1 + rat(2) * a2 * x1 + a4 - a1 * y1) / &den,
                (-(x1 * x1 * x1) + a4 * x1 + rat(2) * a6 - a3 * y1) / &den,
            )
        };
        let x3 = &lambda * &lambda + a1 * &lambda - a2 - x1 - x2;
        let y3 = -(&lambda + a1) * &x3 - nu - a3;
        Point::Affine(x3, y3)
    }

    pub fn mul(&self, e: &Curve, n: i64) -> Point {
        let mut base = if n < 0 { self.neg(e) } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = Point::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.add(&base, e);
            }
            base = base.add(&base, e);
            k >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_torsion_on_11a3() {
        // y^2 + y = x^3 - x^2 has the rational 5-torsion point (0, 0)
        let e = Curve::from_ints([0, -1, 1, 0, 0]).unwrap();
        let p = Point::new(rat(0), rat(0));
        assert!(p.mul(&e, 5).is_infinity());
        assert!(!p.mul(&e, 2).is_infinity());
        assert_eq!(p.mul(&e, -1), p.neg(&e));
        assert_eq!(p.mul(&e, 3), p.mul(&e, -2));
    }
}

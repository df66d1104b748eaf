use alloc::vec::Vec;

use num_traits::Zero;

use super::{val, Rational};
use crate::{Error, Result};

/// Lower convex hull of the points `(i, v_l(c_i))`.
///
/// `slopes` lists the root valuations read off the hull, each with its
/// multiplicity, in increasing order of `i` along the hull (so decreasing
/// valuation). A hull segment of geometric slope `-s` contributes `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(usize, i64)>,
    pub slopes: Vec<(Rational, usize)>,
    /// Roots equal to zero (vanishing low coefficients), which have infinite valuation.
    pub zero_roots: usize,
}

impl NewtonPolygon {
    /// Root valuations with multiplicity, finite roots only.
    pub fn root_valuations(&self) -> Vec<Rational> {
        self.slopes
            .iter()
            .flat_map(|(s, m)| core::iter::repeat_n(s.clone(), *m))
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.zero_roots + self.slopes.iter().map(|(_, m)| m).sum::<usize>()
    }
}

fn cross(o: (usize, i64), a: (usize, i64), b: (usize, i64)) -> i128 {
    let (ax, ay) = (a.0 as i128 - o.0 as i128, (a.1 - o.1) as i128);
    let (bx, by) = (b.0 as i128 - o.0 as i128, (b.1 - o.1) as i128);
    ax * by - ay * bx
}

/// Newton polygon of `sum c_i x^i` at `l`; coefficients low to high.
pub fn newton_polygon(coeffs: &[Rational], l: u64) -> Result<NewtonPolygon> {
    let top = coeffs.iter().rposition(|c| !c.is_zero()).ok_or(Error::ZeroPolynomial)?;
    let zero_roots = coeffs.iter().position(|c| !c.is_zero()).unwrap();
    let points: Vec<(usize, i64)> = coeffs[..=top]
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, val(c, l).value()))
        .collect();
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &p in &points {
        // pop while the last turn is clockwise or straight: keeps only strict vertices
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let slopes = hull
        .windows(2)
        .map(|w| {
            let len = w[1].0 - w[0].0;
            (Rational::new((w[0].1 - w[1].1).into(), (len as i64).into()), len)
        })
        .collect();
    Ok(NewtonPolygon { vertices: hull, slopes, zero_roots })
}

use alloc::vec::Vec;

use crate::arith::{rat, QPoly, Rational};

use super::Curve;

/// The polynomials `f_n` with `psi_n = f_n` for odd `n` and
/// `psi_n = (2y + a1 x + a3) f_n` for even `n`.
#[derive(Clone, Debug)]
pub struct DivisionPolynomials {
    f: Vec<QPoly>,
    cubic: QPoly,
}

impl DivisionPolynomials {
    /// Computes `f_0 .. f_n` (at least up to `f_4`).
    pub fn new(e: &Curve, n: usize) -> Self {
        let i = e.invariants();
        let cubic = e.two_torsion_polynomial();
        let (b2, b4, b6, b8) = (&i.b2, &i.b4, &i.b6, &i.b8);
        let mut f = alloc::vec![
            QPoly::zero(),
            QPoly::one(),
            QPoly::one(),
            QPoly::new(alloc::vec![b8.clone(), rat(3) * b6, rat(3) * b4, b2.clone(), rat(3)]),
            QPoly::new(alloc::vec![
                b4 * b8 - b6 * b6,
                b2 * b8 - b4 * b6,
                rat(10) * b8,
                rat(10) * b6,
                rat(5) * b4,
                b2.clone(),
                rat(2),
            ]),
        ];
        let f2 = &cubic * &cubic;
        for k in 5..=n {
            let m = k / 2;
            let next = if k % 2 == 1 {
                let a = &f[m + 2] * &f[m].pow(3);
                let b = &f[m - 1] * &f[m + 1].pow(3);
                if m % 2 == 0 {
                    &(&f2 * &a) - &b
                } else {
                    &a - &(&f2 * &b)
                }
            } else {
                let inner = &(&f[m + 2] * &f[m - 1].pow(2)) - &(&f[m - 2] * &f[m + 1].pow(2));
                &f[m] * &inner
            };
            f.push(next);
        }
        DivisionPolynomials { f, cubic }
    }

    pub fn f(&self, n: usize) -> &QPoly {
        &self.f[n]
    }

    pub fn cubic(&self) -> &QPoly {
        &self.cubic
    }

    /// `x([n]P) = num(x) / den(x)`; needs `f_{n+1}`.
    pub fn x_multiple(&self, n: usize) -> (QPoly, QPoly) {
        assert!(n >= 1 && n + 1 < self.f.len());
        let x = QPoly::x();
        let fn2 = self.f[n].pow(2);
        let prod = &self.f[n - 1] * &self.f[n + 1];
        if n % 2 == 1 {
            (&(&x * &fn2) - &(&self.cubic * &prod), fn2)
        } else {
            let den = &self.cubic * &fn2;
            (&(&x * &den) - &prod, den)
        }
    }
}

/// Evaluates `num/den` at `x`, `None` at a pole.
pub fn eval_ratio(num: &QPoly, den: &QPoly, x: &Rational) -> Option<Rational> {
    let d = den.eval(x);
    if num_traits::Zero::is_zero(&d) {
        None
    } else {
        Some(num.eval(x) / d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::Point;

    #[test]
    fn base_cases_and_degrees() {
        let e = Curve::from_ints([1, -1, 1, -10, -20]).unwrap();
        let i = e.invariants();
        let psi3 = e.division_polynomial(3);
        assert_eq!(
            psi3,
            QPoly::new(alloc::vec![i.b8.clone(), rat(3) * &i.b6, rat(3) * &i.b4, i.b2.clone(), rat(3)])
        );
        assert_eq!(e.division_polynomial(2), QPoly::new(alloc::vec![i.b6.clone(), rat(2) * &i.b4, i.b2.clone(), rat(4)]));
        assert_eq!(e.division_polynomial(5).degree(), Some(12));
        assert_eq!(e.division_polynomial(7).degree(), Some(24));
    }

    #[test]
    fn multiplication_maps_agree_with_group_law() {
        let e = Curve::from_ints([0, 0, 1, -7, 6]).unwrap();
        let p = Point::new(rat(0), rat(2));
        assert!(e.is_on_curve(&rat(0), &rat(2)));
        let dp = DivisionPolynomials::new(&e, 8);
        for n in 1..=7 {
            let (num, den) = dp.x_multiple(n);
            let q = p.mul(&e, n as i64);
            let x = match q {
                Point::Affine(x, _) => x,
                Point::Infinity => unreachable!(),
            };
            assert_eq!(eval_ratio(&num, &den, &rat(0)), Some(x), "n = {n}");
        }
    }
}

//! Period lattices via the AGM, real and complex periods, and the analytic checks
//! relating isogenous curves.
//!
//! Lattices are those of `(E, omega)` with `omega = dx / (2y + a1 x + a3)`, so that
//! `z -> (wp(z), wp'(z))` pulls `omega` back to `dz` on the model
//! `Y^2 = 4x^3 - (c4/12) x - c6/216`.

pub mod float;
pub mod modular;
mod ratio;


use alloc::vec::Vec;

use num_traits::Signed;

use crate::arith::sturm::{isolate_real_roots, refine, sturm_sequence};
use crate::arith::{frac, QPoly, Rational};
use crate::curves::Curve;
use crate::localdata::global_minimal_model;
use crate::{Error, Result};

pub use float::{agm, pi, Complex, Float};
pub use ratio::{
    delta_tau_check, eta_quotient_check, eta_quotient_with_basis, nearest_rational, period_ratio, real_lambda,
    EtaQuotient, KernelGenerator, PeriodRatio,
};

/// Lowest precision accepted by the analytic routines.
pub const MIN_PRECISION: u32 = 64;
/// Guard bits added to every internal computation.
const GUARD: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodData {
    /// The model the lattice belongs to.
    pub model: Curve,
    /// Least positive real period.
    pub omega1: Float,
    pub omega2: Complex,
    pub tau: Complex,
    pub real_components: u8,
    pub omega_real: Float,
    /// `4 * covol(Lambda)`.
    pub omega_complex: Float,
    pub precision: u32,
}

/// Period lattice of the global minimal model of `e`.
pub fn period_lattice(e: &Curve, prec: u32) -> Result<PeriodData> {
    let (min, _) = global_minimal_model(e, None);
    lattice_of_model(&min, prec)
}

/// Period lattice of `e` as given. The guard bits double until two successive
/// runs agree to `prec` bits.
pub fn lattice_of_model(e: &Curve, prec: u32) -> Result<PeriodData> {
    if prec < MIN_PRECISION {
        return Err(Error::PrecisionTooLow(prec));
    }
    let mut guard = GUARD;
    let mut prev = lattice_at(e, prec + guard);
    let (w1, w2) = loop {
        guard *= 2;
        let next = lattice_at(e, prec + guard);
        if prev.0.rel_close(&next.0, prec) && prev.1.im.rel_close(&next.1.im, prec) {
            break next;
        }
        if guard > 16 * prec {
            return Err(Error::Tolerance {
                check: "period lattice",
                detail: alloc::format!("no agreement to {prec} bits with {guard} guard bits"),
            });
        }
        prev = next;
    };
    let (w1, w2) = (w1.with_prec(prec), Complex::new(w2.re.with_prec(prec), w2.im.with_prec(prec)));
    let real_components = if e.disc().is_positive() { 2 } else { 1 };
    let tau = Complex::new(&w2.re / &w1, &w2.im / &w1);
    Ok(PeriodData {
        model: e.clone(),
        omega_real: &w1 * &Float::from_i64(real_components as i64, prec),
        omega_complex: (&w1 * &w2.im).mul_pow2(2),
        omega1: w1,
        omega2: w2,
        tau,
        real_components,
        precision: prec,
    })
}

/// `(omega1, omega2)` with `omega1 > 0` real and `Im omega2 > 0`.
fn lattice_at(e: &Curve, w: u32) -> (Float, Complex) {
    let inv = e.invariants();
    let cubic = e.completed_cubic();
    let roots = real_roots(&cubic, w);
    let pi = pi(w);
    let fl = |q: &Rational| Float::from_rational(q, w);
    if roots.len() == 3 {
        // e1 > e2 > e3
        let (e1, e2, e3) = (&roots[2], &roots[1], &roots[0]);
        let s13 = (e1 - e3).sqrt();
        let w1 = &pi / &agm(&s13, &(e1 - e2).sqrt());
        let w2 = &pi / &agm(&s13, &(e2 - e3).sqrt());
        (w1, Complex::new(Float::zero(w), w2))
    } else {
        let e1 = &roots[0];
        // a = 3 e1 + b2/4, b = sqrt(3 e1^2 + b2 e1/2 + b4/2)
        let a = &(e1 * &Float::from_i64(3, w)) + &fl(&(&inv.b2 * frac(1, 4)));
        let bb = &(&(e1 * e1) * &Float::from_i64(3, w)) + &(&(e1 * &fl(&inv.b2)).mul_pow2(-1) + &fl(&inv.b4).mul_pow2(-1));
        let b = bb.sqrt();
        let two_sqrt_b = b.sqrt().mul_pow2(1);
        // (2b + a)(2b - a) = -Delta / (16 b^4); take the sum without cancellation, the difference from it
        let prod = &fl(&-e.disc()) / &bb.powi(2).mul_pow2(4);
        let (plus, minus) = if a.is_negative() {
            let m = &b.mul_pow2(1) - &a;
            (&prod / &m, m)
        } else {
            let p = &b.mul_pow2(1) + &a;
            (p.clone(), &prod / &p)
        };
        let w1 = &pi.mul_pow2(1) / &agm(&two_sqrt_b, &plus.sqrt());
        let im = &pi / &agm(&two_sqrt_b, &minus.sqrt());
        let re = -w1.mul_pow2(-1);
        (w1, Complex::new(re, im))
    }
}

/// Real roots of a squarefree polynomial, ascending, to `w` bits.
pub fn real_roots(f: &QPoly, w: u32) -> Vec<Float> {
    let seq = sturm_sequence(f);
    let df = f.derivative();
    let width = frac(1, 1 << 40);
    isolate_real_roots(f)
        .into_iter()
        .map(|(lo, hi)| {
            let (lo, hi) = refine(f, &seq, lo, hi, &width);
            let mut x = Float::from_rational(&((lo + hi) * frac(1, 2)), w);
            // quadratic convergence from 40 good bits
            for _ in 0..64 {
                let fx = eval(f, &x);
                if fx.is_zero() {
                    break;
                }
                let step = &fx / &eval(&df, &x);
                x = &x - &step;
                if step.is_zero() || step.magnitude() < x.magnitude().max(0) - w as i64 - 4 {
                    break;
                }
            }
            x
        })
        .collect()
}

/// Horner evaluation at a float.
pub fn eval(f: &QPoly, x: &Float) -> Float {
    let w = x.prec();
    let mut acc = Float::zero(w);
    for c in f.coeffs().iter().rev() {
        acc = &(&acc * x) + &Float::from_rational(c, w);
    }
    acc
}

pub fn eval_complex(f: &QPoly, x: &Complex) -> Complex {
    let w = x.prec();
    let mut acc = Complex::real(Float::zero(w));
    for c in f.coeffs().iter().rev() {
        acc = &(&acc * x) + &Complex::real(Float::from_rational(c, w));
    }
    acc
}

impl PeriodData {
    /// `Delta_E` of the model, as a float at the lattice precision.
    pub fn discriminant(&self) -> Float {
        Float::from_rational(self.model.disc(), self.precision)
    }

    pub fn is_rectangular(&self) -> bool {
        self.omega2.re.is_zero()
    }
}

//! Period ratios of isogenous curves, and the two identities linking periods
//! to values of modular forms.

use alloc::format;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::float::{pi, Complex, Float};
use super::modular::{delta_series, eta, reduce_basis};
use super::{lattice_of_model, PeriodData, GUARD};
use crate::arith::sturm::{count_roots, isolate_real_roots, refine, sturm_sequence};
use crate::arith::{frac, rat, Rational};
use crate::curves::Curve;
use crate::isogeny::Isogeny;
use crate::localdata::{bad_primes, global_minimal_model, tate_local};
use crate::{Error, Result};

/// Which order-`p` subgroup of `C / Lambda` is the kernel, in terms of the
/// lattice basis `(omega1, omega2)` of the source.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelGenerator {
    /// Generated by `omega1 / p`.
    RealPeriod,
    /// Generated by `(omega2 + k omega1) / p`.
    Shifted(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodRatio {
    pub degree: u64,
    pub source: PeriodData,
    pub target: PeriodData,
    /// `phi^* omega' / omega` on the global minimal models.
    pub scalar: Rational,
    /// `|omega / phi^* omega'|`.
    pub scalar_abs: Rational,
    pub lambda: u64,
    pub ratio_real: Float,
    pub ratio_complex: Float,
    /// Nearest of `p, 1, 1/p` and the relative distance to it.
    pub nearest_real: (Rational, f64),
    /// Nearest of `p, 1/p`.
    pub nearest_complex: (Rational, f64),
    /// For semistable source and odd `p`: `(Omega/Omega' = p, omega = +-phi^* omega', kernel rational)`.
    pub semistable_triple: Option<[bool; 3]>,
}

/// The real `lambda` factor: `p` or `1` for odd `p` according to whether the
/// kernel consists of real points, and for `p = 2` the sign conditions on
/// `y^2 = x^3 + a x^2 + b x` with the kernel point at the origin.
pub fn real_lambda(phi: &Isogeny) -> u64 {
    let p = phi.degree();
    if p == 2 {
        let (a, b) = two_isogeny_model(phi);
        let ok = b.is_positive() && (a.is_negative() || rat(4) * &b > &a * &a);
        return if ok { 1 } else { 2 };
    }
    if kernel_is_real(phi) {
        p
    } else {
        1
    }
}

/// `(a, b)` of the model `y^2 = x^3 + a x^2 + b x` moving the kernel point to `(0, 0)`.
pub fn two_isogeny_model(phi: &Isogeny) -> (Rational, Rational) {
    assert_eq!(phi.degree(), 2);
    let x0 = -phi.kernel_poly().coeff(0);
    let f = phi.source().two_torsion_polynomial();
    let b2 = &phi.source().invariants().b2;
    let a = rat(3) * &x0 + b2 * frac(1, 4);
    let b = f.derivative().eval(&x0) * frac(1, 4);
    (a, b)
}

/// All kernel points are real: every root of the kernel polynomial is real and
/// the completed cubic is positive there.
fn kernel_is_real(phi: &Isogeny) -> bool {
    let d = phi.kernel_poly();
    let f = phi.source().two_torsion_polynomial();
    let roots = isolate_real_roots(d);
    if roots.len() != d.degree().unwrap_or(0) {
        return false;
    }
    let sd = sturm_sequence(d);
    let sf = sturm_sequence(&f);
    roots.into_iter().all(|(mut lo, mut hi)| {
        let mut width = &hi - &lo;
        loop {
            if lo == hi {
                return f.eval(&lo).is_positive();
            }
            if !f.eval(&lo).is_zero() && count_roots(&sf, &lo, &hi) == 0 {
                return f.eval(&hi).is_positive();
            }
            width *= frac(1, 2);
            (lo, hi) = refine(d, &sd, lo, hi, &width);
        }
    })
}

fn minimal_isogeny(phi: &Isogeny) -> Result<Isogeny> {
    let (_, m) = global_minimal_model(phi.source(), None);
    let (_, mt) = global_minimal_model(phi.target(), None);
    phi.transport(&m, &mt)
}

fn is_semistable(e: &Curve) -> bool {
    bad_primes(e).into_iter().all(|l| tate_local(e, l).conductor_exponent <= 1)
}

fn nearest_of(x: &Float, candidates: &[Rational]) -> (Rational, f64) {
    candidates
        .iter()
        .map(|c| (c.clone(), x.rel_error(&Float::from_rational(c, x.prec()))))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(core::cmp::Ordering::Equal))
        .expect("non-empty candidate list")
}

/// `Omega / Omega'` and `Omega_C / Omega'_C` for the global minimal models,
/// checked against `lambda |omega / phi^* omega'|` and `p |omega / phi^* omega'|^2`.
pub fn period_ratio(phi: &Isogeny, prec: u32) -> Result<PeriodRatio> {
    let p = phi.degree();
    let psi = minimal_isogeny(phi)?;
    let source = lattice_of_model(psi.source(), prec)?;
    let target = lattice_of_model(psi.target(), prec)?;
    let scalar = psi.scalar().clone();
    let scalar_abs = scalar.abs().recip();
    let lambda = real_lambda(phi);

    let ratio_real = &source.omega_real / &target.omega_real;
    let ratio_complex = &source.omega_complex / &target.omega_complex;
    let tol = prec / 2;
    let want_real = Float::from_rational(&(rat(lambda as i64) * &scalar_abs), prec);
    if !ratio_real.rel_close(&want_real, tol) {
        return Err(Error::Tolerance {
            check: "real period ratio",
            detail: format!("Omega/Omega' = {} but lambda |omega/phi^*omega'| = {}", ratio_real.to_decimal(20), want_real.to_decimal(20)),
        });
    }
    let want_complex = Float::from_rational(&(rat(p as i64) * &scalar_abs * &scalar_abs), prec);
    if !ratio_complex.rel_close(&want_complex, tol) {
        return Err(Error::Tolerance {
            check: "complex period ratio",
            detail: format!("Omega_C/Omega'_C = {} but p |omega/phi^*omega'|^2 = {}", ratio_complex.to_decimal(20), want_complex.to_decimal(20)),
        });
    }

    let pr = rat(p as i64);
    let nearest_real = nearest_of(&ratio_real, &[pr.clone(), rat(1), pr.recip()]);
    let nearest_complex = nearest_of(&ratio_complex, &[pr.clone(), pr.recip()]);
    let semistable_triple = (p != 2 && is_semistable(psi.source())).then(|| {
        [nearest_real.0 == pr, scalar.abs().is_one(), phi.kernel_rational()]
    });
    Ok(PeriodRatio {
        degree: p,
        source,
        target,
        scalar,
        scalar_abs,
        lambda,
        ratio_real,
        ratio_complex,
        nearest_real,
        nearest_complex,
        semistable_triple,
    })
}

/// Relative error of `Delta(tau) = (omega1 / 2 pi)^12 Delta_E` on the model `e`
/// as given, with the `q`-product cut at `terms` factors.
pub fn delta_tau_check(e: &Curve, terms: usize, prec: u32) -> Result<f64> {
    let lat = lattice_of_model(e, prec)?;
    let w = prec + GUARD;
    let w1 = Complex::real(lat.omega1.with_prec(w));
    let w2 = Complex::new(lat.omega2.re.with_prec(w), lat.omega2.im.with_prec(w));
    // reduce the basis so the q-series converges fast
    let (w1, w2) = reduce_basis(&w1, &w2);
    let tau = &w2 / &w1;
    let lhs = delta_series(&tau, terms);
    let two_pi = pi(w).mul_pow2(1);
    let rhs = w1.scale(&two_pi.recip()).powi(12).scale(&Float::from_rational(e.disc(), w));
    Ok((&(&lhs - &rhs).abs() / &rhs.abs()).to_f64())
}

#[derive(Clone, Debug, PartialEq)]
pub struct EtaQuotient {
    /// Real part of `(2 pi / omega1)^(p-1) f(tau)`.
    pub value: Float,
    /// `|Im| / |value|`.
    pub imaginary_part: f64,
    /// Best continued-fraction approximation with denominator at most `10^6`.
    pub rational: Rational,
    pub rationality_error: f64,
    /// Relative error of `value^12 = (c/p)^(12p) Delta'^p / Delta`.
    pub twelfth_power_error: f64,
    pub generator: KernelGenerator,
}

/// `(2 pi / omega1)^(p-1) f(tau)` for `f = (eta(p tau)^p / eta(tau))^2`, on the basis of
/// the source lattice in which `omega1 / p` generates the kernel.
pub fn eta_quotient_check(phi: &Isogeny, terms: usize, prec: u32) -> Result<EtaQuotient> {
    let p = phi.degree();
    if p <= 3 {
        return Err(Error::InconsistentInputs(format!("eta quotient needs p > 3, got {p}")));
    }
    let psi = minimal_isogeny(phi)?;
    let src = lattice_of_model(psi.source(), prec)?;
    let tgt = lattice_of_model(psi.target(), prec)?;
    let w = prec + GUARD;
    let c = Float::from_rational(psi.scalar(), w);
    // phi is z -> z from C/Lambda to C/(Lambda'/c), and Lambda has index p in Lambda'/c
    let m1 = Complex::real(&tgt.omega1.with_prec(w) / &c);
    let m2 = Complex::new(&tgt.omega2.re.with_prec(w) / &c, &tgt.omega2.im.with_prec(w) / &c);
    let w1 = Complex::real(src.omega1.with_prec(w));
    let w2 = Complex::new(src.omega2.re.with_prec(w), src.omega2.im.with_prec(w));
    let inv_p = Float::from_rational(&frac(1, p as i64), w);
    let tol = prec / 2;

    let mut found = alloc::vec::Vec::new();
    if in_lattice(&w1.scale(&inv_p), &m1, &m2, tol) {
        found.push((KernelGenerator::RealPeriod, w1.clone(), w2.clone()));
    }
    for k in 0..p {
        let om = &w2 + &w1.scale(&Float::from_i64(k as i64, w));
        if in_lattice(&om.scale(&inv_p), &m1, &m2, tol) {
            // (omega2 + k omega1, -omega1) is an oriented basis
            found.push((KernelGenerator::Shifted(k), om, -&w1));
        }
    }
    if found.len() != 1 {
        return Err(Error::Tolerance {
            check: "lattice alignment",
            detail: format!("{} candidate kernel generators in the target lattice", found.len()),
        });
    }
    let (gen, o1, o2) = found.pop().expect("one candidate");
    eta_quotient_with_basis(&psi, &o1, &o2, gen, terms, prec)
}

/// The eta-quotient value on a given basis of the source lattice. Fails when its
/// twelfth power is not `(c/p)^(12p) Delta'^p / Delta`.
pub fn eta_quotient_with_basis(
    phi: &Isogeny,
    omega1: &Complex,
    omega2: &Complex,
    generator: KernelGenerator,
    terms: usize,
    prec: u32,
) -> Result<EtaQuotient> {
    let p = phi.degree();
    let w = prec + GUARD;
    let tau = omega2 / omega1;
    if !tau.im.is_positive() {
        return Err(Error::InconsistentInputs("basis is not oriented".into()));
    }
    let ptau = tau.scale(&Float::from_i64(p as i64, w));
    let f = (&eta(&ptau, terms).powi(p as u32) / &eta(&tau, terms)).powi(2);
    let two_pi = pi(w).mul_pow2(1);
    let v = &omega1.recip().scale(&two_pi).powi(p as u32 - 1) * &f;

    let pc = phi.scalar() / rat(p as i64);
    let expected = pow_q(&pc, 12 * p) * pow_q(phi.target().disc(), p) / phi.source().disc();
    let expected = Float::from_rational(&expected, w);
    let v12 = v.powi(12);
    let twelfth_power_error = (&(&v12 - &Complex::real(expected.clone())).abs() / &expected.abs()).to_f64();
    if !(twelfth_power_error < tol_f64(prec)) {
        return Err(Error::Tolerance {
            check: "eta quotient",
            detail: format!("value^12 off by relative {twelfth_power_error:e}"),
        });
    }
    let value = v.re.with_prec(prec);
    let imaginary_part = (&v.im.abs() / &v.abs()).to_f64();
    let rational = nearest_rational(&value, &BigInt::from(1_000_000));
    let rationality_error = value.rel_error(&Float::from_rational(&rational, prec));
    Ok(EtaQuotient { value, imaginary_part, rational, rationality_error, twelfth_power_error, generator })
}

fn tol_f64(prec: u32) -> f64 {
    // 2^-(prec/2)
    let mut t = 1.0f64;
    for _ in 0..prec / 2 {
        t *= 0.5;
    }
    t
}

fn pow_q(q: &Rational, n: u64) -> Rational {
    num_traits::pow(q.clone(), n as usize)
}

/// Whether `z` is an integer combination of `m1, m2` to `bits` bits.
fn in_lattice(z: &Complex, m1: &Complex, m2: &Complex, bits: u32) -> bool {
    let cross = |a: &Complex, b: &Complex| &(&a.re * &b.im) - &(&a.im * &b.re);
    let det = cross(m1, m2);
    let x = &cross(z, m2) / &det;
    let y = &cross(m1, z) / &det;
    let w = z.prec();
    [x, y].iter().all(|t| {
        let r = Float::from_int(&t.round_to_int(), w);
        let d = (t - &r).abs();
        d.is_zero() || d.magnitude() < -(bits as i64)
    })
}

/// Last continued-fraction convergent of `x` with denominator at most `max_den`.
pub fn nearest_rational(x: &Float, max_den: &BigInt) -> Rational {
    let q = x.to_rational();
    let (mut n, mut d) = (q.numer().clone(), q.denom().clone());
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    while !d.is_zero() {
        let (a, r) = n.div_mod_floor(&d);
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if &k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        (n, d) = (d, r);
    }
    if k1.is_zero() {
        return Rational::from_integer(q.round().to_integer());
    }
    Rational::new(h1, k1)
}

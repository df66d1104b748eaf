//! Isogenies of prime degree: the explicit 2- and 3-isogeny families, Vélu's
//! formulas, duals, quadratic twists and the differential pullback scalar.
//!
//! An [`Isogeny`] stores the x-map `xi = xi_num / xi_den` together with the
//! scalar `c` for which `phi^* omega' = c omega`, where `omega = dx / (2y + a1 x + a3)`
//! on the models actually stored. The y-map is recovered from these: since
//! `dX / (2Y + A1 X + A3) = c dx / (2y + a1 x + a3)`, we get
//! `2Y + A1 X + A3 = (xi' / c) (2y + a1 x + a3)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::zfactor::{factors_of_degree, rational_roots};
use crate::arith::{frac, is_nth_power, is_prime_u64, newton_polygon, rat, val, QPoly, Rational};
use crate::curves::{eval_ratio, isomorphism, Curve, DivisionPolynomials, ModelMap, Point};
use crate::localdata::{classify_local, good_twist, tate_local, ReductionClass};
use crate::{Error, Integer, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isogeny {
    source: Curve,
    target: Curve,
    degree: u64,
    kernel: QPoly,
    xi_num: QPoly,
    xi_den: QPoly,
    scalar: Rational,
}

impl Isogeny {
    fn assemble(source: Curve, target: Curve, degree: u64, kernel: QPoly, num: QPoly, den: QPoly, scalar: Rational) -> Self {
        let lead = den.leading().recip();
        Isogeny { source, target, degree, kernel: kernel.monic(), xi_num: num.scale(&lead), xi_den: den.scale(&lead), scalar }
    }

    pub fn source(&self) -> &Curve {
        &self.source
    }

    pub fn target(&self) -> &Curve {
        &self.target
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// Monic polynomial whose roots are the x-coordinates of the nonzero kernel points.
    pub fn kernel_poly(&self) -> &QPoly {
        &self.kernel
    }

    /// `(xi_num, xi_den)` with monic denominator.
    pub fn xi(&self) -> (&QPoly, &QPoly) {
        (&self.xi_num, &self.xi_den)
    }

    /// The scalar `c` with `phi^* omega' = c omega` for the stored models.
    pub fn scalar(&self) -> &Rational {
        &self.scalar
    }

    /// `eta = xi' / c` as `(num, den)`; on models with `a1 = a3 = 0` the y-map is `y eta(x)`.
    pub fn eta(&self) -> (QPoly, QPoly) {
        let (n, d) = (&self.xi_num, &self.xi_den);
        let num = (&(&n.derivative() * d) - &(n * &d.derivative())).scale(&self.scalar.recip());
        (num, d.pow(2))
    }

    /// `zeta` with `Y = y eta(x) + zeta(x)`, over the same denominator as [`Isogeny::eta`].
    pub fn zeta(&self) -> (QPoly, QPoly) {
        let (en, ed) = self.eta();
        let half = frac(1, 2);
        let e = &self.source;
        let t = &self.target;
        let lin = QPoly::new(vec![e.a3() * &half, e.a1() * &half]);
        let image = &(&self.xi_num.scale(t.a1()) + &self.xi_den.scale(t.a3())) * &self.xi_den;
        (&(&en * &lin) - &image.scale(&half), ed)
    }

    pub fn map_x(&self, x: &Rational) -> Option<Rational> {
        eval_ratio(&self.xi_num, &self.xi_den, x)
    }

    pub fn map_point(&self, p: &Point) -> Point {
        let Point::Affine(x, y) = p else {
            return Point::Infinity;
        };
        let Some(xx) = self.map_x(x) else {
            return Point::Infinity;
        };
        let (en, ed) = self.eta();
        let (zn, _) = self.zeta();
        let d = ed.eval(x);
        Point::Affine(xx, (y * en.eval(x) + zn.eval(x)) / d)
    }

    /// The same isogeny between `source.transform(m)` and `target.transform(mt)`.
    pub fn transport(&self, m: &ModelMap, mt: &ModelMap) -> Result<Isogeny> {
        let source = self.source.transform(m)?;
        let target = self.target.transform(mt)?;
        let u2 = &m.u * &m.u;
        let num = self.xi_num.compose_linear(&u2, &m.r);
        let den = self.xi_den.compose_linear(&u2, &m.r);
        let num = (&num - &den.scale(&mt.r)).scale(&(&mt.u * &mt.u).recip());
        let kernel = self.kernel.compose_linear(&u2, &m.r);
        let scalar = &mt.u * &self.scalar / &m.u;
        Ok(Isogeny::assemble(source, target, self.degree, kernel, num, den, scalar))
    }

    /// Kernel polynomial in the coordinates of `source.transform(m)`.
    pub fn kernel_on(&self, m: &ModelMap) -> QPoly {
        self.kernel.compose_linear(&(&m.u * &m.u), &m.r).monic()
    }

    /// `[-1] o phi`.
    pub fn negate(&self) -> Isogeny {
        self.transport(&ModelMap::identity(), &self.target.negation_map())
            .expect("negation is a valid model map")
    }

    /// The dual isogeny, normalised so that the two scalars multiply to `p`.
    pub fn dual(&self) -> Result<Isogeny> {
        let p = self.degree;
        let dp = DivisionPolynomials::new(&self.source, p as usize + 1);
        let (mn, md) = dp.x_multiple(p as usize);
        for g in kernel_polynomials(&self.target, p) {
            let psi = velu(&self.target, &g)?;
            let Some(iso) = isomorphism(psi.target(), &self.source) else {
                continue;
            };
            let cand = psi.transport(&ModelMap::identity(), &iso)?;
            let (cn, cd) = compose_rational(&cand.xi_num, &cand.xi_den, &self.xi_num, &self.xi_den);
            if &cn * &md != &mn * &cd {
                continue;
            }
            let prod = &self.scalar * &cand.scalar;
            let p = rat(p as i64);
            if prod == p {
                return Ok(cand);
            }
            if prod == -p {
                return Ok(cand.negate());
            }
            return Err(Error::InconsistentInputs(format!("scalars of an isogeny and its dual multiply to {prod}")));
        }
        Err(Error::NotIsogenous)
    }

    /// `v_l` of `phi^* omega' / omega` for `l`-minimal differentials on both sides.
    pub fn pullback_scalar_minimal(&self, l: u64) -> i64 {
        let ms = tate_local(&self.source, l).map_to_minimal;
        let mt = tate_local(&self.target, l).map_to_minimal;
        self.scalar_valuation(&ms, &mt, l)
    }

    /// `v_l` of the scalar after moving source and target along `m` and `mt`.
    pub fn scalar_valuation(&self, m: &ModelMap, mt: &ModelMap, l: u64) -> i64 {
        val(&(&self.scalar * &mt.u / &m.u), l).value()
    }

    /// Whether every kernel point is defined over Q.
    pub fn kernel_rational(&self) -> bool {
        if self.degree == 2 {
            return true;
        }
        let roots = rational_roots(&self.kernel);
        if roots.len() != self.kernel.degree().unwrap_or(0) {
            return false;
        }
        let f = self.source.two_torsion_polynomial();
        roots.iter().all(|x| is_nth_power(&f.eval(x), 2).is_some())
    }

    /// Whether the kernel lies in the formal group at `l` (over an extension where
    /// the source acquires good reduction). Needs potentially good reduction.
    pub fn kernel_in_formal_group(&self, l: u64) -> Result<bool> {
        let loc = tate_local(&self.source, l);
        match classify_local(&self.source, &loc) {
            ReductionClass::GoodOrdinary | ReductionClass::GoodSupersingular => {
                roots_below(&self.kernel_on(&loc.map_to_minimal), l, &Rational::zero())
            }
            ReductionClass::AdditivePotGood { .. } if l >= 5 => {
                // over the extension the minimal model is the short model scaled by u
                // with v(u) = delta / 12, so x-coordinates shift by delta / 6
                let (_, ms) = loc.minimal_model.short_model();
                let m = loc.map_to_minimal.then(&ms);
                let bound = Rational::new(loc.disc_valuation.into(), 6.into());
                roots_below(&self.kernel_on(&m), l, &bound)
            }
            ReductionClass::AdditivePotGood { .. } => {
                let d = good_twist(&self.source, l)
                    .ok_or(Error::WrongReductionClass("no quadratic twist with good reduction"))?;
                twist_isogeny(self, &d)?.kernel_in_formal_group(l)
            }
            _ => Err(Error::WrongReductionClass("kernel test needs potentially good reduction")),
        }
    }
}

impl fmt::Display for Isogeny {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-isogeny {} -> {} with kernel {}", self.degree, self.source, self.target, self.kernel)
    }
}

fn roots_below(g: &QPoly, l: u64, bound: &Rational) -> Result<bool> {
    let np = newton_polygon(g.coeffs(), l)?;
    Ok(np.zero_roots == 0 && np.root_valuations().iter().all(|v| v < bound))
}

/// `(on/od) o (in/id)` as a single fraction.
pub fn compose_rational(on: &QPoly, od: &QPoly, inn: &QPoly, ind: &QPoly) -> (QPoly, QPoly) {
    let k = on.degree().unwrap_or(0).max(od.degree().unwrap_or(0));
    let homog = |p: &QPoly| {
        let mut acc = QPoly::zero();
        for i in 0..=k {
            let c = p.coeff(i);
            if !c.is_zero() {
                acc = &acc + &(&inn.pow(i as u32) * &ind.pow((k - i) as u32)).scale(&c);
            }
        }
        acc
    };
    (homog(on), homog(od))
}

/// Vélu's isogeny with the given kernel polynomial. A linear factor of the
/// 2-torsion polynomial gives a 2-isogeny; otherwise the degree is
/// `2 deg(kernel) + 1`, which must be prime.
pub fn velu(e: &Curve, kernel: &QPoly) -> Result<Isogeny> {
    let d = kernel
        .degree()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::NotAKernel(format!("constant kernel polynomial {kernel}")))?;
    let kernel = kernel.monic();
    if d == 1 && e.two_torsion_polynomial().rem(&kernel).is_zero() {
        return velu_two(e, &kernel);
    }
    let p = 2 * d as u64 + 1;
    if !is_prime_u64(p) {
        return Err(Error::NotAKernel(format!("degree {d} is not (p - 1)/2 for a prime p")));
    }
    if !is_kernel(e, &kernel, p) {
        return Err(Error::NotAKernel(format!("{kernel} does not cut out a subgroup of order {p}")));
    }
    velu_odd(e, &kernel, p)
}

fn velu_two(e: &Curve, kernel: &QPoly) -> Result<Isogeny> {
    let x0 = -kernel.coeff(0);
    let f = e.two_torsion_polynomial();
    let v = f.derivative().eval(&x0) / rat(4);
    let w = &x0 * &v;
    let b2 = &e.invariants().b2;
    let a = e.a();
    let target = Curve::new([
        a[0].clone(),
        a[1].clone(),
        a[2].clone(),
        &a[3] - rat(5) * &v,
        &a[4] - b2 * &v - rat(7) * &w,
    ])?;
    let num = &(&QPoly::x() * kernel) + &QPoly::constant(v);
    Ok(Isogeny::assemble(e.clone(), target, 2, kernel.clone(), num, kernel.clone(), Rational::one()))
}

fn velu_odd(e: &Curve, kernel: &QPoly, p: u64) -> Result<Isogeny> {
    let inv = e.invariants();
    let n = rat(((p - 1) / 2) as i64);
    let s = kernel.power_sums(3);
    let v = rat(6) * &s[1] + &inv.b2 * &s[0] + &n * &inv.b4;
    let w = rat(10) * &s[2] + rat(2) * &inv.b2 * &s[1] + rat(3) * &inv.b4 * &s[0] + &n * &inv.b6;
    let a = e.a();
    let target = Curve::new([
        a[0].clone(),
        a[1].clone(),
        a[2].clone(),
        &a[3] - rat(5) * &v,
        &a[4] - &inv.b2 * &v - rat(7) * &w,
    ])?;
    let f = e.two_torsion_polynomial();
    let d1 = kernel.derivative();
    let d2 = d1.derivative();
    let dd = kernel.pow(2);
    let lin = QPoly::new(vec![rat(-2) * &s[0], rat(p as i64)]);
    let num = &(&(&lin * &dd) - &(&f * &(&(&d2 * kernel) - &d1.pow(2)))) - &(&f.derivative() * &(&d1 * kernel)).scale(&frac(1, 2));
    Ok(Isogeny::assemble(e.clone(), target, p, kernel.clone(), num, dd, Rational::one()))
}

/// Whether `g` is the kernel polynomial of a subgroup of order `p`: it divides
/// the `p`-division polynomial and its roots are closed under `x -> x([k]P)`.
pub fn is_kernel(e: &Curve, g: &QPoly, p: u64) -> bool {
    if p == 2 {
        return g.degree() == Some(1) && e.two_torsion_polynomial().rem(g).is_zero();
    }
    let d = ((p - 1) / 2) as usize;
    if g.degree() != Some(d) || !e.division_polynomial(p).rem(g).is_zero() {
        return false;
    }
    if d == 1 {
        return true;
    }
    let dp = DivisionPolynomials::new(e, d + 1);
    (2..=d).all(|k| {
        let (num, den) = dp.x_multiple(k);
        match den.inverse_mod(g) {
            Some(inv) => g.compose_mod(&(&num * &inv).rem(g), g).is_zero(),
            None => false,
        }
    })
}

/// Kernel polynomials of every rational `p`-isogeny out of `e`.
pub fn kernel_polynomials(e: &Curve, p: u64) -> Vec<QPoly> {
    if p == 2 {
        return rational_roots(&e.two_torsion_polynomial()).iter().map(QPoly::linear_root).collect();
    }
    factors_of_degree(&e.division_polynomial(p), ((p - 1) / 2) as usize)
        .into_iter()
        .filter(|g| is_kernel(e, g, p))
        .collect()
}

/// `y^2 = x^3 + a x^2 + b x  ->  y^2 = x^3 - 2a x^2 + (a^2 - 4b) x`, kernel `(0, 0)`,
/// `(x, y) -> (x + a + b/x, y - b y / x^2)`.
pub fn two_isogeny(a: &Rational, b: &Rational) -> Result<Isogeny> {
    if b.is_zero() || (a * a - rat(4) * b).is_zero() {
        return Err(Error::DegenerateParameters("two_isogeny needs b != 0 and a^2 != 4b"));
    }
    let z = Rational::zero();
    let e = Curve::new([z.clone(), a.clone(), z.clone(), b.clone(), z])?;
    velu_two(&e, &QPoly::x())?.transport(&ModelMap::identity(), &ModelMap::translation(-a))
}

/// `y^2 = x^3 + a (x - b)^2  ->  y^2 = x^3 + a x^2 + 18ab x + ab(16a - 27b)`, kernel `x = 0`,
/// `x -> x - 4ab/x + 4ab^2/x^2`.
pub fn three_isogeny(a: &Rational, b: &Rational) -> Result<Isogeny> {
    if a.is_zero() || b.is_zero() || (rat(4) * a + rat(27) * b).is_zero() {
        return Err(Error::DegenerateParameters("three_isogeny needs a, b != 0 and 4a + 27b != 0"));
    }
    let z = Rational::zero();
    let e = Curve::new([z.clone(), a.clone(), z, rat(-2) * a * b, a * b * b])?;
    velu_odd(&e, &QPoly::x(), 3)
}

/// The isogeny between quadratic twists by `d`: on completed-square models
/// `y^2 = x^3 + A x^2 + B x + C`, the twist is `y^2 = x^3 + dA x^2 + d^2 B x + d^3 C`
/// and the x-map becomes `d xi(x/d)`. The scalar is unchanged.
pub fn twist_isogeny(phi: &Isogeny, d: &Integer) -> Result<Isogeny> {
    if d.is_zero() || !crate::arith::is_squarefree(&d.abs()) {
        return Err(Error::NotSquarefree);
    }
    if d.is_one() {
        return Ok(phi.clone());
    }
    let complete = |e: &Curve| ModelMap::new(rat(1), rat(0), -e.a1() / rat(2), -e.a3() / rat(2));
    let c = phi.transport(&complete(&phi.source), &complete(&phi.target))?;
    let d = Rational::from_integer(d.clone());
    let twist = |e: &Curve| {
        let z = Rational::zero();
        Curve::new([z.clone(), &d * e.a2(), z, &d * &d * e.a4(), &d * &d * &d * e.a6()])
    };
    let dinv = d.recip();
    let num = c.xi_num.compose_linear(&dinv, &Rational::zero()).scale(&d);
    let den = c.xi_den.compose_linear(&dinv, &Rational::zero());
    let kernel = c.kernel.compose_linear(&dinv, &Rational::zero());
    Ok(Isogeny::assemble(twist(&c.source)?, twist(&c.target)?, phi.degree, kernel, num, den, c.scalar))
}

/// Exponent `n` with `Delta^p / Delta'` an `n`-th power for `p`-isogenous curves.
pub fn power_exponent(p: u64) -> u32 {
    match p {
        2 => 3,
        3 => 4,
        _ => 12,
    }
}

/// The rational `n`-th root of `Delta^p / Delta'` (`n` from [`power_exponent`]), if it exists.
pub fn power_root(e: &Curve, e2: &Curve, p: u64) -> Option<Rational> {
    let ratio = num_traits::pow(e.disc().clone(), p as usize) / e2.disc();
    is_nth_power(&ratio, power_exponent(p))
}

pub fn power_check(e: &Curve, e2: &Curve, p: u64) -> bool {
    power_root(e, e2, p).is_some()
}

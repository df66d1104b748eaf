//! Predicting the local invariants of `E'` from the reduction type of `E`,
//! and diffing the prediction against Tate's algorithm.

mod verify;

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::padic::{is_square_mod_power, zl_roots};
use crate::arith::{frac, hilbert_symbol, rat, rat_from, squarefree_part, Place, Rational};
use crate::curves::Curve;
use crate::isogeny::Isogeny;
use crate::localdata::{good_twist, j_valuation, KodairaSymbol, LocalInvariants, ReductionClass};
use crate::{Error, Result};

pub use verify::{verify_at, verify_pair, verify_pair_at, Field, PrimeReport, VerifyReport};

/// A predicted quantity, or `Unknown` where the classification leaves it open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Predicted<T> {
    Known(T),
    Unknown,
}

impl<T> Predicted<T> {
    pub fn known(&self) -> Option<&T> {
        match self {
            Predicted::Known(t) => Some(t),
            Predicted::Unknown => None,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Predicted<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicted::Known(t) => t.fmt(f),
            Predicted::Unknown => f.write_str("?"),
        }
    }
}

/// Row of the classification used for a prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Row {
    GoodOrdinary,
    GoodSupersingular,
    /// Multiplicative with `v(j) = p v(j')`.
    MultDown { split: bool },
    /// Multiplicative with `p v(j) = v(j')`.
    MultUp { split: bool },
    PotMultDown,
    PotMultUp,
    PotGoodAwayFromP,
    PotOrdinary,
    PotSupersingularTame,
    PotSupersingularWild,
}

impl Row {
    pub fn name(self) -> &'static str {
        match self {
            Row::GoodOrdinary => "good-ordinary",
            Row::GoodSupersingular => "good-supersingular",
            Row::MultDown { split: true } => "split-mult-down",
            Row::MultUp { split: true } => "split-mult-up",
            Row::MultDown { split: false } => "nonsplit-mult-down",
            Row::MultUp { split: false } => "nonsplit-mult-up",
            Row::PotMultDown => "additive-pot-mult-down",
            Row::PotMultUp => "additive-pot-mult-up",
            Row::PotGoodAwayFromP => "additive-pot-good-l-ne-p",
            Row::PotOrdinary => "additive-pot-ordinary",
            Row::PotSupersingularTame => "additive-pot-supersingular-tame",
            Row::PotSupersingularWild => "additive-pot-supersingular-wild",
        }
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Hilbert symbols `(x, d)_l` deciding whether `x` is a norm from `Q_l(sqrt d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormTest {
    pub disc: i8,
    pub disc_prime: i8,
}

impl NormTest {
    /// `c/c'` as dictated by which of the discriminants are norms.
    pub fn ratio(self) -> Rational {
        match (self.disc, self.disc_prime) {
            (1, -1) => rat(2),
            (-1, 1) => frac(1, 2),
            _ => Rational::one(),
        }
    }
}

/// Isogeny-dependent inputs of the predictor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsogenyData {
    pub p: u64,
    /// `v(j)`, `None` when `j = 0`.
    pub vj: Option<i64>,
    pub vj_prime: Option<i64>,
    /// Whether the kernel lies in the formal group (only at `l = p`, potentially ordinary).
    pub kernel_in_formal_group: Option<bool>,
    /// Norm test for the quadratic extension over which `E` becomes good or split multiplicative.
    pub norm: Option<NormTest>,
    /// Whether `E(Q_l)[3]` is nontrivial (only where the 3-isogeny exception applies).
    pub three_torsion: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub prime: u64,
    pub row: Row,
    pub delta_prime: Predicted<u32>,
    pub kodaira_pair: Predicted<(KodairaSymbol, KodairaSymbol)>,
    pub tamagawa_ratio: Predicted<Rational>,
    /// `v_l(phi^* omega' / omega)` for minimal differentials.
    pub alpha_valuation: Predicted<i64>,
}

fn needs<T: Copy>(x: Option<T>, what: &str) -> Result<T> {
    x.ok_or_else(|| Error::InconsistentInputs(alloc::format!("prediction needs {what}")))
}

/// Direction of the isogeny on `j`-valuations for (potentially) multiplicative reduction:
/// `true` when `v(j) = p v(j')`.
fn goes_down(d: &IsogenyData) -> Result<bool> {
    let (vj, vj2) = (needs(d.vj, "v(j)")?, needs(d.vj_prime, "v(j')")?);
    let p = d.p as i64;
    if vj == p * vj2 {
        Ok(true)
    } else if p * vj == vj2 {
        Ok(false)
    } else {
        Err(Error::InconsistentInputs(alloc::format!("v(j) = {vj} and v(j') = {vj2} are not related by p = {p}")))
    }
}

fn scale_u32(x: u32, num: i64, den: i64) -> Result<u32> {
    let v = x as i64 * num;
    if v % den != 0 || v / den < 0 {
        return Err(Error::InconsistentInputs(alloc::format!("{x} * {num} / {den} is not a nonnegative integer")));
    }
    Ok((v / den) as u32)
}

fn shift_u32(x: u32, by: i64) -> Result<u32> {
    u32::try_from(x as i64 + by).map_err(|_| Error::InconsistentInputs(alloc::format!("{x} + {by} is negative")))
}

/// `l`-adic valuation of `p`: 1 when `l = p`, else 0.
fn vp(p: u64, l: u64) -> i64 {
    (p == l) as i64
}

/// Predicts `delta'`, the Kodaira pair, `c/c'` and the valuation of the
/// pullback scalar at `l` from the data of `E` alone (plus `v(j')` and the
/// locality tests in `data`).
pub fn predict(class: ReductionClass, local: &LocalInvariants, data: &IsogenyData) -> Result<Prediction> {
    use Predicted::*;
    let l = local.prime;
    let p = data.p;
    let delta = local.disc_valuation;
    let kod = local.kodaira;
    let one = || Known(Rational::one());
    let mk = |row, dp: Predicted<u32>, pair, ratio, alpha| Prediction {
        prime: l,
        row,
        delta_prime: dp,
        kodaira_pair: pair,
        tamagawa_ratio: ratio,
        alpha_valuation: alpha,
    };
    let dagger = |d: &IsogenyData| -> Result<Predicted<i64>> {
        if l != p {
            return Ok(Known(0));
        }
        Ok(Known(needs(d.kernel_in_formal_group, "the formal group kernel test")? as i64))
    };
    let pred = match class {
        ReductionClass::GoodOrdinary => mk(Row::GoodOrdinary, Known(0), Known((kod, kod)), one(), dagger(data)?),
        ReductionClass::GoodSupersingular => {
            if l == p {
                return Err(Error::SupersingularIsogeny(p));
            }
            mk(Row::GoodSupersingular, Known(0), Known((kod, kod)), one(), Known(0))
        }
        ReductionClass::SplitMult | ReductionClass::NonsplitMult => {
            let split = class == ReductionClass::SplitMult;
            let down = goes_down(data)?;
            let pp = p as i64;
            let dp = if down { scale_u32(delta, 1, pp)? } else { scale_u32(delta, pp, 1)? };
            let ratio = match (split, down) {
                (true, true) => rat(pp),
                (true, false) => frac(1, pp),
                (false, true) if p == 2 && dp % 2 == 1 => rat(2),
                (false, false) if p == 2 && delta % 2 == 1 => frac(1, 2),
                _ => Rational::one(),
            };
            let row = if down { Row::MultDown { split } } else { Row::MultUp { split } };
            let alpha = if down { 0 } else { vp(p, l) };
            mk(row, Known(dp), Known((kod, KodairaSymbol::I(dp))), Known(ratio), Known(alpha))
        }
        ReductionClass::AdditivePotMult => {
            let down = goes_down(data)?;
            let vj = needs(data.vj, "v(j)")?;
            let pp = p as i64;
            let KodairaSymbol::IStar(n) = kod else {
                return Err(Error::InconsistentInputs(alloc::format!("potentially multiplicative but type {kod}")));
            };
            let shift = if down {
                if vj % pp != 0 {
                    return Err(Error::InconsistentInputs(alloc::format!("v(j) = {vj} not divisible by {p}")));
                }
                (pp - 1) * vj / pp
            } else {
                -(pp - 1) * vj
            };
            let ratio = if p == 2 { Known(needs(data.norm, "the norm test")?.ratio()) } else { one() };
            let row = if down { Row::PotMultDown } else { Row::PotMultUp };
            let alpha = if down { 0 } else { vp(p, l) };
            mk(
                row,
                Known(shift_u32(delta, shift)?),
                Known((kod, KodairaSymbol::IStar(shift_u32(n, shift)?))),
                ratio,
                Known(alpha),
            )
        }
        ReductionClass::AdditivePotGood { tame, pot_ordinary } => {
            if l != p {
                let ratio = if p == 3 && matches!(kod, KodairaSymbol::IV | KodairaSymbol::IVStar) && l % 3 != 1 {
                    Known(if needs(data.three_torsion, "the 3-torsion test")? { rat(3) } else { frac(1, 3) })
                } else if p == 2 && kod == KodairaSymbol::IStar(0) {
                    Known(needs(data.norm, "the norm test")?.ratio())
                } else {
                    one()
                };
                mk(Row::PotGoodAwayFromP, Known(delta), Known((kod, kod)), ratio, Known(0))
            } else if pot_ordinary == Some(true) {
                let ratio = if p == 2 { Known(needs(data.norm, "the norm test")?.ratio()) } else { one() };
                mk(Row::PotOrdinary, Known(delta), Known((kod, kod)), ratio, dagger(data)?)
            } else if tame {
                let opp = kod
                    .opposite()
                    .ok_or_else(|| Error::InconsistentInputs(alloc::format!("type {kod} has no opposite")))?;
                mk(Row::PotSupersingularTame, Known(12 - delta), Known((kod, opp)), one(), Unknown)
            } else {
                mk(Row::PotSupersingularWild, Unknown, Unknown, Unknown, Unknown)
            }
        }
    };
    Ok(pred)
}

/// Which locality tests the predictor needs for `class` at `l`.
fn wants(class: ReductionClass, kod: KodairaSymbol, p: u64, l: u64) -> (bool, bool, bool) {
    let pot_ord = matches!(class, ReductionClass::AdditivePotGood { pot_ordinary: Some(true), .. });
    let dagger = l == p && (class == ReductionClass::GoodOrdinary || pot_ord);
    let norm = p == 2
        && match class {
            ReductionClass::AdditivePotMult => true,
            ReductionClass::AdditivePotGood { .. } => (l != 2 && kod == KodairaSymbol::IStar(0)) || (l == 2 && pot_ord),
            _ => false,
        };
    let star = p == 3
        && l != 3
        && l % 3 != 1
        && matches!(class, ReductionClass::AdditivePotGood { .. })
        && matches!(kod, KodairaSymbol::IV | KodairaSymbol::IVStar);
    (dagger, norm, star)
}

/// Collects [`IsogenyData`] for `phi` at `l` given local data of both curves.
pub fn gather(phi: &Isogeny, class: ReductionClass, loc: &LocalInvariants, loc2: &LocalInvariants) -> Result<IsogenyData> {
    let l = loc.prime;
    let p = phi.degree();
    let e = phi.source();
    let (dagger, norm, star) = wants(class, loc.kodaira, p, l);
    let kernel_in_formal_group = if dagger { Some(phi.kernel_in_formal_group(l)?) } else { None };
    let norm = if norm {
        let d = if class == ReductionClass::AdditivePotMult {
            squarefree_part(&-e.invariants().c6.clone())
        } else {
            good_twist(e, l).ok_or(Error::WrongReductionClass("no quadratic twist with good reduction"))?
        };
        let d = rat_from(&d);
        Some(NormTest {
            disc: hilbert_symbol(loc.minimal_model.disc(), &d, Place::Finite(l))?,
            disc_prime: hilbert_symbol(loc2.minimal_model.disc(), &d, Place::Finite(l))?,
        })
    } else {
        None
    };
    let three_torsion = if star { Some(has_three_torsion(&loc.minimal_model, l)) } else { None };
    Ok(IsogenyData {
        p,
        vj: j_valuation(e, l),
        vj_prime: j_valuation(phi.target(), l),
        kernel_in_formal_group,
        norm,
        three_torsion,
    })
}

/// Whether `E(Q_l)` has a point of order 3, for an integral model and `l != 3`.
/// Such points have integral x-coordinate (no prime-to-`l` torsion in the formal
/// group), so they come from roots of `psi_3` in `Z_l` with `4x^3 + b2 x^2 + 2 b4 x + b6`
/// a square.
pub fn has_three_torsion(e: &Curve, l: u64) -> bool {
    assert!(e.is_integral() && l != 3);
    let to_int = |q: &crate::arith::QPoly| -> Vec<BigInt> { q.coeffs().iter().map(|c| c.to_integer()).collect() };
    let psi3 = to_int(&e.division_polynomial(3));
    let f = to_int(&e.two_torsion_polynomial());
    let mut prec = 32;
    loop {
        let mut undecided = false;
        for x in zl_roots(&psi3, l, prec) {
            let fx = f.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c);
            match is_square_mod_power(&fx, l, prec) {
                Some(true) => return true,
                Some(false) => {}
                None => undecided = true,
            }
        }
        if !undecided {
            return false;
        }
        prec *= 2;
        assert!(prec < 4096, "3-torsion test did not stabilise");
    }
}

/// `c/c'` must be a power of `p`.
pub fn is_power_of(x: &Rational, p: u64) -> bool {
    if !x.is_positive() {
        return false;
    }
    let p = BigInt::from(p);
    [x.numer(), x.denom()].iter().all(|n| {
        let mut n = (*n).clone();
        while (&n % &p).is_zero() {
            n /= &p;
        }
        n.is_one()
    })
}

#[cfg(test)]
mod tests;

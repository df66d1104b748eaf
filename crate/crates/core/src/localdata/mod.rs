//! Local data at a prime: Tate's algorithm, reduction classes, good-reduction
//! twists and global minimal models.

mod minimal;
mod tate;

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::arith::modp::reduce;
use crate::arith::{legendre, val, Integer, Valuation};
use crate::curves::{Curve, ModelMap};
use crate::{Error, Result};

pub use minimal::{bad_primes, global_minimal_model};
pub use tate::tate_local;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KodairaSymbol {
    /// `I_n`; `I(0)` is good reduction.
    I(u32),
    II,
    III,
    IV,
    /// `I_n^*`; `IStar(0)` is `I_0^*`.
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaSymbol {
    /// Number of components of the special fibre (with multiplicity ignored).
    pub fn components(self) -> u32 {
        match self {
            KodairaSymbol::I(0) => 1,
            KodairaSymbol::I(n) => n,
            KodairaSymbol::II => 1,
            KodairaSymbol::III => 2,
            KodairaSymbol::IV => 3,
            KodairaSymbol::IStar(n) => n + 5,
            KodairaSymbol::IVStar => 7,
            KodairaSymbol::IIIStar => 8,
            KodairaSymbol::IIStar => 9,
        }
    }

    /// The type with `delta' = 12 - delta` among the potentially good additive types.
    pub fn opposite(self) -> Option<KodairaSymbol> {
        use KodairaSymbol::*;
        Some(match self {
            II => IIStar,
            IIStar => II,
            III => IIIStar,
            IIIStar => III,
            IV => IVStar,
            IVStar => IV,
            IStar(0) => IStar(0),
            _ => return None,
        })
    }

    pub fn parse(s: &str) -> Option<KodairaSymbol> {
        use KodairaSymbol::*;
        Some(match s {
            "II" => II,
            "III" => III,
            "IV" => IV,
            "IV*" => IVStar,
            "III*" => IIIStar,
            "II*" => IIStar,
            _ => {
                let rest = s.strip_prefix('I')?;
                if let Some(n) = rest.strip_suffix('*') {
                    IStar(n.parse().ok()?)
                } else {
                    I(rest.parse().ok()?)
                }
            }
        })
    }
}

impl fmt::Display for KodairaSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaSymbol::I(n) => write!(f, "I{n}"),
            KodairaSymbol::II => f.write_str("II"),
            KodairaSymbol::III => f.write_str("III"),
            KodairaSymbol::IV => f.write_str("IV"),
            KodairaSymbol::IStar(n) => write!(f, "I{n}*"),
            KodairaSymbol::IVStar => f.write_str("IV*"),
            KodairaSymbol::IIIStar => f.write_str("III*"),
            KodairaSymbol::IIStar => f.write_str("II*"),
        }
    }
}

/// Output of Tate's algorithm at one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalInvariants {
    pub prime: u64,
    /// An `l`-minimal integral model.
    pub minimal_model: Curve,
    /// Takes the input model to `minimal_model`.
    pub map_to_minimal: ModelMap,
    pub kodaira: KodairaSymbol,
    /// `f`
    pub conductor_exponent: u32,
    /// `m`
    pub components: u32,
    /// `c`
    pub tamagawa: u32,
    /// `delta`, the valuation of the minimal discriminant.
    pub disc_valuation: u32,
    /// Split or nonsplit, for multiplicative reduction only.
    pub split: Option<bool>,
}

impl LocalInvariants {
    pub fn is_good(&self) -> bool {
        self.conductor_exponent == 0
    }

    pub fn is_multiplicative(&self) -> bool {
        self.conductor_exponent == 1
    }

    pub fn is_additive(&self) -> bool {
        self.conductor_exponent >= 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionClass {
    GoodOrdinary,
    GoodSupersingular,
    SplitMult,
    NonsplitMult,
    AdditivePotMult,
    AdditivePotGood { tame: bool, pot_ordinary: Option<bool> },
}

impl fmt::Display for ReductionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionClass::GoodOrdinary => f.write_str("good ordinary"),
            ReductionClass::GoodSupersingular => f.write_str("good supersingular"),
            ReductionClass::SplitMult => f.write_str("split multiplicative"),
            ReductionClass::NonsplitMult => f.write_str("nonsplit multiplicative"),
            ReductionClass::AdditivePotMult => f.write_str("additive potentially multiplicative"),
            ReductionClass::AdditivePotGood { tame, pot_ordinary } => {
                write!(f, "additive potentially good, {}", if *tame { "tame" } else { "wild" })?;
                match pot_ordinary {
                    Some(true) => f.write_str(", potentially ordinary"),
                    Some(false) => f.write_str(", potentially supersingular"),
                    None => Ok(()),
                }
            }
        }
    }
}

/// Trace of Frobenius `a_l` of a model with good reduction at `l`, by counting points.
pub fn frobenius_trace(minimal: &Curve, l: u64) -> i64 {
    let a = minimal.integer_ainvs();
    if l == 2 {
        let a: Vec<u64> = a.iter().map(|x| reduce(x, 2)).collect();
        let mut count = 1i64;
        for x in 0..2u64 {
            for y in 0..2u64 {
                let lhs = y * y + a[0] * x * y + a[2] * y;
                let rhs = x * x * x + a[1] * x * x + a[3] * x + a[4];
                if (lhs + rhs).is_multiple_of(2) {
                    count += 1;
                }
            }
        }
        return 3 - count;
    }
    let inv = minimal.invariants();
    let coeffs: Vec<u128> = [&inv.b6, &(&inv.b4 * crate::arith::rat(2)), &inv.b2]
        .iter()
        .map(|c| reduce(&c.to_integer(), l) as u128)
        .collect();
    let m = l as u128;
    let mut sum = 0i64;
    for x in 0..l as u128 {
        let fx = (((4 * x % m + coeffs[2]) % m * x % m + coeffs[1]) % m * x % m + coeffs[0]) % m;
        sum += legendre(&BigInt::from(fx as u64), l) as i64;
    }
    -sum
}

pub fn is_ordinary(minimal: &Curve, l: u64) -> bool {
    frobenius_trace(minimal, l).rem_euclid(l as i64) != 0
}

/// Square-class representatives of `Q_l^x` (with repetitions for odd `l`).
pub fn square_class_reps(l: u64) -> Vec<i64> {
    if l == 2 {
        return alloc::vec![1, -1, 3, -3, 2, -2, 6, -6];
    }
    let u = (2..).find(|&n: &u64| legendre(&BigInt::from(n), l) == -1).unwrap() as i64;
    let l = l as i64;
    alloc::vec![1, -1, u, -u, l, -l, u * l, -u * l]
}

/// A squarefree `d` with `E_d` of good reduction at `l`, if one exists.
pub fn good_twist(e: &Curve, l: u64) -> Option<Integer> {
    square_class_reps(l).into_iter().skip(1).map(BigInt::from).find(|d| {
        let ed = e.quadratic_twist(d).expect("representatives are squarefree");
        tate_local(&ed, l).is_good()
    })
}

/// Tameness of additive potentially good reduction from the Kodaira type.
pub fn is_tame_type(l: u64, kodaira: KodairaSymbol) -> bool {
    use KodairaSymbol::*;
    match l {
        2 => matches!(kodaira, IV | IVStar),
        3 => matches!(kodaira, III | IIIStar | IStar(0)),
        _ => true,
    }
}

pub fn is_tame(e: &Curve, l: u64) -> Result<bool> {
    let loc = tate_local(e, l);
    if !loc.is_additive() || val(e.j(), l) < Valuation::Finite(0) {
        return Err(Error::WrongReductionClass("is_tame needs additive potentially good reduction"));
    }
    let tame = is_tame_type(l, loc.kodaira);
    if tame != (loc.conductor_exponent == 2) {
        return Err(Error::InconsistentInputs(alloc::format!(
            "tameness from type {} disagrees with f = {}",
            loc.kodaira,
            loc.conductor_exponent
        )));
    }
    Ok(tame)
}

/// Potential ordinarity from the Kodaira type, for curves that are not a
/// quadratic twist of a curve with good reduction.
fn pot_ordinary_by_type(l: u64, kodaira: KodairaSymbol) -> bool {
    use KodairaSymbol::*;
    match l % 12 {
        _ if l <= 3 => false,
        1 => true,
        5 => matches!(kodaira, III | IIIStar),
        7 => matches!(kodaira, II | IIStar | IV | IVStar),
        _ => false,
    }
}

pub fn classify_reduction(e: &Curve, l: u64) -> ReductionClass {
    classify_local(e, &tate_local(e, l))
}

/// Classification given the already computed local invariants of `e` at `l`.
pub fn classify_local(e: &Curve, loc: &LocalInvariants) -> ReductionClass {
    let l = loc.prime;
    match loc.conductor_exponent {
        0 => {
            if is_ordinary(&loc.minimal_model, l) {
                ReductionClass::GoodOrdinary
            } else {
                ReductionClass::GoodSupersingular
            }
        }
        1 => {
            if loc.split == Some(true) {
                ReductionClass::SplitMult
            } else {
                ReductionClass::NonsplitMult
            }
        }
        _ => {
            if val(e.j(), l) < Valuation::Finite(0) {
                return ReductionClass::AdditivePotMult;
            }
            let tame = is_tame_type(l, loc.kodaira);
            debug_assert_eq!(tame, loc.conductor_exponent == 2, "tameness vs conductor at {l}");
            let pot_ordinary = match good_twist(e, l) {
                Some(d) => {
                    let ed = e.quadratic_twist(&d).unwrap();
                    Some(is_ordinary(&tate_local(&ed, l).minimal_model, l))
                }
                None => Some(pot_ordinary_by_type(l, loc.kodaira)),
            };
            ReductionClass::AdditivePotGood { tame, pot_ordinary }
        }
    }
}

/// `v_l(j)` as a plain integer, `None` for `j = 0`.
pub fn j_valuation(e: &Curve, l: u64) -> Option<i64> {
    val(e.j(), l).finite()
}

#[cfg(test)]
mod tests;

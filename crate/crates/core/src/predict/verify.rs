use alloc::{vec, vec::Vec};

use crate::arith::{rat, Rational};
use crate::isogeny::{power_exponent, power_root, Isogeny};
use crate::localdata::{bad_primes, classify_local, tate_local, LocalInvariants, ReductionClass};
use crate::Result;

use super::{gather, is_power_of, predict, IsogenyData, Predicted, Prediction};

/// Outcome of comparing one predicted quantity with the computed one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Match,
    Mismatch,
    /// The prediction is `Unknown`.
    Skipped,
}

impl Field {
    fn compare<T: PartialEq>(p: &Predicted<T>, actual: &T) -> Field {
        match p {
            Predicted::Known(x) if x == actual => Field::Match,
            Predicted::Known(_) => Field::Mismatch,
            Predicted::Unknown => Field::Skipped,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Field::Match => "match",
            Field::Mismatch => "MISMATCH",
            Field::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeReport {
    pub prime: u64,
    pub class: ReductionClass,
    pub data: IsogenyData,
    pub prediction: Prediction,
    pub local: LocalInvariants,
    pub local_prime: LocalInvariants,
    /// Computed `c/c'`.
    pub tamagawa_ratio: Rational,
    /// Computed `v_l(phi^* omega' / omega)` through the minimal models.
    pub alpha_valuation: i64,
    pub delta_prime: Field,
    pub kodaira_pair: Field,
    pub tamagawa: Field,
    pub alpha: Field,
    /// Consistency checks that do not depend on the prediction.
    pub checks: Vec<(&'static str, bool)>,
}

impl PrimeReport {
    pub fn ok(&self) -> bool {
        [self.delta_prime, self.kodaira_pair, self.tamagawa, self.alpha].iter().all(|f| *f != Field::Mismatch)
            && self.checks.iter().all(|(_, ok)| *ok)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub degree: u64,
    pub primes: Vec<PrimeReport>,
    /// `n` with `Delta^p / Delta'` an `n`-th power.
    pub power_exponent: u32,
    /// The `n`-th root, if rational.
    pub power_root: Option<Rational>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.power_root.is_some() && self.primes.iter().all(PrimeReport::ok)
    }
}

/// Runs Tate's algorithm on both curves at every bad prime and at `p`,
/// predicts from the source curve and records every disagreement.
pub fn verify_pair(phi: &Isogeny) -> Result<VerifyReport> {
    let mut primes = bad_primes(phi.source());
    primes.extend(bad_primes(phi.target()));
    verify_pair_at(phi, &primes)
}

/// As [`verify_pair`], with the bad primes supplied by the caller (isogenous
/// curves share them). `p` is always added.
pub fn verify_pair_at(phi: &Isogeny, primes: &[u64]) -> Result<VerifyReport> {
    let p = phi.degree();
    let e = phi.source();
    let e2 = phi.target();
    let mut primes = primes.to_vec();
    primes.push(p);
    primes.sort_unstable();
    primes.dedup();
    let mut out = Vec::with_capacity(primes.len());
    for l in primes {
        out.push(verify_at(phi, l)?);
    }
    Ok(VerifyReport { degree: p, primes: out, power_exponent: power_exponent(p), power_root: power_root(e, e2, p) })
}

/// The report at a single prime.
pub fn verify_at(phi: &Isogeny, l: u64) -> Result<PrimeReport> {
    let p = phi.degree();
    let loc = tate_local(phi.source(), l);
    let loc2 = tate_local(phi.target(), l);
    let class = classify_local(phi.source(), &loc);
    let data = gather(phi, class, &loc, &loc2)?;
    let prediction = predict(class, &loc, &data)?;

    let ratio = rat(loc.tamagawa as i64) / rat(loc2.tamagawa as i64);
    let alpha = phi.scalar_valuation(&loc.map_to_minimal, &loc2.map_to_minimal, l);

    let mut checks = vec![
        ("ogg", loc.disc_valuation == loc.conductor_exponent + loc.components - 1),
        ("ogg'", loc2.disc_valuation == loc2.conductor_exponent + loc2.components - 1),
        ("f = f'", loc.conductor_exponent == loc2.conductor_exponent),
        ("c/c' power of p", is_power_of(&ratio, p)),
    ];
    if let ReductionClass::AdditivePotGood { tame: true, .. } = class {
        let (d, d2) = (loc.disc_valuation as u64, loc2.disc_valuation as u64);
        // Delta^p / Delta' is an n-th power, n = 12, 3 or 4
        let n = power_exponent(p) as u64;
        checks.push(("delta' = p delta mod n", d2 % n == (p * d) % n && 0 < d && d < 12));
    }
    if let Some(k) = data.kernel_in_formal_group {
        checks.push(("alpha vs formal group kernel", (alpha == 1) == k));
    }

    Ok(PrimeReport {
        prime: l,
        class,
        delta_prime: Field::compare(&prediction.delta_prime, &loc2.disc_valuation),
        kodaira_pair: Field::compare(&prediction.kodaira_pair, &(loc.kodaira, loc2.kodaira)),
        tamagawa: Field::compare(&prediction.tamagawa_ratio, &ratio),
        alpha: Field::compare(&prediction.alpha_valuation, &alpha),
        data,
        prediction,
        local: loc,
        local_prime: loc2,
        tamagawa_ratio: ratio,
        alpha_valuation: alpha,
        checks,
    })
}

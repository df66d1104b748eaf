//! JSON shapes of the report lines. Field order is the struct order.

use std::collections::BTreeMap;

use isolocal::arith::QPoly;
use isolocal::localdata::{classify_local, tate_local};
use isolocal::periods::{EtaQuotient, Float, KernelGenerator, PeriodData, PeriodRatio};
use isolocal::predict::{Field, Predicted, PrimeReport};
use isolocal::{Curve, KodairaSymbol, LocalInvariants, Rational};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

/// An integer when it fits in an `i64`, otherwise a string (`"n"` or `"n/d"`).
pub fn rational_json(x: &Rational) -> Value {
    if x.is_integer() {
        if let Some(i) = x.to_integer().to_i64() {
            return json!(i);
        }
    }
    json!(x.to_string())
}

pub fn curve_json(e: &Curve) -> Value {
    json!({ "a": e.a().iter().map(rational_json).collect::<Vec<_>>() })
}

pub fn poly_json(f: &QPoly) -> Value {
    Value::Array(f.coeffs().iter().map(rational_json).collect())
}

fn predicted<T>(p: &Predicted<T>, f: impl Fn(&T) -> Value) -> Value {
    match p {
        Predicted::Known(t) => f(t),
        Predicted::Unknown => json!("?"),
    }
}

fn compare<T: PartialEq>(p: &Predicted<T>, actual: &T) -> &'static str {
    match p {
        Predicted::Known(x) if x == actual => Field::Match.as_str(),
        Predicted::Known(_) => Field::Mismatch.as_str(),
        Predicted::Unknown => Field::Skipped.as_str(),
    }
}

fn pair(k: &(KodairaSymbol, KodairaSymbol)) -> Value {
    json!([k.0.to_string(), k.1.to_string()])
}

#[derive(Serialize)]
pub struct Quantities {
    pub delta_prime: Value,
    pub kodaira_pair: Value,
    pub tamagawa_ratio: Value,
    pub alpha: Value,
}

#[derive(Serialize)]
pub struct Fields {
    pub delta_prime: &'static str,
    pub kodaira_pair: &'static str,
    pub tamagawa_ratio: &'static str,
    pub alpha: &'static str,
}

#[derive(Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
}

/// One `(pair, prime)` line of `verify`.
#[derive(Serialize)]
pub struct PrimeLine {
    pub kind: &'static str,
    pub label: String,
    pub p: u64,
    pub prime: u64,
    /// `"isogeny"`, or `"claimed"` when the computed side is a `curve_b` that is not the
    /// target of the isogeny the predictions come from.
    pub target: &'static str,
    pub row: &'static str,
    pub class: String,
    pub kodaira: [String; 2],
    pub delta: [u32; 2],
    pub conductor: [u32; 2],
    pub tamagawa: [u32; 2],
    pub predicted: Quantities,
    pub computed: Quantities,
    pub fields: Fields,
    pub checks: Vec<Check>,
    pub mismatches: Vec<String>,
    pub ok: bool,
}

fn mismatches(fields: &Fields, checks: &[Check]) -> Vec<String> {
    let mut out: Vec<String> = [
        ("delta_prime", fields.delta_prime),
        ("kodaira_pair", fields.kodaira_pair),
        ("tamagawa_ratio", fields.tamagawa_ratio),
        ("alpha", fields.alpha),
    ]
    .into_iter()
    .filter(|(_, f)| *f == Field::Mismatch.as_str())
    .map(|(n, _)| n.to_string())
    .collect();
    out.extend(checks.iter().filter(|c| !c.ok).map(|c| c.name.clone()));
    out
}

fn predicted_quantities(r: &PrimeReport) -> Quantities {
    let pr = &r.prediction;
    Quantities {
        delta_prime: predicted(&pr.delta_prime, |d| json!(d)),
        kodaira_pair: predicted(&pr.kodaira_pair, pair),
        tamagawa_ratio: predicted(&pr.tamagawa_ratio, rational_json),
        alpha: predicted(&pr.alpha_valuation, |a| json!(a)),
    }
}

fn base_line(label: &str, r: &PrimeReport, loc2: &LocalInvariants, target: &'static str) -> PrimeLine {
    let loc = &r.local;
    PrimeLine {
        kind: "prime",
        label: label.to_string(),
        p: r.data.p,
        prime: r.prime,
        target,
        row: r.prediction.row.name(),
        class: r.class.to_string(),
        kodaira: [loc.kodaira.to_string(), loc2.kodaira.to_string()],
        delta: [loc.disc_valuation, loc2.disc_valuation],
        conductor: [loc.conductor_exponent, loc2.conductor_exponent],
        tamagawa: [loc.tamagawa, loc2.tamagawa],
        predicted: predicted_quantities(r),
        computed: Quantities { delta_prime: Value::Null, kodaira_pair: Value::Null, tamagawa_ratio: Value::Null, alpha: Value::Null },
        fields: Fields { delta_prime: "", kodaira_pair: "", tamagawa_ratio: "", alpha: "" },
        checks: Vec::new(),
        mismatches: Vec::new(),
        ok: false,
    }
}

impl PrimeLine {
    pub fn from_report(label: &str, r: &PrimeReport) -> Self {
        let mut line = base_line(label, r, &r.local_prime, "isogeny");
        line.computed = Quantities {
            delta_prime: json!(r.local_prime.disc_valuation),
            kodaira_pair: pair(&(r.local.kodaira, r.local_prime.kodaira)),
            tamagawa_ratio: rational_json(&r.tamagawa_ratio),
            alpha: json!(r.alpha_valuation),
        };
        line.fields = Fields {
            delta_prime: r.delta_prime.as_str(),
            kodaira_pair: r.kodaira_pair.as_str(),
            tamagawa_ratio: r.tamagawa.as_str(),
            alpha: r.alpha.as_str(),
        };
        line.checks = r.checks.iter().map(|(n, ok)| Check { name: n.to_string(), ok: *ok }).collect();
        line.finish()
    }

    /// Predictions from `r` (made for the true target) against the local data of `claimed`.
    /// The pullback scalar has no meaning without an isogeny onto `claimed` and is skipped.
    pub fn against_claimed(label: &str, r: &PrimeReport, claimed: &Curve) -> Self {
        let loc2 = tate_local(claimed, r.prime);
        let mut line = base_line(label, r, &loc2, "claimed");
        let ratio = Rational::from_integer(r.local.tamagawa.into()) / Rational::from_integer(loc2.tamagawa.into());
        line.computed = Quantities {
            delta_prime: json!(loc2.disc_valuation),
            kodaira_pair: pair(&(r.local.kodaira, loc2.kodaira)),
            tamagawa_ratio: rational_json(&ratio),
            alpha: json!("?"),
        };
        let pr = &r.prediction;
        line.fields = Fields {
            delta_prime: compare(&pr.delta_prime, &loc2.disc_valuation),
            kodaira_pair: compare(&pr.kodaira_pair, &(r.local.kodaira, loc2.kodaira)),
            tamagawa_ratio: compare(&pr.tamagawa_ratio, &ratio),
            alpha: Field::Skipped.as_str(),
        };
        line.checks = vec![
            Check { name: "ogg'".into(), ok: loc2.disc_valuation == loc2.conductor_exponent + loc2.components - 1 },
            Check { name: "f = f'".into(), ok: r.local.conductor_exponent == loc2.conductor_exponent },
        ];
        line.finish()
    }

    fn finish(mut self) -> Self {
        self.mismatches = mismatches(&self.fields, &self.checks);
        self.ok = self.mismatches.is_empty();
        self
    }
}

#[derive(Serialize)]
pub struct Power {
    pub exponent: u32,
    pub root: Option<Value>,
}

/// Period summary carried on a `verify` pair line.
#[derive(Serialize)]
pub struct PeriodCheck {
    pub precision: u32,
    pub lambda: u64,
    pub ratio_real: String,
    pub nearest_real: Value,
    pub error_real: String,
    pub ratio_complex: String,
    pub nearest_complex: Value,
    pub error_complex: String,
    pub semistable_triple: Option<[bool; 3]>,
    pub ok: bool,
}

/// Relative tolerance for the period ratios against `{p, 1, 1/p}`.
pub const PERIOD_TOLERANCE: f64 = 1e-9;

impl PeriodCheck {
    pub fn new(r: &PeriodRatio, precision: u32) -> Self {
        let p = Rational::from_integer(r.degree.into());
        let in_set = |x: &Rational, set: &[Rational]| set.contains(x);
        let ok_real = r.nearest_real.1 < PERIOD_TOLERANCE
            && in_set(&r.nearest_real.0, &[p.clone(), Rational::from_integer(1.into()), p.recip()]);
        let ok_complex = r.nearest_complex.1 < PERIOD_TOLERANCE && in_set(&r.nearest_complex.0, &[p.clone(), p.recip()]);
        let ok_triple = r.semistable_triple.is_none_or(|t| t[0] == t[1] && t[1] == t[2]);
        PeriodCheck {
            precision,
            lambda: r.lambda,
            ratio_real: decimal(&r.ratio_real, 20),
            nearest_real: rational_json(&r.nearest_real.0),
            error_real: sci(r.nearest_real.1),
            ratio_complex: decimal(&r.ratio_complex, 20),
            nearest_complex: rational_json(&r.nearest_complex.0),
            error_complex: sci(r.nearest_complex.1),
            semistable_triple: r.semistable_triple,
            ok: ok_real && ok_complex && ok_triple,
        }
    }
}

/// One line per pair in `verify`, after its prime lines.
#[derive(Serialize)]
pub struct PairLine {
    pub kind: &'static str,
    pub label: String,
    pub p: u64,
    pub source: Value,
    pub target: Value,
    pub kernel: Value,
    pub primes: Vec<u64>,
    pub power: Power,
    pub periods: Option<PeriodCheck>,
    /// Set when the period computation did not reach its tolerance.
    pub precision_failure: Option<String>,
    pub mismatches: Vec<String>,
    pub ok: bool,
}

#[derive(Serialize, Default)]
pub struct Summary {
    pub kind: &'static str,
    pub entries: usize,
    pub pairs: usize,
    pub prime_rows: usize,
    pub mismatched_pairs: usize,
    pub skipped_no_kernel: usize,
    pub rejected: usize,
    pub precision_failures: usize,
    /// Prime rows checked, by classification row.
    pub rows: BTreeMap<&'static str, usize>,
}

#[derive(Serialize)]
pub struct LocalLine {
    pub prime: u64,
    pub class: String,
    pub kodaira: String,
    pub conductor_exponent: u32,
    pub components: u32,
    pub tamagawa: u32,
    pub disc_valuation: u32,
    pub split: Option<bool>,
    pub minimal_model: Value,
}

impl LocalLine {
    pub fn new(e: &Curve, loc: &LocalInvariants) -> Self {
        LocalLine {
            prime: loc.prime,
            class: classify_local(e, loc).to_string(),
            kodaira: loc.kodaira.to_string(),
            conductor_exponent: loc.conductor_exponent,
            components: loc.components,
            tamagawa: loc.tamagawa,
            disc_valuation: loc.disc_valuation,
            split: loc.split,
            minimal_model: curve_json(&loc.minimal_model),
        }
    }
}

#[derive(Serialize)]
pub struct AnalyzeLine {
    pub label: Option<String>,
    pub curve: Value,
    pub discriminant: Value,
    pub j: Value,
    pub global_minimal_model: Value,
    pub minimal_discriminant: Value,
    pub bad_primes: Vec<u64>,
    pub conductor: Value,
    pub primes: Vec<LocalLine>,
}

/// Decimal digits that the precision supports, with a few bits of slack.
pub fn digits_for(prec: u32) -> usize {
    (((prec.saturating_sub(8)) as f64) * std::f64::consts::LOG10_2).floor().max(1.0) as usize
}

pub fn decimal(x: &Float, digits: usize) -> String {
    x.to_decimal(digits)
}

pub fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

#[derive(Serialize)]
pub struct LatticeOut {
    pub model: Value,
    pub omega1: String,
    pub omega2: [String; 2],
    pub tau: [String; 2],
    pub real_components: u8,
    pub omega_real: String,
    pub omega_complex: String,
    pub precision: u32,
    /// Relative error bound of every printed value.
    pub error_bound: String,
}

impl LatticeOut {
    pub fn new(d: &PeriodData) -> Self {
        let n = digits_for(d.precision).min(60);
        LatticeOut {
            model: curve_json(&d.model),
            omega1: decimal(&d.omega1, n),
            omega2: [decimal(&d.omega2.re, n), decimal(&d.omega2.im, n)],
            tau: [decimal(&d.tau.re, n), decimal(&d.tau.im, n)],
            real_components: d.real_components,
            omega_real: decimal(&d.omega_real, n),
            omega_complex: decimal(&d.omega_complex, n),
            precision: d.precision,
            error_bound: format!("1e-{}", n - 1),
        }
    }
}

#[derive(Serialize)]
pub struct RatioOut {
    pub lambda: u64,
    pub scalar: Value,
    pub omega_over_omega_prime: String,
    pub nearest_real: Value,
    pub error_real: String,
    pub complex_over_complex_prime: String,
    pub nearest_complex: Value,
    pub error_complex: String,
    /// `[Omega/Omega' = p, omega = +-phi^*omega', kernel rational]` for semistable odd `p`.
    pub semistable_triple: Option<[bool; 3]>,
}

impl RatioOut {
    pub fn new(r: &PeriodRatio) -> Self {
        let n = digits_for(r.source.precision).min(40);
        RatioOut {
            lambda: r.lambda,
            scalar: rational_json(&r.scalar),
            omega_over_omega_prime: decimal(&r.ratio_real, n),
            nearest_real: rational_json(&r.nearest_real.0),
            error_real: sci(r.nearest_real.1),
            complex_over_complex_prime: decimal(&r.ratio_complex, n),
            nearest_complex: rational_json(&r.nearest_complex.0),
            error_complex: sci(r.nearest_complex.1),
            semistable_triple: r.semistable_triple,
        }
    }
}

#[derive(Serialize)]
pub struct DeltaTauOut {
    pub terms: usize,
    pub source_error: String,
    pub target_error: String,
}

#[derive(Serialize)]
pub struct EtaOut {
    pub value: String,
    pub rational: Value,
    pub rationality_error: String,
    pub imaginary_part: String,
    pub twelfth_power_error: String,
    pub generator: String,
}

impl EtaOut {
    pub fn new(q: &EtaQuotient) -> Self {
        EtaOut {
            value: decimal(&q.value, 30),
            rational: rational_json(&q.rational),
            rationality_error: sci(q.rationality_error),
            imaginary_part: sci(q.imaginary_part),
            twelfth_power_error: sci(q.twelfth_power_error),
            generator: match q.generator {
                KernelGenerator::RealPeriod => "omega1/p".to_string(),
                KernelGenerator::Shifted(k) => format!("(omega2 + {k} omega1)/p"),
            },
        }
    }
}

#[derive(Serialize)]
pub struct PeriodsLine {
    pub label: String,
    pub p: u64,
    pub source: LatticeOut,
    pub target: LatticeOut,
    pub ratio: RatioOut,
    pub delta_tau: DeltaTauOut,
    pub eta_quotient: Option<EtaOut>,
}

//! The subcommands, written against generic readers and writers so tests can drive them.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use isolocal::isogeny::Isogeny;
use isolocal::localdata::{bad_primes, global_minimal_model, tate_local};
use isolocal::periods::{delta_tau_check, eta_quotient_check, period_ratio, MIN_PRECISION};
use isolocal::predict::{verify_at, verify_pair_at};
use isolocal::{Error, Rational};
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{parse_curve_input, parse_entry, read_lines, resolve, CorpusEntry, InputError, Resolved};
use crate::report::*;

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exit {
    Ok,
    /// A numerical check that did not converge.
    Precision,
    Mismatch,
    Input,
}

impl Exit {
    pub fn code(self) -> i32 {
        match self {
            Exit::Ok => 0,
            Exit::Mismatch => 1,
            Exit::Input => 2,
            Exit::Precision => 3,
        }
    }

    /// Input errors dominate mismatches, which dominate precision failures.
    fn worst(self, other: Exit) -> Exit {
        self.max(other)
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub precision: u32,
    pub terms: usize,
    /// Report only these primes.
    pub primes: Option<Vec<u64>>,
    pub jobs: Option<usize>,
    /// Leave out the period checks in `verify`.
    pub skip_periods: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { precision: 256, terms: 100, primes: None, jobs: None, skip_periods: false }
    }
}

fn line<T: Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("report types serialize")
}

fn keep(opts: &Options, l: u64) -> bool {
    opts.primes.as_ref().is_none_or(|ps| ps.contains(&l))
}

/// Runs `f` over `items` on the worker pool; results come back in input order.
fn parallel<T: Sync, R: Send>(opts: &Options, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = opts.jobs {
        builder = builder.num_threads(j.max(1));
    }
    match builder.build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

fn diag(err: &mut impl Write, msg: impl std::fmt::Display) {
    let _ = writeln!(err, "isolocal: {msg}");
}

/// Reads the input and parses every line with `parse`; any failure is exit 2.
fn parse_all<T>(
    input: impl BufRead,
    err: &mut impl Write,
    parse: impl Fn(usize, &str) -> Result<T, InputError>,
) -> Result<Vec<(usize, T)>, Exit> {
    let lines = read_lines(input).map_err(|e| {
        diag(err, &e);
        Exit::Input
    })?;
    let mut out = Vec::with_capacity(lines.len());
    let mut failed = false;
    for (n, text) in lines {
        match parse(n, &text) {
            Ok(x) => out.push((n, x)),
            Err(e) => {
                diag(err, &e);
                failed = true;
            }
        }
    }
    if failed {
        Err(Exit::Input)
    } else {
        Ok(out)
    }
}

pub fn analyze(input: impl BufRead, opts: &Options, out: &mut impl Write, err: &mut impl Write) -> Exit {
    let curves = match parse_all(input, err, parse_curve_input) {
        Ok(c) => c,
        Err(x) => return x,
    };
    let lines = parallel(opts, &curves, |(_, c)| {
        let e = &c.curve;
        let bad = match &c.primes {
            Some(p) => p.clone(),
            None => bad_primes(e),
        };
        let (min, _) = global_minimal_model(e, Some(&bad));
        let mut report_primes: Vec<u64> = match (&opts.primes, &c.primes) {
            (Some(p), _) => p.clone(),
            (None, Some(p)) => p.clone(),
            (None, None) => bad.clone(),
        };
        report_primes.sort_unstable();
        report_primes.dedup();
        let mut conductor = Rational::from_integer(1.into());
        for &l in &bad {
            let f = tate_local(e, l).conductor_exponent;
            conductor *= Rational::from_integer(num_traits::pow(num_bigint::BigInt::from(l), f as usize));
        }
        line(&AnalyzeLine {
            label: c.label.clone(),
            curve: curve_json(e),
            discriminant: rational_json(e.disc()),
            j: rational_json(e.j()),
            global_minimal_model: curve_json(&min),
            minimal_discriminant: rational_json(min.disc()),
            bad_primes: bad.clone(),
            conductor: rational_json(&conductor),
            primes: report_primes.iter().map(|&l| LocalLine::new(e, &tate_local(e, l))).collect(),
        })
    });
    for l in lines {
        let _ = writeln!(out, "{l}");
    }
    Exit::Ok
}

/// Everything `verify` produced for one corpus entry.
#[derive(Default)]
struct Outcome {
    lines: Vec<String>,
    diagnostics: Vec<String>,
    pairs: usize,
    prime_rows: usize,
    mismatched_pairs: usize,
    skipped: usize,
    rejected: usize,
    precision_failures: usize,
    rows: Vec<&'static str>,
}

fn pair_primes(entry: &CorpusEntry, phi: &Isogeny) -> Vec<u64> {
    let mut v = match &entry.bad_primes {
        Some(b) => b.clone(),
        None => {
            let mut v = bad_primes(phi.source());
            v.extend(bad_primes(phi.target()));
            v
        }
    };
    v.push(phi.degree());
    v.sort_unstable();
    v.dedup();
    v
}

fn verify_one(entry: &CorpusEntry, opts: &Options) -> Outcome {
    let mut o = Outcome::default();
    let resolved = match resolve(entry) {
        Ok(r) => r,
        Err(e) => {
            o.rejected = 1;
            o.diagnostics.push(format!("{}: rejected: {}", entry.label, e.message));
            return o;
        }
    };
    let phis = match resolved {
        Resolved::NoKernel => {
            o.skipped = 1;
            o.diagnostics.push(format!("{}: no rational kernel of degree {}, skipped", entry.label, entry.p));
            return o;
        }
        Resolved::WrongTarget { phi, claimed } => {
            o.pairs = 1;
            o.mismatched_pairs = 1;
            let mut primes = pair_primes(entry, &phi);
            primes.extend(bad_primes(&claimed));
            primes.sort_unstable();
            primes.dedup();
            let mut mism = vec!["isogeny".to_string()];
            for l in primes.into_iter().filter(|&l| keep(opts, l)) {
                match verify_at(&phi, l) {
                    Ok(r) => {
                        let pl = PrimeLine::against_claimed(&entry.label, &r, &claimed);
                        o.prime_rows += 1;
                        o.rows.push(pl.row);
                        mism.extend(pl.mismatches.iter().map(|m| format!("{m}@{l}")));
                        o.lines.push(line(&pl));
                    }
                    Err(e) => mism.push(format!("verify@{l}: {e}")),
                }
            }
            o.diagnostics.push(format!(
                "{}: curve_b is not the target of a rational {}-isogeny from curve_a",
                entry.label, entry.p
            ));
            o.lines.push(line(&PairLine {
                kind: "pair",
                label: entry.label.clone(),
                p: entry.p,
                source: curve_json(phi.source()),
                target: curve_json(&claimed),
                kernel: poly_json(phi.kernel_poly()),
                primes: Vec::new(),
                power: Power {
                    exponent: isolocal::isogeny::power_exponent(entry.p),
                    root: isolocal::isogeny::power_root(phi.source(), &claimed, entry.p).map(|r| rational_json(&r)),
                },
                periods: None,
                precision_failure: None,
                mismatches: mism,
                ok: false,
            }));
            return o;
        }
        Resolved::Pairs(p) => p,
    };
    let many = phis.len() > 1;
    for (i, phi) in phis.iter().enumerate() {
        let label = if many { format!("{}#{}", entry.label, i + 1) } else { entry.label.clone() };
        o.pairs += 1;
        let primes = pair_primes(entry, phi);
        let report = verify_pair_at(phi, &primes);
        let mut mism = Vec::new();
        let mut power = Power { exponent: isolocal::isogeny::power_exponent(phi.degree()), root: None };
        match report {
            Ok(r) => {
                power.root = r.power_root.as_ref().map(rational_json);
                if r.power_root.is_none() {
                    mism.push("power".to_string());
                }
                for pr in r.primes.iter().filter(|pr| keep(opts, pr.prime)) {
                    let pl = PrimeLine::from_report(&label, pr);
                    o.prime_rows += 1;
                    o.rows.push(pl.row);
                    mism.extend(pl.mismatches.iter().map(|m| format!("{m}@{}", pr.prime)));
                    o.lines.push(line(&pl));
                }
            }
            Err(e) => mism.push(format!("verify: {e}")),
        }
        let mut precision_failure = None;
        let periods = if opts.skip_periods {
            None
        } else {
            match period_ratio(phi, opts.precision) {
                Ok(r) => {
                    let c = PeriodCheck::new(&r, opts.precision);
                    if !c.ok {
                        mism.push("periods".to_string());
                    }
                    Some(c)
                }
                Err(e @ (Error::Tolerance { .. } | Error::PrecisionTooLow(_))) => {
                    o.precision_failures += 1;
                    o.diagnostics.push(format!("{label}: {e}"));
                    precision_failure = Some(e.to_string());
                    None
                }
                Err(e) => {
                    mism.push(format!("periods: {e}"));
                    None
                }
            }
        };
        if !mism.is_empty() {
            o.mismatched_pairs += 1;
            o.diagnostics.push(format!("{label}: mismatch in {}", mism.join(", ")));
        }
        o.lines.push(line(&PairLine {
            kind: "pair",
            label,
            p: phi.degree(),
            source: curve_json(phi.source()),
            target: curve_json(phi.target()),
            kernel: poly_json(phi.kernel_poly()),
            primes,
            power,
            periods,
            precision_failure,
            ok: mism.is_empty(),
            mismatches: mism,
        }));
    }
    o
}

fn precision_floor(opts: &Options, err: &mut impl Write) -> Result<(), Exit> {
    if opts.precision < MIN_PRECISION {
        diag(err, Error::PrecisionTooLow(opts.precision));
        return Err(Exit::Precision);
    }
    Ok(())
}

pub fn verify(input: impl BufRead, opts: &Options, out: &mut impl Write, err: &mut impl Write) -> Exit {
    if !opts.skip_periods {
        if let Err(x) = precision_floor(opts, err) {
            return x;
        }
    }
    let entries = match parse_all(input, err, parse_entry) {
        Ok(e) => e,
        Err(x) => return x,
    };
    let outcomes = parallel(opts, &entries, |(_, e)| verify_one(e, opts));
    let mut summary = Summary { kind: "summary", entries: entries.len(), ..Summary::default() };
    let mut rows: BTreeMap<&'static str, usize> = BTreeMap::new();
    for ((n, _), o) in entries.iter().zip(outcomes) {
        for l in &o.lines {
            let _ = writeln!(out, "{l}");
        }
        for d in &o.diagnostics {
            diag(err, format!("line {n}: {d}"));
        }
        summary.pairs += o.pairs;
        summary.prime_rows += o.prime_rows;
        summary.mismatched_pairs += o.mismatched_pairs;
        summary.skipped_no_kernel += o.skipped;
        summary.rejected += o.rejected;
        summary.precision_failures += o.precision_failures;
        for r in o.rows {
            *rows.entry(r).or_default() += 1;
        }
    }
    summary.rows = rows;
    let _ = writeln!(out, "{}", line(&summary));
    let mut exit = Exit::Ok;
    if summary.rejected > 0 {
        exit = exit.worst(Exit::Input);
    }
    if summary.mismatched_pairs > 0 {
        exit = exit.worst(Exit::Mismatch);
    }
    if summary.precision_failures > 0 {
        exit = exit.worst(Exit::Precision);
    }
    exit
}

fn periods_one(label: &str, phi: &Isogeny, opts: &Options) -> Result<PeriodsLine, Error> {
    let r = period_ratio(phi, opts.precision)?;
    let ds = delta_tau_check(&r.source.model, opts.terms, opts.precision)?;
    let dt = delta_tau_check(&r.target.model, opts.terms, opts.precision)?;
    let eta = if phi.degree() > 3 { Some(EtaOut::new(&eta_quotient_check(phi, opts.terms, opts.precision)?)) } else { None };
    Ok(PeriodsLine {
        label: label.to_string(),
        p: phi.degree(),
        source: LatticeOut::new(&r.source),
        target: LatticeOut::new(&r.target),
        ratio: RatioOut::new(&r),
        delta_tau: DeltaTauOut { terms: opts.terms, source_error: sci(ds), target_error: sci(dt) },
        eta_quotient: eta,
    })
}

pub fn periods(input: impl BufRead, opts: &Options, out: &mut impl Write, err: &mut impl Write) -> Exit {
    if let Err(x) = precision_floor(opts, err) {
        return x;
    }
    let entries = match parse_all(input, err, parse_entry) {
        Ok(e) => e,
        Err(x) => return x,
    };
    let results = parallel(opts, &entries, |(_, entry)| -> Vec<Result<String, (Exit, String)>> {
        match resolve(entry) {
            Err(e) => vec![Err((Exit::Input, format!("{}: rejected: {}", entry.label, e.message)))],
            Ok(Resolved::NoKernel) => vec![Err((Exit::Ok, format!("{}: no rational kernel, skipped", entry.label)))],
            Ok(Resolved::WrongTarget { .. }) => vec![Err((
                Exit::Input,
                format!("{}: curve_b is not the target of a rational {}-isogeny from curve_a", entry.label, entry.p),
            ))],
            Ok(Resolved::Pairs(phis)) => {
                let many = phis.len() > 1;
                phis.iter()
                    .enumerate()
                    .map(|(i, phi)| {
                        let label = if many { format!("{}#{}", entry.label, i + 1) } else { entry.label.clone() };
                        periods_one(&label, phi, opts).map(|l| line(&l)).map_err(|e| {
                            let x = match e {
                                Error::Tolerance { .. } | Error::PrecisionTooLow(_) => Exit::Precision,
                                _ => Exit::Mismatch,
                            };
                            (x, format!("{label}: {e}"))
                        })
                    })
                    .collect()
            }
        }
    });
    let mut exit = Exit::Ok;
    for ((n, _), rs) in entries.iter().zip(results) {
        for r in rs {
            match r {
                Ok(l) => {
                    let _ = writeln!(out, "{l}");
                }
                Err((x, msg)) => {
                    diag(err, format!("line {n}: {msg}"));
                    exit = exit.worst(x);
                }
            }
        }
    }
    exit
}

pub fn families(p: u64, count: usize, seed: u64, bound: i64, out: &mut impl Write, err: &mut impl Write) -> Exit {
    match crate::families::generate(p, count, seed, bound) {
        Ok(v) => {
            for e in v {
                let _ = writeln!(out, "{}", line(&e));
            }
            Exit::Ok
        }
        Err(e) => {
            diag(err, e);
            Exit::Input
        }
    }
}

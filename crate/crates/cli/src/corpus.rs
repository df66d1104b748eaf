//! Line-delimited JSON corpus files and their resolution into isogenies.

use std::fmt;
use std::io::BufRead;

use isolocal::arith::{is_prime_u64, QPoly};
use isolocal::curves::isomorphism;
use isolocal::isogeny::{kernel_polynomials, velu, Isogeny};
use isolocal::{Curve, Rational};
use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::Value;

/// One line of a corpus file.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub label: String,
    pub p: u64,
    pub curve_a: Vec<Value>,
    #[serde(default)]
    pub curve_b: Option<Vec<Value>>,
    /// Coefficients from the constant term up.
    #[serde(default)]
    pub kernel_poly: Option<Vec<Value>>,
    #[serde(default)]
    pub bad_primes: Option<Vec<u64>>,
}

/// A problem with the input, reported with exit code 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    /// 1-based line in the input, when known.
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl InputError {
    pub fn new(message: impl Into<String>) -> Self {
        InputError { line: None, column: None, message: message.into() }
    }

    fn at(mut self, line: usize) -> Self {
        self.line.get_or_insert(line);
        self
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column {c}: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

fn json_error(e: serde_json::Error, line: usize) -> InputError {
    InputError { line: Some(line), column: Some(e.column()), message: format!("malformed JSON: {e}") }
}

/// Non-blank lines of the input that are not `#` comments, with their line numbers.
pub fn read_lines(input: impl BufRead) -> Result<Vec<(usize, String)>, InputError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| InputError::new(format!("read failed: {e}")).at(i + 1))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push((i + 1, t.to_string()));
    }
    Ok(out)
}

pub fn parse_entry(line: usize, text: &str) -> Result<CorpusEntry, InputError> {
    serde_json::from_str(text).map_err(|e| json_error(e, line))
}

/// Parses one input line as a JSON value.
pub fn parse_value(line: usize, text: &str) -> Result<Value, InputError> {
    serde_json::from_str(text).map_err(|e| json_error(e, line))
}

/// An integer, or an integer or `num/den` fraction written as a string.
pub fn parse_rational(v: &Value) -> Result<Rational, InputError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else if let Some(u) = n.as_u64() {
                Ok(Rational::from_integer(u.into()))
            } else {
                Err(InputError::new(format!("{n} is not an integer (write large or fractional values as strings)")))
            }
        }
        Value::String(s) => {
            let bad = || InputError::new(format!("cannot parse {s:?} as a rational number"));
            let (num, den) = match s.split_once('/') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (s.trim(), "1"),
            };
            let num: BigInt = num.parse().map_err(|_| bad())?;
            let den: BigInt = den.parse().map_err(|_| bad())?;
            if den == BigInt::from(0) {
                return Err(bad());
            }
            Ok(Rational::new(num, den))
        }
        other => Err(InputError::new(format!("expected a number, found {other}"))),
    }
}

pub fn parse_curve(v: &[Value]) -> Result<Curve, InputError> {
    if v.len() != 5 {
        return Err(InputError::new(format!("a curve needs 5 coefficients [a1,a2,a3,a4,a6], found {}", v.len())));
    }
    let a: Vec<Rational> = v.iter().map(parse_rational).collect::<Result<_, _>>()?;
    let a: [Rational; 5] = a.try_into().expect("length checked");
    Curve::new(a).map_err(|e| InputError::new(format!("{e}")))
}

/// A curve given as `[a1,..,a6]`, `{"a": [...]}` or `{"curve": [...]}`, with an optional
/// `primes` list and `label`.
pub struct CurveInput {
    pub label: Option<String>,
    pub curve: Curve,
    pub primes: Option<Vec<u64>>,
}

pub fn parse_curve_input(line: usize, text: &str) -> Result<CurveInput, InputError> {
    let v = parse_value(line, text)?;
    let fail = |e: InputError| e.at(line);
    match &v {
        Value::Array(a) => Ok(CurveInput { label: None, curve: parse_curve(a).map_err(fail)?, primes: None }),
        Value::Object(o) => {
            let coeffs = o
                .get("a")
                .or_else(|| o.get("curve"))
                .and_then(Value::as_array)
                .ok_or_else(|| fail(InputError::new("expected an \"a\" or \"curve\" array")))?;
            let curve = parse_curve(coeffs).map_err(fail)?;
            let label = o.get("label").and_then(Value::as_str).map(str::to_string);
            let primes = match o.get("primes") {
                None | Some(Value::Null) => None,
                Some(p) => Some(
                    serde_json::from_value::<Vec<u64>>(p.clone())
                        .map_err(|e| fail(InputError::new(format!("bad primes list: {e}"))))?,
                ),
            };
            Ok(CurveInput { label, curve, primes })
        }
        other => Err(fail(InputError::new(format!("expected a curve, found {other}")))),
    }
}

/// What a corpus entry turned into.
pub enum Resolved {
    /// One isogeny per rational kernel (one when `curve_b` or `kernel_poly` pins it down),
    /// with its target equal to `curve_b` when that was given.
    Pairs(Vec<Isogeny>),
    /// `curve_b` is not the target of any rational `p`-isogeny from `curve_a`; `phi`
    /// is the first one that exists, for comparing predictions against the claimed curve.
    WrongTarget { phi: Isogeny, claimed: Curve },
    /// No `curve_b` and no rational kernel.
    NoKernel,
}

pub fn resolve(entry: &CorpusEntry) -> Result<Resolved, InputError> {
    if !is_prime_u64(entry.p) {
        return Err(InputError::new(format!("p = {} is not prime", entry.p)));
    }
    let e = parse_curve(&entry.curve_a).map_err(|e| InputError::new(format!("curve_a: {}", e.message)))?;
    let claimed = match &entry.curve_b {
        Some(b) => Some(parse_curve(b).map_err(|e| InputError::new(format!("curve_b: {}", e.message)))?),
        None => None,
    };
    let kernels = match &entry.kernel_poly {
        Some(k) => {
            let c: Vec<Rational> = k.iter().map(parse_rational).collect::<Result<_, _>>()?;
            let g = QPoly::new(c);
            let phi = velu(&e, &g).map_err(|err| InputError::new(format!("kernel_poly: {err}")))?;
            if phi.degree() != entry.p {
                return Err(InputError::new(format!("kernel_poly has degree {} but p = {}", phi.degree(), entry.p)));
            }
            vec![phi]
        }
        None => kernel_polynomials(&e, entry.p)
            .iter()
            .map(|g| velu(&e, g))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|err| InputError::new(format!("kernel search: {err}")))?,
    };
    let Some(claimed) = claimed else {
        return Ok(if kernels.is_empty() { Resolved::NoKernel } else { Resolved::Pairs(kernels) });
    };
    if kernels.is_empty() {
        return Err(InputError::new(format!("curve_a has no rational {}-isogeny, so curve_b cannot be its target", entry.p)));
    }
    for phi in &kernels {
        if let Some(m) = isomorphism(phi.target(), &claimed) {
            let phi = phi
                .transport(&isolocal::ModelMap::identity(), &m)
                .map_err(|err| InputError::new(format!("transport to curve_b: {err}")))?;
            return Ok(Resolved::Pairs(vec![phi]));
        }
    }
    Ok(Resolved::WrongTarget { phi: kernels.into_iter().next().expect("nonempty"), claimed })
}

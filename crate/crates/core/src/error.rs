use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A Hilbert symbol or valuation argument that must be nonzero was zero.
    ZeroInput,
    ZeroPolynomial,
    NotPrime(u64),
    SingularCurve,
    /// Model change with `u = 0`.
    ZeroScaling,
    NotSquarefree,
    /// Family parameters that make one of the curves singular.
    DegenerateParameters(&'static str),
    NotAKernel(String),
    NotIsogenous,
    WrongReductionClass(&'static str),
    InconsistentInputs(String),
    PrecisionTooLow(u32),
    /// A numerical check did not reach its tolerance even after raising the precision.
    Tolerance { check: &'static str, detail: String },
    /// Good supersingular reduction at `l = p` for a curve with a rational `p`-isogeny.
    SupersingularIsogeny(u64),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroInput => f.write_str("zero input"),
            Error::ZeroPolynomial => f.write_str("zero polynomial"),
            Error::NotPrime(n) => write!(f, "{n} is not prime"),
            Error::SingularCurve => f.write_str("singular curve (discriminant 0)"),
            Error::ZeroScaling => f.write_str("model map with u = 0"),
            Error::NotSquarefree => f.write_str("twist parameter is zero or not squarefree"),
            Error::DegenerateParameters(what) => write!(f, "degenerate family parameters: {what}"),
            Error::NotAKernel(why) => write!(f, "not a kernel polynomial: {why}"),
            Error::NotIsogenous => f.write_str("no rational isogeny between the given curves"),
            Error::WrongReductionClass(what) => write!(f, "wrong reduction class: {what}"),
            Error::InconsistentInputs(why) => write!(f, "inconsistent inputs: {why}"),
            Error::PrecisionTooLow(bits) => write!(f, "precision {bits} below the 64-bit floor"),
            Error::Tolerance { check, detail } => write!(f, "{check}: tolerance exceeded ({detail})"),
            Error::SupersingularIsogeny(l) => {
                write!(f, "good supersingular reduction at l = p = {l} on an isogenous pair")
            }
        }
    }
}

impl core::error::Error for Error {}

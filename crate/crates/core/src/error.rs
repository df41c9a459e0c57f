use thiserror::Error;

use crate::rational::Domain;

/// Errors raised by the analysis and design routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("transfer function denominator is the zero polynomial")]
    ZeroDenominator,

    #[error("roots are not closed under conjugation: {0}")]
    NonConjugateRoots(String),

    #[error("domain mismatch: expected {expected:?}, found {found:?}")]
    DomainMismatch { expected: Domain, found: Domain },

    #[error("transfer function is improper (numerator degree {num} > denominator degree {den})")]
    ImproperTf { num: usize, den: usize },

    #[error("transfer function has a polynomial direct part; impulse response is not a function")]
    NonStrictlyProper,

    #[error("frequency {omega} rad/s coincides with a pole")]
    PoleOnGrid { omega: f64 },

    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("leading feedback coefficient a[0] is zero")]
    ZeroLeadingFeedback,

    #[error("sequence of length {len} is too short (need more than {need} samples)")]
    SequenceTooShort { len: usize, need: usize },

    #[error("invalid sample range [{p}, {q}) for a sequence of length {len}")]
    BadRange { p: usize, q: usize, len: usize },

    #[error("error vanishes for step size {ts}; the rule is exact on this signal")]
    DegenerateSignal { ts: f64 },

    #[error("step sizes must be at least three successive halvings: {0}")]
    InvalidStepSizes(String),

    #[error("finite Z-transform of a multi-sample sequence is undefined at the origin")]
    OriginEvaluation,

    #[error("bin {k0} is outside (0, {half}) for N = {n}")]
    BadBin { k0: usize, n: usize, half: usize },

    #[error("mode {s} aliases: |Im(s)|*Ts = {product} >= pi")]
    NyquistViolation { s: String, product: f64 },

    #[error("logarithm of zero")]
    ZeroArgument,

    #[error("pole {0} must lie in the open interval (0, 1)")]
    BadPole(f64),

    #[error("parameter {0} must lie in [0, 1]")]
    BadParameter(f64),

    #[error("block graph contains a loop without a unit delay")]
    DelayFreeLoop,

    #[error("block graph cannot be reduced to a causal recurrence: {0}")]
    UnsupportedTopology(String),

    #[error("invalid block graph: {0}")]
    InvalidGraph(String),

    #[error("netlist line {line}: {msg}")]
    Netlist { line: usize, msg: String },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("empty {0}")]
    Empty(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Error types shared across the crate.

use thiserror::Error;

/// Errors from exact q-expansion arithmetic.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QSeriesError {
    #[error("division by the zero series")]
    DivisionByZero,
    #[error("non-integer power of a series whose normalized leading coefficient is {0}, not 1")]
    NonUnitLeading(String),
    #[error("operands have leading exponents differing by the non-integer {0}")]
    IncompatibleLeading(String),
    #[error("operands carry different powers of pi ({0} vs {1})")]
    PiPowerMismatch(i64, i64),
    #[error("non-integer power of a series carrying pi^{0}")]
    PiPowerFractional(i64),
    #[error("tail integral requires a strictly positive leading exponent, got {0}")]
    NonpositiveLeadingExponent(String),
    #[error("parity split requires an integer leading exponent, got {0}")]
    NonIntegerLeading(String),
    #[error("cannot parse {0:?} as a rational p/q")]
    ParseRational(String),
    #[error("cannot parse series: {0}")]
    ParseSeries(String),
    #[error("order must be at least {0}")]
    OrderTooSmall(usize),
}

/// Errors from numerical evaluation in the upper half-plane.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("tau must satisfy Im(tau) > 0, got Im = {0}")]
    NotUpperHalfPlane(f64),
    #[error("|q-hat| = {0} is outside the evaluation domain (must be < 0.9); reduce the domain first")]
    NomeTooLarge(f64),
    #[error("off-axis tau with Im(tau) = {0} < 1 is outside the reduction policy")]
    OffAxisBelowUnitHeight(f64),
    #[error("trailing-coefficient ratio estimate does not converge at this nome")]
    TailNotConvergent,
    #[error(transparent)]
    Series(#[from] QSeriesError),
}

/// Errors from crossing-probability computations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CrossingError {
    #[error("aspect ratio r must be positive, got {0}")]
    NonpositiveAspect(f64),
    #[error("hypergeometric series did not converge (x = {x}, {terms} terms)")]
    HypNonConvergence { x: f64, terms: usize },
    #[error("hypergeometric argument x = {0} outside [0, 1)")]
    HypDomain(f64),
    #[error("lower parameter {0} is a nonpositive integer")]
    HypPole(f64),
    #[error("singular integral requires gamma > 0, got {0}")]
    DivergentIntegral(f64),
    #[error("integration bounds must satisfy 0 <= lo < hi <= 1, got [{0}, {1}]")]
    BadBounds(f64, f64),
    #[error("alpha must lie in (0, 1/2], got {0}")]
    AlphaOutOfRange(f64),
    #[error("kappa must lie in (4, 8], got {0}")]
    KappaOutOfRange(f64),
    #[error("lambda must lie in (0, 1], got {0}")]
    LambdaOutOfRange(f64),
    #[error("beta must lie in (0, 1] with beta != alpha, got beta = {0}")]
    BetaOutOfRange(f64),
    #[error("beta - alpha = {0} hits a gamma-function pole")]
    GammaPole(f64),
    #[error("quantity requires beta > alpha, got alpha = {0}, beta = {1}")]
    RequiresBetaAboveAlpha(f64, f64),
    #[error("lambda = {0} too close to a singular endpoint for finite differences")]
    LambdaNearEndpoint(f64),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Series(#[from] QSeriesError),
}

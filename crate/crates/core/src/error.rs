use thiserror::Error;

/// Errors raised by the numerical and exact routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of {function} at {arg}")]
    Pole { function: &'static str, arg: String },

    #[error("hypergeometric argument z = {z} cannot be mapped into the convergence disk")]
    NonConvergence { z: f64 },

    #[error("overflow in {0}")]
    Overflow(&'static str),

    #[error("character is not primitive modulo {modulus}")]
    NonPrimitive { modulus: u64 },

    #[error("abscissa {sigma} outside the holomorphy strip ({lo}, {hi})")]
    StripViolation { sigma: f64, lo: f64, hi: f64 },

    #[error("pole of the integrand on the circle |X| = {radius}")]
    PoleOnContour { radius: f64 },

    #[error("conductor exponent {exponent} exceeds the configured cap {cap}")]
    Ramification { exponent: u32, cap: u32 },

    #[error("support straddles the case boundaries 0 and 1")]
    MixedSupport,

    #[error("missing data: {0}")]
    MissingData(String),

    #[error("coefficients needed up to {needed}, only {available} available")]
    InsufficientCoefficients { needed: usize, available: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use alloc::string::String;

/// Errors raised by the numerical core.
///
/// Variants are grouped by the module that raises them; every message is
/// prefixed with that module so that the CLI can surface it unchanged.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("input: {0}")]
    InvalidInput(String),

    #[error("gw_model: inconsistent curve data: {0}")]
    InconsistentModel(String),

    #[error("linalg: {what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("{what}: overflow, exponent {exponent} leaves the double range")]
    Overflow { what: &'static str, exponent: f64 },

    #[error("{what}: argument outside the domain: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("ode: step size underflow, last good t = {t}")]
    StepUnderflow { t: f64 },

    #[error("qde: growth rate undefined (all samples vanish)")]
    UndefinedRate,

    #[error("stab_p1: branch tracking failed near x = {re}{im:+}i, refine the grid")]
    BranchTracking { re: f64, im: f64 },

    #[error("stab_p1: path never enters the eventual regime")]
    NoEventualRegime,

    #[error("stab_p1: exponent mismatch for {label}: measured {measured}, expected {expected}")]
    ExponentMismatch {
        label: String,
        measured: String,
        expected: String,
    },

    #[error("curves: {0}")]
    SingularPath(String),

    #[error("sod: {label} is not eventually nonzero on the tail")]
    NotEventuallyNonzero { label: String },

    #[error("sod: genericity violation between {first} and {second} (equal imaginary parts, distinct exponents)")]
    Genericity { first: String, second: String },

    #[error("sod: lattice summands are not a direct sum: {0}")]
    NotDirectSum(String),

    #[error("mutation: {0}")]
    Unsupported(String),

    #[error("mutation: pairing data inconsistent: {0}")]
    PairingInconsistent(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;

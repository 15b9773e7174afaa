use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("angular momentum l = {l} exceeds supported maximum {max}")]
    UnsupportedOrder { l: u32, max: u32 },

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("degenerate wave number k = {k} (k = 0, Q = 0 or singular matching system)")]
    DegenerateWavenumber { k: Complex64 },

    #[error("Newton iteration from seed {seed} did not converge after {iterations} iterations (last iterate {last}, |f| = {residual:e})")]
    Divergence {
        seed: Complex64,
        last: Complex64,
        iterations: usize,
        residual: f64,
    },

    #[error("contour passes too close to a zero (min |f| = {min_modulus:e} < {threshold:e})")]
    UnreliableContour { min_modulus: f64, threshold: f64 },

    #[error("evaluation at a pole: k = {k}")]
    PoleEvaluation { k: Complex64 },

    #[error("pole at {k} looks non-simple: analytic and contour residues differ by {mismatch:e} (relative)")]
    SuspiciousPole { k: Complex64, mismatch: f64 },

    #[error("incomplete pole search: Newton found {found} poles, argument principle counts {expected}")]
    IncompleteSearch { found: usize, expected: usize },

    #[error("pole {k} failed {method} certification: residual {residual:e}")]
    Certification {
        k: Complex64,
        method: &'static str,
        residual: f64,
    },

    #[error("mirror pole -conj(k) = {k} is not a zero of F_l2 (|F_l2| = {residual:e})")]
    SymmetryViolation { k: Complex64, residual: f64 },

    #[error("pole-finding routes disagree: max distance {distance:e} exceeds {tolerance:e}")]
    Disagreement { distance: f64, tolerance: f64 },

    #[error("invalid barrier specification: {0}")]
    InvalidSpec(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

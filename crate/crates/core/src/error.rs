use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series did not converge within {max_terms} terms (|z| = {z_abs:.6e})")]
    NonConvergence { max_terms: usize, z_abs: f64 },

    #[error("floating-point overflow in {context}")]
    Overflow { context: &'static str },

    #[error("argument outside the validity region of {method}: |z| = {z_abs:.6e}, limit {limit:.6e}")]
    RegionViolation {
        method: &'static str,
        z_abs: f64,
        limit: f64,
    },

    #[error("evaluation methods disagree at a region boundary: relative gap {gap:.3e}")]
    AccuracyLoss { gap: f64 },

    #[error("symbol is not tempered: gamma = {gamma} < alpha = {alpha} (pass the override to force)")]
    NotTempered { alpha: f64, gamma: f64 },

    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: String },

    #[error("dyadic band N = {n_band:.6e} not resolvable on this grid (need {need})")]
    BandUnresolvable { n_band: f64, need: String },

    #[error("besov truncation tail {tail:.3e} exceeds 1% of the dyadic sum {sum:.3e}")]
    TailDominates { tail: f64, sum: f64 },

    #[error("not enough samples in the fit window: have {have}, need {need}")]
    InsufficientData { have: usize, need: usize },

    #[error("quadrature unstable: node doubling changed the result by {change:.3e} (relative)")]
    QuadratureUnstable { change: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Periodic pseudospectral fields and multiplier propagators.

mod datum;
mod dispersion;
mod dump;
mod fft;
mod field;
mod grid;
mod propagate;

pub use datum::{annulus_wave, bump, gaussian, Datum};
pub use dispersion::Dispersion;
pub use dump::{read_field, write_field};
pub use field::{inverse_transform, transform, Domain, Field};
pub use grid::Grid;
pub use propagate::{
    apply_residual, propagate_halfwave, propagate_ml, propagate_unitary, residual_multiplier,
};

use crate::error::{Error, Result};

/// Orders `(alpha, beta, gamma)` of the space-time fractional symbol
/// `E_alpha(i^{-gamma} t^alpha |xi|^beta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolSpec {
    alpha: f64,
    beta: f64,
    gamma: f64,
    allow_nontempered: bool,
}

impl SymbolSpec {
    /// Rejects non-tempered parameter sets (`gamma < alpha`); use
    /// [`SymbolSpec::new_with_override`] to force those through.
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Self::new_with_override(alpha, beta, gamma, false)
    }

    pub fn new_with_override(
        alpha: f64,
        beta: f64,
        gamma: f64,
        allow_nontempered: bool,
    ) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1], got {alpha}"
            )));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "beta must be positive, got {beta}"
            )));
        }
        if !(0.0..=1.0 + 1e-12).contains(&gamma) {
            return Err(Error::InvalidParameter(format!(
                "gamma must lie in [0, 1], got {gamma}"
            )));
        }
        let spec = Self {
            alpha,
            beta,
            gamma,
            allow_nontempered,
        };
        if !allow_nontempered {
            spec.check_tempered()?;
        }
        Ok(spec)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The kernel is a tempered distribution iff `gamma >= alpha`.
    pub fn is_tempered(&self) -> bool {
        self.gamma >= self.alpha - 1e-12
    }

    pub fn check_tempered(&self) -> Result<()> {
        if self.is_tempered() || self.allow_nontempered {
            Ok(())
        } else {
            Err(Error::NotTempered {
                alpha: self.alpha,
                gamma: self.gamma,
            })
        }
    }

    /// `alpha = gamma`: the oscillatory-phase regime of the two-term
    /// frequency-localized envelope.
    pub fn is_matched_phase(&self) -> bool {
        (self.alpha - self.gamma).abs() < 1e-12
    }

    /// The `alpha = beta = gamma` regime of the half-wave decomposition.
    pub fn is_matched_orders(&self) -> bool {
        (self.alpha - self.beta).abs() < 1e-12 && (self.alpha - self.gamma).abs() < 1e-12
    }
}

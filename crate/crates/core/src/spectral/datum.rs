use num_complex::Complex64;

use super::field::Field;
use super::grid::Grid;
use crate::error::{Error, Result};

/// `exp(-|x|^2/2)`.
pub fn gaussian(grid: Grid) -> Field {
    Field::from_fn(grid, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        Complex64::new((-r2 / 2.0).exp(), 0.0)
    })
}

/// Compactly supported bump `exp(-1/(1-|x|^2))` on `|x| < 1`.
pub fn bump(grid: Grid) -> Field {
    Field::from_fn(grid, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        if r2 < 1.0 {
            Complex64::new((-1.0 / (1.0 - r2)).exp(), 0.0)
        } else {
            Complex64::default()
        }
    })
}

/// `(sin 2x - sin x)/x`, whose transform is `pi` on the annulus
/// `1 < |xi| < 2` and zero otherwise. One-dimensional.
pub fn annulus_wave(grid: Grid) -> Result<Field> {
    if grid.dim() != 1 {
        return Err(Error::InvalidParameter(
            "annulus_wave datum is one-dimensional".into(),
        ));
    }
    Ok(Field::from_fn(grid, |x| {
        let x = x[0];
        let v = if x.abs() < 1e-12 {
            1.0
        } else {
            ((2.0 * x).sin() - x.sin()) / x
        };
        Complex64::new(v, 0.0)
    }))
}

/// Named initial-data presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Datum {
    Gaussian,
    Bump,
    AnnulusWave,
}

impl Datum {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" => Ok(Datum::Gaussian),
            "bump" => Ok(Datum::Bump),
            "annulus_wave" | "annulus-wave" => Ok(Datum::AnnulusWave),
            other => Err(Error::InvalidParameter(format!(
                "unknown datum preset '{other}' (expected gaussian, bump, annulus_wave)"
            ))),
        }
    }

    pub fn realize(self, grid: Grid) -> Result<Field> {
        match self {
            Datum::Gaussian => Ok(gaussian(grid)),
            Datum::Bump => Ok(bump(grid)),
            Datum::AnnulusWave => annulus_wave(grid),
        }
    }

    /// Nominal support radius used by the periodic-truncation heuristic.
    pub fn support_radius(self) -> f64 {
        match self {
            // e^{-r^2/2} < 1e-22 beyond r = 10
            Datum::Gaussian => 10.0,
            Datum::Bump => 1.0,
            // 1/x tails; the heuristic treats the O(1) core
            Datum::AnnulusWave => 10.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Datum::Gaussian => "gaussian",
            Datum::Bump => "bump",
            Datum::AnnulusWave => "annulus_wave",
        }
    }
}

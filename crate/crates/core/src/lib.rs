//! Mittag-Leffler propagators for the generalized space-time fractional
//! Schroedinger equation `i^gamma d_t^alpha u = (-Delta)^{beta/2} u`, with
//! spectral evolution on periodic grids and the diagnostics needed to probe
//! dispersive decay, half-wave approximation and infinite speed of
//! propagation at desk scale.
//!
//! Modules:
//!
//! * [`mlf`] — region-switched evaluation of `E_{alpha,beta}(z)` for
//!   complex arguments (series / inverse-Laplace contour / asymptotics).
//! * [`spectral`] — grids, fields, FFT transforms under the continuum
//!   convention, multiplier propagators, field dumps, named data presets.
//! * [`lpbesov`] — Littlewood-Paley projections, Besov norms,
//!   frequency-localized kernel sups.
//! * [`analysis`] — decay scans, slope fits, operator norms,
//!   envelope sweeps, CSV/JSON emission.
//! * [`fbi`] — FBI-transform real-analyticity probe.

pub mod analysis;
pub mod error;
pub mod fbi;
pub mod lpbesov;
pub mod mlf;
pub mod spectral;

pub use error::{Error, Result};
pub use spectral::{Dispersion, Domain, Field, Grid, SymbolSpec};

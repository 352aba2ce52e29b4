use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::HashMap;
use std::f64::consts::PI;

use super::dispersion::Dispersion;
use super::field::{inverse_transform, transform, Domain, Field};
use super::SymbolSpec;
use crate::error::{Error, Result};
use crate::mlf::{ml_eval, MlParams};

/// Apply a frequency multiplier to a space-domain field:
/// `F^{-1}[ mult(xi) F[phi] ]`.
fn apply_multiplier(
    phi: &Field,
    mult: impl Fn(usize) -> Result<Complex64> + Sync,
) -> Result<Field> {
    if phi.domain() != Domain::Space {
        return Err(Error::ShapeMismatch {
            context: "propagation expects a space-domain field".into(),
        });
    }
    let mut fh = transform(phi)?;
    let values: Vec<Result<Complex64>> = (0..fh.samples().len())
        .into_par_iter()
        .map(&mult)
        .collect();
    let mut mult_vals = Vec::with_capacity(values.len());
    for v in values {
        mult_vals.push(v?);
    }
    fh.samples_mut()
        .par_iter_mut()
        .zip(mult_vals.par_iter())
        .for_each(|(s, m)| *s *= m);
    inverse_transform(&fh)
}

/// Evaluate a radial symbol once per distinct `|xi|` and scatter back.
fn radial_multiplier(
    phi: &Field,
    symbol: impl Fn(f64) -> Result<Complex64> + Sync,
) -> Result<Field> {
    let grid = phi.grid();
    let total = grid.total_points();
    let radii: Vec<f64> = (0..total).map(|flat| grid.xi_radius(flat)).collect();
    let mut slot_of: HashMap<u64, usize> = HashMap::new();
    let mut unique: Vec<f64> = Vec::new();
    let mut slots: Vec<usize> = Vec::with_capacity(total);
    for &r in &radii {
        let key = r.to_bits();
        let slot = *slot_of.entry(key).or_insert_with(|| {
            unique.push(r);
            unique.len() - 1
        });
        slots.push(slot);
    }
    let evals: Vec<Result<Complex64>> = unique.par_iter().map(|&r| symbol(r)).collect();
    let mut table = Vec::with_capacity(evals.len());
    for v in evals {
        table.push(v?);
    }
    apply_multiplier(phi, |flat| Ok(table[slots[flat]]))
}

/// Mittag-Leffler flow: `F^{-1}[E_alpha(i^{-gamma} t^alpha |xi|^beta) F[phi]]`.
///
/// Returns `phi` unchanged at `t = 0`.
pub fn propagate_ml(phi: &Field, spec: &SymbolSpec, t: f64) -> Result<Field> {
    if t < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "propagation time must be nonnegative, got {t}"
        )));
    }
    spec.check_tempered()?;
    if t == 0.0 {
        return Ok(phi.clone());
    }
    let params = MlParams::one_parameter(spec.alpha())?;
    let (alpha, beta, gamma) = (spec.alpha(), spec.beta(), spec.gamma());
    let ta = t.powf(alpha);
    radial_multiplier(phi, move |r| {
        if r == 0.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let z = Complex64::from_polar(ta * r.powf(beta), -PI * gamma / 2.0);
        ml_eval(params, z)
    })
}

/// Half-wave flow `e^{-i t |xi|}`; unitary on the grid.
pub fn propagate_halfwave(phi: &Field, t: f64) -> Result<Field> {
    if t < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "propagation time must be nonnegative, got {t}"
        )));
    }
    radial_multiplier(phi, move |r| Ok(Complex64::from_polar(1.0, -t * r)))
}

/// Unitary flow `e^{-i t w(xi)}` for a real dispersion relation.
pub fn propagate_unitary(phi: &Field, w: &Dispersion, t: f64) -> Result<Field> {
    let wvals = w.eval_grid(phi.grid())?;
    apply_multiplier(phi, |flat| Ok(Complex64::from_polar(1.0, -t * wvals[flat])))
}

/// Residual multiplier of the half-wave split in the `alpha = beta = gamma`
/// regime: `m_{t,alpha}(xi) = E_alpha(i^{-alpha}(t|xi|)^alpha) - e^{-it|xi|}/alpha`.
///
/// At `xi = 0` this is `1 - 1/alpha`.
pub fn residual_multiplier(alpha: f64, t: f64, xi_mag: f64) -> Result<Complex64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "residual multiplier needs alpha in (0,1), got {alpha}"
        )));
    }
    if t < 0.0 || xi_mag < 0.0 {
        return Err(Error::InvalidParameter(
            "residual multiplier needs t >= 0 and |xi| >= 0".into(),
        ));
    }
    let params = MlParams::one_parameter(alpha)?;
    let w = t * xi_mag;
    let z = Complex64::from_polar(w.powf(alpha), -PI * alpha / 2.0);
    let e = ml_eval(params, z)?;
    Ok(e - Complex64::from_polar(1.0 / alpha, -w))
}

/// Apply the residual operator `E_alpha(t) phi = R_{t,alpha} * phi`.
pub fn apply_residual(phi: &Field, alpha: f64, t: f64) -> Result<Field> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "residual operator needs alpha in (0,1), got {alpha}"
        )));
    }
    radial_multiplier(phi, move |r| residual_multiplier(alpha, t, r))
}

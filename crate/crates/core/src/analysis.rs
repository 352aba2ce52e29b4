//! Experiment harness: decay scans, power-law fits, operator-norm and
//! strong-convergence checks, tail-mass probes and dispersive-envelope
//! sweeps. All scans are deterministic: cells are computed independently
//! and assembled in index order.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lpbesov::{band_kernel_sup, DyadicBand};
use crate::spectral::{
    apply_residual, propagate_ml, residual_multiplier, Field, Grid, SymbolSpec,
};

/// Observable recorded by a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Observable {
    LinfU,
    LinfUSquared,
    L2Residual,
    TailMass { radius: f64 },
    BandSup { j: i32 },
}

impl Observable {
    pub fn label(&self) -> &'static str {
        match self {
            Observable::LinfU => "linf_u",
            Observable::LinfUSquared => "linf_u_squared",
            Observable::L2Residual => "l2_residual",
            Observable::TailMass { .. } => "tail_mass",
            Observable::BandSup { .. } => "band_sup",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linf_u" => Ok(Observable::LinfU),
            "linf_u_squared" | "linf_u_sq" => Ok(Observable::LinfUSquared),
            other => {
                if let Some(rest) = other.strip_prefix("tail_mass:") {
                    let radius: f64 = rest.parse().map_err(|_| {
                        Error::InvalidParameter(format!("bad tail_mass radius '{rest}'"))
                    })?;
                    return Ok(Observable::TailMass { radius });
                }
                Err(Error::InvalidParameter(format!(
                    "unknown observable '{other}' (expected linf_u, linf_u_squared, tail_mass:R)"
                )))
            }
        }
    }
}

/// Propagator and grid parameters stamped into every output row.
#[derive(Debug, Clone, Serialize)]
pub struct ScanContext {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub dim: usize,
    pub n: usize,
    pub l: f64,
}

impl ScanContext {
    pub fn from_parts(spec: &SymbolSpec, grid: &Grid) -> Self {
        Self {
            alpha: spec.alpha(),
            beta: spec.beta(),
            gamma: spec.gamma(),
            dim: grid.dim(),
            n: grid.points(0),
            l: grid.extent(0),
        }
    }
}

/// Time-indexed observable values.
#[derive(Debug, Clone)]
pub struct DecaySeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub observable: Observable,
    pub fingerprint: String,
    pub context: ScanContext,
    pub truncation_risk: bool,
}

/// Least-squares power-law fit in log-log coordinates.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
    pub window: (f64, f64),
}

/// Box-size heuristic for periodic truncation:
/// `L >= 4 (support_radius + t_max^{max(alpha/beta, 1)} + 10)`.
pub fn required_extent(support_radius: f64, t_max: f64, alpha: f64, beta: f64) -> f64 {
    let p = (alpha / beta).max(1.0);
    4.0 * (support_radius + t_max.powf(p) + 10.0)
}

fn validate_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidParameter("empty time list".into()));
    }
    for w in times.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidParameter(
                "times must be strictly increasing".into(),
            ));
        }
    }
    if times[0] < 0.0 {
        return Err(Error::InvalidParameter("times must be nonnegative".into()));
    }
    Ok(())
}

/// Relative L2 mass in the outer 10% shell of the box; a proxy for
/// wrap-around contamination.
fn outer_shell_mass(u: &Field) -> f64 {
    let grid = u.grid();
    let cut = 0.45 * grid.min_extent();
    let mut outer = 0.0;
    let mut total = 0.0;
    for (flat, v) in u.samples().iter().enumerate() {
        let m = v.norm_sqr();
        total += m;
        if grid.x_radius(flat) > cut {
            outer += m;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        outer / total
    }
}

/// Propagate `phi` to every `t` and record the observable.
///
/// Emits a `TruncationRisk` warning (log + flag) when the outer-shell mass
/// at the final time exceeds 1e-6.
pub fn decay_scan(
    phi: &Field,
    spec: &SymbolSpec,
    times: &[f64],
    observable: Observable,
    fingerprint: &str,
) -> Result<DecaySeries> {
    validate_times(times)?;
    if matches!(
        observable,
        Observable::L2Residual | Observable::BandSup { .. }
    ) {
        return Err(Error::InvalidParameter(format!(
            "observable {} is produced by a dedicated scan",
            observable.label()
        )));
    }
    let computed: Vec<Result<(f64, f64)>> = times
        .par_iter()
        .map(|&t| {
            let u = propagate_ml(phi, spec, t)?;
            let value = match observable {
                Observable::LinfU => u.linf_norm(),
                Observable::LinfUSquared => {
                    let v = u.linf_norm();
                    v * v
                }
                Observable::TailMass { radius } => tail_mass(&u, radius)?,
                _ => unreachable!(),
            };
            let shell = if t == *times.last().unwrap() {
                outer_shell_mass(&u)
            } else {
                0.0
            };
            Ok((value, shell))
        })
        .collect();
    let mut values = Vec::with_capacity(times.len());
    let mut shell_at_tmax = 0.0f64;
    for c in computed {
        let (v, shell) = c?;
        values.push(v);
        shell_at_tmax = shell_at_tmax.max(shell);
    }
    let truncation_risk = shell_at_tmax > 1e-6;
    if truncation_risk {
        log::warn!(
            "decay scan wrap-around tail {shell_at_tmax:.3e} at t = {} exceeds 1e-6",
            times.last().unwrap()
        );
    }
    Ok(DecaySeries {
        times: times.to_vec(),
        values,
        observable,
        fingerprint: fingerprint.to_string(),
        context: ScanContext::from_parts(spec, phi.grid()),
        truncation_risk,
    })
}

/// Ordinary least squares of `ln(value)` against `ln(t)` inside the window.
pub fn fit_slope(series: &DecaySeries, window: (f64, f64)) -> Result<FitResult> {
    let pts: Vec<(f64, f64)> = series
        .times
        .iter()
        .zip(&series.values)
        .filter(|(t, v)| **t >= window.0 && **t <= window.1 && **v > 0.0)
        .map(|(t, v)| (t.ln(), v.ln()))
        .collect();
    if pts.len() < 8 {
        return Err(Error::InsufficientData {
            have: pts.len(),
            need: 8,
        });
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return Err(Error::InsufficientData {
            have: pts.len(),
            need: 8,
        });
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let rms = (pts
        .iter()
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(FitResult {
        slope,
        intercept,
        rms_residual: rms,
        window,
    })
}

/// Sup over a radial frequency sample (log-spaced, refined toward zero) of
/// the residual multiplier modulus `|m_{t,alpha}|`. Equals `(1-alpha)/alpha`
/// at `xi = 0`.
pub fn residual_operator_norm(alpha: f64, t: f64) -> Result<f64> {
    let mut xis = vec![0.0];
    let lo: f64 = 1e-8;
    let hi: f64 = 1e6;
    let count = 600;
    for i in 0..=count {
        xis.push(lo * (hi / lo).powf(i as f64 / count as f64));
    }
    let vals: Vec<Result<f64>> = xis
        .par_iter()
        .map(|&xi| Ok(residual_multiplier(alpha, t, xi)?.norm()))
        .collect();
    let mut best = 0.0f64;
    for v in vals {
        best = best.max(v?);
    }
    Ok(best)
}

/// Record `||R_{t,alpha} * phi||_2` for each `t` (strong-convergence probe).
pub fn strong_convergence_scan(
    phi: &Field,
    alpha: f64,
    times: &[f64],
    fingerprint: &str,
) -> Result<DecaySeries> {
    validate_times(times)?;
    let computed: Vec<Result<f64>> = times
        .par_iter()
        .map(|&t| Ok(apply_residual(phi, alpha, t)?.l2_norm()))
        .collect();
    let mut values = Vec::with_capacity(times.len());
    for c in computed {
        values.push(c?);
    }
    let spec = SymbolSpec::new(alpha, alpha, alpha)?;
    Ok(DecaySeries {
        times: times.to_vec(),
        values,
        observable: Observable::L2Residual,
        fingerprint: fingerprint.to_string(),
        context: ScanContext::from_parts(&spec, phi.grid()),
        truncation_risk: false,
    })
}

/// Relative L2 mass of `u` outside the ball `|x| > radius`.
pub fn tail_mass(u: &Field, radius: f64) -> Result<f64> {
    let grid = u.grid();
    if !(radius >= 0.0) || radius >= grid.min_extent() / 2.0 {
        return Err(Error::InvalidParameter(format!(
            "tail radius must lie in [0, L/2), got {radius}"
        )));
    }
    let mut outer = 0.0;
    let mut total = 0.0;
    for (flat, v) in u.samples().iter().enumerate() {
        let m = v.norm_sqr();
        total += m;
        if grid.x_radius(flat) > radius {
            outer += m;
        }
    }
    if total == 0.0 {
        return Err(Error::InvalidParameter(
            "tail mass of an identically zero field".into(),
        ));
    }
    Ok(outer / total)
}

/// Frequency-localized dispersive envelope for the sharp estimates:
/// `N^d (1/(1+t^a N^b) + 1/(1+t^{d/2} N^{d b/(2a)}))` when
/// `alpha = gamma`, and `N^d/(1+t^a N^b)` when `alpha < gamma`.
pub fn envelope_value(spec: &SymbolSpec, dim: usize, n_band: f64, t: f64) -> f64 {
    let (a, b) = (spec.alpha(), spec.beta());
    let d = dim as f64;
    let nd = n_band.powf(d);
    let first = 1.0 / (1.0 + t.powf(a) * n_band.powf(b));
    if spec.is_matched_phase() {
        let second = 1.0 / (1.0 + t.powf(d / 2.0) * n_band.powf(d * b / (2.0 * a)));
        nd * (first + second)
    } else {
        nd * first
    }
}

/// One cell of an envelope sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnvelopeRow {
    pub n_band: f64,
    pub t: f64,
    pub band_sup: f64,
    pub envelope: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeSummary {
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub spread: f64,
}

#[derive(Debug, Clone)]
pub struct EnvelopeSweep {
    pub rows: Vec<EnvelopeRow>,
    pub summary: EnvelopeSummary,
    pub fingerprint: String,
    pub context: ScanContext,
}

/// Ratio `||P_N K_t||_inf / envelope(N, t)` over a band/time lattice.
pub fn envelope_sweep(
    spec: &SymbolSpec,
    bands: &[i32],
    times: &[f64],
    grid: &Grid,
    fingerprint: &str,
) -> Result<EnvelopeSweep> {
    validate_times(times)?;
    if bands.is_empty() {
        return Err(Error::InvalidParameter("empty band list".into()));
    }
    if !(spec.is_matched_phase() || spec.gamma() > spec.alpha()) {
        return Err(Error::InvalidParameter(
            "envelope sweep needs alpha = gamma or alpha < gamma <= 1".into(),
        ));
    }
    let mut cells: Vec<(i32, f64)> = Vec::new();
    for &j in bands {
        for &t in times {
            cells.push((j, t));
        }
    }
    let rows: Vec<Result<EnvelopeRow>> = cells
        .par_iter()
        .map(|&(j, t)| {
            let band = DyadicBand::new(j);
            let sup = band_kernel_sup(spec, t, band, grid)?;
            let env = envelope_value(spec, grid.dim(), band.n_band(), t);
            Ok(EnvelopeRow {
                n_band: band.n_band(),
                t,
                band_sup: sup,
                envelope: env,
                ratio: sup / env,
            })
        })
        .collect();
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        out.push(r?);
    }
    let ratio_min = out.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let ratio_max = out.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(EnvelopeSweep {
        rows: out,
        summary: EnvelopeSummary {
            ratio_min,
            ratio_max,
            spread: ratio_max / ratio_min,
        },
        fingerprint: fingerprint.to_string(),
        context: ScanContext::from_parts(spec, grid),
    })
}

// ---------------------------------------------------------------------------
// plot-ready output
// ---------------------------------------------------------------------------

/// CSV for one or more decay series sharing a fingerprint:
/// `t,value,observable,alpha,beta,gamma,d,n,L`, rows sorted by
/// (observable label, t).
pub fn decay_csv(series: &[&DecaySeries]) -> String {
    let mut out = String::new();
    if let Some(first) = series.first() {
        out.push_str(&format!("# fingerprint={}\n", first.fingerprint));
    }
    out.push_str("t,value,observable,alpha,beta,gamma,d,n,L\n");
    let mut order: Vec<usize> = (0..series.len()).collect();
    order.sort_by_key(|&i| series[i].observable.label());
    for i in order {
        let s = series[i];
        let c = &s.context;
        for (t, v) in s.times.iter().zip(&s.values) {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                t,
                v,
                s.observable.label(),
                c.alpha,
                c.beta,
                c.gamma,
                c.dim,
                c.n,
                c.l
            ));
        }
    }
    out
}

/// CSV for an envelope sweep: `N,t,band_sup,envelope,ratio`.
pub fn envelope_csv(sweep: &EnvelopeSweep) -> String {
    let mut out = format!("# fingerprint={}\n", sweep.fingerprint);
    out.push_str("N,t,band_sup,envelope,ratio\n");
    for r in &sweep.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n_band, r.t, r.band_sup, r.envelope, r.ratio
        ));
    }
    out
}

/// JSON summary of a scan: fits plus the config fingerprint, with stable
/// key order (struct-derived).
#[derive(Debug, Clone, Serialize)]
pub struct ScanSummary {
    pub command: String,
    pub fingerprint: String,
    pub context: ScanContext,
    pub fits: Vec<NamedFit>,
    pub truncation_risk: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedFit {
    pub observable: String,
    pub fit: FitResult,
}

pub fn summary_json(summary: &ScanSummary) -> String {
    serde_json::to_string_pretty(summary).expect("summary serialization cannot fail")
}

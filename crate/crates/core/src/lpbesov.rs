//! Littlewood-Paley dyadic projections and Besov norms.
//!
//! The window is pinned to the `eta - eta(2 .)` construction so that the
//! dyadic partition of unity `sum_j zeta(2^{-j} r) = 1` holds exactly for
//! every `r > 0`, making envelope constants reproducible.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mlf::ml_symbol;
use crate::spectral::{inverse_transform, transform, Domain, Field, Grid, SymbolSpec};

/// Smooth cutoff: `1` for `r <= 1`, `0` for `r >= 2`, `exp(-1/x)` glue
/// between (monotone, C-infinity).
pub fn eta(r: f64) -> f64 {
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        let g1 = (-1.0 / (2.0 - r)).exp();
        let g2 = (-1.0 / (r - 1.0)).exp();
        g1 / (g1 + g2)
    }
}

/// Radial Littlewood-Paley window `zeta(r/N)` with
/// `zeta(r) = eta(r) - eta(2r)`: supported on `N/2 < r < 2N`, equal to 1
/// at `r = N`.
pub fn lp_window(r: f64, n_band: f64) -> f64 {
    let s = r / n_band;
    eta(s) - eta(2.0 * s)
}

/// Dyadic band `N = 2^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicBand {
    pub j: i32,
}

impl DyadicBand {
    pub fn new(j: i32) -> Self {
        Self { j }
    }

    pub fn n_band(&self) -> f64 {
        2f64.powi(self.j)
    }

    /// A band is resolvable when `N >= 2 dxi` (low side) and
    /// `N <= xi_max / 2` (its support then stays inside the Nyquist square).
    pub fn resolvable_on(&self, grid: &Grid) -> bool {
        let n = self.n_band();
        n >= 2.0 * grid.max_freq_spacing() && n <= grid.min_freq_max() / 2.0
    }
}

/// Inclusive range of resolvable band exponents on a grid.
pub fn resolvable_range(grid: &Grid) -> Result<(i32, i32)> {
    let j_min = (2.0 * grid.max_freq_spacing()).log2().ceil() as i32;
    let j_max = (grid.min_freq_max() / 2.0).log2().floor() as i32;
    if j_min > j_max {
        return Err(Error::BandUnresolvable {
            n_band: 0.0,
            need: "grid resolves no dyadic band".into(),
        });
    }
    Ok((j_min, j_max))
}

fn check_resolvable(band: DyadicBand, grid: &Grid) -> Result<()> {
    if band.resolvable_on(grid) {
        Ok(())
    } else {
        Err(Error::BandUnresolvable {
            n_band: band.n_band(),
            need: format!(
                "2*dxi = {:.4e} <= N <= xi_max/2 = {:.4e}",
                2.0 * grid.max_freq_spacing(),
                grid.min_freq_max() / 2.0
            ),
        })
    }
}

/// Dyadic projection `P_N f = F^{-1}[zeta_N fhat]` (space in, space out).
pub fn lp_project(f: &Field, band: DyadicBand) -> Result<Field> {
    check_resolvable(band, f.grid())?;
    let mut fh = transform(f)?;
    let grid = fh.grid().clone();
    let n = band.n_band();
    fh.samples_mut().par_iter_mut().enumerate().for_each(|(flat, v)| {
        *v *= lp_window(grid.xi_radius(flat), n);
    });
    inverse_transform(&fh)
}

/// Grid Riemann-sum `L^p` norm of a space-domain field (`p = inf` is the max).
pub fn lp_norm(f: &Field, p: f64) -> f64 {
    if p.is_infinite() {
        return f.linf_norm();
    }
    let vol = f.grid().cell_volume();
    (f.samples()
        .iter()
        .map(|v| v.norm().powf(p))
        .sum::<f64>()
        * vol)
        .powf(1.0 / p)
}

/// Besov norm parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovSpec {
    pub s: f64,
    pub p: f64,
    pub q: f64,
    pub homogeneous: bool,
}

impl BesovSpec {
    pub fn new(s: f64, p: f64, q: f64, homogeneous: bool) -> Result<Self> {
        if !(p >= 1.0) || !(q >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "besov integrability indices must be >= 1, got p = {p}, q = {q}"
            )));
        }
        Ok(Self {
            s,
            p,
            q,
            homogeneous,
        })
    }
}

/// Besov norm value with its truncation-tail estimate.
#[derive(Debug, Clone, Copy)]
pub struct BesovNorm {
    pub value: f64,
    pub tail_estimate: f64,
    pub bands_used: (i32, i32),
}

fn q_combine(terms: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        terms.iter().cloned().fold(0.0, f64::max)
    } else {
        terms
            .iter()
            .map(|a| a.powf(q))
            .sum::<f64>()
            .powf(1.0 / q)
    }
}

/// Dyadic Besov norm truncated to resolvable bands.
///
/// Homogeneous norms drop bands below the grid floor and estimate them by
/// the scaling `N^{s + d(1-1/p)} ||f||_1`; the inhomogeneous norm uses the
/// standard low-frequency lump `F^{-1}[eta(|xi|) fhat]` in place of the
/// (divergent) literal dyadic sum over all negative exponents. Errors with
/// `TailDominates` when the estimated tail exceeds 1% of the sum.
pub fn besov_norm(f: &Field, spec: &BesovSpec) -> Result<BesovNorm> {
    let grid = f.grid().clone();
    let d = grid.dim() as f64;
    let (j_min, j_max) = resolvable_range(&grid)?;
    let j_lo = if spec.homogeneous { j_min } else { 0.max(j_min) };
    if !spec.homogeneous && j_min > 0 {
        return Err(Error::BandUnresolvable {
            n_band: 1.0,
            need: "inhomogeneous norm needs the N = 1 band resolvable".into(),
        });
    }
    let fh = transform(f)?;

    let weight = |n_band: f64| -> f64 {
        if spec.homogeneous {
            n_band.powf(spec.s)
        } else {
            (1.0 + n_band * n_band).powf(spec.s / 2.0)
        }
    };

    let project_norm = |mask: &dyn Fn(f64) -> f64| -> Result<f64> {
        let mut masked = fh.clone();
        masked
            .samples_mut()
            .iter_mut()
            .enumerate()
            .for_each(|(flat, v)| *v *= mask(grid.xi_radius(flat)));
        Ok(lp_norm(&inverse_transform(&masked)?, spec.p))
    };

    let mut terms: Vec<f64> = Vec::new();
    // low-frequency lump of the inhomogeneous norm
    if !spec.homogeneous {
        let lump = project_norm(&|r| eta(2.0 * r))?;
        terms.push(lump);
    }
    for j in j_lo..=j_max {
        let n_band = 2f64.powi(j);
        let a = project_norm(&|r| lp_window(r, n_band))?;
        terms.push(weight(n_band) * a);
    }
    let value = q_combine(&terms, spec.q);

    // truncation-tail estimates
    let l1 = lp_norm(f, 1.0);
    let mut tails: Vec<f64> = Vec::new();
    if spec.homogeneous {
        let e = spec.s + d * (1.0 - 1.0 / spec.p);
        let n_min = 2f64.powi(j_min);
        if e <= 0.0 {
            return Err(Error::TailDominates {
                tail: f64::INFINITY,
                sum: value,
            });
        }
        tails.push(l1 * n_min.powf(e) / (2f64.powf(e) - 1.0));
    }
    // mass above the last resolvable band, weighted at the next exponent
    let n_top = 2f64.powi(j_max);
    let hi = project_norm(&|r| 1.0 - eta(r / n_top))?;
    tails.push(weight(2.0 * n_top) * hi);
    let tail_estimate = q_combine(&tails, spec.q);

    if tail_estimate > 0.01 * value {
        return Err(Error::TailDominates {
            tail: tail_estimate,
            sum: value,
        });
    }
    Ok(BesovNorm {
        value,
        tail_estimate,
        bands_used: (j_lo, j_max),
    })
}

/// Sup norm of the band-localized kernel,
/// `||P_N K_t||_inf = max_x |F^{-1}[zeta_N E_alpha(i^{-gamma} t^alpha |xi|^beta)]|`.
///
/// Requires `pi n / L >= 4 N` so the band's upper half is fully resolved.
pub fn band_kernel_sup(spec: &SymbolSpec, t: f64, band: DyadicBand, grid: &Grid) -> Result<f64> {
    let n_band = band.n_band();
    if grid.min_freq_max() < 4.0 * n_band {
        return Err(Error::BandUnresolvable {
            n_band,
            need: format!(
                "pi n / L = {:.4e} >= 4 N = {:.4e}",
                grid.min_freq_max(),
                4.0 * n_band
            ),
        });
    }
    if n_band < 2.0 * grid.max_freq_spacing() {
        return Err(Error::BandUnresolvable {
            n_band,
            need: format!("N >= 2 dxi = {:.4e}", 2.0 * grid.max_freq_spacing()),
        });
    }
    spec.check_tempered()?;
    let total = grid.total_points();
    // evaluate the symbol only where the window is strictly positive,
    // once per distinct radius
    let radii: Vec<f64> = (0..total).map(|flat| grid.xi_radius(flat)).collect();
    let mut slots: Vec<i64> = Vec::with_capacity(total);
    let mut unique: Vec<f64> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for &r in &radii {
        if lp_window(r, n_band) > 0.0 {
            let slot = *index.entry(r.to_bits()).or_insert_with(|| {
                unique.push(r);
                (unique.len() - 1) as i64
            });
            slots.push(slot);
        } else {
            slots.push(-1);
        }
    }
    let evals: Vec<Result<Complex64>> = unique
        .par_iter()
        .map(|&r| ml_symbol(spec, t, r))
        .collect();
    let mut table = Vec::with_capacity(evals.len());
    for v in evals {
        table.push(v?);
    }
    let samples: Vec<Complex64> = (0..total)
        .map(|flat| {
            let slot = slots[flat];
            if slot < 0 {
                Complex64::default()
            } else {
                table[slot as usize] * lp_window(radii[flat], n_band)
            }
        })
        .collect();
    let freq = Field::from_samples(grid.clone(), samples, Domain::Frequency)?;
    Ok(inverse_transform(&freq)?.linf_norm())
}

/// `F^{-1}[zeta(|xi|/N)]` sup norm; dilation-exact `N^d` scaling reference.
pub fn window_kernel_sup(band: DyadicBand, grid: &Grid) -> Result<f64> {
    let spec = SymbolSpec::new(1.0, 1.0, 1.0)?;
    band_kernel_sup(&spec, 0.0, band, grid)
}

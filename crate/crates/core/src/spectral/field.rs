use num_complex::Complex64;

use super::fft;
use super::grid::Grid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Space,
    Frequency,
}

/// Complex samples on a [`Grid`], tagged space- or frequency-domain.
///
/// Frequency samples follow the continuum convention: `samples[k]`
/// approximates `fhat(xi_k)` (not the raw DFT coefficient).
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    samples: Vec<Complex64>,
    domain: Domain,
}

impl Field {
    pub fn from_samples(grid: Grid, samples: Vec<Complex64>, domain: Domain) -> Result<Self> {
        if samples.len() != grid.total_points() {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "field needs {} samples, got {}",
                    grid.total_points(),
                    samples.len()
                ),
            });
        }
        Ok(Self {
            grid,
            samples,
            domain,
        })
    }

    /// Sample a function of the spatial position vector.
    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> Complex64 + Sync) -> Self {
        use rayon::prelude::*;
        let samples: Vec<Complex64> = (0..grid.total_points())
            .into_par_iter()
            .map(|flat| {
                let x = grid.x_vec(flat);
                f(&x[..grid.dim()])
            })
            .collect();
        Self {
            grid,
            samples,
            domain: Domain::Space,
        }
    }

    pub fn zeros(grid: Grid, domain: Domain) -> Self {
        let n = grid.total_points();
        Self {
            grid,
            samples: vec![Complex64::default(); n],
            domain,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn into_parts(self) -> (Grid, Vec<Complex64>, Domain) {
        (self.grid, self.samples, self.domain)
    }

    /// Discrete L2 norm under the domain's natural measure
    /// (`dx^d` in space, `(2 pi)^{-d} dxi^d = L^{-d}` in frequency), so the
    /// two domains report equal norms through Parseval.
    pub fn l2_norm(&self) -> f64 {
        let weight = match self.domain {
            Domain::Space => self.grid.cell_volume(),
            Domain::Frequency => (0..self.grid.dim())
                .map(|a| 1.0 / self.grid.extent(a))
                .product(),
        };
        (self
            .samples
            .iter()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            * weight)
            .sqrt()
    }

    pub fn linf_norm(&self) -> f64 {
        self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Forward transform (space -> frequency) in the convention
/// `fhat(xi) = int f(x) e^{-i x.xi} dx`.
pub fn transform(f: &Field) -> Result<Field> {
    if f.domain != Domain::Space {
        return Err(Error::ShapeMismatch {
            context: "forward transform expects a space-domain field".into(),
        });
    }
    Ok(Field {
        grid: f.grid.clone(),
        samples: fft::forward(&f.grid, &f.samples),
        domain: Domain::Frequency,
    })
}

/// Inverse transform (frequency -> space).
pub fn inverse_transform(f: &Field) -> Result<Field> {
    if f.domain != Domain::Frequency {
        return Err(Error::ShapeMismatch {
            context: "inverse transform expects a frequency-domain field".into(),
        });
    }
    Ok(Field {
        grid: f.grid.clone(),
        samples: fft::inverse(&f.grid, &f.samples),
        domain: Domain::Space,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_self_transform() {
        // e^{-x^2/2} -> sqrt(2 pi) e^{-xi^2/2}, d=1, L=40, n=1024
        let grid = Grid::new(1, 1024, 40.0).unwrap();
        let f = Field::from_fn(grid.clone(), |x| Complex64::new((-x[0] * x[0] / 2.0).exp(), 0.0));
        let fh = transform(&f).unwrap();
        let c = (2.0 * std::f64::consts::PI).sqrt();
        for i in 0..1024 {
            let xi = grid.xi_at(0, i);
            let want = c * (-xi * xi / 2.0).exp();
            assert!(
                (fh.samples()[i].re - want).abs() < 1e-10,
                "xi = {xi}: got {}, want {want}",
                fh.samples()[i].re
            );
            assert!(fh.samples()[i].im.abs() < 1e-10);
        }
    }

    #[test]
    fn round_trip_identity() {
        let grid = Grid::new(2, 32, 7.0).unwrap();
        let f = Field::from_fn(grid, |x| {
            Complex64::new((x[0] * 0.7).sin(), (x[1] - 0.3).cos())
        });
        let back = inverse_transform(&transform(&f).unwrap()).unwrap();
        let err: f64 = f
            .samples()
            .iter()
            .zip(back.samples())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let scale = f.linf_norm();
        assert!(err / scale < 1e-12, "round trip error {err}");
    }

    #[test]
    fn zero_transforms_to_zero() {
        let grid = Grid::new(1, 64, 10.0).unwrap();
        let f = Field::zeros(grid, Domain::Space);
        let fh = transform(&f).unwrap();
        assert!(fh.linf_norm() == 0.0);
    }

    #[test]
    fn parseval_within_tolerance() {
        let grid = Grid::new(1, 256, 30.0).unwrap();
        let f = Field::from_fn(grid, |x| {
            Complex64::new((-x[0] * x[0] / 3.0).exp(), 0.1 * x[0].sin())
        });
        let fh = transform(&f).unwrap();
        assert_relative_eq!(f.l2_norm(), fh.l2_norm(), max_relative = 1e-12);
    }

    #[test]
    fn domain_mismatch_is_error() {
        let grid = Grid::new(1, 64, 10.0).unwrap();
        let f = Field::zeros(grid.clone(), Domain::Frequency);
        assert!(matches!(
            transform(&f),
            Err(Error::ShapeMismatch { .. })
        ));
        let g = Field::zeros(grid, Domain::Space);
        assert!(inverse_transform(&g).is_err());
    }

    #[test]
    fn transform_3d_round_trip() {
        let grid = Grid::new(3, 8, 3.0).unwrap();
        let f = Field::from_fn(grid, |x| {
            Complex64::new(x[0] + 2.0 * x[1], x[2] * x[0])
        });
        let back = inverse_transform(&transform(&f).unwrap()).unwrap();
        for (a, b) in f.samples().iter().zip(back.samples()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}

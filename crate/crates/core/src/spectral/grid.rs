use crate::error::{Error, Result};

/// Uniform periodic grid on `[-L/2, L/2)^d`, `d <= 3`, power-of-two points
/// per axis. Frequency nodes are `xi_k = 2 pi k / L`, `k in [-n/2, n/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n: Vec<usize>,
    l: Vec<f64>,
}

impl Grid {
    pub fn new(dim: usize, n: usize, l: f64) -> Result<Self> {
        Self::new_per_axis(vec![n; dim], vec![l; dim])
    }

    pub fn new_per_axis(n: Vec<usize>, l: Vec<f64>) -> Result<Self> {
        let dim = n.len();
        if dim == 0 || dim > 3 || l.len() != dim {
            return Err(Error::InvalidParameter(format!(
                "grid dimension must be 1..=3 with matching extents, got n: {n:?}, l: {l:?}"
            )));
        }
        for &ni in &n {
            if ni < 8 || !ni.is_power_of_two() {
                return Err(Error::InvalidParameter(format!(
                    "points per axis must be a power of two >= 8, got {ni}"
                )));
            }
        }
        for &li in &l {
            if !(li > 0.0) || !li.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "axis extent must be positive, got {li}"
                )));
            }
        }
        Ok(Self { n, l })
    }

    pub fn dim(&self) -> usize {
        self.n.len()
    }

    pub fn points(&self, axis: usize) -> usize {
        self.n[axis]
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.l[axis]
    }

    pub fn min_extent(&self) -> f64 {
        self.l.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn total_points(&self) -> usize {
        self.n.iter().product()
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.l[axis] / self.n[axis] as f64
    }

    pub fn freq_spacing(&self, axis: usize) -> f64 {
        2.0 * std::f64::consts::PI / self.l[axis]
    }

    /// Nyquist frequency `pi n / L` on one axis.
    pub fn freq_max(&self, axis: usize) -> f64 {
        std::f64::consts::PI * self.n[axis] as f64 / self.l[axis]
    }

    pub fn min_freq_max(&self) -> f64 {
        (0..self.dim())
            .map(|a| self.freq_max(a))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_freq_spacing(&self) -> f64 {
        (0..self.dim())
            .map(|a| self.freq_spacing(a))
            .fold(0.0, f64::max)
    }

    /// Cell volume `prod dx_i`.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).product()
    }

    /// Spatial coordinate of grid index `i` on one axis: `-L/2 + i dx`.
    pub fn x_at(&self, axis: usize, index: usize) -> f64 {
        -0.5 * self.l[axis] + index as f64 * self.spacing(axis)
    }

    /// Frequency at FFT-ordered index `i` on one axis.
    pub fn xi_at(&self, axis: usize, index: usize) -> f64 {
        let n = self.n[axis];
        let k = if index < n / 2 {
            index as i64
        } else {
            index as i64 - n as i64
        };
        k as f64 * self.freq_spacing(axis)
    }

    /// Row-major strides (last axis contiguous).
    pub fn strides(&self) -> [usize; 3] {
        let d = self.dim();
        let mut s = [0usize; 3];
        let mut acc = 1;
        for axis in (0..d).rev() {
            s[axis] = acc;
            acc *= self.n[axis];
        }
        s
    }

    /// Per-axis indices of a flat row-major index.
    pub fn decompose(&self, flat: usize) -> [usize; 3] {
        let d = self.dim();
        let s = self.strides();
        let mut out = [0usize; 3];
        let mut rest = flat;
        for axis in 0..d {
            out[axis] = rest / s[axis];
            rest %= s[axis];
        }
        out
    }

    /// Spatial position vector of a flat index.
    pub fn x_vec(&self, flat: usize) -> [f64; 3] {
        let idx = self.decompose(flat);
        let mut out = [0.0; 3];
        for axis in 0..self.dim() {
            out[axis] = self.x_at(axis, idx[axis]);
        }
        out
    }

    /// Frequency vector of a flat index (FFT ordering per axis).
    pub fn xi_vec(&self, flat: usize) -> [f64; 3] {
        let idx = self.decompose(flat);
        let mut out = [0.0; 3];
        for axis in 0..self.dim() {
            out[axis] = self.xi_at(axis, idx[axis]);
        }
        out
    }

    /// Euclidean spatial radius of a flat index.
    pub fn x_radius(&self, flat: usize) -> f64 {
        let x = self.x_vec(flat);
        (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
    }

    /// Euclidean frequency radius of a flat index.
    pub fn xi_radius(&self, flat: usize) -> f64 {
        let xi = self.xi_vec(flat);
        (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(Grid::new(1, 12, 10.0).is_err());
        assert!(Grid::new(1, 4, 10.0).is_err());
        assert!(Grid::new(4, 16, 10.0).is_err());
        assert!(Grid::new(2, 16, -1.0).is_err());
    }

    #[test]
    fn frequency_nodes_symmetric() {
        let g = Grid::new(1, 16, 8.0).unwrap();
        let xis: Vec<f64> = (0..16).map(|i| g.xi_at(0, i)).collect();
        // k = 0..7, then -8..-1
        assert_eq!(xis[0], 0.0);
        assert!((xis[1] - 2.0 * std::f64::consts::PI / 8.0).abs() < 1e-15);
        assert!((xis[8] + 8.0 * 2.0 * std::f64::consts::PI / 8.0).abs() < 1e-15);
        assert!((xis[15] + 2.0 * std::f64::consts::PI / 8.0).abs() < 1e-15);
    }

    #[test]
    fn spacing_times_points_is_extent() {
        let g = Grid::new(2, 32, 5.0).unwrap();
        assert!((g.spacing(0) * 32.0 - 5.0).abs() < 1e-14);
        assert_eq!(g.total_points(), 1024);
    }

    #[test]
    fn flat_round_trip_3d() {
        let g = Grid::new_per_axis(vec![8, 16, 32], vec![1.0, 2.0, 3.0]).unwrap();
        let s = g.strides();
        for flat in [0usize, 5, 100, 4095] {
            let idx = g.decompose(flat);
            let back = idx[0] * s[0] + idx[1] * s[1] + idx[2] * s[2];
            assert_eq!(back, flat);
        }
    }
}

//! Multi-axis FFT plumbing on row-major arrays (rustfft behind the scenes).

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use std::cell::RefCell;

use super::grid::Grid;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place FFT of every contiguous line of length `line`, forward or inverse
/// (both unnormalized, rustfft convention).
fn fft_lines(data: &mut [Complex64], line: usize, inverse: bool) {
    let fft = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(line)
        } else {
            p.plan_fft_forward(line)
        }
    });
    data.par_chunks_mut(line).for_each(|chunk| {
        // per-thread scratch; rustfft's process() allocates none for these sizes
        fft.process(chunk);
    });
}

/// Rotate axes: move the last axis to the front.
/// For shape `[a, b, c]` the result has shape `[c, a, b]`.
fn rotate_last_to_front(data: &[Complex64], shape: &[usize]) -> Vec<Complex64> {
    match shape.len() {
        1 => data.to_vec(),
        2 => {
            let (a, b) = (shape[0], shape[1]);
            let mut out = vec![Complex64::default(); a * b];
            for i in 0..a {
                for j in 0..b {
                    out[j * a + i] = data[i * b + j];
                }
            }
            out
        }
        3 => {
            let (a, b, c) = (shape[0], shape[1], shape[2]);
            let mut out = vec![Complex64::default(); a * b * c];
            for i in 0..a {
                for j in 0..b {
                    for k in 0..c {
                        out[k * (a * b) + i * b + j] = data[i * (b * c) + j * c + k];
                    }
                }
            }
            out
        }
        _ => unreachable!("grid dimension is validated to 1..=3"),
    }
}

/// Unnormalized multi-dimensional DFT along every axis.
fn dft_all_axes(grid: &Grid, mut data: Vec<Complex64>, inverse: bool) -> Vec<Complex64> {
    let d = grid.dim();
    let mut shape: Vec<usize> = (0..d).map(|a| grid.points(a)).collect();
    for _ in 0..d {
        let line = *shape.last().unwrap();
        fft_lines(&mut data, line, inverse);
        if d > 1 {
            data = rotate_last_to_front(&data, &shape);
            shape.rotate_right(1);
        }
    }
    data
}

/// Parity of the sum of per-axis indices; `(-1)^{sum k_axis}` implements the
/// `exp(i xi . L/2)` phase that centers the box at the origin.
fn sign_at(grid: &Grid, flat: usize) -> f64 {
    let idx = grid.decompose(flat);
    let parity = (idx[0] + idx[1] + idx[2]) & 1;
    if parity == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Forward transform to the continuum convention
/// `fhat(xi) = int f(x) e^{-i x.xi} dx ~ dx^d (-1)^{sum k} FFT[f]`.
pub fn forward(grid: &Grid, samples: &[Complex64]) -> Vec<Complex64> {
    let scale = grid.cell_volume();
    let mut out = dft_all_axes(grid, samples.to_vec(), false);
    out.par_iter_mut().enumerate().for_each(|(i, v)| {
        *v *= scale * sign_at(grid, i);
    });
    out
}

/// Inverse transform, `f(x) = (2 pi)^{-d} int fhat e^{i x.xi} d xi`.
pub fn inverse(grid: &Grid, samples: &[Complex64]) -> Vec<Complex64> {
    let mut twisted: Vec<Complex64> = samples
        .par_iter()
        .enumerate()
        .map(|(i, v)| *v * sign_at(grid, i))
        .collect();
    twisted = dft_all_axes(grid, twisted, true);
    let scale: f64 = (0..grid.dim()).map(|a| 1.0 / grid.extent(a)).product();
    twisted.par_iter_mut().for_each(|v| *v *= scale);
    twisted
}

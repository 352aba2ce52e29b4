//! Mittag-Leffler conformance: special-case identities, recurrence,
//! region-boundary agreement, and a discretized Caputo-derivative check.

use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

use fracwave::mlf::{
    asymptotic_radius, boundary_gap, ml_eval, recip_gamma, series_radius, MlParams,
};

fn eval(alpha: f64, beta: f64, z: Complex64) -> Complex64 {
    ml_eval(MlParams::new(alpha, beta).unwrap(), z).unwrap()
}

#[test]
fn exp_reduction_on_a_disk_sample() {
    // E_{1,1} = exp to 1e-12 for |z| <= 20
    for i in 0..200 {
        let r = 20.0 * (i as f64 + 0.5) / 200.0;
        let th = 2.0 * PI * (i as f64 * 0.61803).fract() - PI;
        let z = Complex64::from_polar(r, th);
        let got = eval(1.0, 1.0, z);
        let want = z.exp();
        assert!(
            (got - want).norm() <= 1e-12 * want.norm().max(1e-12),
            "z = {z}: {got} vs {want}"
        );
    }
}

#[test]
fn half_order_erfc_identity_on_real_axis() {
    // E_{1/2,1}(x) = e^{x^2} erfc(-x), erfc from statrs (independent route)
    for i in 0..=120 {
        let x = -3.0 + 6.0 * i as f64 / 120.0;
        let got = eval(0.5, 1.0, Complex64::new(x, 0.0));
        let want = (x * x).exp() * statrs::function::erf::erfc(-x);
        assert!(
            ((got.re - want) / want).abs() < 1e-9,
            "x = {x}: {} vs {want}",
            got.re
        );
        assert!(got.im.abs() < 1e-10 * want.abs().max(1.0));
    }
}

#[test]
fn region_overlap_on_propagator_rays() {
    // at both internal region boundaries, adjacent methods agree to 1e-6
    // on the rays arg z = -pi gamma / 2, gamma in {alpha, (alpha+1)/2, 1}
    for &alpha in &[0.25, 0.4, 0.5, 0.663, 0.75, 0.9, 1.0] {
        let params = MlParams::new(alpha, 1.0).unwrap();
        for gfrac in [0.0, 0.5, 1.0] {
            let gamma = alpha + gfrac * (1.0 - alpha);
            for r in [series_radius(alpha), asymptotic_radius(alpha)] {
                let z = Complex64::from_polar(r, -PI * gamma / 2.0);
                let gap = boundary_gap(params, z)
                    .expect("boundary point must be within the 3% diagnostic band");
                assert!(
                    gap < 1e-6,
                    "alpha {alpha} gamma {gamma} r {r}: gap {gap:.3e}"
                );
            }
        }
    }
}

#[test]
fn caputo_l1_scheme_identity() {
    // y(t) = E_alpha(lambda t^alpha) satisfies d_t^alpha y = lambda y;
    // L1 scheme on [0,1] with 1e4 points, checked at t = 1
    let alpha = 0.5;
    let n = 10_000usize;
    let dt = 1.0 / n as f64;
    for lambda in [
        Complex64::new(-1.0, 0.0),
        Complex64::from_polar(1.0, -PI / 4.0),
    ] {
        let params = MlParams::new(alpha, 1.0).unwrap();
        let y: Vec<Complex64> = (0..=n)
            .map(|m| {
                let t = m as f64 * dt;
                if t == 0.0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    ml_eval(params, lambda * t.powf(alpha)).unwrap()
                }
            })
            .collect();
        // L1 Caputo derivative at t = 1:
        // dt^{-alpha}/Gamma(2-alpha) sum_k b_k (y_{n-k} - y_{n-k-1})
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let b = ((k + 1) as f64).powf(1.0 - alpha) - (k as f64).powf(1.0 - alpha);
            acc += b * (y[n - k] - y[n - k - 1]);
        }
        let caputo = acc * dt.powf(-alpha) * recip_gamma(2.0 - alpha);
        let target = lambda * y[n];
        let rel = (caputo - target).norm() / target.norm();
        assert!(rel < 1e-3, "lambda {lambda}: rel residual {rel:.3e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    /// E_{a,b}(z) = 1/Gamma(b) + z E_{a,a+b}(z), to 1e-9 relative.
    #[test]
    fn recurrence_identity(
        alpha in 0.15f64..1.0,
        beta in 0.6f64..2.0,
        r in 1e-2f64..40.0,
        arg_frac in -1.0f64..1.0,
    ) {
        // keep the exponential scale within f64 range
        let theta = arg_frac * PI;
        prop_assume!(r.powf(1.0/alpha) * (theta/alpha).cos().max(0.0) < 600.0);
        let z = Complex64::from_polar(r, theta);
        let a = MlParams::new(alpha, beta).unwrap();
        let b = MlParams::new(alpha, alpha + beta).unwrap();
        let lhs = ml_eval(a, z);
        let rhs = ml_eval(b, z);
        prop_assume!(lhs.is_ok() && rhs.is_ok());
        let lhs = lhs.unwrap();
        let rhs = Complex64::new(recip_gamma(beta), 0.0) + z * rhs.unwrap();
        let scale = lhs.norm().max(rhs.norm()).max(1e-8);
        prop_assert!(
            (lhs - rhs).norm() / scale < 1e-9,
            "alpha {} beta {} z {}: lhs {} rhs {}", alpha, beta, z, lhs, rhs
        );
    }

    /// E_{1,1} = exp everywhere on the tested disk.
    #[test]
    fn exp_identity_random(re in -20.0f64..20.0, im in -20.0f64..20.0) {
        let z = Complex64::new(re, im);
        prop_assume!(z.norm() <= 20.0);
        let got = eval(1.0, 1.0, z);
        let want = z.exp();
        prop_assert!((got - want).norm() <= 1e-12 * want.norm().max(1e-12));
    }

    /// E_{1/2,1}(z) = e^{z^2} erfc(-z) off the real axis too (the erfc
    /// reflection erfc(-z) = 2 - erfc(z) keeps statrs usable for real z
    /// only, so this property sticks to the real line plus the imaginary
    /// axis where the identity reduces to real integrals).
    #[test]
    fn half_order_identity_real(x in -3.0f64..3.0) {
        let got = eval(0.5, 1.0, Complex64::new(x, 0.0));
        let want = (x * x).exp() * statrs::function::erf::erfc(-x);
        prop_assert!(((got.re - want) / want).abs() < 1e-9);
    }
}

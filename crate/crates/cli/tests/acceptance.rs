//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (run with `--nocapture` to see them). Tolerances are pinned in
//! code; oracle constants were frozen from extended-precision references
//! before the implementation was written.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::time::Instant;

use fracwave::analysis::{
    decay_scan, envelope_sweep, fit_slope, residual_operator_norm, strong_convergence_scan,
    tail_mass, DecaySeries, Observable,
};
use fracwave::fbi::{fbi_decay_exponent, AnalyticityVerdict, FbiConfig};
use fracwave::lpbesov::{band_kernel_sup, DyadicBand};
use fracwave::mlf::{
    asymptotic_radius, boundary_gap, ml_eval, recip_gamma, series_radius, MlParams,
};
use fracwave::spectral::{
    annulus_wave, bump, gaussian, propagate_halfwave, propagate_ml, propagate_unitary,
    residual_multiplier, Dispersion, Grid, SymbolSpec,
};

fn verdict(criterion: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("criterion {criterion}: {tag} ({detail})");
}

fn geom(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let ratio = (hi / lo).powf(1.0 / (count - 1) as f64);
    (0..count)
        .map(|i| if i == count - 1 { hi } else { lo * ratio.powi(i as i32) })
        .collect()
}

fn ols_slope(times: &[f64], values: &[f64]) -> f64 {
    let n = times.len() as f64;
    let sx: f64 = times.iter().map(|t| t.ln()).sum();
    let sy: f64 = values.iter().map(|v| v.ln()).sum();
    let sxx: f64 = times.iter().map(|t| t.ln() * t.ln()).sum();
    let sxy: f64 = times.iter().zip(values).map(|(t, v)| t.ln() * v.ln()).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[test]
fn criterion_01_mittag_leffler_conformance() {
    // E_1 = exp to 1e-12 on |z| <= 20
    let mut worst_exp = 0.0f64;
    for i in 0..300 {
        let r = 20.0 * (i as f64 + 0.5) / 300.0;
        let th = 2.0 * PI * ((i as f64) * 0.618_033_988_75).fract() - PI;
        let z = Complex64::from_polar(r, th);
        let got = ml_eval(MlParams::new(1.0, 1.0).unwrap(), z).unwrap();
        worst_exp = worst_exp.max((got - z.exp()).norm() / z.exp().norm().max(1e-12));
    }
    // recurrence to 1e-9
    let mut worst_rec = 0.0f64;
    for &alpha in &[0.25, 0.5, 0.75, 0.9] {
        for &beta in &[0.8, 1.0, 1.4] {
            for i in 0..40 {
                let r = 0.1 + 30.0 * i as f64 / 40.0;
                let th = -PI + 2.0 * PI * ((i as f64) * 0.37).fract();
                if r.powf(1.0 / alpha) * (th / alpha).cos().max(0.0) > 600.0 {
                    continue;
                }
                let z = Complex64::from_polar(r, th);
                let lhs = ml_eval(MlParams::new(alpha, beta).unwrap(), z);
                let rhs = ml_eval(MlParams::new(alpha, alpha + beta).unwrap(), z);
                let (Ok(lhs), Ok(rhs)) = (lhs, rhs) else { continue };
                let rhs = Complex64::new(recip_gamma(beta), 0.0) + z * rhs;
                worst_rec =
                    worst_rec.max((lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-8));
            }
        }
    }
    // E_{1/2} vs erfc closed form to 1e-9
    let mut worst_erfc = 0.0f64;
    for i in 0..=120 {
        let x = -3.0 + 6.0 * i as f64 / 120.0;
        let got = ml_eval(MlParams::new(0.5, 1.0).unwrap(), Complex64::new(x, 0.0)).unwrap();
        let want = (x * x).exp() * statrs::function::erf::erfc(-x);
        worst_erfc = worst_erfc.max(((got.re - want) / want).abs());
    }
    // series/asymptotic overlap agreement to 1e-6 on the propagator rays
    let mut worst_overlap = 0.0f64;
    for &alpha in &[0.25, 0.5, 0.663, 0.75, 0.9, 1.0] {
        for gfrac in [0.0, 0.5, 1.0] {
            let gamma = alpha + gfrac * (1.0 - alpha);
            for r in [series_radius(alpha), asymptotic_radius(alpha)] {
                let z = Complex64::from_polar(r, -PI * gamma / 2.0);
                let gap = boundary_gap(MlParams::new(alpha, 1.0).unwrap(), z).unwrap();
                worst_overlap = worst_overlap.max(gap);
            }
        }
    }
    let pass =
        worst_exp <= 1e-12 && worst_rec <= 1e-9 && worst_erfc <= 1e-9 && worst_overlap <= 1e-6;
    verdict(
        "1 [mittag-leffler conformance]",
        pass,
        &format!(
            "exp {worst_exp:.2e}, recurrence {worst_rec:.2e}, erfc {worst_erfc:.2e}, overlap {worst_overlap:.2e}"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_02_residual_operator_norm() {
    let mut pass = true;
    let mut detail = String::new();
    for &alpha in &[0.25f64, 0.5, 0.75] {
        let want = (1.0 - alpha) / alpha;
        for &t in &[1.0f64, 10.0, 100.0] {
            let sup = residual_operator_norm(alpha, t).unwrap();
            let at_zero = residual_multiplier(alpha, t, 0.0).unwrap().norm();
            if (sup - want).abs() > 1e-6 || (at_zero - sup).abs() > 1e-12 {
                pass = false;
            }
            // radial monotonicity at every sampled node
            let mut prev = f64::INFINITY;
            for i in 0..=150 {
                let xi = 1e-4 * (1e8f64).powf(i as f64 / 150.0);
                let m = residual_multiplier(alpha, t, xi).unwrap().norm();
                if m > prev * (1.0 + 1e-9) {
                    pass = false;
                    detail = format!("monotonicity broke at alpha {alpha}, t {t}, xi {xi}");
                }
                prev = m;
            }
        }
    }
    if detail.is_empty() {
        detail = "sup = (1-alpha)/alpha to 1e-6 at xi=0; radially monotone".into();
    }
    verdict("2 [residual operator norm]", pass, &detail);
    assert!(pass);
}

#[test]
fn criterion_03_strong_but_not_uniform_convergence() {
    // gaussian datum, alpha = 1/2; oracle ratios from 40-digit erfc
    // quadrature of |m|^2 |phihat|^2; crossing below 10% pinned between
    // t = 100 and t = 1000 by the oracle (continuum crossing ~ t = 214)
    let grid = Grid::new(1, 1 << 16, 40960.0).unwrap();
    let phi = gaussian(grid);
    let norm0 = phi.l2_norm();
    let times = [1.0, 10.0, 100.0, 1000.0, 10000.0];
    let oracle = [
        0.6187822382,
        0.3282647299,
        0.1377188357,
        0.0521871451,
        0.0188428357,
    ];
    let series = strong_convergence_scan(&phi, 0.5, &times, "c3").unwrap();
    let ratios: Vec<f64> = series.values.iter().map(|v| v / norm0).collect();
    let mut worst = 0.0f64;
    for (r, o) in ratios.iter().zip(&oracle) {
        worst = worst.max((r - o).abs() / o);
    }
    let mut pass = worst < 0.12;
    // crossing below 10% of ||phi||_2 by t = 1e4 (already by t = 1000)
    pass &= ratios[2] > 0.1 && ratios[3] < 0.1 && ratios[4] < 0.1;
    // while the operator norm stays at 1.0 for all t
    let mut norm_dev = 0.0f64;
    for &t in &times {
        norm_dev = norm_dev.max((residual_operator_norm(0.5, t).unwrap() - 1.0).abs());
    }
    pass &= norm_dev < 1e-6;
    verdict(
        "3 [strong-but-not-uniform convergence]",
        pass,
        &format!(
            "grid-vs-oracle worst {worst:.3e}; ratios {:?}; operator norm dev {norm_dev:.2e}",
            ratios.iter().map(|r| (r * 1e4).round() / 1e4).collect::<Vec<f64>>()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_04_figure_one_reproduction() {
    // alpha = gamma = 1/4, beta = 1/2, d = 1, annulus datum,
    // n = 2^14, L = 8192, 60 log-spaced times in [1, 1e3]
    let started = Instant::now();
    let grid = Grid::new(1, 1 << 14, 8192.0).unwrap();
    let phi = annulus_wave(grid.clone()).unwrap();
    let spec = SymbolSpec::new(0.25, 0.5, 0.25).unwrap();
    let times = geom(1.0, 1000.0, 60);
    let series = decay_scan(&phi, &spec, &times, Observable::LinfU, "c4").unwrap();
    let squared = DecaySeries {
        times: series.times.clone(),
        values: series.values.iter().map(|v| v * v).collect(),
        observable: Observable::LinfUSquared,
        fingerprint: series.fingerprint.clone(),
        context: series.context.clone(),
        truncation_risk: series.truncation_risk,
    };
    let elapsed = started.elapsed().as_secs_f64();

    // spot values against the independent oscillatory-quadrature oracle
    // (u(x, t) = int_1^2 E cos(x xi) dxi, adaptive panels, frozen)
    let spots: [(f64, f64, Complex64); 3] = [
        (10.0, 25.0, Complex64::new(-0.70610847, 0.49161650)),
        (100.0, 0.0, Complex64::new(-0.22560451, -0.13630007)),
        (100.0, 300.0, Complex64::new(-0.10176871, -0.30184294)),
    ];
    let mut spot_worst = 0.0f64;
    for &(t, x, want) in &spots {
        let u = propagate_ml(&phi, &spec, t).unwrap();
        let idx = ((x + 4096.0) / 0.5).round() as usize;
        spot_worst = spot_worst.max((u.samples()[idx] - want).norm());
    }

    let fit = fit_slope(&series, (10.0, 1000.0)).unwrap();
    let fit_sq = fit_slope(&squared, (10.0, 1000.0)).unwrap();
    let slope_ok = (fit.slope + 0.25).abs() <= 0.05;
    let pass = slope_ok && spot_worst < 1e-6 && elapsed <= 120.0 && series.times.len() == 60;
    verdict(
        "4 [figure-1 reproduction]",
        pass,
        &format!(
            "fitted ||u||_inf slope {:.4} (target -0.25 +- 0.05), |u|^2 slope {:.4} recorded, \
             spot-oracle {spot_worst:.2e}, {:.1} s",
            fit.slope, fit_sq.slope, elapsed
        ),
    );
    assert!(
        slope_ok,
        "fitted slope {:.4} outside -0.25 +- 0.05: the grid sup rides the light-cone \
         chirp (the t^{{-d/2}} envelope term) until t ~ 750 at this box size, decaying \
         ~ t^{{-1/2}} over the pinned window; the t^{{-alpha}} law emerges only past the \
         constant-dependent crossover. See the decisions ledger for the full analysis.",
        fit.slope
    );
    assert!(pass);
}

#[test]
fn criterion_05_frequency_localized_envelopes() {
    let grid = Grid::new(1, 1 << 14, 512.0).unwrap();
    let bands: Vec<i32> = (-2..=4).collect();
    let times = geom(1.0, 1000.0, 7);
    let mut pass = true;
    let mut details = Vec::new();
    for (label, spec) in [
        ("disp_est3 a=1/2<g=1 b=1", SymbolSpec::new(0.5, 1.0, 1.0).unwrap()),
        ("disp_est2 a=g=1/4 b=1/2", SymbolSpec::new(0.25, 0.5, 0.25).unwrap()),
    ] {
        let sweep = envelope_sweep(&spec, &bands, &times, &grid, "c5").unwrap();
        let quadrant_min = sweep
            .rows
            .iter()
            .filter(|r| r.n_band >= 4.0 && r.t >= 100.0)
            .map(|r| r.ratio)
            .fold(f64::INFINITY, f64::min);
        let ok = sweep.summary.spread <= 50.0 && quadrant_min > 0.01;
        pass &= ok;
        details.push(format!(
            "{label}: spread {:.2}, quadrant min {:.3}",
            sweep.summary.spread, quadrant_min
        ));
    }
    verdict(
        "5 [frequency-localized envelopes]",
        pass,
        &details.join("; "),
    );
    assert!(pass);
}

#[test]
fn criterion_06_dimension_dependent_decay() {
    // d = 2, band N = 1, alpha = beta = gamma: fitted band-sup exponent
    // -1/2 for alpha = 0.75 and -0.3 for alpha = 0.3, each +- 0.07
    let grid = Grid::new(2, 1024, 768.0).unwrap();
    let band = DyadicBand::new(0);
    let times = geom(20.0, 300.0, 8);
    let mut pass = true;
    let mut details = Vec::new();
    for (alpha, target) in [(0.75, -0.5), (0.3, -0.3)] {
        let spec = SymbolSpec::new(alpha, alpha, alpha).unwrap();
        let sups: Vec<f64> = times
            .iter()
            .map(|&t| band_kernel_sup(&spec, t, band, &grid).unwrap())
            .collect();
        let slope = ols_slope(&times, &sups);
        let ok = (slope - target).abs() <= 0.07;
        pass &= ok;
        details.push(format!("alpha {alpha}: slope {slope:.3} (target {target})"));
    }
    verdict(
        "6 [dimension-dependent decay]",
        pass,
        &details.join("; "),
    );
    assert!(pass);
}

#[test]
fn criterion_07_half_wave_consistency() {
    let grid = Grid::new(1, 2048, 80.0).unwrap();
    let phi = gaussian(grid.clone());
    let spec = SymbolSpec::new(1.0, 1.0, 1.0).unwrap();
    let t = 5.0;
    let u = propagate_ml(&phi, &spec, t).unwrap();
    let mut sup_err = 0.0f64;
    for i in 0..2048 {
        let x = grid.x_at(0, i);
        let want =
            0.5 * ((-(x - t) * (x - t) / 2.0).exp() + (-(x + t) * (x + t) / 2.0).exp());
        sup_err = sup_err.max((u.samples()[i].re - want).abs());
    }
    let l2_dev = (u.l2_norm() - phi.l2_norm()).abs() / phi.l2_norm();
    // and the dedicated half-wave propagator agrees with the E_1 route
    let hw = propagate_halfwave(&phi, t).unwrap();
    let route_gap: f64 = u
        .samples()
        .iter()
        .zip(hw.samples())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let pass = sup_err <= 1e-6 && l2_dev <= 1e-12 && route_gap <= 1e-10;
    verdict(
        "7 [half-wave consistency]",
        pass,
        &format!("half-sum sup err {sup_err:.2e}, l2 dev {l2_dev:.2e}, route gap {route_gap:.2e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_08_support_dichotomy() {
    let grid = Grid::new(1, 2048, 64.0).unwrap();
    let phi = bump(grid.clone());
    // linear symbol: support translated, no spreading
    let (c, t) = (3.0, 0.7);
    let u_lin = propagate_unitary(&phi, &Dispersion::Linear(c), t).unwrap();
    let lin_tail = tail_mass(&u_lin, 1.1 + c * t).unwrap();
    // indicator symbol at t = 2 pi: kernel is a pure delta
    let u_ind1 = propagate_unitary(&phi, &Dispersion::Indicator, 2.0 * PI).unwrap();
    let ind1_tail = tail_mass(&u_ind1, 1.1).unwrap();
    // indicator at t = pi spreads
    let u_ind2 = propagate_unitary(&phi, &Dispersion::Indicator, PI).unwrap();
    let ind2_tail = tail_mass(&u_ind2, 1.1).unwrap();
    // fractional propagator: instant loss of compact support
    let spec = SymbolSpec::new(0.5, 0.5, 0.5).unwrap();
    let u_ml = propagate_ml(&phi, &spec, 0.01).unwrap();
    let isp_tail = tail_mass(&u_ml, 2.0).unwrap();
    let pass =
        lin_tail < 1e-8 && ind1_tail < 1e-8 && ind2_tail > 1e-3 && isp_tail > 1e-6;
    verdict(
        "8 [support dichotomy]",
        pass,
        &format!(
            "linear {lin_tail:.2e}, indicator@2pi {ind1_tail:.2e}, indicator@pi {ind2_tail:.2e}, isp {isp_tail:.2e}"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_09_fbi_diagnostic() {
    let lams = FbiConfig::default_lambdas();
    // sigma > 0 for w = xi^2 at x0 = 0, t = 1
    let sq = fbi_decay_exponent(
        &FbiConfig::new(Dispersion::Square, 0.0, 1.0, 2.0, lams.clone(), 256).unwrap(),
    )
    .unwrap();
    // sigma = x^2 to 1e-6 in the t = 0 closed form
    let x0 = 0.7;
    let zero_t = fbi_decay_exponent(
        &FbiConfig::new(Dispersion::Square, x0, 0.0, 2.0, lams.clone(), 64).unwrap(),
    )
    .unwrap();
    // sigma ~ 0 for w = |xi| on the light cone x0 = t
    let cone = fbi_decay_exponent(
        &FbiConfig::new(Dispersion::Abs, 1.0, 1.0, 2.0, lams.clone(), 256).unwrap(),
    )
    .unwrap();
    // sigma > 0 for w = |xi| off the cone, x0 = 3t
    let off = fbi_decay_exponent(
        &FbiConfig::new(Dispersion::Abs, 3.0, 1.0, 2.0, lams, 256).unwrap(),
    )
    .unwrap();
    let pass = sq.verdict == AnalyticityVerdict::GaussianDecay
        && sq.sigma > 0.0
        && (zero_t.sigma - x0 * x0).abs() <= 1e-6
        && cone.verdict == AnalyticityVerdict::NoDecay
        && cone.sigma.abs() < 0.01
        && off.verdict == AnalyticityVerdict::GaussianDecay
        && off.sigma > 0.0;
    verdict(
        "9 [fbi diagnostic]",
        pass,
        &format!(
            "square sigma {:.3}; t=0 sigma {:.6} (x^2 = {:.2}); cone sigma {:.4}; off-cone sigma {:.3}",
            sq.sigma, zero_t.sigma, x0 * x0, cone.sigma, off.sigma
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_10_determinism() {
    // identical configs must produce byte-identical CSV and JSON outputs
    let bin = env!("CARGO_BIN_EXE_fracwave");
    let dir = std::env::temp_dir().join(format!("fracwave-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let runs: Vec<Vec<String>> = vec![
        vec![
            "decay-scan".into(),
            "--alpha".into(), "0.25".into(),
            "--beta".into(), "0.5".into(),
            "--gamma".into(), "0.25".into(),
            "--dim".into(), "1".into(),
            "--n".into(), "4096".into(),
            "--L".into(), "1024".into(),
            "--datum".into(), "annulus_wave".into(),
            "--t-geom".into(), "1:100:12".into(),
            "--observable".into(), "linf_u".into(),
        ],
        vec![
            "fbi-scan".into(),
            "--w".into(), "square".into(),
            "--x0".into(), "0".into(),
            "--t".into(), "1".into(),
            "--xi".into(), "2".into(),
        ],
        vec![
            "envelope-sweep".into(),
            "--alpha".into(), "0.5".into(),
            "--beta".into(), "1".into(),
            "--gamma".into(), "1".into(),
            "--dim".into(), "1".into(),
            "--n".into(), "4096".into(),
            "--L".into(), "256".into(),
            "--bands".into(), "-1..2".into(),
            "--t-geom".into(), "1:100:5".into(),
        ],
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for (k, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        let mut fingerprints = Vec::new();
        for round in 0..2 {
            let csv = dir.join(format!("run{k}_{round}.csv"));
            let json = dir.join(format!("run{k}_{round}.json"));
            let status = std::process::Command::new(bin)
                .args(args)
                .arg("--out")
                .arg(&csv)
                .arg("--summary-out")
                .arg(&json)
                .output()
                .expect("binary runs");
            assert!(
                status.status.success(),
                "run failed: {}",
                String::from_utf8_lossy(&status.stderr)
            );
            let csv_bytes = std::fs::read(&csv).unwrap();
            let json_bytes = std::fs::read(&json).unwrap();
            // fingerprint is embedded in the first CSV line
            let first = csv_bytes.split(|b| *b == b'\n').next().unwrap().to_vec();
            fingerprints.push(first);
            outputs.push((csv_bytes, json_bytes));
        }
        let same = outputs[0] == outputs[1] && fingerprints[0] == fingerprints[1];
        pass &= same;
        details.push(format!(
            "{}: {}",
            args[0],
            if same { "byte-identical" } else { "MISMATCH" }
        ));
    }
    let _ = std::fs::remove_dir_all(&dir);
    verdict("10 [determinism]", pass, &details.join("; "));
    assert!(pass);
}

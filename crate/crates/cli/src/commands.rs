use std::path::{Path, PathBuf};

use fracwave::analysis::{
    decay_csv, decay_scan, envelope_csv, envelope_sweep, fit_slope, required_extent,
    residual_operator_norm, strong_convergence_scan, tail_mass, DecaySeries, NamedFit,
    Observable, ScanContext, ScanSummary,
};
use fracwave::fbi::{fbi_csv, fbi_decay_exponent, FbiConfig};
use fracwave::lpbesov::{besov_norm, BesovSpec};
use fracwave::mlf::{ml_eval, MlParams};
use fracwave::spectral::{
    propagate_ml, propagate_unitary, read_field, write_field, Datum, Dispersion, Field, Grid,
    SymbolSpec,
};

use crate::config::{parse_bands, parse_geom_grid, write_atomic, CliError, Config};
use crate::{Command, CommonArgs, GridArgs, SymbolArgs};

pub fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::MlEval {
            common,
            alpha,
            beta_ml,
            z_re,
            z_im,
        } => ml_eval_cmd(common, alpha, beta_ml, z_re, z_im),
        Command::Propagate {
            common,
            symbol,
            grid,
            t,
            w,
            field_out,
        } => propagate_cmd(common, symbol, grid, t, w, field_out),
        Command::DecayScan {
            common,
            symbol,
            grid,
            t_geom,
            observable,
            window,
        } => decay_scan_cmd(common, symbol, grid, t_geom, observable, window),
        Command::EnvelopeSweep {
            common,
            symbol,
            grid,
            t_geom,
            bands,
        } => envelope_cmd(common, symbol, grid, t_geom, bands),
        Command::ResidualNorm { common, alpha, t } => residual_norm_cmd(common, alpha, t),
        Command::StrongConvergence {
            common,
            grid,
            alpha,
            t_geom,
        } => strong_convergence_cmd(common, grid, alpha, t_geom),
        Command::TailMass {
            common,
            symbol,
            grid,
            t,
            w,
            radius,
        } => tail_mass_cmd(common, symbol, grid, t, w, radius),
        Command::FbiScan {
            common,
            w,
            x0,
            t,
            xi,
            lambdas,
            quad_order,
        } => fbi_cmd(common, w, x0, t, xi, lambdas, quad_order),
        Command::BesovNorm {
            common,
            grid,
            s,
            p,
            q,
            homogeneous,
        } => besov_cmd(common, grid, s, p, q, homogeneous),
    }
}

// ---------------------------------------------------------------------------
// config assembly
// ---------------------------------------------------------------------------

fn base_config(common: &CommonArgs, command: &str) -> Result<Config, CliError> {
    let mut cfg = match &common.config {
        Some(path) => Config::from_file(path)?,
        None => Config::default(),
    };
    cfg.overlay("command", Some(command.to_string()));
    Ok(cfg)
}

fn overlay_symbol(cfg: &mut Config, s: &SymbolArgs) {
    cfg.overlay("alpha", s.alpha.map(|v| v.to_string()));
    cfg.overlay("beta", s.beta.map(|v| v.to_string()));
    cfg.overlay("gamma", s.gamma.map(|v| v.to_string()));
    if s.allow_nontempered {
        cfg.overlay("allow_nontempered", Some("true".into()));
    }
}

fn overlay_grid(cfg: &mut Config, g: &GridArgs) {
    cfg.overlay("dim", g.dim.map(|v| v.to_string()));
    cfg.overlay("n", g.n.map(|v| v.to_string()));
    cfg.overlay("L", g.l.map(|v| v.to_string()));
    cfg.overlay("datum", g.datum.clone());
    cfg.overlay(
        "datum_file",
        g.datum_file.as_ref().map(|p| p.display().to_string()),
    );
}

fn resolve_symbol(cfg: &Config) -> Result<SymbolSpec, CliError> {
    let alpha = cfg.f64("alpha")?;
    let beta = cfg.f64("beta")?;
    let gamma = cfg.f64("gamma")?;
    SymbolSpec::new_with_override(alpha, beta, gamma, cfg.flag("allow_nontempered"))
        .map_err(Into::into)
}

fn resolve_grid(cfg: &Config) -> Result<Grid, CliError> {
    let dim = cfg.usize_or("dim", 1)?;
    let n = cfg.usize_or("n", 1024)?;
    let l = cfg.f64("L")?;
    Grid::new(dim, n, l).map_err(Into::into)
}

/// Datum plus its nominal support radius for the truncation heuristic.
fn resolve_datum(cfg: &Config, grid: &Grid) -> Result<(Field, f64), CliError> {
    if let Some(path) = cfg.get("datum_file") {
        let file = std::fs::File::open(path)
            .map_err(|e| CliError::Io(format!("cannot open datum {path}: {e}")))?;
        let field = read_field(std::io::BufReader::new(file))?;
        if field.grid() != grid {
            return Err(CliError::Validation(format!(
                "datum file grid does not match the requested grid ({}^{} vs {}^{})",
                field.grid().points(0),
                field.grid().dim(),
                grid.points(0),
                grid.dim()
            )));
        }
        // custom data: take the box itself as the support scale
        return Ok((field, grid.min_extent() / 8.0));
    }
    let datum = Datum::parse(cfg.require("datum")?)?;
    Ok((datum.realize(grid.clone())?, datum.support_radius()))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    write_atomic(path, text.as_bytes())
}

fn emit(common: &CommonArgs, csv: Option<&str>, json: &str) -> Result<(), CliError> {
    if let (Some(path), Some(text)) = (&common.out, csv) {
        write_text(path, text)?;
    }
    if let Some(path) = &common.summary_out {
        write_text(path, json)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

fn ml_eval_cmd(
    common: CommonArgs,
    alpha: Option<f64>,
    beta_ml: Option<f64>,
    z_re: Option<f64>,
    z_im: Option<f64>,
) -> Result<(), CliError> {
    let mut cfg = base_config(&common, "ml-eval")?;
    cfg.overlay("alpha", alpha.map(|v| v.to_string()));
    cfg.overlay("beta_ml", beta_ml.map(|v| v.to_string()));
    cfg.overlay("z_re", z_re.map(|v| v.to_string()));
    cfg.overlay("z_im", z_im.map(|v| v.to_string()));
    cfg.set_default("beta_ml", "1");
    cfg.set_default("z_im", "0");
    let alpha = cfg.f64("alpha")?;
    let beta_ml = cfg.f64("beta_ml")?;
    let z = num_complex::Complex64::new(cfg.f64("z_re")?, cfg.f64("z_im")?);
    let params = MlParams::new(alpha, beta_ml)?;
    let value = ml_eval(params, z)?;
    let fp = cfg.fingerprint();
    println!(
        "E_{{{alpha},{beta_ml}}}({} + {}i) = {} + {}i",
        z.re, z.im, value.re, value.im
    );
    let json = serde_json::to_string_pretty(&serde_json::json!({
        "command": "ml-eval",
        "fingerprint": fp,
        "alpha": alpha,
        "beta_ml": beta_ml,
        "z": [z.re, z.im],
        "value": [value.re, value.im],
    }))
    .unwrap();
    emit(&common, None, &json)
}

fn propagate_cmd(
    common: CommonArgs,
    symbol: SymbolArgs,
    grid_args: GridArgs,
    t: Option<f64>,
    w: Option<String>,
    field_out: Option<PathBuf>,
) -> Result<(), CliError> {
    let mut cfg = base_config(&common, "propagate")?;
    overlay_symbol(&mut cfg, &symbol);
    overlay_grid(&mut cfg, &grid_args);
    cfg.overlay("t", t.map(|v| v.to_string()));
    cfg.overlay("w", w);
    cfg.overlay(
        "field_out",
        field_out.as_ref().map(|p| p.display().to_string()),
    );
    let grid = resolve_grid(&cfg)?;
    let (phi, _) = resolve_datum(&cfg, &grid)?;
    let t = cfg.f64("t")?;
    let u = match cfg.get("w") {
        Some(wspec) => {
            let disp = Dispersion::parse(wspec)?;
            propagate_unitary(&phi, &disp, t)?
        }
        None => {
            let spec = resolve_symbol(&cfg)?;
            propagate_ml(&phi, &spec, t)?
        }
    };
    let fp = cfg.fingerprint();
    let out_path = cfg
        .get("field_out")
        .ok_or_else(|| CliError::Usage("missing required parameter 'field_out'".into()))?;
    let mut bytes = Vec::new();
    write_field(&mut bytes, &u)?;
    write_atomic(Path::new(out_path), &bytes)?;
    println!(
        "propagated to t = {t}: l2 = {}, sup = {} (fingerprint {fp})",
        u.l2_norm(),
        u.linf_norm()
    );
    let json = serde_json::to_string_pretty(&serde_json::json!({
        "command": "propagate",
        "fingerprint": fp,
        "t": t,
        "l2": u.l2_norm(),
        "linf": u.linf_norm(),
        "field_out": out_path,
    }))
    .unwrap();
    emit(&common, None, &json)
}

fn parse_window(cfg: &Config, t_max: f64) -> Result<(f64, f64), CliError> {
    match cfg.get("window") {
        None => Ok((10.0, t_max)),
        Some(spec) => {
            let (lo, hi) = spec
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("window must be lo:hi, got '{spec}'")))?;
            let lo: f64 = lo
                .parse()
                .map_err(|_| CliError::Usage(format!("bad window start '{lo}'")))?;
            let hi: f64 = hi
                .parse()
                .map_err(|_| CliError::Usage(format!("bad window end '{hi}'")))?;
            Ok((lo, hi))
        }
    }
}

fn decay_scan_cmd(
    common: CommonArgs,
    symbol: SymbolArgs,
    grid_args: GridArgs,
    t_geom: Option<String>,
    observable: Option<String>,
    window: Option<String>,
) -> Result<(), CliError> {
    let mut cfg = base_config(&common, "decay-scan")?;
    overlay_symbol(&mut cfg, &symbol);
    overlay_grid(&mut cfg, &grid_args);
    cfg.overlay("t_geom", t_geom);
    cfg.overlay("observable", observable);
    cfg.overlay("window", window);
    cfg.set_default("observable", "linf_u");

    let spec = resolve_symbol(&cfg)?;
    let grid = resolve_grid(&cfg)?;
    let (phi, support_radius) = resolve_datum(&cfg, &grid)?;
    let times = parse_geom_grid(cfg.require("t_geom")?)?;
    let t_max = *times.last().unwrap();
    let need = required_extent(support_radius, t_max, spec.alpha(), spec.beta());
    if grid.min_extent() < need {
        return Err(CliError::Validation(format!(
            "periodic truncation heuristic violated: need L >= {need:.1} for t_max = {t_max} \
             (support {support_radius}, alpha/beta = {}), got L = {}",
            spec.alpha() / spec.beta(),
            grid.min_extent()
        )));
    }
    let observable = Observable::parse(cfg.require("observable")?)?;
    let fp = cfg.fingerprint();

    let primary = decay_scan(&phi, &spec, &times, observable, &fp)?;
    // the squared-modulus companion is emitted alongside the sup norm for
    // comparison with |u|^2-style plots; max|u|^2 = (max|u|)^2, so it is
    // derived rather than re-propagated
    let mut series: Vec<DecaySeries> = vec![primary];
    if observable == Observable::LinfU {
        let base = &series[0];
        series.push(DecaySeries {
            times: base.times.clone(),
            values: base.values.iter().map(|v| v * v).collect(),
            observable: Observable::LinfUSquared,
            fingerprint: base.fingerprint.clone(),
            context: base.context.clone(),
            truncation_risk: base.truncation_risk,
        });
    }
    let window = parse_window(&cfg, t_max)?;
    let mut fits = Vec::new();
    for s in &series {
        if let Ok(fit) = fit_slope(s, window) {
            println!(
                "slope[{}] over [{}, {}] = {:.4} (rms {:.3e})",
                s.observable.label(),
                window.0,
                window.1,
                fit.slope,
                fit.rms_residual
            );
            fits.push(NamedFit {
                observable: s.observable.label().to_string(),
                fit,
            });
        }
    }
    let summary = ScanSummary {
        command: "decay-scan".into(),
        fingerprint: fp,
        context: ScanContext::from_parts(&spec, &grid),
        fits,
        truncation_risk: series.iter().any(|s| s.truncation_risk),
    };
    let refs: Vec<&DecaySeries> = series.iter().collect();
    let csv = decay_csv(&refs);
    let json = fracwave::analysis::summary_json(&summary);
    emit(&common, Some(&csv), &json)
}

fn envelope_cmd(
    common: CommonArgs,
    symbol: SymbolArgs,
    grid_args: GridArgs,
    t_geom: Option<String>,
    bands: Option<String>,
) -> Result<(), CliError> {
    let mut cfg = base_config(&common, "envelope-sweep")?;
    overlay_symbol(&mut cfg, &symbol);
    overlay_grid(&mut cfg, &grid_args);
    cfg.overlay("t_geom", t_geom);
    cfg.overlay("bands", bands);
    cfg.set_default("datum", "gaussian"); // unused, keeps datum resolution out
    let spec = resolve_symbol(&cfg)?;
    let grid = resolve_grid(&cfg)?;
    let times = parse_geom_grid(cfg.require("t_geom")?)?;
    let bands = parse_bands(cfg.require("bands")?)?;
    let fp = cfg.fingerprint();
    let sweep = envelope_sweep(&spec, &bands, &times, &grid, &fp)?;
    println!(
        "envelope ratios: min {:.4}, max {:.4}, spread {:.2}",
        sweep.summary.ratio_min, sweep.summary.ratio_max, sweep.summary.spread
    );
    let json = serde_json::to_string_pretty(&serde_json::json!({
        "command": "envelope-sweep",
        "fingerprint": sweep.fingerprint,
        "context": serde_json::to_value(&sweep.context).unwrap(),
        "summary": serde_json::to_value(&sweep.summary).unwrap(),
    }))
    .unwrap();
    emit(&common, Some(&envelope_csv(&sweep)), &json)
}

fn residual_norm_cmd(
    common: CommonArgs,
    alpha: Option<f64>,
    t: Option<f64>,
) -> Result<(), CliError> {
    let mut cfg = base_config(&common, "residual-norm")?;
    cfg.overlay("alpha", alpha.map(|v| v.to_string()));
    cfg.overlay("t", t.map(|v| v.to_string()));
    let alpha = cfg.f64("alpha")?;
    let t = cfg.f64("t")?;
    let norm = residual_operator_norm(alpha, t)?;
    let fp = cfg.fingerprint();
    println!("{norm}");
    let json = serde_json::to_string_pretty(&serde_json::json!({
        "command": "residual-norm",
        "fingerprint": fp,
        "alpha": alpha,
        "t": t,
        "operator_norm": norm,
        "closed_form": (1.0 - alpha) / alpha,
    }))
    .unwrap();
    emit(&common, None, &json)
}

fn strong_convergence_cmd(
    common: CommonArgs,
    grid_args: GridArgs,
    alpha: Option<f64>,
    t_geom: Option<String>,
) -> Result<(), CliError> {
    let mut cfg = base_config(&common, "strong-convergence")?;
    overlay_grid(&mut cfg, &grid_args);
    cfg.overlay("alpha", alpha.map(|v| v.to_string()));
    cfg.overlay("t_geom", t_geom);
    cfg.set_default("datum", "gaussian");
    let alpha = cfg.f64("alpha")?;
    let grid = resolve_grid(&cfg)?;
    let (phi, _) = resolve_datum(&cfg, &grid)?;
    let times = parse_geom_grid(cfg.require("t_geom")?)?;
    let fp = cfg.fingerprint();
    let series = strong_convergence_scan(&phi, alpha, &times, &fp)?;
    let initial = phi.l2_norm();
    println!(
        "||R_t phi||_2 / ||phi||_2: first {:.6}, last {:.6}",
        series.values[0] / initial,
        series.values.last().unwrap() / initial
    );
    let json = serde_json::to_string_pretty(&serde_json::json!({
        "command": "strong-convergence",
        "fingerprint": fp,
        "alpha": alpha,
        "initial_l2": initial,
        "final_ratio": series.values.last().unwrap() / initial,
        "operator_norm_bound": (1.0 - alpha) / alpha,
    }))
    .unwrap();
    let refs = [&series];
    emit(&common, Some(&decay_csv(&refs)), &json)
}

fn tail_mass_cmd(
    common: CommonArgs,
    symbol: SymbolArgs,
    grid_args: GridArgs,
    t: Option<f64>,
    w: Option<String>,
    radius: Option<f64>,
) -> Result<(), CliError> {
    let mut cfg = base_config(&common, "tail-mass")?;
    overlay_symbol(&mut cfg, &symbol);
    overlay_grid(&mut cfg, &grid_args);
    cfg.overlay("t", t.map(|v| v.to_string()));
    cfg.overlay("w", w);
    cfg.overlay("radius", radius.map(|v| v.to_string()));
    let grid = resolve_grid(&cfg)?;
    let (phi, _) = resolve_datum(&cfg, &grid)?;
    let t = cfg.f64("t")?;
    let radius = cfg.f64("radius")?;
    let u = match cfg.get("w") {
        Some(wspec) => propagate_unitary(&phi, &Dispersion::parse(wspec)?, t)?,
        None => propagate_ml(&phi, &resolve_symbol(&cfg)?, t)?,
    };
    let tm = tail_mass(&u, radius)?;
    let fp = cfg.fingerprint();
    println!("{tm}");
    let json = serde_json::to_string_pretty(&serde_json::json!({
        "command": "tail-mass",
        "fingerprint": fp,
        "t": t,
        "radius": radius,
        "tail_mass": tm,
    }))
    .unwrap();
    emit(&common, None, &json)
}

fn fbi_cmd(
    common: CommonArgs,
    w: Option<String>,
    x0: Option<f64>,
    t: Option<f64>,
    xi: Option<f64>,
    lambdas: Option<String>,
    quad_order: Option<usize>,
) -> Result<(), CliError> {
    let mut cfg = base_config(&common, "fbi-scan")?;
    cfg.overlay("w", w);
    cfg.overlay("x0", x0.map(|v| v.to_string()));
    cfg.overlay("t", t.map(|v| v.to_string()));
    cfg.overlay("xi", xi.map(|v| v.to_string()));
    cfg.overlay("lambdas", lambdas);
    cfg.overlay("quad_order", quad_order.map(|v| v.to_string()));
    cfg.set_default("lambdas", "1:6:11");
    cfg.set_default("quad_order", "256");
    cfg.set_default("xi", "2");
    let disp = Dispersion::parse(cfg.require("w")?)?;
    let lambda_spec = cfg.require("lambdas")?;
    let parts: Vec<&str> = lambda_spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "lambdas must be lo:hi:count, got '{lambda_spec}'"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::Usage("bad lambda start".into()))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Usage("bad lambda end".into()))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| CliError::Usage("bad lambda count".into()))?;
    if count < 2 || !(hi > lo) {
        return Err(CliError::Validation(format!(
            "lambda grid needs lo < hi and count >= 2, got '{lambda_spec}'"
        )));
    }
    let lam: Vec<f64> = (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect();
    let fbi = FbiConfig::new(
        disp,
        cfg.f64("x0")?,
        cfg.f64("t")?,
        cfg.f64("xi")?,
        lam,
        cfg.usize_or("quad_order", 256)?,
    )?;
    let fp = cfg.fingerprint();
    let result = fbi_decay_exponent(&fbi)?;
    println!(
        "sigma = {:.6} ({:?}, rms {:.3e})",
        result.sigma, result.verdict, result.fit.rms_residual
    );
    let json = serde_json::to_string_pretty(&serde_json::json!({
        "command": "fbi-scan",
        "fingerprint": fp,
        "x0": fbi.x0,
        "t": fbi.t,
        "xi": fbi.xi,
        "sigma": result.sigma,
        "verdict": serde_json::to_value(result.verdict).unwrap(),
        "fit": serde_json::to_value(result.fit).unwrap(),
    }))
    .unwrap();
    emit(&common, Some(&fbi_csv(&result, &fp)), &json)
}

fn parse_index(raw: &str) -> Result<f64, CliError> {
    if raw.eq_ignore_ascii_case("inf") {
        return Ok(f64::INFINITY);
    }
    raw.parse()
        .map_err(|_| CliError::Usage(format!("bad integrability index '{raw}'")))
}

fn besov_cmd(
    common: CommonArgs,
    grid_args: GridArgs,
    s: Option<f64>,
    p: Option<String>,
    q: Option<String>,
    homogeneous: bool,
) -> Result<(), CliError> {
    let mut cfg = base_config(&common, "besov-norm")?;
    overlay_grid(&mut cfg, &grid_args);
    cfg.overlay("s", s.map(|v| v.to_string()));
    cfg.overlay("p", p);
    cfg.overlay("q", q);
    if homogeneous {
        cfg.overlay("homogeneous", Some("true".into()));
    }
    cfg.set_default("p", "1");
    cfg.set_default("q", "1");
    let grid = resolve_grid(&cfg)?;
    let (phi, _) = resolve_datum(&cfg, &grid)?;
    let spec = BesovSpec::new(
        cfg.f64("s")?,
        parse_index(cfg.require("p")?)?,
        parse_index(cfg.require("q")?)?,
        cfg.flag("homogeneous"),
    )?;
    let norm = besov_norm(&phi, &spec)?;
    let fp = cfg.fingerprint();
    println!("{}", norm.value);
    let json = serde_json::to_string_pretty(&serde_json::json!({
        "command": "besov-norm",
        "fingerprint": fp,
        "s": spec.s,
        "p": if spec.p.is_infinite() { serde_json::json!("inf") } else { serde_json::json!(spec.p) },
        "q": if spec.q.is_infinite() { serde_json::json!("inf") } else { serde_json::json!(spec.q) },
        "homogeneous": spec.homogeneous,
        "value": norm.value,
        "tail_estimate": norm.tail_estimate,
        "bands": [norm.bands_used.0, norm.bands_used.1],
    }))
    .unwrap();
    emit(&common, None, &json)
}

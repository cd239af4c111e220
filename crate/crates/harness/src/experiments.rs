use crate::config::{Analysis, ExperimentConfig};
use crate::error::{HarnessError, Result};
use crate::plots::{Series, Sweep};
use rayon::prelude::*;
use sepcap_core::complexity::{
    build_mutual_covering, default_lambda_hat, estimate_mean_width, greedy_covering_indices, measure_mutual_complexity,
    theta_exponent, validate_mutual_covering, TheoreticalBounds,
};
use sepcap_core::distance::{empirical_deviation, write_deviation_csv, DeviationReport};
use sepcap_core::geometry::{dist, min_cross_distance};
use sepcap_core::layers::{RandomReluLayer, TwoLayerNetwork};
use sepcap_core::monte_carlo::{write_estimates_csv, EstimatorResult};
use sepcap_core::randomized::{
    binomial_result, calibrate_general_big_c, calibrate_two_point_c, count_separating_neurons, general_lower_bound,
    separation_probability_curve, two_point_lower_bound, write_curve_csv, BoundComparison, BoundConstants, CurveRow,
    SeparationProbe,
};
use sepcap_core::rng::derive_seed;
use sepcap_core::scenarios::{generate, Scenario, ScenarioKind};
use sepcap_core::separability::{max_margin_separator, min_narrowness, DEFAULT_NARROWNESS_ITERATIONS};
use sepcap_core::separator::first_layer_geometry_check;
use sepcap_core::PointSet;
use serde::Serialize;
use serde_json::{json, Value};
use std::time::Instant;

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentResult {
    pub command: String,
    pub summary: Value,
    pub sweeps: Vec<Sweep>,
    /// Body of `trials.csv`.
    #[serde(skip)]
    pub trials_csv: Vec<u8>,
    /// Wall-clock seconds per trial; kept out of the deterministic files.
    #[serde(skip)]
    pub runtimes: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationTrial {
    pub trial: usize,
    pub seed: u64,
    pub n_hat: usize,
    pub separable: bool,
    pub margin: f64,
    pub distance: f64,
    pub image_radius_ok: bool,
    pub error: String,
}

/// Linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    Some(sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo]))
}

fn scenario(cfg: &ExperimentConfig) -> Result<Scenario> {
    generate(&cfg.scenario).map_err(HarnessError::from)
}

/// `α` of the memorization statement for this scenario.
pub fn scenario_alpha(cfg: &ExperimentConfig, sc: &Scenario) -> Result<f64> {
    if let Some(a) = cfg.network.alpha {
        return Ok(a);
    }
    if let ScenarioKind::FiniteLabeled { .. } = cfg.scenario.kind {
        return Ok((sc.x_plus.len().max(1) as f64).ln().sqrt());
    }
    let n = cfg.sweep.width_samples.max(2);
    let seed = derive_seed(cfg.network.seed, 0xa1fa);
    let wm = estimate_mean_width(&sc.x_minus, n, seed)?.estimate;
    let wp = estimate_mean_width(&sc.x_plus, n, derive_seed(seed, 1))?.estimate;
    Ok(wm.max(0.0) + wp.max(0.0))
}

pub fn resolve_lambda_hat(cfg: &ExperimentConfig, alpha: f64) -> Result<f64> {
    match cfg.network.lambda_hat {
        Some(l) => Ok(l),
        None => Ok(default_lambda_hat(alpha, cfg.network.lambda, cfg.scenario.delta, cfg.network.lambda_hat_k)?),
    }
}

fn he_forward(net: &TwoLayerNetwork, s: &PointSet) -> Result<PointSet> {
    let layer = |l: &RandomReluLayer, s: &PointSet| -> Result<PointSet> {
        let scale = (2.0 / l.n_in() as f64).sqrt();
        let mut out = PointSet::empty(l.n_out());
        for x in s.iter() {
            let y: Vec<f64> = l.pre_activations(x)?.into_iter().map(|v| scale * v.max(0.0)).collect();
            out.push(&y)?;
        }
        Ok(out)
    };
    layer(&net.second, &layer(&net.first, s)?)
}

fn separation_trial(
    cfg: &ExperimentConfig,
    sc: &Scenario,
    n_hat: usize,
    lambda_hat: f64,
    trial: usize,
) -> (SeparationTrial, f64) {
    let start = Instant::now();
    let seed = derive_seed(cfg.network.seed, trial as u64);
    let mut rec = SeparationTrial {
        trial,
        seed,
        n_hat,
        separable: false,
        margin: 0.0,
        distance: 0.0,
        image_radius_ok: false,
        error: String::new(),
    };
    let run = || -> Result<(bool, f64, f64, bool)> {
        let net = TwoLayerNetwork::sample(cfg.scenario.dim, cfg.network.n, n_hat, cfg.network.lambda, lambda_hat, seed)?;
        let (im, ip) = if cfg.network.he_scaling {
            (he_forward(&net, &sc.x_minus)?, he_forward(&net, &sc.x_plus)?)
        } else {
            (net.forward(&sc.x_minus)?, net.forward(&sc.x_plus)?)
        };
        let in_ball = im.max_norm().max(ip.max_norm()) <= lambda_hat;
        let r = max_margin_separator(&im, &ip)?;
        Ok((r.separable, r.margin, r.distance, in_ball))
    };
    match run() {
        Ok((separable, margin, distance, in_ball)) => {
            rec.separable = separable;
            rec.margin = margin;
            rec.distance = distance;
            rec.image_radius_ok = in_ball;
        }
        Err(e) => rec.error = e.to_string(),
    }
    (rec, start.elapsed().as_secs_f64())
}

/// Per trial: a fresh two-layer network (seed derived from the network seed
/// and the trial index), both classes pushed through it, and the hard-margin
/// separator of the images.
pub fn run_separation_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let sc = scenario(cfg)?;
    let alpha = scenario_alpha(cfg, &sc)?;
    let lambda_hat = resolve_lambda_hat(cfg, alpha)?;
    let grid = if cfg.sweep.n_hat.is_empty() { vec![cfg.network.n_hat] } else { cfg.sweep.n_hat.clone() };
    let jobs: Vec<(usize, usize)> = grid.iter().flat_map(|&h| (0..cfg.trials).map(move |k| (h, k))).collect();
    let (records, runtimes): (Vec<SeparationTrial>, Vec<f64>) =
        jobs.par_iter().map(|&(h, k)| separation_trial(cfg, &sc, h, lambda_hat, k)).unzip();

    let delta = cfg.scenario.delta;
    let lambda = cfg.network.lambda;
    let ln_predicted = theta_exponent(alpha, lambda, delta, cfg.constants.big_c)
        .map(|e| (cfg.constants.c * lambda * lambda / lambda_hat).ln() - e)
        .ok();
    let predicted = TheoreticalBounds::new(alpha, lambda, lambda_hat, delta, &cfg.constants).ok().map(|b| b.predicted_margin);

    let mut per_width = Vec::new();
    let (mut success_pts, mut margin_pts) = (Vec::new(), Vec::new());
    for &h in &grid {
        let rows: Vec<&SeparationTrial> = records.iter().filter(|r| r.n_hat == h).collect();
        let successes = rows.iter().filter(|r| r.separable).count();
        let mut margins: Vec<f64> = rows.iter().map(|r| r.margin).collect();
        margins.sort_by(f64::total_cmp);
        let frac = successes as f64 / rows.len() as f64;
        let median = quantile(&margins, 0.5).unwrap_or(0.0);
        success_pts.push([h as f64, frac]);
        margin_pts.push([h as f64, median]);
        per_width.push(json!({
            "n_hat": h,
            "trials": rows.len(),
            "success_fraction": frac,
            "errors": rows.iter().filter(|r| !r.error.is_empty()).count(),
            "images_in_ball_fraction": rows.iter().filter(|r| r.image_radius_ok).count() as f64 / rows.len() as f64,
            "margin_q10": quantile(&margins, 0.1),
            "margin_median": median,
            "margin_q90": quantile(&margins, 0.9),
            "median_at_least_predicted": predicted.map(|p| median >= p),
        }));
    }
    let mut summary = json!({
        "scenario": cfg.scenario.kind.name(),
        "n_minus": sc.x_minus.len(),
        "n_plus": sc.x_plus.len(),
        "delta_observed": sc.stats.delta,
        "alpha": alpha,
        "lambda": lambda,
        "lambda_hat": lambda_hat,
        "he_scaling": cfg.network.he_scaling,
        "predicted_margin": predicted,
        "ln_predicted_margin": ln_predicted,
        "per_width": per_width,
    });
    if cfg.has(Analysis::FirstLayerGeometry) {
        summary["first_layer_geometry"] = geometry_summary(cfg, &sc)?;
    }

    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        for r in &records {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    let sweeps = vec![
        Sweep::new("success_vs_n_hat", "separation success", "n_hat", "success fraction", true, vec![Series::markers("empirical", success_pts)]),
        Sweep::new("margin_vs_n_hat", "median margin", "n_hat", "margin", true, vec![Series::markers("median", margin_pts)]),
    ];
    Ok(ExperimentResult { command: "separate".into(), summary, sweeps, trials_csv: buf, runtimes })
}

fn geometry_summary(cfg: &ExperimentConfig, sc: &Scenario) -> Result<Value> {
    let lambda = cfg.network.lambda;
    let mc = build_mutual_covering(&sc.x_plus, &sc.x_minus, lambda / cfg.geometry.c_prime)?;
    let reports: Vec<_> = (0..cfg.trials)
        .into_par_iter()
        .map(|k| {
            let layer = RandomReluLayer::sample(cfg.scenario.dim, cfg.network.n, lambda, derive_seed(cfg.network.seed, k as u64))?;
            first_layer_geometry_check(&layer, &mc, &sc.x_plus, &sc.x_minus, &cfg.geometry).map_err(HarnessError::from)
        })
        .collect::<Result<_>>()?;
    let fractions: Vec<f64> = reports.iter().map(|r| r.pass_fraction).collect();
    Ok(json!({
        "components": mc.centers_minus.len(),
        "pass_fraction_per_layer": fractions,
        "all_pass_fraction": fractions.iter().filter(|&&f| f == 1.0).count() as f64 / fractions.len() as f64,
        "diagnostics": reports.first().map(|r| r.diagnostics.clone()).unwrap_or_default(),
    }))
}

/// Probability that `H[g, τ]` t-separates the classes, swept over `t` and
/// `λ`, with the two-point bound for singletons and the narrowness bound
/// otherwise.
pub fn run_probability_curve(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    if cfg.trials < 2 {
        return Err(HarnessError::Config("prob-curve needs at least 2 trials".into()));
    }
    let start = Instant::now();
    let sc = scenario(cfg)?;
    let ts = if cfg.sweep.t.is_empty() { vec![0.0] } else { cfg.sweep.t.clone() };
    let lambdas = if cfg.sweep.lambda.is_empty() { vec![cfg.network.lambda] } else { cfg.sweep.lambda.clone() };
    let singletons = sc.x_minus.len() == 1 && sc.x_plus.len() == 1;
    let cert = if singletons {
        None
    } else {
        Some(min_narrowness(&sc.x_minus, &sc.x_plus, DEFAULT_NARROWNESS_ITERATIONS, 1e-9)?)
    };
    let constants = BoundConstants { c: cfg.constants.c1, big_c: cfg.constants.big_c };
    let mut rows = Vec::new();
    let mut sweeps = Vec::new();
    for (li, &lambda) in lambdas.iter().enumerate() {
        let probe = SeparationProbe::new(
            sc.x_minus.clone(),
            sc.x_plus.clone(),
            lambda,
            0.0,
            cfg.trials,
            derive_seed(cfg.network.seed, li as u64),
        )?;
        let curve = separation_probability_curve(&probe, &ts)?;
        let (mut emp, mut bound) = (Vec::new(), Vec::new());
        for (&t, e) in ts.iter().zip(curve) {
            let lower = match &cert {
                None => two_point_lower_bound(dist(sc.x_minus.point(0), sc.x_plus.point(0)), lambda, constants.c)?,
                Some(c) => general_lower_bound(t, (1.0 - c.epsilon) * c.gamma, c.epsilon, lambda, constants.big_c)?,
            };
            emp.push([t, e.estimate]);
            bound.push([t, lower]);
            rows.push(CurveRow { d: cfg.scenario.dim, lambda, t, comparison: BoundComparison::new(e, lower, constants) });
        }
        sweeps.push(Sweep::new(
            &format!("probability_vs_t_lambda{li}"),
            &format!("separation probability, lambda = {lambda}"),
            "t",
            "probability",
            false,
            vec![Series::markers("empirical", emp), Series::line("lower bound", bound)],
        ));
    }
    let mut buf = Vec::new();
    write_curve_csv(&mut buf, &rows)?;
    let summary = json!({
        "scenario": cfg.scenario.kind.name(),
        "bound": if singletons { "two_point" } else { "narrowness" },
        "narrowness": cert,
        "points": rows.len(),
        "violations": rows.iter().filter(|r| !r.comparison.consistent).count(),
        "rows": rows,
    });
    Ok(ExperimentResult {
        command: "prob-curve".into(),
        summary,
        sweeps,
        trials_csv: buf,
        runtimes: vec![start.elapsed().as_secs_f64()],
    })
}

/// `empirical_deviation` over a grid of widths; `trials` is the number of
/// layers per width.
pub fn run_deviation_sweep(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let sc = scenario(cfg)?;
    let grid = if cfg.sweep.n.is_empty() { vec![cfg.network.n] } else { cfg.sweep.n.clone() };
    let mut reports: Vec<DeviationReport> = Vec::new();
    let mut runtimes = Vec::new();
    for &n in &grid {
        let start = Instant::now();
        reports.push(empirical_deviation(
            &sc.x_plus,
            &sc.x_minus,
            cfg.network.lambda,
            n,
            cfg.trials,
            cfg.sweep.epsilon,
            cfg.network.seed,
        )?);
        runtimes.push(start.elapsed().as_secs_f64());
    }
    let pts: Vec<[f64; 2]> = reports.iter().map(|r| [r.n_used as f64, r.max_abs_deviation]).collect();
    let first = reports.first().map(|r| (r.n_used as f64, r.max_abs_deviation));
    let fit: Vec<[f64; 2]> = match first {
        Some((n0, d0)) => grid.iter().map(|&n| [n as f64, d0 * (n0 / n as f64).sqrt()]).collect(),
        None => Vec::new(),
    };
    let decreasing = reports.windows(2).all(|w| w[1].max_abs_deviation < w[0].max_abs_deviation);
    let ratio = match (reports.first(), reports.last()) {
        (Some(a), Some(b)) if reports.len() > 1 => Some(a.max_abs_deviation / b.max_abs_deviation),
        _ => None,
    };
    let mut buf = Vec::new();
    write_deviation_csv(&mut buf, &reports)?;
    let summary = json!({
        "scenario": cfg.scenario.kind.name(),
        "lambda": cfg.network.lambda,
        "layers_per_width": cfg.trials,
        "decreasing": decreasing,
        "extreme_ratio": ratio,
        "sqrt_n_ratio": match (grid.first(), grid.last()) {
            (Some(&a), Some(&b)) if grid.len() > 1 => Some((b as f64 / a as f64).sqrt()),
            _ => None,
        },
        "reports": reports.iter().map(|r| json!({
            "n": r.n_used,
            "max_abs_deviation": r.max_abs_deviation,
            "mean_max_deviation": r.mean_max_deviation(),
            "pass_fraction": r.pass_fraction,
            "diagnostics": r.diagnostics,
        })).collect::<Vec<_>>(),
    });
    let sweeps = vec![Sweep::new(
        "deviation_vs_n",
        "maximal deviation",
        "n",
        "deviation",
        true,
        vec![Series::markers("empirical", pts), Series::line("1/sqrt(n)", fit)],
    )];
    Ok(ExperimentResult { command: "deviation".into(), summary, sweeps, trials_csv: buf, runtimes })
}

/// Mutual covering of the scenario with its validation, the complexity
/// parameters, and the greedy uniform covering at radius `c·δ²/λ` for
/// comparison.
pub fn run_mutual_cover(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let start = Instant::now();
    let sc = scenario(cfg)?;
    let lambda = cfg.sweep.covering_lambda.unwrap_or(cfg.network.lambda);
    if !(lambda > 0.0) {
        return Err(HarnessError::Config("the covering scale lambda must be positive".into()));
    }
    let mc = build_mutual_covering(&sc.x_plus, &sc.x_minus, lambda)?;
    let (valid, violations) = validate_mutual_covering(&mc, &sc.x_plus, &sc.x_minus)?;
    let samples = cfg.trials.max(2);
    let complexity = measure_mutual_complexity(&mc, &sc.x_plus, &sc.x_minus, samples, cfg.network.seed)?;
    let delta = min_cross_distance(&sc.x_plus, &sc.x_minus)?;
    let uniform_radius = cfg.constants.c * delta * delta / lambda;
    let all = sc.x_minus.union(&sc.x_plus)?;
    let uniform = greedy_covering_indices(&all, uniform_radius)?.len();
    let mut summary = json!({
        "scenario": cfg.scenario.kind.name(),
        "lambda": lambda,
        "valid": valid,
        "violations": violations,
        "complexity": complexity,
        "mutual_centers": mc.centers_plus.len() + mc.centers_minus.len(),
        "uniform_radius": uniform_radius,
        "uniform_centers": uniform,
        "covering": mc,
    });
    if cfg.has(Analysis::FirstLayerGeometry) {
        summary["first_layer_geometry"] = geometry_summary(cfg, &sc)?;
    }
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(["class", "component", "radius", "width"])?;
        for (class, radii, widths) in [
            ("minus", &mc.radii_minus, &complexity.component_widths_minus),
            ("plus", &mc.radii_plus, &complexity.component_widths_plus),
        ] {
            for (j, (r, wd)) in radii.iter().zip(widths.iter()).enumerate() {
                w.write_record([class.to_string(), j.to_string(), format!("{r:?}"), format!("{wd:?}")])?;
            }
        }
        w.flush()?;
    }
    let radius_pts: Vec<[f64; 2]> = mc.radii_minus.iter().chain(&mc.radii_plus).enumerate().map(|(i, &r)| [i as f64, r]).collect();
    let sweeps = vec![Sweep::new("component_radii", "component radii", "component", "radius", false, vec![Series::markers("radius", radius_pts)])];
    Ok(ExperimentResult {
        command: "mutual-cover".into(),
        summary,
        sweeps,
        trials_csv: buf,
        runtimes: vec![start.elapsed().as_secs_f64()],
    })
}

/// Mean widths of both classes and their union with `trials` Gaussian
/// samples each.
pub fn run_mean_width(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    if cfg.trials < 2 {
        return Err(HarnessError::Config("mean-width needs at least 2 trials".into()));
    }
    let start = Instant::now();
    let sc = scenario(cfg)?;
    let seed = cfg.network.seed;
    let union = sc.x_minus.union(&sc.x_plus)?;
    let rows: Vec<(&str, EstimatorResult)> = vec![
        ("w_minus", estimate_mean_width(&sc.x_minus, cfg.trials, derive_seed(seed, 0))?),
        ("w_plus", estimate_mean_width(&sc.x_plus, cfg.trials, derive_seed(seed, 1))?),
        ("w_union", estimate_mean_width(&union, cfg.trials, derive_seed(seed, 2))?),
    ];
    let mut buf = Vec::new();
    write_estimates_csv(&mut buf, &rows, true)?;
    let summary = json!({
        "scenario": cfg.scenario.kind.name(),
        "estimates": rows.iter().map(|(q, e)| json!({"quantity": q, "estimate": e.estimate, "std_error": e.std_error, "n_samples": e.n_samples, "seed": e.seed})).collect::<Vec<_>>(),
    });
    Ok(ExperimentResult {
        command: "mean-width".into(),
        summary,
        sweeps: Vec::new(),
        trials_csv: buf,
        runtimes: vec![start.elapsed().as_secs_f64()],
    })
}

/// Fits the two-point constant `c`, the narrowness constant `C` and the
/// neuron-count constant `c₁` to Monte Carlo data.
pub fn run_calibrate(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    if cfg.trials < 2 {
        return Err(HarnessError::Config("calibrate needs at least 2 trials".into()));
    }
    let start = Instant::now();
    let seed = cfg.network.seed;
    let d = cfg.scenario.dim;
    let lambdas = if cfg.sweep.lambda.is_empty() { vec![5.0, 10.0, 20.0] } else { cfg.sweep.lambda.clone() };
    let deltas = [0.25, 0.5, 1.0];
    let mut two_point = Vec::new();
    let mut rows = Vec::new();
    for (i, &lambda) in lambdas.iter().enumerate() {
        for (j, &delta) in deltas.iter().enumerate() {
            let xm = PointSet::from_rows(&[vec![0.0; d]])?;
            let mut p = vec![0.0; d];
            p[0] = delta;
            let xp = PointSet::from_rows(&[p])?;
            let probe = SeparationProbe::new(xm, xp, lambda, 0.0, cfg.trials, derive_seed(seed, (i * 16 + j) as u64))?;
            let e = sepcap_core::randomized::estimate_separation_probability(&probe)?;
            rows.push(("two_point".to_string(), lambda, delta, 0.0, e));
            two_point.push((e, delta, lambda));
        }
    }
    let c = calibrate_two_point_c(&two_point)?;

    let sc = scenario(cfg)?;
    let cert = min_narrowness(&sc.x_minus, &sc.x_plus, DEFAULT_NARROWNESS_ITERATIONS, 1e-9)?;
    let gamma_m = (1.0 - cert.epsilon) * cert.gamma;
    let ts = if cfg.sweep.t.is_empty() { vec![0.25 * gamma_m, 0.5 * gamma_m, gamma_m] } else { cfg.sweep.t.clone() };
    let lambda = cfg.network.lambda;
    let probe = SeparationProbe::new(sc.x_minus.clone(), sc.x_plus.clone(), lambda, 0.0, cfg.trials, derive_seed(seed, 0xb16c))?;
    let curve = separation_probability_curve(&probe, &ts)?;
    let mut general = Vec::new();
    for (&t, e) in ts.iter().zip(curve) {
        rows.push(("general".to_string(), lambda, gamma_m, t, e));
        general.push((e, t, gamma_m, cert.epsilon, lambda));
    }
    let big_c = calibrate_general_big_c(&general)?;

    let n = cfg.network.n;
    let delta = cfg.scenario.delta;
    let xm = vec![0.0; d];
    let mut xp = vec![0.0; d];
    xp[0] = delta;
    let mut ratios: Vec<f64> = (0..cfg.trials)
        .into_par_iter()
        .map(|k| {
            let layer = RandomReluLayer::sample(d, n, lambda, derive_seed(seed, 0xc1_0000 + k as u64))?;
            let count = count_separating_neurons(&layer, &xm, &xp)?;
            Ok(2.0 * count as f64 * lambda / (n as f64 * delta))
        })
        .collect::<Result<_>>()?;
    ratios.sort_by(f64::total_cmp);
    let c1 = quantile(&ratios, 0.1).unwrap_or(0.0);
    let counts = binomial_result(ratios.iter().filter(|&&r| r >= c1).count(), ratios.len(), seed);

    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(["family", "lambda", "scale", "t", "estimate", "std_error", "n_samples"])?;
        for (family, l, s, t, e) in &rows {
            w.write_record([family.clone(), format!("{l:?}"), format!("{s:?}"), format!("{t:?}"), format!("{:?}", e.estimate), format!("{:?}", e.std_error), e.n_samples.to_string()])?;
        }
        w.flush()?;
    }
    let summary = json!({
        "two_point_c": c,
        "general_big_c": big_c,
        "narrowness": cert,
        "c1": c1,
        "c1_coverage": counts.estimate,
        "neuron_width": n,
        "lambda": lambda,
        "delta": delta,
    });
    Ok(ExperimentResult {
        command: "calibrate".into(),
        summary,
        sweeps: Vec::new(),
        trials_csv: buf,
        runtimes: vec![start.elapsed().as_secs_f64()],
    })
}

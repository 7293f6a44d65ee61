//! Suite orchestration: build the model and instance families from the
//! config, run every selected suite, and collect deterministic records.
//!
//! Each suite derives its randomness from the base seed and a fixed stream
//! tag, so growing one family never perturbs another.

use std::sync::Arc;

use num_complex::Complex64;

use emtlab::bounds::{
    commutator_envelope_check, corollary_plane_limit, corollary_point_limit, geometric_gammas,
    random_measure, sobolev_bound_check, stability_check, theorem_bk_check, theorem_gb_check,
    weighted_bound_check, BoundReport, SmearingProfile, SpatialFunction, SpacetimeFunction,
    TransferPart, WeightedForm,
};
use emtlab::dyadic::{telescoping_check, Mollifier, ProfileGrid};
use emtlab::inequalities::{
    dominance_integral_check, fourier_decay_check, interpolation_check, random_dominance_pair,
    random_nonincreasing_step, DecayGrid,
};
use emtlab::model::{buchholz_check, OperatorField, QuantumModel};
use emtlab::spacetime::{DiscreteMeasure, EnvelopeParams, FourVector};
use emtlab::util::child_rng;
use rand::Rng;

use crate::config::ExperimentConfig;
use crate::record::{metrics, CheckRecord, Curve, RunRecord, SuiteRecord, Timings};

fn stream_tag(suite: &str, index: u64) -> u64 {
    // FNV-1a over the suite name, folded with the instance index
    let mut h: u64 = 0xcbf29ce484222325;
    for b in suite.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h ^ index
}

fn report_check(id: String, report: &BoundReport) -> CheckRecord {
    CheckRecord {
        id,
        pass: report.pass,
        metrics: metrics([
            ("instances", report.instances.len() as f64),
            ("calibration_sup", report.calibration_sup),
            ("holdout_sup", report.holdout_sup),
            ("zero_rhs_violations", report.zero_rhs_violations as f64),
            ("fitted_constant", report.fitted_constant.unwrap_or(f64::NAN)),
        ]),
    }
}

fn fields(
    config: &ExperimentConfig,
    model: &Arc<QuantumModel>,
    suite: &str,
) -> Vec<OperatorField> {
    (0..config.family.fields)
        .map(|i| {
            let mut rng = child_rng(config.seed, stream_tag(suite, i as u64));
            OperatorField::random(Arc::clone(model), &mut rng)
        })
        .collect()
}

fn measures(config: &ExperimentConfig, suite: &str, offset: u64) -> Vec<DiscreteMeasure> {
    (0..config.family.measures)
        .map(|i| {
            let mut rng = child_rng(config.seed, stream_tag(suite, 1000 + offset + i as u64));
            random_measure(
                &mut rng,
                config.family.atoms_per_measure,
                config.family.spatial_extent,
                config.family.time_extent,
            )
        })
        .collect()
}

/// Run every selected suite and assemble the deterministic record.
pub fn run(config: &ExperimentConfig) -> anyhow::Result<(RunRecord, Timings)> {
    config.validate()?;
    let model = Arc::new(config.build_model()?);
    let params = EnvelopeParams::new(config.lambda, config.kappa)?;
    let weight = config.weight.build()?;
    let mut suites = Vec::new();
    let mut timings = Timings::default();
    for suite in &config.suites {
        let started = std::time::Instant::now();
        let record = match suite.as_str() {
            "envelope" => suite_envelope(config, &model, &params)?,
            "thm-bk" => suite_thm_bk(config, &model, &params)?,
            "thm-gb" => suite_thm_gb(config, &model, &params, &weight)?,
            "stability" => suite_stability(config, &model, &params)?,
            "sobolev" => suite_sobolev(config, &model, &params, &weight)?,
            "weighted" => suite_weighted(config, &model, &params, &weight)?,
            "corollary-point" => suite_corollary_point(config, &model, &weight)?,
            "corollary-plane" => suite_corollary_plane(config, &model, &weight)?,
            "dyadic" => suite_dyadic(config)?,
            "buchholz" => suite_buchholz(config)?,
            "appendix-a" => suite_appendix_a(config)?,
            "appendix-b" => suite_appendix_b(config)?,
            "appendix-c" => suite_appendix_c(config)?,
            other => anyhow::bail!("unknown suite '{other}'"),
        };
        timings.suite_millis.insert(suite.clone(), started.elapsed().as_millis());
        suites.push(record);
    }
    Ok((RunRecord::new(config.hash(), config.seed, suites), timings))
}

fn suite_envelope(
    config: &ExperimentConfig,
    model: &Arc<QuantumModel>,
    params: &EnvelopeParams,
) -> anyhow::Result<SuiteRecord> {
    let mut checks = Vec::new();
    for (i, b) in fields(config, model, "envelope").iter().enumerate() {
        let mut rng = child_rng(config.seed, stream_tag("envelope-b2", i as u64));
        let b2 = OperatorField::random(Arc::clone(model), &mut rng);
        let nus = measures(config, "envelope", 100 * i as u64);
        let pairs: Vec<_> = nus
            .chunks(2)
            .filter(|c| c.len() == 2)
            .map(|c| (c[0].clone(), c[1].clone()))
            .collect();
        let report = commutator_envelope_check(b, &b2, &pairs, params)?;
        checks.push(report_check(format!("field-{i}"), &report));
    }
    Ok(SuiteRecord::new("envelope", checks, vec![]))
}

fn suite_thm_bk(
    config: &ExperimentConfig,
    model: &Arc<QuantumModel>,
    params: &EnvelopeParams,
) -> anyhow::Result<SuiteRecord> {
    let mut checks = Vec::new();
    for (i, b) in fields(config, model, "thm-bk").iter().enumerate() {
        let nus = measures(config, "thm-bk", 100 * i as u64);
        for sign in [TransferPart::Plus, TransferPart::Minus] {
            let report =
                theorem_bk_check(b, config.k, sign, params, &config.energy_grid, &nus)?;
            checks.push(report_check(format!("field-{i}-{}", sign.label()), &report));
        }
    }
    Ok(SuiteRecord::new("thm-bk", checks, vec![]))
}

fn suite_thm_gb(
    config: &ExperimentConfig,
    model: &Arc<QuantumModel>,
    params: &EnvelopeParams,
    weight: &emtlab::model::EnergyWeight,
) -> anyhow::Result<SuiteRecord> {
    let mut checks = Vec::new();
    for (i, b) in fields(config, model, "thm-gb").iter().enumerate() {
        let nus = measures(config, "thm-gb", 100 * i as u64);
        for part in [TransferPart::Plus, TransferPart::Minus, TransferPart::Momentum] {
            let report = theorem_gb_check(b, config.k, part, weight, params, &nus)?;
            checks.push(report_check(format!("field-{i}-{}", part.label()), &report));
        }
    }
    Ok(SuiteRecord::new("thm-gb", checks, vec![]))
}

fn suite_stability(
    config: &ExperimentConfig,
    model: &Arc<QuantumModel>,
    params: &EnvelopeParams,
) -> anyhow::Result<SuiteRecord> {
    let mut checks = Vec::new();
    let profiles = [
        ("gaussian", SmearingProfile::GaussianTime { width: 0.8 }),
        ("power-time", SmearingProfile::PowerLawTime { s: 1.0 + config.kappa + 0.5 }),
        ("power-spacetime", SmearingProfile::PowerLawSpacetime { r: 4.0 + config.kappa + 0.5 }),
    ];
    for (i, b) in fields(config, model, "stability").iter().enumerate() {
        for (label, profile) in profiles {
            let atoms = if matches!(profile, SmearingProfile::PowerLawSpacetime { .. }) {
                4
            } else {
                6
            };
            let chk = stability_check(b, profile, params, 4.0, atoms)?;
            checks.push(CheckRecord {
                id: format!("field-{i}-{label}"),
                pass: chk.pass,
                metrics: metrics([
                    ("base_constant", chk.base_constant),
                    ("smeared_constant", chk.smeared_constant),
                    ("ratio", chk.ratio),
                    ("widened_ratio", chk.widened_ratio),
                    ("widening_drift", chk.widening_drift),
                ]),
            });
        }
    }
    Ok(SuiteRecord::new("stability", checks, vec![]))
}

fn suite_sobolev(
    config: &ExperimentConfig,
    model: &Arc<QuantumModel>,
    params: &EnvelopeParams,
    weight: &emtlab::model::EnergyWeight,
) -> anyhow::Result<SuiteRecord> {
    let mut checks = Vec::new();
    let k = if params.kappa > 3.0 { config.k.max(2.1) } else { config.k };
    for (i, b) in fields(config, model, "sobolev").iter().enumerate() {
        let fs: Vec<SpatialFunction> = (0..config.family.measures.max(4))
            .map(|j| {
                let w = 0.4 + 0.15 * j as f64;
                SpatialFunction::from_fn(7, 0.6, move |x| {
                    (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2.0 * w * w)).exp()
                })
            })
            .collect();
        let report = sobolev_bound_check(b, k, params, 0.3, weight, &fs)?;
        checks.push(report_check(format!("field-{i}"), &report));
    }
    Ok(SuiteRecord::new("sobolev", checks, vec![]))
}

fn suite_weighted(
    config: &ExperimentConfig,
    model: &Arc<QuantumModel>,
    params: &EnvelopeParams,
    weight: &emtlab::model::EnergyWeight,
) -> anyhow::Result<SuiteRecord> {
    let mut checks = Vec::new();
    let kappa = params.kappa;
    let mut forms: Vec<(&str, f64, WeightedForm)> = Vec::new();
    if kappa < 3.0 {
        forms.push((
            "time-weighted",
            config.k,
            WeightedForm::TimeWeighted { sigma: kappa / 6.0 + 0.25 },
        ));
        forms.push((
            "spacetime-weighted",
            config.k,
            WeightedForm::SpaceTimeWeighted { beta: (3.0 - kappa) / 2.0 + 0.1, tau: 0.6 },
        ));
    } else {
        let k = config.k.max(2.1);
        forms.push(("time-weighted", k, WeightedForm::TimeWeighted { sigma: 0.6 }));
        forms.push((
            "spectral-derivative",
            k,
            WeightedForm::SpectralDerivative { sigma: 0.6 },
        ));
    }
    for (i, b) in fields(config, model, "weighted").iter().enumerate() {
        let phis: Vec<SpacetimeFunction> = (0..config.family.measures.max(3).min(6))
            .map(|j| {
                let w = 0.5 + 0.15 * j as f64;
                SpacetimeFunction::from_fn(5, 0.5, 0.5, move |x| {
                    Complex64::new((-x.euclid_norm().powi(2) / (2.0 * w * w)).exp(), 0.0)
                })
            })
            .collect();
        for (label, k, form) in &forms {
            let report = weighted_bound_check(b, *k, params, *form, weight, &phis)?;
            checks.push(report_check(format!("field-{i}-{label}"), &report));
        }
    }
    Ok(SuiteRecord::new("weighted", checks, vec![]))
}

fn generic_probe_point(model: &QuantumModel, seed: u64) -> FourVector {
    // a deterministic pseudo-random point inside the transfer range,
    // generically away from the finitely many exact transfers
    let mut rng = child_rng(seed, stream_tag("probe-point", 0));
    let scale = 0.7 * model.max_transfer_norm().max(1.0);
    FourVector::new(
        rng.gen_range(0.05..0.5) * scale,
        rng.gen_range(-0.5..0.5) * scale,
        rng.gen_range(-0.5..0.5) * scale,
        rng.gen_range(-0.5..0.5) * scale,
    )
}

fn curve_check(id: String, curve: &emtlab::bounds::DecayCurve, threshold: f64) -> CheckRecord {
    CheckRecord {
        id,
        pass: curve.passes(threshold),
        metrics: metrics([
            ("final_over_initial", curve.final_over_initial),
            ("initial", curve.values.first().copied().unwrap_or(0.0)),
            ("final", curve.values.last().copied().unwrap_or(0.0)),
            ("tail_monotone", if curve.tail_monotone { 1.0 } else { 0.0 }),
        ]),
    }
}

fn suite_corollary_point(
    config: &ExperimentConfig,
    model: &Arc<QuantumModel>,
    weight: &emtlab::model::EnergyWeight,
) -> anyhow::Result<SuiteRecord> {
    let gammas = geometric_gammas(config.gamma_steps);
    let mut checks = Vec::new();
    let mut curves = Vec::new();
    for (i, b) in fields(config, model, "corollary-point").iter().enumerate() {
        let q = generic_probe_point(model, config.seed ^ i as u64);
        let curve = corollary_point_limit(
            b,
            config.k.max(0.6),
            weight,
            q,
            config.squeeze_delta,
            config.probe_width,
            &gammas,
        )?;
        checks.push(curve_check(format!("field-{i}-generic"), &curve, 0.1));
        curves.push(Curve {
            label: format!("point-squeeze field-{i}"),
            xs: curve.gammas.clone(),
            ys: curve.values.clone(),
        });
        // probe point far outside every transfer
        let far = FourVector::new(10.0 * model.max_transfer_norm().max(1.0), 0.0, 0.0, 0.0);
        let missed = corollary_point_limit(
            b,
            config.k.max(0.6),
            weight,
            far,
            config.squeeze_delta,
            config.probe_width,
            &gammas,
        )?;
        checks.push(curve_check(format!("field-{i}-missed"), &missed, 1e-3));
    }
    Ok(SuiteRecord::new("corollary-point", checks, curves))
}

fn suite_corollary_plane(
    config: &ExperimentConfig,
    model: &Arc<QuantumModel>,
    weight: &emtlab::model::EnergyWeight,
) -> anyhow::Result<SuiteRecord> {
    let gammas = geometric_gammas(config.gamma_steps);
    let normal = FourVector::new(0.0, 1.0, 0.0, 0.0);
    let mut checks = Vec::new();
    let mut curves = Vec::new();
    for (i, b) in fields(config, model, "corollary-plane").iter().enumerate() {
        let mut rng = child_rng(config.seed, stream_tag("plane-offset", i as u64));
        let r = rng.gen_range(0.05..0.45) * model.max_transfer_norm().max(1.0);
        let curve = corollary_plane_limit(
            b,
            config.k.max(0.6),
            weight,
            normal,
            r,
            config.probe_width,
            &gammas,
        )?;
        checks.push(curve_check(format!("field-{i}-generic"), &curve, 0.1));
        curves.push(Curve {
            label: format!("plane-squeeze field-{i}"),
            xs: curve.gammas.clone(),
            ys: curve.values.clone(),
        });
        let missed = corollary_plane_limit(
            b,
            config.k.max(0.6),
            weight,
            normal,
            10.0 * model.max_transfer_norm().max(1.0),
            config.probe_width,
            &gammas,
        )?;
        checks.push(curve_check(format!("field-{i}-missed"), &missed, 1e-3));
    }
    Ok(SuiteRecord::new("corollary-plane", checks, curves))
}

fn suite_dyadic(config: &ExperimentConfig) -> anyhow::Result<SuiteRecord> {
    let moll = Mollifier::new(config.lambda)?;
    let grid = ProfileGrid {
        log2_len: config.dyadic.log2_len,
        samples_per_scale: config.dyadic.samples_per_scale,
    };
    let mut checks = Vec::new();
    for &k in &config.dyadic.k_values {
        for levels in 1..=config.dyadic.max_levels {
            let chk = telescoping_check(&moll, k, levels, &grid, config.dyadic.tolerance)?;
            checks.push(CheckRecord {
                id: format!("k-{k}-levels-{levels}"),
                pass: chk.pass,
                metrics: metrics([
                    ("k", chk.k),
                    ("N", chk.levels as f64),
                    ("ratio", chk.ratio),
                    ("expected", chk.expected),
                    ("tolerance", chk.tolerance),
                    ("edge_fraction", chk.edge_fraction),
                ]),
            });
        }
    }
    Ok(SuiteRecord::new("dyadic", checks, vec![]))
}

fn suite_buchholz(config: &ExperimentConfig) -> anyhow::Result<SuiteRecord> {
    let mut violations = 0usize;
    let mut worst_excess = 0.0f64;
    let mut ambiguous = 0usize;
    for trial in 0..config.trials {
        let mut rng = child_rng(config.seed, stream_tag("buchholz", trial as u64));
        let dim = rng.gen_range(2..=16);
        let n = rng.gen_range(1..=4u32);
        let m = emtlab::linalg::random_matrix(dim, &mut rng);
        let chk = buchholz_check(&m, n)?;
        if !chk.holds(1e-9) {
            violations += 1;
        }
        if chk.threshold_ambiguous {
            ambiguous += 1;
        }
        let excess = (chk.cp_norm_sq - chk.cp_bound)
            .max(chk.adjoint_cp_norm_sq - chk.adjoint_cp_bound);
        worst_excess = worst_excess.max(excess);
    }
    // nilpotent 2x2 block saturates the first inequality at n = 2
    let mut j = emtlab::linalg::CMatrix::zeros(2, 2);
    j[(0, 1)] = Complex64::new(1.0, 0.0);
    let chk = buchholz_check(&j, 2)?;
    let equality = (chk.cp_norm_sq - chk.cp_bound).abs() < 1e-10;
    let checks = vec![
        CheckRecord {
            id: "random-trials".into(),
            pass: violations == 0,
            metrics: metrics([
                ("trials", config.trials as f64),
                ("violations", violations as f64),
                ("worst_excess", worst_excess),
                ("threshold_ambiguous", ambiguous as f64),
            ]),
        },
        CheckRecord {
            id: "nilpotent-equality".into(),
            pass: equality && chk.holds(1e-9),
            metrics: metrics([
                ("cp_norm_sq", chk.cp_norm_sq),
                ("cp_bound", chk.cp_bound),
            ]),
        },
    ];
    Ok(SuiteRecord::new("buchholz", checks, vec![]))
}

fn suite_appendix_a(config: &ExperimentConfig) -> anyhow::Result<SuiteRecord> {
    let lambda = config.lambda;
    let grid = DecayGrid { per_axis: 1 << 12, extent: 40.0 / lambda, edge_tolerance: 1e-10 };
    let fit = fourier_decay_check(
        |p| Complex64::new(p[0].abs().sqrt() * (-lambda * lambda * p[0] * p[0]).exp(), 0.0),
        1,
        0.5,
        lambda,
        &grid,
    )?;
    let checks = vec![CheckRecord {
        id: "gamma-half-family".into(),
        pass: fit.pass,
        metrics: metrics([
            ("constant", fit.constants[0]),
            ("constant_x2", fit.constants[1]),
            ("constant_x4", fit.constants[2]),
            ("max_drift", fit.max_drift),
            ("hypothesis_ok", if fit.hypothesis_ok { 1.0 } else { 0.0 }),
        ]),
    }];
    Ok(SuiteRecord::new("appendix-a", checks, vec![]))
}

fn suite_appendix_b(config: &ExperimentConfig) -> anyhow::Result<SuiteRecord> {
    let mut violations = 0usize;
    let mut worst = 0.0f64;
    for trial in 0..config.trials {
        let mut rng = child_rng(config.seed, stream_tag("interp", trial as u64));
        let n = rng.gen_range(2..40);
        let f: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let h: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..4.0)).collect();
        let s = rng.gen_range(0.3..4.0);
        let eps = rng.gen_range(0.0..1.0);
        let (lhs, rhs) = interpolation_check(&f, &h, s, eps)?;
        if lhs > rhs + 1e-12 {
            violations += 1;
        }
        worst = worst.max(lhs - rhs);
    }
    let checks = vec![CheckRecord {
        id: "random-trials".into(),
        pass: violations == 0,
        metrics: metrics([
            ("trials", config.trials as f64),
            ("violations", violations as f64),
            ("worst_excess", worst),
        ]),
    }];
    Ok(SuiteRecord::new("appendix-b", checks, vec![]))
}

fn suite_appendix_c(config: &ExperimentConfig) -> anyhow::Result<SuiteRecord> {
    let mut violations = 0usize;
    let mut worst = 0.0f64;
    for trial in 0..config.trials {
        let mut rng = child_rng(config.seed, stream_tag("dominance", trial as u64));
        let atoms = rng.gen_range(2..15);
        let pair = random_dominance_pair(&mut rng, atoms);
        let pieces = rng.gen_range(1..10);
        let f = random_nonincreasing_step(&mut rng, pieces);
        let (lhs, rhs) = dominance_integral_check(&pair, &f)?;
        if lhs > rhs + 1e-12 {
            violations += 1;
        }
        worst = worst.max(lhs - rhs);
    }
    let checks = vec![CheckRecord {
        id: "random-trials".into(),
        pass: violations == 0,
        metrics: metrics([
            ("trials", config.trials as f64),
            ("violations", violations as f64),
            ("worst_excess", worst),
        ]),
    }];
    Ok(SuiteRecord::new("appendix-c", checks, vec![]))
}

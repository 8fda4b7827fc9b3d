//! Built-in experiment presets `fig2`..`fig15`: each reproduces one survey
//! figure as CSV, with optional qualitative shape verification.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use entpower::channels::{ChannelKind, ChannelSpec};
use entpower::gates::{diag_unitary, fixture_haar, haar_random, transposition_unitary};
use entpower::linalg::ComplexMatrix;
use entpower::optim::OptimizerConfig;
use entpower::power::{
    derive_seed, noisy_entangling_power, quenched_average_power, survey, DisorderedGate,
    GateEnsemble, InputSet, MeasureKind, QuenchConfig, SurveyConfig,
};

use crate::csvout::{Cell, Table};

pub const FIGURE_IDS: [&str; 14] = [
    "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12",
    "fig13", "fig14", "fig15",
];

#[derive(Debug, Clone)]
pub struct FigureOptions {
    pub out_dir: PathBuf,
    pub seed: u64,
    pub verify: bool,
    pub realizations: Option<usize>,
    pub n_gates: Option<usize>,
}

/// One labelled curve of (x, mean, standard error) points.
#[derive(Debug, Clone)]
struct Curve {
    label: String,
    points: Vec<(f64, f64, f64)>,
}

impl Curve {
    fn means(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.1).collect()
    }
}

pub fn reproduce(figure: &str, opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    match figure {
        "fig2" | "fig3" | "fig4" | "fig5" => diagonal_quench_figure(figure, opts),
        "fig6" | "fig7" => canonical_quench_figure(figure, opts),
        "fig8" => unequal_quench_figure(opts),
        "fig9" => survey_figure(opts),
        "fig10" => diagonal_noise_figure(opts),
        "fig11" => fixture_noise_figure(opts),
        "fig12" => three_qubit_quench_figure(opts),
        "fig13" => three_qubit_noise_figure("fig13", opts),
        "fig14" => three_qubit_noise_figure("fig14", opts),
        "fig15" => haar8_noise_figure(opts),
        other => bail!(
            "unknown figure id {other:?}; available: {}",
            FIGURE_IDS.join(", ")
        ),
    }
}

fn out_path(opts: &FigureOptions, name: &str) -> PathBuf {
    opts.out_dir.join(name)
}

fn write_curves(path: &Path, x_name: &str, curves: &[Curve]) -> Result<()> {
    let mut table = Table::new(&["curve", x_name, "e_avg", "std_error"]);
    for curve in curves {
        for &(x, mean, sem) in &curve.points {
            table.push(vec![
                Cell::Label(curve.label.clone()),
                Cell::Num(x),
                Cell::Num(mean),
                Cell::Num(sem),
            ]);
        }
    }
    table.write(path)
}

fn verify_or_report(figure: &str, outcome: Result<Vec<String>, String>) -> Result<()> {
    match outcome {
        Ok(notes) => {
            for note in notes {
                println!("{figure} verify: {note}");
            }
            Ok(())
        }
        Err(msg) => bail!("{figure} verification failed: {msg}"),
    }
}

// ---- shape checks ------------------------------------------------------

fn strictly_increasing(curve: &Curve) -> Result<(), String> {
    for pair in curve.points.windows(2) {
        if pair[1].1 <= pair[0].1 {
            return Err(format!(
                "{}: not increasing between x={} and x={}",
                curve.label, pair[0].0, pair[1].0
            ));
        }
    }
    cumulative_significant(curve)
}

fn strictly_decreasing(curve: &Curve) -> Result<(), String> {
    for pair in curve.points.windows(2) {
        if pair[1].1 >= pair[0].1 {
            return Err(format!(
                "{}: not decreasing between x={} and x={}",
                curve.label, pair[0].0, pair[1].0
            ));
        }
    }
    cumulative_significant(curve)
}

fn cumulative_significant(curve: &Curve) -> Result<(), String> {
    let first = curve.points.first().unwrap();
    let last = curve.points.last().unwrap();
    let move_size = (last.1 - first.1).abs();
    let sem = (first.2.powi(2) + last.2.powi(2)).sqrt();
    if move_size < 3.0 * sem {
        return Err(format!(
            "{}: cumulative move {move_size:.3e} below 3 x sem {sem:.3e}",
            curve.label
        ));
    }
    Ok(())
}

/// One interior extremum, significant at three standard errors against
/// both endpoints.
fn interior_extremum(curve: &Curve) -> Result<usize, String> {
    let means = curve.means();
    let n = means.len();
    let hi = (0..n).max_by(|&a, &b| means[a].partial_cmp(&means[b]).unwrap()).unwrap();
    let lo = (0..n).min_by(|&a, &b| means[a].partial_cmp(&means[b]).unwrap()).unwrap();
    let idx = if hi > 0 && hi < n - 1 {
        hi
    } else if lo > 0 && lo < n - 1 {
        lo
    } else {
        return Err(format!("{}: no interior extremum", curve.label));
    };
    let sem_ref = curve.points[idx].2.max(curve.points[0].2).max(curve.points[n - 1].2);
    let against = (means[idx] - means[0]).abs().min((means[idx] - means[n - 1]).abs());
    if against < 3.0 * (2.0f64).sqrt() * sem_ref {
        return Err(format!(
            "{}: extremum at index {idx} not significant ({against:.3e} vs sem {sem_ref:.3e})",
            curve.label
        ));
    }
    Ok(idx)
}

fn non_increasing_within(curve: &Curve, slack: f64) -> Result<(), String> {
    for pair in curve.points.windows(2) {
        if pair[1].1 > pair[0].1 + slack {
            return Err(format!(
                "{}: rises by {:.3e} between x={} and x={}",
                curve.label,
                pair[1].1 - pair[0].1,
                pair[0].0,
                pair[1].0
            ));
        }
    }
    Ok(())
}

fn oscillation_depth(curve: &Curve) -> f64 {
    let means = curve.means();
    let hi = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = means.iter().cloned().fold(f64::INFINITY, f64::min);
    hi - lo
}

// ---- figs 2-5: two-qubit diagonal quench sweeps ------------------------

fn diagonal_quench_figure(figure: &str, opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    let (measure, curve_means): (MeasureKind, Vec<Vec<f64>>) = match figure {
        "fig2" => (
            MeasureKind::Ggm,
            vec![
                vec![PI / 10.0],
                vec![PI / 10.0, PI / 6.0],
                vec![PI / 10.0, PI / 6.0, PI / 4.0],
                vec![PI / 10.0, PI / 6.0, PI / 4.0, 3.0 * PI / 4.0],
            ],
        ),
        "fig3" => (
            MeasureKind::Ggm,
            vec![
                vec![PI],
                vec![PI, PI / 15.0],
                vec![PI, PI / 10.0, PI / 15.0],
                vec![PI, PI / 6.0, PI / 10.0, PI / 15.0],
            ],
        ),
        "fig4" => (
            MeasureKind::Ggm,
            vec![
                vec![PI / 1.3],
                vec![PI, PI / 4.0],
                vec![PI, PI / 6.0, PI / 2.0],
                vec![PI, PI / 4.0, PI / 9.0, PI / 15.0],
            ],
        ),
        "fig5" => (
            MeasureKind::Negativity,
            vec![
                vec![PI / 4.0],
                vec![PI / 2.0, PI / 6.0],
                vec![PI / 2.0, PI / 10.0, PI / 15.0],
                vec![PI / 2.0, PI / 6.0, PI / 8.0, PI / 10.0],
            ],
        ),
        _ => unreachable!(),
    };
    // The diagonal reuse path is cheap, and the shallow interior extrema
    // need this many realizations to resolve at three standard errors.
    let realizations = opts.realizations.unwrap_or(200_000);
    let sigmas: Vec<f64> = (0..10).map(|i| 1.5 * i as f64 / 9.0).collect();

    let curves: Vec<Curve> = curve_means
        .iter()
        .enumerate()
        .map(|(ci, means)| {
            let points: Vec<(f64, f64, f64)> = sigmas
                .par_iter()
                .map(|&sd| {
                    let qc = QuenchConfig {
                        means: means.clone(),
                        sds: vec![sd; means.len()],
                        realizations,
                        seed: derive_seed(opts.seed, ci as u64),
                        reuse_optimal_input: true,
                        keep_values: false,
                    };
                    let out = quenched_average_power(
                        &DisorderedGate::Diagonal { dim: 4 },
                        measure,
                        InputSet::FullySeparable { n_qubits: 2 },
                        &qc,
                        &OptimizerConfig::default(),
                    )
                    .expect("valid quench");
                    (sd, out.mean, out.std_error)
                })
                .collect();
            Curve {
                label: format!("u_d,{}", means.len()),
                points,
            }
        })
        .collect();

    let path = out_path(opts, &format!("{figure}.csv"));
    write_curves(&path, "sigma", &curves)?;

    if opts.verify {
        let outcome = (|| -> Result<Vec<String>, String> {
            let mut notes = Vec::new();
            match figure {
                "fig2" => {
                    for curve in &curves {
                        strictly_increasing(curve)?;
                    }
                    notes.push("all four curves increase with disorder".into());
                }
                "fig3" => {
                    // The four-phase curve's shape depends on which slot
                    // holds which mean, which the caption leaves open;
                    // it is reported, not asserted.
                    for curve in curves.iter().take(3) {
                        strictly_decreasing(curve)?;
                    }
                    let last = curves.last().unwrap();
                    let shape = match (strictly_decreasing(last), interior_extremum(last)) {
                        (Ok(()), _) => "decreasing".to_string(),
                        (_, Ok(idx)) => format!("interior extremum at sigma = {:.3}", last.points[idx].0),
                        _ => "flat within noise".to_string(),
                    };
                    notes.push(format!(
                        "first three curves decrease; u_d,4 (slot placement open): {shape}"
                    ));
                }
                "fig4" | "fig5" => {
                    let mut found = 0;
                    for curve in &curves {
                        if let Ok(idx) = interior_extremum(curve) {
                            notes.push(format!(
                                "{}: interior extremum at sigma = {:.3}",
                                curve.label, curve.points[idx].0
                            ));
                            found += 1;
                        }
                    }
                    if found == 0 {
                        return Err("no curve shows a significant interior extremum".into());
                    }
                }
                _ => unreachable!(),
            }
            Ok(notes)
        })();
        verify_or_report(figure, outcome)?;
    }
    Ok(vec![path])
}

// ---- figs 6-7: equal-coupling canonical gate quench ---------------------

fn canonical_quench_figure(figure: &str, opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    let measure = if figure == "fig6" {
        MeasureKind::Ggm
    } else {
        MeasureKind::Negativity
    };
    let realizations = opts.realizations.unwrap_or(10_000);
    let j_grid: Vec<f64> = (0..41).map(|i| PI * i as f64 / 40.0).collect();
    let sigmas = [0.0, 0.2, 0.4];

    let curves: Vec<Curve> = sigmas
        .iter()
        .map(|&sd| {
            let points: Vec<(f64, f64, f64)> = j_grid
                .par_iter()
                .map(|&j_mean| {
                    let qc = QuenchConfig {
                        means: vec![j_mean],
                        sds: vec![sd],
                        realizations,
                        seed: opts.seed,
                        reuse_optimal_input: true,
                        keep_values: false,
                    };
                    let out = quenched_average_power(
                        &DisorderedGate::CanonicalEqualJ,
                        measure,
                        InputSet::FullySeparable { n_qubits: 2 },
                        &qc,
                        &OptimizerConfig::default(),
                    )
                    .expect("valid quench");
                    (j_mean, out.mean, out.std_error)
                })
                .collect();
            Curve {
                label: format!("sigma={sd}"),
                points,
            }
        })
        .collect();

    let path = out_path(opts, &format!("{figure}.csv"));
    write_curves(&path, "j_mean", &curves)?;

    if opts.verify {
        let outcome = (|| -> Result<Vec<String>, String> {
            let depths: Vec<f64> = curves.iter().map(oscillation_depth).collect();
            if !(depths[0] > depths[1] && depths[1] > depths[2]) {
                return Err(format!("oscillation depth not decreasing: {depths:?}"));
            }
            Ok(vec![format!(
                "oscillation depth shrinks with disorder: {:.3} > {:.3} > {:.3}",
                depths[0], depths[1], depths[2]
            )])
        })();
        verify_or_report(figure, outcome)?;
    }
    Ok(vec![path])
}

// ---- fig 8: unequal couplings, J1 fixed, J2 = J3 disordered -------------

fn unequal_quench_figure(opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    let realizations = opts.realizations.unwrap_or(200);
    let j_grid: Vec<f64> = (0..25).map(|i| PI * i as f64 / 24.0).collect();
    let sigmas = [0.0, 0.2, 0.4];
    let cfg = OptimizerConfig {
        restarts: 8,
        max_iters: 1500,
        ftol: 1e-10,
    };

    let curves: Vec<Curve> = sigmas
        .iter()
        .map(|&sd| {
            let points: Vec<(f64, f64, f64)> = j_grid
                .par_iter()
                .map(|&j_mean| {
                    let qc = QuenchConfig {
                        means: vec![j_mean],
                        sds: vec![sd],
                        realizations,
                        seed: opts.seed,
                        reuse_optimal_input: false,
                        keep_values: false,
                    };
                    let out = quenched_average_power(
                        &DisorderedGate::CanonicalLockedJ23 { j1: 0.7 },
                        MeasureKind::Ggm,
                        InputSet::FullySeparable { n_qubits: 2 },
                        &qc,
                        &cfg,
                    )
                    .expect("valid quench");
                    (j_mean, out.mean, out.std_error)
                })
                .collect();
            Curve {
                label: format!("sigma={sd}"),
                points,
            }
        })
        .collect();

    let path = out_path(opts, "fig8.csv");
    write_curves(&path, "j3_mean", &curves)?;

    if opts.verify {
        let outcome = (|| -> Result<Vec<String>, String> {
            let depths: Vec<f64> = curves.iter().map(oscillation_depth).collect();
            if !(depths[0] > depths[1] && depths[1] > depths[2]) {
                return Err(format!("oscillation depth not decreasing: {depths:?}"));
            }
            Ok(vec![format!(
                "oscillation depth shrinks with disorder: {:.3} > {:.3} > {:.3}",
                depths[0], depths[1], depths[2]
            )])
        })();
        verify_or_report("fig8", outcome)?;
    }
    Ok(vec![path])
}

// ---- fig 9: random-gate survey with noisy inputs ------------------------

fn survey_figure(opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    let n_gates = opts.n_gates.unwrap_or(1000);
    let cfg = OptimizerConfig {
        restarts: 25,
        max_iters: 2000,
        ftol: 1e-10,
    };
    let settings: Vec<(String, Vec<ChannelSpec>)> = vec![
        ("noiseless@0".into(), vec![]),
        (
            "adc@0.2".into(),
            vec![ChannelSpec::new(ChannelKind::Adc, 0.2, 0).unwrap()],
        ),
        (
            "adc@0.8".into(),
            vec![ChannelSpec::new(ChannelKind::Adc, 0.8, 0).unwrap()],
        ),
        (
            "dpc@0.2".into(),
            vec![ChannelSpec::new(ChannelKind::Dpc, 0.2, 0).unwrap()],
        ),
        (
            "dpc@0.8".into(),
            vec![ChannelSpec::new(ChannelKind::Dpc, 0.8, 0).unwrap()],
        ),
    ];

    let mut hist = Table::new(&["setting", "bin_lo", "bin_hi", "mass"]);
    let mut errors = Table::new(&["setting", "gate_index", "power", "delta"]);
    let mut summary = Table::new(&["setting", "n_gates", "mean", "sd"]);
    let mut stats_by_setting = Vec::new();

    for (label, channels) in &settings {
        let stats = survey(
            GateEnsemble::CanonicalUniformJ,
            channels,
            MeasureKind::Negativity,
            InputSet::FullySeparable { n_qubits: 2 },
            &cfg,
            &SurveyConfig {
                n_gates,
                seed: opts.seed,
                compute_delta: !channels.is_empty(),
            },
        )?;
        for (b, mass) in stats.bins.iter().enumerate() {
            hist.push(vec![
                Cell::Label(label.clone()),
                Cell::Num(b as f64 * 0.02),
                Cell::Num((b + 1) as f64 * 0.02),
                Cell::Num(*mass),
            ]);
        }
        for (i, rec) in stats.records.iter().enumerate() {
            if let Some(delta) = rec.delta {
                errors.push(vec![
                    Cell::Label(label.clone()),
                    Cell::Int(i as u64),
                    Cell::Num(rec.power),
                    Cell::Num(delta),
                ]);
            }
        }
        summary.push(vec![
            Cell::Label(label.clone()),
            Cell::Int(n_gates as u64),
            Cell::Num(stats.mean),
            Cell::Num(stats.sd),
        ]);
        stats_by_setting.push((label.clone(), stats));
    }

    let hist_path = out_path(opts, "fig9_hist.csv");
    let err_path = out_path(opts, "fig9_error.csv");
    let summary_path = out_path(opts, "fig9_summary.csv");
    hist.write(&hist_path)?;
    errors.write(&err_path)?;
    summary.write(&summary_path)?;

    if opts.verify {
        let outcome = (|| -> Result<Vec<String>, String> {
            let mean_of = |label: &str| {
                stats_by_setting
                    .iter()
                    .find(|(l, _)| l == label)
                    .map(|(_, s)| s.mean)
                    .unwrap()
            };
            let noiseless = mean_of("noiseless@0");
            for ch in ["adc", "dpc"] {
                let weak = mean_of(&format!("{ch}@0.2"));
                let strong = mean_of(&format!("{ch}@0.8"));
                if !(noiseless > weak && weak > strong) {
                    return Err(format!(
                        "{ch}: means not decreasing with p ({noiseless:.4} / {weak:.4} / {strong:.4})"
                    ));
                }
            }
            if mean_of("dpc@0.8") >= mean_of("adc@0.8") {
                return Err("depolarizing noise did not reduce power below damping".into());
            }
            for (label, stats) in &stats_by_setting {
                for rec in &stats.records {
                    if let Some(delta) = rec.delta {
                        if delta < -1e-9 {
                            return Err(format!("{label}: negative error delta {delta:.2e}"));
                        }
                    }
                }
            }
            let mean_delta = |label: &str| {
                let (_, stats) = stats_by_setting.iter().find(|(l, _)| l == label).unwrap();
                let deltas: Vec<f64> = stats.records.iter().filter_map(|r| r.delta).collect();
                deltas.iter().sum::<f64>() / deltas.len() as f64
            };
            for ch in ["adc", "dpc"] {
                let weak = mean_delta(&format!("{ch}@0.2"));
                let strong = mean_delta(&format!("{ch}@0.8"));
                if strong <= weak {
                    return Err(format!(
                        "{ch}: mean input-mismatch error did not grow with p ({weak:.2e} vs {strong:.2e})"
                    ));
                }
            }
            Ok(vec![format!(
                "means fall with p, depolarizing strongest, errors grow with p (n = {n_gates})"
            )])
        })();
        verify_or_report("fig9", outcome)?;
    }
    Ok(vec![hist_path, err_path, summary_path])
}

// ---- fig 10: diagonal gates under single-party noise --------------------

fn diagonal_noise_figure(opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    let gates = [
        ("u_d,2", diag_unitary(4, &[PI / 2.0, PI / 6.0])?),
        (
            "u_d,4",
            diag_unitary(4, &[PI / 2.0, PI / 6.0, PI / 8.0, PI / 10.0])?,
        ),
    ];
    let kinds = [ChannelKind::Adc, ChannelKind::Pdc, ChannelKind::Dpc];
    let ps: Vec<f64> = (0..21).map(|i| i as f64 / 20.0).collect();
    let cfg = OptimizerConfig {
        restarts: 25,
        max_iters: 2000,
        ftol: 1e-11,
    };

    let mut curves = Vec::new();
    for (name, gate) in &gates {
        for kind in kinds {
            let points: Vec<(f64, f64, f64)> = ps
                .par_iter()
                .enumerate()
                .map(|(i, &p)| {
                    let specs = [ChannelSpec::new(kind, p, 0).unwrap()];
                    let value = noisy_entangling_power(
                        gate,
                        &specs,
                        MeasureKind::Negativity,
                        InputSet::FullySeparable { n_qubits: 2 },
                        &cfg,
                        derive_seed(opts.seed, (i * 10) as u64),
                    )
                    .expect("valid pipeline")
                    .value;
                    (p, value, 0.0)
                })
                .collect();
            curves.push(Curve {
                label: format!("{name}:{kind}"),
                points,
            });
        }
    }

    let path = out_path(opts, "fig10.csv");
    write_curves(&path, "p", &curves)?;

    if opts.verify {
        let outcome = (|| -> Result<Vec<String>, String> {
            for curve in &curves {
                non_increasing_within(curve, 1e-7)?;
            }
            for g in 0..2 {
                let adc = &curves[g * 3];
                let pdc = &curves[g * 3 + 1];
                let dpc = &curves[g * 3 + 2];
                for i in 1..adc.points.len() {
                    let p = adc.points[i].0;
                    let (a, pd, dp) = (adc.points[i].1, pdc.points[i].1, dpc.points[i].1);
                    if (pd - dp).abs() > 1e-5 {
                        return Err(format!(
                            "{}: PDC and DPC split at p={p} ({pd:.6} vs {dp:.6})",
                            adc.label
                        ));
                    }
                    if pd > a + 1e-7 {
                        return Err(format!(
                            "{}: dephasing exceeds damping at p={p}",
                            adc.label
                        ));
                    }
                    // All channels destroy everything at p = 1; the strict
                    // gap is an interior statement.
                    if (0.05..0.95).contains(&p) && pd > a - 1e-6 {
                        return Err(format!(
                            "{}: damping is not strictly most robust at p={p}",
                            adc.label
                        ));
                    }
                }
            }
            Ok(vec!["PDC = DPC < ADC along both gate families".into()])
        })();
        verify_or_report("fig10", outcome)?;
    }
    Ok(vec![path])
}

// ---- fig 11: five reference unitaries under dephasing -------------------

fn fixture_noise_figure(opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    let ps: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
    let cfg = OptimizerConfig {
        restarts: 30,
        max_iters: 2000,
        ftol: 1e-11,
    };
    let curves: Vec<Curve> = (1..=5usize)
        .map(|k| {
            let gate = fixture_haar(k).expect("fixture index in range");
            let points: Vec<(f64, f64, f64)> = ps
                .par_iter()
                .enumerate()
                .map(|(i, &p)| {
                    let specs = [
                        ChannelSpec::new(ChannelKind::Pdc, p, 0).unwrap(),
                        ChannelSpec::new(ChannelKind::Pdc, p, 1).unwrap(),
                    ];
                    let value = noisy_entangling_power(
                        &gate,
                        &specs,
                        MeasureKind::Negativity,
                        InputSet::FullySeparable { n_qubits: 2 },
                        &cfg,
                        derive_seed(opts.seed, (k * 100 + i) as u64),
                    )
                    .expect("valid pipeline")
                    .value;
                    (p, value, 0.0)
                })
                .collect();
            Curve {
                label: format!("u{k}"),
                points,
            }
        })
        .collect();

    let path = out_path(opts, "fig11.csv");
    write_curves(&path, "p", &curves)?;

    if opts.verify {
        let outcome = (|| -> Result<Vec<String>, String> {
            for curve in &curves {
                non_increasing_within(curve, 1e-6)?;
            }
            for a in 0..5 {
                for b in (a + 1)..5 {
                    let mut above = false;
                    let mut below = false;
                    for i in 0..ps.len() {
                        let gap = curves[a].points[i].1 - curves[b].points[i].1;
                        if gap > 1e-6 {
                            above = true;
                        }
                        if gap < -1e-6 {
                            below = true;
                        }
                    }
                    if above && below {
                        return Ok(vec![format!(
                            "ordering of u{} and u{} reverses with noise strength",
                            a + 1,
                            b + 1
                        )]);
                    }
                }
            }
            Err("no pair ordering reversal found".into())
        })();
        verify_or_report("fig11", outcome)?;
    }
    Ok(vec![path])
}

// ---- fig 12: three-qubit diagonal quench, BS vs FS ----------------------

// The preset means are deliberately the literal four-decimal values the
// figure is defined with, not π/1.3 and π/4.
#[allow(clippy::approx_constant)]
fn three_qubit_quench_figure(opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    let sigmas: Vec<f64> = (0..10).map(|i| 1.5 * i as f64 / 9.0).collect();
    let phi_means = [2.4161, 0.7854];
    let reopt_realizations = opts.realizations.unwrap_or(200);
    let cfg = OptimizerConfig {
        restarts: 10,
        max_iters: 2000,
        ftol: 1e-10,
    };

    let mut curves = Vec::new();
    for &phi in &phi_means {
        for (set_label, input_set, reuse, realizations) in [
            ("bs", InputSet::Biseparable12_3, true, opts.realizations.unwrap_or(200_000)),
            (
                "fs",
                InputSet::FullySeparable { n_qubits: 3 },
                false,
                reopt_realizations,
            ),
        ] {
            let points: Vec<(f64, f64, f64)> = sigmas
                .par_iter()
                .map(|&sd| {
                    let qc = QuenchConfig {
                        means: vec![phi],
                        sds: vec![sd],
                        realizations,
                        seed: opts.seed,
                        reuse_optimal_input: reuse,
                        keep_values: false,
                    };
                    let out = quenched_average_power(
                        &DisorderedGate::Diagonal { dim: 8 },
                        MeasureKind::Ggm,
                        input_set,
                        &qc,
                        &cfg,
                    )
                    .expect("valid quench");
                    (sd, out.mean, out.std_error)
                })
                .collect();
            curves.push(Curve {
                label: format!("{set_label}@{phi}"),
                points,
            });
        }
    }

    let path = out_path(opts, "fig12.csv");
    write_curves(&path, "sigma", &curves)?;

    if opts.verify {
        let outcome = (|| -> Result<Vec<String>, String> {
            let find = |label: &str| curves.iter().find(|c| c.label == label).unwrap();
            let mut notes = Vec::new();
            let idx = interior_extremum(find("bs@2.4161"))?;
            notes.push(format!(
                "bs@2.4161 nonmonotone with extremum at sigma = {:.3}",
                find("bs@2.4161").points[idx].0
            ));
            let fs_hi = find("fs@2.4161");
            non_increasing_within(fs_hi, 3.0 * fs_hi.points.iter().map(|p| p.2).fold(0.0, f64::max))?;
            notes.push("fs@2.4161 non-increasing".into());
            for label in ["bs@0.7854", "fs@0.7854"] {
                let curve = find(label);
                cumulative_significant(curve)?;
                let rise = curve.points.last().unwrap().1 - curve.points[0].1;
                if rise <= 0.0 {
                    return Err(format!("{label}: not rising (moves {rise:.3e})"));
                }
                notes.push(format!("{label} rises by {rise:.4}"));
            }
            Ok(notes)
        })();
        verify_or_report("fig12", outcome)?;
    }
    Ok(vec![path])
}

// ---- figs 13-14: three-qubit monogamy-score power under noise -----------

fn three_qubit_noise_figure(figure: &str, opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    let gate: ComplexMatrix = if figure == "fig13" {
        diag_unitary(8, &[PI])?
    } else {
        transposition_unitary(8, 1, 7)?
    };
    let ps: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
    let kinds = [ChannelKind::Adc, ChannelKind::Pdc, ChannelKind::Dpc];
    let cfg = OptimizerConfig {
        restarts: 40,
        max_iters: 2500,
        ftol: 1e-11,
    };

    let mut curves = Vec::new();
    for kind in kinds {
        for (set_label, input_set) in [
            ("fs", InputSet::FullySeparable { n_qubits: 3 }),
            ("bs", InputSet::Biseparable12_3),
        ] {
            let points: Vec<(f64, f64, f64)> = ps
                .par_iter()
                .enumerate()
                .map(|(i, &p)| {
                    let channels: Vec<ChannelSpec> = (0..3)
                        .map(|t| ChannelSpec::new(kind, p, t).unwrap())
                        .collect();
                    let value = noisy_entangling_power(
                        &gate,
                        &channels,
                        MeasureKind::MonogamyNegSq { nodal: 1 },
                        input_set,
                        &cfg,
                        derive_seed(opts.seed, (i * 7) as u64),
                    )
                    .expect("valid pipeline")
                    .value;
                    (p, value, 0.0)
                })
                .collect();
            curves.push(Curve {
                label: format!("{set_label}:{kind}"),
                points,
            });
        }
    }

    let path = out_path(opts, &format!("{figure}.csv"));
    write_curves(&path, "p", &curves)?;

    if opts.verify {
        let outcome = (|| -> Result<Vec<String>, String> {
            let mut notes = Vec::new();
            for curve in &curves {
                non_increasing_within(curve, 1e-6)?;
            }
            let find = |label: String| curves.iter().find(|c| c.label == label).unwrap();
            // Channel-robustness ordering, reported per input set.
            for set_label in ["fs", "bs"] {
                let adc = find(format!("{set_label}:adc"));
                let pdc = find(format!("{set_label}:pdc"));
                let dpc = find(format!("{set_label}:dpc"));
                let mut adc_most_robust = true;
                for i in 1..ps.len() {
                    if pdc.points[i].1 > adc.points[i].1 + 1e-6
                        || dpc.points[i].1 > pdc.points[i].1 + 1e-6
                    {
                        adc_most_robust = false;
                    }
                }
                notes.push(format!(
                    "{set_label}: measured channel ordering is {}",
                    if adc_most_robust {
                        "ADC >= PDC >= DPC (damping most robust)"
                    } else {
                        "mixed; printed DPC-largest hierarchy not reproduced"
                    }
                ));
            }
            if figure == "fig13" {
                // DPC crossover: FS overtakes BS at some p; ADC and PDC
                // keep BS on top everywhere.
                let fs_dpc = find("fs:dpc".into());
                let bs_dpc = find("bs:dpc".into());
                let crossover = fs_dpc
                    .points
                    .iter()
                    .zip(&bs_dpc.points)
                    .find(|(f, b)| f.1 > b.1 + 1e-7);
                let Some((fs_point, _)) = crossover else {
                    return Err("no DPC crossover from biseparable to fully separable".into());
                };
                notes.push(format!(
                    "fig13: FS overtakes BS under DPC at p = {}",
                    fs_point.0
                ));
                for ch in ["adc", "pdc"] {
                    let fs = find(format!("fs:{ch}"));
                    let bs = find(format!("bs:{ch}"));
                    for (b, f) in bs.points.iter().zip(&fs.points) {
                        if b.1 < f.1 - 1e-9 {
                            return Err(format!("{ch}: BS fell below FS at p = {}", b.0));
                        }
                    }
                }
                notes.push("ADC/PDC keep the biseparable curve on top".into());
            } else {
                // The transposition gate: report the FS/BS relation.
                let mut fs_ge_bs = true;
                for kind in ["adc", "pdc", "dpc"] {
                    let fs = find(format!("fs:{kind}"));
                    let bs = find(format!("bs:{kind}"));
                    for i in 0..ps.len() {
                        if fs.points[i].1 < bs.points[i].1 - 1e-6 {
                            fs_ge_bs = false;
                        }
                    }
                }
                notes.push(format!(
                    "fig14: fully separable inputs {} biseparable ones",
                    if fs_ge_bs { "match or beat" } else { "do not dominate" }
                ));
            }
            Ok(notes)
        })();
        verify_or_report(figure, outcome)?;
    }
    Ok(vec![path])
}

// ---- fig 15: Haar-random eight-dimensional gates under dephasing --------

fn haar8_noise_figure(opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    let seeds = [2u64, 3, 5];
    let ps: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
    let cfg = OptimizerConfig {
        restarts: 40,
        max_iters: 2500,
        ftol: 1e-11,
    };

    let mut curves = Vec::new();
    for &gate_seed in &seeds {
        let gate = haar_random(8, gate_seed)?;
        for (set_label, input_set) in [
            ("fs", InputSet::FullySeparable { n_qubits: 3 }),
            ("bs", InputSet::Biseparable12_3),
        ] {
            let points: Vec<(f64, f64, f64)> = ps
                .par_iter()
                .enumerate()
                .map(|(i, &p)| {
                    let channels: Vec<ChannelSpec> = (0..3)
                        .map(|t| ChannelSpec::new(ChannelKind::Pdc, p, t).unwrap())
                        .collect();
                    let value = noisy_entangling_power(
                        &gate,
                        &channels,
                        MeasureKind::MonogamyNegSq { nodal: 1 },
                        input_set,
                        &cfg,
                        derive_seed(opts.seed, gate_seed * 100 + i as u64),
                    )
                    .expect("valid pipeline")
                    .value;
                    (p, value, 0.0)
                })
                .collect();
            curves.push(Curve {
                label: format!("{set_label}:haar{gate_seed}"),
                points,
            });
        }
    }

    let path = out_path(opts, "fig15.csv");
    write_curves(&path, "p", &curves)?;

    if opts.verify {
        let outcome = (|| -> Result<Vec<String>, String> {
            // The monogamy score is a difference of decaying terms, so
            // individual points may tick upward; only the overall decay
            // is checked.
            for curve in &curves {
                let first = curve.points.first().unwrap().1;
                let last = curve.points.last().unwrap().1;
                if last > first - 1e-4 {
                    return Err(format!(
                        "{}: no overall decay ({first:.4} -> {last:.4})",
                        curve.label
                    ));
                }
            }
            // Ordering among the gates changes with p on the FS curves.
            let fs: Vec<&Curve> = curves.iter().filter(|c| c.label.starts_with("fs")).collect();
            for a in 0..fs.len() {
                for b in (a + 1)..fs.len() {
                    let mut above = false;
                    let mut below = false;
                    for i in 1..ps.len() {
                        let gap = fs[a].points[i].1 - fs[b].points[i].1;
                        if gap > 1e-6 {
                            above = true;
                        }
                        if gap < -1e-6 {
                            below = true;
                        }
                    }
                    if above && below {
                        return Ok(vec![format!(
                            "ordering of {} and {} reverses with noise strength",
                            fs[a].label, fs[b].label
                        )]);
                    }
                }
            }
            Err("no gate-pair ordering reversal on the fully separable curves".into())
        })();
        verify_or_report("fig15", outcome)?;
    }
    Ok(vec![path])
}

pub fn ensure_out_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

//! The power engine: ideal entangling power, noisy-input power, quenched
//! averages over Gaussian parameter disorder, the input-mismatch error
//! metric and random-gate surveys.
//!
//! Every stochastic entry point takes a master seed. Parallel work units
//! (quench realizations, surveyed gates) each own a counter-derived RNG
//! stream and are reduced in index order, so results are bitwise
//! reproducible regardless of the worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use rayon::prelude::*;

use crate::channels::{kraus_set, lift_to_site, ChannelSpec};
use crate::gates::{canonical_nl, diag_unitary, haar_random_with_rng};
use crate::linalg::{ComplexMatrix, StateVector, SubsystemLayout};
use crate::measures::{ggm, monogamy_score_neg_sq, negativity, Bipartition};
use crate::optim::{maximize_multistart, OptimizerConfig};
use crate::states::{bisep_state, product_state, BisepParams, ProductParams};
use crate::{Error, Result};

/// Number of histogram bins a survey spreads over [0, 0.5].
pub const SURVEY_BINS: usize = 25;

/// What to maximize on the gate output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    /// Generalized geometric measure; pure outputs only.
    Ggm,
    /// Negativity across first qubit : rest.
    Negativity,
    /// Squared-negativity monogamy score with the given nodal qubit.
    MonogamyNegSq { nodal: usize },
}

impl std::fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MeasureKind::Ggm => write!(f, "ggm"),
            MeasureKind::Negativity => write!(f, "negativity"),
            MeasureKind::MonogamyNegSq { nodal } => write!(f, "monogamy_neg_sq(nodal={nodal})"),
        }
    }
}

/// The manifold the optimizer searches over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputSet {
    FullySeparable { n_qubits: usize },
    /// Three-qubit states product across the 12:3 cut.
    Biseparable12_3,
}

impl InputSet {
    pub fn n_qubits(&self) -> usize {
        match self {
            InputSet::FullySeparable { n_qubits } => *n_qubits,
            InputSet::Biseparable12_3 => 3,
        }
    }

    fn bounds(&self) -> Vec<(f64, f64)> {
        use std::f64::consts::{PI, TAU};
        match self {
            InputSet::FullySeparable { n_qubits } => {
                let mut b = vec![(0.0, PI); *n_qubits];
                b.extend(vec![(0.0, TAU); *n_qubits]);
                b
            }
            InputSet::Biseparable12_3 => {
                let mut b = vec![(0.0, PI / 2.0); 3];
                b.extend(vec![(0.0, TAU); 3]);
                b.push((0.0, PI));
                b.push((0.0, TAU));
                b
            }
        }
    }

    fn decode(&self, x: &[f64]) -> InputParams {
        match self {
            InputSet::FullySeparable { .. } => InputParams::Product(ProductParams::from_flat(x)),
            InputSet::Biseparable12_3 => InputParams::Bisep(BisepParams::from_flat(x)),
        }
    }
}

/// A point on an input manifold.
#[derive(Debug, Clone, PartialEq)]
pub enum InputParams {
    Product(ProductParams),
    Bisep(BisepParams),
}

impl InputParams {
    pub fn build(&self) -> StateVector {
        match self {
            InputParams::Product(p) => product_state(p),
            InputParams::Bisep(p) => bisep_state(p),
        }
    }

    fn canonical(&self) -> Self {
        match self {
            InputParams::Product(p) => InputParams::Product(p.canonicalize()),
            InputParams::Bisep(p) => InputParams::Bisep(p.wrapped()),
        }
    }

    /// Fixed product input |01⟩ (θ = 0, π/2).
    pub fn basis_01() -> Self {
        InputParams::Product(
            ProductParams::new(vec![0.0, std::f64::consts::FRAC_PI_2], vec![0.0, 0.0])
                .expect("equal lengths"),
        )
    }

    /// Fixed balanced product input ⊗_k (|0⟩ + |1⟩)/√2 on n qubits.
    pub fn balanced_plus(n: usize) -> Self {
        InputParams::Product(
            ProductParams::new(vec![std::f64::consts::FRAC_PI_4; n], vec![0.0; n])
                .expect("equal lengths"),
        )
    }
}

/// Optimal value, the input achieving it and optimizer diagnostics.
#[derive(Debug, Clone)]
pub struct PowerResult {
    pub value: f64,
    pub argmax: InputParams,
    pub measure: MeasureKind,
    pub restart_values: Vec<f64>,
    pub iterations: usize,
}

/// Ideal entangling power: maximize the measure of U|ψ⟩ over the input
/// manifold.
pub fn entangling_power(
    gate: &ComplexMatrix,
    measure: MeasureKind,
    input_set: InputSet,
    cfg: &OptimizerConfig,
    seed: u64,
) -> Result<PowerResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    power_with_rng(gate, &[], measure, input_set, cfg, &mut rng)
}

/// Noisy entangling power: local channels hit the product input before
/// the gate acts; the measure is evaluated on the mixed output.
pub fn noisy_entangling_power(
    gate: &ComplexMatrix,
    channels: &[ChannelSpec],
    measure: MeasureKind,
    input_set: InputSet,
    cfg: &OptimizerConfig,
    seed: u64,
) -> Result<PowerResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    power_with_rng(gate, channels, measure, input_set, cfg, &mut rng)
}

/// The biseparable set holds states product across exactly the 12:3 cut,
/// so its pair factor is entangled; fully separable points are a boundary
/// stratum outside the set. Restarts whose pair negativity falls below
/// this threshold are treated as having left the manifold.
const BS_MIN_PAIR_NEGATIVITY: f64 = 1e-3;

pub(crate) fn power_with_rng(
    gate: &ComplexMatrix,
    channels: &[ChannelSpec],
    measure: MeasureKind,
    input_set: InputSet,
    cfg: &OptimizerConfig,
    rng: &mut ChaCha8Rng,
) -> Result<PowerResult> {
    let pipeline = Pipeline::new(gate, channels, measure, input_set)?;
    let objective = |x: &[f64]| pipeline.eval_flat(x);
    // The Bell ⊗ |+⟩ point seeds the biseparable search so the
    // pair-entangled branch is always among the candidates.
    let extra_starts: Vec<Vec<f64>> = match input_set {
        InputSet::Biseparable12_3 => vec![BisepParams::bell_times_plus().to_flat()],
        InputSet::FullySeparable { .. } => vec![],
    };
    let outcome = maximize_multistart(objective, &input_set.bounds(), &extra_starts, cfg, rng)?;
    let (best_x, best_f) = match input_set {
        InputSet::Biseparable12_3 => {
            let qualified = outcome
                .restarts
                .iter()
                .filter(|(x, _)| {
                    BisepParams::from_flat(x).pair_negativity() >= BS_MIN_PAIR_NEGATIVITY
                })
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
            match qualified {
                Some((x, v)) => (x.clone(), *v),
                None => (outcome.best_x.clone(), outcome.best_f),
            }
        }
        InputSet::FullySeparable { .. } => (outcome.best_x.clone(), outcome.best_f),
    };
    Ok(PowerResult {
        value: best_f,
        argmax: input_set.decode(&best_x).canonical(),
        measure,
        restart_values: outcome.restart_values(),
        iterations: outcome.total_iters,
    })
}

/// Evaluate the (noisy) measure at one specific input, without any
/// optimization.
pub fn evaluate_measure_at(
    gate: &ComplexMatrix,
    channels: &[ChannelSpec],
    input: &InputParams,
    measure: MeasureKind,
) -> Result<f64> {
    let input_set = match input {
        InputParams::Product(p) => InputSet::FullySeparable {
            n_qubits: p.n_qubits(),
        },
        InputParams::Bisep(_) => InputSet::Biseparable12_3,
    };
    let pipeline = Pipeline::new(gate, channels, measure, input_set)?;
    Ok(pipeline.eval_input(input))
}

/// Error of reusing the noiseless-optimal input under noise:
/// noisy power at its own optimum minus the noisy measure at the
/// noiseless optimum. Nonnegative up to optimizer tolerance.
pub fn power_error_delta(
    gate: &ComplexMatrix,
    channels: &[ChannelSpec],
    measure: MeasureKind,
    input_set: InputSet,
    cfg: &OptimizerConfig,
    seed: u64,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    delta_with_rng(gate, channels, measure, input_set, cfg, &mut rng)
}

fn delta_with_rng(
    gate: &ComplexMatrix,
    channels: &[ChannelSpec],
    measure: MeasureKind,
    input_set: InputSet,
    cfg: &OptimizerConfig,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let noiseless = power_with_rng(gate, &[], measure, input_set, cfg, rng)?;
    let reused = evaluate_measure_at(gate, channels, &noiseless.argmax, measure)?;
    let noisy = power_with_rng(gate, channels, measure, input_set, cfg, rng)?;
    Ok(noisy.value - reused)
}

/// Gate family with Gaussian-disordered parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum DisorderedGate {
    /// Diagonal gate of the given dimension; the disordered phases fill
    /// the last `k` diagonal slots, `k` = number of supplied means.
    Diagonal { dim: usize },
    /// Canonical gate with J1 = J2 = J3 drawn from one Gaussian.
    CanonicalEqualJ,
    /// Canonical gate with three independently disordered couplings.
    CanonicalIndependentJ,
    /// Canonical gate with fixed J1 and J2 = J3 drawn together.
    CanonicalLockedJ23 { j1: f64 },
}

impl DisorderedGate {
    fn expected_param_count(&self) -> Option<usize> {
        match self {
            DisorderedGate::Diagonal { .. } => None, // 1..=dim, checked below
            DisorderedGate::CanonicalEqualJ => Some(1),
            DisorderedGate::CanonicalIndependentJ => Some(3),
            DisorderedGate::CanonicalLockedJ23 { .. } => Some(1),
        }
    }

    fn realize(&self, params: &[f64]) -> Result<ComplexMatrix> {
        match self {
            DisorderedGate::Diagonal { dim } => diag_unitary(*dim, params),
            DisorderedGate::CanonicalEqualJ => {
                let j = params[0];
                Ok(canonical_nl(j, j, j))
            }
            DisorderedGate::CanonicalIndependentJ => {
                Ok(canonical_nl(params[0], params[1], params[2]))
            }
            DisorderedGate::CanonicalLockedJ23 { j1 } => {
                Ok(canonical_nl(*j1, params[0], params[0]))
            }
        }
    }

    /// The input known to stay optimal across every realization, when one
    /// exists: the balanced product state for two-qubit diagonal gates,
    /// |01⟩ for the equal-coupling canonical gate, and the Bell ⊗ |+⟩
    /// state for single-phase diagonal gates on biseparable inputs.
    fn fixed_argmax(&self, input_set: InputSet, n_params: usize) -> Option<InputParams> {
        match (self, input_set) {
            (DisorderedGate::Diagonal { dim: 4 }, InputSet::FullySeparable { n_qubits: 2 }) => {
                Some(InputParams::balanced_plus(2))
            }
            (DisorderedGate::Diagonal { .. }, InputSet::Biseparable12_3) if n_params == 1 => {
                Some(InputParams::Bisep(BisepParams::bell_times_plus()))
            }
            (DisorderedGate::CanonicalEqualJ, InputSet::FullySeparable { n_qubits: 2 }) => {
                Some(InputParams::basis_01())
            }
            _ => None,
        }
    }
}

/// Disorder means and widths, realization count and seeding for a quench.
#[derive(Debug, Clone, PartialEq)]
pub struct QuenchConfig {
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
    pub realizations: usize,
    pub seed: u64,
    /// Evaluate at the family's known disorder-independent optimal input
    /// instead of re-optimizing per realization, when such an input
    /// exists.
    pub reuse_optimal_input: bool,
    /// Retain the per-realization power values in the result.
    pub keep_values: bool,
}

impl QuenchConfig {
    pub fn new(means: Vec<f64>, sds: Vec<f64>) -> Self {
        Self {
            means,
            sds,
            realizations: 10_000,
            seed: 0,
            reuse_optimal_input: true,
            keep_values: false,
        }
    }
}

/// Mean power over realizations and the standard error of that mean.
#[derive(Debug, Clone, PartialEq)]
pub struct QuenchResult {
    pub mean: f64,
    pub std_error: f64,
    pub realizations: usize,
    /// Per-realization values, in realization order, when requested.
    pub values: Option<Vec<f64>>,
}

/// Quenched average entangling power: draw the disordered parameters from
/// their Gaussians, evaluate the (noiseless) power per realization,
/// average. Realization r always consumes RNG stream r, so sweeps over
/// the disorder width share their underlying draws.
pub fn quenched_average_power(
    family: &DisorderedGate,
    measure: MeasureKind,
    input_set: InputSet,
    qc: &QuenchConfig,
    cfg: &OptimizerConfig,
) -> Result<QuenchResult> {
    if qc.realizations == 0 {
        return Err(Error::BadQuenchConfig {
            reason: "realizations must be at least 1".into(),
        });
    }
    if qc.means.len() != qc.sds.len() {
        return Err(Error::BadQuenchConfig {
            reason: format!("{} means vs {} sds", qc.means.len(), qc.sds.len()),
        });
    }
    if let Some(bad) = qc.sds.iter().find(|s| **s < 0.0 || !s.is_finite()) {
        return Err(Error::BadQuenchConfig {
            reason: format!("negative or non-finite sd {bad}"),
        });
    }
    match family.expected_param_count() {
        Some(n) if n != qc.means.len() => {
            return Err(Error::BadQuenchConfig {
                reason: format!("family needs {n} parameters, got {}", qc.means.len()),
            });
        }
        None => {
            if let DisorderedGate::Diagonal { dim } = family {
                if qc.means.is_empty() || qc.means.len() > *dim {
                    return Err(Error::BadQuenchConfig {
                        reason: format!(
                            "diagonal family of dim {dim} takes 1..={dim} phases, got {}",
                            qc.means.len()
                        ),
                    });
                }
            }
        }
        _ => {}
    }

    // Validate the pipeline once up front so per-realization evaluation
    // cannot fail.
    let probe_gate = family.realize(&qc.means)?;
    Pipeline::new(&probe_gate, &[], measure, input_set)?;

    let reference = if qc.reuse_optimal_input {
        family.fixed_argmax(input_set, qc.means.len())
    } else {
        None
    };

    // A zero-width quench is the ideal power; one realization suffices.
    let n = if qc.sds.iter().all(|&s| s == 0.0) {
        1
    } else {
        qc.realizations
    };

    let values: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(qc.seed);
            rng.set_stream(r as u64);
            let params: Vec<f64> = qc
                .means
                .iter()
                .zip(&qc.sds)
                .map(|(&m, &s)| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    m + s * z
                })
                .collect();
            let gate = family.realize(&params).expect("validated family");
            match &reference {
                Some(input) => evaluate_measure_at(&gate, &[], input, measure)
                    .expect("validated pipeline"),
                None => {
                    power_with_rng(&gate, &[], measure, input_set, cfg, &mut rng)
                        .expect("validated pipeline")
                        .value
                }
            }
        })
        .collect();

    Ok(summarize(values, qc.keep_values))
}

fn summarize(values: Vec<f64>, keep_values: bool) -> QuenchResult {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let std_error = if n > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        (var / n as f64).sqrt()
    } else {
        0.0
    };
    QuenchResult {
        mean,
        std_error,
        realizations: n,
        values: keep_values.then_some(values),
    }
}

/// Random-gate ensemble for surveys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateEnsemble {
    /// Canonical gates with couplings uniform on [0, π/2].
    CanonicalUniformJ,
    /// Haar-random unitaries of the given dimension (4 or 8).
    Haar { dim: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurveyConfig {
    pub n_gates: usize,
    pub seed: u64,
    /// Also compute, per gate, the error of reusing the noiseless-optimal
    /// input under the survey's channels.
    pub compute_delta: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurveyRecord {
    pub power: f64,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SurveyStats {
    /// Normalized frequency over 25 equal bins spanning [0, 0.5].
    pub bins: Vec<f64>,
    pub mean: f64,
    pub sd: f64,
    pub records: Vec<SurveyRecord>,
}

/// Optimize the (noisy) power of `n_gates` random gates and histogram the
/// results over [0, 0.5].
pub fn survey(
    ensemble: GateEnsemble,
    channels: &[ChannelSpec],
    measure: MeasureKind,
    input_set: InputSet,
    cfg: &OptimizerConfig,
    sc: &SurveyConfig,
) -> Result<SurveyStats> {
    if sc.n_gates == 0 {
        return Err(Error::BadQuenchConfig {
            reason: "survey needs at least one gate".into(),
        });
    }
    // Validate once before fanning out.
    let probe = match ensemble {
        GateEnsemble::CanonicalUniformJ => canonical_nl(0.1, 0.2, 0.3),
        GateEnsemble::Haar { dim } => {
            let mut rng = ChaCha8Rng::seed_from_u64(sc.seed);
            crate::gates::haar_random(dim, 0)?; // dimension check
            haar_random_with_rng(dim, &mut rng)
        }
    };
    Pipeline::new(&probe, channels, measure, input_set)?;
    let uniform_j = Uniform::new(0.0, std::f64::consts::FRAC_PI_2).expect("valid range");

    let records: Vec<SurveyRecord> = (0..sc.n_gates)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(sc.seed);
            rng.set_stream(i as u64);
            let gate = match ensemble {
                GateEnsemble::CanonicalUniformJ => {
                    let j1 = uniform_j.sample(&mut rng);
                    let j2 = uniform_j.sample(&mut rng);
                    let j3 = uniform_j.sample(&mut rng);
                    canonical_nl(j1, j2, j3)
                }
                GateEnsemble::Haar { dim } => haar_random_with_rng(dim, &mut rng),
            };
            let power = power_with_rng(&gate, channels, measure, input_set, cfg, &mut rng)
                .expect("validated pipeline")
                .value;
            let delta = if sc.compute_delta && !channels.is_empty() {
                Some(
                    delta_with_rng(&gate, channels, measure, input_set, cfg, &mut rng)
                        .expect("validated pipeline"),
                )
            } else {
                None
            };
            SurveyRecord { power, delta }
        })
        .collect();

    let mut bins = vec![0.0; SURVEY_BINS];
    for rec in &records {
        let mut b = (rec.power / 0.5 * SURVEY_BINS as f64).floor() as isize;
        b = b.clamp(0, SURVEY_BINS as isize - 1);
        bins[b as usize] += 1.0;
    }
    for b in &mut bins {
        *b /= sc.n_gates as f64;
    }
    let mean = records.iter().map(|r| r.power).sum::<f64>() / sc.n_gates as f64;
    let sd = if sc.n_gates > 1 {
        (records
            .iter()
            .map(|r| (r.power - mean).powi(2))
            .sum::<f64>()
            / (sc.n_gates as f64 - 1.0))
            .sqrt()
    } else {
        0.0
    };

    Ok(SurveyStats {
        bins,
        mean,
        sd,
        records,
    })
}

/// Decorrelated child seed for an indexed work item (splitmix64 step).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One validated gate + channels + measure evaluation path.
struct Pipeline {
    gate: ComplexMatrix,
    gate_adjoint: ComplexMatrix,
    /// Lifted Kraus operator sets, one per channel spec, in order.
    lifted: Vec<Vec<ComplexMatrix>>,
    layout: SubsystemLayout,
    measure: MeasureKind,
    input_set: InputSet,
    negativity_cut: Bipartition,
}

impl Pipeline {
    fn new(
        gate: &ComplexMatrix,
        channels: &[ChannelSpec],
        measure: MeasureKind,
        input_set: InputSet,
    ) -> Result<Self> {
        let n = input_set.n_qubits();
        if n < 2 {
            return Err(Error::BadDimension {
                dim: 1 << n,
                min: 4,
                max: 32,
            });
        }
        let layout = SubsystemLayout::qubits(n);
        if !gate.is_square() || gate.rows() != layout.total_dim() {
            return Err(Error::DimMismatch {
                expected: layout.total_dim(),
                found: gate.rows(),
            });
        }
        if matches!(measure, MeasureKind::Ggm) && !channels.is_empty() {
            return Err(Error::GgmWithNoise);
        }
        if let MeasureKind::MonogamyNegSq { nodal } = measure {
            if n < 3 {
                return Err(Error::TooFewQubits { qubits: n });
            }
            if nodal >= n {
                return Err(Error::SiteOutOfRange {
                    index: nodal,
                    sites: n,
                });
            }
        }
        let mut lifted = Vec::with_capacity(channels.len());
        for spec in channels {
            let ops = kraus_set(spec.kind, spec.p)?;
            let mut group = Vec::with_capacity(ops.len());
            for op in &ops {
                group.push(lift_to_site(op, spec.target, &layout)?);
            }
            lifted.push(group);
        }
        Ok(Self {
            gate: gate.clone(),
            gate_adjoint: gate.adjoint(),
            lifted,
            layout,
            measure,
            input_set,
            negativity_cut: Bipartition::new(vec![0], n)?,
        })
    }

    fn eval_flat(&self, x: &[f64]) -> f64 {
        self.eval_input(&self.input_set.decode(x))
    }

    /// Evolve one input and measure it. The output is renormalized before
    /// measuring so gates known only to limited precision (the printed
    /// reference unitaries) stay usable; for exact unitaries this is a
    /// no-op at machine precision.
    fn eval_input(&self, input: &InputParams) -> f64 {
        let psi = input.build();
        if self.lifted.is_empty() {
            let out = self.gate.apply(&psi).normalized();
            match self.measure {
                MeasureKind::Ggm => ggm(&out, &self.layout).expect("validated pipeline"),
                MeasureKind::Negativity => {
                    negativity(&out.outer(), &self.negativity_cut, &self.layout)
                        .expect("validated pipeline")
                }
                MeasureKind::MonogamyNegSq { nodal } => {
                    monogamy_score_neg_sq(&out.outer(), nodal, &self.layout)
                        .expect("validated pipeline")
                }
            }
        } else {
            let mut rho = psi.outer();
            for group in &self.lifted {
                let d = rho.rows();
                let mut acc = ComplexMatrix::zeros(d, d);
                for k in group {
                    acc = acc.add(&k.conjugate_by(&rho));
                }
                rho = acc;
            }
            let out = self.gate.matmul(&rho).matmul(&self.gate_adjoint);
            let out = out.scale(num_complex::Complex64::new(1.0 / out.trace().re, 0.0));
            match self.measure {
                MeasureKind::Ggm => unreachable!("rejected at construction"),
                MeasureKind::Negativity => {
                    negativity(&out, &self.negativity_cut, &self.layout)
                        .expect("validated pipeline")
                }
                MeasureKind::MonogamyNegSq { nodal } => {
                    monogamy_score_neg_sq(&out, nodal, &self.layout)
                        .expect("validated pipeline")
                }
            }
        }
    }
}

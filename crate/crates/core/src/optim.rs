//! Multi-start Nelder-Mead simplex search. The objectives maximized here
//! are smooth, low-dimensional and periodic in every coordinate, so the
//! search runs unconstrained and restart points are drawn uniformly from
//! the fundamental box.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Restart count, per-restart iteration cap and the function-spread
/// tolerance the simplex must reach.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub ftol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 50,
            max_iters: 2000,
            ftol: 1e-9,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::BadOptimizerConfig {
                reason: "restarts must be at least 1".into(),
            });
        }
        if self.ftol <= 0.0 || !self.ftol.is_finite() {
            return Err(Error::BadOptimizerConfig {
                reason: format!("ftol = {} must be positive", self.ftol),
            });
        }
        Ok(())
    }
}

/// Best point found over all restarts plus per-restart diagnostics.
#[derive(Debug, Clone)]
pub struct OptimOutcome {
    pub best_x: Vec<f64>,
    pub best_f: f64,
    /// Converged point and value of each restart, in execution order.
    pub restarts: Vec<(Vec<f64>, f64)>,
    pub total_iters: usize,
}

impl OptimOutcome {
    pub fn restart_values(&self) -> Vec<f64> {
        self.restarts.iter().map(|(_, v)| *v).collect()
    }
}

/// Maximize `f` with Nelder-Mead runs started from each of
/// `extra_starts` and then from `cfg.restarts` points drawn uniformly
/// from `bounds`. The search itself is unconstrained. Random restart
/// points come sequentially from `rng`, so a run with more restarts
/// extends (never discards) a shorter run's sequence.
pub fn maximize_multistart<F: Fn(&[f64]) -> f64>(
    f: F,
    bounds: &[(f64, f64)],
    extra_starts: &[Vec<f64>],
    cfg: &OptimizerConfig,
    rng: &mut ChaCha8Rng,
) -> Result<OptimOutcome> {
    cfg.validate()?;
    let dim = bounds.len();
    let neg = |x: &[f64]| -f(x);
    let steps: Vec<f64> = bounds.iter().map(|&(lo, hi)| 0.25 * (hi - lo)).collect();

    let mut best_x = vec![0.0; dim];
    let mut best_f = f64::NEG_INFINITY;
    let mut restarts = Vec::with_capacity(extra_starts.len() + cfg.restarts);
    let mut total_iters = 0;

    let starts = extra_starts
        .iter()
        .cloned()
        .chain((0..cfg.restarts).map(|_| {
            bounds
                .iter()
                .map(|&(lo, hi)| rng.random_range(lo..hi))
                .collect()
        }));
    for x0 in starts {
        let run = nelder_mead_min(&neg, &x0, &steps, cfg.max_iters, cfg.ftol);
        total_iters += run.iters;
        let value = -run.fmin;
        if value > best_f {
            best_f = value;
            best_x = run.xmin.clone();
        }
        restarts.push((run.xmin, value));
    }

    Ok(OptimOutcome {
        best_x,
        best_f,
        restarts,
        total_iters,
    })
}

struct NmRun {
    xmin: Vec<f64>,
    fmin: f64,
    iters: usize,
}

/// Standard Nelder-Mead (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2), stopping when the simplex function spread drops under
/// `ftol` or the iteration cap is hit.
fn nelder_mead_min<F: Fn(&[f64]) -> f64>(
    f: &F,
    x0: &[f64],
    steps: &[f64],
    max_iters: usize,
    ftol: f64,
) -> NmRun {
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let dim = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += steps[i];
        let fx = f(&x);
        simplex.push((x, fx));
    }

    let mut iters = 0;
    while iters < max_iters {
        iters += 1;
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let spread = simplex[dim].1 - simplex[0].1;
        if spread.abs() < ftol {
            break;
        }

        // Centroid of all but the worst vertex.
        let mut centroid = vec![0.0; dim];
        for (x, _) in &simplex[..dim] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dim as f64;
            }
        }
        let worst = simplex[dim].clone();
        let second_worst_f = simplex[dim - 1].1;

        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&worst.0)
            .map(|(c, w)| c + ALPHA * (c - w))
            .collect();
        let f_reflect = f(&reflect);

        if f_reflect < simplex[0].1 {
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + GAMMA * (c - w))
                .collect();
            let f_expand = f(&expand);
            simplex[dim] = if f_expand < f_reflect {
                (expand, f_expand)
            } else {
                (reflect, f_reflect)
            };
        } else if f_reflect < second_worst_f {
            simplex[dim] = (reflect, f_reflect);
        } else {
            let contract: Vec<f64> = if f_reflect < worst.1 {
                // Outside contraction.
                centroid
                    .iter()
                    .zip(&reflect)
                    .map(|(c, r)| c + RHO * (r - c))
                    .collect()
            } else {
                // Inside contraction.
                centroid
                    .iter()
                    .zip(&worst.0)
                    .map(|(c, w)| c + RHO * (w - c))
                    .collect()
            };
            let f_contract = f(&contract);
            if f_contract < worst.1.min(f_reflect) {
                simplex[dim] = (contract, f_contract);
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    for (x, b) in vertex.0.iter_mut().zip(&best) {
                        *x = b + SIGMA * (*x - b);
                    }
                    vertex.1 = f(&vertex.0);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    NmRun {
        xmin: simplex[0].0.clone(),
        fmin: simplex[0].1,
        iters,
    }
}

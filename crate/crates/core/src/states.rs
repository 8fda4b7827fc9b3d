//! Parameterized input-state manifolds: fully separable N-qubit products
//! and three-qubit states that are product across the 12:3 cut.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::linalg::StateVector;
use crate::{Error, Result};

/// Angles (θ_k, ξ_k) of a product state ⊗_k (cos θ_k |0⟩ + sin θ_k e^{iξ_k} |1⟩).
#[derive(Debug, Clone, PartialEq)]
pub struct ProductParams {
    pub thetas: Vec<f64>,
    pub xis: Vec<f64>,
}

impl ProductParams {
    pub fn new(thetas: Vec<f64>, xis: Vec<f64>) -> Result<Self> {
        if thetas.len() != xis.len() {
            return Err(Error::ParamLengthMismatch {
                thetas: thetas.len(),
                xis: xis.len(),
            });
        }
        Ok(Self { thetas, xis })
    }

    pub fn n_qubits(&self) -> usize {
        self.thetas.len()
    }

    /// Flat layout `[θ_1.., ξ_1..]` used by the optimizer.
    pub fn from_flat(x: &[f64]) -> Self {
        let n = x.len() / 2;
        Self {
            thetas: x[..n].to_vec(),
            xis: x[n..].to_vec(),
        }
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = self.thetas.clone();
        out.extend_from_slice(&self.xis);
        out
    }

    /// Fold every pair into θ ∈ [0, π], ξ ∈ [0, 2π) without changing the
    /// state. Idempotent.
    pub fn canonicalize(&self) -> Self {
        let mut thetas = Vec::with_capacity(self.n_qubits());
        let mut xis = Vec::with_capacity(self.n_qubits());
        for (&t, &x) in self.thetas.iter().zip(&self.xis) {
            let (tc, xc) = fold_angle_pair(t, x);
            thetas.push(tc);
            xis.push(xc);
        }
        Self { thetas, xis }
    }
}

/// Fold (θ, ξ) into [0, π] × [0, 2π) representing the same single-qubit state.
fn fold_angle_pair(theta: f64, xi: f64) -> (f64, f64) {
    let mut t = theta.rem_euclid(TAU);
    let mut shift = 0.0;
    if t > PI {
        // cos(2π - t) = cos t and sin(2π - t) = -sin t, absorbed as ξ + π.
        t = TAU - t;
        shift = PI;
    }
    (t, (xi + shift).rem_euclid(TAU))
}

/// ⊗_k (cos θ_k |0⟩ + sin θ_k e^{iξ_k} |1⟩), first qubit most significant.
pub fn product_state(p: &ProductParams) -> StateVector {
    let mut psi = StateVector::new(vec![Complex64::ONE]);
    for (&t, &x) in p.thetas.iter().zip(&p.xis) {
        let local = StateVector::new(vec![
            Complex64::new(t.cos(), 0.0),
            Complex64::from_polar(t.sin(), x),
        ]);
        psi = psi.tensor(&local);
    }
    psi
}

/// Parameters of |ψ_12⟩ ⊗ |ψ_3⟩: hypersphere magnitudes for the pair
/// amplitudes a_00..a_11 plus relative phases, and one Bloch pair for the
/// lone qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct BisepParams {
    /// θ′_1, θ′_2, θ′_3 hypersphere angles of (|a_00|, |a_01|, |a_10|, |a_11|).
    pub pair_thetas: [f64; 3],
    /// Relative phases ξ′_1, ξ′_2, ξ′_3 on a_01, a_10, a_11 (a_00 kept real).
    pub pair_xis: [f64; 3],
    pub single_theta: f64,
    pub single_xi: f64,
}

impl BisepParams {
    pub const FLAT_LEN: usize = 8;

    pub fn from_flat(x: &[f64]) -> Self {
        assert_eq!(x.len(), Self::FLAT_LEN);
        Self {
            pair_thetas: [x[0], x[1], x[2]],
            pair_xis: [x[3], x[4], x[5]],
            single_theta: x[6],
            single_xi: x[7],
        }
    }

    pub fn to_flat(&self) -> Vec<f64> {
        vec![
            self.pair_thetas[0],
            self.pair_thetas[1],
            self.pair_thetas[2],
            self.pair_xis[0],
            self.pair_xis[1],
            self.pair_xis[2],
            self.single_theta,
            self.single_xi,
        ]
    }

    /// Bell pair (|00⟩ + |11⟩)/√2 on qubits 1,2 times (|0⟩ + |1⟩)/√2.
    pub fn bell_times_plus() -> Self {
        Self {
            pair_thetas: [PI / 4.0, PI / 2.0, PI / 2.0],
            pair_xis: [0.0, 0.0, 0.0],
            single_theta: PI / 4.0,
            single_xi: 0.0,
        }
    }

    /// Wrap all angles into [0, 2π) for reporting.
    pub fn wrapped(&self) -> Self {
        let w = |v: f64| v.rem_euclid(TAU);
        Self {
            pair_thetas: self.pair_thetas.map(w),
            pair_xis: self.pair_xis.map(w),
            single_theta: w(self.single_theta),
            single_xi: w(self.single_xi),
        }
    }

    /// Negativity of the pure two-qubit factor, |a_00 a_11 - a_01 a_10|;
    /// zero exactly when the pair is itself a product.
    pub fn pair_negativity(&self) -> f64 {
        let [t1, t2, t3] = self.pair_thetas;
        let [x1, x2, x3] = self.pair_xis;
        let a00 = Complex64::new(t1.cos(), 0.0);
        let a01 = Complex64::from_polar(t1.sin() * t2.cos(), x1);
        let a10 = Complex64::from_polar(t1.sin() * t2.sin() * t3.cos(), x2);
        let a11 = Complex64::from_polar(t1.sin() * t2.sin() * t3.sin(), x3);
        (a00 * a11 - a01 * a10).norm()
    }
}

/// Three-qubit state product across the 12:3 bipartition.
pub fn bisep_state(p: &BisepParams) -> StateVector {
    let [t1, t2, t3] = p.pair_thetas;
    let [x1, x2, x3] = p.pair_xis;
    let a00 = Complex64::new(t1.cos(), 0.0);
    let a01 = Complex64::from_polar(t1.sin() * t2.cos(), x1);
    let a10 = Complex64::from_polar(t1.sin() * t2.sin() * t3.cos(), x2);
    let a11 = Complex64::from_polar(t1.sin() * t2.sin() * t3.sin(), x3);
    let pair = StateVector::new(vec![a00, a01, a10, a11]);
    let single = StateVector::new(vec![
        Complex64::new(p.single_theta.cos(), 0.0),
        Complex64::from_polar(p.single_theta.sin(), p.single_xi),
    ]);
    pair.tensor(&single)
}

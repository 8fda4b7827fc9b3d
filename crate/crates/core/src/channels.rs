//! Single-qubit Kraus channels (amplitude damping, phase damping,
//! depolarizing) and their application to one site of a register.

use num_complex::Complex64;

use crate::linalg::{kron, pauli_x, pauli_y, pauli_z, ComplexMatrix, SubsystemLayout};
use crate::{Error, Result};

const COMPLETENESS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Adc,
    Pdc,
    Dpc,
    Identity,
}

impl std::fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ChannelKind::Adc => "adc",
            ChannelKind::Pdc => "pdc",
            ChannelKind::Dpc => "dpc",
            ChannelKind::Identity => "identity",
        };
        f.write_str(name)
    }
}

/// One local channel assignment: kind, strength and target site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    pub p: f64,
    pub target: usize,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, p: f64, target: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(Error::BadNoiseStrength { p });
        }
        Ok(Self { kind, p, target })
    }
}

/// Kraus operators of a single-qubit channel at strength p; they satisfy
/// Σ K†K = I within 1e-12 by construction.
pub fn kraus_set(kind: ChannelKind, p: f64) -> Result<Vec<ComplexMatrix>> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::BadNoiseStrength { p });
    }
    let re = |x: f64| Complex64::new(x, 0.0);
    let ops = match kind {
        ChannelKind::Identity => vec![ComplexMatrix::identity(2)],
        ChannelKind::Adc => vec![
            ComplexMatrix::from_diag(&[Complex64::ONE, re((1.0 - p).sqrt())]),
            ComplexMatrix::new(
                2,
                2,
                vec![
                    Complex64::ZERO,
                    re(p.sqrt()),
                    Complex64::ZERO,
                    Complex64::ZERO,
                ],
            ),
        ],
        ChannelKind::Pdc => vec![
            ComplexMatrix::identity(2).scale(re((1.0 - p / 2.0).sqrt())),
            pauli_z().scale(re((p / 2.0).sqrt())),
        ],
        ChannelKind::Dpc => {
            let w = re((p / 4.0).sqrt());
            vec![
                ComplexMatrix::identity(2).scale(re((1.0 - 3.0 * p / 4.0).sqrt())),
                pauli_x().scale(w),
                pauli_y().scale(w),
                pauli_z().scale(w),
            ]
        }
    };
    debug_assert!(completeness_deviation(&ops) <= COMPLETENESS_TOL);
    Ok(ops)
}

/// Max |Σ K†K - I| entrywise.
pub fn completeness_deviation(ops: &[ComplexMatrix]) -> f64 {
    let dim = ops[0].rows();
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for k in ops {
        acc = acc.add(&k.adjoint().matmul(k));
    }
    acc.max_abs_diff(&ComplexMatrix::identity(dim))
}

/// Lift a single-qubit operator to the full register at the target site.
pub fn lift_to_site(
    op: &ComplexMatrix,
    target: usize,
    layout: &SubsystemLayout,
) -> Result<ComplexMatrix> {
    if target >= layout.n_sites() {
        return Err(Error::SiteOutOfRange {
            index: target,
            sites: layout.n_sites(),
        });
    }
    let mut lifted = ComplexMatrix::identity(1);
    for site in 0..layout.n_sites() {
        let factor = if site == target {
            op.clone()
        } else {
            ComplexMatrix::identity(layout.dim(site))
        };
        lifted = kron(&lifted, &factor);
    }
    Ok(lifted)
}

/// Apply one local channel: ρ -> Σ_i (K_i ⊗ I_rest) ρ (K_i ⊗ I_rest)†.
pub fn apply_local(
    rho: &ComplexMatrix,
    spec: &ChannelSpec,
    layout: &SubsystemLayout,
) -> Result<ComplexMatrix> {
    let d = layout.total_dim();
    if !rho.is_square() || rho.rows() != d {
        return Err(Error::DimMismatch {
            expected: d,
            found: rho.rows(),
        });
    }
    let mut out = ComplexMatrix::zeros(d, d);
    for k in kraus_set(spec.kind, spec.p)? {
        let lifted = lift_to_site(&k, spec.target, layout)?;
        out = out.add(&lifted.conjugate_by(rho));
    }
    Ok(out)
}

/// Compose local channels left to right; duplicate targets compose.
pub fn apply_all(
    rho: &ComplexMatrix,
    specs: &[ChannelSpec],
    layout: &SubsystemLayout,
) -> Result<ComplexMatrix> {
    let mut out = rho.clone();
    for spec in specs {
        out = apply_local(&out, spec, layout)?;
    }
    Ok(out)
}

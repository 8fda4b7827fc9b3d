//! Entanglement quantifiers: negativity, generalized geometric measure for
//! pure states, and the squared-negativity monogamy score.

use crate::linalg::{
    hermitian_eigenvalues, partial_trace, partial_transpose, ComplexMatrix, StateVector,
    SubsystemLayout,
};
use crate::{Error, Result};

/// Eigenvalues in (-NEG_EIG_TOL, 0] are eigensolver roundoff, not
/// entanglement.
const NEG_EIG_TOL: f64 = 1e-12;

const NORM_TOL: f64 = 1e-10;

/// An unordered split of the register into two nonempty sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    side_a: Vec<usize>,
    n_sites: usize,
}

impl Bipartition {
    pub fn new(mut side_a: Vec<usize>, n_sites: usize) -> Result<Self> {
        side_a.sort_unstable();
        side_a.dedup();
        if side_a.is_empty() {
            return Err(Error::InvalidCut {
                reason: "side A is empty".into(),
            });
        }
        if side_a.len() >= n_sites {
            return Err(Error::InvalidCut {
                reason: format!("side A has {} of {} sites", side_a.len(), n_sites),
            });
        }
        if let Some(&bad) = side_a.iter().find(|&&s| s >= n_sites) {
            return Err(Error::InvalidCut {
                reason: format!("site {bad} out of range for {n_sites} sites"),
            });
        }
        Ok(Self { side_a, n_sites })
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> Vec<usize> {
        (0..self.n_sites)
            .filter(|s| !self.side_a.contains(s))
            .collect()
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }
}

/// Enumerate every unordered bipartition of `n` sites (2^{n-1} - 1 cuts).
pub fn all_bipartitions(n: usize) -> Vec<Bipartition> {
    let mut cuts = Vec::new();
    // Masks that contain site 0 and are not the full set: each unordered
    // cut exactly once.
    for mask in 1u32..(1 << n) {
        if mask & 1 == 0 || mask == (1 << n) - 1 {
            continue;
        }
        let side_a: Vec<usize> = (0..n).filter(|s| mask >> s & 1 == 1).collect();
        cuts.push(Bipartition::new(side_a, n).expect("mask enumeration is valid"));
    }
    cuts
}

/// Eigenvalues (descending) of the reduced state on the smaller side of
/// the cut; for a normalized pure state these are the squared Schmidt
/// coefficients.
pub fn schmidt_eigenvalues(
    psi: &StateVector,
    cut: &Bipartition,
    layout: &SubsystemLayout,
) -> Result<Vec<f64>> {
    check_layout_matches(cut, layout, psi.dim())?;
    let norm_dev = (psi.norm() - 1.0).abs();
    if norm_dev > NORM_TOL {
        return Err(Error::NotNormalized {
            deviation: norm_dev,
        });
    }
    let side_b = cut.side_b();
    let (small, other): (&[usize], &[usize]) = if cut.side_a().len() <= side_b.len() {
        (cut.side_a(), &side_b)
    } else {
        (&side_b, cut.side_a())
    };

    // ρ_small[i, i'] = Σ_j ψ[i, j] ψ*[i', j] without forming the full
    // density matrix.
    let dim_small: usize = small.iter().map(|&s| layout.dim(s)).product();
    let mut rho = ComplexMatrix::zeros(dim_small, dim_small);
    let d = psi.dim();
    let index_on = |flat: usize, sites: &[usize]| -> usize {
        sites
            .iter()
            .fold(0, |acc, &s| acc * layout.dim(s) + digit(layout, flat, s))
    };
    for x in 0..d {
        let ix = index_on(x, small);
        let ax = psi.amp(x);
        if ax.norm_sqr() == 0.0 {
            continue;
        }
        for y in 0..d {
            if index_on(y, other) != index_on(x, other) {
                continue;
            }
            let iy = index_on(y, small);
            let z = rho.get(ix, iy) + ax * psi.amp(y).conj();
            rho.set(ix, iy, z);
        }
    }
    hermitian_eigenvalues(&rho)
}

fn digit(layout: &SubsystemLayout, flat: usize, site: usize) -> usize {
    let stride: usize = (site + 1..layout.n_sites()).map(|s| layout.dim(s)).product();
    (flat / stride) % layout.dim(site)
}

/// Generalized geometric measure of a pure state: 1 minus the largest
/// Schmidt eigenvalue over all bipartitions.
pub fn ggm(psi: &StateVector, layout: &SubsystemLayout) -> Result<f64> {
    let norm_dev = (psi.norm() - 1.0).abs();
    if norm_dev > NORM_TOL {
        return Err(Error::NotNormalized {
            deviation: norm_dev,
        });
    }
    let mut largest = f64::NEG_INFINITY;
    for cut in all_bipartitions(layout.n_sites()) {
        let evals = schmidt_eigenvalues(psi, &cut, layout)?;
        largest = largest.max(evals[0]);
    }
    Ok(1.0 - largest)
}

/// Negativity across the cut: sum of |λ| over negative eigenvalues of the
/// partial transpose.
pub fn negativity(
    rho: &ComplexMatrix,
    cut: &Bipartition,
    layout: &SubsystemLayout,
) -> Result<f64> {
    check_layout_matches(cut, layout, rho.rows())?;
    let trace_dev = (rho.trace().re - 1.0).abs().max(rho.trace().im.abs());
    if trace_dev > NORM_TOL {
        return Err(Error::NotUnitTrace {
            deviation: trace_dev,
        });
    }
    // Transposing the smaller side gives the same spectrum: ρ^{T_A} is the
    // full transpose of ρ^{T_B}.
    let side_b = cut.side_b();
    let smaller: &[usize] = if cut.side_a().len() <= side_b.len() {
        cut.side_a()
    } else {
        &side_b
    };
    let mut pt = rho.clone();
    for &site in smaller {
        pt = partial_transpose(&pt, site, layout)?;
    }
    let evals = hermitian_eigenvalues(&pt)?;
    Ok(evals
        .iter()
        .filter(|&&x| x < -NEG_EIG_TOL)
        .map(|x| -x)
        .sum())
}

/// Squared-negativity monogamy score with the given nodal qubit:
/// N²(nodal : rest) - Σ_{i≠nodal} N²(nodal, i).
pub fn monogamy_score_neg_sq(
    rho: &ComplexMatrix,
    nodal: usize,
    layout: &SubsystemLayout,
) -> Result<f64> {
    let n = layout.n_sites();
    if n < 3 {
        return Err(Error::TooFewQubits { qubits: n });
    }
    if nodal >= n {
        return Err(Error::SiteOutOfRange {
            index: nodal,
            sites: n,
        });
    }
    let full_cut = Bipartition::new(vec![nodal], n)?;
    let mut score = negativity(rho, &full_cut, layout)?.powi(2);
    for other in (0..n).filter(|&i| i != nodal) {
        let keep = if nodal < other {
            vec![nodal, other]
        } else {
            vec![other, nodal]
        };
        let marginal = partial_trace(rho, &keep, layout)?;
        let pair_layout = SubsystemLayout::new(keep.iter().map(|&s| layout.dim(s)).collect());
        let nodal_pos = if nodal < other { 0 } else { 1 };
        let pair_cut = Bipartition::new(vec![nodal_pos], 2)?;
        score -= negativity(&marginal, &pair_cut, &pair_layout)?.powi(2);
    }
    Ok(score)
}

fn check_layout_matches(cut: &Bipartition, layout: &SubsystemLayout, dim: usize) -> Result<()> {
    if cut.n_sites() != layout.n_sites() {
        return Err(Error::InvalidCut {
            reason: format!(
                "cut is over {} sites but layout has {}",
                cut.n_sites(),
                layout.n_sites()
            ),
        });
    }
    if layout.total_dim() != dim {
        return Err(Error::DimMismatch {
            expected: layout.total_dim(),
            found: dim,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell() -> StateVector {
        StateVector::new(vec![
            c(FRAC_1_SQRT_2, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            c(FRAC_1_SQRT_2, 0.0),
        ])
    }

    fn ghz3() -> StateVector {
        let mut amps = vec![Complex64::ZERO; 8];
        amps[0] = c(FRAC_1_SQRT_2, 0.0);
        amps[7] = c(FRAC_1_SQRT_2, 0.0);
        StateVector::new(amps)
    }

    fn w3() -> StateVector {
        let a = 1.0 / 3.0f64.sqrt();
        let mut amps = vec![Complex64::ZERO; 8];
        amps[1] = c(a, 0.0);
        amps[2] = c(a, 0.0);
        amps[4] = c(a, 0.0);
        StateVector::new(amps)
    }

    fn random_state(dim: usize, rng: &mut impl Rng) -> StateVector {
        let amps: Vec<Complex64> = (0..dim)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        StateVector::new(amps).normalized()
    }

    fn random_su2(rng: &mut impl Rng) -> ComplexMatrix {
        let t = rng.random_range(0.0..std::f64::consts::PI);
        let a = rng.random_range(0.0..std::f64::consts::TAU);
        let b = rng.random_range(0.0..std::f64::consts::TAU);
        ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::from_polar(t.cos(), a),
                Complex64::from_polar(t.sin(), b),
                Complex64::from_polar(-t.sin(), -b),
                Complex64::from_polar(t.cos(), -a),
            ],
        )
    }

    #[test]
    fn negativity_of_bell_is_half() {
        let layout = SubsystemLayout::qubits(2);
        let cut = Bipartition::new(vec![0], 2).unwrap();
        let n = negativity(&bell().outer(), &cut, &layout).unwrap();
        assert!((n - 0.5).abs() < 1e-10);
    }

    #[test]
    fn negativity_of_product_is_zero() {
        let layout = SubsystemLayout::qubits(2);
        let cut = Bipartition::new(vec![0], 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_state(2, &mut rng);
        let b = random_state(2, &mut rng);
        let rho = a.tensor(&b).outer();
        assert!(negativity(&rho, &cut, &layout).unwrap() < 1e-10);
    }

    #[test]
    fn ggm_basic_values() {
        let layout2 = SubsystemLayout::qubits(2);
        assert!(ggm(&StateVector::basis_state(4, 0), &layout2).unwrap() < 1e-12);
        assert!((ggm(&bell(), &layout2).unwrap() - 0.5).abs() < 1e-10);
        let layout3 = SubsystemLayout::qubits(3);
        assert!((ggm(&ghz3(), &layout3).unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn ggm_rejects_unnormalized() {
        let layout = SubsystemLayout::qubits(2);
        let psi = StateVector::new(vec![Complex64::ONE; 4]);
        assert!(matches!(
            ggm(&psi, &layout),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn schmidt_values() {
        let layout = SubsystemLayout::qubits(2);
        let cut = Bipartition::new(vec![0], 2).unwrap();
        let evals = schmidt_eigenvalues(&StateVector::basis_state(4, 1), &cut, &layout).unwrap();
        assert!((evals[0] - 1.0).abs() < 1e-12 && evals[1].abs() < 1e-12);
        let evals = schmidt_eigenvalues(&bell(), &cut, &layout).unwrap();
        assert!((evals[0] - 0.5).abs() < 1e-12 && (evals[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn monogamy_of_ghz_and_product() {
        let layout = SubsystemLayout::qubits(3);
        let ghz_rho = ghz3().outer();
        let score = monogamy_score_neg_sq(&ghz_rho, 1, &layout).unwrap();
        assert!((score - 0.25).abs() < 1e-10);

        let product = StateVector::basis_state(8, 0).outer();
        let score = monogamy_score_neg_sq(&product, 1, &layout).unwrap();
        assert!(score.abs() < 1e-12);
    }

    #[test]
    fn monogamy_of_w_state_matches_closed_form() {
        // N(1:23)² = 2/9 and each pair marginal contributes ((√5-1)/6)²,
        // giving δ = (√5 - 1)/9; worked out by hand from the 8x8 partial
        // transposes.
        let layout = SubsystemLayout::qubits(3);
        let expected = (5.0f64.sqrt() - 1.0) / 9.0;
        let score = monogamy_score_neg_sq(&w3().outer(), 0, &layout).unwrap();
        assert!((score - expected).abs() < 1e-10, "{score} vs {expected}");
        assert!(score >= 0.0);
    }

    #[test]
    fn monogamy_requires_three_qubits() {
        let layout = SubsystemLayout::qubits(2);
        let rho = bell().outer();
        assert!(matches!(
            monogamy_score_neg_sq(&rho, 0, &layout),
            Err(Error::TooFewQubits { .. })
        ));
    }

    #[test]
    fn negativity_is_local_unitary_invariant() {
        let layout = SubsystemLayout::qubits(2);
        let cut = Bipartition::new(vec![0], 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let psi = random_state(4, &mut rng);
            let rho = psi.outer();
            let u = crate::linalg::kron(&random_su2(&mut rng), &random_su2(&mut rng));
            let rotated = u.conjugate_by(&rho);
            let n0 = negativity(&rho, &cut, &layout).unwrap();
            let n1 = negativity(&rotated, &cut, &layout).unwrap();
            assert!((n0 - n1).abs() < 1e-10, "{n0} vs {n1}");
        }
    }

    #[test]
    fn ggm_is_local_unitary_invariant() {
        let layout = SubsystemLayout::qubits(3);
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..10 {
            let psi = random_state(8, &mut rng);
            let site = rng.random_range(0..3usize);
            let mut u = ComplexMatrix::identity(1);
            for s in 0..3 {
                let factor = if s == site {
                    random_su2(&mut rng)
                } else {
                    ComplexMatrix::identity(2)
                };
                u = crate::linalg::kron(&u, &factor);
            }
            let g0 = ggm(&psi, &layout).unwrap();
            let g1 = ggm(&u.apply(&psi), &layout).unwrap();
            assert!((g0 - g1).abs() < 1e-10);
        }
    }

    #[test]
    fn pure_two_qubit_measures_agree_with_schmidt() {
        let layout = SubsystemLayout::qubits(2);
        let cut = Bipartition::new(vec![0], 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..30 {
            let psi = random_state(4, &mut rng);
            let evals = schmidt_eigenvalues(&psi, &cut, &layout).unwrap();
            let g = ggm(&psi, &layout).unwrap();
            assert!((g - evals[1]).abs() < 1e-10);
            let n = negativity(&psi.outer(), &cut, &layout).unwrap();
            assert!((n - (evals[0] * evals[1]).sqrt()).abs() < 1e-10);
        }
    }

    #[test]
    fn monogamy_nonnegative_on_random_pure_states() {
        let layout = SubsystemLayout::qubits(3);
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..50 {
            let rho = random_state(8, &mut rng).outer();
            let score = monogamy_score_neg_sq(&rho, 1, &layout).unwrap();
            assert!(score >= -1e-10, "{score}");
        }
    }

    #[test]
    fn ggm_of_wide_ghz_states() {
        for n in [4usize, 5] {
            let dim = 1 << n;
            let mut amps = vec![Complex64::ZERO; dim];
            amps[0] = c(FRAC_1_SQRT_2, 0.0);
            amps[dim - 1] = c(FRAC_1_SQRT_2, 0.0);
            let ghz = StateVector::new(amps);
            let layout = SubsystemLayout::qubits(n);
            let g = ggm(&ghz, &layout).unwrap();
            assert!((g - 0.5).abs() < 1e-10, "n={n}: {g}");
        }
    }

    #[test]
    fn bipartition_validation() {
        assert!(Bipartition::new(vec![], 3).is_err());
        assert!(Bipartition::new(vec![0, 1, 2], 3).is_err());
        assert!(Bipartition::new(vec![5], 3).is_err());
        assert_eq!(all_bipartitions(3).len(), 3);
        assert_eq!(all_bipartitions(4).len(), 7);
        assert_eq!(all_bipartitions(5).len(), 15);
    }
}

//! Closed-form expressions for the entangling power of specific gate
//! families, used as fast paths and as independent cross-checks of the
//! numerical pipeline. Complex intermediates are evaluated as printed and
//! the imaginary residue of each final value is asserted away rather than
//! simplified by hand.

use num_complex::Complex64;

use crate::linalg::{ComplexMatrix, StateVector};

const IMAG_RESIDUE_TOL: f64 = 1e-10;

fn polar(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, phi)
}

fn assert_real(z: Complex64) -> f64 {
    assert!(
        z.im.abs() <= IMAG_RESIDUE_TOL,
        "imaginary residue {} exceeds tolerance",
        z.im
    );
    z.re
}

/// GGM power of diag(1,1,1,e^{iφ}): min[cos²(φ/4), sin²(φ/4)].
pub fn ggm_diag1(phi: f64) -> f64 {
    let c = (phi / 4.0).cos().powi(2);
    let s = (phi / 4.0).sin().powi(2);
    c.min(s)
}

/// Negativity power of diag(1,1,1,e^{iφ}), evaluated from the printed
/// expression. The square root appears with both signs, so the principal
/// branch is safe.
pub fn neg_diag1(phi: f64) -> f64 {
    let e = polar(phi);
    let root = (e * (Complex64::ONE + e).powi(2)).sqrt();
    let two = Complex64::new(2.0, 0.0);
    let four = Complex64::new(4.0, 0.0);
    let value = (4.0 * (e - Complex64::ONE).norm()
        + (two * root + four * e).norm()
        + (four * e - two * root).norm()
        - 8.0)
        / 16.0;
    value.max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// The cos²(φ/4) branch of the minimum.
    CosSq,
    /// The sin²(φ/4) branch of the minimum.
    SinSq,
}

/// Gaussian quench of the single-branch GGM integrand for
/// diag(1,1,1,e^{iφ}): (1/4) e^{-σ²/8 - i⟨φ⟩/2} (2 e^{(σ²+4i⟨φ⟩)/8} ± e^{i⟨φ⟩} ± 1),
/// with "+" for the cos² branch and "-" for the sin² branch.
pub fn quenched_ggm_diag1_closed(mean: f64, sd: f64, branch: Branch) -> f64 {
    let sign = match branch {
        Branch::CosSq => 1.0,
        Branch::SinSq => -1.0,
    };
    let sigma2 = sd * sd;
    let prefactor = Complex64::new(0.25, 0.0)
        * (Complex64::new(-sigma2 / 8.0, -mean / 2.0)).exp();
    let inner = Complex64::new(2.0, 0.0) * Complex64::new(sigma2 / 8.0, mean / 2.0).exp()
        + Complex64::new(sign, 0.0) * polar(mean)
        + Complex64::new(sign, 0.0);
    assert_real(prefactor * inner)
}

/// Eigenvalue pair of the single-qubit reductions behind the diagonal-gate
/// GGM, on an arbitrary product input (descending).
pub fn eq_diag_reduced_eigenvalues(theta1: f64, theta2: f64, phi: f64) -> (f64, f64) {
    let a = (4.0 * (theta1 - theta2)).cos() + (4.0 * (theta1 + theta2)).cos()
        - 2.0 * (4.0 * theta1).cos()
        - 2.0 * (4.0 * theta2).cos()
        - 14.0;
    let inner = 8.0 * (2.0 * theta1).sin().powi(2) * (2.0 * theta2).sin().powi(2) * phi.cos() - a;
    let root = inner.max(0.0).sqrt();
    ((4.0 + root) / 8.0, (4.0 - root) / 8.0)
}

/// GGM power of a full diagonal diag(e^{iφ_1},..,e^{iφ_4}); depends only
/// on (φ_1+φ_4) - (φ_2+φ_3). Both square-root branches are evaluated and
/// the minimum taken.
pub fn ggm_diag4(phis: [f64; 4]) -> f64 {
    let total: f64 = phis.iter().sum();
    let e_total = polar(total);
    let pair = polar(phis[0] + phis[3]) + polar(phis[1] + phis[2]);
    let root = (e_total * pair * pair).sqrt();
    let two = Complex64::new(2.0, 0.0);
    let four = Complex64::new(4.0, 0.0);
    let branch = |r: Complex64| {
        assert_real(e_total.conj() * (four * e_total - two * r) / Complex64::new(8.0, 0.0))
    };
    branch(root).min(branch(-root)).max(0.0)
}

/// Negativity power of a full diagonal four-phase gate.
pub fn neg_diag4(phis: [f64; 4]) -> f64 {
    let total: f64 = phis.iter().sum();
    let e_total = polar(total);
    let a = polar(phis[0] + phis[3]);
    let b = polar(phis[1] + phis[2]);
    let root = (e_total * (a + b).powi(2)).sqrt();
    let two = Complex64::new(2.0, 0.0);
    let value = (2.0 * (b - a).norm()
        + (root - two * e_total).norm()
        + (root + two * e_total).norm()
        - 4.0)
        / 8.0;
    value.max(0.0)
}

/// GGM power of the equal-coupling canonical gate: min[cos² 2J, sin² 2J].
pub fn ggm_unl_equal_j(j: f64) -> f64 {
    let c = (2.0 * j).cos().powi(2);
    let s = (2.0 * j).sin().powi(2);
    c.min(s)
}

/// Reduced-state eigenvalue pair after the equal-coupling canonical gate
/// acts on a product input (descending).
pub fn eq_unl_reduced_eigenvalues(j: f64, theta1: f64, theta2: f64) -> (f64, f64) {
    let e8 = polar(8.0 * j);
    let s = (theta1 - theta2).sin();
    let inner = (e8 - Complex64::ONE).powi(2) * s.powi(4) + Complex64::new(4.0, 0.0) * e8;
    let shift = polar(-4.0 * j) * inner.sqrt() * Complex64::new(0.25, 0.0);
    let lam1 = assert_real(Complex64::new(0.5, 0.0) + shift);
    let lam2 = assert_real(Complex64::new(0.5, 0.0) - shift);
    (lam1.max(lam2), lam1.min(lam2))
}

/// Negativity power of the equal-coupling canonical gate under amplitude
/// damping on the first party or phase damping on either or both; the
/// output is noise independent, so this equals the noiseless value.
pub fn neg_unl_noiseless_adc_pdc(j: f64) -> f64 {
    let e4 = polar(4.0 * j);
    let e8 = polar(8.0 * j);
    let value = ((e4 - Complex64::ONE).norm_sqr() + (e4 + Complex64::ONE).norm_sqr()
        + 2.0 * (e8 - Complex64::ONE).norm()
        - 4.0)
        / 8.0;
    value.max(0.0)
}

/// Negativity power of the equal-coupling canonical gate under local
/// depolarizing noise on one party (`both = false`) or both parties, with
/// the |01⟩ input. Values are clamped at zero where the printed
/// expressions leave their regime of validity.
pub fn neg_unl_dpc(j: f64, p: f64, both: bool) -> f64 {
    let e4 = polar(4.0 * j);
    if both {
        let v = -(e4 * e4 - Complex64::ONE).powi(2) * Complex64::new((p - 1.0) * (p - 1.0), 0.0);
        let sqrt_v = v.sqrt();
        let w = e4 * Complex64::new((p - 2.0) * p, 0.0);
        let t3 = ((e4 * Complex64::new(p - 1.0, 0.0) - Complex64::ONE)
            * (e4 + Complex64::new(1.0 - p, 0.0)))
        .norm();
        let t4 = ((e4 * Complex64::new(p - 1.0, 0.0) + Complex64::ONE)
            * (e4 + Complex64::new(p - 1.0, 0.0)))
        .norm();
        let value = ((sqrt_v - w).norm() + (w + sqrt_v).norm() + t3 + t4 - 4.0) / 8.0;
        value.max(0.0)
    } else {
        let s = Complex64::new(2.0f64.sqrt(), 0.0)
            * (-polar(10.0 * j)
                * Complex64::new(
                    (8.0 * j).cos() * (p - 2.0) * (p - 2.0) + p * (4.0 - 3.0 * p) - 4.0,
                    0.0,
                ))
            .sqrt();
        let lead = polar(5.0 * j) * Complex64::new(2.0 * p, 0.0);
        let value = ((e4 - Complex64::ONE).powi(2).norm() * (2.0 - p)
            + (e4 + Complex64::ONE).powi(2).norm() * (2.0 - p)
            + (lead + s).norm()
            + (lead - s).norm()
            - 8.0)
            / 16.0;
        value.max(0.0)
    }
}

/// Output state of the equal-coupling canonical gate on |01⟩ after
/// amplitude damping on the first party (or phase damping on either or
/// both): the pure state L|01⟩ + T|10⟩, independent of the noise
/// strength.
pub fn rho_out_unl(j: f64) -> ComplexMatrix {
    let l = (polar(-j) + polar(3.0 * j)) * Complex64::new(0.5, 0.0);
    let t = (polar(-j) - polar(3.0 * j)) * Complex64::new(0.5, 0.0);
    StateVector::new(vec![Complex64::ZERO, l, t, Complex64::ZERO]).outer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{apply_all, ChannelKind, ChannelSpec};
    use crate::gates::{canonical_nl, diag_unitary};
    use crate::linalg::SubsystemLayout;
    use crate::measures::{ggm, negativity, schmidt_eigenvalues, Bipartition};
    use crate::states::{product_state, ProductParams};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn plus_plus() -> ProductParams {
        ProductParams::new(vec![PI / 4.0, PI / 4.0], vec![0.0, 0.0]).unwrap()
    }

    #[test]
    fn ggm_diag1_reference_points() {
        assert!((ggm_diag1(PI) - 0.5).abs() < 1e-15);
        assert!(ggm_diag1(0.0).abs() < 1e-15);
        assert!((ggm_diag1(PI / 2.0) - (PI / 8.0).sin().powi(2)).abs() < 1e-15);
        // Period 4π and symmetry about φ = π within one period.
        for phi in [0.3, 1.2, 2.9] {
            assert!((ggm_diag1(phi) - ggm_diag1(phi + 4.0 * PI)).abs() < 1e-12);
            assert!((ggm_diag1(phi) - ggm_diag1(2.0 * PI - phi)).abs() < 1e-12);
        }
    }

    #[test]
    fn neg_diag1_reference_points() {
        assert!((neg_diag1(PI) - 0.5).abs() < 1e-12);
        assert!(neg_diag1(0.0).abs() < 1e-12);
        // The printed expression collapses to sin(φ/2)/2 on (0, 2π).
        for k in 1..20 {
            let phi = k as f64 * 2.0 * PI / 20.0;
            assert!((neg_diag1(phi) - (phi / 2.0).sin().abs() / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn neg_diag1_matches_pipeline_at_optimal_input() {
        let layout = SubsystemLayout::qubits(2);
        let cut = Bipartition::new(vec![0], 2).unwrap();
        let psi = product_state(&plus_plus());
        for k in 1..40 {
            let phi = k as f64 * 2.0 * PI / 40.0;
            let u = diag_unitary(4, &[phi]).unwrap();
            let numeric = negativity(&u.apply(&psi).outer(), &cut, &layout).unwrap();
            assert!((numeric - neg_diag1(phi)).abs() < 1e-10, "phi = {phi}");
        }
    }

    #[test]
    fn ggm_diag1_matches_pipeline_at_optimal_input() {
        let layout = SubsystemLayout::qubits(2);
        let psi = product_state(&plus_plus());
        for k in 1..40 {
            let phi = k as f64 * 2.0 * PI / 40.0;
            let u = diag_unitary(4, &[phi]).unwrap();
            let numeric = ggm(&u.apply(&psi), &layout).unwrap();
            assert!((numeric - ggm_diag1(phi)).abs() < 1e-10, "phi = {phi}");
        }
    }

    #[test]
    fn diag4_reduces_and_shifts() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let phi = rng.random_range(0.0..2.0 * PI);
            assert!((ggm_diag4([0.0, 0.0, 0.0, phi]) - ggm_diag1(phi)).abs() < 1e-12);
            assert!((neg_diag4([0.0, 0.0, 0.0, phi]) - neg_diag1(phi)).abs() < 1e-12);

            // All-equal phases are a global phase.
            let c = rng.random_range(0.0..2.0 * PI);
            assert!(ggm_diag4([c, c, c, c]).abs() < 1e-12);
            assert!(neg_diag4([c, c, c, c]).abs() < 1e-12);

            // Dependence only through (φ1+φ4) - (φ2+φ3).
            let base: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.0..2.0 * PI));
            let shift = rng.random_range(0.0..PI);
            let shifted = [
                base[0] + shift,
                base[1] + shift,
                base[2], // φ2+φ3 and φ1+φ4 both move by `shift`
                base[3],
            ];
            assert!((ggm_diag4(base) - ggm_diag4(shifted)).abs() < 1e-10);
            assert!((neg_diag4(base) - neg_diag4(shifted)).abs() < 1e-10);
        }
    }

    #[test]
    fn diag4_matches_pipeline_at_optimal_input() {
        let layout = SubsystemLayout::qubits(2);
        let cut = Bipartition::new(vec![0], 2).unwrap();
        let psi = product_state(&plus_plus());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let phis: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.0..2.0 * PI));
            let u = diag_unitary(4, &phis).unwrap();
            let out = u.apply(&psi);
            let g = ggm(&out, &layout).unwrap();
            assert!((g - ggm_diag4(phis)).abs() < 1e-9, "{phis:?}");
            let n = negativity(&out.outer(), &cut, &layout).unwrap();
            assert!((n - neg_diag4(phis)).abs() < 1e-9, "{phis:?}");
        }
    }

    #[test]
    fn eq_diag_eigenvalues_at_balanced_input() {
        // At θ1 = θ2 = π/4 the max branch is 1 - ggm_diag1(φ).
        for k in 0..20 {
            let phi = k as f64 * 2.0 * PI / 20.0;
            let (lam1, _) = eq_diag_reduced_eigenvalues(PI / 4.0, PI / 4.0, phi);
            assert!((lam1 - (1.0 - ggm_diag1(phi))).abs() < 1e-12);
        }
        // And they match the numerical Schmidt eigenvalues.
        let layout = SubsystemLayout::qubits(2);
        let cut = Bipartition::new(vec![0], 2).unwrap();
        let phi = PI / 2.0;
        let u = diag_unitary(4, &[phi]).unwrap();
        let out = u.apply(&product_state(&plus_plus()));
        let nums = schmidt_eigenvalues(&out, &cut, &layout).unwrap();
        let (lam1, lam2) = eq_diag_reduced_eigenvalues(PI / 4.0, PI / 4.0, phi);
        assert!((nums[0] - lam1).abs() < 1e-10);
        assert!((nums[1] - lam2).abs() < 1e-10);
    }

    #[test]
    fn ggm_unl_reference_points_and_period() {
        assert!(ggm_unl_equal_j(0.0).abs() < 1e-15);
        assert!((ggm_unl_equal_j(PI / 8.0) - 0.5).abs() < 1e-12);
        assert!(ggm_unl_equal_j(PI / 4.0).abs() < 1e-12);
        for j in [0.1, 0.4, 1.0] {
            assert!((ggm_unl_equal_j(j) - ggm_unl_equal_j(j + PI / 2.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn eq_unl_eigenvalues_match_numerics() {
        let layout = SubsystemLayout::qubits(2);
        let cut = Bipartition::new(vec![0], 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let j = rng.random_range(0.0..PI / 2.0);
            let t1 = rng.random_range(0.0..PI);
            let t2 = rng.random_range(0.0..PI);
            let psi = product_state(&ProductParams::new(vec![t1, t2], vec![0.0, 0.0]).unwrap());
            let out = canonical_nl(j, j, j).apply(&psi);
            let nums = schmidt_eigenvalues(&out, &cut, &layout).unwrap();
            let (lam1, lam2) = eq_unl_reduced_eigenvalues(j, t1, t2);
            assert!((nums[0] - lam1).abs() < 1e-10, "j={j} t1={t1} t2={t2}");
            assert!((nums[1] - lam2).abs() < 1e-10);
        }
        // Spot value: J = π/8 on the |01⟩ input is maximally entangling.
        let (lam1, lam2) = eq_unl_reduced_eigenvalues(PI / 8.0, 0.0, PI / 2.0);
        assert!((lam1 - 0.5).abs() < 1e-12 && (lam2 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn quenched_closed_form_delta_limits() {
        assert!((quenched_ggm_diag1_closed(PI, 0.0, Branch::SinSq) - 0.5).abs() < 1e-12);
        for mean in [0.3, 1.1, PI, 4.4] {
            let cos_branch = quenched_ggm_diag1_closed(mean, 0.0, Branch::CosSq);
            assert!((cos_branch - (mean / 4.0).cos().powi(2)).abs() < 1e-12);
            let sin_branch = quenched_ggm_diag1_closed(mean, 0.0, Branch::SinSq);
            assert!((sin_branch - (mean / 4.0).sin().powi(2)).abs() < 1e-12);
        }
        // Large-σ limit of the single-branch integral is 1/2 for both
        // branches: E[cos²(φ/4)] -> (1 + e^{-σ²/8} cos(⟨φ⟩/2)/..)/2 -> 1/2.
        for branch in [Branch::CosSq, Branch::SinSq] {
            let v = quenched_ggm_diag1_closed(1.7, 40.0, branch);
            assert!((v - 0.5).abs() < 1e-10, "{v}");
        }
    }

    #[test]
    fn quenched_closed_form_matches_monte_carlo() {
        // Dominant sin² branch around ⟨φ⟩ = π/10, σ = 0.5.
        let (mean, sd) = (PI / 10.0, 0.5);
        let closed = quenched_ggm_diag1_closed(mean, sd, Branch::SinSq);
        let n = 20_000;
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let normal = rand_distr::Normal::new(mean, sd).unwrap();
        let values: Vec<f64> = (0..n)
            .map(|_| {
                let phi = rand_distr::Distribution::sample(&normal, &mut rng);
                ggm_diag1(phi)
            })
            .collect();
        let mc_mean: f64 = values.iter().sum::<f64>() / n as f64;
        let var: f64 =
            values.iter().map(|v| (v - mc_mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        let sem = (var / n as f64).sqrt();
        assert!(
            (mc_mean - closed).abs() < 3.0 * sem,
            "mc {mc_mean} vs closed {closed} (sem {sem})"
        );
    }

    #[test]
    fn unl_noiseless_reference_points() {
        assert!(neg_unl_noiseless_adc_pdc(0.0).abs() < 1e-12);
        assert!((neg_unl_noiseless_adc_pdc(PI / 8.0) - 0.5).abs() < 1e-12);
        // Collapses to |sin 4J| / 2.
        for k in 0..40 {
            let j = k as f64 * PI / 80.0;
            assert!((neg_unl_noiseless_adc_pdc(j) - (4.0 * j).sin().abs() / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dpc_reduces_to_noiseless_at_zero_strength() {
        for k in 1..20 {
            let j = k as f64 * PI / 44.0;
            for both in [false, true] {
                assert!(
                    (neg_unl_dpc(j, 0.0, both) - neg_unl_noiseless_adc_pdc(j)).abs() < 1e-10,
                    "j={j} both={both}"
                );
            }
        }
    }

    #[test]
    fn dpc_both_parties_vanishes_at_full_strength() {
        for j in [0.2, 0.61, 1.1] {
            assert!(neg_unl_dpc(j, 1.0, true).abs() < 1e-12);
        }
    }

    #[test]
    fn dpc_is_nonincreasing_in_strength() {
        for k in 1..10 {
            let j = k as f64 * PI / 22.0;
            for both in [false, true] {
                let mut prev = f64::INFINITY;
                for step in 0..=20 {
                    let p = step as f64 / 20.0;
                    let v = neg_unl_dpc(j, p, both);
                    assert!(v <= prev + 1e-9, "j={j} p={p} both={both}");
                    prev = v;
                }
            }
        }
    }

    #[test]
    fn dpc_matches_noisy_pipeline_on_01_input() {
        let layout = SubsystemLayout::qubits(2);
        let cut = Bipartition::new(vec![0], 2).unwrap();
        let rho01 = StateVector::basis_state(4, 1).outer();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..25 {
            let j = rng.random_range(0.05..PI / 2.0);
            let p = rng.random_range(0.0..0.9);
            let u = canonical_nl(j, j, j);
            for both in [false, true] {
                let mut specs = vec![ChannelSpec::new(ChannelKind::Dpc, p, 0).unwrap()];
                if both {
                    specs.push(ChannelSpec::new(ChannelKind::Dpc, p, 1).unwrap());
                }
                let noisy = apply_all(&rho01, &specs, &layout).unwrap();
                let out = u.conjugate_by(&noisy);
                let numeric = negativity(&out, &cut, &layout).unwrap();
                let closed = neg_unl_dpc(j, p, both);
                if closed > 1e-6 {
                    assert!(
                        (numeric - closed).abs() < 1e-8,
                        "j={j} p={p} both={both}: {numeric} vs {closed}"
                    );
                }
            }
        }
    }

    #[test]
    fn rho_out_matches_channel_pipeline() {
        let layout = SubsystemLayout::qubits(2);
        let rho01 = StateVector::basis_state(4, 1).outer();
        for j in [0.0, 0.3, 0.8, 1.4] {
            let expected = rho_out_unl(j);
            // Unit trace, purity 1.
            assert!((expected.trace().re - 1.0).abs() < 1e-12);
            let purity = expected.matmul(&expected).trace().re;
            assert!((purity - 1.0).abs() < 1e-12);
            if j == 0.0 {
                assert!(expected.max_abs_diff(&rho01) < 1e-15);
            }
            for p in [0.2, 0.7] {
                let specs = [ChannelSpec::new(ChannelKind::Adc, p, 0).unwrap()];
                let noisy = apply_all(&rho01, &specs, &layout).unwrap();
                let out = canonical_nl(j, j, j).conjugate_by(&noisy);
                assert!(out.max_abs_diff(&expected) < 1e-12);
            }
        }
    }
}

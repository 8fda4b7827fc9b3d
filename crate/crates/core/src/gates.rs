//! Unitary families: diagonal phase gates, the canonical two-qubit
//! nonlocal core exp[-i Σ J_i σ_i⊗σ_i], basis transpositions, Haar-random
//! unitaries and five fixed reference matrices.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{ComplexMatrix, StateVector};
use crate::{Error, Result};

/// A parameterized unitary family plus its parameter values.
#[derive(Debug, Clone, PartialEq)]
pub enum GateSpec {
    /// diag(1, .., 1, e^{iφ_1}, .., e^{iφ_k}): phases fill the last k slots.
    Diagonal { dim: usize, phis: Vec<f64> },
    /// exp[-i (J_1 σ_x⊗σ_x + J_2 σ_y⊗σ_y + J_3 σ_z⊗σ_z)].
    CanonicalNl { j: [f64; 3] },
    /// Permutation swapping two basis states.
    Transposition { dim: usize, i: usize, j: usize },
    /// Haar-random unitary from a fixed seed.
    HaarRandom { dim: usize, seed: u64 },
    /// One of the five fixed reference unitaries, k in 1..=5.
    Fixture { k: usize },
}

impl GateSpec {
    pub fn realize(&self) -> Result<ComplexMatrix> {
        match self {
            GateSpec::Diagonal { dim, phis } => diag_unitary(*dim, phis),
            GateSpec::CanonicalNl { j } => Ok(canonical_nl(j[0], j[1], j[2])),
            GateSpec::Transposition { dim, i, j } => transposition_unitary(*dim, *i, *j),
            GateSpec::HaarRandom { dim, seed } => haar_random(*dim, *seed),
            GateSpec::Fixture { k } => fixture_haar(*k),
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if !dim.is_power_of_two() || !(4..=32).contains(&dim) {
        return Err(Error::BadDimension {
            dim,
            min: 4,
            max: 32,
        });
    }
    Ok(())
}

/// Diagonal unitary with the given phases in the last `phis.len()` slots
/// and 1 elsewhere; `diag_unitary(4, &[φ])` is diag(1, 1, 1, e^{iφ}).
pub fn diag_unitary(dim: usize, phis: &[f64]) -> Result<ComplexMatrix> {
    check_dim(dim)?;
    if phis.len() > dim {
        return Err(Error::TooManyPhases {
            count: phis.len(),
            dim,
        });
    }
    let mut diag = vec![Complex64::ONE; dim];
    let offset = dim - phis.len();
    for (slot, &phi) in phis.iter().enumerate() {
        diag[offset + slot] = Complex64::from_polar(1.0, phi);
    }
    Ok(ComplexMatrix::from_diag(&diag))
}

/// exp[-i Σ J_i σ_i⊗σ_i], built spectrally: the Bell states diagonalize
/// every σ_i⊗σ_i simultaneously, so the exponential is exact.
pub fn canonical_nl(j1: f64, j2: f64, j3: f64) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64| Complex64::new(re, 0.0);
    // (eigenvector, eigenvalue of the generator J1 XX + J2 YY + J3 ZZ)
    let basis: [(StateVector, f64); 4] = [
        (
            StateVector::new(vec![c(s), c(0.0), c(0.0), c(s)]),
            j1 - j2 + j3,
        ),
        (
            StateVector::new(vec![c(s), c(0.0), c(0.0), c(-s)]),
            -j1 + j2 + j3,
        ),
        (
            StateVector::new(vec![c(0.0), c(s), c(s), c(0.0)]),
            j1 + j2 - j3,
        ),
        (
            StateVector::new(vec![c(0.0), c(s), c(-s), c(0.0)]),
            -j1 - j2 - j3,
        ),
    ];
    let mut u = ComplexMatrix::zeros(4, 4);
    for (v, energy) in &basis {
        let phase = Complex64::from_polar(1.0, -energy);
        u = u.add(&v.outer().scale(phase));
    }
    u
}

/// Permutation matrix swapping basis states i and j; involutory.
pub fn transposition_unitary(dim: usize, i: usize, j: usize) -> Result<ComplexMatrix> {
    check_dim(dim)?;
    if i == j || i >= dim || j >= dim {
        return Err(Error::BadBasisIndices { i, j, dim });
    }
    let mut u = ComplexMatrix::identity(dim);
    u.set(i, i, Complex64::ZERO);
    u.set(j, j, Complex64::ZERO);
    u.set(i, j, Complex64::ONE);
    u.set(j, i, Complex64::ONE);
    Ok(u)
}

/// Haar-random unitary: complex Ginibre matrix, QR with the diagonal of R
/// fixed positive real, which is the measure-correct normalization.
pub fn haar_random(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    if dim != 4 && dim != 8 {
        return Err(Error::BadDimension {
            dim,
            min: 4,
            max: 8,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(haar_random_with_rng(dim, &mut rng))
}

/// Haar sampling from a caller-supplied stream; no shared RNG state.
pub fn haar_random_with_rng(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let normal = StandardNormal;
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut columns: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let re: f64 = normal.sample(rng);
                    let im: f64 = normal.sample(rng);
                    Complex64::new(re * inv_sqrt2, im * inv_sqrt2)
                })
                .collect()
        })
        .collect();

    // Modified Gram-Schmidt with one reorthogonalization pass. The r_jj
    // produced this way are positive real, so Q itself is Haar.
    for j in 0..dim {
        let (done, rest) = columns.split_at_mut(j);
        let col = &mut rest[0];
        for _ in 0..2 {
            for prev in done.iter() {
                let proj: Complex64 =
                    prev.iter().zip(col.iter()).map(|(a, b)| a.conj() * b).sum();
                for (c, p) in col.iter_mut().zip(prev) {
                    *c -= proj * p;
                }
            }
        }
        let norm: f64 = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in col.iter_mut() {
            *z /= norm;
        }
    }

    let mut u = ComplexMatrix::zeros(dim, dim);
    for (jcol, col) in columns.iter().enumerate() {
        for (r, &z) in col.iter().enumerate() {
            u.set(r, jcol, z);
        }
    }
    u
}

/// One of the five fixed 4x4 reference unitaries, printed to four decimal
/// digits per component; unitary only to ~5e-4 at that precision.
pub fn fixture_haar(k: usize) -> Result<ComplexMatrix> {
    let text = match k {
        1 => FIXTURE_U1,
        2 => FIXTURE_U2,
        3 => FIXTURE_U3,
        4 => FIXTURE_U4,
        5 => FIXTURE_U5,
        _ => return Err(Error::BadFixture { k }),
    };
    parse_matrix_file(text)
}

/// Parse the plain-text matrix format: a header line `dim N` followed by
/// N*N whitespace-separated complex entries in `a+bi` form, row-major.
pub fn parse_matrix_file(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text.lines().enumerate();
    let (header_idx, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| Error::MatrixFileParse {
            line: 1,
            reason: "empty file".into(),
        })?;
    let mut parts = header.split_whitespace();
    let dim = match (parts.next(), parts.next(), parts.next()) {
        (Some("dim"), Some(n), None) => n.parse::<usize>().map_err(|_| Error::MatrixFileParse {
            line: header_idx + 1,
            reason: format!("bad dimension {n:?}"),
        })?,
        _ => {
            return Err(Error::MatrixFileParse {
                line: header_idx + 1,
                reason: format!("expected header `dim N`, got {header:?}"),
            })
        }
    };
    let mut entries = Vec::with_capacity(dim * dim);
    for (idx, line) in lines {
        for token in line.split_whitespace() {
            entries.push(parse_complex_token(token).map_err(|reason| {
                Error::MatrixFileParse {
                    line: idx + 1,
                    reason,
                }
            })?);
        }
    }
    if entries.len() != dim * dim {
        return Err(Error::MatrixFileParse {
            line: 0,
            reason: format!("expected {} entries, found {}", dim * dim, entries.len()),
        });
    }
    Ok(ComplexMatrix::new(dim, dim, entries))
}

/// Render a matrix in the plain-text format read by [`parse_matrix_file`].
pub fn format_matrix_file(m: &ComplexMatrix) -> String {
    assert!(m.is_square());
    let mut out = format!("dim {}\n", m.rows());
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|c| {
                let z = m.get(r, c);
                format!("{}{:+}i", z.re, z.im)
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn parse_complex_token(token: &str) -> std::result::Result<Complex64, String> {
    let body = token
        .strip_suffix('i')
        .ok_or_else(|| format!("token {token:?} does not end in `i`"))?;
    // The imaginary part starts at the last sign not belonging to an
    // exponent and not in the leading position.
    let bytes = body.as_bytes();
    let mut split = None;
    for pos in (1..bytes.len()).rev() {
        let ch = bytes[pos];
        if (ch == b'+' || ch == b'-') && !matches!(bytes[pos - 1], b'e' | b'E') {
            split = Some(pos);
            break;
        }
    }
    let split = split.ok_or_else(|| format!("token {token:?} is not of the form a+bi"))?;
    let re: f64 = body[..split]
        .parse()
        .map_err(|_| format!("bad real part in {token:?}"))?;
    let im: f64 = body[split..]
        .parse()
        .map_err(|_| format!("bad imaginary part in {token:?}"))?;
    Ok(Complex64::new(re, im))
}

const FIXTURE_U1: &str = "dim 4
-0.1328+0.2848i +0.3609-0.0663i +0.0975-0.3560i -0.3627-0.7063i
+0.1582+0.4851i -0.2756-0.2412i +0.2530-0.6070i +0.3639+0.2016i
-0.3395+0.1700i -0.6838-0.3707i -0.1359+0.3228i -0.0112-0.3579i
-0.7048+0.0060i -0.0797+0.3463i -0.3833-0.4022i -0.0754+0.2502i
";

const FIXTURE_U2: &str = "dim 4
-0.3105-0.4472i -0.2782+0.2450i +0.2835+0.3510i -0.6021-0.0030i
+0.4682-0.0869i -0.5794+0.1892i -0.1666-0.0687i +0.0463+0.6059i
-0.0522-0.6011i +0.2999-0.6057i -0.0134-0.0419i +0.0555+0.4173i
-0.3121-0.1243i +0.0490+0.1786i -0.7670-0.4167i -0.3008-0.0207i
";

const FIXTURE_U3: &str = "dim 4
+0.1515-0.0973i +0.1520+0.2570i +0.1770-0.7953i -0.0386-0.4617i
+0.0142+0.4815i +0.0317+0.7051i -0.4129+0.0758i +0.3059-0.0082i
+0.5406+0.5763i -0.3954-0.2356i -0.0320-0.0407i -0.3844-0.1154i
-0.3255-0.0724i -0.1310+0.4286i +0.2146+0.3336i -0.6472-0.3344i
";

const FIXTURE_U4: &str = "dim 4
+0.4815+0.2728i -0.1891+0.2117i +0.6345-0.4073i +0.0803-0.1952i
+0.3253-0.2366i -0.6629-0.2381i -0.1767+0.2749i -0.2700-0.4031i
-0.2068-0.2555i +0.4632+0.0266i +0.3072+0.1931i -0.0981-0.7317i
-0.5813+0.2931i -0.3827+0.2482i -0.2519-0.3599i +0.1469-0.3918i
";

const FIXTURE_U5: &str = "dim 4
+0.0126-0.3590i +0.0075+0.5262i +0.1540-0.6068i -0.3297+0.3056i
+0.8058+0.3372i +0.0757+0.2171i -0.3882-0.1587i +0.0588-0.0688i
-0.0408-0.2034i +0.0895+0.2377i +0.2034-0.2737i +0.6738-0.5676i
+0.0709-0.2447i -0.5141-0.5843i -0.2809-0.4869i +0.1134+0.0255i
";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigen, kron, pauli_x, pauli_y, pauli_z};
    use crate::states::{product_state, ProductParams};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn diag_with_zero_phases_is_identity() {
        let u = diag_unitary(4, &[0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(u.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn single_phase_lands_in_last_slot() {
        let phi = 0.7;
        let u = diag_unitary(4, &[phi]).unwrap();
        for i in 0..3 {
            assert!((u.get(i, i) - Complex64::ONE).norm() < 1e-15);
        }
        assert!((u.get(3, 3) - Complex64::from_polar(1.0, phi)).norm() < 1e-15);

        let u8 = diag_unitary(8, &[PI]).unwrap();
        assert!((u8.get(7, 7) + Complex64::ONE).norm() < 1e-15);
    }

    #[test]
    fn diag_rejects_bad_dims() {
        assert!(diag_unitary(3, &[0.1]).is_err());
        assert!(diag_unitary(64, &[0.1]).is_err());
        assert!(diag_unitary(4, &[0.1; 5]).is_err());
    }

    #[test]
    fn diagonal_unitaries_commute() {
        let a = diag_unitary(8, &[0.3, 1.1, 2.7]).unwrap();
        let b = diag_unitary(8, &[0.9, 0.2, 1.4, 2.2, 0.5]).unwrap();
        assert!(a.matmul(&b).max_abs_diff(&b.matmul(&a)) < 1e-14);
    }

    #[test]
    fn canonical_nl_at_zero_is_identity() {
        let u = canonical_nl(0.0, 0.0, 0.0);
        assert!(u.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn canonical_nl_equal_j_spectrum() {
        // Equal couplings: triple eigenvalue e^{-iJ} plus e^{i3J}.
        let j = 0.37;
        let u = canonical_nl(j, j, j);
        let mut phases = crate::linalg::eigenphases(&u).unwrap();
        let mut expected = vec![-j, -j, -j, 3.0 * j];
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        phases.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in phases.iter().zip(expected) {
            assert!((got - want).abs() < 1e-10, "{phases:?}");
        }
        // |00⟩ and |11⟩ are eigenvectors at equal couplings.
        let e00 = u.apply(&StateVector::basis_state(4, 0));
        assert!((e00.amp(0).norm() - 1.0).abs() < 1e-12);
        let e11 = u.apply(&StateVector::basis_state(4, 3));
        assert!((e11.amp(3).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_nl_matches_generator_exponential() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..10 {
            let j: [f64; 3] = [
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            ];
            let u = canonical_nl(j[0], j[1], j[2]);
            // Independent route: numerically diagonalize the Hermitian
            // generator and exponentiate its spectrum.
            let mut h = ComplexMatrix::zeros(4, 4);
            for (ji, sigma) in j.iter().zip([pauli_x(), pauli_y(), pauli_z()]) {
                h = h.add(&kron(&sigma, &sigma).scale(Complex64::new(*ji, 0.0)));
            }
            let (evals, v) = hermitian_eigen(&h).unwrap();
            let exp_diag = ComplexMatrix::from_diag(
                &evals
                    .iter()
                    .map(|&e| Complex64::from_polar(1.0, -e))
                    .collect::<Vec<_>>(),
            );
            let alt = v.matmul(&exp_diag).matmul(&v.adjoint());
            assert!(u.max_abs_diff(&alt) < 1e-10);
        }
    }

    #[test]
    fn canonical_nl_amplitudes_match_closed_expressions() {
        // Output amplitudes on a product input at equal couplings.
        let j = 0.61;
        let (t1, t2, x1, x2) = (0.5, 1.1, 0.4, 2.3);
        let psi = product_state(&ProductParams::new(vec![t1, t2], vec![x1, x2]).unwrap());
        let out = canonical_nl(j, j, j).apply(&psi);

        let em = Complex64::from_polar(1.0, -j);
        let e3 = Complex64::from_polar(1.0, 3.0 * j);
        let half = Complex64::new(0.5, 0.0);
        let ex1 = Complex64::from_polar(1.0, x1);
        let ex2 = Complex64::from_polar(1.0, x2);
        let a00 = em * t1.cos() * t2.cos();
        let a01 = (em - e3) * half * ex1 * t1.sin() * t2.cos()
            + (em + e3) * half * ex2 * t2.sin() * t1.cos();
        let a10 = (em + e3) * half * ex1 * t1.sin() * t2.cos()
            + (em - e3) * half * ex2 * t2.sin() * t1.cos();
        let a11 = Complex64::from_polar(t1.sin() * t2.sin(), x1 + x2 - j);
        for (idx, want) in [(0, a00), (1, a01), (2, a10), (3, a11)] {
            assert!((out.amp(idx) - want).norm() < 1e-10, "amp {idx}");
        }
    }

    #[test]
    fn transposition_swaps_and_squares_to_identity() {
        let p = transposition_unitary(8, 1, 7).unwrap();
        let out = p.apply(&StateVector::basis_state(8, 1));
        assert!((out.amp(7).norm() - 1.0).abs() < 1e-15);
        let back = p.apply(&StateVector::basis_state(8, 7));
        assert!((back.amp(1).norm() - 1.0).abs() < 1e-15);
        assert!(p.matmul(&p).max_abs_diff(&ComplexMatrix::identity(8)) < 1e-15);

        let p03 = transposition_unitary(4, 0, 3).unwrap();
        let out = p03.apply(&StateVector::basis_state(4, 0));
        assert!((out.amp(3).norm() - 1.0).abs() < 1e-15);

        assert!(transposition_unitary(4, 2, 2).is_err());
        assert!(transposition_unitary(4, 0, 9).is_err());
    }

    #[test]
    fn constructors_produce_unitaries() {
        let gates = [
            diag_unitary(8, &[0.3, 2.8]).unwrap(),
            canonical_nl(0.7, -0.2, 1.9),
            transposition_unitary(8, 1, 7).unwrap(),
            haar_random(4, 5).unwrap(),
            haar_random(8, 5).unwrap(),
        ];
        for g in &gates {
            assert!(g.is_unitary(1e-10));
        }
    }

    #[test]
    fn haar_sampling_is_deterministic_per_seed() {
        let a = haar_random(4, 99).unwrap();
        let b = haar_random(4, 99).unwrap();
        assert!(a.max_abs_diff(&b) == 0.0);
        let c = haar_random(4, 100).unwrap();
        assert!(a.max_abs_diff(&c) > 1e-3);
    }

    #[test]
    fn haar_eigenphases_are_uniform() {
        // χ² against the uniform phase density, 20 bins over [-π, π],
        // 10³ samples; dof 19 at the 1% level means χ² < 36.19.
        let n_samples = 1000;
        let bins = 20;
        let mut counts = vec![0usize; bins];
        let mut rng = ChaCha8Rng::seed_from_u64(424242);
        for _ in 0..n_samples {
            let u = haar_random_with_rng(4, &mut rng);
            for phase in crate::linalg::eigenphases(&u).unwrap() {
                let mut b = ((phase + PI) / (2.0 * PI) * bins as f64) as usize;
                if b >= bins {
                    b = bins - 1;
                }
                counts[b] += 1;
            }
        }
        let expected = (n_samples * 4) as f64 / bins as f64;
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        assert!(chi2 < 36.19, "chi2 = {chi2}, counts = {counts:?}");
    }

    #[test]
    fn haar_distribution_is_left_invariant() {
        // |⟨0|U|0⟩|² is Beta(1, 3) distributed for Haar U(4); multiplying
        // by a fixed unitary on the left must not change that.
        let fixed = canonical_nl(0.4, 1.2, -0.8);
        let n_samples = 1000;
        let bins = 10;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let chi2_for = |rotate: bool, rng: &mut ChaCha8Rng| -> f64 {
            let mut counts = vec![0usize; bins];
            for _ in 0..n_samples {
                let mut u = haar_random_with_rng(4, rng);
                if rotate {
                    u = fixed.matmul(&u);
                }
                let x = u.get(0, 0).norm_sqr();
                // Equal-probability bins of Beta(1,3): F(x) = 1-(1-x)^3.
                let q = 1.0 - (1.0 - x).powi(3);
                let mut b = (q * bins as f64) as usize;
                if b >= bins {
                    b = bins - 1;
                }
                counts[b] += 1;
            }
            let expected = n_samples as f64 / bins as f64;
            counts
                .iter()
                .map(|&c| {
                    let d = c as f64 - expected;
                    d * d / expected
                })
                .sum()
        };
        // dof 9 at the 1% level: χ² < 21.67.
        assert!(chi2_for(false, &mut rng) < 21.67);
        assert!(chi2_for(true, &mut rng) < 21.67);
    }

    #[test]
    fn fixtures_match_printed_entries_and_are_unitary() {
        let u1 = fixture_haar(1).unwrap();
        assert!((u1.get(0, 0) - Complex64::new(-0.1328, 0.2848)).norm() < 1e-12);
        let u5 = fixture_haar(5).unwrap();
        assert!((u5.get(3, 3) - Complex64::new(0.1134, 0.0255)).norm() < 1e-12);
        for k in 1..=5 {
            assert!(fixture_haar(k).unwrap().is_unitary(5e-4), "U{k}");
        }
        assert!(fixture_haar(0).is_err());
        assert!(fixture_haar(6).is_err());
    }

    #[test]
    fn matrix_file_header_errors() {
        assert!(matches!(
            parse_matrix_file(""),
            Err(Error::MatrixFileParse { .. })
        ));
        assert!(parse_matrix_file("dim x\n1+0i").is_err());
        assert!(parse_matrix_file("dim 2\n1+0i 0+0i 0+0i").is_err());
        assert!(parse_matrix_file("dim 2\n1+0i 0+0i 0+0i 1").is_err());
    }

    #[test]
    fn matrix_file_parses_exponent_forms() {
        let m = parse_matrix_file("dim 2\n1e-3+2.5e-4i 0+0i\n0+0i -1E2-0.5i\n").unwrap();
        assert!((m.get(0, 0) - Complex64::new(1e-3, 2.5e-4)).norm() < 1e-18);
        assert!((m.get(1, 1) - Complex64::new(-100.0, -0.5)).norm() < 1e-12);
    }

    proptest! {
        #[test]
        fn matrix_file_roundtrip(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = haar_random_with_rng(4, &mut rng);
            let parsed = parse_matrix_file(&format_matrix_file(&u)).unwrap();
            prop_assert!(parsed == u);
        }
    }
}

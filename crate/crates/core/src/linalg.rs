//! Dense complex linear algebra for few-qubit systems: tensor products,
//! partial operations and Hermitian spectra. Dimensions stay at or below
//! 32 (five qubits), so everything is dense and row-major.

use num_complex::Complex64;

use crate::{Error, Result};

/// Entrywise tolerance below which a matrix counts as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius norm at which the Jacobi sweep stops.
const JACOBI_OFF_TOL: f64 = 1e-12;

const MAX_JACOBI_SWEEPS: usize = 100;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length must match dimensions");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in diag.iter().enumerate() {
            m.set(i, i, z);
        }
        m
    }

    /// Build from a nested row list; rows must have equal lengths.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Self::new(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, z: Complex64) {
        self.data[r * self.cols + c] = z;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Conjugate transpose A†.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.get(k, c);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self::new(self.rows, self.cols, data)
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self::new(self.rows, self.cols, self.data.iter().map(|a| a * z).collect())
    }

    /// Largest entrywise absolute difference to another matrix.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, psi: &StateVector) -> StateVector {
        assert_eq!(self.cols, psi.dim(), "matrix/vector dimension mismatch");
        let amps = (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.get(r, c) * psi.amp(c))
                    .sum()
            })
            .collect();
        StateVector::new(amps)
    }

    /// U ρ U† for square U and ρ of matching dimension.
    pub fn conjugate_by(&self, rho: &Self) -> Self {
        self.matmul(rho).matmul(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for r in 0..self.rows {
            for c in r..self.cols {
                dev = dev.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        dev
    }

    /// True iff max |U†U - I| <= tol.
    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let prod = self.adjoint().matmul(self);
        prod.max_abs_diff(&Self::identity(self.rows)) <= tol
    }
}

/// Pure state over a register of subsystems; amplitudes indexed with the
/// first subsystem as the most significant digit, matching `kron` order.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn basis_state(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut amps = vec![Complex64::ZERO; dim];
        amps[index] = Complex64::ONE;
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn amp(&self, i: usize) -> Complex64 {
        self.amps[i]
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        assert!(n > 1e-15, "cannot normalize the zero vector");
        Self {
            amps: self.amps.iter().map(|a| a / n).collect(),
        }
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |self⟩ ⊗ |other⟩.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self { amps }
    }

    /// Density matrix |self⟩⟨self|.
    pub fn outer(&self) -> ComplexMatrix {
        let d = self.dim();
        let mut rho = ComplexMatrix::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                rho.set(r, c, self.amps[r] * self.amps[c].conj());
            }
        }
        rho
    }
}

/// Ordered local dimensions of a register; all 2 in this crate's scope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemLayout {
    dims: Vec<usize>,
}

impl SubsystemLayout {
    pub fn new(dims: Vec<usize>) -> Self {
        assert!(!dims.is_empty() && dims.iter().all(|&d| d >= 2));
        Self { dims }
    }

    pub fn qubits(n: usize) -> Self {
        Self::new(vec![2; n])
    }

    pub fn n_sites(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, site: usize) -> usize {
        self.dims[site]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Stride of a site in the flat index (first site is most significant).
    fn stride(&self, site: usize) -> usize {
        self.dims[site + 1..].iter().product()
    }

    #[inline]
    fn digit(&self, flat: usize, site: usize) -> usize {
        (flat / self.stride(site)) % self.dims[site]
    }
}

/// Kronecker product a ⊗ b.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a.get(i, j);
            if aij == Complex64::ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out.set(i * br + k, j * bc + l, aij * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Transpose the given subsystem only.
pub fn partial_transpose(
    rho: &ComplexMatrix,
    site: usize,
    layout: &SubsystemLayout,
) -> Result<ComplexMatrix> {
    if site >= layout.n_sites() {
        return Err(Error::SiteOutOfRange {
            index: site,
            sites: layout.n_sites(),
        });
    }
    let d = layout.total_dim();
    if !rho.is_square() || rho.rows() != d {
        return Err(Error::DimMismatch {
            expected: d,
            found: rho.rows(),
        });
    }
    let stride = layout.stride(site);
    let mut out = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        let rd = layout.digit(r, site);
        for c in 0..d {
            let cd = layout.digit(c, site);
            // Swap the site digit between row and column indices.
            let r_new = r - rd * stride + cd * stride;
            let c_new = c - cd * stride + rd * stride;
            out.set(r_new, c_new, rho.get(r, c));
        }
    }
    Ok(out)
}

/// Trace out every subsystem not in `keep`; kept sites stay in their
/// original order.
pub fn partial_trace(
    rho: &ComplexMatrix,
    keep: &[usize],
    layout: &SubsystemLayout,
) -> Result<ComplexMatrix> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let n = layout.n_sites();
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if let Some(&bad) = keep_sorted.iter().find(|&&s| s >= n) {
        return Err(Error::SiteOutOfRange {
            index: bad,
            sites: n,
        });
    }
    let d = layout.total_dim();
    if !rho.is_square() || rho.rows() != d {
        return Err(Error::DimMismatch {
            expected: d,
            found: rho.rows(),
        });
    }

    let traced: Vec<usize> = (0..n).filter(|s| !keep_sorted.contains(s)).collect();
    let out_dim: usize = keep_sorted.iter().map(|&s| layout.dim(s)).product();
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);

    for r in 0..d {
        for c in 0..d {
            if traced.iter().any(|&s| layout.digit(r, s) != layout.digit(c, s)) {
                continue;
            }
            let mut ro = 0usize;
            let mut co = 0usize;
            for &s in &keep_sorted {
                ro = ro * layout.dim(s) + layout.digit(r, s);
                co = co * layout.dim(s) + layout.digit(c, s);
            }
            let z = out.get(ro, co) + rho.get(r, c);
            out.set(ro, co, z);
        }
    }
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix, descending.
///
/// The input must be Hermitian within [`HERMITICITY_TOL`]; it is
/// symmetrized as (A + A†)/2 before the solve to absorb roundoff.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(a)?.0)
}

/// Eigenvalues (descending) and matching eigenvector columns of a
/// Hermitian matrix, via cyclic complex Jacobi rotations.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let dev = a.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian {
            deviation: dev,
            tol: HERMITICITY_TOL,
        });
    }
    let n = a.rows();
    // Symmetrize to absorb roundoff.
    let mut b = a.add(&a.adjoint()).scale(Complex64::new(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n);

    for _ in 0..MAX_JACOBI_SWEEPS {
        if off_diag_norm(&b) < JACOBI_OFF_TOL {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = b.get(p, q);
                let m = apq.norm();
                if m < 1e-300 {
                    continue;
                }
                let beta = apq.arg();
                let app = b.get(p, p).re;
                let aqq = b.get(q, q).re;
                let tau = (aqq - app) / (2.0 * m);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let phase = Complex64::from_polar(1.0, -beta);

                // Columns p, q of B and of the accumulated basis: M <- M U
                // with U = [[c, s], [-s e^{-iβ}, c e^{-iβ}]] on the (p,q) plane.
                for k in 0..n {
                    let bkp = b.get(k, p);
                    let bkq = b.get(k, q);
                    b.set(k, p, c * bkp - s * phase * bkq);
                    b.set(k, q, s * bkp + c * phase * bkq);

                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * phase * vkq);
                    v.set(k, q, s * vkp + c * phase * vkq);
                }
                // Rows p, q: M <- U† M.
                let phase_c = phase.conj();
                for k in 0..n {
                    let bpk = b.get(p, k);
                    let bqk = b.get(q, k);
                    b.set(p, k, c * bpk - s * phase_c * bqk);
                    b.set(q, k, s * bpk + c * phase_c * bqk);
                }
                b.set(p, q, Complex64::ZERO);
                b.set(q, p, Complex64::ZERO);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let evals: Vec<f64> = (0..n).map(|i| b.get(i, i).re).collect();
    order.sort_by(|&i, &j| evals[j].partial_cmp(&evals[i]).unwrap());

    let sorted: Vec<f64> = order.iter().map(|&i| evals[i]).collect();
    let mut vecs = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vecs.set(r, new_col, v.get(r, old_col));
        }
    }
    Ok((sorted, vecs))
}

fn off_diag_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                acc += a.get(r, c).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigenphases arg(λ) of a unitary matrix, ascending.
///
/// Works through the Hermitian part (U + U†)/2: within each of its
/// eigenspaces U acts block-diagonally, and residual degeneracies are
/// split with the anti-Hermitian part.
pub fn eigenphases(u: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = u.rows();
    let h = u.add(&u.adjoint()).scale(Complex64::new(0.5, 0.0));
    let (hvals, mut basis) = hermitian_eigen(&h)?;

    // Cluster nearly equal cos-eigenvalues and split each cluster with
    // the sin part, which commutes with U on that subspace.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (hvals[end] - hvals[start]).abs() < 1e-8 {
            end += 1;
        }
        let m = end - start;
        if m > 1 {
            let block = projected_block(u, &basis, start, m);
            let sin_part = block
                .sub(&block.adjoint())
                .scale(Complex64::new(0.0, -0.5));
            let (_, w) = hermitian_eigen(&sin_part)?;
            // basis[:, start..end] <- basis[:, start..end] * w
            let mut updated = ComplexMatrix::zeros(n, m);
            for r in 0..n {
                for c in 0..m {
                    let mut acc = Complex64::ZERO;
                    for k in 0..m {
                        acc += basis.get(r, start + k) * w.get(k, c);
                    }
                    updated.set(r, c, acc);
                }
            }
            for r in 0..n {
                for c in 0..m {
                    basis.set(r, start + c, updated.get(r, c));
                }
            }
        }
        start = end;
    }

    let d = basis.adjoint().matmul(u).matmul(&basis);
    let mut phases: Vec<f64> = (0..n).map(|i| d.get(i, i).arg()).collect();
    phases.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(phases)
}

fn projected_block(
    u: &ComplexMatrix,
    basis: &ComplexMatrix,
    start: usize,
    m: usize,
) -> ComplexMatrix {
    let n = u.rows();
    let mut block = ComplexMatrix::zeros(m, m);
    for r in 0..m {
        for c in 0..m {
            let mut acc = Complex64::ZERO;
            for i in 0..n {
                for j in 0..n {
                    acc += basis.get(i, start + r).conj() * u.get(i, j) * basis.get(j, start + c);
                }
            }
            block.set(r, c, acc);
        }
    }
    block
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::new(
        2,
        2,
        vec![
            Complex64::ZERO,
            Complex64::ONE,
            Complex64::ONE,
            Complex64::ZERO,
        ],
    )
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::new(
        2,
        2,
        vec![
            Complex64::ZERO,
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::ZERO,
        ],
    )
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_diag(&[Complex64::ONE, Complex64::new(-1.0, 0.0)])
}

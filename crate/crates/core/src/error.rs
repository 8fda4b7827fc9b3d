use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian: max |A - A†| = {deviation:.3e} exceeds {tol:.1e}")]
    NotHermitian { deviation: f64, tol: f64 },
    #[error("subsystem index {index} out of range for {sites} subsystems")]
    SiteOutOfRange { index: usize, sites: usize },
    #[error("partial trace requires a nonempty keep set")]
    EmptyKeepSet,
    #[error("invalid bipartition: {reason}")]
    InvalidCut { reason: String },
    #[error("state is not normalized: |norm - 1| = {deviation:.3e}")]
    NotNormalized { deviation: f64 },
    #[error("density matrix does not have unit trace: |tr - 1| = {deviation:.3e}")]
    NotUnitTrace { deviation: f64 },
    #[error("monogamy score needs at least 3 qubits, got {qubits}")]
    TooFewQubits { qubits: usize },
    #[error("angle lists have mismatched lengths: {thetas} thetas vs {xis} xis")]
    ParamLengthMismatch { thetas: usize, xis: usize },
    #[error("unsupported dimension {dim}: expected a power of two in {min}..={max}")]
    BadDimension { dim: usize, min: usize, max: usize },
    #[error("{count} phases do not fit a diagonal of dimension {dim}")]
    TooManyPhases { count: usize, dim: usize },
    #[error("basis indices ({i}, {j}) invalid for a swap in dimension {dim}")]
    BadBasisIndices { i: usize, j: usize, dim: usize },
    #[error("fixture index {k} out of range 1..=5")]
    BadFixture { k: usize },
    #[error("noise strength p = {p} outside [0, 1]")]
    BadNoiseStrength { p: f64 },
    #[error("GGM is defined for pure states; it cannot be combined with noise channels")]
    GgmWithNoise,
    #[error("matrix file parse error at line {line}: {reason}")]
    MatrixFileParse { line: usize, reason: String },
    #[error("invalid optimizer config: {reason}")]
    BadOptimizerConfig { reason: String },
    #[error("invalid quench config: {reason}")]
    BadQuenchConfig { reason: String },
}

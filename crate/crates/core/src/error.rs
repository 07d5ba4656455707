use thiserror::Error;

/// Errors raised across the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("register of {requested} qubits outside the supported range 1..={max}")]
    Capacity { requested: usize, max: usize },

    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitIndex { index: usize, num_qubits: usize },

    #[error("amplitude vector of length {len} does not match {num_qubits} qubits")]
    Dimension { len: usize, num_qubits: usize },

    #[error("state is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("operator is not unitary")]
    NotUnitary,

    #[error("operator is not a Hermitian observable with eigenvalues ±1")]
    NotPlusMinusObservable,

    #[error("operator is not Hermitian")]
    NotHermitian,

    #[error("observable has {factors} factors but the register has {num_qubits} qubits")]
    Arity { factors: usize, num_qubits: usize },

    #[error("expectation value has imaginary residue {residue}")]
    ComplexExpectation { residue: f64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("invalid density matrix: {0}")]
    DensityMatrix(String),

    #[error("operator algebra domain error: {0}")]
    Domain(String),

    #[error("finite-difference slope {finite_difference} disagrees with analytic slope {analytic}")]
    SlopeMismatch { analytic: f64, finite_difference: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("stream join failed: orphaned system shots {orphaned_system:?}, orphaned control shots {orphaned_control:?}")]
    Join {
        orphaned_system: Vec<u64>,
        orphaned_control: Vec<u64>,
    },

    #[error("duplicate shot index {0} in stream")]
    DuplicateShot(u64),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

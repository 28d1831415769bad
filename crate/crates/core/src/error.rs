use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("invalid cluster shape: {0}")]
    InvalidShape(String),
    #[error("operator {id} targets {arity} qubits but only {n_local} are local")]
    GateTooWide { id: usize, arity: usize, n_local: usize },
    #[error("scheduler produced an empty tile with {remaining} gates left")]
    SchedulerStuck { remaining: usize },
    #[error("qubit reordering exchanges no global position")]
    DegenerateQr,
    #[error("term group needs {size} local qubits but only {n_local} are available")]
    TermTooWide { size: usize, n_local: usize },
    #[error("{p} processing elements is too many for {n} qubits")]
    TooManyPEs { n: usize, p: usize },
    #[error("operator {0} is not narrow under the current layout")]
    AccessViolation(usize),
    #[error("qubit reordering does not start from the current layout")]
    LayoutMismatch,
    #[error("Pauli string has X or Y on a global qubit")]
    NotDiagonalizable,
    #[error("dense oracle limited to {max} qubits, got {n}")]
    OracleTooLarge { n: usize, max: usize },
    #[error("circuit needs at least 4 qubits, got {0}")]
    CircuitTooSmall(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: qubit {qubit} out of range for {n} qubits")]
    Index { line: usize, qubit: usize, n: usize },
    #[error("operator {0} has no unitary payload")]
    MissingPayload(usize),
    #[error("{0}")]
    Config(String),
    #[error("io: {0}")]
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

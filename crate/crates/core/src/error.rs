use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported qubit count {0} (expected {1})")]
    QubitCount(usize, &'static str),
    #[error("amplitude vector has length {found}, expected {expected}")]
    AmplitudeLength { expected: usize, found: usize },
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("non-finite amplitude or matrix entry")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("qubit index {qubit} out of range for a {n_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("partial trace needs a nonempty set of qubits to keep")]
    EmptyKeepSet,
    #[error("measurement outcome has zero probability")]
    ZeroProbability,
    #[error("outcome label does not belong to the measurement basis")]
    OutcomeMismatch,
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("density matrix trace is {0}, expected 1")]
    NotUnitTrace(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0})")]
    NotPositive(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("invalid game: {0}")]
    InvalidGame(&'static str),
    #[error("unknown game id")]
    UnknownGame,
    #[error("classical strategy space of 2^{0} is too large")]
    StrategySpaceTooLarge(usize),
    #[error("unknown cheat model")]
    UnknownCheatModel,
    #[error("session ended with cheating suspected; no key is released")]
    CheatingSuspected,
}

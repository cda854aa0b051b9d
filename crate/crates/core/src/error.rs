use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown catalog group `{0}`")]
    UnknownGroup(String),

    #[error("parameter out of range for {group}: {detail}")]
    ParameterOutOfRange { group: String, detail: String },

    #[error("group order {0} exceeds the supported maximum of 64")]
    OrderTooLarge(usize),

    #[error("malformed cayley table: {0}")]
    Parse(String),

    #[error("cayley entry {value} at ({row},{col}) is outside 0..{order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },

    #[error("cayley table is not a latin square: {0}")]
    NotLatinSquare(String),

    #[error("cayley table has no two-sided identity")]
    NoIdentity,

    #[error("element {0} has no two-sided inverse")]
    MissingInverse(usize),

    #[error("associativity violated at ({0},{1},{2})")]
    NonAssociative(usize, usize, usize),

    #[error("character table: eigenvalues failed to separate characters after {0} attempts")]
    CharacterSeparation(u32),

    #[error("state space of {size} points exceeds the cap {cap}")]
    StateSpaceTooLarge { size: u128, cap: usize },

    #[error("index {index} out of range (must be below {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("|n| is undefined for n = 0")]
    ZeroOrderIndex,

    #[error("level {level} outside 0..={depth}")]
    LevelOutOfRange { level: usize, depth: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("unknown bound `{0}`")]
    UnknownBound(String),

    #[error("family kind mismatch: {0}")]
    FamilyKind(String),

    #[error("loewner join did not converge after {sweeps} sweeps (violation {violation:e}, change {change:e})")]
    NonConvergence {
        sweeps: usize,
        violation: f64,
        change: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

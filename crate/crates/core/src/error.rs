use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ground size {0} outside 1..=64")]
    GroundSize(u32),

    #[error("element {element} outside the ground set 1..={n}")]
    ElementOutOfRange { element: u32, n: u32 },

    #[error("bit pattern {bits:#x} has bits beyond ground size {n}")]
    BitsOutOfRange { bits: u64, n: u32 },

    #[error("duplicate member {0}")]
    DuplicateMember(String),

    #[error("ground size mismatch: expected {expected}, got {found}")]
    GroundMismatch { expected: u32, found: u32 },

    #[error("level {level} has {count} members, fewer than r = {r}")]
    MultiplicityDeficit {
        level: usize,
        count: usize,
        r: usize,
    },

    #[error("member {0} does not have size 2")]
    SizeViolation(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("gadget precondition violated: {0}")]
    GadgetPreconditionViolated(String),

    #[error("layout infeasible: {0}")]
    LayoutInfeasible(String),

    #[error("construction postcondition failed: {0}")]
    ConstructionPostconditionFailed(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("instance too large for the brute-force oracle: {0}")]
    InstanceTooLarge(String),

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("header mismatch: {0}")]
    HeaderMismatch(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

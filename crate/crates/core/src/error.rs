use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a constructor or structural operation refused its input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    ElementOrderTooSmall {
        order: usize,
        min: usize,
    },
    NotGenerating,
    Commuting,
    Inverting,
    NotDihedral,
    NotNormal,
    NotAbelian,
    GroupIsAbelian,
    IndexMismatch {
        index: usize,
        expected: &'static str,
    },
    Window {
        size: usize,
        order: usize,
    },
    QuotientNotSimple,
    QuotientAbelian,
    QuotientOrderTooSmall {
        order: usize,
    },
    TrivialElement,
    NotInSubgroup,
    InSubgroup,
    ExcludedGroup(&'static str),
    Index2Invariant(&'static str),
    CosetCollision,
    NotRigid,
    Disconnected,
    NotPartSwap,
    NotAnAutomorphism,
    Other(String),
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::ElementOrderTooSmall { order, min } => {
                write!(f, "element order {order} is below the required {min}")
            }
            Reason::NotGenerating => f.write_str("elements do not generate the group"),
            Reason::Commuting => f.write_str("s^t = s"),
            Reason::Inverting => f.write_str("s^t = s^-1"),
            Reason::NotDihedral => {
                f.write_str("group is not dihedral with rotation s and reflection t")
            }
            Reason::NotNormal => f.write_str("subgroup is not normal"),
            Reason::NotAbelian => f.write_str("subgroup is not abelian"),
            Reason::GroupIsAbelian => f.write_str("group is abelian"),
            Reason::IndexMismatch { index, expected } => {
                write!(f, "index {index} does not satisfy {expected}")
            }
            Reason::Window { size, order } => {
                write!(f, "|S| = {size} lies outside 4 <= |S| <= ({order}-6)/2")
            }
            Reason::QuotientNotSimple => f.write_str("quotient is not simple"),
            Reason::QuotientAbelian => f.write_str("quotient is abelian"),
            Reason::QuotientOrderTooSmall { order } => {
                write!(f, "coset order {order} is below 5")
            }
            Reason::TrivialElement => f.write_str("element is the identity"),
            Reason::NotInSubgroup => f.write_str("element lies outside the subgroup"),
            Reason::InSubgroup => f.write_str("element lies inside the subgroup"),
            Reason::ExcludedGroup(what) => write!(f, "group is excluded: {what}"),
            Reason::Index2Invariant(what) => write!(f, "invalid (N1, n1, n2) data: {what}"),
            Reason::CosetCollision => f.write_str("cosets used by the construction coincide"),
            Reason::NotRigid => {
                f.write_str("bipartition stabiliser is larger than the translation group")
            }
            Reason::Disconnected => f.write_str("Haar graph is disconnected"),
            Reason::NotPartSwap => f.write_str("map does not send (1,-1) to (1,1)"),
            Reason::NotAnAutomorphism => f.write_str("map is not a graph automorphism"),
            Reason::Other(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported group family `{0}`")]
    UnsupportedFamily(String),
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParams { family: String, reason: String },
    #[error("permutation closure exceeds the cap of {cap} elements")]
    ClosureTooLarge { cap: usize },
    #[error("group of order {0} exceeds the table cap of {max}", max = crate::group::MAX_ORDER)]
    OrderTooLarge(usize),
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("element {element} out of range for a group of order {order}")]
    BadElement { element: usize, order: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("connection set is over a group of order {found}, expected {expected}")]
    MismatchedGroup { expected: usize, found: usize },
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("{op}: {reason}")]
    Precondition { op: &'static str, reason: Reason },
    #[error("search budget of {0} nodes exhausted")]
    BudgetExceeded(u64),
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("no verdict reached: {0}")]
    Unknown(String),
    #[error("contradicts the exception catalog: {0}")]
    CatalogMismatch(String),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("JSON error at line {line}, column {column}: {msg}")]
    Json {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn pre(op: &'static str, reason: Reason) -> Self {
        Error::Precondition { op, reason }
    }

    /// True for errors caused by a computational limit rather than by the input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::BudgetExceeded(_) | Error::Unknown(_))
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        }
    }
}

use thiserror::Error;

/// Every failure mode of the library. Arithmetic never truncates silently;
/// anything that cannot be decided at the working precision surfaces here.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = {0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("precision {requested} is not supported for p = {p} (max {max})")]
    PrecisionUnsupported { p: u64, requested: u32, max: u32 },
    #[error("working precision {available} is below the required {needed}")]
    PrecisionTooLow { needed: u32, available: u32 },
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("precision loss: need {needed} digits, only {available} known")]
    PrecisionLoss { needed: i64, available: i64 },
    #[error("element is not integral")]
    NotIntegral,
    #[error("element is not a square")]
    NotASquare,
    #[error("D = {0} does not define a quadratic field extension")]
    NotAField(i64),
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("{what} of size {size} exceeds budget {budget}")]
    BudgetExceeded {
        what: &'static str,
        size: u64,
        budget: u64,
    },
    #[error("cyclotomic order {order} exceeds cap {cap}")]
    OrderBudgetExceeded { order: u64, cap: u64 },
    #[error("value is not rational")]
    NotRational,
    #[error("value is not a root of unity")]
    NotRootOfUnity,
    #[error("no element satisfies the defining identity of the character")]
    NoSolution,
    #[error("character has odd conductor where an even one is required")]
    OddConductor,
    #[error("conductor {0} is too small (need at least 2)")]
    ConductorTooSmall(u32),
    #[error("dual element has a component outside F*sqrt(D) beyond its ambiguity class")]
    AlphaNotTraceFree,
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("matrix is not in J")]
    NotInJ,
    #[error("finite sums did not stabilise up to refinement level {0}")]
    UnstableSum(u32),
    #[error("central character of pi times chi restricted to F is not trivial")]
    IncompatibleCentralCharacter,
    #[error("closed form not applicable: {0}")]
    HypothesisViolation(String),
    #[error("evaluation point lies outside the support")]
    NotOnSupport,
    #[error("p = {0} is not congruent to 4 or 7 mod 9")]
    BadResidue(u64),
    #[error("inconsistent character table: {0}")]
    InconsistentTable(String),
    #[error("torus sums are only implemented for ramified extensions")]
    UnramifiedUnsupported,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

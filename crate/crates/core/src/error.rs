use thiserror::Error;

/// Errors produced anywhere in the toolkit.
///
/// Variants map one-to-one onto the failure modes of the public
/// operations; validation results that are part of a normal return value
/// (cocycle validation, `check_via`, dataset checks) are reported through
/// their own report types instead.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // group construction
    #[error("operation table is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NonAssociative(usize, usize, usize),
    #[error("operation table has no two-sided identity")]
    NoIdentity,
    #[error("operation table is not closed or not a Latin square: {0}")]
    NotClosed(String),
    #[error("group order {order} exceeds the bound {bound}")]
    OrderBound { order: usize, bound: usize },
    #[error("element set is not a subgroup: {0}")]
    NotASubgroup(String),

    // exact arithmetic
    #[error("division by zero")]
    DivisionByZero,
    #[error("size bound exceeded: {0}")]
    SizeBound(String),
    #[error("linear system has no solution")]
    Unsolvable,

    // cohomology
    #[error("objects live over different groups")]
    GroupMismatch,
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("not a normalized 2-cocycle: {0}")]
    NotACocycle(String),
    #[error("cocycles are not cohomologous")]
    NotCohomologous,
    #[error("class data unavailable: {0}")]
    ClassDataUnavailable(String),

    // representations
    #[error("no prime p = 1 mod {exponent} with p > {lower} below the search bound")]
    PrimeSearchFailed { exponent: u64, lower: u64 },
    #[error("decomposition produced a non-integral multiplicity: {0}")]
    NonIntegralDecomposition(String),
    #[error("character table computation failed: {0}")]
    CharacterTable(String),

    // twisted algebras
    #[error("eigenvalue gap {gap:e} lies inside ({tol:e}, {upper:e}); retry with another seed")]
    ClusterAmbiguity { gap: f64, tol: f64, upper: f64 },
    #[error("eigenvalue cluster of size {0} is not a perfect square")]
    NonSquareCluster(usize),
    #[error("spectral check failed: {0}")]
    SpectralCheck(String),

    // motives
    #[error("block {block}: length {length} differs from stabilizer index {index}")]
    StabilizerIndexMismatch { block: usize, length: usize, index: usize },
    #[error("block {block}: stabilizer has nontrivial Schur multiplier {factors:?}")]
    NonTrivialStabilizerH2 { block: usize, factors: Vec<u64> },
    #[error("unsupported atom: {0}")]
    UnsupportedAtom(String),
    #[error("odd cohomology is nonzero: b_{degree} = {value}")]
    OddCohomology { degree: usize, value: u64 },
    #[error("collection length {collection} differs from total Betti number {betti}")]
    LengthMismatch { collection: usize, betti: u64 },
    #[error("missing cocycle class: {0}")]
    MissingClass(String),

    // catalog
    #[error("unknown catalog entry '{0}'")]
    UnknownEntry(String),
    #[error("parameter out of range: {0}")]
    ParamRange(String),
    #[error("action inconsistent with catalog entry: {0}")]
    InconsistentAction(String),

    // measures
    #[error("unsupported invariant '{0}'")]
    UnsupportedInvariant(String),
    #[error("fixed-locus data gives a non-integral character: {0}")]
    NonIntegralCharacter(String),
    #[error("expected {expected} conjugacy classes, got {got}")]
    ClassCountMismatch { expected: usize, got: usize },
    #[error("check violated: {0}")]
    Violation(String),

    // input
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Whether the error reports a failed validation or numerical check
    /// rather than bad input.
    pub fn is_check_failure(&self) -> bool {
        matches!(
            self,
            Error::NonAssociative(..)
                | Error::NotACocycle(_)
                | Error::NotCohomologous
                | Error::NonIntegralDecomposition(_)
                | Error::ClusterAmbiguity { .. }
                | Error::NonSquareCluster(_)
                | Error::SpectralCheck(_)
                | Error::OddCohomology { .. }
                | Error::LengthMismatch { .. }
                | Error::NonIntegralCharacter(_)
                | Error::ClassCountMismatch { .. }
                | Error::Violation(_)
        )
    }
}

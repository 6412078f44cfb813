use num_bigint::BigInt;
use thiserror::Error;

/// Every failure the library can report.
///
/// `FactorFound` is not really a failure: it carries a nontrivial divisor of
/// the modulus that some inversion stumbled on. Callers that only care about
/// the happy path can treat it as an error; attack code matches on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("factor found: {0}")]
    FactorFound(BigInt),
    #[error("division by zero")]
    DivisionByZero,
    #[error("moduli are not pairwise coprime")]
    ModuliNotCoprime,
    #[error("modulus out of supported range")]
    ModulusOutOfRange,
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("rows are linearly dependent")]
    RankDeficient,
    #[error("sigma below smoothing bound {0}")]
    SigmaTooSmall(String),
    #[error("invalid quadratic form: {0}")]
    InvalidForm(String),
    #[error("discriminant mismatch")]
    DiscriminantMismatch,
    #[error("input too large for desk-scale algorithm")]
    TooLarge,
    #[error("prime {0} is inert")]
    PrimeInert(u64),
    #[error("prime {0} is ramified")]
    PrimeRamified(u64),
    #[error("target not in span of generation set")]
    NotInSpan,
    #[error("forbidden j-invariant (0 or 1728)")]
    ForbiddenJ,
    #[error("singular curve")]
    SingularCurve,
    #[error("characteristic polynomial of Frobenius does not split mod {0}")]
    NotSplit(u64),
    #[error("kernel is not an eigenspace of Frobenius")]
    InconsistentKernel,
    #[error("j-invariants are not {0}-isogenous")]
    NotIsogenous(u64),
    #[error("degenerate case: {0}")]
    Degenerate(String),
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("conflicting duplicate coefficient at line {0}")]
    ConflictError(usize),
    #[error("no modular polynomial of level {0} available for this modulus")]
    MissingModularPolynomial(u64),
    #[error("j-invariant is not on the crater")]
    NotOnSurface,
    #[error("prime registry exhausted")]
    OutOfPrimes,
    #[error("encodings share prime {0}")]
    SharedPrime(u64),
    #[error("ladder for {l} has {have} entries, composition needs {need}")]
    LadderTooShort { l: u64, need: usize, have: usize },
    #[error("shared degree (gcd of degrees > 1)")]
    Bottom,
    #[error("gcd has degree {0}, expected 1")]
    NotLinear(usize),
    #[error("convert failed at list {list}, entry {entry}, step {step}: {source}")]
    ConvertFailed {
        list: usize,
        entry: usize,
        step: usize,
        source: Box<Error>,
    },
    #[error("configuration rejected: {0}")]
    ConfigRejected(String),
    #[error("script error: {0}")]
    ScriptError(String),
    #[error("attack not applicable: {0}")]
    NotApplicable(String),
    #[error("attack failed: {0}")]
    AttackFailed(String),
    #[error("no gcd collision found")]
    NoCollision,
    #[error("edges are not consecutive")]
    NotConsecutive,
    #[error("rejected: {0}")]
    Reject(String),
    #[error("key mismatch")]
    KeyMismatch,
    #[error("empty recipient set")]
    EmptyRecipientSet,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("serialization: {0}")]
    Serde(String),
}

impl Error {
    pub fn is_factor(&self) -> bool {
        matches!(self, Error::FactorFound(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Everything that can go wrong while building or checking a group.
///
/// Verdict-style failures (a filtration that is not descending, a transfer
/// kernel of the wrong order) are not errors; they are reported in the
/// corresponding report types. Errors are reserved for construction
/// problems and violated preconditions.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("oracle is inconsistent: {0}")]
    OracleInconsistent(String),
    #[error("group order {order} is not a power of {prime}")]
    NotPGroup { order: usize, prime: u32 },
    #[error("subgroup is not normal: {0}")]
    NotNormal(String),
    #[error("group is not abelian: generators {0} and {1} do not commute")]
    NotAbelian(usize, usize),
    #[error("generator images do not extend to a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("map is not bijective: {0}")]
    NotBijective(String),
    #[error("operation requires a table-backed group")]
    NotTableBacked,
    #[error("operands have different parameters: {0}")]
    MixedParameters(String),
    #[error("unsupported field size {0}")]
    UnsupportedField(u32),
    #[error("prime {0} is not allowed here")]
    BadPrime(u32),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("map is not well defined on cosets: {0}")]
    NotWellDefined(String),
    #[error("map is not an isomorphism: {0}")]
    NotIso(String),
    #[error("automorphism does not preserve level {level} of the filtration")]
    NotStable { level: usize },
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared generator `{0}`")]
    UndeclaredGenerator(String),
    #[error("coset enumeration did not close: {0}")]
    LimitExceeded(String),
    #[error("relator {0} is violated in the realized group")]
    RelatorViolation(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

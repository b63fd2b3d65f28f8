//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by lattice, token, triple, and verifier operations.
///
/// `Parameter` covers violated preconditions on otherwise well-formed
/// inputs; `ResourceBound` means an exhaustive sweep or enumeration was
/// refused because it would exceed the configured budget.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus q^n - 1 = {0} does not fit in 64 bits")]
    ModulusOverflow(String),
    #[error("{d} does not divide {n}")]
    NotADivisor { d: u64, n: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("l = {0} equals the residue characteristic p")]
    EllEqualsP(u64),
    #[error("exponent {k} is out of range for modulus {m}")]
    ExponentRange { k: u64, m: u64 },
    #[error("subfield character label {s} is out of range for order {order}")]
    SubfieldCharRange { s: u64, order: u64 },
    #[error("orbit with canonical representative {0} is not regular")]
    NotRegular(u64),
    #[error("orbit with canonical representative {k} is not {l}-regular")]
    NotEllRegular { k: u64, l: u64 },
    #[error("{m} is not a primitive-element exponent for this extension")]
    NotPrimitive { m: u64 },
    #[error("orbit admits no regular extension with {l}-regular part in it")]
    NoRegularExtension { l: u64 },
    #[error("token does not have coefficient characteristic zero")]
    NotCharacteristicZero,
    #[error("invalid class descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("descriptor degree {delta} does not divide dimension {n}")]
    DegreeDoesNotDivide { delta: u64, n: u64 },
    #[error("lift index {lift} is out of range for unramified degree {f}")]
    LiftRange { lift: u64, f: u64 },
    #[error("triple is on the {0} side; expected the other side")]
    WrongSide(String),
    #[error("orbit field does not match the residue context of the triple")]
    ContextMismatch,
    #[error("no quadratic character: group order {0} is odd")]
    NoQuadraticCharacter(u64),
    #[error("malformed record: {0}")]
    Record(String),
    #[error("no regular cover found; searched primes {searched:?}")]
    CoverSearchExhausted { searched: Vec<u64> },
    #[error("sweep of size {needed} exceeds the configured bound {bound}")]
    ResourceBound { needed: u64, bound: u64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code the command-line tool maps this error to:
    /// 3 for refused resource budgets, 2 for everything else (usage).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceBound { .. } => 3,
            _ => 2,
        }
    }
}

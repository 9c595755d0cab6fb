use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("additive character needs an l^{needed}-th root of unity, only l^{available} available")]
    ConductorTooSmall { needed: u32, available: u32 },
    #[error("enumeration of {size} items exceeds the cap {cap}")]
    SizeOverflow { size: u128, cap: u64 },
    #[error("element is a zero divisor and has no inverse")]
    ZeroDivisorInverse,
    #[error("root of unity order {order} does not divide the conductor {conductor}")]
    BadOrder { order: u64, conductor: u64 },
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("denominator vanishes at the requested point")]
    PoleAtPoint,
    #[error("dilation by zero")]
    ZeroDilation,
    #[error("unit table is not multiplicative")]
    NotMultiplicative,
    #[error("character evaluated at zero")]
    ZeroArgument,
    #[error("modulus undefined for a formal lambda")]
    FormalLambda,
    #[error("function does not vanish at 0")]
    SupportContainsZero,
    #[error("character is unramified")]
    UnramifiedCharacter,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no common Schwartz class c >= 1")]
    NotSchwartz,
    #[error("denominator divisible by p")]
    DenominatorDivisibleByP,
    #[error("valuation undetermined at the maximal precision")]
    PrecisionInconclusive,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag used by the CLI and the Python bindings.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ConductorTooSmall { .. } => "ConductorTooSmall",
            Error::SizeOverflow { .. } => "SizeOverflow",
            Error::ZeroDivisorInverse => "ZeroDivisorInverse",
            Error::BadOrder { .. } => "BadOrder",
            Error::DivisionByZeroPoly => "DivisionByZeroPoly",
            Error::PoleAtPoint => "PoleAtPoint",
            Error::ZeroDilation => "ZeroDilation",
            Error::NotMultiplicative => "NotMultiplicative",
            Error::ZeroArgument => "ZeroArgument",
            Error::FormalLambda => "FormalLambda",
            Error::SupportContainsZero => "SupportContainsZero",
            Error::UnramifiedCharacter => "UnramifiedCharacter",
            Error::BadParameter(_) => "BadParameter",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::NotSchwartz => "NotSchwartz",
            Error::DenominatorDivisibleByP => "DenominatorDivisibleByP",
            Error::PrecisionInconclusive => "PrecisionInconclusive",
            Error::InvalidParams(_) => "InvalidParams",
            Error::Unsupported(_) => "Unsupported",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

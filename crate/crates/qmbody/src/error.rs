use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("exponent must be a rational number >= 1, got {0}")]
    ExponentBelowOne(String),

    #[error("{0} exceeds the size limit")]
    TermTooLarge(String),

    #[error("({0}, {1}) is not a coprime pair with p >= q >= 1")]
    NotCoprime(String, String),

    #[error("unknown export format `{0}`")]
    UnknownFormat(String),

    #[error("cannot parse `{0}`: {1}")]
    Parse(String, String),

    #[error("jet of order {have} is too short; order {need} is required")]
    JetTooShort { have: u32, need: u32 },

    #[error("the curve germ must be tangent to y = 0 at the origin (xi(0) = xi'(0) = 0)")]
    NotTangent,

    #[error("polynomial is zero")]
    ZeroPolynomial,

    #[error("support Gram matrix is not negative definite: {0}")]
    NotNegativeDefinite(String),

    #[error("class is not pseudo-effective relative to the candidate curves: {0}")]
    NotPseudoEffective(String),

    #[error("chamber sweep exceeded {0} chambers")]
    ChamberLimit(usize),

    #[error("catalog curve `{0}` may pass through the flag point")]
    FlagIncidence(String),

    #[error("catalog curves `{0}` and `{1}` tie as supraminimal witnesses")]
    WitnessTie(String, String),

    #[error("one-sided derivative did not stabilise for `{0}`")]
    DerivativeUnstable(String),

    #[error("incompatible radicands {0} and {1}")]
    Radicand(String, String),

    #[error("{0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

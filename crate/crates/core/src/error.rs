use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid modulus {0}: expected 1 <= n <= {max}", max = crate::zn::Modulus::MAX)]
    InvalidModulus(u64),

    #[error("parity split undefined for odd modulus {0}")]
    ParityUndefined(u32),

    #[error("not a unit: gcd({u}, {n}) != 1")]
    NotAUnit { u: u64, n: u32 },

    #[error("n = {n} exceeds the exhaustive ceiling {ceiling} (set ZN_EXHAUSTIVE_CEILING to override)")]
    OverCeiling { n: u32, ceiling: u32 },

    #[error("{combinations} combinations exceed the oracle ceiling {ceiling}")]
    OracleCeiling { combinations: u128, ceiling: u128 },

    #[error("h = {h} exceeds the table guard {max}")]
    HGuard { h: usize, max: usize },

    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("bad set literal token `{token}`: {reason}")]
    SetLiteral { token: String, reason: String },

    #[error("below critical density: alpha = {0} <= alpha0")]
    BelowCriticalDensity(f64),

    #[error("{0}")]
    Precondition(String),

    #[error("invariant broken: {0}")]
    Invariant(String),

    #[error("{0}")]
    InvalidArgument(String),
}

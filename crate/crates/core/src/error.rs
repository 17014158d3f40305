use thiserror::Error;

/// Errors raised by set construction and the invariant computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("term at byte {pos} has modulus 0")]
    ZeroModulus { pos: usize },

    #[error("modulus {modulus} exceeds the configured cap {cap}")]
    ModulusCap { modulus: u128, cap: u64 },

    #[error("integer overflow while {0}")]
    Overflow(&'static str),

    #[error("translation by {shift} would produce negative elements")]
    NegativeTranslate { shift: i64 },

    #[error("element {element} is not congruent to {offset} mod {step} (or lies below the offset)")]
    NonUniform { element: u64, step: u64, offset: u64 },

    #[error("element {0} is not in the set")]
    NotAMember(u64),

    #[error("the set is not an additive basis")]
    NotABasis,

    #[error("the set is finite")]
    FiniteSet,

    #[error("{element} is not an essential element")]
    NotEssential { element: u64 },

    #[error("order {order} exceeds the requested h = {requested}")]
    BelowOrder { order: u32, requested: u32 },

    #[error("order search exceeded the cap h <= {0}")]
    OrderCap(u32),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("prime table capacity exceeded: need index {needed}, have {available}")]
    Capacity { needed: usize, available: usize },

    #[error("oracle search cap exceeded: {size} candidates, cap {cap}")]
    OracleCap { size: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

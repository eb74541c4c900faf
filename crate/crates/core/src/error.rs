use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid specification: {}", .0.join("; "))]
    InvalidSpec(Vec<String>),

    #[error("unknown place `{0}`")]
    UnknownPlace(String),

    #[error("constant extension of degree {s} is not supported when deg ∞ = {infinity_degree}")]
    ExtensionNotSupported { s: u32, infinity_degree: u32 },

    #[error("{s} does not divide the constant field degree s0 = {s0}")]
    InvalidDivisor { s: u32, s0: u32 },

    #[error("algebra is not definite: d_∞ = {local_index}, degree = {degree}")]
    NotDefinite { local_index: u32, degree: u32 },

    #[error("weight class number h_{s} = {value} is not a non-negative integer")]
    IntegralityViolation { s: u32, value: String },

    #[error("work budget exceeded: {needed} enumerated items needed, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("degree {0} is not prime")]
    NotPrimeDegree(u32),

    #[error("genus vector {0} is identically zero")]
    EmptyGenus(String),
}

use thiserror::Error;

/// Errors surfaced by table construction, distribution builders and the
/// simulation front ends.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the tabulated range; the table never extrapolates.
    #[error("argument {value} outside supported range [{min}, {max}] for {what}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    /// A size / cost cap was exceeded (API contract, not a numerical failure).
    #[error("resource cap exceeded for {what}: requested {requested}, cap {cap}")]
    ResourceCap {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("invalid input for {what}: {message}")]
    InvalidInput { what: &'static str, message: String },

    /// Loss of every significant digit, e.g. dividing by a characteristic
    /// function value that underflowed.
    #[error("numerical failure in {what}: {message}")]
    Numerical { what: &'static str, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

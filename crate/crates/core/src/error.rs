use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("k = {k} does not divide n = {n}")]
    NotDivisor { n: u64, k: u64 },

    #[error("invalid partition {input:?}: {reason}")]
    InvalidPartition { input: String, reason: String },

    #[error("unknown reference table {0:?}")]
    UnknownTable(String),

    #[error("fixture {table}: {reason}")]
    Fixture { table: String, reason: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// Fails unless `k` is a positive divisor of the positive integer `n`.
pub fn check_divides(n: u64, k: u64) -> Result<()> {
    if n == 0 || k == 0 || !n.is_multiple_of(k) {
        return Err(Error::NotDivisor { n, k });
    }
    Ok(())
}

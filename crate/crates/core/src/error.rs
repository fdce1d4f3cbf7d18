use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("oracle capacity exceeded: n = {n} is larger than {max}")]
    Capacity { n: usize, max: usize },

    #[error(
        "regime cross-check failed at n = {n}, k = {k}: threshold says {regime}, \
         curvature of ln P at A = 1/2 is {curvature:e}"
    )]
    RegimeMismatch {
        n: usize,
        k: usize,
        regime: String,
        curvature: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

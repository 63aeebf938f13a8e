use thiserror::Error;
use toric_core::FanError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error at {path} (line {line}, column {column}): {message}")]
    Schema {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid fan: maximal cones {first} and {second} do not meet along a common face")]
    FanInvalid { first: usize, second: usize },
    #[error("invalid fan: {0}")]
    Fan(FanError),
    #[error("fan is not smooth: maximal cone {cone} has determinant {det}")]
    NotSmooth { cone: usize, det: String },
    #[error("fan is not complete: facet {facet:?} of maximal cone {cone} has no neighbour")]
    NotComplete { cone: usize, facet: Vec<usize> },
    #[error("{context}: {message}")]
    Analysis {
        context: &'static str,
        message: String,
    },
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

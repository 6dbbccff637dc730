use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} = {value} exceeds table limit {limit}")]
    Range {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} = {value} is outside the guarded range (max {max})")]
    Guard {
        what: &'static str,
        value: u64,
        max: u64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(
        "quadrature did not converge: value {value}, est_error {est_error} after {grid_points} points"
    )]
    Quadrature {
        value: f64,
        est_error: f64,
        grid_points: usize,
    },

    #[error("prime cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

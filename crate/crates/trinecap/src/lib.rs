//! Toolkit for generalized quantum measurements on qubit-trine ensembles:
//! closed-form and generic POVMs, mutual-information and superadditivity
//! calculations, measurement-to-circuit synthesis, Gallager reliability
//! bounds for quantum-classical hybrid coding, and a seeded stochastic
//! model of the photon-counting experiments.

// Index loops over small dense matrices are the house style here; the
// iterator rewrites clippy suggests obscure the row/column structure.
#![allow(clippy::needless_range_loop)]

pub mod circuits;
pub mod expsim;
pub mod infotheory;
pub mod measurement;
pub mod qmath;
pub mod reliability;
pub mod trine;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})")]
    NotPsd { min_eig: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("rate {rate} at or above ceiling {ceiling}")]
    RateAboveCeiling { rate: f64, ceiling: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

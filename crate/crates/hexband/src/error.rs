//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by construction, evaluation and scanning routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Input rejected at construction (unknown names, malformed tables, ...).
    #[error("rejected input: {0}")]
    InvalidInput(String),

    /// Evaluation outside the domain of definition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numeric parameter violates its constraint (a ≤ 0, too few steps, ...).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// The potential violates the symmetry hypothesis q(x) = q(1-x) on which
    /// the whole discriminant pipeline rests.
    #[error("asymmetric potential: max |q(x) - q(1-x)| = {max_asymmetry:.3e} at x = {at_x}")]
    AsymmetricPotential { max_asymmetry: f64, at_x: f64 },

    /// Evaluation at a flat-band eigenvalue where the ψ-representation has a pole.
    #[error("spectral singularity: {0}")]
    Singular(String),

    /// λ-range too small (or otherwise unusable) for the requested output.
    #[error("range error: {0}")]
    Range(String),

    /// A point fed to the band-edge classifier is not a band edge.
    #[error("classification error: {0}")]
    Classification(String),

    /// A numerical routine failed beyond recovery.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

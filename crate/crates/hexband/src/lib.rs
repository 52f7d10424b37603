//! Spectral analysis of periodic Schrödinger operators on the hexagonal
//! lattice with semi-rigid, mass-loaded vertex conditions.
//!
//! The operator is `-a u'' + q(x) u` on every edge of the honeycomb graph
//! (edges parameterized by arc length on `[0,1]`, identical real symmetric
//! potential `q` on each edge), with vertex conditions controlled by two
//! parameters:
//!
//! * `kappa_inv` — semi-rigidity: `u_e(v) ± a·κ⁻¹·u_e'(v)` is shared by all
//!   edges at the vertex, so solutions may jump at a vertex in a
//!   derivative-controlled way (`κ⁻¹ = 0` restores continuity),
//! * `mass` — a concentrated vertex mass `m` entering the net-force balance
//!   `Σ ±a u_e'(v) = λ m ω`.
//!
//! Floquet-Bloch reduction turns the spectral problem into a scalar one: with
//! the monodromy matrix of the single-edge operator and the vertex scalars
//! `D₀, D₁, D₂` built from it, the whole dispersion relation collapses to
//!
//! ```text
//! Δ(λ)² = |S(θ₁,θ₂)|² / 9 ,    S(θ₁,θ₂) = 1 + e^{-iθ₁} + e^{-iθ₂},
//! ```
//!
//! plus flat branches at the roots of `D₀` (eigenvalues of infinite
//! multiplicity carried by loop states). The crate computes all pieces of
//! that picture:
//!
//! * [`potential`] — edge potentials and the symmetry hypothesis they must
//!   satisfy,
//! * [`transfer`] — fundamental solutions, monodromy matrices and the
//!   `ψ`-solution boundary data,
//! * [`dispersion`] — `|S|`, the vertex scalars, the discriminant `Δ` and the
//!   2×2 Bloch coefficient matrix,
//! * [`spectrum`] — bands, gaps, flat-band eigenvalues, Dirac points, Bloch
//!   level sets and free-operator band-edge classification.
//!
//! The companion crate `hexband-oracle` cross-validates the analytic
//! dispersion relation against a finite-difference discretization of the
//! Bloch Hamiltonian on the fundamental domain.

pub mod dispersion;
pub mod error;
pub mod potential;
mod rootfind;
pub mod special;
pub mod spectrum;
pub mod transfer;

pub use dispersion::{BlochMatrix, DValues, DeltaEval, Quasimomentum};
pub use error::Error;
pub use potential::Potential;
pub use spectrum::{Band, Gap, SpectrumReport, SurfaceSample};
pub use transfer::{MonodromyMatrix, Params, PsiBoundary};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

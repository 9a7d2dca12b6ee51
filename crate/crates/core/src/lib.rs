//! Fractional counting process with jumps of size `1..=k`.
//!
//! The process is `M^ν(t) = Σ_{j=1}^{k} j N_j(Y_ν(t))`, where the `N_j` are
//! independent Poisson processes of rates `λ_j` and `Y_ν` is the inverse of a
//! `ν`-stable subordinator. Equivalently it is a compound fractional Poisson
//! process of total rate `Λ = Σ λ_j` whose jumps take the value `j` with
//! probability `λ_j / Λ`.
//!
//! Modules:
//! * [`special`]: Gamma, Mittag-Leffler and Wright functions with error bounds.
//! * [`fractional_poisson`]: the one-jump fractional Poisson process `N^ν`.
//! * [`counting`]: laws of `M^ν(t)` (pmf, mgf, moments, subordination).
//! * [`hitting`]: waiting times and first-passage probabilities.
//! * [`simulation`]: exact path sampling and Monte-Carlo estimators.

pub mod counting;
pub mod error;
pub mod fractional_poisson;
pub mod hitting;
pub mod quadrature;
pub mod simulation;
pub mod special;

pub use error::{Error, Result};

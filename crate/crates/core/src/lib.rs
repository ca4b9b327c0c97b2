//! Numerical laboratory for the Hardy-space form of the Baez-Duarte
//! criterion.
//!
//! The building blocks are truncated Maclaurin series ([`CoeffSeq`]) tagged
//! with the Hilbert space whose weights define their norm, sieved arithmetic
//! tables ([`NtTables`]), the functions `h_k` and the operators acting on
//! them ([`hardy`]), local Dirichlet decompositions ([`dirichlet`]), the
//! least-squares distance experiments ([`baez_duarte`]) and the sine-basis
//! model of `L^2(0,1)` used for dilation completeness ([`pdcp`]).

pub mod baez_duarte;
pub mod compensated;
pub mod dirichlet;
mod error;
pub mod gram;
pub mod hardy;
pub mod numtheory;
pub mod pdcp;
pub mod series;

pub use baez_duarte::{DistanceReport, Family, MoebiusResidualReport, Target};
pub use dirichlet::DirichletDecomposition;
pub use error::{Error, Result};
pub use gram::{GramSystem, RidgePolicy, Solver};
pub use hardy::{IdentityReport, NamedFunction, Operator};
pub use numtheory::NtTables;
pub use pdcp::SineSeq;
pub use series::{CoeffSeq, Space};

/// Default truncation length for series experiments.
pub const DEFAULT_N: usize = 1 << 16;

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

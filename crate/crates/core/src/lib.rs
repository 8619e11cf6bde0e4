//! Testing two initial distributions of a known reversible Markov chain after
//! `t` steps: spectral decay of the π-distance, sample-complexity bounds,
//! statistical window and time, chain families with closed-form spectra, and
//! Monte Carlo and exact-enumeration checks.

pub mod chain;
pub mod cli;
pub mod complexity;
pub mod divergence;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod montecarlo;
pub mod spectral;
pub mod zoo;

pub use chain::{evolve, stationary_distribution, Distribution, TransitionMatrix};
pub use complexity::{Count, TestingInstance};
pub use error::{Error, Result};
pub use spectral::{spectral_decomposition, SpectralDecomposition};
pub use zoo::ZooSpec;

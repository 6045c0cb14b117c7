//! Spectral computations for lamplighter (wreath product) random walks and
//! for absorbing random walks on Bernoulli percolation clusters of Cayley
//! graphs.
//!
//! The crate is organised bottom-up:
//!
//! - [`group_core`]: base groups `G`, finite lamp groups `H`, Cayley balls.
//! - [`animal_enum`]: finite connected subgraphs containing the identity
//!   (site and bond animals), their percolation weights, and a counter-based
//!   Monte Carlo cluster sampler.
//! - [`wreath_algebra`]: exact convolution algebra of finitely supported
//!   measures on `H ≀ G`, projections, intertwining and diagonalization
//!   checks.
//! - [`cluster_spectrum`]: the killed walk matrix `P_A`, a Jacobi
//!   eigensolver, rooted spectral measures and the point-spectrum set.
//! - [`annealed_spectra`]: lamplighter return probabilities and annealed
//!   cluster return probabilities by independent routes, the integrated
//!   density of states, and the identity report.
//! - [`cli_io`]: run configuration, file formats and the commands driven by
//!   the `lampspec` binary.

pub mod animal_enum;
pub mod annealed_spectra;
pub mod cli_io;
pub mod cluster_spectrum;
pub mod error;
pub mod group_core;
pub mod scalar;
pub mod wreath_algebra;

pub use error::{Error, Result};
pub use scalar::Scalar;

//! Computational integral geometry of even translation-invariant valuations.
//!
//! - [`grassmann`]: subspaces, Haar sampling, `|cos|` and `|sin|` of subspace angles.
//! - [`bodies`]: polytopes, exact hull volumes, nearest points, Steiner and
//!   Cauchy–Kubota estimators for intrinsic volumes.
//! - [`transforms`]: Radon and cosine transforms on Grassmannians, even
//!   spherical harmonics, Funk–Hecke eigenvalues and the spectral Lefschetz probe.
//! - [`valuations`]: valuation expressions, the Klain function, the product of
//!   projection valuations and the mixing operator with the unit ball.

pub mod bodies;
pub mod error;
pub mod grassmann;
pub mod sampler;
pub mod transforms;
pub mod valuations;
pub mod special;

pub use error::{GeoError, Result};
pub use grassmann::Subspace;
pub use sampler::{Estimate, SeededSampler};

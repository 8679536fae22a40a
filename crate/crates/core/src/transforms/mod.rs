//! Radon and cosine transforms on Grassmannians, even spherical harmonics on
//! `Gr_1`, their Funk–Hecke eigenvalues and the spectral probe of the composed
//! operator.

pub mod apply;
pub mod eigen;
pub mod gfunction;
pub mod harmonics;
pub mod operator;
pub mod sphere;

pub use apply::{cosine_apply, radon_apply};
pub use eigen::{funk_hecke_cosine_eigen, funk_radon_eigen};
pub use gfunction::{Evaluator, GFunction, GFunctionSpec};
pub use harmonics::{even_harmonic_basis, HarmonicBasis};
pub use operator::{lefschetz_probe, operator_matrix_even, OperatorMatrix, SpectrumReport};

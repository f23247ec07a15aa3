//! Dense complex matrices, polar decomposition and λ-Aluthge transforms,
//! with randomized checkers for the algebraic identities they satisfy.

pub mod backend;
pub mod checks;
pub mod decomp;
pub mod error;
pub mod generators;
pub mod harness;
pub mod lemmas;
pub mod maps;
pub mod matrix;
pub mod polar;
pub mod predicates;
pub mod report;
pub mod scalar;
pub mod spectrum;
pub mod tolerance;

pub use num_complex::Complex;

pub use checks::{CheckId, LambdaRange};
pub use decomp::{hermitian_eig, operator_norm, psd_power, svd, HermitianEig, SvdFactors};
pub use error::MatrixError;
pub use harness::{CheckConfig, TrialOutcome, Verdict};
pub use maps::{adjoint_counterexample, CandidateMap, Counterexample, MapKind};
pub use matrix::{basis_vector, inner, jordan_product, normalized, rank_one, vector_norm, ComplexMatrix};
pub use polar::{
    aluthge, aluthge_from_polar, aluthge_rank_one, duggal, iterate_aluthge, polar, AluthgeTrace, PolarDecomposition,
    TraceRow,
};
pub use predicates::{
    is_normal, is_partial_isometry, is_projection, is_quasi_normal, is_self_adjoint, normal_residual,
    partial_isometry_residual, projection_residual, quasi_normal_residual,
};
pub use report::{CheckReport, Expectation, MatrixFile, Witness};
pub use scalar::Real;
pub use spectrum::{matching_distance, spectral_distance, spectrum};
pub use tolerance::Tolerances;

/// Double-precision complex scalar.
pub type C64 = Complex<f64>;
/// Double-precision complex matrix.
pub type CMatrix = ComplexMatrix<f64>;
/// Single-precision complex matrix.
pub type CMatrix32 = ComplexMatrix<f32>;

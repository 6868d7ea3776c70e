//! Orthogonal polynomials on the unit circle.

pub mod candidate;
pub mod kernel;
pub mod moments;
pub mod oracle;
pub mod recursion;
pub mod szego;

pub use candidate::{validate_orthonormal_candidate, CandidateReport};
pub use kernel::{cd_kernel, kernel_from_schur, kernel_polynomial, lebesgue_kernel};
pub use moments::{bernstein_szego_moments, bernstein_szego_monic, bernstein_szego_monic_of_schur};
pub use oracle::{monic_gram_schmidt, verblunsky_from_measure, MonicFamily};
pub use recursion::{
    schur_from_orthonormal, second_kind, szego_recursion, values_at, OrthonormalPair, SchurSequence,
};
pub use szego::{
    bernstein_szego_grid, bernstein_szego_measure, caratheodory_from_measure, szego_boundary, szego_function,
    szego_ratio_check, CaratheodoryFn, SzegoRatio,
};

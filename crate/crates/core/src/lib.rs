//! Numerical laboratory for orthogonal polynomials on the unit circle.
//!
//! The crate is organised bottom-up:
//!
//! * [`grid`], [`poly`] and [`measure`] hold the plumbing: uniform angular
//!   grids, complex polynomials with a nominal degree, and measures made of a
//!   sampled density plus exact atoms.
//! * [`opuc`] carries the Szegő recursion, second-kind polynomials,
//!   Christoffel–Darboux kernels, Bernstein–Szegő measures, Carathéodory and
//!   Szegő functions, and the Gram–Schmidt oracle every closed form is
//!   checked against.
//! * [`rakhmanov`] adds point masses to a background measure.
//! * [`gluing`] concatenates Schur parameters and produces the glued weight.
//! * [`steklov`] builds measures close to Lebesgue whose orthonormal
//!   polynomials grow like `ε log n`.
//! * [`realline`] maps between symmetric circle measures and measures on
//!   `[-1, 1]`.

pub mod error;
pub mod gluing;
pub mod grid;
pub mod measure;
pub mod opuc;
pub mod poly;
pub mod rakhmanov;
pub mod realline;
pub mod report;
pub mod steklov;

pub use error::{Error, Result};
pub use grid::UnitGrid;
pub use measure::{Atom, CircleMeasure, SteklovCertificate};
pub use num_complex::Complex64;
pub use poly::ComplexPolynomial;

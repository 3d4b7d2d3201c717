//! Dense complex linear algebra: matrices, Hermitian eigensolver, random
//! ensembles, projections and real coordinates.

pub mod coords;
pub mod eig;
pub mod matrix;
pub mod projection;
pub mod rng;
pub mod sample;

pub use coords::{decode, encode, Space};
pub use eig::{hermitian_eig, hermitian_eigenvalues, EigenSystem};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
pub use projection::{projection_from_topk, Projection, TopK};
pub use rng::SeededRng;

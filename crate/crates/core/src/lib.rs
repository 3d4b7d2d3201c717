//! k-numerical ranges and radii of complex matrices, parallel and
//! triangle-equality pairs for `w_k`, and tools for testing linear maps that
//! preserve them.

pub mod combinat;
pub mod error;
pub mod io;
pub mod knum;
pub mod linalg;
pub mod optimize;
pub mod parallel;
pub mod preservers;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Projection, SeededRng, Space};

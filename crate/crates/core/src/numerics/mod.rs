//! Numerical and exact kernels shared by the solvers.

pub mod linalg;
pub mod poly;
pub mod roots;

pub use linalg::{classify_stationary, left_kernel, StationaryClass};
pub use poly::{discriminant, resultant, sturm_count, Bound, UnivariatePoly};
pub use roots::{complex_roots, real_roots};

//! Euclidean distance optimization over multiple root loci of real binary
//! forms, and certification of real rank against the generic rank.
//!
//! A binary form of degree `n` is stored in the monomial basis (see
//! [`forms::BinaryForm`]); distances use the apolar (Bombieri) inner product,
//! under which the rotation group acts orthogonally.

pub mod critical;
pub mod error;
pub mod forms;
pub mod general_solver;
pub mod hook_solver;
pub mod numerics;
pub mod partitions;
pub mod realrank;
pub mod scalar;
mod table1;

pub use error::{Error, Result};
pub use forms::{BinaryForm, Basis, ProjectivePoint, SpecialKind};
pub use partitions::Partition;
pub use scalar::Scalar;

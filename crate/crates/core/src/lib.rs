//! Exact computations for free and non-free quotients of the Calabi-Yau
//! hypersurface family in the toric variety resolved from the 4-cube's dual.
//!
//! The pipeline runs from lattice polytopes and fans, through subgroup
//! enumeration in the hyperoctahedral group, to Hodge numbers of quotients.

pub mod error;
pub mod linalg;
pub mod polytope;
pub mod fan;
pub mod group;
pub mod invariants;
pub mod sections;
pub mod orbifold;

pub use error::{Error, Result};

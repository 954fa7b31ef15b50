//! Exact free-field vertex superalgebra engine.
//!
//! States in βγ, bc and mixed Fock spaces stand in for vertex operators; circle
//! products are computed by the iterate recursion on creation modes. Around the
//! engine sit Lie algebra data, current and generator-family builders, a super
//! differential polynomial ring for symbols and jet coordinates, and the Weyl
//! algebra with zero-mode checks.

pub mod constructions;
pub mod diffalg;
pub mod error;
pub mod fock;
pub mod liealg;
pub mod linalg;
pub mod props;
pub mod rational;
pub mod sampling;
pub mod weyl;

pub use error::{Error, Result};
pub use rational::Q;

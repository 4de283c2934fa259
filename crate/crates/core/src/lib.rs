//! Analysis toolkit for Glass networks, `ẋ = −x + W·θ(x)` with Heaviside
//! activation: stable-set enumeration, sign-pattern theory, semipositive
//! factorizations, state coupling and exact event-driven simulation.

pub mod cli;
pub mod coupling;
pub mod dynamics;
pub mod error;
pub mod factorization;
pub mod index_set;
pub mod linalg;
pub mod network;
pub mod oracle;
pub mod signs;
pub mod stability;

pub use error::{GlassError, Result};
pub use index_set::{all_subsets, BinaryCode, IndexSet, Signature};
pub use linalg::{Matrix, WeightMatrix};
pub use network::{ConstraintCheck, GlassNetwork, InputMode, NetworkFile};
pub use stability::{enumerate_stable_sets, is_stable_set, stable_sets, Listing, StableSetReport, Verdict};

//! Trace invariants of random rectangular tensors: exact enumeration of
//! covering graphs, closed-form asymptotics for melonic and (m,n)-cycle
//! graphs, and seeded Monte Carlo checks of their universality.

pub mod asymptotics;
pub mod constructors;
pub mod enumeration;
pub mod error;
pub mod exec;
pub mod graph;
pub mod perm;
pub mod tensor_sim;
pub mod verify;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};

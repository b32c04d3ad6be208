//! Exact computations with finite matrix groups over `Z/p^k`.
//!
//! Matrices live in `M_n(Z/p^k)` with `p >= n`. The crate provides the
//! truncated exponential and logarithm, Lie closures over `F_p`, breadth-first
//! enumeration of finite matrix groups, p-cores and Nori dimension, and the
//! congruence filtrations of p-adic groups seen through their finite
//! quotients.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod expcore;
pub mod fingroup;
pub mod liealg;
pub mod modring;
pub mod padic;
pub mod sampling;
pub mod verify;

pub use error::{Error, Result};

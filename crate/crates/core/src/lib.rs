//! Certified resolution of the cubic Thue family
//! `(X - F_n Y)(X - L_n Y) X - Y^3 = ±1`.
//!
//! The pipeline bounds `n` with linear forms in logarithms, shrinks that
//! bound with lattice reduction, then solves every remaining equation by
//! exact unit enumeration. Each stage records what it proved in a
//! [`pipeline::Certificate`].

pub mod algebra;
pub mod bounds;
pub mod decimal;
pub mod error;
pub mod par;
pub mod pipeline;
pub mod reduction;
pub mod realball;
pub mod roots;
pub mod sequences;
pub mod solver;
pub mod units;

pub use error::{Error, Result};

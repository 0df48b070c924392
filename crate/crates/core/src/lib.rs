//! Closed left-invariant 2-forms on 2-step nilpotent metric Lie algebras,
//! decided by exact linear algebra over the rationals.

pub mod exactmath;
pub mod nilalgebra;
pub mod catalog;
pub mod magnetic;
pub mod deform;
pub mod flow;

//! Exact arithmetic: rationals, dense rational matrices, sparse multivariate
//! polynomials, Pfaffians and Sturm-sequence root counting.

pub mod matrix;
pub mod pfaffian;
pub mod poly;
pub mod rational;
pub mod upoly;

pub use matrix::{dot, orthogonal_complement, rank_of_vectors, span_basis, RatMatrix};
pub use pfaffian::{pfaffian, pfaffian_poly, skew_determinant_poly, PfaffianError};
pub use poly::{z_vars, Monomial, MultiPoly, VarNames};
pub use rational::{format_rational, int, parse_rational, rat, ParseRationalError, Rational};
pub use upoly::{count_real_roots, isolate_real_roots, Bound, Interval, RootInterval, SturmError, UniPoly};

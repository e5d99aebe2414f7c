//! Exact arithmetic: fields, polynomials, rational functions, matrices.

pub mod factor;
pub mod field;
pub mod matrix;
pub mod poly;
pub mod ratfun;
pub mod simple;

pub use factor::{factor, factor_with_rng, is_irreducible, Factorization};
pub use field::{Elem, Field, FieldKind};
pub use matrix::{Matrix, PolyMatrix};
pub use poly::Poly;
pub use ratfun::RationalFunction;
pub use simple::{minimal_polynomial, norm_element, present_as_simple, SimplePresentation};

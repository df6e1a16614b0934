//! Finite-field algebra: sparse multivariate polynomials, Gröbner bases,
//! quotient algebras and univariate factorization shapes.

pub mod field;
pub mod groebner;
pub mod matrix;
pub mod monomial;
pub mod poly;
pub mod quotient;
pub mod upoly;

pub use field::{is_prime, FieldElem, PrimeModulus};
pub use groebner::GroebnerBasis;
pub use matrix::Matrix;
pub use monomial::{Monomial, MAX_VARS};
pub use poly::MultiPoly;
pub use quotient::{multiplication_matrix, multiplication_matrix_by, standard_monomials};
pub use upoly::UniPoly;

//! Exact arithmetic: sparse integer polynomials, fraction-free integer linear
//! algebra, modular determinants and small rational matrices.

mod matrix;
pub mod modular;
mod poly;
pub mod rational;

pub use matrix::{det_exact, rank_exact, IntMatrix};
pub use modular::{det_mod_p, DEFAULT_PRIMES};
pub use poly::{Monomial, Polynomial, Var};
pub use rational::{QMatrix, Rational};

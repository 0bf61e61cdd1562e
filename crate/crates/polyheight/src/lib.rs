//! Analysis of trivariate polynomials whose Hessian determinant vanishes
//! identically: Newton polyhedra, adapted coordinate systems, the height
//! h(φ) and Varchenko exponent ν(φ), sharp oscillatory-decay and maximal
//! operator exponents, and desk-scale numerical verification of the decay
//! and integrability predictions.

pub mod algebra;
pub mod lp;
pub mod structure;
pub mod adapt;
pub mod catalog;
pub mod pipeline;
pub mod report;
pub mod verify;
pub mod newton;
pub mod rng;

pub use algebra::{LinearMap3, Monomial, Polynomial, Scalar};

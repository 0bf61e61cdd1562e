//! Exact symbolic layer: scalars in ℚ(√D), multivariate polynomials,
//! linear maps, and univariate real-root analysis.

pub mod linalg;
pub mod poly;
pub mod roots;
pub mod scalar;

pub use poly::{AlgebraError, LinearMap3, Monomial, Polynomial, MAX_INPUT_DEGREE};
pub use roots::{real_root_multiplicities, RootDesc, RootInfo};
pub use scalar::Scalar;

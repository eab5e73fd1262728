//! Scalar numerics shared by the solvers: bracketing root finder, scalar
//! minimizer, adaptive quadrature and Gauss–Legendre rules.
//!
//! Everything here is a pure function of its inputs.

mod gauss;
mod minimize;
mod quad;
mod roots;

pub use gauss::{gauss_legendre, QuadratureRule1D};
pub use minimize::{minimize_scalar, minimize_scalar_with, DEFAULT_MIN_MAX_ITER};
pub use quad::{integrate, integrate_with, DEFAULT_QUAD_MAX_DEPTH, DEFAULT_QUAD_TOL};
pub use roots::{find_root, find_root_with, Bracket, DEFAULT_ROOT_MAX_ITER, DEFAULT_ROOT_TOL};

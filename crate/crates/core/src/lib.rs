//! Solvers for Newton's minimal-resistance problem over q-concave profiles.
//!
//! A profile `u` is *q-concave* when `x ↦ u(x) - (q/2)|x|²` is concave. The
//! crate provides
//!
//! * [`profile1d`]: the closed-form one-dimensional minimizer on `[-1, 1]`,
//! * [`radial`]: the radial minimizer on a disk, built from a chain of
//!   scalar root problems,
//! * [`hull2d`]: a convex-hull parametrization of q-concave surfaces on a
//!   polygonal disk together with a quadrature-based cost,
//! * [`optimize`]: a self-adaptive differential-evolution driver for that
//!   cost,
//! * [`verify`]: independent checkers and brute-force oracles.
//!
//! The scalar layers ([`numerics`], [`profile1d`], [`radial`]) are generic
//! over [`Real`] (`f32` or `f64`); the mesh, optimizer and verification
//! layers work in `f64`. Concrete aliases are exported below.

pub mod error;
pub mod hull2d;
pub mod io;
pub mod numerics;
pub mod optimize;
pub mod profile1d;
pub mod radial;
pub mod verify;

pub use error::{Error, Result};

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar usable by the generic solvers.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub use numerics::{Bracket, QuadratureRule1D};
pub use profile1d::{GammaFamilyParams, Profile1D};
pub use radial::{RadialProblem, RadialSample, RadialSolution};

pub type Bracket64 = Bracket<f64>;
pub type Bracket32 = Bracket<f32>;
pub type QuadratureRule1D64 = QuadratureRule1D<f64>;
pub type QuadratureRule1D32 = QuadratureRule1D<f32>;
pub type Profile1D64 = Profile1D<f64>;
pub type Profile1D32 = Profile1D<f32>;
pub type GammaFamilyParams64 = GammaFamilyParams<f64>;
pub type RadialProblem64 = RadialProblem<f64>;
pub type RadialProblem32 = RadialProblem<f32>;
pub type RadialSolution64 = RadialSolution<f64>;
pub type RadialSolution32 = RadialSolution<f32>;

//! Point interactions in one-dimensional quantum mechanics.
//!
//! The complete four-parameter family of contact interactions at the origin,
//! written as a boundary relation
//!
//! ```text
//! (psi(0+), psi'(0+)) = Lambda (psi(0-), psi'(0-)),
//! Lambda = e^{i phi} [[a, b], [c, d]],   ad - bc = 1,  phi in [0, pi)
//! ```
//!
//! together with its unitary U(2) parametrization, the separated (decoupled
//! half-line) members, plane-wave scattering and bound states for both the
//! Schroedinger and Dirac equations, the explicit distributional interaction
//! coefficients, parity classification (including the absence of any odd
//! member beyond the free case), and zero-range-limit analysis of regularized
//! finite-range potentials.
//!
//! All solvers are generic over the floating-point scalar via [`num::Scalar`]
//! (`f64` and `f32` both work); the `*64` aliases at the crate root cover the
//! common case.

pub mod dirac;
pub mod error;
pub mod matrix;
pub mod num;
pub mod params;
pub mod parity;
pub mod regularization;
pub mod sample;
pub mod schrodinger;

pub use error::{Error, Result, Side};
pub use params::{
    lambda_to_unitary, unitary_to_interaction, validate, BoundaryMatrix, ExtReal,
    InteractionParams, LambdaParams, MatrixKind, Reduction, SeparatedParams, Tolerances,
    UnitaryParams,
};

/// `f64` shorthands for the main parameter and result types.
pub type Unitary64 = params::UnitaryParams<f64>;
pub type Lambda64 = params::LambdaParams<f64>;
pub type Separated64 = params::SeparatedParams<f64>;
pub type Interaction64 = params::InteractionParams<f64>;
pub type Dirac64 = dirac::DiracParams<f64>;
pub type Scattering64 = schrodinger::ScatteringResult<f64>;
pub type BoundState64 = schrodinger::BoundState<f64>;
pub type DiracBoundState64 = dirac::DiracBoundState<f64>;
pub type ExtReal64 = params::ExtReal<f64>;

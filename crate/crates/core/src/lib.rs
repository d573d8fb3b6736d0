//! Relativistic Landau levels of a neutral particle with a permanent electric
//! dipole moment, seen from a Fermi–Walker frame rotating about a cosmic
//! string.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: metric, tetrads, Cartan check, field transformation,
//!   induced fields and the effective dipole potential.
//! - [`spectrum`]: closed-form bound-state algebra (effective angular
//!   momentum, energy levels, limits, degeneracy tables).
//! - [`radial`]: Kummer function and normalised radial eigenfunctions.
//! - [`oracle`]: an independent finite-difference eigensolver for the radial
//!   equation (Sturm-sequence bisection on a symmetric tridiagonal operator).
//! - [`spinor`]: four-spinors, the Dirac residual, the bilinear current and
//!   its Gordon decomposition.
//!
//! All numerics are generic over [`Real`]; the `f64` aliases below are what
//! most callers want.

// NaN-rejecting `!(x > 0)` checks and index loops over 4x4 tensors are
// deliberate; compound assignment is not available on the generic scalar.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::assign_op_pattern)]

pub mod error;
pub mod geometry;
pub mod oracle;
pub mod quadrature;
pub mod radial;
pub mod scalar;
pub mod spectrum;
pub mod spinor;

pub use error::{Error, Result};

/// Library version, echoed in run provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use scalar::Real;

/// Rotating cosmic-string background in double precision.
pub type Background = geometry::BackgroundParams<f64>;
/// Particle parameters in double precision.
pub type Particle = spectrum::ParticleParams<f64>;
/// Bound-state labels in double precision.
pub type State = spectrum::QuantumNumbers<f64>;
/// Radial grid in double precision.
pub type Grid = oracle::RadialGrid<f64>;
/// Normalised radial eigenfunction table in double precision.
pub type Wavefunction = radial::WavefunctionTable<f64>;
/// Four-spinor table in double precision.
pub type Spinors = spinor::SpinorTable<f64>;
/// Gordon decomposition in double precision.
pub type Currents = spinor::GordonCurrents<f64>;
/// Oracle comparison row in double precision.
pub type Report = oracle::EigenReport<f64>;

pub use spectrum::Spin;

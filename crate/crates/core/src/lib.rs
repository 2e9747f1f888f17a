//! Quaternionic Nevanlinna theory for slice-regular polynomials and
//! semiregular rationals.
//!
//! The crate provides the function model ([`poly`]), total-order divisors
//! and counting functions ([`divisor`]), Monte Carlo surface means on
//! 3-spheres ([`integral`]), and the Nevanlinna functions `N`, `m`, `H`, `T`
//! together with checks of the Jensen formula and the First Main Theorem
//! ([`nevanlinna`]).

pub mod divisor;
pub mod error;
pub mod integral;
pub mod nevanlinna;
pub mod poly;
pub mod quat;
pub mod selftest;

pub use error::{Error, Result};
pub use integral::{IntegratorConfig, Scheme, SphericalMean};
pub use nevanlinna::{KernelConvention, Target};
pub use poly::{Gl2H, LeftPoly, Rational, RealPoly, SliceFunction};
pub use quat::{Quaternion, SliceComplex, SphereSampler};

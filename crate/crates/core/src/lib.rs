//! Secular Earth–Moon–satellite dynamics around the 2g+h resonance.
//!
//! The crate evaluates the coplanar and inclined secular Hamiltonians,
//! integrates their flows, computes the hyperbolic circular periodic orbits
//! and their invariant manifolds, evaluates the first-order inner and outer
//! map coefficients, and builds diffusion pseudo-orbits across the
//! normally hyperbolic cylinder.

pub mod constants;
pub mod coords;
pub mod diffusion;
pub mod dynamics;
pub mod error;
pub mod hamiltonians;
pub mod jet;
pub mod manifolds;
pub mod melnikov;
pub mod ode;
pub mod periodic;
pub mod roots;
pub mod validation;

pub use constants::{Giacaglia, ModelParams, PhysicalConstants};
pub use error::{Error, Result};
pub use hamiltonians::{Model, Point};

//! Distributional chaos for discrete dynamical systems.
//!
//! The crate is organised around one statistics engine and three families of
//! systems on which it is exercised:
//!
//! - [`dynamics`]: the [`DynamicalSystem`](dynamics::DynamicalSystem) trait, orbit
//!   generation, the close-pair counts ξ, the finite-horizon distribution
//!   functions Ψⁿ and the DC1/DC2/DC3 evidence classifier.
//! - [`symbolic`]: the full binary shift with its exact `1/i` metric, cylinders,
//!   a parametric DC1-scrambled family and the cylinder-level DC1-point
//!   certificate for every point of the shift.
//! - [`interval`]: interval maps, horseshoe search, nested interval trees and the
//!   itinerary pull-back that turns shift-space DC1 points into DC1 points of a
//!   positive-entropy interval map.
//! - [`kolyada`]: the period-doubling interval system of the Feigenbaum logistic
//!   map, the triangular map `F(x, y) = (f(x), h(x)·τ(y))` built on it, fiber-range
//!   traces and the envelope-shrinkage experiment.
//! - [`dcpoint`]: a generic DCi-point claim verifier shared by all three spaces.
//!
//! Every classification produced here is evidence at a finite horizon; nothing
//! in this crate certifies an asymptotic statement.

pub mod cli;
pub mod dcpoint;
pub mod dynamics;
pub mod error;
pub mod interval;
pub mod kolyada;
pub mod parallel;
pub mod report;
pub mod symbolic;

pub use error::{Error, Result};

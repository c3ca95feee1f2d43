//! Geometry and measure functionals on finite metric trees.
//!
//! The crate has three layers:
//!
//! - [`rtree`] — finite simplicial trees with positive real edge lengths:
//!   distances, geodesics, components, balls, projections and convex hulls.
//! - [`measures`], [`location`], [`transport`] — finitely supported measures
//!   on trees and on the line, the scalar functionals attached to them
//!   (partial diameter, separation distance, central radius, `V_p`), medians,
//!   barycenters and Wasserstein-1 distances.
//! - [`observable`], [`harness`] — certified lower/upper bounds for the
//!   sup-over-1-Lipschitz-maps functionals, instance generators and the
//!   inequality check suites behind the `treeconc` CLI.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so instances can be evaluated concurrently without restriction.
//! Randomized components (samplers, generators) take explicit seeds and are
//! deterministic given the seed.

pub mod error;
pub mod harness;
pub mod location;
pub mod measures;
pub mod observable;
pub mod rtree;
pub mod transport;

pub use error::{Error, Result};

/// Absolute tolerance for geometric point equality.
pub const GEOM_TOL: f64 = 1e-12;

/// Relative tolerance for inequality certificates, scaled by instance size.
pub const CERT_TOL: f64 = 1e-9;

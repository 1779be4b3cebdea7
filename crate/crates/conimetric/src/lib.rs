//! Numerical toolkit for the generalized hyperbolic density of order
//! (alpha1, alpha2, alpha3) on the twice-punctured plane C \ {0, 1}: explicit
//! hypergeometric evaluation, sharp lower bounds, the derived sharp
//! Landau/Schottky constants for meromorphic function classes, and a
//! verification layer that certifies the implementation against the metric's
//! defining identities (curvature -1, the rational Schwarzian, Moebius
//! symmetries, closed-form special values).
//!
//! Entry points:
//! - [`metric::Density`]: cached evaluation context for one orders triple;
//! - [`bounds`]: the sharp lower bound and the Landau/Schottky machinery;
//! - [`verify`]: finite-difference curvature/Schwarzian oracles and scans;
//! - [`specialfn`]: the underlying Gamma and Gauss hypergeometric functions.
//!
//! All evaluation is pure: contexts are immutable after construction and safe
//! to share across threads.

// reference constants are kept at full printed precision
#![allow(clippy::excessive_precision)]
// `!(x > 0.0)`-style guards are NaN-rejecting on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod metric;
pub mod specialfn;
pub mod verify;

pub use error::{Error, Result};
pub use metric::{Density, SingularOrders};

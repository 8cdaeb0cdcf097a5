//! Distortion functionals and area bounds for planar homeomorphisms of the
//! closed unit disk.
//!
//! The crate models orientation-preserving diffeomorphisms `f` of the unit
//! disk onto itself with `f(0) = 0`, and computes the functionals that
//! control how much such a mapping distorts circles centred at the origin:
//!
//! * the p-angular dilatation of `f` at a point,
//! * its integral over a circle of radius `r`,
//! * the length of the image curve `f(|z| = r)` and the area it encloses.
//!
//! On top of these, [`bounds`] evaluates a family of sharp integral
//! inequalities tying the quantities together (a Hölder-type estimate per
//! circle, the isoperimetric inequality, differential inequalities for the
//! enclosed area, and exponential/power-type area and modulus majorants),
//! and reports the margin of every check so that regressions in the
//! numerics are visible immediately.
//!
//! Mappings are either closed-form families ([`mapping::Mapping`]) or
//! reconstructed from grid samples ([`ingest`]).

// Domain guards are written as negated comparisons (`!(x > 0.0)`) so that
// NaN operands fail validation instead of slipping through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod dilatation;
pub mod error;
pub mod geometry;
pub mod ingest;
pub mod mapping;
pub mod quadrature;

pub use error::{Error, Result};
pub use mapping::{
    AngularProfile, JacobianSample, Mapping, PolarJet, PolarPoint, RegularityReport,
    TwistProfile, WirtingerDerivs,
};

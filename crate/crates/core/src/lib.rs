//! Simulation and verification engine for symmetry-preserving
//! near-gathering protocols of oblivious point robots.
//!
//! Robots are anonymous points in the plane that repeat synchronous
//! look-compute-move rounds. The crate provides two dynamics, the tools to
//! analyze them, and a simulator that audits every round:
//!
//! * [`gta`]: the smoothed go-to-the-average rule, with its exact Jacobian,
//!   a Gershgorin invertibility certificate, and Newton inversion.
//! * [`wave`]: the contracting-wave protocol built on boundary averaging,
//!   wave segments, and role classification, together with the exact
//!   one-round inverse and a locality check for bounded viewing ranges.
//! * [`symmetry`]: rotational symmetry detection, symmetricity, and
//!   equivariance checks used to certify that dynamics preserve symmetry.
//! * [`geom`]: configurations, the unit-disc graph, the connectivity
//!   boundary walk, enclosing circles, and largest empty circles.
//! * [`sim`]: scenario-driven simulation with per-round metrics, audits,
//!   and deterministic traces.
//!
//! Core types are generic over the scalar via [`scalar::Scalar`]; the
//! aliases at the crate root fix `f64` for everyday use.

pub mod geom;
pub mod gta;
pub mod linalg;
pub mod scalar;
pub mod sim;
pub mod symmetry;
pub mod wave;

pub use geom::GeometryError;

/// `f64` point.
pub type Point64 = geom::Point<f64>;
/// `f64` configuration.
pub type Configuration64 = geom::Configuration<f64>;
/// `f64` boundary cycle.
pub type BoundaryCycle64 = geom::BoundaryCycle<f64>;
/// `f64` circle.
pub type Circle64 = geom::Circle<f64>;

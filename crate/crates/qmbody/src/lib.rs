//! Exact computation of Newton-Okounkov bodies of quasimonomial valuations
//! on the projective plane.

pub mod acceptance;
pub mod cluster;
pub mod error;
pub mod exactmath;
pub mod geometry;
pub mod lattice;
pub mod newton;
pub mod okounkov;
pub mod serial;
pub mod surd;
pub mod zariski;

pub use cluster::{build_cluster, Cluster, ClusterPoint, PointKind};
pub use error::{Error, Result};
pub use exactmath::{cf_expand, exponent_data, ContinuedFraction, ExponentData, Rational};
pub use lattice::{build_lattice, ComponentBasis, DivisorClass, Side};
pub use surd::Surd;

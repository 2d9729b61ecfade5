//! Exact rational polyhedra, mixed-integer linear extended formulations, and
//! the slicing construction that turns them into approximate linear ones.

pub mod caps;
pub mod error;
pub mod exactgeom;
pub mod instances;
pub mod lattice;
pub mod linalg;
pub mod metrics;
pub mod milef;
pub mod zoo;
pub mod rational;

pub use error::{Error, Result};
pub use exactgeom::{AffineMap, HPolyhedron, VPolytope};
pub use linalg::{QMatrix, QVector};
pub use rational::Rational;

//! Exact-arithmetic face calculus for convex sets: faces and relative
//! algebraic interiors of polytopes, step certificates, faces of the
//! probability simplex on ℕ, and convex cores of atomic measures.

pub mod certificate;
pub mod error;
pub mod exec;
pub mod face;
pub mod harness;
pub mod linalg;
pub mod lp;
pub mod measure;
pub mod pmf;
pub mod polyhedron;
pub mod rational;
pub mod sample;

pub use certificate::EpsCertificate;
pub use error::{Error, Result};
pub use exec::Execution;
pub use face::{FaceDescriptor, RelOpenCell};
pub use linalg::{AffineSubspace, Vector};
pub use polyhedron::{ConvexBody, ConvexSet, HPolyhedron, HRow, Step, VPolytope};
pub use rational::Rat;

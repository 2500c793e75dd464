//! Quaternionic hyperbolic plane toolkit: quaternion arithmetic over floats
//! or exact rationals, the signature-(2,1) Hermitian form, `Sp(2,1)`
//! isometries, the Cartan angular invariant and a detector for real-trace
//! groups that preserve a quaternionic line or a real hyperbolic plane.

pub mod cartan;
pub mod error;
pub mod fixtures;
pub mod fuchsian;
pub mod hform;
pub mod isom;
pub mod model;
pub mod quat;
pub mod report;
pub mod scalar;

pub use cartan::{cartan_invariant, triple_product, BoundaryTriple};
pub use error::{Error, Result};
pub use fuchsian::{fuchsian_detect, trace_audit, DetectOptions, FuchsianVerdict, GroupPresentation, Word};
pub use hform::{herm, point_type, PointType, ProjectivePoint, VectorH21};
pub use isom::{frame_from_boundary_pair, Sp21Matrix};
pub use model::{psi, psi_inv, Horospherical};
pub use quat::Quaternion;
pub use scalar::{Rational, Scalar};

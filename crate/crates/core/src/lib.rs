//! Exact electrified-droplet solutions and numerical checks of their
//! analytic identities.
//!
//! The conformal map φ sends the unit disc in the w-plane to the exterior of
//! the droplet; all analytic objects (Schwarz function Ŝ, field F̂, the
//! combination Ĝ = pŜ + iτF̂, quadratic differentials) are evaluated in w.

pub mod annulus;
pub mod error;
pub mod families;
pub mod geometry;
pub mod numerics;
pub mod qdiff;
pub mod sampling;
pub mod tolerances;
pub mod verification;

pub use num_complex::Complex64;

pub use annulus::AnnulusConfig;
pub use error::{DropletError, Result};
pub use families::{BoundaryTrace, DropletFamily, DropletModel};
pub use geometry::{FamilyKind, GeometryReport, ThresholdEstimate};
pub use numerics::{CircleLoop, Polyline};
pub use qdiff::SphereQD;
pub use tolerances::Tolerances;
pub use verification::{Physicality, VerificationReport};

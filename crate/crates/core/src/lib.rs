//! Exact computations on blow-ups of the projective plane at very general
//! points: the Picard lattice, the Pell divisors on `X_10`, SHGH-conditional
//! and finite-field interpolation dimensions, Cremona orbits, lattice bounds
//! for planar cones, and the intersection numbers of a few double covers.

pub mod cone;
pub mod cremona;
pub mod divisor;
pub mod error;
pub mod exec;
pub mod gallery;
pub mod interp;
pub mod pell;
pub mod shgh;

mod serde_util;

pub use divisor::{canonical_class, DivisorClass, SurfaceContext};
pub use error::{Error, Result};
pub use exec::Execution;

//! Exact realizations: rational configurations, chirotopes, affine
//! arrangements, their liftings, and the braid models.

pub mod affine;
pub mod braid;
pub mod config;
pub mod lifting;
pub mod perturb;
pub mod rational;
pub mod tropical;

pub use affine::{lifting_from_affine, AffineArrangement, LIFT_TOKEN};
pub use braid::{braid_config, braid_lifting, braid_matroid, braid_model, braid_offset, vertex_audit, VertexAudit};
pub use config::{Chirotope, RationalVectorConfig};
pub use lifting::LiftingOM;
pub use perturb::{perturbed_config, perturbed_matroid};
pub use rational::Rational;
pub use tropical::TropicalPoint;

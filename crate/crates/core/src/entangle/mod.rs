//! The randomized entangled lifting of the perturbed braid configuration.

pub mod build;
pub mod gamma;
pub mod instance;
pub mod lattice;
pub mod oracle;
pub mod prob;

pub use gamma::{group_properties_check, CyclicTriple, GroupElement, OGammaTable};
pub use instance::{sample_instance, ConstructionInstance, Element, ElementIndex};
pub use lattice::{beta, gamma_of_point, omega_set, q_star, LatticePoint, OmegaCertificate};

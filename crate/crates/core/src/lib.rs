//! Exact oriented-matroid workbench.
//!
//! * [`sign`], [`om`], [`validate`], [`dual`]: sign-vector calculus and the
//!   cocircuit-based oriented-matroid container.
//! * [`realize`]: exact rational vector configurations, chirotopes, affine
//!   arrangements and their liftings, the braid models.
//! * [`flips`]: flips of uniform liftings and flip-graph exploration.
//! * [`entangle`]: the randomized entangled lifting of the perturbed braid
//!   configuration and its lattice-point bookkeeping.
//! * [`harness`]: membership checks, experiments and the command-line front end.

pub mod dual;
pub mod entangle;
pub mod flips;
pub mod harness;
pub mod error;
pub mod om;
pub mod realize;
pub mod sign;
pub mod validate;

pub use error::{OmError, Result};
pub use om::OrientedMatroid;
pub use sign::{GroundSet, Sign, SignVector};

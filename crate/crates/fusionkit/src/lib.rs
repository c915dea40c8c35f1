//! Finite-group engine, fusion systems, linking systems and the local
//! machinery needed to compute and cross-validate centralizers of normal
//! subsystems, together with a catalog of example groups and pairs.
//!
//! Conventions used throughout the crate:
//!
//! * group elements act on the right: `x^g = g⁻¹ x g`, and permutations act
//!   on points on the right (`point^perm`);
//! * composition of maps is left-to-right: `(x)(f · g) = ((x)f)g`;
//! * every set-valued output is sorted, so reports are byte-stable.

pub mod caps;
pub mod catalog;
pub mod error;
pub mod fusion;
pub mod group;
pub mod linking;
pub mod local;
pub mod perm;
pub mod report;

pub use caps::Caps;
pub use error::{Error, Result};

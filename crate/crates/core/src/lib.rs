//! Relative Cayley graph metrics, H-components, shortcutting of broken
//! lines, path representatives, metric conditions and a small profinite
//! separability engine, for a whitelist of groups with exact normal forms.

pub mod cayley;
pub mod components;
pub mod conditions;
pub mod error;
pub mod geometry;
pub mod groups;
pub mod pathrep;
pub mod separability;
pub mod shortcut;

pub use error::{Error, Result};
pub use groups::{Elem, GenSet, GroupSpec, Letter, PeripheralSpec, Role, SubgroupSpec};

//! Stallings graphs, products of subgroups of free groups, finite quotient
//! search and the amalgam double-coset criterion.

mod amalgam_ops;
mod membership;
mod quotient;
mod rational;
mod stallings;

pub use amalgam_ops::{
    amalgam_product_member, amalgam_reduce, induced_quotient, AmalgamNF, FactorMap, InducedQuotient, ProductKind,
};
pub use membership::SubgroupOracle;
pub use quotient::{
    completion, find_separating_quotient, minx_quotient_harness, FiniteQuotient, MinxHarness, SearchLimits, Separation,
    Strategy,
};
pub use rational::{product_member, CompiledSubset, ProductAutomaton, RationalSubset};
pub use stallings::{finite_index_in, intersection, subgroup_graph, subgroup_graph_of, ReadOutcome, StallingsGraph};

use crate::error::Result;
use crate::groups::{Elem, GroupSpec, SubgroupSpec};

/// Membership of `g` in the subgroup of a free group generated by `h`.
pub fn member(group: &GroupSpec, g: &Elem, h: &SubgroupSpec) -> Result<bool> {
    Ok(subgroup_graph_of(group, h)?.contains_word(group.free_word(g)?))
}

/// `U ≼ V`, i.e. `|U : U ∩ V| < ∞`, for subgroups of a free group.
pub fn preccurlyeq(group: &GroupSpec, u: &SubgroupSpec, v: &SubgroupSpec) -> Result<bool> {
    Ok(finite_index_in(&subgroup_graph_of(group, u)?, &subgroup_graph_of(group, v)?))
}

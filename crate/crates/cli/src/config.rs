//! The TOML run configuration and its conversion into library values.

use std::fmt;

use serde::{Deserialize, Serialize};

use relsep::groups::FiniteGroup;
use relsep::{Elem, GenSet, GroupSpec, PeripheralSpec, SubgroupSpec};

/// A malformed or inconsistent configuration.
#[derive(Debug)]
pub struct SchemaError(pub String);

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "schema: {}", self.0)
    }
}

impl std::error::Error for SchemaError {}

pub fn schema(msg: impl Into<String>) -> anyhow::Error {
    SchemaError(msg.into()).into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    #[serde(default)]
    pub seed: u64,
    pub group: GroupConfig,
    #[serde(default)]
    pub subgroups: Subgroups,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub inputs: Inputs,
}

/// A group from the supported families. Generator names default to
/// `a, b, c, ...`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupConfig {
    Free {
        rank: Option<usize>,
        gens: Option<Vec<String>>,
    },
    FreeAbelian {
        rank: Option<usize>,
        gens: Option<Vec<String>>,
    },
    /// `Z/n` with one generator.
    Cyclic {
        order: usize,
        gens: Option<Vec<String>>,
    },
    /// A finite group given by its multiplication table and generators.
    Finite {
        table: Vec<Vec<u32>>,
        identity: u32,
        generators: Vec<u32>,
        gens: Option<Vec<String>>,
    },
    FreeProduct {
        factors: Vec<GroupConfig>,
    },
    /// `left *_D right` with `D` given by identified pairs.
    Amalgam {
        left: Box<GroupConfig>,
        right: Box<GroupConfig>,
        pairs: Vec<[u32; 2]>,
    },
    RelHyp {
        base: Box<GroupConfig>,
        #[serde(default)]
        peripherals: Vec<PeripheralSpec>,
    },
}

fn names(rank: Option<usize>, gens: &Option<Vec<String>>, default_rank: usize) -> anyhow::Result<GenSet> {
    match (rank, gens) {
        (Some(r), Some(g)) if r != g.len() => Err(schema(format!("rank {r} but {} generator names", g.len()))),
        (_, Some(g)) => Ok(GenSet::new(g.clone())?),
        (r, None) => Ok(GenSet::standard(r.unwrap_or(default_rank))),
    }
}

impl GroupConfig {
    pub fn build(&self) -> anyhow::Result<GroupSpec> {
        Ok(match self {
            GroupConfig::Free { rank, gens } => GroupSpec::free_named(names(*rank, gens, 2)?),
            GroupConfig::FreeAbelian { rank, gens } => GroupSpec::free_abelian(names(*rank, gens, 2)?),
            GroupConfig::Cyclic { order, gens } => {
                GroupSpec::finite(FiniteGroup::cyclic(*order)?, names(Some(1), gens, 1)?)?
            }
            GroupConfig::Finite { table, identity, generators, gens } => {
                let g = FiniteGroup::from_table(table.clone(), *identity, generators.clone())?;
                GroupSpec::finite(g, names(Some(generators.len()), gens, generators.len())?)?
            }
            GroupConfig::FreeProduct { factors } => {
                GroupSpec::free_product(factors.iter().map(GroupConfig::build).collect::<anyhow::Result<_>>()?)?
            }
            GroupConfig::Amalgam { left, right, pairs } => {
                let pairs: Vec<(u32, u32)> = pairs.iter().map(|p| (p[0], p[1])).collect();
                GroupSpec::amalgam(left.build()?, right.build()?, &pairs)?
            }
            GroupConfig::RelHyp { base, peripherals } => GroupSpec::rel_hyp(base.build()?, peripherals.clone())?,
        })
    }
}

/// Subgroups by role, each a list of generator words.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Subgroups {
    pub q: Option<Vec<String>>,
    pub r: Option<Vec<String>>,
    pub q_prime: Option<Vec<String>>,
    pub r_prime: Option<Vec<String>>,
    #[serde(default)]
    pub p: Vec<Vec<String>>,
    #[serde(default)]
    pub u: Vec<Vec<String>>,
    #[serde(default)]
    pub t: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub radius: Option<usize>,
    pub b: Option<usize>,
    pub c: Option<usize>,
    pub a: Option<usize>,
    pub theta: Option<usize>,
    pub zeta: Option<usize>,
    pub lambda: Option<usize>,
    /// The additive quasigeodesic constant.
    pub qg_c: Option<usize>,
    pub eta: Option<usize>,
    pub budget: Option<usize>,
    pub n_max: Option<usize>,
    pub random_tries: Option<usize>,
    pub max_factors: Option<usize>,
    pub max_len: Option<usize>,
    pub max_states: Option<usize>,
    /// `word` or `relative`.
    pub metric: Option<String>,
    /// Representative kind for `minimize-type`: `I`, `II` or `III`.
    pub kind: Option<String>,
    /// Amalgam product for `amalgam-member`: `UC`, `BV`, `BC`, `UD`, `DV`.
    pub product: Option<String>,
    #[serde(default)]
    pub conditions: Vec<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inputs {
    /// Points or broken-line nodes.
    #[serde(default)]
    pub elements: Vec<String>,
    pub g: Option<String>,
    pub word: Option<String>,
    pub prefix: Option<String>,
    /// Subgroups of a product `F_1 ... F_s`.
    #[serde(default)]
    pub factors: Vec<Vec<String>>,
    /// Elements of a finite set for `minx`.
    #[serde(default)]
    pub set: Vec<String>,
    /// Amalgam factor subgroups `U <= B` and `V <= C` by element index.
    #[serde(default)]
    pub u: Vec<u32>,
    #[serde(default)]
    pub v: Vec<u32>,
}

impl RunConfig {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        toml::from_str(text).map_err(|e| schema(e.to_string()))
    }
}

pub fn elem(group: &GroupSpec, text: &str) -> anyhow::Result<Elem> {
    Ok(group.parse_elem(text)?)
}

pub fn elems(group: &GroupSpec, texts: &[String]) -> anyhow::Result<Vec<Elem>> {
    texts.iter().map(|t| elem(group, t)).collect()
}

pub fn subgroup(group: &GroupSpec, gens: &[String]) -> anyhow::Result<SubgroupSpec> {
    let h = SubgroupSpec::new(elems(group, gens)?);
    h.validate(group)?;
    Ok(h)
}

/// A required subgroup role.
pub fn role(group: &GroupSpec, gens: &Option<Vec<String>>, name: &str) -> anyhow::Result<SubgroupSpec> {
    match gens {
        Some(g) => subgroup(group, g),
        None => Err(schema(format!("subgroup `{name}` is required"))),
    }
}

pub fn required<T: Copy>(v: Option<T>, name: &str) -> anyhow::Result<T> {
    v.ok_or_else(|| schema(format!("parameter `{name}` is required")))
}

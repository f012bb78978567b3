use std::collections::BTreeSet;

use super::stallings::{subgroup_graph_of, StallingsGraph};
use crate::cayley::RelGraphView;
use crate::error::{Error, Result};
use crate::groups::{Elem, Family, GroupSpec, SubgroupSpec};

/// Decision procedure for membership in a fixed subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubgroupOracle {
    /// Subgroup of a free group.
    Free(StallingsGraph),
    /// Subgroup of `Z^n` in row echelon form.
    Abelian(Vec<Vec<i64>>),
    /// Subgroup of a finite group, listed.
    Finite(BTreeSet<Elem>),
    /// The peripheral subgroup `H_ν`.
    Peripheral(usize),
}

impl SubgroupOracle {
    pub fn new(group: &GroupSpec, h: &SubgroupSpec) -> Result<Self> {
        h.validate(group)?;
        match group.base().family() {
            Family::Free => Ok(SubgroupOracle::Free(subgroup_graph_of(group, h)?)),
            Family::FreeAbelian => {
                let rows = h
                    .gens
                    .iter()
                    .map(|g| match g {
                        Elem::Abelian(v) => Ok(v.clone()),
                        _ => Err(Error::FamilyMismatch(format!("{g:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(SubgroupOracle::Abelian(echelon(rows, group.rank())))
            }
            Family::Finite(_) => {
                let id = group.identity();
                let mut set = BTreeSet::from([id.clone()]);
                let mut queue = vec![id];
                while let Some(x) = queue.pop() {
                    for s in &h.gens {
                        let y = group.mul(&x, s)?;
                        if set.insert(y.clone()) {
                            queue.push(y);
                        }
                    }
                }
                Ok(SubgroupOracle::Finite(set))
            }
            other => Err(Error::Unsupported(format!(
                "subgroup membership in a {} group",
                match other {
                    Family::FreeProduct(_) => "free product",
                    Family::Amalgam(_) => "amalgam",
                    _ => "relatively hyperbolic",
                }
            ))),
        }
    }

    pub fn peripheral(view: &RelGraphView, nu: usize) -> Result<Self> {
        if nu >= view.num_peripherals() {
            return Err(Error::InvalidSpec(format!("no peripheral subgroup {nu}")));
        }
        Ok(SubgroupOracle::Peripheral(nu))
    }

    pub fn contains(&self, view: &RelGraphView, g: &Elem) -> Result<bool> {
        match self {
            SubgroupOracle::Free(graph) => Ok(graph.contains_word(view.group().free_word(g)?)),
            SubgroupOracle::Abelian(rows) => match g {
                Elem::Abelian(v) => Ok(in_lattice(rows, v)),
                _ => Err(Error::FamilyMismatch(format!("{g:?}"))),
            },
            SubgroupOracle::Finite(set) => Ok(set.contains(g)),
            SubgroupOracle::Peripheral(nu) => Ok(view.in_peripheral(*nu, g)),
        }
    }
}

/// Row echelon form over the integers by gcd row operations.
fn echelon(mut rows: Vec<Vec<i64>>, n: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for col in 0..n {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            for &i in &nz {
                if i != p {
                    let q = rows[i][col] / rows[p][col];
                    let prow = rows[p].clone();
                    for (x, y) in rows[i].iter_mut().zip(&prow) {
                        *x -= q * y;
                    }
                }
            }
        }
        if let Some(i) = (0..rows.len()).find(|&i| rows[i][col] != 0) {
            let mut r = rows.swap_remove(i);
            if r[col] < 0 {
                r.iter_mut().for_each(|x| *x = -*x);
            }
            out.push(r);
        }
    }
    out
}

fn in_lattice(rows: &[Vec<i64>], v: &[i64]) -> bool {
    let mut v = v.to_vec();
    for r in rows {
        let col = r.iter().position(|&x| x != 0).unwrap();
        if v[col] % r[col] != 0 {
            return false;
        }
        let q = v[col] / r[col];
        for (x, y) in v.iter_mut().zip(r) {
            *x -= q * y;
        }
    }
    v.iter().all(|&x| x == 0)
}

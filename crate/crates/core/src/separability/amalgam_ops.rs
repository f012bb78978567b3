use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{Amalgam, Elem, FiniteGroup, GroupSpec, Letter, Side};

/// Reduced form `x_1 ... x_k` of an amalgam element: syllables alternate
/// between the factors and none lies in the edge group when `k >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AmalgamNF {
    pub syllables: Vec<(Side, u32)>,
}

impl AmalgamNF {
    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn elem(&self) -> Elem {
        Elem::Amalgam(self.syllables.clone())
    }
}

fn amalgam_of(group: &GroupSpec) -> Result<&Amalgam> {
    group.amalgam_data().ok_or(Error::WrongFamily { expected: "amalgam", found: group.base().family_name() })
}

pub fn amalgam_reduce(group: &GroupSpec, w: &[Letter]) -> Result<AmalgamNF> {
    amalgam_of(group)?;
    match group.word_to_elem(w)? {
        Elem::Amalgam(s) => Ok(AmalgamNF { syllables: s }),
        other => Err(Error::FamilyMismatch(format!("{other:?}"))),
    }
}

/// Which double-coset-like product of factor subgroups to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ProductKind {
    /// `U C` for `U <= B`.
    UC,
    /// `B V` for `V <= C`.
    BV,
    BC,
    /// `U D`.
    UD,
    /// `D V`.
    DV,
}

/// Whether `x` (in the left factor) lies in `U D`.
fn in_ud(am: &Amalgam, u: &[u32], x: u32) -> bool {
    let b = am.factor(Side::Left);
    am.edge_elements().iter().any(|&d| u.contains(&b.mul(x, b.inv(d))))
}

/// Whether `y` (in the right factor) lies in `D V`.
fn in_dv(am: &Amalgam, v: &[u32], y: u32) -> bool {
    let c = am.factor(Side::Right);
    am.edge_pairs().iter().any(|&(_, d)| v.contains(&c.mul(c.inv(d), y)))
}

/// Membership in `UC`, `BV`, `BC`, `UD` or `DV`, where `U` and `V` are the
/// subgroups of the left and right factors generated by the given lists.
///
/// Decided on the reduced form: length 0 is always in; forms of length at
/// least 3 and forms starting with a right syllable and ending with a left
/// one are never in; the remaining forms reduce to a `UD` or `DV` query on
/// a single syllable.
pub fn amalgam_product_member(group: &GroupSpec, g: &Elem, kind: ProductKind, u: &[u32], v: &[u32]) -> Result<bool> {
    let am = amalgam_of(group)?;
    group.check(g)?;
    let Elem::Amalgam(s) = g else { unreachable!("checked above") };
    let (b, c) = (am.factor(Side::Left), am.factor(Side::Right));
    if u.iter().any(|&x| !b.contains(x)) || v.iter().any(|&y| !c.contains(y)) {
        return Err(Error::InvalidSpec("subgroup element out of range".into()));
    }
    let u = b.closure(u);
    let v = c.closure(v);
    let x = |i: usize| s[i].1;
    Ok(match (s.len(), s.first().map(|p| p.0), s.last().map(|p| p.0)) {
        (0, _, _) => true,
        (1, Some(Side::Left), _) => match kind {
            ProductKind::BC | ProductKind::BV => true,
            ProductKind::UC | ProductKind::UD => in_ud(am, &u, x(0)),
            ProductKind::DV => am.in_edge(Side::Left, x(0)),
        },
        (1, Some(Side::Right), _) => match kind {
            ProductKind::BC | ProductKind::UC => true,
            ProductKind::BV | ProductKind::DV => in_dv(am, &v, x(0)),
            ProductKind::UD => false,
        },
        (2, Some(Side::Left), Some(Side::Right)) => match kind {
            ProductKind::BC => true,
            ProductKind::UC => in_ud(am, &u, x(0)),
            ProductKind::BV => in_dv(am, &v, x(1)),
            ProductKind::UD | ProductKind::DV => false,
        },
        _ => false,
    })
}

/// A homomorphism from a finite factor onto a finite group, stored as the
/// image of every element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorMap {
    pub target: FiniteGroup,
    pub images: Vec<u32>,
}

impl FactorMap {
    /// Extends generator images to a homomorphism, checking the relations.
    pub fn from_generator_images(source: &FiniteGroup, target: FiniteGroup, gen_images: &[u32]) -> Result<Self> {
        if gen_images.len() != source.gens().len() || gen_images.iter().any(|&t| !target.contains(t)) {
            return Err(Error::InvalidSpec("generator images do not match the source generators".into()));
        }
        let mut images = vec![u32::MAX; source.order()];
        images[source.identity() as usize] = target.identity();
        let mut queue = vec![source.identity()];
        while let Some(x) = queue.pop() {
            for (&s, &t) in source.gens().iter().zip(gen_images) {
                let y = source.mul(x, s);
                if images[y as usize] == u32::MAX {
                    images[y as usize] = target.mul(images[x as usize], t);
                    queue.push(y);
                }
            }
        }
        for x in 0..source.order() as u32 {
            for y in 0..source.order() as u32 {
                if images[source.mul(x, y) as usize] != target.mul(images[x as usize], images[y as usize]) {
                    return Err(Error::InvalidSpec("generator images do not define a homomorphism".into()));
                }
            }
        }
        Ok(FactorMap { target, images })
    }

    pub fn identity(source: &FiniteGroup) -> Self {
        FactorMap { target: source.clone(), images: (0..source.order() as u32).collect() }
    }

    pub fn trivial(source: &FiniteGroup) -> Self {
        let target = FiniteGroup::cyclic(1).expect("trivial group");
        FactorMap { target, images: vec![0; source.order()] }
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }
}

/// The map `A -> B̄ *_{D̄} C̄` induced by quotients of the two factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedQuotient {
    pub target: GroupSpec,
    /// Element of the left factor to element of `B̄`.
    pub left: Vec<u32>,
    pub right: Vec<u32>,
}

/// Restriction of a factor map to its image, as a finite group generated
/// by the images of the source generators.
fn image_group(source: &FiniteGroup, map: &FactorMap) -> Result<(FiniteGroup, Vec<u32>)> {
    let mut elems: Vec<u32> = map.images.clone();
    elems.sort_unstable();
    elems.dedup();
    let pos = |t: u32| elems.binary_search(&t).unwrap() as u32;
    let table: Vec<Vec<u32>> =
        elems.iter().map(|&x| elems.iter().map(|&y| pos(map.target.mul(x, y))).collect()).collect();
    let gens: Vec<u32> = source.gens().iter().map(|&s| pos(map.apply(s))).collect();
    let group = FiniteGroup::from_table(table, pos(map.target.identity()), gens)?;
    let images = map.images.iter().map(|&t| pos(t)).collect();
    Ok((group, images))
}

/// Builds `ψ: A -> B̄ *_{D̄} C̄` from quotients of the factors. The two
/// quotients must induce the same quotient of the edge group: `d ↦ d̄_B`
/// and `d ↦ d̄_C` have to identify exactly the same edge elements.
pub fn induced_quotient(group: &GroupSpec, phi_b: &FactorMap, phi_c: &FactorMap) -> Result<InducedQuotient> {
    let am = amalgam_of(group)?;
    let (b, c) = (am.factor(Side::Left), am.factor(Side::Right));
    if phi_b.images.len() != b.order() || phi_c.images.len() != c.order() {
        return Err(Error::InvalidSpec("factor maps do not match the factors".into()));
    }
    let pairs = am.edge_pairs();
    for &(d1, e1) in &pairs {
        for &(d2, e2) in &pairs {
            let same_b = phi_b.apply(d1) == phi_b.apply(d2);
            let same_c = phi_c.apply(e1) == phi_c.apply(e2);
            if same_b != same_c {
                return Err(Error::EdgeMismatch(format!(
                    "edge elements {d1} and {d2} are identified by one quotient only"
                )));
            }
        }
    }
    let (bbar, left) = image_group(b, phi_b)?;
    let (cbar, right) = image_group(c, phi_c)?;
    let bar_pairs: Vec<(u32, u32)> = pairs.iter().map(|&(d, e)| (left[d as usize], right[e as usize])).collect();
    let names = group.gens().names();
    let nb = b.gens().len();
    let lspec = GroupSpec::finite(bbar, crate::groups::GenSet::new(names[..nb].to_vec())?)?;
    let rspec = GroupSpec::finite(cbar, crate::groups::GenSet::new(names[nb..].to_vec())?)?;
    let target = GroupSpec::amalgam(lspec, rspec, &bar_pairs)?;
    Ok(InducedQuotient { target, left, right })
}

impl InducedQuotient {
    pub fn apply(&self, g: &Elem) -> Result<Elem> {
        let Elem::Amalgam(s) = g else {
            return Err(Error::FamilyMismatch(format!("{g:?} is not an amalgam element")));
        };
        let am = amalgam_of(&self.target)?;
        let mapped = s
            .iter()
            .map(|&(side, x)| (side, if side == Side::Left { self.left[x as usize] } else { self.right[x as usize] }));
        Ok(Elem::Amalgam(am.normalize(mapped)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Z/4 *_{Z/2} Z/6 with b^2 = c^3.
    fn sl2z() -> GroupSpec {
        let b = GroupSpec::finite(FiniteGroup::cyclic(4).unwrap(), crate::groups::GenSet::new(["b"]).unwrap()).unwrap();
        let c = GroupSpec::finite(FiniteGroup::cyclic(6).unwrap(), crate::groups::GenSet::new(["c"]).unwrap()).unwrap();
        GroupSpec::amalgam(b, c, &[(2, 3)]).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let g = sl2z();
        let r = |s: &str| amalgam_reduce(&g, &g.parse_word(s).unwrap()).unwrap();
        assert_eq!(r("b^2 c^3").len(), 0);
        assert_eq!(r("b c").len(), 2);
        assert_eq!(r("c b c").len(), 3);
        assert_eq!(r("b^2").len(), 1);
    }

    #[test]
    fn bc_membership() {
        let g = sl2z();
        let m = |s: &str| amalgam_product_member(&g, &g.parse_elem(s).unwrap(), ProductKind::BC, &[], &[]).unwrap();
        assert!(m("b c"));
        assert!(m("b^3 c^5"));
        assert!(!m("c b"));
        assert!(!m("c b c"));
        assert!(m("c b^2"));
    }

    #[test]
    fn induced_quotients() {
        let g = sl2z();
        let am = g.amalgam_data().unwrap();
        let (b, c) = (am.factor(Side::Left), am.factor(Side::Right));
        let id = induced_quotient(&g, &FactorMap::identity(b), &FactorMap::identity(c)).unwrap();
        let x = g.parse_elem("b c^2 b").unwrap();
        assert_eq!(id.apply(&x).unwrap(), x);
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let pb = FactorMap::from_generator_images(b, z2.clone(), &[1]).unwrap();
        let pc = FactorMap::from_generator_images(c, z2, &[1]).unwrap();
        assert!(matches!(induced_quotient(&g, &pb, &pc), Err(Error::EdgeMismatch(_))));
        let t = induced_quotient(&g, &FactorMap::trivial(b), &FactorMap::trivial(c)).unwrap();
        assert_eq!(t.apply(&x).unwrap(), Elem::Amalgam(vec![]));
    }
}

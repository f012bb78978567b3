//! Path representatives of kinds I, II and III, their types, and a
//! budgeted search for representatives of minimal type.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cayley::{build_ball, BrokenLine, EdgeLabel, Metric, RelGraphView};
use crate::components::find_components;
use crate::error::{Error, Result};
use crate::geometry::{gromov_product, HalfInt, Q};
use crate::groups::{Elem, Role};
use crate::separability::SubgroupOracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RepKind {
    /// `p_1 ... p_n`.
    I,
    /// `q p_1 ... p_n r`.
    II,
    /// `q p_1 ... p_n r t_1 ... t_m`.
    III,
}

/// A broken line whose segments represent elements of the given roles.
#[derive(Debug, Clone, Serialize)]
pub struct PathRep {
    pub kind: RepKind,
    pub line: BrokenLine,
    pub roles: Vec<Role>,
}

/// `(n, ℓ(p), Σ |h|_X)`, compared lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RepType {
    pub n: usize,
    pub length: usize,
    pub components: usize,
}

impl PathRep {
    /// Number of `p_i` segments.
    pub fn width(&self) -> usize {
        self.roles.iter().filter(|r| matches!(r, Role::QPrime | Role::RPrime)).count()
    }

    /// Indices of the `p_i` segments.
    fn middle(&self) -> std::ops::Range<usize> {
        let start = usize::from(self.kind != RepKind::I);
        start..start + self.width()
    }

    pub fn segment_elems(&self, view: &RelGraphView) -> Result<Vec<Elem>> {
        let g = view.group();
        self.line.segments().iter().map(|s| g.ldiv(s.start(), s.end())).collect()
    }
}

pub fn type_of(view: &RelGraphView, rep: &PathRep) -> Result<RepType> {
    let mut components = 0;
    for (i, s) in rep.line.segments().iter().enumerate() {
        components += find_components(view, s, i)?.iter().map(|h| h.x_length).sum::<usize>();
    }
    Ok(RepType { n: rep.width(), length: rep.line.len(), components })
}

/// Membership data for the subgroups a representative may use.
#[derive(Debug, Clone)]
pub struct RepTarget {
    pub kind: RepKind,
    pub q_prime: SubgroupOracle,
    pub r_prime: SubgroupOracle,
    pub q: Option<SubgroupOracle>,
    pub r: Option<SubgroupOracle>,
    pub tails: Vec<SubgroupOracle>,
}

impl RepTarget {
    pub fn kind_i(q_prime: SubgroupOracle, r_prime: SubgroupOracle) -> Self {
        RepTarget { kind: RepKind::I, q_prime, r_prime, q: None, r: None, tails: Vec::new() }
    }

    pub fn kind_ii(q: SubgroupOracle, q_prime: SubgroupOracle, r_prime: SubgroupOracle, r: SubgroupOracle) -> Self {
        RepTarget { kind: RepKind::II, q_prime, r_prime, q: Some(q), r: Some(r), tails: Vec::new() }
    }

    pub fn kind_iii(
        q: SubgroupOracle,
        q_prime: SubgroupOracle,
        r_prime: SubgroupOracle,
        r: SubgroupOracle,
        tails: Vec<SubgroupOracle>,
    ) -> Self {
        RepTarget { kind: RepKind::III, q_prime, r_prime, q: Some(q), r: Some(r), tails }
    }
}

/// Search limits; every minimality claim is relative to them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RepBudget {
    /// Maximum number of `p_i` segments.
    pub max_factors: usize,
    /// Maximum `|y|_X` of every segment element.
    pub max_len: usize,
    /// Maximum number of partial products kept per layer.
    pub max_states: usize,
}

impl Default for RepBudget {
    fn default() -> Self {
        RepBudget { max_factors: 6, max_len: 8, max_states: 2_000_000 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimalRep {
    pub rep: PathRep,
    pub ty: RepType,
    /// The type is least among representatives within this budget.
    pub budget: RepBudget,
}

type Cost = (usize, usize);

/// `(ℓ, Σ |h|_X)` of the canonical geodesic for `y`.
pub fn segment_cost(view: &RelGraphView, y: &Elem) -> Result<Cost> {
    let labels = view.geodesic_labels(y)?;
    let mut comp = 0;
    for l in &labels {
        if let EdgeLabel::H { h, .. } = l {
            comp += view.group().word_length(h)?;
        }
    }
    Ok((labels.len(), comp))
}

#[derive(Debug, Clone)]
struct Entry {
    cost: Cost,
    factor: Elem,
    rest: Option<Elem>,
}

type Layer = BTreeMap<Elem, Entry>;

fn add(a: Cost, b: Cost) -> Cost {
    (a.0 + b.0, a.1 + b.1)
}

fn base_layer(items: &[(Elem, Cost)]) -> Layer {
    items.iter().map(|(y, c)| (y.clone(), Entry { cost: *c, factor: y.clone(), rest: None })).collect()
}

fn offer(layer: &mut Layer, x: Elem, e: Entry) {
    match layer.get(&x) {
        Some(old) if old.cost <= e.cost => {}
        _ => {
            layer.insert(x, e);
        }
    }
}

fn check_size(layer: &Layer, budget: &RepBudget) -> Result<()> {
    if layer.len() > budget.max_states {
        return Err(Error::Budget { budget: budget.max_states, context: "minimizing the type".into() });
    }
    Ok(())
}

/// `{ f z }` over factors `f` and `z` in `right`.
fn extend_left(view: &RelGraphView, items: &[(Elem, Cost)], right: &Layer, budget: &RepBudget) -> Result<Layer> {
    let mut out = Layer::new();
    for (f, c) in items {
        for (z, e) in right {
            let x = view.group().mul(f, z)?;
            offer(&mut out, x, Entry { cost: add(*c, e.cost), factor: f.clone(), rest: Some(z.clone()) });
        }
        check_size(&out, budget)?;
    }
    Ok(out)
}

/// `{ z f }` over `z` in `left` and factors `f`.
fn extend_right(view: &RelGraphView, left: &Layer, items: &[(Elem, Cost)], budget: &RepBudget) -> Result<Layer> {
    let mut out = Layer::new();
    for (z, e) in left {
        for (f, c) in items {
            let x = view.group().mul(z, f)?;
            offer(&mut out, x, Entry { cost: add(e.cost, *c), factor: f.clone(), rest: Some(z.clone()) });
        }
        check_size(&out, budget)?;
    }
    Ok(out)
}

/// Least-type representative of `g` with at most `budget.max_factors`
/// segments `p_i` and every segment element of word length at most
/// `budget.max_len`. `Ok(None)` when no representative exists within the
/// budget.
///
/// Types are additive over segments, so for each width `n` (smallest first)
/// the least `(ℓ, Σ|h|_X)` is found by meeting partial products from the
/// left (`q p_1 ... p_k`) and from the right (`p_{k+1} ... p_n r t_1 ...`).
pub fn minimize_type(
    view: &RelGraphView,
    g: &Elem,
    target: &RepTarget,
    budget: &RepBudget,
) -> Result<Option<MinimalRep>> {
    let group = view.group();
    group.check(g)?;
    let ball = build_ball(group, budget.max_len, budget.max_states)?;
    let select = |o: &SubgroupOracle| -> Result<Vec<(Elem, Cost)>> {
        let mut v = Vec::new();
        for y in ball.vertices() {
            if o.contains(view, y)? {
                v.push((y.clone(), segment_cost(view, y)?));
            }
        }
        Ok(v)
    };
    let qp = select(&target.q_prime)?;
    let rp = select(&target.r_prime)?;
    let mut factors: BTreeMap<Elem, Cost> = qp.iter().cloned().collect();
    factors.extend(rp.iter().cloned());
    let factors: Vec<(Elem, Cost)> = factors.into_iter().collect();
    let id = group.identity();
    let trivial = vec![(id, (0, 0))];
    // Layers for the trailing slots r, t_1, ..., t_m, innermost last.
    let (prefix, tail_layers) = match target.kind {
        RepKind::I => (base_layer(&trivial), vec![base_layer(&trivial)]),
        RepKind::II | RepKind::III => {
            let (Some(q), Some(r)) = (target.q.as_ref(), target.r.as_ref()) else {
                return Err(Error::Precondition("kinds II and III need Q and R".into()));
            };
            let mut slots = vec![select(r)?];
            for t in &target.tails {
                slots.push(select(t)?);
            }
            let mut layers: Vec<Layer> = vec![base_layer(slots.last().unwrap())];
            for items in slots[..slots.len() - 1].iter().rev() {
                let next = extend_left(view, items, layers.last().unwrap(), budget)?;
                layers.push(next);
            }
            layers.reverse();
            (base_layer(&select(q)?), layers)
        }
    };
    let n_min = usize::from(target.kind == RepKind::I);
    let mut front = vec![prefix];
    let mut back = vec![tail_layers[0].clone()];
    for n in n_min..=budget.max_factors {
        let (k1, k2) = (n.div_ceil(2), n / 2);
        while front.len() <= k1 {
            let next = extend_right(view, front.last().unwrap(), &factors, budget)?;
            front.push(next);
        }
        while back.len() <= k2 {
            let next = extend_left(view, &factors, back.last().unwrap(), budget)?;
            back.push(next);
        }
        let mut best: Option<(Cost, Elem, Elem)> = None;
        for (x, e) in &front[k1] {
            let y = group.ldiv(x, g)?;
            if let Some(f) = back[k2].get(&y) {
                let c = add(e.cost, f.cost);
                if best.as_ref().is_none_or(|b| c < b.0) {
                    best = Some((c, x.clone(), y));
                }
            }
        }
        if let Some((cost, x, y)) = best {
            let rep = assemble(view, target, &front, k1, &x, &back, k2, &y, &tail_layers)?;
            let ty = RepType { n, length: cost.0, components: cost.1 };
            return Ok(Some(MinimalRep { rep, ty, budget: *budget }));
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    view: &RelGraphView,
    target: &RepTarget,
    front: &[Layer],
    k1: usize,
    x: &Elem,
    back: &[Layer],
    k2: usize,
    y: &Elem,
    tail_layers: &[Layer],
) -> Result<PathRep> {
    // [q or 1, p_1, ..., p_k1]
    let mut left = Vec::new();
    let mut cur = x.clone();
    for layer in front[..=k1].iter().rev() {
        let e = &layer[&cur];
        left.push(e.factor.clone());
        if let Some(r) = &e.rest {
            cur = r.clone();
        }
    }
    left.reverse();
    // [p_{k1+1}, ..., p_n]
    let mut right = Vec::new();
    let mut cur = y.clone();
    for layer in back[1..=k2].iter().rev() {
        let e = &layer[&cur];
        right.push(e.factor.clone());
        cur = e.rest.clone().expect("factor layers have a rest");
    }
    // [r or 1, t_1, ..., t_m]
    let mut tail = Vec::new();
    for layer in tail_layers {
        let e = &layer[&cur];
        tail.push(e.factor.clone());
        if let Some(r) = &e.rest {
            cur = r.clone();
        }
    }
    let mut elems: Vec<Elem> = Vec::new();
    let mut roles = Vec::new();
    if target.kind != RepKind::I {
        elems.push(left[0].clone());
        roles.push(Role::Q);
    }
    for p in left[1..].iter().chain(&right) {
        roles.push(if target.q_prime.contains(view, p)? { Role::QPrime } else { Role::RPrime });
        elems.push(p.clone());
    }
    if target.kind != RepKind::I {
        for (j, t) in tail.iter().enumerate() {
            elems.push(t.clone());
            roles.push(if j == 0 { Role::R } else { Role::T(j) });
        }
    }
    let group = view.group();
    let mut nodes = vec![group.identity()];
    for e in &elems {
        let next = group.mul(nodes.last().unwrap(), e)?;
        nodes.push(next);
    }
    let line = BrokenLine::through(view, &nodes)?;
    Ok(PathRep { kind: target.kind, line, roles })
}

/// Relative Gromov products at the interior nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeProducts {
    pub products: Vec<HalfInt>,
    pub max: Option<HalfInt>,
    pub holds: bool,
}

pub fn node_products_bounded(view: &RelGraphView, rep: &PathRep, c0: Q) -> Result<NodeProducts> {
    let nodes = rep.line.nodes();
    let mut products = Vec::new();
    for i in 1..nodes.len().saturating_sub(1) {
        products.push(gromov_product(view, Metric::Relative, &nodes[i - 1], &nodes[i + 1], &nodes[i])?);
    }
    let max = products.iter().copied().max();
    Ok(NodeProducts { holds: products.iter().all(|p| p.to_ratio() <= c0), max, products })
}

/// Alternation of the `p_i` between `Q' \ S` and `R' \ S`, and for kinds
/// II and III also `p_1 ∈ R' \ S` and `p_n ∈ Q' \ S`.
pub fn check_alternation(view: &RelGraphView, rep: &PathRep, target: &RepTarget) -> Result<bool> {
    let elems = rep.segment_elems(view)?;
    let ps = &elems[rep.middle()];
    // 0: Q' \ S, 1: R' \ S, 2: in S, 3: in neither.
    let mut classes = Vec::with_capacity(ps.len());
    for y in ps {
        let (q, r) = (target.q_prime.contains(view, y)?, target.r_prime.contains(view, y)?);
        classes.push(match (q, r) {
            (true, false) => 0,
            (false, true) => 1,
            (true, true) => 2,
            (false, false) => 3,
        });
    }
    if classes.contains(&3) {
        return Ok(false);
    }
    if rep.kind == RepKind::I && ps.len() <= 1 {
        return Ok(true);
    }
    if classes.contains(&2) || classes.windows(2).any(|w| w[0] == w[1]) {
        return Ok(false);
    }
    if rep.kind != RepKind::I {
        if let (Some(&first), Some(&last)) = (classes.first(), classes.last()) {
            return Ok(first == 1 && last == 0);
        }
    }
    Ok(true)
}

pub fn width(rep: &PathRep) -> usize {
    rep.width()
}

/// `min{|r|_X, |t_1|_X, ..., |t_{m-1}|_X}`; `None` stands for `+inf`
/// when `m = 0`.
pub fn tail_height(view: &RelGraphView, rep: &PathRep) -> Result<Option<usize>> {
    if rep.kind != RepKind::III {
        return Err(Error::Precondition("tail height is defined for kind III representatives".into()));
    }
    let elems = rep.segment_elems(view)?;
    let r_at = rep.middle().end;
    let m = elems.len() - r_at - 1;
    if m == 0 {
        return Ok(None);
    }
    let mut best = usize::MAX;
    for y in &elems[r_at..r_at + m] {
        best = best.min(view.group().word_length(y)?);
    }
    Ok(Some(best))
}

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::groups::{free_inv, free_mul, GroupSpec, Letter, SubgroupSpec};

/// Folded core graph of a finitely generated subgroup of a free group.
///
/// Vertex 0 is the basepoint. Vertices are numbered in breadth-first order
/// from the basepoint, scanning letters in the order `a, a^-1, b, b^-1, ...`,
/// so two graphs are equal exactly when they are isomorphic by a
/// basepoint-preserving, label-preserving map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StallingsGraph {
    rank: usize,
    /// `out[v][g]` is the target of the `g`-edge leaving `v`.
    out: Vec<Vec<Option<u32>>>,
    /// `inc[v][g]` is the source of the `g`-edge entering `v`.
    inc: Vec<Vec<Option<u32>>>,
}

/// Where reading a word stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReadOutcome {
    /// The whole word was read, ending at this vertex.
    Complete(u32),
    /// No edge for letter `at` leaves `vertex`.
    Stuck { vertex: u32, at: usize },
}

struct Folder {
    parent: Vec<u32>,
    adj: Vec<Vec<Vec<u32>>>,
}

impl Folder {
    fn new(rank: usize, n: usize) -> Self {
        Folder { parent: (0..n as u32).collect(), adj: vec![vec![Vec::new(); 2 * rank]; n] }
    }

    fn add_vertex(&mut self) -> u32 {
        let v = self.parent.len() as u32;
        self.parent.push(v);
        let slots = self.adj.first().map_or(0, |a| a.len());
        self.adj.push(vec![Vec::new(); slots]);
        v
    }

    fn add_edge(&mut self, u: u32, g: u32, v: u32) {
        self.adj[u as usize][2 * g as usize].push(v);
        self.adj[v as usize][2 * g as usize + 1].push(u);
    }

    fn find(&mut self, mut v: u32) -> u32 {
        while self.parent[v as usize] != v {
            let p = self.parent[v as usize];
            self.parent[v as usize] = self.parent[p as usize];
            v = p;
        }
        v
    }

    /// Merges two classes; the smaller index survives so the basepoint
    /// stays a root.
    fn union(&mut self, a: u32, b: u32) -> Option<u32> {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return None;
        }
        let (keep, gone) = if a < b { (a, b) } else { (b, a) };
        self.parent[gone as usize] = keep;
        let moved = std::mem::take(&mut self.adj[gone as usize]);
        for (s, list) in moved.into_iter().enumerate() {
            self.adj[keep as usize][s].extend(list);
        }
        Some(keep)
    }

    fn fold(&mut self) {
        let mut queue: Vec<u32> = (0..self.parent.len() as u32).collect();
        while let Some(x) = queue.pop() {
            let x = self.find(x);
            let slots = self.adj[x as usize].len();
            for s in 0..slots {
                let x = self.find(x);
                let list = std::mem::take(&mut self.adj[x as usize][s]);
                let mut roots: Vec<u32> = list.into_iter().map(|t| self.find(t)).collect();
                roots.sort_unstable();
                roots.dedup();
                let Some(&first) = roots.first() else { continue };
                let mut merged = false;
                for &other in &roots[1..] {
                    if let Some(k) = self.union(first, other) {
                        queue.push(k);
                        merged = true;
                    }
                }
                let x = self.find(x);
                let t = self.find(first);
                self.adj[x as usize][s].push(t);
                if merged {
                    queue.push(x);
                }
            }
        }
    }

    fn finish(mut self, rank: usize, base: u32) -> StallingsGraph {
        self.fold();
        let n = self.parent.len();
        let mut out = vec![vec![None; rank]; n];
        let mut inc = vec![vec![None; rank]; n];
        for v in 0..n as u32 {
            if self.find(v) != v {
                continue;
            }
            for g in 0..rank {
                let fwd = self.adj[v as usize][2 * g].first().copied();
                if let Some(t) = fwd {
                    let t = self.find(t);
                    out[v as usize][g] = Some(t);
                    inc[t as usize][g] = Some(v);
                }
            }
        }
        let base = self.find(base);
        StallingsGraph::trimmed(rank, out, inc, base)
    }
}

impl StallingsGraph {
    /// Folds an arbitrary labelled graph `(source, generator, target)` on
    /// `n` vertices and returns the core of the basepoint component.
    pub fn from_edges(rank: usize, n: usize, edges: &[(u32, u32, u32)], base: u32) -> StallingsGraph {
        let mut f = Folder::new(rank, n.max(1));
        for &(u, g, v) in edges {
            f.add_edge(u, g, v);
        }
        f.finish(rank, base)
    }

    /// Core trimming and canonical renumbering of a folded graph.
    fn trimmed(rank: usize, mut out: Vec<Vec<Option<u32>>>, mut inc: Vec<Vec<Option<u32>>>, base: u32) -> Self {
        let n = out.len();
        // Restrict to the basepoint component.
        let mut alive = vec![false; n];
        let mut stack = vec![base];
        alive[base as usize] = true;
        while let Some(v) = stack.pop() {
            for g in 0..rank {
                for w in [out[v as usize][g], inc[v as usize][g]].into_iter().flatten() {
                    if !alive[w as usize] {
                        alive[w as usize] = true;
                        stack.push(w);
                    }
                }
            }
        }
        let degree = |out: &Vec<Vec<Option<u32>>>, inc: &Vec<Vec<Option<u32>>>, v: usize| {
            (0..rank).map(|g| out[v][g].is_some() as usize + inc[v][g].is_some() as usize).sum::<usize>()
        };
        let mut stack: Vec<usize> = (0..n).filter(|&v| alive[v] && v != base as usize).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] || v == base as usize || degree(&out, &inc, v) > 1 {
                continue;
            }
            alive[v] = false;
            for g in 0..rank {
                if let Some(w) = out[v][g].take() {
                    inc[w as usize][g] = None;
                    stack.push(w as usize);
                }
                if let Some(w) = inc[v][g].take() {
                    out[w as usize][g] = None;
                    stack.push(w as usize);
                }
            }
        }
        // Breadth-first renumbering from the basepoint.
        let mut new_id = vec![u32::MAX; n];
        let mut order = vec![base as usize];
        new_id[base as usize] = 0;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            for g in 0..rank {
                for w in [out[v][g], inc[v][g]].into_iter().flatten() {
                    if new_id[w as usize] == u32::MAX {
                        new_id[w as usize] = order.len() as u32;
                        order.push(w as usize);
                    }
                }
            }
            i += 1;
        }
        let remap = |row: &Vec<Option<u32>>| row.iter().map(|t| t.map(|t| new_id[t as usize])).collect::<Vec<_>>();
        StallingsGraph {
            rank,
            out: order.iter().map(|&v| remap(&out[v])).collect(),
            inc: order.iter().map(|&v| remap(&inc[v])).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.out.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out.is_empty()
    }

    pub fn basepoint(&self) -> u32 {
        0
    }

    /// Follows the edge labelled `l` from `v`, if present.
    pub fn step(&self, v: u32, l: Letter) -> Option<u32> {
        if l.inv {
            self.inc[v as usize][l.gen as usize]
        } else {
            self.out[v as usize][l.gen as usize]
        }
    }

    /// Positive edges `(source, generator, target)`.
    pub fn edges(&self) -> Vec<(u32, u32, u32)> {
        let mut e = Vec::new();
        for (v, row) in self.out.iter().enumerate() {
            for (g, t) in row.iter().enumerate() {
                if let Some(t) = t {
                    e.push((v as u32, g as u32, *t));
                }
            }
        }
        e
    }

    pub fn num_edges(&self) -> usize {
        self.out.iter().flatten().filter(|t| t.is_some()).count()
    }

    /// Rank of the subgroup, `|E| - |V| + 1`.
    pub fn subgroup_rank(&self) -> usize {
        self.num_edges() + 1 - self.len()
    }

    pub fn degree(&self, v: u32) -> usize {
        (0..self.rank)
            .map(|g| self.out[v as usize][g].is_some() as usize + self.inc[v as usize][g].is_some() as usize)
            .sum()
    }

    /// True when every vertex has every edge, i.e. the subgroup has finite
    /// index equal to the number of vertices.
    pub fn is_complete(&self) -> bool {
        self.out.iter().chain(&self.inc).all(|row| row.iter().all(|t| t.is_some()))
    }

    pub fn read_from(&self, start: u32, w: &[Letter]) -> ReadOutcome {
        let mut v = start;
        for (i, &l) in w.iter().enumerate() {
            match self.step(v, l) {
                Some(t) => v = t,
                None => return ReadOutcome::Stuck { vertex: v, at: i },
            }
        }
        ReadOutcome::Complete(v)
    }

    /// Membership of the freely reduced word `w`.
    pub fn contains_word(&self, w: &[Letter]) -> bool {
        self.read_from(0, w) == ReadOutcome::Complete(0)
    }

    /// The same subgroup graph with another vertex as basepoint, which is
    /// the graph of the conjugate `u^-1 H u` for `u` read from the old
    /// basepoint to `v`.
    pub fn rebased(&self, v: u32) -> StallingsGraph {
        StallingsGraph::trimmed(self.rank, self.out.clone(), self.inc.clone(), v)
    }

    /// Label of a shortest path from the basepoint to `v`.
    pub fn path_to(&self, v: u32) -> Vec<Letter> {
        let n = self.len();
        let mut prev: Vec<Option<(u32, Letter)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = std::collections::VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                break;
            }
            for g in 0..self.rank as u32 {
                for inv in [false, true] {
                    let l = Letter::new(g, inv);
                    if let Some(t) = self.step(x, l) {
                        if !seen[t as usize] {
                            seen[t as usize] = true;
                            prev[t as usize] = Some((x, l));
                            queue.push_back(t);
                        }
                    }
                }
            }
        }
        let mut w = Vec::new();
        let mut cur = v;
        while let Some((p, l)) = prev[cur as usize] {
            w.push(l);
            cur = p;
        }
        w.reverse();
        w
    }

    /// Free basis read off a spanning tree: one generator per non-tree edge.
    pub fn free_basis(&self) -> Vec<Vec<Letter>> {
        let n = self.len();
        let tree: Vec<Vec<Letter>> = (0..n as u32).map(|v| self.path_to(v)).collect();
        let mut tree_edge = std::collections::HashSet::new();
        for v in 1..n as u32 {
            let w = &tree[v as usize];
            let l = *w.last().unwrap();
            let parent = match self.read_from(0, &w[..w.len() - 1]) {
                ReadOutcome::Complete(p) => p,
                ReadOutcome::Stuck { .. } => unreachable!("tree paths are readable"),
            };
            let (s, t) = if l.inv { (v, parent) } else { (parent, v) };
            tree_edge.insert((s, l.gen, t));
        }
        let mut basis = Vec::new();
        for (s, g, t) in self.edges() {
            if tree_edge.contains(&(s, g, t)) {
                continue;
            }
            let w = free_mul(&free_mul(&tree[s as usize], &[Letter::pos(g)]), &free_inv(&tree[t as usize]));
            basis.push(w);
        }
        basis
    }
}

/// Stallings graph of the subgroup generated by the given reduced words.
pub fn subgroup_graph(rank: usize, gens: &[Vec<Letter>]) -> StallingsGraph {
    let mut f = Folder::new(rank, 1);
    for w in gens {
        let w = free_mul(&[], w);
        if w.is_empty() {
            continue;
        }
        let mut cur = 0u32;
        for (i, &l) in w.iter().enumerate() {
            let next = if i + 1 == w.len() { 0 } else { f.add_vertex() };
            if l.inv {
                f.add_edge(next, l.gen, cur);
            } else {
                f.add_edge(cur, l.gen, next);
            }
            cur = next;
        }
    }
    f.finish(rank, 0)
}

/// Stallings graph of a finitely generated subgroup of a free group (or a relatively
/// hyperbolic structure on a free base).
pub fn subgroup_graph_of(group: &GroupSpec, h: &SubgroupSpec) -> Result<StallingsGraph> {
    let words = h.gens.iter().map(|g| group.free_word(g).map(|w| w.to_vec())).collect::<Result<Vec<_>>>()?;
    Ok(subgroup_graph(group.rank(), &words))
}

/// Stallings graph of `H ∩ K` by the pullback construction.
pub fn intersection(h: &StallingsGraph, k: &StallingsGraph) -> StallingsGraph {
    let rank = h.rank.min(k.rank);
    let mut index = std::collections::HashMap::from([((0u32, 0u32), 0u32)]);
    let mut states = vec![(0u32, 0u32)];
    let mut edges = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (x, y) = states[i];
        for g in 0..rank {
            for inv in [false, true] {
                let l = Letter::new(g as u32, inv);
                if let (Some(x2), Some(y2)) = (h.step(x, l), k.step(y, l)) {
                    let next = *index.entry((x2, y2)).or_insert_with(|| {
                        states.push((x2, y2));
                        states.len() as u32 - 1
                    });
                    if !inv {
                        edges.push((i as u32, g as u32, next));
                    }
                }
            }
        }
        i += 1;
    }
    StallingsGraph::from_edges(rank, states.len(), &edges, 0)
}

/// Whether `|U : U ∩ V| < ∞`.
///
/// The basepoint of `U` is first moved onto its cyclic core (conjugating
/// both subgroups), after which the basepoint component of the product of
/// the two graphs is a covering of the graph of `U` exactly when the index
/// is finite.
pub fn finite_index_in(u: &StallingsGraph, v: &StallingsGraph) -> bool {
    if u.num_edges() == 0 {
        return true;
    }
    let mut spur = Vec::new();
    let mut cur = 0u32;
    let mut from: Option<Letter> = None;
    while u.degree(cur) == 1 || (cur != 0 && u.degree(cur) == 2) {
        let next = (0..u.rank as u32)
            .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
            .find(|&l| u.step(cur, l).is_some() && Some(l.inverse()) != from)
            .expect("spur vertices have an outgoing edge");
        spur.push(next);
        cur = u.step(cur, next).unwrap();
        from = Some(next);
    }
    let u2 = u.rebased(cur);
    let v2 = if spur.is_empty() {
        v.clone()
    } else {
        let conj: Vec<Vec<Letter>> =
            v.free_basis().iter().map(|w| free_mul(&free_mul(&free_inv(&spur), w), &spur)).collect();
        subgroup_graph(v.rank, &conj)
    };
    let mut seen = std::collections::HashSet::from([(0u32, 0u32)]);
    let mut stack = vec![(0u32, 0u32)];
    while let Some((x, y)) = stack.pop() {
        for g in 0..u2.rank as u32 {
            for inv in [false, true] {
                let l = Letter::new(g, inv);
                let Some(x2) = u2.step(x, l) else { continue };
                let Some(y2) = v2.step(y, l) else { return false };
                if seen.insert((x2, y2)) {
                    stack.push((x2, y2));
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Vec<Letter> {
        crate::groups::GenSet::standard(2).parse_word(s).unwrap()
    }

    #[test]
    fn trivial_and_full() {
        let g = subgroup_graph(2, &[]);
        assert_eq!(g.len(), 1);
        assert_eq!(g.num_edges(), 0);
        let g = subgroup_graph(2, &[w("a"), w("b")]);
        assert_eq!(g.len(), 1);
        assert!(g.is_complete());
    }

    #[test]
    fn a_squared_and_b() {
        let g = subgroup_graph(2, &[w("a^2"), w("b")]);
        assert_eq!(g.len(), 2);
        assert_eq!(g.step(0, Letter::pos(0)), Some(1));
        assert_eq!(g.step(1, Letter::pos(0)), Some(0));
        assert_eq!(g.step(0, Letter::pos(1)), Some(0));
        assert_eq!(g.step(1, Letter::pos(1)), None);
        assert!(!g.contains_word(&w("a")));
        assert!(g.contains_word(&w("a^2 b^-1 a^-2")));
    }

    #[test]
    fn folding_merges_common_prefixes() {
        let g = subgroup_graph(2, &[w("a b"), w("a b^-1")]);
        // <ab, ab^-1> = <ab, b^2> conjugated; rank 2.
        assert_eq!(g.subgroup_rank(), 2);
        assert!(g.contains_word(&free_mul(&w("a b"), &free_inv(&w("a b^-1")))));
    }

    #[test]
    fn intersection_of_cyclic() {
        let h = subgroup_graph(2, &[w("a^2")]);
        let k = subgroup_graph(2, &[w("a^3")]);
        let i = intersection(&h, &k);
        assert_eq!(i, subgroup_graph(2, &[w("a^6")]));
        let k = subgroup_graph(2, &[w("b")]);
        assert_eq!(intersection(&h, &k).num_edges(), 0);
    }

    #[test]
    fn finite_index_examples() {
        let a = subgroup_graph(2, &[w("a")]);
        let a2 = subgroup_graph(2, &[w("a^2")]);
        let b = subgroup_graph(2, &[w("b")]);
        assert!(finite_index_in(&a, &a));
        assert!(finite_index_in(&a, &a2));
        assert!(!finite_index_in(&a, &b));
        assert!(!finite_index_in(&a2, &b));
        // A spur at the basepoint of U.
        let u = subgroup_graph(2, &[w("a b a^-1")]);
        let v = subgroup_graph(2, &[w("a b^2 a^-1")]);
        assert!(finite_index_in(&u, &v));
        assert!(!finite_index_in(&u, &subgroup_graph(2, &[w("b^2")])));
    }

    #[test]
    fn free_basis_generates_same_subgroup() {
        let g = subgroup_graph(2, &[w("a^2"), w("b a b^-1"), w("a b a")]);
        assert_eq!(subgroup_graph(2, &g.free_basis()), g);
    }
}

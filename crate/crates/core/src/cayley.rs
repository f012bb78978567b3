//! Word-metric balls, the relative Cayley graph `Γ(G, X ∪ H)` and labelled
//! edge paths.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{Elem, Family, GroupSpec, Letter, PeripheralSpec, DEFAULT_BUDGET};

/// All elements with `|g|_X <= radius`, indexed in BFS order.
#[derive(Debug, Clone)]
pub struct Ball {
    radius: usize,
    vertices: Vec<Elem>,
    index: HashMap<Elem, u32>,
    dist: Vec<u32>,
    letters: Vec<Letter>,
    /// `nbr[v * letters.len() + k]` is the neighbour of `v` along letter `k`.
    nbr: Vec<Option<u32>>,
}

impl Ball {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Elem] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Elem {
        &self.vertices[i]
    }

    pub fn index_of(&self, g: &Elem) -> Option<usize> {
        self.index.get(g).map(|&i| i as usize)
    }

    pub fn contains(&self, g: &Elem) -> bool {
        self.index.contains_key(g)
    }

    /// `|g|_X` of the `i`-th vertex.
    pub fn dist(&self, i: usize) -> usize {
        self.dist[i] as usize
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn neighbour(&self, v: usize, letter_pos: usize) -> Option<usize> {
        self.nbr[v * self.letters.len() + letter_pos].map(|x| x as usize)
    }

    /// Edges `(source, target, label)` with both ends in the ball.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Letter)> + '_ {
        let k = self.letters.len();
        (0..self.vertices.len()).flat_map(move |v| {
            (0..k).filter_map(move |j| self.nbr[v * k + j].map(|w| (v, w as usize, self.letters[j])))
        })
    }
}

/// Breadth-first ball of radius `r` in `Γ(G, X)`.
pub fn build_ball(group: &GroupSpec, r: usize, budget: usize) -> Result<Ball> {
    let letters = group.gens().letters();
    let letter_elems: Vec<Elem> = letters.iter().map(|&l| group.letter_elem(l)).collect::<Result<_>>()?;
    let id = group.identity();
    let mut vertices = vec![id.clone()];
    let mut index = HashMap::from([(id, 0u32)]);
    let mut dist = vec![0u32];
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        if dist[v] as usize >= r {
            continue;
        }
        for s in &letter_elems {
            let w = group.mul(&vertices[v], s)?;
            if !index.contains_key(&w) {
                if vertices.len() >= budget {
                    return Err(Error::Budget { budget, context: format!("building a ball of radius {r}") });
                }
                index.insert(w.clone(), vertices.len() as u32);
                dist.push(dist[v] + 1);
                queue.push_back(vertices.len());
                vertices.push(w);
            }
        }
    }
    let k = letters.len();
    let mut nbr = vec![None; vertices.len() * k];
    for v in 0..vertices.len() {
        for (j, s) in letter_elems.iter().enumerate() {
            let w = group.mul(&vertices[v], s)?;
            nbr[v * k + j] = index.get(&w).copied();
        }
    }
    Ok(Ball { radius: r, vertices, index, dist, letters, nbr })
}

/// Edge label in `Γ(G, X ∪ H)`: a generator letter or a nontrivial element
/// of a peripheral subgroup `H_ν`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeLabel {
    X(Letter),
    H { nu: usize, h: Elem },
}

impl EdgeLabel {
    pub fn is_h(&self) -> bool {
        matches!(self, EdgeLabel::H { .. })
    }

    pub fn nu(&self) -> Option<usize> {
        match self {
            EdgeLabel::H { nu, .. } => Some(*nu),
            EdgeLabel::X(_) => None,
        }
    }
}

/// A combinatorial path with its vertex list `v_0, ..., v_d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgePath {
    labels: Vec<EdgeLabel>,
    vertices: Vec<Elem>,
}

impl EdgePath {
    pub fn trivial(at: Elem) -> Self {
        EdgePath { labels: Vec::new(), vertices: vec![at] }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[EdgeLabel] {
        &self.labels
    }

    pub fn vertices(&self) -> &[Elem] {
        &self.vertices
    }

    pub fn start(&self) -> &Elem {
        &self.vertices[0]
    }

    pub fn end(&self) -> &Elem {
        self.vertices.last().unwrap()
    }

    /// The subpath between vertices `i` and `j`, `i <= j`.
    pub fn subpath(&self, i: usize, j: usize) -> EdgePath {
        EdgePath { labels: self.labels[i..j].to_vec(), vertices: self.vertices[i..=j].to_vec() }
    }

    /// Concatenation; the caller guarantees `self.end() == other.start()`.
    pub fn concat(&self, other: &EdgePath) -> Result<EdgePath> {
        if self.end() != other.start() {
            return Err(Error::InvalidPath("concatenated paths do not meet".into()));
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut vertices = self.vertices.clone();
        vertices.extend(other.vertices[1..].iter().cloned());
        Ok(EdgePath { labels, vertices })
    }
}

/// Distance choice for metric computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Word,
    Relative,
}

/// The relative Cayley graph of a whitelisted group. A group without
/// peripherals gives the ordinary Cayley graph.
#[derive(Debug, Clone)]
pub struct RelGraphView {
    group: GroupSpec,
    /// For a free base: generator -> peripheral index.
    cyclic: Vec<Option<usize>>,
    /// For a free-product base: factor -> peripheral index.
    factor: Vec<Option<usize>>,
    whole: bool,
}

impl RelGraphView {
    pub fn new(group: GroupSpec) -> Result<Self> {
        let mut cyclic = vec![None; group.rank()];
        let nf = match group.base().family() {
            Family::FreeProduct(fs) => fs.len(),
            _ => 0,
        };
        let mut factor = vec![None; nf];
        let mut whole = false;
        for (nu, p) in group.peripherals().iter().enumerate() {
            match p {
                PeripheralSpec::CyclicGenerator { generator } => cyclic[*generator as usize] = Some(nu),
                PeripheralSpec::FreeFactor { factor: k } => factor[*k] = Some(nu),
                PeripheralSpec::WholeGroup => whole = true,
            }
        }
        Ok(RelGraphView { group, cyclic, factor, whole })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn num_peripherals(&self) -> usize {
        self.group.peripherals().len()
    }

    /// Is `h` an element of `H_ν`?
    pub fn in_peripheral(&self, nu: usize, h: &Elem) -> bool {
        match (self.group.peripherals().get(nu), h) {
            (Some(PeripheralSpec::WholeGroup), _) => self.group.check(h).is_ok(),
            (Some(PeripheralSpec::CyclicGenerator { generator }), Elem::Free(w)) => {
                self.group.check(h).is_ok() && w.iter().all(|l| l.gen == *generator)
            }
            (Some(PeripheralSpec::FreeFactor { factor }), Elem::Product(s)) => {
                self.group.check(h).is_ok() && s.iter().all(|(i, _)| i == factor)
            }
            _ => false,
        }
    }

    pub fn label_elem(&self, label: &EdgeLabel) -> Result<Elem> {
        match label {
            EdgeLabel::X(l) => self.group.letter_elem(*l),
            EdgeLabel::H { nu, h } => {
                if self.group.is_identity(h) || !self.in_peripheral(*nu, h) {
                    return Err(Error::InvalidPath(format!(
                        "label {} is not a nontrivial element of H_{nu}",
                        self.group.format_elem(h)
                    )));
                }
                Ok(h.clone())
            }
        }
    }

    /// Builds a path from a start vertex and labels, checking every label.
    pub fn path(&self, start: Elem, labels: Vec<EdgeLabel>) -> Result<EdgePath> {
        self.group.check(&start)?;
        let mut vertices = Vec::with_capacity(labels.len() + 1);
        vertices.push(start);
        for l in &labels {
            let x = self.label_elem(l)?;
            let next = self.group.mul(vertices.last().unwrap(), &x)?;
            vertices.push(next);
        }
        Ok(EdgePath { labels, vertices })
    }

    /// Path of X-edges reading the word `w` from `start`.
    pub fn word_path(&self, start: Elem, w: &[Letter]) -> Result<EdgePath> {
        self.path(start, w.iter().map(|&l| EdgeLabel::X(l)).collect())
    }

    /// Canonical geodesic labels from the identity to `g`: the
    /// lexicographically least label sequence, X-edges before H-edges.
    pub fn geodesic_labels(&self, g: &Elem) -> Result<Vec<EdgeLabel>> {
        self.group.check(g)?;
        let xs = |w: Vec<Letter>| w.into_iter().map(EdgeLabel::X).collect::<Vec<_>>();
        if self.group.peripherals().is_empty() {
            return Ok(xs(self.group.geodesic_word(g)?));
        }
        if self.whole {
            if self.group.is_identity(g) {
                return Ok(Vec::new());
            }
            let w = self.group.geodesic_word(g)?;
            return Ok(if w.len() == 1 { xs(w) } else { vec![EdgeLabel::H { nu: 0, h: g.clone() }] });
        }
        match (self.group.base().family(), g) {
            (Family::Free, Elem::Free(w)) => {
                let mut out = Vec::new();
                let mut i = 0;
                while i < w.len() {
                    let mut j = i + 1;
                    match self.cyclic[w[i].gen as usize] {
                        Some(nu) => {
                            while j < w.len() && w[j] == w[i] {
                                j += 1;
                            }
                            if j - i == 1 {
                                out.push(EdgeLabel::X(w[i]));
                            } else {
                                out.push(EdgeLabel::H { nu, h: Elem::Free(w[i..j].to_vec()) });
                            }
                        }
                        None => out.push(EdgeLabel::X(w[i])),
                    }
                    i = j;
                }
                Ok(out)
            }
            (Family::FreeProduct(_), Elem::Product(syl)) => {
                let mut out = Vec::new();
                for (i, x) in syl {
                    let single = Elem::Product(vec![(*i, x.clone())]);
                    let w = self.group.geodesic_word(&single)?;
                    match self.factor[*i] {
                        Some(nu) if w.len() > 1 => out.push(EdgeLabel::H { nu, h: single }),
                        _ => out.extend(xs(w)),
                    }
                }
                Ok(out)
            }
            _ => Err(Error::Unsupported(format!(
                "relative metric on a {} group with these peripherals",
                self.group.base().family_name()
            ))),
        }
    }

    /// `d_{X∪H}(1, g)`.
    pub fn rel_length(&self, g: &Elem) -> Result<usize> {
        self.group.check(g)?;
        if self.group.peripherals().is_empty() {
            return self.group.word_length(g);
        }
        if self.whole {
            return Ok(usize::from(!self.group.is_identity(g)));
        }
        match (self.group.base().family(), g) {
            (Family::Free, Elem::Free(w)) => {
                let mut n = 0;
                for (i, l) in w.iter().enumerate() {
                    match self.cyclic[l.gen as usize] {
                        Some(_) if i > 0 && w[i - 1] == *l => {}
                        _ => n += 1,
                    }
                }
                Ok(n)
            }
            _ => Ok(self.geodesic_labels(g)?.len()),
        }
    }

    pub fn rel_dist(&self, u: &Elem, v: &Elem) -> Result<usize> {
        self.rel_length(&self.group.ldiv(u, v)?)
    }

    pub fn rel_geodesic(&self, u: &Elem, v: &Elem) -> Result<EdgePath> {
        let labels = self.geodesic_labels(&self.group.ldiv(u, v)?)?;
        self.path(u.clone(), labels)
    }

    /// Geodesic in `Γ(G, X)` with X-edges only, lexicographically least.
    pub fn word_geodesic(&self, u: &Elem, v: &Elem) -> Result<EdgePath> {
        let w = self.group.geodesic_word(&self.group.ldiv(u, v)?)?;
        self.word_path(u.clone(), &w)
    }

    pub fn x_dist(&self, u: &Elem, v: &Elem) -> Result<usize> {
        self.group.word_length(&self.group.ldiv(u, v)?)
    }

    pub fn dist(&self, metric: Metric, u: &Elem, v: &Elem) -> Result<usize> {
        match metric {
            Metric::Word => self.x_dist(u, v),
            Metric::Relative => self.rel_dist(u, v),
        }
    }

    pub fn geodesic(&self, metric: Metric, u: &Elem, v: &Elem) -> Result<EdgePath> {
        match metric {
            Metric::Word => self.word_geodesic(u, v),
            Metric::Relative => self.rel_geodesic(u, v),
        }
    }

    /// Is `p` geodesic in the given metric?
    pub fn is_geodesic(&self, metric: Metric, p: &EdgePath) -> Result<bool> {
        Ok(self.dist(metric, p.start(), p.end())? == p.len())
    }

    pub fn format_label(&self, l: &EdgeLabel) -> String {
        match l {
            EdgeLabel::X(x) => self.group.gens().format_letter(*x),
            EdgeLabel::H { nu, h } => format!("H{nu}[{}]", self.group.format_elem(h)),
        }
    }

    pub fn format_path(&self, p: &EdgePath) -> String {
        let labels: Vec<String> = p.labels().iter().map(|l| self.format_label(l)).collect();
        format!("{} : [{}]", self.group.format_elem(p.start()), labels.join(", "))
    }
}

/// A path with a fixed decomposition into geodesic segments of
/// `Γ(G, X ∪ H)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrokenLine {
    segments: Vec<EdgePath>,
}

impl BrokenLine {
    /// Checks that consecutive segments meet and each one is a relative
    /// geodesic.
    pub fn new(view: &RelGraphView, segments: Vec<EdgePath>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidPath("a broken line needs at least one segment".into()));
        }
        for (i, s) in segments.iter().enumerate() {
            if !view.is_geodesic(Metric::Relative, s)? {
                return Err(Error::InvalidPath(format!("segment {} is not geodesic", i + 1)));
            }
            if i > 0 && segments[i - 1].end() != s.start() {
                return Err(Error::InvalidPath(format!("segments {} and {} do not meet", i, i + 1)));
            }
        }
        Ok(BrokenLine { segments })
    }

    /// The broken line through `nodes`, using canonical geodesics.
    pub fn through(view: &RelGraphView, nodes: &[Elem]) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidPath("a broken line needs at least two nodes".into()));
        }
        let segments = nodes.windows(2).map(|w| view.rel_geodesic(&w[0], &w[1])).collect::<Result<_>>()?;
        Ok(BrokenLine { segments })
    }

    pub fn segments(&self) -> &[EdgePath] {
        &self.segments
    }

    pub fn n(&self) -> usize {
        self.segments.len()
    }

    pub fn nodes(&self) -> Vec<Elem> {
        let mut out = vec![self.segments[0].start().clone()];
        out.extend(self.segments.iter().map(|s| s.end().clone()));
        out
    }

    pub fn len(&self) -> usize {
        self.segments.iter().map(EdgePath::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start(&self) -> &Elem {
        self.segments[0].start()
    }

    pub fn end(&self) -> &Elem {
        self.segments.last().unwrap().end()
    }

    /// Index of the first vertex of segment `i` in the enumeration
    /// `v_0, ..., v_d` of the whole path.
    pub fn offset(&self, i: usize) -> usize {
        self.segments[..i].iter().map(EdgePath::len).sum()
    }

    /// The whole path `p_1 ... p_n`.
    pub fn path(&self) -> EdgePath {
        let mut p = self.segments[0].clone();
        for s in &self.segments[1..] {
            p = p.concat(s).expect("segments meet");
        }
        p
    }
}

/// Budgeted default ball.
pub fn ball(group: &GroupSpec, r: usize) -> Result<Ball> {
    build_ball(group, r, DEFAULT_BUDGET)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GenSet;

    fn f2_rel_a() -> RelGraphView {
        let g = GroupSpec::rel_hyp(GroupSpec::free(2), vec![PeripheralSpec::CyclicGenerator { generator: 0 }]).unwrap();
        RelGraphView::new(g).unwrap()
    }

    fn z2_star_z_rel() -> RelGraphView {
        let a = GroupSpec::free_abelian(GenSet::new(["x", "y"]).unwrap());
        let b = GroupSpec::free_named(GenSet::new(["t"]).unwrap());
        let g = GroupSpec::free_product(vec![a, b]).unwrap();
        let g = GroupSpec::rel_hyp(
            g,
            vec![PeripheralSpec::FreeFactor { factor: 0 }, PeripheralSpec::FreeFactor { factor: 1 }],
        )
        .unwrap();
        RelGraphView::new(g).unwrap()
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(ball(&GroupSpec::free(2), 1).unwrap().len(), 5);
        assert_eq!(ball(&GroupSpec::free(2), 0).unwrap().len(), 1);
        let z2 = GroupSpec::free_abelian(GenSet::new(["x", "y"]).unwrap());
        assert_eq!(ball(&z2, 2).unwrap().len(), 13);
        assert!(matches!(build_ball(&GroupSpec::free(2), 3, 10), Err(Error::Budget { .. })));
    }

    #[test]
    fn relative_distances() {
        let v = f2_rel_a();
        let g = v.group();
        let one = g.identity();
        assert_eq!(v.rel_dist(&one, &g.parse_elem("a^5").unwrap()).unwrap(), 1);
        assert_eq!(v.rel_dist(&one, &g.parse_elem("a^3 b a^2").unwrap()).unwrap(), 3);
        let x = g.parse_elem("b a").unwrap();
        assert_eq!(v.rel_dist(&x, &x).unwrap(), 0);
    }

    #[test]
    fn relative_geodesics() {
        let v = f2_rel_a();
        let g = v.group();
        let one = g.identity();
        let p = v.rel_geodesic(&one, &g.parse_elem("a^3 b").unwrap()).unwrap();
        assert_eq!(
            p.labels(),
            &[EdgeLabel::H { nu: 0, h: g.parse_elem("a^3").unwrap() }, EdgeLabel::X(Letter::pos(1)),]
        );
        assert!(v.rel_geodesic(&one, &one).unwrap().is_empty());

        let w = z2_star_z_rel();
        let g = w.group();
        let p = w.rel_geodesic(&g.identity(), &g.parse_elem("x y t^2").unwrap()).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.labels().iter().all(EdgeLabel::is_h));
        assert_eq!(p.labels()[0].nu(), Some(0));
        assert_eq!(p.labels()[1].nu(), Some(1));
    }

    #[test]
    fn single_letter_runs_use_x_edges() {
        let v = f2_rel_a();
        let g = v.group();
        let p = v.rel_geodesic(&g.identity(), &g.parse_elem("a b a^-1").unwrap()).unwrap();
        assert!(p.labels().iter().all(|l| !l.is_h()));
    }

    #[test]
    fn invalid_labels_rejected() {
        let v = f2_rel_a();
        let g = v.group();
        let bad = EdgeLabel::H { nu: 0, h: g.parse_elem("b").unwrap() };
        assert!(v.path(g.identity(), vec![bad]).is_err());
        let triv = EdgeLabel::H { nu: 0, h: g.identity() };
        assert!(v.path(g.identity(), vec![triv]).is_err());
    }

    #[test]
    fn broken_line_validation() {
        let v = f2_rel_a();
        let g = v.group();
        let nodes = [g.identity(), g.parse_elem("a^5").unwrap(), g.parse_elem("a^10").unwrap()];
        let bl = BrokenLine::through(&v, &nodes).unwrap();
        assert_eq!(bl.len(), 2);
        assert_eq!(bl.nodes(), nodes.to_vec());
        let long = v.word_path(g.identity(), &g.parse_word("a a").unwrap()).unwrap();
        assert!(BrokenLine::new(&v, vec![long]).is_err());
    }
}

//! Θ-shortcutting of broken lines, tamability, and a harness for the
//! quasigeodesicity of shortcuttings.

use rand::Rng;
use serde::Serialize;

use crate::cayley::{BrokenLine, EdgeLabel, EdgePath, Metric, RelGraphView};
use crate::components::{extend_chain, find_components, is_without_backtracking, segment_components};
use crate::error::Result;
use crate::geometry::{gromov_product, is_quasigeodesic, QgVerdict, Q};
use crate::groups::Letter;

/// `Σ(p, Θ) = f_0 e_1 f_1 ... e_m f_m` and `V(p, Θ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShortcutResult {
    pub v: Vec<(usize, usize)>,
    /// `f_0, ..., f_m`.
    pub f: Vec<EdgePath>,
    /// `e_1, ..., e_m`; each is trivial or a single H-edge.
    pub e: Vec<EdgePath>,
}

impl ShortcutResult {
    /// Pieces in order `f_0, e_1, f_1, ...`.
    pub fn pieces(&self) -> Vec<&EdgePath> {
        let mut out = vec![&self.f[0]];
        for (e, f) in self.e.iter().zip(&self.f[1..]) {
            out.push(e);
            out.push(f);
        }
        out
    }

    pub fn sigma_path(&self) -> EdgePath {
        let pieces = self.pieces();
        let mut p = pieces[0].clone();
        for q in &pieces[1..] {
            p = p.concat(q).expect("pieces meet");
        }
        p
    }

    /// Edge index of `e_k` (1-based `k`) in the sigma path, if nontrivial.
    pub fn e_edge_index(&self, k: usize) -> Option<usize> {
        if self.e[k - 1].is_empty() {
            return None;
        }
        let before: usize = self.f[..k].iter().map(EdgePath::len).sum::<usize>()
            + self.e[..k - 1].iter().map(EdgePath::len).sum::<usize>();
        Some(before)
    }
}

/// The Θ-shortcutting of a broken line. Segment components are located by their global edge
/// ranges in the enumeration `v_0, ..., v_d`; a repeated vertex `(h_j)_+`
/// is taken at the end of `h_j`'s edge range.
pub fn shortcut(view: &RelGraphView, bl: &BrokenLine, theta: usize) -> Result<ShortcutResult> {
    let path = bl.path();
    let verts = path.vertices();
    let labels = path.labels();
    let d = path.len();
    let comps = segment_components(view, bl)?;
    // (segment, component, global start, global end), ordered along p.
    let mut flat = Vec::new();
    for (i, cs) in comps.iter().enumerate() {
        let off = bl.offset(i);
        for (k, c) in cs.iter().enumerate() {
            flat.push((i, k, off + c.start, off + c.end));
        }
    }
    let mut s = 0;
    let mut n = 0;
    let mut v = Vec::new();
    let mut nus = Vec::new();
    loop {
        // Step 1.
        if !labels[n.min(d)..].iter().any(EdgeLabel::is_h) {
            v.push((s, d));
            break;
        }
        // Step 2.
        let Some(&(i, k, t, end_i)) = flat.iter().find(|c| c.2 >= n) else {
            v.push((s, d));
            break;
        };
        let chain = extend_chain(view, &comps, i, k)?;
        let max_x = chain.iter().map(|&(seg, c)| comps[seg][c].x_length).max().unwrap_or(0);
        // Step 3.
        if max_x >= theta {
            v.push((s, t));
            nus.push(comps[i][k].nu);
            let &(seg_j, c_j) = chain.last().unwrap();
            s = bl.offset(seg_j) + comps[seg_j][c_j].end;
            n = s;
        } else {
            n = end_i;
        }
    }
    // Step 5.
    let mut f = Vec::with_capacity(v.len());
    let mut e = Vec::with_capacity(v.len() - 1);
    for (k, &(sk, tk)) in v.iter().enumerate() {
        f.push(view.rel_geodesic(&verts[sk], &verts[tk])?);
        if k + 1 < v.len() {
            let (a, b) = (&verts[tk], &verts[v[k + 1].0]);
            if a == b {
                e.push(EdgePath::trivial(a.clone()));
            } else {
                let h = view.group().ldiv(a, b)?;
                e.push(view.path(a.clone(), vec![EdgeLabel::H { nu: nus[k], h }])?);
            }
        }
    }
    Ok(ShortcutResult { v, f, e })
}

/// Checks the structural guarantees of a shortcutting; returns a list of
/// violations (empty when all hold).
pub fn check_shortcut_invariants(
    view: &RelGraphView,
    bl: &BrokenLine,
    res: &ShortcutResult,
    theta: usize,
) -> Result<Vec<String>> {
    let path = bl.path();
    let verts = path.vertices();
    let d = path.len();
    let mut bad = Vec::new();
    let m = res.v.len();
    if m == 0 || res.f.len() != m || res.e.len() + 1 != m {
        bad.push("piece counts do not match V".to_string());
        return Ok(bad);
    }
    if res.v[0].0 != 0 || res.v[m - 1].1 != d {
        bad.push(format!("V does not start at 0 and end at {d}: {:?}", res.v));
    }
    for k in 0..m {
        let (sk, tk) = res.v[k];
        if sk > tk || tk > d {
            bad.push(format!("pair {k} out of order: {:?}", res.v[k]));
            continue;
        }
        if k + 1 < m && tk >= res.v[k + 1].0 {
            bad.push(format!("t_{k} >= s_{}", k + 1));
        }
        if res.f[k].start() != &verts[sk] || res.f[k].end() != &verts[tk] {
            bad.push(format!("f_{k} does not join v_s and v_t"));
        }
        if !view.is_geodesic(Metric::Relative, &res.f[k])? {
            bad.push(format!("f_{k} is not geodesic"));
        }
        for label in &path.labels()[sk..tk] {
            if let EdgeLabel::H { h, .. } = label {
                if view.group().word_length(h)? >= theta {
                    bad.push(format!("long H-edge between v_{sk} and v_{tk}"));
                }
            }
        }
    }
    for (k, e) in res.e.iter().enumerate() {
        if e.len() > 1 || (e.len() == 1 && !e.labels()[0].is_h()) {
            bad.push(format!("e_{} is not a single H-edge", k + 1));
        }
        if e.start() != &verts[res.v[k].1] || e.end() != &verts[res.v[k + 1].0] {
            bad.push(format!("e_{} does not join v_t and the next v_s", k + 1));
        }
    }
    let sigma = res.sigma_path();
    if sigma.start() != bl.start() || sigma.end() != bl.end() {
        bad.push("shortcutting changes the endpoints".to_string());
    }
    Ok(bad)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TamableCondition {
    LongSegments,
    NodeProducts,
    LongBacktracking,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TamableVerdict {
    pub tamable: bool,
    pub failure: Option<(TamableCondition, String)>,
}

/// Every instance of consecutive backtracking, including contiguous
/// sub-chains of maximal chains, as `(first segment, last segment, max
/// |h|_X, d_X((h_i)_-, (h_j)_+))`.
pub fn backtracking_chains(view: &RelGraphView, bl: &BrokenLine) -> Result<Vec<(usize, usize, usize, usize)>> {
    let comps = segment_components(view, bl)?;
    let mut out = Vec::new();
    for i in 0..comps.len() {
        for k in 0..comps[i].len() {
            let chain = extend_chain(view, &comps, i, k)?;
            // Sub-chains starting at (i, k); those starting later are
            // produced from their own first component.
            for j in 1..chain.len() {
                let max_x = chain[..=j].iter().map(|&(s, c)| comps[s][c].x_length).max().unwrap();
                let (sj, cj) = chain[j];
                let dist = view.x_dist(&comps[i][k].h_minus, &comps[sj][cj].h_plus)?;
                out.push((i, sj, max_x, dist));
            }
        }
    }
    Ok(out)
}

/// `(B, C, ζ, Θ)`-tamability.
pub fn is_tamable(view: &RelGraphView, bl: &BrokenLine, b: Q, c: Q, zeta: Q, theta: usize) -> Result<TamableVerdict> {
    let n = bl.n();
    for i in 1..n.saturating_sub(1) {
        let s = &bl.segments()[i];
        let len = view.x_dist(s.start(), s.end())?;
        if Q::from_integer(len as i64) < b {
            return Ok(TamableVerdict {
                tamable: false,
                failure: Some((TamableCondition::LongSegments, format!("|p_{}|_X = {len}", i + 1))),
            });
        }
    }
    let nodes = bl.nodes();
    for i in 1..n {
        let g = gromov_product(view, Metric::Relative, &nodes[i - 1], &nodes[i + 1], &nodes[i])?;
        if g.to_ratio() > c {
            return Ok(TamableVerdict {
                tamable: false,
                failure: Some((TamableCondition::NodeProducts, format!("node {i} product {g}"))),
            });
        }
    }
    for (i, j, max_x, dist) in backtracking_chains(view, bl)? {
        if max_x >= theta && Q::from_integer(dist as i64) < zeta {
            return Ok(TamableVerdict {
                tamable: false,
                failure: Some((
                    TamableCondition::LongBacktracking,
                    format!("segments {}..{}: d_X = {dist}", i + 1, j + 1),
                )),
            });
        }
    }
    Ok(TamableVerdict { tamable: true, failure: None })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShortcutReport {
    pub result: ShortcutResult,
    pub e_nontrivial: bool,
    pub quasigeodesic: QgVerdict,
    pub without_backtracking: bool,
    /// `|e'_k|_X` for the component `e'_k` of sigma containing `e_k`.
    pub e_component_lengths: Vec<usize>,
    pub components_long: bool,
    pub tamable: Option<TamableVerdict>,
    /// Tamable input whose shortcutting fails a conclusion.
    pub violation: bool,
}

impl ShortcutReport {
    pub fn conclusions_hold(&self) -> bool {
        self.e_nontrivial && self.quasigeodesic.holds && self.without_backtracking && self.components_long
    }
}

/// Runs the procedure and evaluates every conclusion of the
/// shortcutting proposition. `tamable` holds `(B, C, ζ)`.
pub fn verify_shortcut_proposition(
    view: &RelGraphView,
    bl: &BrokenLine,
    theta: usize,
    lambda: Q,
    c: Q,
    eta: usize,
    tamable: Option<(Q, Q, Q)>,
) -> Result<ShortcutReport> {
    let result = shortcut(view, bl, theta)?;
    let e_nontrivial = result.e.iter().all(|e| !e.is_empty());
    let sigma = result.sigma_path();
    let quasigeodesic = is_quasigeodesic(view, &sigma, lambda, c, Metric::Relative)?;
    let without_backtracking = is_without_backtracking(view, &sigma)?;
    let comps = find_components(view, &sigma, 0)?;
    let mut e_component_lengths = Vec::new();
    for k in 1..=result.e.len() {
        if let Some(idx) = result.e_edge_index(k) {
            if let Some(h) = comps.iter().find(|h| h.start <= idx && idx < h.end) {
                e_component_lengths.push(h.x_length);
            }
        }
    }
    let components_long = e_component_lengths.iter().all(|&l| l >= eta);
    let tamable = match tamable {
        Some((b, cc, z)) => Some(is_tamable(view, bl, b, cc, z, theta)?),
        None => None,
    };
    let mut report = ShortcutReport {
        result,
        e_nontrivial,
        quasigeodesic,
        without_backtracking,
        e_component_lengths,
        components_long,
        tamable,
        violation: false,
    };
    report.violation = report.tamable.as_ref().is_some_and(|t| t.tamable) && !report.conclusions_hold();
    Ok(report)
}

/// Parameters of the random broken-line generator.
#[derive(Debug, Clone, Copy)]
pub struct CorpusParams {
    pub max_segments: usize,
    /// Maximum number of runs in a segment word.
    pub max_runs: usize,
    /// Maximum run length of a repeated letter.
    pub max_run: usize,
    /// Probability that a segment is a pure power of a peripheral letter.
    pub pure_power: f64,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams { max_segments: 5, max_runs: 4, max_run: 6, pure_power: 0.35 }
    }
}

/// A random broken line from the identity whose nodes are products of
/// random runs `s^k`. `peripheral` lists letters favoured for pure-power
/// segments, which makes consecutive backtracking common.
pub fn random_broken_line<R: Rng>(
    view: &RelGraphView,
    rng: &mut R,
    params: CorpusParams,
    peripheral: &[Letter],
) -> Result<BrokenLine> {
    let g = view.group();
    let letters = g.gens().letters();
    let n = rng.gen_range(1..=params.max_segments);
    let mut nodes = vec![g.identity()];
    for _ in 0..n {
        let mut w = Vec::new();
        if !peripheral.is_empty() && rng.gen_bool(params.pure_power) {
            let l = peripheral[rng.gen_range(0..peripheral.len())];
            let l = if rng.gen_bool(0.5) { l } else { l.inverse() };
            w.extend(std::iter::repeat_n(l, rng.gen_range(1..=params.max_run)));
        } else {
            for _ in 0..rng.gen_range(0..=params.max_runs) {
                let l = letters[rng.gen_range(0..letters.len())];
                w.extend(std::iter::repeat_n(l, rng.gen_range(1..=params.max_run)));
            }
        }
        let step = g.word_to_elem(&w)?;
        let next = g.mul(nodes.last().unwrap(), &step)?;
        nodes.push(next);
    }
    BrokenLine::through(view, &nodes)
}

/// Is every pair of consecutive `e_k` separated as the procedure intends:
/// the H-edge `e_k` joins vertices of one peripheral coset.
pub fn e_edges_in_cosets(view: &RelGraphView, res: &ShortcutResult) -> Result<bool> {
    for e in &res.e {
        if let Some(EdgeLabel::H { nu, h }) = e.labels().first() {
            if !view.in_peripheral(*nu, h) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{GroupSpec, PeripheralSpec};

    fn view() -> RelGraphView {
        let g = GroupSpec::rel_hyp(GroupSpec::free(2), vec![PeripheralSpec::CyclicGenerator { generator: 0 }]).unwrap();
        RelGraphView::new(g).unwrap()
    }

    fn fixture(v: &RelGraphView) -> BrokenLine {
        let g = v.group();
        let e = |s: &str| g.parse_elem(s).unwrap();
        BrokenLine::through(v, &[e(""), e("a^5"), e("a^10")]).unwrap()
    }

    fn q(n: i64) -> Q {
        Q::from_integer(n)
    }

    #[test]
    fn no_h_edges_gives_one_geodesic() {
        let v = view();
        let g = v.group();
        let bl =
            BrokenLine::through(&v, &[g.identity(), g.parse_elem("b a b").unwrap(), g.parse_elem("b a b^2").unwrap()])
                .unwrap();
        let r = shortcut(&v, &bl, 3).unwrap();
        assert_eq!(r.v, vec![(0, 4)]);
        assert_eq!(r.f.len(), 1);
        assert_eq!(r.f[0].len(), 4);
    }

    #[test]
    fn hand_traced_fixture_theta_5() {
        let v = view();
        let bl = fixture(&v);
        let r = shortcut(&v, &bl, 5).unwrap();
        assert_eq!(r.v, vec![(0, 0), (2, 2)]);
        assert!(r.f.iter().all(EdgePath::is_empty));
        assert_eq!(r.e.len(), 1);
        assert_eq!(v.x_dist(r.e[0].start(), r.e[0].end()).unwrap(), 10);
        assert!(check_shortcut_invariants(&v, &bl, &r, 5).unwrap().is_empty());
    }

    #[test]
    fn hand_traced_fixture_theta_6() {
        let v = view();
        let bl = fixture(&v);
        let r = shortcut(&v, &bl, 6).unwrap();
        assert_eq!(r.v, vec![(0, 2)]);
        assert_eq!(r.f[0].len(), 1);
        assert!(r.e.is_empty());
    }

    #[test]
    fn tamability_of_fixture() {
        let v = view();
        let bl = fixture(&v);
        let t = is_tamable(&v, &bl, q(0), q(100), q(20), 5).unwrap();
        assert!(!t.tamable);
        assert_eq!(t.failure.unwrap().0, TamableCondition::LongBacktracking);
        assert!(is_tamable(&v, &bl, q(0), q(100), q(10), 5).unwrap().tamable);
        let g = v.group();
        let single = BrokenLine::through(&v, &[g.identity(), g.parse_elem("a^3 b").unwrap()]).unwrap();
        assert!(is_tamable(&v, &single, q(1000), q(0), q(1000), 1).unwrap().tamable);
    }

    #[test]
    fn proposition_on_fixture() {
        let v = view();
        let bl = fixture(&v);
        let r = verify_shortcut_proposition(&v, &bl, 5, q(1), q(0), 5, None).unwrap();
        assert!(r.conclusions_hold());
        assert_eq!(r.e_component_lengths, vec![10]);
        assert!(e_edges_in_cosets(&v, &r.result).unwrap());
    }
}

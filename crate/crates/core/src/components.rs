//! H-components of paths, connectedness, phase vertices and consecutive
//! backtracking in broken lines.

use serde::Serialize;

use crate::cayley::{BrokenLine, EdgeLabel, EdgePath, RelGraphView};
use crate::error::{Error, Result};
use crate::groups::Elem;

/// A maximal run of `H_ν`-labelled edges `[start, end)` of a path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HComponent {
    /// Caller-chosen id of the path the component belongs to.
    pub owner: usize,
    pub start: usize,
    pub end: usize,
    pub nu: usize,
    pub h_minus: Elem,
    pub h_plus: Elem,
    /// `|h|_X`.
    pub x_length: usize,
}

impl HComponent {
    pub fn edges(&self) -> usize {
        self.end - self.start
    }
}

/// Edge ranges and peripheral indices of the maximal H-subpaths.
pub fn component_ranges(p: &EdgePath) -> Vec<(usize, usize, usize)> {
    let labels = p.labels();
    let mut out = Vec::new();
    let mut i = 0;
    while i < labels.len() {
        match labels[i] {
            EdgeLabel::H { nu, .. } => {
                let mut j = i + 1;
                while j < labels.len() && labels[j].nu() == Some(nu) {
                    j += 1;
                }
                out.push((i, j, nu));
                i = j;
            }
            EdgeLabel::X(_) => i += 1,
        }
    }
    out
}

pub fn find_components(view: &RelGraphView, p: &EdgePath, owner: usize) -> Result<Vec<HComponent>> {
    let v = p.vertices();
    component_ranges(p)
        .into_iter()
        .map(|(start, end, nu)| {
            Ok(HComponent {
                owner,
                start,
                end,
                nu,
                h_minus: v[start].clone(),
                h_plus: v[end].clone(),
                x_length: view.x_dist(&v[start], &v[end])?,
            })
        })
        .collect()
}

/// Same `ν` and `(h_-)^{-1} k_- ∈ H_ν`.
pub fn connected(view: &RelGraphView, h: &HComponent, k: &HComponent) -> Result<bool> {
    if h.nu != k.nu {
        return Ok(false);
    }
    let d = view.group().ldiv(&h.h_minus, &k.h_minus)?;
    Ok(view.group().is_identity(&d) || view.in_peripheral(h.nu, &d))
}

pub fn is_without_backtracking(view: &RelGraphView, p: &EdgePath) -> Result<bool> {
    let comps = find_components(view, p, 0)?;
    for i in 0..comps.len() {
        for j in i + 1..comps.len() {
            if connected(view, &comps[i], &comps[j])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Vertex indices that are not interior to an H-component.
pub fn phase_vertices(p: &EdgePath) -> Vec<usize> {
    let mut phase = vec![true; p.len() + 1];
    for (s, e, _) in component_ranges(p) {
        for flag in &mut phase[s + 1..e] {
            *flag = false;
        }
    }
    (0..=p.len()).filter(|&i| phase[i]).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BacktrackKind {
    Adjacent,
    Multiple,
}

/// Pairwise connected components `h_i, ..., h_j` of consecutive segments
/// `p_i, ..., p_j`, `j > i`. Segment indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BacktrackInstance {
    pub chain: Vec<(usize, HComponent)>,
    pub kind: BacktrackKind,
}

impl BacktrackInstance {
    pub fn first_segment(&self) -> usize {
        self.chain[0].0
    }

    pub fn last_segment(&self) -> usize {
        self.chain.last().unwrap().0
    }

    pub fn max_x_length(&self) -> usize {
        self.chain.iter().map(|(_, h)| h.x_length).max().unwrap_or(0)
    }
}

/// Components of every segment, with edge ranges local to the segment and
/// `owner` set to the segment index.
pub fn segment_components(view: &RelGraphView, bl: &BrokenLine) -> Result<Vec<Vec<HComponent>>> {
    bl.segments().iter().enumerate().map(|(i, s)| find_components(view, s, i)).collect()
}

/// Extends the chain starting at component `k` of segment `i` as far as
/// possible: in each following segment the first component connected to
/// it is taken. Returns `(segment, component index)` pairs.
pub fn extend_chain(view: &RelGraphView, comps: &[Vec<HComponent>], i: usize, k: usize) -> Result<Vec<(usize, usize)>> {
    let mut chain = vec![(i, k)];
    let head = &comps[i][k];
    let mut seg = i + 1;
    'outer: while seg < comps.len() {
        for (idx, c) in comps[seg].iter().enumerate() {
            if connected(view, head, c)? {
                chain.push((seg, idx));
                seg += 1;
                continue 'outer;
            }
        }
        break;
    }
    Ok(chain)
}

/// All maximal instances of consecutive backtracking.
pub fn find_consecutive_backtracking(view: &RelGraphView, bl: &BrokenLine) -> Result<Vec<BacktrackInstance>> {
    let comps = segment_components(view, bl)?;
    let mut out = Vec::new();
    for i in 0..comps.len() {
        for k in 0..comps[i].len() {
            if i > 0 {
                let mut continues = false;
                for c in &comps[i - 1] {
                    if connected(view, c, &comps[i][k])? {
                        continues = true;
                        break;
                    }
                }
                if continues {
                    continue;
                }
            }
            let chain = extend_chain(view, &comps, i, k)?;
            if chain.len() >= 2 {
                let kind = if chain.len() == 2 { BacktrackKind::Adjacent } else { BacktrackKind::Multiple };
                let chain = chain.into_iter().map(|(s, c)| (s, comps[s][c].clone())).collect();
                out.push(BacktrackInstance { chain, kind });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XLengthCheck {
    pub x_length: usize,
    /// `Θ ℓ(p)`.
    pub bound: usize,
    pub holds: bool,
}

/// `|p|_X` compared with `Θ ℓ(p)`; requires every component to have
/// `|h|_X <= Θ`.
pub fn x_length_of_path(view: &RelGraphView, p: &EdgePath, theta: usize) -> Result<XLengthCheck> {
    for c in find_components(view, p, 0)? {
        if c.x_length > theta {
            return Err(Error::Precondition(format!(
                "component at edges {}..{} has |h|_X = {} > {theta}",
                c.start, c.end, c.x_length
            )));
        }
    }
    let x_length = view.x_dist(p.start(), p.end())?;
    let bound = theta * p.len();
    Ok(XLengthCheck { x_length, bound, holds: x_length <= bound })
}

/// Components of a closed path that are connected to no other component,
/// with `(Σ |h|_X) / ℓ(q)` as a rational pair.
pub fn isolated_components(view: &RelGraphView, cycle: &EdgePath) -> Result<(Vec<HComponent>, (usize, usize))> {
    if cycle.start() != cycle.end() {
        return Err(Error::InvalidPath("not a cycle".into()));
    }
    let mut comps = find_components(view, cycle, 0)?;
    // A component running through the base point is one component of the
    // cycle.
    if comps.len() >= 2 {
        let (first, last) = (&comps[0], comps.last().unwrap());
        if first.start == 0 && last.end == cycle.len() && first.nu == last.nu {
            let merged = HComponent {
                owner: 0,
                start: last.start,
                end: first.end,
                nu: first.nu,
                h_minus: last.h_minus.clone(),
                h_plus: first.h_plus.clone(),
                x_length: view.x_dist(&last.h_minus, &first.h_plus)?,
            };
            comps.pop();
            comps[0] = merged;
        }
    }
    let mut isolated = Vec::new();
    for i in 0..comps.len() {
        let mut lonely = true;
        for j in 0..comps.len() {
            if i != j && connected(view, &comps[i], &comps[j])? {
                lonely = false;
                break;
            }
        }
        if lonely {
            isolated.push(comps[i].clone());
        }
    }
    let total = isolated.iter().map(|h| h.x_length).sum();
    Ok((isolated, (total, cycle.len())))
}

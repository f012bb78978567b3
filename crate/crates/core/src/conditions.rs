//! `minx`, relative quasiconvexity estimates and checkers for the metric
//! conditions C1-C5, C2-m, C5-m and properties P1-P3.
//!
//! Conditions quantify over infinite sets. Checks enumerate a word-metric
//! ball: a failure carries a witness element and is final, a pass holds up
//! to the stated radius.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cayley::{ball, Ball, Metric, RelGraphView};
use crate::error::{Error, Result};
use crate::groups::{free_inv, free_mul, Elem, GroupSpec, Letter, SubgroupSpec};
use crate::separability::{
    intersection, subgroup_graph, subgroup_graph_of, CompiledSubset, RationalSubset, StallingsGraph,
};

pub use crate::separability::preccurlyeq;

/// A value of `minx`: a word length or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Minx {
    Finite(usize),
    Infinite,
}

impl Minx {
    pub fn at_least(self, bound: usize) -> bool {
        match self {
            Minx::Finite(n) => n >= bound,
            Minx::Infinite => true,
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Minx::Finite(n) => Some(n),
            Minx::Infinite => None,
        }
    }
}

impl fmt::Display for Minx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Minx::Finite(n) => write!(f, "{n}"),
            Minx::Infinite => f.write_str("+inf"),
        }
    }
}

impl Serialize for Minx {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Minx::Finite(n) => s.serialize_u64(*n as u64),
            Minx::Infinite => s.serialize_str("+inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Minx {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(Minx::Finite(n as usize)),
            Raw::S(s) if s == "+inf" => Ok(Minx::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(format!("expected a length or \"+inf\", got {s:?}"))),
        }
    }
}

/// A finite set of elements, possibly the truncation of an infinite set
/// to the ball of radius `radius`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumeratedSet {
    pub elements: Vec<Elem>,
    pub radius: Option<usize>,
    pub provenance: String,
}

impl EnumeratedSet {
    pub fn new(elements: Vec<Elem>, provenance: impl Into<String>) -> Self {
        EnumeratedSet { elements, radius: None, provenance: provenance.into() }
    }

    pub fn truncated(elements: Vec<Elem>, radius: usize, provenance: impl Into<String>) -> Self {
        EnumeratedSet { elements, radius: Some(radius), provenance: provenance.into() }
    }
}

/// Minimum word length over `y`, `+∞` on the empty set.
pub fn minx(group: &GroupSpec, y: &EnumeratedSet) -> Result<Minx> {
    let mut best = Minx::Infinite;
    for g in &y.elements {
        best = best.min(Minx::Finite(group.word_length(g)?));
    }
    Ok(best)
}

/// Measured quasiconvexity constant of a subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QcEstimate {
    pub epsilon: usize,
    pub radius: usize,
    /// Number of ordered pairs of subgroup elements examined.
    pub pairs: usize,
    /// A geodesic vertex realising `epsilon`.
    pub farthest: Option<String>,
}

/// Pair budget for [`quasiconvexity_epsilon`].
pub const QC_PAIR_BUDGET: usize = 4_000_000;

/// The largest `d_X(v, Q ∩ B(r))` over vertices `v` of canonical relative
/// geodesics between elements of `Q ∩ B(r)`.
pub fn quasiconvexity_epsilon(q: &SubgroupSpec, view: &RelGraphView, r: usize) -> Result<QcEstimate> {
    let group = view.group();
    let h = subgroup_graph_of(group, q)?;
    let b = ball(group, r)?;
    let inside: Vec<&Elem> =
        b.vertices().iter().filter(|g| group.free_word(g).is_ok_and(|w| h.contains_word(w))).collect();
    let pairs = inside.len() * inside.len();
    if pairs > QC_PAIR_BUDGET {
        return Err(Error::Budget { budget: QC_PAIR_BUDGET, context: format!("quasiconvexity pairs at radius {r}") });
    }
    let mut memo: HashMap<Elem, usize> = HashMap::new();
    let mut eps = 0;
    let mut farthest = None;
    for u in &inside {
        for v in &inside {
            let path = view.geodesic(Metric::Relative, u, v)?;
            for x in path.vertices() {
                let d = match memo.get(x) {
                    Some(&d) => d,
                    None => {
                        let mut d = usize::MAX;
                        for y in &inside {
                            d = d.min(view.x_dist(x, y)?);
                        }
                        memo.insert(x.clone(), d);
                        d
                    }
                };
                if d > eps || farthest.is_none() {
                    eps = eps.max(d);
                    farthest = Some(group.format_elem(x));
                }
            }
        }
    }
    Ok(QcEstimate { epsilon: eps, radius: r, pairs, farthest })
}

/// Identifier of a condition or property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConditionId {
    C1,
    C2,
    C3,
    C4,
    C5,
    #[serde(rename = "C2-m")]
    C2m,
    #[serde(rename = "C5-m")]
    C5m,
    P1,
    P2,
    P3,
}

impl ConditionId {
    pub const ALL: [ConditionId; 10] = [
        ConditionId::C1,
        ConditionId::C2,
        ConditionId::C3,
        ConditionId::C4,
        ConditionId::C5,
        ConditionId::C2m,
        ConditionId::C5m,
        ConditionId::P1,
        ConditionId::P2,
        ConditionId::P3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConditionId::C1 => "C1",
            ConditionId::C2 => "C2",
            ConditionId::C3 => "C3",
            ConditionId::C4 => "C4",
            ConditionId::C5 => "C5",
            ConditionId::C2m => "C2-m",
            ConditionId::C5m => "C5-m",
            ConditionId::P1 => "P1",
            ConditionId::P2 => "P2",
            ConditionId::P3 => "P3",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        ConditionId::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of a condition check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    HoldsToRadius,
    Fails { witness: String, witness_length: usize },
    Vacuous,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        !matches!(self, Verdict::Fails { .. })
    }
}

/// The subgroups a condition refers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionInputs {
    pub q: SubgroupSpec,
    pub r: SubgroupSpec,
    pub q_prime: SubgroupSpec,
    pub r_prime: SubgroupSpec,
    pub p_list: Vec<SubgroupSpec>,
    pub u_list: Vec<SubgroupSpec>,
    pub t_list: Vec<SubgroupSpec>,
}

impl ConditionInputs {
    pub fn new(q: SubgroupSpec, r: SubgroupSpec, q_prime: SubgroupSpec, r_prime: SubgroupSpec) -> Self {
        ConditionInputs { q, r, q_prime, r_prime, p_list: Vec::new(), u_list: Vec::new(), t_list: Vec::new() }
    }

    pub fn with_p(mut self, p_list: Vec<SubgroupSpec>) -> Self {
        self.p_list = p_list;
        self
    }

    pub fn with_u(mut self, u_list: Vec<SubgroupSpec>) -> Self {
        self.u_list = u_list;
        self
    }

    pub fn with_t(mut self, t_list: Vec<SubgroupSpec>) -> Self {
        self.t_list = t_list;
        self
    }
}

/// Thresholds and enumeration radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    pub b: usize,
    pub c: usize,
    pub a: usize,
    pub radius: usize,
}

/// Parameters echoed into a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportParams {
    pub b: usize,
    pub c: usize,
    pub a: usize,
    pub m: usize,
    pub p_list: Vec<String>,
    pub u_list: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub id: ConditionId,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub radius: usize,
    /// The enumerated `minx` for inequality conditions, `ε` for P1.
    pub value: Option<Minx>,
    pub threshold: Option<usize>,
    pub params: ReportParams,
    pub caveats: Vec<String>,
}

fn format_subgroup(group: &GroupSpec, h: &SubgroupSpec) -> String {
    let gens: Vec<String> = h.gens.iter().map(|g| group.format_elem(g)).collect();
    format!("<{}>", gens.join(", "))
}

struct Ctx<'a> {
    view: &'a RelGraphView,
    rank: usize,
    ball: Ball,
    words: Vec<Vec<Letter>>,
}

/// Smallest ball element of the difference, with its length.
struct Hit {
    word: Vec<Letter>,
}

impl<'a> Ctx<'a> {
    fn new(view: &'a RelGraphView, radius: usize) -> Result<Self> {
        let group = view.group();
        let ball = ball(group, radius)?;
        let words =
            ball.vertices().iter().map(|g| group.free_word(g).map(<[Letter]>::to_vec)).collect::<Result<_>>()?;
        Ok(Ctx { view, rank: group.rank(), ball, words })
    }

    fn graph(&self, h: &SubgroupSpec) -> Result<StallingsGraph> {
        subgroup_graph_of(self.view.group(), h)
    }

    fn join(&self, h: &StallingsGraph, k: &StallingsGraph) -> StallingsGraph {
        let mut gens = h.free_basis();
        gens.extend(k.free_basis());
        subgroup_graph(self.rank, &gens)
    }

    fn product(&self, factors: Vec<StallingsGraph>) -> CompiledSubset {
        RationalSubset::product(factors).compile()
    }

    /// First element `x` of the ball, in BFS order and shorter than
    /// `limit`, with `shift·x` in `inside` but not in `outside`.
    fn first_difference(
        &self,
        shift: &[Letter],
        inside: &CompiledSubset,
        outside: &[&CompiledSubset],
        limit: Minx,
    ) -> Option<Hit> {
        for (i, x) in self.words.iter().enumerate() {
            if !Minx::Finite(self.ball.dist(i)).lt(&limit) {
                break;
            }
            let y = free_mul(shift, x);
            if inside.contains(&y) && !outside.iter().any(|o| o.contains(&y)) {
                return Some(Hit { word: x.clone() });
            }
        }
        None
    }

    fn subgroup_words(&self, h: &StallingsGraph) -> Vec<Vec<Letter>> {
        self.words.iter().filter(|w| h.contains_word(w)).cloned().collect()
    }

    fn format(&self, w: &[Letter]) -> String {
        self.view.group().format_elem(&Elem::Free(w.to_vec()))
    }
}

/// Running minimum over several set differences.
struct Best {
    value: Minx,
    witness: Option<Vec<Letter>>,
}

impl Best {
    fn new() -> Self {
        Best { value: Minx::Infinite, witness: None }
    }

    fn offer(&mut self, hit: Option<Hit>) {
        if let Some(h) = hit {
            let v = Minx::Finite(h.word.len());
            if v < self.value {
                self.value = v;
                self.witness = Some(h.word);
            }
        }
    }
}

fn sequences(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..n).map(move |i| {
                    let mut t = s.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Checks one condition over the ball of radius `th.radius`.
pub fn check_condition(
    view: &RelGraphView,
    id: ConditionId,
    inputs: &ConditionInputs,
    th: Thresholds,
) -> Result<ConditionReport> {
    let group = view.group();
    group.free_word(&group.identity())?;
    for h in [&inputs.q, &inputs.r, &inputs.q_prime, &inputs.r_prime]
        .into_iter()
        .chain(&inputs.p_list)
        .chain(&inputs.u_list)
        .chain(&inputs.t_list)
    {
        h.validate(group)?;
    }
    let ctx = Ctx::new(view, th.radius)?;
    let m = inputs.t_list.len();
    let params = ReportParams {
        b: th.b,
        c: th.c,
        a: th.a,
        m,
        p_list: inputs.p_list.iter().map(|p| format_subgroup(group, p)).collect(),
        u_list: inputs.u_list.iter().map(|u| format_subgroup(group, u)).collect(),
    };
    let mut report = ConditionReport {
        id,
        verdict: Verdict::HoldsToRadius,
        radius: th.radius,
        value: None,
        threshold: None,
        params,
        caveats: Vec::new(),
    };

    let q = ctx.graph(&inputs.q)?;
    let r = ctx.graph(&inputs.r)?;
    let qp = ctx.graph(&inputs.q_prime)?;
    let rp = ctx.graph(&inputs.r_prime)?;
    let s = intersection(&q, &r);
    let join = ctx.join(&qp, &rp);
    let ps: Vec<StallingsGraph> = inputs.p_list.iter().map(|p| ctx.graph(p)).collect::<Result<_>>()?;
    let ts: Vec<StallingsGraph> = inputs.t_list.iter().map(|t| ctx.graph(t)).collect::<Result<_>>()?;
    let us: Vec<StallingsGraph> = inputs.u_list.iter().map(|u| ctx.graph(u)).collect::<Result<_>>()?;

    let needs_p = matches!(id, ConditionId::C3 | ConditionId::C4 | ConditionId::C5 | ConditionId::C5m);
    if needs_p && ps.is_empty() {
        report.verdict = Verdict::Vacuous;
        report.caveats.push("empty P-list".into());
        return Ok(report);
    }

    let mut best = Best::new();
    let threshold = match id {
        ConditionId::C1 => {
            let sp = intersection(&qp, &rp);
            if let Some(w) = equality_witness(&ctx, &sp, &s) {
                report.verdict = Verdict::Fails { witness: ctx.format(&w), witness_length: w.len() };
            } else {
                report.caveats.push("Q' ∩ R' and Q ∩ R have equal Stallings graphs".into());
            }
            return Ok(report);
        }
        ConditionId::C4 => {
            for p in &ps {
                let jp = ctx.join(&intersection(&qp, p), &intersection(&rp, p));
                for (big, small) in [(&q, &qp), (&r, &rp)] {
                    let lhs = intersection(&intersection(big, p), &jp);
                    let rhs = intersection(small, p);
                    if let Some(w) = equality_witness(&ctx, &lhs, &rhs) {
                        report.verdict = Verdict::Fails { witness: ctx.format(&w), witness_length: w.len() };
                        return Ok(report);
                    }
                }
            }
            report.caveats.push("equalities decided on Stallings graphs".into());
            return Ok(report);
        }
        ConditionId::P1 => {
            let lo = quasiconvexity_epsilon(&join_spec(&join), view, th.radius)?;
            let hi = quasiconvexity_epsilon(&join_spec(&join), view, th.radius + 2)?;
            report.value = Some(Minx::Finite(hi.epsilon));
            report.caveats.push(format!(
                "epsilon {} at radius {}, {} at radius {}",
                lo.epsilon, lo.radius, hi.epsilon, hi.radius
            ));
            if lo.epsilon != hi.epsilon {
                report.caveats.push("epsilon not stable; not a certificate of non-quasiconvexity".into());
                let v = hi.farthest.unwrap_or_default();
                let len = group.word_length(&group.parse_elem(&v)?)?;
                report.verdict = Verdict::Fails { witness: v, witness_length: len };
            }
            return Ok(report);
        }
        ConditionId::C2 => {
            for big in [&q, &r] {
                let inside = ctx.product(vec![big.clone(), join.clone(), big.clone()]);
                let outside = ctx.product(vec![big.clone()]);
                best.offer(ctx.first_difference(&[], &inside, &[&outside], best.value));
            }
            th.b
        }
        ConditionId::C2m => {
            for j in 0..=m {
                let mut with = vec![r.clone(), join.clone(), r.clone()];
                with.extend(ts[..j].iter().cloned());
                let mut without = vec![r.clone()];
                without.extend(ts[..j].iter().cloned());
                let inside = ctx.product(with);
                let outside = ctx.product(without);
                best.offer(ctx.first_difference(&[], &inside, &[&outside], best.value));
            }
            th.b
        }
        ConditionId::C3 => {
            for p in &ps {
                let a = ctx.product(vec![p.clone(), qp.clone()]);
                let b = ctx.product(vec![p.clone(), rp.clone()]);
                let out = ctx.product(vec![p.clone(), s.clone()]);
                best.offer(ctx.first_difference(&[], &a, &[&out], best.value));
                best.offer(ctx.first_difference(&[], &b, &[&out], best.value));
            }
            th.c
        }
        ConditionId::C5 | ConditionId::C5m => {
            let max_j = if id == ConditionId::C5 { 0 } else { m };
            for p in &ps {
                let qpp = intersection(&qp, p);
                let jp = ctx.join(&qpp, &intersection(&rp, p));
                let rp_full = intersection(&r, p);
                let up: Vec<StallingsGraph> = us.iter().map(|u| intersection(u, p)).collect();
                let qs = ctx.subgroup_words(&intersection(&q, p));
                for j in 0..=max_j {
                    for seq in sequences(up.len(), j) {
                        let tail: Vec<StallingsGraph> = seq.iter().map(|&i| up[i].clone()).collect();
                        let mut with = vec![jp.clone(), rp_full.clone()];
                        with.extend(tail.iter().cloned());
                        let mut without = vec![qpp.clone(), rp_full.clone()];
                        without.extend(tail);
                        let inside = ctx.product(with);
                        let outside = ctx.product(without);
                        for qw in &qs {
                            best.offer(ctx.first_difference(&free_inv(qw), &inside, &[&outside], best.value));
                        }
                    }
                }
            }
            report.caveats.push(format!("q ranges over Q_P within radius {}", th.radius));
            if best.value == Minx::Infinite && ps.iter().all(|p| p.subgroup_rank() <= 1) {
                report.verdict = Verdict::Vacuous;
                report.caveats.push("abelian P: the set difference is empty".into());
            }
            th.c
        }
        ConditionId::P2 => {
            let inside = ctx.product(vec![join.clone()]);
            let outside = ctx.product(vec![s.clone()]);
            best.offer(ctx.first_difference(&[], &inside, &[&outside], best.value));
            th.a
        }
        ConditionId::P3 => {
            let inside = ctx.product(vec![q.clone(), join.clone(), r.clone()]);
            let outside = ctx.product(vec![q.clone(), r.clone()]);
            best.offer(ctx.first_difference(&[], &inside, &[&outside], best.value));
            th.a
        }
    };
    report.value = Some(best.value);
    report.threshold = Some(threshold);
    if !best.value.at_least(threshold) {
        let w = best.witness.expect("finite minx has a witness");
        report.verdict = Verdict::Fails { witness: ctx.format(&w), witness_length: w.len() };
    }
    Ok(report)
}

fn join_spec(h: &StallingsGraph) -> SubgroupSpec {
    SubgroupSpec::new(h.free_basis().into_iter().map(Elem::Free).collect())
}

/// An element in exactly one of two subgroups: the shortest in the ball if
/// any, else a basis element of one not in the other.
fn equality_witness(ctx: &Ctx, h: &StallingsGraph, k: &StallingsGraph) -> Option<Vec<Letter>> {
    if h == k {
        return None;
    }
    if let Some(w) = ctx.words.iter().find(|w| h.contains_word(w) != k.contains_word(w)) {
        return Some(w.clone());
    }
    h.free_basis()
        .into_iter()
        .find(|w| !k.contains_word(w))
        .or_else(|| k.free_basis().into_iter().find(|w| !h.contains_word(w)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> RelGraphView {
        RelGraphView::new(GroupSpec::free(2)).unwrap()
    }

    fn sg(view: &RelGraphView, words: &[&str]) -> SubgroupSpec {
        SubgroupSpec::parse(view.group(), words).unwrap()
    }

    fn fixture(view: &RelGraphView, k: usize) -> ConditionInputs {
        let ak = format!("a^{k}");
        let bk = format!("b^{k}");
        ConditionInputs::new(sg(view, &["a"]), sg(view, &["b"]), sg(view, &[&ak]), sg(view, &[&bk]))
            .with_p(vec![sg(view, &["a"])])
    }

    fn th(b: usize, c: usize, radius: usize) -> Thresholds {
        Thresholds { b, c, a: b, radius }
    }

    #[test]
    fn minx_examples() {
        let g = GroupSpec::free(2);
        assert_eq!(minx(&g, &EnumeratedSet::new(vec![], "empty")).unwrap(), Minx::Infinite);
        let y: Vec<Elem> = ["", "a", "a b"].iter().map(|w| g.parse_elem(w).unwrap()).collect();
        assert_eq!(minx(&g, &EnumeratedSet::new(y, "t")).unwrap(), Minx::Finite(0));
        let y: Vec<Elem> = ["a^3", "b^2 a"].iter().map(|w| g.parse_elem(w).unwrap()).collect();
        assert_eq!(minx(&g, &EnumeratedSet::new(y, "t")).unwrap(), Minx::Finite(3));
    }

    #[test]
    fn minx_serialization() {
        assert_eq!(serde_json::to_string(&Minx::Infinite).unwrap(), "\"+inf\"");
        assert_eq!(serde_json::to_string(&Minx::Finite(4)).unwrap(), "4");
        assert_eq!(serde_json::from_str::<Minx>("\"+inf\"").unwrap(), Minx::Infinite);
        assert!(Minx::Finite(100) < Minx::Infinite);
    }

    #[test]
    fn quasiconvexity_examples() {
        let v = f2();
        assert_eq!(quasiconvexity_epsilon(&sg(&v, &["a"]), &v, 5).unwrap().epsilon, 0);
        assert_eq!(quasiconvexity_epsilon(&sg(&v, &["a", "b"]), &v, 3).unwrap().epsilon, 0);
        assert_eq!(quasiconvexity_epsilon(&sg(&v, &["a b"]), &v, 6).unwrap().epsilon, 1);
    }

    #[test]
    fn c1_holds_on_fixture() {
        let v = f2();
        let rep = check_condition(&v, ConditionId::C1, &fixture(&v, 2), th(3, 3, 6)).unwrap();
        assert_eq!(rep.verdict, Verdict::HoldsToRadius);
    }

    #[test]
    fn c1_fails_with_witness() {
        let v = f2();
        let inputs = ConditionInputs::new(sg(&v, &["a", "b"]), sg(&v, &["a"]), sg(&v, &["b"]), sg(&v, &["a^2"]));
        let rep = check_condition(&v, ConditionId::C1, &inputs, th(3, 3, 4)).unwrap();
        match rep.verdict {
            Verdict::Fails { witness, .. } => assert_eq!(witness, "a"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn c4_and_c5_with_abelian_p() {
        let v = f2();
        for k in 1..=4 {
            let inputs = fixture(&v, k);
            assert!(check_condition(&v, ConditionId::C4, &inputs, th(3, 3, 5)).unwrap().verdict.holds());
            let c5 = check_condition(&v, ConditionId::C5, &inputs, th(3, 3, 5)).unwrap();
            assert_eq!(c5.verdict, Verdict::Vacuous);
            assert_eq!(c5.value, Some(Minx::Infinite));
        }
    }

    #[test]
    fn c2_value_grows_with_k() {
        let v = f2();
        let values: Vec<Minx> = (1..=4)
            .map(|k| check_condition(&v, ConditionId::C2, &fixture(&v, k), th(3, 3, 6)).unwrap().value.unwrap())
            .collect();
        // Q<a^k, b^k>Q \ Q starts with a^i b^k a^j.
        assert_eq!(values, vec![Minx::Finite(1), Minx::Finite(2), Minx::Finite(3), Minx::Finite(4)]);
        let rep = check_condition(&v, ConditionId::C2, &fixture(&v, 2), th(3, 3, 6)).unwrap();
        assert!(matches!(rep.verdict, Verdict::Fails { witness_length: 2, .. }));
    }

    #[test]
    fn c3_on_fixture() {
        let v = f2();
        // P = <a>: P Q' = <a>, P R' = <a><b^k>, P S = <a>; minimum is b^k.
        let rep = check_condition(&v, ConditionId::C3, &fixture(&v, 3), th(3, 3, 6)).unwrap();
        assert_eq!(rep.value, Some(Minx::Finite(3)));
        assert_eq!(rep.verdict, Verdict::HoldsToRadius);
    }

    #[test]
    fn empty_p_list_is_vacuous() {
        let v = f2();
        let inputs = fixture(&v, 2).with_p(vec![]);
        assert_eq!(check_condition(&v, ConditionId::C3, &inputs, th(3, 3, 4)).unwrap().verdict, Verdict::Vacuous);
    }

    #[test]
    fn c2m_with_empty_t_list_is_part_of_c2() {
        let v = f2();
        let inputs = fixture(&v, 3);
        let c2m = check_condition(&v, ConditionId::C2m, &inputs, th(3, 3, 6)).unwrap();
        let c2 = check_condition(&v, ConditionId::C2, &inputs, th(3, 3, 6)).unwrap();
        assert!(c2m.value >= c2.value);
    }

    #[test]
    fn p1_stable_for_cyclic_join() {
        let v = f2();
        let inputs = fixture(&v, 2);
        let rep = check_condition(&v, ConditionId::P1, &inputs, th(3, 3, 4)).unwrap();
        assert_eq!(rep.verdict, Verdict::HoldsToRadius);
    }

    #[test]
    fn report_serialization() {
        let v = f2();
        let rep = check_condition(&v, ConditionId::C2, &fixture(&v, 1), th(3, 3, 4)).unwrap();
        let s = serde_json::to_string(&rep).unwrap();
        assert!(s.contains("\"verdict\":\"fails\""), "{s}");
        assert!(s.contains("\"id\":\"C2\""), "{s}");
    }

    #[test]
    fn preccurlyeq_examples() {
        let g = GroupSpec::free(2);
        let a = SubgroupSpec::parse(&g, &["a"]).unwrap();
        let a2 = SubgroupSpec::parse(&g, &["a^2"]).unwrap();
        let b = SubgroupSpec::parse(&g, &["b"]).unwrap();
        assert!(preccurlyeq(&g, &a, &a).unwrap());
        assert!(preccurlyeq(&g, &a, &a2).unwrap());
        assert!(!preccurlyeq(&g, &a, &b).unwrap());
    }
}

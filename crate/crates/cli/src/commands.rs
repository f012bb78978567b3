//! Command dispatch: each command turns the configuration into reports.

use serde_json::{json, Value};

use relsep::cayley::{build_ball, BrokenLine, EdgePath, Metric, RelGraphView};
use relsep::components::{find_components, find_consecutive_backtracking, is_without_backtracking};
use relsep::conditions::{check_condition, minx, ConditionId, ConditionInputs, EnumeratedSet, Thresholds, Verdict};
use relsep::geometry::{gromov_product, measure_delta, Q};
use relsep::pathrep::{check_alternation, minimize_type, tail_height, RepBudget, RepTarget};
use relsep::separability::{
    amalgam_product_member, amalgam_reduce, find_separating_quotient, minx_quotient_harness, subgroup_graph_of,
    ProductKind, RationalSubset, SearchLimits, StallingsGraph, SubgroupOracle,
};
use relsep::shortcut::{check_shortcut_invariants, is_tamable, shortcut, verify_shortcut_proposition};
use relsep::{Elem, GroupSpec, Role, SubgroupSpec};

use crate::config::{elem, elems, required, role, schema, subgroup, RunConfig};
use crate::report::Report;

pub const COMMANDS: [&str; 20] = [
    "ball",
    "rel-dist",
    "geodesic",
    "gromov",
    "delta",
    "components",
    "backtracking",
    "shortcut",
    "tamable",
    "verify-shortcut",
    "minimize-type",
    "check-conditions",
    "stallings",
    "member",
    "product-member",
    "separate",
    "minx",
    "minx-harness",
    "amalgam-reduce",
    "amalgam-member",
];

pub const DEFAULT_RADIUS: usize = 4;
pub const DEFAULT_BUDGET: usize = 2_000_000;

/// A configuration with command-line overrides applied.
pub struct Run {
    pub cfg: RunConfig,
    pub command: String,
    pub seed: u64,
    pub radius: usize,
    pub budget: usize,
}

struct Ctx<'a> {
    run: &'a Run,
    view: RelGraphView,
}

impl Ctx<'_> {
    fn group(&self) -> &GroupSpec {
        self.view.group()
    }

    fn fmt(&self, g: &Elem) -> String {
        self.group().format_elem(g)
    }

    fn fmt_path(&self, p: &EdgePath) -> String {
        self.view.format_path(p)
    }

    fn metric(&self) -> anyhow::Result<Metric> {
        match self.run.cfg.params.metric.as_deref() {
            None | Some("relative") => Ok(Metric::Relative),
            Some("word") => Ok(Metric::Word),
            Some(m) => Err(schema(format!("unknown metric `{m}`"))),
        }
    }

    fn points(&self, n: usize) -> anyhow::Result<Vec<Elem>> {
        let e = &self.run.cfg.inputs.elements;
        if e.len() != n {
            return Err(schema(format!("`inputs.elements` must list {n} elements, got {}", e.len())));
        }
        elems(self.group(), e)
    }

    fn broken_line(&self) -> anyhow::Result<BrokenLine> {
        let e = &self.run.cfg.inputs.elements;
        if e.len() < 2 {
            return Err(schema("`inputs.elements` must list at least two broken-line nodes"));
        }
        Ok(BrokenLine::through(&self.view, &elems(self.group(), e)?)?)
    }

    fn g(&self) -> anyhow::Result<Elem> {
        match &self.run.cfg.inputs.g {
            Some(g) => elem(self.group(), g),
            None => Err(schema("`inputs.g` is required")),
        }
    }

    fn word(&self) -> anyhow::Result<&str> {
        self.run.cfg.inputs.word.as_deref().ok_or_else(|| schema("`inputs.word` is required"))
    }

    fn factors(&self) -> anyhow::Result<Vec<SubgroupSpec>> {
        self.run.cfg.inputs.factors.iter().map(|f| subgroup(self.group(), f)).collect()
    }

    fn rational_subset(&self) -> anyhow::Result<RationalSubset> {
        let group = self.group();
        let graphs = self.factors()?.iter().map(|h| subgroup_graph_of(group, h)).collect::<relsep::Result<Vec<_>>>()?;
        let prefix = match &self.run.cfg.inputs.prefix {
            Some(p) => group.free_word(&elem(group, p)?)?.to_vec(),
            None => Vec::new(),
        };
        Ok(RationalSubset::new(prefix, graphs))
    }

    fn subset_text(&self) -> String {
        let group = self.group();
        let inputs = &self.run.cfg.inputs;
        let mut parts: Vec<String> = inputs.prefix.iter().cloned().collect();
        for f in &inputs.factors {
            parts.push(format!("<{}>", f.join(", ")));
        }
        if parts.is_empty() {
            return group.format_elem(&group.identity());
        }
        parts.join(" ")
    }

    fn limits(&self) -> SearchLimits {
        let p = &self.run.cfg.params;
        let d = SearchLimits::default();
        SearchLimits {
            n_max: p.n_max.unwrap_or(d.n_max),
            budget: self.run.budget,
            random_tries: p.random_tries.unwrap_or(d.random_tries),
            seed: self.run.seed,
        }
    }

    fn base_inputs(&self) -> serde_json::Map<String, Value> {
        let group = self.group();
        let mut m = serde_json::Map::new();
        m.insert("family".into(), json!(group.family_name()));
        m.insert("gens".into(), json!(group.gens().names()));
        m.insert("peripherals".into(), json!(group.peripherals()));
        m
    }

    fn inputs(&self, extra: Value) -> Value {
        let mut m = self.base_inputs();
        if let Value::Object(e) = extra {
            m.extend(e);
        }
        Value::Object(m)
    }
}

fn q(n: usize) -> Q {
    Q::from_integer(n as i64)
}

fn role_name(r: Role) -> String {
    match r {
        Role::Q => "q".into(),
        Role::R => "r".into(),
        Role::QPrime => "q'".into(),
        Role::RPrime => "r'".into(),
        Role::S => "s".into(),
        Role::T(i) => format!("t{i}"),
        Role::P => "p".into(),
        Role::U(i) => format!("u{i}"),
    }
}

fn graph_json(ctx: &Ctx, h: &StallingsGraph) -> Value {
    let gens = ctx.group().gens();
    let edges: Vec<Value> = h.edges().into_iter().map(|(s, g, t)| json!([s, gens.names()[g as usize], t])).collect();
    let basis: Vec<String> = h.free_basis().iter().map(|w| gens.format_word(w)).collect();
    json!({
        "vertices": h.len(),
        "basepoint": h.basepoint(),
        "edges": edges,
        "rank": h.subgroup_rank(),
        "free_basis": basis,
        "finite_index": h.is_complete(),
    })
}

pub fn run(run: &Run) -> anyhow::Result<Vec<Report>> {
    let group = run.cfg.group.build()?;
    let ctx = Ctx { run, view: RelGraphView::new(group)? };
    let cmd = run.command.as_str();
    let reports = match cmd {
        "ball" => vec![ball(&ctx)?],
        "rel-dist" => vec![rel_dist(&ctx)?],
        "geodesic" => vec![geodesic(&ctx)?],
        "gromov" => vec![gromov(&ctx)?],
        "delta" => vec![delta(&ctx)?],
        "components" => vec![components(&ctx)?],
        "backtracking" => vec![backtracking(&ctx)?],
        "shortcut" => vec![shortcut_cmd(&ctx)?],
        "tamable" => vec![tamable(&ctx)?],
        "verify-shortcut" => vec![verify_shortcut(&ctx)?],
        "minimize-type" => vec![minimize(&ctx)?],
        "check-conditions" => conditions(&ctx)?,
        "stallings" => vec![stallings(&ctx)?],
        "member" => vec![member(&ctx)?],
        "product-member" => vec![product_member(&ctx)?],
        "separate" => vec![separate(&ctx)?],
        "minx" => vec![minx_cmd(&ctx)?],
        "minx-harness" => vec![minx_harness(&ctx)?],
        "amalgam-reduce" => vec![amalgam_reduce_cmd(&ctx)?],
        "amalgam-member" => vec![amalgam_member(&ctx)?],
        other => return Err(schema(format!("unknown command `{other}`; expected one of {}", COMMANDS.join(", ")))),
    };
    Ok(reports)
}

fn ball(ctx: &Ctx) -> anyhow::Result<Report> {
    let r = ctx.run.radius;
    let b = build_ball(ctx.group(), r, ctx.run.budget)?;
    let mut spheres = vec![0usize; r + 1];
    for i in 0..b.len() {
        spheres[b.dist(i)] += 1;
    }
    let mut result = json!({ "size": b.len(), "spheres": spheres });
    if b.len() <= 200 {
        result["elements"] = json!(b.vertices().iter().map(|g| ctx.fmt(g)).collect::<Vec<_>>());
    }
    Ok(Report::new("ball", ctx.inputs(json!({ "radius": r })), "ok", result))
}

fn rel_dist(ctx: &Ctx) -> anyhow::Result<Report> {
    let p = ctx.points(2)?;
    let result = json!({
        "rel_dist": ctx.view.rel_dist(&p[0], &p[1])?,
        "x_dist": ctx.view.x_dist(&p[0], &p[1])?,
    });
    Ok(Report::new("rel-dist", ctx.inputs(json!({ "elements": ctx.run.cfg.inputs.elements })), "ok", result))
}

fn geodesic(ctx: &Ctx) -> anyhow::Result<Report> {
    let p = ctx.points(2)?;
    let metric = ctx.metric()?;
    let path = ctx.view.geodesic(metric, &p[0], &p[1])?;
    let result = json!({ "length": path.len(), "path": ctx.fmt_path(&path) });
    let inputs = ctx.inputs(json!({ "elements": ctx.run.cfg.inputs.elements, "metric": metric }));
    Ok(Report::new("geodesic", inputs, "ok", result))
}

fn gromov(ctx: &Ctx) -> anyhow::Result<Report> {
    let p = ctx.points(3)?;
    let metric = ctx.metric()?;
    let g = gromov_product(&ctx.view, metric, &p[0], &p[1], &p[2])?;
    let inputs = ctx.inputs(json!({ "elements": ctx.run.cfg.inputs.elements, "metric": metric }));
    Ok(Report::new("gromov", inputs, "ok", json!({ "product": g })))
}

fn delta(ctx: &Ctx) -> anyhow::Result<Report> {
    let metric = ctx.metric()?;
    let r = ctx.run.radius;
    let b = build_ball(ctx.group(), r, ctx.run.budget)?;
    let m = measure_delta(&ctx.view, metric, &b, ctx.run.budget)?;
    let inputs = ctx.inputs(json!({ "radius": r, "metric": metric }));
    let mut report = Report::new("delta", inputs, "ok", json!({ "delta": m.delta, "triples": m.triples }))
        .caveat(format!("maximum over geodesic triangles with vertices in the ball of radius {r}"));
    if let Some(w) = m.witness {
        report = report.witness(json!(w.iter().map(|&i| ctx.fmt(b.vertex(i))).collect::<Vec<_>>()));
    }
    Ok(report)
}

fn components_json(ctx: &Ctx, p: &EdgePath, owner: usize) -> anyhow::Result<Vec<Value>> {
    let group = ctx.group();
    find_components(&ctx.view, p, owner)?
        .iter()
        .map(|h| {
            Ok(json!({
                "start": h.start,
                "end": h.end,
                "nu": h.nu,
                "element": ctx.fmt(&group.ldiv(&h.h_minus, &h.h_plus)?),
                "x_length": h.x_length,
            }))
        })
        .collect()
}

fn components(ctx: &Ctx) -> anyhow::Result<Report> {
    let (path, inputs) = match &ctx.run.cfg.inputs.word {
        Some(w) => {
            let letters = ctx.group().parse_word(w)?;
            (ctx.view.word_path(ctx.group().identity(), &letters)?, json!({ "word": w }))
        }
        None => (ctx.broken_line()?.path(), json!({ "elements": ctx.run.cfg.inputs.elements })),
    };
    let result = json!({
        "path": ctx.fmt_path(&path),
        "components": components_json(ctx, &path, 0)?,
        "without_backtracking": is_without_backtracking(&ctx.view, &path)?,
    });
    Ok(Report::new("components", ctx.inputs(inputs), "ok", result))
}

fn backtracking(ctx: &Ctx) -> anyhow::Result<Report> {
    let bl = ctx.broken_line()?;
    let group = ctx.group();
    let mut instances = Vec::new();
    for inst in find_consecutive_backtracking(&ctx.view, &bl)? {
        let chain = inst
            .chain
            .iter()
            .map(|(s, h)| {
                Ok(json!({
                    "segment": s,
                    "start": h.start,
                    "end": h.end,
                    "nu": h.nu,
                    "element": ctx.fmt(&group.ldiv(&h.h_minus, &h.h_plus)?),
                    "x_length": h.x_length,
                }))
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        instances.push(json!({ "kind": inst.kind, "chain": chain }));
    }
    let inputs = ctx.inputs(json!({ "elements": ctx.run.cfg.inputs.elements }));
    let verdict = if instances.is_empty() { "holds" } else { "fails" };
    let mut report = Report::new("backtracking", inputs, verdict, json!({ "instances": instances }));
    if let Some(first) = instances.first() {
        report = report.witness(first.clone());
    }
    Ok(report)
}

fn shortcut_cmd(ctx: &Ctx) -> anyhow::Result<Report> {
    let bl = ctx.broken_line()?;
    let theta = required(ctx.run.cfg.params.theta, "theta")?;
    let res = shortcut(&ctx.view, &bl, theta)?;
    let violations = check_shortcut_invariants(&ctx.view, &bl, &res, theta)?;
    let result = json!({
        "v": res.v,
        "sigma": ctx.fmt_path(&res.sigma_path()),
        "f": res.f.iter().map(|p| ctx.fmt_path(p)).collect::<Vec<_>>(),
        "e": res.e.iter().map(|p| ctx.fmt_path(p)).collect::<Vec<_>>(),
        "invariant_violations": violations,
    });
    let inputs = ctx.inputs(json!({ "elements": ctx.run.cfg.inputs.elements, "theta": theta }));
    let verdict = if violations.is_empty() { "holds" } else { "fails" };
    let mut report = Report::new("shortcut", inputs, verdict, result);
    if let Some(v) = violations.first() {
        report = report.witness(json!(v));
    }
    Ok(report)
}

fn tamable(ctx: &Ctx) -> anyhow::Result<Report> {
    let bl = ctx.broken_line()?;
    let p = &ctx.run.cfg.params;
    let (b, c, zeta, theta) =
        (required(p.b, "b")?, required(p.c, "c")?, required(p.zeta, "zeta")?, required(p.theta, "theta")?);
    let t = is_tamable(&ctx.view, &bl, q(b), q(c), q(zeta), theta)?;
    let inputs = ctx.inputs(json!({
        "elements": ctx.run.cfg.inputs.elements, "b": b, "c": c, "zeta": zeta, "theta": theta,
    }));
    let verdict = if t.tamable { "holds" } else { "fails" };
    let mut report = Report::new("tamable", inputs, verdict, json!({ "tamable": t.tamable }));
    if let Some((cond, detail)) = &t.failure {
        report = report.witness(json!({ "condition": cond, "detail": detail }));
    }
    Ok(report)
}

fn verify_shortcut(ctx: &Ctx) -> anyhow::Result<Report> {
    let bl = ctx.broken_line()?;
    let p = &ctx.run.cfg.params;
    let theta = required(p.theta, "theta")?;
    let lambda = required(p.lambda, "lambda")?;
    let c = required(p.qg_c, "qg_c")?;
    let eta = required(p.eta, "eta")?;
    let tam = match (p.b, p.c, p.zeta) {
        (Some(b), Some(cc), Some(z)) => Some((q(b), q(cc), q(z))),
        (None, None, None) => None,
        _ => return Err(schema("tamability needs all of `b`, `c` and `zeta`")),
    };
    let r = verify_shortcut_proposition(&ctx.view, &bl, theta, q(lambda), q(c), eta, tam)?;
    let result = json!({
        "v": r.result.v,
        "sigma": ctx.fmt_path(&r.result.sigma_path()),
        "e_nontrivial": r.e_nontrivial,
        "quasigeodesic": r.quasigeodesic.holds,
        "without_backtracking": r.without_backtracking,
        "e_component_lengths": r.e_component_lengths,
        "components_long": r.components_long,
        "tamable": r.tamable.as_ref().map(|t| t.tamable),
    });
    let inputs = ctx.inputs(json!({
        "elements": ctx.run.cfg.inputs.elements, "theta": theta, "lambda": lambda, "qg_c": c, "eta": eta,
        "b": p.b, "c": p.c, "zeta": p.zeta,
    }));
    let verdict = if r.violation {
        "fails"
    } else if r.conclusions_hold() {
        "holds"
    } else {
        "inconclusive"
    };
    let mut report = Report::new("verify-shortcut", inputs, verdict, result);
    if let Some((i, j)) = r.quasigeodesic.witness {
        report = report.witness(json!({ "non_quasigeodesic_subpath": [i, j] }));
    }
    match &r.tamable {
        None if !r.conclusions_hold() => report = report.caveat("tamability was not checked"),
        Some(t) if !t.tamable => report = report.caveat("the input is not tamable; conclusions are not claimed"),
        _ => {}
    }
    Ok(report)
}

fn minimize(ctx: &Ctx) -> anyhow::Result<Report> {
    let group = ctx.group();
    let s = &ctx.run.cfg.subgroups;
    let p = &ctx.run.cfg.params;
    let oracle = |gens: &Option<Vec<String>>, name: &str| -> anyhow::Result<SubgroupOracle> {
        Ok(SubgroupOracle::new(group, &role(group, gens, name)?)?)
    };
    let kind = p.kind.as_deref().unwrap_or("I");
    let target = match kind {
        "I" => RepTarget::kind_i(oracle(&s.q_prime, "q_prime")?, oracle(&s.r_prime, "r_prime")?),
        "II" => RepTarget::kind_ii(
            oracle(&s.q, "q")?,
            oracle(&s.q_prime, "q_prime")?,
            oracle(&s.r_prime, "r_prime")?,
            oracle(&s.r, "r")?,
        ),
        "III" => {
            let tails =
                s.t.iter()
                    .map(|t| Ok(SubgroupOracle::new(group, &subgroup(group, t)?)?))
                    .collect::<anyhow::Result<Vec<_>>>()?;
            RepTarget::kind_iii(
                oracle(&s.q, "q")?,
                oracle(&s.q_prime, "q_prime")?,
                oracle(&s.r_prime, "r_prime")?,
                oracle(&s.r, "r")?,
                tails,
            )
        }
        other => return Err(schema(format!("unknown representative kind `{other}`"))),
    };
    let d = RepBudget::default();
    let budget = RepBudget {
        max_factors: p.max_factors.unwrap_or(d.max_factors),
        max_len: p.max_len.unwrap_or(d.max_len),
        max_states: p.max_states.unwrap_or(ctx.run.budget),
    };
    let g = ctx.g()?;
    let inputs = ctx.inputs(json!({
        "g": ctx.run.cfg.inputs.g, "kind": kind, "max_factors": budget.max_factors, "max_len": budget.max_len,
    }));
    let scope = format!(
        "minimal among representatives with at most {} factors, each of word length at most {}",
        budget.max_factors, budget.max_len
    );
    let Some(m) = minimize_type(&ctx.view, &g, &target, &budget)? else {
        return Ok(Report::new("minimize-type", inputs, "not-found", Value::Null)
            .caveat(format!("no representative within the budget: {scope}")));
    };
    let seg_elems = m.rep.segment_elems(&ctx.view)?;
    let segments: Vec<Value> = m
        .rep
        .roles
        .iter()
        .zip(&seg_elems)
        .zip(m.rep.line.segments())
        .map(|((r, y), path)| json!({ "role": role_name(*r), "element": ctx.fmt(y), "path": ctx.fmt_path(path) }))
        .collect();
    let mut result = json!({
        "type": m.ty,
        "width": m.rep.width(),
        "segments": segments,
        "alternation": check_alternation(&ctx.view, &m.rep, &target)?,
    });
    if kind == "III" {
        result["tail_height"] = match tail_height(&ctx.view, &m.rep)? {
            Some(h) => json!(h),
            None => json!("+inf"),
        };
    }
    Ok(Report::new("minimize-type", inputs, "ok", result).caveat(scope))
}

fn conditions(ctx: &Ctx) -> anyhow::Result<Vec<Report>> {
    let group = ctx.group();
    let s = &ctx.run.cfg.subgroups;
    let p = &ctx.run.cfg.params;
    let list =
        |ls: &[Vec<String>]| -> anyhow::Result<Vec<SubgroupSpec>> { ls.iter().map(|h| subgroup(group, h)).collect() };
    let inputs = ConditionInputs::new(
        role(group, &s.q, "q")?,
        role(group, &s.r, "r")?,
        role(group, &s.q_prime, "q_prime")?,
        role(group, &s.r_prime, "r_prime")?,
    )
    .with_p(list(&s.p)?)
    .with_u(list(&s.u)?)
    .with_t(list(&s.t)?);
    let ids: Vec<ConditionId> = if p.conditions.is_empty() {
        ConditionId::ALL.to_vec()
    } else {
        p.conditions
            .iter()
            .map(|c| ConditionId::parse(c).ok_or_else(|| schema(format!("unknown condition `{c}`"))))
            .collect::<anyhow::Result<_>>()?
    };
    // Only the thresholds a condition compares against are required.
    let needs = |set: &[ConditionId]| ids.iter().any(|id| set.contains(id));
    let threshold = |v: Option<usize>, name: &str, set: &[ConditionId]| -> anyhow::Result<usize> {
        if needs(set) {
            required(v, name)
        } else {
            Ok(v.unwrap_or(0))
        }
    };
    let th = Thresholds {
        b: threshold(p.b, "b", &[ConditionId::C2, ConditionId::C2m])?,
        c: threshold(p.c, "c", &[ConditionId::C3, ConditionId::C5, ConditionId::C5m])?,
        a: threshold(p.a, "a", &[ConditionId::P2, ConditionId::P3])?,
        radius: ctx.run.radius,
    };
    let subgroups = serde_json::to_value(s)?;
    let mut out = Vec::new();
    for id in ids {
        let r = check_condition(&ctx.view, id, &inputs, th)?;
        let (verdict, witness) = match &r.verdict {
            Verdict::HoldsToRadius => ("holds-to-radius", None),
            Verdict::Fails { witness, witness_length } => {
                ("fails", Some(json!({ "element": witness, "length": witness_length })))
            }
            Verdict::Vacuous => ("vacuous", None),
        };
        let result = json!({
            "id": id.name(),
            "value": r.value,
            "threshold": r.threshold,
            "radius": r.radius,
            "params": r.params,
        });
        let inputs = ctx.inputs(json!({ "condition": id.name(), "subgroups": subgroups, "radius": th.radius }));
        let mut report = Report::new("check-conditions", inputs, verdict, result);
        report.witness = witness;
        report.caveats = r.caveats.clone();
        out.push(report);
    }
    Ok(out)
}

fn stallings(ctx: &Ctx) -> anyhow::Result<Report> {
    let graphs = ctx
        .factors()?
        .iter()
        .map(|h| Ok(graph_json(ctx, &subgroup_graph_of(ctx.group(), h)?)))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let inputs = ctx.inputs(json!({ "factors": ctx.run.cfg.inputs.factors }));
    Ok(Report::new("stallings", inputs, "ok", json!({ "graphs": graphs })))
}

fn member(ctx: &Ctx) -> anyhow::Result<Report> {
    let f = ctx.factors()?;
    if f.len() != 1 {
        return Err(schema("`member` takes exactly one subgroup in `inputs.factors`"));
    }
    let g = ctx.g()?;
    let inside = SubgroupOracle::new(ctx.group(), &f[0])?.contains(&ctx.view, &g)?;
    let inputs = ctx.inputs(json!({ "g": ctx.run.cfg.inputs.g, "factors": ctx.run.cfg.inputs.factors }));
    let verdict = if inside { "member" } else { "non-member" };
    Ok(Report::new("member", inputs, verdict, json!({ "member": inside })))
}

fn product_member(ctx: &Ctx) -> anyhow::Result<Report> {
    let z = ctx.rational_subset()?;
    let g = ctx.g()?;
    let inside = z.contains(ctx.group().free_word(&g)?);
    let inputs = ctx.inputs(json!({ "g": ctx.run.cfg.inputs.g, "subset": ctx.subset_text() }));
    let verdict = if inside { "member" } else { "non-member" };
    Ok(Report::new("product-member", inputs, verdict, json!({ "member": inside })))
}

fn separate(ctx: &Ctx) -> anyhow::Result<Report> {
    let z = ctx.rational_subset()?;
    let g = ctx.g()?;
    let limits = ctx.limits();
    let inputs = ctx.inputs(json!({
        "g": ctx.run.cfg.inputs.g, "subset": ctx.subset_text(), "n_max": limits.n_max, "seed": limits.seed,
    }));
    let w = ctx.group().free_word(&g)?;
    if z.contains(w) {
        return Ok(Report::new("separate", inputs, "member", Value::Null)
            .caveat("the element lies in the subset, so no quotient separates it"));
    }
    match find_separating_quotient(ctx.group(), &g, &z, &limits)? {
        Some(sep) => {
            let q = &sep.quotient;
            let image_of_g = q.image(w);
            let gens = ctx.group().gens().names();
            let images: serde_json::Map<String, Value> =
                gens.iter().zip(&q.images).map(|(n, p)| (n.clone(), json!(p))).collect();
            let result = json!({
                "degree": q.n,
                "images": images,
                "image_of_g": image_of_g,
                "strategy": sep.strategy,
                "examined": sep.examined,
                "verified": sep.verified,
            });
            let verdict = if sep.verified { "separated" } else { "fails" };
            let mut report = Report::new("separate", inputs, verdict, result)
                .caveat("permutations act on the right: x^(uv) = (x^u)^v");
            if !sep.verified {
                report = report.witness(json!({ "unverified_degree": q.n }));
            }
            Ok(report)
        }
        None => Ok(Report::new("separate", inputs, "not-found", Value::Null).caveat(format!(
            "no separating action on at most {} points within {} candidates",
            limits.n_max, limits.budget
        ))),
    }
}

fn minx_cmd(ctx: &Ctx) -> anyhow::Result<Report> {
    let set = &ctx.run.cfg.inputs.set;
    let y = EnumeratedSet::new(elems(ctx.group(), set)?, "inputs.set");
    let m = minx(ctx.group(), &y)?;
    Ok(Report::new("minx", ctx.inputs(json!({ "set": set })), "ok", json!({ "minx": m })))
}

fn minx_harness(ctx: &Ctx) -> anyhow::Result<Report> {
    let z = ctx.rational_subset()?;
    let c = required(ctx.run.cfg.params.c, "c")?;
    let limits = ctx.limits();
    let h = minx_quotient_harness(ctx.group(), &z, c, &limits)?;
    let gens = ctx.group().gens();
    let images: serde_json::Map<String, Value> =
        gens.names().iter().zip(&h.quotient.images).map(|(n, p)| (n.clone(), json!(p))).collect();
    let result = json!({
        "degree": h.quotient.n,
        "images": images,
        "strategy": h.strategy,
        "minx": h.minx.map_or(json!("+inf"), |m| json!(m)),
    });
    let inputs = ctx.inputs(json!({ "subset": ctx.subset_text(), "c": c, "n_max": limits.n_max, "seed": limits.seed }));
    let verdict = if h.holds { "holds" } else { "fails" };
    let mut report = Report::new("minx-harness", inputs, verdict, result)
        .caveat(format!("minx(ZN \\ Z) is enumerated on the ball of radius {}", h.radius));
    if !h.holds {
        if let Some(w) = &h.witness {
            report = report.witness(json!(gens.format_word(w)));
        }
    }
    Ok(report)
}

fn amalgam_reduce_cmd(ctx: &Ctx) -> anyhow::Result<Report> {
    let text = ctx.word()?;
    let w = ctx.group().parse_word(text)?;
    let nf = amalgam_reduce(ctx.group(), &w)?;
    let result = json!({
        "syllables": nf.syllables,
        "length": nf.len(),
        "element": ctx.fmt(&nf.elem()),
    });
    Ok(Report::new("amalgam-reduce", ctx.inputs(json!({ "word": text })), "ok", result))
}

fn amalgam_member(ctx: &Ctx) -> anyhow::Result<Report> {
    let kind = match ctx.run.cfg.params.product.as_deref() {
        Some("UC") => ProductKind::UC,
        Some("BV") => ProductKind::BV,
        Some("BC") => ProductKind::BC,
        Some("UD") => ProductKind::UD,
        Some("DV") => ProductKind::DV,
        Some(o) => return Err(schema(format!("unknown amalgam product `{o}`"))),
        None => return Err(schema("parameter `product` is required")),
    };
    let g = ctx.g()?;
    let (u, v) = (&ctx.run.cfg.inputs.u, &ctx.run.cfg.inputs.v);
    let inside = amalgam_product_member(ctx.group(), &g, kind, u, v)?;
    let inputs = ctx.inputs(json!({
        "g": ctx.run.cfg.inputs.g, "product": ctx.run.cfg.params.product, "u": u, "v": v,
    }));
    let verdict = if inside { "member" } else { "non-member" };
    Ok(Report::new("amalgam-member", inputs, verdict, json!({ "member": inside })))
}

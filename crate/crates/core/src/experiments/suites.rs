use serde_json::{json, Map, Value};

use super::criteria::{run_criterion, CRITERIA};
use super::{ExperimentConfig, ExperimentInfo, Instance, Outcome, ParamInfo, Row};
use crate::error::{Error, Result};
use crate::extension::{
    audit_extension, audit_glue, glue_embedding, greedy_net, lipschitz_extend_to_tree, net_distance_family,
    random_extension_instance, separated_partition, IdentityCharts,
};
use crate::hyperbolic::{hyperbolic_type_check, min_delta};
use crate::markov_type::{
    hamming_moment, hamming_moment_montecarlo, moment_curve_montecarlo, moment_scaling_curve, pair_moment,
    spectral_certificate, type_ratio_curve, Estimate, PointMap,
};
use crate::martingale::{
    convexity_two_point_check, decompose, increment_moment_bound, pisier_sum_check, smoothness_two_point_check,
    two_point_pairs, verify_identity, ConvexitySpec, IncrementFamily, IncrementSource, SmoothnessSpec,
};
use crate::metric::{cube_lower_bound, Laakso};
use crate::tree_walk::{pitman_moments, tree_walk_simulate};
use crate::ReversibleChain;

struct Params<'a>(&'a Map<String, Value>);

impl Params<'_> {
    fn f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => v.as_f64().ok_or_else(|| Error::Config(format!("param `{key}` must be a number"))),
        }
    }

    fn opt_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.0.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(_) => self.f64(key, 0.0).map(Some),
        }
    }

    fn u64(&self, key: &str, default: u64) -> Result<u64> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => v.as_u64().ok_or_else(|| Error::Config(format!("param `{key}` must be a non-negative integer"))),
        }
    }

    fn usize(&self, key: &str, default: usize) -> Result<usize> {
        self.u64(key, default as u64).map(|v| v as usize)
    }

    fn bool(&self, key: &str, default: bool) -> Result<bool> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => v.as_bool().ok_or_else(|| Error::Config(format!("param `{key}` must be a boolean"))),
        }
    }

    fn str<'b>(&'b self, key: &str, default: &'b str) -> Result<&'b str> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => v.as_str().ok_or_else(|| Error::Config(format!("param `{key}` must be a string"))),
        }
    }

    fn u64_list(&self, key: &str) -> Result<Option<Vec<u64>>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| v.as_u64().ok_or_else(|| Error::Config(format!("param `{key}` must list integers"))))
                .collect::<Result<Vec<_>>>()
                .map(Some),
            Some(_) => Err(Error::Config(format!("param `{key}` must be a list"))),
        }
    }

    /// Grid of times: explicit list `t`, else `1..=t_max`.
    fn t_grid(&self, default_max: u64) -> Result<Vec<u64>> {
        let grid = match self.u64_list("t")? {
            Some(list) => list,
            None => (1..=self.u64("t_max", default_max)?).collect(),
        };
        if grid.is_empty() || grid.contains(&0) {
            return Err(Error::Config("time grid must be non-empty and start at 1".into()));
        }
        Ok(grid)
    }
}

fn row(v: Value) -> Row {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("rows are built from object literals"),
    }
}

fn instance(config: &ExperimentConfig) -> Result<&Instance> {
    config.instance.as_ref().ok_or_else(|| Error::Config(format!("experiment `{}` needs an instance", config.experiment)))
}

fn markov_type(config: &ExperimentConfig) -> Result<Outcome> {
    let params = Params(&config.params);
    let problem = instance(config)?.problem()?;
    let p = params.f64("p", 2.0)?;
    let grid = params.t_grid(64)?;
    let t_max = *grid.iter().max().unwrap();
    // The l_p certificate concerns second moments of maps into l_p, p >= 2.
    let certificate = match (&problem.vectors, params.opt_f64("certificate")?) {
        (_, Some(c)) => Some(c),
        (Some((norm, _)), None) if p == 2.0 && *norm >= 2.0 => Some(4.0 * (norm - 1.0).sqrt()),
        _ => None,
    };
    let mut rows = Vec::new();
    let mut pass = true;
    match params.str("mode", "exact")? {
        "exact" => {
            let curve = type_ratio_curve(&problem.chain, &problem.space, &problem.map, p, t_max, certificate)?;
            for t in &grid {
                let r = &curve[*t as usize - 1];
                pass &= r.pass != Some(false);
                rows.push(row(json!({ "t": r.t, "E_t": r.e_t, "E_1": r.e_1, "ratio": r.ratio,
                    "certificate": r.certificate, "pass": r.pass })));
            }
        }
        "montecarlo" => {
            let trials = params.usize("trials", 10_000)?;
            let e1 = pair_moment(&problem.chain, &problem.space, &problem.map, p, 1)?;
            let curve =
                moment_curve_montecarlo(&problem.chain, &problem.space, &problem.map, p, t_max as usize, trials, config.seed)?;
            for t in &grid {
                let est = curve[*t as usize - 1];
                let ratio = (e1 > 0.0).then(|| (est.mean / (*t as f64 * e1)).powf(1.0 / p));
                let ok = certificate.map(|c| est.mean - 3.0 * est.stderr <= c.powf(p) * *t as f64 * e1 * (1.0 + 1e-9));
                pass &= ok != Some(false);
                rows.push(row(json!({ "t": t, "E_t": est.mean, "stderr": est.stderr, "E_1": e1, "ratio": ratio,
                    "certificate": certificate, "pass": ok })));
            }
        }
        other => return Err(Error::Config(format!("unknown mode `{other}` (exact|montecarlo)"))),
    }
    let mut tables = std::collections::BTreeMap::new();
    let mut notes = Vec::new();
    if let Some(q) = params.opt_f64("q")? {
        let scaling = moment_scaling_curve(&problem.chain, &problem.space, &problem.map, p, q, t_max)?;
        tables.insert("scaling".into(), scaling.iter().map(|(t, v)| row(json!({ "t": t, "scaled_ratio": v }))).collect());
        notes.push("scaled ratio t^(-p/q) E_t/E_1 is reported without a threshold".into());
    }
    let worst = rows.iter().filter_map(|r| r["ratio"].as_f64()).fold(0.0, f64::max);
    Ok(Outcome {
        pass,
        summary: format!("max K(t) over {} times = {worst:.6}", grid.len()),
        rows,
        tables,
        notes,
    })
}

fn real_values(config: &ExperimentConfig) -> Result<(ReversibleChain, Vec<f64>)> {
    let problem = instance(config)?.problem()?;
    let values = match problem.vectors {
        Some((_, v)) if v.iter().all(|x| x.len() == 1) => v.into_iter().map(|x| x[0]).collect(),
        _ => return Err(Error::Config("this experiment needs a `real` map".into())),
    };
    Ok((problem.chain, values))
}

fn spectral(config: &ExperimentConfig) -> Result<Outcome> {
    let params = Params(&config.params);
    let (chain, x) = real_values(config)?;
    let mut rows = Vec::new();
    let mut pass = true;
    for t in params.t_grid(1)? {
        let c = spectral_certificate(&chain, &x, t)?;
        pass &= c.pass;
        rows.push(row(json!({ "t": t, "lambda": c.lambda, "Lambda": c.big_lambda, "lhs": c.lhs, "rhs": c.rhs,
            "pass": c.pass })));
    }
    let n = rows.len();
    Ok(Outcome { pass, summary: format!("{n} spectral checks, all pass: {pass}"), rows, ..Default::default() })
}

fn vector_values(config: &ExperimentConfig) -> Result<(ReversibleChain, Vec<Vec<f64>>, f64)> {
    let problem = instance(config)?.problem()?;
    let (p, values) = problem.vectors.ok_or_else(|| Error::Config("this check needs a `vectors` or `real` map".into()))?;
    Ok((problem.chain, values, p))
}

fn martingale(config: &ExperimentConfig) -> Result<Outcome> {
    let params = Params(&config.params);
    let check = params.str("check", "identity")?;
    let mut rows = Vec::new();
    let pass;
    match check {
        "identity" => {
            let (chain, f, _) = vector_values(config)?;
            let t = params.usize("t", 20)?;
            let trials = params.u64("trials", 10)?;
            let mut all = true;
            for k in 0..trials {
                let tr = decompose(&chain, &f, &chain.sample_trajectory(t, config.seed, k)?)?;
                let c = verify_identity(&tr);
                all &= c.pass;
                rows.push(row(json!({ "trajectory": k, "t": t, "max_error": c.max_error, "worst_s": c.worst_s,
                    "pass": c.pass })));
            }
            pass = all;
        }
        "bound" => {
            let (chain, f, p) = vector_values(config)?;
            let q = params.f64("q", 2.0)?;
            let b = increment_moment_bound(&chain, &f, q, params.f64("norm_p", p)?)?;
            pass = b.pass;
            rows.push(row(json!({ "q": q, "lhs_m": b.lhs_m, "lhs_n": b.lhs_n, "rhs": b.rhs, "pass": b.pass })));
        }
        "pisier" => {
            let (chain, f, p) = vector_values(config)?;
            let norm_p = params.f64("norm_p", p)?;
            let spec = SmoothnessSpec::lp(norm_p)?;
            let t = params.usize("t", 6)?;
            let trials = params.usize("trials", 20_000)?;
            let mut all = true;
            for (name, family) in [
                ("forward", IncrementFamily::Forward),
                ("backward", IncrementFamily::Backward),
                ("forward_odd", IncrementFamily::ForwardOddSteps),
                ("backward_odd", IncrementFamily::BackwardOddSteps),
            ] {
                let source = IncrementSource::Transcript { chain: &chain, f: &f, t, family };
                let c = pisier_sum_check(source, spec, norm_p, trials, config.seed)?;
                all &= c.pass;
                rows.push(row(json!({ "family": name, "t": t, "lhs": c.lhs, "rhs": c.rhs, "stderr": c.stderr,
                    "exact": c.exact, "pass": c.pass })));
            }
            pass = all;
        }
        "smooth2pt" | "convex2pt" => {
            let p = params.f64("p", if check == "smooth2pt" { 4.0 } else { 1.5 })?;
            let count = params.usize("trials", 10_000)?;
            let pairs = two_point_pairs(config.seed, count, params.usize("max_dim", 6)?);
            let (mut worst, mut failures) = (0.0f64, 0usize);
            for (x, y) in &pairs {
                let c = if check == "smooth2pt" {
                    smoothness_two_point_check(x, y, SmoothnessSpec::lp(p)?, p)?
                } else {
                    convexity_two_point_check(x, y, ConvexitySpec::lp(p)?, p)?
                };
                if c.rhs > 0.0 {
                    worst = worst.max(c.lhs / c.rhs);
                }
                failures += usize::from(!c.pass);
            }
            pass = failures == 0;
            rows.push(row(json!({ "check": check, "p": p, "pairs": count, "failures": failures,
                "max_lhs_over_rhs": worst, "pass": pass })));
        }
        other => {
            return Err(Error::Config(format!(
                "unknown check `{other}` (identity|bound|pisier|smooth2pt|convex2pt)"
            )))
        }
    }
    Ok(Outcome { pass, summary: format!("martingale {check}: pass = {pass}"), rows, ..Default::default() })
}

fn hyperbolicity(config: &ExperimentConfig) -> Result<Outcome> {
    let params = Params(&config.params);
    let space = instance(config)?.space()?;
    let rep = min_delta(&space)?;
    let mut r = json!({ "points": space.len(), "delta": rep.delta });
    if params.bool("report_witness", true)? {
        let (x, y, z, w) = rep.witness;
        r["witness"] = json!([x, y, z, w]);
    }
    Ok(Outcome { pass: true, summary: format!("delta = {}", rep.delta), rows: vec![row(r)], ..Default::default() })
}

fn hyp_type_check(config: &ExperimentConfig) -> Result<Outcome> {
    let params = Params(&config.params);
    let problem = instance(config)?.problem()?;
    let constant = params.f64("C", 30.0)?;
    let delta = params.opt_f64("delta")?;
    let mut rows = Vec::new();
    let mut pass = true;
    for t in params.t_grid(64)? {
        let h = hyperbolic_type_check(&problem.chain, &problem.space, &problem.map, t, constant, delta)?;
        pass &= h.pass;
        rows.push(row(json!({ "t": t, "C": h.c, "delta": h.delta, "lhs": h.lhs, "E_1": h.e_1, "rhs": h.rhs,
            "pass": h.pass, "rhs_log2": h.rhs_log2, "pass_log2": h.pass_log2 })));
    }
    Ok(Outcome {
        pass,
        summary: format!("{} times, all pass: {pass}", rows.len()),
        rows,
        notes: vec!["pass uses the natural logarithm; the base-2 column is reported only".into()],
        ..Default::default()
    })
}

fn tree_lowerbound(config: &ExperimentConfig) -> Result<Outcome> {
    let params = Params(&config.params);
    let h = params.u64("h", 5000)?;
    let n = params.u64("n", 100)?;
    let trials = params.usize("trials", 200_000)?;
    let rep = tree_walk_simulate(h, n, trials, config.seed)?;
    let moments = pitman_moments(n as usize)?;
    let table = moments
        .iter()
        .enumerate()
        .map(|(k, m)| row(json!({ "n": k, "E(2M-S)^2": m, "3n": 3 * k })))
        .collect();
    Ok(Outcome {
        pass: rep.pass,
        summary: format!(
            "estimate {:.4} (stderr {:.4}) vs bound {:.4}; estimate/n = {:.4}",
            rep.estimate.mean, rep.estimate.stderr, rep.paper_bound, rep.ratio
        ),
        rows: vec![row(json!({ "h": h, "n": n, "trials": trials, "estimate": rep.estimate.mean,
            "stderr": rep.estimate.stderr, "pitman_moment": rep.pitman_moment.mean,
            "pitman_stderr": rep.pitman_moment.stderr, "paper_bound": rep.paper_bound, "ratio": rep.ratio,
            "pass": rep.pass }))],
        tables: [("moments".to_string(), table)].into(),
        ..Default::default()
    })
}

fn laakso(config: &ExperimentConfig) -> Result<Outcome> {
    let params = Params(&config.params);
    let level = params.u64("level", 2)? as u32;
    let g = Laakso::new(level)?;
    let walk = ReversibleChain::random_walk(g.graph(), None)?;
    let id = PointMap::identity(g.graph().vertex_count());
    let bound = params.f64("bound", 3003.0)?;
    let grid = params.t_grid(16)?;
    let t_max = *grid.iter().max().unwrap() as usize;
    let trials = params.usize("trials", 2000)?;
    let e1 = pair_moment(&walk, g.metric(), &id, 2.0, 1)?;
    let curve = moment_curve_montecarlo(&walk, g.metric(), &id, 2.0, t_max, trials, config.seed)?;
    // Path-lemma witnesses along sampled walks.
    let walks = params.u64("walks", 200)?;
    let mut missing = 0u64;
    for k in 0..walks {
        let traj = walk.sample_trajectory(t_max, config.seed ^ 0x5a5a, k)?;
        missing += u64::from(g.path_lemma_witness(&traj.states).is_err());
    }
    let mut rows = Vec::new();
    let mut pass = missing == 0;
    for t in &grid {
        let est: Estimate = curve[*t as usize - 1];
        let ratio = est.mean / (*t as f64 * e1);
        let ok = est.mean - 3.0 * est.stderr <= bound * *t as f64 * e1;
        pass &= ok;
        rows.push(row(json!({ "t": t, "E_t": est.mean, "stderr": est.stderr, "E_1": e1, "ratio": ratio, "bound": bound,
            "pass": ok })));
    }
    Ok(Outcome {
        pass,
        summary: format!("G_{level}: {} points, {walks} walks, {missing} without a path-lemma witness", id.len()),
        rows,
        ..Default::default()
    })
}

fn extend_tree(config: &ExperimentConfig) -> Result<Outcome> {
    let params = Params(&config.params);
    let (space, tree, subset, phi, default_l) = match &config.instance {
        Some(inst) => {
            let subset = inst.subset.clone().ok_or_else(|| Error::Config("instance needs `subset`".into()))?;
            let phi = inst.phi.clone().ok_or_else(|| Error::Config("instance needs `phi`".into()))?;
            (inst.space()?, inst.tree()?, subset, phi, None)
        }
        None => {
            let r = random_extension_instance(config.seed, params.u64("index", 0)?);
            (r.space, r.tree, r.subset, r.phi, Some(r.lipschitz))
        }
    };
    let l = match (params.opt_f64("L")?, default_l) {
        (Some(l), _) => l,
        (None, Some(l)) => l,
        (None, None) => return Err(Error::Config("param `L` is required with an explicit instance".into())),
    };
    let ext = lipschitz_extend_to_tree(&space, &subset, &phi, l, &tree)?;
    let audit = audit_extension(&space, &subset, &phi, &tree, &ext);
    let rows = (0..space.len())
        .map(|x| row(json!({ "point": x, "in_subset": subset.contains(&x), "tree_vertex": ext.values[x] })))
        .collect();
    Ok(Outcome {
        pass: audit.pass,
        summary: format!(
            "extension: agreement error {:.3e}, Lipschitz {:.6} (allowed {l}), tree grew to {} vertices",
            audit.agreement_error,
            audit.measured_lipschitz,
            ext.tree.vertex_count()
        ),
        rows,
        notes: vec![serde_json::to_string(&audit).expect("audit serializes")],
        ..Default::default()
    })
}

fn net_coloring(config: &ExperimentConfig) -> Result<Outcome> {
    let params = Params(&config.params);
    let space = instance(config)?.space()?;
    let r = params.f64("R", 2.0)?;
    let net = greedy_net(&space, r, None)?;
    let part = separated_partition(&net, &space, 16.0 * r)?;
    let audit = net_distance_family(&space, &part, r)?;
    let rows = part
        .classes
        .iter()
        .enumerate()
        .map(|(j, c)| row(json!({ "class": j, "size": c.len(), "members": c })))
        .collect();
    Ok(Outcome {
        pass: true,
        summary: format!(
            "{} net points in {} classes; {} pairs audited, min gap {:.6} (needed {r}), {} reach 2R",
            net.len(),
            part.len(),
            audit.pairs_checked,
            audit.min_gap,
            audit.pairs_with_gap_2r
        ),
        rows,
        notes: vec![serde_json::to_string(&audit).expect("audit serializes")],
        ..Default::default()
    })
}

fn glue(config: &ExperimentConfig) -> Result<Outcome> {
    let params = Params(&config.params);
    let space = instance(config)?.space()?;
    let eps = params.f64("eps", 1.0)?;
    let d = params.f64("D", 1.0)?;
    let charts = IdentityCharts::new(&space)?;
    let g = glue_embedding(&space, eps, d, &charts)?;
    let a = audit_glue(&space, &g);
    let rows = (0..g.block_count())
        .map(|j| row(json!({ "block": j, "centers": g.blocks[j].len() })))
        .collect();
    Ok(Outcome {
        pass: a.pass,
        summary: format!(
            "{} blocks (bound {}), Lipschitz {:.6} (bound {}), {} close pairs with min ratio {:.6}",
            a.blocks, a.block_bound, a.lipschitz, a.lipschitz_bound, a.close_pairs, a.close_ratio
        ),
        rows,
        notes: vec![serde_json::to_string(&a).expect("audit serializes")],
        ..Default::default()
    })
}

fn cube(config: &ExperimentConfig) -> Result<Outcome> {
    let params = Params(&config.params);
    let d = params.u64("d", 10)? as u32;
    let trials = params.usize("trials", 20_000)?;
    let mut rows = Vec::new();
    let mut pass = true;
    for t in params.t_grid(10)? {
        let exact = hamming_moment(d, t)?;
        let mc = hamming_moment_montecarlo(d, t, trials, config.seed ^ t)?;
        let ok = mc.agrees_with(exact, 3.0);
        pass &= ok;
        rows.push(row(json!({ "t": t, "exact": exact, "estimate": mc.mean, "stderr": mc.stderr, "pass": ok })));
    }
    let p = params.f64("p", 4.0)?;
    let lb = cube_lower_bound(d, p)?;
    Ok(Outcome {
        pass,
        summary: format!("Hamming cube d={d}: distortion lower bound into L_{p} is {lb}"),
        rows,
        ..Default::default()
    })
}

fn paper_suite(config: &ExperimentConfig) -> Result<Outcome> {
    let params = Params(&config.params);
    let ids: Vec<u64> = params.u64_list("criteria")?.unwrap_or_else(|| CRITERIA.iter().map(|c| c.0 as u64).collect());
    let mut rows = Vec::new();
    let mut pass = true;
    for id in ids {
        let id = u8::try_from(id).map_err(|_| Error::Config(format!("no criterion {id}")))?;
        let o = run_criterion(id)?;
        pass &= o.pass;
        rows.push(row(json!({ "id": o.id, "name": o.name, "pass": o.pass, "cases": o.cases, "failures": o.failures,
            "detail": o.detail })));
    }
    let passed = rows.iter().filter(|r| r["pass"] == json!(true)).count();
    Ok(Outcome { pass, summary: format!("{passed}/{} criteria pass", rows.len()), rows, ..Default::default() })
}

pub(super) fn dispatch(config: &ExperimentConfig) -> Result<Outcome> {
    match config.experiment.as_str() {
        "markov-type" => markov_type(config),
        "spectral" => spectral(config),
        "martingale" => martingale(config),
        "hyperbolicity" => hyperbolicity(config),
        "hyp-type-check" => hyp_type_check(config),
        "tree-lowerbound" => tree_lowerbound(config),
        "laakso" => laakso(config),
        "extend-tree" => extend_tree(config),
        "net-coloring" => net_coloring(config),
        "glue" => glue(config),
        "cube" => cube(config),
        "paper-suite" => paper_suite(config),
        other => Err(Error::Config(format!("unknown experiment `{other}`; try `mtlab list`"))),
    }
}

fn p(name: &'static str, default: Value, doc: &'static str) -> ParamInfo {
    ParamInfo { name, default, doc }
}

fn smoke(name: &str, instance: Option<Value>, params: Value) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(name).with_seed(1);
    c.instance = instance.map(|v| serde_json::from_value(v).expect("bundled smoke instances parse"));
    c.params = row(params);
    c
}

pub(super) fn catalog() -> Vec<ExperimentInfo> {
    let cycle = json!({ "kind": "cycle", "n": 6 });
    let walk = json!({ "kind": "walk", "graph": cycle });
    vec![
        ExperimentInfo {
            name: "markov-type",
            description: "exact or sampled type ratios K(t) of a chain mapped into a metric space",
            needs: &["chain", "space or vector map"],
            params: vec![
                p("p", json!(2.0), "moment exponent"),
                p("t_max", json!(64), "largest time (or give an explicit list `t`)"),
                p("mode", json!("exact"), "exact | montecarlo"),
                p("trials", json!(10_000), "Monte Carlo trajectories"),
                p("certificate", json!(null), "constant to compare K(t) with; 4 sqrt(p-1) for l_p vector maps"),
                p("q", json!(null), "also report t^(-p/q) E_t/E_1"),
            ],
            smoke: smoke(
                "markov-type",
                Some(json!({ "chain": walk, "map": { "kind": "vectors", "p": 3.0,
                    "values": [[0, 0], [1, 0], [1, 1], [0, 1], [-1, 1], [-1, 0]] } })),
                json!({ "t_max": 8 }),
            ),
        },
        ExperimentInfo {
            name: "spectral",
            description: "spectral bound E|x_Zt - x_Z0|^2 <= Lambda(t) E|x_Z1 - x_Z0|^2 on the line",
            needs: &["chain", "real map"],
            params: vec![p("t", json!([1]), "time grid (or `t_max`)")],
            smoke: smoke(
                "spectral",
                Some(json!({ "chain": { "kind": "flip" }, "map": { "kind": "real", "values": [0.0, 1.0] } })),
                json!({}),
            ),
        },
        ExperimentInfo {
            name: "martingale",
            description: "forward/backward martingale decomposition and the smoothness inequalities",
            needs: &["chain", "vector map (except two-point checks)"],
            params: vec![
                p("check", json!("identity"), "identity | bound | pisier | smooth2pt | convex2pt"),
                p("t", json!(20), "horizon of the transcripts"),
                p("trials", json!(10), "transcripts, Monte Carlo trajectories or random pairs"),
                p("q", json!(2.0), "moment exponent for `bound`"),
                p("norm_p", json!(null), "l_p norm of the target (defaults to the map's p)"),
                p("p", json!(null), "l_p exponent for two-point checks"),
            ],
            smoke: smoke(
                "martingale",
                Some(json!({ "chain": walk, "map": { "kind": "vectors", "p": 2.0,
                    "values": [[0, 0, 1], [1, 0, 0], [1, 1, 0], [0, 1, 2], [-1, 1, 0], [-1, 0, 1]] } })),
                json!({ "check": "identity", "t": 10, "trials": 3 }),
            ),
        },
        ExperimentInfo {
            name: "hyperbolicity",
            description: "smallest delta for which the four-point Gromov condition holds",
            needs: &["space"],
            params: vec![p("report_witness", json!(true), "include the extremal quadruple")],
            smoke: smoke("hyperbolicity", Some(json!({ "space": { "kind": "graph", "graph": { "kind": "cycle", "n": 4 } } })), json!({})),
        },
        ExperimentInfo {
            name: "hyp-type-check",
            description: "E d^2 <= C^2 t E_1 + C^2 delta^2 (ln t)^2 for maps into hyperbolic spaces",
            needs: &["chain", "space"],
            params: vec![
                p("C", json!(30.0), "constant"),
                p("delta", json!(null), "hyperbolicity constant (computed when absent)"),
                p("t_max", json!(64), "largest time"),
            ],
            smoke: smoke(
                "hyp-type-check",
                Some(json!({ "chain": walk, "space": { "kind": "graph", "graph": { "kind": "path", "n": 6 } } })),
                json!({ "t_max": 8 }),
            ),
        },
        ExperimentInfo {
            name: "tree-lowerbound",
            description: "deep binary tree walk against 3(1-2n/(h+1))n - 8 sqrt(3n), with the Pitman moment table",
            needs: &[],
            params: vec![
                p("h", json!(5000), "tree height"),
                p("n", json!(100), "walk length"),
                p("trials", json!(200_000), "trajectories"),
            ],
            smoke: smoke("tree-lowerbound", None, json!({ "h": 200, "n": 10, "trials": 2000 })),
        },
        ExperimentInfo {
            name: "laakso",
            description: "sampled type ratio of the standard walk on a Laakso graph, and path-lemma witnesses",
            needs: &[],
            params: vec![
                p("level", json!(2), "Laakso level"),
                p("t_max", json!(16), "largest time"),
                p("trials", json!(2000), "Monte Carlo trajectories"),
                p("walks", json!(200), "walks checked for path-lemma witnesses"),
                p("bound", json!(3003.0), "allowed E d^2(t) / (t E_1)"),
            ],
            smoke: smoke("laakso", None, json!({ "level": 1, "t_max": 4, "trials": 200, "walks": 20 })),
        },
        ExperimentInfo {
            name: "extend-tree",
            description: "Lipschitz extension of a partial map into a weighted tree",
            needs: &["space, tree, subset, phi (or none for a random instance)"],
            params: vec![
                p("L", json!(null), "Lipschitz constant of phi"),
                p("index", json!(0), "random instance index when no instance is given"),
            ],
            smoke: smoke("extend-tree", None, json!({ "index": 3 })),
        },
        ExperimentInfo {
            name: "net-coloring",
            description: "R-net, 16R-separated coloring and the distance-to-class family audit",
            needs: &["space"],
            params: vec![p("R", json!(2.0), "net scale")],
            smoke: smoke(
                "net-coloring",
                Some(json!({ "space": { "kind": "graph", "graph": { "kind": "grid", "rows": 6, "cols": 6 } } })),
                json!({ "R": 1.0 }),
            ),
        },
        ExperimentInfo {
            name: "glue",
            description: "bump-function gluing of identity charts on a subset of l_p",
            needs: &["lp space"],
            params: vec![p("eps", json!(1.0), "scale"), p("D", json!(1.0), "chart distortion")],
            smoke: smoke(
                "glue",
                Some(json!({ "space": { "kind": "lp", "p": 2.0,
                    "points": [[0.0], [0.3], [0.9], [1.4], [2.0], [2.2], [3.1], [4.0]] } })),
                json!({ "eps": 1.0 }),
            ),
        },
        ExperimentInfo {
            name: "cube",
            description: "exact and sampled moments of the Hamming cube walk, and the distortion lower bound",
            needs: &[],
            params: vec![
                p("d", json!(10), "dimension"),
                p("t_max", json!(10), "largest time"),
                p("trials", json!(20_000), "Monte Carlo trajectories"),
                p("p", json!(4.0), "target L_p (p > 2) for the distortion bound"),
            ],
            smoke: smoke("cube", None, json!({ "d": 4, "t_max": 3, "trials": 2000 })),
        },
        ExperimentInfo {
            name: "paper-suite",
            description: "every acceptance criterion in sequence",
            needs: &[],
            params: vec![p("criteria", json!(null), "subset of criterion ids (default: all)")],
            smoke: smoke("paper-suite", None, json!({ "criteria": [10, 11] })),
        },
    ]
}


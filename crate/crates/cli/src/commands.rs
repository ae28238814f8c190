use std::path::{Path, PathBuf};

use nuretract::colored::h_embed;
use nuretract::format::{parse, parse_with_templates, serialize_colored, serialize_graph};
use nuretract::generate::random_embeddable_colored;
use nuretract::graph::{bipartition, classify};
use nuretract::hom::find_retraction;
use nuretract::nu::{
    bandelt_3nu_criterion, check_lemma2, check_orientation_invariance, find_nu_polymorphism_capped, interval, theorem1_forward,
};
use nuretract::obstruction::{
    absolute_retract_check, critical_tree_obstructions, elementary_obstructions_bipartite, elementary_obstructions_directed,
    enumerate_h_trees, verify_duality, ArVerdict, DualityStatus, LeafColors,
};
use nuretract::report::{
    certify_ar, certify_duality, certify_forward, certify_interval, certify_lemma2, recheck_report, InputDigest, Recheck,
};
use nuretract::{canonical_template, find_homomorphism, Certificate, ColoredGraph, Digraph, RunReport, RunStatus, Vertex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{Command, VerifyTarget};

pub struct Context {
    pub inputs: Vec<InputDigest>,
    pub seed: u64,
    pub leaf_colors: LeafColors,
}

type Outcome = Result<RunReport, String>;

impl Context {
    fn read(&mut self, path: &Path) -> Result<String, String> {
        let bytes = std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        self.inputs.push(InputDigest { path: path.display().to_string(), sha256: hex::encode(Sha256::digest(&bytes)) });
        String::from_utf8(bytes).map_err(|_| format!("{} is not UTF-8", path.display()))
    }

    /// The single graph block of a `.hg` file.
    fn graph(&mut self, path: &Path) -> Result<Digraph, String> {
        let text = self.read(path)?;
        let file = parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let mut graphs = file.graphs();
        match (graphs.next(), graphs.next()) {
            (Some(g), None) => Ok(g.clone()),
            _ => Err(format!("{}: expected exactly one graph block", path.display())),
        }
    }

    /// Every colored block of a `.hcg` file, which may reference `template`.
    fn colored(&mut self, path: &Path, template: &Digraph) -> Result<Vec<ColoredGraph>, String> {
        let text = self.read(path)?;
        let file = parse_with_templates(&text, std::slice::from_ref(template)).map_err(|e| format!("{}: {e}", path.display()))?;
        let mut out = Vec::new();
        for (name, g) in file.colored() {
            if g.template_n() != template.n() {
                return Err(format!("{}: block `{}` is colored over `{name}`, not `{}`", path.display(), g.name(), template.name()));
            }
            out.push(g.clone());
        }
        if out.is_empty() {
            return Err(format!("{}: no colored block", path.display()));
        }
        Ok(out)
    }
}

fn core(e: nuretract::Error) -> String {
    e.to_string()
}

fn value(x: impl serde::Serialize) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn numbers(text: &str, sep: char) -> Result<Vec<usize>, String> {
    text.split(sep).map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad number `{t}` in `{text}`"))).collect()
}

/// Parses `h:g` pairs into a map indexed by template vertex.
fn parse_embedding(text: &str, h: &Digraph) -> Result<Vec<Vertex>, String> {
    let mut map = vec![None; h.n()];
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let pair = numbers(part, ':')?;
        let [a, b] = pair[..] else { return Err(format!("expected `h:g`, found `{part}`")) };
        let slot = map.get_mut(a).ok_or_else(|| format!("template vertex {a} out of range"))?;
        if slot.replace(b).is_some() {
            return Err(format!("template vertex {a} mapped twice"));
        }
    }
    map.into_iter().enumerate().map(|(a, b)| b.ok_or_else(|| format!("template vertex {a} is not mapped"))).collect()
}

fn found(ok: bool) -> RunStatus {
    if ok {
        RunStatus::Found
    } else {
        RunStatus::NotFound
    }
}

fn holds(ok: bool) -> RunStatus {
    if ok {
        RunStatus::Holds
    } else {
        RunStatus::Fails
    }
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<(), String> {
    if let Some(p) = path {
        std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display()))?;
    }
    Ok(())
}

pub fn run(command: &Command, ctx: &mut Context, argv: Vec<String>) -> Outcome {
    match command {
        Command::Hom { x, template } => {
            let h = ctx.graph(template)?;
            let xs = ctx.colored(x, &h)?;
            let target = canonical_template(&h);
            let mut certificates = Vec::new();
            let mut results = Vec::new();
            for g in &xs {
                let out = find_homomorphism(g, &target).map_err(core)?;
                certificates.push(Certificate::from_search(format!("{} to {}", g.name(), h.name()), g, &target, &out));
                results.push(json!({ "x": g.name(), "found": out.is_found(), "witness": out.witness, "stats": out.stats }));
            }
            let all = results.iter().all(|r| r["found"] == true);
            let summary =
                format!("{} of {} structures map to {}^c", results.iter().filter(|r| r["found"] == true).count(), xs.len(), h.name());
            let mut r = RunReport::new(argv, found(all), summary);
            r.result = Value::Array(results);
            r.certificates = certificates;
            Ok(r)
        }
        Command::Retract { g, h, embed } => {
            let (g, h) = (ctx.graph(g)?, ctx.graph(h)?);
            let embedding = parse_embedding(embed, &h)?;
            let out = find_retraction(&g, &h, &embedding).map_err(core)?;
            let host = nuretract::colored::embed_as_colored(&g, &h, &embedding).map_err(core)?;
            let summary = match &out.witness {
                Some(w) => format!("{} retracts onto {}: {:?}", g.name(), h.name(), w.assignment),
                None => format!("no retraction of {} onto {}", g.name(), h.name()),
            };
            let mut r = RunReport::new(argv, found(out.is_found()), summary);
            r.certificates.push(Certificate::from_search("retraction", &host, &canonical_template(&h), &out));
            r.result = value(&out);
            Ok(r)
        }
        Command::Nu { h, arity, cap } => {
            let h = ctx.graph(h)?;
            let search = find_nu_polymorphism_capped(&h, *arity, *cap).map_err(core)?;
            let summary = format!(
                "{}-NU polymorphism of {}: {} ({} instance vertices)",
                arity,
                h.name(),
                if search.witness.is_some() { "found" } else { "none" },
                search.instance_vertices
            );
            let mut r = RunReport::new(argv, found(search.witness.is_some()), summary);
            r.bounds.insert("arity".into(), json!(arity));
            r.bounds.insert("cap".into(), json!(cap));
            if let Some(w) = &search.witness {
                r.certificates.push(Certificate::NuPolymorphism { label: "nu polymorphism".into(), base: h.clone(), witness: w.clone() });
            }
            r.result = json!({ "instance_vertices": search.instance_vertices, "stats": search.stats, "witness": search.witness });
            Ok(r)
        }
        Command::Interval { h, pair } => {
            let h = ctx.graph(h)?;
            let [u, v] = numbers(pair, ',')?[..] else { return Err(format!("expected `u,v`, found `{pair}`")) };
            let span = interval(&h, u, v).map_err(core)?;
            let mut r = RunReport::new(argv, RunStatus::Holds, format!("I({u},{v}) = {span:?}"));
            r.result = json!({ "pair": [u, v], "interval": span });
            Ok(r)
        }
        Command::Bandelt { h } => {
            let h = ctx.graph(h)?;
            let report = bandelt_3nu_criterion(&h).map_err(core)?;
            let summary = match (report.violating_pair, &report.violating_neighbors) {
                (Some((u, v)), Some(n)) => format!("criterion fails at ({u},{v}); neighbors {n:?} share no vertex in the interval"),
                _ => format!("criterion holds over {} pairs", report.pairs_checked),
            };
            let mut r = RunReport::new(argv, holds(report.holds), summary);
            r.certificates = certify_interval(&h, &report);
            r.result = value(&report);
            Ok(r)
        }
        Command::Embed { g, h, output } => {
            let h = ctx.graph(h)?;
            let gs = ctx.colored(g, &h)?;
            let [g] = &gs[..] else { return Err("expected exactly one colored block".into()) };
            let e = h_embed(g, &h).map_err(core)?;
            let text = serialize_graph(&e.graph);
            write_output(output, &text)?;
            let summary = format!("{} has {} vertices, template on 0..{}", e.graph.name(), e.graph.n(), h.n());
            let mut r = RunReport::new(argv, RunStatus::Found, summary);
            r.result = json!({ "graph": text, "embedding": e.embedding, "uncolored": e.uncolored });
            Ok(r)
        }
        Command::Obstructions { h, directed, max_length, output } => {
            let h = ctx.graph(h)?;
            let family = if h.is_symmetric() && !directed {
                elementary_obstructions_bipartite(&h, *max_length).map_err(core)?
            } else {
                elementary_obstructions_directed(&h).map_err(core)?
            };
            let text: Vec<String> =
                family.iter().enumerate().map(|(i, e)| serialize_colored(h.name(), &e.graph.clone().renamed(format!("o{i}")))).collect();
            write_output(output, &text.join("\n"))?;
            let mut r = RunReport::new(argv, RunStatus::Holds, format!("{} elementary obstructions", family.len()));
            if h.is_symmetric() && !directed {
                r.bounds.insert("max_length".into(), json!(max_length));
            }
            r.result = family.iter().zip(&text).map(|(e, t)| json!({ "kind": e.kind, "graph": t })).collect();
            Ok(r)
        }
        Command::Trees { h, bounds, critical, output } => {
            let h = ctx.graph(h)?;
            let trees = if *critical {
                critical_tree_obstructions(&h, bounds.max_leaves, bounds.max_vertices, ctx.leaf_colors)
            } else {
                enumerate_h_trees(&h, bounds.max_leaves, bounds.max_vertices, ctx.leaf_colors)
            }
            .map_err(core)?;
            let text: Vec<String> =
                trees.iter().enumerate().map(|(i, t)| serialize_colored(h.name(), &t.tree.clone().renamed(format!("t{i}")))).collect();
            write_output(output, &text.join("\n"))?;
            let mut r = RunReport::new(argv, RunStatus::Holds, format!("{} trees", trees.len()));
            r.bounds.insert("max_leaves".into(), json!(bounds.max_leaves));
            r.bounds.insert("max_vertices".into(), json!(bounds.max_vertices));
            r.bounds.insert("leaf_colors".into(), value(ctx.leaf_colors));
            r.result = json!(text);
            Ok(r)
        }
        Command::Duality { h, family, max_x, loops } => {
            let h = ctx.graph(h)?;
            let members = ctx.colored(family, &h)?;
            let report = verify_duality(&h, &members, *max_x, *loops).map_err(core)?;
            let status = match report.status {
                DualityStatus::Complete => RunStatus::Complete,
                DualityStatus::IncompleteWithinBounds => RunStatus::Incomplete,
                DualityStatus::Violated => RunStatus::Violated,
            };
            let summary = format!(
                "{:?} over {} structures, {} discrepancies",
                report.status,
                report.bounds.structures_checked,
                report.discrepancies.len()
            );
            let mut r = RunReport::new(argv, status, summary);
            r.bounds.insert("max_x_vertices".into(), json!(max_x));
            r.bounds.insert("loops".into(), json!(loops));
            r.certificates = certify_duality(&h, &members, &report);
            r.result = value(&report);
            Ok(r)
        }
        Command::Archeck { g, h, embed, bounds } => {
            let (g, h) = (ctx.graph(g)?, ctx.graph(h)?);
            let embedding = parse_embedding(embed, &h)?;
            let report =
                absolute_retract_check(&g, &h, &embedding, bounds.max_leaves, bounds.max_vertices, ctx.leaf_colors).map_err(core)?;
            let status = match report.verdict {
                ArVerdict::Retract => RunStatus::Holds,
                ArVerdict::HypothesisFails => RunStatus::Fails,
                ArVerdict::CandidateCounterexample => RunStatus::Incomplete,
                ArVerdict::Violated => RunStatus::Violated,
            };
            let summary = format!(
                "{:?}: {} tree obstructions checked, {} map into the host",
                report.verdict,
                report.tree_obstructions_checked,
                report.failures.len()
            );
            let mut r = RunReport::new(argv, status, summary);
            r.bounds.insert("max_leaves".into(), json!(bounds.max_leaves));
            r.bounds.insert("max_vertices".into(), json!(bounds.max_vertices));
            r.bounds.insert("leaf_colors".into(), value(ctx.leaf_colors));
            r.certificates = certify_ar(&report);
            r.result = value(&report);
            Ok(r)
        }
        Command::Verify { what, fixtures, count, arity, cap } => verify(ctx, argv, *what, fixtures, *count, arity, *cap),
        Command::Recheck { report } => {
            let text = ctx.read(report)?;
            let parsed: RunReport = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", report.display()))?;
            let outcomes = recheck_report(&parsed);
            let failed = outcomes.iter().filter(|(_, o)| o.is_failure()).count();
            let skipped = outcomes.iter().filter(|(_, o)| matches!(o, Recheck::Skipped(_))).count();
            let summary = format!("{} certificates: {failed} failed, {skipped} skipped", outcomes.len());
            let mut r = RunReport::new(argv, holds(failed == 0), summary);
            r.result = outcomes.into_iter().map(|(label, o)| json!({ "label": label, "recheck": o })).collect();
            Ok(r)
        }
    }
}

fn fixture_graphs(ctx: &mut Context, dir: &Path) -> Result<Vec<Digraph>, String> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| format!("cannot read {}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "hg"))
        .collect();
    paths.sort();
    paths.iter().map(|p| ctx.graph(p)).collect()
}

fn connected_bipartite(h: &Digraph) -> bool {
    h.is_symmetric() && bipartition(h).is_ok() && classify(h).connected
}

fn verify(ctx: &mut Context, argv: Vec<String>, what: VerifyTarget, dir: &Path, count: usize, arities: &[usize], cap: usize) -> Outcome {
    let fixtures = fixture_graphs(ctx, dir)?;
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    let mut certificates = Vec::new();
    let mut disagreements = 0;
    match what {
        VerifyTarget::Lemma2 => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            for h in fixtures.iter() {
                if !h.is_symmetric() {
                    skipped.push(json!({ "fixture": h.name(), "reason": "directed" }));
                    continue;
                }
                let mut positive = 0;
                for _ in 0..count {
                    let g = random_embeddable_colored(h, &mut rng, 7);
                    let report = check_lemma2(&g, h).map_err(core)?;
                    positive += report.homomorphism.is_found() as usize;
                    if !report.agrees() {
                        disagreements += 1;
                        certificates.extend(certify_lemma2(&report).map_err(core)?);
                    }
                }
                rows.push(json!({ "fixture": h.name(), "instances": count, "positive": positive }));
            }
        }
        VerifyTarget::Lemma3 => {
            for h in fixtures.iter() {
                if !connected_bipartite(h) {
                    skipped.push(json!({ "fixture": h.name(), "reason": "not connected bipartite" }));
                    continue;
                }
                for &m in arities {
                    match check_orientation_invariance(h, m, cap) {
                        Ok(report) => {
                            disagreements += !report.agrees() as usize;
                            for (side, w) in [("undirected", &report.undirected), ("from_a", &report.from_a), ("from_b", &report.from_b)] {
                                if let Some(w) = w {
                                    let base = match side {
                                        "from_a" => report.oriented_a.clone(),
                                        "from_b" => report.oriented_b.clone(),
                                        _ => h.clone(),
                                    };
                                    certificates.push(Certificate::NuPolymorphism {
                                        label: format!("{} m={m} {side}", h.name()),
                                        base,
                                        witness: w.clone(),
                                    });
                                }
                            }
                            rows.push(json!({
                                "fixture": h.name(), "arity": m, "agrees": report.agrees(),
                                "undirected": report.undirected.is_some(), "from_a": report.from_a.is_some(), "from_b": report.from_b.is_some(),
                            }));
                        }
                        Err(nuretract::Error::SizeCapExceeded { required, cap }) => {
                            skipped.push(json!({ "fixture": h.name(), "arity": m, "reason": format!("needs {required} > cap {cap}") }));
                        }
                        Err(e) => return Err(format!("{}: {e}", h.name())),
                    }
                }
            }
        }
        VerifyTarget::Theorem1Forward => {
            for h in fixtures.iter() {
                if !connected_bipartite(h) {
                    skipped.push(json!({ "fixture": h.name(), "reason": "not connected bipartite" }));
                    continue;
                }
                for &m in arities {
                    let nu = match find_nu_polymorphism_capped(h, m, cap) {
                        Ok(s) => s.witness.is_some(),
                        Err(nuretract::Error::SizeCapExceeded { required, cap }) => {
                            skipped.push(json!({ "fixture": h.name(), "arity": m, "reason": format!("needs {required} > cap {cap}") }));
                            continue;
                        }
                        Err(e) => return Err(format!("{}: {e}", h.name())),
                    };
                    let report = theorem1_forward(h, m, cap).map_err(core)?;
                    let retracts = report.retraction.is_found();
                    disagreements += (nu != retracts) as usize;
                    certificates.extend(certify_forward(h, &report).map_err(core)?);
                    rows.push(json!({ "fixture": h.name(), "arity": m, "nu": nu, "retraction": retracts, "embed_vertices": report.embed.graph.n() }));
                }
            }
        }
    }
    let status = if disagreements == 0 { RunStatus::Holds } else { RunStatus::Violated };
    let mut r = RunReport::new(argv, status, format!("{} checks, {disagreements} disagreements, {} skipped", rows.len(), skipped.len()));
    r.bounds.insert("seed".into(), json!(ctx.seed));
    r.bounds.insert("cap".into(), json!(cap));
    r.result = json!({ "checks": rows, "skipped": skipped });
    r.certificates = certificates;
    Ok(r)
}

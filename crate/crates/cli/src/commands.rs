use std::collections::BTreeMap;

use costshare::bc::{detect_bc, generate_witness, BcEmbedding, BcOutcome, DetectOptions};
use costshare::classes::{self, classify_efficiency, Efficiency};
use costshare::enforce::{check_enforceable, emit_protocol, CostShares, LpModel};
use costshare::forests::{optimal_forests, price_of_stability, PathCatalog, SteinerForest};
use costshare::graph::DotStyle;
use costshare::instance::GraphDocument;
use costshare::shares::{compute_ordering, is_pushed_left, maximize_for_player2, push_left, EdgeOrdering};
use costshare::{rational, Error, Graph, Instance, Player, Terminals};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::load::{load, parse_rational, Loaded};
use crate::render::render;
use crate::{selftest, CliError, Cli, Command, Format, Global, Source, SCHEMA_VERSION};

/// What the process prints and its exit status.
#[derive(Debug)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let g = &cli.global;
    let done = |value: Value| -> Result<Output, CliError> {
        Ok(Output {
            stdout: render(&with_version(value), g.format),
            code: 0,
        })
    };
    match &cli.command {
        Command::Opt { source } => done(opt(g, source)?),
        Command::Enforce {
            source,
            forest,
            protocol,
        } => done(enforce(g, source, forest, *protocol)?),
        Command::Shares { source, forest, pl, max2 } => done(shares(g, source, forest, *pl, *max2)?),
        Command::DetectBc { source, no_prefilter } => done(detect(g, source, !no_prefilter)?),
        Command::Witness { source } => Ok(Output {
            stdout: witness(g, source)?.to_json() + "\n",
            code: 0,
        }),
        Command::Pos { source } => done(pos(g, source)?),
        Command::Classify { source, samples } => done(classify(g, source, *samples)?),
        Command::Gen { family, arg, x, eps } => Ok(Output {
            stdout: generate(family, arg, x, eps)? + "\n",
            code: 0,
        }),
        Command::Selftest { quick, only } => {
            let scale = if *quick { selftest::Scale::Quick } else { selftest::Scale::Full };
            let ids: Vec<usize> = only.clone().unwrap_or_else(|| selftest::CRITERIA.to_vec());
            let results = selftest::run_criteria(&ids, scale);
            let code = if results.iter().all(|r| r.passed) { 0 } else { 3 };
            let stdout = match g.format {
                Format::Text => selftest::table(&results),
                Format::Json => render(&with_version(json!({ "criteria": results })), Format::Json),
            };
            Ok(Output { stdout, code })
        }
    }
}

fn with_version(mut value: Value) -> Value {
    if let Value::Object(map) = &mut value {
        map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    }
    value
}

fn names(inst: &Instance, f: &SteinerForest) -> Vec<String> {
    f.edge_names(inst)
}

fn write_dot(g: &Global, graph: &Graph, style: &DotStyle) -> Result<(), CliError> {
    if let Some(path) = &g.dot {
        std::fs::write(path, graph.to_dot(style)).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(())
}

/// `OPT` picks the first optimal forest; anything else is a list of edge ids.
fn select_forest(g: &Global, inst: &Instance, spec: &str) -> Result<(SteinerForest, Option<usize>), CliError> {
    if spec.eq_ignore_ascii_case("opt") {
        let (_, mut all) = optimal_forests(inst, g.path_cap)?;
        let count = all.len();
        return Ok((all.remove(0), Some(count)));
    }
    let edges = spec
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|name| {
            inst.graph()
                .find_edge(name)
                .ok_or_else(|| Error::invalid("--forest", format!("unknown edge {name:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((SteinerForest::from_edges(inst, &edges)?, None))
}

fn opt(g: &Global, source: &Source) -> Result<Value, CliError> {
    let inst = load(source)?.instance()?;
    let (cost, all) = optimal_forests(&inst, g.path_cap)?;
    write_dot(g, inst.graph(), &DotStyle::highlight(&all[0].edges))?;
    Ok(json!({
        "min_cost": rational::format(&cost),
        "count": all.len(),
        "forests": all.iter().map(|f| names(&inst, f)).collect::<Vec<_>>(),
    }))
}

fn pos(g: &Global, source: &Source) -> Result<Value, CliError> {
    let inst = load(source)?.instance()?;
    let r = price_of_stability(&inst, g.path_cap)?;
    write_dot(g, inst.graph(), &DotStyle::highlight(&r.best_enforceable.edges))?;
    Ok(json!({
        "pos": rational::format(&r.pos),
        "min_cost": rational::format(&r.optimal_cost),
        "best_enforceable_cost": rational::format(&r.best_cost),
        "count": r.tied.len(),
        "forests": r.tied.iter().map(|f| names(&inst, f)).collect::<Vec<_>>(),
    }))
}

fn share_style(inst: &Instance, f: &SteinerForest, shares: &CostShares) -> DotStyle {
    let mut style = DotStyle::highlight(&f.edges);
    for &e in &f.edges {
        let label = Player::BOTH
            .iter()
            .filter(|p| f.path(**p).contains_edge(e))
            .map(|&p| format!("ξ{}={}", p.number(), rational::format(&shares.get(p, e))))
            .collect::<Vec<_>>()
            .join(" ");
        style.edge_labels.insert(e, format!("c={} {label}", rational::format(inst.cost(e))));
    }
    style
}

fn enforce(g: &Global, source: &Source, spec: &str, protocol: bool) -> Result<Value, CliError> {
    let inst = load(source)?.instance()?;
    let (f, opt_count) = select_forest(g, &inst, spec)?;
    let r = check_enforceable(&inst, &f, g.path_cap)?;
    write_dot(g, inst.graph(), &share_style(&inst, &f, &r.shares))?;
    let mut out = json!({
        "forest": names(&inst, &f),
        "forest_cost": rational::format(&r.forest_cost),
        "lp_optimum": rational::format(&r.lp_optimum),
        "enforceable": r.enforceable,
        "unpaid_edges": r.unpaid_edges.iter().map(|(e, d)| json!({
            "edge": inst.graph().edge_name(*e),
            "deficit": rational::format(d),
        })).collect::<Vec<_>>(),
        "shares": r.shares.to_records(&inst),
    });
    if let Some(count) = opt_count {
        out["opt_count"] = json!(count);
    }
    if protocol {
        // Only a budget-balanced share vector defines a protocol.
        out["protocol"] = if r.enforceable {
            json!(emit_protocol(&inst, &f, &r.shares)?.to_records(&inst))
        } else {
            Value::Null
        };
    }
    Ok(out)
}

fn ordering_json(inst: &Instance, ord: &EdgeOrdering) -> Value {
    json!({
        "edges": ord.edges.iter().map(|&e| inst.graph().edge_name(e)).collect::<Vec<_>>(),
        "l1": ord.l1,
        "l2": ord.l2,
        "m": ord.m,
        "r1": ord.r1,
        "r2": ord.r2,
        "p2_reversed": ord.p2_reversed,
    })
}

fn shares(g: &Global, source: &Source, spec: &str, pl: bool, max2: bool) -> Result<Value, CliError> {
    let inst = load(source)?.instance()?;
    let (f, _) = select_forest(g, &inst, spec)?;
    let catalog = PathCatalog::new(&inst, g.path_cap)?;
    let model = LpModel::new(&inst, &f, &catalog);
    let ord = compute_ordering(&f);
    let mut extra = serde_json::Map::new();
    let (mode, xi) = if max2 {
        let r = maximize_for_player2(&inst, &model)?;
        extra.insert(
            "first_unpaid".into(),
            json!(r.first_unpaid.map(|k| inst.graph().edge_name(r.ordering.edges[k]))),
        );
        extra.insert("case_r".into(), json!(r.case_r));
        extra.insert("two_m".into(), json!(r.two_m));
        extra.insert("nc".into(), json!(r.nc));
        extra.insert("vacuous".into(), json!(r.vacuous));
        extra.insert("changes".into(), json!(r.changes));
        ("max2", r.shares)
    } else {
        let (_, lex) = model.lexicographic_optimum()?;
        if pl {
            ("pushed-left", push_left(&model, &ord, &lex)?)
        } else {
            ("lexicographic", lex)
        }
    };
    write_dot(g, inst.graph(), &share_style(&inst, &f, &xi))?;
    let mut out = json!({
        "forest": names(&inst, &f),
        "mode": mode,
        "objective": rational::format(&xi.sum()),
        "totals": {
            "1": rational::format(&xi.total(Player::One)),
            "2": rational::format(&xi.total(Player::Two)),
        },
        "shares": xi.to_records(&inst),
        "ordering": ordering_json(&inst, &ord),
        "pushed_left": is_pushed_left(&model, &ord, &xi)?.is_none(),
    });
    out.as_object_mut().unwrap().extend(extra);
    Ok(out)
}

const SLOT_COLOURS: [&str; 8] = ["red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan"];

fn embedding_style(g: &Graph, emb: &BcEmbedding) -> DotStyle {
    let pattern = emb.pattern();
    let mut style = DotStyle::default();
    for (k, (slot, image)) in pattern.slots.iter().zip(&emb.slots).enumerate() {
        for &e in &image.path.edges {
            style.edge_colours.insert(e, SLOT_COLOURS[k % SLOT_COLOURS.len()].to_string());
            let kind = if slot.solid { "solid" } else { "dashed" };
            style.edge_labels.insert(e, format!("{} ({kind})", slot.name));
        }
    }
    let report = emb.to_report(g);
    let mut labels: BTreeMap<_, Vec<String>> = BTreeMap::new();
    for (node, v) in &emb.nodes {
        labels.entry(*v).or_default().push(node.clone());
    }
    for (role, vertex) in &report.roles {
        if let Some(v) = g.find_vertex(vertex) {
            labels.entry(v).or_default().push(format!("[{role}]"));
        }
    }
    style.vertex_labels = labels.into_iter().map(|(v, l)| (v, l.join(" "))).collect();
    style
}

fn detect_options(g: &Global, prefilters: bool) -> DetectOptions {
    DetectOptions {
        search_cap: g.search_cap,
        prefilters,
    }
}

fn detect(g: &Global, source: &Source, prefilters: bool) -> Result<Value, CliError> {
    let loaded = load(source)?;
    let t = loaded.require_terminals()?;
    match detect_bc(&loaded.graph, &t, &detect_options(g, prefilters))? {
        BcOutcome::None(reason) => Ok(json!({ "result": "none", "prefilter": reason.name() })),
        BcOutcome::Found(emb) => {
            write_dot(g, &loaded.graph, &embedding_style(&loaded.graph, &emb))?;
            Ok(json!({
                "result": "found",
                "pattern": emb.kind.name(),
                "embedding": emb.to_report(&loaded.graph),
            }))
        }
    }
}

/// The witness must leave every optimal forest unenforceable; anything else
/// is reported as a consistency failure.
fn witness(g: &Global, source: &Source) -> Result<Instance, CliError> {
    let loaded = load(source)?;
    let t = loaded.require_terminals()?;
    let emb = match detect_bc(&loaded.graph, &t, &detect_options(g, true))? {
        BcOutcome::Found(emb) => emb,
        BcOutcome::None(reason) => {
            return Err(CliError::Usage(format!(
                "no Bad Configuration ({}); the graph is efficient for these terminals",
                reason.name()
            )))
        }
    };
    let inst = generate_witness(&emb, &loaded.graph, &t)?;
    write_dot(g, inst.graph(), &embedding_style(inst.graph(), &emb))?;
    let (_, optima) = optimal_forests(&inst, g.path_cap)?;
    for f in &optima {
        if check_enforceable(&inst, f, g.path_cap)?.enforceable {
            return Err(Error::Consistency(format!("{} witness has an enforceable optimum", emb.kind)).into());
        }
    }
    Ok(inst)
}

fn efficiency_json(loaded: &Loaded, t: &Terminals, e: &Efficiency) -> Value {
    let g = &loaded.graph;
    let terminals = [t.s1, t.t1, t.s2, t.t2].map(|v| g.vertex_name(v).to_string());
    match e {
        Efficiency::Efficient(reason) => json!({
            "result": "efficient",
            "reason": reason.name(),
            "terminals": terminals,
        }),
        Efficiency::NotEfficient(emb) => json!({
            "result": "not-efficient",
            "pattern": emb.kind.name(),
            "terminals": terminals,
            "embedding": emb.to_report(g),
        }),
        Efficiency::Unknown(cap) => json!({
            "result": "unknown",
            "search_cap": cap,
            "terminals": terminals,
        }),
    }
}

fn classify(g: &Global, source: &Source, samples: usize) -> Result<Value, CliError> {
    let loaded = load(source)?;
    let opts = detect_options(g, true);
    if let Some(t) = loaded.terminals {
        let e = classify_efficiency(&loaded.graph, &t, &opts)?;
        if let Efficiency::NotEfficient(emb) = &e {
            write_dot(g, &loaded.graph, &embedding_style(&loaded.graph, emb))?;
        }
        return Ok(efficiency_json(&loaded, &t, &e));
    }
    let n = loaded.graph.vertex_count();
    if n < 2 {
        return Err(Error::invalid("vertices", "need at least two vertices to place terminals").into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let (mut not_efficient, mut unknown) = (0, 0);
    let mut certificate = Value::Null;
    for _ in 0..samples {
        let t = classes::random_terminals(&mut rng, n, n >= 4);
        let e = classify_efficiency(&loaded.graph, &t, &opts)?;
        match &e {
            Efficiency::Efficient(_) => continue,
            Efficiency::NotEfficient(emb) => {
                if not_efficient == 0 {
                    write_dot(g, &loaded.graph, &embedding_style(&loaded.graph, emb))?;
                }
                not_efficient += 1;
            }
            Efficiency::Unknown(_) => unknown += 1,
        }
        if certificate.is_null() {
            certificate = efficiency_json(&loaded, &t, &e);
        }
    }
    let result = if not_efficient > 0 {
        "not-efficient"
    } else if unknown > 0 {
        "unknown"
    } else {
        "efficient"
    };
    Ok(json!({
        "result": result,
        "samples": samples,
        "seed": g.seed,
        "not_efficient": not_efficient,
        "unknown": unknown,
        "first_certificate": certificate,
    }))
}

fn generate(family: &str, arg: &str, x: &str, eps: &str) -> Result<String, CliError> {
    if family == "fixture" {
        if let Some((f, n)) = classes::parse_family_id(arg) {
            return Ok(GraphDocument::graph_to_json(&f.generate(n)?));
        }
        let params = classes::FixtureParams {
            x: parse_rational("--x", x)?,
            eps: parse_rational("--eps", eps)?,
        };
        return Ok(classes::fixture(arg, &params)?.to_json());
    }
    let f = classes::Family::parse(family).ok_or_else(|| Error::BadParameter(format!("unknown family {family:?}")))?;
    let n: usize = arg
        .parse()
        .map_err(|_| Error::BadParameter(format!("size {arg:?} is not a number")))?;
    Ok(GraphDocument::graph_to_json(&f.generate(n)?))
}

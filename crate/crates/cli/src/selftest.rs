//! The acceptance criteria as runnable checks. Each criterion returns a
//! verdict with a short detail line; samples are seeded so runs repeat.

use std::time::Instant;

use costshare::bc::{detect_bc, generate_witness, search_kind, BcKind, BcOutcome, BcPattern, Budget, DetectOptions, DEFAULT_SEARCH_CAP};
use costshare::classes::{self, classify_efficiency, Efficiency, Family, FixtureParams};
use costshare::enforce::{check_enforceable, emit_protocol, enumerate_pne, shapley_protocol, verify_pne, LpModel};
use costshare::forests::{enumerate_forests, optimal_forests, price_of_stability, PathCatalog, SteinerForest};
use costshare::graph::DEFAULT_PATH_CAP;
use costshare::lp::{self, LinearProgram, LpStatus};
use costshare::shares::{change_feasible, compute_ordering, is_pushed_left, maximize_for_player2, push_left};
use costshare::{rational, Instance, Player, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const CRITERIA: [usize; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

const CAP: usize = DEFAULT_PATH_CAP;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    /// The sample sizes the criteria call for.
    Full,
    /// Reduced samples for a smoke run.
    Quick,
}

impl Scale {
    fn pick(self, full: usize, quick: usize) -> usize {
        match self {
            Scale::Full => full,
            Scale::Quick => quick,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub limit_seconds: f64,
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core<T>(r: costshare::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

pub fn title(id: usize) -> (&'static str, f64) {
    match id {
        1 => ("fig1bc1: OPT 22, LP 21, reference shares optimal", 5.0),
        2 => ("PoS lower bound (15x+8)/(14x+8) for x in 1,2,10", 10.0),
        3 => ("witness tables for the nine BC types", 30.0),
        4 => ("fig1: Shapley PNE 4+eps, reference protocol enforces OPT", 2.0),
        5 => ("soundness on random 7-9 vertex graphs", 600.0),
        6 => ("no BC on connected graphs with at most 6 vertices", 600.0),
        7 => ("class verdicts: wheels, fans, series-parallel, fixtures", 300.0),
        8 => ("push_left and maximize_for_player2 properties", 300.0),
        9 => ("simplex matches vertex enumeration", 60.0),
        _ => ("unknown criterion", 0.0),
    }
}

pub fn run_criterion(id: usize, scale: Scale) -> Verdict {
    let (title, limit_seconds) = title(id);
    let start = Instant::now();
    let outcome: Check = match id {
        1 => fig1bc1_check(),
        2 => pos_lower_bound(),
        3 => witness_tables(),
        4 => fig1_check(),
        5 => soundness(scale),
        6 => small_graphs(scale),
        7 => class_verdicts(scale),
        8 => transforms(scale),
        9 => solver_oracle(scale),
        _ => Err(format!("no criterion {id}")),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, mut detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if passed && seconds > limit_seconds {
        passed = false;
        detail = format!("{detail}; took {seconds:.1}s over the {limit_seconds}s limit");
    }
    Verdict {
        id,
        title,
        passed,
        detail,
        seconds,
        limit_seconds,
    }
}

pub fn run_criteria(ids: &[usize], scale: Scale) -> Vec<Verdict> {
    ids.iter().map(|&id| run_criterion(id, scale)).collect()
}

pub fn table(results: &[Verdict]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&format!(
            "{} {:>2}  {:<56} {:>7.2}s  {}\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.title,
            r.seconds,
            r.detail
        ));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    out.push_str(&format!("{} passed, {failed} failed\n", results.len() - failed));
    out
}

fn unique_opt(inst: &Instance) -> Result<(Rational, SteinerForest), String> {
    let (cost, mut all) = core(optimal_forests(inst, CAP))?;
    ensure(all.len() == 1, || format!("{} optimal forests", all.len()))?;
    Ok((cost, all.remove(0)))
}

fn fig1bc1_check() -> Check {
    let inst = core(classes::fig1bc1())?;
    let (cost, f) = unique_opt(&inst)?;
    ensure(cost == rational::int(22), || format!("OPT costs {cost}"))?;
    let r = core(check_enforceable(&inst, &f, CAP))?;
    ensure(r.lp_optimum == rational::int(21), || format!("LP optimum {}", r.lp_optimum))?;
    ensure(!r.enforceable, || "OPT reported enforceable".into())?;
    let model = LpModel::new(&inst, &f, &core(PathCatalog::new(&inst, CAP))?);
    let xi = classes::fig1bc1_reference_shares(&inst);
    ensure(model.is_feasible(&xi), || "reference shares infeasible".into())?;
    ensure(xi.sum() == r.lp_optimum, || format!("reference shares sum to {}", xi.sum()))?;
    let totals = (xi.total(Player::One), xi.total(Player::Two));
    ensure(totals == (rational::int(9), rational::int(12)), || format!("reference totals {totals:?}"))?;
    Ok("OPT 22 unique, LP 21, reference shares 9+12 feasible".into())
}

fn pos_lower_bound() -> Check {
    for x in [1, 2, 10] {
        let xr = rational::int(x);
        let inst = core(classes::pos_lower_bound(&xr))?;
        let r = core(price_of_stability(&inst, CAP))?;
        let lin = |a: i64, b: i64| rational::int(a * x + b);
        ensure(r.optimal_cost == lin(14, 8), || format!("x={x}: OPT {}", r.optimal_cost))?;
        ensure(r.best_cost == lin(15, 8), || format!("x={x}: best enforceable {}", r.best_cost))?;
        ensure(r.pos == lin(15, 8) / lin(14, 8), || format!("x={x}: pos {}", r.pos))?;
        let witness = classes::pos_witness_edges(&inst);
        ensure(r.tied.iter().any(|f| f.edges == witness), || format!("x={x}: witness forest not among the cheapest enforceable"))?;
        let f = core(SteinerForest::from_edges(&inst, &witness))?;
        ensure(core(check_enforceable(&inst, &f, CAP))?.enforceable, || format!("x={x}: witness not enforceable"))?;
    }
    Ok("pos 23/22, 19/18, 79/74".into())
}

fn witness_tables() -> Check {
    for kind in BcKind::ALL {
        let (g, t) = core(BcPattern::get(kind).minimal_graph())?;
        let emb = core(search_kind(&g, &t, kind, &mut Budget::new(DEFAULT_SEARCH_CAP)))?
            .ok_or_else(|| format!("{kind}: not found in its own minimal graph"))?;
        let inst = core(generate_witness(&emb, &g, &t))?;
        let (cost, f) = unique_opt(&inst).map_err(|e| format!("{kind}: {e}"))?;
        let displayed = !matches!(kind, BcKind::Bc2b | BcKind::Bc2d | BcKind::Bc4b);
        if displayed {
            ensure(cost == rational::int(kind.witness_opt()), || format!("{kind}: OPT {cost}"))?;
        }
        let r = core(check_enforceable(&inst, &f, CAP))?;
        ensure(!r.enforceable, || format!("{kind}: OPT enforceable"))?;
        if displayed {
            let bound = rational::int(kind.witness_opt() - 1);
            ensure(r.lp_optimum <= bound, || format!("{kind}: LP optimum {}", r.lp_optimum))?;
        } else {
            let pos = core(price_of_stability(&inst, CAP))?.pos;
            ensure(pos > rational::one(), || format!("{kind}: pos {pos}"))?;
        }
    }
    Ok("nine witnesses: unique OPT, not enforceable".into())
}

fn fig1_check() -> Check {
    let params = FixtureParams::default();
    let eps = params.eps.clone();
    let inst = core(classes::fixture("fig1-shapley", &params))?;
    let (cost, f) = unique_opt(&inst)?;
    let shapley = shapley_protocol(&inst);
    ensure(!core(verify_pne(&inst, &f, &shapley, CAP))?, || "OPT is a Shapley PNE".into())?;
    let pne = core(enumerate_pne(&inst, &shapley, CAP))?;
    ensure(pne.len() == 1, || format!("{} Shapley PNE", pne.len()))?;
    let four = rational::int(4) + &eps;
    ensure(pne[0].social_cost == four, || format!("PNE costs {}", pne[0].social_cost))?;
    let ratio = &pne[0].social_cost / &cost;
    let expected = &four / (rational::int(3) + rational::int(2) * &eps);
    ensure(ratio == expected, || format!("ratio {ratio}"))?;
    let protocol = core(emit_protocol(&inst, &f, &classes::fig1_reference_shares(&inst)))?;
    ensure(core(verify_pne(&inst, &f, &protocol, CAP))?, || "reference protocol does not enforce OPT".into())?;
    ensure(core(check_enforceable(&inst, &f, CAP))?.enforceable, || "OPT not enforceable".into())?;
    Ok(format!("Shapley PNE ratio {}", rational::format(&ratio)))
}

fn soundness(scale: Scale) -> Check {
    let graphs = scale.pick(100, 12);
    let cost_samples = scale.pick(25, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut found, mut none) = (0, 0);
    for k in 0..graphs {
        let n = rng.gen_range(7..=9);
        let density = rng.gen_range(0.2..0.45);
        let g = core(classes::random_connected_graph(&mut rng, n, density))?;
        // Mostly four distinct terminals; the rest may share vertices.
        let distinct = rng.gen_bool(0.75);
        let t = classes::random_terminals(&mut rng, n, distinct);
        match core(detect_bc(&g, &t, &DetectOptions::default()))? {
            BcOutcome::Found(emb) => {
                found += 1;
                let inst = core(generate_witness(&emb, &g, &t))?;
                let pos = core(price_of_stability(&inst, CAP))?.pos;
                ensure(pos > rational::one(), || format!("graph {k}: {} witness has pos {pos}", emb.kind))?;
            }
            BcOutcome::None(_) => {
                none += 1;
                for _ in 0..cost_samples {
                    let inst = core(Instance::new(g.clone(), t, classes::random_costs(&mut rng, g.edge_count())))?;
                    let pos = core(price_of_stability(&inst, CAP))?.pos;
                    ensure(pos == rational::one(), || format!("graph {k}: no BC but pos {pos} under costs {:?}", inst.costs()))?;
                }
            }
        }
    }
    Ok(format!("{found} graphs with a BC (pos > 1), {none} without (pos = 1)"))
}

fn small_graphs(scale: Scale) -> Check {
    let labelings = scale.pick(50, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let opts = DetectOptions {
        prefilters: false,
        ..DetectOptions::default()
    };
    let mut checked = 0;
    // A single vertex admits no terminal pair.
    for n in 2..=6 {
        for g in classes::connected_graphs_up_to_iso(n) {
            for _ in 0..labelings {
                let t = classes::random_terminals(&mut rng, n, n >= 4);
                if let BcOutcome::Found(emb) = core(detect_bc(&g, &t, &opts))? {
                    return Err(format!("{} found on {n} vertices, {} edges", emb.kind, g.edge_count()));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} labelled graphs searched, none has a BC"))
}

fn efficient(g: &costshare::Graph, t: &costshare::Terminals) -> Result<bool, String> {
    Ok(matches!(core(classify_efficiency(g, t, &DetectOptions::default()))?, Efficiency::Efficient(_)))
}

fn class_verdicts(scale: Scale) -> Check {
    let samples = scale.pick(200, 10);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for family in [Family::Wheel, Family::Fan] {
        for n in 3..=9 {
            let g = core(family.generate(n))?;
            for _ in 0..samples {
                let t = classes::random_terminals(&mut rng, g.vertex_count(), true);
                ensure(efficient(&g, &t)?, || format!("{}{n} not efficient for {t:?}", family.name()))?;
                checked += 1;
            }
        }
    }
    for _ in 0..scale.pick(100, 10) {
        let steps = rng.gen_range(4..=12);
        let g = core(classes::random_series_parallel(&mut rng, steps))?;
        let t = classes::random_terminals(&mut rng, g.vertex_count(), true);
        ensure(efficient(&g, &t)?, || "series-parallel graph not efficient".into())?;
        checked += 1;
    }
    for inst in [core(classes::bipartite_bc1a())?, core(classes::planar_bc1a())?] {
        match core(classify_efficiency(inst.graph(), &inst.terminals(), &DetectOptions::default()))? {
            Efficiency::NotEfficient(emb) if emb.kind == BcKind::Bc1a => {}
            other => return Err(format!("fixture classified {other:?}")),
        }
    }
    Ok(format!("{checked} efficient verdicts, both fixtures BC1a"))
}

fn transforms(scale: Scale) -> Check {
    let instances = scale.pick(30, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut with_middle = 0;
    for k in 0..instances {
        let n = rng.gen_range(5..=8);
        let g = core(classes::random_connected_graph(&mut rng, n, 0.35))?;
        let t = classes::random_terminals(&mut rng, n, true);
        let inst = core(Instance::new(g.clone(), t, classes::random_costs(&mut rng, g.edge_count())))?;
        // The forest with the longest shared middle, cheapest first on ties.
        let forests = core(enumerate_forests(&inst, CAP))?;
        let f = forests.iter().rev().max_by_key(|f| compute_ordering(f).m).unwrap();
        let model = LpModel::new(&inst, f, &core(PathCatalog::new(&inst, CAP))?);
        let ord = compute_ordering(f);
        let (sol, lex) = core(model.lexicographic_optimum())?;
        let pushed = core(push_left(&model, &ord, &lex))?;
        ensure(pushed.sum() == sol.objective, || format!("instance {k}: push_left changed the objective"))?;
        ensure(core(is_pushed_left(&model, &ord, &pushed))?.is_none(), || format!("instance {k}: output not pushed left"))?;
        ensure(core(push_left(&model, &ord, &pushed))? == pushed, || format!("instance {k}: push_left not idempotent"))?;
        let r = core(maximize_for_player2(&inst, &model))?;
        ensure(r.two_m, || format!("instance {k}: (2M) fails"))?;
        let middle = r.ordering.middle();
        for i in middle.clone() {
            for j in middle.start..i {
                let (feasible, _) = core(change_feasible(&model, &r.ordering, &r.shares, j, i))?;
                ensure(!feasible, || format!("instance {k}: CHANGE({j},{i}) still feasible"))?;
            }
        }
        ensure(r.nc, || format!("instance {k}: (NC) flag false"))?;
        let cap = f.edges.len().pow(2);
        ensure(r.changes <= cap, || format!("instance {k}: {} changes over the cap {cap}", r.changes))?;
        if ord.m > 1 {
            with_middle += 1;
        }
    }
    Ok(format!("{instances} instances, {with_middle} with a shared middle of 2+ edges"))
}

fn solver_oracle(scale: Scale) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let count = scale.pick(50, 10);
    let mut infeasible = 0;
    for k in 0..count {
        let n = rng.gen_range(1..=4);
        let mut lp = LinearProgram::maximize((0..n).map(|_| rational::int(rng.gen_range(-3..=6))).collect());
        for _ in 0..rng.gen_range(1..=6) {
            let row: Vec<Rational> = (0..n).map(|_| rational::int(rng.gen_range(-2..=5))).collect();
            let rhs = rational::int(rng.gen_range(0..=12));
            if rng.gen_bool(0.25) {
                lp.add_ge(row, rhs);
            } else {
                lp.add_le(row, rhs);
            }
        }
        lp.add_le(vec![rational::one(); n], rational::int(20));
        let sol = lp::solve(&lp);
        let expected = costshare_oracle::lp_vertex_enumeration(&lp);
        match (&sol.status, expected) {
            (LpStatus::Optimal, Some(v)) => {
                ensure(sol.objective == v, || format!("LP {k}: simplex {} vs oracle {v}", sol.objective))?;
                ensure(lp.is_feasible(&sol.values), || format!("LP {k}: simplex point infeasible"))?;
            }
            (LpStatus::Infeasible, None) => infeasible += 1,
            (status, v) => return Err(format!("LP {k}: simplex {status:?} vs oracle {v:?}")),
        }
    }
    Ok(format!("{count} LPs agree ({infeasible} infeasible)"))
}

use std::collections::BTreeSet;

use costshare::bc::{detect_bc, BcKind, BcOutcome, BcPattern, DetectOptions};
use costshare::classes::{random_connected_graph, random_costs, random_series_parallel, random_terminals};
use costshare::enforce::{check_enforceable, verify_pne, LpModel, PlayerSet, SeparableProtocol};
use costshare::forests::{enumerate_forests, price_of_stability, PathCatalog};
use costshare::graph::{
    enumerate_simple_paths, has_cycle_of_length_at_least, has_k4_minor, is_forest, longest_cycle_length, Graph, VertexId,
    DEFAULT_CYCLE_CAP, DEFAULT_PATH_CAP,
};
use costshare::lp::{self, LinearProgram};
use costshare::shares::{compute_ordering, is_pushed_left, maximize_for_player2, missing_tight_alternatives, push_left};
use costshare::{rational, Instance, Player, Rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: usize = DEFAULT_PATH_CAP;

fn instance(seed: u64, n: usize, density: f64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_connected_graph(&mut rng, n, density).unwrap();
    let t = random_terminals(&mut rng, n, false);
    let c = random_costs(&mut rng, g.edge_count());
    Instance::new(g, t, c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn paths_are_simple_and_distinct(seed: u64, n in 2usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_connected_graph(&mut rng, n, 0.4).unwrap();
        let paths = enumerate_simple_paths(&g, VertexId(0), VertexId(n - 1), CAP).unwrap();
        let distinct: BTreeSet<_> = paths.iter().map(|p| p.edges.clone()).collect();
        prop_assert_eq!(distinct.len(), paths.len());
        for p in &paths {
            prop_assert!(p.is_valid_in(&g));
            prop_assert_eq!((p.source(), p.target()), (VertexId(0), VertexId(n - 1)));
        }
    }

    #[test]
    fn cycle_length_is_zero_exactly_on_forests(seed: u64, n in 2usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_connected_graph(&mut rng, n, 0.2).unwrap();
        let all: Vec<_> = g.edge_ids().collect();
        let len = longest_cycle_length(&g, DEFAULT_CYCLE_CAP).unwrap();
        if is_forest(&all, &g) {
            prop_assert_eq!(len, 0);
        } else {
            prop_assert!(len >= 3);
        }
    }

    #[test]
    fn subdividing_an_edge_keeps_k4_minor_status(seed: u64, n in 4usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_connected_graph(&mut rng, n, 0.5).unwrap();
        let k = rng.gen_range(0..g.edge_count());
        let mut pairs: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u.0, e.v.0)).collect();
        let (a, b) = pairs[k];
        pairs[k] = (a, n);
        pairs.push((n, b));
        let h = Graph::from_pairs(n + 1, &pairs).unwrap();
        prop_assert_eq!(has_k4_minor(&g), has_k4_minor(&h));
    }

    #[test]
    fn forests_satisfy_their_invariants(seed: u64, n in 3usize..8) {
        let inst = instance(seed, n, 0.3);
        let t = inst.terminals();
        for f in enumerate_forests(&inst, CAP).unwrap() {
            prop_assert!(is_forest(&f.edges, inst.graph()));
            let mut union: Vec<_> = f.p1.edges.iter().chain(&f.p2.edges).copied().collect();
            union.sort();
            union.dedup();
            prop_assert_eq!(&union, &f.edges);
            prop_assert_eq!((f.p1.source(), f.p1.target()), (t.s1, t.t1));
            prop_assert_eq!((f.p2.source(), f.p2.target()), (t.s2, t.t2));
            prop_assert_eq!(&f.cost, &inst.total_cost(&f.edges));
        }
    }

    #[test]
    fn enforce_report_is_consistent(seed: u64, n in 3usize..7) {
        let inst = instance(seed, n, 0.35);
        for f in enumerate_forests(&inst, CAP).unwrap().into_iter().take(5) {
            let r = check_enforceable(&inst, &f, CAP).unwrap();
            prop_assert!(r.lp_optimum <= f.cost);
            prop_assert_eq!(r.shares.sum(), r.lp_optimum.clone());
            prop_assert!(r.shares.is_nonnegative());
            prop_assert_eq!(r.enforceable, r.unpaid_edges.is_empty());
            prop_assert_eq!(r.enforceable, r.lp_optimum == f.cost);
        }
    }

    #[test]
    fn dropping_a_deviation_row_never_lowers_the_optimum(seed: u64, n in 3usize..7) {
        let inst = instance(seed, n, 0.35);
        let catalog = PathCatalog::new(&inst, CAP).unwrap();
        let f = enumerate_forests(&inst, CAP).unwrap().remove(0);
        let mut model = LpModel::new(&inst, &f, &catalog);
        let before = model.optimum();
        if !model.deviations.is_empty() {
            let k = (seed as usize) % model.deviations.len();
            model.deviations.remove(k);
            prop_assert!(model.optimum() >= before);
        }
    }

    #[test]
    fn nash_tables_induce_feasible_balanced_shares(seed: u64, n in 3usize..6) {
        let inst = instance(seed, n, 0.35);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let f = enumerate_forests(&inst, CAP).unwrap().remove(0);
        let table = random_budget_balanced_table(&inst, &mut rng);
        if verify_pne(&inst, &f, &table, CAP).unwrap() {
            let model = LpModel::new(&inst, &f, &PathCatalog::new(&inst, CAP).unwrap());
            let mut xi = costshare::enforce::CostShares::new();
            for p in Player::BOTH {
                for &e in &f.path(p).edges {
                    xi.set(p, e, table.share(e, PlayerSet::of(&f.users(e)), p));
                }
            }
            prop_assert!(model.is_feasible(&xi));
            for &e in &f.edges {
                prop_assert_eq!(&xi.edge_total(e), inst.cost(e));
            }
        }
    }

    #[test]
    fn pos_is_at_least_one(seed: u64, n in 3usize..7) {
        let inst = instance(seed, n, 0.35);
        let r = price_of_stability(&inst, CAP).unwrap();
        prop_assert!(r.pos >= rational::one());
    }

    #[test]
    fn instance_json_round_trips(seed: u64, n in 2usize..8) {
        let inst = instance(seed, n, 0.3);
        let text = inst.to_json();
        let back = Instance::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        prop_assert_eq!(back.costs(), inst.costs());
    }

    #[test]
    fn rationals_round_trip(p in -10_000i64..10_000, q in 1i64..500) {
        let r = rational::frac(p, q);
        prop_assert_eq!(rational::parse(&rational::format(&r)).unwrap(), r);
    }

    #[test]
    fn lexicographic_solution_is_optimal_for_both_objectives(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=4);
        let mut lp = LinearProgram::maximize((0..n).map(|_| rational::int(rng.gen_range(0..=3))).collect());
        for _ in 0..rng.gen_range(1..=5) {
            lp.add_le((0..n).map(|_| rational::int(rng.gen_range(0..=4))).collect(), rational::int(rng.gen_range(0..=9)));
        }
        lp.add_le(vec![rational::one(); n], rational::int(10));
        let secondary: Vec<Rational> = (0..n).map(|_| rational::int(rng.gen_range(-2..=2))).collect();
        let plain = lp::solve(&lp);
        let lex = lp::solve_lexicographic(&lp, &secondary);
        prop_assert_eq!(&plain.objective, &lex.objective);
        let mut face = lp.clone();
        face.add_eq(lp.objective.clone(), plain.objective.clone());
        face.objective = secondary.clone();
        let best = lp::solve(&face).objective;
        let got: Rational = secondary.iter().zip(&lex.values).map(|(a, b)| a * b).sum();
        prop_assert_eq!(got, best);
    }
}

fn random_budget_balanced_table(inst: &Instance, rng: &mut ChaCha8Rng) -> SeparableProtocol {
    let mut table = SeparableProtocol::default();
    for e in inst.graph().edge_ids() {
        let c = inst.cost(e).clone();
        table.set(e, PlayerSet::of(&[Player::One]), [c.clone(), rational::zero()]);
        table.set(e, PlayerSet::of(&[Player::Two]), [rational::zero(), c.clone()]);
        let split = rational::frac(rng.gen_range(0..=4), 4);
        let first = &c * &split;
        table.set(e, PlayerSet::ALL[3], [first.clone(), c - first]);
    }
    table
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn push_left_preserves_optimum_and_is_idempotent(seed: u64, n in 4usize..8) {
        let inst = instance(seed, n, 0.35);
        let catalog = PathCatalog::new(&inst, CAP).unwrap();
        let f = enumerate_forests(&inst, CAP).unwrap().remove(0);
        let model = LpModel::new(&inst, &f, &catalog);
        let ord = compute_ordering(&f);
        let (sol, lex) = model.lexicographic_optimum().unwrap();
        let pushed = push_left(&model, &ord, &lex).unwrap();
        prop_assert_eq!(pushed.sum(), sol.objective);
        prop_assert!(model.is_feasible(&pushed));
        prop_assert_eq!(is_pushed_left(&model, &ord, &pushed).unwrap(), None);
        prop_assert_eq!(push_left(&model, &ord, &pushed).unwrap(), pushed.clone());
        for p in Player::BOTH {
            let mut before = Rational::from_integer(0.into());
            let mut after = before.clone();
            for k in ord.positions(p) {
                let e = ord.edges[k];
                before += lex.get(p, e);
                after += pushed.get(p, e);
                prop_assert!(after >= before);
            }
        }
    }

    #[test]
    fn ordering_is_a_bijection_with_monotone_segments(seed: u64, n in 3usize..8) {
        let inst = instance(seed, n, 0.3);
        for f in enumerate_forests(&inst, CAP).unwrap().into_iter().take(6) {
            let ord = compute_ordering(&f);
            let mut sorted = ord.edges.clone();
            sorted.sort();
            prop_assert_eq!(&sorted, &f.edges);
            prop_assert_eq!(ord.l1 + ord.l2 + ord.m + ord.r1 + ord.r2, f.edges.len());
            for p in Player::BOTH {
                let path = if p == Player::Two && ord.p2_reversed { f.p2.reversed() } else { f.path(p).clone() };
                let along: Vec<_> = ord.positions(p).into_iter().map(|k| ord.edges[k]).collect();
                prop_assert_eq!(along, path.edges.clone());
            }
        }
    }

    #[test]
    fn maximized_for_player_two_has_2m_and_nc(seed: u64, n in 4usize..8) {
        let inst = instance(seed, n, 0.35);
        let catalog = PathCatalog::new(&inst, CAP).unwrap();
        for f in enumerate_forests(&inst, CAP).unwrap().into_iter().take(3) {
            let model = LpModel::new(&inst, &f, &catalog);
            let r = maximize_for_player2(&inst, &model).unwrap();
            prop_assert!(r.two_m);
            prop_assert!(r.nc);
            prop_assert!(r.changes <= f.edges.len().pow(2));
            prop_assert!(missing_tight_alternatives(&inst, &model, &r.ordering, &r.shares).is_empty());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    #[test]
    fn prefilters_never_hide_an_embedding(seed: u64, n in 7usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_connected_graph(&mut rng, n, 0.3).unwrap();
        let t = random_terminals(&mut rng, n, true);
        let unfiltered = DetectOptions { prefilters: false, ..DetectOptions::default() };
        let found = detect_bc(&g, &t, &unfiltered).unwrap();
        if matches!(found, BcOutcome::Found(_)) {
            prop_assert_eq!(costshare::bc::prefilter(&g), None);
        }
    }

    #[test]
    fn series_parallel_graphs_have_no_bc(seed: u64, steps in 5usize..14) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_series_parallel(&mut rng, steps).unwrap();
        prop_assert!(!has_k4_minor(&g));
        let t = random_terminals(&mut rng, g.vertex_count(), true);
        let unfiltered = DetectOptions { prefilters: false, ..DetectOptions::default() };
        prop_assert!(matches!(detect_bc(&g, &t, &unfiltered).unwrap(), BcOutcome::None(_)));
    }
}

#[test]
fn pattern_constants() {
    for kind in BcKind::ALL {
        let (g, _) = BcPattern::get(kind).minimal_graph().unwrap();
        assert!(g.vertex_count() >= 7, "{kind}");
        assert!(g.edge_count() >= 9, "{kind}");
        assert!(has_cycle_of_length_at_least(&g, 7, DEFAULT_CYCLE_CAP).unwrap(), "{kind}");
        assert!(has_k4_minor(&g), "{kind}");
    }
}

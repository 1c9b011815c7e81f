//! Library results against the brute-force references in `costshare-oracle`.

use costshare::classes::{self, random_connected_graph, random_costs, random_terminals};
use costshare::enforce::{check_enforceable, emit_protocol, LpModel};
use costshare::forests::{enumerate_forests, optimal_forests, PathCatalog};
use costshare::graph::{enumerate_simple_paths, has_k4_minor, longest_cycle_length, Graph, VertexId, DEFAULT_CYCLE_CAP, DEFAULT_PATH_CAP};
use costshare::lp::{self, LinearProgram, LpStatus};
use costshare::shares::{change_feasible, compute_ordering, max_step, push_left};
use costshare::{rational, Instance, Player, Rational};
use costshare_oracle as oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: usize = DEFAULT_PATH_CAP;

fn random_instance(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Instance {
    let g = random_connected_graph(rng, n, density).unwrap();
    let t = random_terminals(rng, n, false);
    let c = random_costs(rng, g.edge_count());
    Instance::new(g, t, c).unwrap()
}

#[test]
fn simple_paths_match_recursive_dfs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let n = rng.gen_range(2..=8);
        let g = random_connected_graph(&mut rng, n, 0.35).unwrap();
        let (s, t) = (VertexId(rng.gen_range(0..n)), VertexId(rng.gen_range(0..n)));
        let ours: Vec<Vec<_>> = enumerate_simple_paths(&g, s, t, CAP).unwrap().into_iter().map(|p| p.edges).collect();
        let theirs: Vec<Vec<_>> = oracle::dfs_paths(&g, s, t).into_iter().collect();
        assert_eq!(ours, theirs);
    }
}

#[test]
fn fig1bc1_player_two_path_count() {
    let inst = classes::fig1bc1().unwrap();
    let t = inst.terminals();
    let ours = enumerate_simple_paths(inst.graph(), t.s2, t.t2, CAP).unwrap().len();
    assert_eq!(ours, oracle::dfs_paths(inst.graph(), t.s2, t.t2).len());
}

#[test]
fn longest_cycle_matches_subset_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..40 {
        let n = rng.gen_range(3..=7);
        let g = random_connected_graph(&mut rng, n, 0.3).unwrap();
        if g.edge_count() > 16 {
            continue;
        }
        assert_eq!(longest_cycle_length(&g, DEFAULT_CYCLE_CAP).unwrap(), oracle::longest_cycle_brute(&g));
    }
    let w5 = classes::Family::Wheel.generate(5).unwrap();
    assert_eq!(oracle::longest_cycle_brute(&w5), 6);
    assert_eq!(longest_cycle_length(&w5, DEFAULT_CYCLE_CAP).unwrap(), 6);
}

#[test]
fn k4_minor_matches_branch_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let n = rng.gen_range(4..=7);
        let density = rng.gen_range(0.1..0.6);
        let g = random_connected_graph(&mut rng, n, density).unwrap();
        assert_eq!(has_k4_minor(&g), oracle::has_k4_minor_brute(&g), "{g:?}");
    }
    let w5 = classes::Family::Wheel.generate(5).unwrap();
    assert!(oracle::has_k4_minor_brute(&w5));
}

fn random_lp(rng: &mut ChaCha8Rng) -> LinearProgram {
    let n = rng.gen_range(1..=5);
    let m = rng.gen_range(1..=8);
    let mut lp = LinearProgram::maximize((0..n).map(|_| rational::int(rng.gen_range(-3..=6))).collect());
    for _ in 0..m {
        let row = (0..n).map(|_| rational::int(rng.gen_range(-2..=5))).collect();
        lp.add_le(row, rational::int(rng.gen_range(0..=12)));
    }
    // A box keeps every instance bounded.
    lp.add_le(vec![rational::one(); n], rational::int(20));
    lp
}

#[test]
fn simplex_matches_vertex_enumeration_and_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..50 {
        let lp = random_lp(&mut rng);
        let sol = lp::solve(&lp);
        let oracle_opt = oracle::lp_vertex_enumeration(&lp);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(Some(sol.objective.clone()), oracle_opt);
        assert!(lp.is_feasible(&sol.values));
        assert_eq!(lp.tight_set(&sol.values), sol.tight);
        let dual = lp::solve(&oracle::dual(&lp));
        assert_eq!(dual.status, LpStatus::Optimal);
        assert_eq!(-dual.objective, sol.objective);
    }
}

#[test]
fn fig1bc1_player_two_maximum_by_duality() {
    let inst = classes::fig1bc1().unwrap();
    let (_, opt) = optimal_forests(&inst, CAP).unwrap();
    let model = LpModel::new(&inst, &opt[0], &PathCatalog::new(&inst, CAP).unwrap());
    let mut second = model.to_lp();
    let n = model.vars.len();
    second.add_le(vec![-Rational::from_integer(1.into()); n], rational::int(-21));
    second.objective = model.player_two_objective();
    let dual = lp::solve(&oracle::dual(&second));
    assert_eq!(-dual.objective, rational::int(12));
}

#[test]
fn forests_match_subset_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut checked = 0;
    while checked < 30 {
        let n = rng.gen_range(3..=7);
        let inst = random_instance(&mut rng, n, 0.25);
        if inst.graph().edge_count() > 14 {
            continue;
        }
        checked += 1;
        let ours: Vec<_> = enumerate_forests(&inst, CAP).unwrap();
        let theirs = oracle::forests_by_subsets(&inst);
        let mut ours_sets: Vec<_> = ours.iter().map(|f| f.edges.clone()).collect();
        ours_sets.sort();
        assert_eq!(ours_sets, theirs.iter().cloned().collect::<Vec<_>>());
        let min = theirs.iter().map(|f| inst.total_cost(f)).min().unwrap();
        assert_eq!(optimal_forests(&inst, CAP).unwrap().0, min);
    }
    let pos = classes::pos_lower_bound(&rational::one()).unwrap();
    assert_eq!(enumerate_forests(&pos, CAP).unwrap().len(), oracle::forests_by_subsets(&pos).len());
}

#[test]
fn emitted_protocols_pass_best_response() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut checked = 0;
    while checked < 25 {
        let n = rng.gen_range(3..=6);
        let inst = random_instance(&mut rng, n, 0.35);
        for f in enumerate_forests(&inst, CAP).unwrap().into_iter().take(4) {
            let report = check_enforceable(&inst, &f, CAP).unwrap();
            if !report.enforceable {
                continue;
            }
            let protocol = emit_protocol(&inst, &f, &report.shares).unwrap();
            assert!(oracle::is_pne_by_best_response(&inst, &f, &protocol));
            checked += 1;
        }
    }
}

#[test]
fn change_steps_match_bisection_on_fig1bc1() {
    let inst = classes::fig1bc1().unwrap();
    let (_, opt) = optimal_forests(&inst, CAP).unwrap();
    let model = LpModel::new(&inst, &opt[0], &PathCatalog::new(&inst, CAP).unwrap());
    let ord = compute_ordering(&opt[0]);
    let (_, lex) = model.lexicographic_optimum().unwrap();
    let xi = push_left(&model, &ord, &lex).unwrap();
    let mid = ord.middle();
    for i in mid.clone() {
        for j in mid.start..i {
            let (ok, eps) = change_feasible(&model, &ord, &xi, j, i).unwrap();
            let (ej, ei) = (ord.edges[j], ord.edges[i]);
            let dir = [(Player::Two, ei, 1), (Player::One, ej, 1), (Player::Two, ej, -1), (Player::One, ei, -1)];
            let (lo, hi) = oracle::max_step_bisect(&model, &xi, &dir, rational::int(30), 20);
            assert!(lo <= eps && eps <= hi, "({j},{i}): {eps} not in [{lo}, {hi}]");
            assert_eq!(ok, eps > rational::zero());
            assert_eq!(max_step(&model, &xi, &dir).unwrap(), Some(eps));
        }
    }
}

#[test]
fn wheel_without_hub_is_a_cycle() {
    let c = classes::Family::Cycle.generate(6).unwrap();
    assert_eq!(oracle::longest_cycle_brute(&c), 6);
    let p: Graph = classes::Family::Path.generate(5).unwrap();
    assert_eq!(oracle::longest_cycle_brute(&p), 0);
}

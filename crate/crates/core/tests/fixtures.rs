use costshare::classes::{self, FixtureParams};
use costshare::enforce::{check_enforceable, emit_protocol, enumerate_pne, shapley_protocol, verify_pne, LpModel};
use costshare::forests::{enumerate_forests, optimal_forests, price_of_stability, PathCatalog, SteinerForest};
use costshare::graph::{is_forest, DEFAULT_PATH_CAP};
use costshare::shares::{compute_ordering, max_step, is_pushed_left, maximize_for_player2, missing_tight_alternatives, push_left};
use costshare::{rational, Player, Rational};

const CAP: usize = DEFAULT_PATH_CAP;

fn opt(inst: &costshare::Instance) -> SteinerForest {
    let (_, mut all) = optimal_forests(inst, CAP).unwrap();
    assert_eq!(all.len(), 1);
    all.remove(0)
}

#[test]
fn fig1bc1_optimum_and_lp_bound() {
    let inst = classes::fig1bc1().unwrap();
    let (cost, all) = optimal_forests(&inst, CAP).unwrap();
    assert_eq!(cost, rational::int(22));
    assert_eq!(all.len(), 1);
    assert!(is_forest(&all[0].edges, inst.graph()));
    let report = check_enforceable(&inst, &all[0], CAP).unwrap();
    assert_eq!(report.lp_optimum, rational::int(21));
    assert!(!report.enforceable);
    assert_eq!(report.shares.total(Player::Two), rational::int(12));
}

#[test]
fn fig1bc1_forest_counts() {
    let inst = classes::fig1bc1().unwrap();
    assert_eq!(enumerate_forests(&inst, CAP).unwrap().len(), 24);
    let contracted = inst.contract_zero_cost_edges().unwrap();
    assert_eq!(enumerate_forests(&contracted, CAP).unwrap().len(), 19);
}

#[test]
fn fig1bc1_reference_shares_are_optimal_and_pushed_left() {
    let inst = classes::fig1bc1().unwrap();
    let f = opt(&inst);
    let model = LpModel::new(&inst, &f, &PathCatalog::new(&inst, CAP).unwrap());
    let xi = classes::fig1bc1_reference_shares(&inst);
    assert!(model.is_feasible(&xi));
    assert_eq!(xi.sum(), model.optimum());
    let ord = compute_ordering(&f);
    assert_eq!(ord.m, 4);
    assert_eq!(is_pushed_left(&model, &ord, &xi).unwrap(), None);

    // Undo one push: player one moves a unit from n5-v4 to v7-n3.
    let e = |n: &str| inst.graph().find_edge(n).unwrap();
    let mut shifted = xi.clone();
    shifted.set(Player::One, e("n5-v4"), rational::int(1));
    shifted.set(Player::One, e("v7-n3"), rational::int(4));
    assert!(model.is_feasible(&shifted));
    let v = is_pushed_left(&model, &ord, &shifted).unwrap().unwrap();
    assert_eq!((v.player, v.earlier), (Player::One, e("n5-v4")));
    let back = max_step(&model, &shifted, &[(Player::One, e("n5-v4"), 1), (Player::One, e("v7-n3"), -1)]).unwrap();
    assert_eq!(back, Some(rational::one()));
}

#[test]
fn fig1bc1_transforms() {
    let inst = classes::fig1bc1().unwrap();
    let f = opt(&inst);
    let model = LpModel::new(&inst, &f, &PathCatalog::new(&inst, CAP).unwrap());
    let ord = compute_ordering(&f);
    let (_, lex) = model.lexicographic_optimum().unwrap();
    let pushed = push_left(&model, &ord, &lex).unwrap();
    assert_eq!(pushed.sum(), rational::int(21));
    assert_eq!(is_pushed_left(&model, &ord, &pushed).unwrap(), None);
    let report = maximize_for_player2(&inst, &model).unwrap();
    assert!(report.two_m && report.nc);
    assert_eq!(report.shares.total(Player::Two), rational::int(12));
    assert!(missing_tight_alternatives(&inst, &model, &report.ordering, &report.shares).is_empty());
}

#[test]
fn contracted_fig1bc1_is_the_pos_instance_at_one() {
    let contracted = classes::fig1bc1().unwrap().contract_zero_cost_edges().unwrap();
    let pos = classes::pos_lower_bound(&rational::one()).unwrap();
    let mut a: Vec<Rational> = contracted.costs().to_vec();
    let mut b: Vec<Rational> = pos.costs().to_vec();
    a.sort();
    b.sort();
    assert_eq!(a, b);
    assert_eq!(contracted.graph().vertex_count(), pos.graph().vertex_count());
    let ord = compute_ordering(&opt(&contracted));
    assert_eq!(ord.m, 3);
}

#[test]
fn pos_lower_bound_values() {
    for x in [1, 2, 10] {
        let x = rational::int(x);
        let inst = classes::pos_lower_bound(&x).unwrap();
        let r = price_of_stability(&inst, CAP).unwrap();
        let lin = |a: i64, b: i64| rational::int(a) * &x + rational::int(b);
        assert_eq!(r.optimal_cost, lin(14, 8));
        assert_eq!(r.best_cost, lin(15, 8));
        assert_eq!(r.pos, lin(15, 8) / lin(14, 8));
        let witness = classes::pos_witness_edges(&inst);
        assert!(r.tied.iter().any(|f| f.edges == witness));
        let f = SteinerForest::from_edges(&inst, &witness).unwrap();
        assert!(check_enforceable(&inst, &f, CAP).unwrap().enforceable);
    }
    let ten = price_of_stability(&classes::pos_lower_bound(&rational::int(10)).unwrap(), CAP).unwrap();
    assert_eq!(ten.pos, rational::frac(158, 148));
}

#[test]
fn fig1_shapley_and_reference_protocol() {
    let eps = rational::frac(1, 4);
    let inst = classes::fixture("fig1-shapley", &FixtureParams::default()).unwrap();
    let (cost, all) = optimal_forests(&inst, CAP).unwrap();
    assert_eq!(cost, rational::int(3) + rational::int(2) * &eps);
    assert_eq!(all.len(), 1);
    let f = &all[0];
    let shapley = shapley_protocol(&inst);
    assert!(!verify_pne(&inst, f, &shapley, CAP).unwrap());
    let pne = enumerate_pne(&inst, &shapley, CAP).unwrap();
    assert_eq!(pne.len(), 1);
    assert_eq!(pne[0].social_cost, rational::int(4) + &eps);
    assert_eq!(&pne[0].social_cost / &cost, rational::frac(17, 14));

    let xi = classes::fig1_reference_shares(&inst);
    let protocol = emit_protocol(&inst, f, &xi).unwrap();
    assert!(protocol.is_budget_balanced(&inst));
    assert!(verify_pne(&inst, f, &protocol, CAP).unwrap());
    assert!(check_enforceable(&inst, f, CAP).unwrap().enforceable);
    let g = inst.graph();
    let both = costshare::enforce::PlayerSet::ALL[3];
    let label = |name: &str| protocol.share(g.find_edge(name).unwrap(), both, Player::One);
    assert_eq!(label("s-t2"), rational::zero());
    assert_eq!(label("t2-t1"), rational::zero());
    assert_eq!(label("s-t1"), rational::int(2) + &eps);
}

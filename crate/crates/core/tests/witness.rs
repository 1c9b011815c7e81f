use costshare::bc::{generate_witness, search_kind, BcKind, BcPattern, Budget, DEFAULT_SEARCH_CAP};
use costshare::enforce::check_enforceable;
use costshare::forests::{optimal_forests, price_of_stability};
use costshare::graph::DEFAULT_PATH_CAP;
use costshare::rational;

fn witness(kind: BcKind) -> costshare::Instance {
    let (g, t) = BcPattern::get(kind).minimal_graph().unwrap();
    let emb = search_kind(&g, &t, kind, &mut Budget::new(DEFAULT_SEARCH_CAP)).unwrap().unwrap();
    generate_witness(&emb, &g, &t).unwrap()
}

#[test]
fn minimal_witnesses_have_a_unique_unenforceable_optimum() {
    for kind in BcKind::ALL {
        let inst = witness(kind);
        let (cost, opt) = optimal_forests(&inst, DEFAULT_PATH_CAP).unwrap();
        assert_eq!(cost, rational::int(kind.witness_opt()), "{kind}");
        assert_eq!(opt.len(), 1, "{kind}");
        let report = check_enforceable(&inst, &opt[0], DEFAULT_PATH_CAP).unwrap();
        assert!(!report.enforceable, "{kind}");
        assert!(report.lp_optimum <= rational::int(kind.witness_opt() - 1), "{kind}: {}", report.lp_optimum);
        assert!(price_of_stability(&inst, DEFAULT_PATH_CAP).unwrap().pos > rational::one(), "{kind}");
    }
}

#[test]
fn unit_subdivision_keeps_the_optimum_unenforceable() {
    for kind in [BcKind::Bc1a, BcKind::Bc2a] {
        let inst = witness(kind).subdivide_unit().unwrap();
        let (_, opt) = optimal_forests(&inst, DEFAULT_PATH_CAP).unwrap();
        assert_eq!(opt.len(), 1);
        assert!(!check_enforceable(&inst, &opt[0], DEFAULT_PATH_CAP).unwrap().enforceable, "{kind}");
    }
}

#[test]
fn graphs_without_bc_have_pos_one_under_random_costs() {
    use costshare::bc::{detect_bc, BcOutcome, DetectOptions};
    use costshare::classes;
    use rand::{Rng, SeedableRng};

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(444);
    let mut checked = 0;
    for _ in 0..60 {
        let n = rng.gen_range(7..=9);
        let density = rng.gen_range(0.15..0.4);
        let g = classes::random_connected_graph(&mut rng, n, density).unwrap();
        let t = classes::random_terminals(&mut rng, n, true);
        if let BcOutcome::None(_) = detect_bc(&g, &t, &DetectOptions::default()).unwrap() {
            for _ in 0..50 {
                let inst = costshare::Instance::new(g.clone(), t, classes::random_costs(&mut rng, g.edge_count())).unwrap();
                assert_eq!(price_of_stability(&inst, DEFAULT_PATH_CAP).unwrap().pos, rational::one());
            }
            checked += 1;
        }
    }
    assert!(checked >= 20, "only {checked} graphs without a BC");
}

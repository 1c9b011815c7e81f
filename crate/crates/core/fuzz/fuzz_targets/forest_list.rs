#![no_main]

//! Arbitrary edge lists against a fixed instance: `from_edges` either rejects
//! the list or returns a valid forest.

use costshare::classes;
use costshare::forests::SteinerForest;
use costshare::graph::is_forest;
use costshare::EdgeId;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let inst = classes::fig1bc1().unwrap();
    let m = inst.graph().edge_count();
    let edges: Vec<EdgeId> = data.iter().map(|&b| EdgeId(b as usize % (m + 2))).collect();
    if let Ok(f) = SteinerForest::from_edges(&inst, &edges) {
        assert!(is_forest(&f.edges, inst.graph()));
        assert!(f.p1.is_valid_in(inst.graph()) && f.p2.is_valid_in(inst.graph()));
    }
});

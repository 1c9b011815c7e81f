//! Replays the checked-in fuzz corpus through the parser entry points on the
//! stable toolchain, with the same assertions the fuzz targets make.

use std::fs;
use std::path::PathBuf;

use costshare::classes;
use costshare::forests::SteinerForest;
use costshare::graph::is_forest;
use costshare::instance::GraphDocument;
use costshare::{rational, EdgeId, Instance};

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| {
            let path = e.unwrap().path();
            (path.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn instance_json_seeds() {
    let mut accepted = 0;
    for (_, data) in seeds("instance_json") {
        let text = String::from_utf8(data).unwrap();
        if let Ok(inst) = Instance::from_json(&text) {
            assert_eq!(Instance::from_json(&inst.to_json()).unwrap().to_json(), inst.to_json());
            accepted += 1;
        }
    }
    assert_eq!(accepted, 3);
}

#[test]
fn graph_json_seeds() {
    for (name, data) in seeds("graph_json") {
        let text = String::from_utf8(data).unwrap();
        match GraphDocument::from_json(&text) {
            Ok(doc) => {
                let again = GraphDocument::from_json(&GraphDocument::graph_to_json(&doc.graph)).unwrap();
                assert!(again.graph == doc.graph, "{name}");
            }
            Err(_) => assert_eq!(name, "duplicate_vertex.json"),
        }
    }
}

#[test]
fn rational_seeds() {
    let mut rejected = Vec::new();
    for (name, data) in seeds("rational") {
        let text = String::from_utf8(data).unwrap();
        match rational::parse(&text) {
            Ok(r) => assert_eq!(rational::parse(&rational::format(&r)).unwrap(), r, "{name}"),
            Err(_) => rejected.push(name),
        }
    }
    assert_eq!(rejected, ["1d0", "7_d_2", "p5"]);
}

#[test]
fn forest_list_seeds() {
    let inst = classes::fig1bc1().unwrap();
    let m = inst.graph().edge_count();
    let mut accepted = Vec::new();
    for (name, data) in seeds("forest_list") {
        let edges: Vec<EdgeId> = data.iter().map(|&b| EdgeId(b as usize % (m + 2))).collect();
        if let Ok(f) = SteinerForest::from_edges(&inst, &edges) {
            assert!(is_forest(&f.edges, inst.graph()));
            accepted.push(name);
        }
    }
    assert_eq!(accepted, ["opt"]);
}

#![no_main]

use costshare::instance::GraphDocument;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = GraphDocument::from_json(text) {
        assert!(doc.graph.adjacency_consistent());
        let again = GraphDocument::from_json(&GraphDocument::graph_to_json(&doc.graph)).expect("emitted graph reloads");
        assert!(again.graph == doc.graph);
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use uglov::crystal::CrystalGraph;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(graph) = CrystalGraph::from_json(text) {
        let again = CrystalGraph::from_json(&graph.to_json()).expect("own output parses");
        assert_eq!(again, graph);
        let _ = graph.to_dot();
    }
});

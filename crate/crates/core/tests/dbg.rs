//! Scratch diagnostics (not part of the checked invariants).

use recentmatch::{oracle, Index};

#[test]
#[ignore]
fn trace_case() {
    let text = b"abbababaa";
    let mut idx = Index::new();
    for (i, &c) in text.iter().enumerate() {
        let r = idx.extend(c).unwrap();
        let prefix = &text[..=i];
        println!(
            "i={} c={} update={:?} reprupd={} ok={}",
            i,
            c as char,
            r.update_edge.map(|e| String::from_utf8_lossy(&idx.endpoint_string(e)).to_string()),
            r.reprupd_calls,
            oracle::check_repr_property(&idx)
        );
        if !oracle::check_repr_property(&idx) {
            println!("--- edges after {:?}:", String::from_utf8_lossy(prefix));
            for &e in &idx.all_edges() {
                println!(
                    "  edge {:?} end={:?} pos={} lpu={} repr={:?}",
                    e,
                    String::from_utf8_lossy(&idx.endpoint_string(e)),
                    idx.edge_pos(e),
                    idx.last_pos_update_of(e),
                    idx.repr_of_test(e)
                        .map(|f| String::from_utf8_lossy(&idx.endpoint_string(f)).to_string()),
                );
            }
            panic!("violated");
        }
    }
}

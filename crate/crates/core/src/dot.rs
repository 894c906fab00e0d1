//! Graphviz output for graphs and tree types.

use std::fmt::Write;

use crate::graph::Graph;
use crate::moduli::weights::leaves_of;
use crate::moduli::TreeType;

pub fn graph_to_dot(g: &Graph, name: &str) -> String {
    let mut s = format!("graph \"{name}\" {{\n");
    for v in g.vertices() {
        writeln!(s, "  {v};").unwrap();
    }
    for (i, (u, v)) in g.edges().iter().enumerate() {
        writeln!(s, "  {u} -- {v} [label=\"e{i}\"];").unwrap();
    }
    s.push_str("}\n");
    s
}

/// Internal vertices `v0` (the one containing leaf 1), `v1`, …; leaves `l1`, ….
pub fn tree_to_dot(t: &TreeType, name: &str) -> String {
    let splits = t.splits();
    let vs = t.vertices();
    let mut s = format!("graph \"{name}\" {{\n  node [shape=circle];\n");
    for (k, v) in vs.iter().enumerate() {
        writeln!(s, "  v{k} [shape=point];").unwrap();
        for leaf in leaves_of(v.leaves) {
            writeln!(s, "  l{leaf} [label=\"{leaf}\", shape=plaintext];").unwrap();
            writeln!(s, "  v{k} -- l{leaf};").unwrap();
        }
    }
    for (k, sp) in splits.iter().enumerate() {
        let side = sp.side();
        // parent region: the smallest side strictly containing this one, else the root
        let parent = splits
            .iter()
            .enumerate()
            .filter(|(_, o)| o.side() != side && side & !o.side() == 0)
            .min_by_key(|(_, o)| o.side().count_ones())
            .map_or(0, |(j, _)| j + 1);
        writeln!(s, "  v{parent} -- v{};", k + 1).unwrap();
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_dot_has_all_edges() {
        let t = TreeType::parse(5, "[[4,5],[3,4,5]]").unwrap();
        let d = tree_to_dot(&t, "t");
        // 5 leaf edges and 2 bounded edges
        assert_eq!(d.matches(" -- ").count(), 7);
        assert!(d.starts_with("graph \"t\" {") && d.ends_with("}\n"));
    }

    #[test]
    fn graph_dot() {
        let d = graph_to_dot(&Graph::complete([1, 2, 3]), "k3");
        assert_eq!(d.matches(" -- ").count(), 3);
    }
}

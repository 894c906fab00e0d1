//! Chordal and split graph recognition with certificates.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::graph::Graph;

/// Witness for chordality: a perfect elimination ordering, or a chordless cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChordalCertificate {
    EliminationOrder(Vec<i64>),
    ChordlessCycle(Vec<i64>),
}

/// Witness for the split property: a clique and an independent set partitioning the vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitPartition {
    pub clique: Vec<i64>,
    pub independent: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphPredicates {
    pub is_chordal: bool,
    pub is_split: bool,
    pub chordal_certificate: ChordalCertificate,
    pub split_partition: Option<SplitPartition>,
}

pub fn graph_predicates(g: &Graph) -> GraphPredicates {
    let chordal_certificate = chordality(g);
    let split_partition = split_partition(g);
    GraphPredicates {
        is_chordal: matches!(chordal_certificate, ChordalCertificate::EliminationOrder(_)),
        is_split: split_partition.is_some(),
        chordal_certificate,
        split_partition,
    }
}

fn adjacent(g: &Graph, u: i64, v: i64) -> bool {
    g.edge_index(u, v).is_some()
}

/// Maximum cardinality search, reversed.
pub fn mcs_order(g: &Graph) -> Vec<i64> {
    let vs = g.vertices();
    let mut weight = vec![0usize; vs.len()];
    let mut done = vec![false; vs.len()];
    let mut visit = Vec::with_capacity(vs.len());
    for _ in 0..vs.len() {
        let i = (0..vs.len())
            .filter(|&i| !done[i])
            .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
            .expect("vertex left");
        done[i] = true;
        visit.push(vs[i]);
        for u in g.neighbors(vs[i]) {
            let j = g.vertex_index(u).expect("neighbour");
            if !done[j] {
                weight[j] += 1;
            }
        }
    }
    visit.reverse();
    visit
}

/// Whether each vertex's later neighbours form a clique.
pub fn is_perfect_elimination(g: &Graph, order: &[i64]) -> bool {
    let pos = |v: i64| order.iter().position(|&x| x == v).expect("vertex in order");
    order.iter().enumerate().all(|(i, &v)| {
        let later: Vec<i64> = g.neighbors(v).into_iter().filter(|&u| pos(u) > i).collect();
        later.iter().enumerate().all(|(a, &x)| later[a + 1..].iter().all(|&y| adjacent(g, x, y)))
    })
}

fn chordality(g: &Graph) -> ChordalCertificate {
    let order = mcs_order(g);
    if is_perfect_elimination(g, &order) {
        return ChordalCertificate::EliminationOrder(order);
    }
    ChordalCertificate::ChordlessCycle(chordless_cycle(g).expect("a graph without elimination order has a hole"))
}

/// A cycle of length at least 4 without chords, if one exists.
pub fn chordless_cycle(g: &Graph) -> Option<Vec<i64>> {
    for &v in g.vertices() {
        let nv = g.neighbors(v);
        let nbrs: Vec<i64> = nv.iter().copied().collect();
        for (a, &u) in nbrs.iter().enumerate() {
            for &w in &nbrs[a + 1..] {
                if adjacent(g, u, w) {
                    continue;
                }
                // shortest u–w path avoiding v and its other neighbours is induced
                let blocked: BTreeSet<i64> = nv.iter().copied().filter(|&x| x != u && x != w).chain([v]).collect();
                if let Some(path) = shortest_path(g, u, w, &blocked) {
                    let mut cycle = vec![v];
                    cycle.extend(path);
                    return Some(cycle);
                }
            }
        }
    }
    None
}

fn shortest_path(g: &Graph, from: i64, to: i64, blocked: &BTreeSet<i64>) -> Option<Vec<i64>> {
    let mut prev: std::collections::BTreeMap<i64, i64> = Default::default();
    let mut queue = VecDeque::from([from]);
    let mut seen: BTreeSet<i64> = BTreeSet::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            let mut path = vec![to];
            let mut cur = to;
            while let Some(&p) = prev.get(&cur) {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for y in g.neighbors(x) {
            if !blocked.contains(&y) && seen.insert(y) {
                prev.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    None
}

/// Degree-sequence test; the `m` highest-degree vertices form the clique.
fn split_partition(g: &Graph) -> Option<SplitPartition> {
    let mut vs: Vec<i64> = g.vertices().to_vec();
    vs.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let d: Vec<usize> = vs.iter().map(|&v| g.degree(v)).collect();
    let m = (0..d.len()).rev().find(|&i| d[i] >= i).map_or(0, |i| i + 1);
    let lhs: usize = d[..m].iter().sum();
    let rhs: usize = m * m.saturating_sub(1) + d[m..].iter().sum::<usize>();
    if lhs != rhs {
        return None;
    }
    let clique = vs[..m].to_vec();
    let independent = vs[m..].to_vec();
    let ok = clique.iter().enumerate().all(|(a, &x)| clique[a + 1..].iter().all(|&y| adjacent(g, x, y)))
        && independent.iter().enumerate().all(|(a, &x)| independent[a + 1..].iter().all(|&y| !adjacent(g, x, y)));
    ok.then(|| {
        let mut clique = clique;
        let mut independent = independent;
        clique.sort_unstable();
        independent.sort_unstable();
        SplitPartition { clique, independent }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(k: i64) -> Graph {
        Graph::new((1..=k).collect(), (1..=k).map(|i| (i, i % k + 1)).collect()).unwrap()
    }

    // brute force: some vertex subset of size ≥ 4 inducing a cycle
    fn has_hole(g: &Graph) -> bool {
        let vs = g.vertices();
        (0u32..1 << vs.len()).any(|mask| {
            if mask.count_ones() < 4 {
                return false;
            }
            let sub: BTreeSet<i64> = (0..vs.len()).filter(|i| mask >> i & 1 == 1).map(|i| vs[i]).collect();
            let h = g.induced(&sub);
            h.is_connected() && sub.iter().all(|&v| h.degree(v) == 2)
        })
    }

    fn brute_split(g: &Graph) -> bool {
        let vs = g.vertices();
        (0u32..1 << vs.len()).any(|mask| {
            let inside = |i: usize| mask >> i & 1 == 1;
            (0..vs.len()).all(|a| {
                (a + 1..vs.len()).all(|b| {
                    let e = adjacent(g, vs[a], vs[b]);
                    match (inside(a), inside(b)) {
                        (true, true) => e,
                        (false, false) => !e,
                        _ => true,
                    }
                })
            })
        })
    }

    #[test]
    fn cycles_and_complete_graphs() {
        let p = graph_predicates(&cycle(4));
        assert!(!p.is_chordal && !p.is_split);
        let ChordalCertificate::ChordlessCycle(c) = p.chordal_certificate else { panic!() };
        assert_eq!(c.len(), 4);
        let p = graph_predicates(&Graph::complete(1..=5));
        assert!(p.is_chordal && p.is_split);
        assert!(graph_predicates(&cycle(3)).is_chordal);
        assert!(!graph_predicates(&cycle(6)).is_chordal);
    }

    #[test]
    fn exhaustive_small_graphs() {
        // every graph on 5 labelled vertices
        let all = Graph::complete(1..=5);
        for mask in 0u32..1 << all.num_edges() {
            let edges = (0..all.num_edges()).filter(|i| mask >> i & 1 == 1).map(|i| all.edges()[i]).collect();
            let g = Graph::new((1..=5).collect(), edges).unwrap();
            let p = graph_predicates(&g);
            assert_eq!(p.is_chordal, !has_hole(&g));
            assert_eq!(p.is_split, brute_split(&g));
            if p.is_split {
                assert!(p.is_chordal);
            }
            if let ChordalCertificate::ChordlessCycle(c) = &p.chordal_certificate {
                let set: BTreeSet<i64> = c.iter().copied().collect();
                let h = g.induced(&set);
                assert!(c.len() >= 4 && set.iter().all(|&v| h.degree(v) == 2) && h.is_connected());
            }
        }
    }
}

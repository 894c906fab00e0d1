//! Graphic matroids: rank, closure, flats, circuits and minimal-weight bases.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph, UnionFind};
use crate::lattice::Q;

/// Largest vertex count for which flats are enumerated.
pub const FLAT_VERTEX_LIMIT: usize = 12;
/// Largest edge count for which circuits are enumerated.
pub const CIRCUIT_EDGE_LIMIT: usize = 20;
/// Largest edge count for exhaustive basis enumeration.
pub const BASIS_EDGE_LIMIT: usize = 24;

/// A rational value per ground-set element.
pub type WeightCovector = Vec<Q>;

/// The cycle matroid of a simple graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphicMatroid {
    graph: Graph,
}

/// A closed edge set together with its rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Flat {
    pub edges: EdgeSet,
    pub rank: usize,
}

/// Minimal-weight bases of a matroid for a covector.
#[derive(Clone, Debug)]
pub struct MinWeightBases {
    pub bases: Vec<EdgeSet>,
    pub min_weight: Q,
    /// Every element lies in some minimal basis.
    pub loop_free: bool,
}

impl GraphicMatroid {
    pub fn from_graph(graph: Graph) -> Self {
        GraphicMatroid { graph }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn ground_size(&self) -> usize {
        self.graph.num_edges()
    }

    pub fn ground(&self) -> EdgeSet {
        self.graph.all_edges()
    }

    fn check(&self, s: EdgeSet) -> Result<()> {
        let m = self.ground_size();
        if let Some(e) = s.difference(EdgeSet::full(m)).iter().next() {
            return Err(Error::InvalidSubset { index: e, size: m });
        }
        Ok(())
    }

    /// Rank without range checks; callers guarantee `s ⊆ E`.
    pub fn rank_unchecked(&self, s: EdgeSet) -> usize {
        self.graph.num_vertices() - self.graph.num_components(s)
    }

    pub fn rank(&self, s: EdgeSet) -> Result<usize> {
        self.check(s)?;
        Ok(self.rank_unchecked(s))
    }

    pub fn full_rank(&self) -> usize {
        self.rank_unchecked(self.ground())
    }

    /// All edges whose endpoints lie in one component of `(V, s)`.
    pub fn closure_unchecked(&self, s: EdgeSet) -> EdgeSet {
        let comp = self.graph.components(s);
        let g = &self.graph;
        EdgeSet::from_indices(g.edges().iter().enumerate().filter_map(|(i, &(u, v))| {
            let (a, b) = (g.vertex_index(u).unwrap(), g.vertex_index(v).unwrap());
            (comp[a] == comp[b]).then_some(i)
        }))
    }

    pub fn rank_and_closure(&self, s: EdgeSet) -> Result<(usize, Flat)> {
        self.check(s)?;
        let r = self.rank_unchecked(s);
        Ok((r, Flat { edges: self.closure_unchecked(s), rank: r }))
    }

    pub fn is_flat(&self, s: EdgeSet) -> bool {
        self.closure_unchecked(s) == s
    }

    pub fn is_independent(&self, s: EdgeSet) -> bool {
        self.rank_unchecked(s) == s.len()
    }

    /// Vertex blocks of a flat (connected components of its edges, singletons included).
    pub fn blocks(&self, f: EdgeSet) -> Vec<BTreeSet<i64>> {
        self.graph.blocks(f)
    }

    /// A flat is 1-connected when its edges form one connected subgraph.
    pub fn is_one_connected(&self, f: EdgeSet) -> bool {
        !f.is_empty() && self.blocks(f).iter().filter(|b| b.len() > 1).count() == 1
    }

    /// Matroid (2-)connectivity of the restriction to `f`: any two elements lie
    /// on a common circuit.
    pub fn is_matroid_connected(&self, f: EdgeSet) -> Result<bool> {
        let circuits = self.restriction(f)?.circuits()?;
        let elems = f.to_vec();
        if elems.len() <= 1 {
            return Ok(!elems.is_empty());
        }
        let mut uf = UnionFind::new(elems.len());
        for c in circuits {
            let idx: Vec<usize> = c.iter().collect();
            for w in idx.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        Ok((0..elems.len()).all(|i| uf.find(i) == uf.find(0)))
    }

    /// All flats, sorted by rank and then lexicographically by edge list.
    pub fn flats(&self) -> Result<Vec<Flat>> {
        let n = self.graph.num_vertices();
        if n > FLAT_VERTEX_LIMIT {
            return Err(Error::TooLarge {
                what: "vertex count for flat enumeration",
                actual: n,
                limit: FLAT_VERTEX_LIMIT,
            });
        }
        // adjacency by vertex position
        let mut adj = vec![0u32; n];
        for &(u, v) in self.graph.edges() {
            let (a, b) = (self.graph.vertex_index(u).unwrap(), self.graph.vertex_index(v).unwrap());
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        let mut out = Vec::new();
        let mut blocks: Vec<u32> = Vec::new();
        self.partitions(0, n, &adj, &mut blocks, &mut out);
        let mut flats: Vec<Flat> =
            out.into_iter().map(|edges| Flat { edges, rank: self.rank_unchecked(edges) }).collect();
        flats.sort_by(|a, b| a.rank.cmp(&b.rank).then(a.edges.lex_cmp(b.edges)));
        Ok(flats)
    }

    // Assign vertex `v` to an existing block or a new one; emit partitions with
    // connected blocks as edge sets.
    fn partitions(&self, v: usize, n: usize, adj: &[u32], blocks: &mut Vec<u32>, out: &mut Vec<EdgeSet>) {
        if v == n {
            if blocks.iter().all(|&b| connected_mask(b, adj)) {
                let g = &self.graph;
                let block_of = |x: i64| {
                    let i = g.vertex_index(x).unwrap();
                    blocks.iter().position(|&b| b >> i & 1 == 1).unwrap()
                };
                out.push(EdgeSet::from_indices(
                    g.edges().iter().enumerate().filter(|(_, &(a, b))| block_of(a) == block_of(b)).map(|(i, _)| i),
                ));
            }
            return;
        }
        for i in 0..blocks.len() {
            blocks[i] |= 1 << v;
            self.partitions(v + 1, n, adj, blocks, out);
            blocks[i] &= !(1 << v);
        }
        blocks.push(1 << v);
        self.partitions(v + 1, n, adj, blocks, out);
        blocks.pop();
    }

    /// All circuits (edge sets of simple cycles), sorted by size then lexicographically.
    pub fn circuits(&self) -> Result<Vec<EdgeSet>> {
        let m = self.ground_size();
        if m > CIRCUIT_EDGE_LIMIT {
            return Err(Error::TooLarge {
                what: "edge count for circuit enumeration",
                actual: m,
                limit: CIRCUIT_EDGE_LIMIT,
            });
        }
        let g = &self.graph;
        let n = g.num_vertices();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (i, &(u, v)) in g.edges().iter().enumerate() {
            let (a, b) = (g.vertex_index(u).unwrap(), g.vertex_index(v).unwrap());
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        let mut found: HashSet<EdgeSet> = HashSet::new();
        for s in 0..n {
            let mut visited = vec![false; n];
            visited[s] = true;
            cycle_dfs(s, s, &adj, &mut visited, EdgeSet::EMPTY, 0, &mut found);
        }
        let mut out: Vec<EdgeSet> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.lex_cmp(*b)));
        Ok(out)
    }

    /// Direct sum; the second graph's labels are shifted past the first's.
    pub fn direct_sum(&self, other: &GraphicMatroid) -> GraphicMatroid {
        let g1 = &self.graph;
        let g2 = &other.graph;
        let shift = match (g1.vertices().iter().max(), g2.vertices().iter().min()) {
            (Some(&a), Some(&b)) => a - b + 1,
            _ => 0,
        };
        let mut vs: Vec<i64> = g1.vertices().to_vec();
        vs.extend(g2.vertices().iter().map(|v| v + shift));
        let mut es: Vec<(i64, i64)> = g1.edges().to_vec();
        es.extend(g2.edges().iter().map(|&(u, v)| (u + shift, v + shift)));
        GraphicMatroid::from_graph(Graph::new(vs, es).expect("disjoint union is simple"))
    }

    /// Restriction to `s`: the matroid of the subgraph formed by those edges
    /// (vertices touched by `s`), edges in index order.
    pub fn restriction(&self, s: EdgeSet) -> Result<GraphicMatroid> {
        self.check(s)?;
        let touched = self.graph.vertices_of(s);
        let vs: Vec<i64> = self.graph.vertices().iter().copied().filter(|v| touched.contains(v)).collect();
        let es = s.iter().map(|e| self.graph.edges()[e]).collect();
        Ok(GraphicMatroid::from_graph(Graph::new(vs, es)?))
    }

    /// All bases (spanning forests), in lexicographic order.
    pub fn bases(&self) -> Result<Vec<EdgeSet>> {
        let m = self.ground_size();
        if m > BASIS_EDGE_LIMIT {
            return Err(Error::TooLarge {
                what: "edge count for basis enumeration",
                actual: m,
                limit: BASIS_EDGE_LIMIT,
            });
        }
        let r = self.full_rank();
        let mut out = Vec::new();
        self.extend_bases(0, EdgeSet::EMPTY, r, &mut out);
        Ok(out)
    }

    fn extend_bases(&self, next: usize, cur: EdgeSet, r: usize, out: &mut Vec<EdgeSet>) {
        if cur.len() == r {
            out.push(cur);
            return;
        }
        let m = self.ground_size();
        if m - next < r - cur.len() {
            return;
        }
        for e in next..m {
            let mut t = cur;
            t.insert(e);
            if self.is_independent(t) {
                self.extend_bases(e + 1, t, r, out);
            }
        }
    }

    /// Bases of minimal `c`-weight, by exhaustive enumeration.
    pub fn minimal_weight_bases(&self, c: &[Q]) -> Result<MinWeightBases> {
        let m = self.ground_size();
        if c.len() != m {
            return Err(Error::Dimension(format!("covector has length {}, expected {m}", c.len())));
        }
        let all = self.bases()?;
        let weight = |b: EdgeSet| b.iter().map(|e| &c[e]).sum::<Q>();
        let weights: Vec<Q> = all.iter().map(|&b| weight(b)).collect();
        let min = weights.iter().min().cloned().unwrap_or_default();
        let bases: Vec<EdgeSet> = all.into_iter().zip(&weights).filter(|(_, w)| **w == min).map(|(b, _)| b).collect();
        let covered = bases.iter().fold(EdgeSet::EMPTY, |acc, &b| acc.union(b));
        Ok(MinWeightBases { loop_free: covered == self.ground(), bases, min_weight: min })
    }
}

fn connected_mask(mask: u32, adj: &[u32]) -> bool {
    if mask == 0 {
        return true;
    }
    let start = mask.trailing_zeros();
    let mut seen = 1u32 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & mask & !seen;
        seen |= new;
        frontier |= new;
    }
    seen == mask
}

// Cycles through `start` whose other vertices all have larger positions.
fn cycle_dfs(
    start: usize,
    v: usize,
    adj: &[Vec<(usize, usize)>],
    visited: &mut [bool],
    path: EdgeSet,
    len: usize,
    found: &mut HashSet<EdgeSet>,
) {
    for &(w, e) in &adj[v] {
        if w == start && len >= 2 && !path.contains(e) {
            let mut c = path;
            c.insert(e);
            found.insert(c);
        } else if w > start && !visited[w] {
            visited[w] = true;
            let mut p = path;
            p.insert(e);
            cycle_dfs(start, w, adj, visited, p, len + 1, found);
            visited[w] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::q;

    fn k(n: i64) -> GraphicMatroid {
        GraphicMatroid::from_graph(Graph::complete(1..=n))
    }

    // brute force: subsets equal to their closure
    fn flats_by_filter(m: &GraphicMatroid) -> Vec<EdgeSet> {
        let sz = m.ground_size();
        let mut v: Vec<EdgeSet> = (0u128..1 << sz).map(EdgeSet).filter(|&s| m.is_flat(s)).collect();
        v.sort_by(|a, b| m.rank_unchecked(*a).cmp(&m.rank_unchecked(*b)).then(a.lex_cmp(*b)));
        v
    }

    // brute force: minimal dependent subsets
    fn circuits_by_filter(m: &GraphicMatroid) -> Vec<EdgeSet> {
        let sz = m.ground_size();
        let dependent: Vec<EdgeSet> = (0u128..1 << sz).map(EdgeSet).filter(|&s| !m.is_independent(s)).collect();
        let mut v: Vec<EdgeSet> = dependent
            .iter()
            .copied()
            .filter(|&s| s.iter().all(|e| m.is_independent(EdgeSet(s.0 & !(1 << e)))))
            .collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then(a.lex_cmp(*b)));
        v
    }

    fn test_graphs() -> Vec<GraphicMatroid> {
        let mut v = vec![k(2), k(3), k(4)];
        v.push(GraphicMatroid::from_graph(Graph::from_edge_list("2 3\n2 4\n3 4\n2 5\n").unwrap()));
        v.push(GraphicMatroid::from_graph(Graph::star(0, 1..=4).unwrap()));
        v.push(GraphicMatroid::from_graph(Graph::from_edge_list("1 2\n2 3\n3 4\n4 1\n1 3\n3 5\n5 1\n").unwrap()));
        v
    }

    #[test]
    fn ranks_of_small_graphs() {
        let k3 = k(3);
        assert_eq!(k3.full_rank(), 2);
        assert_eq!(k3.ground_size(), 3);
        assert_eq!(k(2).full_rank(), 1);
        assert_eq!(k(4).full_rank(), 3);
        let (r, f) = k3.rank_and_closure(EdgeSet::singleton(0)).unwrap();
        assert_eq!((r, f.edges), (1, EdgeSet::singleton(0)));
        let (r, f) = k3.rank_and_closure(EdgeSet::from_indices([0, 1])).unwrap();
        assert_eq!((r, f.edges), (2, EdgeSet::full(3)));
        let (r, f) = k3.rank_and_closure(EdgeSet::EMPTY).unwrap();
        assert_eq!((r, f.edges), (0, EdgeSet::EMPTY));
        assert_eq!(k3.rank(EdgeSet::singleton(5)), Err(Error::InvalidSubset { index: 5, size: 3 }));
    }

    #[test]
    fn flat_counts() {
        assert_eq!(k(3).flats().unwrap().len(), 5);
        assert_eq!(k(2).flats().unwrap().len(), 2);
        assert_eq!(k(4).flats().unwrap().len(), 15);
        // Bell numbers for complete graphs
        assert_eq!(k(5).flats().unwrap().len(), 52);
        let big = GraphicMatroid::from_graph(Graph::complete(1..=13));
        assert!(matches!(big.flats(), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn flats_match_closure_filter() {
        for m in test_graphs() {
            let fast: Vec<EdgeSet> = m.flats().unwrap().iter().map(|f| f.edges).collect();
            assert_eq!(fast, flats_by_filter(&m), "{:?}", m.graph());
        }
    }

    #[test]
    fn circuit_counts_and_oracle() {
        assert_eq!(k(3).circuits().unwrap().len(), 1);
        assert_eq!(k(4).circuits().unwrap().len(), 7);
        let tree = GraphicMatroid::from_graph(Graph::star(0, 1..=5).unwrap());
        assert!(tree.circuits().unwrap().is_empty());
        for m in test_graphs() {
            assert_eq!(m.circuits().unwrap(), circuits_by_filter(&m));
        }
    }

    #[test]
    fn dependence_iff_contains_circuit() {
        for m in test_graphs() {
            let cs = m.circuits().unwrap();
            for s in (0u128..1 << m.ground_size()).map(EdgeSet) {
                let has = cs.iter().any(|c| c.is_subset(s));
                assert_eq!(has, !m.is_independent(s));
            }
        }
    }

    #[test]
    fn rank_axioms_exhaustive() {
        for m in test_graphs() {
            let sz = m.ground_size();
            let all: Vec<EdgeSet> = (0u128..1 << sz).map(EdgeSet).collect();
            for &a in &all {
                let ra = m.rank_unchecked(a);
                assert!(ra <= a.len());
                for e in 0..sz {
                    let d = m.rank_unchecked(a.union(EdgeSet::singleton(e))) - ra;
                    assert!(d <= 1);
                }
                let cl = m.closure_unchecked(a);
                assert!(a.is_subset(cl));
                assert_eq!(m.closure_unchecked(cl), cl);
            }
            for &a in all.iter().step_by(3) {
                for &b in all.iter().step_by(5) {
                    assert!(
                        m.rank_unchecked(a) + m.rank_unchecked(b)
                            >= m.rank_unchecked(a.union(b)) + m.rank_unchecked(a.intersection(b))
                    );
                    if a.is_subset(b) {
                        assert!(m.closure_unchecked(a).is_subset(m.closure_unchecked(b)));
                    }
                }
            }
        }
    }

    #[test]
    fn sums_and_restrictions() {
        let s = k(3).direct_sum(&k(2));
        assert_eq!((s.full_rank(), s.ground_size()), (3, 4));
        let r = k(4).restriction(EdgeSet::from_indices([0, 1, 3])).unwrap();
        // edges (1,2),(1,3),(2,3) form a triangle
        assert_eq!(r.graph().edges(), &[(1, 2), (1, 3), (2, 3)]);
        assert_eq!(r.flats().unwrap().len(), 5);
        assert!(k(3).restriction(EdgeSet::singleton(7)).is_err());
    }

    #[test]
    fn minimal_weight_bases() {
        let k3 = k(3);
        let zero = vec![q(0); 3];
        let r = k3.minimal_weight_bases(&zero).unwrap();
        assert_eq!(r.bases.len(), 3);
        assert!(r.loop_free);
        let r = k3.minimal_weight_bases(&[q(1), q(0), q(0)]).unwrap();
        assert_eq!(r.bases, vec![EdgeSet::from_indices([1, 2])]);
        assert!(!r.loop_free);
        let r = k3.minimal_weight_bases(&[q(-3), q(0), q(0)]).unwrap();
        assert_eq!(r.bases.len(), 2);
        assert!(r.bases.iter().all(|b| b.contains(0)));
        assert!(r.loop_free);
        assert_eq!(k(4).bases().unwrap().len(), 16);
    }

    #[test]
    fn connectivity_predicates() {
        let m = k(4);
        let tri = EdgeSet::from_indices([0, 1, 3]);
        assert!(m.is_one_connected(tri));
        assert!(m.is_matroid_connected(tri).unwrap());
        let path = EdgeSet::from_indices([0, 5]);
        assert!(!m.is_one_connected(path));
        let star = EdgeSet::from_indices([0, 1]);
        assert!(m.is_one_connected(star));
        assert!(!m.is_matroid_connected(star).unwrap());
    }
}

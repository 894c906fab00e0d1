//! Simple labelled graphs with stably indexed edges.
//!
//! The ground set of a graphic matroid is the edge list of its graph, so the
//! edge order fixed here determines every fan coordinate downstream.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of edges an [`EdgeSet`] can hold.
pub const MAX_EDGES: usize = 128;

/// A subset of edge indices, stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet(pub u128);

impl EdgeSet {
    pub const EMPTY: EdgeSet = EdgeSet(0);

    pub fn full(m: usize) -> Self {
        if m >= 128 {
            EdgeSet(u128::MAX)
        } else {
            EdgeSet((1u128 << m) - 1)
        }
    }

    pub fn singleton(e: usize) -> Self {
        EdgeSet(1u128 << e)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        EdgeSet(it.into_iter().fold(0u128, |acc, e| acc | (1u128 << e)))
    }

    pub fn contains(self, e: usize) -> bool {
        self.0 >> e & 1 == 1
    }

    pub fn insert(&mut self, e: usize) {
        self.0 |= 1u128 << e;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: Self) -> Self {
        EdgeSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        EdgeSet(self.0 & o.0)
    }

    pub fn difference(self, o: Self) -> Self {
        EdgeSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(e)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Lexicographic comparison of the sorted index lists.
    pub fn lex_cmp(self, o: Self) -> std::cmp::Ordering {
        self.iter().cmp(o.iter())
    }
}

impl Serialize for EdgeSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for EdgeSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<usize> = Vec::deserialize(d)?;
        if let Some(&e) = v.iter().find(|&&e| e >= MAX_EDGES) {
            return Err(serde::de::Error::custom(format!("edge index {e} out of range")));
        }
        Ok(EdgeSet::from_indices(v))
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A simple graph: no loops, no parallel edges.
///
/// Vertex labels are arbitrary integers. Edge `k` of the graph is the `k`-th
/// entry of [`Graph::edges`], stored with the smaller label first.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    vertices: Vec<i64>,
    edges: Vec<(i64, i64)>,
    #[serde(skip)]
    position: HashMap<i64, usize>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertices: Vec<i64>,
    edges: Vec<[i64; 2]>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;

    fn try_from(r: GraphRepr) -> Result<Self> {
        Graph::new(r.vertices, r.edges.into_iter().map(|[u, v]| (u, v)).collect())
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr { vertices: g.vertices, edges: g.edges.into_iter().map(|(u, v)| [u, v]).collect() }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph").field("vertices", &self.vertices).field("edges", &self.edges).finish()
    }
}

impl Graph {
    /// Builds a graph, keeping the given vertex and edge order.
    pub fn new(vertices: Vec<i64>, edges: Vec<(i64, i64)>) -> Result<Self> {
        let mut position = HashMap::with_capacity(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            if position.insert(v, i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex {v}")));
            }
        }
        if edges.len() > MAX_EDGES {
            return Err(Error::TooLarge { what: "edge count", actual: edges.len(), limit: MAX_EDGES });
        }
        let mut seen = BTreeSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            for x in [u, v] {
                if !position.contains_key(&x) {
                    return Err(Error::InvalidGraph(format!("edge endpoint {x} is not a vertex")));
                }
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::InvalidGraph(format!("parallel edge {{{}, {}}}", e.0, e.1)));
            }
            normalized.push(e);
        }
        Ok(Graph { vertices, edges: normalized, position })
    }

    /// Builds a graph whose vertices and edges are sorted.
    pub fn sorted(
        vertices: impl IntoIterator<Item = i64>,
        edges: impl IntoIterator<Item = (i64, i64)>,
    ) -> Result<Self> {
        let vs: BTreeSet<i64> = vertices.into_iter().collect();
        let es: BTreeSet<(i64, i64)> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        Graph::new(vs.into_iter().collect(), es.into_iter().collect())
    }

    /// Complete graph on the given labels, edges in lexicographic order.
    pub fn complete(labels: impl IntoIterator<Item = i64>) -> Self {
        let vs: Vec<i64> = labels.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut es = Vec::new();
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                es.push((u, v));
            }
        }
        Graph::new(vs, es).expect("complete graph is simple")
    }

    /// Star graph: `center` joined to each leaf.
    pub fn star(center: i64, leaves: impl IntoIterator<Item = i64>) -> Result<Self> {
        let leaves: Vec<i64> = leaves.into_iter().collect();
        Graph::sorted(std::iter::once(center).chain(leaves.iter().copied()), leaves.iter().map(|&l| (center, l)))
    }

    pub fn vertices(&self) -> &[i64] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(i64, i64)] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn all_edges(&self) -> EdgeSet {
        EdgeSet::full(self.edges.len())
    }

    /// Position of a vertex label in [`Graph::vertices`].
    pub fn vertex_index(&self, label: i64) -> Option<usize> {
        self.position.get(&label).copied()
    }

    pub fn has_vertex(&self, label: i64) -> bool {
        self.position.contains_key(&label)
    }

    /// Index of the edge joining two labels.
    pub fn edge_index(&self, u: i64, v: i64) -> Option<usize> {
        let e = (u.min(v), u.max(v));
        self.edges.iter().position(|&x| x == e)
    }

    pub fn degree(&self, label: i64) -> usize {
        self.edges.iter().filter(|&&(u, v)| u == label || v == label).count()
    }

    pub fn neighbors(&self, label: i64) -> BTreeSet<i64> {
        self.edges
            .iter()
            .filter_map(|&(u, v)| {
                if u == label {
                    Some(v)
                } else if v == label {
                    Some(u)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Edges with both endpoints among `labels`.
    pub fn edges_within(&self, labels: &BTreeSet<i64>) -> EdgeSet {
        EdgeSet::from_indices(
            self.edges
                .iter()
                .enumerate()
                .filter(|(_, (u, v))| labels.contains(u) && labels.contains(v))
                .map(|(i, _)| i),
        )
    }

    /// Induced subgraph on `labels`; edges keep their relative order.
    pub fn induced(&self, labels: &BTreeSet<i64>) -> Graph {
        let vs: Vec<i64> = self.vertices.iter().copied().filter(|v| labels.contains(v)).collect();
        let es: Vec<(i64, i64)> =
            self.edges.iter().copied().filter(|(u, v)| labels.contains(u) && labels.contains(v)).collect();
        Graph::new(vs, es).expect("induced subgraph is simple")
    }

    /// Subgraph on all vertices with the given edges.
    pub fn edge_subgraph(&self, s: EdgeSet) -> Graph {
        let es = s.iter().map(|e| self.edges[e]).collect();
        Graph::new(self.vertices.clone(), es).expect("edge subgraph is simple")
    }

    /// Component id (a vertex position) for every vertex, using only edges in `s`.
    pub fn components(&self, s: EdgeSet) -> Vec<usize> {
        let mut uf = UnionFind::new(self.vertices.len());
        for e in s.iter() {
            let (u, v) = self.edges[e];
            uf.union(self.position[&u], self.position[&v]);
        }
        (0..self.vertices.len()).map(|i| uf.find(i)).collect()
    }

    pub fn num_components(&self, s: EdgeSet) -> usize {
        let comp = self.components(s);
        comp.iter().enumerate().filter(|&(i, &c)| i == c).count()
    }

    pub fn is_connected(&self) -> bool {
        self.vertices.is_empty() || self.num_components(self.all_edges()) == 1
    }

    /// Vertex labels touched by the edges of `s`.
    pub fn vertices_of(&self, s: EdgeSet) -> BTreeSet<i64> {
        s.iter().flat_map(|e| [self.edges[e].0, self.edges[e].1]).collect()
    }

    /// Blocks of the vertex partition induced by `s` (including singletons).
    pub fn blocks(&self, s: EdgeSet) -> Vec<BTreeSet<i64>> {
        let comp = self.components(s);
        let mut by_root: BTreeMap<usize, BTreeSet<i64>> = BTreeMap::new();
        for (i, &c) in comp.iter().enumerate() {
            by_root.entry(c).or_default().insert(self.vertices[i]);
        }
        let mut blocks: Vec<_> = by_root.into_values().collect();
        blocks.sort();
        blocks
    }

    /// Parses the edge-list text format: one `u v` pair per line.
    ///
    /// Blank lines and lines starting with `#` are ignored. Vertices are the
    /// endpoints, sorted; edges keep their input order.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(Error::Parse(format!("line {}: expected `u v`", lineno + 1)));
            }
            let parse = |s: &str| {
                s.parse::<i64>().map_err(|_| Error::Parse(format!("line {}: bad vertex label `{s}`", lineno + 1)))
            };
            edges.push((parse(parts[0])?, parse(parts[1])?));
        }
        let vs: BTreeSet<i64> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        Graph::new(vs.into_iter().collect(), edges)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Parses either format, picking JSON when the text starts with `{`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Graph::from_json(text)
        } else {
            Graph::from_edge_list(text)
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("graph serializes")
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when both were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // keep the smaller index as root so component ids are canonical
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
}

//! Gluing graphs along a common subgraph given by explicit embeddings.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph};

/// Vertex map from the shared graph into a factor.
pub type Embedding = BTreeMap<i64, i64>;

/// The identity embedding of `g0` (labels shared verbatim).
pub fn identity_embedding(g0: &Graph) -> Embedding {
    g0.vertices().iter().map(|&v| (v, v)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GluedGraph {
    pub g1: Graph,
    pub g0: Graph,
    pub g2: Graph,
    pub map1: Embedding,
    pub map2: Embedding,
    pub result: Graph,
    /// Label in the result of each vertex of `g2`.
    pub vertices2: BTreeMap<i64, i64>,
    /// Result index of each edge of `g1`, then of `g2`.
    pub edges1: Vec<usize>,
    pub edges2: Vec<usize>,
}

impl GluedGraph {
    /// Result indices of the edges of `g0`.
    pub fn shared_edges(&self) -> EdgeSet {
        EdgeSet::from_indices(self.g0.edges().iter().map(|&(u, v)| {
            let (a, b) = (self.map1[&u], self.map1[&v]);
            self.edges1[self.g1.edge_index(a, b).expect("embedded edge")]
        }))
    }
}

fn check_embedding(g0: &Graph, target: &Graph, map: &Embedding, name: &str) -> Result<()> {
    let keys: BTreeSet<i64> = map.keys().copied().collect();
    let want: BTreeSet<i64> = g0.vertices().iter().copied().collect();
    if keys != want {
        return Err(Error::InvalidEmbedding(format!("{name}: map must be defined exactly on the shared vertices")));
    }
    let images: BTreeSet<i64> = map.values().copied().collect();
    if images.len() != map.len() {
        return Err(Error::InvalidEmbedding(format!("{name}: map is not injective")));
    }
    if let Some(v) = images.iter().find(|&&v| !target.has_vertex(v)) {
        return Err(Error::InvalidEmbedding(format!("{name}: image {v} is not a vertex")));
    }
    if let Some(&(u, v)) = g0.edges().iter().find(|&&(u, v)| target.edge_index(map[&u], map[&v]).is_none()) {
        return Err(Error::InvalidEmbedding(format!("{name}: edge {{{u},{v}}} is not mapped to an edge")));
    }
    Ok(())
}

/// `g1 ×_{g0} g2`: edges of `g1` first, then the edges of `g2` outside the image of `g0`.
/// Unshared vertices of `g2` keep their labels unless these clash with `g1`.
pub fn glue_graphs(g1: &Graph, g0: &Graph, g2: &Graph, map1: &Embedding, map2: &Embedding) -> Result<GluedGraph> {
    check_embedding(g0, g1, map1, "first")?;
    check_embedding(g0, g2, map2, "second")?;
    let mut vertices2 = BTreeMap::new();
    for (&s, &t) in map2 {
        vertices2.insert(t, map1[&s]);
    }
    let mut fresh = g1.vertices().iter().chain(g2.vertices()).copied().max().unwrap_or(0) + 1;
    let mut vertices: Vec<i64> = g1.vertices().to_vec();
    for &v in g2.vertices() {
        if vertices2.contains_key(&v) {
            continue;
        }
        let label = if g1.has_vertex(v) {
            fresh += 1;
            fresh - 1
        } else {
            v
        };
        vertices2.insert(v, label);
        vertices.push(label);
    }
    let shared2: BTreeSet<usize> =
        g0.edges().iter().map(|&(u, v)| g2.edge_index(map2[&u], map2[&v]).expect("checked")).collect();
    let mut edges: Vec<(i64, i64)> = g1.edges().to_vec();
    let edges1: Vec<usize> = (0..g1.num_edges()).collect();
    let mut edges2 = Vec::with_capacity(g2.num_edges());
    for (i, &(u, v)) in g2.edges().iter().enumerate() {
        let (a, b) = (vertices2[&u], vertices2[&v]);
        if shared2.contains(&i) {
            edges2.push(g1.edge_index(a, b).expect("shared edge"));
        } else {
            if g1.edge_index(a, b).is_some() {
                return Err(Error::InvalidEmbedding(format!("edge {{{a},{b}}} would be doubled")));
            }
            edges2.push(edges.len());
            edges.push((a, b));
        }
    }
    let result = Graph::new(vertices, edges).map_err(|e| Error::InvalidEmbedding(e.to_string()))?;
    Ok(GluedGraph {
        g1: g1.clone(),
        g0: g0.clone(),
        g2: g2.clone(),
        map1: map1.clone(),
        map2: map2.clone(),
        result,
        vertices2,
        edges1,
        edges2,
    })
}

/// Glues several graphs that contain `g0` under the identity labelling.
/// Returns the glued graph and, per factor, the result index of each of its edges.
pub fn glue_along(factors: &[Graph], g0: &Graph) -> Result<(Graph, Vec<Vec<usize>>)> {
    let (first, rest) = factors.split_first().ok_or_else(|| Error::InvalidEmbedding("no factors".into()))?;
    let id = identity_embedding(g0);
    let mut acc = first.clone();
    let mut maps = vec![(0..first.num_edges()).collect::<Vec<usize>>()];
    for g in rest {
        let glued = glue_graphs(&acc, g0, g, &id, &id)?;
        if glued.vertices2.iter().any(|(a, b)| a != b) {
            return Err(Error::InvalidEmbedding("factors share vertices outside the common subgraph".into()));
        }
        maps.push(glued.edges2.clone());
        acc = glued.result;
    }
    Ok((acc, maps))
}

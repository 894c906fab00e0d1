//! `M_{0,n}` as a fan: the combinatorial subdivision in the pair basis, distance
//! vectors, and the dictionary with flats of `K_{n−1}`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::WeightedFan;
use crate::graph::{EdgeSet, Graph};
use crate::lattice::{coordinates, q, Q};
use crate::moduli::trees::{all_splits, check_n, enumerate_tree_types, type_key, MetricTree, Split, TreeType};
use crate::moduli::weights::leaf_bit;

/// Pairs `{i, j} ⊆ {2..n}` other than `{2, 3}`, lexicographically. Their rays
/// form a basis of the ambient space of `M_{0,n}`.
pub fn pair_basis(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 2..=n {
        for j in i + 1..=n {
            if (i, j) != (2, 3) {
                v.push((i, j));
            }
        }
    }
    v
}

/// Ambient dimension `n(n−3)/2`.
pub fn ambient_dim(n: usize) -> usize {
    n * (n - 3) / 2
}

/// Coordinates of the ray `v_I`: `[S ⊆ I] − [{2,3} ⊆ I]` at each basis pair `S`.
pub fn split_ray(n: usize, s: Split) -> Vec<i64> {
    let side = s.side();
    let has = |i: usize, j: usize| side & leaf_bit(i) != 0 && side & leaf_bit(j) != 0;
    let base = i64::from(has(2, 3));
    pair_basis(n).into_iter().map(|(i, j)| i64::from(has(i, j)) - base).collect()
}

/// Distance vector of the one-edge tree with split `side` and length 1.
pub fn split_distances(n: usize, side: u32) -> Vec<Q> {
    let mut d = Vec::with_capacity(n * (n - 1) / 2);
    for i in 1..=n {
        for j in i + 1..=n {
            let sep = (side & leaf_bit(i) != 0) != (side & leaf_bit(j) != 0);
            d.push(q(i64::from(sep)));
        }
    }
    d
}

/// `Φ(e_k)`: the vector `(x_i + x_j)_{i<j}` at `x = e_k`.
pub fn phi_row(n: usize, k: usize) -> Vec<Q> {
    let mut d = Vec::with_capacity(n * (n - 1) / 2);
    for i in 1..=n {
        for j in i + 1..=n {
            d.push(q(i64::from(i == k || j == k)));
        }
    }
    d
}

/// Writes `d = Σ y_S d(C_S) + Φ(x)` and returns `y`.
pub fn point_from_distances(n: usize, d: &[Q]) -> Result<Vec<Q>> {
    if d.len() != n * (n - 1) / 2 {
        return Err(Error::Dimension(format!("expected {} distances", n * (n - 1) / 2)));
    }
    let mut gens: Vec<Vec<Q>> =
        pair_basis(n).into_iter().map(|(i, j)| split_distances(n, leaf_bit(i) | leaf_bit(j))).collect();
    gens.extend((1..=n).map(|k| phi_row(n, k)));
    let c = coordinates(&gens, d).ok_or_else(|| Error::Dimension("distance vector outside the span".into()))?;
    Ok(c[..ambient_dim(n)].to_vec())
}

/// A representative distance vector `Σ y_S d(C_S)` of a point.
pub fn distances_of_point(n: usize, y: &[Q]) -> Vec<Q> {
    let mut d = vec![Q::default(); n * (n - 1) / 2];
    for ((i, j), c) in pair_basis(n).into_iter().zip(y) {
        for (x, s) in d.iter_mut().zip(split_distances(n, leaf_bit(i) | leaf_bit(j))) {
            *x += c * s;
        }
    }
    d
}

/// The point of `M_{0,n}` of a metric tree, in pair-basis coordinates.
pub fn distance_vector(t: &MetricTree) -> Vec<Q> {
    point_from_distances(t.tree.n(), &t.distances()).expect("tree metrics lie in the span")
}

/// The fan together with the split of each ray and the type of each cone.
#[derive(Clone, Debug, Serialize)]
pub struct ModuliFan {
    pub n: usize,
    pub fan: WeightedFan,
    pub splits: Vec<Split>,
    pub types: Vec<TreeType>,
}

impl ModuliFan {
    pub fn ray_of(&self, s: Split) -> Option<usize> {
        self.splits.iter().position(|&x| x == s)
    }

    pub fn cone_of(&self, t: &TreeType) -> Option<usize> {
        self.types.iter().position(|x| x == t)
    }
}

/// The combinatorial subdivision: one ray per split, one cone per trivalent type.
pub fn m0n_fan(n: usize) -> Result<ModuliFan> {
    check_n(n)?;
    let splits = all_splits(n);
    let types = enumerate_tree_types(n, true)?;
    let rays = splits.iter().map(|&s| split_ray(n, s)).collect();
    let cones = types.iter().map(|t| type_key(&splits, t)).collect();
    let fan = WeightedFan::new(ambient_dim(n), rays, vec![], cones, vec![1; types.len()])?;
    Ok(ModuliFan { n, fan, splits, types })
}

/// `K_{n−1}` on the vertices `2..n`.
pub fn complete_graph(n: usize) -> Graph {
    Graph::complete(2..=n as i64)
}

/// The flat `F_I`: all edges of `K_{n−1}` inside the split side.
pub fn split_to_flat(n: usize, s: Split) -> EdgeSet {
    let k = complete_graph(n);
    let labels: BTreeSet<i64> = s.leaves().into_iter().map(|i| i as i64).collect();
    k.edges_within(&labels)
}

/// The curve of a flat: one bounded edge per block with at least two vertices.
/// The whole edge set gives the tree without bounded edges.
pub fn flat_to_type(n: usize, f: EdgeSet) -> Result<TreeType> {
    let k = complete_graph(n);
    if f.iter().any(|e| e >= k.num_edges()) {
        return Err(Error::InvalidSubset { index: f.iter().last().unwrap_or(0), size: k.num_edges() });
    }
    let mut splits = Vec::new();
    for block in k.blocks(f) {
        if block.len() >= 2 && block.len() + 2 <= n {
            let leaves: Vec<usize> = block.iter().map(|&v| v as usize).collect();
            splits.push(Split::from_leaves(n, &leaves).expect("block is a split"));
        }
    }
    TreeType::new(n, splits)
}

//! The projection `pr_w` from `M_{0,n}` to `B'(G(w))`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::bergman::{flat_ray, to_quotient};
use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph};
use crate::lattice::{primitive, q, rank, to_q, Q};
use crate::moduli::m0n::{distances_of_point, split_distances};
use crate::moduli::trees::{Split, TreeType};
use crate::moduli::weights::WeightVector;

/// Position of the pair `i < j` in the lexicographic list of pairs of `[n]`.
pub(crate) fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    (i - 1) * n - (i - 1) * i / 2 + (j - i - 1)
}

/// Where one split goes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RayImage {
    pub split: Split,
    /// `F_{I_h} ∩ G(w)` for the side `I_h` avoiding the root.
    pub flat: EdgeSet,
    /// Primitive image in `B'(G(w))`, the zero vector when contracted.
    pub image: Vec<i64>,
}

impl RayImage {
    pub fn is_zero(&self) -> bool {
        self.image.iter().all(|&x| x == 0)
    }
}

/// Image of a cone of `M_{0,n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeImage {
    pub tree: TreeType,
    pub rays: Vec<Vec<i64>>,
    pub dim: usize,
    pub injective: bool,
}

#[derive(Clone, Debug)]
pub struct Projection {
    n: usize,
    root: usize,
    graph: Graph,
}

impl Projection {
    pub fn new(w: &WeightVector) -> Result<Self> {
        let root = w.root().ok_or(Error::NoHeavyVertex)?;
        Ok(Projection { n: w.n(), root, graph: w.reduced_graph()? })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The deleted heavy vertex.
    pub fn root(&self) -> usize {
        self.root
    }

    /// `G(w)`.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Dimension of the target coordinates of `B'(G(w))`.
    pub fn target_dim(&self) -> usize {
        self.graph.num_edges().saturating_sub(1)
    }

    fn quotient(&self, x: &[Q]) -> Vec<Q> {
        if x.is_empty() {
            vec![]
        } else {
            to_quotient(x)
        }
    }

    pub fn ray_flat(&self, s: Split) -> EdgeSet {
        let side = s.side_without(self.n, self.root);
        let labels: BTreeSet<i64> = crate::moduli::weights::leaves_of(side).into_iter().map(|i| i as i64).collect();
        self.graph.edges_within(&labels)
    }

    pub fn ray_image(&self, s: Split) -> RayImage {
        let flat = self.ray_flat(s);
        let m = self.graph.num_edges();
        let image = if flat.is_empty() || flat == self.graph.all_edges() {
            vec![0; self.target_dim()]
        } else {
            let y = self.quotient(&to_q(&flat_ray(flat, m)));
            primitive(&y.iter().map(|v| v.to_integer().try_into().expect("small")).collect::<Vec<i64>>())
        };
        RayImage { split: s, flat, image }
    }

    /// The linear map on pair-basis coordinates: distances become edge
    /// coordinates `(d_ij − d_hi − d_hj)/2`, restricted to `G(w)`, modulo the all-ones line.
    pub fn project_point(&self, y: &[Q]) -> Vec<Q> {
        let d = distances_of_point(self.n, y);
        let h = self.root;
        let half = crate::lattice::q_frac(1, 2);
        let x: Vec<Q> = self
            .graph
            .edges()
            .iter()
            .map(|&(i, j)| {
                let (i, j) = (i as usize, j as usize);
                (&d[pair_index(self.n, i, j)] - &d[pair_index(self.n, h, i)] - &d[pair_index(self.n, h, j)]) * &half
            })
            .collect();
        self.quotient(&x)
    }

    pub fn cone_image(&self, t: &TreeType) -> ConeImage {
        let rays: Vec<Vec<i64>> = t.splits().iter().map(|&s| self.ray_image(s).image).collect();
        let dim = crate::lattice::rank_i64(&rays);
        ConeImage { tree: t.clone(), injective: dim == rays.len(), rays, dim }
    }
}

/// Rank of the images of the splits in `R^{E(G_t(w))}` modulo `Φ` restricted to
/// the total graph. Needs no heavy entry.
pub fn total_image_dim(w: &WeightVector, splits: &[Split]) -> usize {
    let n = w.n();
    let gt = w.total_graph();
    let restrict = |d: Vec<Q>| -> Vec<Q> {
        gt.edges().iter().map(|&(i, j)| d[pair_index(n, i as usize, j as usize)].clone()).collect()
    };
    let phi: Vec<Vec<Q>> =
        (1..=n as i64).map(|k| gt.edges().iter().map(|&(i, j)| q(i64::from(i == k || j == k))).collect()).collect();
    let mut rows = phi.clone();
    rows.extend(splits.iter().map(|s| restrict(split_distances(n, s.side()))));
    rank(&rows) - rank(&phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::to_q;
    use crate::moduli::m0n::split_ray;
    use crate::moduli::trees::{all_splits, enumerate_tree_types};

    fn w(s: &str) -> WeightVector {
        s.parse().unwrap()
    }

    fn split(n: usize, l: &[usize]) -> Split {
        Split::from_leaves(n, l).unwrap()
    }

    #[test]
    fn pair_positions() {
        let n = 6;
        let mut k = 0;
        for i in 1..=n {
            for j in i + 1..=n {
                assert_eq!(pair_index(n, i, j), k);
                assert_eq!(pair_index(n, j, i), k);
                k += 1;
            }
        }
    }

    #[test]
    fn worked_example_table() {
        let p = Projection::new(&w("1,1,3/4,3/4,1/4")).unwrap();
        let g = p.graph();
        let f3 = EdgeSet::singleton(g.edge_index(3, 4).unwrap());
        let v_f3 = p.ray_image(split(5, &[3, 4])).image;
        assert_eq!(p.ray_image(split(5, &[3, 4])).flat, f3);
        assert_eq!(p.ray_image(split(5, &[1, 2])).flat, f3);
        assert_eq!(p.ray_image(split(5, &[1, 2])).image, v_f3);
        assert!(p.ray_image(split(5, &[3, 5])).is_zero());
        assert!(p.ray_image(split(5, &[4, 5])).is_zero());
        assert!(!p.cone_image(&TreeType::parse(5, "[[3,4],[3,4,5]]").unwrap()).injective);
    }

    #[test]
    fn identity_for_all_ones() {
        for n in 4..=6 {
            let p = Projection::new(&WeightVector::ones(n).unwrap()).unwrap();
            for s in all_splits(n) {
                let neg: Vec<i64> = split_ray(n, s).iter().map(|x| -x).collect();
                assert_eq!(p.ray_image(s).image, neg);
            }
        }
    }

    // the linear map agrees with the flat description on every ray, for several roots
    #[test]
    fn linear_map_matches_dictionary() {
        for text in [
            "1,1,3/4,3/4,1/4",
            "3/4,1,1,3/4,1/4",
            "1/4,3/4,1,1,3/4,1/2",
            "1,1,1,1/6,1/6,1/6",
            "1,1,1/2,1/2,1/2,1/2,1/2",
        ] {
            let wv = w(text);
            let p = Projection::new(&wv).unwrap();
            for s in all_splits(wv.n()) {
                let img = p.project_point(&to_q(&split_ray(wv.n(), s)));
                let want = p.ray_image(s);
                assert_eq!(crate::lattice::primitive_q(&img), want.image, "{text} {s:?}");
                let no_edge_inside = want.flat.is_empty();
                if no_edge_inside {
                    assert!(want.is_zero());
                }
            }
        }
    }

    #[test]
    fn total_route_matches_reduced_route() {
        for text in ["1,1,3/4,3/4,1/4", "1,1,1,1/6,1/6,1/6", "1,1,1/2,1/2,1/2,1/3", "1,3/4,3/4,3/4,1/4,1/4"] {
            let wv = w(text);
            let Ok(p) = Projection::new(&wv) else { continue };
            if wv.heavy().len() < 2 {
                continue;
            }
            for t in enumerate_tree_types(wv.n(), false).unwrap() {
                assert_eq!(total_image_dim(&wv, t.splits()), p.cone_image(&t).dim, "{text} {t:?}");
            }
        }
    }
}

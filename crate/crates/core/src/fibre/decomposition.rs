//! Splitting the reduced weight graph into pieces glued along the large core.

use std::collections::BTreeSet;

use num_rational::BigRational as Q;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fibre::glue::glue_along;
use crate::graph::Graph;
use crate::moduli::WeightVector;

/// A small vertex `i` and `G_i(w)`, the core with `i` and its edges added.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallPiece {
    pub vertex: usize,
    pub degree: usize,
    pub graph: Graph,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightGraphDecomposition {
    pub root: usize,
    /// Vertices of `G(w)` with weight above one half.
    pub large: Vec<usize>,
    pub small: Vec<usize>,
    /// The complete graph on `large`.
    pub core: Graph,
    pub pieces: Vec<SmallPiece>,
    /// Small vertices of degree one.
    pub degree_one: Vec<usize>,
    /// The pieces of positive degree glued along the core.
    pub glued: Graph,
    /// Per glued piece, the glued index of each of its edges.
    pub edge_maps: Vec<Vec<usize>>,
}

impl WeightGraphDecomposition {
    /// Pieces that contribute edges outside the core.
    pub fn factors(&self) -> Vec<&SmallPiece> {
        self.pieces.iter().filter(|p| p.degree > 0).collect()
    }
}

fn edge_set(g: &Graph) -> BTreeSet<(i64, i64)> {
    g.edges().iter().copied().collect()
}

pub fn weight_graph_decomposition(w: &WeightVector) -> Result<WeightGraphDecomposition> {
    let root = w.root().ok_or(Error::NoHeavyVertex)?;
    let g = w.reduced_graph()?;
    let half = Q::new(1.into(), 2.into());
    let (large, small): (Vec<usize>, Vec<usize>) = (1..=w.n()).filter(|&i| i != root).partition(|&i| *w.get(i) > half);
    let labels = |s: &[usize]| s.iter().map(|&i| i as i64).collect::<BTreeSet<i64>>();
    let core = g.induced(&labels(&large));
    let pieces: Vec<SmallPiece> = small
        .iter()
        .map(|&i| {
            let mut vs = labels(&large);
            vs.insert(i as i64);
            SmallPiece { vertex: i, degree: g.degree(i as i64), graph: g.induced(&vs) }
        })
        .collect();
    let degree_one = pieces.iter().filter(|p| p.degree == 1).map(|p| p.vertex).collect();
    let parts: Vec<Graph> = pieces.iter().filter(|p| p.degree > 0).map(|p| p.graph.clone()).collect();
    let (glued, edge_maps) = if parts.is_empty() {
        (core.clone(), vec![(0..core.num_edges()).collect()])
    } else {
        glue_along(&parts, &core)?
    };
    if edge_set(&glued) != edge_set(&g) {
        return Err(Error::Dimension(format!("gluing the pieces of {w} does not give G(w)")));
    }
    Ok(WeightGraphDecomposition { root, large, small, core, pieces, degree_one, glued, edge_maps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibre::graphs::graph_predicates;

    #[test]
    fn obstruction_example() {
        let d = weight_graph_decomposition(&"1,1,3/4,3/4,1/4".parse().unwrap()).unwrap();
        assert_eq!((d.large.clone(), d.small.clone(), d.degree_one.clone()), (vec![2, 3, 4], vec![5], vec![5]));
        assert_eq!(d.core.num_edges(), 3);
        assert_eq!(d.pieces[0].graph.num_edges(), 4);
    }

    #[test]
    fn two_light_points() {
        let d = weight_graph_decomposition(&WeightVector::heavy_light(3, 2).unwrap()).unwrap();
        assert_eq!((d.large.clone(), d.small.clone()), (vec![2, 3], vec![4, 5]));
        assert!(d.pieces.iter().all(|p| p.degree == 2 && p.graph.num_edges() == 3));
        assert_eq!(d.glued.num_edges(), 5);
        assert!(d.degree_one.is_empty());
    }

    #[test]
    fn one_light_point() {
        let d = weight_graph_decomposition(&WeightVector::heavy_light(4, 1).unwrap()).unwrap();
        assert_eq!(d.pieces.len(), 1);
        assert_eq!(d.pieces[0].degree, 3);
        assert_eq!(d.glued.num_edges(), 6);
    }

    #[test]
    fn reduced_graphs_are_split() {
        for s in ["1,1,3/4,3/4,1/4", "1,1,1,1/8,1/8,1/8", "1,1,2/3,2/3,1/3,1/3", "1,1,1,1,1/2,1/4,1/4"] {
            let w: WeightVector = s.parse().unwrap();
            let p = graph_predicates(&w.reduced_graph().unwrap());
            assert!(p.is_split && p.is_chordal, "{s}");
            weight_graph_decomposition(&w).unwrap();
        }
    }
}

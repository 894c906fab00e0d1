//! Checks of fibre-product decompositions against Bergman fans of glued graphs,
//! and the two ways a fibre product can fail to be one.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bergman::chains_of_flats_fan;
use crate::error::Result;
use crate::fibre::decomposition::{weight_graph_decomposition, WeightGraphDecomposition};
use crate::fibre::glue::{glue_graphs, identity_embedding};
use crate::fibre::graphs::{graph_predicates, GraphPredicates};
use crate::fibre::preorder::Preorder;
use crate::fibre::product::{set_fibre_product, stable_fibre_product, FibreFactor, FibreFan};
use crate::graph::{EdgeSet, Graph};
use crate::matroid::GraphicMatroid;
use crate::moduli::{stable_types, WeightVector};

pub const DEFAULT_SAMPLES: usize = 1000;

/// Whether the maximum of `x` over every circuit is attained at least twice.
pub fn in_bergman(circuits: &[EdgeSet], x: &[i64]) -> bool {
    circuits.iter().all(|c| {
        let max = c.iter().map(|e| x[e]).max().expect("nonempty circuit");
        c.iter().filter(|&e| x[e] == max).count() >= 2
    })
}

/// The set-theoretic product compared with the nested-set fan of the glued graph.
#[derive(Clone, Debug, Serialize)]
pub struct SupportComparison {
    pub expected_dim: usize,
    pub product_dim: usize,
    pub glued_dim: usize,
    pub product_cells: usize,
    pub nested_cones: usize,
    pub weights_one: bool,
    pub pure: bool,
    /// Every product cell lies in `B(glued)`.
    pub product_in_glued: bool,
    /// Every nested cone restricts into each factor's Bergman fan.
    pub glued_in_product: bool,
    pub seed: u64,
    pub samples: usize,
    pub sample_failures: usize,
    /// Each nested cone lies in exactly one product cell.
    pub refines: bool,
    /// Nested cones inside each product cell.
    pub cell_refinement: Vec<usize>,
}

impl SupportComparison {
    pub fn supports_equal(&self) -> bool {
        self.product_in_glued && self.glued_in_product && self.sample_failures == 0
    }

    pub fn passed(&self) -> bool {
        self.supports_equal()
            && self.weights_one
            && self.pure
            && self.refines
            && self.product_dim == self.glued_dim
            && self.expected_dim == self.glued_dim
    }
}

/// Maximal nested-set cones of `B(g)` for the 1-connected building set, as preorders.
pub fn nested_preorders(g: &Graph) -> Result<Vec<Preorder>> {
    FibreFactor::new(g.clone(), (0..g.num_edges()).collect())?.cones()
}

pub fn compare_supports(
    glued: &Graph,
    base: EdgeSet,
    factors: &[FibreFactor],
    samples: usize,
    seed: u64,
) -> Result<(FibreFan, SupportComparison)> {
    let product = set_fibre_product(glued, base, factors)?;
    let circuits = GraphicMatroid::from_graph(glued.clone()).circuits()?;
    let factor_circuits: Vec<Vec<EdgeSet>> =
        factors.iter().map(|f| GraphicMatroid::from_graph(f.graph.clone()).circuits()).collect::<Result<_>>()?;
    let nested = nested_preorders(glued)?;
    let in_factors =
        |p: &Preorder| factors.iter().zip(&factor_circuits).all(|(f, cs)| p.restrict(&f.edges).inside_bergman(cs));
    let product_in_glued = product.cells.iter().all(|c| c.preorder.inside_bergman(&circuits));
    let glued_in_product = nested.iter().all(in_factors);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample_failures = 0;
    for k in 0..samples {
        let ok = if k % 2 == 0 && !product.cells.is_empty() {
            let c = &product.cells[rng.random_range(0..product.cells.len())];
            in_bergman(&circuits, &c.preorder.random_interior_point(&mut rng))
        } else {
            let p = &nested[rng.random_range(0..nested.len())];
            let x = p.random_interior_point(&mut rng);
            factors.iter().zip(&factor_circuits).all(|(f, cs)| {
                let y: Vec<i64> = f.edges.iter().map(|&e| x[e]).collect();
                in_bergman(cs, &y)
            })
        };
        if !ok {
            sample_failures += 1;
        }
    }

    let mut cell_refinement = vec![0; product.cells.len()];
    let mut refines = true;
    for p in &nested {
        let hits: Vec<usize> = (0..product.cells.len()).filter(|&i| p.is_inside(&product.cells[i].preorder)).collect();
        if let [i] = hits[..] {
            cell_refinement[i] += 1;
        } else {
            refines = false;
        }
    }
    let cmp = SupportComparison {
        expected_dim: product.expected_dim,
        product_dim: product.dim,
        glued_dim: GraphicMatroid::from_graph(glued.clone()).full_rank() - 1,
        product_cells: product.cells.len(),
        nested_cones: nested.len(),
        weights_one: product.weights_one(),
        pure: product.is_pure(),
        product_in_glued,
        glued_in_product,
        seed,
        samples,
        sample_failures,
        refines,
        cell_refinement,
    };
    Ok((product, cmp))
}

#[derive(Clone, Debug, Serialize)]
pub struct FibreTheoremReport {
    pub weights: WeightVector,
    pub heavy_light: bool,
    pub decomposition: WeightGraphDecomposition,
    pub predicates: GraphPredicates,
    pub comparison: SupportComparison,
    /// `w`-stable trivalent types, one per nested cone when `w` is heavy/light.
    pub stable_trivalent: usize,
    /// With two large vertices: each cell splits into `Π r!` nested cones,
    /// `r` counting factors whose lowest edge meets the same large vertices.
    pub factorial_refinement: Option<bool>,
    pub passed: bool,
}

pub fn verify_fibre_theorem(w: &WeightVector, samples: usize, seed: u64) -> Result<FibreTheoremReport> {
    let d = weight_graph_decomposition(w)?;
    let core_edges: Vec<usize> = {
        // the core's edges sit at the same positions in every glued piece
        let first = d.edge_maps[0].clone();
        let g0 = d.factors().first().map(|p| p.graph.clone()).unwrap_or_else(|| d.core.clone());
        d.core.edges().iter().map(|&(u, v)| first[g0.edge_index(u, v).expect("core edge")]).collect()
    };
    let base = EdgeSet::from_indices(core_edges);
    let factors: Vec<FibreFactor> = if d.factors().is_empty() {
        vec![FibreFactor::new(d.core.clone(), d.edge_maps[0].clone())?]
    } else {
        d.factors()
            .iter()
            .zip(&d.edge_maps)
            .map(|(p, map)| FibreFactor::new(p.graph.clone(), map.clone()))
            .collect::<Result<_>>()?
    };
    let (product, comparison) = compare_supports(&d.glued, base, &factors, samples, seed)?;
    let heavy_light = w.classify().heavy_light;
    let stable_trivalent = stable_types(w, true)?.len();
    let factorial_refinement = (d.large.len() == 2).then(|| {
        let touched = |f: &FibreFactor, p: &Preorder| -> Vec<i64> {
            let bottom = (0..p.size()).find(|&e| p.up_set(e).len() == p.size()).expect("lowest edge");
            let (a, b) = f.graph.edges()[bottom];
            [a, b].into_iter().filter(|v| d.large.contains(&(*v as usize))).collect()
        };
        let cones: Vec<Vec<Preorder>> = factors.iter().map(|f| f.cones().expect("factor cones")).collect();
        product.cells.iter().zip(&comparison.cell_refinement).all(|(cell, &count)| {
            let mut groups: std::collections::BTreeMap<Vec<i64>, usize> = Default::default();
            for (i, &j) in cell.sources[0].iter().enumerate() {
                *groups.entry(touched(&factors[i], &cones[i][j])).or_default() += 1;
            }
            let expected: usize = groups.values().map(|&r| (1..=r).product::<usize>()).product();
            expected == count
        })
    });
    let passed = comparison.passed()
        && (!heavy_light || stable_trivalent == comparison.nested_cones)
        && factorial_refinement != Some(false);
    Ok(FibreTheoremReport {
        weights: w.clone(),
        heavy_light,
        predicates: graph_predicates(&d.glued),
        decomposition: d,
        comparison,
        stable_trivalent,
        factorial_refinement,
        passed,
    })
}

/// Two disjoint edges, each completed to a path by a different cross edge:
/// the glued square has smaller rank than the fibre product has dimension.
#[derive(Clone, Debug, Serialize)]
pub struct SquareReport {
    pub glued: Graph,
    pub expected_dim: usize,
    pub set_theoretic_dim: usize,
    pub glued_rank: usize,
    pub glued_dim: usize,
    pub dimension_mismatch: bool,
}

pub fn square_counterexample() -> Result<SquareReport> {
    let g0 = Graph::new(vec![1, 2, 3, 4], vec![(1, 2), (3, 4)])?;
    let g1 = Graph::new(vec![1, 2, 3, 4], vec![(1, 2), (3, 4), (1, 3)])?;
    let g2 = Graph::new(vec![1, 2, 3, 4], vec![(1, 2), (3, 4), (2, 4)])?;
    let id = identity_embedding(&g0);
    let glued = glue_graphs(&g1, &g0, &g2, &id, &id)?;
    let factors = [FibreFactor::new(g1, glued.edges1.clone())?, FibreFactor::new(g2, glued.edges2.clone())?];
    let product = set_fibre_product(&glued.result, glued.shared_edges(), &factors)?;
    let glued_rank = GraphicMatroid::from_graph(glued.result.clone()).full_rank();
    // dimensions in R^E, lineality included
    Ok(SquareReport {
        glued: glued.result,
        expected_dim: product.expected_dim + 1,
        set_theoretic_dim: product.dim + 1,
        glued_rank,
        glued_dim: glued_rank - 1,
        dimension_mismatch: product.expected_dim + 1 != glued_rank,
    })
}

/// Two 4-cycles glued along a path of length two: the glued graph is not chordal
/// and the product has a codimension-one face with four cells around it.
#[derive(Clone, Debug, Serialize)]
pub struct NonChordalReport {
    pub glued: Graph,
    pub predicates: GraphPredicates,
    pub expected_dim: usize,
    pub stable_cells: usize,
    pub stable_max_at_codim_one: usize,
    pub glued_max_at_codim_one: usize,
    pub set_theoretic_dim: usize,
    pub set_theoretic_pure: bool,
    pub excess_rays: bool,
}

pub fn non_chordal_counterexample() -> Result<NonChordalReport> {
    let g0 = Graph::new(vec![1, 3, 5], vec![(1, 5), (5, 3)])?;
    let g1 = Graph::new(vec![1, 2, 3, 5], vec![(1, 2), (2, 3), (3, 5), (5, 1)])?;
    let g2 = Graph::new(vec![1, 3, 4, 5], vec![(1, 4), (4, 3), (3, 5), (5, 1)])?;
    let id = identity_embedding(&g0);
    let glued = glue_graphs(&g1, &g0, &g2, &id, &id)?;
    let factors = [FibreFactor::new(g1, glued.edges1.clone())?, FibreFactor::new(g2, glued.edges2.clone())?];
    let base = glued.shared_edges();
    let stable = stable_fibre_product(&glued.result, base, &factors)?;
    let set = set_fibre_product(&glued.result, base, &factors)?;
    let chains = chains_of_flats_fan(&GraphicMatroid::from_graph(glued.result.clone()))?;
    let glued_max = chains.fan.codim_one_faces().values().map(Vec::len).max().unwrap_or(0);
    let stable_max = stable.max_cells_at_codim_one();
    Ok(NonChordalReport {
        predicates: graph_predicates(&glued.result),
        glued: glued.result,
        expected_dim: stable.expected_dim,
        stable_cells: stable.cells.len(),
        stable_max_at_codim_one: stable_max,
        glued_max_at_codim_one: glued_max,
        set_theoretic_dim: set.dim,
        set_theoretic_pure: set.is_pure(),
        excess_rays: stable_max > glued_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_light_points() {
        let r = verify_fibre_theorem(&WeightVector::heavy_light(3, 2).unwrap(), 200, 7).unwrap();
        assert!(r.passed, "{r:#?}");
        assert_eq!((r.comparison.product_cells, r.comparison.nested_cones), (9, 12));
        assert_eq!(r.factorial_refinement, Some(true));
        let mut split = r.comparison.cell_refinement.clone();
        split.sort_unstable();
        assert_eq!(split, vec![1, 1, 1, 1, 1, 1, 2, 2, 2]);
    }

    #[test]
    fn one_light_point() {
        let r = verify_fibre_theorem(&WeightVector::heavy_light(4, 1).unwrap(), 100, 1).unwrap();
        assert!(r.passed);
        assert_eq!(r.comparison.nested_cones, 15);
    }

    #[test]
    fn square() {
        let r = square_counterexample().unwrap();
        assert_eq!((r.expected_dim, r.set_theoretic_dim, r.glued_rank, r.glued_dim), (4, 4, 3, 2));
        assert!(r.dimension_mismatch);
    }

    #[test]
    fn non_chordal() {
        let r = non_chordal_counterexample().unwrap();
        assert!(!r.predicates.is_chordal);
        assert_eq!(r.stable_max_at_codim_one, 4);
        assert!(r.glued_max_at_codim_one <= 3);
        assert!(r.excess_rays);
    }
}

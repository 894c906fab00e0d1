//! Fibre products of graphic Bergman fans over coordinate projections.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::bergman::{nested_set_fan, one_connected_building_set};
use crate::error::{Error, Result};
use crate::fan::WeightedFan;
use crate::fibre::preorder::Preorder;
use crate::graph::{EdgeSet, Graph};
use crate::lattice::elementary_divisors;
use crate::matroid::GraphicMatroid;

/// A factor graph and the glued index of each of its edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibreFactor {
    pub graph: Graph,
    pub edges: Vec<usize>,
}

impl FibreFactor {
    pub fn new(graph: Graph, edges: Vec<usize>) -> Result<Self> {
        if edges.len() != graph.num_edges() {
            return Err(Error::InvalidEmbedding("one glued index per factor edge required".into()));
        }
        Ok(FibreFactor { graph, edges })
    }

    pub fn ground(&self) -> EdgeSet {
        EdgeSet::from_indices(self.edges.iter().copied())
    }

    fn rank(&self) -> usize {
        GraphicMatroid::from_graph(self.graph.clone()).full_rank()
    }

    /// Maximal nested-set cones for the 1-connected building set, as preorders.
    pub fn cones(&self) -> Result<Vec<Preorder>> {
        let m = GraphicMatroid::from_graph(self.graph.clone());
        let nested = nested_set_fan(&m, &one_connected_building_set(&m)?)?;
        Ok(nested.cone_flats().iter().map(|c| Preorder::from_laminar(m.ground_size(), c)).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductKind {
    /// Every tuple of cones with compatible images.
    SetTheoretic,
    /// Only the cells surviving a generic displacement of the diagonal.
    Stable,
}

/// A top cell: a cone in glued coordinates with its weight and the factor cones producing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibreCell {
    #[serde(skip)]
    pub preorder: Preorder,
    pub sources: Vec<Vec<usize>>,
    pub weight: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FibreFan {
    pub kind: ProductKind,
    pub glued: Graph,
    pub base: EdgeSet,
    pub factors: Vec<FibreFactor>,
    /// `Σ rank(M_i) − (s−1)·rank(M_0) − 1`, the dimension modulo lineality.
    pub expected_dim: usize,
    /// Largest cell dimension modulo lineality.
    pub dim: usize,
    pub cells: Vec<FibreCell>,
    /// Cells of smaller dimension lying in no top cell.
    #[serde(skip)]
    pub lower: Vec<Preorder>,
}

impl FibreFan {
    pub fn dimension_mismatch(&self) -> bool {
        self.dim != self.expected_dim
    }

    pub fn is_pure(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn weights_one(&self) -> bool {
        self.cells.iter().all(|c| c.weight == 1)
    }

    /// Codimension-one faces of the top cells with the cells around each.
    pub fn codim_one_faces(&self) -> BTreeMap<Preorder, Vec<usize>> {
        let mut faces: BTreeMap<Preorder, Vec<usize>> = BTreeMap::new();
        for (i, c) in self.cells.iter().enumerate() {
            for f in c.preorder.facets() {
                faces.entry(f).or_default().push(i);
            }
        }
        faces
    }

    pub fn max_cells_at_codim_one(&self) -> usize {
        self.codim_one_faces().values().map(Vec::len).max().unwrap_or(0)
    }

    /// The top cells as a fan in the `B'` coordinates of the glued graph.
    pub fn fan(&self) -> Result<WeightedFan> {
        cells_to_fan(
            self.glued.num_edges(),
            &self.cells.iter().map(|c| (c.preorder.clone(), c.weight)).collect::<Vec<_>>(),
        )
    }
}

/// Preorder cells to a fan modulo the all-ones line, with rays `−1_D`.
pub fn cells_to_fan(m: usize, cells: &[(Preorder, u64)]) -> Result<WeightedFan> {
    let mut ray_index: BTreeMap<EdgeSet, usize> = BTreeMap::new();
    let mut cones = Vec::new();
    for (p, _) in cells {
        let mut cone = Vec::new();
        for d in p.ray_sets() {
            let next = ray_index.len();
            cone.push(*ray_index.entry(d).or_insert(next));
        }
        cones.push(cone);
    }
    let mut rays = vec![vec![]; ray_index.len()];
    for (d, &i) in &ray_index {
        rays[i] = crate::bergman::flat_ray(*d, m);
    }
    let weights = cells.iter().map(|(_, w)| *w).collect();
    WeightedFan::new(m, rays, vec![vec![1; m]], cones, weights)?.quotient_lineality()
}

fn expected_dim(factors: &[FibreFactor], base_rank: usize) -> usize {
    let total: usize = factors.iter().map(FibreFactor::rank).sum();
    total - (factors.len() - 1) * base_rank - 1
}

fn base_rank(glued: &Graph, base: EdgeSet) -> usize {
    GraphicMatroid::from_graph(glued.clone()).rank_unchecked(base)
}

fn check_factors(glued: &Graph, base: EdgeSet, factors: &[FibreFactor]) -> Result<()> {
    if factors.is_empty() {
        return Err(Error::InvalidEmbedding("no factors".into()));
    }
    let mut union = EdgeSet::EMPTY;
    for (i, f) in factors.iter().enumerate() {
        if f.edges.iter().any(|&e| e >= glued.num_edges()) {
            return Err(Error::InvalidEmbedding("edge index outside the glued graph".into()));
        }
        if !base.is_subset(f.ground()) {
            return Err(Error::InvalidEmbedding(format!("factor {i} misses a base edge")));
        }
        for g in &factors[i + 1..] {
            if f.ground().intersection(g.ground()) != base {
                return Err(Error::InvalidEmbedding("factors overlap outside the base".into()));
            }
        }
        union = union.union(f.ground());
    }
    if union != glued.all_edges() {
        return Err(Error::InvalidEmbedding("factors do not cover the glued graph".into()));
    }
    Ok(())
}

/// Index of the lattice generated by the classes' traces on the base, in the
/// `(s−1)`-fold difference coordinates, inside its saturation.
fn lattice_weight(base: EdgeSet, factors: &[FibreFactor], cones: &[&Preorder]) -> u64 {
    let pos: Vec<usize> = base.iter().collect();
    let k = pos.len();
    let s = factors.len();
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for (i, (f, p)) in factors.iter().zip(cones).enumerate() {
        for class in p.classes() {
            let trace: Vec<i64> = pos.iter().map(|&e| i64::from(class.iter().any(|x| f.edges[x] == e))).collect();
            if trace.iter().all(|&x| x == 0) {
                continue;
            }
            let mut row = vec![BigInt::from(0); k * (s - 1)];
            for (j, &t) in trace.iter().enumerate() {
                if i + 1 < s {
                    row[i * k + j] += t;
                }
                if i > 0 {
                    row[(i - 1) * k + j] -= t;
                }
            }
            gens.push(row);
        }
    }
    if gens.is_empty() || k == 0 || s == 1 {
        return 1;
    }
    elementary_divisors(&gens).iter().fold(BigInt::one(), |a, d| a * d).to_u64().expect("index fits in u64")
}

/// The set-theoretic fibre product `{x : x|E_i ∈ B(G_i)}` with its conewise cells.
pub fn set_fibre_product(glued: &Graph, base: EdgeSet, factors: &[FibreFactor]) -> Result<FibreFan> {
    check_factors(glued, base, factors)?;
    let m = glued.num_edges();
    let cones: Vec<Vec<Preorder>> = factors.iter().map(FibreFactor::cones).collect::<Result<_>>()?;
    let pushed: Vec<Vec<Preorder>> =
        factors.iter().zip(&cones).map(|(f, cs)| cs.iter().map(|c| c.push_forward(&f.edges, m)).collect()).collect();
    // cell → one source tuple per way of reaching it
    let mut cells: BTreeMap<Preorder, Vec<Vec<usize>>> = BTreeMap::new();
    cells.insert(Preorder::free(m), vec![vec![]]);
    for layer in &pushed {
        let mut next: BTreeMap<Preorder, Vec<Vec<usize>>> = BTreeMap::new();
        for (cell, sources) in &cells {
            for (j, c) in layer.iter().enumerate() {
                let entry = next.entry(cell.meet(c)).or_default();
                for s in sources {
                    let mut t = s.clone();
                    t.push(j);
                    entry.push(t);
                }
            }
        }
        cells = next;
    }
    finish(ProductKind::SetTheoretic, glued, base, factors, &cones, cells)
}

fn finish(
    kind: ProductKind,
    glued: &Graph,
    base: EdgeSet,
    factors: &[FibreFactor],
    cones: &[Vec<Preorder>],
    cells: BTreeMap<Preorder, Vec<Vec<usize>>>,
) -> Result<FibreFan> {
    let top_dim = cells.keys().map(Preorder::dim).max().unwrap_or(1);
    let mut top = Vec::new();
    let mut low = Vec::new();
    for (p, sources) in cells {
        if p.dim() == top_dim {
            let weight = match kind {
                ProductKind::SetTheoretic => {
                    let t = &sources[0];
                    let cs: Vec<&Preorder> = t.iter().enumerate().map(|(i, &j)| &cones[i][j]).collect();
                    lattice_weight(base, factors, &cs)
                }
                ProductKind::Stable => sources
                    .iter()
                    .map(|t| {
                        let cs: Vec<&Preorder> = t.iter().enumerate().map(|(i, &j)| &cones[i][j]).collect();
                        lattice_weight(base, factors, &cs)
                    })
                    .sum(),
            };
            top.push(FibreCell { preorder: p, sources, weight });
        } else {
            low.push(p);
        }
    }
    let lower = low.into_iter().filter(|p| !top.iter().any(|c| p.is_inside(&c.preorder))).collect();
    Ok(FibreFan {
        kind,
        glued: glued.clone(),
        base,
        factors: factors.to_vec(),
        expected_dim: expected_dim(factors, base_rank(glued, base)),
        dim: top_dim - 1,
        cells: top,
        lower,
    })
}

/// Largest base size handled by the displacement construction.
pub const MAX_STABLE_BASE: usize = 6;

/// The fibre product over a forest base, computed by displacing the diagonal
/// generically: a pair of top cones contributes when the displaced fibre meets
/// it, and weights add up over contributing pairs.
pub fn stable_fibre_product(glued: &Graph, base: EdgeSet, factors: &[FibreFactor]) -> Result<FibreFan> {
    check_factors(glued, base, factors)?;
    if factors.len() != 2 {
        return Err(Error::InvalidEmbedding("the displaced product takes two factors".into()));
    }
    if base_rank(glued, base) != base.len() {
        return Err(Error::InvalidEmbedding("the base must be a forest".into()));
    }
    if base.len() > MAX_STABLE_BASE {
        return Err(Error::TooLarge { what: "base edges", actual: base.len(), limit: MAX_STABLE_BASE });
    }
    let m = glued.num_edges();
    let cones: Vec<Vec<Preorder>> = factors.iter().map(FibreFactor::cones).collect::<Result<_>>()?;
    let shift: Vec<i128> = (0..base.len()).map(|j| 1000i128.pow(j as u32 + 1)).collect();
    let expected = expected_dim(factors, base.len()) + 1;
    let mut cells: BTreeMap<Preorder, Vec<Vec<usize>>> = BTreeMap::new();
    for (a, p) in cones[0].iter().enumerate() {
        for (b, q) in cones[1].iter().enumerate() {
            if !displaced_feasible(base, &factors[0], p, &factors[1], q, &shift) {
                continue;
            }
            let cell = p.push_forward(&factors[0].edges, m).meet(&q.push_forward(&factors[1].edges, m));
            if cell.dim() == expected {
                cells.entry(cell).or_default().push(vec![a, b]);
            }
        }
    }
    finish(ProductKind::Stable, glued, base, factors, &cones, cells)
}

// x ∈ σ₁, y ∈ σ₂ with x_e − y_e = v_e on the base: a system of difference
// constraints, feasible iff its constraint graph has no negative cycle
fn displaced_feasible(
    base: EdgeSet,
    f1: &FibreFactor,
    p: &Preorder,
    f2: &FibreFactor,
    q: &Preorder,
    v: &[i128],
) -> bool {
    let n1 = f1.edges.len();
    let n = n1 + f2.edges.len();
    // arc (u, w, c) encodes  x_w − x_u ≤ c
    let mut arcs: Vec<(usize, usize, i128)> = Vec::new();
    for e in 0..n1 {
        for f in p.up_set(e).iter() {
            arcs.push((f, e, 0));
        }
    }
    for e in 0..f2.edges.len() {
        for f in q.up_set(e).iter() {
            arcs.push((n1 + f, n1 + e, 0));
        }
    }
    for (j, g) in base.iter().enumerate() {
        let x = f1.edges.iter().position(|&e| e == g).expect("base edge");
        let y = n1 + f2.edges.iter().position(|&e| e == g).expect("base edge");
        arcs.push((y, x, v[j]));
        arcs.push((x, y, -v[j]));
    }
    let mut dist = vec![0i128; n];
    for _ in 0..n {
        let mut changed = false;
        for &(u, w, c) in &arcs {
            if dist[u] + c < dist[w] {
                dist[w] = dist[u] + c;
                changed = true;
            }
        }
        if !changed {
            return true;
        }
    }
    false
}

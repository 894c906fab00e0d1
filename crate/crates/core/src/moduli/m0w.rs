//! Weighted moduli fans: the heavy/light fan, obstructions otherwise, and the
//! Losev–Manin case.

use serde::Serialize;

use crate::bergman::{chains_of_flats_fan, nested_set_fan, one_connected_building_set, FlatFan};
use crate::error::{Error, Result};
use crate::fan::WeightedFan;
use crate::graph::Graph;
use crate::matroid::GraphicMatroid;
use crate::moduli::m0n::{ambient_dim, split_ray, ModuliFan};
use crate::moduli::projection::Projection;
use crate::moduli::trees::{all_splits, enumerate_tree_types, type_key, TreeType};
use crate::moduli::unstable::codim_one_neighbours;
use crate::moduli::weights::WeightVector;

/// Why no balanced fan structure exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    /// A stable codimension-one type with exactly one stable trivalent resolution.
    UnivalentFace { face: TreeType, resolution: TreeType },
    /// A maximal stable type of too small dimension.
    NonPure { cone: TreeType, dim: usize },
    /// The stable cones, placed in `M_{0,n}`, fail to balance at this face.
    Unbalanced { face: TreeType },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub weights: WeightVector,
    pub obstruction: Obstruction,
    pub stable_trivalent: usize,
}

/// A stable trivalent type and the nested-set cone it maps onto.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeCone {
    pub tree: TreeType,
    pub cone: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct M0wFan {
    pub weights: WeightVector,
    pub root: usize,
    pub graph: Graph,
    /// Nested-set fan of `B'(G(w))`.
    pub fan: FlatFan,
    pub correspondence: Vec<TypeCone>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum M0wOutcome {
    Fan(Box<M0wFan>),
    Obstruction(ObstructionReport),
}

impl M0wOutcome {
    pub fn fan(&self) -> Option<&M0wFan> {
        match self {
            M0wOutcome::Fan(f) => Some(f),
            M0wOutcome::Obstruction(_) => None,
        }
    }

    pub fn obstruction(&self) -> Option<&ObstructionReport> {
        match self {
            M0wOutcome::Fan(_) => None,
            M0wOutcome::Obstruction(o) => Some(o),
        }
    }
}

/// `w`-stable types in canonical order.
pub fn stable_types(w: &WeightVector, only_trivalent: bool) -> Result<Vec<TreeType>> {
    Ok(enumerate_tree_types(w.n(), only_trivalent)?.into_iter().filter(|t| t.is_w_stable(w)).collect())
}

/// The stable trivalent cones as a subfan of `M_{0,n}`.
pub fn stable_subfan(w: &WeightVector) -> Result<ModuliFan> {
    let n = w.n();
    let types = stable_types(w, true)?;
    let splits: Vec<_> = all_splits(n).into_iter().filter(|&s| types.iter().any(|t| t.contains(s))).collect();
    let rays = splits.iter().map(|&s| split_ray(n, s)).collect();
    let cones = types.iter().map(|t| type_key(&splits, t)).collect();
    let fan = WeightedFan::new(ambient_dim(n), rays, vec![], cones, vec![1; types.len()])?;
    Ok(ModuliFan { n, fan, splits, types })
}

/// The nested-set fan of `B'(G(w))` when `w` is heavy/light, an obstruction otherwise.
pub fn m0w_fan(w: &WeightVector) -> Result<M0wOutcome> {
    if w.classify().heavy_light {
        if w.heavy().len() < 2 {
            return Err(Error::FewerThanTwoHeavy);
        }
        heavy_light_fan(w).map(|f| M0wOutcome::Fan(Box::new(f)))
    } else {
        let obstruction =
            find_obstruction(w)?.ok_or_else(|| Error::Dimension(format!("no obstruction found for {w}")))?;
        Ok(M0wOutcome::Obstruction(ObstructionReport {
            weights: w.clone(),
            obstruction,
            stable_trivalent: stable_types(w, true)?.len(),
        }))
    }
}

fn heavy_light_fan(w: &WeightVector) -> Result<M0wFan> {
    let p = Projection::new(w)?;
    let m = GraphicMatroid::from_graph(p.graph().clone());
    let g = one_connected_building_set(&m)?;
    let fan = nested_set_fan(&m, &g)?.quotient()?;
    let mut hit = vec![false; fan.fan.maximal_cones.len()];
    let mut correspondence = Vec::new();
    for t in stable_types(w, true)? {
        let mut rays = t
            .splits()
            .iter()
            .map(|&s| fan.ray_of(p.ray_flat(s)))
            .collect::<Option<Vec<usize>>>()
            .ok_or_else(|| Error::Dimension(format!("a split of {t:?} is not sent to a nested-set ray")))?;
        rays.sort_unstable();
        let cone = fan
            .fan
            .maximal_cones
            .iter()
            .position(|c| *c == rays)
            .ok_or_else(|| Error::Dimension(format!("{t:?} is not sent onto a maximal cone")))?;
        if hit[cone] {
            return Err(Error::Dimension(format!("two stable types share cone {cone}")));
        }
        hit[cone] = true;
        correspondence.push(TypeCone { tree: t, cone });
    }
    if hit.contains(&false) {
        return Err(Error::Dimension("a nested-set cone has no stable type".into()));
    }
    Ok(M0wFan { weights: w.clone(), root: p.root(), graph: p.graph().clone(), fan, correspondence })
}

/// Searches for a univalent face, then a non-pure maximal cone, then an
/// unbalanced face of the stable subfan.
pub fn find_obstruction(w: &WeightVector) -> Result<Option<Obstruction>> {
    let n = w.n();
    let top = enumerate_tree_types(n, true)?;
    let stable_top: Vec<bool> = top.iter().map(|t| t.is_w_stable(w)).collect();
    let faces = codim_one_neighbours(&top);
    let stable = stable_types(w, false)?;
    for t in stable.iter().filter(|t| t.splits().len() + 4 == n) {
        let resolutions: Vec<usize> = faces[t].iter().copied().filter(|&i| stable_top[i]).collect();
        if let [only] = resolutions[..] {
            return Ok(Some(Obstruction::UnivalentFace { face: t.clone(), resolution: top[only].clone() }));
        }
    }
    let splits = all_splits(n);
    for t in stable.iter().filter(|t| !t.is_trivalent()) {
        let extendable = splits
            .iter()
            .filter(|&&s| !t.contains(s) && t.splits().iter().all(|x| x.compatible(s)))
            .any(|&s| t.with(s).is_ok_and(|u| u.is_w_stable(w)));
        if !extendable {
            return Ok(Some(Obstruction::NonPure { cone: t.clone(), dim: t.splits().len() }));
        }
    }
    let sub = stable_subfan(w)?;
    if sub.types.is_empty() {
        return Ok(None);
    }
    let report = sub.fan.check_balanced()?;
    Ok(report.first_violation().map(|face| Obstruction::Unbalanced {
        face: TreeType::new(n, face.iter().map(|&i| sub.splits[i]).collect()).expect("face of a type"),
    }))
}

/// The Losev–Manin fan: chains of flats of the star with `t` edges, modulo lineality.
pub fn losev_manin_fan(t: usize) -> Result<FlatFan> {
    if t < 2 {
        return Err(Error::InvalidWeights(format!("need t ≥ 2, got {t}")));
    }
    let star = Graph::star(2, 3..=(t as i64 + 2))?;
    chains_of_flats_fan(&GraphicMatroid::from_graph(star))?.quotient()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> WeightVector {
        s.parse().unwrap()
    }

    #[test]
    fn worked_example_obstruction() {
        let out = m0w_fan(&w("1,1,3/4,3/4,1/4")).unwrap();
        let o = out.obstruction().unwrap();
        assert_eq!(o.stable_trivalent, 9);
        assert_eq!(
            o.obstruction,
            Obstruction::UnivalentFace {
                face: TreeType::parse(5, "[[3,4,5]]").unwrap(),
                resolution: TreeType::parse(5, "[[3,4],[3,4,5]]").unwrap(),
            }
        );
        let sub = stable_subfan(&w("1,1,3/4,3/4,1/4")).unwrap();
        let report = sub.fan.check_balanced().unwrap();
        assert!(!report.balanced);
        let face = vec![sub.ray_of(crate::moduli::Split::from_leaves(5, &[3, 4, 5]).unwrap()).unwrap()];
        assert!(report.violations.contains(&face));
    }

    #[test]
    fn heavy_light_examples() {
        let out = m0w_fan(&w("1,1,1/8,1/8,1/8")).unwrap();
        let f = out.fan().unwrap();
        assert_eq!(f.fan.fan.maximal_cones.len(), 6);
        assert_eq!(f.fan.fan.ambient_rank, 2);
        assert!(f.fan.fan.check_balanced().unwrap().balanced);
        let out = m0w_fan(&WeightVector::ones(6).unwrap()).unwrap();
        assert_eq!(out.fan().unwrap().correspondence.len(), 105);
        assert!(m0w_fan(&w("1,3/4,3/4,1/4,1/4")).unwrap().obstruction().is_some());
    }

    #[test]
    fn losev_manin_counts() {
        for t in 2..=5usize {
            let f = losev_manin_fan(t).unwrap();
            assert_eq!(f.fan.rays.len(), (1 << t) - 2);
            assert_eq!(f.fan.maximal_cones.len(), (1..=t).product::<usize>());
            let m0w = m0w_fan(&WeightVector::heavy_light(2, t).unwrap()).unwrap();
            assert!(m0w.fan().unwrap().fan.fan.same_as(&f.fan));
            assert!(stable_types(&WeightVector::heavy_light(2, t).unwrap(), false)
                .unwrap()
                .iter()
                .all(TreeType::is_caterpillar));
        }
        assert!(losev_manin_fan(1).is_err());
    }
}

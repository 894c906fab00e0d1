//! Inherited unstable cones: unstable top cones, closed under univalent faces.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::Result;
use crate::moduli::projection::total_image_dim;
use crate::moduli::trees::{enumerate_tree_types, TreeType};
use crate::moduli::weights::WeightVector;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnstableCones {
    /// `layers[0]` are the unstable trivalent types; `layers[k+1]` those forced
    /// by a face whose other neighbours lie in earlier layers.
    pub layers: Vec<Vec<TreeType>>,
}

impl UnstableCones {
    pub fn all(&self) -> BTreeSet<TreeType> {
        self.layers.iter().flatten().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, t: &TreeType) -> bool {
        self.layers.iter().any(|l| l.contains(t))
    }

    /// Layer index of a type, if inherited unstable.
    pub fn layer_of(&self, t: &TreeType) -> Option<usize> {
        self.layers.iter().position(|l| l.contains(t))
    }
}

/// Codimension-one types with their trivalent resolutions (indices into `top`).
pub fn codim_one_neighbours(top: &[TreeType]) -> BTreeMap<TreeType, Vec<usize>> {
    let mut faces: BTreeMap<TreeType, Vec<usize>> = BTreeMap::new();
    for (i, t) in top.iter().enumerate() {
        for &s in t.splits() {
            faces.entry(t.without(s)).or_default().push(i);
        }
    }
    faces
}

pub fn inherited_unstable(w: &WeightVector) -> Result<UnstableCones> {
    let top = enumerate_tree_types(w.n(), true)?;
    let faces = codim_one_neighbours(&top);
    let mut inside: Vec<bool> = top.iter().map(|t| !t.is_w_stable(w)).collect();
    let mut layers = vec![top.iter().zip(&inside).filter(|(_, &u)| u).map(|(t, _)| t.clone()).collect::<Vec<_>>()];
    loop {
        let mut next = Vec::new();
        for (i, t) in top.iter().enumerate() {
            if inside[i] {
                continue;
            }
            let forced = t.splits().iter().any(|&s| faces[&t.without(s)].iter().all(|&j| j == i || inside[j]));
            if forced {
                next.push(i);
            }
        }
        if next.is_empty() {
            break;
        }
        for &i in &next {
            inside[i] = true;
        }
        layers.push(next.into_iter().map(|i| top[i].clone()).collect());
    }
    Ok(UnstableCones { layers })
}

/// Trivalent types on which the projection drops dimension.
pub fn non_injective_types(w: &WeightVector) -> Result<BTreeSet<TreeType>> {
    let n = w.n();
    Ok(enumerate_tree_types(n, true)?.into_iter().filter(|t| total_image_dim(w, t.splits()) < n - 3).collect())
}

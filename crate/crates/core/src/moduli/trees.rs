//! Splits, combinatorial tree types and metric trees on `n` marked leaves.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Q;
use crate::moduli::weights::{leaf_bit, leaves_of, ChamberSignature, WeightVector};

/// Leaf counts accepted by the enumeration routines.
pub const MIN_LEAVES: usize = 4;
pub const MAX_ENUM_LEAVES: usize = 8;

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n < MIN_LEAVES {
        return Err(Error::InvalidWeights(format!("need n ≥ {MIN_LEAVES}, got {n}")));
    }
    if n > MAX_ENUM_LEAVES {
        return Err(Error::TooLarge { what: "leaf count", actual: n, limit: MAX_ENUM_LEAVES });
    }
    Ok(())
}

/// A split of `[n]`, stored by the side not containing leaf 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Split {
    side: u32,
}

impl Split {
    /// Canonicalizes either side; `None` unless both sides have at least two leaves.
    pub fn new(n: usize, side: u32) -> Option<Split> {
        let all = (1u32 << n) - 1;
        let side = side & all;
        let side = if side & 1 == 1 { all & !side } else { side };
        let k = side.count_ones() as usize;
        (k >= 2 && k + 2 <= n).then_some(Split { side })
    }

    pub fn from_leaves(n: usize, leaves: &[usize]) -> Option<Split> {
        if leaves.iter().any(|&i| i == 0 || i > n) {
            return None;
        }
        Split::new(n, leaves.iter().fold(0, |m, &i| m | leaf_bit(i)))
    }

    /// The side without leaf 1, as a bitmask.
    pub fn side(self) -> u32 {
        self.side
    }

    pub fn leaves(self) -> Vec<usize> {
        leaves_of(self.side)
    }

    pub fn len(self) -> usize {
        self.side.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.side == 0
    }

    /// The side not containing leaf `h`.
    pub fn side_without(self, n: usize, h: usize) -> u32 {
        if self.side & leaf_bit(h) == 0 {
            self.side
        } else {
            ((1u32 << n) - 1) & !self.side
        }
    }

    /// Nested or disjoint canonical sides.
    pub fn compatible(self, other: Split) -> bool {
        let (a, b) = (self.side, other.side);
        a & b == 0 || a & !b == 0 || b & !a == 0
    }

    /// Canonical order: by size, then by sorted leaf list.
    pub fn canonical_cmp(&self, other: &Split) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.leaves().cmp(&other.leaves()))
    }
}

impl fmt::Debug for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.leaves())
    }
}

impl Serialize for Split {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.leaves())
    }
}

/// All splits of `[n]` in canonical order.
pub fn all_splits(n: usize) -> Vec<Split> {
    let mut v: Vec<Split> = (0u32..1 << n).filter(|s| s & 1 == 0).filter_map(|s| Split::new(n, s)).collect();
    v.sort_by(Split::canonical_cmp);
    v
}

/// A vertex of a tree type: its leaves and its number of bounded edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeVertex {
    pub leaves: u32,
    pub edges: usize,
}

/// A combinatorial type: pairwise compatible splits, sorted canonically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeType {
    n: usize,
    splits: Vec<Split>,
}

impl TreeType {
    pub fn new(n: usize, mut splits: Vec<Split>) -> Result<Self> {
        splits.sort_by(Split::canonical_cmp);
        splits.dedup();
        for (i, a) in splits.iter().enumerate() {
            for b in &splits[i + 1..] {
                if !a.compatible(*b) {
                    return Err(Error::Parse(format!("incompatible splits {a:?} and {b:?}")));
                }
            }
        }
        Ok(TreeType { n, splits })
    }

    /// Parses `[[4,5],[3,4,5]]`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let lists: Vec<Vec<usize>> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let splits = lists
            .iter()
            .map(|l| Split::from_leaves(n, l).ok_or_else(|| Error::Parse(format!("{l:?} is not a split of [{n}]"))))
            .collect::<Result<Vec<_>>>()?;
        TreeType::new(n, splits)
    }

    /// The tree with no bounded edges.
    pub fn star(n: usize) -> Self {
        TreeType { n, splits: vec![] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    pub fn is_trivalent(&self) -> bool {
        self.splits.len() + 3 == self.n
    }

    pub fn contains(&self, s: Split) -> bool {
        self.splits.contains(&s)
    }

    pub fn without(&self, s: Split) -> TreeType {
        TreeType { n: self.n, splits: self.splits.iter().copied().filter(|&x| x != s).collect() }
    }

    pub fn with(&self, s: Split) -> Result<TreeType> {
        let mut v = self.splits.clone();
        v.push(s);
        TreeType::new(self.n, v)
    }

    /// Vertices: one below each split (canonical side) plus the vertex holding leaf 1.
    pub fn vertices(&self) -> Vec<TreeVertex> {
        let all = (1u32 << self.n) - 1;
        let children = |parent: u32| -> Vec<u32> {
            self.splits
                .iter()
                .map(|s| s.side())
                .filter(|&c| c != parent && c & !parent == 0)
                .filter(|&c| {
                    !self
                        .splits
                        .iter()
                        .any(|s| s.side() != c && s.side() != parent && c & !s.side() == 0 && s.side() & !parent == 0)
                })
                .collect()
        };
        let vertex = |region: u32, up: usize| {
            let kids = children(region);
            let covered = kids.iter().fold(0, |m, &c| m | c);
            TreeVertex { leaves: region & !covered, edges: up + kids.len() }
        };
        let mut v = vec![vertex(all, 0)];
        v.extend(self.splits.iter().map(|s| vertex(s.side(), 1)));
        v
    }

    /// `Σ_{i∈I} w_i + l > 2` at every vertex.
    pub fn is_w_stable(&self, w: &WeightVector) -> bool {
        let two = crate::lattice::q(2);
        self.vertices().iter().all(|v| w.sum_of(v.leaves) + crate::lattice::q(v.edges as i64) > two)
    }

    /// Stability decided from the chamber signature alone.
    pub fn is_stable_for(&self, sig: &ChamberSignature) -> bool {
        self.vertices().iter().all(|v| match v.edges {
            // total weight exceeds 2 by assumption
            0 => true,
            1 => !sig.is_light_set(v.leaves),
            2 => v.leaves != 0,
            _ => true,
        })
    }

    /// Bounded edges form a path and every vertex carries a leaf or two edges.
    pub fn is_caterpillar(&self) -> bool {
        self.vertices().iter().all(|v| v.edges <= 2)
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.splits.iter().map(|s| s.leaves()).collect()
    }
}

impl fmt::Debug for TreeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_lists())
    }
}

impl Serialize for TreeType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_lists().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TreeType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let lists: Vec<Vec<usize>> = Vec::deserialize(d)?;
        let n = lists.iter().flatten().copied().max().unwrap_or(0).max(MIN_LEAVES);
        let text = serde_json::to_string(&lists).map_err(serde::de::Error::custom)?;
        TreeType::parse(n, &text).map_err(serde::de::Error::custom)
    }
}

/// All tree types (every dimension) or only trivalent ones, in canonical order.
pub fn enumerate_tree_types(n: usize, only_trivalent: bool) -> Result<Vec<TreeType>> {
    check_n(n)?;
    let splits = all_splits(n);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    extend_types(n, &splits, 0, &mut cur, only_trivalent, &mut out);
    let mut types: Vec<TreeType> = out.into_iter().map(|s| TreeType { n, splits: s }).collect();
    types.sort_by_key(|t| type_key(&splits, t));
    Ok(types)
}

/// Positions of a type's splits in the canonical split list.
pub(crate) fn type_key(splits: &[Split], t: &TreeType) -> Vec<usize> {
    t.splits.iter().map(|s| splits.iter().position(|x| x == s).expect("known split")).collect()
}

fn extend_types(
    n: usize,
    splits: &[Split],
    start: usize,
    cur: &mut Vec<Split>,
    only_trivalent: bool,
    out: &mut Vec<Vec<Split>>,
) {
    if !only_trivalent || cur.len() + 3 == n {
        out.push(cur.clone());
        if cur.len() + 3 == n {
            return;
        }
    }
    for i in start..splits.len() {
        if cur.iter().all(|s| s.compatible(splits[i])) {
            cur.push(splits[i]);
            extend_types(n, splits, i + 1, cur, only_trivalent, out);
            cur.pop();
        }
    }
}

/// A tree type with positive edge lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricTree {
    pub tree: TreeType,
    pub lengths: Vec<Q>,
}

impl MetricTree {
    pub fn new(tree: TreeType, lengths: Vec<Q>) -> Result<Self> {
        if lengths.len() != tree.splits().len() {
            return Err(Error::Dimension("one length per bounded edge required".into()));
        }
        if lengths.iter().any(|l| *l <= Q::default()) {
            return Err(Error::Dimension("edge lengths must be positive".into()));
        }
        Ok(MetricTree { tree, lengths })
    }

    /// Leaf-to-leaf distances `dist(i, j)` for `i < j` in lexicographic order
    /// (ends contribute nothing).
    pub fn distances(&self) -> Vec<Q> {
        let n = self.tree.n();
        let mut d = Vec::with_capacity(n * (n - 1) / 2);
        for i in 1..=n {
            for j in i + 1..=n {
                let sep = |s: &Split| (s.side() & leaf_bit(i) != 0) != (s.side() & leaf_bit(j) != 0);
                d.push(
                    self.tree.splits().iter().zip(&self.lengths).filter(|(s, _)| sep(s)).map(|(_, l)| l.clone()).sum(),
                );
            }
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::weights::mask_of;
    use std::collections::BTreeSet;

    fn double_factorial(k: usize) -> usize {
        (1..=k).rev().step_by(2).product()
    }

    // trivalent trees built by inserting leaf k on every edge of trees with k − 1 leaves;
    // every edge (leaf edges included) is stored by its side avoiding leaf 1
    fn by_insertion(n: usize) -> BTreeSet<Vec<u32>> {
        let mut trees: Vec<Vec<u32>> = vec![vec![0b110, 0b010, 0b100]];
        for k in 4..=n {
            let bit = 1u32 << (k - 1);
            let mut next = Vec::new();
            for t in &trees {
                for &side in t {
                    let mut edges: Vec<u32> =
                        t.iter().map(|&f| if f != side && f & side == side { f | bit } else { f }).collect();
                    edges.push(side | bit);
                    edges.push(bit);
                    next.push(edges);
                }
            }
            trees = next;
        }
        trees
            .into_iter()
            .map(|t| {
                let mut s: Vec<u32> = t.into_iter().filter_map(|e| Split::new(n, e).map(|x| x.side())).collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect()
    }

    #[test]
    fn trivalent_counts() {
        assert_eq!(enumerate_tree_types(4, true).unwrap().len(), 3);
        assert_eq!(enumerate_tree_types(5, true).unwrap().len(), 15);
        assert_eq!(enumerate_tree_types(6, true).unwrap().len(), 105);
        for n in 4..=7 {
            let types = enumerate_tree_types(n, true).unwrap();
            assert_eq!(types.len(), double_factorial(2 * n - 5));
            let mut mine: BTreeSet<Vec<u32>> = BTreeSet::new();
            for t in &types {
                let mut s: Vec<u32> = t.splits().iter().map(|s| s.side()).collect();
                s.sort_unstable();
                mine.insert(s);
            }
            assert_eq!(mine, by_insertion(n), "n = {n}");
        }
        assert!(matches!(enumerate_tree_types(9, true), Err(Error::TooLarge { .. })));
        assert!(enumerate_tree_types(3, true).is_err());
    }

    #[test]
    fn all_types_and_splits() {
        assert_eq!(all_splits(5).len(), 10);
        assert_eq!(all_splits(6).len(), 25);
        // all phylogenetic trees, star included
        assert_eq!(enumerate_tree_types(4, false).unwrap().len(), 4);
        assert_eq!(enumerate_tree_types(5, false).unwrap().len(), 26);
        assert_eq!(enumerate_tree_types(6, false).unwrap().len(), 236);
    }

    #[test]
    fn split_canonical_side() {
        let s = Split::from_leaves(5, &[1, 2]).unwrap();
        assert_eq!(s.leaves(), vec![3, 4, 5]);
        assert!(Split::from_leaves(5, &[1]).is_none());
        assert!(Split::from_leaves(5, &[2, 3, 4, 5]).is_none());
        assert_eq!(s.side_without(5, 3), mask_of(&[1, 2]));
    }

    #[test]
    fn stability_examples() {
        let w: WeightVector = "1,1,3/4,3/4,1/4".parse().unwrap();
        assert!(TreeType::star(5).is_w_stable(&w));
        let bad = TreeType::parse(5, "[[3,4],[3,4,5]]").unwrap();
        assert!(bad.is_w_stable(&w));
        let bad = TreeType::parse(5, "[[4,5],[3,4,5]]").unwrap();
        assert!(!bad.is_w_stable(&w));
        let bad = TreeType::parse(5, "[[3,5],[3,4,5]]").unwrap();
        assert!(!bad.is_w_stable(&w));
        assert!(TreeType::parse(5, "[[3,4],[2,3]]").is_err());
        let sig = w.signature();
        for t in enumerate_tree_types(5, false).unwrap() {
            assert_eq!(t.is_w_stable(&w), t.is_stable_for(&sig));
        }
    }

    #[test]
    fn vertices_of_caterpillar() {
        let t = TreeType::parse(6, "[[5,6],[4,5,6],[3,4,5,6]]").unwrap();
        let v = t.vertices();
        assert_eq!(v.len(), 4);
        assert_eq!(v[0], TreeVertex { leaves: mask_of(&[1, 2]), edges: 1 });
        assert!(t.is_caterpillar());
        let total: u32 = v.iter().map(|x| x.leaves).fold(0, |a, b| a | b);
        assert_eq!(total, 0b111111);
        let snowflake = TreeType::parse(6, "[[3,4],[5,6],[3,4,5,6]]").unwrap();
        assert!(!snowflake.is_caterpillar());
    }

    #[test]
    fn distances_of_single_split() {
        let t = MetricTree::new(TreeType::parse(4, "[[3,4]]").unwrap(), vec![crate::lattice::q(2)]).unwrap();
        let d = t.distances();
        // pairs 12 13 14 23 24 34
        let two = crate::lattice::q(2);
        let zero = crate::lattice::q(0);
        assert_eq!(d, vec![zero.clone(), two.clone(), two.clone(), two.clone(), two, zero]);
    }
}

//! Bergman fans of graphic matroids: chains-of-flats and nested-set
//! subdivisions, building sets, and membership oracles.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{Locator, WeightedFan};
use crate::graph::EdgeSet;
use crate::lattice::Q;
use crate::matroid::GraphicMatroid;

/// How membership in the Bergman fan is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MembershipMethod {
    /// Maximum over every circuit attained at least twice.
    Circuits,
    /// Every element lies in a minimal-weight basis.
    MinBases,
    /// Point location in the chains-of-flats fan.
    ChainsFan,
}

/// Ray vector `v_F = −Σ_{i∈F} e_i` in `R^E`.
pub fn flat_ray(f: EdgeSet, m: usize) -> Vec<i64> {
    (0..m).map(|e| if f.contains(e) { -1 } else { 0 }).collect()
}

/// Image of a point of `R^E` in the quotient coordinates `(x_e − x_0)_{e ≥ 1}`.
pub fn to_quotient(x: &[Q]) -> Vec<Q> {
    x[1..].iter().map(|v| v - &x[0]).collect()
}

/// Section of the quotient: prepend a zero coordinate.
pub fn from_quotient(y: &[Q]) -> Vec<Q> {
    std::iter::once(Q::default()).chain(y.iter().cloned()).collect()
}

/// A fan whose rays are labelled by flats.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatFan {
    pub fan: WeightedFan,
    /// `flats[i]` is the flat whose vector is ray `i`.
    pub flats: Vec<EdgeSet>,
    /// Whether the fan is presented modulo the all-ones line.
    pub quotient: bool,
}

impl FlatFan {
    /// Passes to `B'(M)`, zeroing the coordinate of edge 0.
    pub fn quotient(&self) -> Result<FlatFan> {
        if self.quotient {
            return Ok(self.clone());
        }
        Ok(FlatFan { fan: self.fan.quotient_lineality()?, flats: self.flats.clone(), quotient: true })
    }

    /// Cones as sets of flats.
    pub fn cone_flats(&self) -> Vec<Vec<EdgeSet>> {
        self.fan.maximal_cones.iter().map(|c| c.iter().map(|&i| self.flats[i]).collect()).collect()
    }

    pub fn ray_of(&self, f: EdgeSet) -> Option<usize> {
        self.flats.iter().position(|&g| g == f)
    }
}

/// The chains-of-flats fan of `B(M)` in `R^E`, lineality spanned by `v_E`.
pub fn chains_of_flats_fan(m: &GraphicMatroid) -> Result<FlatFan> {
    let flats = m.flats()?;
    let size = m.ground_size();
    let ground = m.ground();
    let proper: Vec<EdgeSet> = flats.iter().map(|f| f.edges).filter(|&f| !f.is_empty() && f != ground).collect();
    let index: HashMap<EdgeSet, usize> = proper.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let rank: HashMap<EdgeSet, usize> = flats.iter().map(|f| (f.edges, f.rank)).collect();
    let top = m.full_rank();
    let mut chains = Vec::new();
    let mut stack = vec![(EdgeSet::EMPTY, Vec::new())];
    while let Some((cur, chain)) = stack.pop() {
        let r = rank[&cur];
        if r + 1 == top {
            chains.push(chain);
            continue;
        }
        if r == top {
            // only when the matroid has rank 0
            chains.push(chain);
            continue;
        }
        for f in flats.iter().filter(|f| f.rank == r + 1 && cur.is_subset(f.edges)) {
            let mut c = chain.clone();
            c.push(index[&f.edges]);
            stack.push((f.edges, c));
        }
    }
    chains.sort();
    let rays = proper.iter().map(|&f| flat_ray(f, size)).collect();
    let lineality = if size > 0 { vec![flat_ray(ground, size)] } else { vec![] };
    let weights = vec![1; chains.len()];
    Ok(FlatFan { fan: WeightedFan::new(size, rays, lineality, chains, weights)?, flats: proper, quotient: false })
}

/// A set of nonempty flats used to build a nested-set subdivision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildingSet {
    pub members: Vec<EdgeSet>,
}

impl BuildingSet {
    pub fn contains(&self, f: EdgeSet) -> bool {
        self.members.contains(&f)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// All nonempty flats whose edges form a connected subgraph, including `E`.
pub fn one_connected_building_set(m: &GraphicMatroid) -> Result<BuildingSet> {
    if !m.graph().is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    let members = m.flats()?.into_iter().map(|f| f.edges).filter(|&f| m.is_one_connected(f)).collect();
    Ok(BuildingSet { members })
}

/// Every nonempty flat.
pub fn all_flats_building_set(m: &GraphicMatroid) -> Result<BuildingSet> {
    let members = m.flats()?.into_iter().map(|f| f.edges).filter(|f| !f.is_empty()).collect();
    Ok(BuildingSet { members })
}

/// Checks the building-set condition directly: for every flat `F`, joining
/// gives an order isomorphism from the product of the intervals below the
/// maximal members `G_1..G_k ≤ F` onto `[∅, F]`. Meets with the `G_i` give the
/// inverse map, so both maps are checked to be mutually inverse.
pub fn is_building_set(m: &GraphicMatroid, g: &[EdgeSet]) -> Result<bool> {
    let flats: Vec<EdgeSet> = m.flats()?.into_iter().map(|f| f.edges).collect();
    if g.iter().any(|f| f.is_empty() || !m.is_flat(*f) || !f.is_subset(m.ground())) {
        return Ok(false);
    }
    let below = |f: EdgeSet| -> Vec<EdgeSet> { flats.iter().copied().filter(|x| x.is_subset(f)).collect() };
    for &f in &flats {
        let under: Vec<EdgeSet> = g.iter().copied().filter(|x| x.is_subset(f)).collect();
        let maximal: Vec<EdgeSet> =
            under.iter().copied().filter(|&x| !under.iter().any(|&y| y != x && x.is_subset(y))).collect();
        let interval = below(f);
        let factors: Vec<Vec<EdgeSet>> = maximal.iter().map(|&x| below(x)).collect();
        let product: usize = factors.iter().map(Vec::len).product();
        if product != interval.len() {
            return Ok(false);
        }
        // every tuple: meet of its join with G_i returns the i-th entry
        let mut idx = vec![0usize; factors.len()];
        loop {
            let join =
                m.closure_unchecked(idx.iter().zip(&factors).fold(EdgeSet::EMPTY, |acc, (&i, fs)| acc.union(fs[i])));
            if !join.is_subset(f) {
                return Ok(false);
            }
            for (k, (&i, fs)) in idx.iter().zip(&factors).enumerate() {
                if join.intersection(maximal[k]) != fs[i] {
                    return Ok(false);
                }
            }
            // advance the odometer
            let mut pos = 0;
            while pos < idx.len() {
                idx[pos] += 1;
                if idx[pos] < factors[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
        }
        // every flat below F: join of its meets gives it back
        for &y in &interval {
            let join = m.closure_unchecked(maximal.iter().fold(EdgeSet::EMPTY, |acc, &x| acc.union(y.intersection(x))));
            if join != y {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn join_of(m: &GraphicMatroid, sets: &[EdgeSet]) -> EdgeSet {
    m.closure_unchecked(sets.iter().fold(EdgeSet::EMPTY, |a, &b| a.union(b)))
}

fn incomparable(a: EdgeSet, b: EdgeSet) -> bool {
    !a.is_subset(b) && !b.is_subset(a)
}

/// Nestedness: the join of every antichain of at least two members of `s`
/// lies outside the building set.
pub fn is_nested(m: &GraphicMatroid, g: &BuildingSet, s: &[EdgeSet]) -> bool {
    if s.iter().any(|&x| !g.contains(x)) {
        return false;
    }
    let members: HashSet<EdgeSet> = g.members.iter().copied().collect();
    let k = s.len();
    if k > 20 {
        return false;
    }
    for mask in 1u32..1 << k {
        if mask.count_ones() < 2 {
            continue;
        }
        let chosen: Vec<EdgeSet> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
        let antichain = chosen.iter().enumerate().all(|(i, &a)| chosen[i + 1..].iter().all(|&b| incomparable(a, b)));
        if antichain && members.contains(&join_of(m, &chosen)) {
            return false;
        }
    }
    true
}

/// Nestedness for the building set of 1-connected flats: incomparable members
/// are vertex-disjoint.
pub fn is_nested_one_connected(m: &GraphicMatroid, s: &[EdgeSet]) -> bool {
    let g = m.graph();
    for (i, &a) in s.iter().enumerate() {
        if !m.is_one_connected(a) {
            return false;
        }
        for &b in &s[i + 1..] {
            if incomparable(a, b) && !g.vertices_of(a).is_disjoint(&g.vertices_of(b)) {
                return false;
            }
        }
    }
    true
}

/// The nested-set fan of `B(M)` in `R^E`: one cone per maximal nested set,
/// rays `v_F` for members other than `E`, whose vector spans the lineality.
pub fn nested_set_fan(m: &GraphicMatroid, g: &BuildingSet) -> Result<FlatFan> {
    let ground = m.ground();
    if !g.contains(ground) {
        return Err(Error::NotABuildingSet("the ground set must be a member".into()));
    }
    if !is_building_set(m, &g.members)? {
        return Err(Error::NotABuildingSet("interval product condition fails".into()));
    }
    let members: Vec<EdgeSet> = g.members.iter().copied().filter(|&f| f != ground).collect();
    let in_g: HashSet<EdgeSet> = g.members.iter().copied().collect();
    let mut maximal = Vec::new();
    let mut current = Vec::new();
    extend_nested(m, &members, &in_g, 0, &mut current, &mut maximal);
    maximal.sort();
    let size = m.ground_size();
    let rays = members.iter().map(|&f| flat_ray(f, size)).collect();
    let weights = vec![1; maximal.len()];
    Ok(FlatFan {
        fan: WeightedFan::new(size, rays, vec![flat_ray(ground, size)], maximal, weights)?,
        flats: members,
        quotient: false,
    })
}

// whether adding `x` keeps `cur` nested: antichains through x must join outside g
fn can_add(m: &GraphicMatroid, members: &[EdgeSet], in_g: &HashSet<EdgeSet>, cur: &[usize], x: usize) -> bool {
    let fx = members[x];
    let others: Vec<EdgeSet> = cur.iter().map(|&i| members[i]).filter(|&f| incomparable(f, fx)).collect();
    let k = others.len();
    for mask in 1u32..1 << k {
        let mut chosen: Vec<EdgeSet> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| others[i]).collect();
        let antichain = chosen.iter().enumerate().all(|(i, &a)| chosen[i + 1..].iter().all(|&b| incomparable(a, b)));
        if !antichain {
            continue;
        }
        chosen.push(fx);
        if in_g.contains(&join_of(m, &chosen)) {
            return false;
        }
    }
    true
}

fn extend_nested(
    m: &GraphicMatroid,
    members: &[EdgeSet],
    in_g: &HashSet<EdgeSet>,
    start: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let mut extended = false;
    for x in start..members.len() {
        if can_add(m, members, in_g, cur, x) {
            cur.push(x);
            extend_nested(m, members, in_g, x + 1, cur, out);
            cur.pop();
            extended = true;
        }
    }
    if !extended {
        // maximal only if no earlier member fits either
        let maximal = (0..start).all(|x| cur.contains(&x) || !can_add(m, members, in_g, cur, x));
        if maximal {
            out.push(cur.clone());
        }
    }
}

/// Cached data for deciding membership in `B(M)` three ways.
pub struct BergmanOracle {
    size: usize,
    circuits: Vec<Vec<usize>>,
    bases: Vec<Vec<usize>>,
    ground: EdgeSet,
    locator: Locator,
}

impl BergmanOracle {
    pub fn new(m: &GraphicMatroid) -> Result<Self> {
        Ok(BergmanOracle {
            size: m.ground_size(),
            circuits: m.circuits()?.iter().map(|c| c.to_vec()).collect(),
            bases: m.bases()?.iter().map(|b| b.to_vec()).collect(),
            ground: m.ground(),
            locator: chains_of_flats_fan(m)?.fan.locator(),
        })
    }

    fn check_len(&self, p: &[Q]) -> Result<()> {
        if p.len() != self.size {
            return Err(Error::Dimension(format!("point has length {}, expected {}", p.len(), self.size)));
        }
        Ok(())
    }

    pub fn contains(&self, p: &[Q], method: MembershipMethod) -> Result<bool> {
        self.check_len(p)?;
        Ok(match method {
            MembershipMethod::Circuits => self.by_circuits(p),
            MembershipMethod::MinBases => self.by_min_bases(p),
            MembershipMethod::ChainsFan => self.locator.contains(p),
        })
    }

    fn by_circuits(&self, p: &[Q]) -> bool {
        self.circuits.iter().all(|c| {
            let max = c.iter().map(|&e| &p[e]).max().expect("circuits are nonempty");
            c.iter().filter(|&&e| &p[e] == max).count() >= 2
        })
    }

    fn by_min_bases(&self, p: &[Q]) -> bool {
        let weights: Vec<Q> = self.bases.iter().map(|b| b.iter().map(|&e| &p[e]).sum()).collect();
        let Some(min) = weights.iter().min() else {
            return self.ground.is_empty();
        };
        let covered = self
            .bases
            .iter()
            .zip(&weights)
            .filter(|(_, w)| *w == min)
            .fold(EdgeSet::EMPTY, |acc, (b, _)| acc.union(EdgeSet::from_indices(b.iter().copied())));
        covered == self.ground
    }
}

/// Membership of `p ∈ R^E` in `B(M)` by the chosen method.
pub fn membership(m: &GraphicMatroid, p: &[Q], method: MembershipMethod) -> Result<bool> {
    BergmanOracle::new(m)?.contains(p, method)
}

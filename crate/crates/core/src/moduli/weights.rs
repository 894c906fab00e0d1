//! Weight vectors, heavy/small/light classification, chamber signatures and
//! weight graphs.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lattice::{q, q_frac, Q};

/// Largest leaf count handled by bitmask-based subset computations.
pub const MAX_LEAVES: usize = 16;

/// Bit for leaf `i` (leaves are numbered from 1).
pub fn leaf_bit(i: usize) -> u32 {
    1 << (i - 1)
}

/// Leaves of a bitmask, ascending.
pub fn leaves_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

pub fn mask_of(leaves: &[usize]) -> u32 {
    leaves.iter().fold(0, |m, &i| m | leaf_bit(i))
}

/// Rational weights `0 < w_i ≤ 1` with `Σ w_i > 2` on `n ≥ 4` leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector {
    entries: Vec<Q>,
}

impl WeightVector {
    pub fn new(entries: Vec<Q>) -> Result<Self> {
        let n = entries.len();
        if n < 4 {
            return Err(Error::InvalidWeights(format!("need at least 4 entries, got {n}")));
        }
        if n > MAX_LEAVES {
            return Err(Error::TooLarge { what: "number of weights", actual: n, limit: MAX_LEAVES });
        }
        if let Some((i, x)) = entries.iter().enumerate().find(|(_, x)| **x <= Q::zero() || **x > Q::one()) {
            return Err(Error::InvalidWeights(format!("entry {} = {x} is not in (0, 1]", i + 1)));
        }
        let total: Q = entries.iter().sum();
        if total <= q(2) {
            return Err(Error::InvalidWeights(format!("total weight {total} is not greater than 2")));
        }
        Ok(WeightVector { entries })
    }

    /// All weights equal to 1.
    pub fn ones(n: usize) -> Result<Self> {
        WeightVector::new(vec![Q::one(); n])
    }

    /// `(1^f, ε^t)` with `ε = 1/(2t)`.
    pub fn heavy_light(f: usize, t: usize) -> Result<Self> {
        let mut e = vec![Q::one(); f];
        if t > 0 {
            e.extend(std::iter::repeat_n(q_frac(1, 2 * t as i64), t));
        }
        WeightVector::new(e)
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    /// Weight of leaf `i` (1-based).
    pub fn get(&self, i: usize) -> &Q {
        &self.entries[i - 1]
    }

    pub fn entries(&self) -> &[Q] {
        &self.entries
    }

    pub fn sum_of(&self, mask: u32) -> Q {
        leaves_of(mask).iter().map(|&i| self.get(i)).sum()
    }

    pub fn all_mask(&self) -> u32 {
        (1u32 << self.n()) - 1
    }

    /// Reorders entries: leaf `i` of the result carries the weight of leaf `perm[i-1]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        WeightVector::new(perm.iter().map(|&j| self.get(j).clone()).collect())
    }

    pub fn signature(&self) -> ChamberSignature {
        ChamberSignature::of(self)
    }

    pub fn classify(&self) -> Classification {
        classify_weights(self)
    }

    /// Indices `i` with `w_i + w_j > 1` for all `j ≠ i`.
    pub fn heavy(&self) -> Vec<usize> {
        let n = self.n();
        (1..=n).filter(|&i| (1..=n).all(|j| j == i || self.get(i) + self.get(j) > Q::one())).collect()
    }

    /// The heavy vertex removed from the total weight graph: the smallest heavy index.
    pub fn root(&self) -> Option<usize> {
        self.heavy().first().copied()
    }

    /// `G_t(w)`: vertices `1..n`, edge `ij` iff `w_i + w_j > 1`.
    pub fn total_graph(&self) -> Graph {
        let n = self.n();
        let mut es = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                if self.get(i) + self.get(j) > Q::one() {
                    es.push((i as i64, j as i64));
                }
            }
        }
        Graph::new((1..=n as i64).collect(), es).expect("weight graph is simple")
    }

    /// `G(w)`: the total weight graph without its root heavy vertex; labels kept.
    pub fn reduced_graph(&self) -> Result<Graph> {
        let h = self.root().ok_or(Error::NoHeavyVertex)? as i64;
        let g = self.total_graph();
        let keep = g.vertices().iter().copied().filter(|&v| v != h).collect();
        Ok(g.induced(&keep))
    }

    /// Both weight graphs.
    pub fn weight_graphs(&self) -> Result<(Graph, Graph)> {
        Ok((self.total_graph(), self.reduced_graph()?))
    }
}

impl FromStr for WeightVector {
    type Err = Error;

    /// Comma-separated exact rationals, e.g. `1,1,3/4,3/4,1/4`.
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                Q::from_str(t).map_err(|_| Error::Parse(format!("bad rational `{t}`")))
            })
            .collect::<Result<Vec<Q>>>()?;
        WeightVector::new(entries)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Serialize for WeightVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.entries.iter().map(|x| x.to_string()))
    }
}

impl<'de> Deserialize<'de> for WeightVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        v.join(",").parse().map_err(serde::de::Error::custom)
    }
}

/// The family `{S ⊆ [n] : Σ_{i∈S} w_i ≤ 1}` of light subsets, stored by its
/// maximal members (bitmasks, sorted).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChamberSignature {
    pub n: usize,
    pub maximal: Vec<u32>,
}

impl ChamberSignature {
    pub fn of(w: &WeightVector) -> Self {
        let n = w.n();
        let mut light: Vec<u32> = (1u32..1 << n).filter(|&s| w.sum_of(s) <= Q::one()).collect();
        // keep maximal members only
        light.sort_by_key(|s| std::cmp::Reverse(s.count_ones()));
        let mut maximal: Vec<u32> = Vec::new();
        for s in light {
            if !maximal.iter().any(|&m| s & !m == 0) {
                maximal.push(s);
            }
        }
        maximal.sort_unstable();
        ChamberSignature { n, maximal }
    }

    /// Whether `Σ_{i∈S} w_i ≤ 1`.
    pub fn is_light_set(&self, s: u32) -> bool {
        s == 0 || self.maximal.iter().any(|&m| s & !m == 0)
    }

    /// Whether `w_i + w_j > 1`.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        !self.is_light_set(leaf_bit(i) | leaf_bit(j))
    }

    pub fn heavy(&self) -> Vec<usize> {
        (1..=self.n).filter(|&i| (1..=self.n).all(|j| j == i || self.adjacent(i, j))).collect()
    }
}

/// Per-index class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightClass {
    Heavy,
    Small,
    Neither,
}

/// Result of classifying a weight vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub classes: Vec<WeightClass>,
    pub signature: ChamberSignature,
    /// Small entries have total weight at most 1 (a chamber property).
    pub light: bool,
    /// Small entries have total weight strictly below 1.
    pub light_strict: bool,
    pub heavy_small: bool,
    /// Every entry heavy or small, and the small entries light.
    pub heavy_light: bool,
    /// `(1^f, ε^t)` in the positions of `w`, when heavy/light.
    pub representative: Option<WeightVector>,
}

impl Classification {
    pub fn heavy(&self) -> Vec<usize> {
        self.indices(WeightClass::Heavy)
    }

    pub fn small(&self) -> Vec<usize> {
        self.indices(WeightClass::Small)
    }

    fn indices(&self, c: WeightClass) -> Vec<usize> {
        self.classes.iter().enumerate().filter(|(_, &x)| x == c).map(|(i, _)| i + 1).collect()
    }
}

pub fn classify_weights(w: &WeightVector) -> Classification {
    let n = w.n();
    let heavy = w.heavy();
    let is_heavy = |i: usize| heavy.contains(&i);
    let classes: Vec<WeightClass> = (1..=n)
        .map(|i| {
            if is_heavy(i) {
                WeightClass::Heavy
            } else if (1..=n).all(|j| j == i || w.get(i) + w.get(j) <= Q::one() || is_heavy(j)) {
                WeightClass::Small
            } else {
                WeightClass::Neither
            }
        })
        .collect();
    let small: Vec<usize> = (1..=n).filter(|&i| classes[i - 1] == WeightClass::Small).collect();
    let small_sum = w.sum_of(mask_of(&small));
    let heavy_small = !classes.contains(&WeightClass::Neither);
    let light = small_sum <= Q::one();
    let light_strict = small_sum < Q::one();
    let heavy_light = heavy_small && light;
    let representative = heavy_light.then(|| {
        let t = small.len();
        let eps = if t > 0 { q_frac(1, 2 * t as i64) } else { Q::one() };
        let e = (1..=n).map(|i| if is_heavy(i) { Q::one() } else { eps.clone() }).collect();
        WeightVector::new(e).expect("representative is a weight vector")
    });
    Classification { classes, signature: w.signature(), light, light_strict, heavy_small, heavy_light, representative }
}

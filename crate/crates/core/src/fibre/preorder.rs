//! Cones cut out by inequalities `x_a ≤ x_b`, stored as closed preorders.
//!
//! Chains-of-flats and nested-set cones of graphic Bergman fans are of this
//! form, and so are their fibre products over coordinate projections.

use std::fmt;

use rand::Rng;

use crate::graph::EdgeSet;

/// A reflexive, transitive relation on `0..m`; `up[e]` holds every `f` with `e ≤ f`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Preorder {
    up: Vec<EdgeSet>,
}

impl fmt::Debug for Preorder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Preorder{:?}", self.classes())
    }
}

impl Preorder {
    /// No constraints: the whole space.
    pub fn free(m: usize) -> Self {
        Preorder { up: (0..m).map(EdgeSet::singleton).collect() }
    }

    /// The cone spanned by `−1_F` for a laminar family and `±1_E`:
    /// `e ≤ f` iff the smallest member containing `f` contains `e`.
    pub fn from_laminar(m: usize, members: &[EdgeSet]) -> Self {
        let all = EdgeSet::full(m);
        let smallest =
            |f: usize| members.iter().copied().filter(|s| s.contains(f)).min_by_key(|s| s.len()).unwrap_or(all);
        let lower: Vec<EdgeSet> = (0..m).map(smallest).collect();
        Preorder { up: (0..m).map(|e| EdgeSet::from_indices((0..m).filter(|&f| lower[f].contains(e)))).collect() }
    }

    /// Closes the relation `e ≤ f` for the given pairs.
    pub fn from_pairs(m: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut p = Preorder::free(m);
        for (e, f) in pairs {
            p.up[e].insert(f);
        }
        p.close();
        p
    }

    fn close(&mut self) {
        let m = self.up.len();
        for k in 0..m {
            for i in 0..m {
                if self.up[i].contains(k) {
                    self.up[i] = self.up[i].union(self.up[k]);
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        self.up.len()
    }

    pub fn leq(&self, e: usize, f: usize) -> bool {
        self.up[e].contains(f)
    }

    pub fn up_set(&self, e: usize) -> EdgeSet {
        self.up[e]
    }

    /// Equivalence classes, ordered by their smallest element.
    pub fn classes(&self) -> Vec<EdgeSet> {
        let m = self.up.len();
        let mut seen = EdgeSet::EMPTY;
        let mut out = Vec::new();
        for e in 0..m {
            if seen.contains(e) {
                continue;
            }
            let class = EdgeSet::from_indices((0..m).filter(|&f| self.leq(e, f) && self.leq(f, e)));
            seen = seen.union(class);
            out.push(class);
        }
        out
    }

    /// Dimension of the cone, lineality included.
    pub fn dim(&self) -> usize {
        self.classes().len()
    }

    /// Moves the relation along an injective index map into `0..m`.
    pub fn push_forward(&self, map: &[usize], m: usize) -> Preorder {
        let mut p = Preorder::free(m);
        for (e, &a) in map.iter().enumerate() {
            for f in self.up[e].iter() {
                p.up[a].insert(map[f]);
            }
        }
        p
    }

    /// The relation induced on the elements `map[0], map[1], …`.
    pub fn restrict(&self, map: &[usize]) -> Preorder {
        Preorder {
            up: map.iter().map(|&a| EdgeSet::from_indices((0..map.len()).filter(|&j| self.leq(a, map[j])))).collect(),
        }
    }

    /// Intersection of the two cones.
    pub fn meet(&self, other: &Preorder) -> Preorder {
        let mut p = Preorder { up: self.up.iter().zip(&other.up).map(|(a, b)| a.union(*b)).collect() };
        p.close();
        p
    }

    /// Whether this cone lies inside `other`.
    pub fn is_inside(&self, other: &Preorder) -> bool {
        other.up.iter().zip(&self.up).all(|(o, s)| o.is_subset(*s))
    }

    /// Whether every point of the cone has its maximum attained twice on each circuit.
    pub fn inside_bergman(&self, circuits: &[EdgeSet]) -> bool {
        circuits
            .iter()
            .all(|c| c.iter().all(|e| !self.up[e].intersection(*c).difference(EdgeSet::singleton(e)).is_empty()))
    }

    /// Pairs of classes `a < b` with nothing strictly between, by class position.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let cls = self.classes();
        let rep: Vec<usize> = cls.iter().map(|c| c.iter().next().expect("nonempty class")).collect();
        let lt = |a: usize, b: usize| a != b && self.leq(rep[a], rep[b]);
        let k = cls.len();
        let mut out = Vec::new();
        for a in 0..k {
            for b in 0..k {
                if lt(a, b) && !(0..k).any(|c| lt(a, c) && lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Facets: one per cover relation, obtained by forcing equality.
    pub fn facets(&self) -> Vec<Preorder> {
        let cls = self.classes();
        self.covers()
            .into_iter()
            .map(|(a, b)| {
                let (x, y) = (cls[a].iter().next().unwrap(), cls[b].iter().next().unwrap());
                let mut p = self.clone();
                p.up[y].insert(x);
                p.close();
                p
            })
            .collect()
    }

    /// Down-sets `D` whose vectors `−1_D` span the extreme rays modulo lineality:
    /// `D` and its complement both connected in the Hasse diagram.
    pub fn ray_sets(&self) -> Vec<EdgeSet> {
        let cls = self.classes();
        let k = cls.len();
        assert!(k <= 24, "too many classes for ray enumeration");
        let covers = self.covers();
        let rep: Vec<usize> = cls.iter().map(|c| c.iter().next().unwrap()).collect();
        let connected = |mask: u32| -> bool {
            let start = (0..k).find(|i| mask >> i & 1 == 1);
            let Some(start) = start else { return false };
            let mut seen = 1u32 << start;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for &(a, b) in &covers {
                    let y = if a == x {
                        b
                    } else if b == x {
                        a
                    } else {
                        continue;
                    };
                    if mask >> y & 1 == 1 && seen >> y & 1 == 0 {
                        seen |= 1 << y;
                        stack.push(y);
                    }
                }
            }
            seen == mask
        };
        let full = (1u32 << k) - 1;
        let mut out = Vec::new();
        for mask in 1..full {
            let down_closed = (0..k)
                .filter(|&b| mask >> b & 1 == 1)
                .all(|b| (0..k).all(|a| mask >> a & 1 == 1 || !self.leq(rep[a], rep[b])));
            if down_closed && connected(mask) && connected(full & !mask) {
                out.push((0..k).filter(|&i| mask >> i & 1 == 1).fold(EdgeSet::EMPTY, |s, i| s.union(cls[i])));
            }
        }
        out
    }

    /// A random integer point with `x_e < x_f` exactly when `e < f` strictly.
    pub fn random_interior_point<R: Rng>(&self, rng: &mut R) -> Vec<i64> {
        let m = self.up.len();
        let mut order: Vec<usize> = (0..m).collect();
        // fewer elements below comes first
        order.sort_by_key(|&e| (0..m).filter(|&f| self.leq(f, e)).count());
        let mut x = vec![0i64; m];
        let mut done = vec![false; m];
        for &e in &order {
            if done[e] {
                continue;
            }
            let base = (0..m).filter(|&f| done[f] && self.leq(f, e)).map(|f| x[f]).max().unwrap_or(0);
            let v = base + rng.random_range(1..=5);
            for f in 0..m {
                if self.leq(e, f) && self.leq(f, e) {
                    x[f] = v;
                    done[f] = true;
                }
            }
        }
        let shift = rng.random_range(-20..=20);
        x.iter().map(|v| v + shift).collect()
    }
}

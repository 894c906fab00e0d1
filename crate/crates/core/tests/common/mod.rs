//! Brute-force oracles shared by the integration tests. They only read plain
//! data (labels, edge lists, rationals) from the library.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational as Q;
use num_traits::One;
use tropmod::Graph;

pub struct Plain {
    pub vertices: Vec<i64>,
    pub edges: Vec<(i64, i64)>,
}

impl Plain {
    pub fn of(g: &Graph) -> Self {
        Plain { vertices: g.vertices().to_vec(), edges: g.edges().to_vec() }
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn rank(&self, s: u64) -> usize {
        let mut parent: BTreeMap<i64, i64> = self.vertices.iter().map(|&v| (v, v)).collect();
        fn find(p: &mut BTreeMap<i64, i64>, v: i64) -> i64 {
            let mut r = v;
            while p[&r] != r {
                r = p[&r];
            }
            p.insert(v, r);
            r
        }
        let mut r = 0;
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if s >> i & 1 == 1 {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                if a != b {
                    parent.insert(a, b);
                    r += 1;
                }
            }
        }
        r
    }

    pub fn full(&self) -> u64 {
        (1u64 << self.m()) - 1
    }

    pub fn closure(&self, s: u64) -> u64 {
        let r = self.rank(s);
        (0..self.m()).fold(s, |acc, e| if self.rank(s | 1 << e) == r { acc | 1 << e } else { acc })
    }

    pub fn flats(&self) -> Vec<u64> {
        (0..=self.full()).filter(|&s| self.closure(s) == s).collect()
    }

    /// Edges of `s` span a connected subgraph.
    pub fn connected(&self, s: u64) -> bool {
        if s == 0 {
            return false;
        }
        let touched: BTreeSet<i64> =
            (0..self.m()).filter(|e| s >> e & 1 == 1).flat_map(|e| [self.edges[e].0, self.edges[e].1]).collect();
        self.rank(s) + 1 == touched.len()
    }

    pub fn connected_flats(&self) -> Vec<u64> {
        self.flats().into_iter().filter(|&f| self.connected(f)).collect()
    }

    pub fn circuits(&self) -> Vec<u64> {
        (1..=self.full())
            .filter(|&s| {
                let k = s.count_ones() as usize;
                self.rank(s) + 1 == k
                    && (0..self.m()).filter(|e| s >> e & 1 == 1).all(|e| self.rank(s & !(1 << e)) + 1 == k)
            })
            .collect()
    }

    /// Maximal nested sets of proper connected flats (the whole edge set being connected).
    pub fn nested_count(&self) -> usize {
        let all = self.full();
        let g: Vec<u64> = self.connected_flats().into_iter().filter(|&f| f != all).collect();
        let in_g: BTreeSet<u64> = self.connected_flats().into_iter().collect();
        let size = self.rank(all) - 1;
        let nested = |fam: &[u64]| -> bool {
            let k = fam.len();
            (1u32..1 << k).all(|mask| {
                let sub: Vec<u64> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| fam[i]).collect();
                if sub.len() < 2 {
                    return true;
                }
                let antichain =
                    sub.iter().enumerate().all(|(i, &a)| sub[i + 1..].iter().all(|&b| a & !b != 0 && b & !a != 0));
                !antichain || !in_g.contains(&self.closure(sub.iter().fold(0, |x, y| x | y)))
            })
        };
        let mut count = 0;
        let mut stack: Vec<(usize, Vec<u64>)> = vec![(0, vec![])];
        while let Some((start, fam)) = stack.pop() {
            if fam.len() == size {
                count += 1;
                continue;
            }
            for i in start..g.len() {
                let mut next = fam.clone();
                next.push(g[i]);
                if nested(&next) {
                    stack.push((i + 1, next));
                }
            }
        }
        count
    }

    pub fn in_bergman(&self, circuits: &[u64], x: &[i64]) -> bool {
        circuits.iter().all(|&c| {
            let vals: Vec<i64> = (0..self.m()).filter(|e| c >> e & 1 == 1).map(|e| x[e]).collect();
            let max = *vals.iter().max().unwrap();
            vals.iter().filter(|&&v| v == max).count() >= 2
        })
    }
}

/// Splits of `[n]` as the side avoiding leaf 1 (bit `i−1` for leaf `i`).
pub fn splits(n: usize) -> Vec<u32> {
    let all = (1u32 << n) - 1;
    (1..all).filter(|&s| s & 1 == 0 && s.count_ones() >= 2 && (all & !s).count_ones() >= 2).collect()
}

pub fn compatible(n: usize, a: u32, b: u32) -> bool {
    let all = (1u32 << n) - 1;
    let (ac, bc) = (all & !a, all & !b);
    a & b == 0 || a & bc == 0 || ac & b == 0 || ac & bc == 0
}

/// Every tree type: pairwise compatible sets of splits (including the star).
pub fn tree_types(n: usize, only_trivalent: bool) -> Vec<Vec<u32>> {
    let sp = splits(n);
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<u32>)> = vec![(0, vec![])];
    while let Some((start, t)) = stack.pop() {
        if !only_trivalent || t.len() == n - 3 {
            let mut s = t.clone();
            s.sort_unstable();
            out.push(s);
        }
        for i in start..sp.len() {
            if t.iter().all(|&x| compatible(n, x, sp[i])) {
                let mut next = t.clone();
                next.push(sp[i]);
                stack.push((i + 1, next));
            }
        }
    }
    out.sort();
    out
}

/// Vertices of a tree as partitions of `[n]` into branches: blocks are leaves
/// or sides of splits, with no union of 2..k−2 blocks again a side.
pub fn vertex_partitions(n: usize, t: &[u32]) -> Vec<Vec<u32>> {
    let all = (1u32 << n) - 1;
    let mut d: BTreeSet<u32> = (0..n).map(|i| 1u32 << i).collect();
    for &s in t {
        d.insert(s);
        d.insert(all & !s);
    }
    let d: Vec<u32> = d.into_iter().collect();
    let mut out = Vec::new();
    let mut stack: Vec<(u32, Vec<u32>)> = vec![(0, vec![])];
    while let Some((covered, blocks)) = stack.pop() {
        if covered == all {
            let k = blocks.len();
            let ok = k >= 3
                && (1u32..1 << k).all(|mask| {
                    let c = mask.count_ones() as usize;
                    if c < 2 || c > k - 2 {
                        return true;
                    }
                    let u = (0..k).filter(|i| mask >> i & 1 == 1).fold(0, |x, i| x | blocks[i]);
                    !d.contains(&u)
                });
            if ok {
                out.push(blocks);
            }
            continue;
        }
        // the lowest uncovered leaf goes into the next block
        let low = (!covered).trailing_zeros();
        for &b in &d {
            if b >> low & 1 == 1 && b & covered == 0 {
                let mut next = blocks.clone();
                next.push(b);
                stack.push((covered | b, next));
            }
        }
    }
    out
}

pub fn is_stable(w: &[Q], t: &[u32]) -> bool {
    let n = w.len();
    let two = Q::from_integer(2.into());
    vertex_partitions(n, t).iter().all(|blocks| {
        let total: Q = blocks
            .iter()
            .map(|&b| if b.count_ones() == 1 { w[b.trailing_zeros() as usize].clone() } else { Q::one() })
            .sum();
        total > two
    })
}

pub fn heavy(w: &[Q]) -> Vec<usize> {
    let n = w.len();
    (0..n).filter(|&i| (0..n).all(|j| j == i || &w[i] + &w[j] > Q::one())).collect()
}

pub fn heavy_light(w: &[Q]) -> bool {
    let n = w.len();
    let h = heavy(w);
    let small: Vec<usize> = (0..n)
        .filter(|i| !h.contains(i))
        .filter(|&i| (0..n).all(|j| j == i || h.contains(&j) || &w[i] + &w[j] <= Q::one()))
        .collect();
    h.len() + small.len() == n && small.iter().map(|&i| w[i].clone()).sum::<Q>() <= Q::one()
}

pub fn light_sets(w: &[Q]) -> Vec<u32> {
    let n = w.len();
    (1u32..1 << n)
        .filter(|&s| (0..n).filter(|i| s >> i & 1 == 1).map(|i| w[i].clone()).sum::<Q>() <= Q::one())
        .collect()
}

/// Rank of integer rows by exact elimination.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != Q::from_integer(0.into())) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] != Q::from_integer(0.into()) {
                let f = &m[i][c] / &m[r][c];
                let row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Dimension of the image of the cone of `t` in the total weight graph's
/// distance coordinates, modulo leaf-length shifts.
pub fn projected_dim(w: &[Q], t: &[u32]) -> usize {
    let n = w.len();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| &w[i] + &w[j] > Q::one()).collect();
    let z = || Q::from_integer(0.into());
    let shifts: Vec<Vec<Q>> =
        (0..n).map(|k| pairs.iter().map(|&(i, j)| if i == k || j == k { Q::one() } else { z() }).collect()).collect();
    let rays: Vec<Vec<Q>> = t
        .iter()
        .map(|&s| pairs.iter().map(|&(i, j)| if (s >> i & 1) != (s >> j & 1) { Q::one() } else { z() }).collect())
        .collect();
    let mut both = shifts.clone();
    both.extend(rays);
    rank(&both) - rank(&shifts)
}

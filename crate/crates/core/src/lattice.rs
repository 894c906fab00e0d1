//! Exact linear algebra over Q and Z: ranks, spans, primitive vectors,
//! elementary divisors and a cone membership solver.
#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<Q>]) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    rref(rows).0.len()
}

pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    let qs: Vec<Vec<Q>> = rows.iter().map(|r| to_q(r)).collect();
    rank(&qs)
}

/// A subspace of Q^d kept in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Span {
    dim: usize,
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Span {
    pub fn new(dim: usize, gens: &[Vec<Q>]) -> Self {
        let (rows, pivots) = rref(gens);
        Span { dim, rows, pivots }
    }

    pub fn from_i64(dim: usize, gens: &[Vec<i64>]) -> Self {
        let qs: Vec<Vec<Q>> = gens.iter().map(|g| to_q(g)).collect();
        Span::new(dim, &qs)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for (x, y) in w.iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        w.iter().all(Zero::is_zero)
    }

    pub fn contains_i64(&self, v: &[i64]) -> bool {
        self.contains(&to_q(v))
    }

    /// Canonical primitive integer basis (rows of the echelon form, cleared).
    pub fn integer_basis(&self) -> Vec<Vec<i64>> {
        self.rows.iter().map(|r| primitive_q(r)).collect()
    }
}

/// Scales a rational vector to a primitive integer vector with the same direction.
pub fn primitive_q(v: &[Q]) -> Vec<i64> {
    let ints = clear_denominators(v);
    primitive_big(&ints).iter().map(|x| x.to_i64().expect("coordinate fits in i64")).collect()
}

/// Multiplies by the positive lcm of denominators.
pub fn clear_denominators(v: &[Q]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect()
}

pub fn primitive_big(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

/// Nonzero elementary divisors of the integer matrix with the given rows
/// (Smith normal form diagonal). Their product is the gcd of maximal minors.
pub fn elementary_divisors(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let nr = m.len();
    let nc = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        // pick the smallest nonzero entry in the remaining block as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..nr {
                if !m[i][t].is_zero() {
                    let f = m[i][t].div_floor(&m[t][t]);
                    for j in t..nc {
                        let s = &f * &m[t][j];
                        m[i][j] -= s;
                    }
                    if !m[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..nc {
                if !m[t][j].is_zero() {
                    let f = m[t][j].div_floor(&m[t][t]);
                    for row in m.iter_mut().skip(t) {
                        let s = &f * &row[t];
                        row[j] -= s;
                    }
                    if !m[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                // the pivot must divide the rest of the block
                let bad = (t + 1..nr)
                    .flat_map(|i| (t + 1..nc).map(move |j| (i, j)))
                    .find(|&(i, j)| !m[i][j].is_multiple_of(&m[t][t]));
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..nc {
                            let s = m[i][j].clone();
                            m[t][j] += s;
                        }
                        continue;
                    }
                }
            }
            // move the smallest remaining entry of row/column t into the pivot
            let mut best = (t, t);
            for i in t..nr {
                if !m[i][t].is_zero() && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..nc {
                if !m[t][j].is_zero() && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                m.swap(t, best.0);
            } else if best.1 != t {
                for row in m.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        out.push(m[t][t].abs());
        t += 1;
    }
    out
}

/// Index of the lattice spanned by `rows` inside its saturation.
pub fn saturation_index(rows: &[Vec<i64>]) -> BigInt {
    let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    elementary_divisors(&big).iter().fold(BigInt::one(), |acc, d| acc * d)
}

/// Precomputed solver deciding membership of points in a simplicial cone.
///
/// For generators `g_1..g_k` (rays) and `l_1..l_m` (lineality), all linearly
/// independent, it stores integer rows `T` with `T g_i = c_i e_i` (`c_i > 0`)
/// and rows `N` annihilating every generator, so that signs of `T p` are the
/// signs of the ray coefficients of `p` and `N p = 0` tests the span.
#[derive(Clone, Debug)]
pub struct ConeSolver {
    coeff: Vec<IntRow>,
    normal: Vec<IntRow>,
}

#[derive(Clone, Debug)]
struct IntRow {
    big: Vec<BigInt>,
    small: Option<Vec<i128>>,
}

impl IntRow {
    fn new(v: &[Q]) -> Self {
        let big = primitive_big(&clear_denominators(v));
        let small = big.iter().map(|x| x.to_i128()).collect();
        IntRow { big, small }
    }

    fn dot_sign(&self, p: &IntPoint) -> std::cmp::Ordering {
        if let (Some(a), Some(b)) = (&self.small, &p.small) {
            let mut acc: i128 = 0;
            let mut ok = true;
            for (x, y) in a.iter().zip(b) {
                match x.checked_mul(*y).and_then(|t| acc.checked_add(t)) {
                    Some(s) => acc = s,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return acc.cmp(&0);
            }
        }
        let s: BigInt = self.big.iter().zip(&p.big).map(|(x, y)| x * y).sum();
        s.sign_cmp()
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> std::cmp::Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> std::cmp::Ordering {
        if self.is_positive() {
            std::cmp::Ordering::Greater
        } else if self.is_negative() {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Equal
        }
    }
}

/// A rational point scaled to integers (positive factor), ready for solvers.
#[derive(Clone, Debug)]
pub struct IntPoint {
    big: Vec<BigInt>,
    small: Option<Vec<i128>>,
}

impl IntPoint {
    pub fn new(p: &[Q]) -> Self {
        let big = clear_denominators(p);
        let small = big.iter().map(|x| x.to_i128()).collect();
        IntPoint { big, small }
    }

    pub fn from_i64(p: &[i64]) -> Self {
        IntPoint {
            big: p.iter().map(|&x| BigInt::from(x)).collect(),
            small: Some(p.iter().map(|&x| x as i128).collect()),
        }
    }
}

impl ConeSolver {
    /// Returns `None` when the generators are linearly dependent.
    pub fn new(dim: usize, rays: &[Vec<i64>], lineality: &[Vec<i64>]) -> Option<Self> {
        let gens: Vec<&Vec<i64>> = rays.iter().chain(lineality).collect();
        let k = gens.len();
        if k > dim {
            return None;
        }
        // row-reduce [G^T | I] so that the left block becomes [I; 0]
        let mut m: Vec<Vec<Q>> = (0..dim)
            .map(|i| {
                let mut row: Vec<Q> = gens.iter().map(|g| q(g[i])).collect();
                row.extend((0..dim).map(|j| if i == j { Q::one() } else { Q::zero() }));
                row
            })
            .collect();
        for c in 0..k {
            let p = (c..dim).find(|&i| !m[i][c].is_zero())?;
            m.swap(c, p);
            let inv = m[c][c].recip();
            for x in m[c].iter_mut() {
                *x *= &inv;
            }
            for i in 0..dim {
                if i != c && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in 0..k + dim {
                        let t = &f * &m[c][j];
                        m[i][j] -= t;
                    }
                }
            }
        }
        let coeff = (0..rays.len()).map(|i| IntRow::new(&m[i][k..])).collect();
        let normal = (k..dim).map(|i| IntRow::new(&m[i][k..])).collect();
        Some(ConeSolver { coeff, normal })
    }

    /// Ray coefficient signs of `p`, or `None` when `p` is outside the span.
    pub fn signs(&self, p: &IntPoint) -> Option<Vec<std::cmp::Ordering>> {
        if self.normal.iter().any(|r| r.dot_sign(p) != std::cmp::Ordering::Equal) {
            return None;
        }
        Some(self.coeff.iter().map(|r| r.dot_sign(p)).collect())
    }

    /// Indices of rays with positive coefficient when `p` lies in the cone.
    pub fn face_of(&self, p: &IntPoint) -> Option<Vec<usize>> {
        let s = self.signs(p)?;
        if s.contains(&std::cmp::Ordering::Less) {
            return None;
        }
        Some(s.iter().enumerate().filter(|(_, &o)| o == std::cmp::Ordering::Greater).map(|(i, _)| i).collect())
    }
}

/// Solves `x = Σ a_i g_i` exactly for independent generators; `None` if not in span.
pub fn coordinates(gens: &[Vec<Q>], x: &[Q]) -> Option<Vec<Q>> {
    let k = gens.len();
    let d = x.len();
    let m: Vec<Vec<Q>> = (0..d)
        .map(|i| {
            let mut row: Vec<Q> = gens.iter().map(|g| g[i].clone()).collect();
            row.push(x[i].clone());
            row
        })
        .collect();
    let (red, pivots) = rref(&m);
    if pivots.contains(&k) || pivots.len() < k {
        return None;
    }
    Some((0..k).map(|i| red[i][k].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn smith_diagonal_matches_known_cases() {
        let d = elementary_divisors(&big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let d = elementary_divisors(&big(&[&[1, 1, 0], &[0, 1, 1]]));
        assert_eq!(d, vec![BigInt::one(), BigInt::one()]);
        let d = elementary_divisors(&big(&[&[2, 0], &[0, 3]]));
        assert_eq!(d, vec![BigInt::one(), BigInt::from(6)]);
        assert_eq!(saturation_index(&[vec![1, 1], vec![1, -1]]), BigInt::from(2));
    }

    #[test]
    fn gcd_of_minors_oracle() {
        // 2x3 matrices: gcd of the three 2x2 minors
        let cases: [[i64; 6]; 4] = [[1, 2, 3, 4, 5, 6], [2, 0, 2, 0, 2, 2], [3, 6, 9, 1, 4, 7], [0, 0, 5, 1, 1, 1]];
        for c in cases {
            let a = [c[0], c[1], c[2]];
            let b = [c[3], c[4], c[5]];
            let minors = [a[0] * b[1] - a[1] * b[0], a[0] * b[2] - a[2] * b[0], a[1] * b[2] - a[2] * b[1]];
            let g = minors.iter().fold(0i64, |acc, &m| acc.gcd(&m));
            assert_eq!(saturation_index(&[a.to_vec(), b.to_vec()]), BigInt::from(g));
        }
    }

    #[test]
    fn cone_solver_faces() {
        let s = ConeSolver::new(3, &[vec![1, 0, 0], vec![0, 1, 0]], &[vec![1, 1, 1]]).unwrap();
        assert_eq!(s.face_of(&IntPoint::from_i64(&[2, 1, 0])), Some(vec![0, 1]));
        assert_eq!(s.face_of(&IntPoint::from_i64(&[0, 0, 1])), None);
        assert_eq!(s.face_of(&IntPoint::from_i64(&[3, 3, 1])), Some(vec![0, 1]));
        assert_eq!(s.face_of(&IntPoint::from_i64(&[1, 0, 0])), Some(vec![0]));
        assert_eq!(s.face_of(&IntPoint::from_i64(&[0, -1, 0])), None);
        assert_eq!(s.face_of(&IntPoint::from_i64(&[5, 5, 5])), Some(vec![]));
        assert!(ConeSolver::new(2, &[vec![1, 1], vec![2, 2]], &[]).is_none());
    }

    #[test]
    fn spans_and_coordinates() {
        let sp = Span::from_i64(3, &[vec![1, 1, 0], vec![0, 2, 2]]);
        assert_eq!(sp.rank(), 2);
        assert!(sp.contains_i64(&[1, 3, 2]));
        assert!(!sp.contains_i64(&[0, 0, 1]));
        let c = coordinates(&[to_q(&[1, 1, 0]), to_q(&[0, 2, 2])], &to_q(&[1, 3, 2])).unwrap();
        assert_eq!(c, vec![q(1), q(1)]);
        assert_eq!(primitive(&[4, -6, 0]), vec![2, -3, 0]);
        assert_eq!(primitive_q(&[q_frac(1, 2), q_frac(-1, 3)]), vec![3, -2]);
    }
}

//! Weighted rational polyhedral fans with simplicial maximal cones.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{elementary_divisors, primitive, q, ConeSolver, IntPoint, Span, Q};

/// A fan given by primitive integer rays, a lineality space, and maximal
/// cones as sets of ray indices with positive integer weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedFan {
    pub ambient_rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub lineality: Vec<Vec<i64>>,
    pub maximal_cones: Vec<Vec<usize>>,
    pub weights: Vec<u64>,
}

/// Outcome of the balancing check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalanceReport {
    pub balanced: bool,
    pub faces_checked: usize,
    /// Codimension-one faces (as ray index sets) where balancing fails, in canonical order.
    pub violations: Vec<Vec<usize>>,
}

impl BalanceReport {
    pub fn first_violation(&self) -> Option<&Vec<usize>> {
        self.violations.first()
    }
}

impl WeightedFan {
    /// Validates the data, makes rays primitive and replaces the lineality
    /// generators by a canonical basis of their span. Ray and cone order is kept.
    pub fn new(
        ambient_rank: usize,
        rays: Vec<Vec<i64>>,
        lineality: Vec<Vec<i64>>,
        maximal_cones: Vec<Vec<usize>>,
        weights: Vec<u64>,
    ) -> Result<Self> {
        let bad_len = |v: &Vec<i64>| v.len() != ambient_rank;
        if rays.iter().any(bad_len) || lineality.iter().any(bad_len) {
            return Err(Error::Dimension(format!("vector length differs from ambient rank {ambient_rank}")));
        }
        if rays.iter().any(|r| r.iter().all(|&x| x == 0)) {
            return Err(Error::Dimension("zero ray".into()));
        }
        if weights.len() != maximal_cones.len() {
            return Err(Error::Dimension("one weight per maximal cone required".into()));
        }
        if weights.contains(&0) {
            return Err(Error::Dimension("weights must be positive".into()));
        }
        let mut cones = maximal_cones;
        for c in cones.iter_mut() {
            c.sort_unstable();
            c.dedup();
            if c.iter().any(|&i| i >= rays.len()) {
                return Err(Error::Dimension("cone refers to a missing ray".into()));
            }
        }
        Ok(WeightedFan {
            ambient_rank,
            rays: rays.iter().map(|r| primitive(r)).collect(),
            lineality: Span::from_i64(ambient_rank, &lineality).integer_basis(),
            maximal_cones: cones,
            weights,
        })
    }

    /// The fan consisting of the whole space `R^d` as lineality.
    pub fn whole_space(d: usize) -> Self {
        let lin = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
        WeightedFan::new(d, vec![], lin, vec![vec![]], vec![1]).expect("valid")
    }

    /// The zero-dimensional fan in `R^0`.
    pub fn point() -> Self {
        WeightedFan::whole_space(0)
    }

    /// Sorts rays and cones canonically. Returns the fan and the maps
    /// old ray index → new and old cone index → new.
    pub fn canonicalize(&self) -> (WeightedFan, Vec<usize>, Vec<usize>) {
        let mut ray_order: Vec<usize> = (0..self.rays.len()).collect();
        ray_order.sort_by(|&a, &b| self.rays[a].cmp(&self.rays[b]));
        let mut ray_map = vec![0; self.rays.len()];
        for (new, &old) in ray_order.iter().enumerate() {
            ray_map[old] = new;
        }
        let cones: Vec<Vec<usize>> = self
            .maximal_cones
            .iter()
            .map(|c| {
                let mut v: Vec<usize> = c.iter().map(|&i| ray_map[i]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        let mut cone_order: Vec<usize> = (0..cones.len()).collect();
        cone_order.sort_by(|&a, &b| cones[a].cmp(&cones[b]).then(self.weights[a].cmp(&self.weights[b])));
        let mut cone_map = vec![0; cones.len()];
        for (new, &old) in cone_order.iter().enumerate() {
            cone_map[old] = new;
        }
        let fan = WeightedFan {
            ambient_rank: self.ambient_rank,
            rays: ray_order.iter().map(|&i| self.rays[i].clone()).collect(),
            lineality: Span::from_i64(self.ambient_rank, &self.lineality).integer_basis(),
            maximal_cones: cone_order.iter().map(|&i| cones[i].clone()).collect(),
            weights: cone_order.iter().map(|&i| self.weights[i]).collect(),
        };
        (fan, ray_map, cone_map)
    }

    pub fn canonical(&self) -> WeightedFan {
        self.canonicalize().0
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality.len()
    }

    pub fn cone_dim(&self, cone: &[usize]) -> usize {
        let gens: Vec<Vec<i64>> =
            cone.iter().map(|&i| self.rays[i].clone()).chain(self.lineality.iter().cloned()).collect();
        crate::lattice::rank_i64(&gens)
    }

    /// Dimension of the largest maximal cone.
    pub fn dim(&self) -> usize {
        self.maximal_cones.iter().map(|c| self.cone_dim(c)).max().unwrap_or(0)
    }

    pub fn is_pure(&self) -> bool {
        let mut dims = self.maximal_cones.iter().map(|c| self.cone_dim(c));
        match dims.next() {
            None => true,
            Some(d) => dims.all(|x| x == d),
        }
    }

    /// Index of the first maximal cone whose generators are dependent, if any.
    pub fn first_non_simplicial(&self) -> Option<usize> {
        self.maximal_cones.iter().position(|c| self.cone_dim(c) != c.len() + self.lineality.len())
    }

    pub fn is_simplicial(&self) -> bool {
        self.first_non_simplicial().is_none()
    }

    fn generators(&self, cone: &[usize]) -> Vec<Vec<i64>> {
        cone.iter().map(|&i| self.rays[i].clone()).chain(self.lineality.iter().cloned()).collect()
    }

    // gcd of maximal minors of the generator matrix
    fn lattice_gcd(&self, cone: &[usize]) -> BigInt {
        let rows: Vec<Vec<BigInt>> =
            self.generators(cone).iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        elementary_divisors(&rows).iter().fold(BigInt::one(), |acc, d| acc * d)
    }

    /// Codimension-one faces of maximal cones, with the maximal cones containing each.
    pub fn codim_one_faces(&self) -> BTreeMap<Vec<usize>, Vec<usize>> {
        let mut faces: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (ci, c) in self.maximal_cones.iter().enumerate() {
            for skip in 0..c.len() {
                let face: Vec<usize> = c.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &r)| r).collect();
                faces.entry(face).or_default().push(ci);
            }
        }
        faces
    }

    /// Checks the balancing condition at every codimension-one face.
    ///
    /// For a maximal cone σ over a face τ with extra ray r, the primitive
    /// generator of σ modulo τ is r/k with k the ratio of the lattice indices
    /// of the generator sets of σ and τ.
    pub fn check_balanced(&self) -> Result<BalanceReport> {
        if !self.is_pure() {
            return Err(Error::NotPure);
        }
        if let Some(i) = self.first_non_simplicial() {
            return Err(Error::NotSimplicial(format!("maximal cone {i}: {:?}", self.maximal_cones[i])));
        }
        let faces = self.codim_one_faces();
        let mut gcd_cache: HashMap<Vec<usize>, BigInt> = HashMap::new();
        let mut gcd = |c: &[usize], fan: &WeightedFan| -> BigInt {
            gcd_cache.entry(c.to_vec()).or_insert_with(|| fan.lattice_gcd(c)).clone()
        };
        let mut violations = Vec::new();
        for (face, cones) in &faces {
            let g_tau = gcd(face, self);
            let mut sum = vec![Q::zero(); self.ambient_rank];
            for &ci in cones {
                let cone = &self.maximal_cones[ci];
                let extra = *cone.iter().find(|r| !face.contains(r)).expect("cone has one extra ray");
                let k = BigRational::new(gcd(cone, self), g_tau.clone());
                let w = q(self.weights[ci] as i64) / k;
                for (s, &x) in sum.iter_mut().zip(&self.rays[extra]) {
                    *s += &w * q(x);
                }
            }
            let span = Span::from_i64(self.ambient_rank, &self.generators(face));
            if !span.contains(&sum) {
                violations.push(face.clone());
            }
        }
        Ok(BalanceReport { balanced: violations.is_empty(), faces_checked: faces.len(), violations })
    }

    pub fn locator(&self) -> Locator {
        let solvers = self
            .maximal_cones
            .iter()
            .map(|c| {
                let rays: Vec<Vec<i64>> = c.iter().map(|&i| self.rays[i].clone()).collect();
                ConeSolver::new(self.ambient_rank, &rays, &self.lineality)
            })
            .collect();
        Locator { cones: self.maximal_cones.clone(), solvers }
    }

    /// The unique minimal cone containing `p`, as sorted ray indices.
    pub fn locate_cone(&self, p: &[Q]) -> Option<Vec<usize>> {
        self.locator().locate(p)
    }

    /// Whether `cone` (sorted ray indices) is a face of some maximal cone.
    pub fn contains_cone(&self, cone: &[usize]) -> bool {
        self.maximal_cones.iter().any(|c| cone.iter().all(|r| c.contains(r)))
    }

    /// Star of the fan at a cone: the cones containing it, modulo its span.
    ///
    /// The ambient space is unchanged; the cone's rays join the lineality.
    pub fn star(&self, cone: &[usize]) -> Result<WeightedFan> {
        let mut tau: Vec<usize> = cone.to_vec();
        tau.sort_unstable();
        tau.dedup();
        let containing: Vec<usize> =
            (0..self.maximal_cones.len()).filter(|&i| tau.iter().all(|r| self.maximal_cones[i].contains(r))).collect();
        if containing.is_empty() {
            return Err(Error::ConeNotInFan);
        }
        let mut lin = self.lineality.clone();
        lin.extend(tau.iter().map(|&i| self.rays[i].clone()));
        let mut new_index: BTreeMap<usize, usize> = BTreeMap::new();
        for &ci in &containing {
            for &r in &self.maximal_cones[ci] {
                if !tau.contains(&r) {
                    new_index.insert(r, 0);
                }
            }
        }
        for (k, v) in new_index.values_mut().enumerate() {
            *v = k;
        }
        let rays = new_index.keys().map(|&r| self.rays[r].clone()).collect();
        let cones = containing
            .iter()
            .map(|&ci| self.maximal_cones[ci].iter().filter(|r| !tau.contains(r)).map(|r| new_index[r]).collect())
            .collect();
        let weights = containing.iter().map(|&ci| self.weights[ci]).collect();
        WeightedFan::new(self.ambient_rank, rays, lin, cones, weights)
    }

    /// Star at the minimal cone containing a point of the support.
    pub fn star_at(&self, p: &[Q]) -> Result<WeightedFan> {
        let cone = self.locate_cone(p).ok_or(Error::PointOutside)?;
        self.star(&cone)
    }

    /// Cartesian product; weights multiply.
    pub fn product(&self, other: &WeightedFan) -> WeightedFan {
        let (d1, d2) = (self.ambient_rank, other.ambient_rank);
        let pad_left = |v: &Vec<i64>| {
            let mut x = v.clone();
            x.extend(std::iter::repeat_n(0, d2));
            x
        };
        let pad_right = |v: &Vec<i64>| {
            let mut x = vec![0; d1];
            x.extend(v.iter().copied());
            x
        };
        let mut rays: Vec<Vec<i64>> = self.rays.iter().map(pad_left).collect();
        rays.extend(other.rays.iter().map(pad_right));
        let mut lin: Vec<Vec<i64>> = self.lineality.iter().map(pad_left).collect();
        lin.extend(other.lineality.iter().map(pad_right));
        let off = self.rays.len();
        let mut cones = Vec::new();
        let mut weights = Vec::new();
        for (c1, w1) in self.maximal_cones.iter().zip(&self.weights) {
            for (c2, w2) in other.maximal_cones.iter().zip(&other.weights) {
                let mut c = c1.clone();
                c.extend(c2.iter().map(|i| i + off));
                cones.push(c);
                weights.push(w1 * w2);
            }
        }
        WeightedFan::new(d1 + d2, rays, lin, cones, weights).expect("product of valid fans")
    }

    /// Quotient by the all-ones line, presented by `x ↦ (x_e − x_0)_{e ≥ 1}`.
    pub fn quotient_lineality(&self) -> Result<WeightedFan> {
        let d = self.ambient_rank;
        if d == 0 {
            return Err(Error::Dimension("cannot quotient R^0".into()));
        }
        let span = Span::from_i64(d, &self.lineality);
        if !span.contains_i64(&vec![1; d]) {
            return Err(Error::Dimension("lineality does not contain (1,...,1)".into()));
        }
        let map = |v: &Vec<i64>| -> Vec<i64> { v[1..].iter().map(|x| x - v[0]).collect() };
        let rays: Vec<Vec<i64>> = self.rays.iter().map(map).collect();
        if rays.iter().any(|r| r.iter().all(|&x| x == 0)) {
            return Err(Error::Dimension("a ray lies on the all-ones line".into()));
        }
        let lin: Vec<Vec<i64>> = self.lineality.iter().map(map).filter(|v| v.iter().any(|&x| x != 0)).collect();
        WeightedFan::new(d - 1, rays, lin, self.maximal_cones.clone(), self.weights.clone())
    }

    /// Sampling check of the face structure: random relative-interior points of
    /// each maximal cone must lie in that maximal cone only, and every ray must
    /// be used by some maximal cone.
    pub fn paranoid_check(&self, seed: u64, samples_per_cone: usize) -> std::result::Result<(), String> {
        for (i, _) in self.rays.iter().enumerate() {
            if !self.maximal_cones.iter().any(|c| c.contains(&i)) {
                return Err(format!("ray {i} lies in no maximal cone"));
            }
        }
        let loc = self.locator();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (ci, c) in self.maximal_cones.iter().enumerate() {
            for _ in 0..samples_per_cone {
                let p = self.random_interior_point(c, &mut rng);
                let hits = loc.containing_maximal(&IntPoint::new(&p));
                if hits != vec![ci] {
                    return Err(format!("relative interior point of maximal cone {ci} lies in maximal cones {hits:?}"));
                }
            }
        }
        Ok(())
    }

    /// A point in the relative interior of a cone (positive ray coefficients).
    pub fn random_interior_point<R: Rng>(&self, cone: &[usize], rng: &mut R) -> Vec<Q> {
        let mut p = vec![0i64; self.ambient_rank];
        for &r in cone {
            let a = rng.random_range(1..=7);
            for (x, y) in p.iter_mut().zip(&self.rays[r]) {
                *x += a * y;
            }
        }
        for l in &self.lineality {
            let a = rng.random_range(-4..=4);
            for (x, y) in p.iter_mut().zip(l) {
                *x += a * y;
            }
        }
        p.into_iter().map(q).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("fan serializes")
    }

    pub fn from_json(text: &str) -> Result<WeightedFan> {
        let raw: WeightedFan = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        WeightedFan::new(raw.ambient_rank, raw.rays, raw.lineality, raw.maximal_cones, raw.weights)
    }

    /// Same cones with the same weights, ignoring the order of rays and cones.
    pub fn same_as(&self, other: &WeightedFan) -> bool {
        self.canonical() == other.canonical()
    }
}

/// Point location in the maximal cones of a fan.
#[derive(Clone, Debug)]
pub struct Locator {
    cones: Vec<Vec<usize>>,
    solvers: Vec<Option<ConeSolver>>,
}

impl Locator {
    /// The minimal cone containing `p`, or `None` when `p` is outside the support.
    pub fn locate(&self, p: &[Q]) -> Option<Vec<usize>> {
        self.locate_int(&IntPoint::new(p))
    }

    pub fn locate_int(&self, p: &IntPoint) -> Option<Vec<usize>> {
        for (c, s) in self.cones.iter().zip(&self.solvers) {
            if let Some(face) = s.as_ref().and_then(|s| s.face_of(p)) {
                let mut v: Vec<usize> = face.iter().map(|&i| c[i]).collect();
                v.sort_unstable();
                return Some(v);
            }
        }
        None
    }

    pub fn contains(&self, p: &[Q]) -> bool {
        self.locate(p).is_some()
    }

    /// Indices of all maximal cones containing `p`.
    pub fn containing_maximal(&self, p: &IntPoint) -> Vec<usize> {
        self.solvers
            .iter()
            .enumerate()
            .filter(|(_, s)| s.as_ref().is_some_and(|s| s.face_of(p).is_some()))
            .map(|(i, _)| i)
            .collect()
    }

    /// Indices of maximal cones whose relative interior contains `p`.
    pub fn relint_maximal(&self, p: &IntPoint) -> Vec<usize> {
        self.solvers
            .iter()
            .enumerate()
            .filter(|(_, s)| {
                s.as_ref().and_then(|s| s.signs(p)).is_some_and(|sg| sg.iter().all(|&o| o == Ordering::Greater))
            })
            .map(|(i, _)| i)
            .collect()
    }
}

/// Distinct rays of a list, as a set (used for comparisons in tests and reports).
pub fn ray_set(rays: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    rays.iter().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tropical_line() -> WeightedFan {
        WeightedFan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![],
            vec![vec![0], vec![1], vec![2]],
            vec![1; 3],
        )
        .unwrap()
    }

    #[test]
    fn tropical_line_is_balanced() {
        let f = tropical_line();
        let r = f.check_balanced().unwrap();
        assert!(r.balanced);
        assert_eq!(r.faces_checked, 1);
        let mut g = f.clone();
        g.weights[0] = 2;
        assert_eq!(g.check_balanced().unwrap().violations, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn non_primitive_quotient_generators_use_lattice_index() {
        // modulo the lineality (0,1), (1,2) is the primitive generator e_1
        let f =
            WeightedFan::new(2, vec![vec![1, 2], vec![-1, 0]], vec![vec![0, 1]], vec![vec![0], vec![1]], vec![1, 1])
                .unwrap();
        assert!(f.check_balanced().unwrap().balanced);
        // (2,1) is primitive in Z^2 but equals 2·e_1 modulo the lineality
        let g =
            WeightedFan::new(2, vec![vec![2, 1], vec![-1, 0]], vec![vec![0, 1]], vec![vec![0], vec![1]], vec![1, 1])
                .unwrap();
        assert!(g.check_balanced().unwrap().balanced);
    }

    #[test]
    fn purity_and_simpliciality_errors() {
        let f = WeightedFan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![],
            vec![vec![0, 1], vec![2]],
            vec![1, 1],
        )
        .unwrap();
        assert!(!f.is_pure());
        assert_eq!(f.check_balanced(), Err(Error::NotPure));
        let g = WeightedFan::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]], vec![], vec![vec![0, 1, 2]], vec![1])
            .unwrap();
        assert!(matches!(g.check_balanced(), Err(Error::NotSimplicial(_))));
    }

    #[test]
    fn locate_and_star() {
        let f = tropical_line();
        assert_eq!(f.locate_cone(&[q(0), q(0)]), Some(vec![]));
        assert_eq!(f.locate_cone(&[q(3), q(0)]), Some(vec![0]));
        assert_eq!(f.locate_cone(&[q(1), q(1)]), None);
        let s = f.star(&[]).unwrap();
        assert!(s.same_as(&f));
        let s = f.star(&[1]).unwrap();
        assert_eq!(s.maximal_cones, vec![Vec::<usize>::new()]);
        assert_eq!(s.lineality_dim(), 1);
        assert_eq!(f.star(&[0, 1]), Err(Error::ConeNotInFan));
        assert_eq!(f.star_at(&[q(1), q(1)]), Err(Error::PointOutside));
    }

    #[test]
    fn products_and_quotients() {
        let l = tropical_line();
        let p = l.product(&l);
        assert_eq!(p.maximal_cones.len(), 9);
        assert_eq!(p.dim(), 2);
        assert!(p.check_balanced().unwrap().balanced);
        assert!(l.product(&WeightedFan::point()).same_as(&l));
        // B(K_3) in R^3 with lineality (1,1,1)
        let b = WeightedFan::new(
            3,
            vec![vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]],
            vec![vec![1, 1, 1]],
            vec![vec![0], vec![1], vec![2]],
            vec![1; 3],
        )
        .unwrap();
        let qf = b.quotient_lineality().unwrap();
        assert_eq!(qf.ambient_rank, 2);
        assert_eq!(qf.lineality_dim(), 0);
        assert_eq!(ray_set(&qf.rays), ray_set(&[vec![1, 1], vec![-1, 0], vec![0, -1]]));
        assert!(qf.check_balanced().unwrap().balanced);
    }

    #[test]
    fn canonical_json_round_trip() {
        let f = WeightedFan::new(
            2,
            vec![vec![0, 1], vec![-1, -1], vec![1, 0]],
            vec![],
            vec![vec![2], vec![0], vec![1]],
            vec![1; 3],
        )
        .unwrap();
        let c = f.canonical();
        assert_eq!(c.rays, vec![vec![-1, -1], vec![0, 1], vec![1, 0]]);
        assert_eq!(c.maximal_cones, vec![vec![0], vec![1], vec![2]]);
        let back = WeightedFan::from_json(&c.to_json().to_string()).unwrap();
        assert_eq!(back, c);
        assert!(c.paranoid_check(1, 5).is_ok());
    }

    #[test]
    fn paranoid_detects_overlap() {
        let f = WeightedFan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![1, 1]],
            vec![],
            vec![vec![0, 1], vec![1, 2]],
            vec![1, 1],
        )
        .unwrap();
        assert!(f.paranoid_check(3, 10).is_err());
    }
}

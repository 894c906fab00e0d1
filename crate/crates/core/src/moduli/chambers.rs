//! Representatives of the weight chambers and random points inside a chamber.

use std::collections::HashSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{q_frac, Q};
use crate::moduli::weights::WeightVector;

/// Denominator of the grid searched for representatives.
pub const DENOMINATOR: i64 = 16;
pub const MAX_CHAMBER_LEAVES: usize = 7;

/// One non-increasing weight vector with entries in `(1/16)ℤ` per chamber
/// signature reachable on that grid, in lexicographically decreasing order.
pub fn chamber_representatives(n: usize) -> Result<Vec<WeightVector>> {
    if n < 4 {
        return Err(Error::InvalidWeights(format!("need n ≥ 4, got {n}")));
    }
    if n > MAX_CHAMBER_LEAVES {
        return Err(Error::TooLarge {
            what: "leaf count for chamber enumeration",
            actual: n,
            limit: MAX_CHAMBER_LEAVES,
        });
    }
    let mut seen: HashSet<u128> = HashSet::new();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    walk(n, DENOMINATOR, &mut cur, &mut seen, &mut out);
    Ok(out)
}

fn walk(n: usize, max: i64, cur: &mut Vec<i64>, seen: &mut HashSet<u128>, out: &mut Vec<WeightVector>) {
    if cur.len() == n {
        if cur.iter().sum::<i64>() <= 2 * DENOMINATOR {
            return;
        }
        // bit s set iff the subset s is light
        let mut key = 0u128;
        for s in 0u32..1 << n {
            let sum: i64 = (0..n).filter(|i| s >> i & 1 == 1).map(|i| cur[i]).sum();
            if sum <= DENOMINATOR {
                key |= 1 << s;
            }
        }
        if seen.insert(key) {
            let e = cur.iter().map(|&k| q_frac(k, DENOMINATOR)).collect();
            out.push(WeightVector::new(e).expect("grid point is a weight vector"));
        }
        return;
    }
    for k in (1..=max).rev() {
        cur.push(k);
        walk(n, k, cur, seen, out);
        cur.pop();
    }
}

/// A random weight vector with the same chamber signature as `w`.
pub fn perturb_in_chamber<R: Rng>(w: &WeightVector, rng: &mut R) -> WeightVector {
    let n = w.n() as i64;
    // subset sums move by less than 1/32 in total
    let scale = 32 * n * 64;
    let sig = w.signature();
    let shift = |lo: i64, hi: i64, rng: &mut R| -> Option<WeightVector> {
        let e: Vec<Q> = w.entries().iter().map(|x| x + q_frac(rng.random_range(lo..=hi), scale)).collect();
        let v = WeightVector::new(e).ok()?;
        (v.signature() == sig).then_some(v)
    };
    for _ in 0..20 {
        if let Some(v) = shift(-63, 63, rng) {
            return v;
        }
    }
    // pushing every entry down never leaves a grid chamber
    shift(-63, 0, rng).unwrap_or_else(|| w.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn representatives_have_distinct_signatures() {
        for n in 4..=6 {
            let reps = chamber_representatives(n).unwrap();
            let sigs: HashSet<_> = reps.iter().map(|w| w.signature()).collect();
            assert_eq!(sigs.len(), reps.len());
            assert!(reps.iter().any(|w| w.classify().heavy_light));
            assert!(reps.iter().any(|w| !w.classify().heavy_light));
        }
        assert!(matches!(chamber_representatives(8), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn perturbation_stays_in_chamber() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for w in chamber_representatives(5).unwrap() {
            let v = perturb_in_chamber(&w, &mut rng);
            assert_eq!(v.signature(), w.signature());
        }
    }
}

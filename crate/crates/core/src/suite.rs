//! The desk-scale verification suite run by `tropmod verify all`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bergman::{
    chains_of_flats_fan, flat_ray, nested_set_fan, one_connected_building_set, BergmanOracle, MembershipMethod,
};
use crate::error::{Error, Result};
use crate::fibre::{non_chordal_counterexample, square_counterexample, verify_fibre_theorem};
use crate::graph::{EdgeSet, Graph};
use crate::lattice::q;
use crate::matroid::GraphicMatroid;
use crate::moduli::m0n::{complete_graph, split_to_flat};
use crate::moduli::projection::total_image_dim;
use crate::moduli::{
    chamber_representatives, enumerate_tree_types, inherited_unstable, losev_manin_fan, m0n_fan, m0w_fan,
    perturb_in_chamber, stable_types, M0wOutcome, Projection, Split, WeightVector,
};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub max_n: usize,
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub max_n: usize,
    pub seed: u64,
    /// Random points per graph for the membership comparison.
    pub membership_samples: usize,
    /// Random points for the completeness of each Losev–Manin fan.
    pub completeness_samples: usize,
    /// Chamber-equivalent pairs per `n`.
    pub invariance_pairs: usize,
    /// Random points for the fibre-product support comparison.
    pub fibre_samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_n: 6,
            seed: 0,
            membership_samples: 1000,
            completeness_samples: 10_000,
            invariance_pairs: 100,
            fibre_samples: 1000,
        }
    }
}

type Check = (bool, String);

fn timed(id: u8, name: &'static str, f: impl FnOnce() -> Result<Check>) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult { id, name, passed, detail, elapsed: start.elapsed() }
}

pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut graphs = Vec::new();
    let criteria = vec![
        timed(1, "moduli fan of five points", || m0n_five(&mut graphs)),
        timed(2, "worked example", || worked_example(&mut graphs)),
        timed(3, "heavy/light criterion", || heavy_light_chambers(cfg.max_n, &mut graphs)),
        timed(4, "fewer than two heavy entries", || few_heavy(cfg.max_n)),
        timed(5, "Losev-Manin fans", || losev_manin(cfg, &mut graphs)),
        timed(6, "membership oracles agree", || membership(cfg, &graphs)),
        timed(7, "fibre products", || fibre(cfg)),
        timed(8, "chamber invariance", || chamber_invariance(cfg)),
    ];
    SuiteReport { max_n: cfg.max_n, seed: cfg.seed, criteria }
}

pub fn m0n_five(graphs: &mut Vec<Graph>) -> Result<Check> {
    let f = m0n_fan(5)?;
    let g = complete_graph(5);
    let m = GraphicMatroid::from_graph(g.clone());
    let nested = nested_set_fan(&m, &one_connected_building_set(&m)?)?.quotient()?;
    let trivalent = enumerate_tree_types(5, true)?;
    let ray_map: Vec<usize> = f
        .splits
        .iter()
        .map(|&s| nested.ray_of(split_to_flat(5, s)))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Dimension("split without a flat".into()))?;
    let negated =
        ray_map.iter().enumerate().all(|(i, &j)| nested.fan.rays[j].iter().zip(&f.fan.rays[i]).all(|(a, b)| *a == -b));
    let mut cones: BTreeSet<Vec<usize>> = BTreeSet::new();
    for t in &trivalent {
        let mut c: Vec<usize> = t.splits().iter().map(|&s| ray_map[f.ray_of(s).expect("split ray")]).collect();
        c.sort_unstable();
        cones.insert(c);
    }
    let nested_cones: BTreeSet<Vec<usize>> = nested.fan.maximal_cones.iter().cloned().collect();
    graphs.push(g);
    let ok = f.fan.rays.len() == 10
        && f.fan.maximal_cones.len() == 15
        && trivalent.len() == 15
        && negated
        && cones == nested_cones
        && f.fan.check_balanced()?.balanced;
    Ok((
        ok,
        format!(
            "{} rays, {} cones, {} trivalent types, bijection with nested cones: {}",
            f.fan.rays.len(),
            f.fan.maximal_cones.len(),
            trivalent.len(),
            cones == nested_cones
        ),
    ))
}

pub fn worked_example(graphs: &mut Vec<Graph>) -> Result<Check> {
    let w: WeightVector = "1,1,3/4,3/4,1/4".parse()?;
    let p = Projection::new(&w)?;
    let m = GraphicMatroid::from_graph(p.graph().clone());
    let bs = one_connected_building_set(&m)?;
    let proper: Vec<EdgeSet> = bs.members.iter().copied().filter(|&f| f != m.ground()).collect();
    let rank1 = proper.iter().filter(|&&f| m.rank_unchecked(f) == 1).count();
    let rank2 = proper.iter().filter(|&&f| m.rank_unchecked(f) == 2).count();
    let nested = nested_set_fan(&m, &bs)?;
    let split = |l: &[usize]| Split::from_leaves(5, l);
    let f3 = EdgeSet::singleton(p.graph().edge_index(3, 4).expect("edge 34"));
    let v = flat_ray(f3, m.ground_size());
    let v_f3: Vec<i64> = v[1..].iter().map(|x| x - v[0]).collect();
    let img = |l: &[usize]| split(l).map(|s| p.ray_image(s)).ok_or_else(|| Error::Parse(format!("bad split {l:?}")));
    let table = img(&[1, 2])?.image == v_f3
        && img(&[3, 4])?.image == v_f3
        && img(&[3, 5])?.is_zero()
        && img(&[4, 5])?.is_zero();
    graphs.push(p.graph().clone());
    let ok = proper.len() == 7 && rank1 == 4 && rank2 == 3 && nested.fan.maximal_cones.len() == 8 && table;
    Ok((
        ok,
        format!(
            "{} connected flats ({rank1} of rank 1, {rank2} of rank 2), {} nested cones, projection table {}",
            proper.len(),
            nested.fan.maximal_cones.len(),
            if table { "matches" } else { "differs" }
        ),
    ))
}

pub fn heavy_light_chambers(max_n: usize, graphs: &mut Vec<Graph>) -> Result<Check> {
    let (mut fans, mut obstructions, mut bad) = (0, 0, Vec::new());
    let mut seen: BTreeSet<Vec<(i64, i64)>> = BTreeSet::new();
    for n in 4..=max_n {
        for w in chamber_representatives(n)? {
            let hl = w.classify().heavy_light;
            match m0w_fan(&w)? {
                M0wOutcome::Fan(f) => {
                    let balanced = f.fan.fan.check_balanced()?.balanced;
                    let ones = f.fan.fan.weights.iter().all(|&x| x == 1);
                    let bij = f.correspondence.len() == stable_types(&w, true)?.len()
                        && f.correspondence.len() == f.fan.fan.maximal_cones.len();
                    if !(hl && balanced && ones && bij) {
                        bad.push(w.to_string());
                    }
                    if seen.insert(f.graph.edges().to_vec()) {
                        graphs.push(f.graph.clone());
                    }
                    fans += 1;
                }
                M0wOutcome::Obstruction(_) => {
                    if hl {
                        bad.push(w.to_string());
                    }
                    obstructions += 1;
                }
            }
        }
    }
    Ok((bad.is_empty(), format!("{fans} balanced fans, {obstructions} obstructions, failures: {bad:?}")))
}

pub fn few_heavy(max_n: usize) -> Result<Check> {
    let (mut chambers, mut cones, mut bad) = (0, 0, Vec::new());
    for n in 4..=max_n {
        for w in chamber_representatives(n)? {
            if w.heavy().len() >= 2 {
                continue;
            }
            chambers += 1;
            for t in stable_types(&w, true)? {
                cones += 1;
                if total_image_dim(&w, t.splits()) >= n - 3 {
                    bad.push(format!("{w} {t:?}"));
                }
            }
        }
    }
    Ok((
        bad.is_empty(),
        format!("{chambers} chambers, {cones} stable cones, all projected below dimension n-3: {}", bad.is_empty()),
    ))
}

pub fn losev_manin(cfg: &SuiteConfig, graphs: &mut Vec<Graph>) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut ok = true;
    let mut parts = Vec::new();
    for t in 2..=4usize {
        let f = losev_manin_fan(t)?;
        let loc = f.fan.locator();
        let missed = (0..cfg.completeness_samples)
            .filter(|_| {
                let p: Vec<_> = (0..f.fan.ambient_rank).map(|_| q(rng.random_range(-50..=50))).collect();
                !loc.contains(&p)
            })
            .count();
        let fact: usize = (1..=t).product();
        let good = f.fan.rays.len() == (1 << t) - 2
            && f.fan.maximal_cones.len() == fact
            && f.fan.weights.iter().all(|&x| x == 1)
            && f.fan.check_balanced()?.balanced
            && missed == 0;
        ok &= good;
        parts.push(format!(
            "t={t}: {} rays, {} cones, {missed} unlocated",
            f.fan.rays.len(),
            f.fan.maximal_cones.len()
        ));
        graphs.push(Graph::star(2, 3..=(t as i64 + 2))?);
    }
    Ok((ok, parts.join("; ")))
}

pub fn membership(cfg: &SuiteConfig, graphs: &[Graph]) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6d);
    let mut disagreements = 0;
    let mut inside = 0;
    for g in graphs {
        let m = GraphicMatroid::from_graph(g.clone());
        let oracle = BergmanOracle::new(&m)?;
        let chains = chains_of_flats_fan(&m)?.fan;
        for k in 0..cfg.membership_samples {
            // half the points are drawn from cones of the fan, half near them
            let c = &chains.maximal_cones[rng.random_range(0..chains.maximal_cones.len())];
            let mut p = chains.random_interior_point(c, &mut rng);
            if k % 2 == 1 {
                let i = rng.random_range(0..p.len());
                p[i] += q(rng.random_range(-2..=2));
            }
            let a = oracle.contains(&p, MembershipMethod::Circuits)?;
            let b = oracle.contains(&p, MembershipMethod::MinBases)?;
            let c = oracle.contains(&p, MembershipMethod::ChainsFan)?;
            if a != b || b != c {
                disagreements += 1;
            }
            inside += usize::from(a);
        }
    }
    Ok((
        disagreements == 0 && cfg.membership_samples >= 1000,
        format!(
            "{} graphs x {} points, {inside} inside, {disagreements} disagreements",
            graphs.len(),
            cfg.membership_samples
        ),
    ))
}

pub fn fibre(cfg: &SuiteConfig) -> Result<Check> {
    let r = verify_fibre_theorem(&WeightVector::heavy_light(3, 2)?, cfg.fibre_samples, cfg.seed)?;
    let c = &r.comparison;
    let sq = square_counterexample()?;
    let nc = non_chordal_counterexample()?;
    let ok = r.passed
        && (c.product_cells, c.nested_cones, r.stable_trivalent) == (9, 12, 12)
        && sq.expected_dim == 4
        && sq.dimension_mismatch
        && !nc.predicates.is_chordal
        && nc.stable_max_at_codim_one == 4
        && nc.excess_rays;
    Ok((
        ok,
        format!(
            "{} product cells refined to {} nested cones ({} stable types), weights one: {}; \
             square: expected {} vs rank {} (B' dimension {}); non-chordal: {} cells at a codim-1 face vs at most {}",
            c.product_cells,
            c.nested_cones,
            r.stable_trivalent,
            c.weights_one,
            sq.expected_dim,
            sq.glued_rank,
            sq.glued_dim,
            nc.stable_max_at_codim_one,
            nc.glued_max_at_codim_one
        ),
    ))
}

/// Everything that should depend only on the chamber of `w`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChamberData {
    pub stable: Vec<bool>,
    pub unstable: BTreeSet<crate::moduli::TreeType>,
    pub outcome: Option<crate::fan::WeightedFan>,
    pub obstruction: Option<crate::moduli::Obstruction>,
}

pub fn chamber_data(w: &WeightVector) -> Result<ChamberData> {
    let stable = enumerate_tree_types(w.n(), false)?.iter().map(|t| t.is_w_stable(w)).collect();
    let unstable = inherited_unstable(w)?.all();
    let (outcome, obstruction) = match m0w_fan(w)? {
        M0wOutcome::Fan(f) => (Some(f.fan.fan.canonical()), None),
        M0wOutcome::Obstruction(o) => (None, Some(o.obstruction)),
    };
    Ok(ChamberData { stable, unstable, outcome, obstruction })
}

pub fn chamber_invariance(cfg: &SuiteConfig) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xc4);
    let mut bad = Vec::new();
    let mut pairs = 0;
    for n in 4..=cfg.max_n {
        let reps = chamber_representatives(n)?;
        for _ in 0..cfg.invariance_pairs {
            let w = &reps[rng.random_range(0..reps.len())];
            let a = perturb_in_chamber(w, &mut rng);
            let b = perturb_in_chamber(w, &mut rng);
            if a.signature() != b.signature() || chamber_data(&a)? != chamber_data(&b)? {
                bad.push(format!("{a} / {b}"));
            }
            pairs += 1;
        }
    }
    Ok((bad.is_empty(), format!("{pairs} pairs, {} disagreements {bad:?}", bad.len())))
}

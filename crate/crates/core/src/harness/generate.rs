//! Seeded instance generators. Coefficients are small rationals (numerators
//! in `[-9, 9]`, denominators in `[1, 9]`) so exact arithmetic stays cheap.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::measure::{Atom, AtomicMeasure};
use crate::pmf::PmfFamily;
use crate::polyhedron::{ConvexBody, HPolyhedron, HRow, VPolytope};
use crate::rational::{int, rat, Rat};
use crate::sample::{positive_weights, small_rat, small_vector};

pub const MAX_DIM: usize = 5;
pub const MAX_ROWS: usize = 12;
pub const MAX_VERTICES: usize = 12;
/// Share of instances forced onto a proper affine subspace.
pub const DEGENERATE_PROBABILITY: f64 = 0.2;
const BOUNDED_RETRIES: usize = 64;

/// Per-instance seed derived from the suite seed (splitmix64 finalizer).
pub fn instance_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    V { n_vertices: usize },
    H { n_rows: usize },
}

/// What to generate; `degenerate: None` draws the flag with probability
/// [`DEGENERATE_PROBABILITY`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeRequest {
    pub dim: usize,
    pub shape: Shape,
    pub degenerate: Option<bool>,
}

/// Deterministic polytope for `(seed, request)`.
pub fn gen_polytope(seed: u64, req: &PolytopeRequest) -> Result<ConvexBody> {
    if req.dim == 0 || req.dim > MAX_DIM {
        return Err(Error::Invalid(format!("dimension must lie in 1..={MAX_DIM}")));
    }
    let mut rng = rng_for(seed);
    let degenerate = req.degenerate.unwrap_or_else(|| rng.gen_bool(DEGENERATE_PROBABILITY));
    match req.shape {
        Shape::V { n_vertices } => {
            if n_vertices == 0 || n_vertices > MAX_VERTICES {
                return Err(Error::Invalid(format!("vertex count must lie in 1..={MAX_VERTICES}")));
            }
            Ok(ConvexBody::V(random_v_polytope(&mut rng, req.dim, n_vertices, degenerate)?))
        }
        Shape::H { n_rows } => {
            if n_rows > MAX_ROWS || n_rows < req.dim + 1 {
                return Err(Error::Invalid(format!("row count must lie in {}..={MAX_ROWS}", req.dim + 1)));
            }
            Ok(ConvexBody::H(random_h_polytope(&mut rng, req.dim, n_rows, degenerate)?))
        }
    }
}

fn nonzero_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vector {
    loop {
        let v = small_vector(rng, d);
        if !v.is_zero() {
            return v;
        }
    }
}

/// A slack in `{1/3, 2/3, …, 3}`.
fn positive_slack<R: Rng + ?Sized>(rng: &mut R) -> Rat {
    rat(rng.gen_range(1..=9), 3)
}

/// Bounded nonempty H-polytope with `n_rows` rows around a random center.
/// Degenerate instances spend two rows on an opposite pair `a·x ≤ b`,
/// `-a·x ≤ -b`, an implicit equality that must be detected.
pub fn random_h_polytope<R: Rng + ?Sized>(rng: &mut R, d: usize, n_rows: usize, degenerate: bool) -> Result<HPolyhedron> {
    let pinned = if degenerate && n_rows >= d + 3 { 1 } else { 0 };
    for _ in 0..BOUNDED_RETRIES {
        let center = small_vector(rng, d);
        let mut rows = Vec::with_capacity(n_rows);
        for _ in 0..pinned {
            let a = nonzero_vector(rng, d);
            let b = a.dot(&center.0);
            rows.push(HRow::le((-&a).0, -b.clone()));
            rows.push(HRow::le(a.0, b));
        }
        while rows.len() < n_rows {
            let a = nonzero_vector(rng, d);
            let b = a.dot(&center.0) + positive_slack(rng);
            rows.push(HRow::le(a.0, b));
        }
        let h = HPolyhedron::new(d, rows)?;
        if h.is_bounded() {
            return Ok(h);
        }
    }
    // axis box around the origin as a bounded fallback
    let mut rows = Vec::new();
    for j in 0..d {
        rows.push(HRow::le(Vector::unit(d, j).0, int(1)));
        rows.push(HRow::le((-&Vector::unit(d, j)).0, int(1)));
    }
    HPolyhedron::new(d, rows)
}

/// `n` generators in `ℚ^d`, distinct. Degenerate instances lie on a random
/// affine subspace of dimension `< d`.
pub fn random_v_polytope<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize, degenerate: bool) -> Result<VPolytope> {
    let mut pts: Vec<Vector> = Vec::with_capacity(n);
    let base = small_vector(rng, d);
    let k = if d == 1 { 0 } else { rng.gen_range(1..d) };
    let dirs: Vec<Vector> = (0..k).map(|_| nonzero_vector(rng, d)).collect();
    let mut attempts = 0;
    while pts.len() < n && attempts < 50 * n {
        attempts += 1;
        let p = if degenerate {
            dirs.iter().fold(base.clone(), |acc, b| acc.axpy(&small_rat(rng), b))
        } else {
            small_vector(rng, d)
        };
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    VPolytope::new(pts)
}

/// Corpus polytope for the face-calculus suites: `d ≤ 5`, `d+1 ≤ m ≤ 12`.
pub fn corpus_h<R: Rng + ?Sized>(rng: &mut R) -> Result<HPolyhedron> {
    let d = rng.gen_range(1..=MAX_DIM);
    let m = rng.gen_range(d + 1..=MAX_ROWS);
    let degenerate = rng.gen_bool(DEGENERATE_PROBABILITY);
    random_h_polytope(rng, d, m, degenerate)
}

/// Small V-polytope for lattice suites: `d ≤ 3`, at most `max_n` generators.
pub fn corpus_v<R: Rng + ?Sized>(rng: &mut R, max_n: usize) -> Result<VPolytope> {
    let d = rng.gen_range(1..=3);
    let n = rng.gen_range(1..=max_n);
    let degenerate = rng.gen_bool(DEGENERATE_PROBABILITY);
    random_v_polytope(rng, d, n, degenerate)
}

/// H-polyhedron whose rows are tight at `x` with probability `tight` and
/// otherwise leave positive slack; occasionally pinned by an opposite pair
/// through `x`. Always contains `x`.
pub fn polyhedron_through<R: Rng + ?Sized>(rng: &mut R, x: &Vector, n_rows: usize, tight: f64) -> Result<HPolyhedron> {
    let d = x.dim();
    let mut rows = Vec::with_capacity(n_rows + 2);
    if rng.gen_bool(DEGENERATE_PROBABILITY) {
        let a = nonzero_vector(rng, d);
        let b = a.dot(&x.0);
        rows.push(HRow::le((-&a).0, -b.clone()));
        rows.push(HRow::le(a.0, b));
    }
    for _ in 0..n_rows {
        let a = nonzero_vector(rng, d);
        let slack = if rng.gen_bool(tight) { Rat::zero() } else { positive_slack(rng) };
        let b = a.dot(&x.0) + slack;
        rows.push(HRow::le(a.0, b));
    }
    HPolyhedron::new(d, rows)
}

/// Affine map `ℚ^d → ℚ^r`, `1 ≤ r ≤ 3`, with small integer entries.
pub fn random_affine_map<R: Rng + ?Sized>(rng: &mut R, d: usize) -> (Vec<Vec<Rat>>, Vector) {
    let r = rng.gen_range(1..=3);
    let m = (0..r).map(|_| (0..d).map(|_| int(rng.gen_range(-3..=3))).collect()).collect();
    (m, small_vector(rng, r))
}

/// Atomic measure with at most `max_atoms` atoms in dimension at most `max_d`.
pub fn random_measure<R: Rng + ?Sized>(rng: &mut R, max_atoms: usize, max_d: usize) -> Result<AtomicMeasure> {
    let d = rng.gen_range(1..=max_d);
    let n = rng.gen_range(1..=max_atoms);
    let degenerate = rng.gen_bool(DEGENERATE_PROBABILITY);
    let locs = random_v_polytope(rng, d, n, degenerate)?.vertices().to_vec();
    let w = positive_weights(rng, locs.len());
    AtomicMeasure::new(locs.into_iter().zip(w).map(|(loc, w)| Atom { loc, w }).collect())
}

const RATIOS: [(i64, i64); 6] = [(1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (9, 10)];
const EXPONENTS: [(i64, i64); 5] = [(3, 2), (2, 1), (5, 2), (3, 1), (4, 1)];

pub fn zeta_exponents() -> Vec<Rat> {
    EXPONENTS.iter().map(|&(n, d)| rat(n, d)).collect()
}

fn pick<R: Rng + ?Sized>(rng: &mut R, xs: &[(i64, i64)]) -> Rat {
    let (n, d) = xs[rng.gen_range(0..xs.len())];
    rat(n, d)
}

/// `geometric(r)` with up to three head masses rebalanced; infinite support.
pub fn perturbed_geometric<R: Rng + ?Sized>(rng: &mut R) -> PmfFamily {
    let ratio = pick(rng, &RATIOS);
    let h = rng.gen_range(1..=3);
    // masses k/(4h) with k ≤ 3 leave at least 1/4 for the tail
    let head: Vec<Rat> = (0..h).map(|_| rat(rng.gen_range(0..=3), 4 * h as i64)).collect();
    PmfFamily::geometric_with_head(ratio, head).expect("tail mass at least 1/4")
}

/// A family with infinite support: geometric, perturbed geometric or power.
pub fn random_infinite_pmf<R: Rng + ?Sized>(rng: &mut R) -> PmfFamily {
    match rng.gen_range(0..3) {
        0 => PmfFamily::geometric(pick(rng, &RATIOS)).expect("ratio in (0,1)"),
        1 => perturbed_geometric(rng),
        _ => PmfFamily::power(pick(rng, &EXPONENTS)).expect("exponent above 1"),
    }
}

/// Finite pmf on `{1, …, 10}` with up to four atoms.
pub fn random_finite_pmf<R: Rng + ?Sized>(rng: &mut R) -> PmfFamily {
    let n = rng.gen_range(1..=4);
    let mut pts: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=10)).collect();
    pts.sort_unstable();
    pts.dedup();
    let w = positive_weights(rng, pts.len());
    PmfFamily::finite(&pts.into_iter().zip(w).collect::<Vec<_>>()).expect("weights sum to 1")
}

/// Any catalog family, including truncations and Hall transforms.
pub fn random_pmf<R: Rng + ?Sized>(rng: &mut R) -> PmfFamily {
    match rng.gen_range(0..6) {
        0 => random_finite_pmf(rng),
        1 => PmfFamily::truncation(random_infinite_pmf(rng), rng.gen_range(1..=10)).expect("k ≥ 1"),
        2 => PmfFamily::hall_of(random_infinite_pmf(rng)),
        _ => random_infinite_pmf(rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::affine_hull;
    use crate::polyhedron::ConvexSet;

    #[test]
    fn same_seed_same_instance() {
        let req = PolytopeRequest { dim: 2, shape: Shape::V { n_vertices: 3 }, degenerate: None };
        assert_eq!(gen_polytope(1, &req).unwrap(), gen_polytope(1, &req).unwrap());
        let h = PolytopeRequest { dim: 3, shape: Shape::H { n_rows: 8 }, degenerate: None };
        assert_eq!(gen_polytope(7, &h).unwrap(), gen_polytope(7, &h).unwrap());
    }

    #[test]
    fn degenerate_planar_instance_is_a_segment() {
        let req = PolytopeRequest { dim: 2, shape: Shape::V { n_vertices: 3 }, degenerate: Some(true) };
        let ConvexBody::V(v) = gen_polytope(2, &req).unwrap() else { panic!() };
        assert_eq!(affine_hull(v.vertices()).unwrap().dim(), 1);
    }

    #[test]
    fn bounds_are_enforced() {
        let req = PolytopeRequest { dim: 9, shape: Shape::V { n_vertices: 3 }, degenerate: None };
        assert!(gen_polytope(1, &req).is_err());
        let req = PolytopeRequest { dim: 2, shape: Shape::H { n_rows: 13 }, degenerate: None };
        assert!(gen_polytope(1, &req).is_err());
    }

    #[test]
    fn h_instances_are_bounded_and_nonempty() {
        for s in 0..20 {
            let h = corpus_h(&mut rng_for(s)).unwrap();
            assert!(!h.is_empty() && h.is_bounded());
            assert!(h.num_rows() <= MAX_ROWS && h.dim() <= MAX_DIM);
        }
        let h = random_h_polytope(&mut rng_for(3), 3, 8, true).unwrap();
        assert_eq!(h.implicit_equalities().unwrap().affine_hull.dim(), 2);
    }

    #[test]
    fn seeds_spread() {
        assert_ne!(instance_seed(42, 0), instance_seed(42, 1));
        assert_ne!(instance_seed(42, 0), instance_seed(43, 0));
    }
}

//! Seeded exact sampling of points in polytopes and their faces.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::lp::LpOutcome;
use crate::polyhedron::{ConvexSet, HPolyhedron, VPolytope};
use crate::rational::{int, rat, Rat};

/// A rational in `(0, 1)` with denominator at most 10.
pub fn unit_open<R: Rng + ?Sized>(rng: &mut R) -> Rat {
    let d = rng.gen_range(2..=10);
    rat(rng.gen_range(1..d), d)
}

/// A rational with numerator in `[-9, 9]` and denominator in `[1, 9]`.
pub fn small_rat<R: Rng + ?Sized>(rng: &mut R) -> Rat {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

pub fn small_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vector {
    Vector((0..d).map(|_| small_rat(rng)).collect())
}

/// Positive integer weights normalized to sum 1.
pub fn positive_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Rat> {
    let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=9)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| rat(w, total)).collect()
}

/// Strictly positive convex combination of the selected generators: a point
/// of `rai(conv(subset))`.
pub fn in_cell_v<R: Rng + ?Sized>(v: &VPolytope, subset: &BTreeSet<usize>, rng: &mut R) -> Result<Vector> {
    if subset.is_empty() {
        return Err(Error::Invalid("empty cell".into()));
    }
    let pts: Vec<&Vector> = subset.iter().map(|&i| &v.vertices()[i]).collect();
    Ok(Vector::combination(&pts, &positive_weights(rng, pts.len())))
}

/// A point of `conv(vertices)` that lands on lower-dimensional faces often:
/// weights are drawn from `0..=3`, so many vanish.
pub fn in_polytope_v<R: Rng + ?Sized>(v: &VPolytope, rng: &mut R) -> Result<Vector> {
    if v.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut raw: Vec<i64> = (0..v.len()).map(|_| rng.gen_range(0..=3)).collect();
    if raw.iter().all(|&w| w == 0) {
        let j = rng.gen_range(0..raw.len());
        raw[j] = 1;
    }
    let total: i64 = raw.iter().sum();
    let pts: Vec<&Vector> = v.vertices().iter().collect();
    let w: Vec<Rat> = raw.into_iter().map(|x| rat(x, total)).collect();
    Ok(Vector::combination(&pts, &w))
}

/// Maximizer of a random objective; recession rays are followed one unit.
pub fn random_extreme_h<R: Rng + ?Sized>(h: &HPolyhedron, rng: &mut R) -> Result<Vector> {
    let c: Vec<Rat> = (0..h.dim()).map(|_| int(rng.gen_range(-9..=9))).collect();
    match h.lp(Some(&c)) {
        LpOutcome::Feasible { witness, .. } => Ok(witness),
        LpOutcome::Unbounded { witness, direction } => Ok(&witness + &direction),
        LpOutcome::Infeasible => Err(Error::EmptyPolyhedron),
    }
}

/// A point of `h` drawn from a mixture that hits vertices, edges and the
/// relative interior: either an LP vertex, a two-vertex mix, or a mix of a
/// relative-interior point with a vertex.
pub fn in_polyhedron_h<R: Rng + ?Sized>(h: &HPolyhedron, rng: &mut R) -> Result<Vector> {
    let inner = h.implicit_equalities()?.relative_interior_point.clone();
    Ok(match rng.gen_range(0..5) {
        0 => random_extreme_h(h, rng)?,
        1 => {
            let (a, b) = (random_extreme_h(h, rng)?, random_extreme_h(h, rng)?);
            a.lerp(&b, &unit_open(rng))
        }
        2 => inner,
        _ => {
            let a = random_extreme_h(h, rng)?;
            inner.lerp(&a, &unit_open(rng))
        }
    })
}

/// A point in the relative interior of `face`, typically the face polyhedron
/// `h.with_equalities(forced)` of a cell.
pub fn in_relative_interior_h<R: Rng + ?Sized>(face: &HPolyhedron, rng: &mut R) -> Result<Vector> {
    let inner = face.implicit_equalities()?.relative_interior_point.clone();
    if rng.gen_bool(0.25) {
        return Ok(inner);
    }
    let a = random_extreme_h(face, rng)?;
    Ok(inner.lerp(&a, &unit_open(rng)))
}

/// A direction in the linear span of `basis` with small random coefficients.
pub fn in_span<R: Rng + ?Sized>(basis: &[Vector], d: usize, rng: &mut R) -> Vector {
    basis
        .iter()
        .fold(Vector::zeros(d), |acc, b| acc.axpy(&small_rat(rng), b))
}

pub fn nonzero_small_rat<R: Rng + ?Sized>(rng: &mut R) -> Rat {
    loop {
        let r = small_rat(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

//! Exact vectors, Gaussian elimination, affine subspaces and segment predicates.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_rat, int, serde_rat_vec, Rat};

/// A point or direction in ℚ^d.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(#[serde(with = "serde_rat_vec")] pub Vec<Rat>);

impl Vector {
    pub fn zeros(d: usize) -> Self {
        Vector(vec![Rat::zero(); d])
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Vector(xs.iter().map(|&x| int(x)).collect())
    }

    /// Unit vector `e_i` in dimension `d`.
    pub fn unit(d: usize, i: usize) -> Self {
        let mut v = Self::zeros(d);
        v.0[i] = Rat::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.0.iter()
    }

    pub fn dot(&self, other: &[Rat]) -> Rat {
        debug_assert_eq!(self.dim(), other.len());
        self.0
            .iter()
            .zip(other)
            .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, c: &Rat) -> Vector {
        Vector(self.0.iter().map(|x| x * c).collect())
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Rat, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + c * b).collect())
    }

    /// The affine combination `(1 - t) * self + t * other`.
    pub fn lerp(&self, other: &Vector, t: &Rat) -> Vector {
        let s = Rat::one() - t;
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a * &s + b * t)
                .collect(),
        )
    }

    /// `x + eps * (x - y)`, the step of Alfsen's formula.
    pub fn step_away(&self, from: &Vector, eps: &Rat) -> Vector {
        Vector(
            self.0
                .iter()
                .zip(&from.0)
                .map(|(x, y)| x + eps * (x - y))
                .collect(),
        )
    }

    pub fn check_dim(&self, d: usize) -> Result<()> {
        if self.dim() == d {
            Ok(())
        } else {
            Err(Error::dim(d, self.dim()))
        }
    }

    /// Weighted combination `Σ w_i p_i`; weights need not sum to one.
    pub fn combination(points: &[&Vector], weights: &[Rat]) -> Vector {
        let d = points.first().map_or(0, |p| p.dim());
        let mut out = Vector::zeros(d);
        for (p, w) in points.iter().zip(weights) {
            for (o, x) in out.0.iter_mut().zip(&p.0) {
                *o += w * x;
            }
        }
        out
    }

    /// Equal-weight average of a nonempty list.
    pub fn centroid(points: &[Vector]) -> Result<Vector> {
        let first = points.first().ok_or(Error::EmptyPointSet)?;
        let n = int(points.len() as i64);
        let mut out = Vector::zeros(first.dim());
        for p in points {
            p.check_dim(first.dim())?;
            for (o, x) in out.0.iter_mut().zip(&p.0) {
                *o += x;
            }
        }
        Ok(Vector(out.0.into_iter().map(|x| x / &n).collect()))
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_rat(x))?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Index<usize> for Vector {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }
}

impl From<Vec<Rat>> for Vector {
    fn from(v: Vec<Rat>) -> Self {
        Vector(v)
    }
}

/// Row-reduces `rows` (each of length `ncols`) in place to reduced row echelon
/// form, drops zero rows and returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Rat>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rat::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rat>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of `{v : M v = 0}` for an `m × ncols` matrix.
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vector> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = Vector::zeros(ncols);
            v.0[f] = Rat::one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v.0[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// One solution of `M x = rhs`, or `None` when the system is inconsistent.
pub fn solve(rows: &[Vec<Rat>], rhs: &[Rat], ncols: usize) -> Option<Vector> {
    let mut aug: Vec<Vec<Rat>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = Vector::zeros(ncols);
    for (row, &pc) in aug.iter().zip(&pivots) {
        x.0[pc] = row[ncols].clone();
    }
    Some(x)
}

/// Affine subspace `basepoint + span(basis)` in canonical form: the basis is
/// in reduced row echelon form and the basepoint is reduced against it, so
/// structural equality coincides with set equality.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AffineSubspace {
    basepoint: Vector,
    basis: Vec<Vector>,
}

impl AffineSubspace {
    pub fn new(basepoint: Vector, directions: Vec<Vector>) -> Result<Self> {
        let d = basepoint.dim();
        for v in &directions {
            v.check_dim(d)?;
        }
        let mut rows: Vec<Vec<Rat>> = directions.into_iter().map(|v| v.0).collect();
        let pivots = rref(&mut rows, d);
        let mut base = basepoint;
        for (row, &pc) in rows.iter().zip(&pivots) {
            let f = base.0[pc].clone();
            if !f.is_zero() {
                for (x, r) in base.0.iter_mut().zip(row) {
                    *x -= &f * r;
                }
            }
        }
        Ok(AffineSubspace {
            basepoint: base,
            basis: rows.into_iter().map(Vector).collect(),
        })
    }

    pub fn point(p: Vector) -> Self {
        AffineSubspace {
            basepoint: p,
            basis: Vec::new(),
        }
    }

    pub fn whole(d: usize) -> Self {
        AffineSubspace {
            basepoint: Vector::zeros(d),
            basis: (0..d).map(|i| Vector::unit(d, i)).collect(),
        }
    }

    /// Solution set of `M x = rhs`, `None` if empty.
    pub fn from_equations(rows: &[Vec<Rat>], rhs: &[Rat], d: usize) -> Option<Self> {
        let x0 = solve(rows, rhs, d)?;
        let basis = nullspace(rows, d);
        Some(Self::new(x0, basis).expect("dimensions agree"))
    }

    pub fn ambient_dim(&self) -> usize {
        self.basepoint.dim()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basepoint(&self) -> &Vector {
        &self.basepoint
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn contains(&self, x: &Vector) -> bool {
        if x.dim() != self.ambient_dim() {
            return false;
        }
        self.contains_direction(&(x - &self.basepoint))
    }

    /// Whether `v` lies in the linear part.
    pub fn contains_direction(&self, v: &Vector) -> bool {
        let mut rows: Vec<Vec<Rat>> = self.basis.iter().map(|b| b.0.clone()).collect();
        let before = rows.len();
        rows.push(v.0.clone());
        rank(&rows, self.ambient_dim()) == before
    }

    /// Equations `N x = c` whose solution set is this subspace.
    pub fn equations(&self) -> (Vec<Vec<Rat>>, Vec<Rat>) {
        let d = self.ambient_dim();
        let rows: Vec<Vec<Rat>> = self.basis.iter().map(|b| b.0.clone()).collect();
        let normals = nullspace(&rows, d);
        let rhs = normals.iter().map(|n| n.dot(&self.basepoint.0)).collect();
        (normals.into_iter().map(|n| n.0).collect(), rhs)
    }

    pub fn intersect(&self, other: &AffineSubspace) -> Option<AffineSubspace> {
        let (mut rows, mut rhs) = self.equations();
        let (r2, b2) = other.equations();
        rows.extend(r2);
        rhs.extend(b2);
        Self::from_equations(&rows, &rhs, self.ambient_dim())
    }

    /// The point `basepoint + Σ c_i basis_i`.
    pub fn at(&self, coeffs: &[Rat]) -> Vector {
        let mut p = self.basepoint.clone();
        for (c, b) in coeffs.iter().zip(&self.basis) {
            p = p.axpy(c, b);
        }
        p
    }
}

/// Smallest affine subspace containing all `points`.
pub fn affine_hull(points: &[Vector]) -> Result<AffineSubspace> {
    let p0 = points.first().ok_or(Error::EmptyPointSet)?;
    for p in points {
        p.check_dim(p0.dim())?;
    }
    let dirs = points[1..].iter().map(|p| p - p0).collect();
    AffineSubspace::new(p0.clone(), dirs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentPosition {
    NotOnLine,
    Endpoint,
    OpenInterior,
    OutsideSegment,
}

/// Locates `x` relative to the closed segment `[a, b]`. A degenerate segment
/// `a = b` is the singleton `{a}`.
pub fn segment_classify(x: &Vector, a: &Vector, b: &Vector) -> Result<SegmentPosition> {
    a.check_dim(x.dim())?;
    b.check_dim(x.dim())?;
    if x == a || x == b {
        return Ok(SegmentPosition::Endpoint);
    }
    if a == b {
        return Ok(SegmentPosition::NotOnLine);
    }
    let dir = b - a;
    let off = x - a;
    let j = dir.0.iter().position(|c| !c.is_zero()).expect("a != b");
    let lambda = &off.0[j] / &dir.0[j];
    if a.axpy(&lambda, &dir) != *x {
        return Ok(SegmentPosition::NotOnLine);
    }
    Ok(if lambda.is_positive() && lambda < Rat::one() {
        SegmentPosition::OpenInterior
    } else {
        SegmentPosition::OutsideSegment
    })
}

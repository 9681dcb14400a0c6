//! Computable convex sets over ℚ: H-polyhedra and V-polytopes.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{AffineSubspace, Vector};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rational::{int, serde_rat, serde_rat_vec, Rat};

/// Outcome of the exact ratio test `sup{ε ≥ 0 : x + ε·dir ∈ K}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    /// No positive step stays in the set.
    Zero,
    Bounded {
        #[serde(with = "serde_rat")]
        eps: Rat,
    },
    Unbounded,
}

impl Step {
    pub fn is_positive(&self) -> bool {
        !matches!(self, Step::Zero)
    }
}

/// Membership and ray stepping: the two primitives every face predicate is
/// built from.
pub trait ConvexSet {
    fn dim(&self) -> usize;
    fn contains(&self, x: &Vector) -> Result<bool>;
    /// Requires `x ∈ K`.
    fn max_step(&self, x: &Vector, dir: &Vector) -> Result<Step>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowRel {
    Le,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HRow {
    #[serde(with = "serde_rat_vec")]
    pub coeffs: Vec<Rat>,
    #[serde(with = "serde_rat")]
    pub rhs: Rat,
    pub rel: RowRel,
}

impl HRow {
    pub fn le(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        HRow { coeffs, rhs, rel: RowRel::Le }
    }

    pub fn eq(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        HRow { coeffs, rhs, rel: RowRel::Eq }
    }

    /// `rhs - coeffs·x`; nonnegative on the set for `le` rows.
    pub fn slack(&self, x: &Vector) -> Rat {
        &self.rhs - x.dot(&self.coeffs)
    }
}

/// What the implicit-equality pass learns about an H-polyhedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImplicitEqualities {
    /// Rows tight on the whole set, `eq` rows included.
    pub rows: BTreeSet<usize>,
    pub affine_hull: AffineSubspace,
    /// A point strictly slack on every other row.
    pub relative_interior_point: Vector,
}

/// `K = {y : A_i·y ≤ b_i (le rows), A_i·y = b_i (eq rows)}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "HRepr", into = "HRepr")]
pub struct HPolyhedron {
    dim: usize,
    rows: Vec<HRow>,
    implicit: OnceLock<std::result::Result<ImplicitEqualities, Error>>,
}

#[derive(Serialize, Deserialize)]
struct HRepr {
    dim: usize,
    rows: Vec<HRow>,
}

impl TryFrom<HRepr> for HPolyhedron {
    type Error = Error;
    fn try_from(r: HRepr) -> Result<Self> {
        HPolyhedron::new(r.dim, r.rows)
    }
}

impl From<HPolyhedron> for HRepr {
    fn from(h: HPolyhedron) -> Self {
        HRepr { dim: h.dim, rows: h.rows }
    }
}

impl PartialEq for HPolyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rows == other.rows
    }
}

impl Eq for HPolyhedron {}

impl HPolyhedron {
    pub fn new(dim: usize, rows: Vec<HRow>) -> Result<Self> {
        for r in &rows {
            if r.coeffs.len() != dim {
                return Err(Error::dim(dim, r.coeffs.len()));
            }
        }
        Ok(HPolyhedron { dim, rows, implicit: OnceLock::new() })
    }

    /// `{y : A y ≤ b}`.
    pub fn from_inequalities(a: Vec<Vec<Rat>>, b: Vec<Rat>) -> Result<Self> {
        let dim = a.first().map_or(0, Vec::len);
        HPolyhedron::new(dim, a.into_iter().zip(b).map(|(c, r)| HRow::le(c, r)).collect())
    }

    pub fn rows(&self) -> &[HRow] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn eq_mask(&self) -> Vec<bool> {
        self.rows.iter().map(|r| r.rel == RowRel::Eq).collect()
    }

    pub fn eq_rows(&self) -> BTreeSet<usize> {
        (0..self.rows.len()).filter(|&i| self.rows[i].rel == RowRel::Eq).collect()
    }

    /// Rows satisfied with equality at `x` (always including `eq` rows).
    pub fn active_set(&self, x: &Vector) -> BTreeSet<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.slack(x).is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn contains_point(&self, x: &Vector) -> bool {
        x.dim() == self.dim
            && self.rows.iter().all(|r| {
                let s = r.slack(x);
                match r.rel {
                    RowRel::Le => !s.is_negative(),
                    RowRel::Eq => s.is_zero(),
                }
            })
    }

    /// The same system with the given rows tightened to equalities.
    pub fn with_equalities(&self, rows: &BTreeSet<usize>) -> HPolyhedron {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut r = r.clone();
                if rows.contains(&i) {
                    r.rel = RowRel::Eq;
                }
                r
            })
            .collect();
        HPolyhedron { dim: self.dim, rows, implicit: OnceLock::new() }
    }

    /// `K ∩ L` as the stacked system; rows of `other` are shifted by `self.num_rows()`.
    pub fn intersect(&self, other: &HPolyhedron) -> Result<HPolyhedron> {
        if self.dim != other.dim {
            return Err(Error::dim(self.dim, other.dim));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        HPolyhedron::new(self.dim, rows)
    }

    pub(crate) fn linear_program(&self) -> LinearProgram {
        let mut lp = LinearProgram::new(self.dim);
        for r in &self.rows {
            let rel = match r.rel {
                RowRel::Le => Relation::Le,
                RowRel::Eq => Relation::Eq,
            };
            lp.add(r.coeffs.clone(), rel, r.rhs.clone());
        }
        lp
    }

    pub fn lp(&self, objective: Option<&[Rat]>) -> LpOutcome {
        let mut lp = self.linear_program();
        if let Some(c) = objective {
            lp.maximize(c.to_vec());
        }
        lp.solve()
    }

    pub fn is_empty(&self) -> bool {
        !self.lp(None).is_feasible()
    }

    /// Maximizer of `objective` over K; `None` when K is empty or the objective is unbounded.
    pub fn maximizer(&self, objective: &[Rat]) -> Option<Vector> {
        match self.lp(Some(objective)) {
            LpOutcome::Feasible { witness, .. } => Some(witness),
            _ => None,
        }
    }

    /// Whether K is nonempty and bounded, decided by `2d` LPs over `±e_j`.
    pub fn is_bounded(&self) -> bool {
        (0..self.dim).all(|j| {
            [Rat::one(), -Rat::one()].iter().all(|s| {
                let mut c = vec![Rat::zero(); self.dim];
                c[j] = s.clone();
                matches!(self.lp(Some(&c)), LpOutcome::Feasible { .. })
            })
        })
    }

    /// Rows satisfied with equality by every point of K, found with one
    /// slack-maximizing LP per row (rows already seen slack at an earlier
    /// witness are skipped). Cached after the first call.
    pub fn implicit_equalities(&self) -> Result<&ImplicitEqualities> {
        self.implicit
            .get_or_init(|| self.compute_implicit())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn compute_implicit(&self) -> Result<ImplicitEqualities> {
        let first = match self.lp(None) {
            LpOutcome::Feasible { witness, .. } => witness,
            _ => return Err(Error::EmptyPolyhedron),
        };
        let m = self.rows.len();
        let mut slack_seen = vec![false; m];
        let mut witnesses: Vec<Vector> = Vec::new();
        let note = |w: Vector, seen: &mut Vec<bool>, ws: &mut Vec<Vector>| {
            let mut new = false;
            for (i, r) in self.rows.iter().enumerate() {
                if !seen[i] && r.slack(&w).is_positive() {
                    seen[i] = true;
                    new = true;
                }
            }
            if new {
                ws.push(w);
            }
        };
        note(first.clone(), &mut slack_seen, &mut witnesses);
        let mut implicit = BTreeSet::new();
        for i in 0..m {
            if self.rows[i].rel == RowRel::Eq {
                implicit.insert(i);
                continue;
            }
            if slack_seen[i] {
                continue;
            }
            let neg: Vec<Rat> = self.rows[i].coeffs.iter().map(|c| -c).collect();
            match self.lp(Some(&neg)) {
                LpOutcome::Feasible { witness, .. } => {
                    if self.rows[i].slack(&witness).is_positive() {
                        note(witness, &mut slack_seen, &mut witnesses);
                    } else {
                        implicit.insert(i);
                    }
                }
                LpOutcome::Unbounded { witness, direction } => {
                    note(&witness + &direction, &mut slack_seen, &mut witnesses);
                }
                LpOutcome::Infeasible => return Err(Error::EmptyPolyhedron),
            }
        }
        let rel_int = if witnesses.is_empty() {
            first
        } else {
            Vector::centroid(&witnesses)?
        };
        debug_assert!(self.contains_point(&rel_int));
        let (rows, rhs): (Vec<Vec<Rat>>, Vec<Rat>) = implicit
            .iter()
            .map(|&i| (self.rows[i].coeffs.clone(), self.rows[i].rhs.clone()))
            .unzip();
        let affine_hull = AffineSubspace::from_equations(&rows, &rhs, self.dim)
            .expect("nonempty set has consistent equalities");
        Ok(ImplicitEqualities { rows: implicit, affine_hull, relative_interior_point: rel_int })
    }
}

impl ConvexSet for HPolyhedron {
    fn dim(&self) -> usize {
        self.dim
    }

    fn contains(&self, x: &Vector) -> Result<bool> {
        x.check_dim(self.dim)?;
        Ok(self.contains_point(x))
    }

    fn max_step(&self, x: &Vector, dir: &Vector) -> Result<Step> {
        dir.check_dim(self.dim)?;
        if !self.contains(x)? {
            return Err(Error::BasepointOutside);
        }
        let mut best: Option<Rat> = None;
        for r in &self.rows {
            let rate = dir.dot(&r.coeffs);
            match r.rel {
                RowRel::Eq if !rate.is_zero() => return Ok(Step::Zero),
                RowRel::Eq => {}
                RowRel::Le if rate.is_positive() => {
                    let ratio = r.slack(x) / rate;
                    if ratio.is_zero() {
                        return Ok(Step::Zero);
                    }
                    if best.as_ref().is_none_or(|b| ratio < *b) {
                        best = Some(ratio);
                    }
                }
                RowRel::Le => {}
            }
        }
        Ok(match best {
            Some(eps) => Step::Bounded { eps },
            None => Step::Unbounded,
        })
    }
}

/// `K = conv(vertices)`. The generator list may contain points that are not
/// extreme; faces are described by the generators they contain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "VRepr", into = "VRepr")]
pub struct VPolytope {
    vertices: Vec<Vector>,
}

#[derive(Serialize, Deserialize)]
struct VRepr {
    vertices: Vec<Vector>,
}

impl TryFrom<VRepr> for VPolytope {
    type Error = Error;
    fn try_from(r: VRepr) -> Result<Self> {
        VPolytope::new(r.vertices)
    }
}

impl From<VPolytope> for VRepr {
    fn from(v: VPolytope) -> Self {
        VRepr { vertices: v.vertices }
    }
}

impl VPolytope {
    pub fn new(vertices: Vec<Vector>) -> Result<Self> {
        if let Some(v0) = vertices.first() {
            for v in &vertices {
                v.check_dim(v0.dim())?;
            }
        }
        Ok(VPolytope { vertices })
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn subset(&self, idx: &BTreeSet<usize>) -> VPolytope {
        VPolytope { vertices: idx.iter().map(|&i| self.vertices[i].clone()).collect() }
    }

    /// Image under `y ↦ M y + t`.
    pub fn map_affine(&self, m: &[Vec<Rat>], t: &Vector) -> Result<VPolytope> {
        let d = self.dim();
        for row in m {
            if row.len() != d {
                return Err(Error::dim(d, row.len()));
            }
        }
        if t.dim() != m.len() {
            return Err(Error::dim(m.len(), t.dim()));
        }
        Ok(VPolytope {
            vertices: self.vertices.iter().map(|v| apply_affine(m, t, v)).collect(),
        })
    }

    /// LP over weights `λ ≥ 0`, `Σλ = 1`, `Σ λ_j v_j - extra = x`, restricted to
    /// `support` (all generators when `None`). Extra columns are appended after
    /// the weights by the caller.
    fn weight_program(&self, x: &Vector, support: &[usize], extra: usize) -> LinearProgram {
        let n = support.len();
        let mut lp = LinearProgram::new(n + extra);
        lp.set_all_nonneg();
        for k in 0..self.dim() {
            let mut row: Vec<Rat> = support.iter().map(|&j| self.vertices[j][k].clone()).collect();
            row.resize(n + extra, Rat::zero());
            lp.add(row, Relation::Eq, x[k].clone());
        }
        let mut ones = vec![Rat::one(); n];
        ones.resize(n + extra, Rat::zero());
        lp.add(ones, Relation::Eq, Rat::one());
        lp
    }

    /// Some convex weights expressing `x`, indexed like `vertices`.
    pub fn convex_weights(&self, x: &Vector) -> Result<Option<Vec<Rat>>> {
        x.check_dim(self.dim())?;
        let all: Vec<usize> = (0..self.len()).collect();
        Ok(self.weight_program(x, &all, 0).solve().witness().map(|w| w.0.clone()))
    }

    /// Generators carrying positive weight in at least one convex
    /// representation of `x`. These span the face generated by `x`.
    pub fn generator_support(&self, x: &Vector, known: &BTreeSet<usize>) -> Result<BTreeSet<usize>> {
        let all: Vec<usize> = (0..self.len()).collect();
        let first = self
            .convex_weights(x)?
            .ok_or(Error::PointOutside)?;
        let mut support: BTreeSet<usize> = known.clone();
        support.extend((0..self.len()).filter(|&j| first[j].is_positive()));
        for j in 0..self.len() {
            if support.contains(&j) {
                continue;
            }
            let mut lp = self.weight_program(x, &all, 0);
            let mut obj = vec![Rat::zero(); self.len()];
            obj[j] = Rat::one();
            lp.maximize(obj);
            if let LpOutcome::Feasible { witness, value } = lp.solve() {
                if value.is_some_and(|v| v.is_positive()) {
                    support.extend((0..self.len()).filter(|&k| witness[k].is_positive()));
                }
            }
        }
        Ok(support)
    }

    /// Whether `x = Σ λ_j v_j` with every `λ_j > 0` over `support`, i.e.
    /// `x ∈ rai(conv(support))`.
    pub fn strictly_positive_representation(&self, x: &Vector, support: &BTreeSet<usize>) -> Result<bool> {
        x.check_dim(self.dim())?;
        if support.is_empty() {
            return Ok(false);
        }
        let idx: Vec<usize> = support.iter().copied().collect();
        let n = idx.len();
        let mut lp = self.weight_program(x, &idx, 1);
        for k in 0..n {
            let mut row = vec![Rat::zero(); n + 1];
            row[k] = -Rat::one();
            row[n] = Rat::one();
            lp.add(row, Relation::Le, Rat::zero());
        }
        let mut obj = vec![Rat::zero(); n + 1];
        obj[n] = Rat::one();
        lp.maximize(obj);
        Ok(lp.solve().value().is_some_and(|v| v.is_positive()))
    }

    /// Whether the relative interiors of `conv(s)` and `conv(t)` meet; one LP.
    pub fn relative_interiors_meet(&self, s: &BTreeSet<usize>, t: &BTreeSet<usize>) -> bool {
        let (s, t): (Vec<usize>, Vec<usize>) = (s.iter().copied().collect(), t.iter().copied().collect());
        let (ns, nt) = (s.len(), t.len());
        let width = ns + nt + 1;
        let mut lp = LinearProgram::new(width);
        lp.set_all_nonneg();
        for k in 0..self.dim() {
            let mut row = vec![Rat::zero(); width];
            for (a, &j) in s.iter().enumerate() {
                row[a] = self.vertices[j][k].clone();
            }
            for (b, &j) in t.iter().enumerate() {
                row[ns + b] = -self.vertices[j][k].clone();
            }
            lp.add(row, Relation::Eq, Rat::zero());
        }
        for (range, _) in [(0..ns, ()), (ns..ns + nt, ())] {
            let mut row = vec![Rat::zero(); width];
            for a in range.clone() {
                row[a] = Rat::one();
            }
            lp.add(row, Relation::Eq, Rat::one());
            for a in range {
                let mut row = vec![Rat::zero(); width];
                row[a] = -Rat::one();
                row[width - 1] = Rat::one();
                lp.add(row, Relation::Le, Rat::zero());
            }
        }
        let mut obj = vec![Rat::zero(); width];
        obj[width - 1] = Rat::one();
        lp.maximize(obj);
        lp.solve().value().is_some_and(|v| v.is_positive())
    }
}

pub fn apply_affine(m: &[Vec<Rat>], t: &Vector, v: &Vector) -> Vector {
    Vector(m.iter().zip(&t.0).map(|(row, ti)| v.dot(row) + ti).collect())
}

impl ConvexSet for VPolytope {
    fn dim(&self) -> usize {
        self.vertices.first().map_or(0, Vector::dim)
    }

    fn contains(&self, x: &Vector) -> Result<bool> {
        if self.vertices.is_empty() {
            return Ok(false);
        }
        Ok(self.convex_weights(x)?.is_some())
    }

    fn max_step(&self, x: &Vector, dir: &Vector) -> Result<Step> {
        dir.check_dim(self.dim())?;
        if !self.contains(x)? {
            return Err(Error::BasepointOutside);
        }
        let n = self.len();
        let all: Vec<usize> = (0..n).collect();
        let mut lp = LinearProgram::new(n + 1);
        lp.set_all_nonneg();
        // Σ λ_j v_j - t·dir = x
        for k in 0..self.dim() {
            let mut row: Vec<Rat> = all.iter().map(|&j| self.vertices[j][k].clone()).collect();
            row.push(-dir[k].clone());
            lp.add(row, Relation::Eq, x[k].clone());
        }
        let mut ones = vec![Rat::one(); n];
        ones.push(Rat::zero());
        lp.add(ones, Relation::Eq, Rat::one());
        let mut obj = vec![Rat::zero(); n + 1];
        obj[n] = Rat::one();
        lp.maximize(obj);
        Ok(match lp.solve() {
            LpOutcome::Unbounded { .. } => Step::Unbounded,
            LpOutcome::Feasible { value: Some(v), .. } if v.is_positive() => Step::Bounded { eps: v },
            LpOutcome::Feasible { .. } => Step::Zero,
            LpOutcome::Infeasible => return Err(Error::BasepointOutside),
        })
    }
}

/// Either representation; the JSON shape (`rows` vs `vertices`) selects it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConvexBody {
    H(HPolyhedron),
    V(VPolytope),
}

impl ConvexBody {
    pub fn as_h(&self) -> Option<&HPolyhedron> {
        match self {
            ConvexBody::H(h) => Some(h),
            ConvexBody::V(_) => None,
        }
    }

    pub fn as_v(&self) -> Option<&VPolytope> {
        match self {
            ConvexBody::V(v) => Some(v),
            ConvexBody::H(_) => None,
        }
    }
}

impl From<HPolyhedron> for ConvexBody {
    fn from(h: HPolyhedron) -> Self {
        ConvexBody::H(h)
    }
}

impl From<VPolytope> for ConvexBody {
    fn from(v: VPolytope) -> Self {
        ConvexBody::V(v)
    }
}

impl ConvexSet for ConvexBody {
    fn dim(&self) -> usize {
        match self {
            ConvexBody::H(h) => h.dim(),
            ConvexBody::V(v) => v.dim(),
        }
    }

    fn contains(&self, x: &Vector) -> Result<bool> {
        match self {
            ConvexBody::H(h) => h.contains(x),
            ConvexBody::V(v) => v.contains(x),
        }
    }

    fn max_step(&self, x: &Vector, dir: &Vector) -> Result<Step> {
        match self {
            ConvexBody::H(h) => h.max_step(x, dir),
            ConvexBody::V(v) => v.max_step(x, dir),
        }
    }
}

/// Membership in either representation; see [`ConvexSet::contains`].
pub fn contains<K: ConvexSet + ?Sized>(k: &K, x: &Vector) -> Result<bool> {
    k.contains(x)
}

/// See [`ConvexSet::max_step`].
pub fn max_step<K: ConvexSet + ?Sized>(k: &K, x: &Vector, dir: &Vector) -> Result<Step> {
    k.max_step(x, dir)
}

/// See [`HPolyhedron::implicit_equalities`].
pub fn implicit_equalities(k: &HPolyhedron) -> Result<(BTreeSet<usize>, AffineSubspace)> {
    let ie = k.implicit_equalities()?;
    Ok((ie.rows.clone(), ie.affine_hull.clone()))
}

/// Small constructors used throughout tests and examples.
pub mod shapes {
    use super::*;
    use crate::rational::rat;

    fn row(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| int(x)).collect()
    }

    /// `{x ≥ 0, y ≥ 0, x + y ≤ 1}` with rows in that order.
    pub fn triangle_h() -> HPolyhedron {
        HPolyhedron::from_inequalities(
            vec![row(&[-1, 0]), row(&[0, -1]), row(&[1, 1])],
            vec![int(0), int(0), int(1)],
        )
        .unwrap()
    }

    pub fn triangle_v() -> VPolytope {
        VPolytope::new(vec![
            Vector::from_ints(&[0, 0]),
            Vector::from_ints(&[1, 0]),
            Vector::from_ints(&[0, 1]),
        ])
        .unwrap()
    }

    /// `[lo, hi]` in one dimension, rows `x ≤ hi`, `-x ≤ -lo`.
    pub fn interval_h(lo: Rat, hi: Rat) -> HPolyhedron {
        HPolyhedron::from_inequalities(vec![vec![int(1)], vec![int(-1)]], vec![hi, -lo]).unwrap()
    }

    pub fn interval_v(lo: i64, hi: i64) -> VPolytope {
        VPolytope::new(vec![Vector::from_ints(&[lo]), Vector::from_ints(&[hi])]).unwrap()
    }

    /// `[0,1]^d` as rows `x_j ≤ 1`, `-x_j ≤ 0` for each j.
    pub fn cube_h(d: usize) -> HPolyhedron {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for j in 0..d {
            let mut up = vec![Rat::zero(); d];
            up[j] = int(1);
            a.push(up);
            b.push(int(1));
            let mut dn = vec![Rat::zero(); d];
            dn[j] = int(-1);
            a.push(dn);
            b.push(int(0));
        }
        HPolyhedron::from_inequalities(a, b).unwrap()
    }

    pub fn cube_v(d: usize) -> VPolytope {
        let verts = (0..1usize << d)
            .map(|mask| Vector((0..d).map(|j| int(((mask >> j) & 1) as i64)).collect()))
            .collect();
        VPolytope::new(verts).unwrap()
    }

    /// `{(t, 0) : 0 ≤ t ≤ 1}` as rows `y ≤ 0`, `-y ≤ 0`, `-x ≤ 0`, `x ≤ 1`.
    pub fn flat_segment_h() -> HPolyhedron {
        HPolyhedron::from_inequalities(
            vec![row(&[0, 1]), row(&[0, -1]), row(&[-1, 0]), row(&[1, 0])],
            vec![int(0), int(0), int(0), int(1)],
        )
        .unwrap()
    }

    pub fn point(coords: &[(i64, i64)]) -> Vector {
        Vector(coords.iter().map(|&(n, d)| rat(n, d)).collect())
    }
}

//! Faces generated by points and sets, relative algebraic interiors, d-faces
//! and the face partition of a polytope.
//!
//! An H-polyhedron face is named by the rows forced to equality on it. The
//! rows active at `x` already form a saturated set: a row tight on the whole
//! face `{y ∈ K : active rows tight}` is tight at `x` in particular. So the
//! active set is canonical and descriptor equality is point-set equality.
//!
//! A V-polytope face is named by the generators it contains. For `x ∈ K`
//! these are exactly the generators carrying positive weight in some convex
//! representation of `x`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certificate::EpsCertificate;
use crate::error::{Error, Result};
use crate::linalg::{affine_hull, AffineSubspace, Vector};
use crate::lp::{LinearProgram, Relation};
use crate::polyhedron::{apply_affine, ConvexBody, ConvexSet, HPolyhedron, RowRel, Step, VPolytope};
use crate::rational::{int, Rat};
use crate::sample;

/// Largest generator count accepted by the face-lattice operations.
pub const DESK_SCALE_VERTICES: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceDescriptor {
    /// H-representation: rows satisfied with equality on the face.
    ForcedEq(BTreeSet<usize>),
    /// V-representation: generators lying in the face.
    VertexSubset(BTreeSet<usize>),
}

impl FaceDescriptor {
    pub fn indices(&self) -> &BTreeSet<usize> {
        match self {
            FaceDescriptor::ForcedEq(s) | FaceDescriptor::VertexSubset(s) => s,
        }
    }
}

/// The relative interior of a face: the face's equalities plus strict
/// inequalities on `strict`. For a V face `strict` lists the generators that
/// must carry positive weight, which for a canonical cell is the face's
/// generator set itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RelOpenCell {
    #[serde(flatten)]
    pub face: FaceDescriptor,
    pub strict: BTreeSet<usize>,
}

fn mixed(msg: &str) -> Error {
    Error::MixedParents(msg.to_string())
}

fn require_in<K: ConvexSet + ?Sized>(k: &K, x: &Vector) -> Result<()> {
    if k.contains(x)? {
        Ok(())
    } else {
        Err(Error::PointOutside)
    }
}

fn check_descriptor(k: &ConvexBody, face: &FaceDescriptor) -> Result<()> {
    let (n, ok) = match (k, face) {
        (ConvexBody::H(h), FaceDescriptor::ForcedEq(s)) => (h.num_rows(), s),
        (ConvexBody::V(v), FaceDescriptor::VertexSubset(s)) => (v.len(), s),
        _ => return Err(mixed("descriptor kind does not match the set representation")),
    };
    if ok.iter().any(|&i| i >= n) {
        return Err(mixed("descriptor index out of range"));
    }
    Ok(())
}

/// Rows active at `x`; requires `x ∈ h`.
pub fn face_of_point_h(h: &HPolyhedron, x: &Vector) -> Result<BTreeSet<usize>> {
    require_in(h, x)?;
    Ok(h.active_set(x))
}

/// Generators lying in the face generated by `x`.
pub fn face_of_point_v(v: &VPolytope, x: &Vector) -> Result<BTreeSet<usize>> {
    require_in(v, x)?;
    v.generator_support(x, &BTreeSet::new())
}

/// The smallest face of `k` containing `x`.
pub fn face_of_point(k: &ConvexBody, x: &Vector) -> Result<FaceDescriptor> {
    Ok(match k {
        ConvexBody::H(h) => FaceDescriptor::ForcedEq(face_of_point_h(h, x)?),
        ConvexBody::V(v) => FaceDescriptor::VertexSubset(face_of_point_v(v, x)?),
    })
}

/// The face polyhedron `{y ∈ h : forced rows tight}`.
pub fn face_polyhedron(h: &HPolyhedron, forced: &BTreeSet<usize>) -> HPolyhedron {
    h.with_equalities(forced)
}

/// Point-set membership of `y` in the face named by `face`.
pub fn face_contains(k: &ConvexBody, face: &FaceDescriptor, y: &Vector) -> Result<bool> {
    check_descriptor(k, face)?;
    Ok(match (k, face) {
        (ConvexBody::H(h), FaceDescriptor::ForcedEq(s)) => {
            h.contains(y)? && s.iter().all(|&i| h.rows()[i].slack(y).is_zero())
        }
        (ConvexBody::V(v), FaceDescriptor::VertexSubset(s)) => {
            !s.is_empty() && v.subset(s).contains(y)?
        }
        _ => unreachable!(),
    })
}

/// The relative interior of `face`.
pub fn canonical_cell(k: &ConvexBody, face: FaceDescriptor) -> RelOpenCell {
    let strict = match (k, &face) {
        (ConvexBody::H(h), FaceDescriptor::ForcedEq(s)) => {
            (0..h.num_rows()).filter(|i| !s.contains(i)).collect()
        }
        (_, f) => f.indices().clone(),
    };
    RelOpenCell { face, strict }
}

fn is_canonical(k: &ConvexBody, cell: &RelOpenCell) -> bool {
    canonical_cell(k, cell.face.clone()).strict == cell.strict
}

/// Membership of `y` in the cell's system.
pub fn cell_contains(k: &ConvexBody, cell: &RelOpenCell, y: &Vector) -> Result<bool> {
    check_descriptor(k, &cell.face)?;
    match (k, &cell.face) {
        (ConvexBody::H(h), FaceDescriptor::ForcedEq(forced)) => {
            if cell.strict.iter().any(|&i| i >= h.num_rows()) {
                return Err(mixed("strict index out of range"));
            }
            Ok(h.contains(y)?
                && forced.iter().all(|&i| h.rows()[i].slack(y).is_zero())
                && cell.strict.iter().all(|&i| h.rows()[i].slack(y).is_positive()))
        }
        (ConvexBody::V(v), FaceDescriptor::VertexSubset(s)) => {
            if !cell.strict.is_subset(s) {
                return Err(mixed("strict generators outside the face"));
            }
            Ok(face_contains(k, &cell.face, y)? && v.strictly_positive_representation(y, &cell.strict)?)
        }
        _ => unreachable!(),
    }
}

/// LP over `(y, t)`: `forced` rows tight, `strict` rows with slack at least
/// `t ≤ 1`, all rows of `h` respected; returns the optimal `t`.
fn strict_margin_h(h: &HPolyhedron, forced: &BTreeSet<usize>, strict: &BTreeSet<usize>) -> Option<Rat> {
    let d = h.dim();
    let mut lp = LinearProgram::new(d + 1);
    for (i, r) in h.rows().iter().enumerate() {
        let mut c = r.coeffs.clone();
        let rel = if forced.contains(&i) || r.rel == RowRel::Eq { Relation::Eq } else { Relation::Le };
        c.push(if strict.contains(&i) && rel == Relation::Le { Rat::one() } else { Rat::zero() });
        if strict.contains(&i) && rel == Relation::Eq {
            return None;
        }
        lp.add(c, rel, r.rhs.clone());
    }
    let mut cap = vec![Rat::zero(); d + 1];
    cap[d] = Rat::one();
    lp.add(cap.clone(), Relation::Le, Rat::one());
    lp.maximize(cap);
    lp.solve().value().cloned()
}

/// Whether the cell's system has a solution.
pub fn cell_is_nonempty(k: &ConvexBody, cell: &RelOpenCell) -> Result<bool> {
    check_descriptor(k, &cell.face)?;
    Ok(match (k, &cell.face) {
        (ConvexBody::H(h), FaceDescriptor::ForcedEq(forced)) => {
            strict_margin_h(h, forced, &cell.strict).is_some_and(|t| t.is_positive() || cell.strict.is_empty())
        }
        (ConvexBody::V(v), FaceDescriptor::VertexSubset(s)) => {
            !s.is_empty() && (cell.strict.is_empty() || v.relative_interiors_meet(&cell.strict, &cell.strict))
        }
        _ => unreachable!(),
    })
}

/// Whether two cells of the same set have no common point, decided by one LP.
pub fn cells_disjoint(k: &ConvexBody, a: &RelOpenCell, b: &RelOpenCell) -> Result<bool> {
    check_descriptor(k, &a.face)?;
    check_descriptor(k, &b.face)?;
    Ok(match (k, &a.face, &b.face) {
        (ConvexBody::H(h), FaceDescriptor::ForcedEq(fa), FaceDescriptor::ForcedEq(fb)) => {
            let forced = fa | fb;
            let strict = &a.strict | &b.strict;
            !strict_margin_h(h, &forced, &strict).is_some_and(|t| t.is_positive() || strict.is_empty())
        }
        (ConvexBody::V(v), FaceDescriptor::VertexSubset(_), FaceDescriptor::VertexSubset(_)) => {
            if !is_canonical(k, a) || !is_canonical(k, b) {
                return Err(Error::Precondition("disjointness test needs canonical V cells".into()));
            }
            !v.relative_interiors_meet(&a.strict, &b.strict)
        }
        _ => unreachable!(),
    })
}

/// Verdict of the step test `∃ε>0: x + ε(x−y) ∈ K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum AlfsenVerdict {
    Member { cert: EpsCertificate },
    NotMember,
}

impl AlfsenVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, AlfsenVerdict::Member { .. })
    }

    pub fn cert(&self) -> Option<&EpsCertificate> {
        match self {
            AlfsenVerdict::Member { cert } => Some(cert),
            AlfsenVerdict::NotMember => None,
        }
    }
}

/// `y` lies in the face generated by `x` iff the segment from `y` through `x`
/// extends past `x` inside `k`. The certificate uses `εmax/2`, or `1` when
/// the step is unbounded.
pub fn face_membership_alfsen<K: ConvexSet + ?Sized>(k: &K, x: &Vector, y: &Vector) -> Result<AlfsenVerdict> {
    require_in(k, x)?;
    require_in(k, y)?;
    let eps = match k.max_step(x, &(x - y))? {
        Step::Zero => return Ok(AlfsenVerdict::NotMember),
        Step::Bounded { eps } => eps / int(2),
        Step::Unbounded => Rat::one(),
    };
    Ok(AlfsenVerdict::Member { cert: EpsCertificate::new(x.clone(), y.clone(), eps)? })
}

/// Whether `x` is in the relative algebraic interior of `k`.
pub fn rai_contains(k: &ConvexBody, x: &Vector) -> Result<bool> {
    match k {
        ConvexBody::H(h) => {
            let active = face_of_point_h(h, x)?;
            Ok(active == h.implicit_equalities()?.rows)
        }
        ConvexBody::V(v) => Ok(face_of_point_v(v, x)?.len() == v.len()),
    }
}

/// Affine hull of the face named by `face`.
pub fn descriptor_affine_hull(k: &ConvexBody, face: &FaceDescriptor) -> Result<AffineSubspace> {
    check_descriptor(k, face)?;
    match (k, face) {
        (ConvexBody::H(h), FaceDescriptor::ForcedEq(s)) => {
            let face = face_polyhedron(h, s);
            Ok(face.implicit_equalities()?.affine_hull.clone())
        }
        (ConvexBody::V(v), FaceDescriptor::VertexSubset(s)) => affine_hull(v.subset(s).vertices()),
        _ => unreachable!(),
    }
}

/// `aff(F_K(x))`, equal to the set of `x + v` with `x ± εv ∈ K` for some `ε > 0`.
pub fn face_affine_hull(k: &ConvexBody, x: &Vector) -> Result<AffineSubspace> {
    let face = face_of_point(k, x)?;
    descriptor_affine_hull(k, &face)
}

/// The smallest face containing every point of `s`: the face generated by
/// the centroid of `s`, which has equal positive weight on each point.
pub fn face_of_set(k: &ConvexBody, s: &[Vector]) -> Result<FaceDescriptor> {
    for p in s {
        require_in(k, p)?;
    }
    let c = Vector::centroid(s)?;
    face_of_point(k, &c)
}

/// `d_face_of_point`: the cell `rai(F_K(x))`, which contains `x`.
pub fn d_face_of_point(k: &ConvexBody, x: &Vector) -> Result<RelOpenCell> {
    Ok(canonical_cell(k, face_of_point(k, x)?))
}

/// Faces of `K ∩ L` and of each set at a common point `x`, all named by rows
/// of the stacked system (rows of `L` are offset by the row count of `K`).
///
/// For finitely many sets the face of the intersection is the intersection
/// of the faces. This fails for infinite families: every
/// `[-1/n, 1 + 1/n]` has `0` in its interior, so each generates the whole
/// interval at `0`, but the intersection `[0, 1]` has `{0}` as the face
/// generated by `0`. Only finite families are representable here.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionFaces {
    pub joint: FaceDescriptor,
    pub left: FaceDescriptor,
    pub right: FaceDescriptor,
    pub left_rows: usize,
}

impl IntersectionFaces {
    /// `F_{K∩L}(x) = F_K(x) ∩ F_L(x)` as descriptor equality on the stacked system.
    pub fn identity_holds(&self) -> bool {
        let shifted: BTreeSet<usize> = self.right.indices().iter().map(|i| i + self.left_rows).collect();
        *self.joint.indices() == self.left.indices() | &shifted
    }
}

pub fn face_intersect(k: &HPolyhedron, l: &HPolyhedron, x: &Vector) -> Result<IntersectionFaces> {
    let kl = k.intersect(l)?;
    let left = face_of_point_h(k, x)?;
    let right = face_of_point_h(l, x)?;
    let joint = face_of_point_h(&kl, x)?;
    Ok(IntersectionFaces {
        joint: FaceDescriptor::ForcedEq(joint),
        left: FaceDescriptor::ForcedEq(left),
        right: FaceDescriptor::ForcedEq(right),
        left_rows: k.num_rows(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageFace {
    pub image: VPolytope,
    pub image_point: Vector,
    pub cell: RelOpenCell,
    pub samples: usize,
    /// Sampled points of `rai(F_K(x))` whose image left the image cell.
    pub escaped: usize,
    pub image_point_in_cell: bool,
}

impl ImageFace {
    pub fn passed(&self) -> bool {
        self.escaped == 0 && self.image_point_in_cell
    }
}

/// The cell of `α(K)` generated by `α(x)` for `α(y) = My + t`, with a
/// sampled check that `α` maps `rai(F_K(x))` into it.
pub fn image_face(k: &VPolytope, m: &[Vec<Rat>], t: &Vector, x: &Vector) -> Result<ImageFace> {
    image_face_sampled(k, m, t, x, &mut ChaCha8Rng::seed_from_u64(0), 50)
}

pub fn image_face_sampled<R: Rng + ?Sized>(
    k: &VPolytope,
    m: &[Vec<Rat>],
    t: &Vector,
    x: &Vector,
    rng: &mut R,
    samples: usize,
) -> Result<ImageFace> {
    x.check_dim(k.dim())?;
    let image = k.map_affine(m, t)?;
    let source = face_of_point_v(k, x)?;
    let image_point = apply_affine(m, t, x);
    let body = ConvexBody::V(image.clone());
    let cell = d_face_of_point(&body, &image_point)?;
    let mut escaped = 0;
    for _ in 0..samples {
        let y = sample::in_cell_v(k, &source, rng)?;
        if !cell_contains(&body, &cell, &apply_affine(m, t, &y))? {
            escaped += 1;
        }
    }
    let image_point_in_cell = cell_contains(&body, &cell, &image_point)?;
    Ok(ImageFace { image, image_point, cell, samples, escaped, image_point_in_cell })
}

fn desk_scale(v: &VPolytope) -> Result<()> {
    if v.len() > DESK_SCALE_VERTICES {
        return Err(Error::AboveDeskScale(format!(
            "{} generators, at most {DESK_SCALE_VERTICES} supported",
            v.len()
        )));
    }
    Ok(())
}

fn face_of_generators(v: &VPolytope, s: &BTreeSet<usize>) -> Result<BTreeSet<usize>> {
    let pts: Vec<Vector> = s.iter().map(|&i| v.vertices()[i].clone()).collect();
    v.generator_support(&Vector::centroid(&pts)?, s)
}

/// All faces of `v` contained in the face spanned by `within`, grown
/// upward from single generators: every face `G` is reached from one of its
/// generators by repeatedly adding a generator of `G` not yet covered.
pub fn faces_within(v: &VPolytope, within: &BTreeSet<usize>) -> Result<Vec<BTreeSet<usize>>> {
    desk_scale(v)?;
    let mut found: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut frontier: Vec<BTreeSet<usize>> = Vec::new();
    for &j in within {
        let f = face_of_generators(v, &BTreeSet::from([j]))?;
        if found.insert(f.clone()) {
            frontier.push(f);
        }
    }
    while let Some(f) = frontier.pop() {
        for &j in within.difference(&f) {
            let mut s = f.clone();
            s.insert(j);
            let g = face_of_generators(v, &s)?;
            if found.insert(g.clone()) {
                frontier.push(g);
            }
        }
    }
    let mut faces: Vec<BTreeSet<usize>> = found.into_iter().collect();
    faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(faces)
}

/// Every nonempty face of `v`, smallest first.
pub fn enumerate_faces(v: &VPolytope) -> Result<Vec<FaceDescriptor>> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    let all: BTreeSet<usize> = (0..v.len()).collect();
    Ok(faces_within(v, &all)?.into_iter().map(FaceDescriptor::VertexSubset).collect())
}

/// The relative interiors of all nonempty faces; they partition `v`.
pub fn partition_cells(v: &VPolytope) -> Result<Vec<RelOpenCell>> {
    Ok(enumerate_faces(v)?
        .into_iter()
        .map(|f| RelOpenCell { strict: f.indices().clone(), face: f })
        .collect())
}

/// The cell of the partition containing `y`, by face computation.
pub fn locate_cell(k: &ConvexBody, y: &Vector) -> Result<RelOpenCell> {
    d_face_of_point(k, y)
}

/// A finite union of cells of one polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremeSetDescriptor {
    pub cells: Vec<RelOpenCell>,
}

impl ExtremeSetDescriptor {
    pub fn contains(&self, k: &ConvexBody, y: &Vector) -> Result<bool> {
        for c in &self.cells {
            if cell_contains(k, c, y)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// An open segment `(outside, far)` that meets the set at `inside` while
/// its endpoint `outside` is not in the set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentWitness {
    pub outside: Vector,
    pub inside: Vector,
    pub far: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ExtremeVerdict {
    ExtremeAndDextreme,
    DextremeOnly { witness: SegmentWitness },
    Neither { reason: String },
}

/// Classifies a union of cells. Any union of relative interiors of faces is
/// d-extreme; it is extreme exactly when it contains, with each cell, the
/// cells of all subfaces of that cell's face.
pub fn is_extreme_set(v: &VPolytope, e: &ExtremeSetDescriptor) -> Result<ExtremeVerdict> {
    let body = ConvexBody::V(v.clone());
    for c in &e.cells {
        check_descriptor(&body, &c.face)?;
        if !c.strict.is_subset(c.face.indices()) {
            return Err(mixed("strict generators outside the face"));
        }
    }
    let lattice: BTreeSet<BTreeSet<usize>> =
        enumerate_faces(v)?.into_iter().map(|f| f.indices().clone()).collect();
    let mut members: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for c in &e.cells {
        let s = c.face.indices();
        if !lattice.contains(s) || c.strict != *s {
            return Ok(ExtremeVerdict::Neither {
                reason: format!("cell {:?} is not the relative interior of a face", s),
            });
        }
        members.insert(s.clone());
    }
    for f in &members {
        if let Some(g) = lattice.iter().find(|g| g.is_subset(f) && !members.contains(*g)) {
            let outside = Vector::centroid(v.subset(g).vertices())?;
            let inside = Vector::centroid(v.subset(f).vertices())?;
            let eps = match v.subset(f).max_step(&inside, &(&inside - &outside))? {
                Step::Bounded { eps } => eps / int(2),
                Step::Unbounded => Rat::one(),
                Step::Zero => unreachable!("centroid of a face lies in its relative interior"),
            };
            let far = inside.step_away(&outside, &eps);
            return Ok(ExtremeVerdict::DextremeOnly { witness: SegmentWitness { outside, inside, far } });
        }
    }
    Ok(ExtremeVerdict::ExtremeAndDextreme)
}

/// `⋃_{x∈C} F_K(x)` for a polytope `C ⊂ K`: the face generated by the
/// generators of `C`, returned as the union of its cells.
pub fn union_of_generated_faces(k: &VPolytope, c: &VPolytope) -> Result<(FaceDescriptor, ExtremeSetDescriptor)> {
    let body = ConvexBody::V(k.clone());
    let face = face_of_set(&body, c.vertices())?;
    let cells = faces_within(k, face.indices())?
        .into_iter()
        .map(|s| RelOpenCell { strict: s.clone(), face: FaceDescriptor::VertexSubset(s) })
        .collect();
    Ok((face, ExtremeSetDescriptor { cells }))
}

/// Samples a point of the cell. Canonical cells only.
pub fn sample_cell<R: Rng + ?Sized>(k: &ConvexBody, cell: &RelOpenCell, rng: &mut R) -> Result<Vector> {
    check_descriptor(k, &cell.face)?;
    if !is_canonical(k, cell) {
        return Err(Error::Precondition("sampling needs a canonical cell".into()));
    }
    match (k, &cell.face) {
        (ConvexBody::H(h), FaceDescriptor::ForcedEq(s)) => sample::in_relative_interior_h(&face_polyhedron(h, s), rng),
        (ConvexBody::V(v), FaceDescriptor::VertexSubset(s)) => sample::in_cell_v(v, s, rng),
        _ => unreachable!(),
    }
}

/// A relatively open convex set has exactly two faces, the empty set and
/// itself. Checked by confirming that 50 sampled points of the cell all
/// generate the cell's own face.
pub fn two_face_check(k: &ConvexBody, cell: &RelOpenCell) -> Result<bool> {
    two_face_check_sampled(k, cell, &mut ChaCha8Rng::seed_from_u64(2), 50)
}

pub fn two_face_check_sampled<R: Rng + ?Sized>(
    k: &ConvexBody,
    cell: &RelOpenCell,
    rng: &mut R,
    samples: usize,
) -> Result<bool> {
    if !cell_is_nonempty(k, cell)? {
        return Err(Error::Invalid("empty cell".into()));
    }
    if !is_canonical(k, cell) {
        return Err(Error::Precondition("cell is not relatively open in its own face".into()));
    }
    let face_h = match (k, &cell.face) {
        (ConvexBody::H(h), FaceDescriptor::ForcedEq(s)) => Some(face_polyhedron(h, s)),
        _ => None,
    };
    for _ in 0..samples {
        let y = match &face_h {
            Some(face) => sample::in_relative_interior_h(face, rng)?,
            None => sample_cell(k, cell, rng)?,
        };
        if !cell_contains(k, cell, &y)? || face_of_point(k, &y)? != cell.face {
            return Ok(false);
        }
    }
    Ok(true)
}

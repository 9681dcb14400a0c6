//! Instance generation and the per-law checks. Every check is a pure function
//! of the instance and the mutation, so a stored instance re-checks to the
//! same outcome.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::generate::{
    corpus_h, corpus_v, instance_seed, perturbed_geometric, polyhedron_through, random_affine_map,
    random_finite_pmf, random_infinite_pmf, random_measure, random_pmf, rng_for,
};
use super::laws::{CertificateCase, Instance, Law, Mutation, Outcome, Payload};
use crate::certificate::{affine_comb_eps, hull_mix, menelaus_join, menelaus_split, EpsCertificate};
use crate::error::{Error, Result};
use crate::face::{
    canonical_cell, cell_contains, cells_disjoint, d_face_of_point, face_affine_hull, face_contains,
    face_intersect, face_membership_alfsen, face_of_point, face_of_point_v, face_of_set, face_polyhedron,
    image_face_sampled, is_extreme_set, partition_cells, rai_contains, sample_cell, two_face_check_sampled,
    union_of_generated_faces, ExtremeSetDescriptor, ExtremeVerdict, FaceDescriptor, RelOpenCell,
};
use crate::linalg::{affine_hull, segment_classify, AffineSubspace, SegmentPosition, Vector};
use crate::measure::{cc_contains, rai_cc_contains, rai_routes, CcVerdict};
use crate::pmf::{chain_face_contains, pmf_face_contains, pmf_rai_contains, PmfFamily, SupBound};
use crate::pmf::ratio_at;
use crate::polyhedron::{apply_affine, ConvexBody, ConvexSet, HPolyhedron, Step, VPolytope};
use crate::rational::{int, min_rat, rat, Rat};
use crate::sample::{in_cell_v, in_polyhedron_h, in_polytope_v, in_relative_interior_h, in_span, small_vector, unit_open};

/// Salt separating the check-time stream from the generation stream.
const CHECK_SALT: u64 = 0x5eed_c4ec_0000_0001;

enum Stop {
    Fail(String),
    Error(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Error(e)
    }
}

type Check<T = ()> = std::result::Result<T, Stop>;

struct Ctx {
    checks: u64,
    mutation: Option<Mutation>,
    rng: ChaCha8Rng,
}

impl Ctx {
    fn ensure(&mut self, ok: bool, msg: impl FnOnce() -> String) -> Check {
        self.checks += 1;
        if ok {
            Ok(())
        } else {
            Err(Stop::Fail(msg()))
        }
    }

    fn mutates(&self, m: Mutation) -> bool {
        self.mutation == Some(m)
    }

    /// Applies [`Mutation::CorruptFace`] to a computed cell.
    fn corrupt(&self, k: &ConvexBody, cell: RelOpenCell) -> RelOpenCell {
        if !self.mutates(Mutation::CorruptFace) {
            return cell;
        }
        let mut cell = cell;
        match (k, &mut cell.face) {
            (ConvexBody::H(_), FaceDescriptor::ForcedEq(forced)) => {
                if let Some(&i) = cell.strict.iter().next() {
                    cell.strict.remove(&i);
                    forced.insert(i);
                }
            }
            (ConvexBody::V(_), FaceDescriptor::VertexSubset(s)) if s.len() > 1 => {
                let last = *s.iter().next_back().expect("nonempty");
                s.remove(&last);
                cell.strict.remove(&last);
            }
            _ => {}
        }
        cell
    }

    /// Applies [`Mutation::InflateEps`] to an emitted certificate.
    fn inflate(&self, cert: EpsCertificate) -> EpsCertificate {
        if self.mutates(Mutation::InflateEps) {
            EpsCertificate { eps: cert.eps * int(3), ..cert }
        } else {
            cert
        }
    }
}

/// Builds instance `index` of the suite `(law, seed)`. Laws that share a
/// corpus draw it first from the same per-instance stream.
pub fn generate(law: Law, seed: u64, index: u64) -> Result<Instance> {
    let iseed = instance_seed(seed, index);
    let mut rng = rng_for(iseed);
    let payload = generate_payload(law, &mut rng)?;
    Ok(Instance { law, seed, index, instance_seed: iseed, payload })
}

/// Checks an instance, optionally under a mutation.
pub fn check(inst: &Instance, mutation: Option<Mutation>) -> Outcome {
    let mut ctx = Ctx { checks: 0, mutation, rng: rng_for(inst.instance_seed ^ CHECK_SALT) };
    let res = check_payload(inst.law, &inst.payload, &mut ctx);
    let (passed, failure) = match res {
        Ok(()) => (true, None),
        Err(Stop::Fail(msg)) => (false, Some(msg)),
        Err(Stop::Error(e)) => (false, Some(format!("error: {e}"))),
    };
    if ctx.mutates(Mutation::FlipVerdict) {
        let failure = if passed { Some("verdict flipped by mutation".to_string()) } else { None };
        return Outcome { passed: !passed, checks: ctx.checks, failure };
    }
    Outcome { passed, checks: ctx.checks, failure }
}

fn point_in<R: Rng + ?Sized>(k: &ConvexBody, rng: &mut R) -> Result<Vector> {
    match k {
        ConvexBody::H(h) => in_polyhedron_h(h, rng),
        ConvexBody::V(v) => in_polytope_v(v, rng),
    }
}

fn rai_point_in<R: Rng + ?Sized>(k: &ConvexBody, rng: &mut R) -> Result<Vector> {
    match k {
        ConvexBody::H(h) => in_relative_interior_h(h, rng),
        ConvexBody::V(v) => in_cell_v(v, &(0..v.len()).collect(), rng),
    }
}

fn corpus_body<R: Rng + ?Sized>(rng: &mut R, max_n: usize) -> Result<ConvexBody> {
    Ok(if rng.gen_bool(0.5) { ConvexBody::H(corpus_h(rng)?) } else { ConvexBody::V(corpus_v(rng, max_n)?) })
}

fn set_hull(k: &ConvexBody) -> Result<AffineSubspace> {
    match k {
        ConvexBody::H(h) => Ok(h.implicit_equalities()?.affine_hull.clone()),
        ConvexBody::V(v) => affine_hull(v.vertices()),
    }
}

fn same_subspace(a: &AffineSubspace, b: &AffineSubspace) -> bool {
    a.dim() == b.dim() && a.contains(b.basepoint()) && b.basis().iter().all(|v| a.contains_direction(v))
}

/// Pairs `(x, y)` in `k`; with probability `same` the second point is drawn
/// from the cell of the first.
fn pairs<R: Rng + ?Sized>(k: &ConvexBody, n: usize, same: f64, rng: &mut R) -> Result<Vec<(Vector, Vector)>> {
    (0..n)
        .map(|_| {
            let x = point_in(k, rng)?;
            let y = if rng.gen_bool(same) {
                let cell = d_face_of_point(k, &x)?;
                if rng.gen_bool(0.5) {
                    sample_cell(k, &cell, rng)?
                } else {
                    face_point(k, &cell.face, rng)?
                }
            } else {
                point_in(k, rng)?
            };
            Ok((x, y))
        })
        .collect()
}

/// A point of the closed face, boundary included.
fn face_point<R: Rng + ?Sized>(k: &ConvexBody, face: &FaceDescriptor, rng: &mut R) -> Result<Vector> {
    match (k, face) {
        (ConvexBody::H(h), FaceDescriptor::ForcedEq(s)) => in_polyhedron_h(&face_polyhedron(h, s), rng),
        (ConvexBody::V(v), FaceDescriptor::VertexSubset(s)) => in_polytope_v(&v.subset(s), rng),
        _ => Err(Error::MixedParents("descriptor kind does not match the set".into())),
    }
}

fn generate_payload(law: Law, rng: &mut ChaCha8Rng) -> Result<Payload> {
    Ok(match law {
        Law::MainTheorem => {
            let h = corpus_h(rng)?;
            let points = (0..5).map(|_| in_polyhedron_h(&h, rng)).collect::<Result<_>>()?;
            Payload::Points { body: ConvexBody::H(h), points }
        }
        Law::AlfsenEquivalence => {
            let body = ConvexBody::H(corpus_h(rng)?);
            let pairs = pairs(&body, 10, 0.5, rng)?;
            Payload::Pairs { body, pairs }
        }
        Law::Facex => {
            let body = corpus_body(rng, 7)?;
            let pairs = pairs(&body, 5, 0.7, rng)?;
            Payload::Pairs { body, pairs }
        }
        Law::CharRiFx | Law::Char2OpenSegments => {
            let body = corpus_body(rng, 7)?;
            let pairs = pairs(&body, 5, 0.5, rng)?;
            Payload::Pairs { body, pairs }
        }
        Law::RiGen => {
            let body = corpus_body(rng, 7)?;
            let points = (0..4).map(|_| rai_point_in(&body, rng)).collect::<Result<_>>()?;
            Payload::Points { body, points }
        }
        Law::RiAffineHull | Law::Ri2Ri => {
            let body = corpus_body(rng, 7)?;
            let points = (0..3).map(|_| point_in(&body, rng)).collect::<Result<_>>()?;
            Payload::Points { body, points }
        }
        Law::FaceGenS => {
            let h = corpus_h(rng)?;
            let from = if rng.gen_bool(0.5) {
                let x = in_polyhedron_h(&h, rng)?;
                face_polyhedron(&h, &h.active_set(&x))
            } else {
                h.clone()
            };
            let n = rng.gen_range(1..=4);
            let points = (0..n).map(|_| in_polyhedron_h(&from, rng)).collect::<Result<_>>()?;
            Payload::Points { body: ConvexBody::H(h), points }
        }
        Law::InterRelOpen => {
            let k = corpus_h(rng)?;
            let c = in_relative_interior_h(&k, rng)?;
            let rows = rng.gen_range(2..=6);
            let l = polyhedron_through(rng, &c, rows, 0.0)?;
            Payload::TwoSets { k, l, points: vec![c] }
        }
        Law::Intersection => {
            let k = corpus_h(rng)?;
            let x = in_polyhedron_h(&k, rng)?;
            let rows = rng.gen_range(2..=6);
            let l = polyhedron_through(rng, &x, rows, 0.4)?;
            let kl = k.intersect(&l)?;
            let mut points = vec![x];
            for _ in 0..2 {
                points.push(in_polyhedron_h(&kl, rng)?);
            }
            Payload::TwoSets { k, l, points }
        }
        Law::FacesRelOpen => {
            let k = corpus_h(rng)?;
            let x = in_relative_interior_h(&k, rng)?;
            let rows = rng.gen_range(2..=6);
            let l = polyhedron_through(rng, &x, rows, 0.4)?;
            let kl = k.intersect(&l)?;
            let body = ConvexBody::H(k.clone());
            let open = canonical_cell(&body, FaceDescriptor::ForcedEq(k.implicit_equalities()?.rows.clone()));
            let tight: BTreeSet<usize> = l.active_set(&x).iter().map(|i| i + k.num_rows()).collect();
            let face_side = kl.with_equalities(&tight);
            let mut points = vec![x];
            for i in 0..6 {
                let y = if i % 2 == 0 { in_polyhedron_h(&kl, rng)? } else { in_polyhedron_h(&face_side, rng)? };
                if cell_contains(&body, &open, &y)? {
                    points.push(y);
                }
            }
            Payload::TwoSets { k, l, points }
        }
        Law::Image => {
            let k = corpus_v(rng, 8)?;
            let (m, t) = random_affine_map(rng, k.dim());
            let points = (0..3).map(|_| in_polytope_v(&k, rng)).collect::<Result<_>>()?;
            Payload::Image { k, m, t, points }
        }
        Law::MaximalElements => {
            let v = corpus_v(rng, 6)?;
            let samples = (0..6).map(|_| in_polytope_v(&v, rng)).collect::<Result<_>>()?;
            Payload::Lattice { v, picks: Vec::new(), samples }
        }
        Law::DExtreme => {
            let v = corpus_v(rng, 5)?;
            let cells = partition_cells(&v)?;
            let mut picks: Vec<usize> = if rng.gen_bool(0.4) {
                // a downward-closed pick: every cell inside one face
                let top = &cells[rng.gen_range(0..cells.len())];
                (0..cells.len()).filter(|&i| cells[i].face.indices().is_subset(top.face.indices())).collect()
            } else {
                (0..cells.len()).filter(|_| rng.gen_bool(0.5)).collect()
            };
            if picks.is_empty() {
                picks.push(cells.len() - 1);
            }
            Payload::Lattice { v, picks, samples: Vec::new() }
        }
        Law::TwoDFaces => {
            let v = corpus_v(rng, 6)?;
            Payload::Lattice { v, picks: Vec::new(), samples: Vec::new() }
        }
        Law::Conv => {
            let k = corpus_v(rng, 7)?;
            let n = rng.gen_range(1..=3);
            let mut pts: Vec<Vector> = Vec::new();
            for _ in 0..n {
                let p = in_polytope_v(&k, rng)?;
                if !pts.contains(&p) {
                    pts.push(p);
                }
            }
            Payload::Hull { k, c: VPolytope::new(pts)? }
        }
        Law::Certificates => Payload::Certificates(Box::new(certificate_case(rng)?)),
        Law::PmfLaws => {
            let p = random_pmf(rng);
            let q = match rng.gen_range(0..7) {
                0 | 1 => PmfFamily::hall_of(p.clone()),
                2 if !p.support().is_finite() => PmfFamily::truncation(p.clone(), rng.gen_range(1..=10))?,
                3 => random_finite_pmf(rng),
                4 => perturbed_geometric(rng),
                5 => random_infinite_pmf(rng),
                _ => random_pmf(rng),
            };
            Payload::Pmf { p, q }
        }
        Law::CcLaws => {
            let mu = random_measure(rng, 8, 3)?;
            let hull = mu.convex_core();
            let all: BTreeSet<usize> = (0..hull.len()).collect();
            let probes = (0..20)
                .map(|i| match i % 4 {
                    0 => in_cell_v(&hull, &all, rng),
                    3 => Ok(small_vector(rng, mu.dim())),
                    _ => in_polytope_v(&hull, rng),
                })
                .collect::<Result<_>>()?;
            let (m, t) = random_affine_map(rng, mu.dim());
            Payload::Measure { mu, probes, m, t }
        }
    })
}

fn certificate_case(rng: &mut ChaCha8Rng) -> Result<CertificateCase> {
    let k = corpus_h(rng)?;
    let x = in_relative_interior_h(&k, rng)?;
    let a = in_polyhedron_h(&k, rng)?;
    let mut b = in_polyhedron_h(&k, rng)?;
    for _ in 0..4 {
        if b != a {
            break;
        }
        b = in_polyhedron_h(&k, rng)?;
    }
    let eta = unit_open(rng);
    let ys: Vec<Vector> = (0..rng.gen_range(2..=4)).map(|_| in_polyhedron_h(&k, rng)).collect::<Result<_>>()?;
    let raw: Vec<Rat> = (0..ys.len()).map(|_| int(rng.gen_range(-5..=5))).collect();
    let mean = raw.iter().fold(Rat::zero(), |s, r| s + r) / int(raw.len() as i64);
    let mut alpha: Vec<Rat> = raw.iter().map(|r| r - &mean).collect();
    if alpha.iter().all(Zero::is_zero) {
        alpha[0] = Rat::one();
        alpha[1] = -Rat::one();
    }
    let d = rng.gen_range(1..=3);
    let n = rng.gen_range(1..=5);
    let k1 = super::generate::random_v_polytope(rng, d, n, false)?;
    let n = rng.gen_range(1..=5);
    let k2 = super::generate::random_v_polytope(rng, d, n, false)?;
    let x1 = in_cell_v(&k1, &(0..k1.len()).collect(), rng)?;
    let x2 = in_cell_v(&k2, &(0..k2.len()).collect(), rng)?;
    let y1 = in_polytope_v(&k1, rng)?;
    let y2 = in_polytope_v(&k2, rng)?;
    let lambda = unit_open(rng);
    let mu = match rng.gen_range(0..5) {
        0 => Rat::zero(),
        1 => Rat::one(),
        _ => unit_open(rng),
    };
    Ok(CertificateCase { k, x, a, b, eta, ys, alpha, k1, k2, x1, x2, y1, y2, lambda, mu })
}

fn check_payload(law: Law, payload: &Payload, ctx: &mut Ctx) -> Check {
    match (law, payload) {
        (Law::MainTheorem, Payload::Points { body, points }) => main_theorem(body, points, ctx),
        (Law::AlfsenEquivalence, Payload::Pairs { body, pairs }) => alfsen(body, pairs, ctx),
        (Law::Facex, Payload::Pairs { body, pairs }) => facex(body, pairs, ctx),
        (Law::CharRiFx, Payload::Pairs { body, pairs }) => char_ri(body, pairs, ctx),
        (Law::Char2OpenSegments, Payload::Pairs { body, pairs }) => open_segments(body, pairs, ctx),
        (Law::RiGen, Payload::Points { body, points }) => ri_gen(body, points, ctx),
        (Law::RiAffineHull, Payload::Points { body, points }) => ri_affine_hull(body, points, ctx),
        (Law::Ri2Ri, Payload::Points { body, points }) => ri2_ri(body, points, ctx),
        (Law::FaceGenS, Payload::Points { body, points }) => face_gen_set(body, points, ctx),
        (Law::InterRelOpen, Payload::TwoSets { k, l, points }) => inter_rel_open(k, l, points, ctx),
        (Law::Intersection, Payload::TwoSets { k, l, points }) => intersection(k, l, points, ctx),
        (Law::FacesRelOpen, Payload::TwoSets { k, l, points }) => faces_rel_open(k, l, points, ctx),
        (Law::Image, Payload::Image { k, m, t, points }) => image(k, m, t, points, ctx),
        (Law::MaximalElements, Payload::Lattice { v, samples, .. }) => maximal_elements(v, samples, ctx),
        (Law::DExtreme, Payload::Lattice { v, picks, .. }) => d_extreme(v, picks, ctx),
        (Law::TwoDFaces, Payload::Lattice { v, .. }) => two_d_faces(v, ctx),
        (Law::Conv, Payload::Hull { k, c }) => conv(k, c, ctx),
        (Law::Certificates, Payload::Certificates(case)) => certificates(case, ctx),
        (Law::PmfLaws, Payload::Pmf { p, q }) => pmf_laws(p, q, ctx),
        (Law::CcLaws, Payload::Measure { mu, probes, m, t }) => cc_laws(mu, probes, m, t, ctx),
        _ => Err(Stop::Error(Error::Invalid(format!("payload does not fit law {law}")))),
    }
}

fn main_theorem(body: &ConvexBody, points: &[Vector], ctx: &mut Ctx) -> Check {
    let ConvexBody::H(h) = body else {
        return Err(Stop::Error(Error::Invalid("main-theorem instances are H-polyhedra".into())));
    };
    for x in points {
        let cell = ctx.corrupt(body, d_face_of_point(body, x)?);
        ctx.ensure(cell_contains(body, &cell, x)?, || format!("{x:?} outside the cell it generates"))?;
        // x is an internal point of its face: every y there admits a step x + ε(x−y)
        let face = face_polyhedron(h, cell.face.indices());
        for _ in 0..3 {
            let y = in_polyhedron_h(&face, &mut ctx.rng)?;
            let step = face.max_step(x, &(x - &y))?;
            ctx.ensure(step.is_positive(), || format!("no step from {x:?} away from {y:?} inside the face"))?;
        }
        let inner = rai_contains(&ConvexBody::H(face), x)?;
        ctx.ensure(inner, || format!("{x:?} not in the relative interior of its face"))?;
    }
    Ok(())
}

fn alfsen(body: &ConvexBody, pairs: &[(Vector, Vector)], ctx: &mut Ctx) -> Check {
    for (x, y) in pairs {
        let verdict = face_membership_alfsen(body, x, y)?;
        let cell = ctx.corrupt(body, d_face_of_point(body, x)?);
        let in_face = face_contains(body, &cell.face, y)?;
        ctx.ensure(verdict.is_member() == in_face, || {
            format!("step test says {} but active-set face says {in_face} for {x:?}, {y:?}", verdict.is_member())
        })?;
        if let Some(cert) = verdict.cert() {
            let cert = ctx.inflate(cert.clone());
            ctx.ensure(cert.verify(body)?, || format!("certificate {cert:?} does not verify"))?;
        }
    }
    Ok(())
}

fn facex(body: &ConvexBody, pairs: &[(Vector, Vector)], ctx: &mut Ctx) -> Check {
    for (x, y) in pairs {
        let Some(cert) = face_membership_alfsen(body, x, y)?.cert().cloned() else { continue };
        let cert = ctx.inflate(cert);
        let z = cert.step_point();
        ctx.ensure(body.contains(&z)?, || format!("step point {z:?} left the set"))?;
        let pos = segment_classify(x, y, &z)?;
        let expected = if x == y { SegmentPosition::Endpoint } else { SegmentPosition::OpenInterior };
        ctx.ensure(pos == expected, || format!("{x:?} is {pos:?} on [{y:?}, {z:?}]"))?;
    }
    Ok(())
}

fn char_ri(body: &ConvexBody, pairs: &[(Vector, Vector)], ctx: &mut Ctx) -> Check {
    for (x, y) in pairs {
        let (fx, fy) = (face_of_point(body, x)?, face_of_point(body, y)?);
        let cell = ctx.corrupt(body, canonical_cell(body, fy.clone()));
        let in_cell = cell_contains(body, &cell, x)?;
        let mutual = face_membership_alfsen(body, x, y)?.is_member() && face_membership_alfsen(body, y, x)?.is_member();
        let same = fx == fy;
        ctx.ensure(in_cell == mutual && mutual == same, || {
            format!("cell {in_cell}, mutual {mutual}, equal descriptors {same} for {x:?}, {y:?}")
        })?;
    }
    Ok(())
}

fn open_segments(body: &ConvexBody, pairs: &[(Vector, Vector)], ctx: &mut Ctx) -> Check {
    for (x, y) in pairs {
        let same = cell_contains(body, &d_face_of_point(body, x)?, y)?;
        let fwd = face_membership_alfsen(body, x, y)?;
        let back = face_membership_alfsen(body, y, x)?;
        match (fwd.cert(), back.cert()) {
            (Some(cx), Some(cy)) => {
                let (a, b) = (cx.step_point(), cy.step_point());
                ctx.ensure(same, || format!("{y:?} shares a segment with {x:?} but not its cell"))?;
                ctx.ensure(body.contains(&a)? && body.contains(&b)?, || format!("segment [{a:?}, {b:?}] leaves the set"))?;
                if x != y {
                    let px = segment_classify(x, &a, &b)?;
                    let py = segment_classify(y, &a, &b)?;
                    ctx.ensure(
                        px == SegmentPosition::OpenInterior && py == SegmentPosition::OpenInterior,
                        || format!("{x:?} is {px:?} and {y:?} is {py:?} on [{a:?}, {b:?}]"),
                    )?;
                }
            }
            _ => ctx.ensure(!same, || format!("{y:?} in the cell of {x:?} without certificates"))?,
        }
    }
    Ok(())
}

fn two_sided_eps(body: &ConvexBody, x: &Vector, dir: &Vector) -> Result<Option<Rat>> {
    let fwd = body.max_step(x, dir)?;
    let back = body.max_step(x, &-dir)?;
    Ok(match (fwd, back) {
        (Step::Zero, _) | (_, Step::Zero) => None,
        (Step::Bounded { eps: a }, Step::Bounded { eps: b }) => Some(min_rat(&a, &b).clone()),
        (Step::Bounded { eps }, Step::Unbounded) | (Step::Unbounded, Step::Bounded { eps }) => Some(eps),
        (Step::Unbounded, Step::Unbounded) => Some(Rat::one()),
    })
}

fn ri_gen(body: &ConvexBody, points: &[Vector], ctx: &mut Ctx) -> Check {
    let hull = set_hull(body)?;
    let mut all = points.to_vec();
    let x = &points[0];
    for b in hull.basis() {
        let eps = two_sided_eps(body, x, b)?;
        ctx.ensure(eps.is_some(), || format!("no two-sided step along {b:?} at {x:?}"))?;
        let half = eps.expect("checked") / int(2);
        all.push(x.axpy(&half, b));
        all.push(x.axpy(&-half, b));
    }
    for p in &all {
        ctx.ensure(rai_contains(body, p)?, || format!("{p:?} not in the relative interior"))?;
    }
    let spanned = affine_hull(&all)?;
    ctx.ensure(same_subspace(&spanned, &hull), || {
        format!("interior points span dimension {} of {}", spanned.dim(), hull.dim())
    })
}

fn ri_affine_hull(body: &ConvexBody, points: &[Vector], ctx: &mut Ctx) -> Check {
    let d = body.dim();
    for x in points {
        let aff = face_affine_hull(body, x)?;
        for _ in 0..5 {
            let v = in_span(aff.basis(), d, &mut ctx.rng);
            if v.is_zero() {
                continue;
            }
            let eps = two_sided_eps(body, x, &v)?;
            ctx.ensure(eps.is_some(), || format!("{v:?} spans the face hull but is not two-sided at {x:?}"))?;
        }
        for _ in 0..5 {
            let v = small_vector(&mut ctx.rng, d);
            if aff.contains_direction(&v) {
                continue;
            }
            let eps = two_sided_eps(body, x, &v)?;
            ctx.ensure(eps.is_none(), || format!("{v:?} is two-sided at {x:?} but leaves the face hull"))?;
        }
    }
    Ok(())
}

fn ri2_ri(body: &ConvexBody, points: &[Vector], ctx: &mut Ctx) -> Check {
    for x in points {
        let cell = ctx.corrupt(body, d_face_of_point(body, x)?);
        let ok = two_face_check_sampled(body, &cell, &mut ctx.rng, 4)?;
        ctx.ensure(ok, || format!("cell {cell:?} fails the two-sided face check"))?;
        let own = match (body, &cell.face) {
            (ConvexBody::H(h), FaceDescriptor::ForcedEq(s)) => {
                let face = face_polyhedron(h, s);
                face.active_set(x) == *s && rai_contains(&ConvexBody::H(face), x)?
            }
            (ConvexBody::V(v), FaceDescriptor::VertexSubset(s)) => {
                let sub = v.subset(s);
                face_of_point_v(&sub, x)?.len() == sub.len()
            }
            _ => false,
        };
        ctx.ensure(own, || format!("{x:?} does not generate its own cell inside the face"))?;
    }
    Ok(())
}

fn face_gen_set(body: &ConvexBody, points: &[Vector], ctx: &mut Ctx) -> Check {
    let ConvexBody::H(h) = body else {
        return Err(Stop::Error(Error::Invalid("face-gen-S instances are H-polyhedra".into())));
    };
    let face = face_of_set(body, points)?;
    let meet = points
        .iter()
        .map(|p| h.active_set(p))
        .reduce(|a, b| &a & &b)
        .expect("nonempty set");
    ctx.ensure(*face.indices() == meet, || format!("face {face:?} is not the meet {meet:?}"))?;
    for p in points {
        ctx.ensure(face_contains(body, &face, p)?, || format!("{p:?} outside its generated face"))?;
    }
    let w = crate::sample::positive_weights(&mut ctx.rng, points.len());
    let z = Vector::combination(&points.iter().collect::<Vec<_>>(), &w);
    let fz = face_of_point(body, &z)?;
    ctx.ensure(fz == face, || format!("positive combination {z:?} generates {fz:?}, not {face:?}"))
}

fn shifted(rows: &BTreeSet<usize>, by: usize) -> BTreeSet<usize> {
    rows.iter().map(|i| i + by).collect()
}

fn inter_rel_open(k: &HPolyhedron, l: &HPolyhedron, points: &[Vector], ctx: &mut Ctx) -> Check {
    let kl = k.intersect(l)?;
    let (kb, lb, klb) = (ConvexBody::H(k.clone()), ConvexBody::H(l.clone()), ConvexBody::H(kl.clone()));
    let c = &points[0];
    ctx.ensure(rai_contains(&kb, c)? && rai_contains(&lb, c)?, || format!("{c:?} is not a common interior point"))?;
    let expected = &k.implicit_equalities()?.rows | &shifted(&l.implicit_equalities()?.rows, k.num_rows());
    let joint = kl.implicit_equalities()?.rows.clone();
    ctx.ensure(joint == expected, || format!("implicit rows {joint:?}, expected {expected:?}"))?;
    for _ in 0..6 {
        let y = in_polyhedron_h(&kl, &mut ctx.rng)?;
        let joint = rai_contains(&klb, &y)?;
        let both = rai_contains(&kb, &y)? && rai_contains(&lb, &y)?;
        ctx.ensure(joint == both, || format!("{y:?}: interior of the meet {joint}, of both {both}"))?;
    }
    Ok(())
}

fn intersection(k: &HPolyhedron, l: &HPolyhedron, points: &[Vector], ctx: &mut Ctx) -> Check {
    let kl = ConvexBody::H(k.intersect(l)?);
    let (kb, lb) = (ConvexBody::H(k.clone()), ConvexBody::H(l.clone()));
    for x in points {
        let f = face_intersect(k, l, x)?;
        ctx.ensure(f.identity_holds(), || format!("face identity fails at {x:?}: {f:?}"))?;
        let joint = face_affine_hull(&kl, x)?;
        let meet = face_affine_hull(&kb, x)?.intersect(&face_affine_hull(&lb, x)?);
        let ok = meet.as_ref().is_some_and(|m| same_subspace(m, &joint));
        ctx.ensure(ok, || format!("affine hull of the joint face differs at {x:?}"))?;
    }
    Ok(())
}

fn faces_rel_open(k: &HPolyhedron, l: &HPolyhedron, points: &[Vector], ctx: &mut Ctx) -> Check {
    let kb = ConvexBody::H(k.clone());
    let lb = ConvexBody::H(l.clone());
    let open = canonical_cell(&kb, FaceDescriptor::ForcedEq(k.implicit_equalities()?.rows.clone()));
    let kl = k.intersect(l)?;
    let x = &points[0];
    ctx.ensure(cell_contains(&kb, &open, x)?, || format!("{x:?} outside the open cell"))?;
    let fl = face_of_point(&lb, x)?;
    for y in &points[1..] {
        ctx.ensure(cell_contains(&kb, &open, y)? && l.contains(y)?, || format!("{y:?} outside O ∩ L"))?;
        if y == x {
            continue;
        }
        let dir = x - y;
        // a step inside K ∩ L that is short enough also stays in the open cell
        let via_steps = match kl.max_step(x, &dir)? {
            Step::Zero => false,
            step => {
                let room = match (step, k.max_step(x, &dir)?) {
                    (Step::Bounded { eps: a }, Step::Bounded { eps: b }) => min_rat(&a, &b).clone(),
                    (Step::Bounded { eps }, _) | (_, Step::Bounded { eps }) => eps,
                    _ => Rat::one(),
                };
                let p = x.step_away(y, &(room / int(2)));
                ctx.ensure(cell_contains(&kb, &open, &p)? && l.contains(&p)?, || format!("step point {p:?} left O ∩ L"))?;
                true
            }
        };
        let via_faces = face_contains(&lb, &fl, y)?;
        ctx.ensure(via_steps == via_faces, || {
            format!("{y:?}: face of O ∩ L says {via_steps}, O ∩ face of L says {via_faces}")
        })?;
    }
    Ok(())
}

fn image(k: &VPolytope, m: &[Vec<Rat>], t: &Vector, points: &[Vector], ctx: &mut Ctx) -> Check {
    for x in points {
        let r = image_face_sampled(k, m, t, x, &mut ctx.rng, 10)?;
        ctx.ensure(r.passed(), || format!("{} of {} image samples escape the cell of {x:?}", r.escaped, r.samples))?;
    }
    Ok(())
}

fn maximal_elements(v: &VPolytope, samples: &[Vector], ctx: &mut Ctx) -> Check {
    let body = ConvexBody::V(v.clone());
    let cells = partition_cells(v)?;
    for (i, a) in cells.iter().enumerate() {
        for b in &cells[i + 1..] {
            let ok = cells_disjoint(&body, a, b)?;
            ctx.ensure(ok, || format!("cells {:?} and {:?} meet", a.face, b.face))?;
        }
    }
    for y in samples {
        let mut hits = Vec::new();
        for c in &cells {
            if cell_contains(&body, c, y)? {
                hits.push(c);
            }
        }
        ctx.ensure(hits.len() == 1, || format!("{y:?} lies in {} cells", hits.len()))?;
        let home = hits[0];
        // adding y to any other cell brings in a point with a different face
        let fy = face_of_point(&body, y)?;
        for c in cells.iter().filter(|c| *c != home) {
            ctx.ensure(fy != c.face, || format!("{y:?} extends cell {:?} without changing face", c.face))?;
        }
    }
    Ok(())
}

/// Faces of `v` found without the lattice walk: the generated face of the
/// centroid of every generator subset.
fn subset_lattice(v: &VPolytope) -> Result<BTreeSet<BTreeSet<usize>>> {
    let n = v.len();
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << n) {
        let s: BTreeSet<usize> = (0..n).filter(|&j| mask & (1 << j) != 0).collect();
        let c = Vector::centroid(v.subset(&s).vertices())?;
        out.insert(v.generator_support(&c, &s)?);
    }
    Ok(out)
}

fn d_extreme(v: &VPolytope, picks: &[usize], ctx: &mut Ctx) -> Check {
    let body = ConvexBody::V(v.clone());
    let cells = partition_cells(v)?;
    let lattice = subset_lattice(v)?;
    let walked: BTreeSet<BTreeSet<usize>> = cells.iter().map(|c| c.face.indices().clone()).collect();
    ctx.ensure(walked == lattice, || format!("lattice walk {walked:?} differs from subset oracle {lattice:?}"))?;
    let picked: Vec<RelOpenCell> = picks
        .iter()
        .map(|&i| cells.get(i).cloned().ok_or_else(|| Error::Invalid(format!("pick {i} out of range"))))
        .collect::<Result<_>>()?;
    let faces: BTreeSet<&BTreeSet<usize>> = picked.iter().map(|c| c.face.indices()).collect();
    let downward = faces.iter().all(|f| lattice.iter().filter(|g| g.is_subset(f)).all(|g| faces.contains(g)));
    let e = ExtremeSetDescriptor { cells: picked.clone() };
    match is_extreme_set(v, &e)? {
        ExtremeVerdict::ExtremeAndDextreme => ctx.ensure(downward, || "not downward closed yet reported extreme".into())?,
        ExtremeVerdict::DextremeOnly { witness } => {
            ctx.ensure(!downward, || "downward closed yet reported not extreme".into())?;
            let ok = !e.contains(&body, &witness.outside)?
                && e.contains(&body, &witness.inside)?
                && body.contains(&witness.far)?
                && segment_classify(&witness.inside, &witness.outside, &witness.far)? == SegmentPosition::OpenInterior;
            ctx.ensure(ok, || format!("segment witness {witness:?} does not refute extremality"))?;
        }
        ExtremeVerdict::Neither { reason } => ctx.ensure(false, || format!("union of cells rejected: {reason}"))?,
    }
    // open segments meeting a picked cell stay inside the union
    for c in picked.iter().take(3) {
        let s = c.face.indices();
        let sub = v.subset(s);
        let z = in_cell_v(v, s, &mut ctx.rng)?;
        let a = in_polytope_v(&sub, &mut ctx.rng)?;
        if a == z {
            continue;
        }
        let eps = match sub.max_step(&z, &(&z - &a))? {
            Step::Bounded { eps } => eps / int(2),
            Step::Unbounded => Rat::one(),
            Step::Zero => {
                ctx.ensure(false, || format!("{z:?} not internal to its face"))?;
                continue;
            }
        };
        let b = z.step_away(&a, &eps);
        for t in [rat(1, 4), rat(1, 2), rat(3, 4)] {
            let p = a.lerp(&b, &t);
            ctx.ensure(e.contains(&body, &p)?, || format!("open segment point {p:?} left the union"))?;
        }
    }
    Ok(())
}

fn two_d_faces(v: &VPolytope, ctx: &mut Ctx) -> Check {
    let body = ConvexBody::V(v.clone());
    let cells = partition_cells(v)?;
    for c in &cells {
        let ok = two_face_check_sampled(&body, c, &mut ctx.rng, 3)?;
        ctx.ensure(ok, || format!("cell {:?} fails the two-sided face check", c.face))?;
    }
    if let Some(c) = cells.iter().find(|c| c.strict.len() > 1) {
        let mut strict = c.strict.clone();
        let first = *strict.iter().next().expect("nonempty");
        strict.remove(&first);
        let odd = RelOpenCell { face: c.face.clone(), strict };
        let refused = matches!(two_face_check_sampled(&body, &odd, &mut ctx.rng, 1), Err(Error::Precondition(_)));
        ctx.ensure(refused, || format!("non-canonical cell {odd:?} was not refused"))?;
    }
    Ok(())
}

fn conv(k: &VPolytope, c: &VPolytope, ctx: &mut Ctx) -> Check {
    let body = ConvexBody::V(k.clone());
    let (face, union) = union_of_generated_faces(k, c)?;
    let w = crate::sample::positive_weights(&mut ctx.rng, c.len());
    let z = Vector::combination(&c.vertices().iter().collect::<Vec<_>>(), &w);
    let fz = face_of_point(&body, &z)?;
    ctx.ensure(fz == face, || format!("interior point {z:?} of conv(C) generates {fz:?}, not {face:?}"))?;
    for p in c.vertices() {
        let fp = face_of_point(&body, p)?;
        ctx.ensure(fp.indices().is_subset(face.indices()), || format!("face of {p:?} escapes {face:?}"))?;
        ctx.ensure(union.contains(&body, p)?, || format!("{p:?} outside the union of generated faces"))?;
    }
    for _ in 0..3 {
        let p = in_polytope_v(c, &mut ctx.rng)?;
        ctx.ensure(union.contains(&body, &p)?, || format!("{p:?} in conv(C) but outside the union"))?;
    }
    for cell in &union.cells {
        ctx.ensure(cell.face.indices().is_subset(face.indices()), || format!("cell {:?} outside {face:?}", cell.face))?;
    }
    Ok(())
}

fn internal_cert<K: ConvexSet + ?Sized>(k: &K, x: &Vector, y: &Vector, ctx: &mut Ctx) -> Check<EpsCertificate> {
    let cert = face_membership_alfsen(k, x, y)?.cert().cloned();
    ctx.ensure(cert.is_some(), || format!("{x:?} admits no step away from {y:?}"))?;
    Ok(cert.expect("checked"))
}

fn certificates(case: &CertificateCase, ctx: &mut Ctx) -> Check {
    let CertificateCase { k, x, a, b, eta, ys, alpha, k1, k2, x1, x2, y1, y2, lambda, mu } = case;
    let one = Rat::one();
    if a != b {
        let y = a.lerp(b, eta);
        let cert = internal_cert(k, x, &y, ctx)?;
        let cert = ctx.inflate(cert);
        ctx.ensure(cert.verify(k)?, || format!("certificate {cert:?} does not verify"))?;
        let split = menelaus_split(k, &cert, a, b, eta)?;
        ctx.ensure(split.a.verify(k)? && split.b.verify(k)?, || "split certificates do not verify".into())?;
        let e = &cert.eps;
        let expected = e * (&one - eta) / (&one + e * eta);
        ctx.ensure(split.a.eps == expected, || format!("split ε_a {} differs from {expected}", split.a.eps))?;
    }
    let ca = internal_cert(k, x, a, ctx)?;
    let ca = ctx.inflate(ca);
    let cb = internal_cert(k, x, b, ctx)?;
    let join = menelaus_join(k, &ca, &cb, eta)?;
    ctx.ensure(join.cert.verify(k)?, || "joined certificate does not verify".into())?;
    ctx.ensure(join.cert.target == a.lerp(b, eta), || "joined target is not (1−η)a + ηb".into())?;
    if a != b {
        let back = menelaus_split(k, &join.cert, a, b, eta)?;
        ctx.ensure(back.a.verify(k)? && back.b.verify(k)?, || "round-trip certificates do not verify".into())?;
    }

    let mut eps = Vec::with_capacity(ys.len());
    for y in ys {
        eps.push(internal_cert(k, x, y, ctx)?.eps);
    }
    let e = affine_comb_eps(&eps, alpha)?;
    ctx.ensure(e.is_positive(), || format!("affine ε {e} is not positive"))?;
    let w = ys.iter().zip(alpha).fold(Vector::zeros(x.dim()), |acc, (y, a)| acc.axpy(a, y));
    let (fwd, back) = (x.axpy(&e, &w), x.axpy(&-&e, &w));
    ctx.ensure(k.contains(&fwd)? && k.contains(&back)?, || format!("x ± {e}·w leaves the set"))?;

    let c1 = internal_cert(k1, x1, y1, ctx)?;
    let c2 = internal_cert(k2, x2, y2, ctx)?;
    let mix = hull_mix(k1, k2, &c1, &c2, lambda, mu)?;
    let mut verts = k1.vertices().to_vec();
    verts.extend(k2.vertices().iter().filter(|p| !k1.vertices().contains(p)).cloned());
    let hull = VPolytope::new(verts)?;
    let cert = ctx.inflate(mix.cert);
    ctx.ensure(cert.verify(&hull)?, || format!("hull certificate {cert:?} does not verify"))
}

fn skip_unsupported<T>(r: Result<T>) -> Check<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::UnsupportedPair(_)) => Ok(None),
        Err(e) => Err(Stop::Error(e)),
    }
}

fn pmf_laws(p: &PmfFamily, q: &PmfFamily, ctx: &mut Ctx) -> Check {
    for f in [p, q] {
        let ok = f.normalization().is_ok();
        ctx.ensure(ok, || format!("{} does not normalize", f.label()))?;
    }
    if !p.support().is_finite() {
        let t = pmf_face_contains(p, &PmfFamily::hall_of(p.clone()))?;
        let diverges = matches!(t.analysis.verdict().map(|v| &v.sup), Some(SupBound::Infinite { .. }));
        ctx.ensure(!t.member && diverges, || format!("Hall transform of {} lies in its face", p.label()))?;
    }
    let fwd = skip_unsupported(pmf_face_contains(p, q))?;
    if let Some(t) = &fwd {
        if let Some(SupBound::Finite { bound, .. }) = t.analysis.verdict().map(|v| &v.sup) {
            for n in (1..=200).filter(|&n| p.support().contains(n)) {
                let r = ratio_at(q, p, n);
                ctx.ensure(r.lo <= bound.hi, || format!("ratio at {n} exceeds the bound {}", bound.hi))?;
            }
        }
        if q.support().is_finite() {
            let sub = q.support().is_subset(&p.support());
            ctx.ensure(t.member == sub, || format!("finite {} member {} but support inclusion {sub}", q.label(), t.member))?;
        }
        if let (PmfFamily::Power { exponent: s_p }, PmfFamily::Power { exponent: s_q }) = (p, q) {
            ctx.ensure(t.member == (s_q >= s_p), || format!("power pair {s_q} over {s_p} member {}", t.member))?;
            let chained = chain_face_contains(s_p, q)?;
            ctx.ensure(chained == (s_q > s_p), || format!("chain at {s_p} holds {s_q}: {chained}"))?;
        }
    }
    let pq = skip_unsupported(pmf_rai_contains(p, q))?;
    let qp = skip_unsupported(pmf_rai_contains(q, p))?;
    if let (Some(a), Some(b)) = (pq, qp) {
        ctx.ensure(a == b, || format!("interior membership is not symmetric: {a} vs {b}"))?;
    }
    Ok(())
}

fn cc_laws(mu: &crate::measure::AtomicMeasure, probes: &[Vector], m: &[Vec<Rat>], t: &Vector, ctx: &mut Ctx) -> Check {
    let hull = mu.convex_core();
    let image = mu.pushforward(m, t)?;
    let mut first_interior = None;
    for a in probes {
        let (density, face) = rai_routes(mu, a)?;
        ctx.ensure(density == face, || format!("routes disagree at {a:?}: density {density}, face {face}"))?;
        let inside = hull.contains(a)?;
        match cc_contains(mu, a)? {
            CcVerdict::Inside { witness } => {
                ctx.ensure(inside, || format!("{a:?} reported inside but not in the hull"))?;
                ctx.ensure(witness.verify(mu, a), || format!("density witness at {a:?} does not verify"))?;
            }
            CcVerdict::Outside => ctx.ensure(!inside, || format!("{a:?} in the hull but reported outside"))?,
        }
        if density {
            let b = apply_affine(m, t, a);
            ctx.ensure(rai_cc_contains(&image, &b)?, || format!("image {b:?} of an interior point is not interior"))?;
            first_interior.get_or_insert_with(|| a.clone());
        }
    }
    if let Some(a) = first_interior {
        let r = image_face_sampled(&hull, m, t, &a, &mut ctx.rng, 5)?;
        ctx.ensure(r.passed(), || format!("image cell check fails at {a:?}"))?;
    }
    Ok(())
}

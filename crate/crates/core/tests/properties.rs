//! Property tests for the invariants of each layer, from exact linear
//! algebra up to the law harness.

use facekit::certificate::{affine_comb_eps, menelaus_join, menelaus_split};
use facekit::face::{face_membership_alfsen, face_of_point, face_contains, rai_contains, d_face_of_point, cell_contains};
use facekit::harness::{gen_polytope, run_suite, Law, PolytopeRequest, RunOptions, Shape};
use facekit::linalg::{affine_hull, segment_classify, SegmentPosition};
use facekit::lp::LpOutcome;
use facekit::measure::{cc_contains, rai_routes, Atom, AtomicMeasure, CcVerdict};
use facekit::pmf::{pmf_face_contains, pmf_rai_contains, ratio_at, PmfFamily, SupBound};
use facekit::polyhedron::{implicit_equalities, max_step};
use facekit::rational::{int, rat};
use facekit::sample::{in_polyhedron_h, positive_weights};
use facekit::{ConvexBody, ConvexSet, EpsCertificate, Execution, HPolyhedron, Rat, Step, Vector};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

fn unit_open() -> impl Strategy<Value = Rat> {
    (1i64..=63).prop_map(|n| rat(n, 64))
}

fn vector(d: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(small_rat(), d).prop_map(Vector)
}

fn h_polytope(seed: u64, dim: usize, rows: usize) -> HPolyhedron {
    let req = PolytopeRequest { dim, shape: Shape::H { n_rows: rows }, degenerate: None };
    match gen_polytope(seed, &req).expect("valid request") {
        ConvexBody::H(h) => h,
        ConvexBody::V(_) => unreachable!(),
    }
}

fn polytope_case() -> impl Strategy<Value = (u64, usize, usize)> {
    (any::<u64>(), 1usize..=4).prop_flat_map(|(seed, d)| (Just(seed), Just(d), (d + 1)..=10))
}

fn sample_in(h: &HPolyhedron, rng: &mut ChaCha8Rng) -> Vector {
    in_polyhedron_h(h, rng).expect("nonempty polytope")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn open_segment_points_classify_as_interior(
        (a, b) in (1usize..=4).prop_flat_map(|d| (vector(d), vector(d))),
        lambda in unit_open(),
    ) {
        prop_assume!(a != b);
        let x = a.lerp(&b, &lambda);
        prop_assert_eq!(segment_classify(&x, &a, &b).unwrap(), SegmentPosition::OpenInterior);
    }

    #[test]
    fn affine_hull_is_idempotent(
        pts in (1usize..=4).prop_flat_map(|d| prop::collection::vec(vector(d), 1..6)),
        probes in prop::collection::vec(prop::collection::vec(small_rat(), 6), 8),
    ) {
        let aff = affine_hull(&pts).unwrap();
        let mut again = vec![aff.basepoint().clone()];
        again.extend(aff.basis().iter().map(|v| aff.basepoint() + v));
        let aff2 = affine_hull(&again).unwrap();
        prop_assert_eq!(aff.dim(), aff2.dim());
        for p in &pts {
            prop_assert!(aff.contains(p) && aff2.contains(p));
        }
        let d = pts[0].dim();
        for c in probes {
            let onto = aff.at(&c[..aff.dim()]);
            prop_assert!(aff2.contains(&onto));
            let off = Vector(c[..d].to_vec());
            prop_assert_eq!(aff.contains(&off), aff2.contains(&off));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn max_step_agrees_with_membership((seed, d, m) in polytope_case()) {
        let h = h_polytope(seed, d, m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (sample_in(&h, &mut rng), sample_in(&h, &mut rng));
        let dir = &x - &y;
        match max_step(&h, &x, &dir).unwrap() {
            Step::Zero => prop_assert!(!dir.is_zero() && !h.contains(&x.axpy(&rat(1, 1_000_000), &dir)).unwrap()),
            Step::Bounded { eps } => {
                prop_assert!(eps.is_positive());
                prop_assert!(h.contains(&x.axpy(&(&eps / int(2)), &dir)).unwrap());
                prop_assert!(h.contains(&x.axpy(&eps, &dir)).unwrap());
                prop_assert!(!h.contains(&x.axpy(&(&eps * rat(3, 2)), &dir)).unwrap());
            }
            Step::Unbounded => prop_assert!(dir.is_zero()),
        }
    }

    #[test]
    fn implicit_rows_are_exactly_the_always_tight_rows((seed, d, m) in polytope_case()) {
        let h = h_polytope(seed, d, m);
        let info = h.implicit_equalities().unwrap().clone();
        let (rows, aff) = implicit_equalities(&h).unwrap();
        prop_assert_eq!(&rows, &info.rows);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        for _ in 0..10 {
            let p = sample_in(&h, &mut rng);
            prop_assert!(aff.contains(&p));
            for &i in &rows {
                prop_assert!(h.rows()[i].slack(&p).is_zero());
            }
        }
        let w = &info.relative_interior_point;
        for (i, r) in h.rows().iter().enumerate() {
            prop_assert_eq!(r.slack(w).is_zero(), rows.contains(&i));
        }
    }

    #[test]
    fn lp_witnesses_verify_by_substitution((seed, d, m) in polytope_case(), obj in vector(4)) {
        let h = h_polytope(seed, d, m);
        let c = &obj.0[..d];
        match h.lp(Some(c)) {
            LpOutcome::Feasible { witness, value } => {
                prop_assert!(h.contains_point(&witness));
                prop_assert_eq!(value, Some(witness.dot(c)));
                // no sampled point beats the optimum
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
                for _ in 0..5 {
                    prop_assert!(sample_in(&h, &mut rng).dot(c) <= witness.dot(c));
                }
            }
            other => prop_assert!(false, "bounded nonempty polytope gave {:?}", other),
        }
    }

    #[test]
    fn generated_points_lie_inside_their_cells((seed, d, m) in polytope_case()) {
        let h = h_polytope(seed, d, m);
        let k = ConvexBody::H(h.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        let x = sample_in(&h, &mut rng);
        let cell = d_face_of_point(&k, &x).unwrap();
        prop_assert!(cell_contains(&k, &cell, &x).unwrap());
        let y = sample_in(&h, &mut rng);
        let face = face_of_point(&k, &x).unwrap();
        let step = face_membership_alfsen(&h, &x, &y).unwrap();
        prop_assert_eq!(step.is_member(), face_contains(&k, &face, &y).unwrap());
        if let Some(cert) = step.cert() {
            prop_assert!(cert.verify(&h).unwrap());
            prop_assert_eq!(segment_classify(&x, &y, &cert.step_point()).unwrap() == SegmentPosition::OpenInterior, x != y);
        }
        prop_assert_eq!(rai_contains(&k, &x).unwrap(), face.indices() == &h.implicit_equalities().unwrap().rows);
    }

    #[test]
    fn join_then_split_verifies((seed, d, m) in polytope_case(), eta in unit_open()) {
        let h = h_polytope(seed, d, m);
        let info = h.implicit_equalities().unwrap().clone();
        let x = info.relative_interior_point.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 4);
        let (a, b) = (sample_in(&h, &mut rng), sample_in(&h, &mut rng));
        prop_assume!(a != b);
        let cert = |y: &Vector| face_membership_alfsen(&h, &x, y).unwrap().cert().cloned().expect("interior point");
        let join = menelaus_join(&h, &cert(&a), &cert(&b), &eta).unwrap();
        prop_assert!(join.cert.verify(&h).unwrap());
        prop_assert_eq!(&join.cert.target, &a.lerp(&b, &eta));
        let back = menelaus_split(&h, &join.cert, &a, &b, &eta).unwrap();
        prop_assert!(back.a.verify(&h).unwrap() && back.b.verify(&h).unwrap());
    }

    #[test]
    fn affine_eps_is_positive_and_two_sided((seed, d, m) in polytope_case(), raw in prop::collection::vec(small_rat(), 2..5)) {
        let h = h_polytope(seed, d, m);
        let x = h.implicit_equalities().unwrap().relative_interior_point.clone();
        let mut alpha = raw.clone();
        let total = alpha.iter().fold(Rat::zero(), |s, a| s + a);
        *alpha.last_mut().unwrap() -= total;
        prop_assume!(alpha.iter().any(|a| !a.is_zero()));
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 5);
        let ys: Vec<Vector> = (0..alpha.len()).map(|_| sample_in(&h, &mut rng)).collect();
        let certs: Vec<EpsCertificate> =
            ys.iter().map(|y| face_membership_alfsen(&h, &x, y).unwrap().cert().cloned().expect("interior point")).collect();
        let eps: Vec<Rat> = certs.iter().map(|c| c.eps.clone()).collect();
        let e = affine_comb_eps(&eps, &alpha).unwrap();
        prop_assert!(e.is_positive());
        let w = ys.iter().zip(&alpha).fold(Vector::zeros(d), |acc, (y, a)| acc.axpy(a, y));
        prop_assert!(h.contains(&x.axpy(&e, &w)).unwrap() && h.contains(&x.axpy(&-&e, &w)).unwrap());
    }
}

fn family() -> impl Strategy<Value = PmfFamily> {
    let geo = (1i64..=7, prop::collection::vec(0i64..=3, 0..3)).prop_map(|(r, head)| {
        let mut left = Rat::one();
        let head: Vec<Rat> = head
            .into_iter()
            .map(|h| {
                let m = &left * rat(h, 8);
                left -= &m;
                m
            })
            .collect();
        PmfFamily::geometric_with_head(rat(r, 8), head).unwrap()
    });
    let power = prop::sample::select(vec![rat(3, 2), int(2), rat(5, 2), int(3), int(4)]).prop_map(|s| PmfFamily::power(s).unwrap());
    let finite = prop::collection::btree_map(1u64..=12, 1i64..=5, 1..5).prop_map(|m| {
        let total: i64 = m.values().sum();
        let atoms: Vec<(u64, Rat)> = m.into_iter().map(|(n, w)| (n, rat(w, total))).collect();
        PmfFamily::finite(&atoms).unwrap()
    });
    let base = prop_oneof![geo, power, finite];
    base.prop_flat_map(|p| {
        let hall = PmfFamily::hall_of(p.clone());
        let trunc = PmfFamily::truncation(p.clone(), 5).unwrap();
        prop::sample::select(vec![p, hall, trunc])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn families_normalize(p in family()) {
        prop_assert!(p.normalization().is_ok());
        prop_assert_eq!(p.tail(1).exact_value().cloned(), Some(Rat::one()));
        // masses and tails telescope: r_n − r_{n+1} encloses p(n)
        for n in 1..12 {
            let diff = p.tail(n).sub(&p.tail(n + 1));
            let m = p.mass(n);
            prop_assert!(diff.lo <= m.hi && m.lo <= diff.hi);
        }
    }

    #[test]
    fn finite_bounds_dominate_the_ratio(p in family(), q in family()) {
        let Ok(t) = pmf_face_contains(&p, &q) else { return Ok(()) };
        if let Some(SupBound::Finite { bound, .. }) = t.analysis.verdict().map(|v| &v.sup) {
            for n in (1..=300).filter(|&n| p.support().contains(n)) {
                prop_assert!(ratio_at(&q, &p, n).lo <= bound.hi);
            }
        }
        prop_assert_eq!(t.member, t.analysis.verdict().is_some_and(|v| v.sup_is_finite()));
    }

    #[test]
    fn interior_membership_is_symmetric(p in family(), q in family()) {
        if let (Ok(a), Ok(b)) = (pmf_rai_contains(&p, &q), pmf_rai_contains(&q, &p)) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn hall_transform_leaves_the_face(p in family()) {
        prop_assume!(!p.support().is_finite());
        let t = pmf_face_contains(&p, &PmfFamily::hall_of(p.clone())).unwrap();
        prop_assert!(!t.member);
    }
}

fn measure() -> impl Strategy<Value = AtomicMeasure> {
    (1usize..=3).prop_flat_map(|d| {
        prop::collection::btree_set(prop::collection::vec(-4i64..=4, d), 1..=8).prop_flat_map(|locs| {
            let n = locs.len();
            (Just(locs), prop::collection::vec(1i64..=6, n))
        })
    })
    .prop_map(|(locs, ws)| {
        let total: i64 = ws.iter().sum();
        let atoms = locs.into_iter().zip(ws).map(|(l, w)| Atom { loc: Vector::from_ints(&l), w: rat(w, total) }).collect();
        AtomicMeasure::new(atoms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn density_and_face_routes_agree(mu in measure(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let locs = mu.locations();
        let w = positive_weights(&mut rng, locs.len());
        let inner = Vector::combination(&locs.iter().collect::<Vec<_>>(), &w);
        for a in [mu.mean(), inner, locs[0].clone(), locs[0].axpy(&int(20), &Vector::unit(mu.dim(), 0))] {
            let (density, face) = rai_routes(&mu, &a).unwrap();
            prop_assert_eq!(density, face);
            if let CcVerdict::Inside { witness } = cc_contains(&mu, &a).unwrap() {
                prop_assert!(witness.verify(&mu, &a));
                // a two-sided witness proves interiority; the converse needs a different reweighting
                prop_assert!(!witness.is_two_sided() || density);
            } else {
                prop_assert!(!density);
            }
        }
        prop_assert!(rai_routes(&mu, &mu.mean()).unwrap().0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn suites_are_deterministic(seed in any::<u64>(), law in prop::sample::select(vec![Law::Facex, Law::CharRiFx, Law::Conv, Law::CcLaws])) {
        let seq = run_suite(law, seed, 3, RunOptions { exec: Execution::Sequential, ..Default::default() }).unwrap();
        let par = run_suite(law, seed, 3, RunOptions { exec: Execution::Parallel, ..Default::default() }).unwrap();
        let again = run_suite(law, seed, 3, RunOptions::default()).unwrap();
        prop_assert_eq!(seq.content(), par.content());
        prop_assert_eq!(par.content(), again.content());
        prop_assert!(seq.all_passed());
    }
}

//! Hand-derivable values, each checked against an oracle computed here
//! without the library's own routines.

use std::collections::BTreeSet;

use facekit::certificate::{affine_comb_eps, hull_mix, menelaus_join, menelaus_split, MixBranch};
use facekit::face::{
    cell_contains, d_face_of_point, enumerate_faces, face_affine_hull, face_contains, face_intersect, face_membership_alfsen,
    face_of_point, face_of_set, image_face, is_extreme_set, partition_cells, rai_contains, union_of_generated_faces,
    ExtremeSetDescriptor, ExtremeVerdict,
};
use facekit::harness::{gen_polytope, PolytopeRequest, Shape};
use facekit::linalg::{affine_hull, segment_classify, SegmentPosition};
use facekit::lp::LpOutcome;
use facekit::measure::{cc_contains, rai_cc_contains, Atom, AtomicMeasure, CcVerdict};
use facekit::pmf::{
    chain_face_contains, pmf_face_contains, pmf_rai_contains, ratio_analysis, truncation_distance, tv_distance, InfBound,
    PmfFamily, SupBound,
};
use facekit::polyhedron::shapes::{cube_h, cube_v, flat_segment_h, interval_h, point, triangle_h, triangle_v};
use facekit::polyhedron::{implicit_equalities, max_step};
use facekit::rational::{int, rat};
use facekit::{ConvexBody, EpsCertificate, HPolyhedron, Rat, Step, VPolytope, Vector};
use num_traits::{One, Signed, Zero};

fn set(xs: &[usize]) -> BTreeSet<usize> {
    xs.iter().copied().collect()
}

/// Rows `a·x ≤ b` of an H-polytope with no equality rows.
fn rows(h: &HPolyhedron) -> Vec<(Vec<Rat>, Rat)> {
    h.rows().iter().map(|r| (r.coeffs.clone(), r.rhs.clone())).collect()
}

fn dot(a: &[Rat], x: &Vector) -> Rat {
    a.iter().zip(x.iter()).fold(Rat::zero(), |s, (p, q)| s + p * q)
}

/// Largest step along `dir` from `x` by the textbook ratio test.
fn ratio_test(h: &HPolyhedron, x: &Vector, dir: &Vector) -> Option<Rat> {
    rows(h)
        .iter()
        .filter(|(a, _)| dot(a, dir).is_positive())
        .map(|(a, b)| (b - dot(a, x)) / dot(a, dir))
        .min()
}

fn tight_rows(h: &HPolyhedron, x: &Vector) -> BTreeSet<usize> {
    rows(h).iter().enumerate().filter(|(_, (a, b))| dot(a, x) == *b).map(|(i, _)| i).collect()
}

fn in_h(h: &HPolyhedron, x: &Vector) -> bool {
    rows(h).iter().all(|(a, b)| dot(a, x) <= *b)
}

fn unit_square_h() -> HPolyhedron {
    cube_h(2)
}

#[test]
fn collinear_points_span_the_diagonal() {
    let pts = [Vector::from_ints(&[0, 0]), Vector::from_ints(&[1, 1]), Vector::from_ints(&[2, 2])];
    let aff = affine_hull(&pts).unwrap();
    // rank of the difference vectors via the 2×2 determinant
    let (u, v) = (&pts[1] - &pts[0], &pts[2] - &pts[0]);
    let det = &u.0[0] * &v.0[1] - &u.0[1] * &v.0[0];
    assert!(det.is_zero());
    assert_eq!(aff.dim(), 1);
    for t in [-3, 1, 7] {
        assert!(aff.contains(&Vector::from_ints(&[t, t])));
    }
    assert!(!aff.contains(&Vector::from_ints(&[1, 0])));
}

#[test]
fn step_from_triangle_center_lands_at_origin() {
    let tri = triangle_h();
    let x = point(&[(1, 4), (1, 4)]);
    let dir = point(&[(-1, 4), (-1, 4)]);
    let oracle = ratio_test(&tri, &x, &dir).unwrap();
    assert_eq!(oracle, int(1));
    assert_eq!(max_step(&tri, &x, &dir).unwrap(), Step::Bounded { eps: oracle.clone() });
    assert_eq!(x.axpy(&oracle, &dir), Vector::from_ints(&[0, 0]));
}

#[test]
fn flat_segment_has_two_implicit_rows() {
    let seg = flat_segment_h();
    let (found, aff) = implicit_equalities(&seg).unwrap();
    let ends = [Vector::from_ints(&[0, 0]), Vector::from_ints(&[1, 0])];
    // a row is implicit iff it is tight at both endpoints of the segment
    let oracle: BTreeSet<usize> = (0..seg.num_rows()).filter(|&i| ends.iter().all(|e| tight_rows(&seg, e).contains(&i))).collect();
    assert_eq!(oracle, set(&[0, 1]));
    assert_eq!(found, oracle);
    assert_eq!(aff.dim(), 1);
    assert!(aff.contains(&Vector::from_ints(&[5, 0])) && !aff.contains(&Vector::from_ints(&[0, 1])));
}

#[test]
fn triangle_maximum_of_x_plus_y_is_one() {
    let tri = triangle_h();
    let obj = [int(1), int(1)];
    let oracle = triangle_v().vertices().iter().map(|v| dot(&obj, v)).max().unwrap();
    assert_eq!(oracle, int(1));
    match tri.lp(Some(&obj)) {
        LpOutcome::Feasible { witness, value } => {
            assert_eq!(value, Some(oracle.clone()));
            assert_eq!(dot(&obj, &witness), oracle);
            assert!(in_h(&tri, &witness));
        }
        other => panic!("expected an optimum, got {other:?}"),
    }
}

#[test]
fn bottom_edge_point_forces_the_y_row() {
    let tri = triangle_h();
    let x = point(&[(1, 2), (0, 1)]);
    let face = face_of_point(&ConvexBody::H(tri.clone()), &x).unwrap();
    assert_eq!(face.indices(), &tight_rows(&tri, &x));
    assert_eq!(face.indices(), &set(&[1]));
    // vertices in the face are exactly those the Alfsen step accepts
    let members: Vec<bool> =
        triangle_v().vertices().iter().map(|v| face_membership_alfsen(&tri, &x, v).unwrap().is_member()).collect();
    assert_eq!(members, [true, true, false]);
}

#[test]
fn alfsen_step_on_the_bottom_edge() {
    let tri = triangle_h();
    let x = point(&[(1, 2), (0, 1)]);
    let y = Vector::from_ints(&[0, 0]);
    // (1 + ε)/2 ≤ 1 gives εmax = 1
    let emax = ratio_test(&tri, &x, &(&x - &y)).unwrap();
    assert_eq!(emax, int(1));
    let cert = face_membership_alfsen(&tri, &x, &y).unwrap().cert().cloned().unwrap();
    assert_eq!(cert.eps, emax / int(2));
    assert!(in_h(&tri, &cert.step_point()));
    let y2 = point(&[(1, 4), (1, 4)]);
    assert_eq!(ratio_test(&tri, &x, &(&x - &y2)), Some(int(0)));
    assert!(!face_membership_alfsen(&tri, &x, &y2).unwrap().is_member());
}

#[test]
fn implicit_equalities_do_not_disqualify_interior_points() {
    let seg = flat_segment_h();
    let x = point(&[(1, 2), (0, 1)]);
    assert_eq!(tight_rows(&seg, &x), set(&[0, 1]));
    assert!(rai_contains(&ConvexBody::H(seg), &x).unwrap());
}

#[test]
fn bottom_edge_spans_the_x_axis() {
    let aff = face_affine_hull(&ConvexBody::H(triangle_h()), &point(&[(1, 2), (0, 1)])).unwrap();
    assert_eq!(aff.dim(), 1);
    assert!(aff.contains(&Vector::from_ints(&[-4, 0])));
    assert!(!aff.contains(&Vector::from_ints(&[0, 1])));
    let interior = face_affine_hull(&ConvexBody::H(triangle_h()), &point(&[(1, 4), (1, 4)])).unwrap();
    assert_eq!(interior.dim(), 2);
}

#[test]
fn faces_of_finite_sets() {
    let k = ConvexBody::H(triangle_h());
    let edge = face_of_set(&k, &[Vector::from_ints(&[0, 0]), Vector::from_ints(&[1, 0])]).unwrap();
    assert_eq!(edge.indices(), &tight_rows(&triangle_h(), &point(&[(1, 2), (0, 1)])));
    let all = face_of_set(&k, triangle_v().vertices()).unwrap();
    assert!(all.indices().is_empty());
}

#[test]
fn intersection_faces_on_worked_pairs() {
    let x_plus_y = HPolyhedron::from_inequalities(vec![vec![int(1), int(1)]], vec![int(1)]).unwrap();
    let x = point(&[(1, 2), (1, 2)]);
    let out = face_intersect(&unit_square_h(), &x_plus_y, &x).unwrap();
    assert!(out.identity_holds());
    assert!(out.left.indices().is_empty());
    assert_eq!(out.right.indices(), &set(&[0]));
    // stacked system: square rows 0..4 then the diagonal row 4
    let stacked = unit_square_h().intersect(&x_plus_y).unwrap();
    assert_eq!(out.joint.indices(), &tight_rows(&stacked, &x));
    assert_eq!(out.joint.indices(), &set(&[4]));

    let (k, l) = (interval_h(int(0), int(1)), interval_h(int(1), int(2)));
    let one = Vector::from_ints(&[1]);
    let out = face_intersect(&k, &l, &one).unwrap();
    assert!(out.identity_holds());
    assert_eq!(out.left.indices(), &set(&[0]));
    assert_eq!(out.right.indices(), &set(&[1]));
    assert_eq!(out.joint.indices(), &set(&[0, 3]));
}

#[test]
fn projections_keep_interior_points_interior() {
    let proj = vec![vec![int(1), int(0)]];
    let t = Vector::zeros(1);
    let out = image_face(&triangle_v(), &proj, &t, &point(&[(1, 4), (1, 4)])).unwrap();
    assert!(out.passed());
    assert_eq!(out.image_point, point(&[(1, 4)]));
    let img = ConvexBody::V(out.image.clone());
    let lo_hi: Vec<Rat> = out.image.vertices().iter().map(|v| v.0[0].clone()).collect();
    assert_eq!(lo_hi.iter().min(), Some(&int(0)));
    assert_eq!(lo_hi.iter().max(), Some(&int(1)));
    assert!(cell_contains(&img, &out.cell, &point(&[(1, 2)])).unwrap());
    assert!(!cell_contains(&img, &out.cell, &Vector::from_ints(&[0])).unwrap());

    let diag = VPolytope::new(vec![Vector::from_ints(&[0, 0]), Vector::from_ints(&[1, 1])]).unwrap();
    let out = image_face(&diag, &proj, &t, &point(&[(1, 2), (1, 2)])).unwrap();
    assert!(out.passed() && out.image_point_in_cell);
    assert!(cell_contains(&ConvexBody::V(out.image.clone()), &out.cell, &point(&[(1, 2)])).unwrap());
}

#[test]
fn bottom_edge_cell_is_open() {
    let k = ConvexBody::H(triangle_h());
    let cell = d_face_of_point(&k, &point(&[(1, 2), (0, 1)])).unwrap();
    for (n, d) in [(1, 100), (1, 3), (99, 100)] {
        assert!(cell_contains(&k, &cell, &point(&[(n, d), (0, 1)])).unwrap());
    }
    for p in [Vector::from_ints(&[0, 0]), Vector::from_ints(&[1, 0]), point(&[(1, 4), (1, 4)])] {
        assert!(!cell_contains(&k, &cell, &p).unwrap());
    }
}

#[test]
fn face_counts_follow_the_cube_formula() {
    // Σ_k C(d,k) 2^{d−k} = 3^d nonempty faces of the d-cube
    for d in 1..=3usize {
        let oracle: usize = (0..=d).map(|k| binom(d, k) << (d - k)).sum();
        assert_eq!(oracle, 3usize.pow(d as u32));
        assert_eq!(enumerate_faces(&cube_v(d)).unwrap().len(), oracle);
    }
    assert_eq!(enumerate_faces(&triangle_v()).unwrap().len(), 3 + 3 + 1);
    assert_eq!(partition_cells(&triangle_v()).unwrap().len(), 7);
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn closed_bottom_edge_is_extreme() {
    let v = triangle_v();
    let cells = partition_cells(&v).unwrap();
    let pick = |s: &[usize]| cells.iter().find(|c| c.face.indices() == &set(s)).cloned().unwrap();
    let closed = ExtremeSetDescriptor { cells: vec![pick(&[0, 1]), pick(&[0]), pick(&[1])] };
    assert_eq!(is_extreme_set(&v, &closed).unwrap(), ExtremeVerdict::ExtremeAndDextreme);
    let open = ExtremeSetDescriptor { cells: vec![pick(&[0, 1])] };
    let ExtremeVerdict::DextremeOnly { witness } = is_extreme_set(&v, &open).unwrap() else { panic!("open edge is not extreme") };
    let body = ConvexBody::V(v.clone());
    assert!(!open.contains(&body, &witness.outside).unwrap());
    assert!(open.contains(&body, &witness.inside).unwrap());
    assert_eq!(segment_classify(&witness.inside, &witness.outside, &witness.far).unwrap(), SegmentPosition::OpenInterior);
}

#[test]
fn segments_generate_the_bottom_edge() {
    let tri = triangle_v();
    let edge = VPolytope::new(vec![Vector::from_ints(&[0, 0]), Vector::from_ints(&[1, 0])]).unwrap();
    let (face, _) = union_of_generated_faces(&tri, &edge).unwrap();
    assert_eq!(face.indices(), &set(&[0, 1]));

    let square = cube_v(2);
    let half = VPolytope::new(vec![Vector::from_ints(&[0, 0]), point(&[(1, 2), (0, 1)])]).unwrap();
    let (face, union) = union_of_generated_faces(&square, &half).unwrap();
    // the bottom edge holds exactly the vertices with y = 0
    let oracle: BTreeSet<usize> =
        square.vertices().iter().enumerate().filter(|(_, v)| v.0[1].is_zero()).map(|(i, _)| i).collect();
    assert_eq!(face.indices(), &oracle);
    assert_eq!(union.cells.len(), 3);
}

#[test]
fn menelaus_split_on_the_hypotenuse() {
    // y = (1/2,1/2) = (3/4)a + (1/4)b
    let tri = triangle_h();
    let x = point(&[(1, 4), (1, 4)]);
    let y = point(&[(1, 2), (1, 2)]);
    let (a, b, eta) = (point(&[(5, 8), (3, 8)]), point(&[(1, 8), (7, 8)]), rat(1, 4));
    assert_eq!(a.lerp(&b, &eta), y);
    let cert = EpsCertificate::new(x, y, int(1)).unwrap();
    let out = menelaus_split(&tri, &cert, &a, &b, &eta).unwrap();
    for c in [&out.a, &out.b] {
        assert!(in_h(&tri, &c.base) && in_h(&tri, &c.target) && in_h(&tri, &c.step_point()));
    }
    let e = int(1);
    assert_eq!(out.a.eps, &e * (Rat::one() - &eta) / (Rat::one() + &e * &eta));
}

#[test]
fn menelaus_worked_coefficients() {
    let tri = triangle_h();
    let x = point(&[(1, 4), (1, 4)]);
    let c = |y: &[(i64, i64)], e: i64| EpsCertificate::new(x.clone(), point(y), int(e)).unwrap();
    let (a, b, half) = (&[(1, 8), (1, 4)], &[(3, 8), (1, 4)], rat(1, 2));
    let split = menelaus_split(&tri, &c(&[(1, 4), (1, 4)], 1), &point(a), &point(b), &half).unwrap();
    // ε_a = ε(1−η)/(1+εη), ξ_a = ε_a
    assert_eq!((split.a.eps.clone(), split.xi_a.clone()), (rat(1, 3), rat(1, 3)));
    let join_oracle = |ea: Rat, eb: Rat| {
        let e = &ea * &eb / ((Rat::one() - &half) * &eb + &half * &ea);
        let xi = &half * &e / &eb;
        (e, xi)
    };
    let sym = menelaus_join(&tri, &c(a, 1), &c(b, 1), &half).unwrap();
    assert_eq!((sym.cert.eps.clone(), sym.xi.clone()), join_oracle(int(1), int(1)));
    assert_eq!((sym.cert.eps, sym.xi), (int(1), rat(1, 2)));
    let skew = menelaus_join(&tri, &c(a, 1), &c(b, 2), &half).unwrap();
    assert_eq!((skew.cert.eps.clone(), skew.xi.clone()), join_oracle(int(1), int(2)));
    assert_eq!((skew.cert.eps, skew.xi), (rat(4, 3), rat(1, 3)));
}

#[test]
fn affine_combination_steps_stay_inside() {
    assert_eq!(affine_comb_eps(&[int(1), int(2)], &[rat(1, 2), rat(-1, 2)]).unwrap(), int(1));
    assert_eq!(affine_comb_eps(&[int(4), int(4)], &[int(2), int(-2)]).unwrap(), rat(1, 4));
    assert!(affine_comb_eps(&[int(1)], &[int(0)]).is_err());

    let sq = unit_square_h();
    let x = point(&[(1, 2), (1, 2)]);
    let ys = [Vector::from_ints(&[0, 0]), Vector::from_ints(&[1, 0]), point(&[(1, 4), (3, 4)])];
    let eps: Vec<Rat> = ys.iter().map(|y| ratio_test(&sq, &x, &(&x - y)).unwrap()).collect();
    let alpha = [int(1), rat(-1, 2), rat(-1, 2)];
    let e = affine_comb_eps(&eps, &alpha).unwrap();
    let w = ys.iter().zip(&alpha).fold(Vector::zeros(2), |acc, (y, a)| acc.axpy(a, y));
    assert!(in_h(&sq, &x.axpy(&e, &w)) && in_h(&sq, &x.axpy(&-&e, &w)));
}

#[test]
fn hull_mix_branches_match_their_formulas() {
    let k1 = VPolytope::new(vec![Vector::from_ints(&[0, 0]), Vector::from_ints(&[2, 0])]).unwrap();
    let k2 = VPolytope::new(vec![Vector::from_ints(&[0, 2]), Vector::from_ints(&[2, 2])]).unwrap();
    let c1 = EpsCertificate::new(Vector::from_ints(&[1, 0]), point(&[(1, 2), (0, 1)]), int(1)).unwrap();
    let c2 = EpsCertificate::new(Vector::from_ints(&[1, 2]), point(&[(3, 2), (2, 1)]), int(1)).unwrap();
    let half = rat(1, 2);
    let one = Rat::one();
    for (mu, branch) in [(half.clone(), None), (int(0), Some(MixBranch::Lower)), (int(1), Some(MixBranch::Upper))] {
        let out = hull_mix(&k1, &k2, &c1, &c2, &half, &mu).unwrap();
        // ε = 1, λ = 1/2
        let (nu, eta) = if mu <= half {
            let nu = &one - &mu + (&half - &mu);
            let eta = (&one - &half) / &nu;
            (nu, eta)
        } else {
            let nu = &mu + (&mu - &half);
            let eta = &half / &nu;
            (nu, eta)
        };
        assert_eq!((out.nu.clone(), out.cert.eps.clone()), (nu, eta));
        if let Some(b) = branch {
            assert_eq!(out.branch, b);
            assert_eq!((out.nu, out.cert.eps), (rat(3, 2), rat(1, 3)));
        } else {
            assert_eq!((out.nu, out.cert.eps), (rat(1, 2), int(1)));
        }
    }
}

fn geo(r: Rat) -> PmfFamily {
    PmfFamily::geometric(r).unwrap()
}

fn pow(s: Rat) -> PmfFamily {
    PmfFamily::power(s).unwrap()
}

#[test]
fn geometric_ratio_peaks_at_one() {
    let (q, p) = (geo(rat(1, 3)), geo(rat(1, 2)));
    // q(n)/p(n) = 2·3^{−n} / 2^{−n} = 2(2/3)^n
    let oracle = |n: i32| int(2) * rat(2, 3).pow(n);
    for n in 1..30 {
        assert!(oracle(n + 1) < oracle(n));
        assert_eq!(q.mass(n as u64).exact_value().unwrap() / p.mass(n as u64).exact_value().unwrap(), oracle(n));
    }
    let v = ratio_analysis(&q, &p).unwrap();
    let v = v.verdict().unwrap();
    let SupBound::Finite { bound, attained_at, .. } = &v.sup else { panic!("sup should be finite") };
    assert_eq!((bound.exact_value(), *attained_at), (Some(&oracle(1)), 1));
    assert_eq!(oracle(1), rat(4, 3));
    assert!(matches!(v.inf, InfBound::Zero { .. }));
}

#[test]
fn power_pairs_compare_by_exponent() {
    let v = ratio_analysis(&pow(int(3)), &pow(int(2))).unwrap();
    let v = v.verdict().unwrap();
    assert!(v.sup_is_finite() && !v.inf_is_positive());
    // p_3(n)/p_2(n) ∝ 1/n: the value at n = 1 dominates every later index
    let first = facekit::pmf::ratio_at(&pow(int(3)), &pow(int(2)), 1);
    let later = facekit::pmf::ratio_at(&pow(int(3)), &pow(int(2)), 10);
    assert!(later.hi < first.lo);
    let ten = first.scale(&rat(1, 10));
    assert!(ten.lo <= later.hi && later.lo <= ten.hi);
}

#[test]
fn face_and_interior_membership_examples() {
    let p = geo(rat(1, 2));
    let e1 = PmfFamily::point_mass(1);
    let t = pmf_face_contains(&p, &e1).unwrap();
    assert!(t.member);
    let SupBound::Finite { bound, .. } = &t.analysis.verdict().unwrap().sup else { panic!() };
    // e_1(1)/p(1) = 1/(1/2)
    assert_eq!(bound.exact_value(), Some(&int(2)));
    assert!(!pmf_face_contains(&p, &PmfFamily::hall_of(p.clone())).unwrap().member);

    let shifted = PmfFamily::geometric_with_head(rat(1, 2), vec![rat(3, 4)]).unwrap();
    for n in 2..20u64 {
        let ratio = shifted.mass(n).exact_value().unwrap() / p.mass(n).exact_value().unwrap();
        assert_eq!(ratio, rat(1, 2));
    }
    assert!(pmf_rai_contains(&p, &shifted).unwrap());
    assert!(!pmf_rai_contains(&p, &geo(rat(1, 3))).unwrap());
}

#[test]
fn chain_membership_examples() {
    assert!(!chain_face_contains(&int(2), &pow(int(2))).unwrap());
    assert!(chain_face_contains(&int(2), &pow(int(3))).unwrap());
}

#[test]
fn halving_truncations_are_two_to_the_one_minus_k() {
    let p = geo(rat(1, 2));
    for k in 1..=12u64 {
        // ‖p − p_k‖₁ = r_{k+1} (lost tail) + r_{k+1} (mass moved to k)
        let head = (1..=k).fold(Rat::zero(), |s, n| s + rat(1, 1 << n));
        let oracle = int(2) * (Rat::one() - head);
        assert_eq!(oracle, rat(2, 1 << k));
        assert_eq!(truncation_distance(&p, k).exact_value(), Some(&oracle));
        let tk = PmfFamily::truncation(p.clone(), k).unwrap();
        assert_eq!(tv_distance(&p, &tk).unwrap().exact(), Some(&oracle));
    }
}

fn measure(atoms: &[(&[i64], Rat)]) -> AtomicMeasure {
    AtomicMeasure::new(atoms.iter().map(|(l, w)| Atom { loc: Vector::from_ints(l), w: w.clone() }).collect()).unwrap()
}

#[test]
fn measure_means_and_cores() {
    let mu = measure(&[(&[0], rat(3, 4)), (&[1], rat(1, 4))]);
    assert_eq!(mu.mean(), point(&[(1, 4)]));
    let two = measure(&[(&[0], rat(1, 2)), (&[1], rat(1, 2))]);
    let mut core: Vec<Rat> = two.convex_core().vertices().iter().map(|v| v.0[0].clone()).collect();
    core.sort();
    assert_eq!(core, [int(0), int(1)]);
    let three = measure(&[(&[0, 0], rat(1, 3)), (&[1, 0], rat(1, 3)), (&[0, 1], rat(1, 3))]);
    assert_eq!(enumerate_faces(&three.convex_core()).unwrap().len(), 7);
}

#[test]
fn density_witnesses_on_the_unit_interval() {
    let mu = measure(&[(&[0], rat(1, 2)), (&[1], rat(1, 2))]);
    let w = [rat(1, 2), rat(1, 2)];
    for (a, interior) in [(rat(1, 4), true), (int(0), false)] {
        // the only reweighting with mean a is (1 − a, a)
        let lambda = [&Rat::one() - &a, a.clone()];
        let bound = lambda.iter().zip(&w).map(|(l, w)| l / w).max().unwrap();
        let CcVerdict::Inside { witness } = cc_contains(&mu, &Vector(vec![a.clone()])).unwrap() else { panic!() };
        assert_eq!(witness.weights, lambda.to_vec());
        assert_eq!(witness.density_bound, bound);
        assert_eq!(rai_cc_contains(&mu, &Vector(vec![a])).unwrap(), interior);
    }
    let CcVerdict::Inside { witness } = cc_contains(&mu, &point(&[(1, 4)])).unwrap() else { panic!() };
    assert_eq!(witness.density_bound, rat(3, 2));
    assert!(!cc_contains(&mu, &Vector::from_ints(&[2])).unwrap().is_inside());
}

#[test]
fn degenerate_generation_is_a_planar_segment() {
    let req = PolytopeRequest { dim: 2, shape: Shape::V { n_vertices: 4 }, degenerate: Some(true) };
    let body = gen_polytope(2, &req).unwrap();
    assert_eq!(body, gen_polytope(2, &req).unwrap());
    let v = body.as_v().unwrap();
    // every difference vector is parallel to the first
    let d0 = &v.vertices()[1] - &v.vertices()[0];
    for p in &v.vertices()[2..] {
        let d = p - &v.vertices()[0];
        assert!((&d.0[0] * &d0.0[1] - &d.0[1] * &d0.0[0]).is_zero());
    }
    assert_eq!(affine_hull(v.vertices()).unwrap().dim(), 1);
    assert!(gen_polytope(2, &PolytopeRequest { dim: 9, ..req }).is_err());
}

#[test]
fn face_contains_matches_vertex_membership() {
    let k = ConvexBody::H(triangle_h());
    let face = face_of_point(&k, &point(&[(1, 2), (0, 1)])).unwrap();
    for (v, inside) in triangle_v().vertices().iter().zip([true, true, false]) {
        assert_eq!(face_contains(&k, &face, v).unwrap(), inside);
    }
}

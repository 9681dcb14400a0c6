//! Density-ratio analysis `q(n)/p(n)` on `spt(p)` and the face tests built on
//! it: `q ∈ F(p)` iff the ratio is bounded, `q ∈ rai F(p)` iff it is in
//! addition bounded away from zero.
//!
//! Boolean verdicts come from exact tail arguments (exponent and ratio
//! comparisons, monotonicity of tail sums). Interval enclosures only supply
//! the reported bound values and the witnesses.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::enclosure::Interval;
use super::family::{PmfFamily, Support, TailShape};
use crate::error::{Error, Result};
use crate::rational::{int, rat, serde_rat, Rat};

/// Number of leading indices on which a finite bound is re-checked.
pub const PROBE_INDICES: u64 = 1000;
/// Random finite sets used for the `λ(A) ≤ c μ(A)` spot check.
pub const SPOT_CHECK_SETS: usize = 100;
/// Spot-check sets are drawn from `{1, …, SPOT_CHECK_RANGE}`.
pub const SPOT_CHECK_RANGE: u64 = 64;
const SPOT_CHECK_SEED: u64 = 0x5e_ed0f_5e75;
/// Divergence and vanishing witnesses cross these thresholds (and their
/// reciprocals).
pub const WITNESS_THRESHOLDS: [i64; 3] = [10, 100, 1000];
const SEARCH_CAP: u64 = 1 << 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Increasing,
    Decreasing,
    Constant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Limit {
    Zero,
    Infinite,
    Value { value: Interval },
}

/// The exact argument establishing the tail behavior.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailArgument {
    /// `q = p`.
    Identical,
    /// `q(n) = 0` beyond a finite index.
    EventuallyZero,
    /// `(A r^n)/(B s^n)`: compare `r` with `s`.
    GeometricRatio,
    /// `n^{t-s}` up to constants: compare exponents.
    PowerExponent,
    /// `r^n n^s` decreases once `r ((n+1)/n)^s < 1`.
    GeometricOverPower,
    /// Reciprocal of the previous case.
    PowerOverGeometric,
    /// `p_H(n)/p(n) = 1/(√r_n + √r_{n+1})` with `r_n ↓ 0`.
    HallOverInner,
    /// `p(n)/p_H(n) = √r_n + √r_{n+1} ↓ 0`.
    InnerOverHall,
}

/// Monotone behavior of `q(n)/p(n)` for all `n ≥ from`, all of which lie in
/// `spt(p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailBehavior {
    pub from: u64,
    pub trend: Trend,
    pub limit: Limit,
    pub argument: TailArgument,
}

/// `(n, q(n)/p(n))` crossing `threshold`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: u64,
    pub ratio: Interval,
    #[serde(with = "serde_rat")]
    pub threshold: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divergence {
    pub from: u64,
    pub argument: TailArgument,
    pub checkpoints: Vec<Checkpoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SupBound {
    Finite { bound: Interval, attained_at: u64, argument: Option<TailArgument> },
    Infinite { witness: Divergence },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InfBound {
    Positive { bound: Interval, attained_at: u64, argument: Option<TailArgument> },
    Zero { witness: Divergence },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioVerdict {
    pub sup: SupBound,
    pub inf: InfBound,
    pub tail: Option<TailBehavior>,
    /// Indices of `spt(p) ∩ [1, 1000]` on which a finite sup was re-checked.
    pub probed: u64,
}

impl RatioVerdict {
    pub fn sup_is_finite(&self) -> bool {
        matches!(self.sup, SupBound::Finite { .. })
    }

    pub fn inf_is_positive(&self) -> bool {
        matches!(self.inf, InfBound::Positive { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum RatioOutcome {
    /// Some `n ∈ spt(q) \ spt(p)`.
    NotAbsContinuous { witness: u64 },
    Verdict(RatioVerdict),
}

impl RatioOutcome {
    pub fn verdict(&self) -> Option<&RatioVerdict> {
        match self {
            RatioOutcome::Verdict(v) => Some(v),
            RatioOutcome::NotAbsContinuous { .. } => None,
        }
    }
}

fn unsupported(q: &PmfFamily, p: &PmfFamily) -> Error {
    Error::UnsupportedPair(format!("{} over {}", q.label(), p.label()))
}

fn is_hall_of(h: &PmfFamily, inner: &PmfFamily) -> bool {
    matches!(h, PmfFamily::HallOf { inner: i } if **i == *inner)
}

/// `q(n)/p(n)` for `n ∈ spt(p)`. Hall pairs use the tail-sum closed form.
pub fn ratio_at(q: &PmfFamily, p: &PmfFamily, n: u64) -> Interval {
    if q == p {
        return Interval::exact(Rat::one());
    }
    let root_sum = |x: &PmfFamily| x.tail(n).sqrt().add(&x.tail(n + 1).sqrt());
    if is_hall_of(q, p) {
        return Interval::exact(Rat::one()).div(&root_sum(p)).round();
    }
    if is_hall_of(p, q) {
        return root_sum(q).round();
    }
    let num = q.mass(n);
    if num.exact_value().is_some_and(Zero::is_zero) {
        return num;
    }
    num.div(&p.mass(n)).round()
}

/// Smallest `n ≥ start` with `r^b (n+1)^a < n^a`, where `s = a/b`: from there
/// on `r^n n^s` strictly decreases.
fn geometric_power_crossover(r: &Rat, s: &Rat, start: u64) -> u64 {
    let a = s.numer().to_u32().expect("small exponent");
    let b = s.denom().to_u32().expect("small exponent");
    let rb = num_traits::pow(r.clone(), b as usize);
    let holds = |n: u64| {
        let n = BigInt::from(n);
        let lhs = &rb * Rat::from(num_traits::pow(&n + 1, a as usize));
        lhs < Rat::from(num_traits::pow(n, a as usize))
    };
    let start = start.max(1);
    if holds(start) {
        return start;
    }
    let (mut lo, mut hi) = (start, start.saturating_mul(2));
    while !holds(hi) {
        lo = hi;
        hi = hi.saturating_mul(2);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Exact tail argument for `q(n)/p(n)`, or an error if the pair has none.
/// Requires `spt(p)` infinite.
pub fn tail_behavior(q: &PmfFamily, p: &PmfFamily) -> Result<TailBehavior> {
    let p_from = p.support().from.ok_or_else(|| unsupported(q, p))?;
    let tb = |from: u64, trend, limit, argument| TailBehavior { from: from.max(p_from), trend, limit, argument };
    if q == p {
        return Ok(tb(p_from, Trend::Constant, Limit::Value { value: Interval::exact(Rat::one()) }, TailArgument::Identical));
    }
    if is_hall_of(q, p) {
        return Ok(tb(p_from, Trend::Increasing, Limit::Infinite, TailArgument::HallOverInner));
    }
    if is_hall_of(p, q) {
        return Ok(tb(p_from, Trend::Decreasing, Limit::Zero, TailArgument::InnerOverHall));
    }
    match (q.tail_shape(), p.tail_shape()) {
        (TailShape::Zero { last }, _) => Ok(tb(
            last + 1,
            Trend::Constant,
            Limit::Value { value: Interval::zero() },
            TailArgument::EventuallyZero,
        )),
        (
            TailShape::Geometric { ratio: r1, coeff: a1, from: f1 },
            TailShape::Geometric { ratio: r2, coeff: a2, from: f2 },
        ) => {
            let from = f1.max(f2);
            Ok(match r1.cmp(&r2) {
                std::cmp::Ordering::Less => tb(from, Trend::Decreasing, Limit::Zero, TailArgument::GeometricRatio),
                std::cmp::Ordering::Greater => tb(from, Trend::Increasing, Limit::Infinite, TailArgument::GeometricRatio),
                std::cmp::Ordering::Equal => tb(
                    from,
                    Trend::Constant,
                    Limit::Value { value: Interval::exact(a1 / a2) },
                    TailArgument::GeometricRatio,
                ),
            })
        }
        (TailShape::Power { exponent: s }, TailShape::Power { exponent: t }) => Ok(match s.cmp(&t) {
            std::cmp::Ordering::Greater => tb(1, Trend::Decreasing, Limit::Zero, TailArgument::PowerExponent),
            std::cmp::Ordering::Less => tb(1, Trend::Increasing, Limit::Infinite, TailArgument::PowerExponent),
            std::cmp::Ordering::Equal => tb(
                1,
                Trend::Constant,
                Limit::Value { value: Interval::exact(Rat::one()) },
                TailArgument::PowerExponent,
            ),
        }),
        (TailShape::Geometric { ratio, from, .. }, TailShape::Power { exponent }) => {
            let n0 = geometric_power_crossover(&ratio, &exponent, from.max(p_from));
            Ok(tb(n0, Trend::Decreasing, Limit::Zero, TailArgument::GeometricOverPower))
        }
        (TailShape::Power { exponent }, TailShape::Geometric { ratio, from, .. }) => {
            let n0 = geometric_power_crossover(&ratio, &exponent, from.max(p_from));
            Ok(tb(n0, Trend::Increasing, Limit::Infinite, TailArgument::PowerOverGeometric))
        }
        _ => Err(unsupported(q, p)),
    }
}

/// Indices `≥ start` where the monotone ratio first certifiably crosses each
/// threshold (`> T` when `upward`, `< 1/T` otherwise), found by doubling.
/// Thresholds not crossed below the search cap are dropped; the tail
/// argument carries the proof, so at least the first one must be crossed.
fn crossing_witness(q: &PmfFamily, p: &PmfFamily, start: u64, upward: bool, arg: TailArgument) -> Result<Divergence> {
    let mut n = start.max(1);
    let mut checkpoints = Vec::new();
    'thresholds: for t in WITNESS_THRESHOLDS {
        let threshold = if upward { int(t) } else { rat(1, t) };
        loop {
            let r = ratio_at(q, p, n);
            let crossed = if upward { r.lo > threshold } else { r.hi < threshold };
            if crossed {
                checkpoints.push(Checkpoint { n, ratio: r, threshold });
                break;
            }
            if n >= SEARCH_CAP {
                break 'thresholds;
            }
            n = n.saturating_mul(2);
        }
    }
    if checkpoints.is_empty() {
        return Err(Error::NoTailBound(format!(
            "{} over {}: threshold {} not certified below index {SEARCH_CAP}",
            q.label(),
            p.label(),
            WITNESS_THRESHOLDS[0]
        )));
    }
    Ok(Divergence { from: start, argument: arg, checkpoints })
}

fn zero_witness(n: u64, ratio: Interval) -> Divergence {
    Divergence {
        from: n,
        argument: TailArgument::EventuallyZero,
        checkpoints: vec![Checkpoint { n, ratio, threshold: Rat::zero() }],
    }
}

/// Running extremes over explicitly evaluated indices.
#[derive(Default)]
struct Extremes {
    max: Option<(u64, Interval)>,
    min: Option<(u64, Interval)>,
}

impl Extremes {
    fn push(&mut self, n: u64, r: Interval) {
        if self.max.as_ref().is_none_or(|(_, m)| r.hi > m.hi) {
            self.max = Some((n, r.clone()));
        }
        if self.min.as_ref().is_none_or(|(_, m)| r.lo < m.lo) {
            self.min = Some((n, r));
        }
    }

    /// `[max lo, max hi]` encloses the maximum; the index has the largest `hi`.
    fn sup(&self, all: &[(u64, Interval)]) -> (u64, Interval) {
        let (n, _) = self.max.clone().expect("nonempty");
        let bound = all.iter().skip(1).fold(all[0].1.clone(), |acc, (_, r)| acc.max(r));
        (n, bound)
    }

    fn inf(&self, all: &[(u64, Interval)]) -> (u64, Interval) {
        let (n, _) = self.min.clone().expect("nonempty");
        let bound = all.iter().skip(1).fold(all[0].1.clone(), |acc, (_, r)| acc.min(r));
        (n, bound)
    }
}

fn summarize(values: &[(u64, Interval)]) -> Extremes {
    let mut e = Extremes::default();
    for (n, r) in values {
        e.push(*n, r.clone());
    }
    e
}

fn inf_from_values(values: &[(u64, Interval)], argument: Option<TailArgument>) -> Result<InfBound> {
    if let Some((n, r)) = values.iter().find(|(_, r)| r.exact_value().is_some_and(Zero::is_zero)) {
        return Ok(InfBound::Zero { witness: zero_witness(*n, r.clone()) });
    }
    let (n, bound) = summarize(values).inf(values);
    if !bound.certainly_positive() {
        return Err(Error::NoTailBound(format!("ratio at {n} not certified positive")));
    }
    Ok(InfBound::Positive { bound, attained_at: n, argument })
}

/// Exact sup/inf verdict for `q(n)/p(n)` over `spt(p)`.
pub fn ratio_analysis(q: &PmfFamily, p: &PmfFamily) -> Result<RatioOutcome> {
    let (sq, sp) = (q.support(), p.support());
    if let Some(w) = sq.first_outside(&sp) {
        return Ok(RatioOutcome::NotAbsContinuous { witness: w });
    }
    let verdict = if sp.is_finite() {
        let values: Vec<(u64, Interval)> = sp.points.iter().map(|&n| (n, ratio_at(q, p, n))).collect();
        let (n, bound) = summarize(&values).sup(&values);
        RatioVerdict {
            sup: SupBound::Finite { bound, attained_at: n, argument: None },
            inf: inf_from_values(&values, None)?,
            tail: None,
            probed: 0,
        }
    } else {
        let tail = tail_behavior(q, p)?;
        let anchor = sp.next_at_or_after(tail.from).expect("infinite support");
        let mut values: Vec<(u64, Interval)> = sp.below(tail.from).into_iter().map(|n| (n, ratio_at(q, p, n))).collect();
        values.push((anchor, ratio_at(q, p, anchor)));
        let arg = Some(tail.argument);
        let (sup, inf) = match (&tail.trend, &tail.limit) {
            (Trend::Increasing, Limit::Infinite) => {
                let witness = crossing_witness(q, p, anchor, true, tail.argument)?;
                (SupBound::Infinite { witness }, inf_from_values(&values, arg)?)
            }
            (Trend::Decreasing, Limit::Zero) => {
                let (n, bound) = summarize(&values).sup(&values);
                let witness = crossing_witness(q, p, anchor, false, tail.argument)?;
                (SupBound::Finite { bound, attained_at: n, argument: arg }, InfBound::Zero { witness })
            }
            (Trend::Constant, Limit::Value { .. }) => {
                let (n, bound) = summarize(&values).sup(&values);
                (SupBound::Finite { bound, attained_at: n, argument: arg }, inf_from_values(&values, arg)?)
            }
            _ => return Err(unsupported(q, p)),
        };
        RatioVerdict { sup, inf, tail: Some(tail), probed: 0 }
    };
    let mut verdict = verdict;
    if let SupBound::Finite { bound, .. } = &verdict.sup {
        let (probed, bad) = probe_dominance(q, p, &bound.hi, PROBE_INDICES);
        if let Some(n) = bad {
            return Err(Error::CertificateRejected(format!("ratio bound exceeded at index {n}")));
        }
        verdict.probed = probed;
    }
    Ok(RatioOutcome::Verdict(verdict))
}

/// Checks `q(n)/p(n) ≤ c` on `spt(p) ∩ [1, limit]`. A violation is reported
/// only when certified (`lo > c`). Returns the number of probed indices and
/// the first violation.
pub fn probe_dominance(q: &PmfFamily, p: &PmfFamily, c: &Rat, limit: u64) -> (u64, Option<u64>) {
    let sp = p.support();
    let mut probed = 0;
    for n in 1..=limit {
        if !sp.contains(n) {
            continue;
        }
        probed += 1;
        if &ratio_at(q, p, n).lo > c {
            return (probed, Some(n));
        }
    }
    (probed, None)
}

/// Outcome of the `λ(A) ≤ c μ(A)` spot check on random finite sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpotCheck {
    pub sets: usize,
    pub violations: usize,
}

/// Draws [`SPOT_CHECK_SETS`] subsets of `{1, …, 64}` and counts those where
/// `q(A) > c p(A)` is certified.
pub fn spot_check(q: &PmfFamily, p: &PmfFamily, c: &Rat) -> SpotCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(SPOT_CHECK_SEED);
    let mut violations = 0;
    for _ in 0..SPOT_CHECK_SETS {
        let size = rng.gen_range(1..=8);
        let set: std::collections::BTreeSet<u64> = (0..size).map(|_| rng.gen_range(1..=SPOT_CHECK_RANGE)).collect();
        let (mut q_lo, mut p_hi) = (Rat::zero(), Rat::zero());
        for &n in &set {
            q_lo += q.mass(n).lo;
            p_hi += p.mass(n).hi;
        }
        if q_lo > c * p_hi {
            violations += 1;
        }
    }
    SpotCheck { sets: SPOT_CHECK_SETS, violations }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceTest {
    pub member: bool,
    pub analysis: RatioOutcome,
    pub spot_check: Option<SpotCheck>,
}

/// `q ∈ F(p)`: absolutely continuous with bounded density ratio.
pub fn pmf_face_contains(p: &PmfFamily, q: &PmfFamily) -> Result<FaceTest> {
    let analysis = ratio_analysis(q, p)?;
    let bound = match analysis.verdict().map(|v| &v.sup) {
        Some(SupBound::Finite { bound, .. }) => Some(bound.hi.clone()),
        _ => None,
    };
    let spot_check = bound.as_ref().map(|c| spot_check(q, p, c));
    if spot_check.as_ref().is_some_and(|s| s.violations > 0) {
        return Err(Error::CertificateRejected("density bound fails on a finite set".into()));
    }
    Ok(FaceTest { member: bound.is_some(), analysis, spot_check })
}

/// `q ∈ rai F(p)`, decided symmetrically as `q ∈ F(p) ∧ p ∈ F(q)`.
pub fn pmf_rai_contains(p: &PmfFamily, q: &PmfFamily) -> Result<bool> {
    let forward = pmf_face_contains(p, q)?;
    if !forward.member {
        return Ok(false);
    }
    let backward = pmf_face_contains(q, p)?;
    let inf_positive = forward.analysis.verdict().is_some_and(RatioVerdict::inf_is_positive);
    if backward.member != inf_positive {
        return Err(Error::CertificateRejected(
            "two-sided density bound disagrees with the reverse face test".into(),
        ));
    }
    Ok(backward.member)
}

/// `q ∈ F_t = ⋃_{s>t} F(p_s)`. Decided for power, geometric and finitely
/// supported `q`; `F_t` has empty relative algebraic interior, so no
/// interior query is offered.
pub fn chain_face_contains(t: &Rat, q: &PmfFamily) -> Result<bool> {
    if *t < Rat::one() {
        return Err(Error::Precondition("chain index t must be at least 1".into()));
    }
    match q {
        // p_u ∈ F(p_s) iff u ≥ s, and some s ∈ (t, u] exists iff u > t
        PmfFamily::Power { exponent } => Ok(exponent > t),
        PmfFamily::HallOf { .. } if !q.support().is_finite() => Err(Error::UnsupportedPair(format!(
            "chain membership of {}",
            q.label()
        ))),
        // faster-than-power tails lie in every F(p_s)
        _ => {
            let s = PmfFamily::power(t + Rat::one())?;
            Ok(pmf_face_contains(&s, q)?.member)
        }
    }
}

/// `I(F(p)) = spt(p)`: the norm closure of `F(p)` is `Δ_{spt(p)}`.
pub fn face_closure(p: &PmfFamily) -> Support {
    p.support()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geo(r: Rat) -> PmfFamily {
        PmfFamily::geometric(r).unwrap()
    }

    fn pow(s: Rat) -> PmfFamily {
        PmfFamily::power(s).unwrap()
    }

    #[test]
    fn geometric_pair_sup_at_one() {
        // q(n) = 2·3^{-n}, p(n) = 2^{-n}: ratio 2(2/3)^n decreases
        let v = ratio_analysis(&geo(rat(1, 3)), &geo(rat(1, 2))).unwrap();
        let v = v.verdict().unwrap();
        let SupBound::Finite { bound, attained_at, .. } = &v.sup else { panic!() };
        assert_eq!(bound, &Interval::exact(rat(4, 3)));
        assert_eq!(*attained_at, 1);
        let InfBound::Zero { witness } = &v.inf else { panic!() };
        assert_eq!(witness.checkpoints.len(), 3);
        assert!(witness.checkpoints.iter().all(|c| c.ratio.hi < c.threshold));
        assert_eq!(v.probed, PROBE_INDICES);
    }

    #[test]
    fn identical_and_power_pairs() {
        let p = geo(rat(1, 2));
        let v = ratio_analysis(&p, &p).unwrap();
        let v = v.verdict().unwrap();
        assert!(matches!(&v.sup, SupBound::Finite { bound, .. } if bound == &Interval::exact(Rat::one())));
        assert!(matches!(&v.inf, InfBound::Positive { bound, .. } if bound == &Interval::exact(Rat::one())));
        let v = ratio_analysis(&pow(int(3)), &pow(int(2))).unwrap();
        let v = v.verdict().unwrap();
        assert!(v.sup_is_finite() && !v.inf_is_positive());
        assert_eq!(v.tail.as_ref().unwrap().argument, TailArgument::PowerExponent);
    }

    #[test]
    fn face_examples() {
        let g = geo(rat(1, 2));
        assert!(pmf_face_contains(&g, &PmfFamily::point_mass(1)).unwrap().member);
        assert!(pmf_face_contains(&pow(int(2)), &pow(int(3))).unwrap().member);
        assert!(!pmf_face_contains(&pow(int(3)), &pow(int(2))).unwrap().member);
        let hall = pmf_face_contains(&g, &PmfFamily::hall_of(g.clone())).unwrap();
        assert!(!hall.member);
        let Some(RatioVerdict { sup: SupBound::Infinite { witness }, .. }) = hall.analysis.verdict() else { panic!() };
        assert!(witness.checkpoints.iter().all(|c| c.ratio.lo > c.threshold));
        let outside = pmf_face_contains(&PmfFamily::point_mass(1), &g).unwrap();
        assert_eq!(outside.analysis, RatioOutcome::NotAbsContinuous { witness: 2 });
    }

    #[test]
    fn rai_examples() {
        let g = geo(rat(1, 2));
        let shifted = PmfFamily::geometric_with_head(rat(1, 2), vec![rat(3, 4)]).unwrap();
        assert!(pmf_rai_contains(&g, &shifted).unwrap());
        assert!(pmf_rai_contains(&shifted, &g).unwrap());
        assert!(!pmf_rai_contains(&g, &geo(rat(1, 3))).unwrap());
        let e1 = PmfFamily::point_mass(1);
        assert!(pmf_rai_contains(&e1, &e1).unwrap());
    }

    #[test]
    fn chain_examples() {
        assert!(chain_face_contains(&int(1), &pow(int(2))).unwrap());
        assert!(!chain_face_contains(&int(2), &pow(int(2))).unwrap());
        assert!(chain_face_contains(&int(2), &pow(int(3))).unwrap());
        assert!(chain_face_contains(&int(2), &geo(rat(1, 2))).unwrap());
        assert!(chain_face_contains(&int(5), &PmfFamily::point_mass(7)).unwrap());
    }

    #[test]
    fn mixed_pairs() {
        // geometric tails sit inside every power face, not conversely
        let g = geo(rat(9, 10));
        assert!(pmf_face_contains(&pow(int(4)), &g).unwrap().member);
        assert!(!pmf_face_contains(&g, &pow(int(4))).unwrap().member);
        let tb = tail_behavior(&g, &pow(int(4))).unwrap();
        // (n+1)/n < (10/9)^{1/4} first holds at n = 38
        assert_eq!(tb.from, 38);
        let h = PmfFamily::hall_of(pow(int(2)));
        assert!(matches!(ratio_analysis(&h, &geo(rat(1, 2))), Err(Error::UnsupportedPair(_))));
    }

    #[test]
    fn closure_supports() {
        assert_eq!(face_closure(&PmfFamily::point_mass(1)).points, [1].into());
        assert_eq!(face_closure(&geo(rat(1, 2))).from, Some(1));
        let f = PmfFamily::finite(&[(2, rat(1, 2)), (5, rat(1, 2))]).unwrap();
        assert_eq!(face_closure(&f).points, [2, 5].into());
    }
}

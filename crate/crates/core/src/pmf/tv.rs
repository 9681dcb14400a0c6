//! Total-variation distance `‖p − q‖₁ = Σ_n |p(n) − q(n)|`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::enclosure::Interval;
use super::family::PmfFamily;
use super::ratio::{ratio_at, tail_behavior, Limit, Trend};
use crate::error::{Error, Result};
use crate::rational::{rat, Rat};

/// Target width of a non-exact enclosure.
pub fn tv_tolerance() -> Rat {
    rat(1, 1_000_000)
}

const PARTIAL_SUM_CAP: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TvRoute {
    /// `p − q` has constant sign from `split`; the tail contributes
    /// `|r_p(split) − r_q(split)|` exactly.
    SignSettled,
    /// Partial sum plus the enclosure `[|r_p − r_q|, r_p + r_q]` of the tail.
    TailEnclosure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TvDistance {
    pub value: Interval,
    pub split: u64,
    pub route: TvRoute,
}

impl TvDistance {
    pub fn exact(&self) -> Option<&Rat> {
        self.value.exact_value()
    }
}

fn head_sum(p: &PmfFamily, q: &PmfFamily, split: u64) -> Interval {
    (1..split).fold(Interval::zero(), |s, n| s.add(&p.mass(n).sub(&q.mass(n)).abs()).round())
}

/// First index from which `p − q` has constant sign, if a tail argument exists.
fn sign_settles(p: &PmfFamily, q: &PmfFamily) -> Option<u64> {
    let last = |x: &PmfFamily| x.support().last();
    if let (Some(a), Some(b)) = (last(p), last(q)) {
        return Some(a.max(b) + 1);
    }
    for (num, den) in [(q, p), (p, q)] {
        let Ok(tb) = tail_behavior(num, den) else { continue };
        match (tb.trend, &tb.limit) {
            (Trend::Constant, Limit::Value { .. }) => return Some(tb.from),
            (Trend::Decreasing, _) | (Trend::Increasing, _) => {
                // ratio is monotone from tb.from and tends away from 1
                let upward = tb.trend == Trend::Increasing;
                let one = Interval::exact(Rat::one());
                let mut n = tb.from.max(1);
                while n < (1 << 40) {
                    let r = ratio_at(num, den, n);
                    let settled = if upward { one.certainly_lt(&r) } else { r.certainly_lt(&one) };
                    if settled {
                        return Some(n);
                    }
                    n *= 2;
                }
            }
            _ => {}
        }
    }
    None
}

/// `‖p − q‖₁`, exact when both families have exact masses and a sign
/// argument applies, otherwise an enclosure of width at most `10⁻⁶`.
pub fn tv_distance(p: &PmfFamily, q: &PmfFamily) -> Result<TvDistance> {
    if p == q {
        return Ok(TvDistance { value: Interval::zero(), split: 1, route: TvRoute::SignSettled });
    }
    if let Some(split) = sign_settles(p, q) {
        let tail = p.tail(split).sub(&q.tail(split)).abs();
        let value = head_sum(p, q, split).add(&tail).round();
        if value.width() <= tv_tolerance() {
            return Ok(TvDistance { value, split, route: TvRoute::SignSettled });
        }
    }
    let mut split = 64;
    while split <= PARTIAL_SUM_CAP {
        let (rp, rq) = (p.tail(split), q.tail(split));
        let tail = Interval::new(rp.sub(&rq).abs().lo, rp.add(&rq).hi);
        let value = head_sum(p, q, split).add(&tail).round();
        if value.width() <= tv_tolerance() {
            return Ok(TvDistance { value, split, route: TvRoute::TailEnclosure });
        }
        split *= 2;
    }
    Err(Error::NoTailBound(format!("{} vs {}", p.label(), q.label())))
}

/// `‖p − p_k‖₁ = 2 r_{k+1}` for the truncation `p_k`.
pub fn truncation_distance(p: &PmfFamily, k: u64) -> Interval {
    p.tail(k + 1).scale(&Rat::from_integer(2.into()))
}

/// Nonnegative, and zero exactly on equal inputs at the exact route.
pub fn is_metric_zero(d: &TvDistance) -> bool {
    d.value.exact_value().is_some_and(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmf::family::halving_truncation_distance;
    use crate::rational::int;

    #[test]
    fn point_masses_are_two_apart() {
        let d = tv_distance(&PmfFamily::point_mass(1), &PmfFamily::point_mass(2)).unwrap();
        assert_eq!(d.exact(), Some(&int(2)));
    }

    #[test]
    fn truncations_of_halving_geometric() {
        let p = PmfFamily::geometric(rat(1, 2)).unwrap();
        for k in 1..=20u64 {
            let pk = PmfFamily::truncation(p.clone(), k).unwrap();
            let d = tv_distance(&p, &pk).unwrap();
            assert_eq!(d.exact(), Some(&halving_truncation_distance(k as u32)), "k={k}");
            assert_eq!(truncation_distance(&p, k), d.value);
        }
    }

    #[test]
    fn self_distance_and_geometric_pair() {
        let p = PmfFamily::geometric(rat(1, 2)).unwrap();
        assert!(is_metric_zero(&tv_distance(&p, &p).unwrap()));
        // p − q changes sign once: p(1) = 1/2 < 2/3 = q(1), then p > q
        let q = PmfFamily::geometric(rat(1, 3)).unwrap();
        let d = tv_distance(&p, &q).unwrap();
        assert_eq!(d.route, TvRoute::SignSettled);
        // 2(q(1) − p(1)) = 1/3
        assert_eq!(d.exact(), Some(&rat(1, 3)));
    }

    #[test]
    fn power_pair_is_enclosed() {
        let p = PmfFamily::power(int(2)).unwrap();
        let q = PmfFamily::power(int(3)).unwrap();
        let d = tv_distance(&p, &q).unwrap();
        assert!(d.value.width() <= tv_tolerance());
        assert!(d.value.lo > Rat::zero());
    }
}

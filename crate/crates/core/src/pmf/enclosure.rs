//! Certified rational enclosures for the irrational quantities of the pmf
//! families: rational powers `n^{-s}`, square roots of tail sums, and `ζ(s)`.
//!
//! Every interval returned here contains the true value. Decisions are made
//! only on certified comparisons (`hi < lo'`), never on midpoints.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{int, serde_rat, to_f64, Rat};

/// Significant bits kept when rounding an enclosure outward.
pub const PRECISION_BITS: i64 = 128;

/// Number of explicit terms in the `ζ(s)` partial sum; the remainder is
/// enclosed by integral bounds.
pub const ZETA_TERMS: u64 = 512;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "serde_rat")]
    pub lo: Rat,
    #[serde(with = "serde_rat")]
    pub hi: Rat,
}

impl Interval {
    pub fn exact(r: Rat) -> Self {
        Interval { lo: r.clone(), hi: r }
    }

    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn zero() -> Self {
        Interval::exact(Rat::zero())
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn exact_value(&self) -> Option<&Rat> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn scale(&self, c: &Rat) -> Interval {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if c.is_negative() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    /// Quotient by an interval that is certainly positive.
    pub fn div(&self, o: &Interval) -> Interval {
        assert!(o.lo.is_positive(), "divisor not certainly positive");
        let inv = Interval { lo: Rat::one() / &o.hi, hi: Rat::one() / &o.lo };
        self.mul(&inv)
    }

    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            Interval { lo: -&self.hi, hi: -&self.lo }
        } else {
            Interval { lo: Rat::zero(), hi: std::cmp::max(-&self.lo, self.hi.clone()) }
        }
    }

    pub fn max(&self, o: &Interval) -> Interval {
        Interval {
            lo: std::cmp::max(&self.lo, &o.lo).clone(),
            hi: std::cmp::max(&self.hi, &o.hi).clone(),
        }
    }

    pub fn min(&self, o: &Interval) -> Interval {
        Interval {
            lo: std::cmp::min(&self.lo, &o.lo).clone(),
            hi: std::cmp::min(&self.hi, &o.hi).clone(),
        }
    }

    /// Square root of a nonnegative enclosure. Endpoints far wider than
    /// the working precision are rounded outward first.
    pub fn sqrt(&self) -> Interval {
        let wide = |x: &Rat| bitlen(x.numer()).max(bitlen(x.denom())) > 4 * PRECISION_BITS;
        if wide(&self.lo) || wide(&self.hi) {
            let r = Interval { lo: round_dyadic(&self.lo, false), hi: round_dyadic(&self.hi, true) };
            if !wide(&r.lo) && !wide(&r.hi) {
                return r.sqrt();
            }
        }
        let lo = if self.lo.is_positive() { root_bounds(&self.lo, 2).lo } else { Rat::zero() };
        Interval { lo, hi: root_bounds(&self.hi, 2).hi }
    }

    pub fn certainly_lt(&self, o: &Interval) -> bool {
        self.hi < o.lo
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Outward rounding to [`PRECISION_BITS`] significant bits; keeps the
    /// rationals small across long sums. Exact values are left alone.
    pub fn round(&self) -> Interval {
        if self.is_exact() {
            return self.clone();
        }
        Interval { lo: round_dyadic(&self.lo, false), hi: round_dyadic(&self.hi, true) }
    }

    /// Display-only midpoint.
    pub fn approx(&self) -> f64 {
        (to_f64(&self.lo) + to_f64(&self.hi)) / 2.0
    }
}

impl From<Rat> for Interval {
    fn from(r: Rat) -> Self {
        Interval::exact(r)
    }
}

fn bitlen(x: &BigInt) -> i64 {
    x.bits() as i64
}

fn pow2(e: i64) -> Rat {
    let p = Rat::from_integer(BigInt::one() << e.unsigned_abs());
    if e >= 0 {
        p
    } else {
        Rat::one() / p
    }
}

/// `x` rounded down (`up = false`) or up to a dyadic with about
/// [`PRECISION_BITS`] significant bits.
fn round_dyadic(x: &Rat, up: bool) -> Rat {
    if x.is_zero() {
        return Rat::zero();
    }
    let e = bitlen(x.numer()) - bitlen(x.denom());
    let scale = pow2(PRECISION_BITS - e);
    let y = x * &scale;
    let r = if up { y.ceil() } else { y.floor() };
    r / scale
}

/// Enclosure of `x^{1/k}` for rational `x ≥ 0`, relative width about `2^{-PRECISION_BITS}`.
/// Exact when `x` is a perfect `k`-th power.
pub fn root_bounds(x: &Rat, k: u32) -> Interval {
    assert!(!x.is_negative(), "root of a negative number");
    assert!(k >= 1);
    if x.is_zero() || k == 1 {
        return Interval::exact(x.clone());
    }
    let a = x.numer().to_biguint().expect("nonnegative");
    let b = x.denom().to_biguint().expect("positive");
    // x^{1/k} = (a b^{k-1})^{1/k} / b, and a b^{k-1} ≥ 1.
    let m: BigUint = &a * num_traits::pow(b.clone(), (k - 1) as usize);
    let direct = m.nth_root(k);
    let den = BigInt::from_biguint(Sign::Plus, b);
    if num_traits::pow(direct.clone(), k as usize) == m {
        return Interval::exact(Rat::new(BigInt::from_biguint(Sign::Plus, direct), den));
    }
    let shift = PRECISION_BITS as usize;
    let scaled: BigUint = &m << (shift * k as usize);
    let r = scaled.nth_root(k);
    debug_assert!(num_traits::pow(r.clone(), k as usize) <= scaled);
    debug_assert!(num_traits::pow(&r + 1u32, k as usize) > scaled);
    let unit = BigInt::from_biguint(Sign::Plus, BigUint::one() << shift) * &den;
    let r = BigInt::from_biguint(Sign::Plus, r);
    Interval::new(Rat::new(r.clone(), unit.clone()), Rat::new(r + 1, unit))
}

/// Enclosure of `base^exp` for rational `base > 0` and rational `exp`.
pub fn pow_bounds(base: &Rat, exp: &Rat) -> Interval {
    assert!(base.is_positive());
    let p = exp.numer().to_i32().expect("exponent numerator fits i32");
    let q = exp.denom().to_u32().expect("exponent denominator fits u32");
    root_bounds(&base.pow(p), q)
}

/// `n^{-s}`.
pub fn inv_power(n: u64, s: &Rat) -> Interval {
    pow_bounds(&Rat::from_integer(BigInt::from(n)), &-s).round()
}

/// Bounds on `Σ_{m≥n} m^{-s}` for `s > 1`. Convexity of `x^{-s}` gives
/// `∫_n^∞ + n^{-s}/2 ≤ Σ ≤ ∫_{n-1/2}^∞`. Since `f(x) = x^{-s}` is completely
/// monotone, Euler–Maclaurin truncations alternate around the sum:
/// `I + f/2 - f'/12 + f'''/720 ≤ Σ ≤ I + f/2 - f'/12` with `I = n^{1-s}/(s-1)`.
/// The intersection of both enclosures is returned.
pub fn power_tail_integral_bounds(n: u64, s: &Rat) -> Interval {
    assert!(n >= 1 && s > &Rat::one());
    let one = Rat::one();
    let sm1 = s - &one;
    let nn = int(n as i64);
    let integral = pow_bounds(&nn, &(&one - s)).scale(&(&one / &sm1));
    let f = inv_power(n, s);
    let f1 = pow_bounds(&nn, &(-s - &one)).scale(&(s / int(12)));
    let f3 = pow_bounds(&nn, &(-s - int(3))).scale(&(s * (s + &one) * (s + int(2)) / int(720)));
    let em_hi = integral.hi.clone() + &f.hi / int(2) + &f1.hi;
    let em_lo = integral.lo.clone() + &f.lo / int(2) + &f1.lo - &f3.hi;
    let half_back = &nn - Rat::new(BigInt::one(), BigInt::from(2));
    let convex_hi = pow_bounds(&half_back, &(&one - s)).hi / &sm1;
    let convex_lo = integral.lo + f.lo / int(2);
    Interval::new(std::cmp::max(em_lo, convex_lo), std::cmp::min(em_hi, convex_hi)).round()
}

/// Cached enclosures of `m^{-s}` for `m ≤ ZETA_TERMS`, their prefix sums and `ζ(s)`.
#[derive(Debug)]
pub struct PowerTable {
    terms: Vec<Interval>,
    prefix: Vec<Interval>,
    zeta: Interval,
}

impl PowerTable {
    fn build(s: &Rat) -> PowerTable {
        let mut terms = Vec::with_capacity(ZETA_TERMS as usize);
        let mut prefix = vec![Interval::zero()];
        for m in 1..=ZETA_TERMS {
            let t = inv_power(m, s);
            prefix.push(prefix.last().unwrap().add(&t).round());
            terms.push(t);
        }
        let zeta = prefix[ZETA_TERMS as usize]
            .add(&power_tail_integral_bounds(ZETA_TERMS + 1, s))
            .round();
        PowerTable { terms, prefix, zeta }
    }

    pub fn zeta(&self) -> &Interval {
        &self.zeta
    }

    pub fn term(&self, n: u64, s: &Rat) -> Interval {
        if (1..=ZETA_TERMS).contains(&n) {
            self.terms[(n - 1) as usize].clone()
        } else {
            inv_power(n, s)
        }
    }

    /// `Σ_{m≥n} m^{-s}`.
    pub fn tail_sum(&self, n: u64, s: &Rat) -> Interval {
        if n <= ZETA_TERMS {
            self.zeta.sub(&self.prefix[(n.max(1) - 1) as usize]).round()
        } else {
            power_tail_integral_bounds(n, s)
        }
    }
}

/// Process-wide memo of power tables, keyed by exponent.
pub fn power_table(s: &Rat) -> Arc<PowerTable> {
    static TABLES: OnceLock<Mutex<HashMap<Rat, Arc<PowerTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(Default::default);
    if let Some(t) = tables.lock().expect("table lock").get(s) {
        return t.clone();
    }
    let built = Arc::new(PowerTable::build(s));
    tables.lock().expect("table lock").entry(s.clone()).or_insert(built).clone()
}

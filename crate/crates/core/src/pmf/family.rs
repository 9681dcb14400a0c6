//! Closed-form probability mass functions on ℕ = {1, 2, …}.

use std::collections::BTreeSet;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::enclosure::{power_table, Interval};
use crate::error::{Error, Result};
use crate::rational::{fmt_rat, is_strictly_between_0_1, serde_rat, serde_rat_vec, Rat};

/// One atom `(n, p(n))` of a finitely supported pmf; serializes as `[n, "p/q"]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mass(pub u64, #[serde(with = "serde_rat")] pub Rat);

/// A point of the simplex of pmfs on ℕ with an exactly analyzable tail.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PmfRepr", into = "PmfRepr")]
pub enum PmfFamily {
    /// Finitely many atoms, masses positive and summing to one.
    Finite { support: Vec<Mass> },
    /// `p(n) = head[n-1]` for `n ≤ h = head.len()`, then
    /// `T(1-r) r^{n-h-1}` with tail mass `T = 1 - Σ head > 0`.
    /// An empty head gives `(1-r) r^{n-1}`.
    Geometric { ratio: Rat, head: Vec<Rat> },
    /// `p_s(n) = n^{-s} / ζ(s)`, `s > 1`.
    Power { exponent: Rat },
    /// `p_H(n) = p(n) / (√r_n + √r_{n+1})` with tail sums `r_n = Σ_{m≥n} p(m)`.
    HallOf { inner: Box<PmfFamily> },
    /// `p(n)` for `n < k`, the tail sum `r_k` at `n = k`, zero beyond.
    Truncation { inner: Box<PmfFamily>, k: u64 },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum PmfRepr {
    Finite {
        support: Vec<Mass>,
    },
    Geometric {
        #[serde(with = "serde_rat")]
        ratio: Rat,
        #[serde(default, with = "serde_rat_vec", skip_serializing_if = "Vec::is_empty")]
        head: Vec<Rat>,
    },
    Power {
        #[serde(with = "serde_rat")]
        exponent: Rat,
    },
    HallOf {
        inner: Box<PmfFamily>,
    },
    Truncation {
        inner: Box<PmfFamily>,
        k: u64,
    },
}

impl TryFrom<PmfRepr> for PmfFamily {
    type Error = Error;
    fn try_from(r: PmfRepr) -> Result<Self> {
        let p = match r {
            PmfRepr::Finite { support } => PmfFamily::Finite { support },
            PmfRepr::Geometric { ratio, head } => PmfFamily::Geometric { ratio, head },
            PmfRepr::Power { exponent } => PmfFamily::Power { exponent },
            PmfRepr::HallOf { inner } => PmfFamily::HallOf { inner },
            PmfRepr::Truncation { inner, k } => PmfFamily::Truncation { inner, k },
        };
        p.normalized()
    }
}

impl From<PmfFamily> for PmfRepr {
    fn from(p: PmfFamily) -> Self {
        match p {
            PmfFamily::Finite { support } => PmfRepr::Finite { support },
            PmfFamily::Geometric { ratio, head } => PmfRepr::Geometric { ratio, head },
            PmfFamily::Power { exponent } => PmfRepr::Power { exponent },
            PmfFamily::HallOf { inner } => PmfRepr::HallOf { inner },
            PmfFamily::Truncation { inner, k } => PmfRepr::Truncation { inner, k },
        }
    }
}

/// `spt(p)` as a finite set of points together with an optional unbounded
/// range `[from, ∞)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Support {
    pub points: BTreeSet<u64>,
    pub from: Option<u64>,
}

/// `{1, 3}`, `{n ≥ 4}` or `{2} ∪ {n ≥ 5}`.
impl std::fmt::Display for Support {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let pts = self.points.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
        match (self.points.is_empty(), self.from) {
            (_, None) => write!(f, "{{{pts}}}"),
            (true, Some(n)) => write!(f, "{{n ≥ {n}}}"),
            (false, Some(n)) => write!(f, "{{{pts}}} ∪ {{n ≥ {n}}}"),
        }
    }
}

impl Support {
    fn new(points: BTreeSet<u64>, from: Option<u64>) -> Support {
        let points = match from {
            Some(f) => points.into_iter().filter(|&n| n < f).collect(),
            None => points,
        };
        Support { points, from }
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= 1 && (self.points.contains(&n) || self.from.is_some_and(|f| n >= f))
    }

    pub fn is_finite(&self) -> bool {
        self.from.is_none()
    }

    /// Largest point of a finite support.
    pub fn last(&self) -> Option<u64> {
        if self.from.is_some() {
            None
        } else {
            self.points.iter().next_back().copied()
        }
    }

    /// Some element of `self` outside `other`, if any.
    pub fn first_outside(&self, other: &Support) -> Option<u64> {
        if let Some(&n) = self.points.iter().find(|&&n| !other.contains(n)) {
            return Some(n);
        }
        let f = self.from?;
        match other.from {
            None => Some(f.max(other.points.iter().next_back().map_or(1, |m| m + 1))),
            Some(g) => (f..g).find(|&n| !other.points.contains(&n)),
        }
    }

    pub fn is_subset(&self, other: &Support) -> bool {
        self.first_outside(other).is_none()
    }

    /// Support elements in `[1, bound)`.
    pub fn below(&self, bound: u64) -> Vec<u64> {
        (1..bound).filter(|&n| self.contains(n)).collect()
    }

    /// Smallest support element `≥ n`.
    pub fn next_at_or_after(&self, n: u64) -> Option<u64> {
        let p = self.points.range(n..).next().copied();
        let f = self.from.map(|f| f.max(n));
        match (p, f) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// How the normalization `Σ p(n) = 1` is established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Finite sum of the declared masses.
    ExactSum,
    /// Head sum plus the geometric tail mass `T`.
    GeometricClosedForm,
    /// Normalizing by `ζ(s)` is the definition.
    ZetaDefinition,
    /// `Σ_n (√r_n − √r_{n+1}) = √r_1 = 1`.
    HallTelescoping,
    /// Tail mass `r_k` moved onto `k`.
    TruncationTailMass,
}

/// Leading behavior of `p(n)` for large `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TailShape {
    /// `p(n) = 0` for `n > last`.
    Zero { last: u64 },
    /// `p(n) = coeff · ratio^n` for `n ≥ from`.
    Geometric { ratio: Rat, coeff: Rat, from: u64 },
    Power { exponent: Rat },
    Hall { inner: PmfFamily },
}

impl PmfFamily {
    pub fn finite(atoms: &[(u64, Rat)]) -> Result<Self> {
        PmfFamily::Finite { support: atoms.iter().map(|(n, p)| Mass(*n, p.clone())).collect() }.normalized()
    }

    /// `e_n`.
    pub fn point_mass(n: u64) -> Self {
        PmfFamily::finite(&[(n, Rat::one())]).expect("valid point mass")
    }

    pub fn geometric(ratio: Rat) -> Result<Self> {
        PmfFamily::Geometric { ratio, head: Vec::new() }.normalized()
    }

    pub fn geometric_with_head(ratio: Rat, head: Vec<Rat>) -> Result<Self> {
        PmfFamily::Geometric { ratio, head }.normalized()
    }

    pub fn power(exponent: Rat) -> Result<Self> {
        PmfFamily::Power { exponent }.normalized()
    }

    pub fn hall_of(inner: PmfFamily) -> Self {
        PmfFamily::HallOf { inner: Box::new(inner) }
    }

    pub fn truncation(inner: PmfFamily, k: u64) -> Result<Self> {
        PmfFamily::Truncation { inner: Box::new(inner), k }.normalized()
    }

    /// Validates the declared parameters and sorts finite supports.
    fn normalized(self) -> Result<Self> {
        let bad = |m: &str| Err(Error::Invalid(m.to_string()));
        match self {
            PmfFamily::Finite { mut support } => {
                support.sort_by_key(|m| m.0);
                if support.is_empty() {
                    return bad("finite pmf needs at least one atom");
                }
                if support.windows(2).any(|w| w[0].0 == w[1].0) {
                    return bad("repeated atom");
                }
                if support.iter().any(|m| m.0 == 0 || !m.1.is_positive()) {
                    return bad("atoms live on {1, 2, ...} with positive mass");
                }
                if support.iter().fold(Rat::zero(), |s, m| s + &m.1) != Rat::one() {
                    return bad("finite masses must sum to 1");
                }
                Ok(PmfFamily::Finite { support })
            }
            PmfFamily::Geometric { ratio, head } => {
                if !is_strictly_between_0_1(&ratio) {
                    return bad("geometric ratio must lie in (0,1)");
                }
                if head.iter().any(Signed::is_negative) {
                    return bad("negative head mass");
                }
                if !(Rat::one() - head.iter().fold(Rat::zero(), |s, h| s + h)).is_positive() {
                    return bad("head masses must leave a positive tail");
                }
                Ok(PmfFamily::Geometric { ratio, head })
            }
            PmfFamily::Power { exponent } => {
                if exponent <= Rat::one() {
                    return bad("power exponent must exceed 1");
                }
                if exponent.numer().to_i32().is_none() || exponent.denom().to_u32().is_none() {
                    return bad("power exponent too large");
                }
                Ok(PmfFamily::Power { exponent })
            }
            PmfFamily::Truncation { inner, k } => {
                if k == 0 {
                    return bad("truncation index starts at 1");
                }
                Ok(PmfFamily::Truncation { inner, k })
            }
            hall => Ok(hall),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            PmfFamily::Finite { .. } => "finite",
            PmfFamily::Geometric { .. } => "geometric",
            PmfFamily::Power { .. } => "power",
            PmfFamily::HallOf { .. } => "hall_of",
            PmfFamily::Truncation { .. } => "truncation",
        }
    }

    /// Short human-readable name.
    pub fn label(&self) -> String {
        match self {
            PmfFamily::Finite { support } => {
                let atoms: Vec<String> = support.iter().map(|m| format!("{}:{}", m.0, fmt_rat(&m.1))).collect();
                format!("finite{{{}}}", atoms.join(","))
            }
            PmfFamily::Geometric { ratio, head } if head.is_empty() => format!("geometric({})", fmt_rat(ratio)),
            PmfFamily::Geometric { ratio, head } => {
                let h: Vec<String> = head.iter().map(fmt_rat).collect();
                format!("geometric({}; head [{}])", fmt_rat(ratio), h.join(","))
            }
            PmfFamily::Power { exponent } => format!("power({})", fmt_rat(exponent)),
            PmfFamily::HallOf { inner } => format!("hall_of({})", inner.label()),
            PmfFamily::Truncation { inner, k } => format!("truncation({}, {k})", inner.label()),
        }
    }

    pub fn support(&self) -> Support {
        match self {
            PmfFamily::Finite { support } => Support::new(support.iter().map(|m| m.0).collect(), None),
            PmfFamily::Geometric { head, .. } => {
                let pts = (1..=head.len() as u64).filter(|&n| head[(n - 1) as usize].is_positive()).collect();
                Support::new(pts, Some(head.len() as u64 + 1))
            }
            PmfFamily::Power { .. } => Support::new(BTreeSet::new(), Some(1)),
            PmfFamily::HallOf { inner } => inner.support(),
            PmfFamily::Truncation { inner, k } => {
                let s = inner.support();
                let mut pts: BTreeSet<u64> = s.below(*k).into_iter().collect();
                if s.next_at_or_after(*k).is_some() {
                    pts.insert(*k);
                }
                Support::new(pts, None)
            }
        }
    }

    fn geometric_tail_mass(head: &[Rat]) -> Rat {
        Rat::one() - head.iter().fold(Rat::zero(), |s, h| s + h)
    }

    /// Enclosure of `p(n)`; exact for finite, geometric and their truncations.
    pub fn mass(&self, n: u64) -> Interval {
        if n == 0 {
            return Interval::zero();
        }
        match self {
            PmfFamily::Finite { support } => Interval::exact(
                support.iter().find(|m| m.0 == n).map_or_else(Rat::zero, |m| m.1.clone()),
            ),
            PmfFamily::Geometric { ratio, head } => {
                let h = head.len() as u64;
                if n <= h {
                    return Interval::exact(head[(n - 1) as usize].clone());
                }
                let t = Self::geometric_tail_mass(head);
                let e = i32::try_from(n - h - 1).expect("index fits i32");
                Interval::exact(t * (Rat::one() - ratio) * ratio.pow(e))
            }
            PmfFamily::Power { exponent } => {
                let table = power_table(exponent);
                table.term(n, exponent).div(table.zeta()).round()
            }
            PmfFamily::HallOf { inner } => {
                let p = inner.mass(n);
                if p.exact_value().is_some_and(Zero::is_zero) {
                    return Interval::zero();
                }
                let denom = inner.tail(n).sqrt().add(&inner.tail(n + 1).sqrt());
                p.div(&denom).round()
            }
            PmfFamily::Truncation { inner, k } => match n.cmp(k) {
                std::cmp::Ordering::Less => inner.mass(n),
                std::cmp::Ordering::Equal => inner.tail(*k),
                std::cmp::Ordering::Greater => Interval::zero(),
            },
        }
    }

    /// Enclosure of the tail sum `r_n = Σ_{m≥n} p(m)`; `r_1 = 1`.
    pub fn tail(&self, n: u64) -> Interval {
        if n <= 1 {
            return Interval::exact(Rat::one());
        }
        match self {
            PmfFamily::Finite { support } => Interval::exact(
                support.iter().filter(|m| m.0 >= n).fold(Rat::zero(), |s, m| s + &m.1),
            ),
            PmfFamily::Geometric { ratio, head } => {
                let h = head.len() as u64;
                let t = Self::geometric_tail_mass(head);
                if n <= h + 1 {
                    let rest = head[(n - 1) as usize..].iter().fold(Rat::zero(), |s, x| s + x);
                    return Interval::exact(rest + t);
                }
                let e = i32::try_from(n - h - 1).expect("index fits i32");
                Interval::exact(t * ratio.pow(e))
            }
            PmfFamily::Power { exponent } => {
                let table = power_table(exponent);
                table.tail_sum(n, exponent).div(table.zeta()).round()
            }
            PmfFamily::HallOf { inner } => inner.tail(n).sqrt().round(),
            PmfFamily::Truncation { inner, k } => {
                if n <= *k {
                    inner.tail(1).sub(&(1..n).fold(Interval::zero(), |s, m| s.add(&inner.mass(m)))).round()
                } else {
                    Interval::zero()
                }
            }
        }
    }

    /// Certifies `Σ p(n) = 1` for this representation.
    pub fn normalization(&self) -> Result<Normalization> {
        match self {
            PmfFamily::Finite { .. } | PmfFamily::Geometric { .. } | PmfFamily::Power { .. } => {
                self.clone().normalized()?;
                Ok(match self {
                    PmfFamily::Finite { .. } => Normalization::ExactSum,
                    PmfFamily::Geometric { .. } => Normalization::GeometricClosedForm,
                    _ => Normalization::ZetaDefinition,
                })
            }
            PmfFamily::HallOf { inner } => {
                inner.normalization()?;
                // √r_1 with r_1 = 1 exactly
                if inner.tail(1).sqrt() != Interval::exact(Rat::one()) {
                    return Err(Error::Invalid("hall transform does not telescope to 1".into()));
                }
                Ok(Normalization::HallTelescoping)
            }
            PmfFamily::Truncation { inner, .. } => {
                inner.normalization()?;
                Ok(Normalization::TruncationTailMass)
            }
        }
    }

    pub fn tail_shape(&self) -> TailShape {
        match self {
            PmfFamily::Geometric { ratio, head } => {
                let h = head.len() as i32;
                let t = Self::geometric_tail_mass(head);
                // T(1-r) r^{n-h-1} = [T(1-r) r^{-h-1}] r^n
                let coeff = t * (Rat::one() - ratio) * ratio.pow(-h - 1);
                TailShape::Geometric { ratio: ratio.clone(), coeff, from: h as u64 + 1 }
            }
            PmfFamily::Power { exponent } => TailShape::Power { exponent: exponent.clone() },
            PmfFamily::HallOf { inner } => match inner.tail_shape() {
                z @ TailShape::Zero { .. } => z,
                _ => TailShape::Hall { inner: (**inner).clone() },
            },
            PmfFamily::Finite { .. } | PmfFamily::Truncation { .. } => {
                TailShape::Zero { last: self.support().last().expect("finite support") }
            }
        }
    }
}

/// `‖p - p_k‖₁ = 2 r_{k+1} = 2^{1-k}` for `p = geometric(1/2)`.
pub fn halving_truncation_distance(k: u32) -> Rat {
    Rat::new(num_bigint::BigInt::from(2), num_bigint::BigInt::from(2).pow(k))
}

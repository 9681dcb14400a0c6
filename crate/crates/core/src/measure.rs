//! Finitely supported probability measures on `ℚ^d`, their means and convex
//! cores. For atomic `μ` the measures `λ ≪ μ` are the reweightings of the
//! same atoms, so `cc(μ)` is the hull of the atom locations.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::face::rai_contains;
use crate::linalg::Vector;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::polyhedron::{apply_affine, ConvexBody, VPolytope};
use crate::rational::{serde_rat, serde_rat_vec, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    pub loc: Vector,
    #[serde(with = "serde_rat")]
    pub w: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MeasureRepr", into = "MeasureRepr")]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
}

#[derive(Serialize, Deserialize)]
struct MeasureRepr {
    atoms: Vec<Atom>,
}

impl TryFrom<MeasureRepr> for AtomicMeasure {
    type Error = Error;
    fn try_from(r: MeasureRepr) -> Result<Self> {
        AtomicMeasure::new(r.atoms)
    }
}

impl From<AtomicMeasure> for MeasureRepr {
    fn from(m: AtomicMeasure) -> Self {
        MeasureRepr { atoms: m.atoms }
    }
}

impl AtomicMeasure {
    /// Validates positive weights summing to one at distinct locations of a
    /// common dimension.
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        let first = atoms.first().ok_or(Error::EmptyPointSet)?;
        let d = first.loc.dim();
        for a in &atoms {
            a.loc.check_dim(d)?;
            if !a.w.is_positive() {
                return Err(Error::Invalid("atom weights must be positive".into()));
            }
        }
        if atoms.iter().fold(Rat::zero(), |s, a| s + &a.w) != Rat::one() {
            return Err(Error::Invalid("atom weights must sum to 1".into()));
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].iter().any(|b| b.loc == a.loc) {
                return Err(Error::Invalid("atom locations must be distinct".into()));
            }
        }
        Ok(AtomicMeasure { atoms })
    }

    /// Equal weights on the given distinct locations.
    pub fn uniform(locs: Vec<Vector>) -> Result<Self> {
        let w = Rat::new(1.into(), (locs.len().max(1) as i64).into());
        AtomicMeasure::new(locs.into_iter().map(|loc| Atom { loc, w: w.clone() }).collect())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].loc.dim()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn weights(&self) -> Vec<Rat> {
        self.atoms.iter().map(|a| a.w.clone()).collect()
    }

    pub fn locations(&self) -> Vec<Vector> {
        self.atoms.iter().map(|a| a.loc.clone()).collect()
    }

    /// `m(μ) = Σ w_i loc_i`.
    pub fn mean(&self) -> Vector {
        weighted_mean(&self.locations(), &self.weights())
    }

    /// `cc(μ) = conv(locations)`.
    pub fn convex_core(&self) -> VPolytope {
        VPolytope::new(self.locations()).expect("validated atoms")
    }

    /// Image measure under `x ↦ m x + t`; coinciding images merge their weights.
    pub fn pushforward(&self, m: &[Vec<Rat>], t: &Vector) -> Result<AtomicMeasure> {
        let mut merged: BTreeMap<Vec<Rat>, Rat> = BTreeMap::new();
        let mut order = Vec::new();
        for a in &self.atoms {
            a.loc.check_dim(self.dim())?;
            let img = apply_affine(m, t, &a.loc);
            if !merged.contains_key(&img.0) {
                order.push(img.0.clone());
            }
            *merged.entry(img.0).or_insert_with(Rat::zero) += &a.w;
        }
        AtomicMeasure::new(
            order
                .into_iter()
                .map(|loc| {
                    let w = merged[&loc].clone();
                    Atom { loc: Vector(loc), w }
                })
                .collect(),
        )
    }
}

fn weighted_mean(locs: &[Vector], w: &[Rat]) -> Vector {
    let pts: Vec<&Vector> = locs.iter().collect();
    Vector::combination(&pts, w)
}

/// A reweighting `λ ≪ μ` with mean `a` and its density bound
/// `c = max_i λ_i / μ_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityWitness {
    #[serde(with = "serde_rat_vec")]
    pub weights: Vec<Rat>,
    #[serde(with = "serde_rat")]
    pub density_bound: Rat,
}

impl DensityWitness {
    /// Re-verifies `λ ≥ 0`, `Σ λ = 1`, `m(λ) = a` and that the bound is attained.
    pub fn verify(&self, mu: &AtomicMeasure, a: &Vector) -> bool {
        self.weights.len() == mu.len()
            && self.weights.iter().all(|w| !w.is_negative())
            && self.weights.iter().fold(Rat::zero(), |s, w| s + w) == Rat::one()
            && weighted_mean(&mu.locations(), &self.weights) == *a
            && density_ratios(mu, &self.weights).max() == Some(self.density_bound.clone())
    }

    pub fn is_two_sided(&self) -> bool {
        self.weights.iter().all(Signed::is_positive)
    }
}

fn density_ratios<'a>(mu: &'a AtomicMeasure, w: &'a [Rat]) -> impl Iterator<Item = Rat> + 'a {
    w.iter().zip(mu.atoms()).map(|(l, a)| l / &a.w)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CcVerdict {
    Inside { witness: DensityWitness },
    Outside,
}

impl CcVerdict {
    pub fn is_inside(&self) -> bool {
        matches!(self, CcVerdict::Inside { .. })
    }
}

/// Reweighting program over `(λ_1, …, λ_n, extra)` with `λ ≥ 0`, `Σ λ = 1`
/// and `Σ λ_i loc_i = a`.
fn reweighting_program(mu: &AtomicMeasure, a: &Vector) -> LinearProgram {
    let n = mu.len();
    let mut lp = LinearProgram::new(n + 1);
    for i in 0..n {
        lp.set_nonneg(i);
    }
    let mut ones = vec![Rat::one(); n];
    ones.push(Rat::zero());
    lp.add(ones, Relation::Eq, Rat::one());
    for k in 0..mu.dim() {
        let mut row: Vec<Rat> = mu.atoms().iter().map(|at| at.loc[k].clone()).collect();
        row.push(Rat::zero());
        lp.add(row, Relation::Eq, a[k].clone());
    }
    lp
}

/// `a ∈ cc(μ)`, witnessed by the reweighting with the smallest density bound.
pub fn cc_contains(mu: &AtomicMeasure, a: &Vector) -> Result<CcVerdict> {
    a.check_dim(mu.dim())?;
    let n = mu.len();
    let mut lp = reweighting_program(mu, a);
    // λ_i ≤ c μ_i, minimize c
    for (i, at) in mu.atoms().iter().enumerate() {
        let mut row = vec![Rat::zero(); n + 1];
        row[i] = Rat::one();
        row[n] = -at.w.clone();
        lp.add(row, Relation::Le, Rat::zero());
    }
    let mut obj = vec![Rat::zero(); n + 1];
    obj[n] = -Rat::one();
    lp.maximize(obj);
    match lp.solve() {
        LpOutcome::Feasible { witness, .. } => {
            let weights = witness.0[..n].to_vec();
            let density_bound = density_ratios(mu, &weights).max().expect("nonempty");
            Ok(CcVerdict::Inside { witness: DensityWitness { weights, density_bound } })
        }
        LpOutcome::Infeasible => Ok(CcVerdict::Outside),
        LpOutcome::Unbounded { .. } => unreachable!("density bound is bounded below by 1"),
    }
}

/// A reweighting `λ ≡ μ` with mean `a` maximizing `min_i λ_i`, if one with
/// all weights positive exists; then `1/c ≤ dλ/dμ ≤ c` for finite `c`.
pub fn rai_cc_witness(mu: &AtomicMeasure, a: &Vector) -> Result<Option<DensityWitness>> {
    a.check_dim(mu.dim())?;
    let n = mu.len();
    let mut lp = reweighting_program(mu, a);
    // t ≤ λ_i, maximize t
    for i in 0..n {
        let mut row = vec![Rat::zero(); n + 1];
        row[i] = -Rat::one();
        row[n] = Rat::one();
        lp.add(row, Relation::Le, Rat::zero());
    }
    let mut obj = vec![Rat::zero(); n + 1];
    obj[n] = Rat::one();
    lp.maximize(obj);
    Ok(match lp.solve() {
        LpOutcome::Feasible { witness, value } if value.as_ref().is_some_and(Signed::is_positive) => {
            let weights = witness.0[..n].to_vec();
            let density_bound = density_ratios(mu, &weights).max().expect("nonempty");
            Some(DensityWitness { weights, density_bound })
        }
        _ => None,
    })
}

/// `a ∈ rai(cc(μ))` via two-sided density bounds.
pub fn rai_cc_contains(mu: &AtomicMeasure, a: &Vector) -> Result<bool> {
    Ok(rai_cc_witness(mu, a)?.is_some())
}

/// Both routes to `a ∈ rai(cc(μ))`: the density program and the face
/// calculus on the hull polytope. Points outside the hull are outside both.
pub fn rai_routes(mu: &AtomicMeasure, a: &Vector) -> Result<(bool, bool)> {
    let density = rai_cc_contains(mu, a)?;
    let hull = ConvexBody::V(mu.convex_core());
    let face = match rai_contains(&hull, a) {
        Ok(b) => b,
        Err(Error::PointOutside) => false,
        Err(e) => return Err(e),
    };
    Ok((density, face))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn two_point() -> AtomicMeasure {
        AtomicMeasure::uniform(vec![Vector::from_ints(&[0]), Vector::from_ints(&[1])]).unwrap()
    }

    fn triangle() -> AtomicMeasure {
        AtomicMeasure::uniform(vec![
            Vector::from_ints(&[0, 0]),
            Vector::from_ints(&[1, 0]),
            Vector::from_ints(&[0, 1]),
        ])
        .unwrap()
    }

    #[test]
    fn means() {
        assert_eq!(two_point().mean(), Vector(vec![rat(1, 2)]));
        assert_eq!(triangle().mean(), Vector(vec![rat(1, 3), rat(1, 3)]));
        let skew = AtomicMeasure::new(vec![
            Atom { loc: Vector::from_ints(&[0]), w: rat(3, 4) },
            Atom { loc: Vector::from_ints(&[1]), w: rat(1, 4) },
        ])
        .unwrap();
        assert_eq!(skew.mean(), Vector(vec![rat(1, 4)]));
    }

    #[test]
    fn validation() {
        let a = |x: i64, w: Rat| Atom { loc: Vector::from_ints(&[x]), w };
        assert!(AtomicMeasure::new(vec![a(0, rat(1, 2))]).is_err());
        assert!(AtomicMeasure::new(vec![a(0, rat(1, 2)), a(0, rat(1, 2))]).is_err());
        assert!(AtomicMeasure::new(vec![a(0, int(2)), a(1, int(-1))]).is_err());
        let js = r#"{"atoms": [{"loc": ["0"], "w": "1/2"}, {"loc": ["1"], "w": "1/2"}]}"#;
        assert_eq!(serde_json::from_str::<AtomicMeasure>(js).unwrap(), two_point());
    }

    #[test]
    fn convex_cores() {
        assert_eq!(two_point().convex_core().len(), 2);
        let one = AtomicMeasure::uniform(vec![Vector::from_ints(&[3, 4])]).unwrap();
        assert_eq!(one.convex_core().vertices(), &[Vector::from_ints(&[3, 4])]);
        assert_eq!(triangle().convex_core().len(), 3);
    }

    #[test]
    fn cc_membership_examples() {
        let mu = two_point();
        let CcVerdict::Inside { witness } = cc_contains(&mu, &Vector(vec![rat(1, 4)])).unwrap() else { panic!() };
        assert_eq!(witness.weights, vec![rat(3, 4), rat(1, 4)]);
        assert_eq!(witness.density_bound, rat(3, 2));
        assert!(witness.verify(&mu, &Vector(vec![rat(1, 4)])));
        assert_eq!(cc_contains(&mu, &Vector::from_ints(&[2])).unwrap(), CcVerdict::Outside);
        let CcVerdict::Inside { witness } = cc_contains(&mu, &Vector::from_ints(&[0])).unwrap() else { panic!() };
        assert_eq!(witness.weights, vec![int(1), int(0)]);
        assert_eq!(witness.density_bound, int(2));
        assert!(!witness.is_two_sided());
    }

    #[test]
    fn rai_examples_agree_across_routes() {
        let mu = two_point();
        assert_eq!(rai_routes(&mu, &Vector(vec![rat(1, 4)])).unwrap(), (true, true));
        assert_eq!(rai_routes(&mu, &Vector::from_ints(&[0])).unwrap(), (false, false));
        assert_eq!(rai_routes(&mu, &Vector::from_ints(&[5])).unwrap(), (false, false));
        let t = triangle();
        assert_eq!(rai_routes(&t, &t.mean()).unwrap(), (true, true));
    }

    #[test]
    fn pushforward_merges_atoms() {
        let t = triangle();
        // project onto x + y
        let img = t.pushforward(&[vec![int(1), int(1)]], &Vector::zeros(1)).unwrap();
        assert_eq!(img.len(), 2);
        assert_eq!(img.mean(), Vector(vec![rat(2, 3)]));
    }
}

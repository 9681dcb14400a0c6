//! Step certificates and the exact ε-algebra that propagates them.
//!
//! A certificate `(x, y, ε)` claims `x + ε(x − y) ∈ K`, i.e. the segment from
//! `y` through `x` extends past `x` inside `K`. The operations here build new
//! certificates from old ones with closed-form coefficients, and every output
//! is re-verified by exact membership before it is returned.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::polyhedron::{ConvexSet, VPolytope};
use crate::rational::{in_unit_interval, is_strictly_between_0_1, min_rat, serde_rat, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsCertificate {
    pub base: Vector,
    pub target: Vector,
    #[serde(with = "serde_rat")]
    pub eps: Rat,
}

impl EpsCertificate {
    pub fn new(base: Vector, target: Vector, eps: Rat) -> Result<Self> {
        target.check_dim(base.dim())?;
        if !eps.is_positive() {
            return Err(Error::Precondition("certificate ε must be positive".into()));
        }
        Ok(EpsCertificate { base, target, eps })
    }

    /// `x + ε(x − y)`.
    pub fn step_point(&self) -> Vector {
        self.base.step_away(&self.target, &self.eps)
    }

    /// Exact check that base, target and step point all lie in `k`.
    pub fn verify<K: ConvexSet + ?Sized>(&self, k: &K) -> Result<bool> {
        Ok(self.eps.is_positive()
            && k.contains(&self.base)?
            && k.contains(&self.target)?
            && k.contains(&self.step_point())?)
    }

    /// Same claim with a smaller ε; valid by convexity of `k`.
    pub fn shrink(&self, eps: &Rat) -> Result<Self> {
        if !eps.is_positive() || eps > &self.eps {
            return Err(Error::Precondition("shrink must keep 0 < ε' ≤ ε".into()));
        }
        Ok(EpsCertificate { eps: eps.clone(), ..self.clone() })
    }

    fn require<K: ConvexSet + ?Sized>(&self, k: &K) -> Result<()> {
        if self.verify(k)? {
            Ok(())
        } else {
            Err(Error::CertificateRejected(format!(
                "{:?} + {}·({:?} − {:?}) not in set",
                self.base, self.eps, self.base, self.target
            )))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitResult {
    pub a: EpsCertificate,
    pub b: EpsCertificate,
    #[serde(with = "serde_rat")]
    pub xi_a: Rat,
    #[serde(with = "serde_rat")]
    pub xi_b: Rat,
}

/// From a certificate for `y = (1−η)a + ηb` derive certificates for `a` and `b`.
///
/// With `y' = x + ε(x−y)`:
/// `x + ε_a(x−a) = (1−ξ_a)y' + ξ_a·b` where `ε_a = ε(1−η)/(1+εη)`, `ξ_a = εη/(1+εη)`,
/// and symmetrically for `b` with `η` replaced by `1−η`.
pub fn menelaus_split<K: ConvexSet + ?Sized>(
    k: &K,
    cert: &EpsCertificate,
    a: &Vector,
    b: &Vector,
    eta: &Rat,
) -> Result<SplitResult> {
    if !is_strictly_between_0_1(eta) {
        return Err(Error::Precondition("η must lie in (0,1)".into()));
    }
    if a == b {
        return Err(Error::Precondition("split needs distinct endpoints".into()));
    }
    a.check_dim(cert.base.dim())?;
    b.check_dim(cert.base.dim())?;
    if a.lerp(b, eta) != cert.target {
        return Err(Error::Precondition("target is not (1−η)a + ηb".into()));
    }
    if !k.contains(a)? || !k.contains(b)? {
        return Err(Error::PointOutside);
    }
    cert.require(k)?;

    let one = Rat::one();
    let eps = &cert.eps;
    let y_step = cert.step_point();
    let half = |eta: &Rat, far: &Vector, near: &Vector| -> Result<(EpsCertificate, Rat)> {
        let denom = &one + eps * eta;
        let eps_near = eps * (&one - eta) / &denom;
        let xi = eps * eta / &denom;
        let out = EpsCertificate::new(cert.base.clone(), near.clone(), eps_near)?;
        assert_eq!(out.step_point(), y_step.lerp(far, &xi), "split identity");
        out.require(k)?;
        Ok((out, xi))
    };
    let (ca, xi_a) = half(eta, b, a)?;
    let (cb, xi_b) = half(&(&one - eta), a, b)?;
    Ok(SplitResult { a: ca, b: cb, xi_a, xi_b })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinResult {
    pub cert: EpsCertificate,
    #[serde(with = "serde_rat")]
    pub xi: Rat,
}

/// From certificates for `a` and `b` at a common base `x`, a certificate for
/// `y = (1−η)a + ηb` with `ε = ε_aε_b/((1−η)ε_b + ηε_a)`, `ξ = ηε_a/(same)`, and
/// `x + ε(x−y) = (1−ξ)a' + ξb'`.
pub fn menelaus_join<K: ConvexSet + ?Sized>(
    k: &K,
    cert_a: &EpsCertificate,
    cert_b: &EpsCertificate,
    eta: &Rat,
) -> Result<JoinResult> {
    if !in_unit_interval(eta) {
        return Err(Error::Precondition("η must lie in [0,1]".into()));
    }
    if cert_a.base != cert_b.base {
        return Err(Error::Precondition("certificates must share their base point".into()));
    }
    cert_a.require(k)?;
    cert_b.require(k)?;
    let one = Rat::one();
    let (ea, eb) = (&cert_a.eps, &cert_b.eps);
    let denom = (&one - eta) * eb + eta * ea;
    let eps = ea * eb / &denom;
    let xi = eta * ea / &denom;
    let y = cert_a.target.lerp(&cert_b.target, eta);
    let cert = EpsCertificate::new(cert_a.base.clone(), y, eps)?;
    assert_eq!(
        cert.step_point(),
        cert_a.step_point().lerp(&cert_b.step_point(), &xi),
        "join identity"
    );
    cert.require(k)?;
    Ok(JoinResult { cert, xi })
}

/// `ε = min(min_i ε_i, 1) / ‖α‖₁` for an affine combination direction
/// `Σ α_i y_i` with `Σ α_i = 0`. Given certificates `x + ε_i(x − y_i) ∈ K`,
/// both `x ± ε(x − y)` lie in `K` for `y = x + Σ α_i y_i`.
pub fn affine_comb_eps(eps: &[Rat], alpha: &[Rat]) -> Result<Rat> {
    if eps.len() != alpha.len() {
        return Err(Error::dim(eps.len(), alpha.len()));
    }
    if eps.iter().any(|e| !e.is_positive()) {
        return Err(Error::Precondition("every ε_i must be positive".into()));
    }
    if alpha.iter().all(Zero::is_zero) {
        return Err(Error::Precondition("α must not vanish".into()));
    }
    if !alpha.iter().fold(Rat::zero(), |s, a| s + a).is_zero() {
        return Err(Error::Precondition("α must sum to zero".into()));
    }
    let norm = alpha.iter().fold(Rat::zero(), |s, a| s + a.abs());
    let one = Rat::one();
    let floor = eps.iter().fold(one.clone(), |m, e| min_rat(&m, e).clone());
    Ok(floor / norm)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixBranch {
    /// `μ ≤ λ`
    Lower,
    /// `μ ≥ λ`
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullMixResult {
    pub cert: EpsCertificate,
    #[serde(with = "serde_rat")]
    pub nu: Rat,
    pub branch: MixBranch,
}

/// Internal-step certificates for `x₁` in `K₁` and `x₂` in `K₂` combine into a
/// certificate for `x = (1−λ)x₁ + λx₂` against `y = (1−μ)y₁ + μy₂` in
/// `conv(K₁ ∪ K₂)`. Both inputs are first shrunk to their common minimum ε.
pub fn hull_mix(
    k1: &VPolytope,
    k2: &VPolytope,
    cert1: &EpsCertificate,
    cert2: &EpsCertificate,
    lambda: &Rat,
    mu: &Rat,
) -> Result<HullMixResult> {
    if !is_strictly_between_0_1(lambda) {
        return Err(Error::Precondition("λ must lie in (0,1)".into()));
    }
    if !in_unit_interval(mu) {
        return Err(Error::Precondition("μ must lie in [0,1]".into()));
    }
    cert1.require(k1)?;
    cert2.require(k2)?;
    let eps = min_rat(&cert1.eps, &cert2.eps).clone();
    let (c1, c2) = (cert1.shrink(&eps)?, cert2.shrink(&eps)?);
    let (z1, z2) = (c1.step_point(), c2.step_point());
    let one = Rat::one();
    let x = c1.base.lerp(&c2.base, lambda);
    let y = c1.target.lerp(&c2.target, mu);

    let (branch, nu, eta, terms) = if mu <= lambda {
        let nu = &one - mu + &eps * (lambda - mu);
        let eta = &eps * (&one - lambda) / &nu;
        let w = [&eps * (lambda - mu), (&one - lambda) * (&one - mu), lambda * (&one - mu)];
        (MixBranch::Lower, nu, eta, (w, [&c2.target, &z1, &z2]))
    } else {
        let nu = mu + &eps * (mu - lambda);
        let eta = &eps * lambda / &nu;
        let w = [&eps * (mu - lambda), (&one - lambda) * mu, lambda * mu];
        (MixBranch::Upper, nu, eta, (w, [&c1.target, &z1, &z2]))
    };
    let cert = EpsCertificate::new(x, y, eta)?;
    let (w, pts) = terms;
    let weights: Vec<Rat> = w.iter().map(|wi| wi / &nu).collect();
    assert_eq!(cert.step_point(), Vector::combination(&pts, &weights), "hull identity");

    let mut verts = k1.vertices().to_vec();
    verts.extend(k2.vertices().iter().cloned());
    cert.require(&VPolytope::new(verts)?)?;
    Ok(HullMixResult { cert, nu, branch })
}

//! Registered laws, their instance payloads and the injected mutations used
//! to exercise the failure and replay paths.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::measure::AtomicMeasure;
use crate::pmf::PmfFamily;
use crate::polyhedron::{ConvexBody, HPolyhedron, VPolytope};
use crate::rational::{serde_rat, serde_rat_matrix, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Law {
    #[serde(rename = "alfsen-equivalence")]
    AlfsenEquivalence,
    #[serde(rename = "main-theorem")]
    MainTheorem,
    #[serde(rename = "facex")]
    Facex,
    #[serde(rename = "char-ri-Fx")]
    CharRiFx,
    #[serde(rename = "char2-open-segments")]
    Char2OpenSegments,
    #[serde(rename = "ri-gen")]
    RiGen,
    #[serde(rename = "ri-affine-hull")]
    RiAffineHull,
    #[serde(rename = "inter-rel-open")]
    InterRelOpen,
    #[serde(rename = "intersection")]
    Intersection,
    #[serde(rename = "image")]
    Image,
    #[serde(rename = "ri2=ri")]
    Ri2Ri,
    #[serde(rename = "maximal-elements")]
    MaximalElements,
    #[serde(rename = "conv")]
    Conv,
    #[serde(rename = "face-gen-S")]
    FaceGenS,
    #[serde(rename = "faces-rel-open")]
    FacesRelOpen,
    #[serde(rename = "d-extreme")]
    DExtreme,
    #[serde(rename = "2d-faces")]
    TwoDFaces,
    #[serde(rename = "certificates")]
    Certificates,
    #[serde(rename = "pmf-laws")]
    PmfLaws,
    #[serde(rename = "cc-laws")]
    CcLaws,
}

impl Law {
    pub const ALL: [Law; 20] = [
        Law::AlfsenEquivalence,
        Law::MainTheorem,
        Law::Facex,
        Law::CharRiFx,
        Law::Char2OpenSegments,
        Law::RiGen,
        Law::RiAffineHull,
        Law::InterRelOpen,
        Law::Intersection,
        Law::Image,
        Law::Ri2Ri,
        Law::MaximalElements,
        Law::Conv,
        Law::FaceGenS,
        Law::FacesRelOpen,
        Law::DExtreme,
        Law::TwoDFaces,
        Law::Certificates,
        Law::PmfLaws,
        Law::CcLaws,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Law::AlfsenEquivalence => "alfsen-equivalence",
            Law::MainTheorem => "main-theorem",
            Law::Facex => "facex",
            Law::CharRiFx => "char-ri-Fx",
            Law::Char2OpenSegments => "char2-open-segments",
            Law::RiGen => "ri-gen",
            Law::RiAffineHull => "ri-affine-hull",
            Law::InterRelOpen => "inter-rel-open",
            Law::Intersection => "intersection",
            Law::Image => "image",
            Law::Ri2Ri => "ri2=ri",
            Law::MaximalElements => "maximal-elements",
            Law::Conv => "conv",
            Law::FaceGenS => "face-gen-S",
            Law::FacesRelOpen => "faces-rel-open",
            Law::DExtreme => "d-extreme",
            Law::TwoDFaces => "2d-faces",
            Law::Certificates => "certificates",
            Law::PmfLaws => "pmf-laws",
            Law::CcLaws => "cc-laws",
        }
    }

    /// One line on what an instance of the law asserts.
    pub fn description(self) -> &'static str {
        match self {
            Law::AlfsenEquivalence => "step-based face membership agrees with the active-set face",
            Law::MainTheorem => "every point lies in the relative interior of the face it generates",
            Law::Facex => "a membership certificate places x strictly inside (y, x+ε(x−y))",
            Law::CharRiFx => "same cell, mutual face membership and equal descriptors coincide",
            Law::Char2OpenSegments => "points of one cell share an open segment built from their certificates",
            Law::RiGen => "relative-interior points affinely span the whole set",
            Law::RiAffineHull => "two-sided step directions span the affine hull of the generated face",
            Law::InterRelOpen => "the relative interior of an intersection is the intersection of relative interiors",
            Law::Intersection => "the face of an intersection is the intersection of faces",
            Law::Image => "an affine map sends a face cell into the cell of the image point",
            Law::Ri2Ri => "every cell is relatively open and generates itself",
            Law::MaximalElements => "cells are disjoint, cover the set and admit no open extension",
            Law::Conv => "the face of a convex set is generated by any of its relative-interior points",
            Law::FaceGenS => "the face generated by a finite set is the meet of its point faces",
            Law::FacesRelOpen => "faces of an open cell meet a polyhedron as the cell meets the faces",
            Law::DExtreme => "unions of cells are d-extreme and extreme exactly when downward closed",
            Law::TwoDFaces => "every cell passes the two-sided face check; non-canonical cells are refused",
            Law::Certificates => "split, join, affine and hull certificates re-verify by membership",
            Law::PmfLaws => "pmf normalization, Hall exclusion, interior symmetry and the power-chain order",
            Law::CcLaws => "the density and the polytope routes to the convex-core interior agree",
        }
    }

    /// Instances per suite when the caller does not choose.
    pub fn default_count(self) -> u64 {
        match self {
            Law::MainTheorem | Law::AlfsenEquivalence => 500,
            Law::Certificates => 1000,
            Law::PmfLaws => 100,
            _ => 200,
        }
    }

    pub fn supports(self, m: Mutation) -> bool {
        match m {
            Mutation::FlipVerdict => true,
            Mutation::CorruptFace => matches!(
                self,
                Law::MainTheorem | Law::AlfsenEquivalence | Law::Ri2Ri | Law::CharRiFx
            ),
            Mutation::InflateEps => matches!(self, Law::Certificates | Law::AlfsenEquivalence | Law::Facex),
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Law {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Law::ALL
            .iter()
            .copied()
            .find(|l| l.id() == s)
            .ok_or_else(|| Error::UnknownLaw(s.to_string()))
    }
}

/// Deliberate defects that make a law fail, so reports and replay can be
/// tested on real counterexamples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Moves one strict row or generator of a computed cell into its face.
    CorruptFace,
    /// Triples the ε of emitted certificates before verification.
    InflateEps,
    /// Negates the final verdict.
    FlipVerdict,
}

impl FromStr for Mutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corrupt-face" => Ok(Mutation::CorruptFace),
            "inflate-eps" => Ok(Mutation::InflateEps),
            "flip-verdict" => Ok(Mutation::FlipVerdict),
            _ => Err(Error::Invalid(format!("unknown mutation {s:?}"))),
        }
    }
}

/// Inputs for the certificate algebra laws.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCase {
    pub k: HPolyhedron,
    /// A relative-interior point of `k`, the common certificate base.
    pub x: Vector,
    pub a: Vector,
    pub b: Vector,
    #[serde(with = "serde_rat")]
    pub eta: Rat,
    pub ys: Vec<Vector>,
    #[serde(with = "crate::rational::serde_rat_vec")]
    pub alpha: Vec<Rat>,
    pub k1: VPolytope,
    pub k2: VPolytope,
    pub x1: Vector,
    pub x2: Vector,
    pub y1: Vector,
    pub y2: Vector,
    #[serde(with = "serde_rat")]
    pub lambda: Rat,
    #[serde(with = "serde_rat")]
    pub mu: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Points {
        body: ConvexBody,
        points: Vec<Vector>,
    },
    Pairs {
        body: ConvexBody,
        pairs: Vec<(Vector, Vector)>,
    },
    TwoSets {
        k: HPolyhedron,
        l: HPolyhedron,
        points: Vec<Vector>,
    },
    Image {
        k: VPolytope,
        #[serde(with = "serde_rat_matrix")]
        m: Vec<Vec<Rat>>,
        t: Vector,
        points: Vec<Vector>,
    },
    Lattice {
        v: VPolytope,
        picks: Vec<usize>,
        samples: Vec<Vector>,
    },
    Hull {
        k: VPolytope,
        c: VPolytope,
    },
    Certificates(Box<CertificateCase>),
    Pmf {
        p: PmfFamily,
        q: PmfFamily,
    },
    Measure {
        mu: AtomicMeasure,
        probes: Vec<Vector>,
        #[serde(with = "serde_rat_matrix")]
        m: Vec<Vec<Rat>>,
        t: Vector,
    },
}

/// One generated instance, fully determined by `(law, seed, index)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub law: Law,
    pub seed: u64,
    pub index: u64,
    pub instance_seed: u64,
    pub payload: Payload,
}

/// Result of checking one instance. `failure` holds the first violated
/// check, or the error that stopped the check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub passed: bool,
    pub checks: u64,
    pub failure: Option<String>,
}

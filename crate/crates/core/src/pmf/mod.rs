//! Faces and relative algebraic interiors in the simplex `Δ_ℕ` of pmfs on
//! `ℕ = {1, 2, …}`, decided by exact density-ratio analysis.

pub mod enclosure;
pub mod family;
pub mod ratio;
pub mod tv;

pub use enclosure::Interval;
pub use family::{Mass, Normalization, PmfFamily, Support, TailShape};
pub use ratio::{
    chain_face_contains, face_closure, pmf_face_contains, pmf_rai_contains, ratio_analysis, ratio_at, tail_behavior, FaceTest,
    InfBound, RatioOutcome, RatioVerdict, SupBound, TailArgument, TailBehavior,
};
pub use tv::{truncation_distance, tv_distance, TvDistance, TvRoute};

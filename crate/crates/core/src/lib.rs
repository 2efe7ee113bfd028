//! Certified monotonicity of f(x) = sin x / sin(cx) on (0, π/2) for c in (0, 1),
//! together with machine-checked transcripts of its two classical proofs and
//! numerically certified reproductions of its three applications:
//!
//! - [`sundial`]: horizontal-sundial hour lines and the deviation bound that
//!   makes them "straight for the senses",
//! - [`dioptre`]: double refraction of a parallel beam by a glass sphere and
//!   the localization of the burning focus,
//! - [`sky`]: observer-frame trajectories and the altitude maximum strictly
//!   before meridian transit.
//!
//! The proof machinery lives in [`lemma`] (global inequality chain) and
//! [`figure`] (exact Euclidean local-proof figure); shared primitives in
//! [`geom`]; checked inequality chains are recorded as [`transcript::ProofTranscript`]
//! values that serialize to CSV and plain text.

// `!(a > b)` guards double as NaN rejection throughout the numeric code.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dioptre;
pub mod figure;
pub mod geom;
pub mod lemma;
pub mod search;
pub mod sky;
pub mod sundial;
pub mod svg;
pub mod transcript;

pub use geom::{Angle, Interval, Point2, UnitVec3, Vec3};
pub use lemma::HourFraction;
pub use transcript::{ProofTranscript, Relation, Step};

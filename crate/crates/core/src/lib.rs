//! Zeta functions, toric exponential sums and truncated Dwork operators for
//! polynomial systems over small finite fields.
//!
//! The crate is organized bottom-up:
//!
//! * [`fields`] — F_q and its extensions, enumeration and traces;
//! * [`geometry`] — sparse polynomials, point counts, dimension estimates and
//!   the recombination of a system into a set-theoretic complete
//!   intersection;
//! * [`series`] — truncated power series, δ and δ⁻¹, Padé reconstruction,
//!   Newton polygons and weak visibility;
//! * [`charsums`] — exact arithmetic in ℤ[ζ_p] and toric exponential sums;
//! * [`dwork`] — the p-adic side: Artin–Hasse series, the splitting function,
//!   truncated Dwork operators and their Fredholm determinants;
//! * [`bounds`] — the μ/ν/ε divisibility exponents and their checkers.
//!
//! Everything is exact. Results that rest on exhaustive enumeration over a
//! few extensions rather than on a proof are labelled as such by the callers.

pub mod bounds;
pub mod charsums;
pub mod dwork;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod series;

pub use error::{Error, Result};

use serde::{Deserialize, Serialize};

/// Enumeration and search limits shared by the exhaustive algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest point set (or field) any single enumeration may visit.
    pub enumeration_cap: u64,
    /// Largest ambient point set used by the dimension estimator.
    pub dimension_cap: u64,
    /// Extensions F_{q^s}, s ≤ `s_max`, used for pointwise certification.
    pub s_max: u32,
    /// Slice fields are chosen with at least this many elements when
    /// affordable.
    pub constant_field_threshold: u64,
    /// Random draws per stage (and per constant field) in recombination.
    pub recombine_draws: u32,
    /// Random slices per codimension in the dimension estimator.
    pub dimension_trials: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration_cap: 1 << 26,
            dimension_cap: 1 << 21,
            s_max: 3,
            constant_field_threshold: 64,
            recombine_draws: 64,
            dimension_trials: 16,
        }
    }
}

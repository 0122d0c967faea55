//! Exact counting of pairs-of-dot-products triples
//! `Π_{α,β}(P) = {(p, q, r) ∈ P³ : p·q = α, p·r = β}` over the rationals and
//! prime fields, the extremal point sets that make the count large, and
//! checks of the incidence-based upper bounds on it.

pub mod bounds;
pub mod constructions;
pub mod counting;
pub mod error;
pub mod geometry;
pub mod io;
mod linalg;
pub mod scalar;

pub use counting::{count_pi, count_pi_bruteforce, count_pi_fast, enumerate_pi_triples, CountMethod, PiCount, PiDecomposition};
pub use error::{Error, Result};
pub use geometry::{
    affine_hull_key, dot, dual_hyperplane, dual_richness_histogram, flat_stats, hyperplane_weight,
    incidence_count, k2t_free_check, spanned_richness_histogram, FlatKey, FlatStats, Hyperplane, Point,
    PointSet, RichnessHistogram,
};
pub use scalar::{FieldSpec, Scalar};

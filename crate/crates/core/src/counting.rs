//! Counting `Π_{α,β}(P) = {(p, q, r) ∈ P³ : p·q = α, p·r = β}`.
//!
//! Two routes: [`count_pi_bruteforce`] walks all `n³` ordered triples, and
//! [`count_pi_fast`] uses `|Π| = Σ_p wt(h_α(p)) · wt(h_β(p))`, which needs
//! only `n²` dot products. Triples with repeated entries are counted.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{dot_unchecked, Point, PointSet};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    Brute,
    Fast,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiCount {
    pub total: u64,
    pub alpha: Scalar,
    pub beta: Scalar,
    pub method: CountMethod,
}

/// Per-point dual weights and `|π(p)|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointWeights {
    pub wt_alpha: u64,
    pub wt_beta: u64,
    pub pi: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiDecomposition {
    pub alpha: Scalar,
    pub beta: Scalar,
    /// Indexed like the points of the set.
    pub per_point: Vec<PointWeights>,
    pub total: u64,
}

impl PiDecomposition {
    pub fn sum_sq_alpha(&self) -> u64 {
        self.per_point.iter().map(|w| w.wt_alpha * w.wt_alpha).sum()
    }

    pub fn sum_sq_beta(&self) -> u64 {
        self.per_point.iter().map(|w| w.wt_beta * w.wt_beta).sum()
    }
}

fn check_params(set: &PointSet, alpha: &Scalar, beta: &Scalar) -> Result<()> {
    if alpha.is_zero() {
        return Err(Error::ZeroScalar("alpha"));
    }
    if beta.is_zero() {
        return Err(Error::ZeroScalar("beta"));
    }
    set.check_scalar(alpha)?;
    set.check_scalar(beta)
}

/// Oracle: evaluates both dot products for every ordered triple.
pub fn count_pi_bruteforce(set: &PointSet, alpha: &Scalar, beta: &Scalar) -> Result<PiCount> {
    check_params(set, alpha, beta)?;
    let pts = set.points();
    let total = pts
        .par_iter()
        .map(|p| {
            let mut c = 0u64;
            for q in pts {
                for r in pts {
                    if dot_unchecked(p, q) == *alpha && dot_unchecked(p, r) == *beta {
                        c += 1;
                    }
                }
            }
            c
        })
        .sum();
    Ok(PiCount {
        total,
        alpha: alpha.clone(),
        beta: beta.clone(),
        method: CountMethod::Brute,
    })
}

/// Quadratic counter through the dual-weight decomposition.
pub fn count_pi_fast(set: &PointSet, alpha: &Scalar, beta: &Scalar) -> Result<PiDecomposition> {
    check_params(set, alpha, beta)?;
    let pts = set.points();
    let per_point: Vec<PointWeights> = pts
        .par_iter()
        .map(|p| {
            let (mut wt_alpha, mut wt_beta) = (0u64, 0u64);
            for q in pts {
                let v = dot_unchecked(p, q);
                wt_alpha += u64::from(v == *alpha);
                wt_beta += u64::from(v == *beta);
            }
            PointWeights {
                wt_alpha,
                wt_beta,
                pi: wt_alpha * wt_beta,
            }
        })
        .collect();
    let total = per_point.iter().map(|w| w.pi).sum();
    Ok(PiDecomposition {
        alpha: alpha.clone(),
        beta: beta.clone(),
        per_point,
        total,
    })
}

impl From<&PiDecomposition> for PiCount {
    fn from(d: &PiDecomposition) -> Self {
        PiCount {
            total: d.total,
            alpha: d.alpha.clone(),
            beta: d.beta.clone(),
            method: CountMethod::Fast,
        }
    }
}

/// Counts with whichever method is requested.
pub fn count_pi(set: &PointSet, alpha: &Scalar, beta: &Scalar, method: CountMethod) -> Result<PiCount> {
    match method {
        CountMethod::Brute => count_pi_bruteforce(set, alpha, beta),
        CountMethod::Fast => count_pi_fast(set, alpha, beta).map(|d| PiCount::from(&d)),
    }
}

/// Lists every triple of `Π_{α,β}` explicitly. Refuses when `n³` exceeds
/// `limit` unless `override_limit` is set.
pub fn enumerate_pi_triples(
    set: &PointSet,
    alpha: &Scalar,
    beta: &Scalar,
    limit: u64,
    override_limit: bool,
) -> Result<Vec<(Point, Point, Point)>> {
    check_params(set, alpha, beta)?;
    let n = set.len() as u128;
    let needed = n * n * n;
    if !override_limit && needed > limit as u128 {
        return Err(Error::LimitExceeded { needed, limit });
    }
    let pts = set.points();
    let mut out = Vec::new();
    for p in pts {
        let qs: Vec<&Point> = pts.iter().filter(|q| dot_unchecked(p, q) == *alpha).collect();
        let rs: Vec<&Point> = pts.iter().filter(|r| dot_unchecked(p, r) == *beta).collect();
        for q in &qs {
            for r in &rs {
                out.push((p.clone(), (*q).clone(), (*r).clone()));
            }
        }
    }
    Ok(out)
}

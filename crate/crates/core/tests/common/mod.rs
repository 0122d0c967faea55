//! Random instances shared by the integration tests.
#![allow(dead_code)]

use dotpairs::{FieldSpec, Point, PointSet, Scalar};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const PRIMES: [u64; 3] = [3, 7, 101];

pub struct Instance {
    pub set: PointSet,
    pub alpha: Scalar,
    pub beta: Scalar,
}

/// Numerator in [-9, 9], denominator in [1, 4].
pub fn random_rational(rng: &mut ChaCha8Rng) -> Scalar {
    FieldSpec::Rational
        .ratio(rng.random_range(-9..=9), rng.random_range(1..=4))
        .unwrap()
}

pub fn random_scalar(field: FieldSpec, rng: &mut ChaCha8Rng) -> Scalar {
    match field {
        FieldSpec::Rational => random_rational(rng),
        FieldSpec::Prime(p) => field.from_i64(rng.random_range(0..p) as i64),
    }
}

pub fn random_nonzero(field: FieldSpec, rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let s = random_scalar(field, rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// Up to `max_n` distinct random points (duplicates are dropped).
pub fn random_set(field: FieldSpec, d: usize, max_n: usize, rng: &mut ChaCha8Rng) -> PointSet {
    let target = rng.random_range(0..=max_n);
    let mut pts: Vec<Point> = Vec::new();
    for _ in 0..target {
        let p = Point::new((0..d).map(|_| random_scalar(field, rng)).collect());
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    PointSet::new(field, d, pts, "random").unwrap()
}

pub fn random_field(rng: &mut ChaCha8Rng) -> FieldSpec {
    if rng.random_bool(0.5) {
        FieldSpec::Rational
    } else {
        FieldSpec::prime(PRIMES[rng.random_range(0..PRIMES.len())]).unwrap()
    }
}

/// α and β are random nonzero scalars, or (half the time over the
/// rationals) dot products realized in the set, so that counts are not
/// almost always zero.
pub fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    let field = random_field(rng);
    let d = rng.random_range(2..=3);
    let set = random_set(field, d, 30, rng);
    let pick = |rng: &mut ChaCha8Rng| {
        if field == FieldSpec::Rational && set.len() > 1 && rng.random_bool(0.5) {
            let pts = set.points();
            let (i, j) = (rng.random_range(0..pts.len()), rng.random_range(0..pts.len()));
            let v = dotpairs::dot(&pts[i], &pts[j]).unwrap();
            if !v.is_zero() {
                return v;
            }
        }
        random_nonzero(field, rng)
    };
    let alpha = pick(rng);
    let beta = if rng.random_bool(0.3) { alpha.clone() } else { pick(rng) };
    Instance { set, alpha, beta }
}

//! Deterministic point sets with many pairs of dot products, each checked
//! exactly after generation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::counting::{count_pi, CountMethod};
use crate::error::{Error, Result};
use crate::geometry::{affine_hull_key, dual_hyperplane, dot_unchecked, flat_stats, hyperplane_weight, FlatKey, Point, PointSet};
use crate::scalar::{FieldSpec, Scalar};

const Q: FieldSpec = FieldSpec::Rational;

/// Up to this size the lower bound is confirmed with the brute-force counter.
pub const BRUTE_FORCE_MAX_N: usize = 60;

/// Jitter attempts per line-fan point before giving up.
pub const MAX_JITTER_STEPS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "construction", rename_all = "kebab-case")]
pub enum ConstructionSpec {
    /// `n` points, no `s` collinear, `|Π_{1,1}| ≥ n(s−1)²/s`.
    LineFan { n: usize, s: usize },
    /// `n + n/m` points of `[0,1]²` at mutual distance `≥ 1/(3m)`.
    SeparatedGrid { n: usize, m: usize },
    /// `(1,1)` plus `k` points of the line `x + y = 1`.
    Pencil { k: usize },
    /// `(a,0,β)` and `(0,a,1)` for `a = 1..=a_count`.
    HighdimCubic {
        a_count: usize,
        #[serde(serialize_with = "serialize_display")]
        beta: Scalar,
    },
}

fn serialize_display<S: serde::Serializer>(v: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl ConstructionSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ConstructionSpec::LineFan { .. } => "line-fan",
            ConstructionSpec::SeparatedGrid { .. } => "separated-grid",
            ConstructionSpec::Pencil { .. } => "pencil",
            ConstructionSpec::HighdimCubic { .. } => "highdim-cubic",
        }
    }

    pub fn parameters(&self) -> BTreeMap<String, String> {
        let pairs: Vec<(&str, String)> = match self {
            ConstructionSpec::LineFan { n, s } => vec![("n", n.to_string()), ("s", s.to_string())],
            ConstructionSpec::SeparatedGrid { n, m } => vec![
                ("n", n.to_string()),
                ("m", m.to_string()),
                ("epsilon", format!("1/{}", 3 * m)),
            ],
            ConstructionSpec::Pencil { k } => vec![("k", k.to_string())],
            ConstructionSpec::HighdimCubic { a_count, beta } => {
                vec![("a_count", a_count.to_string()), ("beta", beta.to_string())]
            }
        };
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// The `(α, β)` pair the construction is built for.
    pub fn dot_values(&self) -> (Scalar, Scalar) {
        match self {
            ConstructionSpec::LineFan { .. } | ConstructionSpec::Pencil { .. } => (Q.one(), Q.one()),
            ConstructionSpec::SeparatedGrid { .. } => {
                let half = Q.ratio(1, 2).expect("nonzero denominator");
                (half.clone(), half)
            }
            ConstructionSpec::HighdimCubic { beta, .. } => (beta.clone(), beta.clone()),
        }
    }

    pub fn claimed_lower_bound(&self) -> u64 {
        match *self {
            ConstructionSpec::LineFan { n, s } => ((n / s) * (s - 1) * (s - 1)) as u64,
            ConstructionSpec::SeparatedGrid { n, m } => (n * m) as u64,
            ConstructionSpec::Pencil { k } => (k * k) as u64,
            ConstructionSpec::HighdimCubic { a_count, .. } => (a_count as u64).pow(3),
        }
    }
}

impl fmt::Display for ConstructionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.parameters().into_iter().map(|(k, v)| format!("{k}={v}"));
        write!(f, "{}({})", self.name(), params.collect::<Vec<_>>().join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintCheck {
    pub constraint: String,
    pub passed: bool,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionReport {
    pub construction: String,
    pub parameters: BTreeMap<String, String>,
    pub claimed_lower_bound: u64,
    pub measured_pi: u64,
    pub count_method: String,
    pub constraints_verified: Vec<ConstraintCheck>,
}

impl ConstructionReport {
    pub fn all_passed(&self) -> bool {
        self.constraints_verified.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConstraintCheck> {
        self.constraints_verified.iter().filter(|c| !c.passed)
    }
}

fn check(constraint: impl Into<String>, passed: bool, witness: impl Into<String>) -> ConstraintCheck {
    ConstraintCheck {
        constraint: constraint.into(),
        passed,
        witness: witness.into(),
    }
}

fn q(num: i64, den: i64) -> Scalar {
    Q.ratio(num, den).expect("nonzero denominator")
}

fn check_line_fan(n: usize, s: usize) -> Result<()> {
    if s < 2 {
        return Err(Error::InvalidParameter(format!("line-fan needs s >= 2, got s = {s}")));
    }
    if n == 0 || !n.is_multiple_of(s) {
        return Err(Error::InvalidParameter(format!("line-fan needs s | n with n > 0, got n = {n}, s = {s}")));
    }
    Ok(())
}

/// Tracks, for each line spanned so far, how many placed points it holds.
struct CollinearityGuard {
    limit: usize,
    placed: Vec<Point>,
}

impl CollinearityGuard {
    fn new(limit: usize) -> Self {
        CollinearityGuard {
            limit,
            placed: Vec::new(),
        }
    }

    /// Places `p` unless it duplicates a point or puts `limit` points on a
    /// line. Every line through `p` and a placed point is found by grouping
    /// the placed points by the line they span with `p`.
    fn try_place(&mut self, p: Point) -> bool {
        if self.placed.contains(&p) {
            return false;
        }
        let mut through: HashMap<FlatKey, usize> = HashMap::new();
        for other in &self.placed {
            let (key, _) = affine_hull_key(&[other, &p]).expect("same field and dimension");
            *through.entry(key).or_insert(0) += 1;
        }
        if through.values().any(|&c| c + 1 >= self.limit) {
            return false;
        }
        self.placed.push(p);
        true
    }
}

/// Builds the line-fan points without validating them.
pub fn build_line_fan(n: usize, s: usize) -> Result<PointSet> {
    check_line_fan(n, s)?;
    let lines = n / s;
    let mut guard = CollinearityGuard::new(s);
    for i in 1..=lines as i64 {
        if !guard.try_place(Point::from_ints(Q, &[i, i * i])) {
            return Err(Error::Validation(format!("parabola point ({i}, {}) rejected", i * i)));
        }
    }
    for i in 1..=lines as i64 {
        let inv_step = q(1, i + 1);
        for j in 1..s as i64 {
            let base = &Q.from_i64(j) + &inv_step;
            let mut placed = false;
            let mut jitter = q(1, 2);
            for step in 0..=MAX_JITTER_STEPS {
                let x = if step == 0 {
                    base.clone()
                } else {
                    jitter = &jitter * &inv_step;
                    &base + &jitter
                };
                // on the dual line i·x + i²·y = 1
                let y = (&Q.one() - &(&Q.from_i64(i) * &x)).try_div(&Q.from_i64(i * i))?;
                // a crossing with another dual line would use up a slot there
                let crossing = (1..=lines as i64)
                    .any(|k| k != i && (&(&Q.from_i64(k) * &x) + &(&Q.from_i64(k * k) * &y)).is_one());
                if !crossing && guard.try_place(Point::new(vec![x, y])) {
                    placed = true;
                    break;
                }
            }
            if !placed {
                return Err(Error::Validation(format!(
                    "jitter schedule exhausted placing point {j} on line {i}"
                )));
            }
        }
    }
    PointSet::new(Q, 2, guard.placed, format!("line-fan n={n} s={s}"))
}

pub fn gen_line_fan(n: usize, s: usize) -> Result<PointSet> {
    generate(&ConstructionSpec::LineFan { n, s }).map(|(set, _)| set)
}

/// The pieces of the separated-grid construction: `r[j-1]` and the points
/// `q[j-1]` on its dual line.
#[derive(Debug, Clone)]
pub struct SeparatedGrid {
    pub epsilon: Scalar,
    pub r: Vec<Point>,
    pub q: Vec<Vec<Point>>,
}

fn check_separated_grid(n: usize, m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    if n == 0 || !n.is_multiple_of(m) {
        return Err(Error::InvalidParameter(format!("separated-grid needs m | n with n > 0, got n = {n}, m = {m}")));
    }
    if n >= m * m {
        return Err(Error::InvalidParameter(format!(
            "separated-grid needs n < m² (epsilon < n^(-1/2)/3), got n = {n}, m = {m}"
        )));
    }
    Ok(())
}

pub fn separated_grid_parts(n: usize, m: usize) -> Result<SeparatedGrid> {
    check_separated_grid(n, m)?;
    let (mi, lines) = (m as i64, (n / m) as i64);
    let epsilon = q(1, 3 * mi);
    // line j through (0,1) and (1, 1 - 3εj) = (1, 1 - j/m)
    let q_sets = (1..=lines)
        .map(|j| {
            (0..mi)
                .map(|k| {
                    let x = &q(2, 3) + &(&Q.from_i64(k) * &epsilon);
                    let y = &Q.one() - &(&q(j, mi) * &x);
                    Point::new(vec![x, y])
                })
                .collect()
        })
        .collect();
    let r = (1..=lines).map(|j| Point::new(vec![q(j, 2 * mi), q(1, 2)])).collect();
    Ok(SeparatedGrid { epsilon, r, q: q_sets })
}

pub fn build_separated_grid(n: usize, m: usize) -> Result<PointSet> {
    let parts = separated_grid_parts(n, m)?;
    let points = parts.q.into_iter().flatten().chain(parts.r).collect();
    PointSet::new(Q, 2, points, format!("separated-grid n={n} m={m}"))
}

pub fn gen_separated_grid(n: usize, m: usize) -> Result<PointSet> {
    generate(&ConstructionSpec::SeparatedGrid { n, m }).map(|(set, _)| set)
}

pub fn build_pencil(k: usize) -> Result<PointSet> {
    if k == 0 {
        return Err(Error::InvalidParameter("pencil needs k >= 1".into()));
    }
    let points = std::iter::once(Point::from_ints(Q, &[1, 1]))
        .chain((1..=k as i64).map(|j| Point::from_ints(Q, &[j, 1 - j])))
        .collect();
    PointSet::new(Q, 2, points, format!("pencil k={k}"))
}

pub fn gen_pencil(k: usize) -> Result<PointSet> {
    generate(&ConstructionSpec::Pencil { k }).map(|(set, _)| set)
}

pub fn build_highdim_cubic(a_count: usize, beta: &Scalar) -> Result<PointSet> {
    if a_count == 0 {
        return Err(Error::InvalidParameter("highdim-cubic needs a_count >= 1".into()));
    }
    if beta.is_zero() {
        return Err(Error::ZeroScalar("beta"));
    }
    if beta.field() != Q {
        return Err(Error::FieldMismatch { left: Q, right: beta.field() });
    }
    let (zero, one) = (Q.zero(), Q.one());
    let first = (1..=a_count as i64).map(|a| Point::new(vec![Q.from_i64(a), zero.clone(), beta.clone()]));
    let second = (1..=a_count as i64).map(|a| Point::new(vec![zero.clone(), Q.from_i64(a), one.clone()]));
    PointSet::new(Q, 3, first.chain(second).collect(), format!("highdim-cubic a={a_count} beta={beta}"))
}

pub fn gen_highdim_cubic(a_count: usize, beta: &Scalar) -> Result<PointSet> {
    generate(&ConstructionSpec::HighdimCubic {
        a_count,
        beta: beta.clone(),
    })
    .map(|(set, _)| set)
}

fn build(spec: &ConstructionSpec) -> Result<PointSet> {
    match spec {
        ConstructionSpec::LineFan { n, s } => build_line_fan(*n, *s),
        ConstructionSpec::SeparatedGrid { n, m } => build_separated_grid(*n, *m),
        ConstructionSpec::Pencil { k } => build_pencil(*k),
        ConstructionSpec::HighdimCubic { a_count, beta } => build_highdim_cubic(*a_count, beta),
    }
}

/// Builds and validates a construction; fails loudly if any constraint does
/// not hold.
pub fn generate(spec: &ConstructionSpec) -> Result<(PointSet, ConstructionReport)> {
    let set = build(spec)?;
    let report = validate_construction(&set, spec)?;
    if !report.all_passed() {
        let failed: Vec<String> = report
            .failures()
            .map(|c| format!("{} ({})", c.constraint, c.witness))
            .collect();
        return Err(Error::Validation(format!("{spec}: {}", failed.join("; "))));
    }
    Ok((set, report))
}

/// Re-checks every constraint the construction promises on an arbitrary
/// point set.
pub fn validate_construction(set: &PointSet, spec: &ConstructionSpec) -> Result<ConstructionReport> {
    match spec {
        ConstructionSpec::LineFan { n, s } => check_line_fan(*n, *s)?,
        ConstructionSpec::SeparatedGrid { n, m } => check_separated_grid(*n, *m)?,
        ConstructionSpec::Pencil { k } if *k == 0 => {
            return Err(Error::InvalidParameter("pencil needs k >= 1".into()))
        }
        ConstructionSpec::HighdimCubic { beta, .. } if beta.is_zero() => return Err(Error::ZeroScalar("beta")),
        _ => {}
    }
    let (alpha, beta) = spec.dot_values();
    set.check_scalar(&alpha)?;
    let method = if set.len() <= BRUTE_FORCE_MAX_N {
        CountMethod::Brute
    } else {
        CountMethod::Fast
    };
    let measured = count_pi(set, &alpha, &beta, method)?.total;
    let claimed = spec.claimed_lower_bound();
    let mut checks = Vec::new();

    let size_check = |expected: usize| {
        check(
            format!("|P| = {expected}"),
            set.len() == expected,
            format!("|P| = {}", set.len()),
        )
    };

    match spec {
        ConstructionSpec::LineFan { n, s } => {
            checks.push(size_check(*n));
            let stats = flat_stats(set);
            let witness = stats
                .hyperplane_witness
                .as_ref()
                .map_or("no line".to_string(), |k| format!("{} points on {k}", stats.s_star));
            checks.push(check(format!("no {s} points collinear"), stats.s_star < *s, witness));
        }
        ConstructionSpec::SeparatedGrid { n, m } => {
            checks.push(size_check(n + n / m));
            let one = Q.one();
            let outside = set.points().iter().find(|p| {
                p.coords()
                    .iter()
                    .any(|c| c.is_negative() || (&one - c).is_negative())
            });
            checks.push(check(
                "all points in [0,1]²",
                outside.is_none(),
                outside.map_or("none outside".to_string(), |p| format!("{p} outside")),
            ));
            let eps = q(1, 3 * *m as i64);
            let eps_sq = &eps * &eps;
            let closest = closest_pair(set);
            let ok = closest
                .as_ref()
                .is_none_or(|(d, _, _)| !(d - &eps_sq).is_negative());
            let witness = closest.map_or("fewer than two points".to_string(), |(d, a, b)| {
                format!("min squared distance {d} between {a} and {b}")
            });
            checks.push(check(format!("pairwise squared distance >= {eps_sq}"), ok, witness));
            let half = q(1, 2);
            for j in 1..=(n / m) as i64 {
                let r = Point::new(vec![q(j, 2 * *m as i64), half.clone()]);
                let present = set.contains(&r);
                let wt = hyperplane_weight(&dual_hyperplane(&r, &half)?, set)?;
                checks.push(check(
                    format!("r_{j} in P with at least {m} points q having r_{j}.q = 1/2"),
                    present && wt >= *m,
                    format!("r_{j} = {r} present: {present}, weight {wt}"),
                ));
            }
        }
        ConstructionSpec::Pencil { k } => {
            checks.push(size_check(k + 1));
            let apex = Point::from_ints(Q, &[1, 1]);
            checks.push(check("(1,1) in P", set.contains(&apex), apex.to_string()));
            let on_line = set
                .points()
                .iter()
                .filter(|p| dot_unchecked(p, &apex).is_one())
                .count();
            checks.push(check(
                format!("at least {k} points on x + y = 1"),
                on_line >= *k,
                format!("{on_line} points on the line"),
            ));
        }
        ConstructionSpec::HighdimCubic { a_count, .. } => {
            checks.push(size_check(2 * a_count));
        }
    }

    checks.push(check(
        format!("|Π_{{{alpha},{beta}}}| >= {claimed}"),
        measured >= claimed,
        format!("measured {measured} ({method:?})"),
    ));

    Ok(ConstructionReport {
        construction: spec.name().to_string(),
        parameters: spec.parameters(),
        claimed_lower_bound: claimed,
        measured_pi: measured,
        count_method: format!("{method:?}").to_lowercase(),
        constraints_verified: checks,
    })
}

/// Exact minimum squared distance over all pairs (rational points only).
pub fn closest_pair(set: &PointSet) -> Option<(Scalar, Point, Point)> {
    let pts = set.points();
    let mut best: Option<(Scalar, usize, usize)> = None;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let d = squared_distance(&pts[i], &pts[j]);
            if best.as_ref().is_none_or(|(b, _, _)| (&d - b).is_negative()) {
                best = Some((d, i, j));
            }
        }
    }
    best.map(|(d, i, j)| (d, pts[i].clone(), pts[j].clone()))
}

pub fn squared_distance(a: &Point, b: &Point) -> Scalar {
    let diff = Point::new(a.coords().iter().zip(b.coords()).map(|(x, y)| x - y).collect());
    dot_unchecked(&diff, &diff)
}

/// The divisor of `n` closest to `n^exponent`; ties go to the smaller one.
/// Divisors below 3 are skipped: with `s = 2` no set of two or more points
/// qualifies.
pub fn line_fan_s_for(n: usize, exponent: f64) -> Option<usize> {
    let target = (n as f64).powf(exponent);
    (3..=n)
        .filter(|s| n.is_multiple_of(*s))
        .min_by(|a, b| {
            let da = (*a as f64 - target).abs();
            let db = (*b as f64 - target).abs();
            da.total_cmp(&db).then(a.cmp(b))
        })
}

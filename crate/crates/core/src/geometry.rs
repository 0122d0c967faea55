//! Points, hyperplanes, dual hyperplanes and canonical keys for affine flats.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{FieldSpec, Scalar};

/// A point of `F^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point(Vec<Scalar>);

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Point(coords)
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    /// Builds a point from integer coordinates.
    pub fn from_ints(field: FieldSpec, coords: &[i64]) -> Self {
        Point(coords.iter().map(|&v| field.from_i64(v)).collect())
    }

    fn sub(&self, other: &Point) -> Vec<Scalar> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    /// Applies `f` to every coordinate.
    pub fn map(&self, f: impl FnMut(&Scalar) -> Scalar) -> Point {
        Point(self.0.iter().map(f).collect())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(", "))
    }
}

/// Standard bilinear dot product, with field and dimension checks.
pub fn dot(p: &Point, q: &Point) -> Result<Scalar> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    let mut acc: Option<Scalar> = None;
    for (a, b) in p.0.iter().zip(&q.0) {
        let term = a.try_mul(b)?;
        acc = Some(match acc {
            None => term,
            Some(s) => s.try_add(&term)?,
        });
    }
    acc.ok_or_else(|| Error::InvalidParameter("zero-dimensional points".into()))
}

/// Dot product for points already known to share a field and dimension.
pub(crate) fn dot_unchecked(p: &Point, q: &Point) -> Scalar {
    let mut it = p.0.iter().zip(&q.0);
    let (a, b) = it.next().expect("nonempty point");
    it.fold(a * b, |acc, (a, b)| &acc + &(a * b))
}

/// A finite, duplicate-free set of points over one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    field: FieldSpec,
    dim: usize,
    points: Vec<Point>,
    label: String,
}

impl PointSet {
    pub fn new(field: FieldSpec, dim: usize, points: Vec<Point>, label: impl Into<String>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!("dimension must be at least 2, got {dim}")));
        }
        let mut seen = HashSet::with_capacity(points.len());
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            if let Some(bad) = p.coords().iter().find(|c| c.field() != field) {
                return Err(Error::FieldMismatch {
                    left: field,
                    right: bad.field(),
                });
            }
            if !seen.insert(p) {
                return Err(Error::DuplicatePoint(p.to_string()));
            }
        }
        Ok(PointSet {
            field,
            dim,
            points,
            label: label.into(),
        })
    }

    /// Convenience constructor from integer coordinate rows.
    pub fn from_ints(field: FieldSpec, dim: usize, rows: &[&[i64]], label: impl Into<String>) -> Result<Self> {
        let points = rows.iter().map(|r| Point::from_ints(field, r)).collect();
        PointSet::new(field, dim, points, label)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.contains(p)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Errors unless `p` has this set's dimension and field.
    pub fn check_point(&self, p: &Point) -> Result<()> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.dim(),
            });
        }
        if let Some(bad) = p.coords().iter().find(|c| c.field() != self.field) {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: bad.field(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_scalar(&self, s: &Scalar) -> Result<()> {
        if s.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: s.field(),
            });
        }
        Ok(())
    }

    /// Dimension of the affine hull of the whole set (`None` when empty).
    pub fn hull_dim(&self) -> Option<usize> {
        let first = self.points.first()?;
        let mut diffs: Vec<Vec<Scalar>> = self.points[1..].iter().map(|p| p.sub(first)).collect();
        if diffs.is_empty() {
            return Some(0);
        }
        Some(linalg::rref(&mut diffs).len())
    }
}

/// Canonical encoding of an affine flat: its defining system `A x = b` in
/// reduced row-echelon form. Over the rationals each row additionally has
/// its denominators cleared and is divided by its content, leading entry
/// positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlatKey {
    ambient: usize,
    rows: Vec<Vec<KeyEntry>>,
}

// Scalars are not Ord; keys sort on their text form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct KeyEntry(String);

impl FlatKey {
    /// Canonicalizes an augmented system `[A | b]` (each row has `ambient + 1`
    /// entries). Returns `None` if the system is inconsistent.
    fn from_system(ambient: usize, mut rows: Vec<Vec<Scalar>>) -> Option<(FlatKey, Vec<Vec<Scalar>>)> {
        let pivots = linalg::rref(&mut rows);
        if pivots.last() == Some(&ambient) {
            return None;
        }
        for row in rows.iter_mut() {
            linalg::clear_denominators(row);
        }
        let key = FlatKey {
            ambient,
            rows: rows
                .iter()
                .map(|r| r.iter().map(|s| KeyEntry(s.to_string())).collect())
                .collect(),
        };
        Some((key, rows))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Dimension of the flat itself.
    pub fn flat_dim(&self) -> usize {
        self.ambient - self.rows.len()
    }
}

impl fmt::Display for FlatKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return write!(f, "F^{}", self.ambient);
        }
        let eqs = self.rows.iter().map(|row| {
            let (lhs, rhs) = row.split_at(self.ambient);
            let terms = lhs
                .iter()
                .enumerate()
                .filter(|(_, c)| c.0 != "0")
                .map(|(i, c)| match c.0.as_str() {
                    "1" => format!("x{i}"),
                    other => format!("{other}*x{i}"),
                })
                .join(" + ");
            format!("{terms} = {}", rhs[0].0)
        });
        write!(f, "{{{}}}", eqs.format("; "))
    }
}

/// A flat together with its defining equations, so membership can be
/// tested without reparsing the key.
#[derive(Debug, Clone)]
pub struct Flat {
    key: FlatKey,
    equations: Vec<Vec<Scalar>>,
}

impl Flat {
    pub fn key(&self) -> &FlatKey {
        &self.key
    }

    pub fn dim(&self) -> usize {
        self.key.flat_dim()
    }

    pub fn contains(&self, p: &Point) -> bool {
        let d = self.key.ambient;
        self.equations.iter().all(|row| {
            let lhs = row[..d]
                .iter()
                .zip(p.coords())
                .fold(p.coords()[0].field().zero(), |acc, (a, x)| &acc + &(a * x));
            lhs == row[d]
        })
    }
}

/// The hyperplane `{x : normal . x = offset}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperplane {
    normal: Vec<Scalar>,
    offset: Scalar,
}

impl Hyperplane {
    pub fn new(normal: Vec<Scalar>, offset: Scalar) -> Result<Self> {
        if normal.iter().all(Scalar::is_zero) {
            return Err(Error::DegenerateNormal);
        }
        let field = offset.field();
        if let Some(bad) = normal.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch {
                left: field,
                right: bad.field(),
            });
        }
        Ok(Hyperplane { normal, offset })
    }

    pub fn normal(&self) -> &[Scalar] {
        &self.normal
    }

    pub fn offset(&self) -> &Scalar {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn contains(&self, p: &Point) -> bool {
        dot_unchecked(&Point(self.normal.clone()), p) == self.offset
    }

    fn contains_ref(&self, p: &Point) -> bool {
        let mut it = self.normal.iter().zip(p.coords());
        let (a, b) = it.next().expect("nonempty");
        it.fold(a * b, |acc, (a, b)| &acc + &(a * b)) == self.offset
    }

    pub fn flat(&self) -> Flat {
        let mut row = self.normal.clone();
        row.push(self.offset.clone());
        let (key, equations) =
            FlatKey::from_system(self.dim(), vec![row]).expect("nonzero normal is consistent");
        Flat { key, equations }
    }

    pub fn key(&self) -> FlatKey {
        self.flat().key
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Point(self.normal.clone()))?;
        write!(f, " . x = {}", self.offset)
    }
}

/// `h_gamma(p) = {x : p . x = gamma}`.
pub fn dual_hyperplane(p: &Point, gamma: &Scalar) -> Result<Hyperplane> {
    if gamma.is_zero() {
        return Err(Error::ZeroScalar("gamma"));
    }
    Hyperplane::new(p.coords().to_vec(), gamma.clone())
}

fn check_hyperplane(h: &Hyperplane, set: &PointSet) -> Result<()> {
    set.check_scalar(h.offset())?;
    if h.dim() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: h.dim(),
        });
    }
    Ok(())
}

/// `wt(h) = |h ∩ P|`.
pub fn hyperplane_weight(h: &Hyperplane, set: &PointSet) -> Result<usize> {
    check_hyperplane(h, set)?;
    Ok(set.points().iter().filter(|p| h.contains_ref(p)).count())
}

/// Number of incident (point, hyperplane) pairs.
pub fn incidence_count(set: &PointSet, hyperplanes: &[Hyperplane]) -> Result<u64> {
    for h in hyperplanes {
        check_hyperplane(h, set)?;
    }
    Ok(hyperplanes
        .par_iter()
        .map(|h| set.points().iter().filter(|p| h.contains_ref(p)).count() as u64)
        .sum())
}

/// Canonical key and dimension of the affine hull of `points`.
pub fn affine_hull_key(points: &[&Point]) -> Result<(FlatKey, usize)> {
    let flat = affine_hull(points)?;
    let dim = flat.dim();
    Ok((flat.key, dim))
}

/// The affine hull of `points` as a [`Flat`].
pub fn affine_hull(points: &[&Point]) -> Result<Flat> {
    let first = *points
        .first()
        .ok_or_else(|| Error::InvalidParameter("affine hull of no points".into()))?;
    let d = first.dim();
    let field = first
        .coords()
        .first()
        .map(Scalar::field)
        .ok_or_else(|| Error::InvalidParameter("zero-dimensional point".into()))?;
    for p in points {
        if p.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.dim(),
            });
        }
        if let Some(bad) = p.coords().iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch {
                left: field,
                right: bad.field(),
            });
        }
    }
    Ok(hull_unchecked(points, field))
}

fn hull_unchecked(points: &[&Point], field: FieldSpec) -> Flat {
    let first = points[0];
    let d = first.dim();
    let mut diffs: Vec<Vec<Scalar>> = points[1..].iter().map(|p| p.sub(first)).collect();
    let pivots = if diffs.is_empty() {
        Vec::new()
    } else {
        linalg::rref(&mut diffs)
    };
    let normals = linalg::null_space(&diffs, &pivots, d, &field.zero(), &field.one());
    let system = normals
        .into_iter()
        .map(|mut a| {
            let b = dot_unchecked(&Point(a.clone()), first);
            a.push(b);
            a
        })
        .collect();
    let (key, equations) = FlatKey::from_system(d, system).expect("hull system is consistent");
    Flat { key, equations }
}

/// Every flat of dimension `flat_dim` spanned by an affinely independent
/// `(flat_dim + 1)`-subset of the set, mapped to the indices of all points
/// it contains.
pub(crate) fn spanned_flats(set: &PointSet, flat_dim: usize) -> HashMap<FlatKey, BTreeSet<usize>> {
    let n = set.len();
    let m = flat_dim + 1;
    if n < m {
        return HashMap::new();
    }
    let field = set.field();
    let pts = set.points();
    (0..n)
        .into_par_iter()
        .map(|first| {
            let mut local: HashMap<FlatKey, BTreeSet<usize>> = HashMap::new();
            for rest in ((first + 1)..n).combinations(m - 1) {
                let members: Vec<&Point> = std::iter::once(first)
                    .chain(rest.iter().copied())
                    .map(|i| &pts[i])
                    .collect();
                let flat = hull_unchecked(&members, field);
                if flat.dim() != flat_dim {
                    continue;
                }
                let entry = local.entry(flat.key).or_default();
                entry.insert(first);
                entry.extend(rest.iter().copied());
            }
            local
        })
        .reduce(HashMap::new, |mut acc, other| {
            for (k, v) in other {
                acc.entry(k).or_default().extend(v);
            }
            acc
        })
}

/// Largest numbers of points on a hyperplane and on a `(d-2)`-flat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatStats {
    pub s_star: usize,
    pub t_star: usize,
    pub hyperplane_witness: Option<FlatKey>,
    pub codim2_witness: Option<FlatKey>,
}

impl FlatStats {
    /// Smallest `s` with "no `s` points on a hyperplane".
    pub fn admissible_s(&self) -> usize {
        self.s_star + 1
    }

    /// Smallest `t` with "no `t` points on a `(d-2)`-plane".
    pub fn admissible_t(&self) -> usize {
        self.t_star + 1
    }
}

/// Max points of `set` on one flat of dimension `flat_dim`, with a witness.
pub(crate) fn max_on_flat(set: &PointSet, flat_dim: usize) -> (usize, Option<FlatKey>) {
    let n = set.len();
    let Some(hull_dim) = set.hull_dim() else {
        return (0, None);
    };
    if hull_dim <= flat_dim {
        // the whole set fits inside a single flat of this dimension
        let refs: Vec<&Point> = set.points().iter().collect();
        let hull = hull_unchecked(&refs, set.field());
        return (n, Some(hull.key));
    }
    spanned_flats(set, flat_dim)
        .into_iter()
        .map(|(k, v)| (v.len(), k))
        .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)))
        .map_or((0, None), |(c, k)| (c, Some(k)))
}

pub fn flat_stats(set: &PointSet) -> FlatStats {
    let d = set.dim();
    let (s_star, hyperplane_witness) = max_on_flat(set, d - 1);
    let (t_star, codim2_witness) = max_on_flat(set, d - 2);
    FlatStats {
        s_star,
        t_star,
        hyperplane_witness,
        codim2_witness,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HistogramKind {
    /// Weights of the dual family `{h_gamma(p)}`.
    DualF,
    /// Weights of every hyperplane spanned by the set.
    AllG,
}

/// Exact-weight counts `k -> #{h : wt(h) = k}` for a hyperplane family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RichnessHistogram {
    pub kind: HistogramKind,
    pub n: usize,
    pub counts: BTreeMap<usize, usize>,
    /// Some reported `g_k` was clipped to `n`.
    pub capped: bool,
    /// A line holds at least `k_min` points in `d = 3`, so infinitely many
    /// planes are `k`-rich for small `k`.
    pub infinite_detected: bool,
    /// `g'_k` is infinite for every `k <= infinite_up_to`.
    pub infinite_up_to: usize,
    /// Smallest `k` for which the `all_g` counts are meaningful.
    pub k_min: usize,
    /// Points of the set at the origin (their dual is empty, weight 0).
    pub origin_points: usize,
}

impl RichnessHistogram {
    /// Number of family members of weight exactly `k`.
    pub fn exactly(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// Number of family members of weight at least `k` (finite part only).
    pub fn at_least(&self, k: usize) -> usize {
        self.counts.range(k..).map(|(_, c)| c).sum()
    }

    /// `f_k` for the dual family.
    pub fn f(&self, k: usize) -> usize {
        self.at_least(k)
    }

    /// `g'_k`, `None` when infinitely many hyperplanes are `k`-rich.
    pub fn g_prime(&self, k: usize) -> Option<usize> {
        if k <= self.infinite_up_to {
            None
        } else {
            Some(self.at_least(k))
        }
    }

    /// `g_k = min(g'_k, n)`.
    pub fn g(&self, k: usize) -> usize {
        self.g_prime(k).map_or(self.n, |v| v.min(self.n))
    }

    /// `g_{=k} = g_k - g_{k+1}`.
    pub fn g_exactly(&self, k: usize) -> usize {
        self.g(k) - self.g(k + 1)
    }

    pub fn max_weight(&self) -> usize {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }
}

/// Weights of the dual hyperplanes `h_gamma(p)` for every `p` in the set.
/// Points at the origin have no dual hyperplane; they are counted with
/// weight 0 and reported in `origin_points`.
pub fn dual_richness_histogram(set: &PointSet, gamma: &Scalar) -> Result<RichnessHistogram> {
    if gamma.is_zero() {
        return Err(Error::ZeroScalar("gamma"));
    }
    set.check_scalar(gamma)?;
    let pts = set.points();
    let weights: Vec<usize> = pts
        .par_iter()
        .map(|p| pts.iter().filter(|q| dot_unchecked(p, q) == *gamma).count())
        .collect();
    let mut counts = BTreeMap::new();
    for w in weights {
        *counts.entry(w).or_insert(0) += 1;
    }
    Ok(RichnessHistogram {
        kind: HistogramKind::DualF,
        n: set.len(),
        counts,
        capped: false,
        infinite_detected: false,
        infinite_up_to: 0,
        k_min: 0,
        origin_points: pts.iter().filter(|p| p.is_origin()).count(),
    })
}

/// Weights of all hyperplanes spanned by the set, for `d` in `{2, 3}`.
pub fn spanned_richness_histogram(set: &PointSet, k_min: usize) -> Result<RichnessHistogram> {
    let d = set.dim();
    if d > 3 {
        return Err(Error::Unsupported(format!(
            "spanned hyperplane enumeration in dimension {d}"
        )));
    }
    if k_min < d {
        return Err(Error::InvalidParameter(format!(
            "k_min = {k_min} is below the dimension {d}"
        )));
    }
    let n = set.len();
    let mut counts = BTreeMap::new();
    for members in spanned_flats(set, d - 1).values() {
        *counts.entry(members.len()).or_insert(0) += 1;
    }
    // In d = 3 a line with k points lies on infinitely many planes.
    let infinite_up_to = if d == 3 { max_on_flat(set, 1).0 } else { 0 };
    let mut hist = RichnessHistogram {
        kind: HistogramKind::AllG,
        n,
        counts,
        capped: false,
        infinite_detected: infinite_up_to >= k_min,
        infinite_up_to,
        k_min,
        origin_points: 0,
    };
    let top = hist.max_weight().max(infinite_up_to);
    hist.capped = (k_min..=top).any(|k| hist.g_prime(k).is_none_or(|g| g > n));
    Ok(hist)
}

/// True iff no two hyperplanes of the family share `t` or more points.
pub fn k2t_free_check(hyperplanes: &[Hyperplane], set: &PointSet, t: usize) -> Result<bool> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    let mut keys = HashSet::new();
    for h in hyperplanes {
        check_hyperplane(h, set)?;
        if !keys.insert(h.key()) {
            return Err(Error::DuplicateHyperplane);
        }
    }
    let incidence: Vec<Vec<bool>> = hyperplanes
        .iter()
        .map(|h| set.points().iter().map(|p| h.contains_ref(p)).collect())
        .collect();
    Ok(incidence.iter().tuple_combinations().all(|(a, b)| {
        a.iter().zip(b).filter(|(x, y)| **x && **y).count() < t
    }))
}

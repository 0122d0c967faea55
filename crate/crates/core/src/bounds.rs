//! Upper bounds on `|Π_{α,β}|` checked against measured counts.
//!
//! Bounds with explicit constants get a hard pass/fail verdict. Asymptotic
//! bounds have no known constant, so they are only reported as the ratio
//! of the measured count to the envelope expression.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{generate, line_fan_s_for, ConstructionSpec};
use crate::counting::{count_pi_fast, PiDecomposition};
use crate::error::{Error, Result};
use crate::geometry::{dual_richness_histogram, flat_stats, spanned_richness_histogram, FlatStats, Point, PointSet};
use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    ReportOnly,
    Skipped,
}

impl Verdict {
    fn hard(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::ReportOnly => "report_only",
            Verdict::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound_id: String,
    pub n: usize,
    pub d: usize,
    pub field: String,
    pub s: Option<usize>,
    pub t: Option<usize>,
    pub lhs: u64,
    pub rhs: f64,
    /// `lhs / rhs`, absent when the right side is zero.
    pub ratio: Option<f64>,
    pub verdict: Verdict,
    pub params: BTreeMap<String, String>,
    pub note: String,
    pub seed: Option<u64>,
    pub trial: Option<usize>,
}

impl BoundReport {
    fn new(bound_id: &str, n: usize, d: usize, field: FieldSpec) -> Self {
        BoundReport {
            bound_id: bound_id.to_string(),
            n,
            d,
            field: field.label(),
            s: None,
            t: None,
            lhs: 0,
            rhs: 0.0,
            ratio: None,
            verdict: Verdict::ReportOnly,
            params: BTreeMap::new(),
            note: String::new(),
            seed: None,
            trial: None,
        }
    }

    fn values(mut self, lhs: u64, rhs: f64) -> Self {
        self.lhs = lhs;
        self.rhs = rhs;
        self.ratio = (rhs != 0.0).then(|| lhs as f64 / rhs);
        self
    }

    fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    fn verdict(mut self, verdict: Verdict) -> Self {
        self.verdict = verdict;
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    fn skipped(mut self, reason: impl Into<String>) -> Self {
        self.verdict = Verdict::Skipped;
        self.note = reason.into();
        self
    }

    pub fn is_hard(&self) -> bool {
        matches!(self.verdict, Verdict::Pass | Verdict::Fail)
    }
}

/// One CSV row; the column order is the fixed sweep schema.
#[derive(Debug, Serialize)]
struct CsvRow<'a> {
    bound_id: &'a str,
    n: usize,
    d: usize,
    field: &'a str,
    s: Option<usize>,
    t: Option<usize>,
    lhs: u64,
    rhs: f64,
    ratio: Option<f64>,
    verdict: &'static str,
    seed: Option<u64>,
    trial: Option<usize>,
}

pub const CSV_HEADER: &str = "bound_id,n,d,field,s,t,lhs,rhs,ratio,verdict,seed,trial";

/// Writes reports as CSV, sorted by `(bound_id, n, trial)`.
pub fn write_csv<W: Write>(reports: &[BoundReport], out: W) -> Result<()> {
    let mut sorted: Vec<&BoundReport> = reports.iter().collect();
    sorted.sort_by(|a, b| {
        (a.bound_id.as_str(), a.n, a.trial.map_or(0, |t| t + 1))
            .cmp(&(b.bound_id.as_str(), b.n, b.trial.map_or(0, |t| t + 1)))
    });
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(out);
    for r in sorted {
        w.serialize(CsvRow {
            bound_id: &r.bound_id,
            n: r.n,
            d: r.d,
            field: &r.field,
            s: r.s,
            t: r.t,
            lhs: r.lhs,
            rhs: r.rhs,
            ratio: r.ratio,
            verdict: r.verdict.as_str(),
            seed: r.seed,
            trial: r.trial,
        })?;
    }
    if reports.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_json(reports: &[BoundReport]) -> Result<String> {
    Ok(serde_json::to_string_pretty(reports)?)
}

/// `2 s² n`, the explicit bound from the dual-weight argument.
pub fn s2n_rhs(s: usize, n: usize) -> u64 {
    2 * (s as u64).pow(2) * n as u64
}

/// `min(2 s² n, 4 n²)` for planar sets.
pub fn general_plane_rhs(s: usize, n: usize) -> u64 {
    s2n_rhs(s, n).min(4 * (n as u64).pow(2))
}

/// `n^{5/3} + s n`.
pub fn envelope_r2(n: usize, s: usize) -> f64 {
    let n = n as f64;
    n.powf(5.0 / 3.0) + s as f64 * n
}

/// `s n^{3/2 − ε}`.
pub fn envelope_fp2(n: usize, s: usize, eps: f64) -> f64 {
    s as f64 * (n as f64).powf(1.5 - eps)
}

/// `n² (1 + max(0, ln(s n^{−1/2}))) + s t n`. The leading `n²` is the
/// contribution of the weights below `√n`, which the logarithm alone drops
/// once `s < √n`.
pub fn envelope_f3_rudnev(n: usize, s: usize, t: usize) -> f64 {
    let nf = n as f64;
    let log = if n == 0 { 0.0 } else { (s as f64 / nf.sqrt()).ln().max(0.0) };
    nf * nf * (1.0 + log) + (s * t) as f64 * nf
}

/// `n t² + n^{(4d−3)/(2d−1)+ε} t^{(2d−2)/(2d−1)+ε} + s n`.
pub fn envelope_rd(n: usize, d: usize, s: usize, t: usize, eps: f64) -> f64 {
    let (nf, tf, df) = (n as f64, t as f64, d as f64);
    let e1 = (4.0 * df - 3.0) / (2.0 * df - 1.0) + eps;
    let e2 = (2.0 * df - 2.0) / (2.0 * df - 1.0) + eps;
    nf * tf * tf + nf.powf(e1) * tf.powf(e2) + s as f64 * nf
}

/// `n^{5/3} + n ε^{−1}` for ε-separated planar sets.
pub fn envelope_density(n: usize, eps: f64) -> f64 {
    (n as f64).powf(5.0 / 3.0) + n as f64 / eps
}

/// `n² / k³ + n / k`.
pub fn envelope_st(n: usize, k: usize) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    nf * nf / kf.powi(3) + nf / kf
}

/// `t n²`.
pub fn envelope_tn2(n: usize, t: usize) -> f64 {
    t as f64 * (n as f64).powi(2)
}

/// The `γ ∈ {α, β}` maximizing `Σ_p wt(h_γ(p))²` (α on ties), with both sums.
pub fn select_gamma(decomposition: &PiDecomposition) -> (Scalar, u64, u64) {
    let (sa, sb) = (decomposition.sum_sq_alpha(), decomposition.sum_sq_beta());
    if sa >= sb {
        (decomposition.alpha.clone(), sa, sb)
    } else {
        (decomposition.beta.clone(), sb, sa)
    }
}

/// Parameters for the asymptotic envelopes.
#[derive(Debug, Clone)]
pub struct EnvelopeOptions {
    /// Exponent saving for the prime-field planar bound. The true constant
    /// is not known; the default is a placeholder.
    pub eps_fp2: f64,
    /// The `ε` of the real `d`-dimensional bound.
    pub eps_rd: f64,
    /// Minimum pairwise distance, enabling the separated-set envelope.
    pub separation: Option<Scalar>,
}

impl Default for EnvelopeOptions {
    fn default() -> Self {
        EnvelopeOptions {
            eps_fp2: 0.01,
            eps_rd: 0.01,
            separation: None,
        }
    }
}

/// Holds one `(P, α, β)` instance with its dual-weight decomposition and
/// (lazily) its flat statistics, shared by every check.
pub struct Verifier<'a> {
    set: &'a PointSet,
    decomposition: PiDecomposition,
    stats: OnceCell<FlatStats>,
    pi_offset: u64,
}

impl<'a> Verifier<'a> {
    pub fn new(set: &'a PointSet, alpha: &Scalar, beta: &Scalar) -> Result<Self> {
        Ok(Verifier {
            set,
            decomposition: count_pi_fast(set, alpha, beta)?,
            stats: OnceCell::new(),
            pi_offset: 0,
        })
    }

    /// Fault injection: pretend the counter reported `offset` extra triples.
    pub fn with_corrupted_count(mut self, offset: u64) -> Self {
        self.pi_offset = offset;
        self
    }

    pub fn pi(&self) -> u64 {
        self.decomposition.total + self.pi_offset
    }

    pub fn decomposition(&self) -> &PiDecomposition {
        &self.decomposition
    }

    pub fn stats(&self) -> &FlatStats {
        self.stats.get_or_init(|| flat_stats(self.set))
    }

    fn report(&self, id: &str) -> BoundReport {
        BoundReport::new(id, self.set.len(), self.set.dim(), self.set.field())
    }

    /// `|Π| ≤ 2 Σ_k k² f_{=k}` for the dual family of the heavier `γ`,
    /// strict whenever `|Π| > 0`.
    pub fn incidence_lemma(&self) -> Result<BoundReport> {
        let (gamma, sum_sq, other) = select_gamma(&self.decomposition);
        let hist = dual_richness_histogram(self.set, &gamma)?;
        let weighted: u64 = hist
            .counts
            .iter()
            .map(|(k, c)| (*k as u64).pow(2) * *c as u64)
            .sum();
        let rhs = 2 * weighted;
        let pi = self.pi();
        let consistent = weighted == sum_sq;
        let ok = consistent && pi <= rhs && (pi == 0 || pi < rhs);
        let mut report = self
            .report("incidence_lemma")
            .values(pi, rhs as f64)
            .verdict(Verdict::hard(ok))
            .param("gamma", &gamma)
            .param("sum_sq_gamma", sum_sq)
            .param("sum_sq_other", other);
        if !consistent {
            report = report.note(format!(
                "histogram sum {weighted} disagrees with dual weights {sum_sq}"
            ));
        } else if pi == 0 {
            report = report.note("empty count, strictness not required");
        }
        if hist.origin_points > 0 {
            report.note = format!("{} origin point(s) have an empty dual. {}", hist.origin_points, report.note)
                .trim_end()
                .to_string();
        }
        Ok(report)
    }

    /// `|Π| < 2 s² n` with `s = s* + 1`.
    pub fn s2n(&self) -> BoundReport {
        let n = self.set.len();
        let s = self.stats().admissible_s();
        let rhs = s2n_rhs(s, n);
        let pi = self.pi();
        let mut report = self.report("s2n").values(pi, rhs as f64);
        report.s = Some(s);
        if n == 0 {
            report.verdict(Verdict::ReportOnly).note("empty point set")
        } else {
            report.verdict(Verdict::hard(pi < rhs))
        }
    }

    /// `|Π| < min(2 s² n, 4 n²)` for planar sets.
    pub fn general_plane(&self) -> Result<BoundReport> {
        if self.set.dim() != 2 {
            return Err(Error::Unsupported(format!(
                "general plane bound needs d = 2, got d = {}",
                self.set.dim()
            )));
        }
        let n = self.set.len();
        let s = self.stats().admissible_s();
        let rhs = general_plane_rhs(s, n);
        let pi = self.pi();
        let mut report = self.report("general_plane").values(pi, rhs as f64);
        report.s = Some(s);
        Ok(if n == 0 {
            report.verdict(Verdict::Pass).note("empty point set: 0 < min(...) holds vacuously")
        } else {
            report.verdict(Verdict::hard(pi < rhs))
        })
    }

    /// The `2 s² n` part (hard) and the ratio against `t n²` (reported).
    pub fn general_highdim(&self) -> Vec<BoundReport> {
        let n = self.set.len();
        let stats = self.stats();
        let (s, t) = (stats.admissible_s(), stats.admissible_t());
        let pi = self.pi();
        let mut hard = self.report("general_highdim_s2n").values(pi, s2n_rhs(s, n) as f64);
        hard.s = Some(s);
        hard.t = Some(t);
        hard = hard.verdict(Verdict::hard(n == 0 || pi < s2n_rhs(s, n)));
        if n == 0 {
            hard = hard.note("empty point set");
        }
        let mut soft = self
            .report("general_highdim_tn2")
            .values(pi, envelope_tn2(n, t))
            .note("implied constant unknown");
        soft.s = Some(s);
        soft.t = Some(t);
        vec![hard, soft]
    }

    /// Ratios against every asymptotic envelope that applies to this set.
    pub fn envelopes(&self, options: &EnvelopeOptions) -> Vec<BoundReport> {
        let (n, d, field) = (self.set.len(), self.set.dim(), self.set.field());
        let stats = self.stats();
        let (s, t) = (stats.admissible_s(), stats.admissible_t());
        let pi = self.pi();
        let base = |id: &str| {
            let mut r = self.report(id);
            r.s = Some(s);
            r.t = Some(t);
            r
        };
        let mut out = Vec::new();

        let r2 = base("envelope_r2");
        out.push(if d != 2 {
            r2.skipped("planar bound needs d = 2")
        } else if field != FieldSpec::Rational {
            r2.skipped("planar real bound does not hold over finite fields")
        } else {
            r2.values(pi, envelope_r2(n, s))
        });

        let fp2 = base("envelope_fp2").param("eps", options.eps_fp2);
        out.push(match field {
            FieldSpec::Prime(p) if d == 2 && (n as u64) < p => fp2
                .values(pi, envelope_fp2(n, s, options.eps_fp2))
                .note("eps is a user-supplied placeholder, not a known constant"),
            FieldSpec::Prime(p) if d == 2 => fp2.skipped(format!("needs n < p, got n = {n}, p = {p}")),
            FieldSpec::Prime(_) => fp2.skipped("prime-field planar bound needs d = 2"),
            FieldSpec::Rational => fp2.skipped("prime-field planar bound needs a prime field"),
        });

        let rudnev = base("envelope_f3_rudnev");
        out.push(if d != 3 {
            rudnev.skipped("point-plane bound needs d = 3")
        } else if field.is_char_two() {
            rudnev.skipped("needs characteristic p != 2")
        } else {
            match field {
                FieldSpec::Prime(p) if (n as u128) > (p as u128).pow(2) => {
                    rudnev.skipped(format!("needs n = O(p^2), read as n <= p^2; got n = {n}, p = {p}"))
                }
                FieldSpec::Prime(_) => rudnev
                    .values(pi, envelope_f3_rudnev(n, s, t))
                    .note("applicability read as n <= p^2"),
                FieldSpec::Rational => rudnev.values(pi, envelope_f3_rudnev(n, s, t)),
            }
        });

        let rd = base("envelope_rd").param("eps", options.eps_rd);
        out.push(if field == FieldSpec::Rational {
            rd.values(pi, envelope_rd(n, d, s, t, options.eps_rd))
        } else {
            rd.skipped("real d-dimensional bound needs the rational backend")
        });

        let density = base("envelope_density");
        out.push(match &options.separation {
            None => density.skipped("no separation supplied"),
            Some(_) if d != 2 || field != FieldSpec::Rational => {
                density.skipped("separated-set bound needs rational points in the plane")
            }
            Some(eps) => {
                let eps_sq = eps * eps;
                let closest = crate::constructions::closest_pair(self.set);
                let separated = closest.as_ref().is_none_or(|(dist, _, _)| !(dist - &eps_sq).is_negative());
                if !separated {
                    density.skipped(format!("points closer than {eps}"))
                } else {
                    let e = eps.to_f64().unwrap_or(f64::NAN);
                    density.param("separation", eps).values(pi, envelope_density(n, e))
                }
            }
        });
        out
    }

    /// Every applicable check; the spanned-line ratio is included for planar
    /// rational sets.
    pub fn all(&self, options: &EnvelopeOptions) -> Result<Vec<BoundReport>> {
        let mut out = vec![self.incidence_lemma()?, self.s2n()];
        if self.set.dim() == 2 {
            out.push(self.general_plane()?);
        }
        out.extend(self.general_highdim());
        out.extend(self.envelopes(options));
        if self.set.dim() == 2 && self.set.field() == FieldSpec::Rational {
            out.push(st_richness_ratio(self.set)?);
        }
        Ok(out)
    }
}

pub fn check_incidence_lemma(set: &PointSet, alpha: &Scalar, beta: &Scalar) -> Result<BoundReport> {
    Verifier::new(set, alpha, beta)?.incidence_lemma()
}

pub fn check_s2n(set: &PointSet, alpha: &Scalar, beta: &Scalar) -> Result<BoundReport> {
    Ok(Verifier::new(set, alpha, beta)?.s2n())
}

pub fn check_general_plane(set: &PointSet, alpha: &Scalar, beta: &Scalar) -> Result<BoundReport> {
    Verifier::new(set, alpha, beta)?.general_plane()
}

pub fn check_general_highdim(set: &PointSet, alpha: &Scalar, beta: &Scalar) -> Result<Vec<BoundReport>> {
    Ok(Verifier::new(set, alpha, beta)?.general_highdim())
}

pub fn envelope_ratios(
    set: &PointSet,
    alpha: &Scalar,
    beta: &Scalar,
    options: &EnvelopeOptions,
) -> Result<Vec<BoundReport>> {
    Ok(Verifier::new(set, alpha, beta)?.envelopes(options))
}

pub fn verify_all(set: &PointSet, alpha: &Scalar, beta: &Scalar, options: &EnvelopeOptions) -> Result<Vec<BoundReport>> {
    Verifier::new(set, alpha, beta)?.all(options)
}

/// Two non-increasing sequences, `f_k = f[k-1]` and zero past the end,
/// summed up to `horizon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MajorantPair {
    pub f: Vec<u64>,
    pub g: Vec<u64>,
    pub horizon: usize,
}

impl MajorantPair {
    pub fn new(f: Vec<u64>, g: Vec<u64>) -> Self {
        let horizon = f.len().max(g.len());
        MajorantPair { f, g, horizon }
    }
}

fn seq_at(seq: &[u64], k: usize) -> u64 {
    seq.get(k - 1).copied().unwrap_or(0)
}

/// `Σ_{k ≤ horizon} k² (seq_k − seq_{k+1})`.
pub fn weighted_telescoping_sum(seq: &[u64], horizon: usize) -> u64 {
    (1..=horizon)
        .map(|k| (k as u64).pow(2) * (seq_at(seq, k) - seq_at(seq, k + 1)))
        .sum()
}

/// `Σ k²(f_k − f_{k+1}) ≤ Σ k²(g_k − g_{k+1})` for `g ≥ f` both
/// non-increasing. The sum is cut at the horizon, so `g` must vanish past
/// it; otherwise the cut tail breaks the comparison.
pub fn check_majorant_lemma(pair: &MajorantPair) -> Result<BoundReport> {
    let end = pair.f.len().max(pair.g.len()).max(pair.horizon) + 1;
    for (name, seq) in [("f", &pair.f), ("g", &pair.g)] {
        if let Some(k) = (1..end).find(|&k| seq_at(seq, k) < seq_at(seq, k + 1)) {
            return Err(Error::Precondition(format!("{name} increases at k = {k}")));
        }
    }
    if let Some(k) = (1..end).find(|&k| seq_at(&pair.f, k) > seq_at(&pair.g, k)) {
        return Err(Error::Precondition(format!("f exceeds g at k = {k}")));
    }
    if seq_at(&pair.g, pair.horizon + 1) != 0 {
        return Err(Error::Precondition(format!(
            "g is nonzero past the horizon {}",
            pair.horizon
        )));
    }
    let lhs = weighted_telescoping_sum(&pair.f, pair.horizon);
    let rhs = weighted_telescoping_sum(&pair.g, pair.horizon);
    let mut report = BoundReport::new("majorant_lemma", 0, 0, FieldSpec::Rational)
        .values(lhs, rhs as f64)
        .verdict(Verdict::hard(lhs <= rhs));
    report.s = Some(pair.horizon);
    report.field = String::new();
    Ok(report)
}

/// Largest ratio `g'_k / (n²/k³ + n/k)` over `k ≥ 2` for a planar rational set.
pub fn st_richness_ratio(set: &PointSet) -> Result<BoundReport> {
    if set.field() != FieldSpec::Rational {
        return Err(Error::Unsupported(
            "spanned-line ratio is only meaningful over the rationals".into(),
        ));
    }
    if set.dim() != 2 {
        return Err(Error::Unsupported(format!("spanned-line ratio needs d = 2, got {}", set.dim())));
    }
    let n = set.len();
    let hist = spanned_richness_histogram(set, 2)?;
    let best = (2..=hist.max_weight())
        .map(|k| {
            let g = hist.g_prime(k).expect("planar counts are finite");
            (k, g, g as f64 / envelope_st(n, k))
        })
        .max_by(|a, b| a.2.total_cmp(&b.2).then(b.0.cmp(&a.0)));
    let report = BoundReport::new("st_richness", n, 2, FieldSpec::Rational).note("uncapped g'_k; implied constant unknown");
    Ok(match best {
        Some((k, g, _)) => report.values(g as u64, envelope_st(n, k)).param("k", k),
        None => report.note("no spanned lines"),
    })
}

/// The `side × side` integer grid `{0..side}²`.
pub fn integer_grid(side: usize) -> PointSet {
    let q = FieldSpec::Rational;
    let pts = (0..side as i64)
        .flat_map(|x| (0..side as i64).map(move |y| Point::from_ints(q, &[x, y])))
        .collect();
    PointSet::new(q, 2, pts, format!("grid {side}x{side}")).expect("grid points are distinct")
}

/// `F_q²` in full.
pub fn full_plane(q: u64) -> Result<PointSet> {
    let f = FieldSpec::prime(q)?;
    let qi = q as i64;
    let pts = (0..qi)
        .flat_map(|x| (0..qi).map(move |y| Point::from_ints(f, &[x, y])))
        .collect();
    PointSet::new(f, 2, pts, format!("F{q}^2"))
}

fn random_subset(q: u64, n: usize, rng: &mut ChaCha8Rng) -> Result<PointSet> {
    let f = FieldSpec::prime(q)?;
    let total = (q * q) as usize;
    let mut idx = rand::seq::index::sample(rng, total, n).into_vec();
    idx.sort_unstable();
    let qi = q as usize;
    let pts = idx
        .into_iter()
        .map(|i| Point::from_ints(f, &[(i / qi) as i64, (i % qi) as i64]))
        .collect();
    PointSet::new(f, 2, pts, format!("random {n}-subset of F{q}^2"))
}

/// RNG for one trial. The stream id mixes `n` and the trial index so every
/// (size, trial) pair is reproducible regardless of scheduling.
pub fn trial_rng(seed: u64, n: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 32) | trial as u64);
    rng
}

/// Soft band for the mean of `Π q² / n³` in the dense random regime.
pub const COVERT_SENGER_BAND: (f64, f64) = (0.8, 1.2);

/// Samples uniform `n`-subsets of `F_q²` and reports `Π_{α,β} · q² / n³`,
/// one row per trial. See [`mean_ratio_by_n`] for the summary.
pub fn covert_senger_sweep(
    q: u64,
    n_list: &[usize],
    trials: usize,
    seed: u64,
    alpha: i64,
    beta: i64,
) -> Result<Vec<BoundReport>> {
    let field = FieldSpec::prime(q)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let (a, b) = (field.from_i64(alpha), field.from_i64(beta));
    let mut out = Vec::new();
    for &n in n_list {
        if n as u64 > q * q {
            return Err(Error::InvalidParameter(format!("n = {n} exceeds q^2 = {}", q * q)));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        let expected = (n as f64).powi(3) / (q as f64).powi(2);
        let counts: Vec<u64> = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let set = random_subset(q, n, &mut trial_rng(seed, n, trial))?;
                Ok(count_pi_fast(&set, &a, &b)?.total)
            })
            .collect::<Result<_>>()?;
        for (trial, &pi) in counts.iter().enumerate() {
            let mut r = BoundReport::new("covert_senger", n, 2, field)
                .values(pi, expected)
                .param("q", q);
            r.seed = Some(seed);
            r.trial = Some(trial);
            out.push(r);
        }
    }
    Ok(out)
}

/// Mean ratio per `n`, as `(n, mean, inside_soft_band)`.
pub fn mean_ratio_by_n(reports: &[BoundReport]) -> Vec<(usize, f64, bool)> {
    let mut by_n: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for r in reports {
        if let Some(ratio) = r.ratio {
            let e = by_n.entry(r.n).or_default();
            e.0 += ratio;
            e.1 += 1;
        }
    }
    by_n.into_iter()
        .map(|(n, (sum, c))| {
            let mean = sum / c as f64;
            (n, mean, (COVERT_SENGER_BAND.0..=COVERT_SENGER_BAND.1).contains(&mean))
        })
        .collect()
}

/// Line-fan sets with `s` the divisor of `n` nearest `n^exponent`, reported
/// against `n^{5/3} + s n`.
pub fn envelope_trend_line_fan(n_list: &[usize], exponent: f64) -> Result<Vec<BoundReport>> {
    n_list
        .iter()
        .map(|&n| {
            let s = line_fan_s_for(n, exponent)
                .ok_or_else(|| Error::InvalidParameter(format!("n = {n} has no divisor >= 3")))?;
            let (set, report) = generate(&ConstructionSpec::LineFan { n, s })?;
            let mut r = BoundReport::new("envelope_trend_r2", n, 2, set.field())
                .values(report.measured_pi, envelope_r2(n, s))
                .param("construction", "line-fan")
                .param("exponent", exponent);
            r.s = Some(s);
            Ok(r)
        })
        .collect()
}

/// Spanned-line ratios on `√n × √n` integer grids.
pub fn st_ratio_grid_sweep(n_list: &[usize]) -> Result<Vec<BoundReport>> {
    n_list
        .iter()
        .map(|&n| {
            let side = (n as f64).sqrt().round() as usize;
            if side * side != n || side == 0 {
                return Err(Error::InvalidParameter(format!("n = {n} is not a positive square")));
            }
            st_richness_ratio(&integer_grid(side)).map(|r| r.param("grid_side", side))
        })
        .collect()
}

/// max/min of the ratios, `None` if any is missing or zero.
pub fn ratio_spread(reports: &[BoundReport]) -> Option<f64> {
    let ratios: Option<Vec<f64>> = reports.iter().map(|r| r.ratio).collect();
    let ratios = ratios?;
    let max = ratios.iter().copied().fold(f64::MIN, f64::max);
    let min = ratios.iter().copied().fold(f64::MAX, f64::min);
    (min > 0.0).then(|| max / min)
}

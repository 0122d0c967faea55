use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dotpairs::bounds::{
    covert_senger_sweep, envelope_trend_line_fan, mean_ratio_by_n, ratio_spread, st_ratio_grid_sweep, to_json,
    write_csv, BoundReport, EnvelopeOptions, Verdict, Verifier,
};
use dotpairs::constructions::{generate, ConstructionSpec};
use dotpairs::io::{load_point_set, save_point_set};
use dotpairs::{
    count_pi_bruteforce, count_pi_fast, dual_richness_histogram, flat_stats, spanned_richness_histogram, Error,
    FieldSpec, PointSet, RichnessHistogram, Scalar,
};

const EXIT_PARAM: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_DISAGREE: u8 = 3;

#[derive(Parser)]
#[command(name = "dotpairs", version, about = "Count and bound pairs of dot products in finite point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a construction and write it as a point-set file.
    Gen {
        #[command(subcommand)]
        construction: GenCommand,
        /// Output path (stdout if omitted).
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Count |Π_{α,β}(P)|.
    Count {
        input: PathBuf,
        #[command(flatten)]
        dots: Dots,
        #[arg(long, value_enum, default_value_t = Method::Fast)]
        method: Method,
        /// Print the per-point decomposition.
        #[arg(long)]
        verbose: bool,
    },
    /// Flat statistics and richness histograms.
    Stats {
        input: PathBuf,
        /// Print the dual histogram f for this γ.
        #[arg(long)]
        gamma: Option<String>,
        /// Print the spanned-hyperplane histogram g (d <= 3).
        #[arg(long)]
        g: bool,
        /// Smallest weight enumerated for the g histogram (default: d).
        #[arg(long)]
        k_min: Option<usize>,
    },
    /// Run every applicable bound check.
    Verify {
        input: PathBuf,
        #[command(flatten)]
        dots: Dots,
        /// Exponent saving used for the prime-field planar envelope (placeholder, no known value).
        #[arg(long, default_value_t = 0.01)]
        eps_fp2: f64,
        /// The ε of the real d-dimensional envelope.
        #[arg(long, default_value_t = 0.01)]
        eps_rd: f64,
        /// Minimum pairwise distance, enables the separated-set envelope.
        #[arg(long)]
        separation: Option<String>,
        /// Write the reports as JSON ("-" for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the reports as CSV ("-" for stdout).
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, hide = true, default_value_t = 0)]
        inject_fault: u64,
    },
    /// Deterministic experiment sweeps, written as CSV.
    Sweep {
        #[command(subcommand)]
        kind: SweepCommand,
        /// CSV output path (stdout if omitted).
        #[arg(long, global = true)]
        csv: Option<PathBuf>,
        #[arg(long, global = true, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct Dots {
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    beta: String,
}

impl Dots {
    fn parse(&self, field: FieldSpec) -> dotpairs::Result<(Scalar, Scalar)> {
        Ok((Scalar::parse(&self.alpha, field)?, Scalar::parse(&self.beta, field)?))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Fast,
    Brute,
    Both,
}

#[derive(Subcommand)]
enum GenCommand {
    LineFan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
    },
    SeparatedGrid {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    Pencil {
        #[arg(long)]
        k: usize,
    },
    HighdimCubic {
        #[arg(long)]
        a: usize,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        beta: String,
    },
}

#[derive(Subcommand)]
enum SweepCommand {
    /// Random subsets of F_q² against n³/q².
    CovertSenger {
        #[arg(long)]
        q: u64,
        /// Comma-separated sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        alpha: i64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        beta: i64,
    },
    /// Spanned-line richness of square integer grids.
    StRatio {
        /// Comma-separated perfect squares.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
    },
    /// A construction family against n^{5/3} + s n.
    EnvelopeTrend {
        #[arg(long, default_value = "line-fan")]
        construction: String,
        /// s ≈ n^exponent; accepts "2/3" or a decimal.
        #[arg(long, default_value = "2/3")]
        s_exponent: String,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
    },
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Validation(_) => EXIT_VALIDATION,
            _ => EXIT_PARAM,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Error::from(e).into()
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARAM } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Gen { construction, out } => cmd_gen(construction, out.as_deref()),
        Command::Count {
            input,
            dots,
            method,
            verbose,
        } => cmd_count(&input, &dots, method, verbose),
        Command::Stats { input, gamma, g, k_min } => cmd_stats(&input, gamma.as_deref(), g, k_min),
        Command::Verify {
            input,
            dots,
            eps_fp2,
            eps_rd,
            separation,
            json,
            csv,
            inject_fault,
        } => cmd_verify(&input, &dots, eps_fp2, eps_rd, separation.as_deref(), json.as_deref(), csv.as_deref(), inject_fault),
        Command::Sweep { kind, csv, seed } => cmd_sweep(kind, csv.as_deref(), seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn cmd_gen(construction: GenCommand, out: Option<&Path>) -> CmdResult {
    let spec = match construction {
        GenCommand::LineFan { n, s } => ConstructionSpec::LineFan { n, s },
        GenCommand::SeparatedGrid { n, m } => ConstructionSpec::SeparatedGrid { n, m },
        GenCommand::Pencil { k } => ConstructionSpec::Pencil { k },
        GenCommand::HighdimCubic { a, beta } => ConstructionSpec::HighdimCubic {
            a_count: a,
            beta: Scalar::parse(&beta, FieldSpec::Rational)?,
        },
    };
    let (set, report) = generate(&spec)?;
    match out {
        Some(path) => {
            save_point_set(&set, path)?;
            println!("{spec}: {} points written to {}", set.len(), path.display());
        }
        None => print!("{}", dotpairs::io::point_set_to_json(&set)?),
    }
    let summary = format!(
        "Π = {} (claimed >= {}, {} counter); {} constraints passed",
        report.measured_pi,
        report.claimed_lower_bound,
        report.count_method,
        report.constraints_verified.len()
    );
    if out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn load(path: &Path) -> Result<PointSet, Failure> {
    load_point_set(path).map_err(|e| Failure {
        code: EXIT_PARAM,
        message: format!("{}: {e}", path.display()),
    })
}

fn cmd_count(input: &Path, dots: &Dots, method: Method, verbose: bool) -> CmdResult {
    let set = load(input)?;
    let (alpha, beta) = dots.parse(set.field())?;
    let fast = match method {
        Method::Brute => None,
        _ => Some(count_pi_fast(&set, &alpha, &beta)?),
    };
    let brute = match method {
        Method::Fast => None,
        _ => Some(count_pi_bruteforce(&set, &alpha, &beta)?.total),
    };
    if let (Some(f), Some(b)) = (&fast, brute) {
        if f.total != b {
            return Err(Failure {
                code: EXIT_DISAGREE,
                message: format!("counters disagree: fast = {}, brute = {b}", f.total),
            });
        }
    }
    let total = fast.as_ref().map_or_else(|| brute.unwrap_or(0), |f| f.total);
    println!("{total}");
    if verbose {
        let decomposition = match fast {
            Some(f) => f,
            None => count_pi_fast(&set, &alpha, &beta)?,
        };
        for (p, w) in set.points().iter().zip(&decomposition.per_point) {
            println!("{p}\twt_alpha={}\twt_beta={}\tpi={}", w.wt_alpha, w.wt_beta, w.pi);
        }
    }
    Ok(())
}

fn print_histogram(name: &str, hist: &RichnessHistogram) {
    for (k, c) in &hist.counts {
        println!("{name}_={k}: {c}");
    }
}

fn cmd_stats(input: &Path, gamma: Option<&str>, g: bool, k_min: Option<usize>) -> CmdResult {
    let set = load(input)?;
    let d = set.dim();
    println!("n: {}", set.len());
    println!("d: {d}");
    println!("field: {}", set.field().label());
    let stats = flat_stats(&set);
    println!("s_star: {}", stats.s_star);
    if let Some(w) = &stats.hyperplane_witness {
        println!("s_star_witness: {w}");
    }
    if d >= 3 {
        println!("t_star: {}", stats.t_star);
        if let Some(w) = &stats.codim2_witness {
            println!("t_star_witness: {w}");
        }
    }
    if let Some(gamma) = gamma {
        let gamma = Scalar::parse(gamma, set.field())?;
        let hist = dual_richness_histogram(&set, &gamma)?;
        println!("dual histogram (gamma = {gamma}):");
        print_histogram("f", &hist);
        if hist.origin_points > 0 {
            println!("origin_points: {}", hist.origin_points);
        }
    }
    if g {
        let hist = spanned_richness_histogram(&set, k_min.unwrap_or(d))?;
        println!("spanned histogram (k >= {}):", hist.k_min);
        print_histogram("g", &hist);
        println!("capped: {}", hist.capped);
        println!("infinite_detected: {}", hist.infinite_detected);
        if hist.infinite_detected {
            println!("infinite_up_to: {}", hist.infinite_up_to);
        }
    }
    Ok(())
}

fn write_to(path: &Path, text: &[u8]) -> io::Result<()> {
    if path == Path::new("-") {
        io::stdout().write_all(text)
    } else {
        fs::write(path, text)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    input: &Path,
    dots: &Dots,
    eps_fp2: f64,
    eps_rd: f64,
    separation: Option<&str>,
    json: Option<&Path>,
    csv: Option<&Path>,
    inject_fault: u64,
) -> CmdResult {
    let set = load(input)?;
    let (alpha, beta) = dots.parse(set.field())?;
    for (name, eps) in [("eps-fp2", eps_fp2), ("eps-rd", eps_rd)] {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::InvalidParameter(format!("--{name} must be positive")).into());
        }
    }
    let separation = separation.map(|s| Scalar::parse(s, set.field())).transpose()?;
    if separation.as_ref().is_some_and(|s| s.is_zero() || s.is_negative()) {
        return Err(Error::InvalidParameter("--separation must be positive".into()).into());
    }
    let options = EnvelopeOptions {
        eps_fp2,
        eps_rd,
        separation,
    };
    let reports = Verifier::new(&set, &alpha, &beta)?
        .with_corrupted_count(inject_fault)
        .all(&options)?;
    if let Some(path) = json {
        let mut text = to_json(&reports)?;
        text.push('\n');
        write_to(path, text.as_bytes())?;
    }
    if let Some(path) = csv {
        let mut buf = Vec::new();
        write_csv(&reports, &mut buf)?;
        write_to(path, &buf)?;
    }
    let to_stdout = [json, csv].iter().any(|p| *p == Some(Path::new("-")));
    if !to_stdout {
        print_report_table(&reports);
    }
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| r.verdict == Verdict::Fail)
        .map(|r| r.bound_id.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_VALIDATION,
            message: format!("hard check failed: {}", failed.join(", ")),
        })
    }
}

fn print_report_table(reports: &[BoundReport]) {
    for r in reports {
        let ratio = r.ratio.map_or("-".to_string(), |x| format!("{x:.4}"));
        let mut line = format!(
            "{:<22} {:<11} lhs={} rhs={} ratio={}",
            r.bound_id,
            r.verdict.as_str(),
            r.lhs,
            r.rhs,
            ratio
        );
        if !r.note.is_empty() {
            line.push_str(&format!("  ({})", r.note));
        }
        println!("{line}");
    }
}

fn parse_exponent(text: &str) -> Result<f64, Failure> {
    let value = match text.split_once('/') {
        Some((a, b)) => match (a.trim().parse::<f64>(), b.trim().parse::<f64>()) {
            (Ok(a), Ok(b)) if b != 0.0 => Some(a / b),
            _ => None,
        },
        None => text.trim().parse::<f64>().ok(),
    };
    value
        .filter(|v| v.is_finite() && *v > 0.0 && *v <= 1.0)
        .ok_or_else(|| Error::InvalidParameter(format!("bad exponent {text:?}, expected a value in (0, 1]")).into())
}

fn cmd_sweep(kind: SweepCommand, csv: Option<&Path>, seed: u64) -> CmdResult {
    let (mut reports, summary) = match kind {
        SweepCommand::CovertSenger {
            q,
            n,
            trials,
            alpha,
            beta,
        } => {
            let reports = covert_senger_sweep(q, &n, trials, seed, alpha, beta)?;
            let summary = mean_ratio_by_n(&reports)
                .into_iter()
                .map(|(n, mean, inside)| {
                    let band = if inside { "inside" } else { "outside" };
                    format!("n={n} mean_ratio={mean:.4} ({band} soft band [0.8, 1.2])")
                })
                .collect();
            (reports, summary)
        }
        SweepCommand::StRatio { n } => {
            let reports = st_ratio_grid_sweep(&n)?;
            let summary = reports
                .iter()
                .map(|r| format!("n={} max_ratio={:.4}", r.n, r.ratio.unwrap_or(0.0)))
                .collect();
            (reports, summary)
        }
        SweepCommand::EnvelopeTrend {
            construction,
            s_exponent,
            n,
        } => {
            if construction != "line-fan" {
                return Err(Error::InvalidParameter(format!(
                    "envelope-trend supports line-fan only, got {construction}"
                ))
                .into());
            }
            let exponent = parse_exponent(&s_exponent)?;
            let reports = envelope_trend_line_fan(&n, exponent)?;
            let mut summary: Vec<String> = reports
                .iter()
                .map(|r| format!("n={} s={} ratio={:.4}", r.n, r.s.unwrap_or(0), r.ratio.unwrap_or(0.0)))
                .collect();
            if let Some(spread) = ratio_spread(&reports) {
                summary.push(format!("max/min ratio = {spread:.4}"));
            }
            (reports, summary)
        }
    };
    for r in &mut reports {
        r.seed = Some(seed);
    }
    let mut buf = Vec::new();
    write_csv(&reports, &mut buf)?;
    match csv {
        Some(path) if path != Path::new("-") => {
            fs::write(path, &buf)?;
            for line in summary {
                println!("{line}");
            }
        }
        _ => {
            io::stdout().write_all(&buf)?;
            for line in summary {
                eprintln!("{line}");
            }
        }
    }
    Ok(())
}

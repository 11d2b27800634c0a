//! The `metric-ramsey` command line.
//!
//! Every command prints one JSON document (or writes it with `--out`, via
//! a temporary file and rename). `--manifest` additionally records the
//! command, its parameters, the seed and the files written; feeding the
//! manifest to [`manifest_argv`] reproduces the run.
//!
//! Exit status: 0 success, 1 a check found a counterexample, 2 usage or
//! input error, 3 internal error.

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{bipartite_lower_bound, knn_cp_bounds, roundness_slack, BoundError};
use crate::embeddings::{
    embed_012_l2, embed_knn_l2, embed_knn_lp, embed_knn_lp_basic, knn_lp_distortion_formula, schoenberg_test,
    EmbedError, PsdScalar, PsdWitness, SchoenbergCertificate,
};
use crate::hardness::uc_construction::{all_margins, quadruple_gaps};
use crate::hardness::{
    build_l2_hard_metric, build_uc_hard_metric_with, lemma_gap_in, verify_no_isometric_quadruple, ConvexityModulus,
    EtaSchedule, HardnessError, ModulusError, QuadrupleReport,
};
use crate::json::{
    graph_to_json, index_array, metric_from_json, metric_to_json, pointset_to_json, read_json, real_value, to_text,
    write_atomic, AnyMetric, FormatError,
};
use crate::metric::{distortion_identity, knn_metric, metric_from_graph_012, DistortionReport, Graph, MetricError, MetricSpace};
use crate::ramsey::{
    almost_disjoint_family, build_universal_metric, distortion_certificate_bound, iso_ramsey_l2,
    miss_probability_bound, monte_carlo_universality, sample_gn_half, RamseyError, UniversalityReport,
};
use crate::scalar::{format_rational, Rational, Scalar};
use crate::wide::Wide;

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "metric-ramsey", version, about = "Finite metric embeddings, roundness bounds and Ramsey-type searches")]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Write a run manifest here.
    #[arg(long, global = true, value_name = "PATH")]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate metrics.
    #[command(subcommand)]
    Gen(Gen),
    /// Explicit embeddings and their distortion.
    #[command(subcommand)]
    Embed(Embed),
    /// Roundness and distortion lower bounds.
    #[command(subcommand)]
    Bound(Bound),
    /// Validate metrics and run embeddability tests.
    #[command(subcommand)]
    Check(Check),
    /// Spaces with no isometrically embeddable quadruple.
    #[command(subcommand)]
    Hard(Hard),
    /// Set families, universal graphs and subspace searches.
    #[command(subcommand)]
    Ramsey(Ramsey),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Real,
    Rational,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScheduleArg {
    SlackBounded,
    Halving,
}

impl From<ScheduleArg> for EtaSchedule {
    fn from(s: ScheduleArg) -> Self {
        match s {
            ScheduleArg::SlackBounded => EtaSchedule::SlackBounded,
            ScheduleArg::Halving => EtaSchedule::Halving,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TargetArg {
    Path,
    Complete,
    Empty,
}

#[derive(Debug, Subcommand)]
enum Gen {
    /// The `K_{n,n}` metric.
    #[command(name = "knn")]
    Knn {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Real)]
        kind: KindArg,
    },
    /// The {0,1,2} metric of a `G(n, 1/2)` sample.
    #[command(name = "graph012")]
    Graph012 {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The exact metric with no quadruple embedding in `ℓ_2`.
    #[command(name = "l2hard")]
    L2Hard {
        #[arg(long)]
        n: usize,
    },
    /// The metric violating the four-point convexity lemma everywhere.
    #[command(name = "uchard")]
    UcHard {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "l2")]
        modulus: String,
        #[arg(long, value_enum, default_value_t = ScheduleArg::SlackBounded)]
        schedule: ScheduleArg,
        #[arg(long, value_enum, default_value_t = KindArg::Rational)]
        kind: KindArg,
    },
}

#[derive(Debug, Subcommand)]
enum Embed {
    /// `K_{n,n}` into `ℓ_2`.
    #[command(name = "knn-l2")]
    KnnL2 {
        #[arg(long)]
        n: usize,
    },
    /// `K_{n,n}` into `ℓ_p` through Hadamard rows.
    #[command(name = "knn-lp")]
    KnnLp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        /// The `2m`-dimensional embedding instead of the `2m − 1` one.
        #[arg(long)]
        basic: bool,
    },
    /// A {0,1,2} metric into `ℓ_2` through a PSD square root.
    #[command(name = "psd012")]
    Psd012 {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum Bound {
    /// Roundness slack of `{"xs": [...], "ys": [...]}`.
    Roundness {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: f64,
    },
    /// Lower and upper bounds on `c_p(K_{n,n})`.
    Knn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// Bipartition lower bound on the distortion of a metric.
    Bipartite {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        side_a: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        side_b: Vec<usize>,
        #[arg(long)]
        p: f64,
    },
}

#[derive(Debug, Subcommand)]
enum Check {
    /// Validate a metric file.
    Metric {
        #[arg(long)]
        input: PathBuf,
    },
    /// Schoenberg test for isometric embeddability in `ℓ_2`.
    Schoenberg {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        base: usize,
    },
    /// Four-point convexity lemma gaps of every quadruple (or one).
    Convexity {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "l2")]
        modulus: String,
        #[arg(long, value_delimiter = ',')]
        quad: Option<Vec<usize>>,
    },
}

#[derive(Debug, Subcommand)]
enum Hard {
    /// Build the `ℓ_2`-hard metric with its certificates.
    #[command(name = "gen-l2")]
    GenL2 {
        #[arg(long)]
        n: usize,
    },
    /// Build the uniformly convex hard metric with margins and gaps.
    #[command(name = "gen-uc")]
    GenUc {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "l2")]
        modulus: String,
        #[arg(long, value_enum, default_value_t = ScheduleArg::SlackBounded)]
        schedule: ScheduleArg,
    },
    /// Certify that no quadruple of a metric embeds in `ℓ_2`.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum Ramsey {
    /// Almost-disjoint family of k-subsets of s points.
    Family {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
    },
    /// Search `G(n, 1/2)` for a `(K_{k,k}, s)`-universal graph.
    Universal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 50)]
        attempts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo miss rate of a k-vertex target in `G(s, 1/2)`.
    Mc {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = TargetArg::Path)]
        target: TargetArg,
    },
    /// Largest subspace embedding isometrically in `ℓ_2`.
    Iso {
        #[arg(long)]
        input: PathBuf,
    },
    /// Largest subspace passing the bipartition certificate screen.
    Screen {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        alpha: f64,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

fn usage(e: impl fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn internal(e: impl fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        usage(e)
    }
}

impl From<MetricError> for CliError {
    fn from(e: MetricError) -> Self {
        usage(e)
    }
}

impl From<EmbedError> for CliError {
    fn from(e: EmbedError) -> Self {
        usage(e)
    }
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        usage(e)
    }
}

impl From<ModulusError> for CliError {
    fn from(e: ModulusError) -> Self {
        usage(e)
    }
}

impl From<HardnessError> for CliError {
    fn from(e: HardnessError) -> Self {
        match e {
            HardnessError::SearchFailure { .. }
            | HardnessError::ShrinkLimitExceeded(_)
            | HardnessError::InverseArgumentOutOfRange(_)
            | HardnessError::Internal(_) => internal(e),
            _ => usage(e),
        }
    }
}

impl From<RamseyError> for CliError {
    fn from(e: RamseyError) -> Self {
        match e {
            RamseyError::NoPrimeFound { .. } => internal(e),
            _ => usage(e),
        }
    }
}

/// A command's JSON result and its exit status.
struct Outcome {
    value: Value,
    status: i32,
    seed: Option<u64>,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, status: EXIT_OK, seed: None }
    }

    fn seeded(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    fn with_status(mut self, status: i32) -> Self {
        self.status = status;
        self
    }
}

/// Runs the command line `argv` (program name first) and returns the exit
/// status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, &args) {
        Ok(status) => status,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

fn execute(cli: &Cli, args: &[OsString]) -> Result<i32, CliError> {
    let outcome = match &cli.command {
        Command::Gen(c) => gen(c)?,
        Command::Embed(c) => embed(c)?,
        Command::Bound(c) => bound(c)?,
        Command::Check(c) => check(c)?,
        Command::Hard(c) => hard(c)?,
        Command::Ramsey(c) => ramsey(c)?,
    };
    let text = to_text(&outcome.value);
    let mut outputs = Vec::new();
    match &cli.out {
        Some(path) => {
            write_atomic(path, &text)?;
            outputs.push(path.display().to_string());
        }
        None => print!("{text}"),
    }
    if let Some(path) = &cli.manifest {
        let manifest = build_manifest(args, outcome.seed, &outputs);
        write_atomic(path, &to_text(&manifest))?;
    }
    Ok(outcome.status)
}

fn is_flag(token: &str) -> bool {
    token.starts_with("--")
}

/// `(command words, [(flag, value)])` of an argument list, without the
/// program name, `--out` and `--manifest`.
fn split_argv(args: &[OsString]) -> (Vec<String>, Vec<(String, Option<String>)>) {
    let tokens: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut words = Vec::new();
    let mut params = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let t = &tokens[i];
        if let Some(flag) = t.strip_prefix("--") {
            let (name, value) = match flag.split_once('=') {
                Some((n, v)) => (n.to_owned(), Some(v.to_owned())),
                None if i + 1 < tokens.len() && !is_flag(&tokens[i + 1]) => {
                    i += 1;
                    (flag.to_owned(), Some(tokens[i].clone()))
                }
                None => (flag.to_owned(), None),
            };
            if name != "out" && name != "manifest" {
                params.push((name, value));
            }
        } else {
            words.push(t.clone());
        }
        i += 1;
    }
    (words, params)
}

fn build_manifest(args: &[OsString], seed: Option<u64>, outputs: &[String]) -> Value {
    let (words, params) = split_argv(args);
    let parameters: Vec<Value> = params.into_iter().map(|(name, value)| json!({ "name": name, "value": value })).collect();
    json!({
        "command": words.join(" "),
        "parameters": parameters,
        "seed": seed,
        "tool_version": concat!("metric-ramsey ", env!("CARGO_PKG_VERSION")),
        "outputs": outputs,
    })
}

/// The argument list that replays a manifest, writing its output to `out`.
pub fn manifest_argv(manifest: &Value, out: &Path) -> Result<Vec<String>, String> {
    let command = manifest.get("command").and_then(Value::as_str).ok_or("manifest has no command")?;
    let params = manifest.get("parameters").and_then(Value::as_array).ok_or("manifest has no parameters")?;
    let mut argv = vec!["metric-ramsey".to_owned()];
    argv.extend(command.split_whitespace().map(str::to_owned));
    for p in params {
        let name = p.get("name").and_then(Value::as_str).ok_or("parameter without a name")?;
        match p.get("value").and_then(Value::as_str) {
            Some(v) => argv.push(format!("--{name}={v}")),
            None => argv.push(format!("--{name}")),
        }
    }
    argv.push(format!("--out={}", out.display()));
    Ok(argv)
}

fn load_metric(path: &Path) -> Result<AnyMetric, CliError> {
    Ok(metric_from_json(&read_json(path)?)?)
}

fn wide_value(x: Wide) -> Value {
    let f = x.to_f64();
    if f.is_finite() && (f != 0.0 || x.is_zero()) {
        real_value(f)
    } else {
        json!(x.to_string())
    }
}

fn pair_value(p: Option<(usize, usize)>) -> Value {
    p.map_or(Value::Null, |(a, b)| json!([a, b]))
}

fn distortion_value(r: &DistortionReport) -> Value {
    json!({
        "expansion": real_value(r.expansion),
        "contraction": real_value(r.contraction),
        "distortion": real_value(r.distortion),
        "expansion_pair": pair_value(r.expansion_pair),
        "contraction_pair": pair_value(r.contraction_pair),
    })
}

fn certificate_value<S: Scalar>(c: &SchoenbergCertificate<S>) -> Value {
    let witness = match &c.witness {
        None => Value::Null,
        Some(PsdWitness::NegativeMinor { indices, minor }) => json!({
            "type": "negative_minor",
            "indices": index_array(indices),
            "minor": format_rational(minor),
        }),
        Some(PsdWitness::Eigenvalue { min, threshold }) => json!({
            "type": "eigenvalue",
            "min": real_value(*min),
            "threshold": real_value(*threshold),
        }),
    };
    let matrix: Vec<Value> = c.matrix.iter().map(|row| Value::Array(row.iter().map(S::to_json).collect())).collect();
    json!({
        "base": c.base,
        "points": index_array(&c.points),
        "verdict": c.verdict.as_str(),
        "witness": witness,
        "matrix": matrix,
    })
}

fn quadruple_report_value<S: Scalar>(r: &QuadrupleReport<S>) -> Value {
    let certificates: Vec<Value> = r
        .certificates
        .iter()
        .map(|q| json!({ "quad": index_array(&q.quad), "certificate": certificate_value(&q.certificate) }))
        .collect();
    let embeddable: Vec<Value> = r.embeddable.iter().map(|q| index_array(q)).collect();
    json!({ "all_clear": r.all_clear(), "embeddable": embeddable, "certificates": certificates })
}

fn verify_value<S: PsdScalar>(m: &MetricSpace<S>) -> Result<Outcome, CliError> {
    let report = verify_no_isometric_quadruple(m)?;
    let status = if report.all_clear() { EXIT_OK } else { EXIT_COUNTEREXAMPLE };
    Ok(Outcome::ok(quadruple_report_value(&report)).with_status(status))
}

fn gen(c: &Gen) -> Result<Outcome, CliError> {
    Ok(match c {
        Gen::Knn { n, kind } => Outcome::ok(match kind {
            KindArg::Real => metric_to_json(&knn_metric::<f64>(*n)?),
            KindArg::Rational => metric_to_json(&knn_metric::<Rational>(*n)?),
        }),
        Gen::Graph012 { n, seed } => {
            let g = sample_gn_half(*n, *seed);
            let m = metric_from_graph_012::<f64>(&g)?.with_label(format!("G({n},1/2) seed={seed}"));
            Outcome::ok(metric_to_json(&m)).seeded(*seed)
        }
        Gen::L2Hard { n } => Outcome::ok(metric_to_json(&build_l2_hard_metric(*n)?.metric)),
        Gen::UcHard { n, modulus, schedule, kind } => {
            let delta = ConvexityModulus::parse(modulus)?;
            let c = build_uc_hard_metric_with(*n, &delta, (*schedule).into())?;
            Outcome::ok(match kind {
                KindArg::Rational => metric_to_json(c.metric()),
                KindArg::Real => {
                    let label = c.metric().label().unwrap_or_default().to_owned();
                    metric_to_json(&c.real_metric().with_label(label))
                }
            })
        }
    })
}

fn embed(c: &Embed) -> Result<Outcome, CliError> {
    Ok(match c {
        Embed::KnnL2 { n } => {
            let image = embed_knn_l2(*n)?;
            let report = distortion_identity(&knn_metric(*n)?, &image)?;
            let formula = 2.0 * ((*n as f64 - 1.0) / *n as f64).sqrt();
            Outcome::ok(json!({
                "n": n,
                "p": real_value(2.0),
                "points": pointset_to_json(&image),
                "distortion": distortion_value(&report),
                "formula": real_value(formula),
            }))
        }
        Embed::KnnLp { n, p, basic } => {
            let (image, formula) = if *basic {
                (embed_knn_lp_basic(*n, *p)?, 2f64.powf(2.0 / p))
            } else {
                (embed_knn_lp(*n, *p)?, knn_lp_distortion_formula(*n, *p))
            };
            let report = distortion_identity(&knn_metric(*n)?, &image)?;
            Outcome::ok(json!({
                "n": n,
                "p": real_value(*p),
                "basic": basic,
                "points": pointset_to_json(&image),
                "distortion": distortion_value(&report),
                "formula": real_value(formula),
            }))
        }
        Embed::Psd012 { input } => {
            let m = load_metric(input)?.to_real();
            let image = embed_012_l2(&m)?;
            let report = distortion_identity(&m, &image)?;
            Outcome::ok(json!({ "points": pointset_to_json(&image), "distortion": distortion_value(&report) }))
        }
    })
}

fn point_rows(v: &Value, key: &str) -> Result<Vec<Vec<f64>>, CliError> {
    let rows = v.get(key).and_then(Value::as_array).ok_or_else(|| usage(format!("missing array {key:?}")))?;
    rows.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| usage(format!("{key:?} entries must be arrays")))?
                .iter()
                .map(|x| f64::from_json(x).map_err(usage))
                .collect()
        })
        .collect()
}

fn bound(c: &Bound) -> Result<Outcome, CliError> {
    Ok(match c {
        Bound::Roundness { input, p } => {
            let v = read_json(input)?;
            let r = roundness_slack(&point_rows(&v, "xs")?, &point_rows(&v, "ys")?, *p)?;
            Outcome::ok(json!({
                "p": real_value(*p),
                "lhs": real_value(r.lhs),
                "rhs": real_value(r.rhs),
                "slack": real_value(r.slack),
                "constant": real_value(r.constant),
            }))
        }
        Bound::Knn { n, p } => {
            let (lower, upper) = knn_cp_bounds(*n, *p)?;
            Outcome::ok(json!({ "n": n, "p": real_value(*p), "lower": real_value(lower), "upper": real_value(upper) }))
        }
        Bound::Bipartite { input, side_a, side_b, p } => {
            let m = load_metric(input)?.to_real();
            let lower = bipartite_lower_bound(&m, side_a, side_b, *p)?;
            Outcome::ok(json!({
                "p": real_value(*p),
                "side_a": index_array(side_a),
                "side_b": index_array(side_b),
                "lower": real_value(lower),
            }))
        }
    })
}

fn schoenberg_value<S: PsdScalar>(m: &MetricSpace<S>, base: usize) -> Result<Outcome, CliError> {
    Ok(Outcome::ok(certificate_value(&schoenberg_test(m, base)?)))
}

fn convexity_value<S: Scalar>(m: &MetricSpace<S>, delta: &ConvexityModulus, quad: Option<&[usize]>) -> Result<Outcome, CliError> {
    let n = m.len();
    let quads: Vec<[usize; 4]> = match quad {
        Some(q) => vec![q.try_into().map_err(|_| usage("--quad takes exactly 4 indices"))?],
        None => (0..n)
            .flat_map(|a| (a + 1..n).flat_map(move |b| (b + 1..n).flat_map(move |c| (c + 1..n).map(move |d| [a, b, c, d]))))
            .collect(),
    };
    let mut rows = Vec::new();
    let mut negative = 0usize;
    for q in quads {
        let g = lemma_gap_in(m, q, delta)?;
        if g.gap.is_negative() {
            negative += 1;
        }
        rows.push(json!({
            "quad": index_array(&q),
            "hypothesis": m.dist(q[0], q[2]) >= m.dist(q[1], q[2]),
            "lhs": wide_value(g.lhs),
            "rhs": wide_value(g.rhs),
            "gap": wide_value(g.gap),
        }));
    }
    Ok(Outcome::ok(json!({ "modulus": delta.name(), "negative": negative, "quadruples": rows })))
}

fn check(c: &Check) -> Result<Outcome, CliError> {
    match c {
        Check::Metric { input } => match metric_from_json(&read_json(input)?) {
            Ok(m) => Ok(Outcome::ok(json!({ "valid": true, "kind": m.kind().as_str(), "n": m.len() }))),
            Err(FormatError::Metric(e)) => {
                eprintln!("invalid metric: {e:?}");
                Ok(Outcome::ok(json!({ "valid": false, "error": e.to_string(), "detail": format!("{e:?}") }))
                    .with_status(EXIT_COUNTEREXAMPLE))
            }
            Err(e) => Err(e.into()),
        },
        Check::Schoenberg { input, base } => match load_metric(input)? {
            AnyMetric::Real(m) => schoenberg_value(&m, *base),
            AnyMetric::Rational(m) => schoenberg_value(&m, *base),
        },
        Check::Convexity { input, modulus, quad } => {
            let delta = ConvexityModulus::parse(modulus)?;
            match load_metric(input)? {
                AnyMetric::Real(m) => convexity_value(&m, &delta, quad.as_deref()),
                AnyMetric::Rational(m) => convexity_value(&m, &delta, quad.as_deref()),
            }
        }
    }
}

fn hard(c: &Hard) -> Result<Outcome, CliError> {
    match c {
        Hard::GenL2 { n } => {
            let h = build_l2_hard_metric(*n)?;
            let report = verify_no_isometric_quadruple(&h.metric)?;
            let a: Vec<Value> = h.a.iter().map(|x| json!(x.to_string())).collect();
            Ok(Outcome::ok(json!({
                "metric": metric_to_json(&h.metric),
                "a": a,
                "eps": format_rational(&h.eps),
                "shrink_rounds": h.shrink_rounds,
                "verification": quadruple_report_value(&report),
            })))
        }
        Hard::GenUc { n, modulus, schedule } => {
            let delta = ConvexityModulus::parse(modulus)?;
            let c = build_uc_hard_metric_with(*n, &delta, (*schedule).into())?;
            let margins = all_margins(&c)?;
            let gaps = quadruple_gaps(&c)?;
            let min_margin = margins.iter().map(|r| r.margin).fold(None, |acc: Option<Wide>, x| Some(acc.map_or(x, |a| a.min(x))));
            let failing = gaps.iter().filter(|q| !(q.gap <= q.bound && q.gap.is_negative())).count();
            let margin_rows: Vec<Value> = margins
                .iter()
                .map(|r| json!({ "stage": r.stage, "triple": index_array(&r.triple), "margin": wide_value(r.margin) }))
                .collect();
            let gap_rows: Vec<Value> = gaps
                .iter()
                .map(|q| json!({ "quad": index_array(&q.quad), "gap": wide_value(q.gap), "bound": wide_value(q.bound) }))
                .collect();
            let negative_margins = margins.iter().filter(|r| r.margin.is_negative()).count();
            let status = if negative_margins == 0 && failing == 0 { EXIT_OK } else { EXIT_COUNTEREXAMPLE };
            Ok(Outcome::ok(json!({
                "metric": metric_to_json(c.metric()),
                "modulus": delta.name(),
                "schedule": c.schedule().as_str(),
                "etas": c.etas().iter().map(Scalar::to_json).collect::<Vec<_>>(),
                "esses": c.esses().iter().map(Scalar::to_json).collect::<Vec<_>>(),
                "halvings": c.halvings(),
                "min_margin": min_margin.map_or(Value::Null, wide_value),
                "negative_margins": negative_margins,
                "failing_quadruples": failing,
                "margins": margin_rows,
                "quadruples": gap_rows,
            }))
            .with_status(status))
        }
        Hard::Verify { input } => match load_metric(input)? {
            AnyMetric::Real(m) => verify_value(&m),
            AnyMetric::Rational(m) => verify_value(&m),
        },
    }
}

fn universality_value(r: &UniversalityReport) -> Value {
    let misses: Vec<Value> = r.misses.iter().map(|m| index_array(m)).collect();
    json!({
        "graph": graph_to_json(&r.graph),
        "target": graph_to_json(&r.target),
        "s": r.s,
        "mode": r.mode.as_str(),
        "certificate": r.mode == crate::ramsey::VerificationMode::Exhaustive,
        "checked": r.checked,
        "misses": misses,
        "theoretical_bound": r.theoretical_bound.map_or(Value::Null, real_value),
        "attempt": r.attempt,
        "graph_seed": r.graph_seed,
    })
}

fn iso_value<S: PsdScalar>(m: &MetricSpace<S>) -> Result<Outcome, CliError> {
    let (size, witness) = iso_ramsey_l2(m)?;
    Ok(Outcome::ok(json!({ "n": m.len(), "size": size, "witness": index_array(&witness) })))
}

fn ramsey(c: &Ramsey) -> Result<Outcome, CliError> {
    Ok(match c {
        Ramsey::Family { s, k } => {
            let f = almost_disjoint_family(*s, *k)?;
            let sets: Vec<Value> = f.sets.iter().map(|x| index_array(x)).collect();
            Outcome::ok(json!({ "s": f.ground, "k": f.k, "p": f.p, "count": f.sets.len(), "sets": sets }))
        }
        Ramsey::Universal { n, k, s, attempts, seed } => match build_universal_metric(*n, *k, *s, *attempts, *seed) {
            Ok(u) => Outcome::ok(json!({
                "found": true,
                "metric": metric_to_json(&u.metric),
                "report": universality_value(&u.report),
            }))
            .seeded(*seed),
            Err(RamseyError::AllAttemptsFailed { attempts, best }) => {
                eprintln!("no universal graph in {attempts} attempts");
                Outcome::ok(json!({ "found": false, "report": universality_value(&best) }))
                    .seeded(*seed)
                    .with_status(EXIT_COUNTEREXAMPLE)
            }
            Err(e) => return Err(e.into()),
        },
        Ramsey::Mc { k, s, trials, seed, target } => {
            let h = match target {
                TargetArg::Path => Graph::path(*k),
                TargetArg::Complete => Graph::complete(*k),
                TargetArg::Empty => Graph::empty(*k),
            };
            let fraction = monte_carlo_universality(&h, *s, *trials, *seed)?;
            let bound = miss_probability_bound(*k, *s).ok();
            let sigma = bound.map(|b| (b * (1.0 - b) / *trials as f64).sqrt());
            Outcome::ok(json!({
                "k": k,
                "s": s,
                "trials": trials,
                "target": graph_to_json(&h),
                "fraction": real_value(fraction),
                "bound": bound.map_or(Value::Null, real_value),
                "sigma": sigma.map_or(Value::Null, real_value),
            }))
            .seeded(*seed)
        }
        Ramsey::Iso { input } => match load_metric(input)? {
            AnyMetric::Real(m) => iso_value(&m)?,
            AnyMetric::Rational(m) => iso_value(&m)?,
        },
        Ramsey::Screen { input, p, alpha } => {
            let m = load_metric(input)?.to_real();
            let (size, witness) = distortion_certificate_bound(&m, *p, *alpha)?;
            Outcome::ok(json!({
                "n": m.len(),
                "p": real_value(*p),
                "alpha": real_value(*alpha),
                "size": size,
                "witness": index_array(&witness),
                "one_sided": true,
            }))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn argv_split() {
        let (words, params) = split_argv(&os(&["x", "embed", "knn-lp", "--n", "3", "--p=4", "--basic", "--out", "o.json"]));
        assert_eq!(words, ["embed", "knn-lp"]);
        assert_eq!(
            params,
            [("n".into(), Some("3".into())), ("p".into(), Some("4".into())), ("basic".into(), None)]
        );
    }

    #[test]
    fn manifest_round_trip() {
        let m = build_manifest(&os(&["x", "gen", "graph012", "--n", "5", "--seed", "9"]), Some(9), &["g.json".into()]);
        let argv = manifest_argv(&m, Path::new("h.json")).unwrap();
        assert_eq!(argv, ["metric-ramsey", "gen", "graph012", "--n=5", "--seed=9", "--out=h.json"]);
        assert_eq!(m["seed"], json!(9));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["metric-ramsey", "gen", "knn", "--bogus", "1"]), EXIT_USAGE);
        assert_eq!(run(["metric-ramsey", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["metric-ramsey", "bound", "knn", "--n", "1", "--p", "2"]), EXIT_USAGE);
    }
}

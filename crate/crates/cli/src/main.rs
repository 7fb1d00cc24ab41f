//! `biclust`: recover a low-rank + sparse decomposition of a mastery
//! matrix, extract checkerboard biclusters from the low-rank part, filter
//! them by statistical significance, and score everything against ground
//! truth. All commands are deterministic given their inputs and `--seed`.

mod common;
mod pipeline;
mod ppm;
mod preprocess;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use biclust_core::extract::{extract_biclusters, silhouette_sweep, topic_embedding};
use biclust_core::jsonio::{
    BiclusterSetJson, GroundTruthJson, MetricReportJson, SignificanceReportJson,
};
use biclust_core::matrix::BoolMatrix;
use biclust_core::metrics;
use biclust_core::recovery::{default_alpha, default_lambda, estimate_sigma, recover};
use biclust_core::seed::fanout;
use biclust_core::significance::filter_biclusters;
use biclust_core::svd;
use biclust_core::synth::{build_dataset, BiclusterDataSpec, BiclusterKind, SpikeSpec};
use biclust_core::{Matrix, RecoveryParams, RecoveryResult};

use common::{read_json_file, read_matrix_file, write_json_file, write_matrix_file};
use report::RecoverSummaryJson;

#[derive(Parser)]
#[command(
    name = "biclust",
    version,
    about = "Low-rank + sparse mastery-matrix recovery with bicluster significance analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic bicluster dataset with ground truth.
    Synth(SynthArgs),
    /// Transform raw score matrices (invert grades, bin into levels).
    Preprocess(PreprocessArgs),
    /// Decompose a matrix into low-rank + sparse components.
    Recover(RecoverArgs),
    /// Extract checkerboard biclusters from a (low-rank) matrix.
    Extract(ExtractArgs),
    /// Score biclusters against a null model and apply Bonferroni filtering.
    Filter(FilterArgs),
    /// Compare predicted biclusters (and spikes) against ground truth.
    Evaluate(EvaluateArgs),
    /// Per-topic latent embeddings from the right singular vectors.
    Embed(EmbedArgs),
    /// Render a matrix as a PPM heatmap.
    Render(RenderArgs),
    /// Run the full chain: synth → recover → extract → filter → evaluate.
    Pipeline(PipelineArgs),
}

/// CSV layout flags; the format is never guessed.
#[derive(Args, Clone, Copy)]
struct CsvFlags {
    /// First row holds column labels.
    #[arg(long)]
    header: bool,
    /// First column holds row labels.
    #[arg(long)]
    row_labels: bool,
}

#[derive(Args, Clone, Copy)]
pub struct SolverFlags {
    /// Noise scale; estimated from the data (1.48·MAD) when omitted.
    #[arg(long)]
    sigma: Option<f64>,
    /// Nuclear-norm weight; default (√n+√m)·σ.
    #[arg(long)]
    alpha: Option<f64>,
    /// Relative sparse weight λ = β/α; default 1/√n_cols.
    #[arg(long)]
    lambda: Option<f64>,
    /// Relative-change convergence tolerance.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Iteration cap.
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
}

struct ResolvedSolver {
    params: RecoveryParams,
    sigma: f64,
    lambda: f64,
}

impl SolverFlags {
    fn resolve(&self, d: &Matrix) -> Result<ResolvedSolver> {
        let sigma = self.sigma.unwrap_or_else(|| estimate_sigma(d));
        let alpha = match self.alpha {
            Some(a) => a,
            None => {
                let a = default_alpha(d.n_rows(), d.n_cols(), sigma);
                if a > 0.0 {
                    a
                } else {
                    // Degenerate noise estimate (constant data). A vanishing
                    // threshold keeps the decomposition well defined: the
                    // signal passes through untouched.
                    let floor = (1e-8 * d.max_abs()).max(f64::MIN_POSITIVE);
                    eprintln!(
                        "[recover] warning: noise estimate is 0; falling back to alpha = {:.3e}",
                        default_alpha(d.n_rows(), d.n_cols(), floor)
                    );
                    default_alpha(d.n_rows(), d.n_cols(), floor)
                }
            }
        };
        let lambda = self.lambda.unwrap_or_else(|| default_lambda(d.n_cols()));
        let beta = lambda * alpha;
        let params = RecoveryParams::new(alpha, beta, self.tol, self.max_iters)
            .context("invalid solver parameters")?;
        Ok(ResolvedSolver {
            params,
            sigma,
            lambda,
        })
    }
}

/// Runs the solver and assembles the run summary the CLI reports.
pub fn recover_matrix(
    d: &Matrix,
    flags: &SolverFlags,
    spike_threshold: f64,
) -> Result<(RecoveryResult, RecoverSummaryJson)> {
    let resolved = flags.resolve(d)?;
    let result = recover(d, &resolved.params)?;

    let rank = svd::numerical_rank(
        svd::svd(result.low_rank())
            .context("rank computation failed")?
            .singular_values(),
    );
    let nonzero = result
        .sparse()
        .values()
        .iter()
        .filter(|v| v.abs() > spike_threshold)
        .count();
    let sparsity = nonzero as f64 / (d.n_rows() * d.n_cols()) as f64;

    let summary = RecoverSummaryJson {
        sigma: resolved.sigma,
        alpha: resolved.params.alpha(),
        beta: resolved.params.beta(),
        lambda: resolved.lambda,
        tol: resolved.params.tol(),
        max_iters: resolved.params.max_iters(),
        iterations: result.iterations(),
        converged: result.converged(),
        final_objective: result.final_objective(),
        rank,
        sparsity,
        sparse_threshold: spike_threshold,
    };
    Ok((result, summary))
}

/// Cluster counts: explicit flags win; otherwise a silhouette sweep over
/// k = 2..=12 picks them per axis.
pub fn resolve_extraction_k(
    x: &Matrix,
    k_rows: Option<usize>,
    k_cols: Option<usize>,
    seed: u64,
) -> Result<(usize, usize)> {
    let rows = match k_rows {
        Some(k) => k,
        None => {
            let points: Vec<Vec<f64>> = (0..x.n_rows()).map(|i| x.row(i).to_vec()).collect();
            silhouette_sweep(&points, 2..=12, fanout(seed, "sweep-rows"))
                .context("row silhouette sweep failed")?
                .0
        }
    };
    let cols = match k_cols {
        Some(k) => k,
        None => {
            let points: Vec<Vec<f64>> = (0..x.n_cols()).map(|j| x.col(j)).collect();
            silhouette_sweep(&points, 2..=12, fanout(seed, "sweep-cols"))
                .context("column silhouette sweep failed")?
                .0
        }
    };
    Ok((rows, cols))
}

pub fn write_heatmap_file(path: &Path, m: &Matrix, scale: usize) -> Result<()> {
    let file = fs::File::create(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    ppm::write_heatmap(std::io::BufWriter::new(file), m, scale)
}

// ---- synth ----

#[derive(Args)]
struct SynthArgs {
    /// Generator spec file (flat key = value format).
    #[arg(long, conflicts_with = "preset")]
    spec: Option<PathBuf>,
    /// Built-in benchmark preset: constant | shift | scale | shift_scale.
    #[arg(long)]
    preset: Option<String>,
    /// Overrides the spec's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Per-entry spike probability; omit for no spikes.
    #[arg(long)]
    spike_prob: Option<f64>,
    #[arg(long, default_value_t = 6.0)]
    spike_magnitude: f64,
    /// Output prefix; writes <prefix>.matrix.csv and <prefix>.truth.json.
    #[arg(long, short)]
    out: PathBuf,
}

fn load_spec(
    spec: &Option<PathBuf>,
    preset: &Option<String>,
    seed: Option<u64>,
) -> Result<BiclusterDataSpec<f64>> {
    let mut spec = match (spec, preset) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read spec {}", path.display()))?;
            BiclusterDataSpec::parse_config(&text)
                .with_context(|| format!("invalid spec {}", path.display()))?
        }
        (None, Some(name)) => {
            let kind: BiclusterKind = name
                .parse()
                .map_err(|e: String| anyhow::anyhow!(e))
                .context("invalid --preset")?;
            BiclusterDataSpec::benchmark_preset(kind)
        }
        _ => bail!("exactly one of --spec or --preset is required"),
    };
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    Ok(spec)
}

fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let spec = load_spec(&args.spec, &args.preset, args.seed).context("[synth] bad spec")?;
    let spikes = args.spike_prob.map(|p| SpikeSpec {
        probability: p,
        magnitude: args.spike_magnitude,
    });
    let (matrix, truth) = build_dataset(&spec, spikes).context("[synth] generation failed")?;

    let matrix_path = path_with_suffix(&args.out, ".matrix.csv");
    let truth_path = path_with_suffix(&args.out, ".truth.json");
    write_matrix_file(&matrix_path, &matrix).context("[synth] cannot write matrix")?;
    write_json_file(&truth_path, &GroundTruthJson::from_truth(&truth))
        .context("[synth] cannot write ground truth")?;
    eprintln!(
        "[synth] wrote {} ({}x{}, {} planted biclusters, {} spikes)",
        matrix_path.display(),
        matrix.n_rows(),
        matrix.n_cols(),
        truth.biclusters().len(),
        truth.spike_mask().count_true()
    );
    Ok(())
}

fn path_with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

// ---- preprocess ----

#[derive(Args)]
struct PreprocessArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[command(flatten)]
    csv: CsvFlags,
    /// Transform(s) applied in order: invert | invert-unit | bin.
    #[arg(long = "mode", required = true)]
    modes: Vec<preprocess::Mode>,
    #[arg(long, short)]
    out: PathBuf,
}

fn cmd_preprocess(args: &PreprocessArgs) -> Result<()> {
    let matrix = read_matrix_file(&args.input, args.csv.header, args.csv.row_labels)
        .context("[preprocess] cannot read input")?;
    let out = preprocess::apply_all(&matrix, &args.modes).context("[preprocess] failed")?;
    write_matrix_file(&args.out, &out).context("[preprocess] cannot write output")?;
    eprintln!("[preprocess] wrote {}", args.out.display());
    Ok(())
}

// ---- recover ----

#[derive(Args)]
struct RecoverArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[command(flatten)]
    csv: CsvFlags,
    #[command(flatten)]
    solver: SolverFlags,
    /// Entries of Ê above this magnitude count as recovered spikes.
    #[arg(long, default_value_t = 1e-6)]
    spike_threshold: f64,
    /// Output prefix; writes <prefix>.X.csv, <prefix>.E.csv,
    /// <prefix>.recover.json.
    #[arg(long, short)]
    out: PathBuf,
}

fn cmd_recover(args: &RecoverArgs) -> Result<()> {
    let d = read_matrix_file(&args.input, args.csv.header, args.csv.row_labels)
        .context("[recover] cannot read input")?;
    let (result, summary) =
        recover_matrix(&d, &args.solver, args.spike_threshold).context("[recover] failed")?;

    write_matrix_file(&path_with_suffix(&args.out, ".X.csv"), result.low_rank())
        .context("[recover] cannot write X")?;
    write_matrix_file(&path_with_suffix(&args.out, ".E.csv"), result.sparse())
        .context("[recover] cannot write E")?;
    write_json_file(&path_with_suffix(&args.out, ".recover.json"), &summary)
        .context("[recover] cannot write summary")?;
    eprintln!(
        "[recover] converged={} after {} iteration(s); rank {}, sparsity {:.4}",
        summary.converged, summary.iterations, summary.rank, summary.sparsity
    );
    Ok(())
}

// ---- extract ----

#[derive(Args)]
struct ExtractArgs {
    /// The (low-rank) matrix to cluster, typically X.csv from `recover`.
    #[arg(long, short)]
    input: PathBuf,
    #[command(flatten)]
    csv: CsvFlags,
    /// Row cluster count; silhouette sweep over 2..=12 when omitted.
    #[arg(long)]
    k_rows: Option<usize>,
    /// Column cluster count; silhouette sweep over 2..=12 when omitted.
    #[arg(long)]
    k_cols: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Flat-block threshold on mean |entry|; overrides --data.
    #[arg(long)]
    flat_threshold: Option<f64>,
    /// Original data matrix; sets the flat threshold to 0.5·σ̂(D).
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, short)]
    out: PathBuf,
}

fn cmd_extract(args: &ExtractArgs) -> Result<()> {
    let x = read_matrix_file(&args.input, args.csv.header, args.csv.row_labels)
        .context("[extract] cannot read input")?;
    let threshold = match (args.flat_threshold, &args.data) {
        (Some(t), _) => Some(t),
        (None, Some(path)) => {
            let d = read_matrix_file(path, args.csv.header, args.csv.row_labels)
                .context("[extract] cannot read --data")?;
            Some(0.5 * estimate_sigma(&d))
        }
        (None, None) => None, // falls back to 0.5·σ̂(X)
    };
    let (k_rows, k_cols) = resolve_extraction_k(&x, args.k_rows, args.k_cols, args.seed)
        .context("[extract] cannot choose cluster counts")?;
    let set = extract_biclusters(&x, k_rows, k_cols, args.seed, threshold)
        .context("[extract] failed")?;

    let mut json = BiclusterSetJson::from_set(&set);
    json.k_rows = Some(k_rows);
    json.k_cols = Some(k_cols);
    json.seed = Some(args.seed);
    write_json_file(&args.out, &json).context("[extract] cannot write output")?;
    eprintln!(
        "[extract] k_rows={k_rows} k_cols={k_cols}: {} candidate bicluster(s)",
        set.len()
    );
    Ok(())
}

// ---- filter ----

#[derive(Args)]
struct FilterArgs {
    /// Candidate biclusters (JSON from `extract`).
    #[arg(long, short)]
    biclusters: PathBuf,
    /// The observed data matrix the null model is fit on.
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    csv: CsvFlags,
    /// Family-wise significance level before Bonferroni correction.
    #[arg(long, default_value_t = 0.05)]
    sig_alpha: f64,
    /// Discretization levels of the null model.
    #[arg(long, default_value_t = 10)]
    levels: usize,
    #[arg(long, short)]
    out: PathBuf,
    /// Also write the surviving biclusters (with p-values) here.
    #[arg(long)]
    passing: Option<PathBuf>,
}

fn cmd_filter(args: &FilterArgs) -> Result<()> {
    let set_json: BiclusterSetJson =
        read_json_file(&args.biclusters).context("[filter] cannot read biclusters")?;
    let set = set_json.to_set().context("[filter] invalid biclusters")?;
    let d = read_matrix_file(&args.data, args.csv.header, args.csv.row_labels)
        .context("[filter] cannot read data")?;
    let report =
        filter_biclusters(&set, &d, args.sig_alpha, args.levels).context("[filter] failed")?;
    if report.degenerate_null() {
        eprintln!("[filter] warning: degenerate null model (constant data); p-values are 1");
    }

    write_json_file(&args.out, &SignificanceReportJson::from_report(&report))
        .context("[filter] cannot write report")?;
    if let Some(path) = &args.passing {
        let passing = report
            .passing_set(d.shape())
            .context("[filter] cannot assemble passing set")?;
        write_json_file(path, &BiclusterSetJson::from_set(&passing))
            .context("[filter] cannot write passing set")?;
    }
    eprintln!(
        "[filter] {} of {} bicluster(s) pass at alpha {}",
        report.n_passing(),
        report.n_tested(),
        args.sig_alpha
    );
    Ok(())
}

// ---- evaluate ----

#[derive(Args)]
struct EvaluateArgs {
    /// Predicted biclusters (JSON).
    #[arg(long, short)]
    predicted: PathBuf,
    /// Ground-truth JSON ({biclusters, spikes}).
    #[arg(long, short)]
    truth: PathBuf,
    /// Recovered sparse component; enables spike precision/recall/F1.
    #[arg(long)]
    e_csv: Option<PathBuf>,
    #[command(flatten)]
    csv: CsvFlags,
    #[arg(long, default_value_t = 1e-6)]
    spike_threshold: f64,
    #[arg(long, short)]
    out: PathBuf,
}

fn cmd_evaluate(args: &EvaluateArgs) -> Result<()> {
    let predicted_json: BiclusterSetJson =
        read_json_file(&args.predicted).context("[evaluate] cannot read predictions")?;
    let predicted = predicted_json
        .to_set()
        .context("[evaluate] invalid predictions")?;
    let truth_json: GroundTruthJson =
        read_json_file(&args.truth).context("[evaluate] cannot read truth")?;
    let truth = truth_json.to_truth(predicted.source_shape());
    let reference = truth
        .to_bicluster_set()
        .context("[evaluate] invalid ground truth")?;

    let scores = metrics::evaluate(&predicted, &reference).context("[evaluate] failed")?;
    let sparse = match &args.e_csv {
        Some(path) => {
            let e = read_matrix_file(path, args.csv.header, args.csv.row_labels)
                .context("[evaluate] cannot read E matrix")?;
            let mask = BoolMatrix::from_fn(e.n_rows(), e.n_cols(), |i, j| {
                e.get(i, j).abs() > args.spike_threshold
            });
            Some(
                metrics::sparse_prf::<f64>(&mask, truth.spike_mask())
                    .context("[evaluate] sparse scoring failed")?,
            )
        }
        None => None,
    };

    write_json_file(
        &args.out,
        &MetricReportJson::from_report(&scores, sparse.as_ref()),
    )
    .context("[evaluate] cannot write metrics")?;
    eprintln!(
        "[evaluate] fabia_consensus={:.4} prelic_recovery={:.4} prelic_relevance={:.4}",
        scores.fabia_consensus, scores.prelic_recovery, scores.prelic_relevance
    );
    Ok(())
}

// ---- embed ----

#[derive(Args)]
struct EmbedArgs {
    /// Matrix whose columns to embed, typically X.csv from `recover`.
    #[arg(long, short)]
    input: PathBuf,
    #[command(flatten)]
    csv: CsvFlags,
    /// Embedding dimensions (leading right singular vectors).
    #[arg(long, short, default_value_t = 3)]
    dims: usize,
    /// Output CSV: one row per column of the input.
    #[arg(long, short)]
    out: PathBuf,
    /// Optional PPM scatter plot of the first two dimensions.
    #[arg(long)]
    plot: Option<PathBuf>,
}

fn cmd_embed(args: &EmbedArgs) -> Result<()> {
    let x = read_matrix_file(&args.input, args.csv.header, args.csv.row_labels)
        .context("[embed] cannot read input")?;
    let embeddings = topic_embedding(&x, args.dims).context("[embed] failed")?;

    let mut out = String::new();
    out.push_str("topic");
    for d in 1..=args.dims {
        out.push_str(&format!(",dim{d}"));
    }
    out.push('\n');
    for (j, emb) in embeddings.iter().enumerate() {
        let label = x
            .col_labels()
            .map(|labels| labels[j].clone())
            .unwrap_or_else(|| format!("c{j}"));
        out.push_str(&label);
        for v in emb {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    fs::write(&args.out, out)
        .with_context(|| format!("[embed] cannot write {}", args.out.display()))?;

    if let Some(plot) = &args.plot {
        if args.dims < 2 {
            bail!("[embed] --plot needs at least 2 dimensions");
        }
        let points: Vec<(f64, f64)> = embeddings.iter().map(|e| (e[0], e[1])).collect();
        let file = fs::File::create(plot)
            .with_context(|| format!("[embed] cannot create {}", plot.display()))?;
        ppm::write_scatter(std::io::BufWriter::new(file), &points, 300)
            .context("[embed] cannot write scatter")?;
    }
    eprintln!("[embed] wrote {} ({} topics)", args.out.display(), embeddings.len());
    Ok(())
}

// ---- render ----

#[derive(Args)]
struct RenderArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[command(flatten)]
    csv: CsvFlags,
    /// Pixels per matrix cell.
    #[arg(long, default_value_t = 1)]
    scale: usize,
    #[arg(long, short)]
    out: PathBuf,
}

fn cmd_render(args: &RenderArgs) -> Result<()> {
    let m = read_matrix_file(&args.input, args.csv.header, args.csv.row_labels)
        .context("[render] cannot read input")?;
    write_heatmap_file(&args.out, &m, args.scale).context("[render] failed")?;
    eprintln!("[render] wrote {}", args.out.display());
    Ok(())
}

// ---- pipeline ----

#[derive(Args)]
struct PipelineArgs {
    /// Generator spec file; one of --spec, --preset, --input is required.
    #[arg(long, conflicts_with_all = ["preset", "input"])]
    spec: Option<PathBuf>,
    /// Benchmark preset: constant | shift | scale | shift_scale.
    #[arg(long, conflicts_with = "input")]
    preset: Option<String>,
    /// Existing matrix CSV instead of synthetic data.
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    csv: CsvFlags,
    /// Ground-truth JSON for an --input matrix.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Master seed; every stage derives from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent repetitions to aggregate.
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long)]
    spike_prob: Option<f64>,
    #[arg(long, default_value_t = 6.0)]
    spike_magnitude: f64,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long)]
    k_rows: Option<usize>,
    #[arg(long)]
    k_cols: Option<usize>,
    #[arg(long, default_value_t = 0.05)]
    sig_alpha: f64,
    #[arg(long, default_value_t = 10)]
    levels: usize,
    #[arg(long, default_value_t = 1e-6)]
    spike_threshold: f64,
    /// Reuse existing X.csv/E.csv per repetition instead of re-solving.
    #[arg(long)]
    resume: bool,
    /// Output directory (one repNN/ subdirectory per repetition).
    #[arg(long, short)]
    out: PathBuf,
}

fn cmd_pipeline(args: &PipelineArgs) -> Result<()> {
    let source = match (&args.spec, &args.preset, &args.input) {
        (None, None, Some(path)) => {
            let matrix = read_matrix_file(path, args.csv.header, args.csv.row_labels)
                .context("[pipeline] cannot read input matrix")?;
            let truth = match &args.truth {
                Some(tp) => {
                    let json: GroundTruthJson =
                        read_json_file(tp).context("[pipeline] cannot read truth")?;
                    Some(json.to_truth(matrix.shape()))
                }
                None => None,
            };
            pipeline::DataSource::Matrix { matrix, truth }
        }
        (spec, preset, None) if spec.is_some() || preset.is_some() => {
            pipeline::DataSource::Synth(load_spec(spec, preset, None).context("[pipeline] bad spec")?)
        }
        _ => bail!("[pipeline] exactly one of --spec, --preset, or --input is required"),
    };

    pipeline::run(&pipeline::PipelineConfig {
        source,
        out_dir: args.out.clone(),
        seed: args.seed,
        reps: args.reps,
        spike_prob: args.spike_prob,
        spike_magnitude: args.spike_magnitude,
        solver: args.solver,
        k_rows: args.k_rows,
        k_cols: args.k_cols,
        sig_alpha: args.sig_alpha,
        levels: args.levels,
        spike_threshold: args.spike_threshold,
        resume: args.resume,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Synth(args) => cmd_synth(args),
        Command::Preprocess(args) => cmd_preprocess(args),
        Command::Recover(args) => cmd_recover(args),
        Command::Extract(args) => cmd_extract(args),
        Command::Filter(args) => cmd_filter(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Embed(args) => cmd_embed(args),
        Command::Render(args) => cmd_render(args),
        Command::Pipeline(args) => cmd_pipeline(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

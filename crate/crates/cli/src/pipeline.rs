//! The consolidated multi-stage pipeline: (synth) → recover → extract →
//! filter → evaluate, with per-repetition artifact directories and one
//! aggregated report.
//!
//! Every stage derives its randomness from the master seed by stage-name
//! fan-out, so a rerun with identical flags is byte-identical; repetitions
//! re-run the whole chain under independent sub-seeds.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use biclust_core::extract::{extract_biclusters, BiclusterSet};
use biclust_core::jsonio::{
    BiclusterSetJson, GroundTruthJson, MetricReportJson, SignificanceReportJson,
};
use biclust_core::matrix::BoolMatrix;
use biclust_core::metrics;
use biclust_core::seed::fanout_indexed;
use biclust_core::significance::filter_biclusters;
use biclust_core::synth::{build_dataset, BiclusterDataSpec, GroundTruth, SpikeSpec};
use biclust_core::Matrix;

use crate::common::{read_json_file, read_matrix_file, write_json_file, write_matrix_file};
use crate::report::{aggregate_metrics, PipelineReportJson, RecoverSummaryJson, RunJson};
use crate::{recover_matrix, resolve_extraction_k, write_heatmap_file, SolverFlags};

pub struct PipelineConfig {
    pub source: DataSource,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub reps: usize,
    pub spike_prob: Option<f64>,
    pub spike_magnitude: f64,
    pub solver: SolverFlags,
    pub k_rows: Option<usize>,
    pub k_cols: Option<usize>,
    pub sig_alpha: f64,
    pub levels: usize,
    pub spike_threshold: f64,
    pub resume: bool,
}

pub enum DataSource {
    /// Synthesize a dataset per repetition from this generator spec.
    Synth(BiclusterDataSpec<f64>),
    /// A fixed input matrix, optionally with known ground truth.
    Matrix {
        matrix: Matrix,
        truth: Option<GroundTruth>,
    },
}

pub fn run(config: &PipelineConfig) -> Result<()> {
    if config.reps == 0 {
        bail!("[pipeline] --reps must be at least 1");
    }
    fs::create_dir_all(&config.out_dir)
        .with_context(|| format!("[pipeline] cannot create {}", config.out_dir.display()))?;

    let mut runs = Vec::with_capacity(config.reps);
    for rep in 0..config.reps {
        let rep_seed = fanout_indexed(config.seed, "rep", rep as u64);
        let rep_dir = config.out_dir.join(format!("rep{rep:02}"));
        fs::create_dir_all(&rep_dir)
            .with_context(|| format!("[pipeline] cannot create {}", rep_dir.display()))?;
        let run = run_rep(config, rep, rep_seed, &rep_dir)
            .with_context(|| format!("[pipeline] repetition {rep} failed"))?;
        runs.push(run);
    }

    let reports: Vec<&MetricReportJson> =
        runs.iter().filter_map(|r| r.metrics.as_ref()).collect();
    let consolidated = PipelineReportJson {
        schema: 1,
        seed: config.seed,
        reps: config.reps,
        metrics: aggregate_metrics(&reports),
        runs,
    };
    write_json_file(&config.out_dir.join("report.json"), &consolidated)
        .context("[pipeline] cannot write consolidated report")?;
    eprintln!(
        "[pipeline] {} repetition(s) complete; report at {}",
        config.reps,
        config.out_dir.join("report.json").display()
    );
    Ok(())
}

fn run_rep(
    config: &PipelineConfig,
    rep: usize,
    rep_seed: u64,
    rep_dir: &Path,
) -> Result<RunJson> {
    // Stage: data.
    let (d, truth) = match &config.source {
        DataSource::Synth(spec) => {
            let mut spec = spec.clone();
            spec.seed = rep_seed;
            let spikes = config.spike_prob.map(|p| SpikeSpec {
                probability: p,
                magnitude: config.spike_magnitude,
            });
            let (d, truth) = build_dataset(&spec, spikes).context("[synth] generation failed")?;
            write_json_file(
                &rep_dir.join("truth.json"),
                &GroundTruthJson::from_truth(&truth),
            )
            .context("[synth] cannot write ground truth")?;
            (d, Some(truth))
        }
        DataSource::Matrix { matrix, truth } => (matrix.clone(), truth.clone()),
    };
    write_matrix_file(&rep_dir.join("D.csv"), &d).context("[synth] cannot write matrix")?;

    // Stage: recover (or resume from existing artifacts).
    let x_path = rep_dir.join("X.csv");
    let e_path = rep_dir.join("E.csv");
    let summary_path = rep_dir.join("recover.json");
    let resumable = config.resume
        && x_path.exists()
        && e_path.exists()
        && summary_path.exists();
    let (x, e, summary) = if resumable {
        eprintln!("[recover] rep {rep}: resuming from existing X.csv/E.csv");
        let x = read_matrix_file(&x_path, false, false).context("[recover] resume failed")?;
        let e = read_matrix_file(&e_path, false, false).context("[recover] resume failed")?;
        let summary: RecoverSummaryJson =
            read_json_file(&summary_path).context("[recover] resume failed")?;
        (x, e, summary)
    } else {
        let (result, summary) = recover_matrix(&d, &config.solver, config.spike_threshold)
            .context("[recover] solver failed")?;
        write_matrix_file(&x_path, result.low_rank())?;
        write_matrix_file(&e_path, result.sparse())?;
        write_json_file(&summary_path, &summary)?;
        (
            result.low_rank().clone(),
            result.sparse().clone(),
            summary,
        )
    };

    write_heatmap_file(&rep_dir.join("D.ppm"), &d, 1).context("[render] heatmap failed")?;
    write_heatmap_file(&rep_dir.join("X.ppm"), &x, 1).context("[render] heatmap failed")?;
    write_heatmap_file(&rep_dir.join("E.ppm"), &e, 1).context("[render] heatmap failed")?;

    // Stage: extract.
    let (k_rows, k_cols) = resolve_extraction_k(&x, config.k_rows, config.k_cols, rep_seed)
        .context("[extract] cannot choose cluster counts")?;
    let flat_threshold = 0.5 * summary.sigma;
    let candidates = extract_biclusters(&x, k_rows, k_cols, rep_seed, Some(flat_threshold))
        .context("[extract] clustering failed")?;
    let mut candidates_json = BiclusterSetJson::from_set(&candidates);
    candidates_json.k_rows = Some(k_rows);
    candidates_json.k_cols = Some(k_cols);
    candidates_json.seed = Some(rep_seed);
    write_json_file(&rep_dir.join("biclusters.json"), &candidates_json)?;

    // Stage: filter.
    let sig_report = filter_biclusters(&candidates, &d, config.sig_alpha, config.levels)
        .context("[filter] significance filtering failed")?;
    if sig_report.degenerate_null() {
        eprintln!("[filter] rep {rep}: warning: degenerate null model (constant data)");
    }
    write_json_file(
        &rep_dir.join("report.json"),
        &SignificanceReportJson::from_report(&sig_report),
    )?;
    let passing = sig_report
        .passing_set(d.shape())
        .context("[filter] cannot assemble passing set")?;
    write_json_file(&rep_dir.join("passing.json"), &BiclusterSetJson::from_set(&passing))?;

    // Stage: evaluate (needs ground truth).
    let metrics_json = match &truth {
        Some(truth) => {
            let reference: BiclusterSet<f64> = truth
                .to_bicluster_set()
                .context("[evaluate] invalid ground truth")?;
            let scores =
                metrics::evaluate(&passing, &reference).context("[evaluate] scoring failed")?;
            let sparse = if truth.spike_mask().count_true() > 0 {
                let predicted = BoolMatrix::from_fn(e.n_rows(), e.n_cols(), |i, j| {
                    e.get(i, j).abs() > config.spike_threshold
                });
                Some(
                    metrics::sparse_prf::<f64>(&predicted, truth.spike_mask())
                        .context("[evaluate] sparse scoring failed")?,
                )
            } else {
                None
            };
            let json = MetricReportJson::from_report(&scores, sparse.as_ref());
            write_json_file(&rep_dir.join("metrics.json"), &json)?;
            Some(json)
        }
        None => None,
    };

    eprintln!(
        "[pipeline] rep {rep}: rank {} / {} candidates / {} significant",
        summary.rank,
        candidates.len(),
        sig_report.n_passing()
    );

    Ok(RunJson {
        rep,
        seed: rep_seed,
        recover: summary,
        n_candidates: candidates.len(),
        n_significant: sig_report.n_passing(),
        k_rows,
        k_cols,
        metrics: metrics_json,
    })
}

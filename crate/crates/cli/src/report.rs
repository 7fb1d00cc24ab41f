//! JSON schemas for CLI-level artifacts: the recovery run summary and the
//! consolidated pipeline report (schema version 1).

use serde::{Deserialize, Serialize};

use biclust_core::jsonio::MetricReportJson;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecoverSummaryJson {
    pub sigma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub tol: f64,
    pub max_iters: usize,
    pub iterations: usize,
    pub converged: bool,
    pub final_objective: f64,
    pub rank: usize,
    pub sparsity: f64,
    pub sparse_threshold: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunJson {
    pub rep: usize,
    pub seed: u64,
    pub recover: RecoverSummaryJson,
    pub n_candidates: usize,
    pub n_significant: usize,
    pub k_rows: usize,
    pub k_cols: usize,
    pub metrics: Option<MetricReportJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StatJson {
    pub mean: f64,
    pub sd: f64,
}

impl StatJson {
    /// Sample standard deviation (n−1); a single repetition reports sd 0.
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = if values.len() > 1 {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self { mean, sd }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricStatsJson {
    pub liu_wang: StatJson,
    pub prelic_recovery: StatJson,
    pub prelic_relevance: StatJson,
    pub csi: StatJson,
    pub clustering_error_similarity: StatJson,
    pub fabia_consensus: StatJson,
    pub sparse_precision: Option<StatJson>,
    pub sparse_recall: Option<StatJson>,
    pub sparse_f1: Option<StatJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineReportJson {
    pub schema: u32,
    pub seed: u64,
    pub reps: usize,
    pub runs: Vec<RunJson>,
    pub metrics: Option<MetricStatsJson>,
}

/// Aggregates per-rep metric reports; `None` when no rep produced metrics.
pub fn aggregate_metrics(reports: &[&MetricReportJson]) -> Option<MetricStatsJson> {
    if reports.is_empty() {
        return None;
    }
    let collect = |f: &dyn Fn(&MetricReportJson) -> f64| -> Vec<f64> {
        reports.iter().map(|r| f(r)).collect()
    };
    let sparse_stat = |f: &dyn Fn(&MetricReportJson) -> Option<f64>| -> Option<StatJson> {
        let values: Vec<f64> = reports.iter().filter_map(|r| f(r)).collect();
        (values.len() == reports.len()).then(|| StatJson::of(&values))
    };
    Some(MetricStatsJson {
        liu_wang: StatJson::of(&collect(&|r| r.liu_wang)),
        prelic_recovery: StatJson::of(&collect(&|r| r.prelic_recovery)),
        prelic_relevance: StatJson::of(&collect(&|r| r.prelic_relevance)),
        csi: StatJson::of(&collect(&|r| r.csi)),
        clustering_error_similarity: StatJson::of(&collect(&|r| r.clustering_error_similarity)),
        fabia_consensus: StatJson::of(&collect(&|r| r.fabia_consensus)),
        sparse_precision: sparse_stat(&|r| r.sparse.as_ref().map(|s| s.precision)),
        sparse_recall: sparse_stat(&|r| r.sparse.as_ref().map(|s| s.recall)),
        sparse_f1: sparse_stat(&|r| r.sparse.as_ref().map(|s| s.f1)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stat_of_single_value_has_zero_sd() {
        let s = StatJson::of(&[0.8]);
        assert_eq!(s.mean, 0.8);
        assert_eq!(s.sd, 0.0);
    }

    #[test]
    fn stat_of_known_values() {
        let s = StatJson::of(&[1.0, 2.0, 3.0]);
        assert!((s.mean - 2.0).abs() < 1e-15);
        assert!((s.sd - 1.0).abs() < 1e-15);
    }
}

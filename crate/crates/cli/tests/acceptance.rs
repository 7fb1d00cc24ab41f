//! CLI acceptance: the pipeline determinism criterion plus the file-level
//! behavior of each subcommand.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_biclust"))
}

fn run_ok(args: &[&str], cwd: &Path) -> Output {
    let out = bin()
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "command {:?} failed:\n{}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn run_err(args: &[&str], cwd: &Path) -> Output {
    let out = bin()
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs");
    assert!(
        !out.status.success(),
        "command {:?} unexpectedly succeeded",
        args
    );
    out
}

/// Every file under `dir`, keyed by relative path.
fn collect_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(current) = stack.pop() {
        for entry in fs::read_dir(&current).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(rel, fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn write_small_spec(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("small.cfg");
    fs::write(
        &path,
        "kind = constant\nnrows = 60\nncols = 30\nnclusts = 2\n\
         nclustrows = 5\nnclustcols = 6\nbicluster_signals = 5\nnoise = 1\n\
         shuffle = true\nseed = 7\n",
    )
    .unwrap();
    path
}

#[test]
fn criterion_09_pipeline_determinism() {
    let started = Instant::now();
    let tmp = TempDir::new().unwrap();

    // The benchmark constant preset, full scale, explicit k.
    let args = |out: &str| {
        vec![
            "pipeline".to_string(),
            "--preset".into(),
            "constant".into(),
            "--spike-prob".into(),
            "0.01".into(),
            "--seed".into(),
            "42".into(),
            "--reps".into(),
            "1".into(),
            "--k-rows".into(),
            "6".into(),
            "--k-cols".into(),
            "6".into(),
            "--out".into(),
            out.into(),
        ]
    };

    for out in ["a", "b"] {
        let argv: Vec<String> = args(out);
        let argv_ref: Vec<&str> = argv.iter().map(String::as_str).collect();
        run_ok(&argv_ref, tmp.path());
    }

    let a = collect_files(&tmp.path().join("a"));
    let b = collect_files(&tmp.path().join("b"));
    assert_eq!(
        a.keys().collect::<Vec<_>>(),
        b.keys().collect::<Vec<_>>(),
        "different artifact sets"
    );
    for (name, bytes) in &a {
        assert_eq!(
            Some(bytes),
            b.get(name),
            "artifact {name} differs between identical runs"
        );
    }
    // JSON and PPM artifacts are present among the compared files.
    assert!(a.keys().any(|k| k.ends_with("report.json")));
    assert!(a.keys().any(|k| k.ends_with(".ppm")));

    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 120.0, "criterion 9 runtime {elapsed:.1} s");
    println!("criterion 9 (pipeline determinism, byte-identical artifacts): PASS ({elapsed:.2} s)");
}

#[test]
fn synth_benchmark_preset_shape_and_determinism() {
    let tmp = TempDir::new().unwrap();
    run_ok(
        &["synth", "--preset", "constant", "--seed", "3", "--out", "d1"],
        tmp.path(),
    );
    run_ok(
        &["synth", "--preset", "constant", "--seed", "3", "--out", "d2"],
        tmp.path(),
    );

    let csv = fs::read_to_string(tmp.path().join("d1.matrix.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 300);
    assert_eq!(rows[0].split(',').count(), 50);

    let truth = fs::read_to_string(tmp.path().join("d1.truth.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&truth).unwrap();
    assert_eq!(parsed["biclusters"].as_array().unwrap().len(), 5);

    // Byte-identical rerun.
    assert_eq!(
        fs::read(tmp.path().join("d1.matrix.csv")).unwrap(),
        fs::read(tmp.path().join("d2.matrix.csv")).unwrap()
    );
    assert_eq!(
        fs::read(tmp.path().join("d1.truth.json")).unwrap(),
        fs::read(tmp.path().join("d2.truth.json")).unwrap()
    );
}

#[test]
fn synth_zero_clusters_gives_pure_noise() {
    let tmp = TempDir::new().unwrap();
    fs::write(
        tmp.path().join("noise.cfg"),
        "kind = constant\nnrows = 40\nncols = 20\nnclusts = 0\nnoise = 1\nseed = 5\n",
    )
    .unwrap();
    run_ok(
        &["synth", "--spec", "noise.cfg", "--out", "noise"],
        tmp.path(),
    );
    let truth: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("noise.truth.json")).unwrap())
            .unwrap();
    assert!(truth["biclusters"].as_array().unwrap().is_empty());
    assert!(truth["spikes"].as_array().unwrap().is_empty());
}

#[test]
fn synth_rejects_bad_spec_with_nonzero_exit() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("bad.cfg"), "nrows = 10\nnclustrows = 99\n").unwrap();
    let out = run_err(&["synth", "--spec", "bad.cfg", "--out", "x"], tmp.path());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("[synth]"), "stage tag missing: {stderr}");
}

#[test]
fn recover_zero_matrix_reports_rank_zero() {
    let tmp = TempDir::new().unwrap();
    let zeros = vec!["0,0,0,0"; 6].join("\n");
    fs::write(tmp.path().join("zero.csv"), zeros + "\n").unwrap();
    run_ok(
        &["recover", "--input", "zero.csv", "--out", "z"],
        tmp.path(),
    );
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("z.recover.json")).unwrap())
            .unwrap();
    assert_eq!(summary["rank"], 0);
    assert_eq!(summary["sparsity"].as_f64().unwrap(), 0.0);
    let x = fs::read_to_string(tmp.path().join("z.X.csv")).unwrap();
    assert!(x.lines().all(|l| l.split(',').all(|v| v == "0")));
}

#[test]
fn recover_benchmark_sparsity_near_planted_rate() {
    let tmp = TempDir::new().unwrap();
    run_ok(
        &[
            "synth",
            "--preset",
            "constant",
            "--seed",
            "19",
            "--spike-prob",
            "0.01",
            "--out",
            "bench",
        ],
        tmp.path(),
    );
    run_ok(
        &["recover", "--input", "bench.matrix.csv", "--out", "bench"],
        tmp.path(),
    );
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("bench.recover.json")).unwrap())
            .unwrap();
    let sparsity = summary["sparsity"].as_f64().unwrap();
    assert!(
        (0.005..=0.02).contains(&sparsity),
        "sparsity {sparsity} outside [0.5%, 2%]"
    );
    assert_eq!(summary["converged"], true);
}

#[test]
fn ten_level_matrix_sparse_rate_tunable_to_five_percent() {
    // A graded 10-level matrix admits a lambda whose recovered sparse rate
    // sits near 0.05.
    let tmp = TempDir::new().unwrap();
    fs::write(
        tmp.path().join("g.cfg"),
        "kind = constant\nnrows = 100\nncols = 30\nnclusts = 2\n\
         nclustrows = 8\nnclustcols = 6\nbicluster_signals = 5\nnoise = 1\nseed = 31\n",
    )
    .unwrap();
    run_ok(&["synth", "--spec", "g.cfg", "--out", "g"], tmp.path());
    run_ok(
        &[
            "preprocess",
            "--input",
            "g.matrix.csv",
            "--mode",
            "bin",
            "--out",
            "g10.csv",
        ],
        tmp.path(),
    );

    let mut best_gap = f64::INFINITY;
    for lambda in ["0.05", "0.1", "0.2", "0.3"] {
        run_ok(
            &[
                "recover",
                "--input",
                "g10.csv",
                "--lambda",
                lambda,
                "--out",
                "g10",
            ],
            tmp.path(),
        );
        let summary: serde_json::Value = serde_json::from_str(
            &fs::read_to_string(tmp.path().join("g10.recover.json")).unwrap(),
        )
        .unwrap();
        let rate = summary["sparsity"].as_f64().unwrap();
        best_gap = best_gap.min((rate - 0.05).abs());
    }
    assert!(
        best_gap < 0.05,
        "no lambda reached a sparse rate near 0.05 (best gap {best_gap})"
    );
}

#[test]
fn extract_filter_evaluate_chain_recovers_planted_blocks() {
    let tmp = TempDir::new().unwrap();
    let spec = write_small_spec(tmp.path());
    run_ok(
        &[
            "synth",
            "--spec",
            spec.to_str().unwrap(),
            "--spike-prob",
            "0.01",
            "--out",
            "d",
        ],
        tmp.path(),
    );
    run_ok(&["recover", "--input", "d.matrix.csv", "--out", "r"], tmp.path());
    run_ok(
        &[
            "extract",
            "--input",
            "r.X.csv",
            "--data",
            "d.matrix.csv",
            "--k-rows",
            "3",
            "--k-cols",
            "3",
            "--seed",
            "7",
            "--out",
            "b.json",
        ],
        tmp.path(),
    );
    run_ok(
        &[
            "filter",
            "--biclusters",
            "b.json",
            "--data",
            "d.matrix.csv",
            "--out",
            "rep.json",
            "--passing",
            "pass.json",
        ],
        tmp.path(),
    );
    run_ok(
        &[
            "evaluate",
            "--predicted",
            "pass.json",
            "--truth",
            "d.truth.json",
            "--e-csv",
            "r.E.csv",
            "--out",
            "m.json",
        ],
        tmp.path(),
    );

    let metrics: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("m.json")).unwrap()).unwrap();
    assert!(metrics["prelic_recovery"].as_f64().unwrap() >= 0.8);
    assert!(metrics["fabia_consensus"].as_f64().unwrap() >= 0.6);
    assert!(metrics["sparse"]["recall"].as_f64().unwrap() >= 0.9);

    // The extraction output records its configuration.
    let b: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("b.json")).unwrap()).unwrap();
    assert_eq!(b["k_rows"], 3);
    assert_eq!(b["seed"], 7);
    assert_eq!(b["shape"][0], 60);
}

#[test]
fn preprocess_grade_anchors_and_range_errors() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("scores.csv"), "100,0,50,85\n").unwrap();
    run_ok(
        &[
            "preprocess",
            "--input",
            "scores.csv",
            "--mode",
            "invert",
            "--mode",
            "bin",
            "--out",
            "levels.csv",
        ],
        tmp.path(),
    );
    let levels = fs::read_to_string(tmp.path().join("levels.csv")).unwrap();
    assert_eq!(levels.trim(), "0,9,5,1");

    // All-equal scores collapse into a single level.
    fs::write(tmp.path().join("flat.csv"), "70,70\n70,70\n").unwrap();
    run_ok(
        &[
            "preprocess",
            "--input",
            "flat.csv",
            "--mode",
            "invert",
            "--mode",
            "bin",
            "--out",
            "flat_levels.csv",
        ],
        tmp.path(),
    );
    let flat = fs::read_to_string(tmp.path().join("flat_levels.csv")).unwrap();
    assert_eq!(flat.trim(), "0,0\n0,0");

    // Out-of-range scores fail with positions listed.
    fs::write(tmp.path().join("bad.csv"), "50,101\n-3,70\n").unwrap();
    let out = run_err(
        &[
            "preprocess",
            "--input",
            "bad.csv",
            "--mode",
            "invert",
            "--out",
            "x.csv",
        ],
        tmp.path(),
    );
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("(0, 1) = 101"), "{stderr}");
    assert!(stderr.contains("(1, 0) = -3"), "{stderr}");
}

#[test]
fn render_and_embed_are_deterministic() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("m.csv"), "1,0,0\n0,1,0\n0,0,1\n").unwrap();
    run_ok(
        &["render", "--input", "m.csv", "--scale", "2", "--out", "h1.ppm"],
        tmp.path(),
    );
    run_ok(
        &["render", "--input", "m.csv", "--scale", "2", "--out", "h2.ppm"],
        tmp.path(),
    );
    let h1 = fs::read(tmp.path().join("h1.ppm")).unwrap();
    assert_eq!(h1, fs::read(tmp.path().join("h2.ppm")).unwrap());
    assert!(h1.starts_with(b"P6\n6 6\n255\n"));

    // Duplicate columns embed identically at file level.
    fs::write(
        tmp.path().join("x.csv"),
        "1,2,1\n2,4,2\n0.5,1,0.5\n3,1,3\n",
    )
    .unwrap();
    run_ok(
        &[
            "embed", "--input", "x.csv", "--dims", "2", "--out", "e.csv", "--plot", "e.ppm",
        ],
        tmp.path(),
    );
    let emb = fs::read_to_string(tmp.path().join("e.csv")).unwrap();
    let lines: Vec<&str> = emb.lines().collect();
    assert_eq!(lines[0], "topic,dim1,dim2");
    let parse = |line: &str| -> Vec<f64> {
        line.split(',')
            .skip(1)
            .map(|v| v.parse::<f64>().unwrap())
            .collect()
    };
    let first = parse(lines[1]);
    let third = parse(lines[3]);
    for (a, b) in first.iter().zip(&third) {
        assert!(
            (a - b).abs() < 1e-9,
            "duplicate columns produced different embeddings: {a} vs {b}"
        );
    }
    assert!(tmp.path().join("e.ppm").exists());
}

#[test]
fn pipeline_negative_control_and_report_shape() {
    let tmp = TempDir::new().unwrap();
    let spec = write_small_spec(tmp.path());

    // Five repetitions aggregate mean/SD per metric.
    run_ok(
        &[
            "pipeline",
            "--spec",
            spec.to_str().unwrap(),
            "--spike-prob",
            "0.01",
            "--seed",
            "5",
            "--reps",
            "5",
            "--k-rows",
            "3",
            "--k-cols",
            "3",
            "--out",
            "multi",
        ],
        tmp.path(),
    );
    let report: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(tmp.path().join("multi/report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["reps"], 5);
    assert_eq!(report["runs"].as_array().unwrap().len(), 5);
    let stats = &report["metrics"];
    for key in [
        "liu_wang",
        "prelic_recovery",
        "prelic_relevance",
        "csi",
        "clustering_error_similarity",
        "fabia_consensus",
    ] {
        assert!(stats[key]["mean"].is_number(), "missing mean for {key}");
        assert!(stats[key]["sd"].is_number(), "missing sd for {key}");
    }
    assert!(stats["sparse_recall"]["mean"].is_number());

    // Pure noise as input: nothing significant.
    fs::write(
        tmp.path().join("noise.cfg"),
        "kind = constant\nnrows = 80\nncols = 30\nnclusts = 0\nnoise = 1\nseed = 2\n",
    )
    .unwrap();
    run_ok(&["synth", "--spec", "noise.cfg", "--out", "noise"], tmp.path());
    run_ok(
        &[
            "pipeline",
            "--input",
            "noise.matrix.csv",
            "--seed",
            "2",
            "--k-rows",
            "4",
            "--k-cols",
            "4",
            "--out",
            "nc",
        ],
        tmp.path(),
    );
    let nc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("nc/report.json")).unwrap())
            .unwrap();
    assert_eq!(nc["runs"][0]["n_significant"], 0, "noise produced false positives");
}

#[test]
fn pipeline_resume_matches_fresh_run() {
    let tmp = TempDir::new().unwrap();
    let spec = write_small_spec(tmp.path());
    let base_args = |out: &str, resume: bool| {
        let mut v = vec![
            "pipeline".to_string(),
            "--spec".into(),
            spec.to_str().unwrap().into(),
            "--spike-prob".into(),
            "0.01".into(),
            "--seed".into(),
            "9".into(),
            "--k-rows".into(),
            "3".into(),
            "--k-cols".into(),
            "3".into(),
            "--out".into(),
            out.into(),
        ];
        if resume {
            v.push("--resume".into());
        }
        v
    };

    for (out, resume) in [("fresh", false), ("resumed", false)] {
        let argv = base_args(out, resume);
        let argv_ref: Vec<&str> = argv.iter().map(String::as_str).collect();
        run_ok(&argv_ref, tmp.path());
    }
    // Rerun the second directory with --resume: downstream artifacts must
    // stay identical to the fresh run.
    let argv = base_args("resumed", true);
    let argv_ref: Vec<&str> = argv.iter().map(String::as_str).collect();
    run_ok(&argv_ref, tmp.path());

    let fresh = collect_files(&tmp.path().join("fresh"));
    let resumed = collect_files(&tmp.path().join("resumed"));
    assert_eq!(fresh, resumed, "resume diverged from fresh run");
}

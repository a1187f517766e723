//! End-to-end tests of the `persinet` binary: flags, exit codes, the error
//! JSON channel, and exact round-trips of the CSV artifacts.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use persinet::formats;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_persinet"))
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("run.toml");
    std::fs::write(&path, body).unwrap();
    path
}

/// A tiny corpus: a 4-cycle among a..d born over 2000-2006, one frequent
/// padding concept, and year anchors.
fn write_toy_corpus(dir: &Path) -> PathBuf {
    let mut rows = String::from("article_id,year,concept\n");
    for (article, year, concepts) in [
        ("p1", 2000, ["a", "b"]),
        ("p2", 2002, ["b", "c"]),
        ("p3", 2004, ["c", "d"]),
        ("p4", 2006, ["d", "a"]),
    ] {
        for concept in concepts {
            rows.push_str(&format!("{article},{year},{concept}\n"));
        }
    }
    for i in 0..5 {
        rows.push_str(&format!("pad{i},2010,common\n"));
    }
    let path = dir.join("toy.csv");
    std::fs::write(&path, rows).unwrap();
    path
}

fn run(command: &mut Command) -> Output {
    command.output().expect("binary runs")
}

#[test]
fn select_writes_artifacts_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_toy_corpus(dir.path());
    let config = write_config(
        dir.path(),
        &format!(
            "input = {:?}\nout_dir = {:?}\n\n[axes]\nlower = [1.0, 3.0]\nupper = [4.0, 10.0]\n\n\
             [constraints]\ndelta = [{{ absolute = 0.0 }}, {{ absolute = 0.0 }}]\n",
            corpus,
            dir.path().join("out")
        ),
    );
    let output = run(binary().args(["select", "--config"]).arg(&config));
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );

    let heatmap = dir.path().join("out/heatmap.csv");
    let rows = formats::read_heatmap_csv(&heatmap).unwrap();
    assert_eq!(rows.len(), 4);
    // The (1, 10) cell keeps the 4-cycle: one dimension-1 feature.
    let full = rows.iter().find(|r| r.ell == 1.0 && r.u == 10.0).unwrap();
    assert_eq!((full.f1, full.f2), (1, 0));
    assert_eq!(full.nodes, 5);
    assert_eq!(full.edges, 4);

    // Byte-exact CSV round-trip: rewrite what we parsed and compare files.
    let text = std::fs::read_to_string(&heatmap).unwrap();
    let mut rebuilt = String::from("ell,u,grad_magnitude,f1,f2,nodes,edges\n");
    for r in &rows {
        rebuilt.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.ell, r.u, r.grad_magnitude, r.f1, r.f2, r.nodes, r.edges
        ));
    }
    assert_eq!(text, rebuilt);

    let variance = formats::read_variance_csv(&dir.path().join("out/variance.csv")).unwrap();
    assert_eq!(variance.len(), 4);
    let report = formats::read_selection_json(&dir.path().join("out/selection.json")).unwrap();
    assert_eq!(report.lower_axis, vec![1.0, 3.0]);
    assert_eq!(report.upper_axis, vec![4.0, 10.0]);
}

#[test]
fn fraction_one_forces_the_maximum_feature_count() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_toy_corpus(dir.path());
    let config = write_config(
        dir.path(),
        &format!(
            "input = {:?}\nout_dir = {:?}\nk_max = 1\n\n\
             [axes]\nlower = [1.0, 3.0]\nupper = [4.0, 10.0]\n\n\
             [constraints]\ndelta = [{{ fraction = 1.0 }}]\n",
            corpus,
            dir.path().join("out")
        ),
    );
    let output = run(binary().args(["select", "--config"]).arg(&config));
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let report = formats::read_selection_json(&dir.path().join("out/selection.json")).unwrap();
    // Scan the heatmap for the maximum f1 and compare.
    let rows = formats::read_heatmap_csv(&dir.path().join("out/heatmap.csv")).unwrap();
    let max_f1 = rows.iter().map(|r| r.f1).max().unwrap();
    assert!(max_f1 > 0);
    assert_eq!(report.selection.feature_counts[0], max_f1);
}

#[test]
fn infeasible_constraints_exit_with_code_two_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_toy_corpus(dir.path());
    let config = write_config(
        dir.path(),
        &format!(
            "input = {:?}\nout_dir = {:?}\n\n[axes]\nlower = [1.0, 3.0]\nupper = [4.0, 10.0]\n\n\
             [constraints]\ndelta = [{{ absolute = 50.0 }}, {{ absolute = 50.0 }}]\n",
            corpus,
            dir.path().join("out")
        ),
    );
    let output = run(binary().args(["select", "--config"]).arg(&config));
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    let payload: serde_json::Value = serde_json::from_str(stderr.lines().last().unwrap()).unwrap();
    assert_eq!(payload["error"], "infeasible");
    let message = payload["message"].as_str().unwrap();
    assert!(
        message.contains("dim 1") && message.contains("50"),
        "{message}"
    );
}

#[test]
fn io_errors_exit_with_code_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        &format!(
            "input = \"/nonexistent/corpus.csv\"\nout_dir = {:?}\n",
            dir.path().join("out")
        ),
    );
    let output = run(binary().args(["select", "--config"]).arg(&config));
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8(output.stderr).unwrap();
    let payload: serde_json::Value = serde_json::from_str(stderr.lines().last().unwrap()).unwrap();
    assert_eq!(payload["error"], "error");
}

#[test]
fn synth_is_reproducible_and_env_var_sets_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let output = run(binary().args(["synth", "--seed", "7", "--out"]).arg(&out_a));
    assert!(output.status.success());
    // The env var steers the output directory when --out is absent.
    let output = run(binary()
        .args(["synth", "--seed", "7"])
        .env("PERSINET_OUT", &out_b));
    assert!(output.status.success());
    let a = std::fs::read(out_a.join("synthetic_corpus.csv")).unwrap();
    let b = std::fs::read(out_b.join("synthetic_corpus.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn spectrum_subcommand_handles_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_toy_corpus(dir.path());
    let config = write_config(
        dir.path(),
        &format!(
            "input = {:?}\nout_dir = {:?}\n",
            corpus,
            dir.path().join("records_out")
        ),
    );
    let output = run(binary()
        .args(["spectrum", "--config"])
        .arg(&config)
        .args(["--lower", "1", "--upper", "10", "--count", "5"]));
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let rows = formats::read_spectrum_csv(&dir.path().join("records_out/spectrum.csv")).unwrap();
    assert!(rows.iter().any(|r| r.label == "pre"));
    assert!(rows.iter().any(|r| r.label == "post"));

    // Records input without bounds is a usage error.
    let output = run(binary().args(["spectrum", "--config"]).arg(&config));
    assert_eq!(output.status.code(), Some(1));

    // Edge-list input skips the corpus stage.
    let edges = dir.path().join("edges.csv");
    std::fs::write(&edges, "source,target,weight\nx,y,0.5\ny,z,0.25\n").unwrap();
    let config = write_config(
        dir.path(),
        &format!(
            "input = {:?}\nformat = \"edge_list\"\nout_dir = {:?}\n",
            edges,
            dir.path().join("edge_out")
        ),
    );
    let output = run(binary().args(["spectrum", "--config"]).arg(&config));
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let rows = formats::read_spectrum_csv(&dir.path().join("edge_out/spectrum.csv")).unwrap();
    assert!(rows.iter().all(|r| r.label == "pre"));
    assert_eq!(rows.len(), 3);

    // Edge-list input cannot drive the selection pipeline.
    let output = run(binary().args(["select", "--config"]).arg(&config));
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("records"), "{stderr}");
}

#[test]
fn declared_year_range_must_contain_the_data() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_toy_corpus(dir.path());
    let config = write_config(
        dir.path(),
        &format!(
            "input = {:?}\nout_dir = {:?}\nyear_range = [2003, 2010]\n\n\
             [axes]\nlower = [1.0, 3.0]\nupper = [4.0, 10.0]\n",
            corpus,
            dir.path().join("out")
        ),
    );
    let output = run(binary().args(["select", "--config"]).arg(&config));
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("declared range"), "{stderr}");
}

#[test]
fn sweep_writes_the_path_csv() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_toy_corpus(dir.path());
    let config = write_config(
        dir.path(),
        &format!(
            "input = {:?}\nout_dir = {:?}\n\n[axes]\nlower = [1.0, 3.0]\nupper = [4.0, 10.0]\n\n\
             [sweep]\nfractions = [[0.0, 0.5], [0.0, 0.5]]\n",
            corpus,
            dir.path().join("out")
        ),
    );
    let output = run(binary().args(["sweep", "--config"]).arg(&config));
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let rows = formats::read_sweep_csv(&dir.path().join("out/sweep.csv")).unwrap();
    assert_eq!(rows.len(), 4);
}

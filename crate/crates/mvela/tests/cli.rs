mod common;

use common::{code, complementary_traces, instance_ids, mvela, p, stderr, stdout};

#[test]
fn featurize_hier1_row_count_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.csv");
    let o = mvela(&["featurize", "--problem", "hier1", "--encoding", "te", "--reps", "2", "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 1 + 80);
    let summary = stdout(&o);
    assert_eq!(summary.lines().count(), 1);
    let v: serde_json::Value = serde_json::from_str(&summary).unwrap();
    assert_eq!(v["rows"], 80);
}

#[test]
fn featurize_is_byte_identical_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (dir.path().join("a.csv"), dir.path().join("b.csv"), dir.path().join("c.csv"));
    for (path, seed) in [(&a, "5"), (&b, "5"), (&c, "6")] {
        let o = mvela(&[
            "featurize",
            "--problem",
            "rugged@2",
            "--encoding",
            "both",
            "--reps",
            "2",
            "--sample-factor",
            "10",
            "--seed",
            seed,
            "--out",
            p(path),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    let read = |x| std::fs::read(x).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
}

#[test]
fn nonexistent_space_file_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = mvela(&[
        "featurize",
        "--space",
        p(&dir.path().join("nope.json")),
        "--design",
        p(&dir.path().join("d.csv")),
        "--out",
        p(&dir.path().join("f.csv")),
    ]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("nope.json"));
    assert!(stdout(&o).is_empty());
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.csv");
    assert_eq!(code(&mvela(&["featurize", "--problem", "nosuch", "--out", p(&out)])), 2);
    assert_eq!(code(&mvela(&["featurize", "--problem", "hier1", "--instances", "3", "--out", p(&out)])), 2);
    assert_eq!(code(&mvela(&["featurize", "--out", p(&out)])), 2);
    assert_eq!(code(&mvela(&["featurize", "--problem", "hier1", "--encoding", "xx", "--out", p(&out)])), 2);
    assert_eq!(code(&mvela(&["bogus"])), 2);
}

#[test]
fn sample_then_featurize_external_design() {
    let dir = tempfile::tempdir().unwrap();
    let (design, space, feats) = (dir.path().join("d.csv"), dir.path().join("s.json"), dir.path().join("f.csv"));
    let o = mvela(&[
        "sample",
        "--problem",
        "hier1",
        "--n",
        "60",
        "--seed",
        "3",
        "--out",
        p(&design),
        "--space-out",
        p(&space),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(std::fs::read_to_string(&design).unwrap().contains("NA"));
    let o =
        mvela(&["featurize", "--space", p(&space), "--design", p(&design), "--encoding", "both", "--out", p(&feats)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(std::fs::read_to_string(&feats).unwrap().lines().count(), 1 + 2 * 40);
}

#[test]
fn malformed_design_names_line() {
    let dir = tempfile::tempdir().unwrap();
    let (design, space) = (dir.path().join("d.csv"), dir.path().join("s.json"));
    assert_eq!(
        code(&mvela(&["sample", "--problem", "hier1", "--n", "5", "--out", p(&design), "--space-out", p(&space)])),
        0
    );
    let mut text = std::fs::read_to_string(&design).unwrap();
    text.push_str("c,NA,1\n");
    std::fs::write(&design, text).unwrap();
    let o = mvela(&["featurize", "--space", p(&space), "--design", p(&design), "--out", p(&dir.path().join("f.csv"))]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("line 7"), "{}", stderr(&o));
}

fn write(dir: &std::path::Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn perf_partial_success_example() {
    // 5 of 20 runs reach the target at evaluation 100, budget 300.
    let mut t = String::from("instance_id,algorithm,run_id,fe,y\n");
    for r in 0..20 {
        for fe in 1..=300 {
            let y = if r < 5 && fe >= 100 { 0.0 } else { 1.0 };
            t.push_str(&format!("i,A,{r},{fe},{y}\n"));
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let traces = write(dir.path(), "t.csv", &t);
    let out = dir.path().join("p.csv");
    let o = mvela(&["perf", "--traces", p(&traces), "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "i,A,1000,5,20,0,300");
}

#[test]
fn perf_identical_algorithms_get_identical_rows() {
    let mut t = String::from("instance_id,algorithm,run_id,fe,y\n");
    for alg in ["A", "B"] {
        for r in 0..3 {
            for fe in 1..=50 {
                t.push_str(&format!("i,{alg},{r},{fe},{}\n", 1.0 / (fe + r) as f64));
            }
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let traces = write(dir.path(), "t.csv", &t);
    let out = dir.path().join("p.csv");
    assert_eq!(code(&mvela(&["perf", "--traces", p(&traces), "--out", p(&out)])), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> =
        text.lines().skip(1).map(|l| l.split_once(",A,").or(l.split_once(",B,")).unwrap().1).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0], rows[1]);
}

#[test]
fn perf_data_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let empty = write(dir.path(), "e.csv", "");
    assert_eq!(code(&mvela(&["perf", "--traces", p(&empty), "--out", p(&out)])), 1);
    let bad = write(dir.path(), "b.csv", "instance_id,algorithm,run_id,fe,y\ni,A,0,1,0.5\ni,A,0,2,abc\n");
    let o = mvela(&["perf", "--traces", p(&bad), "--out", p(&out)]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

/// Features for `n` sphere instances plus a perf table from `traces`.
fn select_fixture(dir: &std::path::Path, n: u64, traces: &str) -> (std::path::PathBuf, std::path::PathBuf) {
    let feats = dir.join("f.csv");
    let n_s = n.to_string();
    let o = mvela(&[
        "featurize",
        "--problem",
        "sphere",
        "--instances",
        &n_s,
        "--reps",
        "2",
        "--sample-factor",
        "10",
        "--out",
        p(&feats),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = write(dir, "t.csv", traces);
    let perf = dir.join("p.csv");
    assert_eq!(code(&mvela(&["perf", "--traces", p(&t), "--out", p(&perf)])), 0);
    (feats, perf)
}

#[test]
fn select_more_folds_than_instances_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let ids = instance_ids("sphere", 5);
    let (feats, perf) = select_fixture(dir.path(), 5, &complementary_traces(&ids[..2], &ids[2..], 2, 100));
    let o = mvela(&[
        "select",
        "--features",
        p(&feats),
        "--perf",
        p(&perf),
        "--folds",
        "10",
        "--out",
        p(&dir.path().join("r.json")),
    ]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn select_single_algorithm_is_a_degenerate_portfolio() {
    let dir = tempfile::tempdir().unwrap();
    let ids = instance_ids("sphere", 6);
    let mut t = String::from("instance_id,algorithm,run_id,fe,y\n");
    for id in &ids {
        for fe in 1..=20 {
            t.push_str(&format!("{id},only,0,{fe},{}\n", 1.0 / fe as f64));
        }
    }
    let (feats, perf) = select_fixture(dir.path(), 6, &t);
    let o = mvela(&[
        "select",
        "--features",
        p(&feats),
        "--perf",
        p(&perf),
        "--folds",
        "3",
        "--out",
        p(&dir.path().join("r.json")),
    ]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("degenerate portfolio"), "{}", stderr(&o));
}

#[test]
fn select_unjoinable_ids_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let others = instance_ids("rugged", 4);
    let (feats, perf) = select_fixture(dir.path(), 4, &complementary_traces(&others[..2], &others[2..], 2, 100));
    let o = mvela(&[
        "select",
        "--features",
        p(&feats),
        "--perf",
        p(&perf),
        "--folds",
        "2",
        "--out",
        p(&dir.path().join("r.json")),
    ]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("no performance records"), "{}", stderr(&o));
}

#[test]
fn select_report_fields() {
    let dir = tempfile::tempdir().unwrap();
    let ids = instance_ids("sphere", 8);
    let (feats, perf) = select_fixture(dir.path(), 8, &complementary_traces(&ids[..4], &ids[4..], 2, 200));
    let report = dir.path().join("r.json");
    let aas = dir.path().join("aas.csv");
    let o = mvela(&[
        "select",
        "--features",
        p(&feats),
        "--perf",
        p(&perf),
        "--folds",
        "4",
        "--sample-factor",
        "10",
        "--out",
        p(&report),
        "--dataset-out",
        p(&aas),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    for key in ["subset", "steps", "cv_accuracy", "predictions", "model_ert", "sbs_ert", "vbs_ert", "gap_closure"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["leakage"], 0);
    assert_eq!(v["predictions"].as_object().unwrap().len(), 8);
    assert_eq!(std::fs::read_to_string(&aas).unwrap().lines().count(), 1 + 16);
}

#[test]
fn analyze_writes_clusters_and_correlations() {
    let dir = tempfile::tempdir().unwrap();
    let feats = dir.path().join("f.csv");
    let o = mvela(&[
        "featurize",
        "--problem",
        "sphere",
        "--problem",
        "rugged",
        "--instances",
        "3",
        "--encoding",
        "both",
        "--reps",
        "3",
        "--sample-factor",
        "10",
        "--out",
        p(&feats),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = dir.path().join("analysis");
    let o = mvela(&["analyze", "--features", p(&feats), "--k", "2", "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let clusters = std::fs::read_to_string(out.join("clusters.csv")).unwrap();
    assert_eq!(clusters.lines().count(), 1 + 6);
    assert!(clusters.lines().skip(1).all(|l| l.ends_with(",0") || l.ends_with(",1")));
    let corr = std::fs::read_to_string(out.join("correlations.csv")).unwrap();
    assert_eq!(corr.lines().count(), 1 + 40);
    assert!(corr.starts_with("feature_name,pearson,spearman,n\n"));
    assert_eq!(code(&mvela(&["analyze", "--features", p(&feats), "--k", "7", "--out", p(&out)])), 2);
}

#[test]
fn solve_rs_traces_feed_perf() {
    let dir = tempfile::tempdir().unwrap();
    let traces = dir.path().join("t.csv");
    let o = mvela(&[
        "solve-rs",
        "--problem",
        "hier1",
        "--runs",
        "3",
        "--budget-factor",
        "10",
        "--seed",
        "2",
        "--out",
        p(&traces),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(std::fs::read_to_string(&traces).unwrap().lines().count(), 1 + 3 * 20);
    let perf = dir.path().join("p.csv");
    assert_eq!(code(&mvela(&["perf", "--traces", p(&traces), "--out", p(&perf)])), 0);
    let text = std::fs::read_to_string(&perf).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("hier1,RS,"));
}

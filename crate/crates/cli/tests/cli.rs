use std::fs;
use std::process::{Command, Output};

fn treesort(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treesort"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn sort_chain_deterministic() {
    let out = treesort(&[
        "sort",
        "--family",
        "chain",
        "--n",
        "3",
        "--algorithm",
        "deterministic",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0 1\n1 2\n");
    let record = String::from_utf8(out.stderr).unwrap();
    assert!(record.starts_with("algorithm,family,n,d,w,seed,"));
    assert!(record.contains("deterministic,chain,3,1,1,0,"));
}

#[test]
fn sort_star_and_lb_family() {
    let out = treesort(&[
        "sort",
        "--family",
        "star",
        "--n",
        "4",
        "--algorithm",
        "optimized",
        "--seed",
        "1",
    ]);
    assert_eq!(stdout(&out), "0 1\n0 2\n0 3\n");
    let out = treesort(&[
        "sort",
        "--family",
        "lb_family",
        "--n",
        "7",
        "--d",
        "2",
        "--algorithm",
        "centroid",
    ]);
    assert_eq!(stdout(&out), "0 1\n0 2\n2 3\n2 4\n4 5\n4 6\n");
}

#[test]
fn sort_is_repeatable_apart_from_timing() {
    let run = |alg| {
        let out = treesort(&[
            "sort",
            "--family",
            "random_attachment",
            "--n",
            "300",
            "--d",
            "3",
            "--seed",
            "11",
            "--algorithm",
            alg,
        ]);
        let record = String::from_utf8(out.stderr.clone()).unwrap();
        let mut fields: Vec<String> = record
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .map(String::from)
            .collect();
        // drop wall_time_ns
        fields.remove(9);
        (stdout(&out), fields)
    };
    for alg in ["centroid", "optimized", "deterministic"] {
        assert_eq!(run(alg), run(alg));
    }
}

#[test]
fn sort_reads_tree_file() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("tree.txt");
    fs::write(&tree, "# hand-made\n5\n3 3 -1 2 2\n").unwrap();
    let out = treesort(&[
        "sort",
        "--input",
        tree.to_str().unwrap(),
        "--algorithm",
        "optimized",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "3 0\n3 1\n2 3\n2 4\n");
}

#[test]
fn generate_then_verify_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("tree.txt");
    let out = treesort(&[
        "generate",
        "--family",
        "complete_dary",
        "--n",
        "40",
        "--d",
        "3",
        "--output",
        tree.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(fs::read_to_string(&tree)
        .unwrap()
        .starts_with("40\n-1 0 0 0 1"));
    let out = treesort(&[
        "verify",
        "--input",
        tree.to_str().unwrap(),
        "--algorithm",
        "deterministic",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("PASS: 1560 pairs"));
}

#[test]
fn verify_modes_pass() {
    let out = treesort(&[
        "verify",
        "--family",
        "chain",
        "--n",
        "100",
        "--algorithm",
        "optimized",
        "--verify-mode",
        "exhaustive",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let out = treesort(&[
        "verify",
        "--family",
        "random_attachment",
        "--n",
        "5000",
        "--d",
        "8",
        "--verify-mode",
        "sampled:10000",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("10000 pairs"));
}

#[test]
fn verify_reports_corrupted_edge_file() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("edges.txt");
    // chain 0-1-2-3 with 2 redirected to 0
    fs::write(&edges, "0 1\n0 2\n2 3\n").unwrap();
    let out = treesort(&[
        "verify",
        "--family",
        "chain",
        "--n",
        "4",
        "--edges",
        edges.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.starts_with("FAIL"), "{text}");
    assert!(text.contains("pair (1, 2)"), "{text}");
}

#[test]
fn bench_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("summary.csv");
    let out = treesort(&[
        "bench",
        "--algorithm",
        "optimized,deterministic",
        "--family",
        "chain,complete_dary",
        "--n",
        "31,63",
        "--d",
        "2",
        "--trials",
        "3",
        "--seed",
        "7",
        "--jobs",
        "2",
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "algorithm,family,n,d,w,seed,total_queries,distinct_queries,retries,wall_time_ns,correct"
    );
    assert_eq!(lines.len(), 1 + 2 * 2 * 2 * 3);
    assert!(lines[1].starts_with("optimized,chain,31,1,1,7,"));
    assert!(lines[1..].iter().all(|l| l.ends_with(",true")));
    let summary = fs::read_to_string(summary).unwrap();
    assert_eq!(summary.lines().count(), 1 + 8);
    assert!(summary.starts_with("algorithm,family,n,d,trials,mean_total_queries,"));
}

#[test]
fn bench_json_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = treesort(&[
        "bench",
        "--format",
        "json",
        "--n",
        "50",
        "--trials",
        "2",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(path).unwrap();
    assert!(text.contains("\"records\"") && text.contains("\"aggregates\""));
    assert!(text.contains("\"interrupted\": false"));
}

#[test]
fn empty_matrix_is_empty_table() {
    let out = treesort(&["bench", "--trials", "0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 1);
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(
        treesort(&["sort", "--algorithm", "quick"]).status.code(),
        Some(2)
    );
    assert_eq!(
        treesort(&["bench", "--family", "forest"]).status.code(),
        Some(2)
    );
    assert_eq!(
        treesort(&["verify", "--verify-mode", "sampled:"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        treesort(&["sort", "--input", "/nonexistent/tree.txt"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        treesort(&["sort", "--family", "chain", "--n", "0"])
            .status
            .code(),
        Some(2)
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "3\n-1 -1 0\n").unwrap();
    let out = treesort(&["sort", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("error"));
}

//! End-to-end tests of the command-line interface, including exit codes and
//! the documented pipelines.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_streamtable"))
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("streamtable-cli-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

#[test]
fn layout_reports_zero_splits() {
    let dir = tempdir("layout");
    let csv = dir.join("t.csv");
    fs::write(&csv, ",A,B\nr1,2,1\nr2,1,2\n").unwrap();
    let output = bin().args(["layout", csv.to_str().unwrap(), "--heights", "uniform:1"]).output().unwrap();
    let doc = stdout_json(&output);
    assert_eq!(doc["metrics"]["splits"], 0);
    assert_eq!(doc["metrics"]["excess"], "0");
}

#[test]
fn generate_then_layout_pipeline_meets_threshold() {
    let dir = tempdir("pipeline");
    let instance = dir.join("triples.json");
    fs::write(&instance, "[[2,1,3],[3,4,5],[1,4,5],[2,4,1],[5,2,3]]").unwrap();
    let table_csv = dir.join("table.csv");
    let gen = bin()
        .args([
            "gen",
            "betweenness",
            instance.to_str().unwrap(),
            "--w",
            "15",
            "--out",
            table_csv.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(gen.status.success());
    let meta: serde_json::Value =
        serde_json::from_slice(&gen.stderr).expect("metadata JSON on stderr");
    assert_eq!(meta["threshold"], "125/4");
    assert_eq!(meta["epsilon"], "1/30");

    let layout = bin()
        .args([
            "layout",
            table_csv.to_str().unwrap(),
            "--heights",
            "uniform:1",
            "--order",
            "3,1,4,2,5",
        ])
        .output()
        .unwrap();
    let doc = stdout_json(&layout);
    assert_eq!(doc["metrics"]["splits"], 0);
    // Exact comparison: excess must be at most 125/4.
    let excess = streamtable::rational::parse(doc["metrics"]["excess"].as_str().unwrap()).unwrap();
    assert!(excess <= streamtable::rational::ratio(125, 4));
}

#[test]
fn search_finds_hamiltonian_split_optimum() {
    let dir = tempdir("search");
    let graph = dir.join("g.txt");
    fs::write(&graph, "a b\nb c\nc d\nd e\ne f\na f\nb f\na d\nc e\n").unwrap();
    let table_csv = dir.join("table.csv");
    let gen = bin()
        .args(["gen", "hampath", graph.to_str().unwrap(), "--out", table_csv.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(gen.status.success());
    let output = bin()
        .args([
            "search",
            table_csv.to_str().unwrap(),
            "--objective",
            "min-splits",
            "--delta",
            "1",
            "--method",
            "brute",
        ])
        .output()
        .unwrap();
    let doc = stdout_json(&output);
    assert_eq!(doc["score"], 20);
    assert_eq!(doc["optimal"], true);
    assert_eq!(doc["evaluations"], 720);
}

#[test]
fn verify_reports_certificate_and_threshold() {
    let dir = tempdir("verify");
    let instance = dir.join("triples.json");
    fs::write(&instance, "[[2,1,3],[3,4,5],[1,4,5],[2,4,1],[5,2,3]]").unwrap();
    let output = bin()
        .args(["verify", "betweenness", instance.to_str().unwrap(), "--order", "3,1,4,2,5"])
        .output()
        .unwrap();
    let doc = stdout_json(&output);
    assert_eq!(doc["certificate"], true);
    assert_eq!(doc["within"], true);
    assert_eq!(doc["threshold"], "125/4");

    let graph = dir.join("g.txt");
    fs::write(&graph, "a b\nb c\nc d\nd e\ne f\na f\nb f\na d\nc e\n").unwrap();
    let output = bin()
        .args(["verify", "hampath", graph.to_str().unwrap(), "--order", "a,b,c,d,e,f"])
        .output()
        .unwrap();
    let doc = stdout_json(&output);
    assert_eq!(doc["certificate"], true);
    assert_eq!(doc["metric"], "20");
    assert_eq!(doc["within"], true);
}

#[test]
fn emit_model_and_import_own_solution() {
    let dir = tempdir("model");
    let csv = dir.join("t.csv");
    fs::write(&csv, ",A,B\nr1,2,1\nr2,1,2\n").unwrap();
    let model = bin()
        .args(["emit-model", "lp", csv.to_str().unwrap(), "--heights", "uniform:1"])
        .output()
        .unwrap();
    assert!(model.status.success());
    let text = String::from_utf8(model.stdout).unwrap();
    for section in ["Minimize", "Subject To", "Bounds", "End"] {
        assert!(text.contains(section));
    }

    // The greedy coordinates of this table tile a 3x2 box.
    let solution = dir.join("sol.txt");
    fs::write(
        &solution,
        "a_1_1 0\nb_1_1 2\na_1_2 2\nb_1_2 3\na_2_1 0\nb_2_1 1\na_2_2 1\nb_2_2 3\nd_1_1 0\nd_1_2 2\n",
    )
    .unwrap();
    let import = bin()
        .args([
            "import-solution",
            csv.to_str().unwrap(),
            solution.to_str().unwrap(),
            "--kind",
            "lp",
            "--heights",
            "uniform:1",
        ])
        .output()
        .unwrap();
    let doc = stdout_json(&import);
    assert_eq!(doc["feasible"], true);
    assert_eq!(doc["exact"], true);
    assert_eq!(doc["objective"], "0");
    assert_eq!(doc["layout"]["metrics"]["excess"], "0");

    // A witness outside its interval violates an adjacency constraint:
    // domain error, exit code 1, report on stdout.
    fs::write(
        &solution,
        "a_1_1 0\nb_1_1 2\na_1_2 2\nb_1_2 3\na_2_1 0\nb_2_1 1\na_2_2 1\nb_2_2 3\nd_1_1 9\nd_1_2 2\n",
    )
    .unwrap();
    let import = bin()
        .args([
            "import-solution",
            csv.to_str().unwrap(),
            solution.to_str().unwrap(),
            "--kind",
            "lp",
            "--heights",
            "uniform:1",
        ])
        .output()
        .unwrap();
    assert_eq!(import.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&import.stdout).unwrap();
    assert_eq!(doc["feasible"], false);
}

#[test]
fn render_produces_svg() {
    let dir = tempdir("render");
    let csv = dir.join("t.csv");
    fs::write(&csv, ",A,B\nr1,3,1\nr2,1,1\n").unwrap();
    let layout_json = dir.join("layout.json");
    let layout = bin()
        .args(["layout", csv.to_str().unwrap(), "--out", layout_json.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(layout.status.success());
    let svg_path = dir.join("out.svg");
    let render = bin()
        .args([
            "render",
            layout_json.to_str().unwrap(),
            "--labels",
            "--table",
            csv.to_str().unwrap(),
            "--out",
            svg_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(render.status.success(), "{}", String::from_utf8_lossy(&render.stderr));
    let svg = fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains(">r1</text>"));
}

#[test]
fn exit_codes_distinguish_domain_and_usage_errors() {
    let dir = tempdir("exit");
    let csv = dir.join("bad.csv");
    fs::write(&csv, ",A,B\nr1,0,1\n").unwrap();
    // Domain error: zero weight -> exit 1.
    let output = bin().args(["layout", csv.to_str().unwrap()]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("non-positive"));

    // Usage error: unknown subcommand -> exit 2.
    let output = bin().args(["no-such-command"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));

    // Annealing without a seed is a usage error.
    fs::write(&csv, ",A,B\nr1,1,1\nr2,1,1\n").unwrap();
    let output = bin()
        .args([
            "search",
            csv.to_str().unwrap(),
            "--objective",
            "min-excess",
            "--method",
            "anneal",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn gp_model_round_trips_through_cli() {
    let dir = tempdir("gp");
    let csv = dir.join("t.csv");
    fs::write(&csv, ",A,B\nr1,2,1\nr2,1,2\n").unwrap();
    let out1 = bin()
        .args([
            "emit-model",
            "gp",
            csv.to_str().unwrap(),
            "--total-height",
            "2",
            "--max-width",
            "10",
        ])
        .output()
        .unwrap();
    assert!(out1.status.success());
    let text = String::from_utf8(out1.stdout).unwrap();
    let parsed = streamtable::model::gp_from_json(&text).unwrap();
    assert_eq!(streamtable::model::gp_to_json(&parsed), text);
}

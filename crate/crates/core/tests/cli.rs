use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn tclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tclab"))
        .args(args)
        .output()
        .expect("spawn tclab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_writes_facts_and_prints_count() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("cyc.facts");
    let o = tclab(&[
        "gen",
        "cyc",
        "--n",
        "3",
        "--format",
        "tsv",
        "--out",
        path_str(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "3 edges");
    assert_eq!(fs::read_to_string(&out).unwrap(), "1\t2\n2\t3\n3\t1\n");

    let out = dir.path().join("path.P");
    let o = tclab(&[
        "gen",
        "path",
        "--n",
        "1",
        "--format",
        "prolog",
        "--out",
        path_str(&out),
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0 edges");
    assert_eq!(fs::read(&out).unwrap(), b"");
}

#[test]
fn gen_to_stdout_keeps_count_on_stderr() {
    let o = tclab(&["gen", "grid", "--n", "2", "--format", "asp"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "edge(1,2).\nedge(1,3).\nedge(2,4).\nedge(3,4).\n"
    );
    assert_eq!(stderr(&o).trim(), "4 edges");
}

#[test]
fn gen_rejects_invalid_specs() {
    let o = tclab(&["gen", "cycextra", "--n", "10", "--k", "3"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("(k+1) must divide n"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());

    let o = tclab(&["gen", "x", "--n", "3"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("parameter k is required"));

    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("missing").join("out.facts");
    let o = tclab(&["gen", "cyc", "--n", "3", "--out", path_str(&bad)]);
    assert!(!o.status.success());
}

#[test]
fn run_reports_instrumentation() {
    let dir = TempDir::new().unwrap();
    let edges = dir.path().join("cmpl.facts");
    assert!(
        tclab(&["gen", "cmpl", "--n", "3", "--out", path_str(&edges)])
            .status
            .success()
    );
    let paths = dir.path().join("paths.facts");
    let o = tclab(&[
        "run",
        "--engine",
        "minincrement",
        "--variant",
        "left",
        path_str(&edges),
        "--out",
        path_str(&paths),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let line = stdout(&o);
    assert!(line.contains("rec_firings=27"), "{line}");
    assert!(line.contains("Query_ms="), "{line}");
    assert_eq!(fs::read_to_string(&paths).unwrap().lines().count(), 9);

    let cyc = dir.path().join("cyc.facts");
    assert!(tclab(&["gen", "cyc", "--n", "4", "--out", path_str(&cyc)])
        .status
        .success());
    let o = tclab(&[
        "run",
        "--engine",
        "topdown",
        "--variant",
        "left",
        path_str(&cyc),
    ]);
    assert!(stdout(&o).contains("tables_created=1"), "{}", stdout(&o));

    let o = tclab(&[
        "run",
        "--engine",
        "ground",
        "--variant",
        "right",
        path_str(&cyc),
    ]);
    let line = stdout(&o);
    assert!(
        line.contains("Ground_ms=") && line.contains("Solve_ms="),
        "{line}"
    );
}

#[test]
fn run_on_empty_and_malformed_files() {
    let dir = TempDir::new().unwrap();
    let empty = dir.path().join("empty.facts");
    fs::write(&empty, "").unwrap();
    let out = dir.path().join("out.facts");
    let o = tclab(&[
        "run",
        "--engine",
        "seminaive",
        "--variant",
        "double",
        path_str(&empty),
        "--out",
        path_str(&out),
    ]);
    assert!(o.status.success());
    assert_eq!(fs::read(&out).unwrap(), b"");

    let bad = dir.path().join("bad.P");
    fs::write(&bad, "edge(1,2).\nedge(1,x).\n").unwrap();
    let o = tclab(&[
        "run",
        "--engine",
        "ground",
        "--variant",
        "left",
        "--format",
        "prolog",
        path_str(&bad),
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn predict_prints_csv() {
    let o = tclab(&["predict", "grid", "--n", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "family,n,k,h,vertices,edges,paths,combos_left,combos_right,combos_double"
    );
    assert_eq!(lines[1], "Grid,2,,,4,4,5,2,2,2");
    assert_eq!(
        stdout(&tclab(&["predict", "w", "--n", "5", "--k", "3"]))
            .lines()
            .nth(1),
        Some("W,5,3,,10,15,15,0,0,0")
    );
    assert_eq!(
        stdout(&tclab(&["predict", "bintree", "--h", "3"]))
            .lines()
            .nth(1),
        Some("BinTree,,,3,7,6,10,4,4,4")
    );
    assert!(!tclab(&["predict", "cmpl", "--n", "0"]).status.success());
}

#[test]
fn verify_modes() {
    let o = tclab(&["verify", "cmpl", "--n", "6"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("PASS"));

    let o = tclab(&["verify", "bintreerev", "--h", "4"]);
    assert!(
        stdout(&o).contains("combos left=20 right=20 double=28"),
        "{}",
        stdout(&o)
    );
    let tree = stdout(&tclab(&["verify", "bintree", "--h", "4"]));
    assert!(tree.contains("combos left=20 right=20 double=28"), "{tree}");

    let o = tclab(&["verify", "--random", "20", "--max-n", "25", "--seed", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("PASS 20 random digraphs"));

    assert!(!tclab(&["verify"]).status.success());
    assert!(!tclab(&["verify", "w", "--n", "2", "--k", "3"])
        .status
        .success());
}

#[test]
fn bench_writes_csv() {
    let dir = TempDir::new().unwrap();
    let plan = dir.path().join("plan.txt");
    fs::write(
        &plan,
        "repeats=1\n# three families\npath n=8 left minincrement\ncyc n=6 right ground\nbintree h=3 double topdown\n",
    )
    .unwrap();
    let csv = dir.path().join("out.csv");
    let o = tclab(&["bench", path_str(&plan), "--out", path_str(&csv)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0].split(',').count(), 15);
    assert_eq!(rows.len(), 1 + 4 + 5 + 4);
    for row in &rows[1..] {
        assert_eq!(row.split(',').nth(8), Some("0.000000"), "{row}");
    }

    fs::write(&plan, "path n=3 left minincrement\npath n=3 left quick\n").unwrap();
    let o = tclab(&["bench", path_str(&plan), "--out", path_str(&csv)]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn sample_plan_row_count() {
    let plan = Path::new(env!("CARGO_MANIFEST_DIR")).join("plans/sample.plan");
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("sample.csv");
    let o = tclab(&["bench", path_str(&plan), "--out", path_str(&csv)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&csv).unwrap();
    let rows = text.lines().filter(|l| !l.starts_with('#')).count();
    // per (family, variant): three engines with 4 phases, ground with 5
    assert_eq!(rows, 1 + 3 * 3 * (3 * 4 + 5));
}

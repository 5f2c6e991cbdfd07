use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_crossbound"));
    c.env_remove("CROSSBOUND_SEED");
    c
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn stdout(o: &Output) -> serde_json::Value {
    let s = String::from_utf8_lossy(&o.stdout);
    serde_json::from_str(s.lines().last().unwrap_or("")).expect("json on stdout")
}

#[test]
fn k33free_generate_draw_count_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = run(
        &[
            "generate", "--family", "k33free", "--delta", "8", "--out", "k.json",
        ],
        d,
    );
    assert_eq!(code(&o), 0);
    let bundle: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("k.json")).unwrap()).unwrap();
    assert_eq!(bundle["graph"]["n"], 15);
    assert_eq!(bundle["metadata"]["crossing_number"], 4);

    let o = run(
        &[
            "draw",
            "--input",
            "k.json",
            "--certificate",
            "k.json",
            "--method",
            "partition",
            "--out",
            "d.json",
            "--report",
            "r.json",
            "--svg",
            "d.svg",
        ],
        d,
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report = stdout(&o);
    let total = report["total"].as_u64().unwrap();
    let svg = std::fs::read_to_string(d.join("d.svg")).unwrap();
    assert!(svg.contains(&format!("exact crossings: {total}")));

    let o = run(&["count", "--drawing", "d.json", "--expect", "r.json"], d);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o)["total"], report["total"]);

    let o = run(
        &[
            "verify",
            "--graph",
            "k.json",
            "--drawing",
            "d.json",
            "--bound",
            "sum_deg_sq",
        ],
        d,
    );
    assert_eq!(code(&o), 0);
    let v = stdout(&o);
    assert_eq!(v["value"], "360/1");
    assert_eq!(v["satisfied"], true);
    let o = run(
        &[
            "verify",
            "--graph",
            "k.json",
            "--drawing",
            "d.json",
            "--bound",
            "nope",
        ],
        d,
    );
    assert_eq!(code(&o), 2);
}

#[test]
fn tampered_drawing_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("g.txt"), "0 1\n1 2\n2 3\n3 0\n0 2\n1 3\n").unwrap();
    std::fs::write(d.join("c.json"), r#"{"order":[0,1,2,3]}"#).unwrap();
    let o = run(
        &[
            "draw",
            "--input",
            "g.txt",
            "--certificate",
            "c.json",
            "--method",
            "interval",
            "--out",
            "d.json",
            "--report",
            "r.json",
        ],
        d,
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o)["total"], 1);
    // move vertex 0 inside the hull: the two diagonals no longer cross
    let text = std::fs::read_to_string(d.join("d.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["positions"][0] = serde_json::json!(["1/10", "0/1"]);
    for r in v["routes"].as_array_mut().unwrap() {
        for p in r.as_array_mut().unwrap() {
            if p == &serde_json::json!(["1/1", "0/1"]) {
                *p = serde_json::json!(["1/10", "0/1"]);
            }
        }
    }
    std::fs::write(d.join("t.json"), v.to_string()).unwrap();
    let o = run(&["count", "--drawing", "t.json", "--expect", "r.json"], d);
    assert_eq!(code(&o), 3);
    // overlapping edges are invalid
    let bad = r#"{"style":"polyline","positions":[["0/1","0/1"],["2/1","0/1"],["1/1","0/1"],["3/1","0/1"]],"edges":[[0,1],[2,3]],"routes":[[["0/1","0/1"],["2/1","0/1"]],[["1/1","0/1"],["3/1","0/1"]]]}"#;
    std::fs::write(d.join("o.json"), bad).unwrap();
    assert_eq!(code(&run(&["count", "--drawing", "o.json"], d)), 3);
    std::fs::write(d.join("p.json"), "{not json").unwrap();
    assert_eq!(code(&run(&["count", "--drawing", "p.json"], d)), 2);
}

#[test]
fn chordal_random_ktree() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let a = run(
        &[
            "generate",
            "--family",
            "random-ktree",
            "--k",
            "2",
            "--n",
            "50",
            "--seed",
            "7",
        ],
        d,
    );
    let b = run(
        &[
            "generate",
            "--family",
            "random-ktree",
            "--k",
            "2",
            "--n",
            "50",
            "--seed",
            "7",
        ],
        d,
    );
    assert_eq!(a.stdout, b.stdout);
    let e = bin()
        .args([
            "generate",
            "--family",
            "random-ktree",
            "--k",
            "2",
            "--n",
            "50",
        ])
        .env("CROSSBOUND_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(a.stdout, e.stdout);
    std::fs::write(d.join("g.json"), &a.stdout).unwrap();
    let o = run(&["draw", "--input", "g.json", "--method", "chordal"], d);
    assert_eq!(code(&o), 0);
    let r = stdout(&o);
    let b = r["bounds"].as_array().unwrap();
    assert!(b
        .iter()
        .any(|x| x["name"] == "sum_edge_deg_prod" && x["satisfied"] == true));
}

#[test]
fn partition_with_nonplanar_host() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("g.json"), r#"{"n":5,"edges":[]}"#).unwrap();
    let mut host = Vec::new();
    for a in 0..5 {
        for b in a + 1..5 {
            host.push(format!("[{a},{b}]"));
        }
    }
    let cert = format!(
        r#"{{"bags":[[0],[1],[2],[3],[4]],"host_edges":[{}]}}"#,
        host.join(",")
    );
    std::fs::write(d.join("c.json"), cert).unwrap();
    let o = run(
        &[
            "draw",
            "--input",
            "g.json",
            "--certificate",
            "c.json",
            "--method",
            "partition",
        ],
        d,
    );
    assert_eq!(code(&o), 3);
}

#[test]
fn cliquesum_two_k5() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = run(
        &[
            "generate",
            "--family",
            "cliquesum",
            "--index",
            "0",
            "--out",
            "t.json",
        ],
        d,
    );
    assert_eq!(code(&o), 0);
    let t: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("t.json")).unwrap()).unwrap();
    assert_eq!(t["metadata"]["fixture"], "two-k5");
    assert_eq!(t["graph"]["n"], 9);
    let o = run(
        &[
            "draw",
            "--input",
            "t.json",
            "--certificate",
            "t.json",
            "--method",
            "cliquesum",
            "--out",
            "d.json",
            "--report",
            "r.json",
        ],
        d,
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["count", "--drawing", "d.json", "--expect", "r.json"], d);
    assert_eq!(code(&o), 0);
}

#[test]
fn generate_khbased_and_bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = run(
        &[
            "generate", "--family", "khbased", "--h", "6", "--delta", "8",
        ],
        d,
    );
    assert_eq!(code(&o), 0);
    // K5 with one common neighbour added per edge
    assert_eq!(stdout(&o)["graph"]["n"], 15);
    assert_eq!(stdout(&o)["metadata"]["m"], 30);
    assert_eq!(
        code(&run(
            &["generate", "--family", "k33free", "--delta", "6"],
            d
        )),
        2
    );
    assert_eq!(
        code(&run(
            &["generate", "--family", "degreeset", "--set", "2,6"],
            d
        )),
        2
    );
}

#[test]
fn oracle_command() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("k4.txt"), "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    let o = run(&["oracle", "--input", "k4.txt"], d);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o)["crossings"], 1);
    std::fs::write(d.join("c5.txt"), "0 1\n1 2\n2 3\n3 4\n4 0\n").unwrap();
    assert_eq!(
        stdout(&run(&["oracle", "--input", "c5.txt"], d))["crossings"],
        0
    );
    std::fs::write(d.join("big.txt"), "n 10\n0 1\n").unwrap();
    assert_eq!(code(&run(&["oracle", "--input", "big.txt"], d)), 2);
}

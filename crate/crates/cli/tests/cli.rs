use std::path::Path;
use std::process::{Command, Output};

use hyperblocks::catalog::read_catalog;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperblocks"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json", "--threads", "1"]);
    let o = run(&all);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn blocks_table_for_z3() {
    let o = run(&["blocks", "--group", "Z3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for row in [
        "  1 |   A   B   C",
        "  a |   B   C   D",
        "a^2 |   C   D   B",
    ] {
        assert!(text.contains(row), "missing {row:?} in\n{text}");
    }
    let v = json(&["blocks", "--group", "Z3"]);
    assert_eq!(
        v["coefficient_matrix"]["rows"],
        serde_json::json!([[1, 1, 1, 0], [0, 1, 1, 1]])
    );
}

#[test]
fn blocks_csv_for_z7() {
    let o = run(&[
        "blocks",
        "--group",
        "Z7",
        "--minus-one",
        "0",
        "--format",
        "csv",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("g,A,B,C,D,E,F,G,H,I,J,K,L"));
    assert_eq!(lines.next(), Some("1,1,1,1,1,1,1,1,0,0,0,0,0"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn census_summary_line() {
    let o = run(&["census", "--group", "Z3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("subsets=16 hyperfields=9 classes=7 ample=6"));
}

#[test]
fn verify_reports_associativity_failure() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    // the union of blocks A and D over Z3
    std::fs::write(
        &bad,
        r#"{"group": "Z3", "minus_one": 0, "pi": "100001010"}"#,
    )
    .unwrap();
    let o = run(&["verify", "--in", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("violation: associativity at ("), "{text}");

    let o = run(&["verify", "--group", "Z3", "--blocks", "BCD"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("status: verified-hyperfield"));
}

#[test]
fn usage_and_capacity_exit_codes() {
    assert_eq!(run(&["blocks"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["blocks", "--group", "Q8"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{not json").unwrap();
    assert_eq!(
        run(&["verify", "--in", broken.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    // Z40 has far more blocks than the census budget allows
    assert_eq!(run(&["census", "--group", "Z40"]).status.code(), Some(3));
    assert_eq!(
        run(&["census", "--group", "Z7", "--budget", "5"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn json_output_is_deterministic() {
    for args in [
        vec!["census", "--group", "Z5"],
        vec!["count", "--group", "Z7"],
        vec!["quotient", "--group", "Z3", "--blocks", "BD"],
        vec!["fetvins", "--group", "Z3", "--blocks", "BC", "--nmax", "2"],
    ] {
        assert_eq!(json(&args), json(&args), "{args:?}");
    }
}

#[test]
fn count_and_quotient_values() {
    let v = json(&["count", "--group", "Z7"]);
    assert_eq!(v["exact"], 612);
    assert_eq!(v["lower_bound"], 256);
    assert_eq!(v["infinite_quotient_bound"], 32);
    let v = json(&["quotient", "--group", "Z3", "--blocks", "BD"]);
    assert_eq!(v["status"], "quotient");
    assert_eq!(v["witness"]["q"], 7);
    let v = json(&[
        "quotient", "--group", "Z3", "--blocks", "BC", "--bound", "81",
    ]);
    assert_eq!(v["status"], "nonquotient");
    let v = json(&[
        "fetvins", "--group", "Z3", "--blocks", "ABCD", "--nmax", "3",
    ]);
    assert_eq!(v["status"], "confirmed");
}

#[test]
fn fetvins_solves_a_given_system() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("sys.json");
    std::fs::write(&sys, "[[0, 1, 2], [0, 0, -1]]").unwrap();
    let v = json(&[
        "fetvins",
        "--group",
        "Z3",
        "--blocks",
        "ABCD",
        "--system",
        sys.to_str().unwrap(),
    ]);
    assert_eq!(v["status"], "solved");
    let x = v["witness"]["solution"].as_array().unwrap();
    assert_eq!(x.len(), 3);
    assert!(x.iter().any(|e| e.as_i64() != Some(-1)));
}

fn catalog_round_trip(path: &Path) {
    let records = read_catalog(path).unwrap();
    assert!(!records.is_empty());
    for rec in &records {
        let mut h = rec.to_candidate().unwrap();
        assert!(h.verify_axioms().is_hyperfield(), "{}", rec.pi);
        assert_eq!(h.is_ample(), rec.flags.ample, "{}", rec.pi);
    }
}

#[test]
fn census_catalog_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z3.jsonl");
    let p = path.to_str().unwrap();
    for _ in 0..2 {
        assert!(run(&["census", "--group", "Z3", "--out", p])
            .status
            .success());
    }
    let records = read_catalog(&path).unwrap();
    assert_eq!(records.len(), 7);
    let members: u64 = records.iter().map(|r| r.members.unwrap()).sum();
    // the same run twice is not double counted
    assert_eq!(members, 9);
    catalog_round_trip(&path);

    // sharded runs merge on read
    let sharded = dir.path().join("z5.jsonl");
    let s = sharded.to_str().unwrap();
    for shard in ["0/3", "1/3", "2/3"] {
        assert!(
            run(&["census", "--group", "Z5", "--shard", shard, "--out", s])
                .status
                .success()
        );
    }
    let whole = json(&["census", "--group", "Z5"]);
    let merged = read_catalog(&sharded).unwrap();
    assert_eq!(merged.len() as u64, whole["classes"].as_u64().unwrap());
    let members: u64 = merged.iter().map(|r| r.members.unwrap()).sum();
    assert_eq!(members, whole["hyperfields"].as_u64().unwrap());
    catalog_round_trip(&sharded);

    let listed = json(&["show", "--catalog", s]);
    assert_eq!(listed.as_array().unwrap().len(), merged.len());
}

use std::path::PathBuf;
use std::process::{Command, Output};

fn data(path: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(path)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hlirred"))
        .args(args)
        .env_remove("HLIRRED_JOBS")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hlirred-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn homs_on_trefoil() {
    let out = run(&["homs", "--pres", &data("examples/trefoil.pres")]);
    assert!(out.status.success());
    let text = stdout(&out);
    for line in ["ks_w=36", "ks=6", "ks_orbits=6", "surjective_orbits=2"] {
        assert!(
            text.lines().any(|l| l == line),
            "{line} missing from\n{text}"
        );
    }
}

#[test]
fn homs_diagram_matches_presentation() {
    let a = run(&["homs", "--pres", &data("examples/trefoil.pres"), "--json"]);
    let b = run(&[
        "homs",
        "--diagram",
        &data("examples/trefoil.diagram"),
        "--json",
    ]);
    let a: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(a["ks_w"], b["ks_w"]);
    assert_eq!(a["ks"], b["ks"]);
}

#[test]
fn homs_json_free_group_into_a5() {
    let out = run(&[
        "homs",
        "--pres",
        &data("examples/free2.pres"),
        "--group",
        "A5",
        "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ks_w"], 3600);
    assert_eq!(v["ks"], 77);
    assert_eq!(v["ks_orbits"], 77);
    assert_eq!(v["order"], 60);
}

#[test]
fn json_output_does_not_depend_on_jobs() {
    let p = data("examples/torus_3_4.pres");
    let one = run(&[
        "homs", "--pres", &p, "--group", "A5", "--json", "--jobs", "1",
    ]);
    let many = run(&[
        "homs", "--pres", &p, "--group", "A5", "--json", "--jobs", "8",
    ]);
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn missing_and_malformed_inputs_exit_2() {
    let out = run(&["homs", "--pres", "/nonexistent/x.pres"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let bad = temp_file("bad.pres", "gens a b\nrel aQ\n");
    assert_eq!(
        run(&["homs", "--pres", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let out = run(&[
        "homs",
        "--pres",
        &data("examples/trefoil.pres"),
        "--group",
        "Q8",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn orbit_cap_exits_3_after_burnside_counts() {
    let out = run(&[
        "homs",
        "--pres",
        &data("examples/workload5.pres"),
        "--group",
        "A5",
        "--orbit-cap",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).lines().any(|l| l.starts_with("ks=")));
    let out = run(&[
        "homs",
        "--pres",
        &data("examples/workload5.pres"),
        "--group",
        "A5",
        "--orbit-cap",
        "10",
        "--burnside-only",
    ]);
    assert!(out.status.success());
}

#[test]
fn verdict_summaries() {
    let catalog = data("paper_tables.json");
    let out = run(&["verdict", "--catalog", &catalog, "HK4_1"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).lines().last(),
        Some("Irreducible (C11 failed: 56 mod 12 = 8; C14 failed: 379 mod 60 = 19)")
    );
    let out = run(&["verdict", "--catalog", &catalog, "HL6_12"]);
    assert_eq!(
        stdout(&out).lines().last(),
        Some("Inconclusive (C11 satisfied k=\u{2014}; C13 satisfied k=0)")
    );
    let out = run(&["verdict", "--catalog", &catalog, "NOPE"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verdict_all_json() {
    let out = run(&[
        "verdict",
        "--catalog",
        &data("paper_tables.json"),
        "--all",
        "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 38);
    let irreducible = rows
        .iter()
        .filter(|r| r["conclusion"] == "Irreducible")
        .count();
    assert_eq!(irreducible, 36);
    let hl6_9 = rows.iter().find(|r| r["name"] == "HL6_9").unwrap();
    assert_eq!(hl6_9["conclusion"], "Inconclusive");
}

#[test]
fn strict_exits_4_when_no_rule_applies() {
    let catalog = data("constructed.json");
    let out = run(&["verdict", "--catalog", &catalog, "--all"]);
    assert!(out.status.success());
    let out = run(&["verdict", "--catalog", &catalog, "--all", "--strict"]);
    assert_eq!(out.status.code(), Some(4));
    let out = run(&[
        "verdict",
        "--catalog",
        &data("paper_tables.json"),
        "--all",
        "--strict",
    ]);
    assert!(out.status.success());
}

#[test]
fn table_rows_and_marks() {
    let out = run(&["table", "--catalog", &data("paper_tables.json")]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 39);
    assert!(lines[0].starts_with("name"));
    let cells = |name: &str| -> Vec<String> {
        let line = lines
            .iter()
            .find(|l| l.split_whitespace().next() == Some(name))
            .unwrap();
        line.split_whitespace().map(str::to_string).collect()
    };
    assert_eq!(
        cells("HK4_1"),
        ["HK4_1", "3", "30", "\u{2713}", "156", "\u{2713}"]
    );
    assert_eq!(cells("HL5_1")[3..], ["\u{2713}", "660", "n.a."]);
    assert_eq!(cells("HL6_12")[3], "?");
}

#[test]
fn empty_catalog_prints_header_only() {
    let empty = temp_file("empty.json", "[]");
    let out = run(&["table", "--catalog", empty.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 1);
}

#[test]
fn wirtinger_output() {
    let out = run(&["wirtinger", &data("examples/trefoil.diagram")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("# genus 1, type [1]"));
    // the printed presentation must parse back and give the trefoil counts
    let round = temp_file("trefoil_w.pres", &text);
    let out = run(&["homs", "--pres", round.to_str().unwrap()]);
    assert!(stdout(&out).lines().any(|l| l == "ks_w=36"));

    let out = run(&["wirtinger", &data("examples/theta.diagram")]);
    assert_eq!(stdout(&out).lines().next(), Some("# genus 2, type [0,1]"));

    let dangling = temp_file("dangling.diagram", "arcs 2\nx + 1 2 3\n");
    assert_eq!(
        run(&["wirtinger", dangling.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn nodal(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nodal"))
        .arg("--out")
        .arg(dir.join("out"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn ovals_counts_and_range() {
    let dir = TempDir::new().unwrap();
    for (n, expected) in [("7", 13), ("6", 12)] {
        let out = nodal(dir.path(), &["ovals", n]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let r = json(&out);
        assert_eq!(r["schema"], 1);
        assert_eq!(r["seed"], 2024);
        assert_eq!(r["topology"]["components"], expected);
        let svg = fs::read_to_string(dir.path().join(format!("out/ovals-{n}.svg"))).unwrap();
        assert!(svg.starts_with("<svg") && svg.contains("<circle"));
    }
    assert_eq!(code(&nodal(dir.path(), &["ovals", "2"])), 2);
}

#[test]
fn planar_two_domains_and_config_errors() {
    let dir = TempDir::new().unwrap();
    let out = nodal(dir.path(), &["planar"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["topology"]["domains"], 2);
    assert!(dir.path().join("out/planar.svg").exists());
    assert_eq!(code(&nodal(dir.path(), &["planar", "--delta1", "0.2", "--delta2", "0.4"])), 2);

    let domains = |r: &str| {
        let out = nodal(dir.path(), &["planar", "--epsilon", "0", "--radius", r]);
        assert_eq!(code(&out), 1);
        json(&out)["domains"].as_u64().unwrap()
    };
    assert!(domains("5") < domains("15"));
}

#[test]
fn lewy_pipeline() {
    let dir = TempDir::new().unwrap();
    let write = |name: &str, text: &str| fs::write(dir.path().join(name), text).unwrap();
    write("cubic.txt", "# z^3 - z\nroots\n-1 0\n0 0\n1 0\n");
    write("linear.txt", "coefficients\n0 0\n");
    write("square.txt", "coefficients\n0 0\n0 0\n");
    write("broken.txt", "roots\n1 x\n");

    let out = nodal(dir.path(), &["lewy", "cubic.txt"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["matches_glue"], true);
    assert_eq!(r["topology"]["components"], r["glued"]["components"]);
    assert!(dir.path().join("out/lewy-cubic-plane.svg").exists());
    assert!(dir.path().join("out/lewy-cubic-sphere.svg").exists());

    let out = nodal(dir.path(), &["lewy", "linear.txt"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["topology"]["components"], 1);

    let out = nodal(dir.path(), &["lewy", "square.txt"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["diagnostics"]["error"]["kind"], "singular");

    assert_eq!(code(&nodal(dir.path(), &["lewy", "broken.txt"])), 2);
    assert_eq!(code(&nodal(dir.path(), &["lewy", "missing.txt"])), 2);
}

#[test]
fn diagram_tables() {
    let dir = TempDir::new().unwrap();
    let out = nodal(dir.path(), &["diagrams", "3"]);
    assert_eq!(code(&out), 0);
    let rows = json(&out)["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r["parity"] == "odd"));

    let out = nodal(dir.path(), &["diagrams", "1"]);
    let r = json(&out);
    assert_eq!(r["rows"].as_array().unwrap().len(), 1);
    assert_eq!(r["rows"][0]["components"], 1);

    assert_eq!(code(&nodal(dir.path(), &["diagrams", "8", "--realize"])), 2);

    let out = nodal(dir.path(), &["--format", "csv", "diagrams", "2", "--realize", "--budget", "2000"]);
    assert_eq!(code(&out), 0);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().next().unwrap().contains("realized"));
    assert!(dir.path().join("out/diagrams-2.csv").exists());
}

#[test]
fn verify_suite_and_fault_hook() {
    let dir = TempDir::new().unwrap();
    let out = nodal(dir.path(), &["verify", "--quick"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let out = nodal(dir.path(), &["verify", "--quick", "--inject-fault", "sign-flip"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["failed"], serde_json::json!(["antipodal_parity"]));
    assert_eq!(code(&nodal(dir.path(), &["verify", "--inject-fault", "bogus"])), 2);
}

#[test]
fn runs_are_reproducible() {
    let dir = TempDir::new().unwrap();
    for args in [&["ovals", "5"][..], &["diagrams", "2", "--realize", "--budget", "500"]] {
        let a = nodal(dir.path(), args);
        let b = nodal(dir.path(), args);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn config_file_and_flags() {
    let dir = TempDir::new().unwrap();
    let out = nodal(dir.path(), &["--print-config", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("seed = 7"));
    fs::write(dir.path().join("run.conf"), text.replace("svg = true", "svg = false")).unwrap();

    let out = nodal(dir.path(), &["--config", "run.conf", "ovals", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["seed"], 7);
    assert!(!dir.path().join("out/ovals-3.svg").exists());
    assert!(dir.path().join("out/ovals-3.json").exists());

    fs::write(dir.path().join("bad.conf"), "t_floor = -1\n").unwrap();
    assert_eq!(code(&nodal(dir.path(), &["--config", "bad.conf", "ovals", "3"])), 2);
    assert_eq!(code(&nodal(dir.path(), &["ovals"])), 2);
    assert_eq!(code(&nodal(dir.path(), &[])), 2);
}

#[test]
fn zero_table_dump() {
    let dir = TempDir::new().unwrap();
    let out = nodal(dir.path(), &["--format", "csv", "specfun", "dump-zeros", "--order", "0", "--count", "2"]);
    assert_eq!(code(&out), 0);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("k,zero\n1,2.4048255576957"));
    assert_eq!(code(&nodal(dir.path(), &["specfun", "dump-zeros", "--order", "2"])), 2);
}

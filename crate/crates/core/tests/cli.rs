//! The binary end to end: exit codes, payloads and the published schemas.

use std::path::{Path, PathBuf};
use std::process::Command;

use jsonschema::JSONSchema;
use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn corpus(rel: &str) -> String {
    root().join("corpus").join(rel).display().to_string()
}

fn schema(name: &str) -> JSONSchema {
    let path = root().join("docs/schemas").join(format!("{name}.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let v: Value = serde_json::from_str(&text).unwrap();
    JSONSchema::compile(&v).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn assert_valid(name: &str, v: &Value) {
    let s = schema(name);
    if let Err(errors) = s.validate(v) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{name} schema rejects the payload: {msgs:?}\n{v:#}");
    };
}

struct Out {
    code: i32,
    report: Value,
    stderr: String,
}

fn liffig(args: &[&str]) -> Out {
    let out = Command::new(env!("CARGO_BIN_EXE_liffig")).args(args).output().unwrap();
    let code = out.status.code().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    let report: Value = if stdout.trim().is_empty() {
        Value::Null
    } else {
        serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout}"))
    };
    if !report.is_null() {
        // the envelope and the payload both match their schemas and survive
        // a round trip
        assert_valid("report", &report);
        assert_eq!(report["exit_code"], code, "{report:#}");
        let payload_schema = if code == 2 { "error" } else { report["command"].as_str().unwrap() };
        assert_valid(payload_schema, &report["payload"]);
        let again: Value = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        assert_eq!(again, report);
    }
    Out { code, report, stderr }
}

#[test]
fn check_accepts_the_corpus_and_locates_errors() {
    for name in ["egyptian", "fastexp", "dnf_partition", "fh_partition", "fh_partition_median"] {
        let o = liffig(&["check", &corpus(&format!("{name}/source.liffig"))]);
        assert_eq!(o.code, 0, "{name}: {}", o.stderr);
    }
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.liffig");
    std::fs::write(&bad, "var x: int\nS: true\n  if true -> x := 1; goto Q\n  fi\nH: true\n  return\n").unwrap();
    let o = liffig(&["check", &bad.display().to_string()]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("bad.liffig:3:"), "{}", o.stderr);
    assert!(o.stderr.contains("undefined label Q"), "{}", o.stderr);
    assert_eq!(o.report["payload"]["diagnostics"][0]["line"], 3);
}

#[test]
fn run_egyptian_eight_times_five() {
    let o = liffig(&["run", &corpus("egyptian/source.liffig"), "--input", "n=8", "a=5"]);
    assert_eq!(o.code, 0);
    let p = &o.report["payload"];
    assert_eq!(p["state"]["out"], serde_json::json!([40.0]));
    assert_eq!(p["trace"]["counters"]["additions"], 3);
    assert!(o.report["seed"].is_u64());
}

#[test]
fn assertion_violations_exit_one_with_the_state() {
    let o = liffig(&[
        "run",
        &corpus("dnf_partition/mutants/swapped_guard.liffig"),
        "--input",
        "a=[2,0,1]",
        "m=0",
        "n=2",
        "X=1",
    ]);
    assert_eq!(o.code, 1, "{:#}", o.report);
    assert_eq!(o.report["payload"]["outcome"]["kind"], "assertion_violation");
    assert!(o.report["payload"]["outcome"]["state"].is_object());
}

#[test]
fn vcs_and_verify_on_egyptian() {
    let file = corpus("egyptian/source.liffig");
    let o = liffig(&["vcs", &file]);
    assert_eq!(o.report["payload"]["vcs"].as_array().unwrap().len(), 9);

    let o = liffig(&["verify", &file, "--int-range", "1:32"]);
    assert_eq!(o.code, 0);
    let vcs = o.report["payload"]["vcs"].as_array().unwrap();
    assert_eq!(vcs.len(), 9);
    assert!(vcs.iter().all(|v| v["status"] == "holds" && v["mode"] == "exhaustive"));
    // sorted by id
    let ids: Vec<&str> = vcs.iter().map(|v| v["vc_id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn verify_refutes_a_mutant_with_a_witness() {
    let o = liffig(&[
        "verify",
        &corpus("egyptian/mutants/wrong_increment.liffig"),
        "--int-range",
        "-4:4",
        "--var",
        "n=1:8",
    ]);
    assert_eq!(o.code, 1);
    let refuted: Vec<&Value> = o.report["payload"]["vcs"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| v["status"] == "refuted")
        .collect();
    assert!(!refuted.is_empty());
    assert!(refuted[0]["witness"]["pre"]["vars"].is_object());
}

#[test]
fn matrix_product_and_fixpoint() {
    let file = corpus("egyptian/source.liffig");
    let o = liffig(&["matrix", &file, "--product", &file]);
    assert_eq!(o.code, 0);
    assert!(!o.report["payload"]["product"].as_array().unwrap().is_empty());

    let small = ["--int-range", "-2:2", "--var", "n=1:4"];
    let o = liffig(&[&["matrix", file.as_str(), "--fixpoint"][..], &small[..]].concat());
    assert_eq!(o.code, 0);
    assert_eq!(o.report["payload"]["fixpoint"]["contained"], true);

    let m = corpus("egyptian/mutants/wrong_increment.liffig");
    let o = liffig(&[&["matrix", m.as_str(), "--fixpoint"][..], &small[..]].concat());
    assert_eq!(o.code, 1);
    assert_eq!(o.report["payload"]["fixpoint"]["contained"], false);
}

#[test]
fn transpile_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("dnf.c");
    let o = liffig(&[
        "transpile",
        &corpus("dnf_partition/source.liffig"),
        "--fn",
        "partition",
        "-o",
        &out.display().to_string(),
    ]);
    assert_eq!(o.code, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let golden = std::fs::read_to_string(Path::new(&corpus("dnf_partition/golden/dnf_partition.c"))).unwrap();
    assert_eq!(text.trim_end(), golden.trim_end());
}

#[test]
fn corpus_suites_and_errors() {
    let o = liffig(&["corpus", "fh_partition", "--random", "25", "--seed", "7"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.report["seed"], 7);
    assert_eq!(o.report["payload"]["suite"]["passed"], 25);

    let o = liffig(&["corpus", "fastexp", "--exhaustive"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.report["payload"]["suite"]["failed"], 0);

    let o = liffig(&["corpus", "alg63"]);
    assert_eq!(o.code, 0);
    let s = &o.report["payload"]["survey"];
    assert_eq!(s["cases"], s["postcondition"]);

    let o = liffig(&["corpus", "nonesuch"]);
    assert_eq!(o.code, 2);
}

#[test]
fn info_yield_single_and_table() {
    let o = liffig(&["info-yield", "4", "2"]);
    assert!((o.report["payload"]["bits"].as_f64().unwrap() - 6f64.log2()).abs() < 1e-12);
    let o = liffig(&["info-yield", "10"]);
    assert_eq!(o.report["payload"]["table"].as_array().unwrap().len(), 11);
    assert_eq!(o.report["payload"]["argmax"], serde_json::json!([5]));
    let o = liffig(&["info-yield", "4", "5"]);
    assert_eq!(o.code, 2);
}

#[test]
fn usage_errors_exit_two() {
    let o = liffig(&["bogus"]);
    assert_eq!(o.code, 2);
    assert!(o.report.is_null());
    let o = liffig(&["verify", &corpus("egyptian/source.liffig"), "--int-range", "5:1"]);
    assert_eq!(o.code, 2);
    let o = liffig(&["run", &corpus("egyptian/source.liffig"), "--input", "q=1"]);
    assert_eq!(o.code, 2);
}

#[test]
fn exit_codes_match_verdicts_on_every_corpus_program() {
    let small = ["--int-range", "-1:3", "--array-len", "0:3", "--elem-range", "0:1"];
    for name in ["egyptian", "fastexp", "dnf_partition", "fh_partition", "fh_partition_median"] {
        let mut files = vec![corpus(&format!("{name}/source.liffig"))];
        for kind in ["wrong_increment", "swapped_guard", "off_by_one"] {
            files.push(corpus(&format!("{name}/mutants/{kind}.liffig")));
        }
        for f in files {
            let o = liffig(&[&["verify", f.as_str()][..], &small[..]].concat());
            let all_hold = o.report["payload"]["all_hold"].as_bool().unwrap();
            assert_eq!(o.code, if all_hold { 0 } else { 1 }, "{f}");
            let o = liffig(&[&["matrix", f.as_str(), "--fixpoint"][..], &small[..]].concat());
            let contained = o.report["payload"]["fixpoint"]["contained"].as_bool().unwrap();
            assert_eq!(o.code, if contained { 0 } else { 1 }, "{f}");
            assert_eq!(contained, all_hold, "{f}");
        }
    }
}

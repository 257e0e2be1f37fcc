use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::Instant;

use evifuse::{
    bundled, check_expected, execute, parse_scenario_str, render, DecisionReport, Format, RunOptions,
    BUNDLED,
};
use serde_json::Value;

fn fuse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fuse"))
        .args(args)
        .env_remove("FUSE_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Writes a variant of a bundled scenario to a temporary file.
fn variant(tag: &str, base: &str, edit: impl FnOnce(&mut Value)) -> PathBuf {
    let mut v: Value = serde_json::from_str(evifuse::bundled::bundled_text(base).unwrap()).unwrap();
    edit(&mut v);
    let path = std::env::temp_dir().join(format!("fuse-cli-{}-{tag}.json", std::process::id()));
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    path
}

#[test]
fn every_bundled_table_matches() {
    for (name, _) in BUNDLED {
        let o = fuse(&["tables", name]);
        assert!(o.status.success(), "{name}: {}{}", stdout(&o), stderr(&o));
        assert!(stdout(&o).contains("max deviation"));
    }
}

#[test]
fn bundled_scenarios_run_quickly() {
    for (name, _) in BUNDLED {
        let start = Instant::now();
        let s = bundled(name).unwrap().unwrap();
        let exec = execute(&s, &RunOptions::default()).unwrap();
        let _ = render(&DecisionReport::new(&exec), Format::Text, 5);
        let _ = render(&DecisionReport::new(&exec), Format::Json, 5);
        let _ = check_expected(&exec).unwrap();
        let elapsed = start.elapsed();
        assert!(elapsed.as_secs_f64() < 1.0, "{name} took {elapsed:?}");
    }
}

#[test]
fn reports_are_deterministic() {
    for format in ["text", "json-report"] {
        let a = fuse(&["run", "vbied_example7", "--format", format]);
        let b = fuse(&["run", "vbied_example7", "--format", format]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn scenario_round_trip_is_stable() {
    for (name, text) in BUNDLED {
        let first = parse_scenario_str(text).unwrap();
        let rendered = first.to_json();
        let second = parse_scenario_str(&rendered).unwrap();
        assert_eq!(first.file, second.file, "{name}");
        assert_eq!(rendered, second.to_json(), "{name}");
    }
}

#[test]
fn json_report_round_trip_is_stable() {
    let o = fuse(&["run", "vbied_example9", "--format", "json-report"]);
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
    assert_eq!(v["scenario"], "vbied_example9");
    assert_eq!(v["runs"][0]["kind"], "interval");
}

#[test]
fn example1_report_decides_to_evacuate() {
    let o = fuse(&["run", "vbied_example1"]);
    let text = stdout(&o);
    assert!(o.status.success());
    assert!(text.contains("0.24375"));
    assert!(text.contains("0.79770"));
    assert!(text.contains("decision on H678: evacuate"));
    assert!(text.contains("preferred         013/pcr6"));
}

#[test]
fn importance_report_shows_raw_total() {
    let o = fuse(&["run", "vbied_example8", "--format", "json-report"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let run = &v["runs"][0];
    assert_eq!(run["discount"], "importance");
    assert_eq!(run["raw_total"], 0.45);
}

#[test]
fn precision_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_fuse"))
        .args(["run", "vbied_example1"])
        .env("FUSE_PRECISION", "2")
        .output()
        .unwrap();
    let text = stdout(&o);
    assert!(text.contains("0.24 "), "{text}");
    assert!(!text.contains("0.24375"));
}

#[test]
fn rule_override_replaces_pipeline_rules() {
    let o = fuse(&["run", "vbied_example5", "--rule", "conj"]);
    let text = stdout(&o);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(text.contains("== full/conj"));
    assert!(!text.contains("pcr5"));
    let o = fuse(&["run", "vbied_example1", "--rule", "pcr5", "--epsilon", "0.01"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("(epsilon 0.01)"));
    assert!(stdout(&o).contains("== comparison q2"));
}

#[test]
fn validate_and_list() {
    let o = fuse(&["validate", "vbied_example9"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("4 sources"));
    let o = fuse(&["list"]);
    assert_eq!(stdout(&o).lines().count(), BUNDLED.len());
}

#[test]
fn syntax_errors_exit_with_one() {
    let path = std::env::temp_dir().join(format!("fuse-cli-{}-syntax.json", std::process::id()));
    std::fs::write(&path, "{\n  \"name\": \"x\",\n  oops\n}").unwrap();
    let o = fuse(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn normalization_errors_name_the_source() {
    let path = variant("norm", "vbied_example1", |v| {
        v["sources"][1]["masses"]["f2"] = 0.65.into();
    });
    let o = fuse(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("source `m1`"), "{}", stderr(&o));
}

#[test]
fn empty_pipeline_list_is_rejected() {
    let path = variant("empty", "vbied_example1", |v| {
        v["pipelines"] = Value::Array(Vec::new());
    });
    let o = fuse(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("pipeline"));
}

#[test]
fn unknown_references_are_rejected() {
    let path = variant("reference", "vbied_example1", |v| {
        v["pipelines"][0]["sources"][0] = "m9".into();
    });
    let o = fuse(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("m9"));
}

#[test]
fn computation_errors_exit_with_two() {
    let path = variant("zero", "vbied_example8", |v| {
        for s in v["sources"].as_array_mut().unwrap() {
            s["beta"] = 0.0.into();
        }
        v.as_object_mut().unwrap().remove("expected");
    });
    let o = fuse(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("run `full/pcr5`"), "{}", stderr(&o));
}

#[test]
fn fixture_mismatch_exits_with_three() {
    let path = variant("mismatch", "vbied_example1", |v| {
        v["expected"]["values"][0]["value"] = 0.5.into();
    });
    let o = fuse(&["tables", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn usage_errors_exit_with_one() {
    let o = fuse(&["run", "vbied_example1", "--rule", "dempster"]);
    assert_eq!(o.status.code(), Some(1));
}

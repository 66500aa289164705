use z2cover_core::assembly::{run_pipeline, FailureKind, Stage};
use z2cover_core::config::RunConfig;
use z2cover_core::report::{failure_json, matrix_dump, report_json, to_text, SCHEMA_VERSION};

#[test]
fn default_run_headline_and_levels() {
    let r = run_pipeline(&RunConfig::default()).unwrap();
    assert!(r.passed(), "{:?}", r.first_failure());
    let h = r.headline();
    assert_eq!((h.p_g, h.q, h.k_squared, h.canonical_degree), (3, 2, 16, Some(16)));
    let names: Vec<&str> = r.levels.iter().map(|l| l.name.as_str()).collect();
    assert_eq!(names, ["X", "Y", "Y'", "S'", "S"]);
    assert_eq!(r.level("S'").unwrap().k_squared, -8);
    assert_eq!(r.partial_invariants.chi, 4);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let cfg = RunConfig { pencil_t: "3".into(), ..RunConfig::default() };
    let a = run_pipeline(&cfg).unwrap();
    let b = run_pipeline(&cfg).unwrap();
    assert_eq!(to_text(&report_json(&a)), to_text(&report_json(&b)));
    assert_eq!(to_text(&matrix_dump(&a)), to_text(&matrix_dump(&b)));
}

#[test]
fn report_numbers_are_exact() {
    let v = report_json(&run_pipeline(&RunConfig::default()).unwrap());
    assert_eq!(v["schema_version"], SCHEMA_VERSION);
    fn walk(v: &serde_json::Value) {
        match v {
            serde_json::Value::Number(n) => assert!(n.is_i64() || n.is_u64(), "non-integer number {n}"),
            serde_json::Value::Array(a) => a.iter().for_each(walk),
            serde_json::Value::Object(o) => o.values().for_each(walk),
            _ => {}
        }
    }
    walk(&v);
    assert_eq!(v["even_sets"][0]["l_squared"], "-8");
}

#[test]
fn config_file_round_trip_runs() {
    let dir = std::env::temp_dir().join(format!("z2cover-pipeline-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.toml");
    std::fs::write(&path, RunConfig::default().to_toml_string()).unwrap();
    let cfg = RunConfig::from_path(&path).unwrap();
    assert!(run_pipeline(&cfg).unwrap().passed());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bad_inputs_are_configuration_failures() {
    let coincident = RunConfig { t2: ["1", "0", "-1"].map(String::from), ..RunConfig::default() };
    let err = run_pipeline(&coincident).unwrap_err();
    assert_eq!((err.stage, err.kind), (Stage::Configuration, FailureKind::Configuration));
    assert!(err.message.contains("lines not distinct"));
    let v = failure_json(&coincident, &err);
    assert_eq!(v["failure"]["kind"], "configuration");

    let secant = RunConfig { t1: ["1", "0", "0"].map(String::from), ..RunConfig::default() };
    let err = run_pipeline(&secant).unwrap_err();
    assert_eq!(err.kind, FailureKind::Configuration);
}

#[test]
fn reports_validate_against_the_published_schema() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/report.schema.json")).unwrap();
    let schema: serde_json::Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let ok = report_json(&run_pipeline(&RunConfig::default()).unwrap());
    let errors: Vec<String> = validator.iter_errors(&ok).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{errors:#?}");
    let bad = RunConfig { t2: ["1", "0", "-1"].map(String::from), ..RunConfig::default() };
    let failure = failure_json(&bad, &run_pipeline(&bad).unwrap_err());
    assert!(validator.is_valid(&failure));
    let mut broken = ok.clone();
    broken["headline"]["k_squared"] = serde_json::json!(16.5);
    assert!(!validator.is_valid(&broken));
}

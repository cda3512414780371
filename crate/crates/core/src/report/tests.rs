use super::*;
use crate::error::Error;
use crate::verdict::Verdict;

const HEMISPHERE: &str = r#"
schema = 1
name = "hemisphere"
triple = "hemisphere-3"
seed = 3

[tolerances]
cert = 1e-5

[[checks]]
check = "bgh"
b = [0, 1, 2, 3, 4, 5]

[[checks]]
check = "identities"
samples = 40

[[checks]]
check = "substatic"
samples = 40
"#;

#[test]
fn registry_has_at_least_fourteen_checks() {
    assert!(list().len() >= 14);
    let mut names: Vec<_> = list().iter().map(|c| c.name).collect();
    names.sort_unstable();
    names.dedup();
    assert_eq!(names.len(), list().len());
}

#[test]
fn describe_cites_formulas() {
    let d = describe("bgh").unwrap();
    assert!(d.contains("κ_i^b ∫_{Σ_i}"), "{d}");
    assert!(describe("wavemap-liouville").unwrap().contains("^{1/2}"));
    assert!(matches!(describe("nope"), Err(Error::UnknownCheck(_))));
}

#[test]
fn scenario_round_trips_through_toml() {
    let s = Scenario::parse(HEMISPHERE).unwrap();
    assert_eq!(s.checks.len(), 3);
    let again = Scenario::parse(&s.to_toml().unwrap()).unwrap();
    assert_eq!(s, again);
    assert_eq!(s.hash().unwrap(), again.hash().unwrap());
    assert_eq!(s.hash().unwrap().len(), 64);
}

#[test]
fn scenario_validation() {
    assert!(matches!(Scenario::parse("name = 'x'\nschema = 9\n"), Err(Error::Parse(_))));
    assert!(matches!(Scenario::parse("name = 'x'\n[tolerances]\ncert = -1.0\n"), Err(Error::Parse(_))));
    assert!(matches!(Scenario::parse("name = 'x'\n[[checks]]\ncheck = 'nope'\n"), Err(Error::UnknownCheck(_))));
    assert!(matches!(Scenario::parse("name = 'x'\n[[checks]]\ncheck = 'bgh'\nbee = 1\n"), Err(Error::Parse(_))));
    assert!(matches!(Scenario::parse("name = 'x'\nbogus = 1\n"), Err(Error::Parse(_))));
    assert!(matches!(Scenario::parse("name = "), Err(Error::Parse(_))));
}

#[test]
fn empty_scenario_passes_with_empty_summary() {
    let r = run_scenario(&Scenario::parse("name = 'empty'\n").unwrap()).unwrap();
    assert_eq!(r.summary.checks, 0);
    assert_eq!(r.summary.verdict, None);
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn hemisphere_scenario_passes() {
    let s = Scenario::parse(HEMISPHERE).unwrap();
    let r = run_scenario(&s).unwrap();
    assert_eq!(r.exit_code(), 0, "{}", to_text(&r));
    let bgh = &r.checks[0];
    assert_eq!(bgh.tables[0].rows.len(), 6);
    assert!(bgh.tables[0].rows.iter().all(|row| row[1].abs() < 1e-5));
    assert!((bgh.residuals["area_bound"] - 4.0 * std::f64::consts::PI).abs() < 1e-4);
    assert_eq!(bgh.inputs["triple"], "hemisphere-3");
}

#[test]
fn failing_check_gives_exit_two() {
    let s = Scenario::parse(
        "name = 'nec'\ntriple = 'perfect-fluid-nec-violating'\n[[checks]]\ncheck = 'substatic'\nsamples = 64\n",
    )
    .unwrap();
    let r = run_scenario(&s).unwrap();
    assert_eq!(r.checks[0].verdict, Verdict::Fail);
    assert_eq!(r.exit_code(), 2);
}

#[test]
fn kappa_too_large_is_an_error() {
    let s = Scenario::parse("name = 'q0'\n[[checks]]\ncheck = 'wavemap-q0'\nm = 3\nkappa = 0.5\ntrials = 10\n").unwrap();
    assert!(matches!(run_scenario(&s), Err(Error::KappaTooLarge { .. })));
}

#[test]
fn missing_triple_is_reported() {
    let s = Scenario::parse("name = 'x'\n[[checks]]\ncheck = 'lambda'\n").unwrap();
    assert!(matches!(run_scenario(&s), Err(Error::Parse(_))));
}

#[test]
fn reports_are_byte_identical() {
    let s = Scenario::parse(
        "name = 'det'\nseed = 11\n[[checks]]\ncheck = 'wavemap-q0'\nm = 4\nn = 3\nkappa = 0.2\ntrials = 20000\n\
         [[checks]]\ncheck = 'identities'\ntriple = 'schwarzschild-1'\nsamples = 24\n",
    )
    .unwrap();
    let a = run_scenario(&s).unwrap();
    let b = run_scenario(&s).unwrap();
    assert_eq!(to_json(&a).unwrap(), to_json(&b).unwrap());
    assert_eq!(to_text(&a), to_text(&b));
    for (x, y) in a.checks.iter().zip(&b.checks) {
        for (p, q) in x.tables.iter().zip(&y.tables) {
            assert_eq!(table_csv(p).unwrap(), table_csv(q).unwrap());
        }
    }
}

#[test]
fn csv_has_header_and_rows() {
    let t = runner::Table { name: "t".into(), header: vec!["a".into(), "b".into()], rows: vec![vec![1.0, 0.5], vec![2.0, -1e-9]] };
    assert_eq!(table_csv(&t).unwrap(), "a,b\n1,0.5\n2,-1e-9\n");
}

#[test]
fn write_report_emits_all_files() {
    let dir = std::env::temp_dir().join(format!("substatic-report-{}", std::process::id()));
    let s = Scenario::parse("name = 'w'\n[[checks]]\ncheck = 'wavemap-system'\nsamples = 8\n").unwrap();
    let r = run_scenario(&s).unwrap();
    let files = write_report(&r, &dir, "w").unwrap();
    let names: Vec<String> = files.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    assert_eq!(names, ["w.json", "w.txt", "w.0-wavemap-system-residuals.csv"]);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&files[0]).unwrap()).unwrap();
    assert_eq!(json["header"]["schema"], 1);
    assert_eq!(json["summary"]["pass"], 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

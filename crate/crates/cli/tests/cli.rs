use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_substatic-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn substatic-lab")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("substatic-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn list_and_describe() {
    let o = run(&["list"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().count() >= 14);

    let o = run(&["describe", "bgh"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("κ_i^b"));

    assert_eq!(code(&run(&["describe", "nope"])), 1);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["no-such-command"])), 1);
    assert_eq!(code(&run(&["bgh"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn passing_check_exits_zero() {
    let o = run(&["bgh", "--triple", "hemisphere-3", "--b", "-0.49,0,1,5"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("overall PASS"));
}

#[test]
fn failing_check_exits_two() {
    let o = run(&["check-substatic", "--triple", "perfect-fluid-nec-violating", "--samples", "64"]);
    assert_eq!(code(&o), 2, "{}", stdout(&o));
    assert!(stdout(&o).contains("overall FAIL"));
}

#[test]
fn kappa_at_limit_exits_one() {
    let o = run(&["wavemap", "--check", "q0", "--m", "3", "--n", "2", "--kappa", "0.5", "--trials", "100"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("0.5"));
}

#[test]
fn unknown_triple_exits_one() {
    assert_eq!(code(&run(&["check-substatic", "--triple", "nowhere"])), 1);
}

#[test]
fn run_scenario_file() {
    let d = scratch("run");
    let empty = d.join("empty.toml");
    std::fs::write(&empty, "schema = 1\nname = \"empty\"\n").unwrap();
    assert_eq!(code(&run(&["run", empty.to_str().unwrap()])), 0);

    let bad = d.join("bad.toml");
    std::fs::write(&bad, "schema = 1\nname = \"bad\"\n[[checks]]\ncheck = \"nope\"\n").unwrap();
    assert_eq!(code(&run(&["run", bad.to_str().unwrap()])), 1);

    let mixed = d.join("mixed.toml");
    std::fs::write(
        &mixed,
        "schema = 1\nname = \"mixed\"\n\n[[checks]]\ncheck = \"substatic\"\ntriple = \"hemisphere-3\"\nsamples = 32\n\n\
         [[checks]]\ncheck = \"substatic\"\ntriple = \"perfect-fluid-nec-violating\"\nsamples = 32\n",
    )
    .unwrap();
    assert_eq!(code(&run(&["run", mixed.to_str().unwrap()])), 2);
    std::fs::remove_dir_all(&d).unwrap();
}

#[test]
fn out_dir_receives_reports_and_scenario() {
    let d = scratch("out");
    let o = run(&["--out-dir", d.to_str().unwrap(), "bgh", "--triple", "hemisphere-3", "--b", "0,1"]);
    assert_eq!(code(&o), 0);
    for f in ["bgh.json", "bgh.txt", "bgh.scenario.toml", "bgh.0-bgh-bgh.csv"] {
        assert!(d.join(f).is_file(), "missing {f}");
    }
    let toml = std::fs::read_to_string(d.join("bgh.scenario.toml")).unwrap();
    assert!(toml.contains("schema = 1"));

    // The written scenario replays to the same report.
    let first = std::fs::read_to_string(d.join("bgh.json")).unwrap();
    let replay = d.join("replay");
    let o = run(&["--out-dir", replay.to_str().unwrap(), "run", d.join("bgh.scenario.toml").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let again = std::fs::read_dir(&replay)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|x| x == "json"))
        .unwrap();
    assert_eq!(first, std::fs::read_to_string(again).unwrap());
    std::fs::remove_dir_all(&d).unwrap();
}

#[test]
fn json_is_byte_identical_across_runs() {
    let d = scratch("det");
    let args = |sub: &str| {
        let dir = d.join(sub);
        run(&[
            "--seed", "7", "--out-dir", dir.to_str().unwrap(), "wavemap", "--check", "q0", "--m", "4", "--n", "3", "--kappa",
            "0.2", "--trials", "5000",
        ])
    };
    assert_eq!(code(&args("a")), 0);
    assert_eq!(code(&args("b")), 0);
    let a = std::fs::read(d.join("a/wavemap-q0.json")).unwrap();
    let b = std::fs::read(d.join("b/wavemap-q0.json")).unwrap();
    assert_eq!(a, b);
    std::fs::remove_dir_all(&d).unwrap();
}

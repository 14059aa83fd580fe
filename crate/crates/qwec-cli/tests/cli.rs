use qwec_cli::config::{Command, ExperimentConfig, Target};
use qwec_cli::context::Context;
use qwec_cli::report::Report;
use std::process::{Command as Proc, Output};
use std::sync::OnceLock;

fn qwec(args: &[&str]) -> Output {
    Proc::new(env!("CARGO_BIN_EXE_qwec")).args(args).env_remove("QWEC_OUT_DIR").output().expect("binary runs")
}

fn ctx() -> &'static Context {
    static C: OnceLock<Context> = OnceLock::new();
    C.get_or_init(|| Context::new().unwrap())
}

fn tmp(name: &str) -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("qwec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

#[test]
fn verify_tables_passes_and_names_rows() {
    let o = qwec(&["verify-tables"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Report = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r.results.len(), 15);
    let row = r.results.iter().find(|v| v["flip"] == "(X_c)_{P2}").unwrap();
    assert_eq!(row["m"], "001111");
    assert_eq!(row["walk"], "001111");
}

#[test]
fn corrupted_generator_fails_only_where_it_should() {
    let o = qwec(&["verify-tables", "--corrupt-generator", "0"]);
    assert_eq!(o.status.code(), Some(1));
    let r: Report = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!r.summary.pass);
    // s0 (X_c)_P0 anticommutes with Z_c on P0 and Y_c on P0 only, and breaks commutation
    let bad: Vec<&str> = r.results.iter().filter(|v| v["pass"] == false).filter_map(|v| v["flip"].as_str()).collect();
    assert_eq!(bad, ["(Z_c)_{P0}", "(Y_c)_{P0}"]);
    assert!(r.results.iter().any(|v| v.get("invariant").is_some()));
}

#[test]
fn same_seed_same_bytes() {
    let a = tmp("a.csv");
    let b = tmp("b.csv");
    let run = |p: &std::path::Path| qwec(&["error-sweep", "--seed", "7", "--trials", "9", "--out", p.to_str().unwrap()]);
    let (oa, ob) = (run(&a), run(&b));
    assert_eq!(oa.status.code(), Some(0));
    assert_eq!(oa.stdout, ob.stdout);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(std::fs::read(a.with_extension("json")).unwrap(), oa.stdout);
    let other = qwec(&["error-sweep", "--seed", "8", "--trials", "9"]);
    assert_ne!(other.stdout, oa.stdout);
}

#[test]
fn zero_trials_give_a_header_only_csv() {
    let p = tmp("empty.csv");
    let o = qwec(&["error-sweep", "--trials", "0", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&p).unwrap(), "trial,family,target,syndrome,corrected_fidelity\n");
}

#[test]
fn output_directory_from_the_environment() {
    let d = tmp("envdir");
    let o = Proc::new(env!("CARGO_BIN_EXE_qwec")).args(["verify-tables"]).env("QWEC_OUT_DIR", &d).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(d.join("verify-tables.json")).unwrap(), o.stdout);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["error-sweep", "--target", "P1"][..],
        &["error-sweep", "--family", "bitflip"],
        &["verify-tables", "--corrupt-generator", "6"],
        &["logical-gates", "--word", "H Q"],
        &["no-such-command"],
    ] {
        assert_eq!(qwec(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn identities_report_the_stated_cphase_as_failing() {
    let o = qwec(&["verify-identities"]);
    assert_eq!(o.status.code(), Some(1));
    let r: Report = serde_json::from_slice(&o.stdout).unwrap();
    let dev = |name: &str| r.results.iter().find(|v| v["identity"] == name).unwrap()["deviation"].as_f64().unwrap();
    assert!(dev("W XXX = ZZZ W") < 1e-12);
    assert!(dev("CNOT (external coin -> logical)") < 1e-10);
    assert!(dev("middle block = controlled (ZZZ)_P4") < 1e-10);
    assert!(dev("H Zbar H = g Xbar") == 0.0);
    assert!(dev("CPhase = |+><+| I + |-><-| g Zbar") > 1e-10);
}

#[test]
fn logical_gate_words() {
    let o = qwec(&["logical-gates", "--word", "H", "--word", "H H"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Report = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r.results.len(), 16);
    // H on |0>_L reads out +X
    let h0 = &r.results[0];
    assert_eq!(h0["theta"], 0.0);
    let obs: Vec<f64> = h0["observed"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!((obs[0] - 1.0).abs() < 1e-8 && obs[1].abs() < 1e-8 && obs[2].abs() < 1e-8);
}

#[test]
fn t_twice_on_plus_reads_plus_y() {
    let h = std::f64::consts::FRAC_PI_2;
    let r = qwec_cli::gates::gate_row(ctx(), "T T", h, 0.0, 1e-8).unwrap();
    assert!(r.pass);
    assert!((r.observed[1] - 1.0).abs() < 1e-8);
}

#[test]
fn sweep_rows_follow_the_trial_plan() {
    let mut cfg = ExperimentConfig::new(Command::ErrorSweep);
    cfg.trials = 6;
    let rows = qwec_cli::sweep::run_trials(&cfg, ctx()).unwrap();
    let plan: Vec<(String, String)> = rows.iter().map(|r| (r.family.to_string(), r.target.clone())).collect();
    assert_eq!(plan[..4], [("coin".into(), "P0".into()), ("shift".into(), "P0".into()), ("pauli".into(), "P0".into()), ("coin".into(), "P2".into())]);
    cfg.target = Some(Target(4));
    let rows = qwec_cli::sweep::run_trials(&cfg, ctx()).unwrap();
    assert!(rows.iter().all(|r| r.target == "P4" && r.corrected_fidelity > 1.0 - 1e-8));
}

#[test]
fn monte_carlo_trials_are_seeded() {
    let mut cfg = ExperimentConfig::new(Command::ErrorSweep);
    cfg.trials = 4;
    cfg.monte_carlo = true;
    let a = qwec_cli::sweep::run_trials(&cfg, ctx()).unwrap();
    let b = qwec_cli::sweep::run_trials(&cfg, ctx()).unwrap();
    assert_eq!(a, b);
    assert!(a.iter().all(|r| r.corrected_fidelity > 1.0 - 1e-8 && !r.syndrome.contains(':')));
}

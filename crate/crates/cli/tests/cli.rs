use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn deltap(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_deltap"));
    cmd.args(args).env_remove("DELTAP_OUTPUT_DIR").stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("binary runs");
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn first_term(v: &Value) -> (String, String) {
    let t = &v["series"]["terms"][0];
    assert_eq!(t["exp"][0], 1);
    (t["num"].as_str().unwrap().to_string(), t["den"].as_str().unwrap().to_string())
}

#[test]
fn char_commands() {
    let gm = json(&deltap(&["char", "gm", "--primes", "3,5", "--order", "10"], None));
    assert_eq!(first_term(&gm), ("-1".into(), "1".into()));
    assert_eq!(gm["dirac"].as_array().unwrap().len(), 2);

    let ga = deltap(&["char", "ga", "--symbol", "1", "--format", "csv"], None);
    assert_eq!(String::from_utf8(ga.stdout).unwrap(), "e1,num,den\n1,1,1\n");

    let ell = deltap(&["char", "ell", "--curve", "37a", "--primes", "3,5"], None);
    assert_eq!(ell.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&ell.stderr).contains("supersingular"));
    let bad = deltap(&["char", "ell", "--curve", "11a", "--primes", "3,11"], None);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn eval_commands() {
    let two = json(&deltap(&["eval", "gm", "--point", "2", "--primes", "3,5", "--prec", "15"], None));
    assert_eq!(two["zero"], false);
    let z = json(&deltap(&["eval", "gm", "--point", "z", "--m", "4", "--primes", "3,5", "--kernel-test"], None));
    assert_eq!(z["zero"], true);
    assert_eq!(z["kernel_test"]["consistent"], true);
    let origin = json(&deltap(&["eval", "ell", "--curve", "11a", "--point", "0,0", "--primes", "3,5"], None));
    assert_eq!(origin["zero"], true);
    for c in origin["components"].as_array().unwrap() {
        assert_eq!(c["precision"], 15);
    }

    let off_curve = deltap(&["eval", "ell", "--curve", "11a", "--point", "1,1"], None);
    assert_eq!(off_curve.status.code(), Some(2));
    let non_unit = deltap(&["eval", "gm", "--point", "3"], None);
    assert_eq!(non_unit.status.code(), Some(2));
}

#[test]
fn usage_errors() {
    for args in [
        &["char", "gm", "--primes", "2,3"][..],
        &["char", "gm", "--primes", "3,4"],
        &["eval", "gm", "--point", "z", "--m", "6"],
        &["char", "gm", "--format", "yaml"],
        &["frobnicate"],
        &["verify", "honda"],
    ] {
        assert_eq!(deltap(args, None).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(deltap(&["--help"], None).status.code(), Some(0));
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "honda", "--curve", "11a", "--prime", "3", "--bound", "100"][..],
        &["verify", "additivity", "--group", "gm", "--primes", "3,5", "--depth", "10"],
        &["verify", "claim2", "--samples", "5"],
        &["verify", "integrality", "--order", "60"],
    ] {
        let v = json(&deltap(args, None));
        assert_eq!(v["passed"], true, "{args:?}");
    }
    let text = deltap(&["verify", "axioms", "--primes", "3,5", "--samples", "20", "--format", "text"], None);
    assert_eq!(text.status.code(), Some(0));
    assert!(String::from_utf8(text.stdout).unwrap().ends_with("all properties hold\n"));
}

#[test]
fn decompose_commands() {
    let psi = deltap(&["char", "gm", "--primes", "3,5", "--order", "20"], None);
    let psi = String::from_utf8(psi.stdout).unwrap();
    let r = json(&deltap(&["decompose", "--point", "2"], Some(&psi)));
    assert_eq!(r["rho"][0]["n"], 1);
    assert_eq!(r["rho"].as_array().unwrap().len(), 1);
    assert_eq!(r["augmentation"]["num"], "1");
    assert_eq!(r["points"][0]["verdict"], "not continuable (finite-precision)");

    let twisted = deltap(&["char", "gm", "--primes", "3,5", "--order", "20", "--symbol", "1 - phi_3"], None);
    let r = json(&deltap(&["decompose", "--point", "2", "--point", "-1"], Some(&String::from_utf8(twisted.stdout).unwrap())));
    assert_eq!(r["augmentation"]["num"], "0");
    assert_eq!(r["augmentation_zero"], true);
    for p in r["points"].as_array().unwrap() {
        assert_eq!(p["verdict"], "continuable");
    }

    let not_char = r#"{"group": "gm", "primes": [3, 5], "symbol": [{"n": 1, "num": "1", "den": "1"}]}"#;
    assert_eq!(deltap(&["decompose"], Some(not_char)).status.code(), Some(2));
    assert_eq!(deltap(&["decompose"], Some("not json")).status.code(), Some(2));
}

#[test]
fn every_json_output_parses_back() {
    let c = deltap(&["char", "ell", "--curve", "11a", "--primes", "3,5", "--order", "12"], None);
    let text = String::from_utf8(c.stdout).unwrap();
    let parsed: deltap::json::CharacterJson = serde_json::from_str(&text).unwrap();
    assert_eq!(deltap::json::to_canonical_string(&parsed).unwrap(), text);
    let r = json(&deltap(&["decompose"], Some(&text)));
    assert_eq!(r["group"], "ell");
}

#[test]
fn config_file_and_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# defaults for this run\nprimes = 3,7\norder = 6\nformat = csv\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = deltap(&["--config", cfg, "char", "gm"], None);
    let csv = String::from_utf8(from_file.stdout).unwrap();
    assert!(csv.starts_with("e1,num,den\n1,-1,1\n"));
    // T^1 through T^5, with T^3 cancelling
    assert_eq!(csv.lines().count(), 5);
    let overridden = deltap(&["--config", cfg, "char", "gm", "--format", "json"], None);
    assert_eq!(json(&overridden)["primes"], serde_json::json!([3, 7]));

    std::fs::write(dir.path().join("bad.cfg"), "colour = red\n").unwrap();
    let bad = deltap(&["--config", dir.path().join("bad.cfg").to_str().unwrap(), "char", "gm"], None);
    assert_eq!(bad.status.code(), Some(1));

    let out = Command::new(env!("CARGO_BIN_EXE_deltap"))
        .args(["char", "gm", "--output", "nested/psi.json"])
        .env("DELTAP_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(dir.path().join("nested/psi.json")).unwrap();
    assert_eq!(written, String::from_utf8(deltap(&["char", "gm"], None).stdout).unwrap());
}

#[test]
fn in_process_runner_matches_the_binary() {
    let args = ["deltap", "eval", "gm", "--point", "7", "--format", "text"];
    let outcome = deltap_cli::run(args, &mut std::io::empty());
    let out = deltap(&args[1..], None);
    assert_eq!(outcome.code, 0);
    assert_eq!(outcome.stdout.as_bytes(), out.stdout.as_slice());
}

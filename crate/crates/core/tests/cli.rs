use std::process::{Command, Output};

use knormal::cli::{exit_code, EXIT_DOMAIN, EXIT_EXHAUSTED, EXIT_USAGE};
use knormal::Error;

fn knormal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knormal"))
        .args(args)
        .env_remove("KNORMAL_JOBS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn factor_output() {
    let o = knormal(&["factor", "728"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"value\":728,\"factors\":[[2,3],[7,1],[13,1]]}\n");
}

#[test]
fn exit_codes() {
    assert_eq!(knormal(&["factor", "seven"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(knormal(&["frobnicate"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(knormal(&[]).status.code(), Some(EXIT_USAGE));
    assert_eq!(knormal(&["search", "6"]).status.code(), Some(EXIT_DOMAIN));
    assert_eq!(knormal(&["census", "32", "6", "3"]).status.code(), Some(EXIT_DOMAIN));
    assert_eq!(knormal(&["--help"]).status.code(), Some(0));
    assert_eq!(exit_code(&Error::SearchExhausted(7)), EXIT_EXHAUSTED);
    assert_eq!(exit_code(&Error::Inadmissible(2)), EXIT_DOMAIN);
}

#[test]
fn inadmissible_search() {
    let o = knormal(&["--envelope", "search", "2"]);
    assert_eq!(o.status.code(), Some(EXIT_DOMAIN));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "error");
    assert!(v["message"].as_str().unwrap().contains("odd exponent"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("odd exponent"));
}

#[test]
fn envelope_wraps_payload() {
    let plain = stdout(&knormal(&["classify", "8", "3"]));
    let wrapped = stdout(&knormal(&["--envelope", "classify", "8", "3"]));
    let v: serde_json::Value = serde_json::from_str(&wrapped).unwrap();
    assert_eq!(v["command"], "classify");
    assert_eq!(v["status"], "ok");
    assert_eq!(v["payload"], serde_json::from_str::<serde_json::Value>(&plain).unwrap());
    assert_eq!(v["payload"]["rule"], "even-none");
}

#[test]
fn single_line_and_repeatable() {
    for args in [
        &["search", "7"][..],
        &["search", "49"],
        &["exists", "9"],
        &["exists", "5", "--n", "8", "--k", "4"],
        &["sieve", "3"],
        &["census", "3", "4", "2"],
        &["classify", "97", "6"],
    ] {
        let a = knormal(args);
        let b = knormal(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let text = stdout(&a);
        assert_eq!(text.lines().count(), 1, "{args:?}");
        serde_json::from_str::<serde_json::Value>(&text).unwrap();
    }
}

#[test]
fn search_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let o = knormal(&["search", "7"]);
    std::fs::write(&path, &o.stdout).unwrap();
    let v = knormal(&["verify", path.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&stdout(&v)).unwrap();
    assert_eq!(r["valid"], true);
    assert_eq!(r["order"], "117648");
    assert_eq!(r["k_normality"], 3);

    // flip one coordinate of the element
    let mut cert: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let c = cert["element"][0][0].as_u64().unwrap();
    cert["element"][0][0] = ((c + 1) % 7).into();
    std::fs::write(&path, cert.to_string()).unwrap();
    assert_eq!(knormal(&["verify", path.to_str().unwrap()]).status.code(), Some(EXIT_DOMAIN));

    std::fs::write(&path, "{\"q\":7}").unwrap();
    assert_eq!(knormal(&["verify", path.to_str().unwrap()]).status.code(), Some(EXIT_DOMAIN));
}

#[test]
fn scan_independent_of_jobs() {
    let one = knormal(&["scan", "2", "300", "--witness", "--jobs", "1"]);
    let four = knormal(&["scan", "2", "300", "--witness", "--jobs", "4"]);
    let env = Command::new(env!("CARGO_BIN_EXE_knormal"))
        .args(["scan", "2", "300", "--witness"])
        .env("KNORMAL_JOBS", "3")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, env.stdout);
    let text = stdout(&one);
    let last: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["summary"]["verification_failures"], 0);
    assert_eq!(last["summary"]["prime_powers"], text.lines().count() as u64 - 1);
}

#[test]
fn cache_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.txt");
    std::fs::write(&path, "728=2^3*7*13\n").unwrap();
    let o = knormal(&["--cache", path.to_str().unwrap(), "factor", "728"]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&path, "728=2^3*7*11\n").unwrap();
    assert_eq!(knormal(&["--cache", path.to_str().unwrap(), "factor", "728"]).status.code(), Some(EXIT_DOMAIN));
}

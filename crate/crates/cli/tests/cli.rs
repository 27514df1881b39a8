use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::path::PathBuf;
use std::process::Command;
use std::thread;
use std::time::Duration;

use morsekit::{run_command, Env, EXIT_FAIL, EXIT_OK, EXIT_USAGE};

fn run_with(env: &Env, args: &[&str]) -> (i32, String, String) {
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let argv = std::iter::once("morsekit").chain(args.iter().copied());
    let code = run_command(argv, env, &mut o, &mut e);
    (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
}

fn run(args: &[&str]) -> (i32, String, String) {
    run_with(&Env::default(), args)
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/oeis")
}

fn offline() -> Env {
    Env { offline: true, fixture_dir: Some(fixtures()), ..Env::default() }
}

#[test]
fn table_csv_range() {
    let (code, out, _) = run(&["table", "--nmin", "-5", "--nmax", "6", "--lmax", "5", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().next(), Some("n,l,K"));
    assert!(out.lines().any(|l| l == "3,2,36"));
}

#[test]
fn table_cells() {
    let (code, out, _) = run(&["table", "--cell", "-5,5", "--cell", "6,0"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("-5,5,24\n"));
    assert!(out.contains("6,0,16\n"));

    let (code, out, _) = run(&["table", "--cell", "-2,1", "--with-unknown"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("-2,1,?\n"));

    let (code, _, err) = run(&["table", "--cell", "-2,1"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("no value"));
}

#[test]
fn table_json_schema() {
    let (code, out, _) = run(&["table", "--cell", "3,2", "--cell", "30,4", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries[0], serde_json::json!({"n": 3, "l": 2, "K": "36"}));
    assert!(entries[1]["K"].is_string());
}

#[test]
fn table_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.csv");
    let (code, out, _) = run(&["table", "--lmax", "2", "--out", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert!(std::fs::read_to_string(p).unwrap().starts_with("n,l,K\n"));
}

#[test]
fn cache_dir_persists_memo() {
    let dir = tempfile::tempdir().unwrap();
    let env = Env { cache_dir: Some(dir.path().to_path_buf()), ..Env::default() };
    let (code, first, _) = run_with(&env, &["table", "--nmax", "12", "--lmax", "3"]);
    assert_eq!(code, EXIT_OK);
    let cache = dir.path().join("knl-cache.json");
    assert!(cache.exists());
    let (_, second, _) = run_with(&env, &["table", "--nmax", "12", "--lmax", "3"]);
    assert_eq!(first, second);

    std::fs::write(&cache, "not json").unwrap();
    let (code, third, err) = run_with(&env, &["table", "--nmax", "12", "--lmax", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(third, first);
    assert!(err.contains("ignoring cache"));
}

#[test]
fn verify_all_passes() {
    let (code, out, _) = run(&["verify", "all", "--order", "20"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("verify all:"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn verify_single_suites() {
    for suite in ["recurrence", "closed-forms", "genfun", "pde", "identities", "negative", "divisibility"] {
        let (code, out, _) = run(&["verify", suite]);
        assert_eq!(code, EXIT_OK, "{suite}: {out}");
    }
    let (code, out, _) = run(&["verify", "oracle", "--budget", "5"]);
    assert_eq!(code, EXIT_OK, "{out}");
}

#[test]
fn oracle_compare() {
    let (code, out, _) = run(&["oracle", "--n", "3", "--l", "2", "--compare"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l == "36 = 36"), "{out}");
}

#[test]
fn fiber_writes_deterministic_svg() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    for p in [&a, &b] {
        let (code, out, err) = run(&["fiber", "--n", "3", "--svg", p.to_str().unwrap(), "--seed", "4"]);
        assert_eq!(code, EXIT_OK, "{err}");
        assert!(out.contains("regions: 36"), "{out}");
    }
    let svg = std::fs::read_to_string(&a).unwrap();
    assert_eq!(svg, std::fs::read_to_string(&b).unwrap());
    assert!(svg.contains(r#"viewBox="0 0 800 800""#));
    assert_eq!(svg.matches("stroke-dasharray").count(), 1);
}

#[test]
fn oeis_offline_fixtures() {
    let (code, out, _) = run_with(&offline(), &["oeis", "--terms", "1,1,1,2,5,16,61,272"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l == "A000111"));

    let (code, out, _) = run_with(&offline(), &["oeis", "--terms", "1,2,8,48,384,3840"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l == "A000165"));

    let (code, _, err) = run_with(&offline(), &["oeis", "--terms", "1,2,3,4,5,6"]);
    assert_eq!(code, EXIT_FAIL);
    assert!(err.contains("no offline fixture"));

    let (code, _, _) = run_with(&offline(), &["oeis", "--terms", "1,2,8,48"]);
    assert_eq!(code, EXIT_USAGE);
}

/// Serves one canned HTTP response and hands back the request line.
fn serve_once(body: &'static str, delay: Duration) -> (String, thread::JoinHandle<String>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let base = format!("http://{}", listener.local_addr().unwrap());
    let handle = thread::spawn(move || {
        let (mut stream, _) = listener.accept().unwrap();
        let mut reader = BufReader::new(stream.try_clone().unwrap());
        let mut request_line = String::new();
        reader.read_line(&mut request_line).unwrap();
        loop {
            let mut line = String::new();
            if reader.read_line(&mut line).unwrap() == 0 || line == "\r\n" {
                break;
            }
        }
        thread::sleep(delay);
        let _ = write!(
            stream,
            "HTTP/1.1 200 OK\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
            body.len()
        );
        request_line
    });
    (base, handle)
}

#[test]
fn oeis_online_against_mock_server() {
    let (base, handle) = serve_once(r#"{"results":[{"number":111},{"number":1250}]}"#, Duration::ZERO);
    let env = Env { oeis_base_url: Some(base), ..Env::default() };
    let (code, out, err) = run_with(&env, &["oeis", "--terms", "1,1,1,2,5,16,61,272"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(out, "A000111\nA001250\n");
    let request = handle.join().unwrap();
    assert!(request.starts_with("GET /search?"), "{request}");
    assert!(request.contains("fmt=json"));
    assert!(request.contains("q=1%2C1%2C1%2C2%2C5%2C16%2C61%2C272") || request.contains("q=1,1,1,2,5,16,61,272"));
}

#[test]
fn oeis_malformed_response() {
    let (base, handle) = serve_once("<html>busy</html>", Duration::ZERO);
    let env = Env { oeis_base_url: Some(base), ..Env::default() };
    let (code, _, err) = run_with(&env, &["oeis", "--terms", "1,1,1,2,5,16"]);
    handle.join().unwrap();
    assert_eq!(code, EXIT_FAIL);
    assert!(err.contains("malformed"), "{err}");
}

#[test]
fn oeis_timeout_is_soft() {
    let (base, handle) = serve_once("[]", Duration::from_secs(3));
    let env = Env { oeis_base_url: Some(base), ..Env::default() };
    let (code, _, err) = run_with(&env, &["oeis", "--terms", "1,1,1,2,5,16", "--timeout", "1"]);
    assert_eq!(code, EXIT_FAIL);
    assert!(err.contains("MORSEKIT_OFFLINE=1"), "{err}");
    let _ = handle.join();
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_morsekit");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["table", "--cell", "1,3"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "n,l,K\n1,3,6\n");
    assert_eq!(status(&["table", "--nope"]).status.code(), Some(2));
    let off = Command::new(bin)
        .args(["oeis", "--terms", "1,1,1,2,5,16,61,272"])
        .env("MORSEKIT_OFFLINE", "1")
        .env("MORSEKIT_FIXTURE_DIR", fixtures())
        .output()
        .unwrap();
    assert_eq!(off.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&off.stdout).contains("A000111"));
}

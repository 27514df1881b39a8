//! Sequence lookup against the OEIS search endpoint, or local fixtures.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Duration;

use morsekit_core::exact::Integer;
use serde_json::Value;

pub const DEFAULT_BASE_URL: &str = "https://oeis.org";
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);
pub const MIN_TERMS: usize = 6;

#[derive(Debug, Clone)]
pub struct OeisConfig {
    pub base_url: String,
    pub offline: bool,
    pub fixture_dir: PathBuf,
    pub timeout: Duration,
}

impl Default for OeisConfig {
    fn default() -> Self {
        OeisConfig {
            base_url: DEFAULT_BASE_URL.to_string(),
            offline: false,
            fixture_dir: PathBuf::from("fixtures/oeis"),
            timeout: DEFAULT_TIMEOUT,
        }
    }
}

#[derive(Debug)]
pub enum OeisError {
    TooFewTerms(usize),
    /// Network trouble; retrying offline may help.
    Unreachable(String),
    MissingFixture(PathBuf),
    Status(u16),
    Parse(String),
}

impl OeisError {
    /// Failures of the environment rather than of the request.
    pub fn is_soft(&self) -> bool {
        matches!(self, OeisError::Unreachable(_) | OeisError::MissingFixture(_))
    }
}

impl fmt::Display for OeisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OeisError::TooFewTerms(k) => write!(f, "need at least {MIN_TERMS} terms, got {k}"),
            OeisError::Unreachable(e) => {
                write!(f, "OEIS not reachable ({e}); set MORSEKIT_OFFLINE=1 to use local fixtures")
            }
            OeisError::MissingFixture(p) => write!(f, "no offline fixture at {}", p.display()),
            OeisError::Status(s) => write!(f, "OEIS answered with HTTP {s}"),
            OeisError::Parse(e) => write!(f, "malformed OEIS response: {e}"),
        }
    }
}

impl std::error::Error for OeisError {}

pub fn query_string(terms: &[Integer]) -> String {
    terms.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// `<dir>/<t1>_<t2>_..._<tk>.json`.
pub fn fixture_path(dir: &Path, terms: &[Integer]) -> PathBuf {
    let name: Vec<String> = terms.iter().map(ToString::to_string).collect();
    dir.join(format!("{}.json", name.join("_")))
}

/// Sequence ids from either response shape: a bare array of entries, or an
/// object with a `results` array; `null` means no matches.
pub fn parse_response(body: &str) -> Result<Vec<String>, OeisError> {
    let v: Value = serde_json::from_str(body).map_err(|e| OeisError::Parse(e.to_string()))?;
    let results = match &v {
        Value::Null => return Ok(Vec::new()),
        Value::Array(a) => a,
        Value::Object(o) => match o.get("results") {
            Some(Value::Array(a)) => a,
            Some(Value::Null) => return Ok(Vec::new()),
            _ => return Err(OeisError::Parse("object without a results array".into())),
        },
        _ => return Err(OeisError::Parse("expected an array or an object".into())),
    };
    results
        .iter()
        .map(|r| {
            r.get("number")
                .and_then(Value::as_u64)
                .map(|k| format!("A{k:06}"))
                .ok_or_else(|| OeisError::Parse(format!("entry without a number: {r}")))
        })
        .collect()
}

fn fetch(terms: &[Integer], cfg: &OeisConfig) -> Result<String, OeisError> {
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .timeout_global(Some(cfg.timeout))
        .build()
        .into();
    let url = format!("{}/search", cfg.base_url.trim_end_matches('/'));
    let resp = agent.get(&url).query("q", query_string(terms)).query("fmt", "json").call();
    match resp {
        Ok(mut r) => r
            .body_mut()
            .read_to_string()
            .map_err(|e| OeisError::Unreachable(e.to_string())),
        Err(ureq::Error::StatusCode(s)) => Err(OeisError::Status(s)),
        Err(e) => Err(OeisError::Unreachable(e.to_string())),
    }
}

pub fn oeis_lookup(terms: &[Integer], cfg: &OeisConfig) -> Result<Vec<String>, OeisError> {
    if terms.len() < MIN_TERMS {
        return Err(OeisError::TooFewTerms(terms.len()));
    }
    let body = if cfg.offline {
        let p = fixture_path(&cfg.fixture_dir, terms);
        std::fs::read_to_string(&p).map_err(|_| OeisError::MissingFixture(p))?
    } else {
        fetch(terms, cfg)?
    };
    parse_response(&body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use morsekit_core::exact::int;

    #[test]
    fn both_shapes_parse() {
        assert_eq!(parse_response(r#"[{"number":111},{"number":7}]"#).unwrap(), ["A000111", "A000007"]);
        assert_eq!(parse_response(r#"{"results":[{"number":165}]}"#).unwrap(), ["A000165"]);
        assert!(parse_response("null").unwrap().is_empty());
        assert!(parse_response(r#"{"results":null}"#).unwrap().is_empty());
    }

    #[test]
    fn malformed_is_a_parse_error() {
        for body in ["<html>", r#"{"count":1}"#, r#"[{"name":"x"}]"#, "3"] {
            assert!(matches!(parse_response(body), Err(OeisError::Parse(_))), "{body}");
        }
    }

    #[test]
    fn short_queries_rejected() {
        let terms: Vec<Integer> = [1, 2, 8, 48].iter().map(|&v| int(v)).collect();
        let e = oeis_lookup(&terms, &OeisConfig::default()).unwrap_err();
        assert!(matches!(e, OeisError::TooFewTerms(4)));
        assert!(!e.is_soft());
    }

    #[test]
    fn fixture_naming() {
        let terms: Vec<Integer> = [1, 2, 8].iter().map(|&v| int(v)).collect();
        assert_eq!(fixture_path(Path::new("d"), &terms), PathBuf::from("d/1_2_8.json"));
        assert_eq!(query_string(&terms), "1,2,8");
    }
}

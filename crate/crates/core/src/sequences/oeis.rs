//! Minimal OEIS search client with an on-disk cache and recorded fixtures.
//!
//! Queries go to `{base}/search?q=<comma-terms>&fmt=json`. Each response body
//! is stored verbatim under `{cache}/{sha256(query)}.json`, so a result seen
//! once online is served byte-for-byte offline later. Offline mode reads the
//! cache and then the fixtures compiled into the crate; it never opens a
//! connection.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use num_bigint::BigInt;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::SequenceError;

pub const DEFAULT_BASE_URL: &str = "https://oeis.org";
pub const URL_ENV: &str = "TANINT_OEIS_URL";
pub const CACHE_ENV: &str = "TANINT_CACHE";
pub const MAX_TERMS: usize = 50;

/// Recorded responses, keyed by query string.
const FIXTURES: &[(&str, &str)] = &[("1,1,2,3,5,8,13", include_str!("../../fixtures/oeis/fibonacci.json"))];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OeisMatch {
    /// `A` followed by six digits.
    pub sequence_id: String,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OeisResult {
    pub query_terms: Vec<BigInt>,
    pub matches: Vec<OeisMatch>,
    pub from_cache: bool,
}

#[derive(Clone, Debug)]
pub struct OeisClient {
    base_url: String,
    cache_dir: PathBuf,
}

/// `1,1,2,3` style query string.
pub fn query_string(terms: &[BigInt]) -> String {
    terms.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn cache_key(query: &str) -> String {
    hex::encode(Sha256::digest(query.as_bytes()))
}

/// Parse an OEIS JSON search response. Accepts the bare array (or `null`)
/// returned by the current service and the older object form with a
/// `results` field.
pub fn parse_response(body: &str) -> Result<Vec<OeisMatch>, SequenceError> {
    let v: Value = serde_json::from_str(body).map_err(|e| SequenceError::Malformed(e.to_string()))?;
    let entries = match &v {
        Value::Null => return Ok(Vec::new()),
        Value::Array(a) => a,
        Value::Object(o) => match o.get("results") {
            None | Some(Value::Null) => return Ok(Vec::new()),
            Some(Value::Array(a)) => a,
            Some(_) => return Err(SequenceError::Malformed("`results` is not an array".into())),
        },
        _ => return Err(SequenceError::Malformed("unexpected top-level value".into())),
    };
    entries
        .iter()
        .map(|e| {
            let number = e
                .get("number")
                .and_then(Value::as_u64)
                .ok_or_else(|| SequenceError::Malformed("entry without a numeric `number`".into()))?;
            let name = e
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| SequenceError::Malformed("entry without a `name`".into()))?;
            Ok(OeisMatch { sequence_id: format!("A{number:06}"), name: name.to_string() })
        })
        .collect()
}

impl OeisClient {
    pub fn new(base_url: impl Into<String>, cache_dir: impl Into<PathBuf>) -> Self {
        OeisClient { base_url: base_url.into().trim_end_matches('/').to_string(), cache_dir: cache_dir.into() }
    }

    /// Endpoint from `TANINT_OEIS_URL`, cache from `TANINT_CACHE` (else the
    /// platform cache directory).
    pub fn from_env() -> Self {
        let base = std::env::var(URL_ENV).unwrap_or_else(|_| DEFAULT_BASE_URL.to_string());
        let cache = std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .or_else(|| dirs::cache_dir().map(|d| d.join("tanint").join("oeis")))
            .unwrap_or_else(|| std::env::temp_dir().join("tanint-oeis"));
        OeisClient::new(base, cache)
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }

    pub fn cache_dir(&self) -> &Path {
        &self.cache_dir
    }

    pub fn cache_path(&self, query: &str) -> PathBuf {
        self.cache_dir.join(format!("{}.json", cache_key(query)))
    }

    pub fn search_url(&self, query: &str) -> String {
        format!("{}/search?q={}&fmt=json", self.base_url, query)
    }

    fn read_cache(&self, query: &str) -> Option<String> {
        fs::read_to_string(self.cache_path(query)).ok()
    }

    fn write_cache(&self, query: &str, body: &str) -> Result<(), SequenceError> {
        fs::create_dir_all(&self.cache_dir)?;
        let path = self.cache_path(query);
        // same content for the same query, so a plain rename is a safe
        // last-writer-wins update
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, body)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    fn fetch(&self, query: &str) -> Result<String, SequenceError> {
        let url = self.search_url(query);
        let network = |reason: String| SequenceError::Network { url: url.clone(), reason };
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(30)))
            .http_status_as_error(false)
            .build()
            .into();
        let mut resp = agent.get(&url).call().map_err(|e| network(e.to_string()))?;
        if !resp.status().is_success() {
            return Err(network(format!("HTTP status {}", resp.status())));
        }
        resp.body_mut().read_to_string().map_err(|e| network(e.to_string()))
    }

    /// Raw response body for `query` and whether it came from the cache or
    /// fixtures.
    pub fn lookup_body(&self, query: &str, offline: bool) -> Result<(String, bool), SequenceError> {
        if let Some(body) = self.read_cache(query) {
            return Ok((body, true));
        }
        if offline {
            return FIXTURES
                .iter()
                .find(|(q, _)| *q == query)
                .map(|(_, body)| (body.to_string(), true))
                .ok_or_else(|| SequenceError::OfflineMiss(query.to_string()));
        }
        let body = self.fetch(query)?;
        // validate before caching so a broken response is never replayed
        parse_response(&body)?;
        self.write_cache(query, &body)?;
        Ok((body, false))
    }

    pub fn lookup(&self, terms: &[BigInt], offline: bool) -> Result<OeisResult, SequenceError> {
        if terms.is_empty() || terms.len() > MAX_TERMS {
            return Err(SequenceError::QueryLength(terms.len()));
        }
        let query = query_string(terms);
        let (body, from_cache) = self.lookup_body(&query, offline)?;
        Ok(OeisResult { query_terms: terms.to_vec(), matches: parse_response(&body)?, from_cache })
    }
}

/// Look up `terms` with the environment-configured client.
pub fn oeis_lookup(terms: &[BigInt], offline: bool) -> Result<OeisResult, SequenceError> {
    OeisClient::from_env().lookup(terms, offline)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn response_shapes() {
        assert!(parse_response("null").unwrap().is_empty());
        assert!(parse_response("[]").unwrap().is_empty());
        assert!(parse_response(r#"{"results":null}"#).unwrap().is_empty());
        let m = parse_response(r#"[{"number":45,"name":"Fibonacci numbers"}]"#).unwrap();
        assert_eq!(m, vec![OeisMatch { sequence_id: "A000045".into(), name: "Fibonacci numbers".into() }]);
        let m = parse_response(r#"{"results":[{"number":6752,"name":"x"}]}"#).unwrap();
        assert_eq!(m[0].sequence_id, "A006752");
        for bad in ["<html>", "42", r#"[{"name":"x"}]"#, r#"[{"number":1}]"#, r#"{"results":3}"#] {
            assert!(matches!(parse_response(bad), Err(SequenceError::Malformed(_))), "{bad}");
        }
    }

    #[test]
    fn query_bounds() {
        let dir = tempfile::tempdir().unwrap();
        let c = OeisClient::new("http://127.0.0.1:9", dir.path());
        assert!(matches!(c.lookup(&[], true), Err(SequenceError::QueryLength(0))));
        let long = ints(&[1; 51]);
        assert!(matches!(c.lookup(&long, true), Err(SequenceError::QueryLength(51))));
    }

    #[test]
    fn fixture_serves_fibonacci_offline() {
        let dir = tempfile::tempdir().unwrap();
        let c = OeisClient::new("http://127.0.0.1:9", dir.path());
        let r = c.lookup(&ints(&[1, 1, 2, 3, 5, 8, 13]), true).unwrap();
        assert!(r.from_cache);
        assert!(r.matches.iter().any(|m| m.sequence_id == "A000045"));
        assert!(matches!(c.lookup(&ints(&[1, 2, 23]), true), Err(SequenceError::OfflineMiss(_))));
    }

    #[test]
    fn unreachable_endpoint_is_a_network_error() {
        let dir = tempfile::tempdir().unwrap();
        // port 9 (discard) on loopback is closed in the test environment
        let c = OeisClient::new("http://127.0.0.1:9", dir.path());
        let err = c.lookup(&ints(&[1, 2, 23, 88]), false).unwrap_err();
        assert!(matches!(err, SequenceError::Network { .. }), "{err}");
        assert!(!c.cache_path("1,2,23,88").exists());
    }

    #[test]
    fn url_and_key_shape() {
        let c = OeisClient::new("http://host/", "/tmp/x");
        assert_eq!(c.search_url("1,-2,3"), "http://host/search?q=1,-2,3&fmt=json");
        assert_eq!(cache_key("1,1,2").len(), 64);
        assert_eq!(query_string(&ints(&[1, -2, 3])), "1,-2,3");
    }
}

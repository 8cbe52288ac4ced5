// SPDX-License-Identifier: Apache-2.0

//! Weight-2 newforms from the LMFDB, with a per-level disk cache and
//! bundled offline fixtures.
//!
//! The client queries the database's native organization (newforms on
//! `Γ₀(N)` with character, grouped by level) and filters CM self-twists and
//! coefficient-field degree locally.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::polyfield::IntPolynomial;
use crate::quadfield::{self, Side};

pub const DEFAULT_BASE_URL: &str = "https://www.lmfdb.org";

/// Levels whose modular curve `X₁(N)` has genus 0: no weight-2 cusp forms.
const GENUS_ZERO_LEVELS: [u64; 11] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12];

const FIXTURES: &[(u64, &str)] = &[
    (11, include_str!("../fixtures/newforms/11.json")),
    (63, include_str!("../fixtures/newforms/63.json")),
    (99, include_str!("../fixtures/newforms/99.json")),
    (175, include_str!("../fixtures/newforms/175.json")),
    (207, include_str!("../fixtures/newforms/207.json")),
    (279, include_str!("../fixtures/newforms/279.json")),
    (684, include_str!("../fixtures/newforms/684.json")),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LmfdbError {
    #[error("transport error: {0}")]
    Transport(String),
    #[error("no cached or bundled data for level {level} (offline)")]
    CacheMiss { level: u64 },
    #[error("malformed payload at field `{field}`: {message}")]
    Decode { field: String, message: String },
    #[error("invalid record {label}: {message}")]
    InvalidRecord { label: String, message: String },
    #[error("cache i/o: {0}")]
    Io(String),
    #[error(
        "no CM newform with self-twist {disc} and dimension {dimension} at levels m²·{p}, m ≤ {m_max}{}",
        skipped_note(.skipped_levels)
    )]
    NotFound {
        p: u64,
        disc: i64,
        dimension: u64,
        m_max: u64,
        skipped_levels: Vec<u64>,
    },
    #[error("bad prime: {0}")]
    Field(String),
}

fn skipped_note(levels: &[u64]) -> String {
    if levels.is_empty() {
        String::new()
    } else {
        format!(" (levels unavailable offline: {levels:?})")
    }
}

impl From<std::io::Error> for LmfdbError {
    fn from(e: std::io::Error) -> Self {
        LmfdbError::Io(e.to_string())
    }
}

/// A newform as served by the database.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewformRecord {
    pub label: String,
    pub level: u64,
    pub weight: u32,
    pub dimension: u64,
    pub field_poly: Option<IntPolynomial>,
    pub self_twist_discs: Vec<i64>,
    pub is_cm: bool,
}

impl NewformRecord {
    pub fn validate(&self) -> Result<(), LmfdbError> {
        let bad = |message: String| {
            Err(LmfdbError::InvalidRecord {
                label: self.label.clone(),
                message,
            })
        };
        if let Some(poly) = &self.field_poly {
            if poly.degree() as u64 != self.dimension {
                return bad(format!(
                    "field polynomial degree {} differs from dimension {}",
                    poly.degree(),
                    self.dimension
                ));
            }
        }
        let has_negative = self.self_twist_discs.iter().any(|&d| d < 0);
        if has_negative != self.is_cm {
            return bad(format!(
                "is_cm = {} but self-twist discriminants are {:?}",
                self.is_cm, self.self_twist_discs
            ));
        }
        Ok(())
    }

    pub fn has_cm_by(&self, disc: i64) -> bool {
        self.self_twist_discs.contains(&disc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewformQuery {
    pub level: u64,
    pub weight: u32,
}

/// On-disk document: `<cache_dir>/newforms/<level>.json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheDocument {
    pub query: NewformQuery,
    pub retrieved_at: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub records: Vec<NewformRecord>,
}

impl CacheDocument {
    pub fn decode(text: &str) -> Result<Self, LmfdbError> {
        let doc: CacheDocument = serde_json::from_str(text).map_err(|e| LmfdbError::Decode {
            field: "cache document".into(),
            message: e.to_string(),
        })?;
        for r in &doc.records {
            r.validate()?;
        }
        Ok(doc)
    }

    pub fn encode(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("cache documents serialize");
        s.push('\n');
        s
    }
}

fn field<'a>(obj: &'a Value, name: &str) -> Result<&'a Value, LmfdbError> {
    obj.get(name).ok_or_else(|| LmfdbError::Decode {
        field: name.into(),
        message: "missing".into(),
    })
}

fn decode_err(name: &str, message: impl Into<String>) -> LmfdbError {
    LmfdbError::Decode {
        field: name.into(),
        message: message.into(),
    }
}

fn as_u64(obj: &Value, name: &str) -> Result<u64, LmfdbError> {
    field(obj, name)?
        .as_u64()
        .ok_or_else(|| decode_err(name, "expected a non-negative integer"))
}

fn as_bigint(v: &Value, name: &str) -> Result<BigInt, LmfdbError> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse()
            .map_err(|_| decode_err(name, format!("non-integer coefficient {n}"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| decode_err(name, format!("non-integer coefficient {s:?}"))),
        _ => Err(decode_err(name, "expected an integer")),
    }
}

fn decode_api_record(obj: &Value) -> Result<NewformRecord, LmfdbError> {
    let label = field(obj, "label")?
        .as_str()
        .ok_or_else(|| decode_err("label", "expected a string"))?
        .to_string();
    let weight = as_u64(obj, "weight")?;
    let field_poly = match obj.get("field_poly") {
        None | Some(Value::Null) => None,
        Some(Value::Array(coeffs)) => {
            // the database lists coefficients constant term first
            let asc = coeffs
                .iter()
                .map(|c| as_bigint(c, "field_poly"))
                .collect::<Result<Vec<_>, _>>()?;
            Some(
                IntPolynomial::from_asc(asc)
                    .map_err(|e| decode_err("field_poly", e.to_string()))?,
            )
        }
        Some(_) => return Err(decode_err("field_poly", "expected an array or null")),
    };
    let self_twist_discs = match obj.get("self_twist_discs") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(ds)) => ds
            .iter()
            .map(|d| {
                d.as_i64()
                    .ok_or_else(|| decode_err("self_twist_discs", "expected integers"))
            })
            .collect::<Result<_, _>>()?,
        Some(_) => return Err(decode_err("self_twist_discs", "expected an array")),
    };
    let is_cm = match field(obj, "is_cm")? {
        Value::Bool(b) => *b,
        Value::Number(n) if n.as_u64().is_some() => n.as_u64() != Some(0),
        _ => return Err(decode_err("is_cm", "expected a boolean")),
    };
    let record = NewformRecord {
        label,
        level: as_u64(obj, "level")?,
        weight: u32::try_from(weight).map_err(|_| decode_err("weight", "out of range"))?,
        dimension: as_u64(obj, "dim")?,
        field_poly,
        self_twist_discs,
        is_cm,
    };
    record.validate()?;
    Ok(record)
}

/// One page of the `mf_newforms` API: the records and the `next` link.
pub fn decode_api_page(text: &str) -> Result<(Vec<NewformRecord>, Option<String>), LmfdbError> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| decode_err("payload", e.to_string()))?;
    let data = field(&root, "data")?
        .as_array()
        .ok_or_else(|| decode_err("data", "expected an array"))?;
    let records = data
        .iter()
        .map(decode_api_record)
        .collect::<Result<Vec<_>, _>>()?;
    let next = match root.get("next") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) if s.is_empty() => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(decode_err("next", "expected a string")),
    };
    Ok((records, next))
}

/// Anything that can perform an HTTP GET.
pub trait Transport {
    fn get(&self, url: &str) -> Result<String, LmfdbError>;
}

pub struct HttpTransport {
    agent: ureq::Agent,
}

impl Default for HttpTransport {
    fn default() -> Self {
        let config = ureq::Agent::config_builder()
            .timeout_global(Some(std::time::Duration::from_secs(60)))
            .user_agent(concat!("rcf/", env!("CARGO_PKG_VERSION")))
            .build();
        Self {
            agent: config.into(),
        }
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &str) -> Result<String, LmfdbError> {
        self.agent
            .get(url)
            .call()
            .map_err(|e| LmfdbError::Transport(e.to_string()))?
            .body_mut()
            .read_to_string()
            .map_err(|e| LmfdbError::Transport(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Online,
    Offline,
}

/// Default cache location: `$XDG_CACHE_HOME/rcf` or `~/.cache/rcf`.
pub fn default_cache_dir() -> PathBuf {
    std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .unwrap_or_else(std::env::temp_dir)
        .join("rcf")
}

pub struct LmfdbClient<T = HttpTransport> {
    pub base_url: String,
    pub cache_dir: Option<PathBuf>,
    pub mode: Mode,
    /// Ignore cache and fixtures and fetch again (online only).
    pub refetch: bool,
    pub use_fixtures: bool,
    transport: T,
}

impl LmfdbClient<HttpTransport> {
    pub fn new(base_url: impl Into<String>, cache_dir: Option<PathBuf>, mode: Mode) -> Self {
        Self::with_transport(base_url, cache_dir, mode, HttpTransport::default())
    }
}

impl<T: Transport> LmfdbClient<T> {
    pub fn with_transport(
        base_url: impl Into<String>,
        cache_dir: Option<PathBuf>,
        mode: Mode,
        transport: T,
    ) -> Self {
        Self {
            base_url: base_url.into().trim_end_matches('/').to_string(),
            cache_dir,
            mode,
            refetch: false,
            use_fixtures: true,
            transport,
        }
    }

    pub fn transport(&self) -> &T {
        &self.transport
    }

    fn cache_path(&self, level: u64) -> Option<PathBuf> {
        self.cache_dir
            .as_ref()
            .map(|d| d.join("newforms").join(format!("{level}.json")))
    }

    pub fn query_url(&self, level: u64) -> String {
        format!(
            "{}/api/mf_newforms/?level={level}&weight=2&_format=json\
             &_fields=label,level,weight,dim,field_poly,self_twist_discs,is_cm",
            self.base_url
        )
    }

    fn stored(&self, level: u64) -> Result<Option<CacheDocument>, LmfdbError> {
        if let Some(path) = self.cache_path(level) {
            if path.exists() {
                return CacheDocument::decode(&fs::read_to_string(path)?).map(Some);
            }
        }
        if self.use_fixtures {
            if let Some((_, text)) = FIXTURES.iter().find(|(l, _)| *l == level) {
                return CacheDocument::decode(text).map(Some);
            }
        }
        Ok(None)
    }

    /// All weight-2 newforms of the given level.
    pub fn query_newforms(&self, level: u64) -> Result<Vec<NewformRecord>, LmfdbError> {
        if GENUS_ZERO_LEVELS.contains(&level) {
            return Ok(Vec::new());
        }
        if !(self.refetch && self.mode == Mode::Online) {
            if let Some(doc) = self.stored(level)? {
                return Ok(doc.records);
            }
        }
        if self.mode == Mode::Offline {
            return Err(LmfdbError::CacheMiss { level });
        }
        let doc = self.fetch(level)?;
        if let Some(path) = self.cache_path(level) {
            write_atomic(&path, &doc.encode())?;
        }
        Ok(doc.records)
    }

    fn fetch(&self, level: u64) -> Result<CacheDocument, LmfdbError> {
        let mut url = self.query_url(level);
        let mut records = Vec::new();
        loop {
            let (page, next) = decode_api_page(&self.transport.get(&url)?)?;
            records.extend(page);
            match next {
                Some(n) if n.starts_with("http") => url = n,
                Some(n) => url = format!("{}{}", self.base_url, n),
                None => break,
            }
        }
        records.sort_by(|a, b| a.label.cmp(&b.label));
        Ok(CacheDocument {
            query: NewformQuery { level, weight: 2 },
            retrieved_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            note: None,
            records,
        })
    }

    /// Smallest `m ≤ m_max` such that level `m²p` carries a newform with CM
    /// by `Q(√−p)` and coefficient field of degree `target_degree`.
    ///
    /// Offline, levels with no cached or bundled data are skipped and listed
    /// in the result, so `m` is least only among the levels consulted.
    pub fn find_cm_eigenform(
        &self,
        p: u64,
        target_degree: u64,
        m_max: u64,
    ) -> Result<CmEigenform, LmfdbError> {
        let disc = quadfield::fundamental_discriminant(p, Side::Imaginary)
            .map_err(|e| LmfdbError::Field(e.to_string()))?;
        let mut skipped_levels = Vec::new();
        for m in 1..=m_max {
            let level = m * m * p;
            let records = match self.query_newforms(level) {
                Ok(r) => r,
                Err(LmfdbError::CacheMiss { .. }) if self.mode == Mode::Offline => {
                    skipped_levels.push(level);
                    continue;
                }
                Err(e) => return Err(e),
            };
            let mut hits: Vec<NewformRecord> = records
                .into_iter()
                .filter(|r| r.has_cm_by(disc) && r.dimension == target_degree)
                .collect();
            hits.sort_by(|a, b| a.label.cmp(&b.label));
            if let Some(record) = hits.into_iter().next() {
                return Ok(CmEigenform {
                    m,
                    level,
                    record,
                    skipped_levels,
                });
            }
        }
        Err(LmfdbError::NotFound {
            p,
            disc,
            dimension: target_degree,
            m_max,
            skipped_levels,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CmEigenform {
    pub m: u64,
    pub level: u64,
    pub record: NewformRecord,
    pub skipped_levels: Vec<u64>,
}

/// Write to a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), LmfdbError> {
    let dir = path
        .parent()
        .ok_or_else(|| LmfdbError::Io(format!("{} has no parent", path.display())))?;
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path)
        .map_err(|e| LmfdbError::Io(e.to_string()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cell::RefCell;

    /// Transport stub: canned responses by URL substring, counting calls.
    #[derive(Default)]
    struct Stub {
        pages: Vec<(String, String)>,
        calls: RefCell<Vec<String>>,
    }

    impl Transport for Stub {
        fn get(&self, url: &str) -> Result<String, LmfdbError> {
            self.calls.borrow_mut().push(url.to_string());
            self.pages
                .iter()
                .find(|(k, _)| url.contains(k.as_str()))
                .map(|(_, v)| v.clone())
                .ok_or_else(|| LmfdbError::Transport(format!("no route to {url}")))
        }
    }

    const PAGE_63: &str = r#"{"data": [
        {"label": "63.2.z.b", "level": 63, "weight": 2, "dim": 4,
         "field_poly": [9, 0, 8, 0, 1], "self_twist_discs": [-7], "is_cm": true},
        {"label": "63.2.z.a", "level": 63, "weight": 2, "dim": 2,
         "field_poly": [3, 0, 1], "self_twist_discs": [], "is_cm": false}
    ]}"#;

    #[test]
    fn decodes_api_page() {
        let (records, next) = decode_api_page(PAGE_63).unwrap();
        assert!(next.is_none());
        assert_eq!(records.len(), 2);
        assert_eq!(
            records[0].field_poly.as_ref().unwrap().to_coeff_string(),
            "1,0,8,0,9"
        );
        assert!(records[0].is_cm);
    }

    #[test]
    fn decode_errors_name_the_field() {
        let err = decode_api_page(r#"{"data": [{"label": "x", "level": "63"}]}"#).unwrap_err();
        assert!(
            matches!(err, LmfdbError::Decode { ref field, .. } if field == "weight" || field == "level")
        );
        let err = decode_api_page(r#"{"rows": []}"#).unwrap_err();
        assert!(matches!(err, LmfdbError::Decode { ref field, .. } if field == "data"));
        let err = decode_api_page(
            r#"{"data": [{"label": "a", "level": 7, "weight": 2, "dim": 2,
                "field_poly": [1, 0, 1, 1], "self_twist_discs": [], "is_cm": false}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, LmfdbError::InvalidRecord { .. }));
        let err = decode_api_page(
            r#"{"data": [{"label": "a", "level": 7, "weight": 2, "dim": 1,
                "field_poly": [0, 1], "self_twist_discs": [-7], "is_cm": false}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, LmfdbError::InvalidRecord { .. }));
    }

    #[test]
    fn large_coefficients_survive() {
        let (records, _) = decode_api_page(
            r#"{"data": [{"label": "a", "level": 7, "weight": 2, "dim": 2,
                "field_poly": [123456789012345678901234567890, 0, 1],
                "self_twist_discs": [], "is_cm": false}]}"#,
        )
        .unwrap();
        assert_eq!(
            records[0].field_poly.as_ref().unwrap().coeff(0).to_string(),
            "123456789012345678901234567890"
        );
    }

    #[test]
    fn online_fetch_writes_cache_then_reads_it() {
        let dir = tempfile::tempdir().unwrap();
        let stub = Stub {
            pages: vec![("level=63".into(), PAGE_63.into())],
            ..Default::default()
        };
        let mut client =
            LmfdbClient::with_transport("http://stub", Some(dir.path().into()), Mode::Online, stub);
        client.use_fixtures = false;
        let first = client.query_newforms(63).unwrap();
        assert_eq!(client.transport().calls.borrow().len(), 1);
        // sorted by label
        assert_eq!(first[0].label, "63.2.z.a");
        let second = client.query_newforms(63).unwrap();
        assert_eq!(first, second);
        assert_eq!(client.transport().calls.borrow().len(), 1);
        assert!(dir.path().join("newforms/63.json").exists());

        client.refetch = true;
        client.query_newforms(63).unwrap();
        assert_eq!(client.transport().calls.borrow().len(), 2);
    }

    #[test]
    fn follows_next_links() {
        let p1 = r#"{"data": [{"label": "b", "level": 99, "weight": 2, "dim": 1,
            "field_poly": null, "self_twist_discs": [], "is_cm": false}],
            "next": "/api/mf_newforms/?level=99&page=2"}"#;
        let p2 = r#"{"data": [{"label": "a", "level": 99, "weight": 2, "dim": 1,
            "field_poly": null, "self_twist_discs": [], "is_cm": false}]}"#;
        let stub = Stub {
            pages: vec![("page=2".into(), p2.into()), ("level=99".into(), p1.into())],
            ..Default::default()
        };
        let mut client = LmfdbClient::with_transport("http://stub", None, Mode::Online, stub);
        client.use_fixtures = false;
        let records = client.query_newforms(99).unwrap();
        assert_eq!(
            records.iter().map(|r| r.label.as_str()).collect::<Vec<_>>(),
            ["a", "b"]
        );
        assert_eq!(
            client.transport().calls.borrow()[1],
            "http://stub/api/mf_newforms/?level=99&page=2"
        );
    }

    #[test]
    fn offline_never_touches_transport() {
        let client =
            LmfdbClient::with_transport("http://stub", None, Mode::Offline, Stub::default());
        assert_eq!(client.query_newforms(1).unwrap(), vec![]);
        assert_eq!(
            client.query_newforms(28),
            Err(LmfdbError::CacheMiss { level: 28 })
        );
        let mut no_fixtures =
            LmfdbClient::with_transport("http://stub", None, Mode::Offline, Stub::default());
        no_fixtures.use_fixtures = false;
        assert_eq!(
            no_fixtures.query_newforms(63),
            Err(LmfdbError::CacheMiss { level: 63 })
        );
        let _ = client.find_cm_eigenform(7, 6, 10);
        assert!(client.transport().calls.borrow().is_empty());
        assert!(no_fixtures.transport().calls.borrow().is_empty());
    }

    #[test]
    fn transport_errors_propagate_online() {
        let mut client =
            LmfdbClient::with_transport("http://stub", None, Mode::Online, Stub::default());
        client.use_fixtures = false;
        assert!(matches!(
            client.query_newforms(63),
            Err(LmfdbError::Transport(_))
        ));
    }

    #[test]
    fn bundled_fixtures_are_valid() {
        for (level, text) in FIXTURES {
            let doc = CacheDocument::decode(text).unwrap();
            assert_eq!(doc.query.level, *level);
            assert!(doc
                .records
                .iter()
                .all(|r| r.level == *level && r.weight == 2));
        }
    }

    #[test]
    fn find_cm_eigenform_offline() {
        let client =
            LmfdbClient::with_transport("http://stub", None, Mode::Offline, Stub::default());
        let hit = client.find_cm_eigenform(7, 4, 10).unwrap();
        assert_eq!((hit.m, hit.level), (3, 63));
        assert_eq!(
            hit.record.field_poly.as_ref().unwrap().to_coeff_string(),
            "1,0,8,0,9"
        );
        assert_eq!(hit.skipped_levels, vec![28]);

        let hit = client.find_cm_eigenform(7, 8, 10).unwrap();
        assert_eq!((hit.m, hit.level), (5, 175));

        let err = client.find_cm_eigenform(7, 6, 10).unwrap_err();
        assert!(matches!(err, LmfdbError::NotFound { dimension: 6, .. }));
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Replays the checked-in fuzz corpus through the same entry points and
//! invariants as the fuzz targets, on stable.

use std::fs;
use std::path::Path;

use rcf::cli::parse_primes;
use rcf::lmfdb::{decode_api_page, CacheDocument};
use rcf::polyfield::IntPolynomial;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn parse_poly_seeds() {
    let mut parsed = 0;
    for (name, text) in seeds("parse_poly") {
        if let Ok(p) = text.parse::<IntPolynomial>() {
            let again: IntPolynomial = p.to_coeff_string().parse().unwrap();
            assert_eq!(again, p, "{name}");
            parsed += 1;
        }
    }
    assert!(parsed >= 5);
}

#[test]
fn decode_newforms_payload_seeds() {
    for (name, text) in seeds("decode_newforms_payload") {
        let (records, _) = decode_api_page(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        for r in &records {
            r.validate().unwrap();
        }
    }
}

#[test]
fn decode_cache_doc_seeds() {
    for (name, text) in seeds("decode_cache_doc") {
        let doc = CacheDocument::decode(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(CacheDocument::decode(&doc.encode()).unwrap(), doc);
    }
}

#[test]
fn parse_primes_seeds() {
    for (name, text) in seeds("parse_primes") {
        let primes = parse_primes(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(primes.windows(2).all(|w| w[0] < w[1]));
    }
}

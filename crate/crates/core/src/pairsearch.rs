// SPDX-License-Identifier: Apache-2.0

//! Least conductor pairs `(f1, f2)` with
//! `Cl(Q(√p) mod f1) ≅ Cl(Q(√−p) mod f2)` non-trivial, and assembly of
//! full table rows.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::FiniteAbelianGroup;
use crate::lmfdb::{LmfdbClient, LmfdbError, Transport};
use crate::polyfield::{self, IntPolynomial, VerificationReport};
use crate::quadfield::{self, FieldError, QuadraticModulus, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub f1_max: u64,
    pub f2_max: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        Self {
            f1_max: 60,
            f2_max: 20,
        }
    }
}

/// Order in which candidate pairs are tried.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchPolicy {
    /// Ascending `f1`, then ascending `f2`.
    #[default]
    F1ThenF2,
    /// Ascending `f2`, then ascending `f1`.
    F2ThenF1,
    /// Ascending `max(f1, f2)`, ties by `f1` then `f2`.
    MinMax,
}

impl SearchPolicy {
    /// Candidate pairs in trial order, both conductors starting at 2.
    pub fn candidates(self, bounds: SearchBounds) -> Vec<(u64, u64)> {
        let SearchBounds { f1_max, f2_max } = bounds;
        let mut out = Vec::new();
        match self {
            SearchPolicy::F1ThenF2 => {
                for f1 in 2..=f1_max {
                    out.extend((2..=f2_max).map(|f2| (f1, f2)));
                }
            }
            SearchPolicy::F2ThenF1 => {
                for f2 in 2..=f2_max {
                    out.extend((2..=f1_max).map(|f1| (f1, f2)));
                }
            }
            SearchPolicy::MinMax => {
                out.extend((2..=f1_max).flat_map(|f1| (2..=f2_max).map(move |f2| (f1, f2))));
                out.sort_by_key(|&(f1, f2)| (f1.max(f2), f1, f2));
            }
        }
        out
    }

    fn outer(self) -> Side {
        match self {
            SearchPolicy::F2ThenF1 => Side::Imaginary,
            _ => Side::Real,
        }
    }
}

impl fmt::Display for SearchPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchPolicy::F1ThenF2 => "f1-then-f2",
            SearchPolicy::F2ThenF1 => "f2-then-f1",
            SearchPolicy::MinMax => "min-max",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConductorPair {
    pub p: u64,
    pub f1: u64,
    pub f2: u64,
    pub group: FiniteAbelianGroup,
}

/// What one conductor on one side produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ConductorOutcome {
    Group {
        group: FiniteAbelianGroup,
    },
    Trivial,
    Unresolved {
        class_number: u64,
        quotient_order: u64,
    },
}

impl ConductorOutcome {
    fn group(&self) -> Option<&FiniteAbelianGroup> {
        match self {
            ConductorOutcome::Group { group } => Some(group),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub side: Side,
    pub f: u64,
    pub outcome: ConductorOutcome,
}

/// Every conductor evaluated during a search, in evaluation order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanLog {
    pub p: u64,
    pub policy: SearchPolicy,
    pub bounds: SearchBounds,
    pub entries: Vec<ScanEntry>,
}

impl ScanLog {
    pub fn lookup(&self, side: Side, f: u64) -> Option<&ConductorOutcome> {
        self.entries
            .iter()
            .find(|e| e.side == side && e.f == f)
            .map(|e| &e.outcome)
    }

    pub fn unresolved(&self) -> Vec<(Side, u64)> {
        self.entries
            .iter()
            .filter(|e| matches!(e.outcome, ConductorOutcome::Unresolved { .. }))
            .map(|e| (e.side, e.f))
            .collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error(
        "no conductor pair for p = {p} with f1 ≤ {}, f2 ≤ {} ({} conductors unresolved)",
        .log.bounds.f1_max, .log.bounds.f2_max, .log.unresolved().len()
    )]
    Exhausted { p: u64, log: Box<ScanLog> },
    #[error("{side} side, f = {f}: {source}")]
    Side {
        side: Side,
        f: u64,
        #[source]
        source: FieldError,
    },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Lazily evaluated ray class groups for both fields of one prime.
struct Sides {
    p: u64,
    class_groups: [FiniteAbelianGroup; 2],
    cache: BTreeMap<(Side, u64), ConductorOutcome>,
    entries: Vec<ScanEntry>,
}

impl Sides {
    fn new(p: u64) -> Result<Self, FieldError> {
        let cg = |side| {
            quadfield::fundamental_discriminant(p, side).and_then(quadfield::field_class_group)
        };
        Ok(Self {
            p,
            class_groups: [cg(Side::Real)?, cg(Side::Imaginary)?],
            cache: BTreeMap::new(),
            entries: Vec::new(),
        })
    }

    fn outcome(&mut self, side: Side, f: u64) -> Result<ConductorOutcome, SearchError> {
        if let Some(o) = self.cache.get(&(side, f)) {
            return Ok(o.clone());
        }
        let idx = usize::from(side == Side::Imaginary);
        let m = QuadraticModulus::for_prime(self.p, side, f)?;
        let outcome = match quadfield::ray_class_with(&m, self.class_groups[idx].clone()) {
            Ok(c) if c.group.is_trivial() => ConductorOutcome::Trivial,
            Ok(c) => ConductorOutcome::Group { group: c.group },
            Err(FieldError::UnresolvedExtension {
                class_number,
                quotient_order,
                ..
            }) => ConductorOutcome::Unresolved {
                class_number,
                quotient_order,
            },
            Err(source) => return Err(SearchError::Side { side, f, source }),
        };
        self.cache.insert((side, f), outcome.clone());
        self.entries.push(ScanEntry {
            side,
            f,
            outcome: outcome.clone(),
        });
        Ok(outcome)
    }
}

pub fn search_pair(p: u64, bounds: SearchBounds) -> Result<ConductorPair, SearchError> {
    search_pair_logged(p, bounds, SearchPolicy::default()).0
}

/// Runs the search and also returns the scan log, whatever the outcome.
pub fn search_pair_logged(
    p: u64,
    bounds: SearchBounds,
    policy: SearchPolicy,
) -> (Result<ConductorPair, SearchError>, ScanLog) {
    let mut log = ScanLog {
        p,
        policy,
        bounds,
        entries: Vec::new(),
    };
    let mut sides = match Sides::new(p) {
        Ok(s) => s,
        Err(e) => return (Err(e.into()), log),
    };
    let result = scan(&mut sides, policy, bounds);
    log.entries = sides.entries;
    let result = match result {
        Ok(Some(pair)) => Ok(pair),
        Ok(None) => Err(SearchError::Exhausted {
            p,
            log: Box::new(log.clone()),
        }),
        Err(e) => Err(e),
    };
    (result, log)
}

fn scan(
    sides: &mut Sides,
    policy: SearchPolicy,
    bounds: SearchBounds,
) -> Result<Option<ConductorPair>, SearchError> {
    let outer = policy.outer();
    for (f1, f2) in policy.candidates(bounds) {
        let (first, second) = if outer == Side::Real {
            ((Side::Real, f1), (Side::Imaginary, f2))
        } else {
            ((Side::Imaginary, f2), (Side::Real, f1))
        };
        let a = sides.outcome(first.0, first.1)?;
        let Some(ga) = a.group() else { continue };
        let b = sides.outcome(second.0, second.1)?;
        if b.group() == Some(ga) {
            return Ok(Some(ConductorPair {
                p: sides.p,
                f1,
                f2,
                group: ga.clone(),
            }));
        }
    }
    Ok(None)
}

/// Replays the log: every candidate tried before `found` (or every candidate,
/// when `found` is `None`) must be ruled out by logged outcomes alone.
pub fn audit_minimality(log: &ScanLog, found: Option<(u64, u64)>) -> Result<(), String> {
    for (f1, f2) in log.policy.candidates(log.bounds) {
        if Some((f1, f2)) == found {
            return Ok(());
        }
        let real = log.lookup(Side::Real, f1);
        let imag = log.lookup(Side::Imaginary, f2);
        let cleared = match (real, imag) {
            (Some(r), _) if r.group().is_none() => true,
            (_, Some(i)) if i.group().is_none() => true,
            (Some(r), Some(i)) => r != i,
            _ => false,
        };
        if !cleared {
            return Err(format!("candidate ({f1}, {f2}) not ruled out by the log"));
        }
    }
    match found {
        Some(pair) => Err(format!("{pair:?} is not a candidate within the bounds")),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    pub real: FiniteAbelianGroup,
    pub imaginary: FiniteAbelianGroup,
    pub matches: bool,
}

impl PairCheck {
    pub fn group(&self) -> Option<&FiniteAbelianGroup> {
        self.matches.then_some(&self.real)
    }
}

pub fn verify_pair(p: u64, f1: u64, f2: u64) -> Result<PairCheck, SearchError> {
    let side = |side: Side, f: u64| {
        QuadraticModulus::for_prime(p, side, f)
            .and_then(|m| quadfield::ray_class_group(&m))
            .map_err(|source| SearchError::Side { side, f, source })
    };
    let real = side(Side::Real, f1)?;
    let imaginary = side(Side::Imaginary, f2)?;
    Ok(PairCheck {
        matches: quadfield::is_isomorphic(&real, &imaginary),
        real,
        imaginary,
    })
}

#[derive(Debug, Clone)]
pub struct RowOptions {
    pub bounds: SearchBounds,
    pub policy: SearchPolicy,
    pub m_max: u64,
    /// Verify this pair instead of searching.
    pub pair: Option<(u64, u64)>,
}

impl Default for RowOptions {
    fn default() -> Self {
        Self {
            bounds: SearchBounds::default(),
            policy: SearchPolicy::default(),
            m_max: 10,
            pair: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum PairColumn {
    Found {
        f1: u64,
        f2: u64,
        group: FiniteAbelianGroup,
    },
    /// A given pair whose two groups differ.
    NotIsomorphic {
        f1: u64,
        f2: u64,
        real: FiniteAbelianGroup,
        imaginary: FiniteAbelianGroup,
    },
    Exhausted {
        bounds: SearchBounds,
        unresolved: Vec<(Side, u64)>,
    },
    Error {
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum LevelColumn {
    Found {
        m: u64,
        level: u64,
        label: String,
        skipped_levels: Vec<u64>,
    },
    NotFound {
        m_max: u64,
        skipped_levels: Vec<u64>,
    },
    NotAttempted,
    Error {
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum PolyColumn {
    Verified {
        transformed: IntPolynomial,
        report: Box<VerificationReport>,
    },
    /// The record is known but its field polynomial is not.
    Summary {
        degree: u64,
    },
    Unavailable,
    Error {
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub p: u64,
    pub real_class_group: Option<FiniteAbelianGroup>,
    pub imaginary_class_group: Option<FiniteAbelianGroup>,
    pub pair: PairColumn,
    pub ring_class_group: Option<FiniteAbelianGroup>,
    pub level: LevelColumn,
    pub min_poly: PolyColumn,
    /// Column-annotated failures.
    pub errors: Vec<String>,
}

pub fn table_row<T: Transport>(p: u64, client: &LmfdbClient<T>, options: &RowOptions) -> TableRow {
    let mut errors = Vec::new();
    let mut class_group = |side: Side| {
        quadfield::fundamental_discriminant(p, side)
            .and_then(quadfield::field_class_group)
            .map_err(|e| errors.push(format!("class group {side}: {e}")))
            .ok()
    };
    let real_class_group = class_group(Side::Real);
    let imaginary_class_group = class_group(Side::Imaginary);

    let pair = match options.pair {
        Some((f1, f2)) => match verify_pair(p, f1, f2) {
            Ok(c) if c.matches => PairColumn::Found {
                f1,
                f2,
                group: c.real,
            },
            Ok(c) => PairColumn::NotIsomorphic {
                f1,
                f2,
                real: c.real,
                imaginary: c.imaginary,
            },
            Err(e) => PairColumn::Error {
                message: e.to_string(),
            },
        },
        None => match search_pair_logged(p, options.bounds, options.policy).0 {
            Ok(c) => PairColumn::Found {
                f1: c.f1,
                f2: c.f2,
                group: c.group,
            },
            Err(SearchError::Exhausted { log, .. }) => PairColumn::Exhausted {
                bounds: log.bounds,
                unresolved: log.unresolved(),
            },
            Err(e) => PairColumn::Error {
                message: e.to_string(),
            },
        },
    };
    if let PairColumn::Error { message } = &pair {
        errors.push(format!("conductor pair: {message}"));
    }
    let found = match &pair {
        PairColumn::Found { f1, group, .. } => Some((*f1, group.clone())),
        _ => None,
    };
    let ring_class_group = found.as_ref().map(|(_, g)| g.clone());

    let (level, min_poly) = match &found {
        None => (LevelColumn::NotAttempted, PolyColumn::Unavailable),
        Some((f1, group)) => match client.find_cm_eigenform(p, 2 * group.order(), options.m_max) {
            Ok(hit) => {
                let level = LevelColumn::Found {
                    m: hit.m,
                    level: hit.level,
                    label: hit.record.label.clone(),
                    skipped_levels: hit.skipped_levels.clone(),
                };
                let poly = match &hit.record.field_poly {
                    Some(fp) => {
                        let report = polyfield::verify_rcf_polynomial(p, *f1, fp);
                        match &report.transformed {
                            Some(t) => PolyColumn::Verified {
                                transformed: t.clone(),
                                report: Box::new(report),
                            },
                            None => PolyColumn::Error {
                                message: report.errors.join("; "),
                            },
                        }
                    }
                    None => PolyColumn::Summary {
                        degree: hit.record.dimension,
                    },
                };
                (level, poly)
            }
            Err(LmfdbError::NotFound {
                m_max,
                skipped_levels,
                ..
            }) => (
                LevelColumn::NotFound {
                    m_max,
                    skipped_levels,
                },
                PolyColumn::Unavailable,
            ),
            Err(e) => {
                errors.push(format!("level: {e}"));
                (
                    LevelColumn::Error {
                        message: e.to_string(),
                    },
                    PolyColumn::Unavailable,
                )
            }
        },
    };
    if let PolyColumn::Error { message } = &min_poly {
        errors.push(format!("polynomial: {message}"));
    }

    TableRow {
        p,
        real_class_group,
        imaginary_class_group,
        pair,
        ring_class_group,
        level,
        min_poly,
        errors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(inv: &[u64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::from_cyclic_factors(inv)
    }

    #[test]
    fn candidate_orders() {
        let b = SearchBounds {
            f1_max: 3,
            f2_max: 3,
        };
        assert_eq!(
            SearchPolicy::F1ThenF2.candidates(b),
            [(2, 2), (2, 3), (3, 2), (3, 3)]
        );
        assert_eq!(
            SearchPolicy::F2ThenF1.candidates(b),
            [(2, 2), (3, 2), (2, 3), (3, 3)]
        );
        let b = SearchBounds {
            f1_max: 4,
            f2_max: 3,
        };
        assert_eq!(
            SearchPolicy::MinMax.candidates(b),
            [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3)]
        );
    }

    #[test]
    fn search_examples() {
        for (p, f1, f2, inv) in [(7, 3, 4, [2]), (11, 4, 3, [2]), (19, 5, 3, [4])] {
            let pair = search_pair(p, SearchBounds::default()).unwrap();
            assert_eq!((pair.f1, pair.f2, pair.group), (f1, f2, g(&inv)), "p = {p}");
        }
    }

    #[test]
    fn verify_examples() {
        let c = verify_pair(23, 7, 3).unwrap();
        assert_eq!((c.group(), c.matches), (Some(&g(&[6])), true));
        let c = verify_pair(7, 3, 3).unwrap();
        assert_eq!((c.real, c.imaginary, c.matches), (g(&[2]), g(&[4]), false));
        let c = verify_pair(151, 29, 3).unwrap();
        assert_eq!(c.group(), Some(&g(&[28])));
    }

    #[test]
    fn verify_names_the_side() {
        // h(−23) = 3 and |(O/7)*/units| = 24 share the factor 3
        let err = verify_pair(23, 7, 7).unwrap_err();
        assert!(matches!(
            err,
            SearchError::Side {
                side: Side::Imaginary,
                f: 7,
                source: FieldError::UnresolvedExtension { .. }
            }
        ));
    }

    #[test]
    fn log_supports_audit_and_is_deterministic() {
        for policy in [
            SearchPolicy::F1ThenF2,
            SearchPolicy::F2ThenF1,
            SearchPolicy::MinMax,
        ] {
            let (r1, log1) = search_pair_logged(23, SearchBounds::default(), policy);
            let (r2, log2) = search_pair_logged(23, SearchBounds::default(), policy);
            assert_eq!(r1, r2);
            assert_eq!(log1, log2);
            let pair = r1.unwrap();
            audit_minimality(&log1, Some((pair.f1, pair.f2))).unwrap();
            assert!(verify_pair(23, pair.f1, pair.f2).unwrap().matches);
        }
    }

    #[test]
    fn audit_rejects_a_truncated_log() {
        let (r, mut log) = search_pair_logged(11, SearchBounds::default(), SearchPolicy::F1ThenF2);
        let pair = r.unwrap();
        log.entries.retain(|e| e.f != 3);
        assert!(audit_minimality(&log, Some((pair.f1, pair.f2))).is_err());
    }

    #[test]
    fn exhaustion_carries_the_log() {
        let bounds = SearchBounds {
            f1_max: 4,
            f2_max: 3,
        };
        let (r, log) = search_pair_logged(19, bounds, SearchPolicy::F1ThenF2);
        match r {
            Err(SearchError::Exhausted { p: 19, log: inner }) => assert_eq!(*inner, log),
            other => panic!("{other:?}"),
        }
        audit_minimality(&log, None).unwrap();
    }
}

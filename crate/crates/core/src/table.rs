// SPDX-License-Identifier: Apache-2.0

//! Regression harness: computed table rows against the published values in
//! `data/table1.json`.

use serde::{Deserialize, Serialize};

use crate::arith::FiniteAbelianGroup;
use crate::lmfdb::{LmfdbClient, Transport};
use crate::pairsearch::{
    self, LevelColumn, PairColumn, PolyColumn, RowOptions, SearchBounds, SearchError, SearchPolicy,
};

const EXPECTED: &str = include_str!("../data/table1.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedTable {
    pub version: u32,
    pub rows: Vec<ExpectedRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedRow {
    pub p: u64,
    /// The first row for `p`; later rows list alternative pairs.
    pub primary: bool,
    pub real_class_group: Vec<u64>,
    pub imaginary_class_group: Vec<u64>,
    pub pair: ExpectedPair,
    pub ring_class_group: ExpectedGroup,
    pub level: ExpectedLevel,
    pub min_poly: ExpectedPoly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedPair {
    Exact(u64, u64),
    /// `f1 > a`, `f2 > b`.
    Beyond(u64, u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedGroup {
    Exact(Vec<u64>),
    OrderGt(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedLevel {
    M(u64),
    MGt(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExpectedPoly {
    Exact { exact: String },
    Summary { degree: u64, constant: Option<i64> },
    DegreeGt { degree_gt: u64 },
}

pub fn expected_table() -> ExpectedTable {
    serde_json::from_str(EXPECTED).expect("embedded table data is valid")
}

/// The distinct primes of the table, ascending.
pub fn table_primes() -> Vec<u64> {
    let mut ps: Vec<u64> = expected_table().rows.iter().map(|r| r.p).collect();
    ps.dedup();
    ps
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellStatus {
    Match,
    Mismatch,
    /// The table's pair verifies but the search policy picks another one.
    Discrepancy,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub column: String,
    pub expected: String,
    pub computed: String,
    pub status: CellStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowReport {
    pub p: u64,
    pub primary: bool,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub r#match: usize,
    pub mismatch: usize,
    pub discrepancy: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub version: u32,
    pub policy: SearchPolicy,
    pub bounds: SearchBounds,
    pub rows: Vec<RowReport>,
    pub summary: Summary,
}

impl TableReport {
    pub fn cells(&self) -> impl Iterator<Item = (u64, &Cell)> {
        self.rows
            .iter()
            .flat_map(|r| r.cells.iter().map(move |c| (r.p, c)))
    }
}

#[derive(Debug, Clone)]
pub struct HarnessOptions {
    pub bounds: SearchBounds,
    pub policy: SearchPolicy,
    pub m_max: u64,
}

impl Default for HarnessOptions {
    fn default() -> Self {
        Self {
            bounds: SearchBounds::default(),
            policy: SearchPolicy::default(),
            m_max: 10,
        }
    }
}

fn render(inv: &[u64]) -> String {
    FiniteAbelianGroup::from_cyclic_factors(inv).to_string()
}

fn cell(column: &str, expected: String, computed: String, status: CellStatus) -> Cell {
    Cell {
        column: column.into(),
        expected,
        computed,
        status,
        detail: None,
    }
}

impl Cell {
    fn with(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

fn status(ok: bool) -> CellStatus {
    if ok {
        CellStatus::Match
    } else {
        CellStatus::Mismatch
    }
}

pub fn run_table<T: Transport>(
    primes: &[u64],
    client: &LmfdbClient<T>,
    options: &HarnessOptions,
) -> TableReport {
    let table = expected_table();
    let mut rows = Vec::new();
    for &p in primes {
        for expected in table.rows.iter().filter(|r| r.p == p) {
            rows.push(check_row(expected, client, options));
        }
    }
    let mut summary = Summary::default();
    for c in rows.iter().flat_map(|r| &r.cells) {
        match c.status {
            CellStatus::Match => summary.r#match += 1,
            CellStatus::Mismatch => summary.mismatch += 1,
            CellStatus::Discrepancy => summary.discrepancy += 1,
            CellStatus::Skipped => summary.skipped += 1,
        }
    }
    TableReport {
        version: table.version,
        policy: options.policy,
        bounds: options.bounds,
        rows,
        summary,
    }
}

fn group_cell(column: &str, expected: &[u64], computed: Option<&FiniteAbelianGroup>) -> Cell {
    match computed {
        Some(g) => cell(
            column,
            render(expected),
            g.to_string(),
            status(g.invariant_factors() == expected),
        ),
        None => cell(
            column,
            render(expected),
            "error".into(),
            CellStatus::Mismatch,
        ),
    }
}

pub fn check_row<T: Transport>(
    expected: &ExpectedRow,
    client: &LmfdbClient<T>,
    options: &HarnessOptions,
) -> RowReport {
    let p = expected.p;
    let row_options = RowOptions {
        bounds: options.bounds,
        policy: options.policy,
        m_max: options.m_max,
        pair: match expected.pair {
            ExpectedPair::Exact(f1, f2) => Some((f1, f2)),
            ExpectedPair::Beyond(..) => None,
        },
    };
    let row = pairsearch::table_row(p, client, &row_options);
    let mut cells = vec![
        group_cell(
            "class group Q(√p)",
            &expected.real_class_group,
            row.real_class_group.as_ref(),
        ),
        group_cell(
            "class group Q(√−p)",
            &expected.imaginary_class_group,
            row.imaginary_class_group.as_ref(),
        ),
        pair_cell(expected, &row.pair, options),
        ring_cell(expected, &row.pair),
    ];
    let level = level_cell(expected, &row.level, p);
    let poly = poly_cell(expected, &row.min_poly);
    cells.push(level);
    cells.push(poly);
    RowReport {
        p,
        primary: expected.primary,
        cells,
    }
}

fn pair_cell(expected: &ExpectedRow, row_pair: &PairColumn, options: &HarnessOptions) -> Cell {
    let p = expected.p;
    match expected.pair {
        ExpectedPair::Exact(f1, f2) => {
            let exp = format!("({f1}, {f2})");
            let verified = matches!(row_pair, PairColumn::Found { .. });
            if !verified {
                let c = cell(
                    "f1, f2",
                    exp,
                    "does not verify".into(),
                    CellStatus::Mismatch,
                );
                return match row_pair {
                    PairColumn::NotIsomorphic {
                        real, imaginary, ..
                    } => c.with(format!("real side {real}, imaginary side {imaginary}")),
                    PairColumn::Error { message } => c.with(message.clone()),
                    _ => c,
                };
            }
            if !expected.primary {
                return cell("f1, f2", exp.clone(), exp, CellStatus::Match)
                    .with("alternative pair, verified");
            }
            match pairsearch::search_pair_logged(p, options.bounds, options.policy).0 {
                Ok(found) if (found.f1, found.f2) == (f1, f2) => {
                    cell("f1, f2", exp.clone(), exp, CellStatus::Match)
                }
                Ok(found) => cell(
                    "f1, f2",
                    exp,
                    format!("({}, {})", found.f1, found.f2),
                    CellStatus::Discrepancy,
                )
                .with(format!(
                    "policy {} selects ({}, {}) with group {}; the table's pair also verifies",
                    options.policy, found.f1, found.f2, found.group
                )),
                Err(SearchError::Exhausted { .. }) => {
                    cell("f1, f2", exp, "exhausted".into(), CellStatus::Mismatch)
                        .with("table pair verifies but lies outside the search bounds")
                }
                Err(e) => {
                    cell("f1, f2", exp, "error".into(), CellStatus::Mismatch).with(e.to_string())
                }
            }
        }
        ExpectedPair::Beyond(a, b) => {
            let exp = format!("(>{a}, >{b})");
            match row_pair {
                PairColumn::Exhausted { bounds, unresolved } => {
                    cell("f1, f2", exp, "exhausted".into(), CellStatus::Match).with(format!(
                        "no pair with f1 ≤ {}, f2 ≤ {}; {} conductors unresolved",
                        bounds.f1_max,
                        bounds.f2_max,
                        unresolved.len()
                    ))
                }
                PairColumn::Found { f1, f2, group } => cell(
                    "f1, f2",
                    exp,
                    format!("({f1}, {f2})"),
                    status(*f1 > a && *f2 > b),
                )
                .with(format!("isomorphic groups {group} on both sides")),
                PairColumn::NotIsomorphic { .. } => {
                    unreachable!("searched pairs are isomorphic")
                }
                PairColumn::Error { message } => {
                    cell("f1, f2", exp, "error".into(), CellStatus::Mismatch).with(message.clone())
                }
            }
        }
    }
}

fn ring_cell(expected: &ExpectedRow, row_pair: &PairColumn) -> Cell {
    let group = match row_pair {
        PairColumn::Found { group, .. } => Some(group),
        _ => None,
    };
    match (&expected.ring_class_group, group) {
        (ExpectedGroup::Exact(inv), g) => group_cell("ring class group", inv, g),
        (ExpectedGroup::OrderGt(n), Some(g)) => cell(
            "ring class group",
            format!("order >{n}"),
            format!("{g} (order {})", g.order()),
            status(g.order() > *n),
        ),
        (ExpectedGroup::OrderGt(n), None) => cell(
            "ring class group",
            format!("order >{n}"),
            "none".into(),
            CellStatus::Skipped,
        )
        .with("no pair within the search bounds"),
    }
}

fn level_cell(expected: &ExpectedRow, level: &LevelColumn, p: u64) -> Cell {
    let exp = match expected.level {
        ExpectedLevel::M(m) => format!("{}", m * m * p),
        ExpectedLevel::MGt(m) => format!("m >{m}"),
    };
    let skipped_note = |levels: &[u64]| {
        if levels.is_empty() {
            None
        } else {
            Some(format!("levels unavailable offline: {levels:?}"))
        }
    };
    let c = match (expected.level, level) {
        (
            ExpectedLevel::M(m),
            LevelColumn::Found {
                m: found,
                level,
                label,
                skipped_levels,
            },
        ) => {
            let mut c = cell("level", exp, level.to_string(), status(*found == m));
            if *found > m && skipped_levels.contains(&(m * m * p)) {
                c.status = CellStatus::Skipped;
            }
            let mut d = format!("m = {found}, {label}");
            if let Some(n) = skipped_note(skipped_levels) {
                d = format!("{d}; {n}");
            }
            c.with(d)
        }
        (
            ExpectedLevel::M(m),
            LevelColumn::NotFound {
                m_max,
                skipped_levels,
            },
        ) => {
            let st = if skipped_levels.contains(&(m * m * p)) {
                CellStatus::Skipped
            } else {
                CellStatus::Mismatch
            };
            let c = cell("level", exp, format!("none for m ≤ {m_max}"), st);
            match skipped_note(skipped_levels) {
                Some(n) => c.with(n),
                None => c,
            }
        }
        (ExpectedLevel::MGt(bound), LevelColumn::Found { m, level, .. }) => {
            cell("level", exp, level.to_string(), status(*m > bound))
        }
        (
            ExpectedLevel::MGt(_),
            LevelColumn::NotFound {
                m_max,
                skipped_levels,
            },
        ) => {
            let st = if skipped_levels.is_empty() {
                CellStatus::Match
            } else {
                CellStatus::Skipped
            };
            let c = cell("level", exp, format!("none for m ≤ {m_max}"), st);
            match skipped_note(skipped_levels) {
                Some(n) => c.with(n),
                None => c,
            }
        }
        (_, LevelColumn::NotAttempted) => {
            cell("level", exp, "-".into(), CellStatus::Skipped).with("no ring class group")
        }
        (_, LevelColumn::Error { message }) => {
            cell("level", exp, "error".into(), CellStatus::Skipped).with(message.clone())
        }
    };
    c
}

fn poly_cell(expected: &ExpectedRow, column: &PolyColumn) -> Cell {
    let exp = match &expected.min_poly {
        ExpectedPoly::Exact { exact } => exact.clone(),
        ExpectedPoly::Summary { degree, constant } => match constant {
            Some(c) => format!("degree {degree}, constant {c}"),
            None => format!("degree {degree}"),
        },
        ExpectedPoly::DegreeGt { degree_gt } => format!("degree >{degree_gt}"),
    };
    if let ExpectedPoly::DegreeGt { .. } = expected.min_poly {
        return cell("minimal polynomial", exp, "-".into(), CellStatus::Skipped)
            .with("not reproduced");
    }
    match column {
        PolyColumn::Verified {
            transformed,
            report,
        } => {
            let computed = transformed.to_coeff_string();
            let ok = match &expected.min_poly {
                ExpectedPoly::Exact { exact } => *exact == computed,
                ExpectedPoly::Summary { degree, constant } => {
                    transformed.degree() as u64 == *degree
                        && constant.is_none_or(|c| transformed.coeff(0) == c.into())
                }
                ExpectedPoly::DegreeGt { .. } => unreachable!(),
            };
            let c = cell(
                "minimal polynomial",
                exp,
                computed,
                status(ok && report.pass),
            );
            if report.pass {
                c.with("verification report passes")
            } else {
                c.with(format!("verification report fails: {:?}", report.errors))
            }
        }
        PolyColumn::Summary { degree } => cell(
            "minimal polynomial",
            exp,
            format!("degree {degree}"),
            CellStatus::Skipped,
        )
        .with("field polynomial not in the record"),
        PolyColumn::Unavailable => cell("minimal polynomial", exp, "-".into(), CellStatus::Skipped)
            .with("no newform record"),
        PolyColumn::Error { message } => cell(
            "minimal polynomial",
            exp,
            "error".into(),
            CellStatus::Mismatch,
        )
        .with(message.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_table_parses() {
        let t = expected_table();
        assert_eq!(t.version, 1);
        assert_eq!(t.rows.len(), 20);
        assert_eq!(table_primes().len(), 19);
        assert_eq!(
            t.rows[0].min_poly,
            ExpectedPoly::Exact {
                exact: "1,0,-8,0,9".into()
            }
        );
        assert_eq!(t.rows[10].pair, ExpectedPair::Beyond(50, 10));
    }
}

// SPDX-License-Identifier: Apache-2.0

//! The `rcf` command line.
//!
//! Exit codes: 0 success, 1 computational failure or unsupported input,
//! 2 usage error, 3 network or cache error.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::arith::FiniteAbelianGroup;
use crate::lmfdb::{self, LmfdbClient, LmfdbError, Mode};
use crate::pairsearch::{self, SearchBounds, SearchError, SearchPolicy};
use crate::polyfield::{self, IntPolynomial, SubfieldCheck};
use crate::quadfield::{self, QuadraticModulus, Side};
use crate::table::{self, CellStatus, HarnessOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NETWORK: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "rcf",
    version,
    about = "Ray class groups of quadratic fields, conductor pairs and CM coefficient fields"
)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Never use the network (also RCF_OFFLINE=1).
    #[arg(long, global = true, conflicts_with = "online")]
    offline: bool,
    /// Allow network access even if RCF_OFFLINE is set.
    #[arg(long, global = true)]
    online: bool,
    /// Cache directory (also RCF_CACHE_DIR).
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// LMFDB base URL (also RCF_LMFDB_BASE).
    #[arg(long, global = true, value_name = "URL")]
    lmfdb_base: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Class group of Q(√p) or Q(√−p).
    Classgroup {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum)]
        side: SideArg,
    },
    /// Ray class group Cl(K mod f).
    Ray {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long)]
        f: u64,
    },
    /// Class number of the order of conductor f, next to the ray class group.
    Pic {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        f: u64,
    },
    /// Least conductor pair with isomorphic non-trivial groups.
    Pair {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Reproduce the table and compare against the embedded values.
    Table {
        /// Comma-separated primes, or `all`.
        #[arg(long, default_value = "all")]
        primes: String,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value_t = 10)]
        m_max: u64,
    },
    /// Roots x ↦ ix: the polynomial of the imaginary parts.
    Transform {
        /// Coefficients, highest degree first, e.g. "1,0,8,0,9".
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Full pipeline for one prime: pair, CM newform, transform, subfield check.
    Verify {
        #[arg(long)]
        p: u64,
        /// Use this real conductor instead of searching.
        #[arg(long)]
        f1: Option<u64>,
        /// Check this coefficient-field polynomial instead of fetching one.
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        #[arg(long, default_value_t = 10)]
        m_max: u64,
    },
    /// Download the newforms of one level into the cache.
    Fetch {
        #[arg(long)]
        level: u64,
    },
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, default_value_t = 60)]
    f1_max: u64,
    #[arg(long, default_value_t = 20)]
    f2_max: u64,
    #[arg(long, value_enum, default_value_t = PolicyArg::F1ThenF2)]
    policy: PolicyArg,
}

impl SearchArgs {
    fn bounds(&self) -> SearchBounds {
        SearchBounds {
            f1_max: self.f1_max,
            f2_max: self.f2_max,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Real,
    Imaginary,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Real => Side::Real,
            SideArg::Imaginary => Side::Imaginary,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolicyArg {
    F1ThenF2,
    F2ThenF1,
    MinMax,
}

impl From<PolicyArg> for SearchPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::F1ThenF2 => SearchPolicy::F1ThenF2,
            PolicyArg::F2ThenF1 => SearchPolicy::F2ThenF1,
            PolicyArg::MinMax => SearchPolicy::MinMax,
        }
    }
}

/// Resolved configuration: flags, then environment, then defaults.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub cache_dir: PathBuf,
    pub base_url: String,
    pub mode: Mode,
}

impl Config {
    fn resolve(cli: &Cli, env: &HashMap<String, String>) -> Config {
        let cache_dir = cli
            .cache_dir
            .clone()
            .or_else(|| env.get("RCF_CACHE_DIR").map(PathBuf::from))
            .unwrap_or_else(lmfdb::default_cache_dir);
        let base_url = cli
            .lmfdb_base
            .clone()
            .or_else(|| env.get("RCF_LMFDB_BASE").cloned())
            .unwrap_or_else(|| lmfdb::DEFAULT_BASE_URL.to_string());
        let env_offline = env
            .get("RCF_OFFLINE")
            .is_some_and(|v| matches!(v.as_str(), "1" | "true" | "yes"));
        let mode = if cli.offline || (env_offline && !cli.online) {
            Mode::Offline
        } else {
            Mode::Online
        };
        Config {
            cache_dir,
            base_url,
            mode,
        }
    }

    fn client(&self) -> LmfdbClient {
        LmfdbClient::new(&self.base_url, Some(self.cache_dir.clone()), self.mode)
    }
}

/// A failure tagged with the pipeline stage that produced it.
struct Failure {
    stage: &'static str,
    message: String,
    code: i32,
}

impl Failure {
    fn new(stage: &'static str, e: impl ToString) -> Self {
        Self {
            stage,
            message: e.to_string(),
            code: EXIT_FAILURE,
        }
    }

    fn lmfdb(e: LmfdbError) -> Self {
        let code = match e {
            LmfdbError::Transport(_) | LmfdbError::CacheMiss { .. } | LmfdbError::Io(_) => {
                EXIT_NETWORK
            }
            LmfdbError::NotFound {
                ref skipped_levels, ..
            } if !skipped_levels.is_empty() => EXIT_NETWORK,
            _ => EXIT_FAILURE,
        };
        Self {
            stage: "lmfdb",
            message: e.to_string(),
            code,
        }
    }
}

/// Output of one command: a JSON document, its text rendering and an exit code.
struct Output {
    json: Value,
    text: String,
    code: i32,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Self {
            json,
            text,
            code: EXIT_OK,
        }
    }
}

pub fn run<I, S>(args: I, env: &HashMap<String, String>) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                CommandResult {
                    exit_code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                CommandResult {
                    exit_code: EXIT_OK,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    let config = Config::resolve(&cli, env);
    match dispatch(&cli, &config) {
        Ok(out) => CommandResult {
            exit_code: out.code,
            stdout: if cli.json {
                let mut s = serde_json::to_string_pretty(&out.json).expect("values serialize");
                s.push('\n');
                s
            } else {
                out.text
            },
            stderr: String::new(),
        },
        Err(f) => CommandResult {
            exit_code: f.code,
            stdout: String::new(),
            stderr: format!("rcf: {}: {}\n", f.stage, f.message),
        },
    }
}

fn invariants(g: &FiniteAbelianGroup) -> Value {
    json!(g.invariant_factors())
}

fn dispatch(cli: &Cli, config: &Config) -> Result<Output, Failure> {
    match &cli.command {
        Command::Classgroup { p, side } => {
            let side = Side::from(*side);
            let d = quadfield::fundamental_discriminant(*p, side)
                .map_err(|e| Failure::new("input", e))?;
            let g = quadfield::field_class_group(d).map_err(|e| Failure::new("class group", e))?;
            Ok(Output::ok(
                json!({"p": p, "side": side, "discriminant": d,
                       "invariants": invariants(&g), "order": g.order()}),
                format!("{g}\n"),
            ))
        }
        Command::Ray { p, side, f } => {
            let side = Side::from(*side);
            let m =
                QuadraticModulus::for_prime(*p, side, *f).map_err(|e| Failure::new("input", e))?;
            let c = quadfield::ray_class_computation(&m)
                .map_err(|e| Failure::new("ray class group", e))?;
            Ok(Output::ok(
                json!({"p": p, "side": side, "discriminant": m.d_k, "f": f,
                       "invariants": invariants(&c.group), "order": c.group.order(),
                       "class_number": c.class_group.order(),
                       "residue_unit_order": c.residue_unit_order,
                       "unit_image_order": c.unit_image_order}),
                format!("{}\n", c.group),
            ))
        }
        Command::Pic { d, f } => {
            let m = QuadraticModulus::new(*d, *f).map_err(|e| Failure::new("input", e))?;
            let h = quadfield::order_class_number(*d, *f)
                .map_err(|e| Failure::new("order class number", e))?;
            let ray = quadfield::ray_class_group(&m);
            let (ray_json, ray_text) = match &ray {
                Ok(g) => (invariants(g), g.to_string()),
                Err(e) => (Value::Null, format!("unavailable ({e})")),
            };
            Ok(Output::ok(
                json!({"discriminant": d, "f": f, "class_number": h,
                       "ray_class_group": ray_json}),
                format!("h(O_f) = {h}\nCl(K mod f) = {ray_text}\n"),
            ))
        }
        Command::Pair { p, search } => {
            let (result, log) =
                pairsearch::search_pair_logged(*p, search.bounds(), search.policy.into());
            match result {
                Ok(c) => Ok(Output::ok(
                    json!({"f1": c.f1, "f2": c.f2, "invariants": invariants(&c.group)}),
                    format!("f1 = {}, f2 = {}, group {}\n", c.f1, c.f2, c.group),
                )),
                Err(SearchError::Exhausted { .. }) => {
                    let unresolved = log.unresolved();
                    let mut text = format!(
                        "no pair with f1 ≤ {}, f2 ≤ {} (policy {})\n",
                        log.bounds.f1_max, log.bounds.f2_max, log.policy
                    );
                    for (side, f) in &unresolved {
                        let _ = writeln!(text, "  unresolved: {side} f = {f}");
                    }
                    Ok(Output {
                        json: json!({"exhausted": log.bounds, "policy": log.policy,
                                     "unresolved": unresolved}),
                        text,
                        code: EXIT_FAILURE,
                    })
                }
                Err(e) => Err(Failure::new("pair search", e)),
            }
        }
        Command::Table {
            primes,
            search,
            m_max,
        } => {
            let primes = parse_primes(primes).map_err(|e| Failure {
                stage: "input",
                message: e,
                code: EXIT_USAGE,
            })?;
            let options = HarnessOptions {
                bounds: search.bounds(),
                policy: search.policy.into(),
                m_max: *m_max,
            };
            let report = table::run_table(&primes, &config.client(), &options);
            let mut text = String::new();
            for row in &report.rows {
                let tag = if row.primary { "" } else { " (alternative)" };
                let _ = writeln!(text, "p = {}{tag}", row.p);
                for c in &row.cells {
                    let status = serde_json::to_value(c.status).expect("status serializes");
                    let _ = write!(
                        text,
                        "  {:<20} {:<12} expected {}, computed {}",
                        c.column,
                        status.as_str().unwrap_or_default(),
                        c.expected,
                        c.computed
                    );
                    if let Some(d) = &c.detail {
                        let _ = write!(text, " ({d})");
                    }
                    text.push('\n');
                }
            }
            let s = &report.summary;
            let _ = writeln!(
                text,
                "{} match, {} mismatch, {} discrepancy, {} skipped",
                s.r#match, s.mismatch, s.discrepancy, s.skipped
            );
            let code = if report
                .cells()
                .any(|(_, c)| c.status == CellStatus::Mismatch)
            {
                EXIT_FAILURE
            } else {
                EXIT_OK
            };
            Ok(Output {
                json: serde_json::to_value(&report).expect("report serializes"),
                text,
                code,
            })
        }
        Command::Transform { poly } => {
            let input: IntPolynomial = poly.parse().map_err(|e| Failure {
                stage: "input",
                message: format!("{e}"),
                code: EXIT_USAGE,
            })?;
            let t = polyfield::substitute_ix(&input).map_err(|e| Failure::new("transform", e))?;
            let real_roots = polyfield::real_root_count(&polyfield::squarefree_part(&t))
                .map_err(|e| Failure::new("root count", e))?;
            let totally_real =
                polyfield::is_totally_real(&t).map_err(|e| Failure::new("root count", e))?;
            Ok(Output::ok(
                json!({"input": input.to_coeff_string(), "transformed": t.to_coeff_string(),
                       "totally_real": totally_real, "real_roots": real_roots}),
                format!("{}\ntotally_real = {totally_real}\n", t.to_coeff_string()),
            ))
        }
        Command::Verify { p, f1, poly, m_max } => verify(config, *p, *f1, poly.as_deref(), *m_max),
        Command::Fetch { level } => {
            if config.mode == Mode::Offline {
                return Err(Failure {
                    stage: "fetch",
                    message: "offline mode is set".into(),
                    code: EXIT_NETWORK,
                });
            }
            let mut client = config.client();
            client.refetch = true;
            client.use_fixtures = false;
            let records = client.query_newforms(*level).map_err(Failure::lmfdb)?;
            let path = config
                .cache_dir
                .join("newforms")
                .join(format!("{level}.json"));
            Ok(Output::ok(
                json!({"level": level, "records": records.len(),
                       "cache_file": path.display().to_string()}),
                format!(
                    "{} newforms at level {level} -> {}\n",
                    records.len(),
                    path.display()
                ),
            ))
        }
    }
}

fn verify(
    config: &Config,
    p: u64,
    f1: Option<u64>,
    poly: Option<&str>,
    m_max: u64,
) -> Result<Output, Failure> {
    let f1 = match f1 {
        Some(f) => f,
        None => {
            pairsearch::search_pair(p, SearchBounds::default())
                .map_err(|e| Failure::new("pair search", e))?
                .f1
        }
    };
    let m = QuadraticModulus::for_prime(p, Side::Real, f1).map_err(|e| Failure::new("input", e))?;
    let group = quadfield::ray_class_group(&m).map_err(|e| Failure::new("ray class group", e))?;
    let (field_poly, source) = match poly {
        Some(text) => (
            text.parse::<IntPolynomial>().map_err(|e| Failure {
                stage: "input",
                message: e.to_string(),
                code: EXIT_USAGE,
            })?,
            json!({"kind": "argument"}),
        ),
        None => {
            let hit = config
                .client()
                .find_cm_eigenform(p, 2 * group.order(), m_max)
                .map_err(Failure::lmfdb)?;
            let fp = hit.record.field_poly.clone().ok_or_else(|| Failure {
                stage: "lmfdb",
                message: format!(
                    "record {} carries no field polynomial; refresh level {} with `rcf fetch`",
                    hit.record.label, hit.level
                ),
                code: EXIT_NETWORK,
            })?;
            (
                fp,
                json!({"kind": "lmfdb", "label": hit.record.label, "level": hit.level,
                       "m": hit.m, "skipped_levels": hit.skipped_levels}),
            )
        }
    };
    let report = polyfield::verify_rcf_polynomial(p, f1, &field_poly);
    let mut text = String::new();
    let _ = writeln!(text, "p = {p}, f1 = {f1}, Cl(Q(√p) mod f1) = {group}");
    if let Some(label) = source.get("label").and_then(Value::as_str) {
        let _ = writeln!(text, "newform {label} at level {}", source["level"]);
    }
    let _ = writeln!(text, "coefficient field: {}", report.input);
    if let Some(t) = &report.transformed {
        let _ = writeln!(text, "imaginary parts:   {t}");
    }
    if let Some(n) = report.real_roots {
        let _ = writeln!(text, "real roots: {n} of {}", field_poly.degree());
    }
    let subfield = match &report.subfield {
        SubfieldCheck::Contains => format!("contains Q(√{p})"),
        SubfieldCheck::Absent => format!("does not contain Q(√{p})"),
        SubfieldCheck::Unsupported(why) => format!("not checked: {why}"),
        SubfieldCheck::Failed(why) => format!("check failed: {why}"),
    };
    let _ = writeln!(text, "subfield: {subfield}");
    for e in &report.errors {
        let _ = writeln!(text, "error: {e}");
    }
    let _ = writeln!(text, "{}", if report.pass { "PASS" } else { "FAIL" });
    let mut json = serde_json::to_value(&report).expect("report serializes");
    json["source"] = source;
    Ok(Output {
        json,
        text,
        code: if report.pass { EXIT_OK } else { EXIT_FAILURE },
    })
}

/// `all`, or a comma-separated list of table primes.
pub fn parse_primes(text: &str) -> Result<Vec<u64>, String> {
    let known = table::table_primes();
    if text.trim() == "all" {
        return Ok(known);
    }
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let p: u64 = part
            .parse()
            .map_err(|_| format!("`{part}` is not a prime number"))?;
        if !known.contains(&p) {
            return Err(format!("{p} is not a table prime"));
        }
        if !out.contains(&p) {
            out.push(p);
        }
    }
    if out.is_empty() {
        return Err("no primes given".into());
    }
    out.sort_unstable();
    Ok(out)
}

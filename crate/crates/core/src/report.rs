//! The result document printed by the CLI.
//!
//! Fields are serialized in declaration order and absent sections are
//! omitted, so the JSON form is stable enough for golden files. Timings are
//! integer microseconds to keep the round trip exact.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::ConditionReport;
use crate::design::{Design, ValidationReport};
use crate::ec::{EcFailure, EcResult, Xi};
use crate::graph::DegreeStats;
use crate::suite::SuiteReport;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignSummary {
    pub v: usize,
    pub b: usize,
    /// Distinct block sizes, ascending.
    pub block_sizes: Vec<usize>,
    pub simple: bool,
    pub one_cover_free: bool,
}

impl DesignSummary {
    pub fn of(d: &Design) -> Self {
        let mut block_sizes: Vec<usize> = d.blocks().iter().map(Vec::len).collect();
        block_sizes.sort_unstable();
        block_sizes.dedup();
        DesignSummary {
            v: d.v(),
            b: d.b(),
            block_sizes,
            simple: d.is_simple(),
            one_cover_free: d.is_one_cover_free(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    /// `big` or `sbig`.
    pub mode: String,
    /// Admitted intersection sizes.
    pub s: Vec<usize>,
    pub vertices: usize,
    pub edges: usize,
    pub stats: DegreeStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub written_to: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EcSection {
    pub n: usize,
    pub result: EcResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiSection {
    pub cap: usize,
    pub result: Xi,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominatingSection {
    /// Block indices in normalized order.
    pub pair: Option<(usize, usize)>,
    pub blocks: Option<(Vec<usize>, Vec<usize>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsystemSection {
    pub w: usize,
    pub k: usize,
    pub lambda: u64,
    pub points: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationSection {
    /// `t-design` or `pbd`.
    pub kind: String,
    pub t: usize,
    pub k_set: Vec<usize>,
    pub lambda: u64,
    pub report: ValidationReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub design: Option<DesignSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks_file: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ec: Option<EcSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<XiSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dominating: Option<DominatingSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subsystem: Option<SubsystemSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conditions: Option<ConditionReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<SuiteReport>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub timings_us: BTreeMap<String, u64>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Report {
            command: command.to_string(),
            seed,
            source: None,
            design: None,
            blocks_file: None,
            validation: None,
            graph: None,
            ec: None,
            xi: None,
            dominating: None,
            subsystem: None,
            conditions: None,
            suite: None,
            timings_us: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Human-readable rendering. Timings are left out except in suite
    /// output, so single-command text is reproducible.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        line(w, format_args!("command: {}", self.command));
        line(w, format_args!("seed: {}", self.seed));
        if let Some(src) = &self.source {
            line(w, format_args!("source: {src}"));
        }
        if let Some(d) = &self.design {
            line(
                w,
                format_args!(
                    "design: v = {}, b = {}, block sizes {}, simple: {}, 1-cover-free: {}",
                    d.v,
                    d.b,
                    set(&d.block_sizes),
                    yes_no(d.simple),
                    yes_no(d.one_cover_free)
                ),
            );
        }
        if let Some(val) = &self.validation {
            let params = if val.kind == "pbd" {
                format!("({}, {}, {})-PBD", self.design.as_ref().map_or(0, |d| d.v), set(&val.k_set), val.lambda)
            } else {
                format!(
                    "{}-({}, {}, {}) design",
                    val.t,
                    self.design.as_ref().map_or(0, |d| d.v),
                    val.k_set[0],
                    val.lambda
                )
            };
            let rep = &val.report;
            line(w, format_args!("validation: {} as a {params}", if rep.ok { "valid" } else { "invalid" }));
            for viol in &rep.violations {
                line(
                    w,
                    format_args!(
                        "  {:?} {}: observed {}, expected {}",
                        viol.kind,
                        set(&viol.subset),
                        viol.observed,
                        viol.expected
                    ),
                );
            }
            if rep.truncated {
                line(w, format_args!("  (more violations omitted)"));
            }
            for (key, value) in &rep.derived {
                line(w, format_args!("  {key} = {value}"));
            }
            if let Some(bounds) = rep.replication_within_bounds {
                line(w, format_args!("  replication within bounds: {}", yes_no(bounds)));
            }
        }
        if let Some(g) = &self.graph {
            let label = if g.mode == "big" { "BIG".to_string() } else { format!("{}-BIG", set(&g.s)) };
            line(
                w,
                format_args!(
                    "graph: {label}, {} vertices, {} edges, degree {}..{}, {}",
                    g.vertices,
                    g.edges,
                    g.stats.min_degree,
                    g.stats.max_degree,
                    if g.stats.is_connected { "connected" } else { "disconnected" }
                ),
            );
            if let Some(path) = &g.written_to {
                line(w, format_args!("edge list written to {path}"));
            }
        }
        if let Some(ec) = &self.ec {
            match &ec.result.witness_failure {
                None => line(w, format_args!("{}-e.c.: holds ({})", ec.n, splits(ec.result.checked_pairs))),
                Some(f) => line(
                    w,
                    format_args!("{}-e.c.: fails at {} ({})", ec.n, split(f), splits(ec.result.checked_pairs)),
                ),
            }
        }
        if let Some(x) = &self.xi {
            let r = &x.result;
            if r.at_least {
                line(w, format_args!("xi: at least {} (cap {})", r.value, x.cap));
            } else {
                line(w, format_args!("xi: {}", r.value));
            }
            if let Some(f) = &r.next_failure {
                line(w, format_args!("not {}-e.c.: fails at {}", r.value + 1, split(f)));
            }
        }
        if let Some(dom) = &self.dominating {
            match (&dom.pair, &dom.blocks) {
                (Some((i, j)), Some((bi, bj))) => line(
                    w,
                    format_args!("dominating pair: blocks {i} {} and {j} {}", set(bi), set(bj)),
                ),
                _ => line(w, format_args!("dominating pair: none")),
            }
        }
        if let Some(sub) = &self.subsystem {
            let target = format!("2-({}, {}, {})", sub.w, sub.k, sub.lambda);
            match &sub.points {
                Some(p) => line(w, format_args!("sub-design {target} on {}", set(p))),
                None => line(w, format_args!("sub-design {target}: none")),
            }
        }
        if let Some(c) = &self.conditions {
            line(w, format_args!("conditions for v = {}, k = {}, lambda = {}, n = {}:", c.v, c.k, c.lambda, c.n));
            for rec in &c.conditions {
                line(
                    w,
                    format_args!(
                        "  {:<28} {} {} {}  {}",
                        rec.name,
                        rec.lhs,
                        rec.relation,
                        rec.rhs,
                        if rec.satisfied { "ok" } else { "violated" }
                    ),
                );
            }
        }
        if let Some(s) = &self.suite {
            for c in &s.checks {
                line(
                    w,
                    format_args!(
                        "{} [{}] {} ({:.1} ms)",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.id,
                        c.claim,
                        c.elapsed_us as f64 / 1000.0
                    ),
                );
                for d in &c.details {
                    line(w, format_args!("    {d}"));
                }
            }
            let passed = s.checks.iter().filter(|c| c.passed).count();
            line(w, format_args!("{passed}/{} checks passed", s.checks.len()));
        }
        out
    }
}

fn line(out: &mut String, args: std::fmt::Arguments<'_>) {
    out.write_fmt(args).expect("writing to a String");
    out.push('\n');
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn set(xs: &[usize]) -> String {
    let inner: Vec<String> = xs.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(", "))
}

fn splits(n: u64) -> String {
    format!("{n} split{} checked", if n == 1 { "" } else { "s" })
}

fn split(f: &EcFailure) -> String {
    format!("A = {}, B = {}", set(&f.a), set(&f.b))
}

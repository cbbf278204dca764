//! Reproducible example constructions with their expected numbers.
//!
//! Each example builds its representation from scratch, computes the
//! invariants and records every comparison as a [`Check`]. A failed check
//! is data, not an error: errors are reserved for constructions that could
//! not be carried out at all.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::cosets::DEFAULT_MAX_COSETS;
use crate::euler::{
    euler_number, EulerError, RepresentationAssignment, RELATOR_TOLERANCE, ROUNDING_THRESHOLD,
};
use crate::gate::{decide, GateError, GateInput, GateReport, Verdict};
use crate::isom2::Tolerance;
use crate::polygon::{
    build_regular, build_with_cone_multiple, PolygonError, RegularPolygonStructure,
};
use crate::surfgrp::{
    mk_doubling, mk_handle_attach, mk_pinch, scan_classification, slit_word, GroupWord, HomError,
    Letter, ScanOptions,
};

pub const EXAMPLE_NAMES: [&str; 6] = [
    "octagon-complete",
    "octagon-right",
    "tan",
    "doubling",
    "handle-attach",
    "ex4-scan",
];

/// Longest word length searched for a non-hyperbolic witness.
pub const WITNESS_SEARCH_LIMIT: usize = 12;

const RAW_TOLERANCE: f64 = 1e-6;
const AREA_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SuiteError {
    #[error("unknown example {0:?}; expected one of {names}", names = EXAMPLE_NAMES.join(", "))]
    UnknownExample(String),
    #[error("{0}")]
    BadParameters(String),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error(transparent)]
    Euler(#[from] EulerError),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Gate(#[from] GateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExampleParams {
    pub genus: Option<usize>,
    pub handles: Option<usize>,
    pub max_len: usize,
    pub max_cosets: usize,
    pub tolerance: Tolerance,
}

impl Default for ExampleParams {
    fn default() -> Self {
        Self {
            genus: None,
            handles: None,
            max_len: 6,
            max_cosets: DEFAULT_MAX_COSETS,
            tolerance: Tolerance::default(),
        }
    }
}

impl ExampleParams {
    pub fn with_max_len(mut self, max_len: usize) -> Self {
        self.max_len = max_len;
        self
    }
}

/// One expected-versus-actual comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl Check {
    fn eq<T: PartialEq + ToString>(name: &str, expected: T, actual: T) -> Self {
        Self {
            name: name.to_string(),
            pass: expected == actual,
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    fn field<T: PartialEq + ToString>(name: &str, expected: T, actual: Option<T>) -> Self {
        Self {
            name: name.to_string(),
            pass: actual.as_ref() == Some(&expected),
            expected: expected.to_string(),
            actual: actual.map_or_else(|| "-".to_string(), |a| a.to_string()),
        }
    }

    fn close(name: &str, expected: f64, actual: f64, tol: f64) -> Self {
        Self {
            name: name.to_string(),
            pass: (expected - actual).abs() <= tol,
            expected: format!("{expected} ± {tol:e}"),
            actual: actual.to_string(),
        }
    }

    fn holds(name: &str, pass: bool, actual: impl ToString) -> Self {
        Self {
            name: name.to_string(),
            expected: "true".to_string(),
            actual: actual.to_string(),
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleReport {
    pub name: String,
    pub values: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub gate: Option<GateReport>,
    /// Representations built along the way, for property checks.
    #[serde(skip)]
    pub representations: Vec<RepresentationAssignment>,
}

impl ExampleReport {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            values: BTreeMap::new(),
            checks: Vec::new(),
            gate: None,
            representations: Vec::new(),
        }
    }

    fn set(&mut self, key: &str, value: Value) {
        self.values.insert(key.to_string(), value);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Tolerances in force for a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceSettings {
    pub classify: f64,
    pub identity: f64,
    pub relator: f64,
    pub rounding: f64,
}

impl From<Tolerance> for ToleranceSettings {
    fn from(t: Tolerance) -> Self {
        Self {
            classify: t.classify,
            identity: t.identity,
            relator: RELATOR_TOLERANCE,
            rounding: ROUNDING_THRESHOLD,
        }
    }
}

/// Machine-readable record of one command invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub tolerances: ToleranceSettings,
    pub results: Value,
    pub wall_time_seconds: f64,
}

fn holonomy(s: &RegularPolygonStructure) -> Result<RepresentationAssignment, SuiteError> {
    Ok(s.holonomy_assignment()?)
}

fn polygon_example(
    name: &str,
    genus: usize,
    multiple: u32,
    params: &ExampleParams,
) -> Result<ExampleReport, SuiteError> {
    let mut out = ExampleReport::new(name);
    let s = build_with_cone_multiple(genus, multiple)?;
    let rho = holonomy(&s)?;
    let eu = euler_number(&rho)?;
    let chi = s.euler_characteristic();
    let k = s.cone_data().unwrap_or(0) as i64;
    out.set("genus", json!(genus));
    out.set("total_angle", json!(s.total_angle()));
    out.set("cone_order", json!(k));
    out.set("euler", json!(eu.value));
    out.set("euler_raw", json!(eu.raw));
    out.set("area", json!(s.area()));
    out.set("circumradius", json!(s.circumradius()));
    out.checks
        .push(Check::eq("euler = chi + k", chi + k, eu.value));
    out.checks.push(Check::close(
        "raw near integer",
        eu.value as f64,
        eu.raw,
        RAW_TOLERANCE,
    ));
    out.checks.push(Check::close(
        "area = -2pi(chi + k)",
        -2.0 * PI * (chi + k) as f64,
        s.area(),
        AREA_TOLERANCE,
    ));
    let gb = s.check_gauss_bonnet();
    out.checks
        .push(Check::holds("gauss-bonnet", gb.holds, gb.detail));
    let ei = s.check_euler_identity();
    out.checks
        .push(Check::holds("euler identity", ei.holds, ei.detail));
    if multiple == 1 {
        let scan = scan_classification(
            &rho,
            &ScanOptions::new(params.max_len).with_tolerance(params.tolerance),
        );
        out.set("scan_words", json!(scan.counts.total()));
        out.checks.push(Check::holds(
            "purely hyperbolic and faithful at budget",
            scan.is_purely_hyperbolic_and_faithful(),
            format!(
                "{} non-hyperbolic, {} kernel witnesses up to length {}",
                scan.non_hyperbolic_count + scan.ambiguous_count,
                scan.kernel_witness_count,
                params.max_len
            ),
        ));
    }
    out.representations.push(rho);
    Ok(out)
}

fn gate_checks(out: &mut ExampleReport, report: &GateReport, expected: Verdict) {
    out.checks.push(Check::eq(
        "gate verdict",
        expected.as_str(),
        report.verdict.as_str(),
    ));
    if let (Some(eu), Some(d), Some(g)) =
        (report.euler, report.canonical_degree, report.quotient_genus)
    {
        out.checks.push(Check::eq(
            "eu = degree * chi(quotient)",
            eu,
            d * (2 - 2 * g as i64),
        ));
    }
}

fn tan(params: &ExampleParams) -> Result<ExampleReport, SuiteError> {
    let g = params.genus.unwrap_or(3);
    let h = params.handles.unwrap_or(1);
    if h == 0 || g < h + 2 {
        return Err(SuiteError::BadParameters(format!(
            "tan needs handles >= 1 and genus - handles >= 2, got genus {g}, handles {h}"
        )));
    }
    let mut out = ExampleReport::new("tan");
    let base = holonomy(&build_regular(g - h, 2.0 * PI)?)?;
    let f = mk_pinch(g, g - h)?;
    let rho = base.pull_back(&f)?;
    let eu = euler_number(&rho)?;
    let expected = 2 + 2 * h as i64 - 2 * g as i64;
    out.set("genus", json!(g));
    out.set("handles", json!(h));
    out.set("euler", json!(eu.value));
    out.set("euler_raw", json!(eu.raw));
    out.checks
        .push(Check::eq("euler = 2 + 2h - 2g", expected, eu.value));

    let short = scan_classification(&rho, &ScanOptions::new(1));
    let killed: Vec<String> = (2 * (g - h)..2 * g)
        .flat_map(|i| [Letter::new(i, false), Letter::new(i, true)])
        .map(|l| l.to_string())
        .collect();
    let found: Vec<String> = short
        .kernel_witnesses
        .iter()
        .map(|w| w.to_string())
        .collect();
    out.set("kernel_witnesses_length_1", json!(found));
    out.checks.push(Check::eq(
        "kernel witnesses at length 1",
        killed.join(" "),
        found.join(" "),
    ));

    let report = decide(
        &GateInput::new(base, f, params.max_len)?
            .with_max_cosets(params.max_cosets)
            .with_tolerance(params.tolerance),
    );
    gate_checks(&mut out, &report, Verdict::NotGeometrisablePinch);
    out.checks
        .push(Check::field("canonical degree", 1, report.canonical_degree));
    out.checks
        .push(Check::field("image index", 1, report.image_index));
    out.checks.push(Check::field(
        "quotient genus",
        (g - h) as u64,
        report.quotient_genus,
    ));
    out.gate = Some(report);
    out.representations.push(rho);
    Ok(out)
}

fn doubling(params: &ExampleParams) -> Result<ExampleReport, SuiteError> {
    let g = params.genus.unwrap_or(2);
    let mut out = ExampleReport::new("doubling");
    let base = holonomy(&build_regular(g, 2.0 * PI)?)?;
    let base_eu = euler_number(&base)?.value;
    let f = mk_doubling(g)?;
    let rho = base.pull_back(&f)?;
    let eu = euler_number(&rho)?;
    out.set("base_genus", json!(g));
    out.set("source_genus", json!(2 * g));
    out.set("euler", json!(eu.value));
    out.set("euler_raw", json!(eu.raw));
    out.checks
        .push(Check::eq("euler = 2 * eu(base)", 2 * base_eu, eu.value));

    let c = slit_word();
    let moved = f.apply(&GroupWord::letter(Letter::a(g + 1)));
    let expected = c.conjugate(&GroupWord::letter(Letter::a(1)));
    out.checks.push(Check::eq(
        "a_(g+1) -> c a1 c^-1",
        expected.to_string(),
        moved.to_string(),
    ));

    let report = decide(
        &GateInput::new(base, f, params.max_len)?
            .with_max_cosets(params.max_cosets)
            .with_tolerance(params.tolerance),
    );
    gate_checks(&mut out, &report, Verdict::GeometrisableBranched);
    out.checks
        .push(Check::field("canonical degree", 2, report.canonical_degree));
    out.checks
        .push(Check::field("image index", 1, report.image_index));
    out.checks
        .push(Check::field("cone budget", 2, report.cone_budget));
    out.gate = Some(report);
    out.representations.push(rho);
    Ok(out)
}

fn handle_attach(params: &ExampleParams) -> Result<ExampleReport, SuiteError> {
    let g = params.genus.unwrap_or(2);
    let mut out = ExampleReport::new("handle-attach");
    let base = holonomy(&build_with_cone_multiple(g, 2)?)?;
    let base_eu = euler_number(&base)?.value;
    let once = mk_handle_attach(&base);
    let twice = mk_handle_attach(&once.assignment);
    let eu1 = euler_number(&once.assignment)?.value;
    let eu2 = euler_number(&twice.assignment)?.value;
    out.set("base_euler", json!(base_eu));
    out.set("euler_after_one_handle", json!(eu1));
    out.set("euler_after_two_handles", json!(eu2));
    out.checks
        .push(Check::eq("one handle keeps euler", base_eu, eu1));
    out.checks
        .push(Check::eq("two handles keep euler", base_eu, eu2));
    out.checks.push(Check::eq(
        "genus after two handles",
        g + 2,
        twice.presentation.genus(),
    ));

    let depth = params.max_len.max(WITNESS_SEARCH_LIMIT);
    let report = decide(
        &GateInput::new(base, once.pinch, depth)?
            .with_max_cosets(params.max_cosets)
            .with_tolerance(params.tolerance),
    );
    gate_checks(&mut out, &report, Verdict::NotPurelyHyperbolicAtBudget);
    let witness = report.witnesses.first().cloned().unwrap_or_default();
    out.set("witness", json!(witness));
    out.checks.push(Check::holds(
        "non-hyperbolic witness reported",
        witness.starts_with("non-hyperbolic image"),
        &witness,
    ));
    out.gate = Some(report);
    out.representations.push(once.assignment);
    out.representations.push(twice.assignment);
    Ok(out)
}

fn ex4_scan(params: &ExampleParams) -> Result<ExampleReport, SuiteError> {
    let g = params.genus.unwrap_or(2);
    let mut out = ExampleReport::new("ex4-scan");
    let rho = holonomy(&build_with_cone_multiple(g, 2)?)?;
    let options = ScanOptions::new(WITNESS_SEARCH_LIMIT)
        .with_tolerance(params.tolerance)
        .stopping_early();
    let scan = scan_classification(&rho, &options);
    match &scan.first_non_hyperbolic {
        Some(hit) => {
            out.set("witness", json!(hit.word.to_string()));
            out.set("witness_length", json!(hit.word.len()));
            out.set("witness_class", json!(hit.class.to_string()));
            out.set("witness_trace", json!(hit.trace));
            out.set("words_scanned", json!(scan.counts.total()));
            out.checks.push(Check::holds(
                "witness within length limit",
                hit.word.len() <= WITNESS_SEARCH_LIMIT,
                hit.word.len(),
            ));
            out.checks.push(Check::holds(
                "witness not hyperbolic",
                !hit.class.is_hyperbolic(),
                hit.class,
            ));
        }
        None => out.checks.push(Check::holds(
            "witness within length limit",
            false,
            format!("none up to length {}", scan.max_len),
        )),
    }
    out.representations.push(rho);
    Ok(out)
}

/// Runs one named example.
pub fn run_example(name: &str, params: &ExampleParams) -> Result<ExampleReport, SuiteError> {
    match name {
        "octagon-complete" => polygon_example(name, params.genus.unwrap_or(2), 1, params),
        "octagon-right" => polygon_example(name, params.genus.unwrap_or(2), 2, params),
        "tan" => tan(params),
        "doubling" => doubling(params),
        "handle-attach" => handle_attach(params),
        "ex4-scan" => ex4_scan(params),
        other => Err(SuiteError::UnknownExample(other.to_string())),
    }
}

/// Runs every example with default sizes.
pub fn run_all(params: &ExampleParams) -> Result<Vec<ExampleReport>, SuiteError> {
    let base = ExampleParams {
        genus: None,
        handles: None,
        ..*params
    };
    EXAMPLE_NAMES
        .iter()
        .map(|n| run_example(n, &base))
        .collect()
}

//! Suite runs: which checks to execute on a loaded object, and the report.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use locality_core::locality::{verify_locality, verify_objectivity_part, Locality};
use locality_core::normal::{
    all_partial_normal_subgroups, normal_closure, quotient, verify_first_isomorphism, verify_normal_theory, verify_quotient,
    verify_theta, PartialNormalSubgroup,
};
use locality_core::partial::verify_partial_group_part;
use locality_core::products::{normal_subgroups_of_normalizer, verify_generated, verify_products};
use locality_core::report::{CheckLine, Report, Status};
use locality_core::ElemSet;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::io::{load, LoadError, Object};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Axioms,
    Locality,
    Normal,
    Quotient,
    Products,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["axioms", "locality", "normal", "quotient", "products", "all"];

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Locality => "locality",
            Suite::Normal => "normal",
            Suite::Quotient => "quotient",
            Suite::Products => "products",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Ok(match s {
            "axioms" => Suite::Axioms,
            "locality" => Suite::Locality,
            "normal" => Suite::Normal,
            "quotient" => Suite::Quotient,
            "products" => Suite::Products,
            "all" => Suite::All,
            _ => return Err(ConfigError::Suite(s.into())),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown suite `{0}` (expected one of axioms, locality, normal, quotient, products, all)")]
    Suite(String),
    #[error("word bound must be at least 2, got {0}")]
    Bound(usize),
    #[error("worker count must be at least 1")]
    Workers,
    #[error("the input has prime {found}, but {expected} was requested")]
    Prime { expected: usize, found: usize },
    #[error("bad normal subgroup spec `{0}` (expected `all` or `gen:<indices>`)")]
    NormalSpec(String),
    #[error("{0}")]
    NotLocality(String),
    #[error("element {0} is out of range")]
    Element(usize),
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Load(#[from] LoadError),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: String,
    pub bound: usize,
    pub prime: Option<usize>,
    pub suite: Suite,
    pub format: OutputFormat,
    pub workers: usize,
}

impl RunConfig {
    pub fn new(input: impl Into<String>, suite: Suite) -> Self {
        RunConfig { input: input.into(), bound: 3, prime: None, suite, format: OutputFormat::Text, workers: 1 }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.bound < 2 {
            return Err(ConfigError::Bound(self.bound));
        }
        if self.workers == 0 {
            return Err(ConfigError::Workers);
        }
        Ok(())
    }
}

/// `all`, or `gen:<i>,<j>,...` for the normal closure of those elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalSpec {
    All,
    Gen(Vec<usize>),
}

impl FromStr for NormalSpec {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        if s == "all" {
            return Ok(NormalSpec::All);
        }
        let bad = || ConfigError::NormalSpec(s.into());
        let body = s.strip_prefix("gen:").ok_or_else(bad)?;
        let v = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().map_err(|_| bad()))
            .collect::<Result<Vec<usize>, _>>()?;
        Ok(NormalSpec::Gen(v))
    }
}

impl NormalSpec {
    /// The selected partial normal subgroups, each with its label.
    pub fn resolve(&self, loc: &Locality) -> Result<Vec<(String, PartialNormalSubgroup)>, ConfigError> {
        let all = all_partial_normal_subgroups(loc);
        match self {
            NormalSpec::All => Ok(all.into_iter().enumerate().map(|(i, n)| (format!("N#{i}"), n)).collect()),
            NormalSpec::Gen(xs) => {
                if let Some(&x) = xs.iter().find(|&&x| x >= loc.size()) {
                    return Err(ConfigError::Element(x));
                }
                let n = normal_closure(loc, &ElemSet::from_iter(loc.size(), xs.iter().copied()));
                let label = match all.iter().position(|m| m == &n) {
                    Some(i) => format!("N#{i}"),
                    None => "N".to_string(),
                };
                Ok(vec![(label, n)])
            }
        }
    }
}

/// Describes one partial normal subgroup for titles and listings.
pub fn describe_normal(loc: &Locality, label: &str, n: &PartialNormalSubgroup) -> String {
    format!("{label} size={} T={} members={}", n.len(), n.t(loc), n.members())
}

// ---------------------------------------------------------------------------
// report

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub input: String,
    pub size: usize,
    pub sylow: Option<usize>,
    pub objects: Option<usize>,
    pub p: Option<usize>,
    pub bound: usize,
    pub suite: Suite,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Line {
    pub id: String,
    pub status: String,
    pub witness: Option<String>,
    pub bound: Option<usize>,
    pub note: Option<String>,
}

impl From<&CheckLine> for Line {
    fn from(l: &CheckLine) -> Self {
        Line {
            id: l.id.clone(),
            status: l.status.as_str().into(),
            witness: l.witness.as_ref().map(|w| w.text.clone()),
            bound: l.bound,
            note: l.note.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Section {
    pub title: String,
    pub lines: Vec<Line>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub section: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub instance: Instance,
    pub sections: Vec<Section>,
    pub summary: Summary,
    pub timing: Vec<Timing>,
}

pub const TIMING_BEGIN: &str = "BEGIN TIMING";
pub const TIMING_END: &str = "END TIMING";

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn section(&self, title_prefix: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.title.starts_with(title_prefix))
    }

    pub fn failures(&self) -> impl Iterator<Item = (&Section, &Line)> {
        self.sections.iter().flat_map(|s| s.lines.iter().filter(|l| l.status == "FAIL").map(move |l| (s, l)))
    }

    /// The text report without the timing block: identical across runs.
    pub fn deterministic_text(&self) -> String {
        let i = &self.instance;
        let mut out = String::new();
        let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
        let _ = writeln!(
            out,
            "INSTANCE input={} size={} sylow={} objects={} p={} bound={} suite={}",
            i.input,
            i.size,
            opt(i.sylow),
            opt(i.objects),
            opt(i.p),
            i.bound,
            i.suite.as_str()
        );
        for s in &self.sections {
            let _ = writeln!(out, "SECTION {}", s.title);
            for l in &s.lines {
                let _ = write!(out, "LEMMA {} {}", l.id, l.status);
                if let Some(w) = &l.witness {
                    let _ = write!(out, " witness={w}");
                }
                if let Some(b) = l.bound {
                    let _ = write!(out, " bound={b}");
                }
                if let Some(n) = &l.note {
                    let _ = write!(out, " note=\"{n}\"");
                }
                out.push('\n');
            }
        }
        let r = if self.passed() { "PASS" } else { "FAIL" };
        let s = &self.summary;
        let _ = writeln!(out, "RESULT {r} pass={} fail={} skip={}", s.pass, s.fail, s.skip);
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = self.deterministic_text();
        let _ = writeln!(out, "{TIMING_BEGIN}");
        for t in &self.timing {
            let _ = writeln!(out, "{} {:.3}s", t.section, t.seconds);
        }
        let _ = writeln!(out, "{TIMING_END}");
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Removes the timing block from a text report.
pub fn strip_timing(text: &str) -> String {
    match (text.find(TIMING_BEGIN), text.find(TIMING_END)) {
        (Some(a), Some(b)) if a <= b => {
            let end = b + TIMING_END.len();
            let end = if text[end..].starts_with('\n') { end + 1 } else { end };
            format!("{}{}", &text[..a], &text[end..])
        }
        _ => text.to_string(),
    }
}

// ---------------------------------------------------------------------------
// running

type Job = Box<dyn Fn() -> Report + Send + Sync>;

struct Plan {
    sections: Vec<(String, Vec<Job>)>,
}

impl Plan {
    fn new() -> Self {
        Plan { sections: Vec::new() }
    }

    fn add(&mut self, title: impl Into<String>, jobs: Vec<Job>) {
        self.sections.push((title.into(), jobs));
    }

    fn one(&mut self, title: impl Into<String>, job: impl Fn() -> Report + Send + Sync + 'static) {
        self.add(title, vec![Box::new(job)]);
    }

    fn run(self, workers: usize) -> (Vec<Section>, Vec<Timing>) {
        let flat: Vec<(usize, &Job)> =
            self.sections.iter().enumerate().flat_map(|(i, (_, jobs))| jobs.iter().map(move |j| (i, j))).collect();
        let exec = || flat.par_iter().map(|(i, j)| (*i, timed(j))).collect::<Vec<_>>();
        let results = if workers == 1 {
            flat.iter().map(|(i, j)| (*i, timed(j))).collect()
        } else {
            rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool").install(exec)
        };
        let mut merged: Vec<(Report, f64)> = self.sections.iter().map(|_| (Report::new(), 0.0)).collect();
        for (i, (r, t)) in results {
            merged[i].0.merge(r);
            merged[i].1 += t;
        }
        let mut sections = Vec::new();
        let mut timing = Vec::new();
        for ((title, _), (r, t)) in self.sections.iter().zip(merged) {
            sections.push(Section { title: title.clone(), lines: r.lines().into_iter().map(Line::from).collect() });
            timing.push(Timing { section: title.clone(), seconds: t });
        }
        (sections, timing)
    }
}

fn timed(j: &Job) -> (Report, f64) {
    let t = Instant::now();
    let r = j();
    (r, t.elapsed().as_secs_f64())
}

fn not_locality(id: &str) -> Report {
    let mut r = Report::new();
    r.push(CheckLine::skip(id, "input is not a locality"));
    r
}

/// Loads the input and runs the selected suites.
pub fn run_suite(cfg: &RunConfig) -> Result<SuiteReport, RunError> {
    cfg.validate()?;
    let obj = load(&cfg.input)?;
    Ok(run_suite_on(&obj, cfg)?)
}

/// Runs the selected suites on an already loaded object.
pub fn run_suite_on(obj: &Object, cfg: &RunConfig) -> Result<SuiteReport, ConfigError> {
    cfg.validate()?;
    let loc = obj.locality().map(|l| Arc::new(l.clone()));
    if let (Some(expected), Some(l)) = (cfg.prime, &loc) {
        if l.p() != expected {
            return Err(ConfigError::Prime { expected, found: l.p() });
        }
    }
    let k = cfg.bound;
    let parts = cfg.workers.max(1);
    let mut plan = Plan::new();

    if cfg.suite.includes(Suite::Axioms) {
        let pg = Arc::new(obj.view().clone());
        let jobs = (0..parts)
            .map(|part| {
                let pg = pg.clone();
                Box::new(move || verify_partial_group_part(&pg, k, part, parts)) as Job
            })
            .collect();
        plan.add("axioms", jobs);
    }

    let wants_loc = [Suite::Locality, Suite::Normal, Suite::Quotient, Suite::Products].iter().any(|&s| cfg.suite.includes(s));
    match &loc {
        None if wants_loc => plan.one("locality", || not_locality("2.8")),
        None => {}
        Some(loc) => add_locality_sections(&mut plan, loc, cfg.suite, k, parts),
    }

    let (sections, timing) = plan.run(cfg.workers);
    let mut summary = Summary::default();
    for l in sections.iter().flat_map(|s| &s.lines) {
        match l.status.as_str() {
            "PASS" => summary.pass += 1,
            "FAIL" => summary.fail += 1,
            _ => summary.skip += 1,
        }
    }
    let instance = Instance {
        input: cfg.input.clone(),
        size: obj.view().size(),
        sylow: loc.as_ref().map(|l| l.sylow().len()),
        objects: loc.as_ref().map(|l| l.object_masks().len()),
        p: loc.as_ref().map(|l| l.p()),
        bound: k,
        suite: cfg.suite,
    };
    Ok(SuiteReport { instance, sections, summary, timing })
}

fn add_locality_sections(plan: &mut Plan, loc: &Arc<Locality>, suite: Suite, k: usize, parts: usize) {
    if suite.includes(Suite::Locality) {
        let jobs = (0..parts)
            .map(|part| {
                let loc = loc.clone();
                Box::new(move || verify_objectivity_part(&loc, k, part, parts)) as Job
            })
            .collect();
        plan.add("objectivity", jobs);
        let l = loc.clone();
        plan.one("locality", move || verify_locality(&l));
    }
    let needs_normals = [Suite::Normal, Suite::Quotient, Suite::Products].iter().any(|&s| suite.includes(s));
    if !needs_normals {
        return;
    }
    let normals: Vec<Arc<PartialNormalSubgroup>> = all_partial_normal_subgroups(loc).into_iter().map(Arc::new).collect();
    let title = |i: usize| describe_normal(loc, &format!("N#{i}"), &normals[i]);

    if suite.includes(Suite::Normal) {
        for i in 0..normals.len() {
            let (l, n) = (loc.clone(), normals[i].clone());
            plan.one(format!("normal {}", title(i)), move || verify_normal_theory(&l, &n));
        }
    }
    if suite.includes(Suite::Quotient) {
        for i in 0..normals.len() {
            let (l, n) = (loc.clone(), normals[i].clone());
            plan.one(format!("quotient {}", title(i)), move || verify_quotient(&l, &n, k));
        }
        let l = loc.clone();
        plan.one("theta", move || verify_theta(&l, k));
        for j in 0..normals.len() {
            for i in 0..normals.len() {
                if !normals[i].members().is_subset(normals[j].members()) {
                    continue;
                }
                let (l, n, m) = (loc.clone(), normals[i].clone(), normals[j].clone());
                plan.one(format!("first-isomorphism N#{i} <= N#{j}"), move || {
                    let q = match quotient(&l, &m) {
                        Ok(q) => q,
                        Err(e) => {
                            let mut r = Report::new();
                            r.check("4.6", Some(locality_core::report::Witness::new(Vec::new(), e.to_string())));
                            return r;
                        }
                    };
                    verify_first_isomorphism(&l, &q.projection, &q.locality, &n, k)
                });
            }
        }
    }
    if suite.includes(Suite::Products) {
        for i in 0..normals.len() {
            for j in 0..normals.len() {
                let (l, m, n) = (loc.clone(), normals[i].clone(), normals[j].clone());
                plan.one(format!("product M=N#{i} N=N#{j}"), move || verify_products(&l, &m, &n));
            }
        }
        for i in 0..normals.len() {
            for (c, kset) in normal_subgroups_of_normalizer(loc, normals[i].t_mask()).into_iter().enumerate() {
                let (l, n) = (loc.clone(), normals[i].clone());
                plan.one(format!("generated N=N#{i} K#{c} K={kset}"), move || verify_generated(&l, &n, &kset));
            }
        }
    }
}

/// Status counts of a core report.
pub fn count(r: &Report) -> Summary {
    let mut s = Summary::default();
    for l in r.lines() {
        match l.status {
            Status::Pass => s.pass += 1,
            Status::Fail => s.fail += 1,
            Status::Skip => s.skip += 1,
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_options() {
        assert_eq!("products".parse::<Suite>().unwrap(), Suite::Products);
        assert!(matches!("x".parse::<Suite>(), Err(ConfigError::Suite(_))));
        assert_eq!("all".parse::<NormalSpec>().unwrap(), NormalSpec::All);
        assert_eq!("gen:1, 4,7".parse::<NormalSpec>().unwrap(), NormalSpec::Gen(vec![1, 4, 7]));
        assert!("gen:a".parse::<NormalSpec>().is_err());
        assert!("1,2".parse::<NormalSpec>().is_err());
        let mut cfg = RunConfig::new("example:free1", Suite::All);
        cfg.bound = 1;
        assert_eq!(cfg.validate(), Err(ConfigError::Bound(1)));
    }

    #[test]
    fn timing_is_stripped() {
        let text = "INSTANCE x\nRESULT PASS pass=1 fail=0 skip=0\nBEGIN TIMING\naxioms 0.1s\nEND TIMING\n";
        assert_eq!(strip_timing(text), "INSTANCE x\nRESULT PASS pass=1 fail=0 skip=0\n");
    }

    #[test]
    fn bare_partial_groups_skip_locality_suites() {
        let obj = load("example:free1").unwrap();
        let r = run_suite_on(&obj, &RunConfig::new("example:free1", Suite::All)).unwrap();
        assert!(r.passed());
        assert_eq!(r.section("locality").unwrap().lines[0].status, "SKIP");
        assert_eq!(r.instance.p, None);
    }
}

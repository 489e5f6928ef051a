//! Verb dispatch, reports and exit status.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use hecke_core::completion::{approximate, chain_of, compare, FilterSpec};
use hecke_core::hecke::{check_hecke_axioms, commensuration_index, IndexEntry, OrbitEntry, Status, DEFAULT_DEPTH};
use hecke_core::rank::{build_gn_tower, check_certificate, facts_from_metadata, render_certificate, Certificate, TowerSeed};
use hecke_core::scale::{scale_estimate, uniscalar_sample, GrowthStatus, UniscalarVerdict};
use hecke_core::schreier::{enumerate_ball, export_schreier_dot, point_of, u_orbit_ids};
use hecke_core::{Caps, Error, PermutationHeckePair, Space};
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::ast::{Action, Command, Format, PairExpr, PathArg, Program, Seed, Span, Statement, Verb, WordArg};
use crate::error::{CliError, Result};
use crate::eval::{Env, Value};
use crate::pretty::print_command;

/// U-orbits and the Hecke check sample this many cosets.
pub const VERIFY_SAMPLES: usize = 32;
pub const DEFAULT_RADIUS: usize = 2;
pub const DEFAULT_STEPS: usize = 8;
/// Word-length bound of the uniscalar sample run by `scale` without a word.
pub const DEFAULT_SCALE_WORD_LENGTH: usize = 2;

/// What one command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub command: String,
    pub status: Status,
    pub text: String,
    pub report: Json,
    pub dot: Option<String>,
}

impl Outcome {
    /// The JSON envelope written for `--format json`.
    pub fn envelope(&self, verb: Verb) -> Json {
        json!({
            "command": self.command,
            "verb": verb.name(),
            "status": self.status,
            "report": self.report,
        })
    }

    pub fn exit_code(&self) -> i32 {
        if self.status == Status::Fail {
            1
        } else {
            0
        }
    }
}

/// Keys come out sorted because `serde_json` maps are ordered.
pub fn to_json<T: Serialize>(value: &T) -> Json {
    serde_json::to_value(value).expect("reports serialize to JSON")
}

pub fn render_json(value: &Json) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values render");
    s.push('\n');
    s
}

/// Execution context: bindings, and the directory relative paths resolve against.
#[derive(Debug, Clone)]
pub struct Session {
    pub env: Env,
    pub base_dir: PathBuf,
    pub caps: Caps,
}

impl Session {
    pub fn new(base_dir: impl Into<PathBuf>) -> Result<Session> {
        let caps = Caps::from_env().map_err(CliError::core(Span::default()))?;
        Ok(Session { env: Env::default(), base_dir: base_dir.into(), caps })
    }

    fn path(&self, p: &PathArg) -> PathBuf {
        let path = Path::new(&p.path);
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }

    fn read(&self, p: &PathArg) -> Result<String> {
        let path = self.path(p);
        fs::read_to_string(&path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
    }

    fn caps(&self, cmd: &Command) -> Caps {
        cmd.options.caps.unwrap_or(self.caps)
    }

    fn pair(&self, cmd: &Command, target: &PairExpr) -> Result<PermutationHeckePair> {
        self.env.eval_pair(target, self.caps(cmd))
    }

    /// Runs one command and renders its artifact in the requested format.
    pub fn execute(&self, cmd: &Command) -> Result<(Outcome, String)> {
        let outcome = self.outcome(cmd)?;
        let format = cmd.options.format.unwrap_or(Format::Text);
        let artifact = match format {
            Format::Text => outcome.text.clone(),
            Format::Json => render_json(&outcome.envelope(cmd.verb)),
            Format::Dot => outcome.dot.clone().unwrap_or_default(),
        };
        match &cmd.options.output {
            Some(out) => {
                let path = self.path(out);
                fs::write(&path, &artifact).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                let summary = format!("{}: {} (wrote {})\n", outcome.command, outcome.status, out.path);
                Ok((outcome, summary))
            }
            None => Ok((outcome, artifact)),
        }
    }

    pub fn outcome(&self, cmd: &Command) -> Result<Outcome> {
        let command = print_command(cmd);
        let (status, report, text, dot) = match &cmd.action {
            Action::Verify { target } => self.verify(cmd, target)?,
            Action::Orbits { target } => self.orbits(cmd, target)?,
            Action::Index { target, words } => self.index(cmd, target, words)?,
            Action::Scale { target, word } => self.scale(cmd, target, word.as_ref())?,
            Action::Ball { target } => self.ball(cmd, target)?,
            Action::Complete { target, word } => self.complete(cmd, target, word)?,
            Action::FilterCompare { lhs, rhs } => self.filter_compare(cmd, lhs, rhs)?,
            Action::FilterShow { file } => self.filter_show(file)?,
            Action::Rank { target } => self.rank(cmd, target.as_ref())?,
            Action::Tower => self.tower(cmd)?,
        };
        let text = format!("{command}: {status}\n{text}");
        Ok(Outcome { command, status, text, report, dot })
    }

    fn verify(&self, cmd: &Command, target: &PairExpr) -> Result<Parts> {
        let depth = cmd.options.depth.unwrap_or(DEFAULT_DEPTH);
        let span = target.span();
        match self.env.eval(target, self.caps(cmd))? {
            Value::Pair(pair) => {
                let r = check_hecke_axioms(&pair, depth, VERIFY_SAMPLES).map_err(CliError::core(span))?;
                let mut text = String::new();
                for e in &r.commensuration {
                    let _ = writeln!(text, "  {}", index_line(e));
                }
                let finite = r.finite_orbits.iter().filter(|o| o.status == Status::Pass).count();
                let _ = writeln!(text, "  finite U-orbits: {finite} of {} sampled cosets", r.finite_orbits.len());
                let moved = r.core.iter().filter(|c| c.status == Status::Pass).count();
                let _ = writeln!(text, "  core: {moved} of {} U-generators move a sampled coset", r.core.len());
                let _ = writeln!(text, "  properness: {}", r.properness);
                Ok((r.status, to_json(&r), text, None))
            }
            Value::Hnn(h) => {
                let r = &h.report;
                let mut text = String::new();
                let _ = writeln!(text, "  embedding: {} at depth {}", r.embedding, r.depth);
                let _ = writeln!(text, "  centralizing: {} ({} checked)", r.centralizing.status, r.centralizing.checked);
                let _ = writeln!(
                    text,
                    "  trivial intersection: {} ({} checked)",
                    r.trivial_intersection.status, r.trivial_intersection.checked
                );
                let _ = writeln!(text, "  {}", index_line(&r.commensuration));
                Ok((r.status, to_json(r), text, None))
            }
        }
    }

    fn orbits(&self, cmd: &Command, target: &PairExpr) -> Result<Parts> {
        let radius = cmd.options.radius.unwrap_or(DEFAULT_RADIUS);
        let span = target.span();
        let pair = self.pair(cmd, target)?;
        let core = CliError::core(span);
        let ball = enumerate_ball(&pair, radius).map_err(core)?;
        let cap = pair.caps().orbit;
        let mut status = Status::Pass;
        let mut entries = Vec::new();
        let mut text = String::new();
        for &c in &ball.members {
            let point = point_of(&pair, Space::Coset, c).map_err(CliError::core(span))?.to_string();
            let (orbit_size, s) = match u_orbit_ids(&pair, c, cap) {
                Ok(o) => (Some(o.len() as u64), Status::Pass),
                Err(Error::OrbitCapExceeded { .. }) => (None, Status::Fail),
                Err(e) => return Err(CliError::core(span)(e)),
            };
            status = status.combine(s);
            let size = orbit_size.map_or("over cap".to_string(), |n| n.to_string());
            let _ = writeln!(text, "  {c}  {point}  |U-orbit| = {size}");
            entries.push(OrbitEntry { coset: c, point, orbit_size, status: s });
        }
        let report = json!({ "pair": pair.name(), "radius": radius, "orbits": entries });
        Ok((status, report, text, None))
    }

    fn index(&self, cmd: &Command, target: &PairExpr, words: &[WordArg]) -> Result<Parts> {
        let depth = cmd.options.depth.unwrap_or(DEFAULT_DEPTH);
        let mut entries = Vec::new();
        let name;
        match self.env.eval(target, self.caps(cmd))? {
            Value::Pair(pair) => {
                name = pair.name();
                for w in words {
                    let g = pair.parse_word(&w.text).map_err(CliError::core(w.span))?;
                    entries.push(index_entry(&pair, &g, depth).map_err(CliError::core(w.span))?);
                }
            }
            Value::Hnn(h) => {
                name = h.name();
                let stable = &h.generators()[h.stable_index()].name;
                for w in words {
                    if &w.text != stable {
                        let msg = format!("an HNN pair only reports the index of its stable letter `{stable}`");
                        return Err(CliError::usage(w.span, msg));
                    }
                    let r = h.t_commensuration().map_err(CliError::core(w.span))?;
                    entries.push(IndexEntry {
                        element: r.element,
                        idx_left: Some(r.idx_left),
                        idx_right: Some(r.idx_right),
                        status: Status::Pass,
                        note: None,
                    });
                }
            }
        }
        let status = entries.iter().fold(Status::Pass, |s, e| s.combine(e.status));
        let text: String = entries.iter().map(|e| format!("  {}\n", index_line(e))).collect();
        let report = json!({ "pair": name, "depth": depth, "entries": entries });
        Ok((status, report, text, None))
    }

    fn scale(&self, cmd: &Command, target: &PairExpr, word: Option<&WordArg>) -> Result<Parts> {
        let steps = cmd.options.steps.unwrap_or(DEFAULT_STEPS);
        let pair = self.pair(cmd, target)?;
        match word {
            Some(w) => {
                let g = pair.parse_word(&w.text).map_err(CliError::core(w.span))?;
                let est = scale_estimate(&pair, &g, steps).map_err(CliError::core(w.span))?;
                let status = growth_status(est.status);
                let value = est.estimate.map_or("none".to_string(), |v| v.to_string());
                let text = format!("  idx_n = {:?}\n  scale estimate: {value} ({})\n", est.idx, growth_name(est.status));
                Ok((status, to_json(&est), text, None))
            }
            None => {
                let bound = cmd.options.depth.unwrap_or(DEFAULT_SCALE_WORD_LENGTH);
                let r = uniscalar_sample(&pair, bound, steps).map_err(CliError::core(target.span()))?;
                let text = match &r.verdict {
                    UniscalarVerdict::UniscalarSoFar => {
                        format!("  uniscalar so far: {} words of length <= {bound}\n", r.estimates.len())
                    }
                    UniscalarVerdict::Witness { element, estimate } => {
                        format!("  not uniscalar: s({element}) = {estimate}\n")
                    }
                };
                let status = if r.estimates.iter().any(|e| e.status == GrowthStatus::CapExceeded) {
                    Status::Fail
                } else {
                    Status::Pass
                };
                Ok((status, to_json(&r), text, None))
            }
        }
    }

    fn ball(&self, cmd: &Command, target: &PairExpr) -> Result<Parts> {
        let radius = cmd.options.radius.unwrap_or(DEFAULT_RADIUS);
        let pair = self.pair(cmd, target)?;
        let ball = enumerate_ball(&pair, radius).map_err(CliError::core(target.span()))?;
        let mut text = format!("  {} cosets, {} edges within radius {radius}\n", ball.members.len(), ball.edges.len());
        for (c, p) in ball.members.iter().zip(&ball.points) {
            let _ = writeln!(text, "  {c}  {p}");
        }
        let dot = export_schreier_dot(&ball);
        Ok((Status::Pass, to_json(&ball), text, Some(dot)))
    }

    fn complete(&self, cmd: &Command, target: &PairExpr, word: &WordArg) -> Result<Parts> {
        let depth = cmd.options.depth.unwrap_or(DEFAULT_DEPTH);
        let pair = self.pair(cmd, target)?;
        let core = CliError::core(word.span);
        let g = pair.parse_word(&word.text).map_err(core)?;
        let chain = chain_of(&pair, &g, depth).map_err(CliError::core(word.span))?;
        let mut approximants = Vec::new();
        let mut coherent = chain.is_coherent();
        let mut text = String::new();
        for n in 0..=depth {
            let a = approximate(&pair, &g, n).map_err(CliError::core(word.span))?;
            if let Some(prev) = approximants.last() {
                coherent &= a.agrees_with(prev);
            }
            let _ = writeln!(
                text,
                "  level {n}: {} cosets mapped, {} leave the ball, injective: {}",
                a.map.len(),
                a.undefined.len(),
                a.is_injective()
            );
            approximants.push(a);
        }
        let _ = writeln!(text, "  coherent: {coherent}");
        let status = if coherent { Status::Pass } else { Status::Fail };
        let report = json!({
            "pair": pair.name(),
            "element": pair.show(&g),
            "depth": depth,
            "coherent": coherent,
            "chain": chain,
            "approximants": approximants,
        });
        Ok((status, report, text, None))
    }

    fn filter_spec(&self, p: &PathArg) -> Result<FilterSpec> {
        FilterSpec::parse(&self.read(p)?).map_err(CliError::core(p.span))
    }

    fn filter_compare(&self, cmd: &Command, lhs: &PathArg, rhs: &PathArg) -> Result<Parts> {
        let (a, b) = (self.filter_spec(lhs)?, self.filter_spec(rhs)?);
        let results = compare(&a, &b).map_err(CliError::core(cmd.span))?;
        let mut summary = serde_json::Map::new();
        let mut text = String::new();
        for r in &results {
            summary.insert(r.predicate.clone(), Json::Bool(r.result));
            let witness = r.witness.as_deref().map(|w| format!("  ({w})")).unwrap_or_default();
            let _ = writeln!(text, "  {}: {}{witness}", r.predicate, r.result);
        }
        let report = json!({ "lhs": a.label(), "rhs": b.label(), "results": summary, "details": results });
        Ok((Status::Pass, report, text, None))
    }

    fn filter_show(&self, file: &PathArg) -> Result<Parts> {
        let spec = self.filter_spec(file)?;
        let text: String = spec.to_string().lines().map(|l| format!("  {l}\n")).collect();
        Ok((Status::Pass, to_json(&spec), text, None))
    }

    fn rank(&self, cmd: &Command, target: Option<&PairExpr>) -> Result<Parts> {
        if let Some(target) = target {
            let value = self.env.eval(target, self.caps(cmd))?;
            let metadata = match &value {
                Value::Pair(p) => &p.metadata,
                Value::Hnn(h) => &h.metadata,
            };
            let name = value.name();
            let facts = facts_from_metadata(&name, metadata);
            let text: String = facts.iter().map(|c| format!("  {}    [{}: {}]\n", c.fact, c.rule, c.provenance.as_deref().unwrap_or("-"))).collect();
            let report = json!({ "pair": name, "facts": facts });
            return Ok((Status::Pass, report, text, None));
        }
        let file = cmd.options.certificate.as_ref().expect("parser requires a target or a certificate");
        let source = self.read(file)?;
        let cert: Certificate = serde_json::from_str(&source)
            .map_err(|e| CliError::usage(file.span, format!("{}: not a certificate: {e}", file.path)))?;
        match check_certificate(&cert) {
            Ok(()) => {
                let text = format!("  {}\n  every rule application re-checked\n", cert.fact);
                Ok((Status::Pass, json!({ "conclusion": cert.fact.to_string(), "valid": true }), text, None))
            }
            Err(e) => {
                let text = format!("  {}\n  rejected: {e}\n", cert.fact);
                let report = json!({ "conclusion": cert.fact.to_string(), "valid": false, "reason": e.to_string() });
                Ok((Status::Fail, report, text, None))
            }
        }
    }

    fn tower(&self, cmd: &Command) -> Result<Parts> {
        let n = cmd.options.n.expect("parser requires --n");
        let seed = match &cmd.options.seed {
            None | Some(Seed::Abstract) => TowerSeed::declared("seed", "1"),
            Some(Seed::Expr(e)) => {
                let value = self.env.eval(e, self.caps(cmd))?;
                let metadata = match &value {
                    Value::Pair(p) => &p.metadata,
                    Value::Hnn(h) => &h.metadata,
                };
                TowerSeed { expr: e.to_string(), contraction: "1".into(), facts: facts_from_metadata("G_0", metadata) }
            }
        };
        let t = build_gn_tower(n, &seed).map_err(CliError::core(cmd.span))?;
        check_certificate(&t.certificate).map_err(CliError::core(cmd.span))?;
        let mut text = render_certificate(&t.certificate);
        for (name, expr) in &t.expressions {
            let _ = writeln!(text, "{name} = {expr}");
        }
        let _ = writeln!(text, "xi(G_{n}, U_{n}) >= {}", t.bound);
        let text: String = text.lines().map(|l| format!("  {l}\n")).collect();
        Ok((Status::Pass, to_json(&t), text, None))
    }
}

type Parts = (Status, Json, String, Option<String>);

fn index_entry(pair: &PermutationHeckePair, g: &hecke_core::GroupWord, depth: usize) -> hecke_core::Result<IndexEntry> {
    match commensuration_index(pair, g, depth) {
        Ok(r) => Ok(IndexEntry {
            element: r.element,
            idx_left: Some(r.idx_left),
            idx_right: Some(r.idx_right),
            status: Status::Pass,
            note: None,
        }),
        Err(e @ (Error::IndexCapExceeded { .. } | Error::OrbitCapExceeded { .. })) => Ok(IndexEntry {
            element: pair.show(g),
            idx_left: None,
            idx_right: None,
            status: Status::Fail,
            note: Some(e.to_string()),
        }),
        Err(e) => Err(e),
    }
}

fn index_line(e: &IndexEntry) -> String {
    let show = |v: Option<u64>| v.map_or("?".to_string(), |v| v.to_string());
    let note = e.note.as_deref().map(|n| format!("  {n}")).unwrap_or_default();
    format!("{}  idx = ({}, {})  {}{note}", e.element, show(e.idx_left), show(e.idx_right), e.status)
}

fn growth_status(s: GrowthStatus) -> Status {
    match s {
        GrowthStatus::Stable => Status::Pass,
        GrowthStatus::Inconclusive => Status::Unknown,
        GrowthStatus::CapExceeded => Status::Fail,
    }
}

fn growth_name(s: GrowthStatus) -> &'static str {
    match s {
        GrowthStatus::Stable => "stable",
        GrowthStatus::Inconclusive => "inconclusive",
        GrowthStatus::CapExceeded => "cap exceeded",
    }
}

/// Result of running a program: concatenated output, the rendered error that stopped
/// the run if any, and the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub output: String,
    pub error: Option<String>,
    pub exit_code: i32,
    pub outcomes: Vec<Outcome>,
}

/// Runs every statement in order. The first error stops the run and is rendered
/// against `source`.
pub fn run_program(session: &mut Session, program: &Program, source: &str) -> RunResult {
    let mut output = String::new();
    let mut exit_code = 0;
    let mut outcomes = Vec::new();
    for stmt in &program.statements {
        match stmt {
            Statement::Binding { name, expr, .. } => session.env.bind(name.clone(), expr.clone()),
            Statement::Command(cmd) => match session.execute(cmd) {
                Ok((outcome, text)) => {
                    exit_code = exit_code.max(outcome.exit_code());
                    output.push_str(&text);
                    outcomes.push(outcome);
                }
                Err(e) => {
                    return RunResult { output, error: Some(e.render(source)), exit_code: e.exit_code(), outcomes };
                }
            },
        }
    }
    RunResult { output, error: None, exit_code, outcomes }
}

//! Rank facts, derivation certificates and the rules that produce them.
//!
//! Every rule application looks up its hypotheses among the premise certificates by
//! subject and kind. A missing hypothesis is an error naming it. Lower bounds use the
//! largest available premise and upper bounds the smallest, so adding premises never
//! weakens a conclusion.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pair::{PairMetadata, Tri};

use super::ordinal::Ordinal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactKind {
    LowerBound,
    UpperBound,
    Elementary,
    Perfect,
    Transitive,
    FinitelyGenerated,
    InfiniteU,
    ResiduallyDiscrete,
    Centerless,
    Proper,
    LzDecomposition,
    Infinite,
    NontrivialFiniteSubgroup,
    FreeTransitive,
}

impl FactKind {
    pub fn name(self) -> &'static str {
        match self {
            FactKind::LowerBound => "lower_bound",
            FactKind::UpperBound => "upper_bound",
            FactKind::Elementary => "elementary",
            FactKind::Perfect => "perfect",
            FactKind::Transitive => "transitive",
            FactKind::FinitelyGenerated => "finitely_generated",
            FactKind::InfiniteU => "infinite_U",
            FactKind::ResiduallyDiscrete => "residually_discrete",
            FactKind::Centerless => "centerless",
            FactKind::Proper => "proper",
            FactKind::LzDecomposition => "lz_decomposition",
            FactKind::Infinite => "infinite",
            FactKind::NontrivialFiniteSubgroup => "nontrivial_finite_subgroup",
            FactKind::FreeTransitive => "free_transitive",
        }
    }

    fn is_bound(self) -> bool {
        matches!(self, FactKind::LowerBound | FactKind::UpperBound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankFact {
    pub subject: String,
    pub kind: FactKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Ordinal>,
}

impl RankFact {
    pub fn lower(subject: impl Into<String>, value: Ordinal) -> RankFact {
        RankFact { subject: subject.into(), kind: FactKind::LowerBound, value: Some(value) }
    }

    pub fn upper(subject: impl Into<String>, value: Ordinal) -> RankFact {
        RankFact { subject: subject.into(), kind: FactKind::UpperBound, value: Some(value) }
    }

    pub fn flag(subject: impl Into<String>, kind: FactKind) -> RankFact {
        RankFact { subject: subject.into(), kind, value: None }
    }
}

impl fmt::Display for RankFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, &self.value) {
            (FactKind::LowerBound, Some(v)) => write!(f, "xi({}) >= {v}", self.subject),
            (FactKind::UpperBound, Some(v)) => write!(f, "xi({}) <= {v}", self.subject),
            (kind, _) => write!(f, "{} is {}", self.subject, kind.name()),
        }
    }
}

/// A node of a derivation: a fact, the one rule that produced it, and its premises.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub fact: RankFact,
    pub rule: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub args: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(default)]
    pub premises: Vec<Certificate>,
}

/// Rule name of leaves taken on trust, such as flags set by a constructor.
pub const DECLARED: &str = "declared";

impl Certificate {
    pub fn declared(fact: RankFact, provenance: impl Into<String>) -> Certificate {
        Certificate { fact, rule: DECLARED.into(), args: Vec::new(), provenance: Some(provenance.into()), premises: Vec::new() }
    }

    pub fn is_leaf(&self) -> bool {
        self.premises.is_empty()
    }

    /// Number of nodes citing `rule`.
    pub fn count_rule(&self, rule: &str) -> usize {
        usize::from(self.rule == rule) + self.premises.iter().map(|p| p.count_rule(rule)).sum::<usize>()
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Certificate::size).sum::<usize>()
    }

    /// Rules along the chain of bound premises, from the conclusion down.
    pub fn spine(&self) -> Vec<&str> {
        let mut out = vec![self.rule.as_str()];
        let mut node = self;
        while let Some(next) = node.premises.iter().find(|p| p.fact.kind == node.fact.kind && p.fact.kind.is_bound()) {
            out.push(next.rule.as_str());
            node = next;
        }
        out
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(Certificate::depth).max().unwrap_or(0)
    }
}

/// A rule with the subjects it relates; the conclusion is about the `target` passed to
/// [`apply_rule`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// ξ(G) ≤ ξ(N) + ξ(Q).
    Extension { normal: String, quotient: String },
    /// ξ(wreath) ≥ ξ(bottom) + 1.
    WreathIncrease { bottom: String, top: String },
    /// ξ(∞≀(G, A, X)) ≥ ξ(G, A) + ω + 1.
    InfiniteWreath { base: String },
    /// ξ(∞≀(G, U, X)*) ≥ ξ(G, U) + ω + 2.
    WreathHnn { base: String },
    /// ξ(H) ≤ 2 + ξ(G//U).
    CompletionUpper { pair: String },
    /// ξ ≤ 2 for residually discrete groups.
    ResiduallyDiscrete,
    /// ξ(G) = sup ξ(Res(O_i)) + 1 over an exhausting sequence.
    SupExhaustion { parts: Vec<String> },
    /// ξ(L ⋊ ⟨t⟩, U) ≤ ξ(E, W).
    Perfectize { base: String },
    /// A local direct product has bound at least the supremum of its factors' bounds,
    /// plus one in successor form. With `family`, the factors are consecutive members of
    /// a family whose bounds grow by a fixed step, and the supremum is the family's limit.
    LocalProductSup { factors: Vec<String>, successor: bool, family: bool },
    /// ξ ≥ 1 for every group.
    RankPositive,
    /// A free transitive action is transitive.
    FreeTransitive,
    /// A pair whose U is a nontrivial finite subgroup has discrete, hence elementary, completion.
    FiniteUElementary,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Extension { .. } => "rule_extension",
            Rule::WreathIncrease { .. } => "rule_wreath_increase",
            Rule::InfiniteWreath { .. } => "rule_infinite_wreath",
            Rule::WreathHnn { .. } => "rule_wreath_hnn",
            Rule::CompletionUpper { .. } => "rule_completion_upper",
            Rule::ResiduallyDiscrete => "rule_residually_discrete",
            Rule::SupExhaustion { .. } => "rule_sup_exhaustion",
            Rule::Perfectize { .. } => "rule_perfectize",
            Rule::LocalProductSup { .. } => "rule_local_product_sup",
            Rule::RankPositive => "rule_rank_positive",
            Rule::FreeTransitive => "rule_free_transitive",
            Rule::FiniteUElementary => "rule_finite_u_elementary",
        }
    }

    /// The subject arguments, as stored in certificates.
    pub fn args(&self) -> Vec<String> {
        match self {
            Rule::Extension { normal, quotient } => vec![normal.clone(), quotient.clone()],
            Rule::WreathIncrease { bottom, top } => vec![bottom.clone(), top.clone()],
            Rule::InfiniteWreath { base } | Rule::WreathHnn { base } | Rule::Perfectize { base } => vec![base.clone()],
            Rule::CompletionUpper { pair } => vec![pair.clone()],
            Rule::SupExhaustion { parts } => parts.clone(),
            Rule::LocalProductSup { factors, successor, family } => {
                let mut out = vec![format!("successor={successor}"), format!("family={family}")];
                out.extend(factors.iter().cloned());
                out
            }
            Rule::ResiduallyDiscrete | Rule::RankPositive | Rule::FreeTransitive | Rule::FiniteUElementary => Vec::new(),
        }
    }

    /// Rebuilds a rule from its stored name and arguments.
    pub fn from_parts(name: &str, args: &[String]) -> Result<Rule> {
        let bad = || Error::InvalidParameter(format!("malformed arguments for {name}: {args:?}"));
        let one = || if args.len() == 1 { Ok(args[0].clone()) } else { Err(bad()) };
        let none = |r: Rule| if args.is_empty() { Ok(r) } else { Err(bad()) };
        match name {
            "rule_extension" if args.len() == 2 => Ok(Rule::Extension { normal: args[0].clone(), quotient: args[1].clone() }),
            "rule_wreath_increase" if args.len() == 2 => Ok(Rule::WreathIncrease { bottom: args[0].clone(), top: args[1].clone() }),
            "rule_infinite_wreath" => Ok(Rule::InfiniteWreath { base: one()? }),
            "rule_wreath_hnn" => Ok(Rule::WreathHnn { base: one()? }),
            "rule_completion_upper" => Ok(Rule::CompletionUpper { pair: one()? }),
            "rule_residually_discrete" => none(Rule::ResiduallyDiscrete),
            "rule_sup_exhaustion" if !args.is_empty() => Ok(Rule::SupExhaustion { parts: args.to_vec() }),
            "rule_perfectize" => Ok(Rule::Perfectize { base: one()? }),
            "rule_local_product_sup" if args.len() >= 3 => {
                let flag = |s: &str, key: &str| match s.strip_prefix(key) {
                    Some("true") => Ok(true),
                    Some("false") => Ok(false),
                    _ => Err(bad()),
                };
                Ok(Rule::LocalProductSup {
                    successor: flag(&args[0], "successor=")?,
                    family: flag(&args[1], "family=")?,
                    factors: args[2..].to_vec(),
                })
            }
            "rule_rank_positive" => none(Rule::RankPositive),
            "rule_free_transitive" => none(Rule::FreeTransitive),
            "rule_finite_u_elementary" => none(Rule::FiniteUElementary),
            _ => Err(Error::InvalidParameter(format!("unknown rule `{name}` with {} arguments", args.len()))),
        }
    }
}

struct Lookup<'a> {
    rule: &'static str,
    premises: &'a [Certificate],
}

impl<'a> Lookup<'a> {
    fn missing(&self, subject: &str, kind: FactKind) -> Error {
        Error::HypothesisMissing { rule: self.rule.into(), hypothesis: format!("{} of {subject}", kind.name()) }
    }

    fn flag(&self, subject: &str, kind: FactKind) -> Result<&'a Certificate> {
        self.premises.iter().find(|c| c.fact.subject == subject && c.fact.kind == kind).ok_or_else(|| self.missing(subject, kind))
    }

    /// The strongest bound of a kind: the largest lower bound or the smallest upper bound.
    fn bound(&self, subject: &str, kind: FactKind) -> Result<(&'a Certificate, Ordinal)> {
        let candidates = self.premises.iter().filter(|c| c.fact.subject == subject && c.fact.kind == kind).filter_map(|c| c.fact.value.clone().map(|v| (c, v)));
        let best = match kind {
            FactKind::LowerBound => candidates.max_by(|a, b| a.1.cmp(&b.1)),
            _ => candidates.min_by(|a, b| a.1.cmp(&b.1)),
        };
        best.ok_or_else(|| self.missing(subject, kind))
    }
}

fn conclude(rule: &Rule, fact: RankFact, used: Vec<&Certificate>) -> Certificate {
    Certificate { fact, rule: rule.name().into(), args: rule.args(), provenance: None, premises: used.into_iter().cloned().collect() }
}

/// The limit of bounds α, α + δ, α + δ·2, …: the terms of α above δ's leading power,
/// followed by the next power of ω.
fn family_limit(first: &Ordinal, step: &Ordinal) -> Ordinal {
    let lead = step.leading_exponent().unwrap_or(0);
    let head: Vec<(u32, u64)> = first.terms().iter().copied().filter(|&(e, _)| e > lead).collect();
    Ordinal::from_terms(&head).add(&Ordinal::omega_pow(lead + 1, 1))
}

/// Applies a rule; the first certificate is the main conclusion, any others are the
/// structural facts the rule also yields.
pub fn apply_rule(rule: &Rule, target: &str, premises: &[Certificate]) -> Result<Vec<Certificate>> {
    use FactKind::*;
    let look = Lookup { rule: rule.name(), premises };
    let omega = Ordinal::omega();
    let out = match rule {
        Rule::Extension { normal, quotient } => {
            let (n, xn) = look.bound(normal, UpperBound)?;
            let (q, xq) = look.bound(quotient, UpperBound)?;
            vec![conclude(rule, RankFact::upper(target, xn.add(&xq)), vec![n, q])]
        }
        Rule::WreathIncrease { bottom, top } => {
            let (lb, x) = look.bound(bottom, LowerBound)?;
            let used = vec![lb, look.flag(bottom, FinitelyGenerated)?, look.flag(bottom, Perfect)?, look.flag(top, Transitive)?, look.flag(top, InfiniteU)?];
            vec![conclude(rule, RankFact::lower(target, x.succ()), used)]
        }
        Rule::InfiniteWreath { base } => {
            let (lb, x) = look.bound(base, LowerBound)?;
            let mut used = vec![lb];
            for k in [FinitelyGenerated, Transitive, Centerless, Perfect] {
                used.push(look.flag(base, k)?);
            }
            vec![conclude(rule, RankFact::lower(target, x.add(&omega).succ()), used)]
        }
        Rule::WreathHnn { base } => {
            let (lb, x) = look.bound(base, LowerBound)?;
            let mut used = vec![lb];
            for k in [FinitelyGenerated, Transitive, Elementary, Perfect] {
                used.push(look.flag(base, k)?);
            }
            let mut out = vec![conclude(rule, RankFact::lower(target, x.add(&omega).add(&Ordinal::nat(2))), used)];
            for k in [FinitelyGenerated, Transitive, Elementary, LzDecomposition] {
                out.push(side_conclusion(rule, target, k, premises)?);
            }
            out
        }
        Rule::CompletionUpper { pair } => {
            let (ub, x) = look.bound(pair, UpperBound)?;
            vec![conclude(rule, RankFact::upper(target, Ordinal::nat(2).add(&x)), vec![ub])]
        }
        Rule::ResiduallyDiscrete => {
            let rd = look.flag(target, ResiduallyDiscrete)?;
            vec![conclude(rule, RankFact::upper(target, Ordinal::nat(2)), vec![rd])]
        }
        Rule::SupExhaustion { parts } => {
            let mut used = Vec::new();
            let mut sup = Ordinal::zero();
            for p in parts {
                let (c, x) = look.bound(p, LowerBound)?;
                used.push(c);
                sup = sup.max(x);
            }
            vec![conclude(rule, RankFact::lower(target, sup.succ()), used)]
        }
        Rule::Perfectize { base } => {
            let (lb, x) = look.bound(base, LowerBound)?;
            let used = vec![lb, look.flag(base, LzDecomposition)?, look.flag(base, Elementary)?];
            let mut out = vec![conclude(rule, RankFact::lower(target, x), used)];
            for k in [Perfect, FinitelyGenerated, Proper, Elementary, Transitive] {
                out.push(side_conclusion(rule, target, k, premises)?);
            }
            out
        }
        Rule::LocalProductSup { factors, successor, family } => {
            if factors.is_empty() {
                return Err(Error::HypothesisMissing { rule: rule.name().into(), hypothesis: "at least one factor".into() });
            }
            let mut used = Vec::new();
            let mut bounds = Vec::new();
            for p in factors {
                let (c, x) = look.bound(p, LowerBound)?;
                used.push(c);
                bounds.push(x);
            }
            let sup = if *family {
                let steps: Vec<Option<Ordinal>> = bounds.windows(2).map(|w| w[1].sub_left(&w[0])).collect();
                match steps.first() {
                    Some(Some(step)) if !step.is_zero() && steps.iter().all(|s| s.as_ref() == Some(step)) => family_limit(&bounds[0], step),
                    _ => {
                        return Err(Error::HypothesisMissing {
                            rule: rule.name().into(),
                            hypothesis: "factor bounds growing by a fixed nonzero step".into(),
                        })
                    }
                }
            } else {
                bounds.iter().max().cloned().unwrap_or_default()
            };
            let value = if *successor { sup.succ() } else { sup };
            vec![conclude(rule, RankFact::lower(target, value), used)]
        }
        Rule::RankPositive => {
            let inf = look.flag(target, Infinite)?;
            vec![conclude(rule, RankFact::lower(target, Ordinal::nat(1)), vec![inf])]
        }
        Rule::FreeTransitive => {
            let ft = look.flag(target, FreeTransitive)?;
            vec![conclude(rule, RankFact::flag(target, Transitive), vec![ft])]
        }
        Rule::FiniteUElementary => {
            let fin = look.flag(target, NontrivialFiniteSubgroup)?;
            vec![conclude(rule, RankFact::flag(target, Elementary), vec![fin])]
        }
    };
    Ok(out)
}

/// Hypotheses on the base behind each structural fact a rule yields besides its bound.
fn side_hypotheses(rule: &Rule, kind: FactKind) -> Option<(&str, Vec<FactKind>)> {
    use FactKind::*;
    match (rule, kind) {
        (Rule::WreathHnn { base }, FinitelyGenerated | Transitive | Elementary) => Some((base, vec![kind])),
        (Rule::WreathHnn { base }, LzDecomposition) => Some((base, vec![])),
        (Rule::Perfectize { base }, Perfect | FinitelyGenerated | Proper | Transitive) => Some((base, vec![LzDecomposition])),
        (Rule::Perfectize { base }, Elementary) => Some((base, vec![LzDecomposition, Elementary])),
        _ => None,
    }
}

fn side_conclusion(rule: &Rule, target: &str, kind: FactKind, premises: &[Certificate]) -> Result<Certificate> {
    let look = Lookup { rule: rule.name(), premises };
    let (base, hyps) = side_hypotheses(rule, kind)
        .ok_or_else(|| Error::InvalidParameter(format!("{} yields no {} fact", rule.name(), kind.name())))?;
    let used = hyps.into_iter().map(|k| look.flag(base, k)).collect::<Result<Vec<_>>>()?;
    Ok(conclude(rule, RankFact::flag(target, kind), used))
}

/// Re-derives every node from its premises; declared leaves are accepted as given.
pub fn check_certificate(cert: &Certificate) -> Result<()> {
    if cert.fact.kind.is_bound() && cert.fact.value.is_none() {
        return Err(Error::InvalidParameter(format!("bound without value for {}", cert.fact.subject)));
    }
    if cert.rule == DECLARED {
        return if cert.premises.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameter("declared facts have no premises".into()))
        };
    }
    for p in &cert.premises {
        check_certificate(p)?;
    }
    let rule = Rule::from_parts(&cert.rule, &cert.args)?;
    let derived = if !cert.fact.kind.is_bound() && side_hypotheses(&rule, cert.fact.kind).is_some() {
        vec![side_conclusion(&rule, &cert.fact.subject, cert.fact.kind, &cert.premises)?]
    } else {
        apply_rule(&rule, &cert.fact.subject, &cert.premises)?
    };
    if derived.iter().any(|d| d.fact == cert.fact) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{} does not yield `{}`", cert.rule, cert.fact)))
    }
}

/// The derivation as an indented proof tree, conclusion first.
pub fn render_certificate(cert: &Certificate) -> String {
    let mut out = String::new();
    render_into(cert, 0, &mut out);
    out
}

fn render_into(cert: &Certificate, indent: usize, out: &mut String) {
    out.push_str(&"  ".repeat(indent));
    out.push_str(&cert.fact.to_string());
    match &cert.provenance {
        Some(p) => out.push_str(&format!("    [{}: {p}]\n", cert.rule)),
        None => out.push_str(&format!("    [{}]\n", cert.rule)),
    }
    for p in &cert.premises {
        render_into(p, indent + 1, out);
    }
}

/// Declared leaves for every flag a constructor set to true, plus a recorded rank bound.
pub fn facts_from_metadata(subject: &str, m: &PairMetadata) -> Vec<Certificate> {
    let flags = [
        (&m.finitely_generated, FactKind::FinitelyGenerated),
        (&m.transitive, FactKind::Transitive),
        (&m.proper, FactKind::Proper),
        (&m.elementary, FactKind::Elementary),
        (&m.perfect, FactKind::Perfect),
        (&m.centerless, FactKind::Centerless),
        (&m.infinite_u, FactKind::InfiniteU),
    ];
    let mut out: Vec<Certificate> = flags
        .into_iter()
        .filter(|(f, _)| f.value == Tri::True)
        .map(|(f, kind)| Certificate::declared(RankFact::flag(subject, kind), f.provenance.clone()))
        .collect();
    if m.infinite_domain.value == Tri::True {
        out.push(Certificate::declared(RankFact::flag(subject, FactKind::Infinite), m.infinite_domain.provenance.clone()));
    }
    if m.lz.is_some() {
        out.push(Certificate::declared(RankFact::flag(subject, FactKind::LzDecomposition), "constructor witness"));
    }
    if let Some(b) = &m.rank_bound {
        out.push(Certificate::declared(RankFact::lower(subject, b.clone()), "recorded bound"));
    }
    out
}

//! Filter presentations and the factorization predicates between them.
//!
//! A declared filter over the integers is generated by a divisibility chain of subgroups
//! m_0 Z ⊇ m_1 Z ⊇ …. Such a filter is {nZ : n divides some m_k}, which is recorded
//! exactly by the supremum of v_p(m_k) for every prime p. All predicates reduce to
//! comparisons of these valuation bounds.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted in a filter presentation.
pub const MAX_MODULUS: i128 = 1_000_000_000_000;

/// A cofinal descending chain of subgroups of Z.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "basis", rename_all = "snake_case")]
pub enum ZBasis {
    /// scale · base^n Z.
    Powers { base: i128, scale: i128 },
    /// Every nonzero subgroup, through the chain lcm(1, …, n+1) Z.
    All,
    /// The prefix least common multiples of a finite list.
    Moduli { moduli: Vec<i128> },
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i128, b: i128) -> Result<i128> {
    (a / gcd(a, b)).checked_mul(b).ok_or(Error::Overflow("filter modulus"))
}

impl ZBasis {
    /// The moduli m_0, …, m_depth of the chain.
    pub fn moduli(&self, depth: usize) -> Result<Vec<i128>> {
        let mut out = Vec::with_capacity(depth + 1);
        match self {
            ZBasis::Powers { base, scale } => {
                let mut m = *scale;
                for _ in 0..=depth {
                    out.push(m);
                    m = m.checked_mul(*base).ok_or(Error::Overflow("filter modulus"))?;
                }
            }
            ZBasis::All => {
                let mut m = 1i128;
                for n in 0..=depth {
                    m = lcm(m, n as i128 + 1)?;
                    out.push(m);
                }
            }
            ZBasis::Moduli { moduli } => {
                let mut m = 1i128;
                for n in 0..=depth {
                    if let Some(&k) = moduli.get(n) {
                        m = lcm(m, k)?;
                    }
                    out.push(m);
                }
            }
        }
        Ok(out)
    }

    pub fn valuations(&self) -> ValuationFilter {
        let mut bounds = BTreeMap::new();
        let default = match self {
            ZBasis::Powers { base, scale } => {
                for (p, k) in factorize(*scale) {
                    bounds.insert(p, Bound::Finite(k));
                }
                for (p, _) in factorize(*base) {
                    bounds.insert(p, Bound::Infinite);
                }
                Bound::Finite(0)
            }
            ZBasis::All => Bound::Infinite,
            ZBasis::Moduli { moduli } => {
                for &m in moduli {
                    for (p, k) in factorize(m) {
                        let e = bounds.entry(p).or_insert(Bound::Finite(0));
                        *e = (*e).max(Bound::Finite(k));
                    }
                }
                Bound::Finite(0)
            }
        };
        ValuationFilter::new(bounds, default)
    }
}

impl fmt::Display for ZBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZBasis::Powers { base, scale: 1 } => write!(f, "powers {base}"),
            ZBasis::Powers { base, scale } => write!(f, "powers {base} scale {scale}"),
            ZBasis::All => write!(f, "all"),
            ZBasis::Moduli { moduli } => {
                write!(f, "moduli")?;
                for m in moduli {
                    write!(f, " {m}")?;
                }
                Ok(())
            }
        }
    }
}

/// Prime factorization by trial division, as (prime, exponent) pairs.
pub fn factorize(n: i128) -> Vec<(u64, u32)> {
    let mut n = n.unsigned_abs();
    let mut out = Vec::new();
    let mut p = 2u128;
    while p * p <= n {
        let mut k = 0;
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p as u64, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n as u64, 1));
    }
    out
}

/// A bound on a p-adic valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(k) => write!(f, "{k}"),
            Bound::Infinite => write!(f, "inf"),
        }
    }
}

/// The filter {nZ : v_p(n) ≤ bound(p) for every p}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationFilter {
    bounds: BTreeMap<u64, Bound>,
    default: Bound,
}

impl ValuationFilter {
    pub fn new(bounds: BTreeMap<u64, Bound>, default: Bound) -> Self {
        let bounds = bounds.into_iter().filter(|(_, b)| *b != default).collect();
        ValuationFilter { bounds, default }
    }

    pub fn bound(&self, p: u64) -> Bound {
        self.bounds.get(&p).copied().unwrap_or(self.default)
    }

    pub fn default_bound(&self) -> Bound {
        self.default
    }

    pub fn contains_modulus(&self, n: i128) -> bool {
        n != 0 && factorize(n).into_iter().all(|(p, k)| Bound::Finite(k) <= self.bound(p))
    }

    fn listed_primes<'a>(&'a self, other: &'a ValuationFilter) -> BTreeSet<u64> {
        self.bounds.keys().chain(other.bounds.keys()).copied().collect()
    }

    /// Smallest prime not listed in either filter, standing in for "all other primes".
    fn generic_prime(&self, other: &ValuationFilter) -> u64 {
        let listed = self.listed_primes(other);
        (2u64..).find(|&p| factorize(p as i128) == [(p, 1)] && !listed.contains(&p)).expect("primes are infinite")
    }

    /// A prime with bound(p) > other.bound(p), if any.
    fn exceeds(&self, other: &ValuationFilter) -> Option<u64> {
        if let Some(p) = self.listed_primes(other).into_iter().find(|&p| self.bound(p) > other.bound(p)) {
            return Some(p);
        }
        (self.default > other.default).then(|| self.generic_prime(other))
    }

    /// Every subgroup of `self` is a subgroup of `other`.
    pub fn is_subset_of(&self, other: &ValuationFilter) -> bool {
        self.exceeds(other).is_none()
    }
}

/// A modulus p^(k+1) just beyond a finite bound k, or p itself for an unbounded one.
fn beyond(p: u64, b: Bound) -> String {
    match b {
        Bound::Finite(k) => format!("{}Z", (p as u128).pow(k + 1)),
        Bound::Infinite => format!("{p}Z"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterKind {
    Declared,
    Schlichting,
    Belyaev,
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FilterKind::Declared => "declared",
            FilterKind::Schlichting => "schlichting",
            FilterKind::Belyaev => "belyaev",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "expr", rename_all = "snake_case")]
pub enum Host {
    Integers,
    Pair(String),
}

impl fmt::Display for Host {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Host::Integers => f.write_str("Z"),
            Host::Pair(expr) => f.write_str(expr),
        }
    }
}

/// A presented G-stable local filter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterSpec {
    pub name: Option<String>,
    pub host: Host,
    pub kind: FilterKind,
    pub basis: Option<ZBasis>,
}

impl FilterSpec {
    pub fn declared(basis: ZBasis) -> FilterSpec {
        FilterSpec { name: None, host: Host::Integers, kind: FilterKind::Declared, basis: Some(basis) }
    }

    pub fn of_pair(expr: impl Into<String>, kind: FilterKind) -> FilterSpec {
        FilterSpec { name: None, host: Host::Pair(expr.into()), kind, basis: None }
    }

    pub fn label(&self) -> String {
        if let Some(n) = &self.name {
            return n.clone();
        }
        match (&self.kind, &self.basis) {
            (FilterKind::Declared, Some(b)) => format!("declared({b})"),
            (k, _) => format!("{k}({})", self.host),
        }
    }

    fn validate(&self) -> std::result::Result<(), String> {
        match (&self.host, self.kind, &self.basis) {
            (Host::Integers, FilterKind::Declared, Some(_)) => Ok(()),
            (Host::Integers, FilterKind::Declared, None) => Err("declared filter needs a basis".into()),
            (Host::Integers, k, _) => Err(format!("{k} filters need a pair host")),
            (Host::Pair(_), FilterKind::Declared, _) => Err("declared filters are supported over the host Z only".into()),
            (Host::Pair(_), _, Some(_)) => Err("a basis line is only allowed for declared filters".into()),
            (Host::Pair(_), _, None) => Ok(()),
        }
    }

    /// Parses a filter file: `host`, `kind`, optional `name` and, for declared
    /// filters, one `basis` line. `#` starts a comment.
    pub fn parse(text: &str) -> Result<FilterSpec> {
        let mut name = None;
        let mut host = None;
        let mut kind = None;
        let mut basis = None;
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            last_line = line_no;
            let err = |reason: String| Error::FilterSyntax { line: line_no, reason };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).map(|(k, r)| (k, r.trim())).unwrap_or((line, ""));
            let set_once = |slot_filled: bool| if slot_filled { Err(err(format!("duplicate `{key}` line"))) } else { Ok(()) };
            match key {
                "name" => {
                    set_once(name.is_some())?;
                    if rest.is_empty() || rest.contains(char::is_whitespace) {
                        return Err(err("name must be a single token".into()));
                    }
                    name = Some(rest.to_string());
                }
                "host" => {
                    set_once(host.is_some())?;
                    host = Some(match rest {
                        "" => return Err(err("missing host".into())),
                        "Z" => Host::Integers,
                        expr => Host::Pair(expr.to_string()),
                    });
                }
                "kind" => {
                    set_once(kind.is_some())?;
                    kind = Some(match rest {
                        "declared" => FilterKind::Declared,
                        "schlichting" => FilterKind::Schlichting,
                        "belyaev" => FilterKind::Belyaev,
                        other => return Err(err(format!("unknown kind `{other}`"))),
                    });
                }
                "basis" => {
                    set_once(basis.is_some())?;
                    basis = Some(parse_basis(rest).map_err(err)?);
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        let end = |reason: &str| Error::FilterSyntax { line: last_line.max(1), reason: reason.into() };
        let spec = FilterSpec {
            name,
            host: host.ok_or_else(|| end("missing `host` line"))?,
            kind: kind.ok_or_else(|| end("missing `kind` line"))?,
            basis,
        };
        spec.validate().map_err(|r| end(&r))?;
        Ok(spec)
    }
}

fn parse_modulus(tok: &str) -> std::result::Result<i128, String> {
    let n: i128 = tok.parse().map_err(|_| format!("`{tok}` is not an integer"))?;
    if !(1..=MAX_MODULUS).contains(&n) {
        return Err(format!("modulus {n} outside 1..={MAX_MODULUS}"));
    }
    Ok(n)
}

fn parse_basis(rest: &str) -> std::result::Result<ZBasis, String> {
    let toks: Vec<&str> = rest.split_whitespace().collect();
    match toks.as_slice() {
        ["all"] => Ok(ZBasis::All),
        ["powers", base] => Ok(ZBasis::Powers { base: parse_modulus(base)?, scale: 1 }),
        ["powers", base, "scale", scale] => Ok(ZBasis::Powers { base: parse_modulus(base)?, scale: parse_modulus(scale)? }),
        ["moduli", list @ ..] if !list.is_empty() => {
            Ok(ZBasis::Moduli { moduli: list.iter().map(|t| parse_modulus(t)).collect::<std::result::Result<_, _>>()? })
        }
        _ => Err(format!("cannot parse basis `{rest}`")),
    }
}

impl fmt::Display for FilterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = &self.name {
            writeln!(f, "name {n}")?;
        }
        writeln!(f, "host {}", self.host)?;
        writeln!(f, "kind {}", self.kind)?;
        if let Some(b) = &self.basis {
            writeln!(f, "basis {b}")?;
        }
        Ok(())
    }
}

/// The outcome of a predicate, with a witness or counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateResult {
    pub predicate: String,
    pub lhs: String,
    pub rhs: String,
    pub result: bool,
    pub witness: Option<String>,
}

fn result(predicate: &str, lhs: &FilterSpec, rhs: &FilterSpec, value: bool, witness: String) -> PredicateResult {
    PredicateResult { predicate: predicate.into(), lhs: lhs.label(), rhs: rhs.label(), result: value, witness: Some(witness) }
}

enum Operands {
    Declared(ValuationFilter, ValuationFilter),
    Pair(FilterKind, FilterKind),
}

fn operands(lhs: &FilterSpec, rhs: &FilterSpec) -> Result<Operands> {
    for s in [lhs, rhs] {
        s.validate().map_err(Error::InvalidParameter)?;
    }
    if lhs.host != rhs.host {
        return Err(Error::FilterMismatch);
    }
    match (&lhs.basis, &rhs.basis) {
        (Some(a), Some(b)) => Ok(Operands::Declared(a.valuations(), b.valuations())),
        (None, None) => Ok(Operands::Pair(lhs.kind, rhs.kind)),
        _ => Err(Error::FilterMismatch),
    }
}

fn undecidable(lhs: &FilterSpec, rhs: &FilterSpec) -> Error {
    Error::UndecidableInclusion(format!("{} against {}", lhs.label(), rhs.label()))
}

/// Some subgroup of the left filter lies in every subgroup of the right one's basis:
/// every V₂ ∈ S₂ contains some V₁ ∈ S₁.
pub fn exists_factorization(lhs: &FilterSpec, rhs: &FilterSpec) -> Result<PredicateResult> {
    const NAME: &str = "factorization";
    match operands(lhs, rhs)? {
        Operands::Declared(d1, d2) => Ok(match d2.exceeds(&d1) {
            None => result(NAME, lhs, rhs, true, "every right basis subgroup contains a left one".into()),
            Some(p) => result(NAME, lhs, rhs, false, format!("{} in the right filter contains no left subgroup", beyond(p, d1.bound(p)))),
        }),
        Operands::Pair(k1, k2) if k1 == k2 => Ok(result(NAME, lhs, rhs, true, "identical filters".into())),
        Operands::Pair(FilterKind::Belyaev, FilterKind::Schlichting) => {
            Ok(result(NAME, lhs, rhs, true, "each W_n is a finite intersection of conjugates of U".into()))
        }
        Operands::Pair(..) => Err(undecidable(lhs, rhs)),
    }
}

/// A factorization whose left subgroups are intersections of the right subgroups above them.
pub fn exists_injective_factorization(lhs: &FilterSpec, rhs: &FilterSpec) -> Result<PredicateResult> {
    const NAME: &str = "injective";
    match operands(lhs, rhs)? {
        Operands::Declared(d1, d2) => {
            if let Some(p) = d2.exceeds(&d1) {
                return Ok(result(NAME, lhs, rhs, false, format!("no factorization: {} has no left subgroup below it", beyond(p, d1.bound(p)))));
            }
            Ok(match d1.exceeds(&d2) {
                None => result(NAME, lhs, rhs, true, "the filters coincide".into()),
                Some(p) => result(
                    NAME,
                    lhs,
                    rhs,
                    false,
                    format!("{} in the left filter is not an intersection of right subgroups", beyond(p, d2.bound(p))),
                ),
            })
        }
        Operands::Pair(k1, k2) if k1 == k2 => Ok(result(NAME, lhs, rhs, true, "identical filters".into())),
        Operands::Pair(..) => Err(undecidable(lhs, rhs)),
    }
}

/// A factorization with discrete kernel: some V₁ ∈ S₁ with V₁ ∩ W₂ ≤ W₁ for suitable
/// W₂ ∈ S₂, for every W₁ ∈ S₁.
pub fn exists_discrete_kernel_factorization(lhs: &FilterSpec, rhs: &FilterSpec) -> Result<PredicateResult> {
    const NAME: &str = "discrete_kernel";
    match operands(lhs, rhs)? {
        Operands::Declared(d1, d2) => {
            if let Some(p) = d2.exceeds(&d1) {
                return Ok(result(NAME, lhs, rhs, false, format!("no factorization: {} has no left subgroup below it", beyond(p, d1.bound(p)))));
            }
            if d1.default_bound() > d2.default_bound() {
                return Ok(result(NAME, lhs, rhs, false, "infinitely many primes are bounded on the right only".into()));
            }
            let excess: Vec<(u64, Bound)> =
                d1.listed_primes(&d2).into_iter().filter(|&p| d1.bound(p) > d2.bound(p)).map(|p| (p, d1.bound(p))).collect();
            if let Some((p, _)) = excess.iter().find(|(_, b)| *b == Bound::Infinite) {
                return Ok(result(NAME, lhs, rhs, false, format!("the {p}-part is unbounded on the left only")));
            }
            let mut v1: u128 = 1;
            for (p, b) in &excess {
                if let Bound::Finite(k) = b {
                    v1 = v1.checked_mul((*p as u128).checked_pow(*k).ok_or(Error::Overflow("kernel witness"))?).ok_or(Error::Overflow("kernel witness"))?;
                }
            }
            Ok(result(NAME, lhs, rhs, true, format!("V1 = {v1}Z")))
        }
        Operands::Pair(k1, k2) if k1 == k2 => Ok(result(NAME, lhs, rhs, true, "identical filters".into())),
        Operands::Pair(..) => Err(undecidable(lhs, rhs)),
    }
}

/// Every subgroup of S' belongs to S.
pub fn subset_factorization(sub: &FilterSpec, sup: &FilterSpec) -> Result<PredicateResult> {
    const NAME: &str = "subset";
    match operands(sub, sup)? {
        Operands::Declared(d1, d2) => Ok(match d1.exceeds(&d2) {
            None => result(NAME, sub, sup, true, "every left basis subgroup lies in the right filter".into()),
            Some(p) => result(NAME, sub, sup, false, format!("{} is not in the right filter", beyond(p, d2.bound(p)))),
        }),
        Operands::Pair(k1, k2) if k1 == k2 => Ok(result(NAME, sub, sup, true, "identical filters".into())),
        Operands::Pair(FilterKind::Schlichting, FilterKind::Belyaev) => {
            Ok(result(NAME, sub, sup, true, "each W_n is a finite intersection of conjugates of U".into()))
        }
        Operands::Pair(..) => Err(undecidable(sub, sup)),
    }
}

/// All four predicates on an ordered pair of filters, skipping undecidable ones.
pub fn compare(lhs: &FilterSpec, rhs: &FilterSpec) -> Result<Vec<PredicateResult>> {
    let mut out = Vec::new();
    for f in [exists_factorization, exists_injective_factorization, exists_discrete_kernel_factorization, subset_factorization] {
        match f(lhs, rhs) {
            Ok(r) => out.push(r),
            Err(Error::UndecidableInclusion(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moduli_chains() {
        assert_eq!(ZBasis::Powers { base: 2, scale: 3 }.moduli(3).unwrap(), vec![3, 6, 12, 24]);
        assert_eq!(ZBasis::All.moduli(4).unwrap(), vec![1, 2, 6, 12, 60]);
        assert_eq!(ZBasis::Moduli { moduli: vec![4, 6] }.moduli(3).unwrap(), vec![4, 12, 12, 12]);
        assert!(ZBasis::Powers { base: 10, scale: 1 }.moduli(60).is_err());
    }

    #[test]
    fn factorization_of_small_numbers() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(97), vec![(97, 1)]);
    }

    #[test]
    fn valuations_normalize() {
        let v = ZBasis::Powers { base: 6, scale: 5 }.valuations();
        assert_eq!(v.bound(2), Bound::Infinite);
        assert_eq!(v.bound(5), Bound::Finite(1));
        assert_eq!(v.bound(7), Bound::Finite(0));
        assert!(v.contains_modulus(5 * 36));
        assert!(!v.contains_modulus(25));
    }
}

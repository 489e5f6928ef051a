//! The G_n tower: alternating wreath-HNN and perfectization steps with ξ(G_n) ≥ ω·n + 2.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::ordinal::Ordinal;
use super::rules::{apply_rule, Certificate, FactKind, RankFact, Rule};

/// Largest tower level built.
pub const MAX_TOWER_LEVEL: u32 = 32;

/// The seed pair of the tower and its declared facts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSeed {
    /// Construction expression of the seed.
    pub expr: String,
    /// Contraction point used for the first HNN step.
    pub contraction: String,
    pub facts: Vec<Certificate>,
}

/// Facts the seed must carry.
pub const SEED_HYPOTHESES: [FactKind; 5] =
    [FactKind::Infinite, FactKind::FinitelyGenerated, FactKind::Perfect, FactKind::NontrivialFiniteSubgroup, FactKind::FreeTransitive];

impl TowerSeed {
    /// A seed with all required facts declared by the user.
    pub fn declared(expr: impl Into<String>, contraction: impl Into<String>) -> TowerSeed {
        let expr = expr.into();
        let facts = SEED_HYPOTHESES.iter().map(|&k| Certificate::declared(RankFact::flag("G_0", k), "seed declaration")).collect();
        TowerSeed { expr, contraction: contraction.into(), facts }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerCertificate {
    pub n: u32,
    pub bound: Ordinal,
    pub certificate: Certificate,
    /// Construction expressions of G_0, …, G_n and E_1, …, E_{n-1}.
    pub expressions: BTreeMap<String, String>,
}

/// Depth of the iterated wreath product written into tower expressions.
pub const TOWER_WREATH_DEPTH: u32 = 2;

fn hnn_expr(base: &str, point: &str) -> String {
    format!("hnn(iterwreath({base}, {TOWER_WREATH_DEPTH}), contraction({point}))")
}

/// Builds the certificate for ξ(G_n, U_n) ≥ ω·n + 2.
///
/// G_1 is the wreath-HNN extension of the seed G_0. For k ≥ 1, E_k = perfectize(G_k)
/// and G_{k+1} is the wreath-HNN extension of E_k; perfectization contracts with the
/// point c5·base.
pub fn build_gn_tower(n: u32, seed: &TowerSeed) -> Result<TowerCertificate> {
    if n == 0 {
        return Err(Error::InvalidParameter("the tower starts at n = 1".into()));
    }
    if n > MAX_TOWER_LEVEL {
        return Err(Error::ResourceCap(format!("tower level {n} exceeds {MAX_TOWER_LEVEL}")));
    }
    let mut facts = seed.facts.clone();
    for kind in SEED_HYPOTHESES {
        if !facts.iter().any(|c| c.fact.subject == "G_0" && c.fact.kind == kind) {
            return Err(Error::HypothesisMissing { rule: "build_gn_tower".into(), hypothesis: format!("{} of G_0", kind.name()) });
        }
    }
    for rule in [Rule::RankPositive, Rule::FreeTransitive, Rule::FiniteUElementary] {
        facts.extend(apply_rule(&rule, "G_0", &facts)?);
    }
    let mut expressions = BTreeMap::from([("G_0".to_string(), seed.expr.clone())]);
    let mut base = "G_0".to_string();
    let mut base_expr = seed.expr.clone();
    let mut point = seed.contraction.clone();
    let mut main = None;
    for k in 1..=n {
        let g = format!("G_{k}");
        let step = apply_rule(&Rule::WreathHnn { base: base.clone() }, &g, &facts)?;
        let g_expr = hnn_expr(&base_expr, &point);
        expressions.insert(g.clone(), g_expr.clone());
        main = Some(step[0].clone());
        facts = step;
        if k == n {
            break;
        }
        let e = format!("E_{k}");
        facts = apply_rule(&Rule::Perfectize { base: g.clone() }, &e, &facts)?;
        base_expr = format!("perfectize({g_expr})");
        expressions.insert(e.clone(), base_expr.clone());
        base = e;
        point = "c5".into();
    }
    let certificate = main.expect("n >= 1");
    let bound = certificate.fact.value.clone().expect("lower bound");
    Ok(TowerCertificate { n, bound, certificate, expressions })
}

/// The local direct product over the whole tower: ξ ≥ sup(ω·n + 2) + 1 = ω² + 1.
pub fn tower_local_product(seed: &TowerSeed) -> Result<Certificate> {
    let premises = vec![build_gn_tower(1, seed)?.certificate, build_gn_tower(2, seed)?.certificate];
    let rule = Rule::LocalProductSup { factors: vec!["G_1".into(), "G_2".into()], successor: true, family: true };
    Ok(apply_rule(&rule, "local product of G_n", &premises)?.remove(0))
}

//! Ordinal arithmetic and certified decomposition-rank bounds.

pub mod ordinal;
pub mod rules;
pub mod tower;

pub use ordinal::Ordinal;
pub use rules::{apply_rule, check_certificate, facts_from_metadata, render_certificate, Certificate, FactKind, RankFact, Rule};
pub use tower::{build_gn_tower, tower_local_product, TowerCertificate, TowerSeed};

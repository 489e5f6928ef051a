//! The permutation Hecke pair: generators, an action oracle, metadata and the shared coset caches.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{self, PairModel, Space};
use crate::point::Point;
use crate::rank::ordinal::Ordinal;
use crate::schreier::CosetCache;
use crate::words::{Generator, GroupWord, Letter};

pub const DEFAULT_COSET_CAP: usize = 1_000_000;
pub const DEFAULT_ORBIT_CAP: usize = 100_000;
pub const COSET_CAP_VAR: &str = "HECKE_COSET_CAP";
pub const ORBIT_CAP_VAR: &str = "HECKE_ORBIT_CAP";

/// Three-valued truth: unknown is never coerced to false.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    pub fn is_true(self) -> bool {
        self == Tri::True
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tri::True => "true",
            Tri::False => "false",
            Tri::Unknown => "unknown",
        };
        write!(f, "{s}")
    }
}

/// A metadata flag with the rule (or declaration) that justified it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flag {
    pub value: Tri,
    pub provenance: String,
}

impl Flag {
    pub fn by(value: bool, rule: impl Into<String>) -> Flag {
        Flag { value: Tri::from_bool(value), provenance: rule.into() }
    }

    pub fn unknown() -> Flag {
        Flag { value: Tri::Unknown, provenance: "none".into() }
    }

    pub fn is_true(&self) -> bool {
        self.value.is_true()
    }
}

/// How a pair was built, as an expression tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "node")]
pub enum Construction {
    Builtin { name: String, params: Vec<i64> },
    TrivialU { group: Box<Construction> },
    Wreath { bottom: Box<Construction>, top: Box<Construction> },
    IterWreath { pair: Box<Construction>, k: u32 },
    Hnn { pair: Box<Construction>, point: Point },
    Perfectize { pair: Box<Construction> },
    Named { name: String },
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::Builtin { name, params } => {
                write!(f, "{name}(")?;
                for (i, p) in params.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            Construction::TrivialU { group } => write!(f, "trivial_u({group})"),
            Construction::Wreath { bottom, top } => write!(f, "wreath({bottom}, {top})"),
            Construction::IterWreath { pair, k } => write!(f, "iterwreath({pair}, {k})"),
            Construction::Hnn { pair, point } => write!(f, "hnn({pair}, contraction({point}))"),
            Construction::Perfectize { pair } => write!(f, "perfectize({pair})"),
            Construction::Named { name } => write!(f, "{name}"),
        }
    }
}

/// Witness that G = L ⋊ ⟨t⟩: generator `t` spans the Z factor, every other generator
/// lies in L, and their t-conjugates together with U generate L.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LzWitness {
    pub t: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairMetadata {
    pub finitely_generated: Flag,
    /// F with ⟨F ∪ U⟩ = G.
    pub fg_witness: Option<Vec<GroupWord>>,
    pub transitive: Flag,
    pub proper: Flag,
    pub elementary: Flag,
    pub perfect: Flag,
    pub centerless: Flag,
    pub infinite_u: Flag,
    /// Whether the permutation domain is infinite.
    pub infinite_domain: Flag,
    pub rank_bound: Option<Ordinal>,
    pub lz: Option<LzWitness>,
    pub construction: Construction,
}

impl PairMetadata {
    pub fn unknown(construction: Construction) -> Self {
        PairMetadata {
            finitely_generated: Flag::unknown(),
            fg_witness: None,
            transitive: Flag::unknown(),
            proper: Flag::unknown(),
            elementary: Flag::unknown(),
            perfect: Flag::unknown(),
            centerless: Flag::unknown(),
            infinite_u: Flag::unknown(),
            infinite_domain: Flag::unknown(),
            rank_bound: None,
            lz: None,
            construction,
        }
    }

    /// A declared flag that needs evidence must carry it.
    pub fn check_consistent(&self) -> Result<()> {
        if self.finitely_generated.is_true() && self.fg_witness.is_none() {
            return Err(Error::InvalidParameter("finitely generated flag without witness F".into()));
        }
        Ok(())
    }
}

/// Enumeration guardrails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub coset: usize,
    pub orbit: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { coset: DEFAULT_COSET_CAP, orbit: DEFAULT_ORBIT_CAP }
    }
}

impl Caps {
    /// Defaults overridden by `HECKE_COSET_CAP` / `HECKE_ORBIT_CAP` when set.
    pub fn from_env() -> Result<Caps> {
        let read = |var: &str, default: usize| -> Result<usize> {
            match std::env::var(var) {
                Ok(v) => v
                    .trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| Error::InvalidParameter(format!("{var} must be a positive integer, got `{v}`"))),
                Err(_) => Ok(default),
            }
        };
        Ok(Caps { coset: read(COSET_CAP_VAR, DEFAULT_COSET_CAP)?, orbit: read(ORBIT_CAP_VAR, DEFAULT_ORBIT_CAP)? })
    }
}

/// A pair (G, U) acting on G/U, and on a permutation domain X.
#[derive(Debug)]
pub struct PermutationHeckePair {
    model: Arc<dyn PairModel>,
    pub metadata: PairMetadata,
    caps: Caps,
    coset_cache: CosetCache,
    domain_cache: CosetCache,
}

impl PermutationHeckePair {
    pub fn new(model: Arc<dyn PairModel>, metadata: PairMetadata) -> Result<Self> {
        crate::words::check_alphabet(model.generators())?;
        metadata.check_consistent()?;
        let coset_cache = CosetCache::new(model.base(Space::Coset));
        let domain_cache = CosetCache::new(model.base(Space::Domain));
        Ok(PermutationHeckePair { model, metadata, caps: Caps::default(), coset_cache, domain_cache })
    }

    pub fn with_caps(mut self, caps: Caps) -> Self {
        self.caps = caps;
        self
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn model(&self) -> &Arc<dyn PairModel> {
        &self.model
    }

    pub fn generators(&self) -> &[Generator] {
        self.model.generators()
    }

    pub fn name(&self) -> String {
        self.metadata.construction.to_string()
    }

    pub fn cache(&self, space: Space) -> &CosetCache {
        match space {
            Space::Coset => &self.coset_cache,
            Space::Domain => &self.domain_cache,
        }
    }

    pub fn base(&self, space: Space) -> Point {
        self.model.base(space)
    }

    pub fn parse_word(&self, text: &str) -> Result<GroupWord> {
        GroupWord::parse(text, self.generators())
    }

    pub fn show(&self, w: &GroupWord) -> String {
        w.display(self.generators()).to_string()
    }

    pub fn act_letter(&self, space: Space, l: Letter, p: &Point) -> Result<Point> {
        self.model.act(space, l, p)
    }

    pub fn act_point(&self, space: Space, w: &GroupWord, p: &Point) -> Result<Point> {
        model::act_word(self.model.as_ref(), space, w, p)
    }

    pub fn u_generators(&self, points: &[(Space, Point)]) -> Result<Vec<GroupWord>> {
        self.model.u_generators(points)
    }

    /// U-generators valid near the base coset.
    pub fn u_generators_at_base(&self) -> Result<Vec<GroupWord>> {
        self.u_generators(&[(Space::Coset, self.base(Space::Coset)), (Space::Domain, self.base(Space::Domain))])
    }

    /// True when `w` lies in U, decided by the coset action.
    pub fn in_u(&self, w: &GroupWord) -> Result<bool> {
        let base = self.base(Space::Coset);
        Ok(self.act_point(Space::Coset, w, &base)? == base)
    }

    pub fn normal_form(&self, w: &GroupWord) -> Option<Result<Point>> {
        model::normal_form(self.model.as_ref(), w)
    }

    pub fn has_normal_form(&self) -> bool {
        self.model.element_identity().is_some()
    }

    pub fn is_identity(&self, w: &GroupWord) -> Option<Result<bool>> {
        model::is_identity(self.model.as_ref(), w)
    }
}

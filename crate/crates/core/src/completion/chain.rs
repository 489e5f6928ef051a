//! Cauchy coset chains: coherent sequences W₀g₀ ⊇ W₁g₁ ⊇ … with their group operations.
//!
//! Over a Schlichting filter the right coset W_n g is determined by the map c ↦ g⁻¹c on
//! the ball B_n, since h ∈ W_n g exactly when h⁻¹ and g⁻¹ agree on B_n. A ball chain
//! records these keys level by level. Over the integers with a declared filter of
//! subgroups m_n Z the level-n coset is a residue class.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pair::PermutationHeckePair;
use crate::schreier::{act, enumerate_ball, CosetId};
use crate::words::{GroupWord, Letter};

use super::filter::ZBasis;

/// The key of W_n g: the map c ↦ g⁻¹c on B_n.
pub type LevelKey = BTreeMap<CosetId, CosetId>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallChain {
    pub pair: String,
    pub levels: Vec<LevelKey>,
    /// A word g with level-n coset W_n g at every recorded level, when one is known.
    pub representative: Option<GroupWord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueChain {
    pub basis: ZBasis,
    pub moduli: Vec<i128>,
    pub residues: Vec<i128>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "host", rename_all = "snake_case")]
pub enum CosetChain {
    Ball(BallChain),
    Residue(ResidueChain),
}

impl CosetChain {
    /// The deepest recorded level.
    pub fn depth(&self) -> usize {
        match self {
            CosetChain::Ball(c) => c.levels.len() - 1,
            CosetChain::Residue(c) => c.residues.len() - 1,
        }
    }

    /// W_{n+1}g_{n+1} ⊆ W_n g_n at every recorded level.
    pub fn is_coherent(&self) -> bool {
        match self {
            CosetChain::Ball(c) => c.levels.windows(2).all(|w| w[0].iter().all(|(k, v)| w[1].get(k) == Some(v))),
            CosetChain::Residue(c) => {
                c.residues.windows(2).zip(&c.moduli).all(|(r, &m)| (r[1] - r[0]).rem_euclid(m) == 0)
                    && c.residues.iter().zip(&c.moduli).all(|(&r, &m)| (0..m).contains(&r))
            }
        }
    }

    /// Every recorded coset is the subgroup W_n itself.
    pub fn is_identity(&self) -> bool {
        match self {
            CosetChain::Ball(c) => c.levels.iter().all(|l| l.iter().all(|(k, v)| k == v)),
            CosetChain::Residue(c) => c.residues.iter().all(|&r| r == 0),
        }
    }

    /// The chain cut down to levels 0..=depth.
    pub fn truncate(&self, depth: usize) -> CosetChain {
        let mut out = self.clone();
        match &mut out {
            CosetChain::Ball(c) => c.levels.truncate(depth + 1),
            CosetChain::Residue(c) => {
                c.residues.truncate(depth + 1);
                c.moduli.truncate(depth + 1);
            }
        }
        out
    }

    /// Human-readable level-n coset.
    pub fn describe_level(&self, n: usize) -> Option<String> {
        match self {
            CosetChain::Ball(c) => c.levels.get(n).map(|l| {
                let parts: Vec<String> = l.iter().map(|(k, v)| format!("{k}->{v}")).collect();
                format!("W_{n} g with g^-1 = {{{}}}", parts.join(", "))
            }),
            CosetChain::Residue(c) => c.residues.get(n).map(|r| format!("{}Z + {r}", c.moduli[n])),
        }
    }
}

/// The principal chain (W_n w)_{n ≤ depth} of a word.
pub fn chain_of(pair: &PermutationHeckePair, w: &GroupWord, depth: usize) -> Result<CosetChain> {
    let w_inv = w.inverse();
    let ball = enumerate_ball(pair, depth)?;
    let mut full = LevelKey::new();
    for &c in &ball.members {
        full.insert(c, act(pair, &w_inv, c)?);
    }
    let mut levels = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        let members = enumerate_ball(pair, n)?.members;
        levels.push(members.iter().map(|c| (*c, full[c])).collect());
    }
    Ok(CosetChain::Ball(BallChain { pair: pair.name(), levels, representative: Some(w.clone()) }))
}

/// The principal chain (m_n Z + k)_{n ≤ depth} in the integers.
pub fn chain_of_int(basis: &ZBasis, k: i128, depth: usize) -> Result<CosetChain> {
    let moduli = basis.moduli(depth)?;
    let residues = moduli.iter().map(|&m| k.rem_euclid(m)).collect();
    Ok(CosetChain::Residue(ResidueChain { basis: basis.clone(), moduli, residues }))
}

/// A chain in the integers from explicit level residues, checked for coherence.
pub fn residue_chain(basis: &ZBasis, residues: Vec<i128>) -> Result<CosetChain> {
    if residues.is_empty() {
        return Err(Error::InvalidParameter("a chain needs at least level 0".into()));
    }
    let moduli = basis.moduli(residues.len() - 1)?;
    let residues = residues.iter().zip(&moduli).map(|(&r, &m)| r.rem_euclid(m)).collect();
    let chain = CosetChain::Residue(ResidueChain { basis: basis.clone(), moduli, residues });
    if !chain.is_coherent() {
        return Err(Error::InvalidParameter("residues are not coherent".into()));
    }
    Ok(chain)
}

/// Composes level keys: level n of the product uses the smallest recorded level m of
/// `g` whose ball contains the image of B_n under `f`'s key.
fn multiply_keys(f: &[LevelKey], g: &[LevelKey]) -> Vec<LevelKey> {
    let mut out = Vec::new();
    for kf in f {
        let Some(kg) = g.iter().find(|kg| kf.values().all(|v| kg.contains_key(v))) else {
            break;
        };
        out.push(kf.iter().map(|(c, v)| (*c, kg[v])).collect());
    }
    out
}

/// Inverts level keys: level n uses the smallest recorded level m whose key image covers B_n.
fn invert_keys(f: &[LevelKey]) -> Vec<LevelKey> {
    let mut out = Vec::new();
    for target in f {
        let Some(km) = f.iter().find(|km| {
            let image: BTreeSet<&CosetId> = km.values().collect();
            target.keys().all(|c| image.contains(c))
        }) else {
            break;
        };
        let inverse: BTreeMap<CosetId, CosetId> = km.iter().map(|(c, v)| (*v, *c)).collect();
        out.push(target.keys().map(|c| (*c, inverse[c])).collect());
    }
    out
}

fn same_host(f: &CosetChain, g: &CosetChain) -> Result<()> {
    match (f, g) {
        (CosetChain::Ball(a), CosetChain::Ball(b)) if a.pair == b.pair => Ok(()),
        (CosetChain::Residue(a), CosetChain::Residue(b)) if a.basis == b.basis => Ok(()),
        _ => Err(Error::FilterMismatch),
    }
}

/// The product chain on every level the recorded data determines.
pub fn chain_multiply(f: &CosetChain, g: &CosetChain) -> Result<CosetChain> {
    same_host(f, g)?;
    match (f, g) {
        (CosetChain::Ball(a), CosetChain::Ball(b)) => {
            let levels = multiply_keys(&a.levels, &b.levels);
            if levels.is_empty() {
                return Err(Error::DepthInsufficient { level: 0 });
            }
            let representative = a.representative.as_ref().zip(b.representative.as_ref()).map(|(x, y)| x.mul(y));
            Ok(CosetChain::Ball(BallChain { pair: a.pair.clone(), levels, representative }))
        }
        (CosetChain::Residue(a), CosetChain::Residue(b)) => {
            let depth = a.residues.len().min(b.residues.len());
            let moduli = a.moduli[..depth].to_vec();
            let residues = (0..depth).map(|n| (a.residues[n] + b.residues[n]).rem_euclid(moduli[n])).collect();
            Ok(CosetChain::Residue(ResidueChain { basis: a.basis.clone(), moduli, residues }))
        }
        _ => unreachable!("hosts checked above"),
    }
}

/// The product chain through level `depth`, or the first undetermined level.
pub fn chain_multiply_to(f: &CosetChain, g: &CosetChain, depth: usize) -> Result<CosetChain> {
    let product = chain_multiply(f, g)?;
    if product.depth() < depth {
        return Err(Error::DepthInsufficient { level: product.depth() + 1 });
    }
    Ok(product.truncate(depth))
}

/// The inverse chain on every level the recorded data determines.
pub fn chain_invert(f: &CosetChain) -> Result<CosetChain> {
    match f {
        CosetChain::Ball(a) => {
            let levels = invert_keys(&a.levels);
            if levels.is_empty() {
                return Err(Error::DepthInsufficient { level: 0 });
            }
            let representative = a.representative.as_ref().map(GroupWord::inverse);
            Ok(CosetChain::Ball(BallChain { pair: a.pair.clone(), levels, representative }))
        }
        CosetChain::Residue(a) => {
            let residues = a.residues.iter().zip(&a.moduli).map(|(&r, &m)| (-r).rem_euclid(m)).collect();
            Ok(CosetChain::Residue(ResidueChain { basis: a.basis.clone(), moduli: a.moduli.clone(), residues }))
        }
    }
}

/// A chain of left cosets g_n W_n, keyed by c ↦ g_n c on B_n, with a word lying in both
/// the left and the right coset at each level where one was found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeftChain {
    pub chain: CosetChain,
    pub witnesses: Vec<Option<GroupWord>>,
}

/// Longest word tried when searching for a common element of a left and a right coset.
pub const EXCHANGE_SEARCH_LENGTH: usize = 6;

/// Re-expresses a right-coset chain as a left-coset chain generating the same filter.
///
/// Level n of the left chain is the left coset hW_n with h = g_m for a deeper level m,
/// which is exactly the inverse chain's level-n key. Each level is verified by a word
/// meeting both cosets: the chain's representative if it has one, otherwise the first
/// word found by breadth-first search up to [`EXCHANGE_SEARCH_LENGTH`].
pub fn left_right_exchange(pair: Option<&PermutationHeckePair>, chain: &CosetChain) -> Result<LeftChain> {
    if !chain.is_coherent() {
        return Err(Error::InvalidParameter("chain is not coherent".into()));
    }
    let CosetChain::Ball(right) = chain else {
        let n = chain.depth() + 1;
        return Ok(LeftChain { chain: chain.clone(), witnesses: vec![None; n] });
    };
    let left = chain_invert(chain)?;
    let CosetChain::Ball(left_keys) = &left else { unreachable!("inverse of a ball chain") };
    let mut witnesses = Vec::with_capacity(left_keys.levels.len());
    for (n, lk) in left_keys.levels.iter().enumerate() {
        let rk = &right.levels[n];
        let found = match (&right.representative, pair) {
            (Some(w), _) => Some(w.clone()),
            (None, Some(p)) => search_common(p, lk, rk)?,
            (None, None) => None,
        };
        if let (Some(w), Some(p)) = (&found, pair) {
            if !in_left_and_right(p, w, lk, rk)? {
                return Err(Error::InvalidParameter(format!("exchange check failed at level {n}")));
            }
        }
        witnesses.push(found);
    }
    Ok(LeftChain { chain: left, witnesses })
}

fn in_left_and_right(pair: &PermutationHeckePair, w: &GroupWord, left: &LevelKey, right: &LevelKey) -> Result<bool> {
    let w_inv = w.inverse();
    for (c, v) in left {
        if act(pair, w, *c)? != *v {
            return Ok(false);
        }
    }
    for (c, v) in right {
        if act(pair, &w_inv, *c)? != *v {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Breadth-first search over reduced words for an element of both cosets.
fn search_common(pair: &PermutationHeckePair, left: &LevelKey, right: &LevelKey) -> Result<Option<GroupWord>> {
    let letters: Vec<Letter> = (0..pair.generators().len()).flat_map(|g| [Letter::pos(g), Letter::neg(g)]).collect();
    let mut queue = VecDeque::from([GroupWord::identity()]);
    let mut seen = HashSet::from([GroupWord::identity()]);
    while let Some(w) = queue.pop_front() {
        if in_left_and_right(pair, &w, left, right)? {
            return Ok(Some(w));
        }
        if w.len() >= EXCHANGE_SEARCH_LENGTH {
            continue;
        }
        for &l in &letters {
            let next = GroupWord::from_letters([l]).mul(&w);
            if next.len() > w.len() && seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

//! Schlichting level subgroups W_n and ball approximants.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::pair::PermutationHeckePair;
use crate::schreier::{act, enumerate_ball, CosetBall, CosetId};
use crate::words::{GroupWord, Letter};

/// W_n: the pointwise stabilizer of the coset ball B_n.
#[derive(Debug, Clone)]
pub struct LevelSubgroup<'a> {
    pair: &'a PermutationHeckePair,
    pub level: usize,
    pub ball: CosetBall,
}

pub fn schlichting_level_subgroup(pair: &PermutationHeckePair, n: usize) -> Result<LevelSubgroup<'_>> {
    Ok(LevelSubgroup { pair, level: n, ball: enumerate_ball(pair, n)? })
}

impl LevelSubgroup<'_> {
    pub fn contains(&self, w: &GroupWord) -> Result<bool> {
        for &c in &self.ball.members {
            if act(self.pair, w, c)? != c {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Membership in g·W_n·g⁻¹, the pointwise stabilizer of g·B_n.
    pub fn conjugate_contains(&self, g: &GroupWord, w: &GroupWord) -> Result<bool> {
        self.contains(&g.inverse().mul(w).mul(g))
    }

    /// The points g·B_n fixed by g·W_n·g⁻¹.
    pub fn conjugate_ball(&self, g: &GroupWord) -> Result<BTreeSet<CosetId>> {
        self.ball.members.iter().map(|&c| act(self.pair, g, c)).collect()
    }

    /// Words g_c with g_c·U = c for each ball member, so W_n = ⋂ g_c U g_c⁻¹.
    pub fn coset_representatives(&self) -> BTreeMap<CosetId, GroupWord> {
        let mut reps = BTreeMap::from([(CosetId(0), GroupWord::identity())]);
        let mut queue = VecDeque::from([CosetId(0)]);
        let letters: Vec<Letter> = (0..self.pair.generators().len()).flat_map(|g| [Letter::pos(g), Letter::neg(g)]).collect();
        while let Some(c) = queue.pop_front() {
            for &l in &letters {
                if let Some(d) = self.ball.edge(c, l) {
                    if !reps.contains_key(&d) {
                        let w = GroupWord::from_letters([l]).mul(&reps[&c]);
                        reps.insert(d, w);
                        queue.push_back(d);
                    }
                }
            }
        }
        reps
    }
}

/// The partial action of a word on B_n: defined where the image stays inside B_n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallApproximant {
    pub level: usize,
    pub map: BTreeMap<CosetId, CosetId>,
    pub undefined: BTreeSet<CosetId>,
}

pub fn approximate(pair: &PermutationHeckePair, w: &GroupWord, n: usize) -> Result<BallApproximant> {
    let ball = enumerate_ball(pair, n)?;
    let mut map = BTreeMap::new();
    let mut undefined = BTreeSet::new();
    for &c in &ball.members {
        let d = act(pair, w, c)?;
        if ball.contains(d) {
            map.insert(c, d);
        } else {
            undefined.insert(c);
        }
    }
    Ok(BallApproximant { level: n, map, undefined })
}

impl BallApproximant {
    pub fn apply(&self, c: CosetId) -> Option<CosetId> {
        self.map.get(&c).copied()
    }

    pub fn domain(&self) -> BTreeSet<CosetId> {
        self.map.keys().copied().collect()
    }

    pub fn is_injective(&self) -> bool {
        let images: BTreeSet<CosetId> = self.map.values().copied().collect();
        images.len() == self.map.len()
    }

    /// `self ∘ other`, defined where `other` is defined and `self` is defined at the image.
    pub fn compose(&self, other: &BallApproximant) -> BallApproximant {
        let mut map = BTreeMap::new();
        let mut undefined = BTreeSet::new();
        let all: BTreeSet<CosetId> = other.map.keys().chain(other.undefined.iter()).copied().collect();
        for c in all {
            match other.apply(c).and_then(|d| self.apply(d)) {
                Some(e) => {
                    map.insert(c, e);
                }
                None => {
                    undefined.insert(c);
                }
            }
        }
        BallApproximant { level: self.level.min(other.level), map, undefined }
    }

    /// The restriction to a smaller ball: defined where the image stays inside it.
    pub fn restrict(&self, ball: &CosetBall) -> BallApproximant {
        let mut map = BTreeMap::new();
        let mut undefined = BTreeSet::new();
        for &c in &ball.members {
            match self.apply(c) {
                Some(d) if ball.contains(d) => {
                    map.insert(c, d);
                }
                _ => {
                    undefined.insert(c);
                }
            }
        }
        BallApproximant { level: ball.radius, map, undefined }
    }

    /// Agreement with `other` wherever both are defined.
    pub fn agrees_with(&self, other: &BallApproximant) -> bool {
        self.map.iter().all(|(c, d)| other.apply(*c).is_none_or(|e| e == *d))
    }
}

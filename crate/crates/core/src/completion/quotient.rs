//! Local quotients: the image of U in the symmetric group of a U-invariant finite set.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::Space;
use crate::pair::PermutationHeckePair;
use crate::perm::{Perm, StabilizerChain};
use crate::schreier::{act, enumerate_ball, point_of, u_orbit_ids, CosetId};
use crate::words::GroupWord;

/// One term of the inverse system whose limit is the closure of U in the completion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalQuotient {
    pub level: usize,
    /// The U-invariant closure of B_n, sorted.
    pub points: Vec<CosetId>,
    /// The images of the U-generators, on positions in `points`.
    pub generators: Vec<Perm>,
    pub order: u128,
}

/// The U-invariant closure of a set of cosets.
pub fn u_closure(pair: &PermutationHeckePair, cosets: &BTreeSet<CosetId>) -> Result<BTreeSet<CosetId>> {
    let mut out = BTreeSet::new();
    for &c in cosets {
        if !out.contains(&c) {
            out.extend(u_orbit_ids(pair, c, pair.caps().orbit)?);
        }
    }
    Ok(out)
}

/// The permutation group induced by U on the U-closure of B_n.
pub fn local_quotients(pair: &PermutationHeckePair, n: usize) -> Result<LocalQuotient> {
    let ball = enumerate_ball(pair, n)?;
    let closure = u_closure(pair, &ball.member_set())?;
    let points: Vec<CosetId> = closure.into_iter().collect();
    let request = points.iter().map(|&c| Ok((Space::Coset, point_of(pair, Space::Coset, c)?))).collect::<Result<Vec<_>>>()?;
    let words = pair.u_generators(&request)?;
    let generators = words.iter().map(|w| permutation_of(pair, w, &points)).collect::<Result<Vec<_>>>()?;
    let order = StabilizerChain::new(points.len(), &generators)?.order()?;
    Ok(LocalQuotient { level: n, points, generators, order })
}

/// The permutation a word induces on an invariant set, on positions.
pub fn permutation_of(pair: &PermutationHeckePair, w: &GroupWord, points: &[CosetId]) -> Result<Perm> {
    points
        .iter()
        .map(|&c| {
            let d = act(pair, w, c)?;
            points.binary_search(&d).map_err(|_| crate::Error::InvalidParameter(format!("coset {d} escapes the invariant set")))
        })
        .collect()
}

//! Commensuration indices and desk-scale verification of the Hecke axioms.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Space;
use crate::pair::{PermutationHeckePair, Tri};
use crate::point::Point;
use crate::schreier::{self, subgroup_orbit, CosetId};
use crate::words::{GroupWord, Letter};

pub const DEFAULT_DEPTH: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    /// Fail dominates unknown, which dominates pass.
    pub fn combine(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Unknown, _) | (_, Status::Unknown) => Status::Unknown,
            _ => Status::Pass,
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Unknown => "UNKNOWN",
        };
        write!(f, "{s}")
    }
}

/// |U : U ∩ gUg⁻¹| and |gUg⁻¹ : U ∩ gUg⁻¹| for one element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommReport {
    pub element: String,
    pub idx_left: u64,
    pub idx_right: u64,
    pub depth: usize,
}

/// Size of the U-orbit of the coset gU, which is |U : U ∩ gUg⁻¹|.
pub fn left_index(pair: &PermutationHeckePair, g: &GroupWord) -> Result<u64> {
    let start = pair.act_point(Space::Coset, g, &pair.base(Space::Coset))?;
    let cap = pair.caps().orbit;
    let orbit = schreier::u_orbit(pair, Space::Coset, &start, cap)
        .map_err(|e| cap_side(e, "left"))?;
    Ok(orbit.len() as u64)
}

/// Size of the gUg⁻¹-orbit of the base coset, which is |gUg⁻¹ : U ∩ gUg⁻¹|.
///
/// Computed with conjugated generators g·u·g⁻¹, where each u is requested at the
/// preimages g⁻¹·p of the orbit points found so far.
pub fn right_index(pair: &PermutationHeckePair, g: &GroupWord) -> Result<u64> {
    let base = pair.base(Space::Coset);
    let cap = pair.caps().orbit;
    let g_inv = g.inverse();
    let request = |points: &[Point]| -> Result<Vec<GroupWord>> {
        let pulled: Vec<(Space, Point)> = points
            .iter()
            .map(|p| Ok((Space::Coset, pair.act_point(Space::Coset, &g_inv, p)?)))
            .collect::<Result<_>>()?;
        Ok(pair.u_generators(&pulled)?.iter().map(|u| g.conjugate(u)).collect())
    };
    let mut gens = request(std::slice::from_ref(&base))?;
    loop {
        let orbit = subgroup_orbit(pair, Space::Coset, &gens, &base, cap).map_err(|e| cap_side(e, "right"))?;
        let known: HashSet<GroupWord> = gens.iter().cloned().collect();
        let fresh: Vec<GroupWord> = request(&orbit.points)?.into_iter().filter(|w| !known.contains(w)).collect();
        if fresh.is_empty() {
            return Ok(orbit.len() as u64);
        }
        gens.extend(fresh);
    }
}

fn cap_side(e: Error, side: &'static str) -> Error {
    match e {
        Error::OrbitCapExceeded { cap } => Error::IndexCapExceeded { side, cap },
        other => other,
    }
}

pub fn commensuration_index(pair: &PermutationHeckePair, g: &GroupWord, depth: usize) -> Result<CommReport> {
    Ok(CommReport {
        element: pair.show(g),
        idx_left: left_index(pair, g)?,
        idx_right: right_index(pair, g)?,
        depth,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub element: String,
    pub idx_left: Option<u64>,
    pub idx_right: Option<u64>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub coset: CosetId,
    pub point: String,
    pub orbit_size: Option<u64>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreEntry {
    pub element: String,
    pub moved_coset: Option<CosetId>,
    pub status: Status,
}

/// Structured result of [`check_hecke_axioms`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeReport {
    pub pair: String,
    pub depth: usize,
    pub status: Status,
    pub commensuration: Vec<IndexEntry>,
    pub finite_orbits: Vec<OrbitEntry>,
    pub core: Vec<CoreEntry>,
    /// `proved` for pairs certified by construction, `sampled` otherwise.
    pub properness: String,
}

fn index_entry(pair: &PermutationHeckePair, w: &GroupWord, depth: usize) -> Result<IndexEntry> {
    match commensuration_index(pair, w, depth) {
        Ok(r) => Ok(IndexEntry {
            element: r.element,
            idx_left: Some(r.idx_left),
            idx_right: Some(r.idx_right),
            status: Status::Pass,
            note: None,
        }),
        Err(e @ Error::IndexCapExceeded { .. }) => Ok(IndexEntry {
            element: pair.show(w),
            idx_left: None,
            idx_right: None,
            status: Status::Fail,
            note: Some(e.to_string()),
        }),
        Err(e) => Err(e),
    }
}

/// Per-generator commensuration indices, finite U-orbits on sampled cosets, and
/// sampled core triviality.
pub fn check_hecke_axioms(pair: &PermutationHeckePair, depth: usize, samples: usize) -> Result<HeckeReport> {
    let mut status = Status::Pass;
    let mut commensuration = Vec::new();
    for g in 0..pair.generators().len() {
        for l in [Letter::pos(g), Letter::neg(g)] {
            let entry = index_entry(pair, &GroupWord::from_letters([l]), depth)?;
            status = status.combine(entry.status);
            commensuration.push(entry);
        }
    }

    let ball = schreier::enumerate_ball(pair, depth)?;
    let cap = pair.caps().orbit;
    let mut finite_orbits = Vec::new();
    for (&c, p) in ball.members.iter().zip(&ball.points).take(samples) {
        let entry = match schreier::u_orbit(pair, Space::Coset, p, cap) {
            Ok(o) => OrbitEntry { coset: c, point: p.to_string(), orbit_size: Some(o.len() as u64), status: Status::Pass },
            Err(Error::OrbitCapExceeded { .. }) => {
                OrbitEntry { coset: c, point: p.to_string(), orbit_size: None, status: Status::Fail }
            }
            Err(e) => return Err(e),
        };
        status = status.combine(entry.status);
        finite_orbits.push(entry);
    }

    let request: Vec<(Space, Point)> = ball.points.iter().map(|p| (Space::Coset, p.clone())).collect();
    let mut core = Vec::new();
    for u in pair.u_generators(&request)?.into_iter().take(samples) {
        let known_nontrivial = match pair.is_identity(&u) {
            Some(r) => !r?,
            None => !u.is_empty(),
        };
        if !known_nontrivial {
            continue;
        }
        let mut moved = None;
        for (&c, p) in ball.members.iter().zip(&ball.points) {
            if pair.act_point(Space::Coset, &u, p)? != *p {
                moved = Some(c);
                break;
            }
        }
        let entry_status = if moved.is_some() { Status::Pass } else { Status::Unknown };
        status = status.combine(entry_status);
        core.push(CoreEntry { element: pair.show(&u), moved_coset: moved, status: entry_status });
    }

    let properness = if pair.metadata.proper.is_true() { "proved" } else { "sampled" };
    Ok(HeckeReport {
        pair: pair.name(),
        depth,
        status,
        commensuration,
        finite_orbits,
        core,
        properness: properness.into(),
    })
}

/// All pairs here have countable G, so the completion is σ-compact.
pub fn is_sigma_compact(_pair: &PermutationHeckePair) -> Tri {
    Tri::True
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactGeneration {
    pub value: Tri,
    pub witness: Option<Vec<String>>,
}

/// Compact generation of the completion: ⟨F, U⟩ = G for the recorded witness F.
pub fn is_compactly_generated(pair: &PermutationHeckePair) -> CompactGeneration {
    let flag = &pair.metadata.finitely_generated;
    match (flag.value, &pair.metadata.fg_witness) {
        (Tri::True, Some(f)) => {
            CompactGeneration { value: Tri::True, witness: Some(f.iter().map(|w| pair.show(w)).collect()) }
        }
        (Tri::False, _) => CompactGeneration { value: Tri::False, witness: None },
        _ => CompactGeneration { value: Tri::Unknown, witness: None },
    }
}

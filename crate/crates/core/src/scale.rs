//! Commensuration-index growth and scale estimation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke::left_index;
use crate::pair::PermutationHeckePair;
use crate::words::{GroupWord, Letter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthStatus {
    Stable,
    Inconclusive,
    CapExceeded,
}

/// idx_n = |U : U ∩ gⁿUg⁻ⁿ| for n = 1..N.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexGrowth {
    pub element: String,
    pub idx: Vec<u64>,
    pub stabilized_ratio: Option<u64>,
    pub status: GrowthStatus,
}

fn is_cap(e: &Error) -> bool {
    matches!(e, Error::OrbitCapExceeded { .. } | Error::IndexCapExceeded { .. } | Error::CosetCapExceeded { .. })
}

/// Ratio idx_{n+1}/idx_n if it is the same integer over the last ⌈N/2⌉ steps.
fn stable_ratio(idx: &[u64]) -> Option<u64> {
    let n = idx.len();
    let window = n.div_ceil(2);
    if n < 2 || window > n - 1 {
        return None;
    }
    let mut ratio = None;
    for k in (n - 1 - window)..(n - 1) {
        let (a, b) = (idx[k], idx[k + 1]);
        if b % a != 0 {
            return None;
        }
        match ratio {
            None => ratio = Some(b / a),
            Some(r) if r != b / a => return None,
            _ => {}
        }
    }
    ratio
}

pub fn index_growth(pair: &PermutationHeckePair, g: &GroupWord, steps: usize) -> Result<IndexGrowth> {
    if steps == 0 {
        return Err(Error::InvalidParameter("index growth needs N >= 1".into()));
    }
    let mut idx = Vec::with_capacity(steps);
    let mut power = GroupWord::identity();
    let mut status = GrowthStatus::Inconclusive;
    for _ in 0..steps {
        power = power.mul(g);
        match left_index(pair, &power) {
            Ok(v) => idx.push(v),
            Err(e) if is_cap(&e) => {
                status = GrowthStatus::CapExceeded;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let stabilized_ratio = if status == GrowthStatus::CapExceeded { None } else { stable_ratio(&idx) };
    if stabilized_ratio.is_some() {
        status = GrowthStatus::Stable;
    }
    Ok(IndexGrowth { element: pair.show(g), idx, stabilized_ratio, status })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleEstimate {
    pub element: String,
    pub estimate: Option<u64>,
    pub status: GrowthStatus,
    pub idx: Vec<u64>,
}

pub fn scale_estimate(pair: &PermutationHeckePair, g: &GroupWord, steps: usize) -> Result<ScaleEstimate> {
    if steps < 3 {
        return Err(Error::InvalidParameter("scale estimation needs N >= 3".into()));
    }
    let growth = index_growth(pair, g, steps)?;
    Ok(ScaleEstimate {
        element: growth.element,
        estimate: growth.stabilized_ratio,
        status: growth.status,
        idx: growth.idx,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum UniscalarVerdict {
    UniscalarSoFar,
    Witness { element: String, estimate: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniscalarReport {
    pub pair: String,
    pub word_length_bound: usize,
    pub verdict: UniscalarVerdict,
    pub estimates: Vec<ScaleEstimate>,
}

/// All freely reduced words of length 1..=bound, in generator order with + before −.
pub fn reduced_words(ngens: usize, bound: usize) -> Vec<GroupWord> {
    let letters: Vec<Letter> = (0..ngens).flat_map(|g| [Letter::pos(g), Letter::neg(g)]).collect();
    let mut out = Vec::new();
    let mut layer = vec![GroupWord::identity()];
    for _ in 0..bound {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.letters().last() == Some(&l.inverse()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn uniscalar_sample(pair: &PermutationHeckePair, word_length_bound: usize, steps: usize) -> Result<UniscalarReport> {
    let mut estimates = Vec::new();
    let mut verdict = UniscalarVerdict::UniscalarSoFar;
    for w in reduced_words(pair.generators().len(), word_length_bound) {
        let est = scale_estimate(pair, &w, steps)?;
        if let (UniscalarVerdict::UniscalarSoFar, Some(e)) = (&verdict, est.estimate) {
            if e > 1 {
                verdict = UniscalarVerdict::Witness { element: est.element.clone(), estimate: e };
            }
        }
        estimates.push(est);
    }
    Ok(UniscalarReport { pair: pair.name(), word_length_bound, verdict, estimates })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_window() {
        assert_eq!(stable_ratio(&[2, 4, 8, 16]), Some(2));
        assert_eq!(stable_ratio(&[1, 1, 1]), Some(1));
        assert_eq!(stable_ratio(&[1, 2, 3, 4]), None);
        assert_eq!(stable_ratio(&[5, 7, 14, 28]), Some(2));
    }

    #[test]
    fn word_counts() {
        assert_eq!(reduced_words(2, 1).len(), 4);
        assert_eq!(reduced_words(2, 2).len(), 4 + 12);
    }
}

//! Permutation groups on {0, …, n−1}: composition and Schreier–Sims group orders.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// A permutation as its image list: `p[i]` is the image of i.
pub type Perm = Vec<usize>;

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

pub fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &j)| i == j)
}

/// `a ∘ b`: apply b first, then a.
pub fn compose(a: &[usize], b: &[usize]) -> Perm {
    b.iter().map(|&j| a[j]).collect()
}

pub fn inverse(p: &[usize]) -> Perm {
    let mut out = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j] = i;
    }
    out
}

/// One level of a stabilizer chain: a base point and a transversal of its orbit.
#[derive(Debug, Clone)]
struct Level {
    point: usize,
    gens: Vec<Perm>,
    /// Orbit point ↦ an element carrying `point` to it.
    transversal: HashMap<usize, Perm>,
}

/// A base and strong generating set built by the deterministic Schreier–Sims algorithm.
#[derive(Debug, Clone)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(degree: usize, gens: &[Perm]) -> Result<Self> {
        for g in gens {
            if g.len() != degree {
                return Err(Error::InvalidParameter(format!("permutation of degree {} in a group of degree {degree}", g.len())));
            }
        }
        let mut chain = StabilizerChain { degree, levels: Vec::new() };
        for g in gens {
            if let Some((residue, level)) = chain.sift(g, 0) {
                chain.add(level, residue);
            }
        }
        chain.complete();
        Ok(chain)
    }

    /// Generators of level i in the strong generating set: those added at levels ≥ i.
    fn level_gens(&self, i: usize) -> Vec<Perm> {
        self.levels[i..].iter().flat_map(|l| l.gens.iter().cloned()).collect()
    }

    fn add(&mut self, level: usize, g: Perm) {
        if level == self.levels.len() {
            let point = g.iter().enumerate().find(|(i, &j)| *i != j).map(|(i, _)| i).expect("non-identity");
            let transversal = HashMap::from([(point, identity(self.degree))]);
            self.levels.push(Level { point, gens: Vec::new(), transversal });
        }
        self.levels[level].gens.push(g);
        for i in 0..=level {
            self.rebuild_orbit(i);
        }
    }

    fn rebuild_orbit(&mut self, i: usize) {
        let gens = self.level_gens(i);
        let level = &mut self.levels[i];
        let mut queue: VecDeque<usize> = level.transversal.keys().copied().collect();
        while let Some(p) = queue.pop_front() {
            let u = level.transversal[&p].clone();
            for s in &gens {
                let q = s[p];
                if !level.transversal.contains_key(&q) {
                    level.transversal.insert(q, compose(s, &u));
                    queue.push_back(q);
                }
            }
        }
    }

    /// Sifts g from level `start`; returns the non-identity residue and its level.
    fn sift(&self, g: &[usize], start: usize) -> Option<(Perm, usize)> {
        let mut h = g.to_vec();
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let image = h[level.point];
            match level.transversal.get(&image) {
                Some(u) => h = compose(&inverse(u), &h),
                None => return Some((h, i)),
            }
        }
        if is_identity(&h) {
            None
        } else {
            Some((h, self.levels.len()))
        }
    }

    /// Adds sifted Schreier generators until every level's point stabilizer is generated
    /// by the next level.
    fn complete(&mut self) {
        'restart: loop {
            for i in (0..self.levels.len()).rev() {
                let gens = self.level_gens(i);
                let points: Vec<usize> = self.levels[i].transversal.keys().copied().collect();
                for &p in &points {
                    for s in &gens {
                        let u_p = &self.levels[i].transversal[&p];
                        let u_sp = &self.levels[i].transversal[&s[p]];
                        let schreier = compose(&inverse(u_sp), &compose(s, u_p));
                        if let Some((residue, level)) = self.sift(&schreier, i + 1) {
                            self.add(level, residue);
                            continue 'restart;
                        }
                    }
                }
            }
            return;
        }
    }

    /// |G| as the product of the basic orbit lengths.
    pub fn order(&self) -> Result<u128> {
        self.levels.iter().try_fold(1u128, |acc, l| acc.checked_mul(l.transversal.len() as u128).ok_or(Error::Overflow("group order")))
    }

    pub fn contains(&self, g: &[usize]) -> bool {
        g.len() == self.degree && self.sift(g, 0).is_none()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }
}

pub fn group_order(degree: usize, gens: &[Perm]) -> Result<u128> {
    StabilizerChain::new(degree, gens)?.order()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn closure(degree: usize, gens: &[Perm]) -> usize {
        let mut seen = HashSet::from([identity(degree)]);
        let mut queue = VecDeque::from([identity(degree)]);
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q = compose(g, &p);
                if seen.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
        seen.len()
    }

    fn cycle(n: usize) -> Perm {
        (0..n).map(|i| (i + 1) % n).collect()
    }

    #[test]
    fn symmetric_and_alternating() {
        let s5 = [cycle(5), vec![1, 0, 2, 3, 4]];
        assert_eq!(group_order(5, &s5).unwrap(), 120);
        let a5 = [cycle(5), vec![1, 2, 0, 3, 4]];
        assert_eq!(group_order(5, &a5).unwrap(), 60);
        let s8 = [cycle(8), vec![1, 0, 2, 3, 4, 5, 6, 7]];
        assert_eq!(group_order(8, &s8).unwrap(), 40320);
    }

    #[test]
    fn matches_closure_on_small_groups() {
        let cases: Vec<(usize, Vec<Perm>)> = vec![
            (4, vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]]),
            (6, vec![vec![1, 0, 2, 3, 4, 5], vec![0, 1, 3, 2, 4, 5], vec![0, 1, 2, 3, 5, 4]]),
            (6, vec![vec![2, 3, 4, 5, 0, 1], vec![1, 0, 3, 2, 5, 4]]),
            (7, vec![cycle(7), vec![0, 2, 4, 6, 1, 3, 5]]),
            (3, vec![]),
        ];
        for (n, gens) in cases {
            let chain = StabilizerChain::new(n, &gens).unwrap();
            assert_eq!(chain.order().unwrap() as usize, closure(n, &gens));
            for g in &gens {
                assert!(chain.contains(g));
            }
        }
    }
}

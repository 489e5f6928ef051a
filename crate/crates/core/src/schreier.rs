//! Lazy enumeration of G/U as a Schreier graph, with a monotone shared cache.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Space;
use crate::pair::PermutationHeckePair;
use crate::point::Point;
use crate::words::{GroupWord, Letter};

/// Canonical coset identifier; 0 is the base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CosetId(pub usize);

impl std::fmt::Display for CosetId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Default)]
struct CacheInner {
    points: Vec<Point>,
    ids: HashMap<Point, CosetId>,
    edges: HashMap<(CosetId, Letter), CosetId>,
    dist: HashMap<CosetId, usize>,
    layers: Vec<Vec<CosetId>>,
}

impl CacheInner {
    fn intern(&mut self, p: Point, cap: usize) -> Result<CosetId> {
        if let Some(&id) = self.ids.get(&p) {
            return Ok(id);
        }
        if self.points.len() >= cap {
            return Err(Error::CosetCapExceeded { cap });
        }
        let id = CosetId(self.points.len());
        self.points.push(p.clone());
        self.ids.insert(p, id);
        Ok(id)
    }
}

/// Monotone point ↔ id cache for one action space.
///
/// Ids inside enumerated balls follow BFS order (generator order, + before −).
/// Points first reached outside any enumerated ball get the next free id on discovery.
#[derive(Debug)]
pub struct CosetCache {
    inner: RwLock<CacheInner>,
}

impl CosetCache {
    pub fn new(base: Point) -> Self {
        let mut inner = CacheInner::default();
        inner.points.push(base.clone());
        inner.ids.insert(base, CosetId(0));
        inner.dist.insert(CosetId(0), 0);
        inner.layers.push(vec![CosetId(0)]);
        CosetCache { inner: RwLock::new(inner) }
    }

    pub fn len(&self) -> usize {
        self.inner.read().expect("coset cache poisoned").points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, id: CosetId) -> Result<Point> {
        let inner = self.inner.read().expect("coset cache poisoned");
        inner.points.get(id.0).cloned().ok_or_else(|| Error::Unreachable(format!("coset id {id}")))
    }

    pub fn lookup(&self, p: &Point) -> Option<CosetId> {
        self.inner.read().expect("coset cache poisoned").ids.get(p).copied()
    }

    pub fn intern(&self, p: Point, cap: usize) -> Result<CosetId> {
        if let Some(id) = self.lookup(&p) {
            return Ok(id);
        }
        self.inner.write().expect("coset cache poisoned").intern(p, cap)
    }
}

/// A schreier edge `from --letter--> to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SchreierEdge {
    pub from: CosetId,
    pub gen: usize,
    pub inv: bool,
    pub to: CosetId,
}

/// The radius-r ball around the base point with all internal edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetBall {
    pub space: SpaceTag,
    pub radius: usize,
    pub members: Vec<CosetId>,
    pub points: Vec<Point>,
    pub edges: Vec<SchreierEdge>,
    pub generator_names: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceTag {
    Coset,
    Domain,
}

impl From<Space> for SpaceTag {
    fn from(s: Space) -> Self {
        match s {
            Space::Coset => SpaceTag::Coset,
            Space::Domain => SpaceTag::Domain,
        }
    }
}

impl CosetBall {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, id: CosetId) -> bool {
        self.members.binary_search(&id).is_ok()
    }

    pub fn member_set(&self) -> BTreeSet<CosetId> {
        self.members.iter().copied().collect()
    }

    pub fn edge(&self, from: CosetId, l: Letter) -> Option<CosetId> {
        self.edges.iter().find(|e| e.from == from && e.gen == l.gen && e.inv == l.inv).map(|e| e.to)
    }
}

/// Grows the BFS layers of a space's cache up to `radius`.
fn ensure_layers(pair: &PermutationHeckePair, space: Space, radius: usize) -> Result<()> {
    let cache = pair.cache(space);
    {
        let inner = cache.inner.read().expect("coset cache poisoned");
        if inner.layers.len() > radius {
            return Ok(());
        }
    }
    let cap = pair.caps().coset;
    let ngens = pair.generators().len();
    let mut inner = cache.inner.write().expect("coset cache poisoned");
    while inner.layers.len() <= radius {
        let depth = inner.layers.len();
        let frontier = inner.layers[depth - 1].clone();
        let mut next = Vec::new();
        for c in frontier {
            let p = inner.points[c.0].clone();
            for g in 0..ngens {
                for l in [Letter::pos(g), Letter::neg(g)] {
                    let q = pair.act_letter(space, l, &p)?;
                    let d = inner.intern(q, cap)?;
                    inner.edges.insert((c, l), d);
                    if !inner.dist.contains_key(&d) {
                        inner.dist.insert(d, depth);
                        next.push(d);
                    }
                }
            }
        }
        inner.layers.push(next);
    }
    Ok(())
}

/// Records edges from layer `radius` whose targets already have ids, without
/// interning anything new, so ids keep following breadth-first order.
fn close_outer_layer(pair: &PermutationHeckePair, space: Space, radius: usize) -> Result<()> {
    let cache = pair.cache(space);
    let mut inner = cache.inner.write().expect("coset cache poisoned");
    let outer = inner.layers[radius].clone();
    for c in outer {
        let p = inner.points[c.0].clone();
        for g in 0..pair.generators().len() {
            for l in [Letter::pos(g), Letter::neg(g)] {
                if inner.edges.contains_key(&(c, l)) {
                    continue;
                }
                let q = pair.act_letter(space, l, &p)?;
                if let Some(&d) = inner.ids.get(&q) {
                    inner.edges.insert((c, l), d);
                }
            }
        }
    }
    Ok(())
}

/// Enumerates B_radius of G/U.
pub fn enumerate_ball(pair: &PermutationHeckePair, radius: usize) -> Result<CosetBall> {
    enumerate_ball_in(pair, Space::Coset, radius)
}

pub fn enumerate_ball_in(pair: &PermutationHeckePair, space: Space, radius: usize) -> Result<CosetBall> {
    ensure_layers(pair, space, radius)?;
    close_outer_layer(pair, space, radius)?;
    let inner = pair.cache(space).inner.read().expect("coset cache poisoned");
    let mut members: Vec<CosetId> = inner.layers[..=radius].iter().flatten().copied().collect();
    members.sort();
    let set: HashSet<CosetId> = members.iter().copied().collect();
    let mut edges = Vec::new();
    for &c in &members {
        for g in 0..pair.generators().len() {
            for l in [Letter::pos(g), Letter::neg(g)] {
                if let Some(&d) = inner.edges.get(&(c, l)) {
                    if set.contains(&d) {
                        edges.push(SchreierEdge { from: c, gen: g, inv: l.inv, to: d });
                    }
                }
            }
        }
    }
    let points = members.iter().map(|c| inner.points[c.0].clone()).collect();
    Ok(CosetBall {
        space: space.into(),
        radius,
        members,
        points,
        edges,
        generator_names: pair.generators().iter().map(|g| g.name.clone()).collect(),
    })
}

/// Word distance of an id from the base, if it lies in an enumerated ball.
pub fn distance(pair: &PermutationHeckePair, space: Space, id: CosetId) -> Option<usize> {
    pair.cache(space).inner.read().expect("coset cache poisoned").dist.get(&id).copied()
}

/// `w · c` on G/U.
pub fn act(pair: &PermutationHeckePair, w: &GroupWord, c: CosetId) -> Result<CosetId> {
    act_in(pair, Space::Coset, w, c)
}

pub fn act_in(pair: &PermutationHeckePair, space: Space, w: &GroupWord, c: CosetId) -> Result<CosetId> {
    let cache = pair.cache(space);
    let mut cur = c;
    let mut point: Option<Point> = None;
    for &l in w.letters().iter().rev() {
        let known = cache.inner.read().expect("coset cache poisoned").edges.get(&(cur, l)).copied();
        if let Some(d) = known {
            cur = d;
            point = None;
            continue;
        }
        let p = match point.take() {
            Some(p) => p,
            None => cache.point(cur)?,
        };
        let q = pair.act_letter(space, l, &p)?;
        let d = cache.intern(q.clone(), pair.caps().coset)?;
        cache.inner.write().expect("coset cache poisoned").edges.insert((cur, l), d);
        cur = d;
        point = Some(q);
    }
    Ok(cur)
}

/// Id of a point, interning it if new.
pub fn id_of(pair: &PermutationHeckePair, space: Space, p: &Point) -> Result<CosetId> {
    pair.cache(space).intern(p.clone(), pair.caps().coset)
}

pub fn point_of(pair: &PermutationHeckePair, space: Space, id: CosetId) -> Result<Point> {
    pair.cache(space).point(id)
}

/// Result of an orbit computation on points, with transversal words from the start.
#[derive(Debug, Clone)]
pub struct PointOrbit {
    pub points: Vec<Point>,
    pub gens: Vec<GroupWord>,
    /// Schreier tree: for each non-start point, its parent and the signed
    /// generator (index into `gens`, inverted or not) leading to it.
    parents: Vec<Option<(usize, usize, bool)>>,
    index: HashMap<Point, usize>,
}

impl PointOrbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.index.contains_key(p)
    }

    pub fn position(&self, p: &Point) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// A word carrying the start point to point `i`.
    pub fn transversal(&self, i: usize) -> GroupWord {
        let mut steps = Vec::new();
        let mut cur = i;
        while let Some((parent, g, inv)) = self.parents[cur] {
            steps.push((g, inv));
            cur = parent;
        }
        let mut w = GroupWord::identity();
        for (g, inv) in steps.into_iter().rev() {
            let s = if inv { self.gens[g].inverse() } else { self.gens[g].clone() };
            w = s.mul(&w);
        }
        w
    }

    /// Schreier generators of the stabilizer of the start point.
    pub fn stabilizer_generators(&self, pair: &PermutationHeckePair, space: Space) -> Result<Vec<GroupWord>> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for (i, p) in self.points.iter().enumerate() {
            for s in &self.gens {
                let q = pair.act_point(space, s, p)?;
                let j = self.position(&q).ok_or_else(|| Error::Unreachable(format!("{q}")))?;
                let w = self.transversal(j).inverse().mul(s).mul(&self.transversal(i));
                if !w.is_empty() && seen.insert(w.clone()) {
                    out.push(w);
                }
            }
        }
        Ok(out)
    }
}

/// Orbit of `start` under a fixed finite set of words, by BFS.
pub fn subgroup_orbit(
    pair: &PermutationHeckePair,
    space: Space,
    gens: &[GroupWord],
    start: &Point,
    cap: usize,
) -> Result<PointOrbit> {
    let mut points = vec![start.clone()];
    let mut parents = vec![None];
    let mut index = HashMap::from([(start.clone(), 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    let signed: Vec<(usize, bool, GroupWord)> =
        gens.iter().enumerate().flat_map(|(k, g)| [(k, false, g.clone()), (k, true, g.inverse())]).collect();
    while let Some(i) = queue.pop_front() {
        for (k, inv, s) in &signed {
            let q = pair.act_point(space, s, &points[i])?;
            if index.contains_key(&q) {
                continue;
            }
            if points.len() >= cap {
                return Err(Error::OrbitCapExceeded { cap });
            }
            index.insert(q.clone(), points.len());
            parents.push(Some((i, *k, *inv)));
            points.push(q);
            queue.push_back(points.len() - 1);
        }
    }
    Ok(PointOrbit { points, gens: gens.to_vec(), parents, index })
}

/// The U-orbit of a point, re-requesting point-local U-generators until closed.
pub fn u_orbit(pair: &PermutationHeckePair, space: Space, start: &Point, cap: usize) -> Result<PointOrbit> {
    let mut gens = pair.u_generators(&[(space, start.clone())])?;
    loop {
        let orbit = subgroup_orbit(pair, space, &gens, start, cap)?;
        let request: Vec<(Space, Point)> = orbit.points.iter().map(|p| (space, p.clone())).collect();
        let more = pair.u_generators(&request)?;
        let known: HashSet<&GroupWord> = gens.iter().collect();
        let fresh: Vec<GroupWord> = more.into_iter().filter(|g| !known.contains(g)).collect();
        if fresh.is_empty() {
            return Ok(orbit);
        }
        gens.extend(fresh);
    }
}

/// Orbit of coset `c` under the subgroup generated by `subgroup_gens`.
pub fn orbit(
    pair: &PermutationHeckePair,
    subgroup_gens: &[GroupWord],
    c: CosetId,
    cap: usize,
) -> Result<BTreeSet<CosetId>> {
    let start = point_of(pair, Space::Coset, c)?;
    let orbit = subgroup_orbit(pair, Space::Coset, subgroup_gens, &start, cap)?;
    orbit.points.into_iter().map(|p| id_of(pair, Space::Coset, &p)).collect()
}

/// Orbit of coset `c` under U itself.
pub fn u_orbit_ids(pair: &PermutationHeckePair, c: CosetId, cap: usize) -> Result<BTreeSet<CosetId>> {
    let start = point_of(pair, Space::Coset, c)?;
    let orbit = u_orbit(pair, Space::Coset, &start, cap)?;
    orbit.points.into_iter().map(|p| id_of(pair, Space::Coset, &p)).collect()
}

/// DOT digraph: one edge per (coset, generator) with target inside the ball.
pub fn export_schreier_dot(ball: &CosetBall) -> String {
    let mut out = String::from("digraph schreier {\n");
    for c in &ball.members {
        let _ = writeln!(out, "  {c};");
    }
    let mut edges: BTreeMap<(CosetId, usize), CosetId> = BTreeMap::new();
    for e in ball.edges.iter().filter(|e| !e.inv) {
        edges.insert((e.from, e.gen), e.to);
    }
    for ((from, gen), to) in edges {
        let label = ball.generator_names.get(gen).map(String::as_str).unwrap_or("?");
        let _ = writeln!(out, "  {from} -> {to} [label=\"{label}\"];");
    }
    out.push_str("}\n");
    out
}

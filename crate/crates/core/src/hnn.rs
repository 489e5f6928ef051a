//! Ascending HNN extensions of the infinite left-iterated wreath product by a contraction.
//!
//! For a base pair (P, U, X) the infinite wreath J = J ≀ (P, X) has elements (f, g) with
//! g ∈ P and f: X → J finitely supported, so every element has finite nesting depth. Its
//! subgroup I is the analogous infinite wreath of U. The x-contraction ψ_x sends w to the
//! function supported at x with value w, and K_x is the part of I that fixes x and is
//! trivial there. The extension is (J × K^{<N}) ∗_ψ̃ with ψ̃(g, α) = (ψ_x(g)·α(0), α^δ).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke::{CommReport, IndexEntry, Status};
use crate::model::Space;
use crate::pair::{Construction, Flag, LzWitness, PairMetadata, PermutationHeckePair, Tri};
use crate::point::Point;
use crate::schreier::{enumerate_ball_in, u_orbit};
use crate::words::{Generator, GroupWord, Letter};
use crate::wreath::fresh_copy;

/// Radius of the domain ball around the base point on which truncated generators of I
/// and K_x are placed.
pub const DEFAULT_PLACEMENT_RADIUS: usize = 1;
const SAMPLE_SEED: u64 = 0x4e4e;
const RANDOM_SAMPLES: usize = 20;

/// An element (f, g) of the infinite wreath: `top` is a word in P, `f` holds the
/// non-identity values.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct JElem {
    pub top: GroupWord,
    pub f: BTreeMap<Point, JElem>,
}

impl JElem {
    /// Nesting depth: 0 for pure top elements.
    pub fn depth(&self) -> usize {
        self.f.values().map(|v| v.depth() + 1).max().unwrap_or(0)
    }
}

/// Exact arithmetic in the infinite wreath J over a base pair with element normal forms.
#[derive(Debug)]
pub struct InfiniteWreath {
    base: PermutationHeckePair,
    x0: Point,
    n: usize,
}

impl InfiniteWreath {
    pub fn new(base: &PermutationHeckePair) -> Result<Self> {
        if !base.has_normal_form() {
            return Err(Error::InvalidParameter(
                "the infinite wreath needs a base pair with exact element arithmetic".into(),
            ));
        }
        let base = fresh_copy(base)?;
        let x0 = base.base(Space::Domain);
        let n = base.generators().len();
        Ok(InfiniteWreath { base, x0, n })
    }

    pub fn base_pair(&self) -> &PermutationHeckePair {
        &self.base
    }

    /// Number of base generators; the depth-j copy of generator i has index j·n + i.
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> JElem {
        JElem::default()
    }

    /// The value `e` placed at position y, with identity elsewhere.
    pub fn place(&self, y: &Point, e: JElem) -> Result<JElem> {
        if self.is_identity(&e)? {
            return Ok(self.identity());
        }
        Ok(JElem { top: GroupWord::identity(), f: BTreeMap::from([(y.clone(), e)]) })
    }

    /// Depth-indexed letter: depth j places the depth j−1 letter at the base point.
    pub fn letter(&self, l: Letter) -> JElem {
        let (depth, gen) = (l.gen / self.n, l.gen % self.n);
        let mut e = JElem { top: GroupWord::from_letters([Letter { gen, inv: l.inv }]), f: BTreeMap::new() };
        for _ in 0..depth {
            e = JElem { top: GroupWord::identity(), f: BTreeMap::from([(self.x0.clone(), e)]) };
        }
        e
    }

    pub fn from_word(&self, w: &GroupWord) -> Result<JElem> {
        let mut e = self.identity();
        for &l in w.letters() {
            e = self.mul(&e, &self.letter(l))?;
        }
        Ok(e)
    }

    /// Names of the depth-indexed alphabet up to depth `depth`, matching iterated wreaths.
    pub fn alphabet(&self, depth: usize) -> Vec<Generator> {
        let mut out = Vec::new();
        for j in 0..=depth {
            for g in self.base.generators() {
                out.push(Generator::new(format!("{}{}", g.name, "'".repeat(j))));
            }
        }
        out
    }

    /// (f, g)(f', g') = (f · g·f', g g') with (g·f')(y) = f'(g⁻¹y).
    pub fn mul(&self, a: &JElem, b: &JElem) -> Result<JElem> {
        let mut f = a.f.clone();
        for (y, v) in &b.f {
            let y2 = self.base.act_point(Space::Domain, &a.top, y)?;
            let value = match f.remove(&y2) {
                Some(u) => self.mul(&u, v)?,
                None => v.clone(),
            };
            if !self.is_identity(&value)? {
                f.insert(y2, value);
            }
        }
        Ok(JElem { top: a.top.mul(&b.top), f })
    }

    pub fn inverse(&self, a: &JElem) -> Result<JElem> {
        let top = a.top.inverse();
        let mut f = BTreeMap::new();
        for (y, v) in &a.f {
            f.insert(self.base.act_point(Space::Domain, &top, y)?, self.inverse(v)?);
        }
        Ok(JElem { top, f })
    }

    fn top_nf(&self, w: &GroupWord) -> Result<Point> {
        self.base.normal_form(w).unwrap_or_else(|| Err(Error::InvalidParameter("base pair lost its normal form".into())))
    }

    fn top_is_identity(&self, w: &GroupWord) -> Result<bool> {
        self.base.is_identity(w).unwrap_or_else(|| Err(Error::InvalidParameter("base pair lost its normal form".into())))
    }

    pub fn is_identity(&self, a: &JElem) -> Result<bool> {
        if !self.top_is_identity(&a.top)? {
            return Ok(false);
        }
        for v in a.f.values() {
            if !self.is_identity(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Canonical key: equal keys exactly when the elements are equal.
    pub fn key(&self, a: &JElem) -> Result<Point> {
        let mut entries = Vec::new();
        for (y, v) in &a.f {
            if !self.is_identity(v)? {
                entries.push(Point::Tuple(vec![y.clone(), self.key(v)?]));
            }
        }
        Ok(Point::Tuple(vec![self.top_nf(&a.top)?, Point::Tuple(entries)]))
    }

    pub fn equal(&self, a: &JElem, b: &JElem) -> Result<bool> {
        Ok(self.key(a)? == self.key(b)?)
    }

    /// Membership in I: the top lies in U and every value lies in I.
    pub fn in_i(&self, a: &JElem) -> Result<bool> {
        if !self.base.in_u(&a.top)? {
            return Ok(false);
        }
        for v in a.f.values() {
            if !self.in_i(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// ψ_x(w): the function supported at x with value w.
    pub fn contract(&self, x: &Point, w: &JElem) -> Result<JElem> {
        self.place(x, w.clone())
    }

    /// Whether `a` lies in ψ_x(J): trivial top and support inside {x}.
    pub fn in_contraction_image(&self, x: &Point, a: &JElem) -> Result<bool> {
        if !self.top_is_identity(&a.top)? {
            return Ok(false);
        }
        for (y, v) in &a.f {
            if y != x && !self.is_identity(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Positive generators of the truncation J_depth.
    pub fn generators(&self, depth: usize) -> Vec<JElem> {
        (0..(depth + 1) * self.n).map(|g| self.letter(Letter::pos(g))).collect()
    }

    fn ball_points(&self, radius: usize) -> Result<Vec<Point>> {
        Ok(enumerate_ball_in(&self.base, Space::Domain, radius)?.points)
    }

    /// Generators of the truncation I_depth: U at the top, and I_{depth−1} placed at the
    /// points of the radius ball around the base point.
    pub fn i_generators(&self, depth: usize, radius: usize) -> Result<Vec<JElem>> {
        let ball = self.ball_points(radius)?;
        let request: Vec<(Space, Point)> = ball.iter().map(|p| (Space::Domain, p.clone())).collect();
        let mut out: Vec<JElem> = Vec::new();
        for u in self.base.u_generators(&request)? {
            let e = JElem { top: u, f: BTreeMap::new() };
            if !self.is_identity(&e)? {
                out.push(e);
            }
        }
        if depth > 0 {
            let inner = self.i_generators(depth - 1, radius)?;
            for y in &ball {
                for g in &inner {
                    out.push(self.place(y, g.clone())?);
                }
            }
        }
        Ok(out)
    }

    /// Generators of the truncated x-contraction centralizer K_x: the stabilizer of x in
    /// U at the top, and I_{depth−1} placed at ball points other than x.
    pub fn k_generators(&self, x: &Point, depth: usize, radius: usize) -> Result<Vec<JElem>> {
        let orbit = u_orbit(&self.base, Space::Domain, x, self.base.caps().orbit)?;
        let mut out = Vec::new();
        for w in orbit.stabilizer_generators(&self.base, Space::Domain)? {
            let e = JElem { top: w, f: BTreeMap::new() };
            if !self.is_identity(&e)? {
                out.push(e);
            }
        }
        if depth > 0 {
            let inner = self.i_generators(depth - 1, radius)?;
            for y in self.ball_points(radius)?.iter().filter(|y| *y != x) {
                for g in &inner {
                    out.push(self.place(y, g.clone())?);
                }
            }
        }
        Ok(out)
    }

    /// Human-readable form: `top` or `top[y: value, ...]`.
    pub fn render(&self, a: &JElem) -> String {
        let mut s = self.base.show(&a.top);
        if !a.f.is_empty() {
            s.push('[');
            for (i, (y, v)) in a.f.iter().enumerate() {
                if i > 0 {
                    s.push_str(", ");
                }
                let _ = write!(s, "{y}: {}", self.render(v));
            }
            s.push(']');
        }
        s
    }
}

/// An element (g, α) of J × K^{<N}, with α finitely supported.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BaseElem {
    pub g: JElem,
    pub alpha: BTreeMap<u32, JElem>,
}

/// t^{−level} · base · t^{level} · t^{shift}.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HnnElement {
    pub level: u32,
    pub base: BaseElem,
    pub shift: i64,
}

/// The ascending HNN extension of J × K^{<N} along ψ̃ for the x-contraction.
#[derive(Debug)]
pub struct HnnExtension {
    j: InfiniteWreath,
    x: Point,
    depth: u32,
}

impl HnnExtension {
    pub fn new(base: &PermutationHeckePair, x: Point, depth: u32) -> Result<Self> {
        let j = InfiniteWreath::new(base)?;
        Ok(HnnExtension { j, x, depth })
    }

    pub fn wreath(&self) -> &InfiniteWreath {
        &self.j
    }

    pub fn point(&self) -> &Point {
        &self.x
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn base_mul(&self, a: &BaseElem, b: &BaseElem) -> Result<BaseElem> {
        let g = self.j.mul(&a.g, &b.g)?;
        let mut alpha = a.alpha.clone();
        for (&i, v) in &b.alpha {
            let value = match alpha.remove(&i) {
                Some(u) => self.j.mul(&u, v)?,
                None => v.clone(),
            };
            if !self.j.is_identity(&value)? {
                alpha.insert(i, value);
            }
        }
        Ok(BaseElem { g, alpha })
    }

    pub fn base_inverse(&self, a: &BaseElem) -> Result<BaseElem> {
        let mut alpha = BTreeMap::new();
        for (&i, v) in &a.alpha {
            alpha.insert(i, self.j.inverse(v)?);
        }
        Ok(BaseElem { g: self.j.inverse(&a.g)?, alpha })
    }

    pub fn base_key(&self, a: &BaseElem) -> Result<Point> {
        let mut entries = Vec::new();
        for (&i, v) in &a.alpha {
            if !self.j.is_identity(v)? {
                entries.push(Point::Tuple(vec![Point::Int(i128::from(i)), self.j.key(v)?]));
            }
        }
        Ok(Point::Tuple(vec![self.j.key(&a.g)?, Point::Tuple(entries)]))
    }

    /// ψ̃(g, α) = (ψ_x(g)·α(0), α^δ).
    pub fn psi_tilde(&self, a: &BaseElem) -> Result<BaseElem> {
        let mut g = self.j.contract(&self.x, &a.g)?;
        if let Some(k) = a.alpha.get(&0) {
            g = self.j.mul(&g, k)?;
        }
        let alpha = a.alpha.iter().filter(|(&i, _)| i > 0).map(|(&i, v)| (i - 1, v.clone())).collect();
        Ok(BaseElem { g, alpha })
    }

    fn psi_tilde_pow(&self, a: &BaseElem, n: u32) -> Result<BaseElem> {
        let mut b = a.clone();
        for _ in 0..n {
            b = self.psi_tilde(&b)?;
        }
        Ok(b)
    }

    /// The ψ̃-preimage of `a`, decided by support inspection: g = (f, u) lies in ψ_x(J)·K_x
    /// exactly when u ∈ U fixes x and f(y) ∈ I for y ≠ x.
    pub fn preimage(&self, a: &BaseElem) -> Result<Option<BaseElem>> {
        let g = &a.g;
        let pair = self.j.base_pair();
        if !pair.in_u(&g.top)? || pair.act_point(Space::Domain, &g.top, &self.x)? != self.x {
            return Ok(None);
        }
        let mut rest = g.f.clone();
        let at_x = rest.remove(&self.x).unwrap_or_default();
        for v in rest.values() {
            if !self.j.in_i(v)? {
                return Ok(None);
            }
        }
        let k = JElem { top: g.top.clone(), f: rest };
        let mut alpha: BTreeMap<u32, JElem> = a.alpha.iter().map(|(&i, v)| (i + 1, v.clone())).collect();
        if !self.j.is_identity(&k)? {
            alpha.insert(0, k);
        }
        Ok(Some(BaseElem { g: at_x, alpha }))
    }

    pub fn identity(&self) -> HnnElement {
        HnnElement::default()
    }

    pub fn stable_letter(&self, inv: bool) -> HnnElement {
        HnnElement { shift: if inv { -1 } else { 1 }, ..HnnElement::default() }
    }

    /// An element of J at level 0.
    pub fn from_j(&self, g: JElem) -> HnnElement {
        HnnElement { level: 0, base: BaseElem { g, alpha: BTreeMap::new() }, shift: 0 }
    }

    /// Product without the final reduction.
    pub fn mul_raw(&self, a: &HnnElement, b: &HnnElement) -> Result<HnnElement> {
        let n = i64::from(a.level);
        let j = i64::from(b.level) - a.shift;
        let top = n.max(j).max(0);
        let lift_a = self.psi_tilde_pow(&a.base, to_u32(top - n)?)?;
        let lift_b = self.psi_tilde_pow(&b.base, to_u32(top - j)?)?;
        let shift = a.shift.checked_add(b.shift).ok_or(Error::Overflow("HNN shift"))?;
        Ok(HnnElement { level: to_u32(top)?, base: self.base_mul(&lift_a, &lift_b)?, shift })
    }

    pub fn mul(&self, a: &HnnElement, b: &HnnElement) -> Result<HnnElement> {
        self.normalize(&self.mul_raw(a, b)?)
    }

    pub fn inverse(&self, a: &HnnElement) -> Result<HnnElement> {
        let inv = self.base_inverse(&a.base)?;
        let level = i64::from(a.level) + a.shift;
        let raw = if level >= 0 {
            HnnElement { level: to_u32(level)?, base: inv, shift: -a.shift }
        } else {
            HnnElement { level: 0, base: self.psi_tilde_pow(&inv, to_u32(-level)?)?, shift: -a.shift }
        };
        self.normalize(&raw)
    }

    /// Lowers the level while the base lies in the image of ψ̃.
    pub fn normalize(&self, a: &HnnElement) -> Result<HnnElement> {
        let mut out = a.clone();
        while out.level > 0 {
            match self.preimage(&out.base)? {
                Some(pre) => {
                    out.base = pre;
                    out.level -= 1;
                }
                None => break,
            }
        }
        Ok(out)
    }

    /// Canonical key of the reduced form.
    pub fn key(&self, a: &HnnElement) -> Result<Point> {
        let r = self.normalize(a)?;
        Ok(Point::Tuple(vec![Point::Int(i128::from(r.level)), self.base_key(&r.base)?, Point::Int(i128::from(r.shift))]))
    }

    pub fn equal(&self, a: &HnnElement, b: &HnnElement) -> Result<bool> {
        Ok(self.key(a)? == self.key(b)?)
    }

    /// Evaluates a word over the base generators followed by the stable letter.
    pub fn from_word(&self, w: &GroupWord) -> Result<HnnElement> {
        let n = self.j.rank();
        let mut e = self.identity();
        for &l in w.letters() {
            let f = if l.gen == n {
                self.stable_letter(l.inv)
            } else if l.gen < n {
                self.from_j(self.j.letter(l))
            } else {
                return Err(Error::InvalidParameter(format!("letter index {} outside the HNN alphabet", l.gen)));
            };
            e = self.mul(&e, &f)?;
        }
        Ok(e)
    }

    /// Index data for t: t(U×K^{<N})t⁻¹ = ψ_x(I)K_x × K^{<N} ≤ U×K^{<N}, and
    /// |I : ψ_x(I)K_x| = |U : Stab_U(x)|, the size of the U-orbit of x.
    pub fn t_commensuration(&self, name: &str) -> Result<CommReport> {
        let pair = self.j.base_pair();
        let orbit = u_orbit(pair, Space::Domain, &self.x, pair.caps().orbit)?;
        Ok(CommReport { element: name.to_string(), idx_left: orbit.len() as u64, idx_right: 1, depth: self.depth as usize })
    }

    pub fn render(&self, a: &HnnElement) -> String {
        let mut s = format!("level {} | {}", a.level, self.j.render(&a.base.g));
        for (i, v) in &a.base.alpha {
            let _ = write!(s, " | α({i}) = {}", self.j.render(v));
        }
        let _ = write!(s, " | shift {}", a.shift);
        s
    }
}

fn to_u32(v: i64) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Overflow("HNN level"))
}

/// The embedding ψ whose HNN-compatibility is checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "point")]
pub enum Embedding {
    /// ψ = id on the pair itself.
    Identity,
    /// ψ_x on the infinite wreath over the pair.
    Contraction(Point),
}

impl std::fmt::Display for Embedding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Embedding::Identity => write!(f, "identity"),
            Embedding::Contraction(x) => write!(f, "contraction({x})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub status: Status,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckEntry {
    fn pass(checked: usize) -> Self {
        CheckEntry { status: Status::Pass, checked, witness: None }
    }

    fn fail(checked: usize, witness: String) -> Self {
        CheckEntry { status: Status::Fail, checked, witness: Some(witness) }
    }
}

/// Sampled verification of K ≤ C_U(ψ(G)), K ∩ ψ(G) = {1} and ψ(U)K ∼c U.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnnCompatReport {
    pub pair: String,
    pub embedding: Embedding,
    pub depth: u32,
    pub status: Status,
    pub centralizing: CheckEntry,
    pub trivial_intersection: CheckEntry,
    pub commensuration: IndexEntry,
}

/// Checks HNN-compatibility. For [`Embedding::Contraction`] the pair is the base of the
/// infinite wreath, `depth` is the truncation depth, and K is the truncated centralizer
/// K_x, so `k_gens` must be `None`. For [`Embedding::Identity`] `k_gens` defaults to the
/// U-generators at the base.
pub fn check_hnn_compatible(
    pair: &PermutationHeckePair,
    psi: &Embedding,
    k_gens: Option<&[GroupWord]>,
    depth: u32,
) -> Result<HnnCompatReport> {
    let (centralizing, trivial_intersection, commensuration) = match psi {
        Embedding::Identity => check_identity(pair, k_gens)?,
        Embedding::Contraction(x) => {
            if k_gens.is_some() {
                return Err(Error::InvalidParameter("a contraction uses its own centralizer K_x".into()));
            }
            check_contraction(pair, x, depth)?
        }
    };
    let status = centralizing.status.combine(trivial_intersection.status).combine(commensuration.status);
    Ok(HnnCompatReport {
        pair: pair.name(),
        embedding: psi.clone(),
        depth,
        status,
        centralizing,
        trivial_intersection,
        commensuration,
    })
}

type Checks = (CheckEntry, CheckEntry, IndexEntry);

fn check_identity(pair: &PermutationHeckePair, k_gens: Option<&[GroupWord]>) -> Result<Checks> {
    let ks: Vec<GroupWord> = match k_gens {
        Some(k) => k.to_vec(),
        None => pair.u_generators_at_base()?,
    };
    let gens: Vec<GroupWord> = (0..pair.generators().len()).map(GroupWord::gen).collect();

    let mut centralizing = CheckEntry::pass(0);
    'outer: for k in &ks {
        centralizing.checked += 1;
        if !pair.in_u(k)? {
            centralizing = CheckEntry::fail(centralizing.checked, pair.show(k));
            break;
        }
        for s in &gens {
            centralizing.checked += 1;
            let commutator = k.mul(s).mul(&k.inverse()).mul(&s.inverse());
            match pair.is_identity(&commutator).transpose()? {
                Some(false) => {
                    centralizing = CheckEntry::fail(centralizing.checked, pair.show(k));
                    break 'outer;
                }
                Some(true) => {}
                None => centralizing.status = Status::Unknown,
            }
        }
    }

    let mut trivial = CheckEntry::pass(0);
    for k in &ks {
        trivial.checked += 1;
        let nontrivial = match pair.is_identity(k) {
            Some(r) => !r?,
            None => !k.is_empty(),
        };
        if nontrivial {
            trivial = CheckEntry::fail(trivial.checked, pair.show(k));
            break;
        }
    }

    let mut all_in_u = true;
    for k in &ks {
        all_in_u &= pair.in_u(k)?;
    }
    let commensuration = if all_in_u {
        IndexEntry { element: "psi(U)K".into(), idx_left: Some(1), idx_right: Some(1), status: Status::Pass, note: None }
    } else {
        IndexEntry {
            element: "psi(U)K".into(),
            idx_left: None,
            idx_right: None,
            status: Status::Unknown,
            note: Some("K is not contained in U".into()),
        }
    };
    Ok((centralizing, trivial, commensuration))
}

fn random_products(j: &InfiniteWreath, pool: &[JElem], rng: &mut ChaCha8Rng) -> Result<Vec<JElem>> {
    let mut out = Vec::new();
    if pool.is_empty() {
        return Ok(out);
    }
    for _ in 0..RANDOM_SAMPLES {
        let len = rng.gen_range(1..=4);
        let mut e = j.identity();
        for _ in 0..len {
            let g = &pool[rng.gen_range(0..pool.len())];
            let g = if rng.gen_bool(0.5) { j.inverse(g)? } else { g.clone() };
            e = j.mul(&e, &g)?;
        }
        out.push(e);
    }
    Ok(out)
}

fn check_contraction(pair: &PermutationHeckePair, x: &Point, depth: u32) -> Result<Checks> {
    let j = InfiniteWreath::new(pair)?;
    let d = depth as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let ks = j.k_generators(x, d, DEFAULT_PLACEMENT_RADIUS)?;

    let mut samples = j.generators(d);
    samples.extend(random_products(&j, &j.generators(d), &mut rng)?);
    let images: Vec<JElem> = samples.iter().map(|g| j.contract(x, g)).collect::<Result<_>>()?;

    let mut centralizing = CheckEntry::pass(0);
    'outer: for k in &ks {
        centralizing.checked += 1;
        if !j.in_i(k)? {
            centralizing = CheckEntry::fail(centralizing.checked, j.render(k));
            break;
        }
        for p in &images {
            centralizing.checked += 1;
            if !j.equal(&j.mul(k, p)?, &j.mul(p, k)?)? {
                centralizing = CheckEntry::fail(centralizing.checked, j.render(k));
                break 'outer;
            }
        }
    }

    let mut k_samples = ks.clone();
    k_samples.extend(random_products(&j, &ks, &mut rng)?);
    let mut trivial = CheckEntry::pass(0);
    for k in &k_samples {
        trivial.checked += 1;
        if !j.is_identity(k)? && j.in_contraction_image(x, k)? {
            trivial = CheckEntry::fail(trivial.checked, j.render(k));
            break;
        }
    }

    let mut inside = true;
    for g in j.i_generators(d, DEFAULT_PLACEMENT_RADIUS)? {
        inside &= j.in_i(&j.contract(x, &g)?)?;
    }
    for k in &ks {
        inside &= j.in_i(k)?;
    }
    let commensuration = if !inside {
        IndexEntry {
            element: "psi(U)K".into(),
            idx_left: None,
            idx_right: None,
            status: Status::Fail,
            note: Some("psi(U)K is not contained in U".into()),
        }
    } else {
        match u_orbit(pair, Space::Domain, x, pair.caps().orbit) {
            Ok(orbit) => IndexEntry {
                element: "psi(U)K".into(),
                idx_left: Some(orbit.len() as u64),
                idx_right: Some(1),
                status: Status::Pass,
                note: None,
            },
            Err(e @ Error::OrbitCapExceeded { .. }) => IndexEntry {
                element: "psi(U)K".into(),
                idx_left: None,
                idx_right: Some(1),
                status: Status::Fail,
                note: Some(e.to_string()),
            },
            Err(e) => return Err(e),
        }
    };
    Ok((centralizing, trivial, commensuration))
}

/// A constructed HNN pair: the extension, its alphabet, and propagated metadata.
#[derive(Debug)]
pub struct HnnPair {
    pub ext: HnnExtension,
    pub metadata: PairMetadata,
    pub report: HnnCompatReport,
    gens: Vec<Generator>,
}

/// Stable-letter name: `s`, with underscores appended until it is fresh.
fn stable_name(gens: &[Generator]) -> String {
    let mut name = String::from("s");
    while gens.iter().any(|g| g.name == name) {
        name.push('_');
    }
    name
}

impl HnnPair {
    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn stable_index(&self) -> usize {
        self.gens.len() - 1
    }

    pub fn name(&self) -> String {
        self.metadata.construction.to_string()
    }

    pub fn parse_word(&self, text: &str) -> Result<GroupWord> {
        GroupWord::parse(text, &self.gens)
    }

    pub fn show(&self, w: &GroupWord) -> String {
        w.display(&self.gens).to_string()
    }

    pub fn element(&self, w: &GroupWord) -> Result<HnnElement> {
        self.ext.from_word(w)
    }

    pub fn t_commensuration(&self) -> Result<CommReport> {
        self.ext.t_commensuration(&self.gens[self.stable_index()].name)
    }
}

/// hnn(P, contraction(x)) at truncation depth `depth`, after a passing compatibility check.
pub fn hnn(pair: &PermutationHeckePair, x: Point, depth: u32) -> Result<HnnPair> {
    let report = check_hnn_compatible(pair, &Embedding::Contraction(x.clone()), None, depth)?;
    if report.status == Status::Fail {
        return Err(Error::InvalidParameter(format!("contraction at {x} is not HNN-compatible for {}", pair.name())));
    }
    let ext = HnnExtension::new(pair, x.clone(), depth)?;
    let mut gens = pair.generators().to_vec();
    let stable = gens.len();
    gens.push(Generator::new(stable_name(pair.generators())));

    let pm = &pair.metadata;
    let inner = if depth == 0 {
        pm.construction.clone()
    } else {
        Construction::IterWreath { pair: Box::new(pm.construction.clone()), k: depth }
    };
    let mut m = PairMetadata::unknown(Construction::Hnn { pair: Box::new(inner), point: x });
    if pm.finitely_generated.is_true() && pm.transitive.is_true() {
        if let Some(f) = &pm.fg_witness {
            let mut w = f.clone();
            w.push(GroupWord::gen(stable));
            m.fg_witness = Some(w);
            m.finitely_generated = Flag::by(true, "HNN extension generated by F and the stable letter");
        }
    }
    m.elementary = match pm.elementary.value {
        Tri::True => Flag::by(true, "HNN extension of an elementary infinite wreath"),
        _ => Flag::unknown(),
    };
    m.perfect = Flag::by(false, "the stable letter survives in the abelianization");
    m.lz = Some(LzWitness { t: stable });
    m.infinite_u = pm.infinite_u.clone();
    Ok(HnnPair { ext, metadata: m, report, gens })
}

//! Ordinals below ω^ω in Cantor normal form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// `Σ ω^{e_i}·c_i` with strictly decreasing exponents and positive coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Ordinal {
    terms: Vec<(u32, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal::default()
    }

    pub fn nat(n: u64) -> Self {
        Ordinal::omega_pow(0, n)
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(1, 1)
    }

    /// `ω^exp · coeff`
    pub fn omega_pow(exp: u32, coeff: u64) -> Self {
        if coeff == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(exp, coeff)] }
        }
    }

    /// Builds from arbitrary (exponent, coefficient) pairs by ordinal summation in order.
    pub fn from_terms(terms: &[(u32, u64)]) -> Self {
        terms.iter().fold(Ordinal::zero(), |acc, &(e, c)| acc.add(&Ordinal::omega_pow(e, c)))
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_transfinite(&self) -> bool {
        self.terms.first().map_or(false, |&(e, _)| e > 0)
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().map_or(false, |&(e, _)| e == 0)
    }

    pub fn leading_exponent(&self) -> Option<u32> {
        self.terms.first().map(|&(e, _)| e)
    }

    /// Ordinal sum; coefficients saturate at `u64::MAX`.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        self.sum(other, |a, b| Some(a.saturating_add(b))).expect("saturating sum")
    }

    /// Ordinal sum, or `None` when a coefficient overflows.
    pub fn checked_add(&self, other: &Ordinal) -> Option<Ordinal> {
        self.sum(other, u64::checked_add)
    }

    fn sum(&self, other: &Ordinal, merge: impl Fn(u64, u64) -> Option<u64>) -> Option<Ordinal> {
        let Some(&(lead, lead_coeff)) = other.terms.first() else {
            return Some(self.clone());
        };
        let mut terms: Vec<(u32, u64)> = self.terms.iter().copied().take_while(|&(e, _)| e > lead).collect();
        let merged = self.terms.iter().find(|&&(e, _)| e == lead).map_or(0, |&(_, c)| c);
        terms.push((lead, merge(merged, lead_coeff)?));
        terms.extend_from_slice(&other.terms[1..]);
        Some(Ordinal { terms })
    }

    /// The unique δ with `smaller + δ = self`, when `smaller ≤ self`.
    pub fn sub_left(&self, smaller: &Ordinal) -> Option<Ordinal> {
        if smaller > self {
            return None;
        }
        for (i, (&a, &b)) in smaller.terms.iter().zip(&self.terms).enumerate() {
            if a == b {
                continue;
            }
            let mut terms = Vec::new();
            if a.0 == b.0 {
                terms.push((b.0, b.1 - a.1));
                terms.extend_from_slice(&self.terms[i + 1..]);
            } else {
                terms.extend_from_slice(&self.terms[i..]);
            }
            return Some(Ordinal { terms });
        }
        Some(Ordinal { terms: self.terms[smaller.terms.len()..].to_vec() })
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::nat(1))
    }

    /// Right multiplication by a natural number.
    pub fn mul_nat(&self, n: u64) -> Ordinal {
        if n == 0 || self.is_zero() {
            return Ordinal::zero();
        }
        let mut terms = self.terms.clone();
        terms[0].1 = terms[0].1.saturating_mul(n);
        Ordinal { terms }
    }

    /// `ω^(e+1)` where `ω^e` is the leading power: the supremum of `self·n` over n.
    pub fn times_omega(&self) -> Ordinal {
        match self.leading_exponent() {
            None => Ordinal::zero(),
            Some(e) => Ordinal::omega_pow(e + 1, 1),
        }
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            match a.0.cmp(&b.0).then(a.1.cmp(&b.1)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    /// Accepts the printed form, e.g. `w^2*3 + w*2 + 1`, `w + 2`, `0`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = |why: &str| Error::OrdinalSyntax(format!("`{s}`: {why}"));
        if s.trim().is_empty() {
            return Err(bad("empty"));
        }
        let mut acc = Ordinal::zero();
        for raw in s.split('+') {
            let term = raw.trim();
            if term.is_empty() {
                return Err(bad("empty term"));
            }
            let (power, coeff) = match term.split_once('*') {
                Some((p, c)) => (p.trim(), Some(c.trim())),
                None => (term, None),
            };
            let parse_nat = |t: &str| -> Result<u64, Error> {
                if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad("expected a natural number"));
                }
                t.parse::<u64>().map_err(|_| bad("number out of range"))
            };
            let piece = if let Some(rest) = power.strip_prefix('w') {
                let exp = match rest.trim() {
                    "" => 1,
                    r => {
                        let e = r.strip_prefix('^').ok_or_else(|| bad("expected ^"))?;
                        let e = parse_nat(e.trim())?;
                        u32::try_from(e).map_err(|_| bad("exponent out of range"))?
                    }
                };
                let c = match coeff {
                    Some(c) => parse_nat(c)?,
                    None => 1,
                };
                Ordinal::omega_pow(exp, c)
            } else {
                if coeff.is_some() {
                    return Err(bad("coefficient on a finite term"));
                }
                Ordinal::nat(parse_nat(power)?)
            };
            acc = acc.checked_add(&piece).ok_or_else(|| bad("coefficient out of range"))?;
        }
        Ok(acc)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

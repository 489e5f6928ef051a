//! Exact point encodings shared by all action oracles.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A hashable, totally ordered point of a coset space or permutation domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Point {
    Int(i128),
    Tuple(Vec<Point>),
}

impl Point {
    pub fn int(v: impl Into<i128>) -> Point {
        Point::Int(v.into())
    }

    pub fn unit() -> Point {
        Point::Tuple(Vec::new())
    }

    pub fn as_int(&self) -> Result<i128> {
        match self {
            Point::Int(v) => Ok(*v),
            other => Err(Error::InvalidParameter(format!("expected integer point, got {other}"))),
        }
    }

    pub fn as_tuple(&self) -> Result<&[Point]> {
        match self {
            Point::Tuple(v) => Ok(v),
            other => Err(Error::InvalidParameter(format!("expected tuple point, got {other}"))),
        }
    }

    pub fn into_tuple(self) -> Result<Vec<Point>> {
        match self {
            Point::Tuple(v) => Ok(v),
            other => Err(Error::InvalidParameter(format!("expected tuple point, got {other}"))),
        }
    }

    /// Flattens nested tuples, e.g. iterated wreath points, outermost coordinate first.
    pub fn flatten(&self) -> Vec<Point> {
        match self {
            Point::Int(_) => vec![self.clone()],
            Point::Tuple(v) if v.len() == 2 => {
                let mut out = v[0].flatten();
                out.extend(v[1].flatten());
                out
            }
            Point::Tuple(_) => vec![self.clone()],
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Int(v) => write!(f, "{v}"),
            Point::Tuple(v) => {
                write!(f, "(")?;
                for (i, p) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

pub(crate) fn checked_pow(base: i128, exp: u32) -> Result<i128> {
    base.checked_pow(exp).ok_or(Error::Overflow("power"))
}

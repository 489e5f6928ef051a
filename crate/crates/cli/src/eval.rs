//! Turns pair expressions into core pairs.

use std::collections::BTreeMap;

use hecke_core::catalog::by_name;
use hecke_core::hnn::{hnn, HnnPair};
use hecke_core::perfect::perfectize;
use hecke_core::point::Point;
use hecke_core::wreath::{iterated_wreath, wreath};
use hecke_core::{Caps, PermutationHeckePair, Space};

use crate::ast::{ContractionPoint, PairExpr, Span};
use crate::error::{CliError, Result};

#[derive(Debug)]
pub enum Value {
    Pair(PermutationHeckePair),
    Hnn(HnnPair),
}

impl Value {
    pub fn name(&self) -> String {
        match self {
            Value::Pair(p) => p.name(),
            Value::Hnn(h) => h.name(),
        }
    }
}

/// Bindings in scope, by name.
#[derive(Debug, Clone, Default)]
pub struct Env {
    bindings: BTreeMap<String, PairExpr>,
}

impl Env {
    pub fn bind(&mut self, name: impl Into<String>, expr: PairExpr) {
        self.bindings.insert(name.into(), expr);
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.bindings.keys()
    }

    /// Follows references until a constructor node.
    pub fn resolve<'a>(&'a self, mut expr: &'a PairExpr) -> Result<&'a PairExpr> {
        while let PairExpr::Ref { name, span } = expr {
            expr = self.bindings.get(name).ok_or_else(|| CliError::UnknownIdentifier { span: *span, name: name.clone() })?;
        }
        Ok(expr)
    }

    pub fn eval(&self, expr: &PairExpr, caps: Caps) -> Result<Value> {
        let node = self.resolve(expr)?;
        let span = expr.span();
        let core = CliError::core(span);
        match node {
            PairExpr::Hnn { expr: inner, point, .. } => {
                let inner_node = self.resolve(inner)?;
                let (base, depth) = match inner_node {
                    PairExpr::IterWreath { expr: base, k, .. } => (self.eval_pair(base, caps)?, *k),
                    _ => (self.eval_pair(inner, caps)?, 0),
                };
                let x = contraction_point(&base, point, span)?;
                hnn(&base, x, depth).map(Value::Hnn).map_err(core)
            }
            _ => self.eval_pair(expr, caps).map(Value::Pair),
        }
    }

    /// Evaluates an expression that must denote a pair with a coset oracle.
    pub fn eval_pair(&self, expr: &PairExpr, caps: Caps) -> Result<PermutationHeckePair> {
        let node = self.resolve(expr)?;
        let span = expr.span();
        let core = CliError::core(span);
        match node {
            PairExpr::Builtin { name, params, .. } => by_name(name, params).map(|p| p.with_caps(caps)).map_err(core),
            PairExpr::Wreath { bottom, top, .. } => {
                let b = self.eval_pair(bottom, caps)?;
                let t = self.eval_pair(top, caps)?;
                wreath(&b, &t).map_err(core)
            }
            PairExpr::IterWreath { expr, k, .. } => iterated_wreath(&self.eval_pair(expr, caps)?, *k).map_err(core),
            PairExpr::Perfectize { expr, .. } => perfectize(&self.eval_pair(expr, caps)?).map_err(core),
            PairExpr::Hnn { .. } => Err(CliError::usage(span, "an HNN pair has no coset oracle and cannot be used here")),
            PairExpr::Ref { .. } => unreachable!("resolved"),
        }
    }
}

fn contraction_point(pair: &PermutationHeckePair, point: &ContractionPoint, span: Span) -> Result<Point> {
    match point {
        ContractionPoint::Int(v) => Ok(Point::int(*v)),
        ContractionPoint::Word(text) => {
            let w = pair.parse_word(text).map_err(CliError::core(span))?;
            pair.act_point(Space::Domain, &w, &pair.base(Space::Domain)).map_err(CliError::core(span))
        }
    }
}

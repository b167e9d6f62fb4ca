use std::collections::BTreeSet;

use serde::Serialize;

use crate::model::{BinaryOp, ClauseExpr, UnaryOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Disjointness {
    Disjoint,
    Overlapping,
    Unknown,
}

/// Values of one integer term allowed by a conjunction of comparisons.
#[derive(Debug, Clone)]
struct Range {
    lo: i128,
    hi: i128,
    holes: BTreeSet<i128>,
}

impl Range {
    fn full() -> Self {
        Range { lo: i64::MIN as i128 - 1, hi: i64::MAX as i128 + 1, holes: BTreeSet::new() }
    }

    fn apply(&mut self, op: BinaryOp, k: i128) {
        match op {
            BinaryOp::Eq => {
                self.lo = self.lo.max(k);
                self.hi = self.hi.min(k);
            }
            BinaryOp::Ne => {
                self.holes.insert(k);
            }
            BinaryOp::Lt => self.hi = self.hi.min(k - 1),
            BinaryOp::Le => self.hi = self.hi.min(k),
            BinaryOp::Gt => self.lo = self.lo.max(k + 1),
            BinaryOp::Ge => self.lo = self.lo.max(k),
            _ => unreachable!("only relational operators reach here"),
        }
    }

    fn intersect(&self, other: &Range) -> Range {
        Range {
            lo: self.lo.max(other.lo),
            hi: self.hi.min(other.hi),
            holes: self.holes.union(&other.holes).copied().collect(),
        }
    }

    fn is_empty(&self) -> bool {
        if self.lo > self.hi {
            return true;
        }
        let span = self.hi - self.lo + 1;
        let inside = self.holes.range(self.lo..=self.hi).count() as i128;
        inside >= span
    }
}

fn constant(e: &ClauseExpr) -> Option<i128> {
    match e {
        ClauseExpr::Int(n) => Some(*n as i128),
        ClauseExpr::Unary { op: UnaryOp::Neg, operand } => constant(operand).map(|n| -n),
        _ => None,
    }
}

/// Flatten a conjunction into `(term, op, constant)` triples, with the
/// term on the left. `None` if any conjunct falls outside the fragment.
fn comparisons<'e>(e: &'e ClauseExpr, out: &mut Vec<(&'e ClauseExpr, BinaryOp, i128)>) -> Option<()> {
    match e {
        ClauseExpr::Binary { op: BinaryOp::And, lhs, rhs } => {
            comparisons(lhs, out)?;
            comparisons(rhs, out)
        }
        ClauseExpr::Binary { op, lhs, rhs } if op.is_relational() => {
            match (constant(lhs), constant(rhs)) {
                (None, Some(k)) => out.push((lhs, *op, k)),
                (Some(k), None) => out.push((rhs, op.flipped(), k)),
                _ => return None,
            }
            Some(())
        }
        _ => None,
    }
}

/// Decide whether two preconditions can hold together, for conjunctions of
/// comparisons of one shared term against integer constants.
pub fn check_disjoint_interval(c1: &ClauseExpr, c2: &ClauseExpr) -> Disjointness {
    let mut parts = Vec::new();
    if comparisons(c1, &mut parts).is_none() {
        return Disjointness::Unknown;
    }
    let split = parts.len();
    if comparisons(c2, &mut parts).is_none() {
        return Disjointness::Unknown;
    }
    let term = parts[0].0;
    if parts.iter().any(|(t, _, _)| *t != term) {
        return Disjointness::Unknown;
    }
    let build = |ps: &[(&ClauseExpr, BinaryOp, i128)]| {
        let mut r = Range::full();
        for &(_, op, k) in ps {
            r.apply(op, k);
        }
        r
    };
    let (a, b) = (build(&parts[..split]), build(&parts[split..]));
    if a.intersect(&b).is_empty() {
        Disjointness::Disjoint
    } else {
        Disjointness::Overlapping
    }
}

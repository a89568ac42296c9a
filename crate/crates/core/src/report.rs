use std::fmt::Display;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::charring::Character;
use crate::qchar::LaurentPoly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    /// Canonical text of the monomial (or weight, for ordinary characters).
    pub monomial: String,
    pub lhs: i64,
    pub rhs: i64,
}

/// Outcome of an exact two-sided comparison.
///
/// `elapsed_ms` is only filled in when timing was requested, so that
/// repeated runs produce identical reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub lhs_terms: usize,
    pub rhs_terms: usize,
    pub equal: bool,
    pub mismatches: Vec<Mismatch>,
    pub elapsed_ms: Option<u64>,
}

impl VerifyReport {
    fn build<K: Ord + Display>(lhs_terms: usize, rhs_terms: usize, mut diffs: Vec<(K, i64, i64)>) -> Self {
        diffs.sort_by(|a, b| a.0.cmp(&b.0));
        let mismatches: Vec<Mismatch> = diffs.into_iter().map(|(k, lhs, rhs)| Mismatch { monomial: k.to_string(), lhs, rhs }).collect();
        VerifyReport { lhs_terms, rhs_terms, equal: mismatches.is_empty(), mismatches, elapsed_ms: None }
    }

    pub fn compare_polys(lhs: &LaurentPoly, rhs: &LaurentPoly) -> Self {
        let mut diffs = Vec::new();
        for (m, c) in lhs.iter() {
            let d = rhs.coefficient(m);
            if d != c {
                diffs.push((m.clone(), c, d));
            }
        }
        for (m, d) in rhs.iter() {
            if lhs.coefficient(m) == 0 {
                diffs.push((m.clone(), 0, d));
            }
        }
        VerifyReport::build(lhs.len(), rhs.len(), diffs)
    }

    pub fn compare_characters(lhs: &Character, rhs: &Character) -> Self {
        let mut diffs = Vec::new();
        for (w, &c) in lhs.terms() {
            let d = rhs.coefficient(w);
            if d != c {
                diffs.push((w.clone(), c, d));
            }
        }
        for (w, &d) in rhs.terms() {
            if lhs.coefficient(w) == 0 {
                diffs.push((w.clone(), 0, d));
            }
        }
        VerifyReport::build(lhs.len(), rhs.len(), diffs)
    }

    pub fn with_elapsed(mut self, elapsed: Duration) -> Self {
        self.elapsed_ms = Some(elapsed.as_millis() as u64);
        self
    }

    /// Both reports are equal and so is their conjunction.
    pub fn and(mut self, other: VerifyReport) -> Self {
        self.lhs_terms += other.lhs_terms;
        self.rhs_terms += other.rhs_terms;
        self.mismatches.extend(other.mismatches);
        self.equal = self.equal && other.equal;
        self
    }
}

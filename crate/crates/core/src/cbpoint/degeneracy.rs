use num_traits::Zero;
use serde::Serialize;

use crate::projective::{conic_det, Config8};

/// Every violation of the general-position hypotheses, by 1-based label.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DegeneracyReport {
    pub collinear_triples: Vec<[usize; 3]>,
    pub coconic_sextuples: Vec<[usize; 6]>,
    pub coincident_pairs: Vec<[usize; 2]>,
}

impl DegeneracyReport {
    pub fn is_empty(&self) -> bool {
        self.collinear_triples.is_empty()
            && self.coconic_sextuples.is_empty()
            && self.coincident_pairs.is_empty()
    }

    /// One-line description naming the first violation of each kind.
    pub fn summary(&self) -> String {
        if self.is_empty() {
            return "general position".into();
        }
        let mut parts = Vec::new();
        if let Some(p) = self.coincident_pairs.first() {
            parts.push(format!(
                "{} coincident pair(s), first {:?}",
                self.coincident_pairs.len(),
                p
            ));
        }
        if let Some(t) = self.collinear_triples.first() {
            parts.push(format!(
                "{} collinear triple(s), first {:?}",
                self.collinear_triples.len(),
                t
            ));
        }
        if let Some(s) = self.coconic_sextuples.first() {
            parts.push(format!(
                "{} coconic sextuple(s), first {:?}",
                self.coconic_sextuples.len(),
                s
            ));
        }
        parts.join("; ")
    }
}

/// Exhaustive exact test of all 28 pairs, 56 triples and 28 sextuples.
pub fn degeneracy_report(c: &Config8) -> DegeneracyReport {
    let mut report = DegeneracyReport::default();
    for i in 1..=8 {
        for j in i + 1..=8 {
            if c.p(i).same_point(c.p(j)) {
                report.coincident_pairs.push([i, j]);
            }
            for k in j + 1..=8 {
                if c.bracket(i, j, k).is_zero() {
                    report.collinear_triples.push([i, j, k]);
                }
            }
        }
    }
    // a sextuple is the complement of a pair
    for a in 1..=8 {
        for b in a + 1..=8 {
            let six: Vec<usize> = (1..=8).filter(|&k| k != a && k != b).collect();
            let pts = [0, 1, 2, 3, 4, 5].map(|k| c.p(six[k]));
            if conic_det(pts).is_zero() {
                report
                    .coconic_sextuples
                    .push(six.try_into().expect("six labels"));
            }
        }
    }
    report.coconic_sextuples.sort();
    report
}

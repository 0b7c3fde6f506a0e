//! Symbolic expansion of the specialized factors and Newton polytope vertices.
//!
//! With `P1..P4` fixed to the frame, every entry of a factor matrix is a
//! single monomial in the twelve coordinates of `P5..P8`, so the determinant
//! expands by dynamic programming over subsets of used columns.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::valuation::{factor_rows, Factor};
use crate::exact::Rat;
use crate::monomials::Term;

/// `x5, y5, z5, x6, ..., z8`.
pub const NUM_VARIABLES: usize = 12;

pub type ExponentVector = [u32; NUM_VARIABLES];

/// Polynomial in the twelve coordinates with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparsePoly {
    terms: BTreeMap<ExponentVector, BigInt>,
}

impl SparsePoly {
    pub fn terms(&self) -> &BTreeMap<ExponentVector, BigInt> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_scaled_monomial(&mut self, other: &SparsePoly, coef: &BigInt, exps: &ExponentVector) {
        for (e, c) in &other.terms {
            let mut key = *e;
            for (k, d) in key.iter_mut().zip(exps) {
                *k += d;
            }
            let entry = self.terms.entry(key).or_insert_with(BigInt::zero);
            *entry += c * coef;
            if entry.is_zero() {
                self.terms.remove(&key);
            }
        }
    }

    /// Exponent vectors with nonzero coefficient, in lexicographic order.
    pub fn support(&self) -> Vec<ExponentVector> {
        self.terms.keys().copied().collect()
    }
}

const FRAME: [[i64; 3]; 4] = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]];

/// The entry `coef * x^a y^b z^c` of point `label` as a monomial.
fn symbolic_entry(term: Term, label: usize) -> Option<(BigInt, ExponentVector)> {
    let mut exps = [0u32; NUM_VARIABLES];
    let mut coef = BigInt::from(term.coef);
    if label <= 4 {
        for (axis, &e) in term.exps.iter().enumerate() {
            if e > 0 {
                coef *= BigInt::from(FRAME[label - 1][axis]).pow(e);
            }
        }
    } else {
        exps[(label - 5) * 3..(label - 5) * 3 + 3].copy_from_slice(&term.exps);
    }
    (!coef.is_zero()).then_some((coef, exps))
}

/// Full expansion of a factor with `P1..P4` specialized to the frame.
pub fn expand_factor(f: Factor) -> SparsePoly {
    let rows: Vec<Vec<Option<(BigInt, ExponentVector)>>> = factor_rows(f)
        .into_iter()
        .map(|(kind, label)| {
            kind.template()
                .into_iter()
                .map(|t| t.and_then(|t| symbolic_entry(t, label)))
                .collect()
        })
        .collect();
    let n = rows.len();
    let mut one = SparsePoly::default();
    one.terms.insert([0; NUM_VARIABLES], BigInt::one());
    let mut layer: HashMap<u32, SparsePoly> = HashMap::from([(0u32, one)]);
    for row in &rows {
        let mut next: HashMap<u32, SparsePoly> = HashMap::new();
        let mut masks: Vec<u32> = layer.keys().copied().collect();
        masks.sort_unstable();
        for mask in masks {
            let poly = &layer[&mask];
            for (col, entry) in row.iter().enumerate() {
                let Some((coef, exps)) = entry else { continue };
                if mask & (1 << col) != 0 {
                    continue;
                }
                // inversions added by placing `col` after the columns in `mask`
                let sign = if (mask >> (col + 1)).count_ones() % 2 == 0 {
                    coef.clone()
                } else {
                    -coef
                };
                next.entry(mask | (1 << col))
                    .or_default()
                    .add_scaled_monomial(poly, &sign, exps);
            }
        }
        next.retain(|_, p| !p.is_empty());
        layer = next;
    }
    layer.remove(&((1u32 << n) - 1)).unwrap_or_default()
}

/// Exponent vectors of the expanded factor.
pub fn newton_support(f: Factor) -> Vec<ExponentVector> {
    expand_factor(f).support()
}

/// Swaps the `a` and `b` coordinates inside every point block.
pub fn swap_axes(v: &ExponentVector, a: usize, b: usize) -> ExponentVector {
    let mut out = *v;
    for block in 0..4 {
        out.swap(block * 3 + a, block * 3 + b);
    }
    out
}

/// Phase-one simplex (Bland's rule) for `A lambda = b, lambda >= 0`.
fn feasible(a: &[Vec<Rat>], b: &[Rat]) -> bool {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let width = n + m;
    // tableau rows: constraints, then the phase-one objective
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m + 1);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let flip = rhs.is_negative();
        let mut r: Vec<Rat> = row.iter().map(|x| if flip { -x } else { x.clone() }).collect();
        r.extend((0..m).map(|k| if k == i { Rat::one() } else { Rat::zero() }));
        r.push(if flip { -rhs } else { rhs.clone() });
        t.push(r);
    }
    let mut obj = vec![Rat::zero(); width + 1];
    for r in &t {
        for j in (0..n).chain(std::iter::once(width)) {
            obj[j] -= &r[j];
        }
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        let Some(enter) = (0..width).find(|&j| t[m][j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            // unbounded is impossible for phase one
            unreachable!("phase-one objective is bounded below by zero");
        };
        let pivot = t[pr][enter].clone();
        for x in t[pr].iter_mut() {
            *x /= &pivot;
        }
        let prow = t[pr].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == pr || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        basis[pr] = enter;
    }
    t[m][width].is_zero()
}

/// Whether `p` is a convex combination of `others`.
fn in_hull(others: &[&Vec<i64>], p: &[i64]) -> bool {
    if others.is_empty() {
        return false;
    }
    let d = p.len();
    let mut a: Vec<Vec<Rat>> = (0..d)
        .map(|k| others.iter().map(|q| Rat::from_integer(q[k].into())).collect())
        .collect();
    a.push(vec![Rat::one(); others.len()]);
    let mut b: Vec<Rat> = p.iter().map(|&x| Rat::from_integer(x.into())).collect();
    b.push(Rat::one());
    feasible(&a, &b)
}

/// Number of vertices of the convex hull of `points` (duplicates ignored).
pub fn newton_vertex_count(points: &[Vec<i64>]) -> usize {
    let mut uniq: Vec<Vec<i64>> = points.to_vec();
    uniq.sort();
    uniq.dedup();
    (0..uniq.len())
        .into_par_iter()
        .filter(|&i| {
            let others: Vec<&Vec<i64>> = uniq
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| q)
                .collect();
            !in_hull(&others, &uniq[i])
        })
        .count()
}

/// The support as integer vectors for [`newton_vertex_count`].
pub fn support_points(support: &[ExponentVector]) -> Vec<Vec<i64>> {
    support
        .iter()
        .map(|e| e.iter().map(|&x| x as i64).collect())
        .collect()
}

//! Min-plus evaluation of the ninth-point formulas.
//!
//! Tropical addition is `min`, tropical multiplication is ordinary addition,
//! and the tropical determinant is an optimal-assignment value. The
//! valuation experiments compare these predictions with p-adic orders of the
//! exact rational results; the Newton module expands the specialized `C` and
//! `D` polynomials and counts the vertices of their Newton polytopes.

mod assignment;
mod newton;
mod valuation;

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};
use crate::exact::{format_rat, Rat};

pub use assignment::{tropical_determinant, TropDeterminant};
pub use newton::{
    expand_factor, newton_support, newton_vertex_count, support_points, swap_axes, ExponentVector,
    SparsePoly, NUM_VARIABLES,
};
pub use valuation::{
    factor_rows, p_adic_valuation, tropical_p9, valuation_agreement, valuation_matrix, Factor,
    FactorPrediction, TrialRecord, TropConfig, TropicalP9, ValuationReport,
};

/// An element of the min-plus semiring: a rational or `+inf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TropValue {
    Finite(Rat),
    Infinite,
}

impl TropValue {
    pub fn zero() -> Self {
        TropValue::Finite(Rat::from_integer(0.into()))
    }

    pub fn from_i64(v: i64) -> Self {
        TropValue::Finite(Rat::from_integer(v.into()))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, TropValue::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            TropValue::Finite(r) => Some(r),
            TropValue::Infinite => None,
        }
    }

    /// Tropical addition.
    pub fn oplus(&self, other: &TropValue) -> TropValue {
        self.clone().min(other.clone())
    }

    /// Tropical multiplication.
    pub fn otimes(&self, other: &TropValue) -> TropValue {
        match (self, other) {
            (TropValue::Finite(a), TropValue::Finite(b)) => TropValue::Finite(a + b),
            _ => TropValue::Infinite,
        }
    }
}

impl PartialOrd for TropValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TropValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (TropValue::Finite(a), TropValue::Finite(b)) => a.cmp(b),
            (TropValue::Finite(_), TropValue::Infinite) => Ordering::Less,
            (TropValue::Infinite, TropValue::Finite(_)) => Ordering::Greater,
            (TropValue::Infinite, TropValue::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for TropValue {
    type Output = TropValue;

    fn add(self, rhs: TropValue) -> TropValue {
        self.otimes(&rhs)
    }
}

impl fmt::Display for TropValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropValue::Finite(r) => f.write_str(&format_rat(r)),
            TropValue::Infinite => f.write_str("inf"),
        }
    }
}

/// Rectangular matrix of tropical values, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<TropValue>,
}

impl TropMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<TropValue>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(TropMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<TropValue>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let n = rows.len();
        Self::new(n, cols, rows.into_iter().flatten().collect())
    }

    /// Integer entries with `None` as `+inf`.
    pub fn from_options<R: AsRef<[Option<i64>]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.as_ref()
                        .iter()
                        .map(|e| e.map_or(TropValue::Infinite, TropValue::from_i64))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &TropValue {
        &self.entries[i * self.cols + j]
    }
}

//! Exact rational scalars and the small amount of linear algebra the rest of
//! the crate needs: determinants, rank and right null spaces over `Q`.
//!
//! Nothing here touches floating point.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rat = num_rational::BigRational;

/// Shorthand for an integer-valued [`Rat`].
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"n"` or `"p/q"` into an exact rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = parse_int(num)?;
    let den: BigInt = parse_int(den)?;
    if den.is_zero() {
        return None;
    }
    Some(Rat::new(num, den))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Formats a rational as `"n"` or `"p/q"`; the inverse of [`parse_rat`].
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Least common multiple of all denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scales a rational vector to the primitive integer vector on the same line:
/// denominators cleared, content 1, first nonzero entry positive.
///
/// The zero vector maps to itself.
pub fn primitive_integer_vector(v: &[Rat]) -> Vec<BigInt> {
    let den = common_denominator(v);
    let mut ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&den / x.denom()))
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if content.is_zero() {
        return ints;
    }
    let negate = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in ints.iter_mut() {
        *x = &*x / &content;
        if negate {
            *x = -&*x;
        }
    }
    ints
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RatMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from a list of equally long rows.
    pub fn from_rows<R: AsRef<[Rat]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        Ok(RatMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| rat(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Removes one row and one column.
    pub fn minor(&self, skip_row: usize, skip_col: usize) -> RatMatrix {
        let mut entries = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != skip_row) {
            for j in (0..self.cols).filter(|&j| j != skip_col) {
                entries.push(self[(i, j)].clone());
            }
        }
        RatMatrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            entries,
        }
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> RatMatrix {
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                entries.push(self[(i, j)].clone());
            }
        }
        RatMatrix {
            rows: self.rows,
            cols: cols.len(),
            entries,
        }
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;

    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rat).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Closed-form 3x3 determinant by cofactor expansion along the first row.
pub fn det3(m: [[&Rat; 3]; 3]) -> Rat {
    let [a, b, c] = m;
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Exact determinant of a square matrix.
///
/// Sizes up to three use closed forms; larger matrices are scaled row by row
/// to integers and reduced with Bareiss' fraction-free elimination.
pub fn ff_determinant(m: &RatMatrix) -> Result<Rat> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "determinant of a non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    Ok(match n {
        0 => Rat::one(),
        1 => m[(0, 0)].clone(),
        2 => &m[(0, 0)] * &m[(1, 1)] - &m[(0, 1)] * &m[(1, 0)],
        3 => det3([
            [&m[(0, 0)], &m[(0, 1)], &m[(0, 2)]],
            [&m[(1, 0)], &m[(1, 1)], &m[(1, 2)]],
            [&m[(2, 0)], &m[(2, 1)], &m[(2, 2)]],
        ]),
        _ => {
            let mut scale = BigInt::one();
            let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
            for i in 0..n {
                let row = m.row(i);
                let den = common_denominator(row);
                rows.push(row.iter().map(|x| x.numer() * (&den / x.denom())).collect());
                scale *= den;
            }
            Rat::new(bareiss_det(rows), scale)
        }
    })
}

/// Bareiss elimination on an integer matrix. Consumes the rows.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let v = pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = pivot.clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Reduced row echelon form; returns the pivot column of each nonzero row.
fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..a.cols {
                a.entries.swap(p * a.cols + j, r * a.cols + j);
            }
        }
        let inv = a[(r, c)].recip();
        for j in c..a.cols {
            a[(r, j)] = &a[(r, j)] * &inv;
        }
        for i in 0..a.rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..a.cols {
                let delta = &f * &a[(r, j)];
                a[(i, j)] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &RatMatrix) -> usize {
    rref(m).1.len()
}

/// Basis of the right null space `{v : m v = 0}`.
///
/// Each basis vector is a primitive integer vector (stored as integer-valued
/// rationals) with its first nonzero entry positive. One vector per free
/// column, in increasing column order.
pub fn right_nullspace(m: &RatMatrix) -> Vec<Vec<Rat>> {
    let (r, pivots) = rref(m);
    let free = (0..m.cols).filter(|c| !pivots.contains(c));
    free.map(|f| {
        let mut v = vec![Rat::zero(); m.cols];
        v[f] = Rat::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -r[(row, f)].clone();
        }
        primitive_integer_vector(&v)
            .into_iter()
            .map(Rat::from_integer)
            .collect()
    })
    .collect()
}

/// Solves a square nonsingular system `m x = b`.
pub fn solve(m: &RatMatrix, b: &[Rat]) -> Result<Vec<Rat>> {
    if !m.is_square() || b.len() != m.rows {
        return Err(Error::Shape("solve needs a square system".into()));
    }
    let n = m.rows;
    let mut aug = RatMatrix::zeros(n, n + 1);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let (r, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return Err(Error::Singular);
    }
    Ok((0..n).map(|i| r[(i, n)].clone()).collect())
}

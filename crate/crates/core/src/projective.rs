//! Points of the projective plane and the invariants built from them:
//! brackets, the conic condition `C`, the singular-cubic condition `D`,
//! projective transformations and cross ratios.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cbpoint::DegeneracyReport;
use crate::error::{Error, Result, Vanishing};
use crate::exact::{det3, ff_determinant, format_rat, primitive_integer_vector, rat, Rat, RatMatrix};
use crate::monomials::{eval_row, RowKind};

/// A point `(x : y : z)` of the projective plane with exact coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjPoint {
    x: Rat,
    y: Rat,
    z: Rat,
}

impl ProjPoint {
    pub fn new(x: Rat, y: Rat, z: Rat) -> Result<Self> {
        if x.is_zero() && y.is_zero() && z.is_zero() {
            return Err(Error::ZeroPoint);
        }
        Ok(ProjPoint { x, y, z })
    }

    /// Panics on `(0, 0, 0)`; meant for literals in tests and examples.
    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Self::new(rat(x), rat(y), rat(z)).expect("nonzero point")
    }

    pub fn from_vec(v: [Rat; 3]) -> Result<Self> {
        let [x, y, z] = v;
        Self::new(x, y, z)
    }

    pub fn x(&self) -> &Rat {
        &self.x
    }

    pub fn y(&self) -> &Rat {
        &self.y
    }

    pub fn z(&self) -> &Rat {
        &self.z
    }

    pub fn coords(&self) -> [&Rat; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn to_vec(&self) -> [Rat; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }

    /// Same projective point, coordinates multiplied by `lambda`.
    pub fn scaled(&self, lambda: &Rat) -> Result<Self> {
        Self::new(&self.x * lambda, &self.y * lambda, &self.z * lambda)
    }

    /// Primitive integer representative with positive first nonzero entry.
    pub fn canonical(&self) -> ProjPoint {
        let v = primitive_integer_vector(&self.to_vec());
        let [x, y, z] = [0, 1, 2].map(|i| Rat::from_integer(v[i].clone()));
        ProjPoint { x, y, z }
    }

    pub fn canonical_ints(&self) -> [BigInt; 3] {
        let v = primitive_integer_vector(&self.to_vec());
        [v[0].clone(), v[1].clone(), v[2].clone()]
    }

    /// Projective equality: all 2x2 minors of the coordinate pair vanish.
    pub fn same_point(&self, other: &ProjPoint) -> bool {
        let (a, b) = (self.coords(), other.coords());
        (0..3).all(|i| {
            let j = (i + 1) % 3;
            a[i] * b[j] == a[j] * b[i]
        })
    }

    pub fn quadratic_row(&self) -> Vec<Rat> {
        eval_row(RowKind::Quadratic, self.coords())
    }

    pub fn cubic_row(&self) -> Vec<Rat> {
        eval_row(RowKind::Cubic, self.coords())
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} : {} : {})",
            format_rat(&self.x),
            format_rat(&self.y),
            format_rat(&self.z)
        )
    }
}

/// Eight labelled points. Label `i` in formulas refers to `points()[i - 1]`.
#[derive(Clone, Debug)]
pub struct Config8 {
    points: [ProjPoint; 8],
    degeneracy: OnceLock<DegeneracyReport>,
}

impl PartialEq for Config8 {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}

impl Eq for Config8 {}

impl Config8 {
    pub fn new(points: [ProjPoint; 8]) -> Self {
        Config8 {
            points,
            degeneracy: OnceLock::new(),
        }
    }

    pub fn from_ints(coords: [[i64; 3]; 8]) -> Self {
        Self::new(coords.map(|[x, y, z]| ProjPoint::from_ints(x, y, z)))
    }

    pub fn points(&self) -> &[ProjPoint; 8] {
        &self.points
    }

    /// Point by 1-based label.
    pub fn p(&self, label: usize) -> &ProjPoint {
        &self.points[label - 1]
    }

    /// Bracket of three 1-based labels.
    pub fn bracket(&self, i: usize, j: usize, k: usize) -> Rat {
        bracket(self.p(i), self.p(j), self.p(k))
    }

    /// Degeneracy report, computed once and cached.
    pub fn degeneracy(&self) -> &DegeneracyReport {
        self.degeneracy
            .get_or_init(|| crate::cbpoint::degeneracy_report(self))
    }

    /// New configuration whose point `i` is the old point `perm[i]` (0-based).
    pub fn relabeled(&self, perm: &[usize; 8]) -> Config8 {
        Config8::new(perm.map(|k| self.points[k].clone()))
    }

    pub fn transformed(&self, t: &ProjTransform) -> Config8 {
        Config8::new(self.points.clone().map(|p| apply_transform(t, &p)))
    }

    /// Replaces one point (1-based label).
    pub fn with_point(&self, label: usize, p: ProjPoint) -> Config8 {
        let mut points = self.points.clone();
        points[label - 1] = p;
        Config8::new(points)
    }
}

/// A nonsingular 3x3 matrix acting on homogeneous coordinate columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjTransform {
    m: RatMatrix,
    det: Rat,
}

impl ProjTransform {
    pub fn new(m: RatMatrix) -> Result<Self> {
        if m.rows() != 3 || m.cols() != 3 {
            return Err(Error::Shape("a projective transform is 3x3".into()));
        }
        let det = ff_determinant(&m)?;
        if det.is_zero() {
            return Err(Error::Singular);
        }
        Ok(ProjTransform { m, det })
    }

    pub fn from_ints(rows: [[i64; 3]; 3]) -> Result<Self> {
        Self::new(RatMatrix::from_i64_rows(&rows)?)
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.m
    }

    pub fn det(&self) -> &Rat {
        &self.det
    }
}

pub fn apply_transform(t: &ProjTransform, p: &ProjPoint) -> ProjPoint {
    let v = t.m.mul_vec(&p.to_vec()).expect("3x3 times 3-vector");
    let [x, y, z]: [Rat; 3] = v.try_into().expect("three coordinates");
    // a nonsingular matrix cannot send a nonzero vector to zero
    ProjPoint { x, y, z }
}

/// `[abc]`: determinant of the coordinate rows `a`, `b`, `c`.
pub fn bracket(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> Rat {
    det3([a.coords(), b.coords(), c.coords()])
}

/// Six points lie on a conic iff this 6x6 determinant vanishes.
pub fn conic_det(p: [&ProjPoint; 6]) -> Rat {
    let rows: Vec<Vec<Rat>> = p.iter().map(|q| q.quadratic_row()).collect();
    ff_determinant(&RatMatrix::from_rows(&rows).expect("6x6")).expect("square")
}

/// `[123][145][246][356] - [124][135][236][456]` on argument positions 1..6.
pub fn conic_bracket_expansion(p: [&ProjPoint; 6]) -> Rat {
    let b = |i: usize, j: usize, k: usize| bracket(p[i - 1], p[j - 1], p[k - 1]);
    b(1, 2, 3) * b(1, 4, 5) * b(2, 4, 6) * b(3, 5, 6)
        - b(1, 2, 4) * b(1, 3, 5) * b(2, 3, 6) * b(4, 5, 6)
}

/// `D(p1; rest)`: vanishes iff the eight points lie on a cubic singular at `p1`.
///
/// Seven cubic monomial rows for `rest`, then the three partial-derivative
/// rows (x, y, z) at `p1`.
pub fn singular_cubic_det(p1: &ProjPoint, rest: [&ProjPoint; 7]) -> Rat {
    let mut rows: Vec<Vec<Rat>> = rest.iter().map(|q| q.cubic_row()).collect();
    for axis in 0..3 {
        rows.push(eval_row(RowKind::CubicPartial(axis), p1.coords()));
    }
    ff_determinant(&RatMatrix::from_rows(&rows).expect("10x10")).expect("square")
}

/// Bracket form of `D(P7; P1, ..., P6, P8)` as six signed nine-bracket
/// products, times 3.
const CUBIC_EXPANSION: [(i8, [[usize; 3]; 9]); 6] = [
    (1, [[6, 4, 7], [8, 5, 7], [4, 7, 8], [1, 2, 8], [1, 7, 3], [4, 2, 3], [5, 7, 3], [5, 2, 6], [1, 7, 6]]),
    (-1, [[6, 4, 7], [8, 5, 7], [4, 7, 3], [4, 2, 8], [1, 7, 8], [1, 2, 3], [5, 7, 3], [5, 2, 6], [1, 7, 6]]),
    (1, [[6, 4, 7], [8, 5, 7], [4, 7, 3], [4, 2, 8], [1, 7, 8], [5, 7, 6], [1, 2, 6], [1, 7, 3], [5, 2, 3]]),
    (1, [[6, 5, 7], [8, 4, 7], [5, 7, 3], [5, 2, 8], [1, 7, 8], [1, 2, 3], [4, 7, 3], [4, 2, 6], [1, 7, 6]]),
    (-1, [[6, 5, 7], [8, 4, 7], [5, 7, 8], [1, 2, 8], [1, 7, 3], [5, 2, 3], [4, 7, 3], [4, 2, 6], [1, 7, 6]]),
    (-1, [[6, 5, 7], [8, 4, 7], [5, 7, 3], [5, 2, 8], [1, 7, 8], [4, 7, 6], [1, 2, 6], [1, 7, 3], [4, 2, 3]]),
];

/// Bracket expansion of `D(P7; P1, ..., P6, P8)` with labels as in `c`.
pub fn singular_cubic_bracket_expansion(c: &Config8) -> Rat {
    let sum: Rat = CUBIC_EXPANSION
        .iter()
        .map(|(sign, brackets)| {
            let prod = brackets
                .iter()
                .fold(Rat::one(), |acc, &[i, j, k]| acc * c.bracket(i, j, k));
            if *sign < 0 {
                -prod
            } else {
                prod
            }
        })
        .sum();
    rat(3) * sum
}

fn nonzero_or(v: Rat, vanishing: Vanishing) -> Result<Rat> {
    if v.is_zero() {
        Err(Error::DegenerateCrossRatio(vanishing))
    } else {
        Ok(v)
    }
}

/// Cross ratio of the four lines through `base` and `q1..q4`:
/// `[513][524] / ([514][523])` with `base` in the role of point 5.
pub fn cross_ratio_lines(base: &ProjPoint, q: [&ProjPoint; 4]) -> Result<Rat> {
    let b = |i: usize, j: usize| bracket(base, q[i - 1], q[j - 1]);
    let d1 = nonzero_or(b(1, 4), Vanishing::Bracket([5, 1, 4]))?;
    let d2 = nonzero_or(b(2, 3), Vanishing::Bracket([5, 2, 3]))?;
    Ok(b(1, 3) * b(2, 4) / (d1 * d2))
}

/// Cross ratio of the four conics through `quad` and one of `q1..q4`:
/// `[[5678 13]][[5678 24]] / ([[5678 14]][[5678 23]])` with `quad` in the
/// roles of points 5..8.
pub fn cross_ratio_conics(quad: [&ProjPoint; 4], q: [&ProjPoint; 4]) -> Result<Rat> {
    let c = |i: usize, j: usize| {
        conic_det([quad[0], quad[1], quad[2], quad[3], q[i - 1], q[j - 1]])
    };
    let d1 = nonzero_or(c(1, 4), Vanishing::Conic([5, 6, 7, 8, 1, 4]))?;
    let d2 = nonzero_or(c(2, 3), Vanishing::Conic([5, 6, 7, 8, 2, 3]))?;
    Ok(c(1, 3) * c(2, 4) / (d1 * d2))
}

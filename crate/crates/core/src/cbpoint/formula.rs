use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::projective::{conic_det, singular_cubic_det, Config8, ProjPoint};

/// Ordered triple of distinct 1-based labels playing the roles of 1, 2, 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Triple(pub [usize; 3]);

impl Triple {
    pub const FIRST: Triple = Triple([1, 2, 3]);

    pub fn new(i: usize, j: usize, k: usize) -> Result<Self> {
        let t = [i, j, k];
        let valid = t.iter().all(|v| (1..=8).contains(v)) && i != j && j != k && i != k;
        if valid {
            Ok(Triple(t))
        } else {
            Err(Error::BadTriple(t))
        }
    }

    /// All increasing triples in lexicographic order.
    pub fn all() -> impl Iterator<Item = Triple> {
        (1..=8).flat_map(|i| {
            (i + 1..=8).flat_map(move |j| (j + 1..=8).map(move |k| Triple([i, j, k])))
        })
    }

    /// The five labels outside the triple, ascending.
    pub fn rest(self) -> [usize; 5] {
        let v: Vec<usize> = (1..=8).filter(|l| !self.0.contains(l)).collect();
        v.try_into().expect("five remaining labels")
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [i, j, k] = self.0;
        write!(f, "({i},{j},{k})")
    }
}

/// The six scalars `C_x, C_y, C_z, D_x, D_y, D_z` for one triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CBIngredients {
    pub triple: Triple,
    pub cx: Rat,
    pub cy: Rat,
    pub cz: Rat,
    pub dx: Rat,
    pub dy: Rat,
    pub dz: Rat,
}

impl CBIngredients {
    /// Coefficients of `P_i`, `P_j`, `P_k` in the ninth-point vector.
    pub fn weights(&self) -> [Rat; 3] {
        [
            &self.cx * &self.dy * &self.dz,
            &self.dx * &self.cy * &self.dz,
            &self.dx * &self.dy * &self.cz,
        ]
    }
}

/// For the triple `(i, j, k)` with remaining labels `r1 < ... < r5`:
///
/// ```text
/// C_x = C(P_i, P_r1..P_r5)    D_x = D(P_i; P_j, P_k, P_r1..P_r5)
/// C_y = C(P_j, P_r1..P_r5)    D_y = D(P_j; P_k, P_i, P_r1..P_r5)
/// C_z = C(P_k, P_r1..P_r5)    D_z = D(P_k; P_i, P_j, P_r1..P_r5)
/// ```
pub fn ingredients(c: &Config8, triple: Triple) -> CBIngredients {
    let [i, j, k] = triple.0;
    let r = triple.rest().map(|l| c.p(l));
    let conic = |s: usize| conic_det([c.p(s), r[0], r[1], r[2], r[3], r[4]]);
    let cubic = |s: usize, a: usize, b: usize| {
        singular_cubic_det(c.p(s), [c.p(a), c.p(b), r[0], r[1], r[2], r[3], r[4]])
    };
    CBIngredients {
        triple,
        cx: conic(i),
        cy: conic(j),
        cz: conic(k),
        dx: cubic(i, j, k),
        dy: cubic(j, k, i),
        dz: cubic(k, i, j),
    }
}

/// The uncanonicalized vector `C_x D_y D_z P_i + D_x C_y D_z P_j + D_x D_y C_z P_k`.
pub fn p9_raw(c: &Config8, triple: Triple) -> [Rat; 3] {
    let w = ingredients(c, triple).weights();
    let [i, j, k] = triple.0;
    let pts = [c.p(i), c.p(j), c.p(k)];
    [0, 1, 2].map(|axis| {
        (0..3).fold(Rat::zero(), |acc, n| acc + &w[n] * pts[n].coords()[axis])
    })
}

fn to_point(c: &Config8, v: [Rat; 3], what: &str) -> Result<ProjPoint> {
    ProjPoint::from_vec(v)
        .map(|p| p.canonical())
        .map_err(|_| Error::Degenerate {
            reason: format!("{what} is the zero vector"),
            report: Box::new(c.degeneracy().clone()),
        })
}

/// Canonical ninth point from the determinant formula.
pub fn p9_determinantal(c: &Config8, triple: Triple) -> Result<ProjPoint> {
    to_point(c, p9_raw(c, triple), &format!("determinant formula for triple {triple}"))
}

/// The determinant-formula vector divided by `[ijk]`.
///
/// For integer inputs the quotient must again be integral; anything else is
/// reported as an internal consistency failure.
pub fn p9_reduced_raw(c: &Config8, triple: Triple) -> Result<[Rat; 3]> {
    let [i, j, k] = triple.0;
    let b = c.bracket(i, j, k);
    if b.is_zero() {
        return Err(Error::Degenerate {
            reason: format!("bracket {triple} vanishes; choose another triple"),
            report: Box::new(c.degeneracy().clone()),
        });
    }
    let raw = p9_raw(c, triple);
    let integral_input = c
        .points()
        .iter()
        .all(|p| p.coords().iter().all(|x| x.is_integer()));
    let q = raw.map(|x| x / &b);
    if integral_input && !q.iter().all(|x| x.is_integer()) {
        return Err(Error::Internal(format!(
            "determinant formula not divisible by bracket {triple}"
        )));
    }
    Ok(q)
}

pub fn p9_reduced(c: &Config8, triple: Triple) -> Result<ProjPoint> {
    let v = p9_reduced_raw(c, triple)?;
    to_point(c, v, &format!("reduced formula for triple {triple}"))
}

/// First triple in lexicographic order with nonzero bracket.
pub fn default_triple(c: &Config8) -> Option<Triple> {
    Triple::all().find(|t| !c.bracket(t.0[0], t.0[1], t.0[2]).is_zero())
}

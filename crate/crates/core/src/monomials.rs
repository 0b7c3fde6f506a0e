//! Fixed monomial layouts for conic and cubic coordinate rows.
//!
//! The same templates drive exact evaluation, valuation matrices and sparse
//! symbolic expansion, so every determinant in the crate shares one column
//! order.

use num_traits::{One, Zero};

use crate::exact::{rat, Rat};

/// Exponents of (x, y, z) for x², xy, xz, y², yz, z².
pub const QUADRATIC: [[u32; 3]; 6] = [
    [2, 0, 0],
    [1, 1, 0],
    [1, 0, 1],
    [0, 2, 0],
    [0, 1, 1],
    [0, 0, 2],
];

/// Exponents of (x, y, z) for x³, x²y, x²z, xy², xyz, xz², y³, y²z, yz², z³.
pub const CUBIC: [[u32; 3]; 10] = [
    [3, 0, 0],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [1, 1, 1],
    [1, 0, 2],
    [0, 3, 0],
    [0, 2, 1],
    [0, 1, 2],
    [0, 0, 3],
];

/// One entry of a row template: `coef * x^a * y^b * z^c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub coef: i64,
    pub exps: [u32; 3],
}

/// The kinds of rows that appear in the conic and singular-cubic matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    Quadratic,
    Cubic,
    /// Partial derivative of the cubic monomial vector along axis 0, 1 or 2.
    CubicPartial(usize),
}

impl RowKind {
    /// Template entries; `None` marks a structurally zero entry.
    pub fn template(self) -> Vec<Option<Term>> {
        match self {
            RowKind::Quadratic => QUADRATIC
                .iter()
                .map(|&exps| Some(Term { coef: 1, exps }))
                .collect(),
            RowKind::Cubic => CUBIC
                .iter()
                .map(|&exps| Some(Term { coef: 1, exps }))
                .collect(),
            RowKind::CubicPartial(axis) => CUBIC
                .iter()
                .map(|&exps| {
                    (exps[axis] > 0).then(|| {
                        let mut e = exps;
                        e[axis] -= 1;
                        Term {
                            coef: exps[axis] as i64,
                            exps: e,
                        }
                    })
                })
                .collect(),
        }
    }
}

fn power(base: &Rat, e: u32) -> Rat {
    match e {
        0 => Rat::one(),
        1 => base.clone(),
        _ => num_traits::pow(base.clone(), e as usize),
    }
}

/// Evaluates a row template at exact coordinates.
pub fn eval_row(kind: RowKind, coords: [&Rat; 3]) -> Vec<Rat> {
    kind.template()
        .into_iter()
        .map(|t| match t {
            None => Rat::zero(),
            Some(Term { coef, exps }) => {
                let mut v = rat(coef);
                for (c, &e) in coords.iter().zip(&exps) {
                    if e > 0 {
                        v *= power(c, e);
                    }
                }
                v
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_rows_match_hand_derivatives() {
        // d/dx of the cubic monomials: 3x², 2xy, 2xz, y², yz, z², 0, 0, 0, 0
        let (x, y, z) = (rat(2), rat(3), rat(5));
        let dx = eval_row(RowKind::CubicPartial(0), [&x, &y, &z]);
        let want: Vec<Rat> = [12, 12, 20, 9, 15, 25, 0, 0, 0, 0].map(rat).to_vec();
        assert_eq!(dx, want);
        // d/dz: 0, 0, x², 0, xy, 2xz, 0, y², 2yz, 3z²
        let dz = eval_row(RowKind::CubicPartial(2), [&x, &y, &z]);
        let want: Vec<Rat> = [0, 0, 4, 0, 6, 20, 0, 9, 30, 75].map(rat).to_vec();
        assert_eq!(dz, want);
    }
}

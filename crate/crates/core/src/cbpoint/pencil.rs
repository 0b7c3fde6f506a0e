use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rank, right_nullspace, Rat, RatMatrix};
use crate::projective::{cross_ratio_conics, cross_ratio_lines, Config8, ProjPoint};

/// A ternary cubic as coefficients of x³, x²y, x²z, xy², xyz, xz², y³, y²z, yz², z³.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cubic {
    pub coeffs: [Rat; 10],
}

impl Cubic {
    pub fn eval(&self, p: &ProjPoint) -> Rat {
        self.coeffs
            .iter()
            .zip(p.cubic_row())
            .fold(Rat::zero(), |acc, (a, m)| acc + a * m)
    }

    pub fn vanishes_at(&self, p: &ProjPoint) -> bool {
        self.eval(p).is_zero()
    }
}

fn monomial_matrix<'a>(points: impl IntoIterator<Item = &'a ProjPoint>) -> RatMatrix {
    let rows: Vec<Vec<Rat>> = points.into_iter().map(|p| p.cubic_row()).collect();
    RatMatrix::from_rows(&rows).expect("ten columns per row")
}

/// Two primitive cubics spanning the cubics through the eight points.
pub fn cubic_pencil_basis(c: &Config8) -> Result<[Cubic; 2]> {
    let basis = right_nullspace(&monomial_matrix(c.points()));
    if basis.len() != 2 {
        return Err(Error::Degenerate {
            reason: format!(
                "cubics through the eight points form a space of dimension {}, expected 2",
                basis.len()
            ),
            report: Box::new(c.degeneracy().clone()),
        });
    }
    let mut cubics = basis.into_iter().map(|v| Cubic {
        coeffs: v.try_into().expect("ten coefficients"),
    });
    Ok([cubics.next().unwrap(), cubics.next().unwrap()])
}

/// Independent checks on a proposed ninth point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certification {
    /// The candidate lies on both pencil cubics.
    pub on_pencil: bool,
    /// The 9x10 cubic monomial matrix of all nine points has rank at most 8.
    pub rank_at_most_8: bool,
    /// `(5,6,7,8)_9 = (5,6,7,8)_{1234}`; `None` when a cross ratio is undefined.
    pub cayley_identity: Option<bool>,
    /// Label of an input point equal to the candidate, if any.
    pub coincides_with: Option<usize>,
    pub certified: bool,
}

pub fn certify_p9(c: &Config8, candidate: &ProjPoint) -> Result<Certification> {
    let [c1, c2] = cubic_pencil_basis(c)?;
    let on_pencil = c1.vanishes_at(candidate) && c2.vanishes_at(candidate);
    let stack = monomial_matrix(c.points().iter().chain(std::iter::once(candidate)));
    let rank_at_most_8 = rank(&stack) <= 8;
    let cayley_identity = {
        let lines = cross_ratio_lines(candidate, [c.p(5), c.p(6), c.p(7), c.p(8)]);
        let conics = cross_ratio_conics([c.p(1), c.p(2), c.p(3), c.p(4)], [c.p(5), c.p(6), c.p(7), c.p(8)]);
        match (lines, conics) {
            (Ok(a), Ok(b)) => Some(a == b),
            _ => None,
        }
    };
    let coincides_with = (1..=8).find(|&l| c.p(l).same_point(candidate));
    let certified = on_pencil
        && rank_at_most_8
        && cayley_identity != Some(false)
        && coincides_with.is_none();
    Ok(Certification {
        on_pencil,
        rank_at_most_8,
        cayley_identity,
        coincides_with,
        certified,
    })
}

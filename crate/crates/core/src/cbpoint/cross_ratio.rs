//! Cayley's characterization of the ninth point through cross ratios.
//!
//! With `l = (5,6,7,8)_{1234}` and `m = (4,6,7,8)_{1235}` the ninth point
//! `a P6 + b P7 + c P8` satisfies
//!
//! ```text
//! [657] ab + l [658] ac + (1 - l) [857] bc = 0
//! [647] ab + m [648] ac + (1 - m) [847] bc = 0
//! ```
//!
//! Both conics pass through the three coordinate points; dividing by `abc`
//! turns them into two lines in `(1/a : 1/b : 1/c)`, whose intersection
//! gives the fourth common solution in closed form.

use num_traits::{One, Zero};

use crate::error::{Error, Result, Vanishing};
use crate::exact::Rat;
use crate::projective::{cross_ratio_conics, Config8, ProjPoint};

/// Intermediate values of the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossRatioData {
    pub l: Rat,
    pub m: Rat,
    /// `(a, b, c)` with the ninth point equal to `a P6 + b P7 + c P8`.
    pub basis_coeffs: [Rat; 3],
}

#[derive(Clone, Debug)]
pub struct CrossRatioSolution {
    /// Canonical ninth point.
    pub point: ProjPoint,
    pub data: CrossRatioData,
    /// `labeling[i]` is the original 0-based index of the point used in role `i + 1`.
    pub labeling: [usize; 8],
}

impl CrossRatioSolution {
    pub fn is_identity_labeling(&self) -> bool {
        self.labeling == [0, 1, 2, 3, 4, 5, 6, 7]
    }
}

/// Maps a vanishing conic named in cross-ratio roles back to config labels.
fn relabel_conic(v: Vanishing, quad: [usize; 4], q: [usize; 4]) -> Vanishing {
    match v {
        Vanishing::Conic(idx) => Vanishing::Conic(idx.map(|r| {
            if r >= 5 {
                quad[r - 5]
            } else {
                q[r - 1]
            }
        })),
        other => other,
    }
}

fn conic_ratio(c: &Config8, quad: [usize; 4], q: [usize; 4]) -> Result<Rat> {
    cross_ratio_conics(quad.map(|l| c.p(l)), q.map(|l| c.p(l))).map_err(|e| match e {
        Error::DegenerateCrossRatio(v) => Error::DegenerateCrossRatio(relabel_conic(v, quad, q)),
        other => other,
    })
}

/// The construction with the labels exactly as given.
///
/// Fails with [`Error::DegenerateCrossRatio`] when `[678]` or one of the
/// conic denominators vanishes, and with [`Error::Degenerate`] when the
/// closed-form solution is the zero vector.
pub fn p9_cross_ratio_labeled(c: &Config8) -> Result<(ProjPoint, CrossRatioData)> {
    if c.bracket(6, 7, 8).is_zero() {
        return Err(Error::DegenerateCrossRatio(Vanishing::Bracket([6, 7, 8])));
    }
    let l = conic_ratio(c, [1, 2, 3, 4], [5, 6, 7, 8])?;
    let m = conic_ratio(c, [1, 2, 3, 5], [4, 6, 7, 8])?;

    let b = |i, j, k| c.bracket(i, j, k);
    let (b647, b648, b657, b658) = (b(6, 4, 7), b(6, 4, 8), b(6, 5, 7), b(6, 5, 8));
    let (b847, b857) = (b(8, 4, 7), b(8, 5, 7));
    let one = Rat::one();
    let (l1, m1) = (&l - &one, &m - &one);

    let alpha = &b647 * &b658 * &l - &b648 * &b657 * &m;
    let beta = &b647 * &b857 * &l1 - &b657 * &b847 * &m1;
    let gamma = &b658 * &b847 * &l * &m1 - &b648 * &b857 * &l1 * &m;

    let coeffs = [-(&beta * &gamma), -(&alpha * &gamma), -(&alpha * &beta)];
    let [p6, p7, p8] = [6, 7, 8].map(|k| c.p(k).coords());
    let v = [0, 1, 2].map(|axis| {
        &coeffs[0] * p6[axis] + &coeffs[1] * p7[axis] + &coeffs[2] * p8[axis]
    });
    let point = ProjPoint::from_vec(v).map_err(|_| Error::Degenerate {
        reason: "cross-ratio solution is the zero vector".into(),
        report: Box::new(c.degeneracy().clone()),
    })?;
    Ok((
        point.canonical(),
        CrossRatioData {
            l,
            m,
            basis_coeffs: coeffs,
        },
    ))
}

/// Lexicographic permutations of `0..8`, identity first.
fn next_permutation(p: &mut [usize; 8]) -> bool {
    let Some(i) = (0..7).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..8).rev().find(|&j| p[j] > p[i]).expect("successor exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// The cross-ratio construction, relabeling the points until its
/// preconditions hold.
///
/// The result does not depend on the labeling; only the intermediate data
/// does. Configurations outside general position are rejected up front.
pub fn p9_cross_ratio(c: &Config8) -> Result<CrossRatioSolution> {
    let report = c.degeneracy();
    if !report.is_empty() {
        return Err(Error::Degenerate {
            reason: report.summary(),
            report: Box::new(report.clone()),
        });
    }
    let mut perm = [0, 1, 2, 3, 4, 5, 6, 7];
    loop {
        let relabeled = if perm == [0, 1, 2, 3, 4, 5, 6, 7] {
            c.clone()
        } else {
            c.relabeled(&perm)
        };
        match p9_cross_ratio_labeled(&relabeled) {
            Ok((point, data)) => {
                return Ok(CrossRatioSolution {
                    point,
                    data,
                    labeling: perm,
                })
            }
            Err(Error::DegenerateCrossRatio(_)) | Err(Error::Degenerate { .. }) => {}
            Err(e) => return Err(e),
        }
        if !next_permutation(&mut perm) {
            return Err(Error::Degenerate {
                reason: "cross-ratio construction failed for every labeling".into(),
                report: Box::new(report.clone()),
            });
        }
    }
}

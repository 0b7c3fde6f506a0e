//! Tropical determinants as optimal assignments.
//!
//! Costs live in the ordered group `Z x Z x Q` (lexicographic): the first
//! component counts forbidden edges, the second `+inf` entries, the third is
//! the finite part. The Hungarian method works unchanged over it, so no
//! "big M" substitute for infinity is needed.

use std::ops::{AddAssign, Sub, SubAssign};

use num_traits::Zero;

use super::{TropMatrix, TropValue};
use crate::error::{Error, Result};
use crate::exact::Rat;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Cost {
    forbidden: i64,
    infinite: i64,
    finite: Rat,
}

impl Cost {
    fn zero() -> Self {
        Cost {
            forbidden: 0,
            infinite: 0,
            finite: Rat::zero(),
        }
    }

    fn of(v: &TropValue) -> Self {
        match v {
            TropValue::Finite(r) => Cost {
                forbidden: 0,
                infinite: 0,
                finite: r.clone(),
            },
            TropValue::Infinite => Cost {
                forbidden: 0,
                infinite: 1,
                finite: Rat::zero(),
            },
        }
    }
}

impl AddAssign<&Cost> for Cost {
    fn add_assign(&mut self, rhs: &Cost) {
        self.forbidden += rhs.forbidden;
        self.infinite += rhs.infinite;
        self.finite += &rhs.finite;
    }
}

impl SubAssign<&Cost> for Cost {
    fn sub_assign(&mut self, rhs: &Cost) {
        self.forbidden -= rhs.forbidden;
        self.infinite -= rhs.infinite;
        self.finite -= &rhs.finite;
    }
}

impl Sub<&Cost> for &Cost {
    type Output = Cost;

    fn sub(self, rhs: &Cost) -> Cost {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

/// Minimum-cost perfect matching; returns `perm` with row `i` assigned to
/// column `perm[i]`.
fn hungarian(a: &[Vec<Cost>]) -> (Cost, Vec<usize>) {
    let n = a.len();
    let mut u = vec![Cost::zero(); n + 1];
    let mut v = vec![Cost::zero(); n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv: Vec<Option<Cost>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta: Option<Cost> = None;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let mut cur = &a[i0 - 1][j - 1] - &u[i0];
                cur -= &v[j];
                if minv[j].as_ref().map_or(true, |m| cur < *m) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let mj = minv[j].as_ref().expect("set above");
                if delta.as_ref().map_or(true, |d| mj < d) {
                    delta = Some(mj.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains");
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += &delta;
                    v[j] -= &delta;
                } else if let Some(m) = minv[j].as_mut() {
                    *m -= &delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut perm = vec![0; n];
    for j in 1..=n {
        perm[p[j] - 1] = j - 1;
    }
    let mut total = Cost::zero();
    for (i, &j) in perm.iter().enumerate() {
        total += &a[i][j];
    }
    (total, perm)
}

/// Value of a tropical determinant with one minimizing permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropDeterminant {
    pub value: TropValue,
    /// Whether exactly one permutation attains `value`.
    pub unique: bool,
    /// A minimizing permutation: row `i` uses column `permutation[i]`.
    pub permutation: Vec<usize>,
}

/// `min over sigma of sum_i m[i, sigma(i)]`, with a uniqueness flag.
///
/// Uniqueness is decided by re-solving with each edge of the optimum
/// forbidden in turn: every other permutation avoids at least one of them.
pub fn tropical_determinant(m: &TropMatrix) -> Result<TropDeterminant> {
    if m.rows() != m.cols() {
        return Err(Error::Shape(format!(
            "tropical determinant of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let costs: Vec<Vec<Cost>> = (0..n)
        .map(|i| (0..n).map(|j| Cost::of(m.get(i, j))).collect())
        .collect();
    let (best, perm) = hungarian(&costs);
    if best.infinite > 0 {
        // every permutation attains +inf
        return Ok(TropDeterminant {
            value: TropValue::Infinite,
            unique: n <= 1,
            permutation: perm,
        });
    }
    let mut unique = true;
    for i in 0..n {
        let mut forbidden = costs.clone();
        forbidden[i][perm[i]].forbidden += 1;
        let (alt, _) = hungarian(&forbidden);
        if alt.forbidden == 0 && alt.infinite == 0 && alt.finite == best.finite {
            unique = false;
            break;
        }
    }
    Ok(TropDeterminant {
        value: TropValue::Finite(best.finite),
        unique,
        permutation: perm,
    })
}

//! The degree-8 alternating formula: a signed sum over `S_8` of a product of
//! 21 brackets (a cyclic row through the eighth point and two cyclically
//! invariant Fano planes) times the eighth point.
//!
//! `F` is invariant under cyclic shifts of its first seven arguments and
//! changes sign under their reversal. Cyclic shifts of seven slots are even
//! permutations and the reversal is odd, so every summand in a dihedral orbit
//! of order 14 is equal and the sum can run over orbit representatives.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::exact::{common_denominator, Rat};
use crate::projective::{Config8, ProjPoint};

/// Argument positions of the 21 brackets of `F(1, ..., 7; 8)`.
pub const FANO_BRACKETS: [[usize; 3]; 21] = [
    [1, 2, 8], [2, 3, 8], [3, 4, 8], [4, 5, 8], [5, 6, 8], [6, 7, 8], [7, 1, 8],
    [1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 7], [5, 6, 1], [6, 7, 2], [7, 1, 3],
    [1, 2, 6], [2, 3, 7], [3, 4, 1], [4, 5, 2], [5, 6, 3], [6, 7, 4], [7, 1, 5],
];

const ORBIT: usize = 14;

/// Labels substituted into `F`: `seven` fill positions 1..7, `eighth` position 8.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FanoTuple {
    pub seven: [usize; 7],
    pub eighth: usize,
}

impl FanoTuple {
    /// `None` unless the eight labels form a permutation of 1..=8.
    pub fn new(seven: [usize; 7], eighth: usize) -> Option<Self> {
        let mut seen = [false; 9];
        for &l in seven.iter().chain(std::iter::once(&eighth)) {
            if !(1..=8).contains(&l) || seen[l] {
                return None;
            }
            seen[l] = true;
        }
        Some(FanoTuple { seven, eighth })
    }

    fn slots(&self) -> [usize; 8] {
        let s = self.seven;
        [s[0], s[1], s[2], s[3], s[4], s[5], s[6], self.eighth]
    }
}

/// `F(t_1, ..., t_7; t_8)`.
pub fn fano_monomial(c: &Config8, t: &FanoTuple) -> Rat {
    let slots = t.slots();
    FANO_BRACKETS.iter().fold(Rat::one(), |acc, &[a, b, d]| {
        acc * c.bracket(slots[a - 1], slots[b - 1], slots[d - 1])
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FanoMode {
    /// All 40320 permutations.
    Full,
    /// 2880 dihedral orbit representatives, each weighted by 14.
    Reduced,
}

/// Raw output of [`p9_fano`]; the zero vector signals degeneracy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanoSum {
    pub vector: [Rat; 3],
    /// Number of `F` evaluations performed.
    pub evaluations: u64,
}

impl FanoSum {
    pub fn is_zero(&self) -> bool {
        self.vector.iter().all(Zero::is_zero)
    }

    /// Canonical point, or `None` for the zero vector.
    pub fn point(&self) -> Option<ProjPoint> {
        ProjPoint::from_vec(self.vector.clone())
            .ok()
            .map(|p| p.canonical())
    }
}

/// Brackets of every label triple, scaled by a common denominator so that
/// products can run in integers.
struct BracketTable {
    values: Vec<BigInt>,
    /// Every table entry equals `scale` times the true bracket.
    scale: BigInt,
}

impl BracketTable {
    fn new(c: &Config8) -> Self {
        let mut raw = Vec::with_capacity(512);
        for a in 1..=8 {
            for b in 1..=8 {
                for d in 1..=8 {
                    raw.push(c.bracket(a, b, d));
                }
            }
        }
        let scale = common_denominator(&raw);
        let values = raw
            .iter()
            .map(|r| r.numer() * (&scale / r.denom()))
            .collect();
        BracketTable { values, scale }
    }

    fn get(&self, a: usize, b: usize, d: usize) -> &BigInt {
        &self.values[((a - 1) * 8 + (b - 1)) * 8 + (d - 1)]
    }

    fn monomial(&self, slots: &[usize; 8]) -> BigInt {
        let mut acc = BigInt::one();
        for &[a, b, d] in &FANO_BRACKETS {
            let v = self.get(slots[a - 1], slots[b - 1], slots[d - 1]);
            if v.is_zero() {
                return BigInt::zero();
            }
            acc *= v;
        }
        acc
    }
}

fn parity_is_odd(slots: &[usize; 8]) -> bool {
    let mut inversions = 0;
    for i in 0..8 {
        for j in i + 1..8 {
            if slots[i] > slots[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

/// Heap's algorithm over all orderings of `items`.
fn for_each_permutation<F: FnMut(&[usize])>(items: &mut [usize], mut f: F) {
    let n = items.len();
    let mut c = vec![0usize; n];
    f(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            f(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// `sum sign(pi) F(pi(1..7); pi(8))` over permutations with `pi(8) = eighth`,
/// in table scale. Returns the partial sum and the number of evaluations.
fn partial_sum(table: &BracketTable, eighth: usize, mode: FanoMode) -> (BigInt, u64) {
    let mut others: Vec<usize> = (1..=8).filter(|&l| l != eighth).collect();
    let mut sum = BigInt::zero();
    let mut count = 0u64;
    let mut add = |seven: &[usize]| {
        let slots = [
            seven[0], seven[1], seven[2], seven[3], seven[4], seven[5], seven[6], eighth,
        ];
        count += 1;
        let f = table.monomial(&slots);
        if f.is_zero() {
            return;
        }
        if parity_is_odd(&slots) {
            sum -= f;
        } else {
            sum += f;
        }
    };
    match mode {
        FanoMode::Full => for_each_permutation(&mut others, |p| add(p)),
        FanoMode::Reduced => {
            // A representative starts with the smallest label and has
            // slot 2 < slot 7: the lexicographic minimum of its orbit.
            let first = others.remove(0);
            for_each_permutation(&mut others, |p| {
                if p[0] < p[5] {
                    let seven = [first, p[0], p[1], p[2], p[3], p[4], p[5]];
                    add(&seven);
                }
            });
            sum *= ORBIT;
        }
    }
    (sum, count)
}

/// The raw signed Fano sum `sum_pi sign(pi) F(pi(1..7); pi(8)) P_pi(8)`.
///
/// Both modes return the identical exact vector. The eight partial sums
/// (one per choice of the eighth point) run in parallel.
pub fn p9_fano(c: &Config8, mode: FanoMode) -> FanoSum {
    let table = BracketTable::new(c);
    let partials: Vec<(BigInt, u64)> = (1..=8usize)
        .into_par_iter()
        .map(|k| partial_sum(&table, k, mode))
        .collect();
    let denom = Rat::from_integer(num_traits::pow(table.scale.clone(), FANO_BRACKETS.len()));
    let mut vector = [Rat::zero(), Rat::zero(), Rat::zero()];
    let mut evaluations = 0;
    for (k, (s, n)) in partials.into_iter().enumerate() {
        evaluations += n;
        if s.is_zero() {
            continue;
        }
        let weight = Rat::from_integer(s) / &denom;
        for (axis, coord) in c.p(k + 1).coords().into_iter().enumerate() {
            vector[axis] += &weight * coord;
        }
    }
    FanoSum {
        vector,
        evaluations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cbpoint::{p9_determinantal, Triple};
    use crate::exact::rat;
    use crate::sample::{random_config, random_nondegenerate_config};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const ID: FanoTuple = FanoTuple {
        seven: [1, 2, 3, 4, 5, 6, 7],
        eighth: 8,
    };

    #[test]
    fn each_point_has_degree_eight_except_the_last() {
        let mut count = [0usize; 9];
        for b in FANO_BRACKETS {
            for l in b {
                count[l] += 1;
            }
        }
        assert_eq!(&count[1..8], &[8; 7]);
        assert_eq!(count[8], 7);
    }

    #[test]
    fn fano_rows_are_fano_planes() {
        // in each Fano row every pair of 1..7 occurs in exactly one triple
        for row in [&FANO_BRACKETS[7..14], &FANO_BRACKETS[14..21]] {
            let mut pairs = std::collections::BTreeSet::new();
            for t in row {
                for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                    assert!(pairs.insert((a.min(b), a.max(b))));
                }
            }
            assert_eq!(pairs.len(), 21);
        }
    }

    #[test]
    fn cyclic_shift_and_reversal() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let c = random_config(&mut rng, 20);
            let f = fano_monomial(&c, &ID);
            let shifted = FanoTuple::new([7, 1, 2, 3, 4, 5, 6], 8).unwrap();
            assert_eq!(fano_monomial(&c, &shifted), f);
            let reversed = FanoTuple::new([7, 6, 5, 4, 3, 2, 1], 8).unwrap();
            assert_eq!(fano_monomial(&c, &reversed), -f);
        }
    }

    #[test]
    fn repeated_point_in_a_bracket_gives_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let c = random_config(&mut rng, 20);
        let c = c.with_point(2, c.p(1).clone());
        assert!(fano_monomial(&c, &ID).is_zero());
    }

    #[test]
    fn tuple_must_be_a_permutation() {
        assert!(FanoTuple::new([1, 2, 3, 4, 5, 6, 7], 7).is_none());
        assert!(FanoTuple::new([1, 2, 3, 4, 5, 6, 9], 8).is_none());
    }

    #[test]
    fn reduced_equals_full() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let c = random_nondegenerate_config(&mut rng, 20).unwrap();
        let full = p9_fano(&c, FanoMode::Full);
        let reduced = p9_fano(&c, FanoMode::Reduced);
        assert_eq!(full.evaluations, 40320);
        assert_eq!(reduced.evaluations, 2880);
        assert_eq!(full.vector, reduced.vector);
        assert!(!full.is_zero());
    }

    #[test]
    fn rational_coordinates_match_scaled_integers() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let c = random_nondegenerate_config(&mut rng, 20).unwrap();
        let half = Rat::new(1.into(), 2.into());
        let c2 = c.with_point(3, c.p(3).scaled(&half).unwrap());
        let a = p9_fano(&c, FanoMode::Reduced);
        let b = p9_fano(&c2, FanoMode::Reduced);
        // degree 8 in every point
        let f = num_traits::pow(half, 8);
        for (x, y) in b.vector.iter().zip(&a.vector) {
            assert_eq!(x, &(y * &f));
        }
    }

    #[test]
    fn proportional_to_determinant_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..3 {
            let c = random_nondegenerate_config(&mut rng, 30).unwrap();
            let fano = p9_fano(&c, FanoMode::Reduced).point().unwrap();
            assert_eq!(fano, p9_determinantal(&c, Triple::FIRST).unwrap());
        }
    }

    #[test]
    fn coincident_points_give_zero_vector() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let c = random_nondegenerate_config(&mut rng, 30).unwrap();
        let c = c.with_point(2, c.p(1).scaled(&rat(5)).unwrap());
        let sum = p9_fano(&c, FanoMode::Reduced);
        assert!(sum.is_zero());
        assert!(sum.point().is_none());
    }
}

//! Valuation matrices of the `C`/`D` factors and p-adic agreement runs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{tropical_determinant, TropMatrix, TropValue};
use crate::cbpoint::{ingredients, Triple};
use crate::error::{Error, Result};
use crate::exact::{rat, Rat};
use crate::monomials::RowKind;
use crate::projective::{Config8, ProjPoint};
use crate::sample::{trial_rng, MAX_REJECTIONS};

/// The six factors of the ninth-point formula for the triple `(1, 2, 3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Factor {
    Cx,
    Cy,
    Cz,
    Dx,
    Dy,
    Dz,
}

impl Factor {
    pub const ALL: [Factor; 6] = [
        Factor::Cx,
        Factor::Cy,
        Factor::Cz,
        Factor::Dx,
        Factor::Dy,
        Factor::Dz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Factor::Cx => "Cx",
            Factor::Cy => "Cy",
            Factor::Cz => "Cz",
            Factor::Dx => "Dx",
            Factor::Dy => "Dy",
            Factor::Dz => "Dz",
        }
    }

    pub fn parse(s: &str) -> Result<Factor> {
        Factor::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown polynomial {s:?}; expected Cx|Cy|Cz|Dx|Dy|Dz")))
    }

    /// Total degree in each of the points `P1..P8`.
    pub fn degrees(self) -> [u32; 8] {
        let mut d = [0; 8];
        for (kind, label) in factor_rows(self) {
            d[label - 1] += match kind {
                RowKind::Quadratic => 2,
                RowKind::Cubic => 3,
                RowKind::CubicPartial(_) => 2,
            };
        }
        d
    }
}

/// Rows of the factor's matrix as `(row kind, point label)`, in order.
pub fn factor_rows(f: Factor) -> Vec<(RowKind, usize)> {
    let rest = [4, 5, 6, 7, 8];
    let conic = |s: usize| {
        std::iter::once(s)
            .chain(rest)
            .map(|l| (RowKind::Quadratic, l))
            .collect()
    };
    let cubic = |s: usize, a: usize, b: usize| {
        [a, b]
            .into_iter()
            .chain(rest)
            .map(|l| (RowKind::Cubic, l))
            .chain((0..3).map(|axis| (RowKind::CubicPartial(axis), s)))
            .collect()
    };
    match f {
        Factor::Cx => conic(1),
        Factor::Cy => conic(2),
        Factor::Cz => conic(3),
        Factor::Dx => cubic(1, 2, 3),
        Factor::Dy => cubic(2, 3, 1),
        Factor::Dz => cubic(3, 1, 2),
    }
}

/// `v_p(x)`, or `+inf` for zero.
pub fn p_adic_valuation(p: u64, x: &Rat) -> TropValue {
    if x.is_zero() {
        return TropValue::Infinite;
    }
    let order = |n: &BigInt| {
        let p = BigInt::from(p);
        let mut n = n.abs();
        let mut k = 0i64;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                return k;
            }
            n = q;
            k += 1;
        }
    };
    TropValue::from_i64(order(x.numer()) - order(x.denom()))
}

/// Tropical coordinates of `P5..P8`; `P1..P4` are the standard frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropConfig {
    points: [[TropValue; 3]; 4],
    /// Prime whose valuation is applied to the integer coefficients of the
    /// derivative rows; `None` gives every nonzero constant valuation 0.
    prime: Option<u64>,
}

fn frame(label: usize) -> [TropValue; 3] {
    let zero = TropValue::zero();
    let inf = TropValue::Infinite;
    match label {
        1 => [zero, inf.clone(), inf],
        2 => [inf.clone(), zero, inf],
        3 => [inf.clone(), inf, zero],
        _ => [zero.clone(), zero.clone(), zero],
    }
}

impl TropConfig {
    pub fn new(points: [[TropValue; 3]; 4], prime: Option<u64>) -> Result<Self> {
        if let Some(i) = points.iter().position(|p| !p.iter().any(TropValue::is_finite)) {
            return Err(Error::InvalidArgument(format!(
                "tropical point {} has no finite coordinate",
                i + 5
            )));
        }
        if let Some(p) = prime {
            check_prime(p)?;
        }
        Ok(TropConfig { points, prime })
    }

    pub fn from_ints(v: [[i64; 3]; 4], prime: Option<u64>) -> Result<Self> {
        Self::new(v.map(|p| p.map(TropValue::from_i64)), prime)
    }

    /// Valuations of the coordinates of an exact configuration whose first
    /// four points are the standard frame.
    pub fn from_config(c: &Config8, prime: u64) -> Result<Self> {
        let frame_ints = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]];
        for (label, want) in (1..=4).zip(frame_ints) {
            if c.p(label).to_vec() != want.map(rat) {
                return Err(Error::InvalidArgument(format!(
                    "P{label} must be exactly {want:?}"
                )));
            }
        }
        let points = [5, 6, 7, 8].map(|l| c.p(l).coords().map(|x| p_adic_valuation(prime, x)));
        Self::new(points, Some(prime))
    }

    pub fn point(&self, label: usize) -> [TropValue; 3] {
        if label <= 4 {
            frame(label)
        } else {
            self.points[label - 5].clone()
        }
    }

    pub fn prime(&self) -> Option<u64> {
        self.prime
    }

    /// The configuration with `k` added to every coordinate of `P_label`.
    pub fn shifted(&self, label: usize, k: &Rat) -> TropConfig {
        let mut out = self.clone();
        for v in out.points[label - 5].iter_mut() {
            if let TropValue::Finite(r) = v {
                *r += k;
            }
        }
        out
    }
}

fn check_prime(p: u64) -> Result<()> {
    let composite = p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p % d == 0);
    if composite {
        Err(Error::InvalidArgument(format!("{p} is not a prime")))
    } else {
        Ok(())
    }
}

/// Entrywise valuations of the factor's monomial matrix.
pub fn valuation_matrix(t: &TropConfig, f: Factor) -> TropMatrix {
    let rows = factor_rows(f)
        .into_iter()
        .map(|(kind, label)| {
            let coords = t.point(label);
            kind.template()
                .into_iter()
                .map(|term| match term {
                    None => TropValue::Infinite,
                    Some(term) => {
                        let coef = match t.prime {
                            Some(p) => p_adic_valuation(p, &rat(term.coef)),
                            None => TropValue::zero(),
                        };
                        term.exps
                            .iter()
                            .zip(&coords)
                            .filter(|(&e, _)| e > 0)
                            .fold(coef, |acc, (&e, c)| {
                                acc.otimes(&match c {
                                    TropValue::Finite(r) => TropValue::Finite(r * rat(e as i64)),
                                    TropValue::Infinite => TropValue::Infinite,
                                })
                            })
                    }
                })
                .collect()
        })
        .collect();
    TropMatrix::from_rows(rows).expect("square template")
}

/// Tropical value of one factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorPrediction {
    pub factor: Factor,
    pub value: Rat,
    pub unique: bool,
}

/// `trop(u) = trop(Dx) + trop(Cy) - trop(Cx) - trop(Dy)` and the analogous
/// `trop(v)` with `Cz`, `Dz`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalP9 {
    pub u: Rat,
    pub v: Rat,
    /// In the order of [`Factor::ALL`].
    pub factors: Vec<FactorPrediction>,
}

impl TropicalP9 {
    pub fn all_unique(&self) -> bool {
        self.factors.iter().all(|f| f.unique)
    }

    pub fn factor(&self, f: Factor) -> &FactorPrediction {
        &self.factors[f as usize]
    }
}

pub fn tropical_p9(t: &TropConfig) -> Result<TropicalP9> {
    let mut factors = Vec::with_capacity(6);
    for f in Factor::ALL {
        let d = tropical_determinant(&valuation_matrix(t, f))?;
        let value = match d.value {
            TropValue::Finite(r) => r,
            TropValue::Infinite => {
                return Err(Error::InfiniteValuation(format!(
                    "tropical {} is +inf",
                    f.name()
                )))
            }
        };
        factors.push(FactorPrediction {
            factor: f,
            value,
            unique: d.unique,
        });
    }
    let v = |f: Factor| &factors[f as usize].value;
    let u = v(Factor::Dx) + v(Factor::Cy) - v(Factor::Cx) - v(Factor::Dy);
    let vv = v(Factor::Dx) + v(Factor::Cz) - v(Factor::Cx) - v(Factor::Dz);
    Ok(TropicalP9 { u, v: vv, factors })
}

/// One p-adic trial: exact valuations next to the tropical predictions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    /// Exponents of `P5..P8`.
    pub exponents: [[i64; 3]; 4],
    /// `v_p` of `Cx, Cy, Cz, Dx, Dy, Dz` evaluated exactly.
    pub exact: [i64; 6],
    pub predicted: [i64; 6],
    pub unique: [bool; 6],
    pub exact_uv: [i64; 2],
    pub predicted_uv: [i64; 2],
    /// Predicted and exact `(u, v)` valuations coincide.
    pub agrees: bool,
    /// Some factor's lowest terms cancelled (`exact > predicted`).
    pub cancellation: bool,
    /// Breaks `exact >= predicted`, or equality for a unique minimizer.
    pub violation: bool,
}

/// Aggregate of a valuation-agreement run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationReport {
    pub prime: u64,
    pub seed: u64,
    pub bound: i64,
    pub trials: usize,
    pub rejected: usize,
    pub agreements: usize,
    pub cancellations: usize,
    /// Trials in which all six minimizers are unique.
    pub all_unique: usize,
    /// Factor evaluations (six per trial) with a unique minimizer.
    pub unique_factors: usize,
    /// Trials with all minimizers unique that still disagree.
    pub unique_disagreements: usize,
    pub violations: usize,
    pub records: Vec<TrialRecord>,
}

impl ValuationReport {
    /// Soundness holds and every disagreement is a cancellation event.
    pub fn is_sound(&self) -> bool {
        self.violations == 0
            && self.unique_disagreements == 0
            && self.records.iter().all(|r| r.agrees || r.cancellation)
    }
}

fn integral(r: &Rat) -> Result<i64> {
    if !r.is_integer() {
        return Err(Error::Internal(format!("non-integral valuation {r}")));
    }
    r.to_integer()
        .to_i64()
        .ok_or_else(|| Error::Internal(format!("valuation {r} out of range")))
}

fn finite_integral(v: &TropValue) -> Result<i64> {
    integral(v.finite().ok_or_else(|| Error::Internal("unexpected +inf".into()))?)
}

/// `sign * p^e * (r + p k)` with `e in [-3, 3]`, `r in [1, p-1]`, `k in [0, bound]`.
fn sample_coordinate<R: Rng>(rng: &mut R, p: u64, bound: i64) -> (Rat, i64) {
    let e = rng.gen_range(-3i64..=3);
    let r = rng.gen_range(1..p) as i64;
    let k = rng.gen_range(0..=bound);
    let unit = rat(r + p as i64 * k);
    let sign = if rng.gen_bool(0.5) { rat(1) } else { rat(-1) };
    let pe = num_traits::pow(rat(p as i64), e.unsigned_abs() as usize);
    let scale = if e >= 0 { pe } else { pe.recip() };
    (sign * unit * scale, e)
}

fn run_trial(prime: u64, seed: u64, bound: i64, trial: usize) -> Result<(TrialRecord, usize)> {
    let mut rng = trial_rng(seed, trial);
    for rejected in 0..MAX_REJECTIONS {
        let mut exps = [[0i64; 3]; 4];
        let mut pts = Vec::with_capacity(8);
        pts.extend([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]].map(|[x, y, z]| ProjPoint::from_ints(x, y, z)));
        for e in exps.iter_mut() {
            let mut coords: [Rat; 3] = Default::default();
            for (axis, c) in coords.iter_mut().enumerate() {
                let (x, ex) = sample_coordinate(&mut rng, prime, bound);
                *c = x;
                e[axis] = ex;
            }
            pts.push(ProjPoint::from_vec(coords).expect("units are nonzero"));
        }
        let c = Config8::new(pts.try_into().expect("eight points"));
        if !c.degeneracy().is_empty() {
            continue;
        }
        let ing = ingredients(&c, Triple::FIRST);
        let exact_vals = [&ing.cx, &ing.cy, &ing.cz, &ing.dx, &ing.dy, &ing.dz];
        if exact_vals.iter().any(|v| v.is_zero()) {
            continue;
        }
        let t = TropConfig::from_ints(exps, Some(prime))?;
        let pred = tropical_p9(&t)?;
        let mut exact = [0i64; 6];
        let mut predicted = [0i64; 6];
        let mut unique = [false; 6];
        for i in 0..6 {
            exact[i] = finite_integral(&p_adic_valuation(prime, exact_vals[i]))?;
            predicted[i] = integral(&pred.factors[i].value)?;
            unique[i] = pred.factors[i].unique;
        }
        let u = &ing.dx * &ing.cy / (&ing.cx * &ing.dy);
        let v = &ing.dx * &ing.cz / (&ing.cx * &ing.dz);
        let exact_uv = [
            finite_integral(&p_adic_valuation(prime, &u))?,
            finite_integral(&p_adic_valuation(prime, &v))?,
        ];
        let predicted_uv = [integral(&pred.u)?, integral(&pred.v)?];
        let violation = (0..6).any(|i| exact[i] < predicted[i] || (unique[i] && exact[i] != predicted[i]));
        let record = TrialRecord {
            trial,
            exponents: exps,
            exact,
            predicted,
            unique,
            exact_uv,
            predicted_uv,
            agrees: exact_uv == predicted_uv,
            cancellation: (0..6).any(|i| exact[i] > predicted[i]),
            violation,
        };
        return Ok((record, rejected));
    }
    Err(Error::SamplerExhausted(MAX_REJECTIONS))
}

/// Samples `trials` frame configurations with `P5..P8` coordinates
/// `+-p^e * unit` and compares exact valuations with tropical predictions.
pub fn valuation_agreement(prime: u64, trials: usize, seed: u64, bound: i64) -> Result<ValuationReport> {
    check_prime(prime)?;
    if bound < 0 {
        return Err(Error::InvalidArgument("bound must be nonnegative".into()));
    }
    let outcomes: Vec<Result<(TrialRecord, usize)>> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(prime, seed, bound, t))
        .collect();
    let mut records = Vec::with_capacity(trials);
    let mut rejected = 0;
    for o in outcomes {
        let (r, rej) = o?;
        rejected += rej;
        records.push(r);
    }
    let count = |pred: &dyn Fn(&TrialRecord) -> bool| records.iter().filter(|r| pred(r)).count();
    Ok(ValuationReport {
        prime,
        seed,
        bound,
        trials,
        rejected,
        agreements: count(&|r| r.agrees),
        cancellations: count(&|r| r.cancellation),
        all_unique: count(&|r| r.unique.iter().all(|&u| u)),
        unique_factors: records.iter().map(|r| r.unique.iter().filter(|&&u| u).count()).sum(),
        unique_disagreements: count(&|r| r.unique.iter().all(|&u| u) && !r.agrees),
        violations: count(&|r| r.violation),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ff_determinant, RatMatrix};
    use crate::monomials::eval_row;
    use crate::sample::random_point;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn frame_config(rng: &mut ChaCha8Rng) -> Config8 {
        let mut pts: Vec<ProjPoint> = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]
            .map(|[x, y, z]| ProjPoint::from_ints(x, y, z))
            .to_vec();
        pts.extend((0..4).map(|_| random_point(rng, 20)));
        Config8::new(pts.try_into().unwrap())
    }

    #[test]
    fn factor_rows_reproduce_ingredients() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = crate::sample::random_config(&mut rng, 20);
        let ing = ingredients(&c, Triple::FIRST);
        let want = [&ing.cx, &ing.cy, &ing.cz, &ing.dx, &ing.dy, &ing.dz];
        for (f, w) in Factor::ALL.into_iter().zip(want) {
            let rows: Vec<Vec<Rat>> = factor_rows(f)
                .into_iter()
                .map(|(kind, l)| eval_row(kind, c.p(l).coords()))
                .collect();
            let d = ff_determinant(&RatMatrix::from_rows(&rows).unwrap()).unwrap();
            assert_eq!(&d, w, "{f:?}");
        }
    }

    #[test]
    fn degrees_per_point() {
        assert_eq!(Factor::Cx.degrees(), [2, 0, 0, 2, 2, 2, 2, 2]);
        assert_eq!(Factor::Dy.degrees(), [3, 6, 3, 3, 3, 3, 3, 3]);
    }

    #[test]
    fn valuations() {
        assert_eq!(p_adic_valuation(2, &rat(12)), TropValue::from_i64(2));
        assert_eq!(p_adic_valuation(3, &(rat(5) / rat(18))), TropValue::from_i64(-2));
        assert_eq!(p_adic_valuation(7, &rat(0)), TropValue::Infinite);
        assert_eq!(p_adic_valuation(5, &rat(-7)), TropValue::zero());
    }

    #[test]
    fn zero_valuations_give_zero() {
        let t = TropConfig::from_ints([[0; 3]; 4], None).unwrap();
        let p = tropical_p9(&t).unwrap();
        assert!(p.u.is_zero() && p.v.is_zero());
    }

    #[test]
    fn point_without_finite_coordinate_rejected() {
        let mut pts = [0; 4].map(|_| [TropValue::zero(), TropValue::zero(), TropValue::zero()]);
        pts[2] = [TropValue::Infinite, TropValue::Infinite, TropValue::Infinite];
        assert!(TropConfig::new(pts, None).is_err());
        assert!(TropConfig::from_ints([[0; 3]; 4], Some(4)).is_err());
    }

    #[test]
    fn shifting_a_point_shifts_by_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let k = rat(3) / rat(2);
        for _ in 0..10 {
            let e = [[0i64; 3]; 4].map(|p| p.map(|_| rng.gen_range(-3..=3)));
            let t = TropConfig::from_ints(e, None).unwrap();
            let base = tropical_p9(&t).unwrap();
            for label in 5..=8 {
                let shifted = tropical_p9(&t.shifted(label, &k)).unwrap();
                for f in Factor::ALL {
                    let deg = rat(f.degrees()[label - 1] as i64);
                    assert_eq!(shifted.factor(f).value, &base.factor(f).value + &deg * &k);
                }
            }
        }
    }

    /// Exact determinants of matrices with entries `+-p^e * unit` against the
    /// tropical determinant of the exponent matrix.
    #[test]
    fn ultrametric_soundness_for_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = 3u64;
        let mut unique_seen = 0;
        for _ in 0..200 {
            let n = rng.gen_range(1..=5);
            let mut exact = Vec::new();
            let mut trop = Vec::new();
            for _ in 0..n {
                let mut er = Vec::new();
                let mut tr = Vec::new();
                for _ in 0..n {
                    let (x, e) = sample_coordinate(&mut rng, p, 2);
                    er.push(x);
                    tr.push(TropValue::from_i64(e));
                }
                exact.push(er);
                trop.push(tr);
            }
            let det = ff_determinant(&RatMatrix::from_rows(&exact).unwrap()).unwrap();
            let td = tropical_determinant(&TropMatrix::from_rows(trop).unwrap()).unwrap();
            let val = p_adic_valuation(p, &det);
            assert!(val >= td.value);
            if td.unique {
                unique_seen += 1;
                assert_eq!(val, td.value);
            }
        }
        assert!(unique_seen > 20);
    }

    #[test]
    fn engineered_tie_cancels() {
        // [[1, 1], [1, 3]] over Q_2: both permutations have valuation 0 but det = 2
        let m = TropMatrix::from_options(&[[Some(0), Some(0)], [Some(0), Some(0)]]).unwrap();
        let td = tropical_determinant(&m).unwrap();
        assert!(!td.unique);
        let det = ff_determinant(&RatMatrix::from_i64_rows(&[[1, 1], [1, 3]]).unwrap()).unwrap();
        assert!(p_adic_valuation(2, &det) > td.value);
    }

    #[test]
    fn from_config_reads_exponents() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let c = frame_config(&mut rng);
        let t = TropConfig::from_config(&c, 2).unwrap();
        for l in 5..=8 {
            assert_eq!(t.point(l), c.p(l).coords().map(|x| p_adic_valuation(2, x)));
        }
        let bad = c.with_point(1, ProjPoint::from_ints(1, 1, 0));
        assert!(TropConfig::from_config(&bad, 2).is_err());
    }

    #[test]
    fn agreement_run_is_sound_and_deterministic() {
        let a = valuation_agreement(2, 12, 4, 3).unwrap();
        assert!(a.is_sound(), "{a:?}");
        assert_eq!(a, valuation_agreement(2, 12, 4, 3).unwrap());
        for r in &a.records {
            if r.unique.iter().all(|&u| u) {
                assert!(r.agrees);
            }
        }
        assert!(valuation_agreement(6, 1, 0, 3).is_err());
    }

    #[test]
    fn piecewise_linear_along_directions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let eps = rat(1) / rat(10_000);
        for _ in 0..10 {
            let e = [[0i64; 3]; 4].map(|p| p.map(|_| rng.gen_range(-3..=3)));
            let d = [[0i64; 3]; 4].map(|p| p.map(|_| rng.gen_range(-2..=2)));
            let at = |s: &Rat| {
                let pts = [0, 1, 2, 3].map(|i| {
                    [0, 1, 2].map(|j| TropValue::Finite(rat(e[i][j]) + s * rat(d[i][j])))
                });
                tropical_p9(&TropConfig::new(pts, None).unwrap()).unwrap()
            };
            let f0 = at(&rat(0));
            let f1 = at(&eps);
            let f2 = at(&(&eps * rat(2)));
            for (a, (b, c)) in [&f0.u, &f0.v].iter().zip([&f1.u, &f1.v].iter().zip([&f2.u, &f2.v])) {
                assert_eq!(c - *b, *b - *a);
            }
        }
    }
}

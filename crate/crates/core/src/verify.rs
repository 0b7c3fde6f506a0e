//! Randomized exact verification of the identities behind the formulas.
//!
//! Every check evaluates both sides at random integer specializations and
//! compares them as rationals; a pass is literal equality, never closeness.
//! Runs are deterministic in `(seed, bound, trials)`: trial `t` draws from
//! its own ChaCha stream, so trials can run in parallel without changing the
//! outcome.

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cbpoint::{
    fano_monomial, ingredients, p9_cross_ratio, p9_determinantal, p9_fano, p9_raw, p9_reduced,
    p9_reduced_raw, FanoMode, FanoTuple, Triple,
};
use crate::error::{Error, Result};
use crate::exact::{ff_determinant, rat, Rat, RatMatrix};
use crate::projective::{
    conic_bracket_expansion, conic_det, cross_ratio_conics, cross_ratio_lines,
    singular_cubic_bracket_expansion, singular_cubic_det, Config8, ProjPoint,
};
use crate::sample::{
    random_config, random_nondegenerate_config, random_scalar, random_transform, trial_rng,
    MAX_REJECTIONS,
};

/// The frame `P1 = (1:0:0), P2 = (0:1:0), P3 = (0:0:1), P4 = (1:1:1)` plus
/// `P5 = (1:a:b), P6 = (1:c:d), P7 = (1:e:f), P8 = (1:g:h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializedConfig {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
    pub e: Rat,
    pub f: Rat,
    pub g: Rat,
    pub h: Rat,
}

impl SpecializedConfig {
    pub fn from_ints(v: [i64; 8]) -> Self {
        let [a, b, c, d, e, f, g, h] = v.map(rat);
        SpecializedConfig { a, b, c, d, e, f, g, h }
    }

    pub fn random<R: Rng>(rng: &mut R, bound: i64) -> Self {
        Self::from_ints([0; 8].map(|_| rng.gen_range(-bound..=bound)))
    }

    pub fn config(&self) -> Config8 {
        let one = Rat::one();
        let zero = Rat::zero();
        let p = |x: &Rat, y: &Rat, z: &Rat| {
            ProjPoint::new(x.clone(), y.clone(), z.clone()).expect("nonzero")
        };
        Config8::new([
            p(&one, &zero, &zero),
            p(&zero, &one, &zero),
            p(&zero, &zero, &one),
            p(&one, &one, &one),
            p(&one, &self.a, &self.b),
            p(&one, &self.c, &self.d),
            p(&one, &self.e, &self.f),
            p(&one, &self.g, &self.h),
        ])
    }
}

/// Column labels of the 9x10 matrix: the cubic monomials at `(1 : u : v)`.
pub const UV_MONOMIALS: [&str; 10] = ["1", "u", "v", "u^2", "uv", "v^2", "u^3", "u^2v", "uv^2", "v^3"];

/// Columns of `u^2v, uv^2, u^2, uv, v^2, u, v`, the seven-term form.
pub const SEVEN_TERM_COLUMNS: [usize; 7] = [7, 8, 3, 4, 5, 1, 2];

/// Columns whose cofactor vanishes because of the unit rows of P1, P2, P3.
pub const UNIT_ROW_COLUMNS: [usize; 3] = [0, 6, 9];

/// The `(u, v)` polynomial of one 9x9 minor of the 9x10 matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorIdentityData {
    /// 0-based column of the 9x10 matrix left out of the minor.
    pub deleted_column: usize,
    /// Coefficients `A1..A7` of `u^2v, uv^2, u^2, uv, v^2, u, v`.
    pub cofactors: [Rat; 7],
    /// Coefficient of every monomial column (zero at `deleted_column`).
    pub coefficients: [Rat; 10],
}

impl MinorIdentityData {
    /// Whether every coefficient vanishes (minors that drop a unit-row column).
    pub fn is_identically_zero(&self) -> bool {
        self.coefficients.iter().all(Zero::is_zero)
    }

    /// Whether the constant, `u^3` and `v^3` coefficients vanish, as the
    /// seven-term form presumes.
    pub fn has_seven_term_shape(&self) -> bool {
        UNIT_ROW_COLUMNS.iter().all(|&c| self.coefficients[c].is_zero())
    }

    pub fn eval(&self, u: &Rat, v: &Rat) -> Rat {
        uv_monomials(u, v)
            .iter()
            .zip(&self.coefficients)
            .fold(Rat::zero(), |acc, (m, a)| acc + m * a)
    }
}

pub fn uv_monomials(u: &Rat, v: &Rat) -> [Rat; 10] {
    let one = Rat::one();
    let p = ProjPoint::new(one, u.clone(), v.clone()).expect("x = 1");
    p.cubic_row().try_into().expect("ten monomials")
}

/// Cofactors of the last row for the minor omitting `deleted_column`.
pub fn cofactors_a(s: &SpecializedConfig, deleted_column: usize) -> Result<MinorIdentityData> {
    if deleted_column >= 10 {
        return Err(Error::InvalidArgument(format!(
            "column {deleted_column} outside 0..10"
        )));
    }
    let c = s.config();
    let rows: Vec<Vec<Rat>> = c.points().iter().map(|p| p.cubic_row()).collect();
    let fixed = RatMatrix::from_rows(&rows)?;
    let kept: Vec<usize> = (0..10).filter(|&j| j != deleted_column).collect();
    let mut coefficients: [Rat; 10] = Default::default();
    for (pos, &col) in kept.iter().enumerate() {
        let others: Vec<usize> = kept.iter().copied().filter(|&j| j != col).collect();
        let minor = ff_determinant(&fixed.select_columns(&others))?;
        // last row is row 8 of the 9x9 minor
        coefficients[col] = if (8 + pos) % 2 == 0 { minor } else { -minor };
    }
    let cofactors = SEVEN_TERM_COLUMNS.map(|j| coefficients[j].clone());
    Ok(MinorIdentityData {
        deleted_column,
        cofactors,
        coefficients,
    })
}

/// `(u, v) = (D_x C_y / (C_x D_y), D_x C_z / (C_x D_z))`, or `None` when a
/// denominator vanishes.
pub fn assertion_uv(s: &SpecializedConfig) -> Option<(Rat, Rat)> {
    let ing = ingredients(&s.config(), Triple::FIRST);
    if ing.cx.is_zero() || ing.dy.is_zero() || ing.dz.is_zero() {
        return None;
    }
    let u = &ing.dx * &ing.cy / (&ing.cx * &ing.dy);
    let v = &ing.dx * &ing.cz / (&ing.cx * &ing.dz);
    Some((u, v))
}

/// The identities the harness can check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    /// Conic determinant equals its four-bracket expansion.
    ConicExpansion,
    /// `D(P7; P1..P6, P8)` equals its 54-bracket expansion.
    CubicExpansion,
    /// `C(T P) = det(T)^4 C(P)`.
    EquivarianceC,
    /// `D(T P) = det(T)^9 D(P)`.
    EquivarianceD,
    /// `(5,6,7,8)_9 = (5,6,7,8)_{1234}` at the determinant-formula point.
    CayleyIdentity,
    /// `F` is invariant under cyclic shift and odd under reversal.
    FanoSymmetry,
    /// The ten 9x9 minors vanish after substituting `(u, v)`.
    MinorIdentities,
    /// All four formulas give the same canonical point.
    CrossMethod,
    /// Each determinant-formula coordinate is divisible by the triple bracket.
    Divisibility,
    /// Multidegree `(9,9,9,8,...)` of the determinant formula and 8 of the Fano sum.
    Multidegree,
}

impl Identity {
    pub const ALL: [Identity; 10] = [
        Identity::ConicExpansion,
        Identity::CubicExpansion,
        Identity::EquivarianceC,
        Identity::EquivarianceD,
        Identity::CayleyIdentity,
        Identity::FanoSymmetry,
        Identity::MinorIdentities,
        Identity::CrossMethod,
        Identity::Divisibility,
        Identity::Multidegree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::ConicExpansion => "conic-expansion",
            Identity::CubicExpansion => "cubic-expansion",
            Identity::EquivarianceC => "equivariance-C",
            Identity::EquivarianceD => "equivariance-D",
            Identity::CayleyIdentity => "cayley-identity",
            Identity::FanoSymmetry => "fano-symmetry",
            Identity::MinorIdentities => "minor-identities",
            Identity::CrossMethod => "cross-method",
            Identity::Divisibility => "divisibility",
            Identity::Multidegree => "multidegree",
        }
    }

    pub fn parse(name: &str) -> Result<Identity> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == name)
            .ok_or_else(|| Error::UnknownIdentity(name.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub detail: String,
}

/// Machine-readable outcome of one suite run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub identity: String,
    pub seed: u64,
    pub bound: i64,
    pub trials: usize,
    /// Degenerate draws that were discarded and redrawn.
    pub rejected: usize,
    pub failures: Vec<TrialFailure>,
    pub notes: Vec<String>,
    pub status: Status,
}

struct Trial {
    rejected: usize,
    failure: Option<String>,
    notes: Vec<String>,
}

impl Trial {
    fn pass(rejected: usize) -> Self {
        Trial {
            rejected,
            failure: None,
            notes: Vec::new(),
        }
    }

    fn check(rejected: usize, ok: bool, what: impl FnOnce() -> String) -> Self {
        Trial {
            rejected,
            failure: (!ok).then(what),
            notes: Vec::new(),
        }
    }
}

/// Draws from `draw` until `accept` holds, counting rejections.
fn draw_until<T>(
    rng: &mut ChaCha8Rng,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Result<T>,
    mut accept: impl FnMut(&T) -> bool,
) -> Result<(T, usize)> {
    for rejected in 0..MAX_REJECTIONS {
        let v = draw(rng)?;
        if accept(&v) {
            return Ok((v, rejected));
        }
    }
    Err(Error::SamplerExhausted(MAX_REJECTIONS))
}

fn six(c: &Config8) -> [&ProjPoint; 6] {
    [c.p(1), c.p(2), c.p(3), c.p(4), c.p(5), c.p(6)]
}

fn d7(c: &Config8) -> Rat {
    singular_cubic_det(c.p(7), [c.p(1), c.p(2), c.p(3), c.p(4), c.p(5), c.p(6), c.p(8)])
}

fn random_permutation(rng: &mut ChaCha8Rng) -> [usize; 8] {
    use rand::seq::SliceRandom;
    let mut p = [1, 2, 3, 4, 5, 6, 7, 8];
    p.shuffle(rng);
    p
}

fn run_trial(which: Identity, rng: &mut ChaCha8Rng, bound: i64) -> Result<Trial> {
    let any = |r: &mut ChaCha8Rng| Ok(random_config(r, bound));
    let generic = |r: &mut ChaCha8Rng| random_nondegenerate_config(r, bound);
    Ok(match which {
        Identity::ConicExpansion => {
            let (c, rej) = draw_until(rng, any, |c| !conic_det(six(c)).is_zero())?;
            let (lhs, rhs) = (conic_det(six(&c)), conic_bracket_expansion(six(&c)));
            Trial::check(rej, lhs == rhs, || format!("determinant {lhs} != expansion {rhs}"))
        }
        Identity::CubicExpansion => {
            let (c, rej) = draw_until(rng, any, |c| !d7(c).is_zero())?;
            let (lhs, rhs) = (d7(&c), singular_cubic_bracket_expansion(&c));
            Trial::check(rej, lhs == rhs, || format!("determinant {lhs} != expansion {rhs}"))
        }
        Identity::EquivarianceC | Identity::EquivarianceD => {
            let (c, rej) = draw_until(rng, any, |c| {
                !conic_det(six(c)).is_zero() && !d7(c).is_zero()
            })?;
            let t = random_transform(rng, bound.min(10));
            let tc = c.transformed(&t);
            let (before, after, power) = if which == Identity::EquivarianceC {
                (conic_det(six(&c)), conic_det(six(&tc)), 4)
            } else {
                (d7(&c), d7(&tc), 9)
            };
            let expected = num_traits::pow(t.det().clone(), power) * &before;
            Trial::check(rej, after == expected, || {
                format!("transformed value {after} != det(T)^{power} * {before}")
            })
        }
        Identity::CayleyIdentity => {
            let mut rejected = 0;
            let (c, p9, lines, conics) = loop {
                let (c, rej) = draw_until(rng, generic, |_| true)?;
                rejected += rej;
                let p9 = p9_determinantal(&c, Triple::FIRST)?;
                let lines = cross_ratio_lines(&p9, [c.p(5), c.p(6), c.p(7), c.p(8)]);
                let conics = cross_ratio_conics(
                    [c.p(1), c.p(2), c.p(3), c.p(4)],
                    [c.p(5), c.p(6), c.p(7), c.p(8)],
                );
                match (lines, conics) {
                    (Ok(a), Ok(b)) => break (c, p9, a, b),
                    _ if rejected < MAX_REJECTIONS => rejected += 1,
                    _ => return Err(Error::SamplerExhausted(MAX_REJECTIONS)),
                }
            };
            let _ = c;
            Trial::check(rejected, lines == conics, || {
                format!("(5,6,7,8)_9 = {lines} but (5,6,7,8)_1234 = {conics} at {p9}")
            })
        }
        Identity::FanoSymmetry => {
            let (c, rej) = draw_until(rng, any, |c| {
                !fano_monomial(c, &FanoTuple::new([1, 2, 3, 4, 5, 6, 7], 8).unwrap()).is_zero()
            })?;
            let p = random_permutation(rng);
            let t = FanoTuple::new([p[0], p[1], p[2], p[3], p[4], p[5], p[6]], p[7]).unwrap();
            let shifted = FanoTuple::new([p[6], p[0], p[1], p[2], p[3], p[4], p[5]], p[7]).unwrap();
            let reversed = FanoTuple::new([p[6], p[5], p[4], p[3], p[2], p[1], p[0]], p[7]).unwrap();
            let f = fano_monomial(&c, &t);
            let ok = fano_monomial(&c, &shifted) == f && fano_monomial(&c, &reversed) == -f.clone();
            Trial::check(rej, ok, || format!("symmetry broken for tuple {p:?}"))
        }
        Identity::MinorIdentities => {
            let (s, rej) = draw_until(
                rng,
                |r| Ok(SpecializedConfig::random(r, bound)),
                |s| s.config().degeneracy().is_empty() && assertion_uv(s).is_some(),
            )?;
            let (u, v) = assertion_uv(&s).expect("accepted draw");
            let mut failures = Vec::new();
            let mut zero_minors = Vec::new();
            for col in 0..10 {
                let data = cofactors_a(&s, col)?;
                if data.is_identically_zero() {
                    zero_minors.push(UV_MONOMIALS[col]);
                }
                if !data.has_seven_term_shape() {
                    failures.push(format!("minor without {} has a unit-row term", UV_MONOMIALS[col]));
                }
                let value = data.eval(&u, &v);
                if !value.is_zero() {
                    failures.push(format!("minor without {} evaluates to {value}", UV_MONOMIALS[col]));
                }
            }
            Trial {
                rejected: rej,
                failure: (!failures.is_empty()).then(|| failures.join("; ")),
                notes: vec![format!("identically zero minors (deleted column): {}", zero_minors.join(", "))],
            }
        }
        Identity::CrossMethod => {
            let (c, rej) = draw_until(rng, generic, |_| true)?;
            let det = p9_determinantal(&c, Triple::FIRST)?;
            let reduced = p9_reduced(&c, Triple::FIRST)?;
            let cross = p9_cross_ratio(&c)?.point;
            let fano = p9_fano(&c, FanoMode::Reduced).point();
            let ok = det == reduced && det == cross && fano.as_ref() == Some(&det);
            Trial::check(rej, ok, || {
                format!("det {det}, reduced {reduced}, cross-ratio {cross}, fano {fano:?}")
            })
        }
        Identity::Divisibility => {
            let (c, rej) = draw_until(rng, generic, |_| true)?;
            let perm = random_permutation(rng);
            let triple = Triple([perm[0], perm[1], perm[2]]);
            match p9_reduced_raw(&c, triple) {
                Ok(_) => Trial::pass(rej),
                Err(Error::Internal(msg)) => Trial::check(rej, false, || msg),
                Err(e) => return Err(e),
            }
        }
        Identity::Multidegree => {
            let (c, rej) = draw_until(rng, generic, |_| true)?;
            let label = rng.gen_range(1..=8);
            let lambda = random_scalar(rng, bound.clamp(2, 7));
            let scaled = c.with_point(label, c.p(label).scaled(&lambda)?);
            let in_triple = label <= 3;
            let det_power = if in_triple { 9 } else { 8 };
            let f_det = num_traits::pow(lambda.clone(), det_power);
            let f_fano = num_traits::pow(lambda.clone(), 8);
            let raw_ok = p9_raw(&scaled, Triple::FIRST)
                .iter()
                .zip(p9_raw(&c, Triple::FIRST))
                .all(|(a, b)| a == &(b * &f_det));
            let fano_ok = p9_fano(&scaled, FanoMode::Reduced)
                .vector
                .iter()
                .zip(p9_fano(&c, FanoMode::Reduced).vector)
                .all(|(a, b)| a == &(b * &f_fano));
            Trial::check(rej, raw_ok && fano_ok, || {
                format!("scaling P{label} by {lambda}: determinant ok {raw_ok}, fano ok {fano_ok}")
            })
        }
    })
}

/// Runs `trials` independent checks of `which`.
pub fn run_identity_suite(which: Identity, trials: usize, seed: u64, bound: i64) -> Result<VerifyReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if bound < 1 {
        return Err(Error::InvalidArgument("bound must be at least 1".into()));
    }
    let outcomes: Vec<Result<Trial>> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(which, &mut trial_rng(seed, t), bound))
        .collect();
    let mut failures = Vec::new();
    let mut rejected = 0;
    let mut notes = Vec::new();
    for (trial, outcome) in outcomes.into_iter().enumerate() {
        let outcome = outcome?;
        rejected += outcome.rejected;
        if let Some(detail) = outcome.failure {
            failures.push(TrialFailure { trial, detail });
        }
        for n in outcome.notes {
            if !notes.contains(&n) {
                notes.push(n);
            }
        }
    }
    let status = if failures.is_empty() {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(VerifyReport {
        identity: which.name().to_string(),
        seed,
        bound,
        trials,
        rejected,
        failures,
        notes,
        status,
    })
}

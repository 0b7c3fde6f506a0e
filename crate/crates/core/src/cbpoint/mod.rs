//! The Cayley-Bacharach point of eight plane points.
//!
//! Four independent routes to the ninth point live here:
//!
//! * [`p9_determinantal`]: the `C_x D_y D_z P_i + D_x C_y D_z P_j + D_x D_y C_z P_k`
//!   formula built from conic and singular-cubic determinants,
//! * [`p9_reduced`]: the same vector divided by the bracket of the chosen triple,
//! * [`p9_fano`]: the alternating sum over `S_8` of a 21-bracket Fano monomial,
//! * [`p9_cross_ratio`]: Cayley's construction from cross ratios of lines and conics.
//!
//! [`cubic_pencil_basis`] and [`certify_p9`] provide the independent check:
//! the ninth point must lie on every cubic through the eight inputs.

mod cross_ratio;
mod degeneracy;
mod fano;
mod formula;
mod pencil;

use num_traits::Zero;
use serde::Serialize;

pub use cross_ratio::{p9_cross_ratio, p9_cross_ratio_labeled, CrossRatioData, CrossRatioSolution};
pub use degeneracy::{degeneracy_report, DegeneracyReport};
pub use fano::{fano_monomial, p9_fano, FanoMode, FanoSum, FanoTuple, FANO_BRACKETS};
pub use formula::{
    default_triple, ingredients, p9_determinantal, p9_raw, p9_reduced, p9_reduced_raw,
    CBIngredients, Triple,
};
pub use pencil::{certify_p9, cubic_pencil_basis, Certification, Cubic};

use crate::error::{Error, Result};
use crate::projective::{Config8, ProjPoint};

/// Which formula to use for the ninth point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Determinant formula with the `C`/`D` ingredients.
    Det,
    /// Determinant formula divided by the triple bracket.
    Reduced,
    /// Fano sum over the 2880 dihedral orbit representatives.
    Fano,
    /// Fano sum over all of `S_8`.
    FanoFull,
    /// Cayley's cross-ratio construction.
    CrossRatio,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Det,
        Method::Reduced,
        Method::Fano,
        Method::FanoFull,
        Method::CrossRatio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Det => "det",
            Method::Reduced => "reduced",
            Method::Fano => "fano",
            Method::FanoFull => "fano-full",
            Method::CrossRatio => "crossratio",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.name() == s)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.name())
    }
}

/// Outcome of [`compute_p9`].
#[derive(Clone, Debug)]
pub struct Solution {
    /// Canonical representative.
    pub point: ProjPoint,
    /// Method that produced `point` (differs from the request after a fallback).
    pub method: Method,
    pub triple: Option<Triple>,
    /// Set when the requested route failed and another one was used.
    pub fallback: Option<String>,
    pub fano_evaluations: Option<u64>,
}

/// Computes the ninth point with the requested method.
///
/// Refuses configurations that violate the general-position hypotheses.
/// When the determinant formula returns the zero vector for the chosen
/// triple, the remaining triples are tried in lexicographic order and then
/// the Fano sum; the report records the fallback.
pub fn compute_p9(c: &Config8, method: Method, triple: Option<Triple>) -> Result<Solution> {
    let report = c.degeneracy();
    if !report.is_empty() {
        return Err(Error::Degenerate {
            reason: report.summary(),
            report: Box::new(report.clone()),
        });
    }
    match method {
        Method::Det | Method::Reduced => {
            let first = match triple {
                Some(t) => t,
                None => default_triple(c).ok_or_else(|| degenerate(c, "all brackets vanish"))?,
            };
            let run = |t: Triple| match method {
                Method::Det => p9_determinantal(c, t),
                _ => p9_reduced(c, t),
            };
            match run(first) {
                Ok(point) => Ok(Solution {
                    point,
                    method,
                    triple: Some(first),
                    fallback: None,
                    fano_evaluations: None,
                }),
                Err(Error::Degenerate { .. }) => {
                    for t in Triple::all().filter(|&t| t != first && !c.bracket(t.0[0], t.0[1], t.0[2]).is_zero()) {
                        if let Ok(point) = run(t) {
                            return Ok(Solution {
                                point,
                                method,
                                triple: Some(t),
                                fallback: Some(format!("triple {first} gave the zero vector; used {t}")),
                                fano_evaluations: None,
                            });
                        }
                    }
                    let sum = p9_fano(c, FanoMode::Reduced);
                    let point = sum.point().ok_or_else(|| degenerate(c, "every formula gave the zero vector"))?;
                    Ok(Solution {
                        point,
                        method: Method::Fano,
                        triple: None,
                        fallback: Some(format!("every triple gave the zero vector; used {}", Method::Fano)),
                        fano_evaluations: Some(sum.evaluations),
                    })
                }
                Err(e) => Err(e),
            }
        }
        Method::Fano | Method::FanoFull => {
            let mode = if method == Method::Fano {
                FanoMode::Reduced
            } else {
                FanoMode::Full
            };
            let sum = p9_fano(c, mode);
            let point = sum
                .point()
                .ok_or_else(|| degenerate(c, "the Fano sum is the zero vector"))?;
            Ok(Solution {
                point,
                method,
                triple: None,
                fallback: None,
                fano_evaluations: Some(sum.evaluations),
            })
        }
        Method::CrossRatio => {
            let sol = p9_cross_ratio(c)?;
            let fallback = (!sol.is_identity_labeling())
                .then(|| format!("relabeled points as {:?}", sol.labeling.map(|k| k + 1)));
            Ok(Solution {
                point: sol.point,
                method,
                triple: None,
                fallback,
                fano_evaluations: None,
            })
        }
    }
}

fn degenerate(c: &Config8, reason: &str) -> Error {
    Error::Degenerate {
        reason: reason.to_string(),
        report: Box::new(c.degeneracy().clone()),
    }
}

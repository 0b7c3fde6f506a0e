//! Request handling shared by the CLI and the HTTP service.
//!
//! The `result` part of a response is a pure function of the request;
//! wall-clock data lives in `meta` and is excluded from determinism checks.

use std::time::Instant;

use cb_core::cbpoint::{
    certify_p9, cubic_pencil_basis, p9_fano, Certification, DegeneracyReport, FanoMode, Triple,
};
use cb_core::exact::format_rat;
use cb_core::{compute_p9, Config8, Error, Method};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::document::{config_from_value, DocumentError};

/// A compute request: a points document plus method options.
#[derive(Clone, Debug)]
pub struct ComputeRequest {
    pub config: Config8,
    pub method: Method,
    pub triple: Option<Triple>,
}

#[derive(Deserialize)]
struct Options {
    method: Option<String>,
    triple: Option<Vec<usize>>,
}

impl ComputeRequest {
    /// Parses `{"points": [...], "method": "det", "triple": [1, 2, 3]}`.
    pub fn from_value(v: &Value) -> Result<Self, DocumentError> {
        let config = config_from_value(v)?;
        let opts: Options = serde_json::from_value(v.clone()).map_err(|e| DocumentError {
            field: "$".into(),
            message: e.to_string(),
        })?;
        let method = match opts.method.as_deref() {
            None => Method::Det,
            Some(name) => Method::parse(name).ok_or_else(|| DocumentError {
                field: "method".into(),
                message: format!("unknown method {name:?}; expected det|reduced|fano|fano-full|crossratio"),
            })?,
        };
        let triple = opts.triple.map(|t| parse_triple(&t)).transpose()?;
        Ok(ComputeRequest {
            config,
            method,
            triple,
        })
    }
}

fn parse_triple(t: &[usize]) -> Result<Triple, DocumentError> {
    let err = |message: String| DocumentError {
        field: "triple".into(),
        message,
    };
    match t {
        [i, j, k] => Triple::new(*i, *j, *k).map_err(|e| err(e.to_string())),
        _ => Err(err(format!("expected 3 labels, found {}", t.len()))),
    }
}

/// Parses a `--triple` value such as `1,2,3`.
pub fn parse_triple_arg(s: &str) -> Result<Triple, String> {
    let labels: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| format!("invalid label {x:?}")))
        .collect::<Result<_, _>>()?;
    parse_triple(&labels).map_err(|e| e.message)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counters {
    pub fano_evaluations: Option<u64>,
}

/// The deterministic part of a compute response.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComputeResult {
    pub method: Method,
    pub method_used: Option<Method>,
    pub triple: Option<[usize; 3]>,
    pub p9: Option<[String; 3]>,
    pub fallback: Option<String>,
    pub general_position: bool,
    pub degeneracy: DegeneracyReport,
    /// Why no point was produced.
    pub failure: Option<String>,
    /// For Fano methods on degenerate input: whether the sum is the zero vector.
    pub fano_zero_vector: Option<bool>,
    pub cubic_basis: Option<[[String; 10]; 2]>,
    pub certification: Option<Certification>,
    pub counters: Counters,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Meta {
    pub elapsed_micros: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComputeResponse {
    pub result: ComputeResult,
    pub meta: Meta,
}

fn coords(p: &cb_core::ProjPoint) -> [String; 3] {
    p.coords().map(format_rat)
}

pub fn handle_compute(req: &ComputeRequest) -> ComputeResponse {
    let start = Instant::now();
    let c = &req.config;
    let report = c.degeneracy().clone();
    let cubic_basis = cubic_pencil_basis(c)
        .ok()
        .map(|b| b.map(|cubic| cubic.coeffs.clone().map(|x| format_rat(&x))));
    let mut result = ComputeResult {
        method: req.method,
        method_used: None,
        triple: None,
        p9: None,
        fallback: None,
        general_position: report.is_empty(),
        degeneracy: report.clone(),
        failure: None,
        fano_zero_vector: None,
        cubic_basis,
        certification: None,
        counters: Counters {
            fano_evaluations: None,
        },
    };
    if !report.is_empty() {
        result.failure = Some(format!("degenerate configuration: {}", report.summary()));
        if matches!(req.method, Method::Fano | Method::FanoFull) {
            let mode = if req.method == Method::Fano {
                FanoMode::Reduced
            } else {
                FanoMode::Full
            };
            let sum = p9_fano(c, mode);
            result.fano_zero_vector = Some(sum.is_zero());
            result.counters.fano_evaluations = Some(sum.evaluations);
        }
    } else {
        match compute_p9(c, req.method, req.triple) {
            Ok(sol) => {
                result.method_used = Some(sol.method);
                result.triple = sol.triple.map(|t| t.0);
                result.fallback = sol.fallback;
                result.counters.fano_evaluations = sol.fano_evaluations;
                result.certification = certify_p9(c, &sol.point).ok();
                result.p9 = Some(coords(&sol.point));
            }
            Err(e) => result.failure = Some(e.to_string()),
        }
    }
    ComputeResponse {
        result,
        meta: Meta {
            elapsed_micros: start.elapsed().as_micros(),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegeneracyResponse {
    pub general_position: bool,
    pub summary: String,
    pub degeneracy: DegeneracyReport,
}

pub fn handle_degeneracy(c: &Config8) -> DegeneracyResponse {
    let report = c.degeneracy().clone();
    DegeneracyResponse {
        general_position: report.is_empty(),
        summary: report.summary(),
        degeneracy: report,
    }
}

/// Body of a 400 response.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorBody {
    pub error: DocumentError,
}

/// Whether the error signals degenerate input rather than a usage problem.
pub fn is_degenerate(e: &Error) -> bool {
    matches!(
        e,
        Error::Degenerate { .. } | Error::DegenerateCrossRatio(_) | Error::ZeroPoint | Error::Singular
    )
}

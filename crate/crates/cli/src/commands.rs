//! Subcommand definitions and their text/JSON output.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use cb_core::cbpoint::{p9_fano, FanoMode};
use cb_core::sample::random_nondegenerate_config;
use cb_core::tropical::{newton_support, newton_vertex_count, support_points, valuation_agreement, Factor};
use cb_core::verify::{run_identity_suite, Identity, Status};
use cb_core::{compute_p9, Error, Method};
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::api::{handle_compute, parse_triple_arg, ComputeRequest, ComputeResult};
use crate::document::parse_document;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DEGENERATE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cbpoint", version, about = "Exact Cayley-Bacharach ninth point of eight plane points")]
#[command(arg_required_else_help = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the ninth point of the eight points in a JSON file.
    Compute {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value = "det", value_parser = ["det", "reduced", "fano", "fano-full", "crossratio"])]
        method: String,
        /// Index triple for det/reduced, e.g. 1,2,3.
        #[arg(long)]
        triple: Option<String>,
        /// Print the deterministic JSON result instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Check an identity at random integer specializations.
    Verify {
        /// Identity name, or "all".
        #[arg(long)]
        which: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, env = "CB_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        bound: i64,
        #[arg(long)]
        json: bool,
    },
    /// Compare p-adic valuations with tropical predictions.
    Trop {
        #[arg(long, default_value_t = 2)]
        prime: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, env = "CB_SEED", default_value_t = 0)]
        seed: u64,
        /// Range of the unit part `r + p k`, `k in [0, bound]`.
        #[arg(long, default_value_t = 3)]
        bound: i64,
        #[arg(long)]
        json: bool,
    },
    /// Newton polytope vertex count of a specialized factor.
    Newton {
        #[arg(long, value_parser = ["Cx", "Cy", "Cz", "Dx", "Dy", "Dz"])]
        poly: String,
        /// Also print the support as exponent arrays.
        #[arg(long)]
        json: bool,
    },
    /// Time every method on a seeded corpus and check the Fano counters.
    Bench {
        #[arg(long, default_value_t = 3)]
        configs: usize,
        #[arg(long, env = "CB_SEED", default_value_t = 7)]
        seed: u64,
    },
    /// Serve the JSON API on localhost.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

/// What a command printed and how it ended.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome {
            stderr: format!("error: {msg}\n"),
            code: EXIT_USAGE,
            ..Default::default()
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn core_error(e: Error) -> Outcome {
    match e {
        Error::InvalidArgument(_) | Error::UnknownIdentity(_) | Error::BadTriple(_) => Outcome::usage(e),
        other => Outcome {
            stderr: format!("error: {other}\n"),
            code: EXIT_DEGENERATE,
            ..Default::default()
        },
    }
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Compute {
            points,
            method,
            triple,
            json,
        } => compute(&points, &method, triple.as_deref(), json),
        Command::Verify {
            which,
            trials,
            seed,
            bound,
            json,
        } => verify(&which, trials, seed, bound, json),
        Command::Trop {
            prime,
            trials,
            seed,
            bound,
            json,
        } => trop(prime, trials, seed, bound, json),
        Command::Newton { poly, json } => newton(&poly, json),
        Command::Bench { configs, seed } => bench(configs, seed),
        Command::Serve { port } => serve(port),
    }
}

fn render_compute(r: &ComputeResult) -> String {
    let mut s = String::new();
    match &r.p9 {
        Some([x, y, z]) => {
            writeln!(s, "p9 = ({x} : {y} : {z})").unwrap();
            let used = r.method_used.unwrap_or(r.method);
            writeln!(s, "method = {used}").unwrap();
            if let Some([i, j, k]) = r.triple {
                writeln!(s, "triple = ({i},{j},{k})").unwrap();
            }
            if let Some(f) = &r.fallback {
                writeln!(s, "fallback = {f}").unwrap();
            }
            let certified = r.certification.as_ref().is_some_and(|c| c.certified);
            writeln!(s, "certification = {certified}").unwrap();
        }
        None => {
            writeln!(s, "{}", r.failure.as_deref().unwrap_or("no point")).unwrap();
            let d = &r.degeneracy;
            for [i, j] in &d.coincident_pairs {
                writeln!(s, "coincident pair ({i},{j})").unwrap();
            }
            for [i, j, k] in &d.collinear_triples {
                writeln!(s, "collinear triple ({i},{j},{k})").unwrap();
            }
            for six in &d.coconic_sextuples {
                let labels: Vec<String> = six.iter().map(|l| l.to_string()).collect();
                writeln!(s, "coconic sextuple ({})", labels.join(",")).unwrap();
            }
            if let Some(z) = r.fano_zero_vector {
                writeln!(s, "fano zero vector = {z}").unwrap();
            }
        }
    }
    if let Some(f) = r.counters.fano_evaluations {
        writeln!(s, "fano evaluations = {f}").unwrap();
    }
    if let Some(basis) = &r.cubic_basis {
        for (n, cubic) in basis.iter().enumerate() {
            writeln!(s, "cubic {} = [{}]", n + 1, cubic.join(", ")).unwrap();
        }
    }
    s
}

fn compute(path: &PathBuf, method: &str, triple: Option<&str>, as_json: bool) -> Outcome {
    let method = Method::parse(method).expect("clap restricts the values");
    let triple = match triple.map(parse_triple_arg).transpose() {
        Ok(t) => t,
        Err(e) => return Outcome::usage(format!("--triple: {e}")),
    };
    if triple.is_some() && !matches!(method, Method::Det | Method::Reduced) {
        return Outcome::usage("--triple applies to det and reduced only");
    }
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Outcome::usage(format!("{}: {e}", path.display())),
    };
    let config = match parse_document(&text) {
        Ok(c) => c,
        Err(e) => return Outcome::usage(format!("{}: {e}", path.display())),
    };
    let resp = handle_compute(&ComputeRequest {
        config,
        method,
        triple,
    });
    let r = resp.result;
    Outcome {
        stdout: if as_json { json(&r) } else { render_compute(&r) },
        stderr: String::new(),
        code: if r.p9.is_some() { EXIT_OK } else { EXIT_DEGENERATE },
    }
}

fn verify(which: &str, trials: usize, seed: u64, bound: i64, as_json: bool) -> Outcome {
    let identities = if which == "all" {
        Identity::ALL.to_vec()
    } else {
        match Identity::parse(which) {
            Ok(i) => vec![i],
            Err(e) => return core_error(e),
        }
    };
    let mut reports = Vec::new();
    for i in identities {
        match run_identity_suite(i, trials, seed, bound) {
            Ok(r) => reports.push(r),
            Err(e) => return core_error(e),
        }
    }
    let pass = reports.iter().all(|r| r.status == Status::Pass);
    let stdout = if as_json {
        if reports.len() == 1 {
            json(&reports[0])
        } else {
            json(&reports)
        }
    } else {
        let mut s = String::new();
        for r in &reports {
            let status = if r.status == Status::Pass { "pass" } else { "FAIL" };
            writeln!(
                s,
                "{}: {status} ({} trials, seed {}, bound {}, {} rejected draws)",
                r.identity, r.trials, r.seed, r.bound, r.rejected
            )
            .unwrap();
            for n in &r.notes {
                writeln!(s, "  note: {n}").unwrap();
            }
            for f in &r.failures {
                writeln!(s, "  trial {}: {}", f.trial, f.detail).unwrap();
            }
        }
        s
    };
    Outcome {
        stdout,
        stderr: String::new(),
        code: if pass { EXIT_OK } else { EXIT_DEGENERATE },
    }
}

fn trop(prime: u64, trials: usize, seed: u64, bound: i64, as_json: bool) -> Outcome {
    let report = match valuation_agreement(prime, trials, seed, bound) {
        Ok(r) => r,
        Err(e) => return core_error(e),
    };
    let sound = report.is_sound();
    let stdout = if as_json {
        json(&report)
    } else {
        let mut s = String::new();
        writeln!(s, "prime = {}", report.prime).unwrap();
        writeln!(s, "trials = {} (seed {}, bound {}, {} rejected draws)", report.trials, report.seed, report.bound, report.rejected).unwrap();
        writeln!(s, "agreements = {}", report.agreements).unwrap();
        writeln!(s, "cancellation events = {}", report.cancellations).unwrap();
        writeln!(s, "all six minimizers unique = {}", report.all_unique).unwrap();
        writeln!(s, "unique factor minimizers = {} of {}", report.unique_factors, 6 * report.trials).unwrap();
        writeln!(s, "unique but disagreeing = {}", report.unique_disagreements).unwrap();
        writeln!(s, "soundness violations = {}", report.violations).unwrap();
        writeln!(s, "sound = {sound}").unwrap();
        s
    };
    Outcome {
        stdout,
        stderr: String::new(),
        code: if sound { EXIT_OK } else { EXIT_DEGENERATE },
    }
}

#[derive(Serialize)]
struct NewtonOutput {
    poly: &'static str,
    monomials: usize,
    vertices: usize,
    support: Vec<Vec<i64>>,
}

fn newton(poly: &str, as_json: bool) -> Outcome {
    let f = match Factor::parse(poly) {
        Ok(f) => f,
        Err(e) => return core_error(e),
    };
    let support = support_points(&newton_support(f));
    let vertices = newton_vertex_count(&support);
    let out = NewtonOutput {
        poly: f.name(),
        monomials: support.len(),
        vertices,
        support,
    };
    let stdout = if as_json {
        json(&out)
    } else {
        format!("poly = {}\nmonomials = {}\nvertices = {}\n", out.poly, out.monomials, out.vertices)
    };
    Outcome {
        stdout,
        ..Default::default()
    }
}

fn bench(configs: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = String::new();
    let mut ok = true;
    for n in 0..configs {
        let c = match random_nondegenerate_config(&mut rng, 50) {
            Ok(c) => c,
            Err(e) => return core_error(e),
        };
        writeln!(s, "config {n}").unwrap();
        for method in [Method::Det, Method::Reduced, Method::CrossRatio] {
            let start = Instant::now();
            let r = compute_p9(&c, method, None);
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let status = if r.is_ok() { "ok" } else { "failed" };
            ok &= r.is_ok();
            writeln!(s, "  {method:<10} {ms:>10.3} ms  {status}").unwrap();
        }
        let mut sums = Vec::new();
        for (mode, expected) in [(FanoMode::Reduced, 2880u64), (FanoMode::Full, 40320)] {
            let start = Instant::now();
            let sum = p9_fano(&c, mode);
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let counted = sum.evaluations == expected;
            ok &= counted;
            let name = if mode == FanoMode::Reduced { "fano" } else { "fano-full" };
            writeln!(
                s,
                "  {name:<10} {ms:>10.3} ms  {} evaluations (expected {expected})",
                sum.evaluations
            )
            .unwrap();
            sums.push(sum.point());
        }
        let same = sums[0] == sums[1] && sums[0].is_some();
        ok &= same;
        writeln!(s, "  fano reduced == full: {same}").unwrap();
    }
    writeln!(s, "counts {}", if ok { "ok" } else { "MISMATCH" }).unwrap();
    Outcome {
        stdout: s,
        stderr: String::new(),
        code: if ok { EXIT_OK } else { EXIT_DEGENERATE },
    }
}

fn serve(port: u16) -> Outcome {
    let rt = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => return Outcome::usage(e),
    };
    match rt.block_on(crate::server::serve(port)) {
        Ok(()) => Outcome::default(),
        Err(e) => Outcome::usage(format!("serve on port {port}: {e}")),
    }
}

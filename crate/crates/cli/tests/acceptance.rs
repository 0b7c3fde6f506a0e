//! Acceptance suite: one line per criterion, exact equality throughout.
//!
//! Runs as a plain binary (`harness = false`) so the report is always
//! printed. Exits nonzero if any criterion fails; a criterion that exceeds
//! its time budget is reported as skipped with the reason.

use std::process::Command;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use cb_cli::api::{handle_compute, ComputeRequest};
use cb_core::cbpoint::{
    certify_p9, cubic_pencil_basis, p9_cross_ratio, p9_determinantal, p9_fano, p9_raw, p9_reduced,
    FanoMode, Triple,
};
use cb_core::exact::{rat, Rat};
use cb_core::projective::{
    conic_bracket_expansion, conic_det, cross_ratio_conics, cross_ratio_lines,
    singular_cubic_bracket_expansion, singular_cubic_det,
};
use cb_core::sample::{random_config, random_nondegenerate_config, random_transform, trial_rng};
use cb_core::tropical::{newton_support, newton_vertex_count, support_points, valuation_agreement, Factor};
use cb_core::verify::{assertion_uv, run_identity_suite, Identity, SpecializedConfig, Status};
use cb_core::{Config8, Method, ProjPoint};
use num_traits::{One, Zero};
use rand::Rng;

const SEED: u64 = 20_240_917;

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

// ---------------------------------------------------------------------------
// Test-side oracles: plain Gaussian elimination and hand-written monomial rows,
// sharing no code with the determinant routines under test.

fn gauss(mut rows: Vec<Vec<Rat>>) -> (Rat, usize) {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    let mut det = Rat::one();
    let mut rank = 0;
    for col in 0..m {
        let Some(p) = (rank..n).find(|&r| !rows[r][col].is_zero()) else {
            det = Rat::zero();
            continue;
        };
        if p != rank {
            rows.swap(p, rank);
            det = -det;
        }
        let pivot = rows[rank][col].clone();
        det *= &pivot;
        for r in rank + 1..n {
            if rows[r][col].is_zero() {
                continue;
            }
            let f = &rows[r][col] / &pivot;
            for k in col..m {
                let sub = &f * &rows[rank][k];
                rows[r][k] -= sub;
            }
        }
        rank += 1;
        if rank == n {
            break;
        }
    }
    if rank < n || n != m {
        det = Rat::zero();
    }
    (det, rank)
}

fn det(rows: Vec<Vec<Rat>>) -> Rat {
    gauss(rows).0
}

fn rank(rows: Vec<Vec<Rat>>) -> usize {
    gauss(rows).1
}

fn quad_row(p: &ProjPoint) -> Vec<Rat> {
    let (x, y, z) = (p.x(), p.y(), p.z());
    vec![x * x, x * y, x * z, y * y, y * z, z * z]
}

fn cubic_row(p: &ProjPoint) -> Vec<Rat> {
    let (x, y, z) = (p.x(), p.y(), p.z());
    vec![
        x * x * x,
        x * x * y,
        x * x * z,
        x * y * y,
        x * y * z,
        x * z * z,
        y * y * y,
        y * y * z,
        y * z * z,
        z * z * z,
    ]
}

fn jacobian_rows(p: &ProjPoint) -> Vec<Vec<Rat>> {
    let (x, y, z) = (p.x(), p.y(), p.z());
    let (zero, two, three) = (Rat::zero(), rat(2), rat(3));
    vec![
        vec![&three * x * x, &two * x * y, &two * x * z, y * y, y * z, z * z, zero.clone(), zero.clone(), zero.clone(), zero.clone()],
        vec![zero.clone(), x * x, zero.clone(), &two * x * y, x * z, zero.clone(), &three * y * y, &two * y * z, z * z, zero.clone()],
        vec![zero.clone(), zero.clone(), x * x, zero.clone(), x * y, &two * x * z, zero.clone(), y * y, &two * y * z, &three * z * z],
    ]
}

fn oracle_conic(p: [&ProjPoint; 6]) -> Rat {
    det(p.iter().map(|q| quad_row(q)).collect())
}

fn oracle_singular_cubic(p1: &ProjPoint, rest: [&ProjPoint; 7]) -> Rat {
    let mut rows: Vec<Vec<Rat>> = rest.iter().map(|q| cubic_row(q)).collect();
    rows.extend(jacobian_rows(p1));
    det(rows)
}

fn oracle_bracket(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> Rat {
    det(vec![a.to_vec().to_vec(), b.to_vec().to_vec(), c.to_vec().to_vec()])
}

fn pts<const N: usize>(c: &Config8, labels: [usize; N]) -> [&ProjPoint; N] {
    labels.map(|l| c.p(l))
}

fn suite(which: Identity, trials: usize, seed: u64, bound: i64) -> Result<String, String> {
    match run_identity_suite(which, trials, seed, bound) {
        Ok(r) if r.status == Status::Pass => Ok(format!("{} {} trials pass", r.identity, r.trials)),
        Ok(r) => Err(format!("{}: {} failures, first {:?}", r.identity, r.failures.len(), r.failures.first())),
        Err(e) => Err(format!("{}: {e}", which.name())),
    }
}

// ---------------------------------------------------------------------------

struct Corpus {
    configs: Vec<Config8>,
    points: Vec<ProjPoint>,
}

fn criterion_1(corpus: &mut Corpus) -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    for t in 0..200 {
        let c = match random_nondegenerate_config(&mut trial_rng(SEED, t), 50) {
            Ok(c) => c,
            Err(e) => return Verdict::Fail(format!("sampler: {e}")),
        };
        let det = p9_determinantal(&c, Triple::FIRST);
        let reduced = p9_reduced(&c, Triple::FIRST);
        let cross = p9_cross_ratio(&c).map(|s| s.point);
        let fano = p9_fano(&c, FanoMode::Reduced);
        let (Ok(det), Ok(reduced), Ok(cross)) = (det, reduced, cross) else {
            failures.push(format!("config {t}: a formula failed"));
            continue;
        };
        let mut agree = det == reduced && det == cross && fano.point().as_ref() == Some(&det);
        if t < 20 {
            let full = p9_fano(&c, FanoMode::Full);
            agree &= full.vector == fano.vector && full.evaluations == 40320;
        }
        if !agree {
            failures.push(format!("config {t}: methods disagree"));
        }
        corpus.points.push(det);
        corpus.configs.push(c);
    }
    let secs = start.elapsed().as_secs_f64();
    let detail = format!("200 configs in [-50, 50], 4 methods, full Fano on 20, {secs:.1} s (target 600 s)");
    if failures.is_empty() && secs <= 600.0 {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(format!("{detail}; {failures:?}"))
    }
}

fn criterion_2(corpus: &Corpus) -> Verdict {
    let mut bad = Vec::new();
    for (n, (c, p)) in corpus.configs.iter().zip(&corpus.points).enumerate() {
        let certified = certify_p9(c, p).map(|r| r.certified).unwrap_or(false);
        let on_basis = cubic_pencil_basis(c)
            .map(|b| b.iter().all(|cubic| cubic.vanishes_at(p)))
            .unwrap_or(false);
        let mut stack: Vec<Vec<Rat>> = c.points().iter().map(cubic_row).collect();
        let eight = rank(stack.clone());
        stack.push(cubic_row(p));
        let nine = rank(stack);
        if !(certified && on_basis && eight == 8 && nine <= 8) {
            bad.push(n);
        }
    }
    if bad.is_empty() {
        Verdict::Pass(format!(
            "{} points certified; oracle rank of the 9x10 stack <= 8 and of the 8x10 stack = 8",
            corpus.points.len()
        ))
    } else {
        Verdict::Fail(format!("not certified: {bad:?}"))
    }
}

fn criterion_3(corpus: &Corpus) -> Verdict {
    let mut checked = 0;
    let mut bad = Vec::new();
    for (n, (c, p)) in corpus.configs.iter().zip(&corpus.points).enumerate() {
        let lines = cross_ratio_lines(p, pts(c, [5, 6, 7, 8]));
        let conics = cross_ratio_conics(pts(c, [1, 2, 3, 4]), pts(c, [5, 6, 7, 8]));
        if let (Ok(a), Ok(b)) = (lines, conics) {
            checked += 1;
            if a != b {
                bad.push(n);
            }
        }
    }
    match (bad.is_empty(), checked >= 100) {
        (true, true) => Verdict::Pass(format!("(5,6,7,8)_9 = (5,6,7,8)_1234 at {checked} points")),
        _ => Verdict::Fail(format!("{checked} defined, mismatches {bad:?}")),
    }
}

fn criterion_4() -> Verdict {
    let mut bad = 0;
    for t in 0..100 {
        let c = random_config(&mut trial_rng(SEED + 4, t), 50);
        let six = pts(&c, [1, 2, 3, 4, 5, 6]);
        let d = conic_det(six);
        if d != conic_bracket_expansion(six) || d != oracle_conic(six) {
            bad += 1;
        }
    }
    match suite(Identity::ConicExpansion, 100, SEED + 4, 50) {
        Ok(s) if bad == 0 => Verdict::Pass(format!("100 sextuples match the oracle determinant; {s}")),
        Ok(s) => Verdict::Fail(format!("{bad} oracle mismatches; {s}")),
        Err(e) => Verdict::Fail(e),
    }
}

fn criterion_5() -> Verdict {
    let mut bad = 0;
    for t in 0..50 {
        let c = random_config(&mut trial_rng(SEED + 5, t), 50);
        let d = singular_cubic_det(c.p(7), pts(&c, [1, 2, 3, 4, 5, 6, 8]));
        let oracle = oracle_singular_cubic(c.p(7), pts(&c, [1, 2, 3, 4, 5, 6, 8]));
        if d != singular_cubic_bracket_expansion(&c) || d != oracle {
            bad += 1;
        }
    }
    match suite(Identity::CubicExpansion, 50, SEED + 5, 50) {
        Ok(s) if bad == 0 => Verdict::Pass(format!("50 configs match the 54-bracket expansion and the oracle; {s}")),
        Ok(s) => Verdict::Fail(format!("{bad} mismatches; {s}")),
        Err(e) => Verdict::Fail(e),
    }
}

fn criterion_6() -> Verdict {
    let mut bad = 0;
    for t in 0..100 {
        let mut rng = trial_rng(SEED + 6, t);
        let c = random_config(&mut rng, 20);
        let tr = random_transform(&mut rng, 10);
        let tc = c.transformed(&tr);
        let d = tr.det().clone();
        let c_ok = oracle_conic(pts(&tc, [1, 2, 3, 4, 5, 6]))
            == num_traits::pow(d.clone(), 4) * oracle_conic(pts(&c, [1, 2, 3, 4, 5, 6]));
        let d_ok = oracle_singular_cubic(tc.p(7), pts(&tc, [1, 2, 3, 4, 5, 6, 8]))
            == num_traits::pow(d.clone(), 9) * oracle_singular_cubic(c.p(7), pts(&c, [1, 2, 3, 4, 5, 6, 8]));
        if !(c_ok && d_ok) {
            bad += 1;
        }
    }
    let suites = suite(Identity::EquivarianceC, 100, SEED + 6, 20)
        .and_then(|a| suite(Identity::EquivarianceD, 100, SEED + 6, 20).map(|b| format!("{a}; {b}")));
    match suites {
        Ok(s) if bad == 0 => Verdict::Pass(format!("C ~ det(T)^4, D ~ det(T)^9 for 100 transforms; {s}")),
        Ok(s) => Verdict::Fail(format!("{bad} oracle mismatches; {s}")),
        Err(e) => Verdict::Fail(e),
    }
}

fn criterion_7() -> Verdict {
    let mut bad = 0;
    for t in 0..50 {
        let mut rng = trial_rng(SEED + 7, t);
        let Ok(c) = random_nondegenerate_config(&mut rng, 50) else {
            return Verdict::Fail("sampler exhausted".into());
        };
        let raw = p9_raw(&c, Triple::FIRST);
        let b = oracle_bracket(c.p(1), c.p(2), c.p(3));
        if !raw.iter().all(|x| (x / &b).is_integer()) {
            bad += 1;
        }
        // degree 9 in P1 for the raw vector
        let lambda = rat(rng.gen_range(2..=9));
        let scaled = c.with_point(1, c.p(1).scaled(&lambda).unwrap());
        let f = num_traits::pow(lambda, 9);
        if p9_raw(&scaled, Triple::FIRST).iter().zip(&raw).any(|(a, r)| *a != r * &f) {
            bad += 1;
        }
    }
    let suites = suite(Identity::Divisibility, 50, SEED + 7, 50)
        .and_then(|a| suite(Identity::Multidegree, 50, SEED + 7, 50).map(|b| format!("{a}; {b}")));
    match suites {
        Ok(s) if bad == 0 => Verdict::Pass(format!("[123] divides every coordinate on 50 configs; {s}")),
        Ok(s) => Verdict::Fail(format!("{bad} oracle failures; {s}")),
        Err(e) => Verdict::Fail(e),
    }
}

fn criterion_8() -> Verdict {
    // the ten identities say every 9x9 minor of the 9x10 matrix vanishes at
    // (u, v), i.e. the matrix with last row (1 : u : v) has rank <= 8
    let mut bad = 0;
    let mut checked = 0;
    let mut t = 0;
    while checked < 50 {
        let mut rng = trial_rng(SEED + 8, t);
        t += 1;
        let s = SpecializedConfig::random(&mut rng, 50);
        let c = s.config();
        if !c.degeneracy().is_empty() {
            continue;
        }
        let Some((u, v)) = assertion_uv(&s) else { continue };
        checked += 1;
        let mut rows: Vec<Vec<Rat>> = c.points().iter().map(cubic_row).collect();
        rows.push(cubic_row(&ProjPoint::new(Rat::one(), u, v).unwrap()));
        if rank(rows) > 8 {
            bad += 1;
        }
    }
    match suite(Identity::MinorIdentities, 50, SEED + 8, 50) {
        Ok(s) if bad == 0 => Verdict::Pass(format!("oracle rank <= 8 on 50 specializations; {s}")),
        Ok(s) => Verdict::Fail(format!("{bad} oracle failures; {s}")),
        Err(e) => Verdict::Fail(e),
    }
}

fn criterion_9() -> Verdict {
    let sym = match suite(Identity::FanoSymmetry, 50, SEED + 9, 50) {
        Ok(s) => s,
        Err(e) => return Verdict::Fail(e),
    };
    for t in 0..5 {
        let Ok(c) = random_nondegenerate_config(&mut trial_rng(SEED + 9, 1000 + t), 50) else {
            return Verdict::Fail("sampler exhausted".into());
        };
        let r = p9_fano(&c, FanoMode::Reduced);
        let f = p9_fano(&c, FanoMode::Full);
        if r.evaluations != 2880 || f.evaluations != 40320 || r.vector != f.vector {
            return Verdict::Fail(format!("counts {} / {} or vectors differ", r.evaluations, f.evaluations));
        }
    }
    for t in 0..10 {
        let mut rng = trial_rng(SEED + 9, 2000 + t);
        let c = random_config(&mut rng, 50);
        let (i, j) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        if i == j {
            continue;
        }
        let dup = c.with_point(j, c.p(i).scaled(&rat(rng.gen_range(1..=5))).unwrap());
        for mode in [FanoMode::Reduced, FanoMode::Full] {
            if !p9_fano(&dup, mode).is_zero() {
                return Verdict::Fail(format!("duplicate P{i} = P{j} gave a nonzero vector"));
            }
        }
    }
    Verdict::Pass(format!("{sym}; 2880 vs 40320 evaluations with identical sums; duplicates give the zero vector"))
}

fn criterion_10() -> Verdict {
    match valuation_agreement(2, 100, SEED + 10, 3) {
        Ok(r) => {
            let detail = format!(
                "p = 2, 100 trials: {} agreements, {} cancellation events, {} unique factor minimizers (all equal), {} trials all-unique, {} violations",
                r.agreements, r.cancellations, r.unique_factors, r.all_unique, r.violations
            );
            if r.is_sound() {
                Verdict::Pass(detail)
            } else {
                Verdict::Fail(detail)
            }
        }
        Err(e) => Verdict::Fail(e.to_string()),
    }
}

fn criterion_11() -> Verdict {
    let budget = Duration::from_secs(3600);
    let (tx, rx) = mpsc::channel();
    let start = Instant::now();
    std::thread::spawn(move || {
        let counts: Vec<(Factor, usize)> = Factor::ALL
            .into_iter()
            .map(|f| (f, newton_vertex_count(&support_points(&newton_support(f)))))
            .collect();
        let _ = tx.send(counts);
    });
    match rx.recv_timeout(budget) {
        Ok(counts) => {
            let secs = start.elapsed().as_secs_f64();
            let list: Vec<String> = counts.iter().map(|(f, n)| format!("{}={n}", f.name())).collect();
            if counts.iter().all(|&(_, n)| n == 120) {
                Verdict::Pass(format!("{} vertices, {secs:.1} s (budget 3600 s)", list.join(" ")))
            } else {
                Verdict::Fail(list.join(" "))
            }
        }
        Err(_) => Verdict::Skip("vertex counting exceeded the 1 hour budget".into()),
    }
}

fn cbpoint(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_cbpoint"))
        .args(args)
        .env_remove("CB_SEED")
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

fn criterion_12(corpus: &Corpus) -> Verdict {
    let dir = std::env::temp_dir().join(format!("cb-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("points.json");
    let doc = cb_cli::PointsDocument::from_config(&corpus.configs[0]);
    std::fs::write(&file, serde_json::to_string(&doc).unwrap()).unwrap();
    let f = file.to_str().unwrap();
    let mut runs: Vec<Vec<&str>> = ["det", "reduced", "fano", "fano-full", "crossratio"]
        .iter()
        .map(|m| vec!["compute", "--points", f, "--method", m, "--json"])
        .collect();
    runs.push(vec!["compute", "--points", f]);
    runs.push(vec!["verify", "--which", "cross-method", "--trials", "5", "--seed", "3", "--json"]);
    runs.push(vec!["trop", "--trials", "10", "--seed", "3", "--json"]);
    runs.push(vec!["newton", "--poly", "Dy", "--json"]);
    for args in &runs {
        let a = cbpoint(args);
        let b = cbpoint(args);
        if a != b || a.0 != Some(0) {
            let _ = std::fs::remove_dir_all(&dir);
            return Verdict::Fail(format!("cbpoint {} differs between runs or failed", args.join(" ")));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    for c in corpus.configs.iter().take(10) {
        for method in Method::ALL {
            let req = ComputeRequest {
                config: c.clone(),
                method,
                triple: None,
            };
            let a = serde_json::to_vec(&handle_compute(&req).result).unwrap();
            let b = serde_json::to_vec(&handle_compute(&req).result).unwrap();
            if a != b {
                return Verdict::Fail(format!("service result differs for {method}"));
            }
        }
    }
    Verdict::Pass(format!("{} CLI invocations and 50 service requests byte-identical across runs", runs.len()))
}

fn main() {
    let mut corpus = Corpus {
        configs: Vec::new(),
        points: Vec::new(),
    };
    let start = Instant::now();
    let mut results: Vec<(u32, &str, Verdict)> = Vec::new();
    results.push((1, "cross-method agreement", criterion_1(&mut corpus)));
    results.push((2, "oracle certification", criterion_2(&corpus)));
    results.push((3, "Cayley cross-ratio identity", criterion_3(&corpus)));
    results.push((4, "conic bracket expansion", criterion_4()));
    results.push((5, "singular cubic bracket expansion", criterion_5()));
    results.push((6, "projective equivariance", criterion_6()));
    results.push((7, "divisibility and degrees", criterion_7()));
    results.push((8, "minor identities", criterion_8()));
    results.push((9, "Fano structure", criterion_9()));
    results.push((10, "tropical soundness", criterion_10()));
    results.push((11, "Newton polytope vertices", criterion_11()));
    results.push((12, "determinism", criterion_12(&corpus)));

    let mut failed = 0;
    for (n, name, v) in &results {
        let (tag, detail) = match v {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Verdict::Skip(d) => ("SKIP", d),
        };
        println!("criterion {n:>2} {tag} {name}: {detail}");
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1} s",
        results.iter().filter(|r| matches!(r.2, Verdict::Pass(_))).count(),
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

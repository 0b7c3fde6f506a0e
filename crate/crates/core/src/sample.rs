//! Seeded random inputs for the verification harness, benches and tests.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::exact::rat;
use crate::projective::{Config8, ProjPoint, ProjTransform};

/// Cap on rejected draws before a sampler reports failure.
pub const MAX_REJECTIONS: usize = 10_000;

/// Deterministic per-trial generator derived from a suite seed.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Integer point with coordinates uniform in `[-bound, bound]`, never zero.
pub fn random_point<R: Rng>(rng: &mut R, bound: i64) -> ProjPoint {
    loop {
        let [x, y, z] = [0; 3].map(|_| rng.gen_range(-bound..=bound));
        if (x, y, z) != (0, 0, 0) {
            return ProjPoint::from_ints(x, y, z);
        }
    }
}

/// Eight random integer points; may be degenerate.
pub fn random_config<R: Rng>(rng: &mut R, bound: i64) -> Config8 {
    Config8::new([(); 8].map(|_| random_point(rng, bound)))
}

/// Draws until the configuration has no coincident, collinear or coconic points.
pub fn random_nondegenerate_config<R: Rng>(rng: &mut R, bound: i64) -> Result<Config8> {
    for _ in 0..MAX_REJECTIONS {
        let c = random_config(rng, bound);
        if c.degeneracy().is_empty() {
            return Ok(c);
        }
    }
    Err(Error::SamplerExhausted(MAX_REJECTIONS))
}

/// Random nonsingular integer 3x3 transform with entries in `[-bound, bound]`.
pub fn random_transform<R: Rng>(rng: &mut R, bound: i64) -> ProjTransform {
    loop {
        let rows = [[0i64; 3]; 3].map(|r| r.map(|_| rng.gen_range(-bound..=bound)));
        if let Ok(t) = ProjTransform::from_ints(rows) {
            return t;
        }
    }
}

/// Nonzero integer scale factor in `[-bound, bound]`.
pub fn random_scalar<R: Rng>(rng: &mut R, bound: i64) -> crate::exact::Rat {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 && v != 1 {
            return rat(v);
        }
    }
}

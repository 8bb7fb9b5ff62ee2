use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{Distribution, Tensor, TensorSpec};
use crate::error::Result;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for sample `index` of an ensemble of size `n`. The key depends
/// on `(seed, n)` and the ChaCha stream on `index`, so a sample never
/// depends on how many others are drawn.
pub fn sample_rng(seed: u64, n: usize, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(n as u64)));
    rng.set_stream(index);
    rng
}

fn draw<R: Rng>(dist: Distribution, rng: &mut R) -> Complex64 {
    match dist {
        Distribution::ComplexGaussian => {
            let x: f64 = rng.sample(StandardNormal);
            let y: f64 = rng.sample(StandardNormal);
            Complex64::new(x, y) * std::f64::consts::FRAC_1_SQRT_2
        }
        Distribution::ComplexRademacher => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let re = if rng.random::<bool>() { s } else { -s };
            let im = if rng.random::<bool>() { s } else { -s };
            Complex64::new(re, im)
        }
        Distribution::UniformDisc => {
            let r = (2.0 * rng.random::<f64>()).sqrt();
            let theta = std::f64::consts::TAU * rng.random::<f64>();
            Complex64::from_polar(r, theta)
        }
    }
}

/// Sample 0 of the ensemble.
pub fn sample_tensor(spec: &TensorSpec) -> Result<Tensor> {
    sample_tensor_at(spec, 0)
}

pub fn sample_tensor_at(spec: &TensorSpec, index: u64) -> Result<Tensor> {
    let dims = spec.dims()?;
    let len: usize = dims.iter().product();
    let mut rng = sample_rng(spec.ensemble.seed, spec.n, index);
    let dist = spec.ensemble.distribution;
    let data = (0..len).map(|_| draw(dist, &mut rng)).collect();
    Tensor::from_vec(dims, data)
}

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::network::{InputBox, LayerwiseNetwork, ReducedNetwork};

pub const DEFAULT_SAMPLE_SEED: u64 = 0x5eed_0001;

/// Anything with an input/output map that can be compared to a full network.
pub trait Approximant: Sync {
    fn output(&self, x: &DVector<f64>) -> Result<DVector<f64>>;
}

impl Approximant for LayerwiseNetwork {
    fn output(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        LayerwiseNetwork::output(self, x)
    }
}

impl Approximant for ReducedNetwork {
    fn output(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        ReducedNetwork::output(self, x)
    }
}

/// Point set used to estimate the worst-case error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampler {
    /// Tensor grid with `⌈n^{1/n_x}⌉` points per axis, endpoints included.
    Grid(usize),
    /// `n` uniform points from a seeded ChaCha8 stream.
    Uniform { n: usize, seed: u64 },
}

impl Sampler {
    /// 10⁴-point grid in one dimension, 10⁵ seeded uniform points otherwise.
    pub fn default_for(dim: usize) -> Self {
        if dim == 1 {
            Sampler::Grid(10_000)
        } else {
            Sampler::Uniform { n: 100_000, seed: DEFAULT_SAMPLE_SEED }
        }
    }

    pub fn points(&self, bx: &InputBox) -> Result<Vec<DVector<f64>>> {
        bx.validate()?;
        let dim = bx.dim();
        let pts: Vec<DVector<f64>> = match *self {
            Sampler::Grid(n) => {
                if n == 0 {
                    return Err(Error::EmptySample);
                }
                let mut k = (n as f64).powf(1.0 / dim as f64).ceil() as usize;
                // Guard against powf rounding up an exact power.
                if k > 1 && (k - 1).checked_pow(dim as u32).is_some_and(|p| p >= n) {
                    k -= 1;
                }
                let axis = |i: usize, t: usize| {
                    if k == 1 {
                        0.5 * (bx.lower[i] + bx.upper[i])
                    } else {
                        bx.lower[i] + (bx.upper[i] - bx.lower[i]) * t as f64 / (k - 1) as f64
                    }
                };
                let total = k.pow(dim as u32);
                (0..total)
                    .map(|mut flat| {
                        DVector::from_fn(dim, |i, _| {
                            let t = flat % k;
                            flat /= k;
                            axis(i, t)
                        })
                    })
                    .collect()
            }
            Sampler::Uniform { n, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..n)
                    .map(|_| {
                        DVector::from_fn(dim, |i, _| {
                            let (lo, hi) = (bx.lower[i], bx.upper[i]);
                            if lo == hi {
                                lo
                            } else {
                                rng.random_range(lo..=hi)
                            }
                        })
                    })
                    .collect()
            }
        };
        if pts.is_empty() {
            return Err(Error::EmptySample);
        }
        Ok(pts)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorstError {
    /// `max ‖f(x) − g(x)‖²` over the samples.
    pub q: f64,
    pub x_star: DVector<f64>,
}

/// Largest squared output error over the sampler's points. Evaluation runs
/// in parallel; the first maximiser in sample order is reported.
pub fn empirical_worst_error(
    full: &LayerwiseNetwork,
    approx: &dyn Approximant,
    bx: &InputBox,
    sampler: Sampler,
) -> Result<WorstError> {
    let pts = sampler.points(bx)?;
    let errs: Vec<f64> = pts
        .par_iter()
        .map(|x| {
            let e = (full.output(x)? - approx.output(x)?).norm_squared();
            // A non-finite output counts as an unbounded error.
            Ok(if e.is_nan() { f64::INFINITY } else { e })
        })
        .collect::<Result<_>>()?;
    let (idx, q) = errs
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, e)| if e > best.1 { (i, e) } else { best });
    Ok(WorstError { q, x_star: pts[idx].clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_has_endpoints_and_expected_size() {
        let bx = InputBox::uniform(2, -1.0, 1.0).unwrap();
        let pts = Sampler::Grid(100).points(&bx).unwrap();
        assert_eq!(pts.len(), 100);
        assert!(pts.iter().all(|p| bx.contains(p)));
        assert_eq!(pts[0].as_slice(), &[-1.0, -1.0]);
        assert_eq!(pts[99].as_slice(), &[1.0, 1.0]);
        assert_eq!(Sampler::Grid(1000).points(&InputBox::uniform(3, 0.0, 1.0).unwrap()).unwrap().len(), 1000);
    }

    #[test]
    fn uniform_is_seeded_and_inside() {
        let bx = InputBox::new(vec![0.0, -5.0], vec![1.0, 5.0]).unwrap();
        let a = Sampler::Uniform { n: 50, seed: 7 }.points(&bx).unwrap();
        let b = Sampler::Uniform { n: 50, seed: 7 }.points(&bx).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|p| bx.contains(p)));
        assert!(Sampler::Uniform { n: 0, seed: 7 }.points(&bx).is_err());
    }
}

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::network::{ActivationKind, Layer, LayerwiseNetwork};

pub const EXAMPLE1_SEED: u64 = 2021;

/// One input, one hidden ReLU layer of width 10, one output; every weight
/// and bias drawn from `N(0, 1)` with a seeded ChaCha8 stream (row-major,
/// `W⁰, b⁰, W¹, b¹`).
pub fn make_example1_network(seed: u64) -> LayerwiseNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |r: usize, c: usize| {
        let v: Vec<f64> = (0..r * c).map(|_| StandardNormal.sample(&mut rng)).collect();
        DMatrix::from_row_slice(r, c, &v)
    };
    let w0 = draw(10, 1);
    let b0 = draw(10, 1).column(0).into_owned();
    let w1 = draw(1, 10);
    let b1 = draw(1, 1).column(0).into_owned();
    LayerwiseNetwork::new(vec![Layer::new(w0, b0), Layer::new(w1, b1)], ActivationKind::Relu)
        .expect("example-1 shapes are consistent")
}

/// Four hidden ReLU layers of width 4 built from `c = cos(2πv)`,
/// `s = sin(2πv)`:
///
/// `W⁰ = c`, `b⁰ = 0`, `Wᵏ = c sᵀ/(k+1)`, `bᵏ = s/(k+1)` (`k = 1..3`),
/// `W⁴ = sᵀ`, `b⁴ = 0`.
///
/// `v = (1, …, 5)/4` has five entries but the layers need four; the first
/// four are used, i.e. `v = (1/4, 1/2, 3/4, 1)`.
pub fn make_example2_network() -> LayerwiseNetwork {
    let nk = 4;
    let v: Vec<f64> = (1..=nk).map(|i| i as f64 / nk as f64).collect();
    let c = DVector::from_iterator(nk, v.iter().map(|t| (2.0 * PI * t).cos()));
    let s = DVector::from_iterator(nk, v.iter().map(|t| (2.0 * PI * t).sin()));
    let mut layers = vec![Layer::new(DMatrix::from_column_slice(nk, 1, c.as_slice()), DVector::zeros(nk))];
    for k in 1..=3 {
        let scale = 1.0 / (k as f64 + 1.0);
        layers.push(Layer::new(&c * s.transpose() * scale, &s * scale));
    }
    layers.push(Layer::new(DMatrix::from_row_slice(1, nk, s.as_slice()), DVector::zeros(1)));
    LayerwiseNetwork::new(layers, ActivationKind::Relu).expect("example-2 shapes are consistent")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example1_is_seeded() {
        let a = make_example1_network(EXAMPLE1_SEED);
        assert_eq!(a, make_example1_network(EXAMPLE1_SEED));
        assert_ne!(a, make_example1_network(EXAMPLE1_SEED + 1));
        assert_eq!(a.hidden_partition(), vec![10]);
    }

    #[test]
    fn example2_shape() {
        let net = make_example2_network();
        assert_eq!(net.weight_count(), 56);
        assert_eq!(net.hidden_partition(), vec![4, 4, 4, 4]);
        assert!(net.layers()[0].bias.iter().all(|b| *b == 0.0));
        assert!(net.layers()[4].bias.iter().all(|b| *b == 0.0));
    }
}

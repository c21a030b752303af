#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reduced_nn::network::{ActivationKind, InputBox, Layer, LayerwiseNetwork, ReducedNetwork, Structure};
use reduced_nn::sdp::VarBlock;

pub mod relu_case;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize, scale: f64) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| rng.random_range(-scale..=scale))
}

pub fn uniform_vector(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.random_range(-scale..=scale))
}

pub fn nonneg_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.random_range(0.0..2.0))
}

/// Layerwise network `n_x → widths… → n_f` with uniform weights in `[−1, 1]`.
pub fn random_network(
    rng: &mut ChaCha8Rng,
    n_x: usize,
    widths: &[usize],
    n_f: usize,
    activation: ActivationKind,
) -> LayerwiseNetwork {
    let mut dims = vec![n_x];
    dims.extend_from_slice(widths);
    dims.push(n_f);
    let layers = dims
        .windows(2)
        .map(|w| Layer::new(uniform_matrix(rng, w[1], w[0], 1.0), uniform_vector(rng, w[1], 1.0)))
        .collect();
    LayerwiseNetwork::new(layers, activation).unwrap()
}

/// Width list of 1 to `max_layers` layers, each 1 to `max_width` wide.
pub fn random_widths(rng: &mut ChaCha8Rng, max_layers: usize, max_width: usize) -> Vec<usize> {
    let layers = rng.random_range(1..=max_layers);
    (0..layers).map(|_| rng.random_range(1..=max_width)).collect()
}

/// General implicit reduced network with zero-diagonal `Ψ` small enough for
/// Picard iteration to contract.
pub fn random_reduced(
    rng: &mut ChaCha8Rng,
    n_x: usize,
    partition: &[usize],
    n_f: usize,
    activation: ActivationKind,
) -> ReducedNetwork {
    let m: usize = partition.iter().sum();
    let mut psi = uniform_matrix(rng, m, m, 0.5 / m as f64);
    psi.fill_diagonal(0.0);
    ReducedNetwork::new(
        psi,
        uniform_matrix(rng, m, n_x, 1.0),
        uniform_vector(rng, m, 1.0),
        uniform_matrix(rng, n_f, m, 1.0),
        uniform_vector(rng, n_f, 1.0),
        partition.to_vec(),
        Structure::GeneralImplicit,
        activation,
    )
    .unwrap()
}

pub fn random_box(rng: &mut ChaCha8Rng, n_x: usize) -> InputBox {
    let lo: Vec<f64> = (0..n_x).map(|_| rng.random_range(-3.0..0.0)).collect();
    let hi: Vec<f64> = lo.iter().map(|l| l + rng.random_range(0.5..4.0)).collect();
    InputBox::new(lo, hi).unwrap()
}

pub fn point_in(rng: &mut ChaCha8Rng, bx: &InputBox) -> DVector<f64> {
    DVector::from_fn(bx.dim(), |i, _| rng.random_range(bx.lower[i]..=bx.upper[i]))
}

/// Writes `m` into the variables of `block` (structural zeros are skipped).
pub fn set_block(values: &mut [f64], block: &VarBlock, m: &DMatrix<f64>) {
    for i in 0..block.rows {
        for j in 0..block.cols {
            if let Some(v) = block.get(i, j) {
                values[v.0] = m[(i, j)];
            }
        }
    }
}

/// Writes a vector into a vector-shaped block or the diagonal of a square one.
pub fn set_vector(values: &mut [f64], block: &VarBlock, v: &DVector<f64>) {
    for i in 0..v.len() {
        if let Some(id) = block.at(i) {
            values[id.0] = v[i];
        }
    }
}

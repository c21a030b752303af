mod common;

use common::*;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;
use reduced_nn::lab::make_example2_network;
use reduced_nn::network::{
    build_mu, relu_fixed_point, strictly_block_lower, ActivationKind, InputBox, LayerwiseNetwork, ReducedNetwork,
    Structure,
};

/// Plain nested-loop forward pass, sharing no code with the library.
fn loop_forward(net: &LayerwiseNetwork, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let act = net.activation();
    let mut h = x.to_vec();
    let mut hidden = Vec::new();
    let last = net.layers().len() - 1;
    for (k, layer) in net.layers().iter().enumerate() {
        let w = &layer.weight;
        let mut out = vec![0.0; w.nrows()];
        for (r, o) in out.iter_mut().enumerate() {
            *o = layer.bias[r];
            for (c, hc) in h.iter().enumerate() {
                *o += w[(r, c)] * hc;
            }
        }
        if k < last {
            for o in out.iter_mut() {
                *o = match act {
                    ActivationKind::Relu => o.max(0.0),
                    ActivationKind::Tanh => o.tanh(),
                    ActivationKind::ShiftedSigmoid => 1.0 / (1.0 + (-*o).exp()) - 0.5,
                };
            }
            hidden.extend_from_slice(&out);
        }
        h = out;
    }
    (hidden, h)
}

fn any_activation(i: u8) -> ActivationKind {
    [ActivationKind::Relu, ActivationKind::Tanh, ActivationKind::ShiftedSigmoid][i as usize % 3]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn layerwise_and_implicit_agree(seed in any::<u64>(), a in 0u8..3) {
        let mut rng = rng(seed);
        let n_x = rng.random_range(1..=3);
        let widths = random_widths(&mut rng, 4, 5);
        let n_f = rng.random_range(1..=3);
        let net = random_network(&mut rng, n_x, &widths, n_f, any_activation(a));
        let implicit = net.to_implicit();
        let x = uniform_vector(&mut rng, n_x, 5.0);
        let (h1, y1) = net.eval(&x).unwrap();
        let (h2, y2) = implicit.eval(&x).unwrap();
        let (h3, y3) = loop_forward(&net, x.as_slice());
        prop_assert!((&h1 - &h2).amax() <= 1e-10 && (&y1 - &y2).amax() <= 1e-10);
        prop_assert!((h1 - DVector::from_vec(h3)).amax() <= 1e-10);
        prop_assert!((y1 - DVector::from_vec(y3)).amax() <= 1e-10);
    }

    #[test]
    fn implicit_w_is_strictly_block_lower(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let widths = random_widths(&mut rng, 4, 4);
        let net = random_network(&mut rng, 2, &widths, 1, ActivationKind::Relu);
        let implicit = net.to_implicit();
        prop_assert_eq!(implicit.partition.clone(), widths.clone());
        prop_assert!(strictly_block_lower(&implicit.w, &widths));
        prop_assert_eq!(net.hidden_size(), widths.iter().sum::<usize>());
    }

    #[test]
    fn reduced_eval_solves_its_fixed_point(seed in any::<u64>(), a in 0u8..3) {
        let mut rng = rng(seed);
        let act = any_activation(a);
        let m = rng.random_range(1..=6);
        let reduced = random_reduced(&mut rng, 2, &[m], 1, act);
        let x = uniform_vector(&mut rng, 2, 3.0);
        let e = reduced.eval(&x).unwrap();
        prop_assert!(e.converged);
        let pre = &reduced.psi * &e.hidden + &reduced.psi0 * &x + &reduced.beta;
        let image = pre.map(|s| act.apply(s));
        prop_assert!((image - &e.hidden).amax() <= 1e-9);
        let out = &reduced.psi_f * &e.hidden + &reduced.beta_out;
        prop_assert!((out - e.output).amax() <= 1e-12);
    }

    #[test]
    fn relu_lcp_solution_is_a_fixed_point(seed in any::<u64>()) {
        // I − Ψ strictly diagonally dominant keeps it a P-matrix.
        let mut rng = rng(seed);
        let m = rng.random_range(1..=7);
        let mut psi = uniform_matrix(&mut rng, m, m, 0.95 / m as f64);
        psi.fill_diagonal(0.0);
        let r = uniform_vector(&mut rng, m, 4.0);
        let z = relu_fixed_point(&psi, &r).expect("P-matrix LCP is solvable");
        let image = (&psi * &z + &r).map(|s| s.max(0.0));
        prop_assert!((image - &z).amax() <= 1e-8 * (1.0 + z.amax()));
    }

    #[test]
    fn mu_layout_round_trips(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (n_x, n, m) = (rng.random_range(1..4), rng.random_range(1..6), rng.random_range(1..6));
        let x = uniform_vector(&mut rng, n_x, 1.0);
        let h = uniform_vector(&mut rng, n, 1.0);
        let z = uniform_vector(&mut rng, m, 1.0);
        let mu = build_mu(&x, &h, &z);
        prop_assert_eq!(mu.len(), n_x + n + m + 1);
        prop_assert_eq!(mu.rows(0, n_x).into_owned(), x);
        prop_assert_eq!(mu.rows(n_x, n).into_owned(), h);
        prop_assert_eq!(mu.rows(n_x + n, m).into_owned(), z);
        prop_assert_eq!(mu[n_x + n + m], 1.0);
    }
}

#[test]
fn reduced_from_implicit_reproduces_the_full_network() {
    let mut rng = rng(9);
    for _ in 0..100 {
        let widths = random_widths(&mut rng, 3, 4);
        let net = random_network(&mut rng, 2, &widths, 2, ActivationKind::Relu);
        let reduced = ReducedNetwork::from_implicit(&net.to_implicit());
        assert!(reduced.is_strictly_feedforward());
        let x = uniform_vector(&mut rng, 2, 4.0);
        let e = reduced.eval(&x).unwrap();
        assert!(e.converged);
        assert!((e.output - net.output(&x).unwrap()).amax() < 1e-10);
    }
}

#[test]
fn example2_matches_a_hand_expansion() {
    // With v = (1/4, 1/2, 3/4, 1): c = (0, −1, 0, 1), s = (1, 0, −1, 0), so
    // sᵀ relu(c x) = 0 on x ≥ 0 and the remaining layers only see biases:
    // h² = (1/2, 0, 0, 0), h³ = (1/3, 0, 0, 1/6), h⁴ = (1/4, 0, 0, 1/12), f = 1/4.
    let net = make_example2_network();
    let hand = [0.5, 0.0, 0.0, 0.0, 1.0 / 3.0, 0.0, 0.0, 1.0 / 6.0, 0.25, 0.0, 0.0, 1.0 / 12.0];
    for x in [0.0, 0.1, 0.37, 0.5, 0.9, 1.0] {
        let (hidden, out) = net.eval(&DVector::from_element(1, x)).unwrap();
        let (oracle_hidden, oracle_out) = loop_forward(&net, &[x]);
        assert!((out[0] - oracle_out[0]).abs() < 1e-12);
        assert!((out[0] - 0.25).abs() < 1e-12, "f({x}) = {}", out[0]);
        assert!((hidden[3] - x).abs() < 1e-12);
        for (h, e) in hidden.iter().skip(4).zip(hand) {
            assert!((h - e).abs() < 1e-12);
        }
        assert_eq!(hidden.len(), oracle_hidden.len());
    }
}

#[test]
fn validation_rejects_bad_inputs() {
    assert!(InputBox::new(vec![1.0], vec![0.0]).is_err());
    assert!(InputBox::new(vec![0.0, 0.0], vec![1.0]).is_err());
    assert!(InputBox::new(vec![f64::NAN], vec![1.0]).is_err());
    let bx = InputBox::new(vec![-2.0, 1.0], vec![1.0, 3.0]).unwrap();
    assert_eq!(bx.max_norm_sq(), 4.0 + 9.0);
    assert!(bx.contains(&bx.midpoint()));

    let mut rng = rng(1);
    let net = random_network(&mut rng, 2, &[3], 1, ActivationKind::Relu);
    assert!(net.eval(&DVector::zeros(3)).is_err());

    // Non-zero diagonal in strict feed-forward mode, and a mismatched partition.
    let psi = DMatrix::identity(2, 2) * 0.1;
    let mk = |psi: DMatrix<f64>, partition: Vec<usize>, s: Structure| {
        ReducedNetwork::new(
            psi,
            DMatrix::zeros(2, 1),
            DVector::zeros(2),
            DMatrix::zeros(1, 2),
            DVector::zeros(1),
            partition,
            s,
            ActivationKind::Relu,
        )
    };
    assert!(mk(psi.clone(), vec![1, 1], Structure::StrictFeedforward).is_err());
    assert!(mk(psi.clone(), vec![3], Structure::GeneralImplicit).is_err());
    assert!(mk(psi, vec![2], Structure::GeneralImplicit).is_ok());
}

#[test]
fn weight_count_and_partition() {
    let mut rng = rng(4);
    let net = random_network(&mut rng, 3, &[4, 2], 2, ActivationKind::Tanh);
    assert_eq!(net.weight_count(), 3 * 4 + 4 * 2 + 2 * 2);
    assert_eq!(net.hidden_partition(), vec![4, 2]);
    assert_eq!(net.depth(), 2);
}

#[test]
fn single_hidden_layer_implicit_blocks() {
    let mut rng = rng(17);
    let net = random_network(&mut rng, 2, &[3], 1, ActivationKind::Relu);
    let im = net.to_implicit();
    assert_eq!(im.w, DMatrix::zeros(3, 3));
    assert_eq!(im.w0, net.layers()[0].weight);
    assert_eq!(im.b, net.layers()[0].bias);
    assert_eq!(im.w_f, net.layers()[1].weight);
    assert_eq!(im.b_out, net.layers()[1].bias);
}

#[test]
fn identity_relu_net_clips_negative_inputs() {
    let one = || DMatrix::from_element(1, 1, 1.0);
    let net = LayerwiseNetwork::new(
        vec![reduced_nn::Layer::new(one(), DVector::zeros(1)), reduced_nn::Layer::new(one(), DVector::zeros(1))],
        ActivationKind::Relu,
    )
    .unwrap();
    assert_eq!(net.output(&DVector::from_element(1, 2.0)).unwrap()[0], 2.0);
    assert_eq!(net.output(&DVector::from_element(1, -2.0)).unwrap()[0], 0.0);
}

#[test]
fn picard_on_block_lower_coupling_is_forward_substitution() {
    let mut rng = rng(23);
    for _ in 0..50 {
        let partition = random_widths(&mut rng, 4, 3);
        let m: usize = partition.iter().sum();
        let blocks = reduced_nn::network::block_of(&partition);
        let psi = DMatrix::from_fn(m, m, |i, j| if blocks[j] < blocks[i] { rng.random_range(-1.0..1.0) } else { 0.0 });
        let drive = uniform_vector(&mut rng, m, 2.0);
        // Forward substitution, one block at a time.
        let mut oracle = DVector::zeros(m);
        for i in 0..m {
            let s: f64 = (0..m).filter(|&j| blocks[j] < blocks[i]).map(|j| psi[(i, j)] * oracle[j]).sum();
            oracle[i] = (s + drive[i]).max(0.0);
        }
        let depth = partition.len();
        let (z, _) = reduced_nn::network::picard(&psi, &drive, ActivationKind::Relu, 0.0, depth);
        assert!((&z - &oracle).amax() <= 1e-12);
        let (z, converged) = reduced_nn::network::picard(&psi, &drive, ActivationKind::Relu, 0.0, depth + 1);
        assert!(converged);
        assert!((z - oracle).amax() <= 1e-12);
    }
}

#[test]
fn zero_coupling_reduced_network_is_a_one_layer_net() {
    let mut rng = rng(29);
    let mut r = random_reduced(&mut rng, 2, &[3], 1, ActivationKind::Relu);
    r.psi = DMatrix::zeros(3, 3);
    let net = LayerwiseNetwork::new(
        vec![
            reduced_nn::Layer::new(r.psi0.clone(), r.beta.clone()),
            reduced_nn::Layer::new(r.psi_f.clone(), r.beta_out.clone()),
        ],
        ActivationKind::Relu,
    )
    .unwrap();
    for _ in 0..20 {
        let x = uniform_vector(&mut rng, 2, 3.0);
        assert!((r.output(&x).unwrap() - net.output(&x).unwrap()).amax() <= 1e-12);
    }
}

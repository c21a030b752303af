use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use reduced_nn::network::{ActivationKind, ImplicitForm, InputBox, LayerwiseNetwork, ReducedNetwork, Structure};
use reduced_nn::qc::{relu_lambda_expr, Dims, ReluVarOptions, ReluVars};
use reduced_nn::sdp::{AffineMatrixExpr, VarSpace};

use super::*;

const RELU: ActivationKind = ActivationKind::Relu;

/// A full network, a reduced network compatible with the synthesis
/// variables, and the registered variable layout.
pub struct ReluCase {
    pub full: LayerwiseNetwork,
    pub implicit: ImplicitForm,
    pub reduced: ReducedNetwork,
    pub bx: InputBox,
    pub dims: Dims,
    pub space: VarSpace,
    pub vars: ReluVars,
    pub j1: DMatrix<f64>,
    pub j2: DVector<f64>,
}

pub fn relu_case(rng: &mut ChaCha8Rng) -> ReluCase {
    let n_x = rng.random_range(1..=2);
    let widths = random_widths(rng, 3, 4);
    let n_f = rng.random_range(1..=2);
    let full = random_network(rng, n_x, &widths, n_f, RELU);
    let n = full.hidden_size();
    let m = rng.random_range(1..=n);
    let reduced = random_reduced(rng, n_x, &[m], n_f, RELU);
    let bx = random_box(rng, n_x);
    let dims = Dims::new(n_x, n, m, n_f);
    let mut space = VarSpace::new();
    let vars = ReluVars::register(
        &mut space,
        n_x,
        n,
        &ReluVarOptions {
            diagonal_multipliers: false,
            structure: Structure::GeneralImplicit,
            reduced_partition: vec![m],
            eps_t0r: 1e-6,
        },
    )
    .unwrap();
    // Random nonnegative J's exercise more than the defaults.
    let j1 = DMatrix::from_fn(n, m, |_, _| rng.random_range(0.0..1.5));
    let j2 = nonneg_vector(rng, m);
    let implicit = full.to_implicit();
    ReluCase { full, implicit, reduced, bx, dims, space, vars, j1, j2 }
}

/// Admissible multipliers plus `F = T0_r·(Ψ, Ψ₀, β)` for the case's reduced network.
pub struct Multipliers {
    pub t0: DVector<f64>,
    pub t0_r: DVector<f64>,
    pub tplus: DVector<f64>,
    pub tplus_r: DVector<f64>,
    pub tcplus: DVector<f64>,
    pub tcross: DMatrix<f64>,
}

pub fn draw_multipliers(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Multipliers {
    Multipliers {
        t0: uniform_vector(rng, n, 2.0),
        t0_r: DVector::from_fn(m, |_, _| rng.random_range(1e-6..2.0)),
        tplus: nonneg_vector(rng, n),
        tplus_r: nonneg_vector(rng, m),
        tcplus: nonneg_vector(rng, n),
        tcross: DMatrix::from_fn(n, m, |_, _| rng.random_range(0.0..2.0)),
    }
}

pub fn relu_values(case: &ReluCase, t: &Multipliers) -> Vec<f64> {
    let mut v = vec![0.0; case.space.len()];
    let d = DMatrix::from_diagonal(&t.t0_r);
    set_vector(&mut v, &case.vars.t0, &t.t0);
    set_vector(&mut v, &case.vars.t0_r, &t.t0_r);
    set_vector(&mut v, &case.vars.tplus, &t.tplus);
    set_vector(&mut v, &case.vars.tplus_r, &t.tplus_r);
    set_vector(&mut v, &case.vars.tcplus, &t.tcplus);
    set_block(&mut v, &case.vars.tcross, &t.tcross);
    set_block(&mut v, &case.vars.f_psi, &(&d * &case.reduced.psi));
    set_block(&mut v, &case.vars.f0, &(&d * &case.reduced.psi0));
    set_vector(&mut v, &case.vars.f_beta, &(&d * &case.reduced.beta));
    v
}

/// True signals `(x̌, ξ, ž, ζ)` at `x`.
pub fn signals(case: &ReluCase, x: &DVector<f64>) -> (DVector<f64>, DVector<f64>, DVector<f64>, DVector<f64>) {
    let (xc, _) = case.full.eval(x).unwrap();
    let xi = &case.implicit.w * &xc + &case.implicit.w0 * x + &case.implicit.b;
    let e = case.reduced.eval(x).unwrap();
    assert!(e.converged);
    let zeta = &case.reduced.psi * &e.hidden + &case.reduced.psi0 * x + &case.reduced.beta;
    (xc, xi, e.hidden, zeta)
}

/// The constraint stack evaluated term by term, without any matrix assembly.
pub fn constraint_stack(case: &ReluCase, t: &Multipliers, x: &DVector<f64>) -> (f64, Vec<f64>) {
    let (xc, xi, z, zeta) = signals(case, x);
    let tr_j2 = t.t0_r.component_mul(&case.j2);
    let tr_j1t = DMatrix::from_diagonal(&t.t0_r) * case.j1.transpose();
    let terms = vec![
        2.0 * xc.component_mul(&t.t0).dot(&(&xi - &xc)),
        2.0 * t.tplus.dot(&xc),
        2.0 * t.tcplus.dot(&(&xc - &xi)),
        2.0 * z.component_mul(&t.t0_r).dot(&(&zeta - &z)),
        2.0 * t.tplus_r.dot(&z),
        2.0 * tr_j2.dot(&(&z - &zeta)),
        2.0 * (&xc - &xi).dot(&(&t.tcross * &z)),
        2.0 * (&z - &zeta).dot(&(&tr_j1t * &xc)),
    ];
    (terms.iter().sum(), terms)
}

pub fn relu_lambda(case: &ReluCase) -> AffineMatrixExpr {
    relu_lambda_expr(&case.implicit, &case.dims, &case.j1, &case.j2, &case.vars).unwrap()
}


mod common;

use common::*;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use reduced_nn::sdp::{
    check_nsd, to_standard_form, AffineMatrixExpr, Backend, ConicProblem, Sign, SolveStatus, SolverSettings, VarGroup,
    VarSpace, PSD_CHECK_TOL,
};

const EPS: f64 = 1e-8;

/// Largest eigenvalue by shifted power iteration (independent of the
/// library's symmetric eigensolver).
fn power_lambda_max(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let shift = a.row_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    let b = a + DMatrix::identity(n, n) * shift;
    let mut v = DVector::from_fn(n, |i, _| 1.0 + 0.1 * i as f64);
    v /= v.norm();
    let mut lam = 0.0;
    for _ in 0..20_000 {
        let w = &b * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return -shift;
        }
        let next = w / norm;
        let new_lam = next.dot(&(&b * &next));
        let done = (new_lam - lam).abs() <= 1e-14 * (1.0 + new_lam.abs());
        lam = new_lam;
        v = next;
        if done {
            break;
        }
    }
    lam - shift
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let a = uniform_matrix(rng, n, n, 1.0);
    (&a + a.transpose()) * 0.5
}

fn sym_expr(a: &DMatrix<f64>, var: Option<reduced_nn::sdp::VarId>, e: &mut AffineMatrixExpr) {
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            e.add_entry(var, i, j, a[(i, j)]);
        }
    }
}

/// `min t  s.t.  A − t·I ⪯ −ε·I`, whose optimum is `λ_max(A) + ε`.
fn min_t_problem(a: &DMatrix<f64>) -> ConicProblem {
    let mut space = VarSpace::new();
    let t = space.add_scalar(VarGroup::Gamma, Sign::Free);
    let mut e = AffineMatrixExpr::from_constant(a.clone());
    for i in 0..a.nrows() {
        e.add_entry(Some(t), i, i, -1.0);
    }
    to_standard_form(&e, &[1.0], &space, EPS).unwrap()
}

/// Random LMI `C + Σ vₖAₖ ⪯ −ε·I`, `v ≥ 0`, built so that `v₀` is strictly
/// feasible and the positive objective is bounded below.
fn random_feasible(rng: &mut ChaCha8Rng) -> (ConicProblem, Vec<f64>) {
    let n = rng.random_range(2..=5);
    let k = rng.random_range(1..=4);
    let mut space = VarSpace::new();
    let block = space.add_vector(VarGroup::TPlus, k, Sign::Nonneg);
    let vars: Vec<_> = block.ids().collect();
    let v0: Vec<f64> = (0..k).map(|_| rng.random_range(0.5..2.0)).collect();
    let mats: Vec<_> = (0..k).map(|_| random_symmetric(rng, n)).collect();
    let mut c = -DMatrix::identity(n, n);
    for (a, v) in mats.iter().zip(&v0) {
        c -= a * *v;
    }
    let mut e = AffineMatrixExpr::from_constant(c);
    for (a, &id) in mats.iter().zip(&vars) {
        sym_expr(a, Some(id), &mut e);
    }
    let objective: Vec<f64> = (0..k).map(|_| rng.random_range(0.1..1.0)).collect();
    (to_standard_form(&e, &objective, &space, EPS).unwrap(), v0)
}

fn settings() -> SolverSettings {
    SolverSettings::default()
}

#[test]
fn min_t_finds_the_top_eigenvalue() {
    let mut rng = rng(21);
    for backend in Backend::available() {
        let solver = backend.solver().unwrap();
        for _ in 0..20 {
            let n = rng.random_range(1..=6);
            let a = random_symmetric(&mut rng, n);
            let sol = solver.solve(&min_t_problem(&a), &settings());
            assert_eq!(sol.status, SolveStatus::Optimal, "{}: {}", backend.name(), sol.message);
            let oracle = power_lambda_max(&a) + EPS;
            assert!((sol.values[0] - oracle).abs() <= 1e-6 * (1.0 + oracle.abs()), "{} vs {oracle}", sol.values[0]);
            assert!(sol.lmi_lambda_max <= -EPS + PSD_CHECK_TOL);
        }
    }
}

#[test]
fn reference_problems() {
    // min t  s.t.  [[−t, 1], [1, −t]] ⪯ 0 has optimum t = 1.
    let mut space = VarSpace::new();
    let t = space.add_scalar(VarGroup::Gamma, Sign::Free);
    let mut e = AffineMatrixExpr::zeros(2, 2);
    e.add_entry(None, 0, 1, 1.0);
    e.add_entry(None, 1, 0, 1.0);
    e.add_entry(Some(t), 0, 0, -1.0);
    e.add_entry(Some(t), 1, 1, -1.0);
    let min_t = to_standard_form(&e, &[1.0], &space, EPS).unwrap();
    assert_eq!(min_t.num_vars(), space.len());
    // I + t·0 ⪯ 0 is infeasible.
    let mut id = AffineMatrixExpr::from_constant(DMatrix::identity(2, 2));
    id.add_entry(Some(t), 0, 0, 0.0);
    let infeasible = to_standard_form(&id, &[1.0], &space, EPS).unwrap();
    for backend in Backend::available() {
        let solver = backend.solver().unwrap();
        let sol = solver.solve(&min_t, &settings());
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.values[0] - 1.0).abs() <= 1e-6, "{}: {}", backend.name(), sol.values[0]);
        assert_eq!(solver.solve(&infeasible, &settings()).status, SolveStatus::Infeasible, "{}", backend.name());
    }

    let c = check_nsd(&DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, -2.0])), 0.0).unwrap();
    assert!(c.is_nsd && c.lambda_max == -1.0);
    let c = check_nsd(&DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, 1e-3])), 1e-6).unwrap();
    assert!(!c.is_nsd && (c.lambda_max - 1e-3).abs() < 1e-15);
}

#[test]
fn detects_infeasibility() {
    // Ω = [[v, 0], [0, 1]] can never be negative definite.
    let mut space = VarSpace::new();
    let v = space.add_scalar(VarGroup::Gamma, Sign::Nonneg);
    let mut e = AffineMatrixExpr::zeros(2, 2);
    e.add_entry(Some(v), 0, 0, 1.0);
    e.add_entry(None, 1, 1, 1.0);
    let problem = to_standard_form(&e, &[1.0], &space, EPS).unwrap();
    for backend in Backend::available() {
        let sol = backend.solver().unwrap().solve(&problem, &settings());
        assert_eq!(sol.status, SolveStatus::Infeasible, "{}: {}", backend.name(), sol.message);
    }
}

#[test]
fn check_nsd_matches_power_iteration() {
    let mut rng = rng(8);
    for _ in 0..200 {
        let n = rng.random_range(1..=8);
        let a = random_symmetric(&mut rng, n);
        let c = check_nsd(&a, 0.0).unwrap();
        let oracle = power_lambda_max(&a);
        assert!((c.lambda_max - oracle).abs() < 1e-8, "{} vs {oracle}", c.lambda_max);
        assert_eq!(c.is_nsd, c.lambda_max <= 0.0);
    }
    let mut asym = DMatrix::zeros(2, 2);
    asym[(0, 1)] = 1.0;
    assert!(check_nsd(&asym, 0.0).is_err());
    assert!(check_nsd(&DMatrix::zeros(2, 3), 0.0).is_err());
}

#[test]
fn standard_form_round_trips_the_lmi() {
    let mut rng = rng(2);
    for _ in 0..50 {
        let (problem, _) = random_feasible(&mut rng);
        let e = problem.lmi_expr();
        let v: Vec<f64> = (0..problem.num_vars()).map(|_| rng.random_range(-2.0..2.0)).collect();
        assert!((e.eval(&v) + problem.slack(&v)).amax() < 1e-12);
        assert!(e.is_symmetric());
        let again = to_standard_form(&e, &problem.objective, &dummy_space(&problem), problem.margin).unwrap();
        assert_eq!(again.constant, problem.constant);
        assert_eq!(again.coefficients, problem.coefficients);
    }
}

fn dummy_space(problem: &ConicProblem) -> VarSpace {
    let mut space = VarSpace::new();
    space.add_vector(VarGroup::TPlus, problem.num_vars(), Sign::Nonneg);
    space
}

#[test]
fn rejects_asymmetric_coefficients() {
    let mut space = VarSpace::new();
    let v = space.add_scalar(VarGroup::Gamma, Sign::Free);
    let mut e = AffineMatrixExpr::zeros(2, 2);
    e.add_entry(Some(v), 0, 1, 1.0);
    assert!(to_standard_form(&e, &[1.0], &space, EPS).is_err());
    assert!(to_standard_form(&AffineMatrixExpr::zeros(2, 2), &[1.0, 2.0], &space, EPS).is_err());
}

#[test]
fn dump_lists_every_nonzero() {
    let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, -2.0]);
    let dump = min_t_problem(&a).dump();
    let data: Vec<&str> = dump.lines().filter(|l| !l.starts_with('#')).collect();
    // One objective entry, three constant entries, two diagonal t entries.
    assert_eq!(data.len(), 1 + 3 + 2);
    assert!(data.contains(&"0 0 0 1 1e0"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_feasible_problems_solve_and_certify(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (problem, v0) = random_feasible(&mut rng);
        let reference = problem.objective_value(&v0);
        let mut objectives = Vec::new();
        for backend in Backend::available() {
            let sol = backend.solver().unwrap().solve(&problem, &settings());
            prop_assert_eq!(sol.status, SolveStatus::Optimal, "{}: {}", backend.name(), sol.message);
            prop_assert!(sol.lmi_lambda_max <= -problem.margin + PSD_CHECK_TOL);
            prop_assert!(sol.values.iter().all(|v| *v >= 0.0));
            prop_assert!(sol.objective <= reference + 1e-6);
            objectives.push(sol.objective);
        }
        for o in &objectives {
            prop_assert!((o - objectives[0]).abs() <= 1e-5 * (1.0 + objectives[0].abs()));
        }
    }
}

//! Dense primal-dual interior-point method for [`ConicProblem`]s.
//!
//! The LMI side is treated as the dual of a standard-form SDP:
//!
//! ```text
//! primal:  min ⟨C, X⟩ + c_lpᵀx   s.t. A(X, x) = b,  X ⪰ 0, x ≥ 0
//! dual:    max bᵀy               s.t. C − Aᵀ(y) = Z ⪰ 0 (and z ≥ 0)
//! ```
//!
//! with `y = v`, `b = −objective`, `Z = S(v) − margin·I`, and one LP slot
//! `z = v − lb` per sign-constrained variable. Search directions use the
//! HKM scaling with a Mehrotra predictor-corrector; infeasibility of the LMI
//! is decided afterwards by a margin-maximising phase-1 solve.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use super::problem::{finalize, min_eigenvalue, ConicProblem, RawOutcome, SdpSolver, Solution, SolveStatus, SolverSettings};

/// Relative accuracy below which a non-converged run is still reported as
/// `Inaccurate` rather than `Failed`.
const INACCURATE_TOL: f64 = 1e-5;
/// Phase-1 margin below which the LMI is declared infeasible.
const INFEASIBLE_MARGIN: f64 = 1e-7;
/// Iteration cap per solve; `SolverSettings::max_iters` can only lower it.
const HARD_ITER_CAP: usize = 500;
/// Iterations without a 10% accuracy improvement before giving up.
const NO_PROGRESS_ITERS: usize = 30;
/// A stalled run whose iterate satisfies the LMI and whose relative gap is
/// within this factor of the tolerance is still reported optimal.
const SOFT_GAP_FACTOR: f64 = 1000.0;

#[derive(Debug, Clone)]
pub struct InteriorPointSolver {
    /// Fraction of the distance to the cone boundary taken per step.
    pub step_fraction: f64,
}

impl Default for InteriorPointSolver {
    fn default() -> Self {
        Self { step_fraction: 0.98 }
    }
}

impl SdpSolver for InteriorPointSolver {
    fn name(&self) -> &'static str {
        "interior-point"
    }

    fn solve(&self, problem: &ConicProblem, settings: &SolverSettings) -> Solution {
        finalize(problem, self.solve_raw(problem, settings), self.name())
    }
}

struct Model {
    d: usize,
    c: DMatrix<f64>,
    /// Both triangles of every `A_i`.
    a: Vec<Vec<(usize, usize, f64)>>,
    c_lp: DVector<f64>,
    a_lp: Vec<Vec<(usize, f64)>>,
    b: DVector<f64>,
}

impl Model {
    fn m(&self) -> usize {
        self.a.len()
    }

    fn p(&self) -> usize {
        self.c_lp.len()
    }

    fn from_problem(problem: &ConicProblem, active: &[usize]) -> Self {
        let d = problem.dim;
        let mut c = problem.constant.to_dense(d);
        for i in 0..d {
            c[(i, i)] -= problem.margin;
        }
        let mut c_lp = Vec::new();
        let mut a = Vec::with_capacity(active.len());
        let mut a_lp = Vec::with_capacity(active.len());
        for &k in active {
            let mut entries = Vec::new();
            for &(i, j, v) in &problem.coefficients[k].entries {
                entries.push((i, j, -v));
                if i != j {
                    entries.push((j, i, -v));
                }
            }
            a.push(entries);
            let mut lp = Vec::new();
            if let Some(lb) = problem.lower_bounds[k] {
                lp.push((c_lp.len(), -1.0));
                c_lp.push(-lb);
            }
            a_lp.push(lp);
        }
        let b = DVector::from_iterator(active.len(), active.iter().map(|&k| -problem.objective[k]));
        Self { d, c, a, c_lp: DVector::from_vec(c_lp), a_lp, b }
    }

    /// Appends a margin variable `s` (maximised, capped at 1) subtracted from
    /// every cone slack.
    fn phase_one(mut self) -> Self {
        let d = self.d;
        let p = self.p();
        self.b.fill(0.0);
        let mut entries: Vec<_> = (0..d).map(|i| (i, i, 1.0)).collect();
        entries.shrink_to_fit();
        self.a.push(entries);
        let mut lp: Vec<_> = (0..p).map(|k| (k, 1.0)).collect();
        lp.push((p, 1.0));
        self.a_lp.push(lp);
        self.c_lp = self.c_lp.push(1.0);
        self.b = self.b.push(1.0);
        self
    }

    fn apply_a(&self, x: &DMatrix<f64>, xl: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(
            self.m(),
            self.a.iter().zip(&self.a_lp).map(|(a, al)| {
                a.iter().map(|&(i, j, v)| v * x[(i, j)]).sum::<f64>()
                    + al.iter().map(|&(k, v)| v * xl[k]).sum::<f64>()
            }),
        )
    }

    fn apply_at(&self, y: &DVector<f64>) -> (DMatrix<f64>, DVector<f64>) {
        let mut s = DMatrix::zeros(self.d, self.d);
        let mut sl = DVector::zeros(self.p());
        for ((a, al), &yi) in self.a.iter().zip(&self.a_lp).zip(y.iter()) {
            if yi == 0.0 {
                continue;
            }
            for &(i, j, v) in a {
                s[(i, j)] += v * yi;
            }
            for &(k, v) in al {
                sl[k] += v * yi;
            }
        }
        (s, sl)
    }
}

struct Iterate {
    x: DMatrix<f64>,
    xl: DVector<f64>,
    y: DVector<f64>,
    z: DMatrix<f64>,
    zl: DVector<f64>,
}

struct Direction {
    dx: DMatrix<f64>,
    dxl: DVector<f64>,
    dy: DVector<f64>,
    dz: DMatrix<f64>,
    dzl: DVector<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Exit {
    Converged,
    Stalled,
    IterationLimit,
    Numerical,
}

struct RunResult {
    y: DVector<f64>,
    exit: Exit,
    /// Dual infeasibility of the returned `y` (zero means the LMI holds).
    dinf: f64,
    relgap: f64,
    /// Worst of relative gap, primal and dual infeasibility at `y`.
    accuracy: f64,
    gap: f64,
    iterations: usize,
}

impl InteriorPointSolver {
    fn solve_raw(&self, problem: &ConicProblem, settings: &SolverSettings) -> RawOutcome {
        let n = problem.num_vars();
        let mut values = vec![0.0; n];
        let mut active = Vec::with_capacity(n);
        let mut unbounded = None;
        // Variables that appear in no constraint are fixed (or make the
        // problem unbounded when the objective rewards moving them).
        for k in 0..n {
            if !problem.coefficients[k].is_empty() {
                active.push(k);
                continue;
            }
            let c = problem.objective[k];
            match problem.lower_bounds[k] {
                Some(lb) if c >= 0.0 => values[k] = lb,
                None if c == 0.0 => values[k] = 0.0,
                _ => unbounded = Some(problem.names[k].clone()),
            }
        }
        let max_iter = settings.max_iters.min(HARD_ITER_CAP);

        let model = Model::from_problem(problem, &active);
        if let Some(name) = unbounded {
            return match self.phase_one_margin(&model, settings, max_iter) {
                Some(s) if s < -INFEASIBLE_MARGIN => infeasible(values, s),
                _ => RawOutcome {
                    values,
                    status: SolveStatus::Failed,
                    duality_gap: None,
                    iterations: 0,
                    message: format!("objective unbounded along {name}"),
                },
            };
        }
        if model.m() == 0 {
            let feasible = min_eigenvalue(&model.c) >= 0.0 && model.c_lp.iter().all(|c| *c >= 0.0);
            return if feasible {
                RawOutcome {
                    values,
                    status: SolveStatus::Optimal,
                    duality_gap: Some(0.0),
                    iterations: 0,
                    message: String::new(),
                }
            } else {
                infeasible(values, min_eigenvalue(&model.c))
            };
        }

        let run = self.run(&model, settings.tol, max_iter, settings.verbose);
        for (slot, &k) in active.iter().enumerate() {
            values[k] = run.y[slot];
        }
        match run.exit {
            Exit::Converged => RawOutcome {
                values,
                status: SolveStatus::Optimal,
                duality_gap: Some(run.gap),
                iterations: run.iterations,
                message: String::new(),
            },
            _ if run.dinf <= settings.tol && run.relgap <= SOFT_GAP_FACTOR * settings.tol => RawOutcome {
                values,
                status: SolveStatus::Optimal,
                duality_gap: Some(run.gap),
                iterations: run.iterations,
                message: format!("stopped with relative gap {:.2e}", run.relgap),
            },
            exit => {
                if run.dinf <= settings.tol {
                    // The iterate already satisfies the LMI, so it is feasible.
                    return RawOutcome {
                        values,
                        status: if run.accuracy <= INACCURATE_TOL { SolveStatus::Inaccurate } else { SolveStatus::Failed },
                        duality_gap: Some(run.gap),
                        iterations: run.iterations,
                        message: format!("{exit:?} after {} iterations (gap {:.2e})", run.iterations, run.relgap),
                    };
                }
                if let Some(s) = self.phase_one_margin(&model, settings, max_iter) {
                    if s < -INFEASIBLE_MARGIN {
                        let mut out = infeasible(values, s);
                        out.iterations = run.iterations;
                        return out;
                    }
                }
                let status = if run.accuracy <= INACCURATE_TOL {
                    SolveStatus::Inaccurate
                } else {
                    SolveStatus::Failed
                };
                RawOutcome {
                    values,
                    status,
                    duality_gap: Some(run.gap),
                    iterations: run.iterations,
                    message: format!("{exit:?} after {} iterations (accuracy {:.2e})", run.iterations, run.accuracy),
                }
            }
        }
    }

    /// Largest `s` such that all cone slacks stay `⪰ s` (capped at 1).
    fn phase_one_margin(&self, model: &Model, settings: &SolverSettings, max_iter: usize) -> Option<f64> {
        let p1 = Model {
            d: model.d,
            c: model.c.clone(),
            a: model.a.clone(),
            c_lp: model.c_lp.clone(),
            a_lp: model.a_lp.clone(),
            b: model.b.clone(),
        }
        .phase_one();
        let run = self.run(&p1, settings.tol.max(1e-9), max_iter, settings.verbose);
        match run.exit {
            Exit::Converged => Some(run.y[p1.m() - 1]),
            _ if run.accuracy <= INACCURATE_TOL => Some(run.y[p1.m() - 1]),
            _ => None,
        }
    }

    fn run(&self, model: &Model, tol: f64, max_iter: usize, verbose: bool) -> RunResult {
        let d = model.d;
        let m = model.m();
        let p = model.p();
        let nu = (d + p) as f64;

        let norm_a: Vec<f64> = model
            .a
            .iter()
            .zip(&model.a_lp)
            .map(|(a, al)| {
                (a.iter().map(|e| e.2 * e.2).sum::<f64>() + al.iter().map(|e| e.1 * e.1).sum::<f64>()).sqrt()
            })
            .collect();
        let norm_c = (model.c.norm_squared() + model.c_lp.norm_squared()).sqrt();
        let norm_b = model.b.norm();
        let dimf = (d.max(1)) as f64;
        let xi = (0..m)
            .map(|i| dimf * (1.0 + model.b[i].abs()) / (1.0 + norm_a[i]))
            .fold(10.0_f64.max(dimf.sqrt()), f64::max);
        let eta = norm_a.iter().copied().fold(10.0_f64.max(dimf.sqrt()).max(norm_c), f64::max);

        let mut it = Iterate {
            x: DMatrix::identity(d, d) * xi,
            xl: DVector::from_element(p, xi),
            y: DVector::zeros(m),
            z: DMatrix::identity(d, d) * eta,
            zl: DVector::from_element(p, eta),
        };

        // (accuracy, y, gap, dinf, relgap) of the best iterate so far.
        let mut best: Option<(f64, DVector<f64>, f64, f64, f64)> = None;
        let mut last_improvement = 0;
        let mut stall = 0;
        let mut exit = Exit::IterationLimit;
        let mut iterations = 0;

        for iter in 0..max_iter {
            iterations = iter;
            let rp = &model.b - model.apply_a(&it.x, &it.xl);
            let (at_y, at_yl) = model.apply_at(&it.y);
            let rd = &model.c - &it.z - &at_y;
            let rdl = &model.c_lp - &it.zl - &at_yl;

            let gap = it.x.dot(&it.z) + it.xl.dot(&it.zl);
            let mu = gap / nu;
            let pobj = model.c.dot(&it.x) + model.c_lp.dot(&it.xl);
            let dobj = model.b.dot(&it.y);
            let relgap = gap.max((pobj - dobj).abs()) / (1.0 + pobj.abs() + dobj.abs());
            let pinf = rp.norm() / (1.0 + norm_b);
            let dinf = (rd.norm_squared() + rdl.norm_squared()).sqrt() / (1.0 + norm_c);
            let accuracy = relgap.max(pinf).max(dinf);
            if verbose {
                eprintln!(
                    "ipm {iter:3}  pobj {pobj:+.6e}  dobj {dobj:+.6e}  gap {relgap:.2e}  pinf {pinf:.2e}  dinf {dinf:.2e}"
                );
            }
            if best.as_ref().is_none_or(|b| accuracy < 0.9 * b.0) {
                last_improvement = iter;
            }
            if best.as_ref().is_none_or(|b| accuracy < b.0) {
                best = Some((accuracy, it.y.clone(), gap, dinf, relgap));
            }
            if iter - last_improvement >= NO_PROGRESS_ITERS {
                exit = Exit::Stalled;
                break;
            }
            if accuracy < tol {
                exit = Exit::Converged;
                break;
            }
            if !accuracy.is_finite() || it.x.amax() > 1e14 {
                exit = Exit::Numerical;
                break;
            }

            let Some(zinv) = spd_inverse(&it.z) else {
                exit = Exit::Numerical;
                break;
            };
            let Some(chol) = schur_factor(model, &it, &zinv) else {
                exit = Exit::Numerical;
                break;
            };

            // Predictor.
            let pred = direction(model, &it, &zinv, &chol, &rp, &rd, &rdl, 0.0, None);
            let ap = max_step(&it.x, &pred.dx, &it.xl, &pred.dxl).min(1.0);
            let ad = max_step(&it.z, &pred.dz, &it.zl, &pred.dzl).min(1.0);
            let gap_aff = (&it.x + &pred.dx * ap).dot(&(&it.z + &pred.dz * ad))
                + (&it.xl + &pred.dxl * ap).dot(&(&it.zl + &pred.dzl * ad));
            let mut sigma = (gap_aff / gap).clamp(0.0, 1.0).powi(3).max(1e-4 * (1.0 - ap.min(ad)));
            // Keep the complementarity gap from outrunning primal feasibility.
            if pinf > relgap {
                sigma = sigma.max((1.0 - ap).clamp(0.0, 0.5));
            }

            // Corrector.
            let corr = direction(model, &it, &zinv, &chol, &rp, &rd, &rdl, sigma * mu, Some(&pred));
            let frac = self.step_fraction.min(0.9 + 0.09 * ap.min(ad));
            let ap = (frac * max_step(&it.x, &corr.dx, &it.xl, &corr.dxl)).min(1.0);
            let ad = (frac * max_step(&it.z, &corr.dz, &it.zl, &corr.dzl)).min(1.0);

            it.x += &corr.dx * ap;
            it.xl += &corr.dxl * ap;
            it.y += &corr.dy * ad;
            it.z += &corr.dz * ad;
            it.zl += &corr.dzl * ad;
            symmetrize(&mut it.x);
            symmetrize(&mut it.z);

            if ap.max(ad) < 1e-8 {
                stall += 1;
                if stall >= 3 {
                    exit = Exit::Stalled;
                    break;
                }
            } else {
                stall = 0;
            }
        }

        let (accuracy, y, gap, dinf, relgap) =
            best.unwrap_or((f64::INFINITY, it.y.clone(), f64::INFINITY, f64::INFINITY, f64::INFINITY));
        RunResult { y, exit, dinf, relgap, accuracy, gap, iterations }
    }
}

fn infeasible(values: Vec<f64>, margin: f64) -> RawOutcome {
    RawOutcome {
        values,
        status: SolveStatus::Infeasible,
        duality_gap: None,
        iterations: 0,
        message: format!("best achievable LMI margin {margin:.3e}"),
    }
}

/// Factorised Schur complement `M_ij = tr(A_i X A_j Z⁻¹) + LP`.
///
/// `M` is Jacobi-scaled before the Cholesky factorisation, regularised only
/// if the factorisation fails, and solves are refined against the exact `M`.
struct SchurSystem {
    m: DMatrix<f64>,
    /// `1/√M_ii`.
    scale: DVector<f64>,
    factor: Factor,
}

enum Factor {
    Cholesky(Cholesky<f64, nalgebra::Dyn>),
    /// Eigenvectors and inverted eigenvalues (zero for the dropped ones):
    /// a minimum-norm solve for numerically singular systems.
    Spectral(DMatrix<f64>, DVector<f64>),
}

impl SchurSystem {
    fn solve(&self, rhs: &DVector<f64>) -> DVector<f64> {
        let once = |r: &DVector<f64>| {
            let r = r.component_mul(&self.scale);
            let mut y = match &self.factor {
                Factor::Cholesky(c) => c.solve(&r),
                Factor::Spectral(q, inv) => q * (q.tr_mul(&r)).component_mul(inv),
            };
            y.component_mul_assign(&self.scale);
            y
        };
        let mut y = once(rhs);
        for _ in 0..REFINE_STEPS {
            let res = rhs - &self.m * &y;
            if res.amax() <= 1e-15 * rhs.amax() {
                break;
            }
            y += once(&res);
        }
        y
    }
}

const REFINE_STEPS: usize = 3;
/// Relative eigenvalue below which a direction of the scaled Schur matrix
/// is treated as null.
const SPECTRAL_CUTOFF: f64 = 1e-13;

fn schur_factor(model: &Model, it: &Iterate, zinv: &DMatrix<f64>) -> Option<SchurSystem> {
    let m = model.m();
    let d = model.d;
    let mut schur = DMatrix::zeros(m, m);
    let mut xa = DMatrix::zeros(d, d);
    let ratio = it.xl.component_div(&it.zl);
    for j in 0..m {
        xa.fill(0.0);
        for &(r, s, a) in &model.a[j] {
            for q in 0..d {
                xa[(q, s)] += a * it.x[(q, r)];
            }
        }
        let g = &xa * zinv;
        for i in j..m {
            let mut v: f64 = model.a[i].iter().map(|&(p, q, a)| a * g[(q, p)]).sum();
            for &(ki, ai) in &model.a_lp[i] {
                for &(kj, aj) in &model.a_lp[j] {
                    if ki == kj {
                        v += ai * aj * ratio[ki];
                    }
                }
            }
            schur[(i, j)] = v;
            schur[(j, i)] = v;
        }
    }
    let floor = schur.diagonal().amax().max(1e-300) * 1e-300;
    let scale = schur.diagonal().map(|v| 1.0 / v.max(floor).sqrt());
    let scaled = DMatrix::from_fn(m, m, |i, j| schur[(i, j)] * scale[i] * scale[j]);
    if let Some(c) = Cholesky::new(scaled.clone()) {
        return Some(SchurSystem { m: schur, scale, factor: Factor::Cholesky(c) });
    }
    let eig = SymmetricEigen::new(scaled);
    let top = eig.eigenvalues.amax();
    if !(top.is_finite() && top > 0.0) {
        return None;
    }
    let inv = eig.eigenvalues.map(|l| if l > SPECTRAL_CUTOFF * top { 1.0 / l } else { 0.0 });
    Some(SchurSystem { m: schur, scale, factor: Factor::Spectral(eig.eigenvectors, inv) })
}

#[allow(clippy::too_many_arguments)]
fn direction(
    model: &Model,
    it: &Iterate,
    zinv: &DMatrix<f64>,
    chol: &SchurSystem,
    rp: &DVector<f64>,
    rd: &DMatrix<f64>,
    rdl: &DVector<f64>,
    target: f64,
    corr: Option<&Direction>,
) -> Direction {
    let d = model.d;
    // ΔX = R − X ΔZ Z⁻¹ with R = target·Z⁻¹ − X − ΔX_p ΔZ_p Z⁻¹.
    let mut r = zinv * target - &it.x;
    let mut rl = DVector::from_fn(model.p(), |k, _| (target - it.xl[k] * it.zl[k]) / it.zl[k]);
    if let Some(c) = corr {
        r -= &c.dx * &c.dz * zinv;
        rl -= c.dxl.component_mul(&c.dzl).component_div(&it.zl);
    }
    let x_rd_zinv = &it.x * rd * zinv;
    let xl_rdl = it.xl.component_mul(rdl).component_div(&it.zl);
    let rhs = rp - model.apply_a(&r, &rl) + model.apply_a(&x_rd_zinv, &xl_rdl);
    let dy = chol.solve(&rhs);
    let (at_dy, at_dyl) = model.apply_at(&dy);
    let dz = rd - at_dy;
    let dzl = rdl - at_dyl;
    let mut dx = r - &it.x * &dz * zinv;
    symmetrize(&mut dx);
    let dxl = rl - it.xl.component_mul(&dzl).component_div(&it.zl);
    debug_assert_eq!(dx.nrows(), d);
    Direction { dx, dxl, dy, dz, dzl }
}

/// Largest `α` with `X + αΔX ⪰ 0` and `x + αΔx ≥ 0`.
fn max_step(x: &DMatrix<f64>, dx: &DMatrix<f64>, xl: &DVector<f64>, dxl: &DVector<f64>) -> f64 {
    let mut alpha = f64::INFINITY;
    for (v, dv) in xl.iter().zip(dxl.iter()) {
        if *dv < 0.0 {
            alpha = alpha.min(-v / dv);
        }
    }
    if x.nrows() == 0 {
        return alpha;
    }
    let Some(chol) = Cholesky::new(x.clone()) else {
        return 0.0;
    };
    let l = chol.l();
    let Some(t) = l.solve_lower_triangular(dx) else {
        return 0.0;
    };
    let Some(mut w) = l.solve_lower_triangular(&t.transpose()) else {
        return 0.0;
    };
    symmetrize(&mut w);
    let lmin = SymmetricEigen::new(w).eigenvalues.min();
    if lmin < 0.0 {
        alpha = alpha.min(-1.0 / lmin);
    }
    alpha
}

fn spd_inverse(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let mut inv = Cholesky::new(m.clone())?.inverse();
    symmetrize(&mut inv);
    Some(inv)
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdp::expr::AffineMatrixExpr;
    use crate::sdp::problem::to_standard_form;
    use crate::sdp::vars::{Sign, VarGroup, VarSpace};
    use nalgebra::dmatrix;

    #[test]
    fn min_t_with_antidiagonal() {
        let mut vars = VarSpace::new();
        let t = vars.add_scalar(VarGroup::Gamma, Sign::Free);
        let mut e = AffineMatrixExpr::from_constant(dmatrix![0.0, 1.0; 1.0, 0.0]);
        e.add_entry(Some(t), 0, 0, -1.0);
        e.add_entry(Some(t), 1, 1, -1.0);
        let p = to_standard_form(&e, &[1.0], &vars, 0.0).unwrap();
        let sol = InteriorPointSolver::default().solve(&p, &SolverSettings::default());
        assert_eq!(sol.status, SolveStatus::Optimal, "{}", sol.message);
        assert!((sol.values[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn identity_lmi_is_infeasible() {
        let mut vars = VarSpace::new();
        vars.add_scalar(VarGroup::Gamma, Sign::Free);
        let e = AffineMatrixExpr::from_constant(DMatrix::identity(2, 2));
        let p = to_standard_form(&e, &[1.0], &vars, 1e-8).unwrap();
        let sol = InteriorPointSolver::default().solve(&p, &SolverSettings::default());
        assert_eq!(sol.status, SolveStatus::Infeasible);
    }

    #[test]
    fn sign_constraints_are_active() {
        // min a + b  s.t. diag(-a, -b, 1 - a - b... ) style: [[−a, 0],[0, −b]] ⪯ 0, a ≥ 0.5, b ≥ 0.
        let mut vars = VarSpace::new();
        let a = vars.add_scalar(VarGroup::GammaX, Sign::AtLeast(0.5));
        let b = vars.add_scalar(VarGroup::Gamma, Sign::Nonneg);
        let mut e = AffineMatrixExpr::zeros(2, 2);
        e.add_entry(Some(a), 0, 0, -1.0);
        e.add_entry(Some(b), 1, 1, -1.0);
        e.add_entry(None, 1, 1, 2.0);
        let p = to_standard_form(&e, &[1.0, 1.0], &vars, 0.0).unwrap();
        let sol = InteriorPointSolver::default().solve(&p, &SolverSettings::default());
        assert_eq!(sol.status, SolveStatus::Optimal, "{}", sol.message);
        assert!((sol.values[0] - 0.5).abs() < 1e-6);
        assert!((sol.values[1] - 2.0).abs() < 1e-6);
    }
}

//! Adapter for the Clarabel conic solver.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT};

use super::problem::{finalize, ConicProblem, RawOutcome, SdpSolver, Solution, SolveStatus, SolverSettings};

#[derive(Debug, Clone, Copy, Default)]
pub struct ClarabelSolver;

impl SdpSolver for ClarabelSolver {
    fn name(&self) -> &'static str {
        "clarabel"
    }

    fn solve(&self, problem: &ConicProblem, settings: &SolverSettings) -> Solution {
        finalize(problem, solve_raw(problem, settings), self.name())
    }
}

/// Position of `(i, j)`, `i ≤ j`, in Clarabel's column-major upper-triangle
/// vectorisation.
fn svec_index(i: usize, j: usize) -> usize {
    j * (j + 1) / 2 + i
}

fn solve_raw(problem: &ConicProblem, settings: &SolverSettings) -> RawOutcome {
    let n = problem.num_vars();
    let d = problem.dim;
    let sqrt2 = std::f64::consts::SQRT_2;
    let bounded: Vec<(usize, f64)> =
        problem.lower_bounds.iter().enumerate().filter_map(|(k, lb)| lb.map(|lb| (k, lb))).collect();
    let p = bounded.len();
    let rows = p + d * (d + 1) / 2;

    // Rows: [nonneg slots | svec(S)]; s = b − A v.
    let mut b = vec![0.0; rows];
    // Aim slightly inside every cone so that the returned point, which is
    // only feasible to the solver tolerance, passes the exact checks.
    let shift = 10.0 * settings.tol;
    for (slot, &(_, lb)) in bounded.iter().enumerate() {
        b[slot] = -lb - shift;
    }
    let scale = |i: usize, j: usize| if i == j { 1.0 } else { sqrt2 };
    for &(i, j, a) in &problem.constant.entries {
        b[p + svec_index(i, j)] += a * scale(i, j);
    }
    for i in 0..d {
        b[p + svec_index(i, i)] -= problem.margin + shift;
    }

    let mut colptr = Vec::with_capacity(n + 1);
    let mut rowval = Vec::new();
    let mut nzval = Vec::new();
    let mut next_bound = bounded.iter().enumerate().peekable();
    for k in 0..n {
        colptr.push(rowval.len());
        if let Some(&(slot, &(var, _))) = next_bound.peek() {
            if var == k {
                rowval.push(slot);
                nzval.push(-1.0);
                next_bound.next();
            }
        }
        let mut col: Vec<(usize, f64)> = problem.coefficients[k]
            .entries
            .iter()
            .map(|&(i, j, a)| (p + svec_index(i, j), -a * scale(i, j)))
            .collect();
        col.sort_by_key(|e| e.0);
        for (r, v) in col {
            rowval.push(r);
            nzval.push(v);
        }
    }
    colptr.push(rowval.len());

    let a = CscMatrix::new(rows, n, colptr, rowval, nzval);
    let pmat = CscMatrix::zeros((n, n));
    let mut cones = Vec::new();
    if p > 0 {
        cones.push(SupportedConeT::NonnegativeConeT(p));
    }
    if d > 0 {
        cones.push(SupportedConeT::PSDTriangleConeT(d));
    }
    let tol = settings.tol;
    let built = DefaultSettingsBuilder::default()
        .max_iter(settings.max_iters.min(u32::MAX as usize) as u32)
        .verbose(settings.verbose)
        .tol_gap_abs(tol)
        .tol_gap_rel(tol)
        .tol_feas(tol)
        .presolve_enable(false)
        .chordal_decomposition_enable(false)
        .build();
    let failed = |message: String| RawOutcome {
        values: vec![0.0; n],
        status: SolveStatus::Failed,
        duality_gap: None,
        iterations: 0,
        message,
    };
    let clarabel_settings = match built {
        Ok(s) => s,
        Err(e) => return failed(format!("settings: {e}")),
    };
    let mut solver = match DefaultSolver::new(&pmat, &problem.objective, &a, &b, &cones, clarabel_settings) {
        Ok(s) => s,
        Err(e) => return failed(format!("setup: {e}")),
    };
    solver.solve();
    let sol = &solver.solution;
    let (status, message) = match sol.status {
        SolverStatus::Solved => (SolveStatus::Optimal, String::new()),
        SolverStatus::AlmostSolved => (SolveStatus::Inaccurate, "reduced accuracy".to_string()),
        SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => {
            (SolveStatus::Infeasible, format!("{:?}", sol.status))
        }
        SolverStatus::DualInfeasible | SolverStatus::AlmostDualInfeasible => {
            (SolveStatus::Failed, "objective unbounded".to_string())
        }
        other => (SolveStatus::Failed, format!("{other:?}")),
    };
    let duality_gap = (status == SolveStatus::Optimal || status == SolveStatus::Inaccurate)
        .then(|| (sol.obj_val - sol.obj_val_dual).abs());
    RawOutcome { values: sol.x.clone(), status, duality_gap, iterations: sol.iterations as usize, message }
}

//! Conic standard form shared by all backends.
//!
//! A [`ConicProblem`] asks for `min cᵀv` subject to
//!
//! ```text
//! S(v) = S₀ + Σ vᵢ Sᵢ ⪰ margin · I,      vᵢ ≥ lbᵢ  (for sign-constrained i)
//! ```
//!
//! with one dense PSD block. An LMI `Ω(v) ⪯ −ε I` is stored as `S = −Ω`,
//! `margin = ε`, so negation is the only arithmetic between the two.

use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::expr::AffineMatrixExpr;
use super::vars::{VarId, VarSpace};
use crate::error::{Error, Result};

/// Upper-triangle (`i ≤ j`) entries of a symmetric matrix.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseSym {
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseSym {
    pub fn from_dense(m: &DMatrix<f64>, what: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for j in 0..m.ncols() {
            for i in 0..=j {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::NonSymmetric(what.to_string()));
                }
                if m[(i, j)] != 0.0 {
                    entries.push((i, j, m[(i, j)]));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn to_dense(&self, dim: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(dim, dim);
        self.add_to(&mut m, 1.0);
        m
    }

    pub fn add_to(&self, m: &mut DMatrix<f64>, scale: f64) {
        for &(i, j, a) in &self.entries {
            m[(i, j)] += scale * a;
            if i != j {
                m[(j, i)] += scale * a;
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConicProblem {
    pub dim: usize,
    pub objective: Vec<f64>,
    pub constant: SparseSym,
    pub coefficients: Vec<SparseSym>,
    pub margin: f64,
    pub lower_bounds: Vec<Option<f64>>,
    pub names: Vec<String>,
}

impl ConicProblem {
    pub fn num_vars(&self) -> usize {
        self.coefficients.len()
    }

    /// `S(v)` as a dense matrix.
    pub fn slack(&self, values: &[f64]) -> DMatrix<f64> {
        let mut s = self.constant.to_dense(self.dim);
        for (c, &v) in self.coefficients.iter().zip(values) {
            if v != 0.0 {
                c.add_to(&mut s, v);
            }
        }
        s
    }

    /// The LMI expression `Ω = −S` this problem was built from.
    pub fn lmi_expr(&self) -> AffineMatrixExpr {
        let mut e = AffineMatrixExpr::zeros(self.dim, self.dim);
        let mut put = |var: Option<VarId>, s: &SparseSym| {
            for &(i, j, a) in &s.entries {
                e.add_entry(var, i, j, -a);
                if i != j {
                    e.add_entry(var, j, i, -a);
                }
            }
        };
        put(None, &self.constant);
        for (k, c) in self.coefficients.iter().enumerate() {
            put(Some(VarId(k)), c);
        }
        e
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().zip(values).map(|(c, v)| c * v).sum()
    }

    /// Sparse text dump, one nonzero per line: `block row col var coef`.
    ///
    /// Block 0 is the objective (`row = col = 0`), block 1 the PSD slack
    /// `S` (upper triangle, 1-based row/col), block 2 the sign constraints
    /// `v ≥ lb` (coefficient = lower bound). Variable id 0 denotes the
    /// constant term, `k + 1` the k-th variable.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# reduced-nn conic problem");
        let _ = writeln!(out, "# vars {} psd_dim {} margin {:e}", self.num_vars(), self.dim, self.margin);
        for (k, c) in self.objective.iter().enumerate() {
            if *c != 0.0 {
                let _ = writeln!(out, "0 0 0 {} {:e}", k + 1, c);
            }
        }
        for &(i, j, a) in &self.constant.entries {
            let _ = writeln!(out, "1 {} {} 0 {:e}", i + 1, j + 1, a);
        }
        for (k, c) in self.coefficients.iter().enumerate() {
            for &(i, j, a) in &c.entries {
                let _ = writeln!(out, "1 {} {} {} {:e}", i + 1, j + 1, k + 1, a);
            }
        }
        for (k, lb) in self.lower_bounds.iter().enumerate() {
            if let Some(lb) = lb {
                let _ = writeln!(out, "2 {} {} {} {:e}", k + 1, k + 1, k + 1, lb);
            }
        }
        out
    }
}

/// Encodes `min objectiveᵀv s.t. lmi(v) ⪯ −eps_psd·I` plus the sign
/// constraints recorded in `vars`.
pub fn to_standard_form(
    lmi: &AffineMatrixExpr,
    objective: &[f64],
    vars: &VarSpace,
    eps_psd: f64,
) -> Result<ConicProblem> {
    if lmi.nrows() != lmi.ncols() {
        return Err(Error::NonSymmetric("the LMI (not square)".into()));
    }
    if objective.len() != vars.len() {
        return Err(Error::DimensionMismatch {
            what: "objective".into(),
            expected: vars.len(),
            got: objective.len(),
        });
    }
    let dim = lmi.dim();
    let constant = SparseSym::from_dense(&-lmi.constant(), "the constant term")?;
    let mut coefficients = vec![SparseSym::default(); vars.len()];
    for (v, a) in lmi.terms() {
        if v.0 >= vars.len() {
            return Err(Error::InvalidOptions(format!("expression uses unregistered variable {v}")));
        }
        coefficients[v.0] = SparseSym::from_dense(&-a, &vars.info(v).name)?;
    }
    Ok(ConicProblem {
        dim,
        objective: objective.to_vec(),
        constant,
        coefficients,
        margin: eps_psd,
        lower_bounds: vars.lower_bounds(),
        names: vars.iter().map(|(_, info)| info.name.clone()).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Inaccurate,
    Failed,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Inaccurate => "inaccurate",
            SolveStatus::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub values: Vec<f64>,
    pub status: SolveStatus,
    pub objective: f64,
    /// `λ_max(Ω(v))` of the LMI at `values`.
    pub lmi_lambda_max: f64,
    pub duality_gap: Option<f64>,
    pub iterations: usize,
    pub backend: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    pub tol: f64,
    pub max_iters: usize,
    pub verbose: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self { tol: 1e-8, max_iters: 100_000, verbose: false }
    }
}

/// Slack allowed on the PSD margin and the sign constraints when certifying
/// an `Optimal` claim.
pub const PSD_CHECK_TOL: f64 = 1e-7;
pub const SIGN_CHECK_TOL: f64 = 1e-7;

pub trait SdpSolver: Send + Sync {
    fn name(&self) -> &'static str;

    fn solve(&self, problem: &ConicProblem, settings: &SolverSettings) -> Solution;
}

/// Raw backend output, before the shared acceptance checks.
#[derive(Debug, Clone)]
pub(crate) struct RawOutcome {
    pub values: Vec<f64>,
    pub status: SolveStatus,
    pub duality_gap: Option<f64>,
    pub iterations: usize,
    pub message: String,
}

/// Clamps marginal sign violations and downgrades `Optimal` to `Inaccurate`
/// when the LMI or sign constraints do not hold at the returned point.
pub(crate) fn finalize(problem: &ConicProblem, raw: RawOutcome, backend: &'static str) -> Solution {
    let RawOutcome { mut values, mut status, duality_gap, iterations, mut message } = raw;
    values.resize(problem.num_vars(), 0.0);
    let mut sign_ok = true;
    for (v, lb) in values.iter_mut().zip(&problem.lower_bounds) {
        if let Some(lb) = lb {
            if *v < *lb {
                sign_ok &= *v >= *lb - SIGN_CHECK_TOL;
                *v = *lb;
            }
        }
    }
    let lmi_lambda_max = if values.iter().all(|v| v.is_finite()) {
        -min_eigenvalue(&problem.slack(&values))
    } else {
        f64::INFINITY
    };
    if status == SolveStatus::Optimal {
        if lmi_lambda_max > -problem.margin + PSD_CHECK_TOL {
            status = SolveStatus::Inaccurate;
            message = format!("LMI check failed: lambda_max = {lmi_lambda_max:.3e}");
        } else if !sign_ok {
            status = SolveStatus::Inaccurate;
            message = "sign constraints violated beyond tolerance".into();
        }
    }
    Solution {
        objective: problem.objective_value(&values),
        values,
        status,
        lmi_lambda_max,
        duality_gap,
        iterations,
        backend,
        message,
    }
}

pub(crate) fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return f64::INFINITY;
    }
    SymmetricEigen::new(m.clone()).eigenvalues.min()
}

/// Result of [`check_nsd`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NsdCheck {
    pub is_nsd: bool,
    pub lambda_max: f64,
}

/// Tests `λ_max(m) ≤ tol` for a symmetric matrix.
pub fn check_nsd(m: &DMatrix<f64>, tol: f64) -> Result<NsdCheck> {
    if !m.is_square() {
        return Err(Error::NotSymmetricMatrix(f64::INFINITY));
    }
    let scale = m.amax().max(1.0);
    let asym = (m - m.transpose()).amax();
    if asym > 1e-12 * scale {
        return Err(Error::NotSymmetricMatrix(asym));
    }
    let lambda_max = SymmetricEigen::new(m.clone()).eigenvalues.max();
    Ok(NsdCheck { is_nsd: lambda_max <= tol, lambda_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sdp::vars::{Sign, VarGroup};
    use nalgebra::dmatrix;

    fn min_t_problem() -> (AffineMatrixExpr, VarSpace) {
        let mut vars = VarSpace::new();
        let t = vars.add_scalar(VarGroup::Gamma, Sign::Free);
        let mut e = AffineMatrixExpr::from_constant(dmatrix![0.0, 1.0; 1.0, 0.0]);
        e.add_entry(Some(t), 0, 0, -1.0);
        e.add_entry(Some(t), 1, 1, -1.0);
        (e, vars)
    }

    #[test]
    fn round_trip_is_exact() {
        let (e, vars) = min_t_problem();
        let p = to_standard_form(&e, &[1.0], &vars, 1e-8).unwrap();
        assert_eq!(p.num_vars(), vars.len());
        assert_eq!(p.lmi_expr(), e);
    }

    #[test]
    fn asymmetric_coefficient_is_rejected() {
        let (mut e, vars) = min_t_problem();
        e.add_entry(Some(VarId(0)), 0, 1, 0.5);
        assert!(matches!(to_standard_form(&e, &[1.0], &vars, 0.0), Err(Error::NonSymmetric(_))));
    }

    #[test]
    fn dump_lists_every_nonzero() {
        let (e, vars) = min_t_problem();
        let p = to_standard_form(&e, &[1.0], &vars, 1e-8).unwrap();
        let lines: Vec<_> = p.dump().lines().filter(|l| !l.starts_with('#')).map(String::from).collect();
        // objective, one constant off-diagonal, two diagonal coefficients
        assert_eq!(lines.len(), 4);
        assert!(lines.contains(&"1 1 2 0 -1e0".to_string()));
        assert!(lines.contains(&"1 1 1 1 1e0".to_string()));
    }

    #[test]
    fn nsd_examples() {
        let c = check_nsd(&dmatrix![-1.0, 0.0; 0.0, -2.0], 1e-6).unwrap();
        assert!(c.is_nsd);
        assert!((c.lambda_max + 1.0).abs() < 1e-14);
        let c = check_nsd(&dmatrix![-1.0, 0.0; 0.0, 1e-3], 1e-6).unwrap();
        assert!(!c.is_nsd);
        assert!((c.lambda_max - 1e-3).abs() < 1e-14);
        assert!(check_nsd(&dmatrix![0.0, 1.0; 0.0, 0.0], 1e-6).is_err());
    }
}

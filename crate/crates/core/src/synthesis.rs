//! Reduced-network synthesis and fixed-pair certification.
//!
//! [`synthesize`] solves
//!
//! ```text
//! min  w₁γₓ + w₂γ   s.t.  Ω(v) ⪯ −ε I,  multipliers admissible
//! ```
//!
//! over the linearised multiplier matrix, then reads the reduced network back
//! as `Ψ = T0_r⁻¹F_Ψ`, `Ψ₀ = T0_r⁻¹F_0`, `β = T0_r⁻¹F_β`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::network::{ActivationKind, InputBox, LayerwiseNetwork, ReducedNetwork, Structure};
use crate::qc::{
    analysis_lambda_expr, default_j1, default_j2, error_terms, error_terms_fixed, input_qc_expr, relu_lambda_expr,
    AnalysisOptions, Dims, ErrorTerms, MultiplierSet, ReluVarOptions, ReluVars,
};
use crate::sdp::{
    assemble_schur, to_standard_form, AffineMatrixExpr, Backend, ConicProblem, Sign, Solution, SolveStatus,
    SolverSettings, VarBlock, VarGroup, VarId, VarSpace,
};

pub const DEFAULT_EPS_PSD: f64 = 1e-8;
pub const DEFAULT_EPS_T0R: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisOptions {
    pub w1: f64,
    pub w2: f64,
    /// `N × M`; `None` selects `[I_M; 0]`.
    pub j1: Option<DMatrix<f64>>,
    /// Length `M`; `None` selects all ones.
    pub j2: Option<DVector<f64>>,
    pub structure: Structure,
    pub diagonal_multiplier_mode: bool,
    pub eps_psd: f64,
    pub eps_t0r: f64,
    pub backend: Backend,
    pub settings: SolverSettings,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        Self {
            w1: 1.0,
            w2: 1.0,
            j1: None,
            j2: None,
            structure: Structure::GeneralImplicit,
            diagonal_multiplier_mode: false,
            eps_psd: DEFAULT_EPS_PSD,
            eps_t0r: DEFAULT_EPS_T0R,
            backend: Backend::default(),
            settings: SolverSettings::default(),
        }
    }
}

impl SynthesisOptions {
    pub fn validate(&self) -> Result<()> {
        validate_weights(self.w1, self.w2)?;
        if !(self.eps_psd >= 0.0) || !(self.eps_t0r > 0.0) {
            return Err(Error::InvalidOptions("eps_psd must be >= 0 and eps_T0r > 0".into()));
        }
        Ok(())
    }
}

fn validate_weights(w1: f64, w2: f64) -> Result<()> {
    if !(w1 >= 0.0 && w2 >= 0.0 && w1.is_finite() && w2.is_finite()) || w1 + w2 == 0.0 {
        return Err(Error::InvalidOptions(format!("weights must be nonnegative and not both zero (w1 = {w1}, w2 = {w2})")));
    }
    Ok(())
}

/// The assembled synthesis SDP together with its variable layout.
#[derive(Debug, Clone)]
pub struct SynthesisProblem {
    pub dims: Dims,
    pub partition: Vec<usize>,
    pub structure: Structure,
    pub eps_t0r: f64,
    pub space: VarSpace,
    pub relu: ReluVars,
    pub tau: VarBlock,
    pub psi_f: VarBlock,
    pub beta_out: VarBlock,
    pub gamma_x: VarId,
    pub gamma: VarId,
    pub pi: AffineMatrixExpr,
    pub lambda: AffineMatrixExpr,
    pub errors: ErrorTerms,
    pub omega: AffineMatrixExpr,
    pub conic: ConicProblem,
}

impl SynthesisProblem {
    /// `Π + Λ − Γ + LᵀL` at `values` (the matrix whose negativity the Schur
    /// LMI certifies).
    pub fn unreduced_matrix(&self, values: &[f64]) -> DMatrix<f64> {
        unreduced(&self.pi, &self.lambda, &self.errors, values)
    }
}

fn unreduced(pi: &AffineMatrixExpr, lambda: &AffineMatrixExpr, errors: &ErrorTerms, values: &[f64]) -> DMatrix<f64> {
    let l = errors.l.eval(values);
    let m = pi.eval(values) + lambda.eval(values) - errors.gamma.eval(values) + l.transpose() * l;
    (&m + m.transpose()) * 0.5
}

#[derive(Debug, Clone)]
pub struct SynthesisResult {
    pub reduced: ReducedNetwork,
    pub gamma_x: f64,
    pub gamma: f64,
    /// `γₓ · sup_{x ∈ box} ‖x‖² + γ`.
    pub bound_sup: f64,
    pub multipliers: MultiplierSet,
    pub f_psi: DMatrix<f64>,
    pub f0: DMatrix<f64>,
    pub f_beta: DVector<f64>,
    /// `λ_max(Π + Λ − Γ + LᵀL)` at the solution; `≤ 0` certifies the bound.
    pub unreduced_lambda_max: f64,
    pub solution: Solution,
}

impl SynthesisResult {
    /// Certified bound on `‖f(x) − g(x)‖²` at `x`.
    pub fn bound_at(&self, x: &DVector<f64>) -> f64 {
        self.gamma_x * x.norm_squared() + self.gamma
    }
}

/// Builds the synthesis SDP for a reduced network with layer widths
/// `reduced_partition`.
pub fn build_problem(
    full: &LayerwiseNetwork,
    reduced_partition: &[usize],
    bx: &InputBox,
    opts: &SynthesisOptions,
) -> Result<SynthesisProblem> {
    opts.validate()?;
    if full.activation() != ActivationKind::Relu {
        return Err(Error::UnsupportedActivation(full.activation()));
    }
    bx.validate()?;
    if bx.dim() != full.input_dim() {
        return Err(Error::DimensionMismatch { what: "input box".into(), expected: full.input_dim(), got: bx.dim() });
    }
    let implicit = full.to_implicit();
    let m: usize = reduced_partition.iter().sum();
    let dims = Dims::new(full.input_dim(), full.hidden_size(), m, full.output_dim());
    let j1 = match &opts.j1 {
        Some(j) => j.clone(),
        None => default_j1(dims.n, m)?,
    };
    let j2 = opts.j2.clone().unwrap_or_else(|| default_j2(m));

    let mut space = VarSpace::new();
    let relu = ReluVars::register(
        &mut space,
        dims.n_x,
        dims.n,
        &ReluVarOptions {
            diagonal_multipliers: opts.diagonal_multiplier_mode,
            structure: opts.structure,
            reduced_partition: reduced_partition.to_vec(),
            eps_t0r: opts.eps_t0r,
        },
    )?;
    let tau = space.add_diagonal(VarGroup::TauInf, dims.n_x, Sign::Nonneg);
    let psi_f = space.add_matrix(VarGroup::PsiF, dims.n_f, m, Sign::Free, |_, _| true);
    let beta_out = space.add_vector(VarGroup::BetaOut, dims.n_f, Sign::Free);
    let gamma_x = space.add_scalar(VarGroup::GammaX, Sign::Nonneg);
    let gamma = space.add_scalar(VarGroup::Gamma, Sign::Nonneg);

    let pi = input_qc_expr(bx, &dims, &tau)?;
    let lambda = relu_lambda_expr(&implicit, &dims, &j1, &j2, &relu)?;
    let errors = error_terms(&implicit, &dims, &psi_f, &beta_out, gamma_x, gamma)?;
    let omega = assemble_schur(&pi, &lambda, &errors)?;

    let mut objective = vec![0.0; space.len()];
    objective[gamma_x.0] = opts.w1;
    objective[gamma.0] = opts.w2;
    let conic = to_standard_form(&omega, &objective, &space, opts.eps_psd)?;

    Ok(SynthesisProblem {
        dims,
        partition: reduced_partition.to_vec(),
        structure: opts.structure,
        eps_t0r: opts.eps_t0r,
        space,
        relu,
        tau,
        psi_f,
        beta_out,
        gamma_x,
        gamma,
        pi,
        lambda,
        errors,
        omega,
        conic,
    })
}

/// Synthesises a reduced network and its certified error bound.
///
/// Returns `Err(Infeasible)` / `Err(SolverFailed)` for those statuses; an
/// `Inaccurate` solve is returned with its status recorded in `solution`.
pub fn synthesize(
    full: &LayerwiseNetwork,
    reduced_partition: &[usize],
    bx: &InputBox,
    opts: &SynthesisOptions,
) -> Result<SynthesisResult> {
    let problem = build_problem(full, reduced_partition, bx, opts)?;
    let solver = opts.backend.solver()?;
    let solution = solver.solve(&problem.conic, &opts.settings);
    match solution.status {
        SolveStatus::Infeasible => {
            return Err(Error::Infeasible(format!(
                "{} (consider a larger reduced network)",
                solution.message
            )))
        }
        SolveStatus::Failed => return Err(Error::SolverFailed(solution.message.clone())),
        SolveStatus::Optimal | SolveStatus::Inaccurate => {}
    }
    let reduced = recover(&solution.values, &problem, full.activation())?;
    let v = &solution.values;
    let gamma_x = v[problem.gamma_x.0].max(0.0);
    let gamma = v[problem.gamma.0].max(0.0);
    Ok(SynthesisResult {
        reduced,
        gamma_x,
        gamma,
        bound_sup: gamma_x * bx.max_norm_sq() + gamma,
        multipliers: MultiplierSet::from_values(&problem.relu, &problem.tau, v),
        f_psi: problem.relu.f_psi.matrix(v),
        f0: problem.relu.f0.matrix(v),
        f_beta: problem.relu.f_beta.vector(v),
        unreduced_lambda_max: crate::sdp::check_nsd(&problem.unreduced_matrix(v), f64::INFINITY)
            .map(|c| c.lambda_max)
            .unwrap_or(f64::INFINITY),
        solution,
    })
}

/// Reads the reduced network off a solution: rows of `F_Ψ`, `F_0`, `F_β`
/// are divided by the matching diagonal entry of `T0_r`.
pub fn recover(values: &[f64], problem: &SynthesisProblem, activation: ActivationKind) -> Result<ReducedNetwork> {
    let t0r = problem.relu.t0_r.vector(values);
    for (index, &value) in t0r.iter().enumerate() {
        if !(value.is_finite() && value >= 0.5 * problem.eps_t0r) {
            return Err(Error::SingularRecovery { index, value });
        }
    }
    let scale_rows = |m: DMatrix<f64>| {
        let mut m = m;
        for (i, mut row) in m.row_iter_mut().enumerate() {
            row /= t0r[i];
        }
        m
    };
    let psi = scale_rows(problem.relu.f_psi.matrix(values));
    let psi0 = scale_rows(problem.relu.f0.matrix(values));
    let beta = problem.relu.f_beta.vector(values).component_div(&t0r);
    ReducedNetwork::new(
        psi,
        psi0,
        beta,
        problem.psi_f.matrix(values),
        problem.beta_out.vector(values),
        problem.partition.clone(),
        problem.structure,
        activation,
    )
}

/// Certificate for a fixed (full, reduced) pair.
#[derive(Debug, Clone)]
pub struct PairCertificate {
    pub gamma_x: f64,
    pub gamma: f64,
    pub bound_sup: f64,
    pub status: SolveStatus,
    pub solution: Solution,
    /// `λ_max(Π + Λ − Γ + LᵀL)` at the solution.
    pub unreduced_lambda_max: f64,
}

/// Options for [`verify_pair_bound`] beyond the objective weights.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyOptions {
    pub analysis: AnalysisOptions,
    pub backend: Backend,
    pub settings: SolverSettings,
}

/// Certifies `‖f(x) − g(x)‖² ≤ γₓ‖x‖² + γ` on the box for a given pair.
pub fn verify_pair_bound(
    full: &LayerwiseNetwork,
    reduced: &ReducedNetwork,
    bx: &InputBox,
    w1: f64,
    w2: f64,
    opts: &VerifyOptions,
) -> Result<PairCertificate> {
    validate_weights(w1, w2)?;
    bx.validate()?;
    if bx.dim() != full.input_dim() {
        return Err(Error::DimensionMismatch { what: "input box".into(), expected: full.input_dim(), got: bx.dim() });
    }
    let implicit = full.to_implicit();
    let dims = Dims::new(full.input_dim(), full.hidden_size(), reduced.hidden_size(), full.output_dim());
    let mut space = VarSpace::new();
    let (lambda, _) = analysis_lambda_expr(&implicit, reduced, full.activation(), &mut space, opts.analysis)?;
    let tau = space.add_diagonal(VarGroup::TauInf, dims.n_x, Sign::Nonneg);
    let gamma_x = space.add_scalar(VarGroup::GammaX, Sign::Nonneg);
    let gamma = space.add_scalar(VarGroup::Gamma, Sign::Nonneg);
    let pi = input_qc_expr(bx, &dims, &tau)?;
    let errors = error_terms_fixed(&implicit, reduced, &dims, gamma_x, gamma)?;
    let omega = assemble_schur(&pi, &lambda, &errors)?;
    let mut objective = vec![0.0; space.len()];
    objective[gamma_x.0] = w1;
    objective[gamma.0] = w2;
    let conic = to_standard_form(&omega, &objective, &space, DEFAULT_EPS_PSD)?;
    let solution = opts.backend.solver()?.solve(&conic, &opts.settings);
    match solution.status {
        SolveStatus::Infeasible => return Err(Error::Infeasible(solution.message.clone())),
        SolveStatus::Failed => return Err(Error::SolverFailed(solution.message.clone())),
        _ => {}
    }
    let v = &solution.values;
    let gx = v[gamma_x.0].max(0.0);
    let g = v[gamma.0].max(0.0);
    let unreduced_lambda_max = crate::sdp::check_nsd(&unreduced(&pi, &lambda, &errors, v), f64::INFINITY)
        .map(|c| c.lambda_max)
        .unwrap_or(f64::INFINITY);
    Ok(PairCertificate {
        gamma_x: gx,
        gamma: g,
        bound_sup: gx * bx.max_norm_sq() + g,
        status: solution.status,
        solution,
        unreduced_lambda_max,
    })
}

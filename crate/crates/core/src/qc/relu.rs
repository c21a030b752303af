//! Linearised ReLU multiplier matrix used for synthesis.
//!
//! The reduced network's parameters enter only through `F_Ψ = T0_r Ψ`,
//! `F_0 = T0_r Ψ₀`, `F_β = T0_r β`, and the reduced cross and
//! positive-complement multipliers are tied to `T0_r` via `T_r^× = T0_r J₁ᵀ`,
//! `T_r^{c+} = T0_r J₂`. With these substitutions every constraint of the
//! stack is linear in the decision variables.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{diff, full_preactivation, unit, Dims};
use crate::error::{Error, Result};
use crate::network::{block_of, ImplicitForm, Structure};
use crate::sdp::{AffineMatrixExpr, LinForm, QuadFormBuilder, Sign, VarBlock, VarGroup, VarSpace};

/// `J₁ = [I_M; 0]`.
pub fn default_j1(n: usize, m: usize) -> Result<DMatrix<f64>> {
    if m > n {
        return Err(Error::InvalidOptions(format!(
            "default J1 needs M <= N (got M = {m}, N = {n}); pass an explicit J1"
        )));
    }
    Ok(DMatrix::from_fn(n, m, |i, j| if i == j { 1.0 } else { 0.0 }))
}

/// `J₂ = 𝟙_M`.
pub fn default_j2(m: usize) -> DVector<f64> {
    DVector::from_element(m, 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReluVarOptions {
    /// Restrict `T^×` to the entries `(p, p)`, `p < min(N, M)`.
    pub diagonal_multipliers: bool,
    pub structure: Structure,
    /// Layer partition of the reduced network.
    pub reduced_partition: Vec<usize>,
    /// Lower bound on the diagonal of `T0_r`.
    pub eps_t0r: f64,
}

/// Decision variables of the synthesis multiplier matrix.
#[derive(Debug, Clone)]
pub struct ReluVars {
    pub t0: VarBlock,
    pub t0_r: VarBlock,
    pub tplus: VarBlock,
    pub tplus_r: VarBlock,
    pub tcplus: VarBlock,
    pub tcross: VarBlock,
    pub f_psi: VarBlock,
    pub f0: VarBlock,
    pub f_beta: VarBlock,
}

impl ReluVars {
    pub fn register(space: &mut VarSpace, n_x: usize, n: usize, opts: &ReluVarOptions) -> Result<Self> {
        let m: usize = opts.reduced_partition.iter().sum();
        if m == 0 || opts.reduced_partition.contains(&0) {
            return Err(Error::InvalidOptions(format!("bad reduced partition {:?}", opts.reduced_partition)));
        }
        if !(opts.eps_t0r > 0.0) {
            return Err(Error::InvalidOptions("eps_T0r must be positive".into()));
        }
        let blocks = block_of(&opts.reduced_partition);
        let feedforward = opts.structure == Structure::StrictFeedforward;
        let diag = opts.diagonal_multipliers;
        Ok(Self {
            t0: space.add_diagonal(VarGroup::T0, n, Sign::Free),
            t0_r: space.add_diagonal(VarGroup::T0Reduced, m, Sign::AtLeast(opts.eps_t0r)),
            tplus: space.add_vector(VarGroup::TPlus, n, Sign::Nonneg),
            tplus_r: space.add_vector(VarGroup::TPlusReduced, m, Sign::Nonneg),
            tcplus: space.add_vector(VarGroup::TCompPlus, n, Sign::Nonneg),
            tcross: space.add_matrix(VarGroup::TCross, n, m, Sign::Nonneg, |i, j| !diag || i == j),
            // The diagonal of F_Ψ is pinned: (T0_r + t, F_Ψ[i,i] + t) leaves Λ unchanged
            // (a self-loop only rescales its row), so a free diagonal makes
            // the optimal set unbounded without enlarging the set of networks.
            f_psi: space.add_matrix(VarGroup::FPsi, m, m, Sign::Free, |i, j| {
                if feedforward {
                    blocks[j] < blocks[i]
                } else {
                    i != j
                }
            }),
            f0: space.add_matrix(VarGroup::F0, m, n_x, Sign::Free, |_, _| true),
            f_beta: space.add_vector(VarGroup::FBeta, m, Sign::Free),
        })
    }

    pub fn m(&self) -> usize {
        self.t0_r.rows
    }

    pub fn n(&self) -> usize {
        self.t0.rows
    }
}

/// Numeric multiplier values (read back from a solution, or drawn in tests).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierSet {
    /// Diagonal of `T0`.
    pub t0: Vec<f64>,
    /// Diagonal of `T0_r`.
    pub t0_r: Vec<f64>,
    pub tplus: Vec<f64>,
    pub tplus_r: Vec<f64>,
    pub tcplus: Vec<f64>,
    /// `N × M`, row-major.
    pub tcross: Vec<Vec<f64>>,
    /// Diagonal of `τ_{x∞}`.
    pub tau_inf: Vec<f64>,
}

impl MultiplierSet {
    pub fn from_values(vars: &ReluVars, tau: &VarBlock, values: &[f64]) -> Self {
        let tc = vars.tcross.matrix(values);
        Self {
            t0: vars.t0.vector(values).as_slice().to_vec(),
            t0_r: vars.t0_r.vector(values).as_slice().to_vec(),
            tplus: vars.tplus.vector(values).as_slice().to_vec(),
            tplus_r: vars.tplus_r.vector(values).as_slice().to_vec(),
            tcplus: vars.tcplus.vector(values).as_slice().to_vec(),
            tcross: tc.row_iter().map(|r| r.iter().copied().collect()).collect(),
            tau_inf: tau.vector(values).as_slice().to_vec(),
        }
    }

    /// Worst violation of the sign constraints (`0` when admissible).
    pub fn sign_violation(&self, eps_t0r: f64) -> f64 {
        let neg = |v: &[f64]| v.iter().fold(0.0_f64, |acc, x| acc.max(-x));
        let t0r = self.t0_r.iter().fold(0.0_f64, |acc, x| acc.max(eps_t0r - x));
        [
            t0r,
            neg(&self.tplus),
            neg(&self.tplus_r),
            neg(&self.tcplus),
            neg(&self.tau_inf),
            self.tcross.iter().map(|r| neg(r)).fold(0.0, f64::max),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// `Λ_ReLU` as an affine expression over [`ReluVars`].
///
/// Sum of (each scaled by 2):
/// complementarity `x̌ᵀT0(ξ − x̌)`, positivity `T⁺ᵀx̌`, positive complement
/// `T^{c+}ᵀ(x̌ − ξ)`, their reduced analogues in `ž, ζ`, and the cross
/// terms `(x̌ − ξ)ᵀT^× ž` and `(ž − ζ)ᵀT_r^× x̌`, where `ξ`, `ζ` are the full
/// and reduced pre-activations.
pub fn relu_lambda_expr(
    full: &ImplicitForm,
    dims: &Dims,
    j1: &DMatrix<f64>,
    j2: &DVector<f64>,
    vars: &ReluVars,
) -> Result<AffineMatrixExpr> {
    let (n, m) = (dims.n, dims.m);
    if full.hidden_size() != n || vars.n() != n || vars.m() != m || full.input_dim() != dims.n_x {
        return Err(Error::DimensionMismatch { what: "Lambda blocks".into(), expected: n, got: full.hidden_size() });
    }
    if j1.shape() != (n, m) {
        return Err(Error::DimensionMismatch { what: "J1 rows".into(), expected: n, got: j1.nrows() });
    }
    if j2.len() != m {
        return Err(Error::DimensionMismatch { what: "J2".into(), expected: m, got: j2.len() });
    }
    if j1.iter().chain(j2.iter()).any(|v| !(*v >= 0.0)) {
        return Err(Error::InvalidMultiplier("J1 and J2 must be entrywise nonnegative".into()));
    }

    let (oxc, oz, o1) = (dims.ox_full(), dims.oz(), dims.o1());
    let one = unit(o1);
    let mut q = QuadFormBuilder::new(dims.mu_dim());

    let xi: Vec<LinForm> = (0..n).map(|i| full_preactivation(full, dims, i)).collect();
    let slack: Vec<LinForm> = (0..n).map(|i| diff(&unit(oxc + i), &xi[i])).collect(); // x̌ − ξ

    for i in 0..n {
        let xc = unit(oxc + i);
        q.add_product(vars.t0.at(i), &xc, &xi[i], 2.0);
        q.add_product(vars.t0.at(i), &xc, &xc, -2.0);
        q.add_product(vars.tplus.at(i), &xc, &one, 2.0);
        q.add_product(vars.tcplus.at(i), &slack[i], &one, 2.0);
        for j in 0..m {
            q.add_product(vars.tcross.get(i, j), &slack[i], &unit(oz + j), 2.0);
        }
    }

    // Terms of T0_r ζ_i: each is (variable, μ-coordinate).
    let fz = |i: usize| -> Vec<(Option<crate::sdp::VarId>, usize)> {
        (0..m)
            .map(|j| (vars.f_psi.get(i, j), oz + j))
            .chain((0..dims.n_x).map(|k| (vars.f0.get(i, k), dims.ox() + k)))
            .chain(std::iter::once((vars.f_beta.at(i), o1)))
            .filter(|(v, _)| v.is_some())
            .collect()
    };

    for i in 0..m {
        let z = oz + i;
        let t0r = vars.t0_r.at(i);
        let terms = fz(i);
        // 2 ž_i (T0_r ζ − T0_r ž)_i
        for &(v, a) in &terms {
            q.add(v, z, a, 2.0);
        }
        q.add(t0r, z, z, -2.0);
        q.add(vars.tplus_r.at(i), z, o1, 2.0);
        // 2 J2_i (T0_r ž − T0_r ζ)_i
        if j2[i] != 0.0 {
            q.add(t0r, z, o1, 2.0 * j2[i]);
            for &(v, a) in &terms {
                q.add(v, a, o1, -2.0 * j2[i]);
            }
        }
        // 2 (T0_r ž − T0_r ζ)_i (J1ᵀ x̌)_i
        for p in 0..n {
            let c = j1[(p, i)];
            if c == 0.0 {
                continue;
            }
            q.add(t0r, z, oxc + p, 2.0 * c);
            for &(v, a) in &terms {
                q.add(v, a, oxc + p, -2.0 * c);
            }
        }
    }
    Ok(q.finish())
}

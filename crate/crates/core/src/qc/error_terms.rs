use nalgebra::DMatrix;

use super::Dims;
use crate::error::{Error, Result};
use crate::network::{ImplicitForm, ReducedNetwork};
use crate::sdp::{AffineMatrixExpr, VarBlock, VarId};

/// Error row block `L` (with `Lμ = f(x) − g(x)`) and the bound matrix `Γ`
/// (with `μᵀΓμ = γₓ‖x‖² + γ`).
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorTerms {
    /// `n_f × D`: `[0, W_f, −Ψ_f, b_out − β_out]`.
    pub l: AffineMatrixExpr,
    /// `D × D`: `blockdiag(γₓ I, 0, 0, γ)`.
    pub gamma: AffineMatrixExpr,
}

fn check(full: &ImplicitForm, dims: &Dims) -> Result<()> {
    if full.input_dim() != dims.n_x || full.hidden_size() != dims.n || full.output_dim() != dims.n_f {
        return Err(Error::DimensionMismatch {
            what: "full network vs. error-term dims".into(),
            expected: dims.n,
            got: full.hidden_size(),
        });
    }
    Ok(())
}

fn base(full: &ImplicitForm, dims: &Dims, gamma_x: VarId, gamma: VarId) -> (AffineMatrixExpr, AffineMatrixExpr) {
    let mut l = AffineMatrixExpr::zeros(dims.n_f, dims.mu_dim());
    for r in 0..dims.n_f {
        for c in 0..dims.n {
            l.add_entry(None, r, dims.ox_full() + c, full.w_f[(r, c)]);
        }
        l.add_entry(None, r, dims.o1(), full.b_out[r]);
    }
    let mut g = AffineMatrixExpr::zeros(dims.mu_dim(), dims.mu_dim());
    for k in 0..dims.n_x {
        g.add_entry(Some(gamma_x), dims.ox() + k, dims.ox() + k, 1.0);
    }
    g.add_entry(Some(gamma), dims.o1(), dims.o1(), 1.0);
    (l, g)
}

/// Error terms with `Ψ_f` (`n_f × M`) and `β_out` (`n_f`) as decision variables.
pub fn error_terms(
    full: &ImplicitForm,
    dims: &Dims,
    psi_f: &VarBlock,
    beta_out: &VarBlock,
    gamma_x: VarId,
    gamma: VarId,
) -> Result<ErrorTerms> {
    check(full, dims)?;
    if psi_f.rows != dims.n_f || psi_f.cols != dims.m || beta_out.rows != dims.n_f {
        return Err(Error::DimensionMismatch { what: "Psi_f".into(), expected: dims.m, got: psi_f.cols });
    }
    let (mut l, g) = base(full, dims, gamma_x, gamma);
    for r in 0..dims.n_f {
        for c in 0..dims.m {
            if let Some(v) = psi_f.get(r, c) {
                l.add_entry(Some(v), r, dims.oz() + c, -1.0);
            }
        }
        if let Some(v) = beta_out.at(r) {
            l.add_entry(Some(v), r, dims.o1(), -1.0);
        }
    }
    Ok(ErrorTerms { l, gamma: g })
}

/// Error terms for a fixed reduced network (only `γₓ`, `γ` are variables).
pub fn error_terms_fixed(
    full: &ImplicitForm,
    reduced: &ReducedNetwork,
    dims: &Dims,
    gamma_x: VarId,
    gamma: VarId,
) -> Result<ErrorTerms> {
    check(full, dims)?;
    if reduced.hidden_size() != dims.m || reduced.output_dim() != dims.n_f {
        return Err(Error::DimensionMismatch { what: "reduced network".into(), expected: dims.m, got: reduced.hidden_size() });
    }
    let (mut l, g) = base(full, dims, gamma_x, gamma);
    let mut fixed = DMatrix::zeros(dims.n_f, dims.mu_dim());
    fixed.view_mut((0, dims.oz()), (dims.n_f, dims.m)).copy_from(&(-&reduced.psi_f));
    fixed.column_mut(dims.o1()).copy_from(&(-&reduced.beta_out));
    l.add_scaled(&AffineMatrixExpr::from_constant(fixed), 1.0);
    Ok(ErrorTerms { l, gamma: g })
}

use nalgebra::DVector;

use super::Dims;
use crate::error::{Error, Result};
use crate::network::InputBox;
use crate::sdp::{AffineMatrixExpr, QuadFormBuilder, VarBlock};

/// Box constraint `Σ τ_i (x_i − x̲_i)(x̄_i − x_i) ≥ 0` as a matrix in `μ`,
/// affine in the diagonal multiplier `τ` (a diagonal [`VarBlock`] of size
/// `n_x`).
pub fn input_qc_expr(bx: &InputBox, dims: &Dims, tau: &VarBlock) -> Result<AffineMatrixExpr> {
    bx.validate()?;
    if bx.dim() != dims.n_x || tau.rows != dims.n_x {
        return Err(Error::DimensionMismatch { what: "input box".into(), expected: dims.n_x, got: bx.dim() });
    }
    let mut q = QuadFormBuilder::new(dims.mu_dim());
    let o1 = dims.o1();
    for i in 0..dims.n_x {
        let Some(t) = tau.at(i) else { continue };
        let (lo, hi) = (bx.lower[i], bx.upper[i]);
        q.add(Some(t), dims.ox() + i, dims.ox() + i, -1.0);
        q.add_sym(Some(t), dims.ox() + i, o1, 0.5 * (lo + hi));
        q.add(Some(t), o1, o1, -lo * hi);
    }
    Ok(q.finish())
}

/// Direct evaluation of `Σ τ_i (x_i − x̲_i)(x̄_i − x_i)`.
pub fn input_qc_value(bx: &InputBox, tau: &[f64], x: &DVector<f64>) -> f64 {
    (0..bx.dim()).map(|i| tau[i] * (x[i] - bx.lower[i]) * (bx.upper[i] - x[i])).sum()
}

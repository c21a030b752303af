//! Schur-complement assembly of the certificate LMI.

use nalgebra::DMatrix;

use super::expr::AffineMatrixExpr;
use crate::error::{Error, Result};
use crate::qc::ErrorTerms;

/// Builds
///
/// ```text
/// Ω = [ Π + Λ − Γ   Lᵀ ]
///     [ L          −I  ]
/// ```
///
/// of side `D + n_f`, where `D` is the length of `μ` and `n_f` the output
/// dimension. `Ω ≺ 0` is equivalent to `Π + Λ − Γ + LᵀL ≺ 0`.
pub fn assemble_schur(pi: &AffineMatrixExpr, lambda: &AffineMatrixExpr, error: &ErrorTerms) -> Result<AffineMatrixExpr> {
    let dd = pi.dim();
    let check = |what: &str, got: usize| {
        if got == dd {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { what: what.into(), expected: dd, got })
        }
    };
    check("Lambda", lambda.dim())?;
    check("Gamma", error.gamma.dim())?;
    check("L columns", error.l.ncols())?;
    let nf = error.l.nrows();
    let d = dd + nf;

    let mut top = pi.clone();
    top.add_scaled(lambda, 1.0);
    top.add_scaled(&error.gamma, -1.0);

    let mut omega = top.embed(d, d, 0, 0);
    omega.add_scaled(&error.l.embed(d, d, dd, 0), 1.0);
    omega.add_scaled(&error.l.transpose().embed(d, d, 0, dd), 1.0);
    let mut corner = DMatrix::zeros(d, d);
    corner.view_mut((dd, dd), (nf, nf)).fill_with_identity();
    corner.view_mut((dd, dd), (nf, nf)).neg_mut();
    omega.add_scaled(&AffineMatrixExpr::from_constant(corner), 1.0);
    Ok(omega.prune())
}

//! Quadratic constraints on `μ = [x; x̌; ž; 1]`: input box, activation
//! multipliers and the error terms of the certificate.

mod analysis;
mod error_terms;
mod input;
mod lemma1;
mod relu;

use nalgebra::DMatrix;

pub use analysis::{analysis_lambda_expr, AnalysisOptions, AnalysisVars};
pub use error_terms::{error_terms, error_terms_fixed, ErrorTerms};
pub use input::{input_qc_expr, input_qc_value};
pub use lemma1::{lemma1_qc_value, QcKind, QcSignals};
pub use relu::{default_j1, default_j2, relu_lambda_expr, MultiplierSet, ReluVarOptions, ReluVars};

use crate::network::ImplicitForm;
use crate::sdp::LinForm;

/// Sizes of the blocks of `μ` and of the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dims {
    pub n_x: usize,
    /// Hidden neurons of the full network.
    pub n: usize,
    /// Hidden neurons of the reduced network.
    pub m: usize,
    pub n_f: usize,
}

impl Dims {
    pub fn new(n_x: usize, n: usize, m: usize, n_f: usize) -> Self {
        Self { n_x, n, m, n_f }
    }

    pub fn ox(&self) -> usize {
        0
    }

    pub fn ox_full(&self) -> usize {
        self.n_x
    }

    pub fn oz(&self) -> usize {
        self.n_x + self.n
    }

    pub fn o1(&self) -> usize {
        self.n_x + self.n + self.m
    }

    /// Length of `μ`.
    pub fn mu_dim(&self) -> usize {
        self.n_x + self.n + self.m + 1
    }

    /// Side of the Schur LMI.
    pub fn lmi_dim(&self) -> usize {
        self.mu_dim() + self.n_f
    }
}

/// `ξ_i = (W x̌ + W₀ x + b)_i` as a linear form in `μ`.
pub(crate) fn full_preactivation(full: &ImplicitForm, dims: &Dims, i: usize) -> LinForm {
    row_form(&full.w, dims.ox_full(), i)
        .into_iter()
        .chain(row_form(&full.w0, dims.ox(), i))
        .chain((full.b[i] != 0.0).then_some((dims.o1(), full.b[i])))
        .collect()
}

/// Nonzeros of row `i` of `m`, shifted to start at `offset`.
pub(crate) fn row_form(m: &DMatrix<f64>, offset: usize, i: usize) -> LinForm {
    (0..m.ncols()).filter(|&j| m[(i, j)] != 0.0).map(|j| (offset + j, m[(i, j)])).collect()
}

pub(crate) fn unit(index: usize) -> LinForm {
    vec![(index, 1.0)]
}

/// `a − b` for linear forms.
pub(crate) fn diff(a: &LinForm, b: &LinForm) -> LinForm {
    a.iter().copied().chain(b.iter().map(|&(i, v)| (i, -v))).collect()
}

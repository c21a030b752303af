//! Matrix-valued affine functions of the scalar decision variables.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use super::vars::VarId;

/// A scalar that is either data or a single decision variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Param {
    Const(f64),
    Var(VarId),
}

impl Param {
    pub fn value(self, values: &[f64]) -> f64 {
        match self {
            Param::Const(c) => c,
            Param::Var(v) => values[v.0],
        }
    }
}

/// Sparse linear form over the coordinates of a vector (e.g. `μ`).
pub type LinForm = Vec<(usize, f64)>;

/// `A(v) = A₀ + Σ vᵢ Aᵢ` with dense coefficient matrices.
///
/// Expressions built through [`QuadFormBuilder`] are symmetric; general
/// rectangular expressions (e.g. the error row block) use the same type.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMatrixExpr {
    constant: DMatrix<f64>,
    terms: BTreeMap<VarId, DMatrix<f64>>,
}

impl AffineMatrixExpr {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { constant: DMatrix::zeros(rows, cols), terms: BTreeMap::new() }
    }

    pub fn from_constant(constant: DMatrix<f64>) -> Self {
        Self { constant, terms: BTreeMap::new() }
    }

    pub fn nrows(&self) -> usize {
        self.constant.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.constant.ncols()
    }

    /// Side length; only meaningful for square expressions.
    pub fn dim(&self) -> usize {
        self.constant.nrows()
    }

    pub fn constant(&self) -> &DMatrix<f64> {
        &self.constant
    }

    pub fn terms(&self) -> impl Iterator<Item = (VarId, &DMatrix<f64>)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn coefficient(&self, var: VarId) -> Option<&DMatrix<f64>> {
        self.terms.get(&var)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Adds `coef` at `(i, j)` of the coefficient of `var` (or of the constant).
    pub fn add_entry(&mut self, var: Option<VarId>, i: usize, j: usize, coef: f64) {
        if coef == 0.0 {
            return;
        }
        let (r, c) = self.constant.shape();
        let m = match var {
            None => &mut self.constant,
            Some(v) => self.terms.entry(v).or_insert_with(|| DMatrix::zeros(r, c)),
        };
        m[(i, j)] += coef;
    }

    pub fn add_param(&mut self, p: Param, i: usize, j: usize, scale: f64) {
        match p {
            Param::Const(c) => self.add_entry(None, i, j, c * scale),
            Param::Var(v) => self.add_entry(Some(v), i, j, scale),
        }
    }

    pub fn eval(&self, values: &[f64]) -> DMatrix<f64> {
        let mut out = self.constant.clone();
        for (v, a) in &self.terms {
            let x = values[v.0];
            if x != 0.0 {
                out += a * x;
            }
        }
        out
    }

    /// `μᵀ A(v) μ`.
    pub fn quad_value(&self, values: &[f64], mu: &DVector<f64>) -> f64 {
        mu.dot(&(self.eval(values) * mu))
    }

    pub fn is_symmetric(&self) -> bool {
        is_exactly_symmetric(&self.constant) && self.terms.values().all(is_exactly_symmetric)
    }

    pub fn transpose(&self) -> Self {
        Self {
            constant: self.constant.transpose(),
            terms: self.terms.iter().map(|(k, v)| (*k, v.transpose())).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            constant: &self.constant * s,
            terms: self.terms.iter().map(|(k, v)| (*k, v * s)).collect(),
        }
    }

    /// `self += s · other`.
    pub fn add_scaled(&mut self, other: &Self, s: f64) {
        assert_eq!(self.constant.shape(), other.constant.shape(), "shape mismatch in affine sum");
        self.constant += &other.constant * s;
        for (k, v) in &other.terms {
            match self.terms.get_mut(k) {
                Some(m) => *m += v * s,
                None => {
                    self.terms.insert(*k, v * s);
                }
            }
        }
    }

    /// Places `self` at `(row, col)` inside a zero `rows × cols` expression.
    pub fn embed(&self, rows: usize, cols: usize, row: usize, col: usize) -> Self {
        let place = |m: &DMatrix<f64>| {
            let mut out = DMatrix::zeros(rows, cols);
            out.view_mut((row, col), m.shape()).copy_from(m);
            out
        };
        Self {
            constant: place(&self.constant),
            terms: self.terms.iter().map(|(k, v)| (*k, place(v))).collect(),
        }
    }

    /// `Sᵀ A(v) S` for a constant matrix `S`.
    pub fn congruence(&self, s: &DMatrix<f64>) -> Self {
        let st = s.transpose();
        Self {
            constant: &st * &self.constant * s,
            terms: self.terms.iter().map(|(k, v)| (*k, &st * v * s)).collect(),
        }
    }

    /// Drops coefficient matrices that are identically zero.
    pub fn prune(mut self) -> Self {
        self.terms.retain(|_, m| m.iter().any(|x| *x != 0.0));
        self
    }
}

fn is_exactly_symmetric(m: &DMatrix<f64>) -> bool {
    m.is_square() && (0..m.nrows()).all(|i| (0..i).all(|j| m[(i, j)] == m[(j, i)]))
}

/// Accumulates a quadratic form `μᵀ Q(v) μ` from (possibly non-symmetric)
/// contributions and returns its symmetric matrix `(Q + Qᵀ)/2`.
#[derive(Debug, Clone)]
pub struct QuadFormBuilder {
    inner: AffineMatrixExpr,
}

impl QuadFormBuilder {
    pub fn new(dim: usize) -> Self {
        Self { inner: AffineMatrixExpr::zeros(dim, dim) }
    }

    /// Adds `coef · var · μ_i μ_j` (`var = None` for a constant term).
    pub fn add(&mut self, var: Option<VarId>, i: usize, j: usize, coef: f64) {
        self.inner.add_entry(var, i, j, coef);
    }

    /// Sets a symmetric matrix entry pair directly: after `finish` the
    /// expression has `coef` at both `(i, j)` and `(j, i)`.
    pub fn add_sym(&mut self, var: Option<VarId>, i: usize, j: usize, coef: f64) {
        self.inner.add_entry(var, i, j, coef);
        if i != j {
            self.inner.add_entry(var, j, i, coef);
        }
    }

    pub fn add_param_sym(&mut self, p: Param, i: usize, j: usize, scale: f64) {
        match p {
            Param::Const(c) => self.add_sym(None, i, j, c * scale),
            Param::Var(v) => self.add_sym(Some(v), i, j, scale),
        }
    }

    /// Adds `scale · var · (aᵀμ)(bᵀμ)`.
    pub fn add_product(&mut self, var: Option<VarId>, a: &LinForm, b: &LinForm, scale: f64) {
        for &(i, ai) in a {
            for &(j, bj) in b {
                self.add(var, i, j, scale * ai * bj);
            }
        }
    }

    pub fn finish(self) -> AffineMatrixExpr {
        let sym = |m: &DMatrix<f64>| (m + m.transpose()) * 0.5;
        let AffineMatrixExpr { constant, terms } = self.inner;
        AffineMatrixExpr {
            constant: sym(&constant),
            terms: terms.iter().map(|(k, v)| (*k, sym(v))).collect(),
        }
        .prune()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};

    #[test]
    fn builder_reproduces_quadratic_form() {
        let v = VarId(0);
        let mut b = QuadFormBuilder::new(3);
        b.add_product(Some(v), &vec![(0, 1.0), (2, 2.0)], &vec![(1, 3.0)], 2.0);
        b.add(None, 2, 2, -1.0);
        let e = b.finish();
        assert!(e.is_symmetric());
        let mu = dvector![0.5, -1.0, 2.0];
        let val = e.quad_value(&[1.5], &mu);
        let direct = 1.5 * 2.0 * (0.5 + 4.0) * (-3.0) - 4.0;
        assert!((val - direct).abs() < 1e-12);
    }

    #[test]
    fn embed_and_congruence() {
        let mut e = AffineMatrixExpr::from_constant(dmatrix![1.0, 2.0; 2.0, 3.0]);
        e.add_entry(Some(VarId(3)), 0, 0, 1.0);
        let big = e.embed(3, 3, 1, 1);
        assert_eq!(big.constant()[(2, 2)], 3.0);
        assert_eq!(big.coefficient(VarId(3)).unwrap()[(1, 1)], 1.0);
        let s = dmatrix![1.0; 1.0];
        let c = e.congruence(&s);
        assert_eq!(c.constant()[(0, 0)], 8.0);
    }

    #[test]
    fn zero_terms_are_dropped() {
        let mut b = QuadFormBuilder::new(2);
        b.add(Some(VarId(0)), 0, 1, 1.0);
        b.add(Some(VarId(0)), 0, 1, -1.0);
        assert_eq!(b.finish().num_terms(), 0);
    }
}

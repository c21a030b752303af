//! Full-order and reduced-order feed-forward networks.
//!
//! A full-order network is stored layerwise (`x^{k+1} = φ(W^k x^k + b^k)`,
//! output `W^l x^l + b^l`) and can be flattened into the implicit form
//! `x̌ = φ(W x̌ + W₀ x + b)`, `f = W_f x̌ + b_out`, where `W` is strictly
//! block-lower-shift. Reduced-order networks are only ever held in implicit
//! form since their synthesis produces a full `Ψ`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pointwise activation function.
///
/// Only `Relu` is accepted by synthesis; the others are supported for
/// evaluation and fixed-pair analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActivationKind {
    Relu,
    Tanh,
    /// `σ(s) − 1/2`, shifted so that `φ(0) = 0`.
    ShiftedSigmoid,
}

impl ActivationKind {
    #[inline]
    pub fn apply(self, s: f64) -> f64 {
        match self {
            ActivationKind::Relu => s.max(0.0),
            ActivationKind::Tanh => s.tanh(),
            ActivationKind::ShiftedSigmoid => 1.0 / (1.0 + (-s).exp()) - 0.5,
        }
    }

    /// Upper sector slope `δ` (`φ(s)/s ∈ [0, δ]`), also the maximal slope.
    pub fn sector_slope(self) -> f64 {
        match self {
            ActivationKind::Relu | ActivationKind::Tanh => 1.0,
            ActivationKind::ShiftedSigmoid => 0.25,
        }
    }

    /// Output range `[c̲, c̄]` for bounded activations.
    pub fn bounds(self) -> Option<(f64, f64)> {
        match self {
            ActivationKind::Relu => None,
            ActivationKind::Tanh => Some((-1.0, 1.0)),
            ActivationKind::ShiftedSigmoid => Some((-0.5, 0.5)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ActivationKind::Relu => "relu",
            ActivationKind::Tanh => "tanh",
            ActivationKind::ShiftedSigmoid => "shifted-sigmoid",
        }
    }
}

/// One affine map `x ↦ W x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub weight: DMatrix<f64>,
    pub bias: DVector<f64>,
}

impl Layer {
    pub fn new(weight: DMatrix<f64>, bias: DVector<f64>) -> Self {
        Self { weight, bias }
    }

    pub fn input_dim(&self) -> usize {
        self.weight.ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.weight.nrows()
    }
}

/// Layerwise full-order network; the last layer is the output affine map.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerwiseNetwork {
    layers: Vec<Layer>,
    activation: ActivationKind,
}

impl LayerwiseNetwork {
    pub fn new(layers: Vec<Layer>, activation: ActivationKind) -> Result<Self> {
        if layers.len() < 2 {
            return Err(Error::InvalidNetwork(format!(
                "need at least one hidden layer plus the output map, got {} layer(s)",
                layers.len()
            )));
        }
        for (k, layer) in layers.iter().enumerate() {
            if layer.bias.len() != layer.output_dim() {
                return Err(Error::InvalidNetwork(format!(
                    "layer {k}: bias has length {} but weight has {} rows",
                    layer.bias.len(),
                    layer.output_dim()
                )));
            }
            if k > 0 && layer.input_dim() != layers[k - 1].output_dim() {
                return Err(Error::InvalidNetwork(format!(
                    "layer {k}: expects {} inputs but layer {} produces {}",
                    layer.input_dim(),
                    k - 1,
                    layers[k - 1].output_dim()
                )));
            }
            if layer.weight.iter().chain(layer.bias.iter()).any(|v| !v.is_finite()) {
                return Err(Error::InvalidNetwork(format!("layer {k}: non-finite entry")));
            }
        }
        if layers[0].input_dim() == 0 {
            return Err(Error::InvalidNetwork("input dimension is zero".into()));
        }
        Ok(Self { layers, activation })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn activation(&self) -> ActivationKind {
        self.activation
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].input_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().output_dim()
    }

    /// Number of hidden layers `l`.
    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    /// Hidden-layer widths `n_1..n_l`.
    pub fn hidden_partition(&self) -> Vec<usize> {
        self.layers[..self.depth()].iter().map(Layer::output_dim).collect()
    }

    /// Total hidden neurons `N`.
    pub fn hidden_size(&self) -> usize {
        self.hidden_partition().iter().sum()
    }

    /// Total number of weight-matrix entries (biases excluded).
    pub fn weight_count(&self) -> usize {
        self.layers.iter().map(|l| l.weight.len()).sum()
    }

    /// Forward pass; returns the stacked hidden signals `x̌` and the output.
    pub fn eval(&self, x: &DVector<f64>) -> Result<(DVector<f64>, DVector<f64>)> {
        check_dim("input", self.input_dim(), x.len())?;
        let mut hidden = Vec::with_capacity(self.hidden_size());
        let mut signal = x.clone();
        for layer in &self.layers[..self.depth()] {
            signal = (&layer.weight * &signal + &layer.bias).map(|s| self.activation.apply(s));
            hidden.extend(signal.iter().copied());
        }
        let out = self.layers.last().unwrap();
        let output = &out.weight * &signal + &out.bias;
        Ok((DVector::from_vec(hidden), output))
    }

    pub fn output(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.eval(x).map(|(_, y)| y)
    }

    pub fn to_implicit(&self) -> ImplicitForm {
        let partition = self.hidden_partition();
        let n_hidden: usize = partition.iter().sum();
        let n_x = self.input_dim();
        let n_f = self.output_dim();
        let offsets = block_offsets(&partition);

        let mut w = DMatrix::zeros(n_hidden, n_hidden);
        let mut w0 = DMatrix::zeros(n_hidden, n_x);
        let mut b = DVector::zeros(n_hidden);
        let mut w_f = DMatrix::zeros(n_f, n_hidden);

        w0.view_mut((0, 0), (partition[0], n_x)).copy_from(&self.layers[0].weight);
        for k in 0..self.depth() {
            b.rows_mut(offsets[k], partition[k]).copy_from(&self.layers[k].bias);
            if k >= 1 {
                // W^k maps block k-1 into block k.
                w.view_mut((offsets[k], offsets[k - 1]), (partition[k], partition[k - 1]))
                    .copy_from(&self.layers[k].weight);
            }
        }
        let last = self.depth() - 1;
        w_f.view_mut((0, offsets[last]), (n_f, partition[last]))
            .copy_from(&self.layers[self.depth()].weight);

        ImplicitForm {
            w,
            w0,
            b,
            w_f,
            b_out: self.layers[self.depth()].bias.clone(),
            partition,
            activation: self.activation,
        }
    }
}

/// Implicit (stacked) form of a full-order network.
#[derive(Debug, Clone, PartialEq)]
pub struct ImplicitForm {
    pub w: DMatrix<f64>,
    pub w0: DMatrix<f64>,
    pub b: DVector<f64>,
    pub w_f: DMatrix<f64>,
    pub b_out: DVector<f64>,
    pub partition: Vec<usize>,
    pub activation: ActivationKind,
}

impl ImplicitForm {
    pub fn input_dim(&self) -> usize {
        self.w0.ncols()
    }

    pub fn hidden_size(&self) -> usize {
        self.w.nrows()
    }

    pub fn output_dim(&self) -> usize {
        self.w_f.nrows()
    }

    /// Evaluates by block forward substitution (exact for the nilpotent `W`).
    pub fn eval(&self, x: &DVector<f64>) -> Result<(DVector<f64>, DVector<f64>)> {
        check_dim("input", self.input_dim(), x.len())?;
        let drive = &self.w0 * x + &self.b;
        let hidden = forward_substitute(&self.w, &drive, &self.partition, self.activation);
        let output = &self.w_f * &hidden + &self.b_out;
        Ok((hidden, output))
    }
}

/// Whether a reduced network may use arbitrary implicit coupling or must be
/// strictly feed-forward with respect to its layer partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Structure {
    #[default]
    GeneralImplicit,
    StrictFeedforward,
}

/// Reduced-order network `ž = φ(Ψ ž + Ψ₀ x + β)`, `g = Ψ_f ž + β_out`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedNetwork {
    pub psi: DMatrix<f64>,
    pub psi0: DMatrix<f64>,
    pub beta: DVector<f64>,
    pub psi_f: DMatrix<f64>,
    pub beta_out: DVector<f64>,
    pub partition: Vec<usize>,
    pub structure: Structure,
    pub activation: ActivationKind,
}

/// Result of evaluating a reduced network.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedEval {
    pub hidden: DVector<f64>,
    pub output: DVector<f64>,
    pub converged: bool,
}

pub const PICARD_TOL: f64 = 1e-10;

impl ReducedNetwork {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        psi: DMatrix<f64>,
        psi0: DMatrix<f64>,
        beta: DVector<f64>,
        psi_f: DMatrix<f64>,
        beta_out: DVector<f64>,
        partition: Vec<usize>,
        structure: Structure,
        activation: ActivationKind,
    ) -> Result<Self> {
        let m: usize = partition.iter().sum();
        if partition.is_empty() || partition.contains(&0) {
            return Err(Error::InvalidNetwork(format!("bad partition {partition:?}")));
        }
        let shape_ok = psi.shape() == (m, m)
            && psi0.nrows() == m
            && beta.len() == m
            && psi_f.ncols() == m
            && psi_f.nrows() == beta_out.len();
        if !shape_ok {
            return Err(Error::InvalidNetwork(format!(
                "reduced network blocks inconsistent with M = {m}"
            )));
        }
        let net = Self { psi, psi0, beta, psi_f, beta_out, partition, structure, activation };
        if structure == Structure::StrictFeedforward && !net.is_strictly_feedforward() {
            return Err(Error::InvalidNetwork(
                "Psi is not strictly block-lower-triangular".into(),
            ));
        }
        Ok(net)
    }

    /// Reduced network with `Ψ = W` etc. taken from a full-order network.
    pub fn from_implicit(full: &ImplicitForm) -> Self {
        Self {
            psi: full.w.clone(),
            psi0: full.w0.clone(),
            beta: full.b.clone(),
            psi_f: full.w_f.clone(),
            beta_out: full.b_out.clone(),
            partition: full.partition.clone(),
            structure: Structure::StrictFeedforward,
            activation: full.activation,
        }
    }

    pub fn input_dim(&self) -> usize {
        self.psi0.ncols()
    }

    pub fn hidden_size(&self) -> usize {
        self.psi.nrows()
    }

    pub fn output_dim(&self) -> usize {
        self.psi_f.nrows()
    }

    pub fn depth(&self) -> usize {
        self.partition.len()
    }

    pub fn is_strictly_feedforward(&self) -> bool {
        strictly_block_lower(&self.psi, &self.partition)
    }

    pub fn eval(&self, x: &DVector<f64>) -> Result<ReducedEval> {
        check_dim("input", self.input_dim(), x.len())?;
        let drive = &self.psi0 * x + &self.beta;
        let (hidden, converged) = match self.structure {
            Structure::StrictFeedforward => {
                (forward_substitute(&self.psi, &drive, &self.partition, self.activation), true)
            }
            Structure::GeneralImplicit => {
                let cap = 10 * self.depth() * self.hidden_size();
                let (z, ok) = picard(&self.psi, &drive, self.activation, PICARD_TOL, cap.max(1));
                match (ok, self.activation) {
                    (false, ActivationKind::Relu) => match relu_fixed_point(&self.psi, &drive) {
                        Some(exact) => (exact, true),
                        None => (z, false),
                    },
                    _ => (z, ok),
                }
            }
        };
        let output = &self.psi_f * &hidden + &self.beta_out;
        Ok(ReducedEval { hidden, output, converged })
    }

    pub fn output(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.eval(x).map(|e| e.output)
    }
}

/// Picard iteration `z ← φ(Ψ z + drive)` from zero. Returns the last iterate
/// and whether the update fell below `tol` (sup-norm) within `cap` steps.
pub fn picard(
    psi: &DMatrix<f64>,
    drive: &DVector<f64>,
    activation: ActivationKind,
    tol: f64,
    cap: usize,
) -> (DVector<f64>, bool) {
    let mut z = DVector::zeros(drive.len());
    for _ in 0..cap {
        let next = (psi * &z + drive).map(|s| activation.apply(s));
        let step = (&next - &z).amax();
        z = next;
        if step <= tol {
            return (z, true);
        }
    }
    (z, false)
}

/// Exact solution of `z = max(0, Ψ z + drive)` as the linear
/// complementarity problem `w = (I − Ψ) z − drive ≥ 0`, `z ≥ 0`, `zᵀw = 0`,
/// solved by Murty's least-index principal pivoting. Terminates whenever
/// `I − Ψ` is a P-matrix (the case for synthesised networks); returns `None`
/// if the pivot budget runs out or the solution fails the residual check.
pub fn relu_fixed_point(psi: &DMatrix<f64>, drive: &DVector<f64>) -> Option<DVector<f64>> {
    let m = drive.len();
    let a = DMatrix::identity(m, m) - psi;
    let mut basic: Vec<bool> = drive.iter().map(|d| *d > 0.0).collect();
    let budget = 1usize << m.min(20);
    for _ in 0..budget.max(64) {
        let idx: Vec<usize> = (0..m).filter(|&i| basic[i]).collect();
        let mut z = DVector::zeros(m);
        if !idx.is_empty() {
            let sub = a.select_rows(&idx).select_columns(&idx);
            let rhs = DVector::from_iterator(idx.len(), idx.iter().map(|&i| drive[i]));
            let sol = sub.lu().solve(&rhs)?;
            for (k, &i) in idx.iter().enumerate() {
                z[i] = sol[k];
            }
        }
        let w = &a * &z - drive;
        let scale = 1e-12 * (1.0 + drive.amax() + z.amax());
        let bad = (0..m).find(|&i| if basic[i] { z[i] < -scale } else { w[i] < -scale });
        match bad {
            Some(i) => basic[i] = !basic[i],
            None => {
                let z = z.map(|v| v.max(0.0));
                let residual = (&z - (psi * &z + drive).map(|s| s.max(0.0))).amax();
                return (residual <= 1e-8 * (1.0 + z.amax())).then_some(z);
            }
        }
    }
    None
}

fn forward_substitute(
    w: &DMatrix<f64>,
    drive: &DVector<f64>,
    partition: &[usize],
    activation: ActivationKind,
) -> DVector<f64> {
    let offsets = block_offsets(partition);
    let mut z = DVector::zeros(drive.len());
    for (k, &width) in partition.iter().enumerate() {
        let lo = offsets[k];
        // Only columns of earlier blocks are nonzero under the strict pattern.
        let pre = w.view((lo, 0), (width, lo)) * z.rows(0, lo) + drive.rows(lo, width);
        z.rows_mut(lo, width).copy_from(&pre.map(|s| activation.apply(s)));
    }
    z
}

/// Starting index of each block of `partition`.
pub fn block_offsets(partition: &[usize]) -> Vec<usize> {
    partition
        .iter()
        .scan(0, |acc, &n| {
            let start = *acc;
            *acc += n;
            Some(start)
        })
        .collect()
}

/// Block index of every coordinate of `partition`.
pub fn block_of(partition: &[usize]) -> Vec<usize> {
    partition.iter().enumerate().flat_map(|(k, &n)| std::iter::repeat_n(k, n)).collect()
}

/// True when every block on or above the block diagonal of `m` is zero.
pub fn strictly_block_lower(m: &DMatrix<f64>, partition: &[usize]) -> bool {
    let blocks = block_of(partition);
    if blocks.len() != m.nrows() || m.nrows() != m.ncols() {
        return false;
    }
    (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| blocks[j] < blocks[i] || m[(i, j)] == 0.0))
}

/// Axis-aligned input box `{x : lower ≤ x ≤ upper}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl InputBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let b = Self { lower, upper };
        b.validate()?;
        Ok(b)
    }

    pub fn uniform(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn validate(&self) -> Result<()> {
        if self.lower.len() != self.upper.len() || self.lower.is_empty() {
            return Err(Error::InvalidBox("lower/upper lengths differ or are empty".into()));
        }
        for (i, (lo, hi)) in self.lower.iter().zip(&self.upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite()) || lo > hi {
                return Err(Error::InvalidBox(format!("coordinate {i}: [{lo}, {hi}]")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &DVector<f64>) -> bool {
        x.len() == self.dim()
            && x.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    pub fn midpoint(&self) -> DVector<f64> {
        DVector::from_iterator(
            self.dim(),
            self.lower.iter().zip(&self.upper).map(|(lo, hi)| 0.5 * (lo + hi)),
        )
    }

    /// `sup_{x in box} ‖x‖²`.
    pub fn max_norm_sq(&self) -> f64 {
        self.lower.iter().zip(&self.upper).map(|(lo, hi)| (lo * lo).max(hi * hi)).sum()
    }
}

/// `μ(x) = [x; x̌; ž; 1]`.
pub fn build_mu(x: &DVector<f64>, hidden_full: &DVector<f64>, hidden_reduced: &DVector<f64>) -> DVector<f64> {
    let mut mu = Vec::with_capacity(x.len() + hidden_full.len() + hidden_reduced.len() + 1);
    mu.extend(x.iter().chain(hidden_full.iter()).chain(hidden_reduced.iter()).copied());
    mu.push(1.0);
    DVector::from_vec(mu)
}

fn check_dim(what: &str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { what: what.to_string(), expected, got })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};

    fn scalar_relu() -> LayerwiseNetwork {
        LayerwiseNetwork::new(
            vec![
                Layer::new(dmatrix![1.0], dvector![0.0]),
                Layer::new(dmatrix![1.0], dvector![0.0]),
            ],
            ActivationKind::Relu,
        )
        .unwrap()
    }

    #[test]
    fn scalar_relu_outputs() {
        let net = scalar_relu();
        assert_eq!(net.output(&dvector![2.0]).unwrap(), dvector![2.0]);
        assert_eq!(net.output(&dvector![-2.0]).unwrap(), dvector![0.0]);
    }

    #[test]
    fn zero_weights_give_output_bias() {
        let net = LayerwiseNetwork::new(
            vec![
                Layer::new(DMatrix::zeros(3, 2), DVector::zeros(3)),
                Layer::new(DMatrix::zeros(2, 3), dvector![1.5, -0.5]),
            ],
            ActivationKind::Relu,
        )
        .unwrap();
        for x in [dvector![0.0, 0.0], dvector![3.0, -7.0]] {
            assert_eq!(net.output(&x).unwrap(), dvector![1.5, -0.5]);
        }
        let imp = net.to_implicit();
        assert!(imp.w.iter().chain(imp.w0.iter()).chain(imp.b.iter()).chain(imp.w_f.iter()).all(|v| *v == 0.0));
    }

    #[test]
    fn single_hidden_layer_implicit_blocks() {
        let w0 = dmatrix![1.0, 2.0; 3.0, 4.0; 5.0, 6.0];
        let w1 = dmatrix![1.0, -1.0, 0.5];
        let net = LayerwiseNetwork::new(
            vec![Layer::new(w0.clone(), dvector![0.1, 0.2, 0.3]), Layer::new(w1.clone(), dvector![7.0])],
            ActivationKind::Relu,
        )
        .unwrap();
        let imp = net.to_implicit();
        assert_eq!(imp.w, DMatrix::zeros(3, 3));
        assert_eq!(imp.w0, w0);
        assert_eq!(imp.w_f, w1);
        assert_eq!(imp.b, dvector![0.1, 0.2, 0.3]);
        assert_eq!(imp.b_out, dvector![7.0]);
    }

    #[test]
    fn rejects_broken_chains() {
        let err = LayerwiseNetwork::new(
            vec![
                Layer::new(DMatrix::zeros(3, 2), DVector::zeros(3)),
                Layer::new(DMatrix::zeros(1, 4), DVector::zeros(1)),
            ],
            ActivationKind::Relu,
        );
        assert!(matches!(err, Err(Error::InvalidNetwork(_))));
        let err = LayerwiseNetwork::new(
            vec![Layer::new(DMatrix::zeros(1, 1), DVector::zeros(1))],
            ActivationKind::Relu,
        );
        assert!(err.is_err());
        let err = LayerwiseNetwork::new(
            vec![
                Layer::new(dmatrix![f64::NAN], DVector::zeros(1)),
                Layer::new(DMatrix::zeros(1, 1), DVector::zeros(1)),
            ],
            ActivationKind::Relu,
        );
        assert!(err.is_err());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let net = scalar_relu();
        assert!(matches!(
            net.eval(&dvector![1.0, 2.0]),
            Err(Error::DimensionMismatch { expected: 1, got: 2, .. })
        ));
    }

    #[test]
    fn mu_layout() {
        let mu = build_mu(&dvector![2.0], &dvector![3.0], &dvector![4.0]);
        assert_eq!(mu, dvector![2.0, 3.0, 4.0, 1.0]);
        let mu = build_mu(&dvector![1.0, 1.0], &DVector::zeros(5), &DVector::zeros(3));
        assert_eq!(mu.len(), 2 + 5 + 3 + 1);
    }

    #[test]
    fn relu_lcp_matches_a_slow_picard() {
        // Contraction factor close to one: Picard needs far more than the cap.
        let psi = DMatrix::from_row_slice(2, 2, &[0.0, -0.999, -0.999, 0.0]);
        let drive = DVector::from_vec(vec![1.0, 0.5]);
        let z = relu_fixed_point(&psi, &drive).unwrap();
        let residual = (&z - (&psi * &z + &drive).map(|s| s.max(0.0))).amax();
        assert!(residual < 1e-12);
        let (slow, ok) = picard(&psi, &drive, ActivationKind::Relu, 1e-12, 200_000);
        assert!(ok);
        assert!((slow - z).amax() < 1e-9);
    }

    #[test]
    fn box_validation() {
        assert!(InputBox::new(vec![1.0], vec![0.0]).is_err());
        assert!(InputBox::new(vec![0.0, 0.0], vec![1.0]).is_err());
        let b = InputBox::new(vec![-10.0, 0.0], vec![3.0, 2.0]).unwrap();
        assert_eq!(b.max_norm_sq(), 100.0 + 4.0);
    }

    #[test]
    fn psi_zero_reduced_is_one_layer_net() {
        let red = ReducedNetwork::new(
            DMatrix::zeros(2, 2),
            dmatrix![1.0; -2.0],
            dvector![0.5, 0.25],
            dmatrix![1.0, 3.0],
            dvector![-1.0],
            vec![2],
            Structure::GeneralImplicit,
            ActivationKind::Relu,
        )
        .unwrap();
        let net = LayerwiseNetwork::new(
            vec![
                Layer::new(dmatrix![1.0; -2.0], dvector![0.5, 0.25]),
                Layer::new(dmatrix![1.0, 3.0], dvector![-1.0]),
            ],
            ActivationKind::Relu,
        )
        .unwrap();
        for x in [-3.0, -0.1, 0.0, 0.7, 4.0] {
            let x = dvector![x];
            let r = red.eval(&x).unwrap();
            assert!(r.converged);
            assert!((r.output - net.output(&x).unwrap()).amax() <= 1e-12);
        }
    }

    #[test]
    fn feedforward_flag_requires_pattern() {
        let err = ReducedNetwork::new(
            dmatrix![0.0, 1.0; 0.0, 0.0],
            dmatrix![1.0; 1.0],
            dvector![0.0, 0.0],
            dmatrix![1.0, 1.0],
            dvector![0.0],
            vec![1, 1],
            Structure::StrictFeedforward,
            ActivationKind::Relu,
        );
        assert!(err.is_err());
    }

    #[test]
    fn offsets_and_blocks() {
        assert_eq!(block_offsets(&[2, 3, 1]), vec![0, 2, 5]);
        assert_eq!(block_of(&[2, 1]), vec![0, 0, 1]);
    }
}

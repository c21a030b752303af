//! Direct numeric evaluation of the individual activation constraints.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::network::ActivationKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcKind {
    /// `(δy − φ(y))ᵀ T φ(y) ≥ 0`, `T` diagonal nonnegative.
    Sector,
    /// `(δ(y − y₁) − Δφ)ᵀ T Δφ ≥ 0`, `T` diagonal nonnegative (lower slope 0).
    Slope,
    /// `(c̄ − φ(y))ᵀ T (φ(y) − c̲) ≥ 0`, `T` diagonal nonnegative.
    Bounded,
    /// `Tᵀ φ(y) ≥ 0`, `T` a nonnegative vector.
    Positive,
    /// `Tᵀ (φ(y) − y) ≥ 0`, `T` a nonnegative vector.
    PositiveComplement,
    /// `(φ(y) − y)ᵀ T φ(y) = 0`, `T` diagonal (any sign).
    Complementarity,
    /// `φ(υ)ᵀ T (φ(y) − y) ≥ 0`, `T` nonnegative `n_υ × n_y`.
    Cross,
}

/// Pre-activations `y` and activations `φ(y)`; `second` holds `(y₁, φ(y₁))`
/// for the slope constraint or `(υ, φ(υ))` for the cross term.
#[derive(Debug, Clone, PartialEq)]
pub struct QcSignals {
    pub y: DVector<f64>,
    pub phi: DVector<f64>,
    pub second: Option<(DVector<f64>, DVector<f64>)>,
}

impl QcSignals {
    pub fn new(activation: ActivationKind, y: DVector<f64>) -> Self {
        let phi = y.map(|s| activation.apply(s));
        Self { y, phi, second: None }
    }

    pub fn with_second(mut self, activation: ActivationKind, y1: DVector<f64>) -> Self {
        let phi1 = y1.map(|s| activation.apply(s));
        self.second = Some((y1, phi1));
        self
    }
}

/// Left-hand side of the constraint `kind` at the given signals.
///
/// Diagonal multipliers are passed as `n × n` matrices, vector multipliers
/// as `n × 1`.
pub fn lemma1_qc_value(
    kind: QcKind,
    activation: ActivationKind,
    signals: &QcSignals,
    multiplier: &DMatrix<f64>,
) -> Result<f64> {
    let n = signals.y.len();
    if signals.phi.len() != n {
        return Err(Error::DimensionMismatch { what: "phi(y)".into(), expected: n, got: signals.phi.len() });
    }
    let (y, phi) = (&signals.y, &signals.phi);
    let second = || {
        signals
            .second
            .as_ref()
            .ok_or_else(|| Error::InvalidMultiplier(format!("{kind:?} needs a second signal pair")))
    };
    let diagonal = |sign_free: bool| -> Result<DVector<f64>> {
        if multiplier.shape() != (n, n) {
            return Err(Error::InvalidMultiplier(format!("{kind:?} needs an {n}x{n} diagonal multiplier")));
        }
        let off = (0..n).any(|i| (0..n).any(|j| i != j && multiplier[(i, j)] != 0.0));
        if off {
            return Err(Error::InvalidMultiplier(format!("{kind:?} multiplier must be diagonal")));
        }
        let d = multiplier.diagonal();
        if !sign_free && d.iter().any(|v| *v < 0.0) {
            return Err(Error::InvalidMultiplier(format!("{kind:?} multiplier must be nonnegative")));
        }
        Ok(d)
    };
    let nonneg_vector = || -> Result<DVector<f64>> {
        if multiplier.shape() != (n, 1) || multiplier.iter().any(|v| *v < 0.0) {
            return Err(Error::InvalidMultiplier(format!("{kind:?} needs a nonnegative {n}-vector")));
        }
        Ok(multiplier.column(0).into_owned())
    };
    let delta = activation.sector_slope();

    Ok(match kind {
        QcKind::Sector => {
            let t = diagonal(false)?;
            (y * delta - phi).component_mul(&t).dot(phi)
        }
        QcKind::Slope => {
            let t = diagonal(false)?;
            let (y1, phi1) = second()?;
            let dphi = phi - phi1;
            ((y - y1) * delta - &dphi).component_mul(&t).dot(&dphi)
        }
        QcKind::Bounded => {
            let t = diagonal(false)?;
            let (lo, hi) = activation.bounds().ok_or(Error::UnsupportedActivation(activation))?;
            phi.map(|p| hi - p).component_mul(&t).dot(&phi.map(|p| p - lo))
        }
        QcKind::Positive => nonneg_vector()?.dot(phi),
        QcKind::PositiveComplement => nonneg_vector()?.dot(&(phi - y)),
        QcKind::Complementarity => {
            let t = diagonal(true)?;
            (phi - y).component_mul(&t).dot(phi)
        }
        QcKind::Cross => {
            let (_, phi_u) = second()?;
            if multiplier.shape() != (phi_u.len(), n) || multiplier.iter().any(|v| *v < 0.0) {
                return Err(Error::InvalidMultiplier(format!(
                    "cross multiplier must be nonnegative {}x{n}",
                    phi_u.len()
                )));
            }
            phi_u.dot(&(multiplier * (phi - y)))
        }
    })
}

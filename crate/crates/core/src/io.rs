//! JSON documents for networks, boxes and synthesis results.
//!
//! Matrices are arrays of rows. Schemas:
//!
//! * network: `{"activation": "relu", "layers": [{"W": [[..]], "b": [..]}, ..]}`
//! * reduced: `{"activation", "structure", "partition", "Psi", "Psi0", "beta", "Psi_f", "beta_out"}`
//! * box: `{"lower": [..], "upper": [..]}`
//! * result: `{"reduced": {..}, "gamma_x", "gamma", "bound_sup", "solver_status"}`

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{ActivationKind, InputBox, Layer, LayerwiseNetwork, ReducedNetwork, Structure};
use crate::sdp::SolveStatus;
use crate::synthesis::{PairCertificate, SynthesisResult};

type Rows = Vec<Vec<f64>>;

fn to_rows(m: &DMatrix<f64>) -> Rows {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn from_rows(rows: &Rows, cols_if_empty: usize, what: &str) -> Result<DMatrix<f64>> {
    let ncols = rows.first().map_or(cols_if_empty, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidNetwork(format!("{what}: ragged rows")));
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerDoc {
    #[serde(rename = "W")]
    pub w: Rows,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkDoc {
    pub activation: ActivationKind,
    pub layers: Vec<LayerDoc>,
}

impl From<&LayerwiseNetwork> for NetworkDoc {
    fn from(net: &LayerwiseNetwork) -> Self {
        Self {
            activation: net.activation(),
            layers: net
                .layers()
                .iter()
                .map(|l| LayerDoc { w: to_rows(&l.weight), b: l.bias.iter().copied().collect() })
                .collect(),
        }
    }
}

impl NetworkDoc {
    pub fn to_network(&self) -> Result<LayerwiseNetwork> {
        let layers = self
            .layers
            .iter()
            .enumerate()
            .map(|(k, l)| Ok(Layer::new(from_rows(&l.w, 0, &format!("layer {k}"))?, DVector::from_vec(l.b.clone()))))
            .collect::<Result<Vec<_>>>()?;
        LayerwiseNetwork::new(layers, self.activation)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedDoc {
    pub activation: ActivationKind,
    pub structure: Structure,
    pub partition: Vec<usize>,
    #[serde(rename = "Psi")]
    pub psi: Rows,
    #[serde(rename = "Psi0")]
    pub psi0: Rows,
    pub beta: Vec<f64>,
    #[serde(rename = "Psi_f")]
    pub psi_f: Rows,
    pub beta_out: Vec<f64>,
}

impl From<&ReducedNetwork> for ReducedDoc {
    fn from(r: &ReducedNetwork) -> Self {
        Self {
            activation: r.activation,
            structure: r.structure,
            partition: r.partition.clone(),
            psi: to_rows(&r.psi),
            psi0: to_rows(&r.psi0),
            beta: r.beta.iter().copied().collect(),
            psi_f: to_rows(&r.psi_f),
            beta_out: r.beta_out.iter().copied().collect(),
        }
    }
}

impl ReducedDoc {
    pub fn to_network(&self) -> Result<ReducedNetwork> {
        let m: usize = self.partition.iter().sum();
        ReducedNetwork::new(
            from_rows(&self.psi, m, "Psi")?,
            from_rows(&self.psi0, 0, "Psi0")?,
            DVector::from_vec(self.beta.clone()),
            from_rows(&self.psi_f, m, "Psi_f")?,
            DVector::from_vec(self.beta_out.clone()),
            self.partition.clone(),
            self.structure,
            self.activation,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDoc {
    pub reduced: ReducedDoc,
    pub gamma_x: f64,
    pub gamma: f64,
    pub bound_sup: f64,
    pub solver_status: SolveStatus,
}

impl From<&SynthesisResult> for ResultDoc {
    fn from(r: &SynthesisResult) -> Self {
        Self {
            reduced: ReducedDoc::from(&r.reduced),
            gamma_x: r.gamma_x,
            gamma: r.gamma,
            bound_sup: r.bound_sup,
            solver_status: r.solution.status,
        }
    }
}

/// Output of a fixed-pair verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub gamma_x: f64,
    pub gamma: f64,
    pub bound_sup: f64,
    pub solver_status: SolveStatus,
}

impl From<&PairCertificate> for CertificateDoc {
    fn from(c: &PairCertificate) -> Self {
        Self { gamma_x: c.gamma_x, gamma: c.gamma, bound_sup: c.bound_sup, solver_status: c.status }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn read_network(path: &Path) -> Result<LayerwiseNetwork> {
    read_json::<NetworkDoc>(path)?.to_network()
}

pub fn read_box(path: &Path) -> Result<InputBox> {
    let b: InputBox = read_json(path)?;
    b.validate()?;
    Ok(b)
}

/// Reads a reduced network from a reduced document, a result document, or a
/// layerwise network document (converted with `Ψ = W`).
pub fn read_reduced_any(path: &Path) -> Result<ReducedNetwork> {
    let value: serde_json::Value = read_json(path)?;
    if value.get("reduced").is_some() {
        return serde_json::from_value::<ResultDoc>(value)?.reduced.to_network();
    }
    if value.get("layers").is_some() {
        let net = serde_json::from_value::<NetworkDoc>(value)?.to_network()?;
        return Ok(ReducedNetwork::from_implicit(&net.to_implicit()));
    }
    serde_json::from_value::<ReducedDoc>(value)?.to_network()
}

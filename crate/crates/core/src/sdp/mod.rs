//! Affine matrix expressions, the certificate LMI and pluggable SDP backends.

#[cfg(feature = "clarabel")]
mod clarabel;
pub mod expr;
mod ipm;
pub mod problem;
mod schur;
pub mod vars;

use serde::{Deserialize, Serialize};

#[cfg(feature = "clarabel")]
pub use self::clarabel::ClarabelSolver;
pub use expr::{AffineMatrixExpr, LinForm, Param, QuadFormBuilder};
pub use ipm::InteriorPointSolver;
pub use problem::{
    check_nsd, to_standard_form, ConicProblem, NsdCheck, SdpSolver, Solution, SolveStatus, SolverSettings,
    SparseSym, PSD_CHECK_TOL, SIGN_CHECK_TOL,
};
pub use schur::assemble_schur;
pub use vars::{Role, Sign, VarBlock, VarGroup, VarId, VarInfo, VarSpace};

/// Selectable solver backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Built-in dense primal-dual interior-point method.
    #[default]
    InteriorPoint,
    /// Clarabel (requires the `clarabel` feature).
    Clarabel,
}

impl Backend {
    pub fn solver(self) -> crate::Result<Box<dyn SdpSolver>> {
        match self {
            Backend::InteriorPoint => Ok(Box::new(InteriorPointSolver::default())),
            #[cfg(feature = "clarabel")]
            Backend::Clarabel => Ok(Box::new(ClarabelSolver)),
            #[cfg(not(feature = "clarabel"))]
            Backend::Clarabel => {
                Err(crate::Error::InvalidOptions("built without the `clarabel` feature".into()))
            }
        }
    }

    pub fn available() -> &'static [Backend] {
        #[cfg(feature = "clarabel")]
        {
            &[Backend::InteriorPoint, Backend::Clarabel]
        }
        #[cfg(not(feature = "clarabel"))]
        {
            &[Backend::InteriorPoint]
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Backend::InteriorPoint => "interior-point",
            Backend::Clarabel => "clarabel",
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "interior-point" | "ipm" => Ok(Backend::InteriorPoint),
            "clarabel" => Ok(Backend::Clarabel),
            other => Err(format!("unknown backend `{other}` (expected interior-point or clarabel)")),
        }
    }
}

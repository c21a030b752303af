//! Synthesis of reduced-order ReLU networks with a certified worst-case
//! approximation error.
//!
//! Given a full network `f` and an input box, [`synthesis::synthesize`]
//! solves one semidefinite program whose solution yields both a smaller
//! network `g` and constants `γₓ, γ` with `‖f(x) − g(x)‖² ≤ γₓ‖x‖² + γ` on
//! the whole box.

// Links the system OpenBLAS used by Clarabel's PSD cone.
#[cfg(feature = "clarabel")]
extern crate openblas_src;

pub mod error;
pub mod io;
pub mod lab;
pub mod network;
pub mod qc;
pub mod sdp;
pub mod synthesis;

pub use error::{Error, Result};
pub use network::{ActivationKind, ImplicitForm, InputBox, Layer, LayerwiseNetwork, ReducedNetwork, Structure};
pub use synthesis::{synthesize, verify_pair_bound, SynthesisOptions, SynthesisResult};

//! Multiplier matrix for a fixed (numeric) reduced network.
//!
//! With `Ψ` known the products `T·Ψ` are linear in the multipliers, so the
//! reduced network needs no variable substitution and every multiplier can
//! be independent.

use super::{diff, full_preactivation, row_form, unit, Dims};
use crate::error::{Error, Result};
use crate::network::{ActivationKind, ImplicitForm, ReducedNetwork};
use crate::sdp::{AffineMatrixExpr, LinForm, QuadFormBuilder, Sign, VarBlock, VarGroup, VarSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AnalysisOptions {
    /// Add pairwise slope constraints between all hidden units.
    pub slope: bool,
}

/// Multipliers registered by [`analysis_lambda_expr`]; groups that do not
/// apply to the activation are `None`.
#[derive(Debug, Clone, Default)]
pub struct AnalysisVars {
    pub t0: Option<VarBlock>,
    pub t0_r: Option<VarBlock>,
    pub tplus: Option<VarBlock>,
    pub tplus_r: Option<VarBlock>,
    pub tcplus: Option<VarBlock>,
    pub tcplus_r: Option<VarBlock>,
    pub tcross: Option<VarBlock>,
    pub tcross_r: Option<VarBlock>,
    pub tsec: Option<VarBlock>,
    pub tsec_r: Option<VarBlock>,
    pub tb: Option<VarBlock>,
    pub tb_r: Option<VarBlock>,
    pub tslope: Option<VarBlock>,
}

/// `Λ` for the pair (`full`, `reduced`), affine in multipliers only.
///
/// ReLU uses complementarity, positivity, positive-complement and both
/// cross families; tanh and the shifted sigmoid use the sector `[0, δ]` and
/// bounded-output constraints. Every term is scaled by 2.
pub fn analysis_lambda_expr(
    full: &ImplicitForm,
    reduced: &ReducedNetwork,
    activation: ActivationKind,
    space: &mut VarSpace,
    opts: AnalysisOptions,
) -> Result<(AffineMatrixExpr, AnalysisVars)> {
    if full.activation != activation || reduced.activation != activation {
        return Err(Error::UnsupportedActivation(if full.activation != activation {
            full.activation
        } else {
            reduced.activation
        }));
    }
    if reduced.input_dim() != full.input_dim() || reduced.output_dim() != full.output_dim() {
        return Err(Error::DimensionMismatch {
            what: "reduced network input/output".into(),
            expected: full.input_dim(),
            got: reduced.input_dim(),
        });
    }
    let dims = Dims::new(full.input_dim(), full.hidden_size(), reduced.hidden_size(), full.output_dim());
    let (n, m) = (dims.n, dims.m);
    let o1 = dims.o1();
    let one = unit(o1);

    // (pre-activation, post-activation) of every hidden unit, full first.
    let mut pre: Vec<LinForm> = (0..n).map(|i| full_preactivation(full, &dims, i)).collect();
    let mut post: Vec<LinForm> = (0..n).map(|i| unit(dims.ox_full() + i)).collect();
    for j in 0..m {
        let mut f = row_form(&reduced.psi, dims.oz(), j);
        f.extend(row_form(&reduced.psi0, dims.ox(), j));
        if reduced.beta[j] != 0.0 {
            f.push((o1, reduced.beta[j]));
        }
        pre.push(f);
        post.push(unit(dims.oz() + j));
    }
    let full_units = 0..n;
    let red_units = n..n + m;

    let mut q = QuadFormBuilder::new(dims.mu_dim());
    let mut vars = AnalysisVars::default();

    match activation {
        ActivationKind::Relu => {
            let t0 = space.add_diagonal(VarGroup::T0, n, Sign::Free);
            let t0_r = space.add_diagonal(VarGroup::T0Reduced, m, Sign::Free);
            let tp = space.add_vector(VarGroup::TPlus, n, Sign::Nonneg);
            let tp_r = space.add_vector(VarGroup::TPlusReduced, m, Sign::Nonneg);
            let tc = space.add_vector(VarGroup::TCompPlus, n, Sign::Nonneg);
            let tc_r = space.add_vector(VarGroup::TCompPlusReduced, m, Sign::Nonneg);
            let tx = space.add_matrix(VarGroup::TCross, n, m, Sign::Nonneg, |_, _| true);
            let tx_r = space.add_matrix(VarGroup::TCrossReduced, m, n, Sign::Nonneg, |_, _| true);

            let slack: Vec<LinForm> = (0..n + m).map(|u| diff(&post[u], &pre[u])).collect();
            for (u, (t0b, tpb, tcb, base)) in full_units
                .clone()
                .map(|u| (u, (&t0, &tp, &tc, 0)))
                .chain(red_units.clone().map(|u| (u, (&t0_r, &tp_r, &tc_r, n))))
            {
                let k = u - base;
                // 2 φ (ξ − φ) against T0, positivity and positive complement.
                q.add_product(t0b.at(k), &post[u], &pre[u], 2.0);
                q.add_product(t0b.at(k), &post[u], &post[u], -2.0);
                q.add_product(tpb.at(k), &post[u], &one, 2.0);
                q.add_product(tcb.at(k), &slack[u], &one, 2.0);
            }
            for i in 0..n {
                for j in 0..m {
                    q.add_product(tx.get(i, j), &slack[i], &post[n + j], 2.0);
                    q.add_product(tx_r.get(j, i), &slack[n + j], &post[i], 2.0);
                }
            }
            vars.t0 = Some(t0);
            vars.t0_r = Some(t0_r);
            vars.tplus = Some(tp);
            vars.tplus_r = Some(tp_r);
            vars.tcplus = Some(tc);
            vars.tcplus_r = Some(tc_r);
            vars.tcross = Some(tx);
            vars.tcross_r = Some(tx_r);
        }
        ActivationKind::Tanh | ActivationKind::ShiftedSigmoid => {
            let delta = activation.sector_slope();
            let (lo, hi) = activation.bounds().ok_or(Error::UnsupportedActivation(activation))?;
            let ts = space.add_diagonal(VarGroup::TSector, n, Sign::Nonneg);
            let ts_r = space.add_diagonal(VarGroup::TSectorReduced, m, Sign::Nonneg);
            let tb = space.add_diagonal(VarGroup::TBounded, n, Sign::Nonneg);
            let tb_r = space.add_diagonal(VarGroup::TBoundedReduced, m, Sign::Nonneg);
            for u in 0..n + m {
                let (sb, bb, k) = if u < n { (&ts, &tb, u) } else { (&ts_r, &tb_r, u - n) };
                // 2 (δ y − φ) φ
                q.add_product(sb.at(k), &pre[u], &post[u], 2.0 * delta);
                q.add_product(sb.at(k), &post[u], &post[u], -2.0);
                // 2 (c̄ − φ)(φ − c̲)
                let upper: LinForm = vec![(o1, hi), (post[u][0].0, -1.0)];
                let lower: LinForm = vec![(post[u][0].0, 1.0), (o1, -lo)];
                q.add_product(bb.at(k), &upper, &lower, 2.0);
            }
            vars.tsec = Some(ts);
            vars.tsec_r = Some(ts_r);
            vars.tb = Some(tb);
            vars.tb_r = Some(tb_r);
        }
    }

    if opts.slope {
        let delta = activation.sector_slope();
        let total = n + m;
        let tsl = space.add_matrix(VarGroup::TSlope, total, total, Sign::Nonneg, |i, j| i < j);
        for i in 0..total {
            for j in i + 1..total {
                let dy = diff(&pre[i], &pre[j]);
                let dphi = diff(&post[i], &post[j]);
                q.add_product(tsl.get(i, j), &dy, &dphi, 2.0 * delta);
                q.add_product(tsl.get(i, j), &dphi, &dphi, -2.0);
            }
        }
        vars.tslope = Some(tsl);
    }

    Ok((q.finish(), vars))
}

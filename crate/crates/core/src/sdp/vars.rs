//! Registry of scalar decision variables.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Family a decision variable belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarGroup {
    /// Complementarity multiplier of the full network (diagonal).
    T0,
    /// Complementarity multiplier of the reduced network (diagonal).
    T0Reduced,
    TPlus,
    TPlusReduced,
    TCompPlus,
    TCompPlusReduced,
    /// Cross multiplier `T^×` (`N × M`).
    TCross,
    /// Cross multiplier `T_r^×` (`M × N`); only free in analysis mode.
    TCrossReduced,
    TSector,
    TSectorReduced,
    TBounded,
    TBoundedReduced,
    TSlope,
    FPsi,
    F0,
    FBeta,
    PsiF,
    BetaOut,
    TauInf,
    GammaX,
    Gamma,
}

impl VarGroup {
    pub fn name(self) -> &'static str {
        match self {
            VarGroup::T0 => "T0",
            VarGroup::T0Reduced => "T0_r",
            VarGroup::TPlus => "Tplus",
            VarGroup::TPlusReduced => "Tplus_r",
            VarGroup::TCompPlus => "Tcplus",
            VarGroup::TCompPlusReduced => "Tcplus_r",
            VarGroup::TCross => "Tcross",
            VarGroup::TCrossReduced => "Tcross_r",
            VarGroup::TSector => "Tsec",
            VarGroup::TSectorReduced => "Tsec_r",
            VarGroup::TBounded => "TB",
            VarGroup::TBoundedReduced => "TB_r",
            VarGroup::TSlope => "Tsl",
            VarGroup::FPsi => "F_Psi",
            VarGroup::F0 => "F_0",
            VarGroup::FBeta => "F_beta",
            VarGroup::PsiF => "Psi_f",
            VarGroup::BetaOut => "beta_out",
            VarGroup::TauInf => "tau_inf",
            VarGroup::GammaX => "gamma_x",
            VarGroup::Gamma => "gamma",
        }
    }
}

/// Sign constraint attached to a variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sign {
    Free,
    Nonneg,
    AtLeast(f64),
}

impl Sign {
    pub fn lower_bound(self) -> Option<f64> {
        match self {
            Sign::Free => None,
            Sign::Nonneg => Some(0.0),
            Sign::AtLeast(eps) => Some(eps),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    DiagonalEntry,
    MatrixEntry,
    VectorEntry,
    Scalar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarInfo {
    pub name: String,
    pub group: VarGroup,
    pub sign: Sign,
    pub role: Role,
}

/// Layout of one variable group as a matrix. Entries without a variable are
/// structural zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct VarBlock {
    pub group: VarGroup,
    pub rows: usize,
    pub cols: usize,
    ids: Vec<Option<VarId>>,
}

impl VarBlock {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Option<VarId> {
        self.ids[i * self.cols + j]
    }

    /// Entry `i` of a vector-shaped block, or the diagonal entry `(i, i)`.
    #[inline]
    pub fn at(&self, i: usize) -> Option<VarId> {
        if self.cols == 1 {
            self.get(i, 0)
        } else {
            self.get(i, i)
        }
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> + '_ {
        self.ids.iter().flatten().copied()
    }

    pub fn matrix(&self, values: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).map_or(0.0, |v| values[v.0]))
    }

    pub fn vector(&self, values: &[f64]) -> DVector<f64> {
        if self.cols == 1 {
            DVector::from_fn(self.rows, |i, _| self.get(i, 0).map_or(0.0, |v| values[v.0]))
        } else {
            DVector::from_fn(self.rows, |i, _| self.get(i, i).map_or(0.0, |v| values[v.0]))
        }
    }
}

/// All decision variables of one SDP.
#[derive(Debug, Clone, Default)]
pub struct VarSpace {
    vars: Vec<VarInfo>,
    blocks: BTreeMap<VarGroup, VarBlock>,
}

impl VarSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn info(&self, id: VarId) -> &VarInfo {
        &self.vars[id.0]
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &VarInfo)> {
        self.vars.iter().enumerate().map(|(i, v)| (VarId(i), v))
    }

    pub fn block(&self, group: VarGroup) -> Option<&VarBlock> {
        self.blocks.get(&group)
    }

    pub fn groups(&self) -> impl Iterator<Item = &VarBlock> {
        self.blocks.values()
    }

    pub fn lower_bounds(&self) -> Vec<Option<f64>> {
        self.vars.iter().map(|v| v.sign.lower_bound()).collect()
    }

    /// Registers a `rows × cols` matrix group; `present(i, j)` decides which
    /// entries are variables (the rest are pinned to zero).
    ///
    /// Panics if the group is already registered.
    pub fn add_matrix(
        &mut self,
        group: VarGroup,
        rows: usize,
        cols: usize,
        sign: Sign,
        present: impl Fn(usize, usize) -> bool,
    ) -> VarBlock {
        let role = if cols == 1 { Role::VectorEntry } else { Role::MatrixEntry };
        let mut ids = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                ids.push(present(i, j).then(|| {
                    let name = if cols == 1 {
                        format!("{}[{i}]", group.name())
                    } else {
                        format!("{}[{i},{j}]", group.name())
                    };
                    self.push(name, group, sign, role)
                }));
            }
        }
        self.insert(VarBlock { group, rows, cols, ids })
    }

    pub fn add_vector(&mut self, group: VarGroup, len: usize, sign: Sign) -> VarBlock {
        self.add_matrix(group, len, 1, sign, |_, _| true)
    }

    pub fn add_diagonal(&mut self, group: VarGroup, n: usize, sign: Sign) -> VarBlock {
        let mut ids = vec![None; n * n];
        for i in 0..n {
            let name = format!("{}[{i}]", group.name());
            ids[i * n + i] = Some(self.push(name, group, sign, Role::DiagonalEntry));
        }
        self.insert(VarBlock { group, rows: n, cols: n, ids })
    }

    pub fn add_scalar(&mut self, group: VarGroup, sign: Sign) -> VarId {
        let id = self.push(group.name().to_string(), group, sign, Role::Scalar);
        self.insert(VarBlock { group, rows: 1, cols: 1, ids: vec![Some(id)] });
        id
    }

    fn push(&mut self, name: String, group: VarGroup, sign: Sign, role: Role) -> VarId {
        self.vars.push(VarInfo { name, group, sign, role });
        VarId(self.vars.len() - 1)
    }

    fn insert(&mut self, block: VarBlock) -> VarBlock {
        let group = block.group;
        let prev = self.blocks.insert(group, block.clone());
        assert!(prev.is_none(), "variable group {} registered twice", group.name());
        block
    }
}

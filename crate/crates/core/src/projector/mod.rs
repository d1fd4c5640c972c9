//! Projection operators onto quantum constraint subspaces.

mod constraint;
mod diagnostics;
mod displacement;
mod group_average;
mod integral;
mod spectral;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use constraint::{
    check_closed_first_class, check_second_class, Classification, ConstraintSet,
    StructureConstants, CLOSURE_TOLERANCE,
};
pub use diagnostics::{projector_diagnostics, ProjectorReport};
pub use displacement::{displacement_matrix, laguerre};
pub use group_average::projector_group_average_u1;
pub use integral::{
    projector_weighted_integral, CanonicalPairFlow, ConstraintFlow, Weight, WeightFn,
    REFINEMENT_TOLERANCE,
};
pub use spectral::{projector_spectral, DEFAULT_ZERO_TOL};

use crate::error::Result;
use crate::fock::FockSpace;
use crate::linalg::{self, CMatrix};
use crate::operator::OperatorMatrix;

/// Residual bound for idempotency and hermiticity of a valid projector.
pub const PROJECTOR_TOLERANCE: f64 = 1e-10;
/// Allowed distance of the trace from the integer rank.
pub const RANK_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    GroupAverageU1,
    SpectralKernel,
    GaussianPair,
    CustomWeight,
    /// Built directly from a known closed form.
    ClosedForm,
}

#[derive(Debug, Clone)]
pub struct Projector {
    operator: OperatorMatrix,
    pub method: Method,
    /// `||E^2 - E||`.
    pub idempotency_residual: f64,
    /// `||E - E^dagger||` before symmetrization.
    pub hermiticity_residual: f64,
    pub trace: f64,
    pub rank: usize,
    /// The discrete U(1) average used too few nodes for the spectrum.
    pub aliased: bool,
    pub empty_subspace: bool,
}

impl Projector {
    /// Symmetrize `matrix`, then record diagnostics.
    pub fn from_matrix(space: Arc<FockSpace>, matrix: CMatrix, method: Method) -> Result<Self> {
        let hermiticity_residual = linalg::spectral_norm(&(&matrix - matrix.adjoint()));
        let sym = linalg::hermitian_part(&matrix);
        let square = linalg::matmul(&sym, &sym);
        let idempotency_residual = linalg::spectral_norm(&linalg::hermitian_part(&(square - &sym)));
        let trace = sym.trace().re;
        let rank = trace.round().max(0.0) as usize;
        let operator = OperatorMatrix::new(space, sym)?.into_hermitian()?;
        Ok(Self {
            operator,
            method,
            idempotency_residual,
            hermiticity_residual,
            trace,
            rank,
            aliased: false,
            empty_subspace: rank == 0 && trace.abs() < RANK_TOLERANCE,
        })
    }

    pub fn identity(space: Arc<FockSpace>) -> Self {
        let d = space.dimension();
        Self {
            operator: OperatorMatrix::identity(space),
            method: Method::ClosedForm,
            idempotency_residual: 0.0,
            hermiticity_residual: 0.0,
            trace: d as f64,
            rank: d,
            aliased: false,
            empty_subspace: d == 0,
        }
    }

    /// `I (x) |0><0|` on `mode`: projector onto the vacuum of one mode.
    pub fn mode_vacuum(space: Arc<FockSpace>, mode: usize) -> Result<Self> {
        space.check_mode(mode)?;
        let m = OperatorMatrix::diagonal(space.clone(), |n| if n[mode] == 0 { 1.0 } else { 0.0 });
        Self::from_matrix(space, m.into_matrix(), Method::ClosedForm)
    }

    pub fn operator(&self) -> &OperatorMatrix {
        &self.operator
    }

    pub fn matrix(&self) -> &CMatrix {
        self.operator.matrix()
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        self.operator.space()
    }

    pub fn dimension(&self) -> usize {
        self.operator.dimension()
    }

    /// Idempotent, hermitian, integral trace, and not aliased.
    pub fn is_valid(&self) -> bool {
        !self.aliased
            && self.idempotency_residual <= PROJECTOR_TOLERANCE
            && self.hermiticity_residual <= PROJECTOR_TOLERANCE
            && (self.trace - self.rank as f64).abs() <= RANK_TOLERANCE
    }

    /// Spectral-norm distance to another projector.
    pub fn distance(&self, other: &Projector) -> Result<f64> {
        self.operator.distance(&other.operator)
    }
}

/// Spectral-norm distance of `e` from `I (x) |0><0|` on `mode`.
pub fn vacuum_projector_deviation(e: &Projector, mode: usize) -> Result<f64> {
    let target = Projector::mode_vacuum(e.space().clone(), mode)?;
    e.distance(&target)
}

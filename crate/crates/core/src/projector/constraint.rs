use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::FockSpace;
use crate::linalg::{self, CMatrix};
use crate::operator::{commutator, OperatorMatrix, FLAG_TOLERANCE};

/// Residual below which a constraint algebra counts as closed.
pub const CLOSURE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    ClosedFirstClass,
    /// Structure functions instead of constants. No check in this crate sets it.
    OpenFirstClass,
    SecondClass,
    Unverified,
}

/// Real constants `c_ab^c`, stored densely as `[a][b][c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    size: usize,
    data: Vec<f64>,
}

impl StructureConstants {
    pub fn zeros(size: usize) -> Self {
        Self {
            size,
            data: vec![0.0; size * size * size],
        }
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[(a * self.size + b) * self.size + c]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, value: f64) {
        self.data[(a * self.size + b) * self.size + c] = value;
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

/// Hermitian constraint operators with optional closure data.
#[derive(Debug, Clone)]
pub struct ConstraintSet {
    phis: Vec<OperatorMatrix>,
    space: Arc<FockSpace>,
    pub structure_c: Option<StructureConstants>,
    /// `h_a^b` with rows indexed by `a`.
    pub structure_h: Option<DMatrix<f64>>,
    classification: Classification,
}

impl ConstraintSet {
    pub fn new(phis: Vec<OperatorMatrix>) -> Result<Self> {
        let mut checked = Vec::with_capacity(phis.len());
        for phi in phis {
            if let Some(first) = checked.first() {
                phi.same_space(first)?;
            }
            let phi = if phi.is_hermitian() {
                phi
            } else {
                phi.into_hermitian()?
            };
            checked.push(phi);
        }
        let space = match checked.first() {
            Some(p) => p.space().clone(),
            None => {
                return Err(Error::InvalidArgument(
                    "no constraints given; use ConstraintSet::empty".into(),
                ))
            }
        };
        Ok(Self {
            phis: checked,
            space,
            structure_c: None,
            structure_h: None,
            classification: Classification::Unverified,
        })
    }

    /// No constraints; the space is needed to build the identity projector.
    pub fn empty(space: Arc<FockSpace>) -> Self {
        Self {
            phis: Vec::new(),
            space,
            structure_c: None,
            structure_h: None,
            classification: Classification::Unverified,
        }
    }

    pub fn with_structure(mut self, c: StructureConstants, h: DMatrix<f64>) -> Result<Self> {
        let n = self.phis.len();
        if c.size() != n {
            return Err(Error::StructureShape(format!(
                "c has size {} for {n} constraints",
                c.size()
            )));
        }
        if h.nrows() != n || h.ncols() != n {
            return Err(Error::StructureShape(format!(
                "h is {}x{} for {n} constraints",
                h.nrows(),
                h.ncols()
            )));
        }
        self.structure_c = Some(c);
        self.structure_h = Some(h);
        Ok(self)
    }

    /// All structure constants zero (abelian constraints commuting with H).
    pub fn with_vanishing_structure(self) -> Result<Self> {
        let n = self.phis.len();
        self.with_structure(StructureConstants::zeros(n), DMatrix::zeros(n, n))
    }

    pub fn phis(&self) -> &[OperatorMatrix] {
        &self.phis
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phis.is_empty()
    }

    pub fn classification(&self) -> Classification {
        self.classification
    }

    /// `sum_a xi_a Phi_a`.
    pub fn combination(&self, xi: &[f64]) -> Result<OperatorMatrix> {
        if xi.len() != self.phis.len() {
            return Err(Error::DimensionMismatch {
                left: self.phis.len(),
                right: xi.len(),
            });
        }
        let first = self
            .phis
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty constraint set".into()))?;
        let mut acc = CMatrix::zeros(first.dimension(), first.dimension());
        for (phi, &x) in self.phis.iter().zip(xi) {
            acc += phi.matrix().map(|z| z * x);
        }
        OperatorMatrix::new(first.space().clone(), acc)?.into_hermitian()
    }
}

fn interior_norm(op: &CMatrix, interior: &[usize]) -> f64 {
    let n = interior.len();
    let sub = CMatrix::from_fn(n, n, |r, c| op[(interior[r], interior[c])]);
    linalg::spectral_norm(&sub)
}

/// Residuals of `[Phi_a, Phi_b] = i c_ab^c Phi_c` and `[Phi_a, H] = i h_a^b Phi_b`.
///
/// Both are measured on interior basis states (one ladder step away from the
/// truncation edge) and normalized by `max(1, ||Phi||^2)` and
/// `max(1, ||Phi|| ||H||)`. When both fall below [`CLOSURE_TOLERANCE`] the set
/// is classified as closed first class.
pub fn check_closed_first_class(cs: &mut ConstraintSet, h: &OperatorMatrix) -> Result<(f64, f64)> {
    if cs.is_empty() {
        cs.classification = Classification::ClosedFirstClass;
        return Ok((0.0, 0.0));
    }
    let c = cs
        .structure_c
        .as_ref()
        .ok_or(Error::MissingStructure("c_ab^c"))?;
    let hs = cs
        .structure_h
        .as_ref()
        .ok_or(Error::MissingStructure("h_a^b"))?;
    h.same_space(&cs.phis[0])?;

    let space = h.space();
    let interior = space.interior_indices();
    let phi_norm = cs
        .phis
        .iter()
        .map(|p| p.spectral_norm())
        .fold(0.0, f64::max);
    let h_norm = h.spectral_norm();
    let n = cs.phis.len();
    let i = Complex64::new(0.0, 1.0);

    let mut residual_cc = 0.0_f64;
    for a in 0..n {
        for b in 0..n {
            let mut defect = commutator(&cs.phis[a], &cs.phis[b])?.into_matrix();
            for (k, phi) in cs.phis.iter().enumerate() {
                let coeff = c.get(a, b, k);
                if coeff != 0.0 {
                    defect -= phi.matrix().map(|z| z * i * coeff);
                }
            }
            residual_cc = residual_cc.max(interior_norm(&defect, &interior));
        }
    }
    residual_cc /= phi_norm.powi(2).max(1.0);

    let mut residual_ch = 0.0_f64;
    for a in 0..n {
        let mut defect = commutator(&cs.phis[a], h)?.into_matrix();
        for (k, phi) in cs.phis.iter().enumerate() {
            let coeff = hs[(a, k)];
            if coeff != 0.0 {
                defect -= phi.matrix().map(|z| z * i * coeff);
            }
        }
        residual_ch = residual_ch.max(interior_norm(&defect, &interior));
    }
    residual_ch /= (phi_norm * h_norm).max(1.0);

    if residual_cc <= CLOSURE_TOLERANCE && residual_ch <= CLOSURE_TOLERANCE {
        cs.classification = Classification::ClosedFirstClass;
    }
    Ok((residual_cc, residual_ch))
}

/// Test for a c-number constraint algebra `[Phi_a, Phi_b] = i theta_ab` with an
/// invertible `theta`, the defining property of second-class constraints.
///
/// Returns the smallest singular value of `theta` (zero when some commutator is
/// not proportional to the identity on interior states). A positive value
/// classifies the set as second class.
pub fn check_second_class(cs: &mut ConstraintSet) -> Result<f64> {
    let n = cs.phis.len();
    if n == 0 {
        return Ok(0.0);
    }
    let interior = cs.phis[0].space().interior_indices();
    let k = interior.len();
    let mut theta = DMatrix::<f64>::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let comm = commutator(&cs.phis[a], &cs.phis[b])?.into_matrix();
            let sub = CMatrix::from_fn(k, k, |r, c| comm[(interior[r], interior[c])]);
            let mean = sub.trace() / k.max(1) as f64;
            let off = &sub - CMatrix::identity(k, k).map(|z| z * mean);
            if linalg::frobenius(&off) > FLAG_TOLERANCE * linalg::frobenius(&sub).max(1.0) {
                return Ok(0.0);
            }
            // [Phi_a, Phi_b] = i theta_ab  =>  theta_ab = -i * mean
            theta[(a, b)] = mean.im;
        }
    }
    let smallest = theta
        .svd(false, false)
        .singular_values
        .iter()
        .fold(f64::INFINITY, |m, &s| m.min(s));
    if smallest > CLOSURE_TOLERANCE {
        cs.classification = Classification::SecondClass;
    }
    Ok(smallest)
}

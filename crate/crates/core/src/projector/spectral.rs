use super::{ConstraintSet, Method, Projector};
use crate::error::Result;
use crate::linalg::{self, CMatrix};

/// Relative threshold (against the largest eigenvalue) for the kernel of
/// `sum_a Phi_a^2`.
pub const DEFAULT_ZERO_TOL: f64 = 1e-10;

/// Projector onto the common kernel of the constraints, computed as the
/// eigenvectors of `C = sum_a Phi_a^2` with eigenvalue at most
/// `zero_tol * lambda_max`. An empty set gives the identity.
///
pub fn projector_spectral(cs: &ConstraintSet, zero_tol: f64) -> Result<Projector> {
    let Some(first) = cs.phis().first() else {
        return Ok(Projector::identity(cs.space().clone()));
    };
    let d = first.dimension();
    let mut c = CMatrix::zeros(d, d);
    for phi in cs.phis() {
        c += linalg::matmul(phi.matrix(), phi.matrix());
    }
    linalg::ensure_finite(&c, "constraint kernel operator")?;
    let eig = linalg::eigh_unchecked(&c);
    let lambda_max = eig.eigenvalues.last().copied().unwrap_or(0.0);
    let cut = zero_tol * lambda_max.max(0.0);
    let (matrix, _) = eig.projector_onto(|lambda| lambda <= cut);
    Projector::from_matrix(first.space().clone(), matrix, Method::SpectralKernel)
}

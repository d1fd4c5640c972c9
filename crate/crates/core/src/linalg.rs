//! Dense complex matrix kernels on `nalgebra` storage.
//!
//! Products are routed through real GEMMs (`nalgebra` dispatches `f64` products
//! to `matrixmultiply`), which is several times faster than the generic complex
//! path at the dimensions used here (D up to ~1000).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Complex product `a * b` through four real products.
pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.nrows(), "matmul: inner dimensions differ");
    if a.nrows() * a.ncols() * b.ncols() < 4096 {
        return a * b;
    }
    let ar = a.map(|z| z.re);
    let ai = a.map(|z| z.im);
    let br = b.map(|z| z.re);
    let bi = b.map(|z| z.im);
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    re.zip_map(&im, Complex64::new)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

/// Largest singular value.
///
/// Hermitian inputs are handled through their eigenvalues directly; anything
/// else goes through the eigenvalues of `A^dagger A`.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let f = frobenius(a);
    if f == 0.0 {
        return 0.0;
    }
    if !a.is_square() {
        let gram = matmul(&a.adjoint(), a);
        return max_abs_eigenvalue(&hermitian_part(&gram)).sqrt();
    }
    let skew = frobenius(&(a - a.adjoint()));
    if skew <= 1e-15 * f {
        return max_abs_eigenvalue(&hermitian_part(a));
    }
    if frobenius(&(a + a.adjoint())) <= 1e-15 * f {
        // anti-hermitian: i*A is hermitian with the same singular values
        return max_abs_eigenvalue(&hermitian_part(&a.map(|z| z * I)));
    }
    let gram = matmul(&a.adjoint(), a);
    max_abs_eigenvalue(&hermitian_part(&gram)).sqrt()
}

fn max_abs_eigenvalue(h: &CMatrix) -> f64 {
    h.clone()
        .symmetric_eigenvalues()
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Spectral-norm distance of `a` from hermiticity relative to `||a||`.
///
/// Cheap Frobenius bounds settle the common cases; the exact spectral norms are
/// only computed when the bounds are inconclusive.
pub fn hermiticity_defect(a: &CMatrix, tol: f64) -> (bool, f64) {
    let diff = a - a.adjoint();
    let diff_f = frobenius(&diff);
    if diff_f == 0.0 {
        return (true, 0.0);
    }
    let n = a.nrows().max(1) as f64;
    let a_f = frobenius(a);
    // ||diff||_2 <= ||diff||_F and ||a||_2 >= ||a||_F / sqrt(n)
    if diff_f <= tol * a_f / n.sqrt() {
        return (true, diff_f * n.sqrt() / a_f);
    }
    let rel = spectral_norm(&diff) / spectral_norm(a).max(f64::MIN_POSITIVE);
    (rel <= tol, rel)
}

/// `||U^dagger U - I||` in spectral norm, with the same shortcut as above.
pub fn unitarity_defect(u: &CMatrix, tol: f64) -> (bool, f64) {
    let n = u.nrows();
    let gram = matmul(&u.adjoint(), u) - identity(n);
    let f = frobenius(&gram);
    if f <= tol {
        return (true, f);
    }
    let s = spectral_norm(&gram);
    (s <= tol, s)
}

/// Eigenvalues in ascending order with matching unitary eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl HermitianEigen {
    /// `V f(Lambda) V^dagger` for a scalar function of the eigenvalues.
    pub fn apply(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let fj = f(lambda);
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= fj);
        }
        matmul(&scaled, &v.adjoint())
    }

    /// Orthogonal projector onto the eigenvectors selected by `keep`.
    pub fn projector_onto(&self, keep: impl Fn(f64) -> bool) -> (CMatrix, usize) {
        let cols: Vec<usize> = (0..self.eigenvalues.len())
            .filter(|&j| keep(self.eigenvalues[j]))
            .collect();
        let n = self.eigenvectors.nrows();
        if cols.is_empty() {
            return (CMatrix::zeros(n, n), 0);
        }
        let basis = self.eigenvectors.select_columns(cols.iter());
        (matmul(&basis, &basis.adjoint()), cols.len())
    }
}

/// Raw eigendecomposition of a matrix assumed hermitian (the lower triangle is
/// what `nalgebra` reads, so the input is symmetrized first).
pub(crate) fn eigh_unchecked(a: &CMatrix) -> HermitianEigen {
    let sym = hermitian_part(a);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = eig.eigenvectors.select_columns(order.iter());
    HermitianEigen {
        eigenvalues,
        eigenvectors,
    }
}

pub(crate) fn ensure_finite(a: &CMatrix, what: &'static str) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

// Pade(13) coefficients b_0..b_13 for the scaling-and-squaring exponential.
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371_920_351_148_152;

fn one_norm(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(a)` by scaling and squaring with a [13/13] Pade approximant.
pub fn expm_pade(a: &CMatrix) -> Result<CMatrix> {
    ensure_finite(a, "matrix exponential input")?;
    let n = a.nrows();
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let norm = one_norm(a);
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a.scale(0.5_f64.powi(squarings));
    let eye = identity(n);
    let a2 = matmul(&a, &a);
    let a4 = matmul(&a2, &a2);
    let a6 = matmul(&a2, &a4);
    let b = |k: usize| Complex64::new(PADE13[k], 0.0);

    let u_inner = &a6 * b(13) + &a4 * b(11) + &a2 * b(9);
    let u_inner = matmul(&a6, &u_inner) + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &eye * b(1);
    let u = matmul(&a, &u_inner);
    let v_inner = &a6 * b(12) + &a4 * b(10) + &a2 * b(8);
    let v = matmul(&a6, &v_inner) + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &eye * b(0);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .ok_or(Error::NonFinite("singular Pade denominator"))?;
    for _ in 0..squarings {
        r = matmul(&r, &r);
    }
    ensure_finite(&r, "matrix exponential result")?;
    Ok(r)
}

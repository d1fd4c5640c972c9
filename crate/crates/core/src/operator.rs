//! Operators and states on a truncated Fock space.
//!
//! Ladder operators drop transitions that leave the truncation. Quadratic
//! operators that conserve the relevant quanta (number operators, the
//! two-mode rotation generator) are assembled from normal-ordered ladder
//! products, so they are exact on every admitted basis state.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::FockSpace;
use crate::linalg::{self, CMatrix, CVector, HermitianEigen, I, ONE};

/// Relative tolerance used to verify structural flags.
pub const FLAG_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Flags {
    pub hermitian: bool,
    pub unitary: bool,
}

/// Dense complex square matrix acting on a [`FockSpace`].
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    space: Arc<FockSpace>,
    entries: CMatrix,
    flags: Flags,
}

impl OperatorMatrix {
    pub fn new(space: Arc<FockSpace>, entries: CMatrix) -> Result<Self> {
        let d = space.dimension();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: entries.nrows().max(entries.ncols()),
            });
        }
        Ok(Self {
            space,
            entries,
            flags: Flags::default(),
        })
    }

    /// Build and verify hermiticity; the stored matrix is symmetrized.
    pub fn hermitian(space: Arc<FockSpace>, entries: CMatrix) -> Result<Self> {
        Self::new(space, entries)?.into_hermitian()
    }

    pub fn identity(space: Arc<FockSpace>) -> Self {
        let d = space.dimension();
        Self {
            space,
            entries: linalg::identity(d),
            flags: Flags {
                hermitian: true,
                unitary: true,
            },
        }
    }

    pub fn zeros(space: Arc<FockSpace>) -> Self {
        let d = space.dimension();
        Self {
            space,
            entries: CMatrix::zeros(d, d),
            flags: Flags {
                hermitian: true,
                unitary: false,
            },
        }
    }

    /// Diagonal operator `sum_n f(n) |n><n|` over the basis multi-indices.
    pub fn diagonal(space: Arc<FockSpace>, f: impl Fn(&[usize]) -> f64) -> Self {
        let d = space.dimension();
        let mut entries = CMatrix::zeros(d, d);
        for i in 0..d {
            entries[(i, i)] = Complex64::new(f(space.unflatten(i)), 0.0);
        }
        Self {
            space,
            entries,
            flags: Flags {
                hermitian: true,
                unitary: false,
            },
        }
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn dimension(&self) -> usize {
        self.entries.nrows()
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn is_hermitian(&self) -> bool {
        self.flags.hermitian
    }

    pub fn is_unitary(&self) -> bool {
        self.flags.unitary
    }

    /// Verify `||A - A^dagger|| <= tol ||A||`, then symmetrize and flag.
    pub fn into_hermitian(mut self) -> Result<Self> {
        let (ok, residual) = linalg::hermiticity_defect(&self.entries, FLAG_TOLERANCE);
        if !ok {
            return Err(Error::NotHermitian {
                residual,
                tolerance: FLAG_TOLERANCE,
            });
        }
        self.entries = linalg::hermitian_part(&self.entries);
        self.flags.hermitian = true;
        Ok(self)
    }

    /// Verify `||U^dagger U - I|| <= tol` and flag.
    pub fn into_unitary(mut self) -> Result<Self> {
        let (ok, residual) = linalg::unitarity_defect(&self.entries, FLAG_TOLERANCE);
        if !ok {
            return Err(Error::NotUnitary {
                residual,
                tolerance: FLAG_TOLERANCE,
            });
        }
        self.flags.unitary = true;
        Ok(self)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space.clone(),
            entries: self.entries.adjoint(),
            flags: self.flags,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let hermitian = self.flags.hermitian && c.im == 0.0;
        Self {
            space: self.space.clone(),
            entries: self.entries.map(|z| z * c),
            flags: Flags {
                hermitian,
                unitary: false,
            },
        }
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(Complex64::new(x, 0.0))
    }

    pub fn same_space(&self, other: &Self) -> Result<()> {
        if self.dimension() != other.dimension() {
            return Err(Error::DimensionMismatch {
                left: self.dimension(),
                right: other.dimension(),
            });
        }
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(self.with_entries(linalg::matmul(&self.entries, &other.entries)))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut out = self.with_entries(&self.entries + &other.entries);
        out.flags.hermitian = self.flags.hermitian && other.flags.hermitian;
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut out = self.with_entries(&self.entries - &other.entries);
        out.flags.hermitian = self.flags.hermitian && other.flags.hermitian;
        Ok(out)
    }

    /// Fresh unflagged operator on the same space.
    pub fn with_entries(&self, entries: CMatrix) -> Self {
        Self {
            space: self.space.clone(),
            entries,
            flags: Flags::default(),
        }
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                left: self.dimension(),
                right: v.dimension(),
            });
        }
        Ok(StateVector::new(
            self.space.clone(),
            &self.entries * &v.amplitudes,
        ))
    }

    /// `<bra| A |ket>`.
    pub fn matrix_element(&self, bra: &StateVector, ket: &StateVector) -> Result<Complex64> {
        Ok(bra.inner(&self.apply(ket)?))
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn spectral_norm(&self) -> f64 {
        linalg::spectral_norm(&self.entries)
    }

    /// Spectral norm of `self - other`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.same_space(other)?;
        Ok(linalg::spectral_norm(&(&self.entries - &other.entries)))
    }

    /// Principal submatrix on the given basis indices.
    pub fn restricted(&self, indices: &[usize]) -> CMatrix {
        let n = indices.len();
        CMatrix::from_fn(n, n, |r, c| self.entries[(indices[r], indices[c])])
    }
}

macro_rules! panicking_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &OperatorMatrix {
            type Output = OperatorMatrix;
            /// Panics when the operands live on different spaces; use the
            /// `try_` methods to get an error instead.
            fn $method(self, rhs: &OperatorMatrix) -> OperatorMatrix {
                self.$checked(rhs)
                    .expect("operator arithmetic on mismatched spaces")
            }
        }
    };
}

panicking_op!(Add, add, try_add);
panicking_op!(Sub, sub, try_sub);
panicking_op!(Mul, mul, try_mul);

impl Neg for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        self.scale_real(-1.0)
    }
}

/// Amplitude vector on a [`FockSpace`].
#[derive(Debug, Clone)]
pub struct StateVector {
    space: Arc<FockSpace>,
    pub amplitudes: CVector,
    /// `1 - ||v||^2` for states built from truncated closed-form coefficients.
    pub norm_deficit: f64,
    pub truncated_analytic: bool,
}

impl StateVector {
    pub fn new(space: Arc<FockSpace>, amplitudes: CVector) -> Self {
        Self {
            space,
            amplitudes,
            norm_deficit: 0.0,
            truncated_analytic: false,
        }
    }

    pub fn basis(space: Arc<FockSpace>, index: usize) -> Self {
        let mut amplitudes = CVector::zeros(space.dimension());
        amplitudes[index] = ONE;
        Self::new(space, amplitudes)
    }

    pub fn vacuum(space: Arc<FockSpace>) -> Self {
        Self::basis(space, 0)
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn amplitude(&self, occupations: &[usize]) -> Option<Complex64> {
        self.space.flatten(occupations).map(|i| self.amplitudes[i])
    }
}

/// Annihilation operator `a_mode` with `a|n> = sqrt(n)|n-1>`.
pub fn annihilation(space: &Arc<FockSpace>, mode: usize) -> Result<OperatorMatrix> {
    space.check_mode(mode)?;
    let d = space.dimension();
    let mut m = CMatrix::zeros(d, d);
    let mut target = Vec::with_capacity(space.modes());
    for j in 0..d {
        let n = space.unflatten(j);
        if n[mode] == 0 {
            continue;
        }
        target.clear();
        target.extend_from_slice(n);
        target[mode] -= 1;
        if let Some(i) = space.flatten(&target) {
            m[(i, j)] = Complex64::new((n[mode] as f64).sqrt(), 0.0);
        }
    }
    OperatorMatrix::new(space.clone(), m)
}

pub fn creation(space: &Arc<FockSpace>, mode: usize) -> Result<OperatorMatrix> {
    Ok(annihilation(space, mode)?.adjoint())
}

/// `(Q, P)` with `Q = (a + a^dagger)/sqrt 2` and `P = (a - a^dagger)/(i sqrt 2)`.
pub fn quadrature_operators(
    space: &Arc<FockSpace>,
    mode: usize,
) -> Result<(OperatorMatrix, OperatorMatrix)> {
    let a = annihilation(space, mode)?;
    let ad = a.adjoint();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let q = (&a + &ad).scale_real(s).into_hermitian()?;
    let p = (&a - &ad).scale(Complex64::new(0.0, -s)).into_hermitian()?;
    Ok((q, p))
}

/// `a^dagger_mode a_mode`.
pub fn number_operator(space: &Arc<FockSpace>, mode: usize) -> Result<OperatorMatrix> {
    space.check_mode(mode)?;
    Ok(OperatorMatrix::diagonal(space.clone(), |n| n[mode] as f64))
}

/// `sum_j a^dagger_j a_j`.
pub fn total_number(space: &Arc<FockSpace>) -> OperatorMatrix {
    OperatorMatrix::diagonal(space.clone(), |n| n.iter().sum::<usize>() as f64)
}

/// Rotation generator `Q_b P_a - P_b Q_a` between modes `a` and `b`,
/// assembled in its normal-ordered form `i(a_a^dagger a_b - a_b^dagger a_a)`.
///
/// With `(a, b) = (0, 1)` this is `L3 = Q2 P1 - P2 Q1`. It conserves total
/// quanta, so on a total-quanta truncation it is exactly block diagonal.
pub fn rotation_generator(space: &Arc<FockSpace>, a: usize, b: usize) -> Result<OperatorMatrix> {
    space.check_mode(a)?;
    space.check_mode(b)?;
    if a == b {
        return Err(Error::InvalidArgument(
            "rotation generator needs two distinct modes".into(),
        ));
    }
    let ann_a = annihilation(space, a)?;
    let ann_b = annihilation(space, b)?;
    let hop = &ann_a.adjoint() * &ann_b;
    let g = (&hop - &hop.adjoint()).scale(I);
    g.into_hermitian()
}

/// `L3` on modes 0 and 1.
pub fn angular_momentum(space: &Arc<FockSpace>) -> Result<OperatorMatrix> {
    rotation_generator(space, 0, 1)
}

/// `AB - BA`.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    a.same_space(b)?;
    let ab = linalg::matmul(a.matrix(), b.matrix());
    let ba = linalg::matmul(b.matrix(), a.matrix());
    Ok(a.with_entries(ab - ba))
}

/// Eigendecomposition of a hermitian-flagged operator, eigenvalues ascending.
pub fn hermitian_eigendecomposition(a: &OperatorMatrix) -> Result<HermitianEigen> {
    if !a.is_hermitian() {
        let (ok, residual) = linalg::hermiticity_defect(a.matrix(), FLAG_TOLERANCE);
        if !ok {
            return Err(Error::NotHermitian {
                residual,
                tolerance: FLAG_TOLERANCE,
            });
        }
    }
    Ok(linalg::eigh_unchecked(a.matrix()))
}

/// `exp(t A)`.
///
/// Hermitian `A` with purely imaginary or real `t` goes through the
/// eigendecomposition (the imaginary case is flagged unitary); everything else
/// uses scaling and squaring.
pub fn matrix_exponential(a: &OperatorMatrix, t: Complex64) -> Result<OperatorMatrix> {
    linalg::ensure_finite(a.matrix(), "matrix exponential input")?;
    if !(t.re.is_finite() && t.im.is_finite()) {
        return Err(Error::NonFinite("exponential time parameter"));
    }
    if a.is_hermitian() && (t.re == 0.0 || t.im == 0.0) {
        let eig = linalg::eigh_unchecked(a.matrix());
        let e = eig.apply(|lambda| (t * lambda).exp());
        linalg::ensure_finite(&e, "matrix exponential result")?;
        let out = a.with_entries(e);
        return if t.re == 0.0 {
            out.into_unitary()
        } else {
            out.into_hermitian()
        };
    }
    let scaled = a.matrix().map(|z| z * t);
    Ok(a.with_entries(linalg::expm_pade(&scaled)?))
}

/// `exp(-i t H)` for hermitian `H` and real `t`.
pub fn unitary_evolution(h: &OperatorMatrix, t: f64) -> Result<OperatorMatrix> {
    matrix_exponential(h, Complex64::new(0.0, -t))
}

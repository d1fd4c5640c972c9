use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::operator::{unitary_evolution, OperatorMatrix};
use crate::projector::{ConstraintSet, Projector};

/// Half-width of the interval random multipliers are drawn from.
pub const MULTIPLIER_BOUND: f64 = 5.0;

const EHE_TOLERANCE: f64 = 1e-10;

/// Piecewise-constant multipliers `lambda_l^a` on `n` equal slices of `[0, t]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrotterPlan {
    pub t: f64,
    pub n: usize,
    pub schedule: Vec<Vec<f64>>,
    pub epsilon: f64,
}

impl TrotterPlan {
    pub fn new(t: f64, schedule: Vec<Vec<f64>>) -> Result<Self> {
        let n = schedule.len();
        if n == 0 {
            return Err(Error::TrotterPlan("at least one slice is required".into()));
        }
        if !t.is_finite() {
            return Err(Error::NonFinite("total time"));
        }
        if let Some(row) = schedule.iter().find(|r| r.len() != schedule[0].len()) {
            return Err(Error::TrotterPlan(format!(
                "ragged schedule: {} and {} multipliers",
                schedule[0].len(),
                row.len()
            )));
        }
        if schedule.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("multiplier schedule"));
        }
        let epsilon = t / n as f64;
        if (epsilon * n as f64 - t).abs() > 1e-14 * t.abs().max(1.0) {
            return Err(Error::TrotterPlan(format!(
                "slice width {epsilon} does not tile {t}"
            )));
        }
        Ok(Self {
            t,
            n,
            schedule,
            epsilon,
        })
    }

    /// All multipliers zero.
    pub fn zero(t: f64, n: usize, constraints: usize) -> Result<Self> {
        Self::new(t, vec![vec![0.0; constraints]; n])
    }

    /// Multipliers drawn uniformly from `[-MULTIPLIER_BOUND, MULTIPLIER_BOUND]`.
    pub fn random(t: f64, n: usize, constraints: usize, rng: &mut impl Rng) -> Result<Self> {
        let schedule = (0..n)
            .map(|_| {
                (0..constraints)
                    .map(|_| rng.random_range(-MULTIPLIER_BOUND..=MULTIPLIER_BOUND))
                    .collect()
            })
            .collect();
        Self::new(t, schedule)
    }

    /// `count` independent random plans from one seeded stream.
    pub fn seeded_family(
        t: f64,
        n: usize,
        constraints: usize,
        count: usize,
        seed: u64,
    ) -> Result<Vec<Self>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| Self::random(t, n, constraints, &mut rng))
            .collect()
    }
}

fn power(base: &CMatrix, mut exp: usize) -> CMatrix {
    let mut result = linalg::identity(base.nrows());
    let mut square = base.clone();
    let mut first = true;
    while exp > 0 {
        if exp & 1 == 1 {
            result = if first {
                square.clone()
            } else {
                linalg::matmul(&result, &square)
            };
            first = false;
        }
        exp >>= 1;
        if exp > 0 {
            square = linalg::matmul(&square, &square);
        }
    }
    result
}

/// `E (exp(-i (T/N) H) E)^N`: `N` short-time factors between `N + 1` projectors.
pub fn evolve_projected_trotter(
    h: &OperatorMatrix,
    e: &Projector,
    t: f64,
    n: usize,
) -> Result<OperatorMatrix> {
    if n == 0 {
        return Err(Error::TrotterPlan("at least one slice is required".into()));
    }
    h.same_space(e.operator())?;
    let u = unitary_evolution(h, t / n as f64)?;
    let step = linalg::matmul(u.matrix(), e.matrix());
    let product = linalg::matmul(e.matrix(), &power(&step, n));
    Ok(h.with_entries(product))
}

/// `E exp(-i T EHE) E`, the limit of the projected Trotter product.
pub fn evolve_projected_exact(h: &OperatorMatrix, e: &Projector, t: f64) -> Result<OperatorMatrix> {
    h.same_space(e.operator())?;
    let ehe = linalg::matmul(&linalg::matmul(e.matrix(), h.matrix()), e.matrix());
    let scale = linalg::spectral_norm(&ehe).max(1.0);
    let (ok, residual) = linalg::hermiticity_defect(&ehe, EHE_TOLERANCE * scale);
    if !ok {
        return Err(Error::NotHermitian {
            residual,
            tolerance: EHE_TOLERANCE * scale,
        });
    }
    let generator = OperatorMatrix::hermitian(h.space().clone(), ehe)?;
    let u = unitary_evolution(&generator, t)?;
    let product = linalg::matmul(&linalg::matmul(e.matrix(), u.matrix()), e.matrix());
    Ok(h.with_entries(product))
}

/// `max |sigma - 1|` over the singular values of `u` compressed to range(E).
pub fn range_unitarity_defect(u: &OperatorMatrix, e: &Projector) -> Result<f64> {
    u.same_space(e.operator())?;
    let eig = linalg::eigh_unchecked(e.matrix());
    let cols: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&j| eig.eigenvalues[j] > 0.5)
        .collect();
    if cols.is_empty() {
        return Ok(0.0);
    }
    let basis = eig.eigenvectors.select_columns(cols.iter());
    let compressed = linalg::matmul(&basis.adjoint(), &linalg::matmul(u.matrix(), &basis));
    let sv = compressed.singular_values();
    Ok(sv.iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max))
}

/// `[prod_{l=N..1} exp(-i eps (H + lambda_l^a Phi_a))] E`, later slices to the left.
pub fn evolve_with_multipliers(
    h: &OperatorMatrix,
    cs: &ConstraintSet,
    e: &Projector,
    plan: &TrotterPlan,
) -> Result<OperatorMatrix> {
    h.same_space(e.operator())?;
    if let Some(phi) = cs.phis().first() {
        h.same_space(phi)?;
    }
    let mut acc = e.matrix().clone();
    for lambda in &plan.schedule {
        if lambda.len() != cs.len() {
            return Err(Error::DimensionMismatch {
                left: cs.len(),
                right: lambda.len(),
            });
        }
        let mut generator = h.clone();
        for (phi, &l) in cs.phis().iter().zip(lambda) {
            if l != 0.0 {
                generator = generator.try_add(&phi.scale_real(l))?;
            }
        }
        let u = unitary_evolution(&generator, plan.epsilon)?;
        acc = linalg::matmul(u.matrix(), &acc);
    }
    Ok(h.with_entries(acc))
}

//! Weighted integral representation `E = int exp(-i xi^a Phi_a) f(xi) dxi`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::displacement::displacement_matrix;
use super::{ConstraintSet, Method, Projector};
use crate::error::{Error, Result};
use crate::fock::FockSpace;
use crate::linalg::{self, CMatrix};
use crate::operator::matrix_exponential;
use crate::quadrature::{tensor_nodes, Rule1d};

/// Largest change allowed between a rule and its refinement.
pub const REFINEMENT_TOLERANCE: f64 = 1e-6;

/// Source of the operator-valued integrand `exp(-i xi^a Phi_a)`.
///
/// `factor` may return the operator on a smaller local space (one mode, say);
/// `embed` lifts a local matrix to the full space. Sums are accumulated
/// locally and embedded once.
pub trait ConstraintFlow {
    fn space(&self) -> &Arc<FockSpace>;
    fn axes(&self) -> usize;
    fn factor(&self, xi: &[f64]) -> Result<CMatrix>;
    fn embed(&self, local: CMatrix) -> CMatrix {
        local
    }
    fn exponential(&self, xi: &[f64]) -> Result<CMatrix> {
        Ok(self.embed(self.factor(xi)?))
    }
}

/// Exponentials of the truncated generators themselves. Exact when the
/// constraints preserve the truncation (e.g. the two-mode rotation generator
/// on a total-quanta space).
impl ConstraintFlow for ConstraintSet {
    fn space(&self) -> &Arc<FockSpace> {
        ConstraintSet::space(self)
    }

    fn axes(&self) -> usize {
        self.len()
    }

    fn factor(&self, xi: &[f64]) -> Result<CMatrix> {
        if self.is_empty() {
            return Ok(linalg::identity(self.space().dimension()));
        }
        let g = self.combination(xi)?;
        Ok(matrix_exponential(&g, Complex64::new(0.0, -1.0))?.into_matrix())
    }
}

/// `exp(-i(xi_1 R + xi_2 S))` for the canonical pair `R = P`, `S = Q` of one
/// mode, using exact displacement matrix elements
/// (`alpha = (xi_1 - i xi_2)/sqrt 2`) rather than exponentials of truncated
/// quadratures.
pub struct CanonicalPairFlow {
    space: Arc<FockSpace>,
    mode: usize,
}

impl CanonicalPairFlow {
    pub fn new(space: Arc<FockSpace>, mode: usize) -> Result<Self> {
        space.check_mode(mode)?;
        Ok(Self { space, mode })
    }

    pub fn mode(&self) -> usize {
        self.mode
    }
}

impl ConstraintFlow for CanonicalPairFlow {
    fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    fn axes(&self) -> usize {
        2
    }

    fn factor(&self, xi: &[f64]) -> Result<CMatrix> {
        if xi.len() != 2 {
            return Err(Error::DimensionMismatch {
                left: 2,
                right: xi.len(),
            });
        }
        let alpha = Complex64::new(xi[0], -xi[1]) * FRAC_1_SQRT_2;
        Ok(displacement_matrix(
            self.space.max_occupation(self.mode),
            alpha,
        ))
    }

    fn embed(&self, local: CMatrix) -> CMatrix {
        let d = self.space.dimension();
        let m = self.mode;
        CMatrix::from_fn(d, d, |i, j| {
            let (ni, nj) = (self.space.unflatten(i), self.space.unflatten(j));
            let spectators_agree = ni
                .iter()
                .zip(nj)
                .enumerate()
                .all(|(k, (a, b))| k == m || a == b);
            if spectators_agree {
                local[(ni[m], nj[m])]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

/// User-supplied weight density.
pub type WeightFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Weight function `f(xi)` of the integral representation.
#[derive(Clone)]
pub enum Weight {
    /// Constant `density` (e.g. `1/2pi` on `[0, 2pi)` for a U(1) average).
    Uniform {
        density: f64,
    },
    /// `exp(-|xi|^2/4) / (2 pi)^{axes/2}`; with two axes this is the weight
    /// that maps a canonical pair onto its vacuum projector.
    GaussianPair,
    Custom(WeightFn),
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Uniform { density } => write!(f, "Uniform({density})"),
            Weight::GaussianPair => write!(f, "GaussianPair"),
            Weight::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl Weight {
    pub fn value(&self, xi: &[f64]) -> f64 {
        match self {
            Weight::Uniform { density } => *density,
            Weight::GaussianPair => {
                let r2: f64 = xi.iter().map(|x| x * x).sum();
                (-0.25 * r2).exp() / (2.0 * PI).powf(0.5 * xi.len() as f64)
            }
            Weight::Custom(f) => f(xi),
        }
    }

    fn method(&self) -> Method {
        match self {
            Weight::GaussianPair => Method::GaussianPair,
            _ => Method::CustomWeight,
        }
    }
}

fn integrate(flow: &dyn ConstraintFlow, weight: &Weight, rules: &[Rule1d]) -> Result<CMatrix> {
    let nodes = tensor_nodes(rules)?;
    let mut acc: Option<CMatrix> = None;
    for (xi, w) in nodes {
        let f = weight.value(&xi) * w;
        if f == 0.0 {
            continue;
        }
        let term = flow.factor(&xi)?.map(|z| z * f);
        match acc.as_mut() {
            Some(a) => *a += term,
            None => acc = Some(term),
        }
    }
    match acc {
        Some(a) => Ok(a),
        None => {
            let probe = flow.factor(&vec![0.0; flow.axes()])?;
            Ok(CMatrix::zeros(probe.nrows(), probe.ncols()))
        }
    }
}

/// Quadrature of the operator-valued integrand, one rule per axis.
///
/// With `check_refinement`, every refinable axis is doubled and the result must
/// move by at most [`REFINEMENT_TOLERANCE`] in spectral norm.
pub fn projector_weighted_integral(
    flow: &dyn ConstraintFlow,
    weight: &Weight,
    rules: &[Rule1d],
    check_refinement: bool,
) -> Result<Projector> {
    if rules.len() != flow.axes() {
        return Err(Error::QuadratureSpec(format!(
            "{} rules for {} constraint axes",
            rules.len(),
            flow.axes()
        )));
    }
    let local = integrate(flow, weight, rules)?;
    if check_refinement {
        let refined: Vec<Rule1d> = rules.iter().map(|r| r.refined().unwrap_or(*r)).collect();
        if refined != rules {
            let finer = integrate(flow, weight, &refined)?;
            let change = linalg::spectral_norm(&(&finer - &local));
            if change > REFINEMENT_TOLERANCE {
                return Err(Error::QuadratureNonConvergence { change });
            }
        }
    }
    Projector::from_matrix(flow.space().clone(), flow.embed(local), weight.method())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::quadrature_operators;

    #[test]
    fn canonical_pair_flow_matches_generator_for_small_shifts() {
        // Small displacements barely feel a large truncation.
        let space = Arc::new(FockSpace::single_mode(60).unwrap());
        let (q, p) = quadrature_operators(&space, 0).unwrap();
        let exact = CanonicalPairFlow::new(space.clone(), 0).unwrap();
        let truncated = ConstraintSet::new(vec![p, q]).unwrap();
        let xi = [0.4, -0.7];
        let a = exact.exponential(&xi).unwrap();
        let b = truncated.exponential(&xi).unwrap();
        let low = a.view((0, 0), (8, 8)).into_owned() - b.view((0, 0), (8, 8)).into_owned();
        assert!(linalg::frobenius(&low) < 1e-12);
    }

    #[test]
    fn embedding_acts_on_one_mode() {
        let space = Arc::new(FockSpace::per_mode(&[2, 3]).unwrap());
        let flow = CanonicalPairFlow::new(space.clone(), 1).unwrap();
        let full = flow.exponential(&[0.3, 0.2]).unwrap();
        let local = flow.factor(&[0.3, 0.2]).unwrap();
        for n0 in 0..=2 {
            for m in 0..=3 {
                for n in 0..=3 {
                    let i = space.flatten(&[n0, m]).unwrap();
                    let j = space.flatten(&[n0, n]).unwrap();
                    assert_eq!(full[(i, j)], local[(m, n)]);
                }
            }
        }
        let i = space.flatten(&[0, 0]).unwrap();
        let j = space.flatten(&[1, 0]).unwrap();
        assert_eq!(full[(i, j)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn rule_count_must_match_axes() {
        let space = Arc::new(FockSpace::single_mode(4).unwrap());
        let flow = CanonicalPairFlow::new(space, 0).unwrap();
        let r = Rule1d::Single { at: 0.0 };
        assert!(matches!(
            projector_weighted_integral(&flow, &Weight::GaussianPair, &[r], false),
            Err(Error::QuadratureSpec(_))
        ));
    }
}

//! One-dimensional rules and their tensor products.

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A one-dimensional node/weight rule on an interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Rule1d {
    /// Gauss–Legendre with `nodes` points on `[lo, hi]`.
    GaussLegendre { nodes: usize, lo: f64, hi: f64 },
    /// Closed trapezoid with `points` equally spaced points including both ends.
    Trapezoid { points: usize, lo: f64, hi: f64 },
    /// Rectangle rule on a periodic interval `[lo, hi)`, `points` nodes. Exact
    /// for trigonometric polynomials of degree below `points`.
    Periodic { points: usize, lo: f64, hi: f64 },
    /// One node with unit weight.
    Single { at: f64 },
}

impl Rule1d {
    pub fn nodes_and_weights(&self) -> Result<Vec<(f64, f64)>> {
        match *self {
            Rule1d::GaussLegendre { nodes, lo, hi } => {
                let rule = GaussLegendre::new(nodes)
                    .map_err(|e| Error::QuadratureSpec(format!("Gauss-Legendre: {e}")))?;
                let half = 0.5 * (hi - lo);
                let mid = 0.5 * (hi + lo);
                let mut out: Vec<(f64, f64)> = rule
                    .as_node_weight_pairs()
                    .iter()
                    .map(|&(x, w)| (mid + half * x, half * w))
                    .collect();
                out.sort_by(|a, b| a.0.total_cmp(&b.0));
                Ok(out)
            }
            Rule1d::Trapezoid { points, lo, hi } => {
                if points < 2 {
                    return Err(Error::QuadratureSpec("trapezoid needs two points".into()));
                }
                let h = (hi - lo) / (points - 1) as f64;
                Ok((0..points)
                    .map(|k| {
                        let w = if k == 0 || k == points - 1 {
                            0.5 * h
                        } else {
                            h
                        };
                        (lo + k as f64 * h, w)
                    })
                    .collect())
            }
            Rule1d::Periodic { points, lo, hi } => {
                if points == 0 {
                    return Err(Error::QuadratureSpec("periodic rule needs a node".into()));
                }
                let h = (hi - lo) / points as f64;
                Ok((0..points).map(|k| (lo + k as f64 * h, h)).collect())
            }
            Rule1d::Single { at } => Ok(vec![(at, 1.0)]),
        }
    }

    /// The same rule with twice the resolution, for refinement checks.
    pub fn refined(&self) -> Option<Rule1d> {
        match *self {
            Rule1d::GaussLegendre { nodes, lo, hi } => Some(Rule1d::GaussLegendre {
                nodes: 2 * nodes,
                lo,
                hi,
            }),
            Rule1d::Trapezoid { points, lo, hi } => Some(Rule1d::Trapezoid {
                points: 2 * points - 1,
                lo,
                hi,
            }),
            Rule1d::Periodic { points, lo, hi } => Some(Rule1d::Periodic {
                points: 2 * points,
                lo,
                hi,
            }),
            Rule1d::Single { .. } => None,
        }
    }

    pub fn len(&self) -> usize {
        match *self {
            Rule1d::GaussLegendre { nodes, .. } => nodes,
            Rule1d::Trapezoid { points, .. } | Rule1d::Periodic { points, .. } => points,
            Rule1d::Single { .. } => 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Tensor product of one-dimensional rules: every node is a point in
/// `R^axes` with the product weight.
pub fn tensor_nodes(rules: &[Rule1d]) -> Result<Vec<(Vec<f64>, f64)>> {
    let mut out: Vec<(Vec<f64>, f64)> = vec![(Vec::with_capacity(rules.len()), 1.0)];
    for rule in rules {
        let nw = rule.nodes_and_weights()?;
        out = out
            .into_iter()
            .flat_map(|(point, weight)| {
                nw.iter().map(move |&(x, w)| {
                    let mut p = point.clone();
                    p.push(x);
                    (p, weight * w)
                })
            })
            .collect();
    }
    Ok(out)
}

/// Uniform trapezoid grid on the phase-space box `[-L, L]^{2J}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceGrid {
    pub half_width: f64,
    pub points_per_axis: usize,
}

impl PhaseSpaceGrid {
    pub const MIN_POINTS: usize = 8;

    pub fn new(half_width: f64, points_per_axis: usize) -> Result<Self> {
        if points_per_axis < Self::MIN_POINTS {
            return Err(Error::GridTooCoarse {
                points: points_per_axis,
                minimum: Self::MIN_POINTS,
            });
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::QuadratureSpec(format!(
                "box half-width must be positive, got {half_width}"
            )));
        }
        Ok(Self {
            half_width,
            points_per_axis,
        })
    }

    pub fn axis(&self) -> Rule1d {
        Rule1d::Trapezoid {
            points: self.points_per_axis,
            lo: -self.half_width,
            hi: self.half_width,
        }
    }

    pub fn point_count(&self, modes: usize) -> f64 {
        (self.points_per_axis as f64).powi(2 * modes as i32)
    }

    /// Visit every grid point as `(p, q, weight)` for `modes` modes, without
    /// materializing the full tensor grid.
    pub fn for_each(&self, modes: usize, mut f: impl FnMut(&[f64], &[f64], f64)) -> Result<()> {
        let axis = self.axis().nodes_and_weights()?;
        let n = axis.len();
        let axes = 2 * modes;
        let mut counter = vec![0usize; axes];
        let mut p = vec![0.0; modes];
        let mut q = vec![0.0; modes];
        loop {
            let mut w = 1.0;
            for j in 0..modes {
                let (pj, wp) = axis[counter[2 * j]];
                let (qj, wq) = axis[counter[2 * j + 1]];
                p[j] = pj;
                q[j] = qj;
                w *= wp * wq;
            }
            f(&p, &q, w);
            // odometer increment
            let mut k = axes;
            loop {
                if k == 0 {
                    return Ok(());
                }
                k -= 1;
                counter[k] += 1;
                if counter[k] < n {
                    break;
                }
                counter[k] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let nw = Rule1d::GaussLegendre {
            nodes: 5,
            lo: -2.0,
            hi: 3.0,
        }
        .nodes_and_weights()
        .unwrap();
        let integral: f64 = nw.iter().map(|(x, w)| w * x.powi(9)).sum();
        let exact = (3f64.powi(10) - 2f64.powi(10)) / 10.0;
        assert!((integral - exact).abs() < 1e-9 * exact.abs());
    }

    #[test]
    fn trapezoid_gaussian() {
        let nw = Rule1d::Trapezoid {
            points: 65,
            lo: -8.0,
            hi: 8.0,
        }
        .nodes_and_weights()
        .unwrap();
        let integral: f64 = nw.iter().map(|(x, w)| w * (-x * x / 2.0).exp()).sum();
        assert!((integral - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn tensor_weights_sum_to_volume() {
        let rules = [
            Rule1d::GaussLegendre {
                nodes: 4,
                lo: 0.0,
                hi: 2.0,
            },
            Rule1d::Periodic {
                points: 7,
                lo: 0.0,
                hi: 3.0,
            },
        ];
        let nodes = tensor_nodes(&rules).unwrap();
        assert_eq!(nodes.len(), 28);
        let vol: f64 = nodes.iter().map(|(_, w)| w).sum();
        assert!((vol - 6.0).abs() < 1e-13);
    }

    #[test]
    fn grid_visits_every_point_once() {
        let grid = PhaseSpaceGrid::new(1.0, 8).unwrap();
        let mut count = 0;
        let mut vol = 0.0;
        grid.for_each(2, |_, _, w| {
            count += 1;
            vol += w;
        })
        .unwrap();
        assert_eq!(count, 8usize.pow(4));
        assert!((vol - 16.0).abs() < 1e-12);
        assert!(matches!(
            PhaseSpaceGrid::new(1.0, 7),
            Err(Error::GridTooCoarse { .. })
        ));
    }
}

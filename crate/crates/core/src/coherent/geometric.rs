//! Finite-difference check of the projected kinematic one-form.
//!
//! For the rank-one projector `I (x) |0><0|` on a constrained mode, the
//! one-form `i <<x| d/dt |x>>` along a path of rescaled states reduces to the
//! free-mode one-form plus `-Im d/dt ln <0|r,s>` from the constrained mode.

use std::f64::consts::TAU;

use super::label::{CoherentLabel, Convention};
use super::rescaled::rescaled_state;
use crate::error::{Error, Result};
use crate::linalg::I;
use crate::projector::{vacuum_projector_deviation, Projector};

/// Largest finite-difference step accepted.
pub const MAX_STEP: f64 = 1e-2;

const FORM_TOLERANCE: f64 = 1e-10;

/// Differentiable curve of coherent labels.
pub trait LabelPath {
    fn label(&self, t: f64) -> CoherentLabel;
    /// `(dp/dt, dq/dt)` per mode.
    fn velocity(&self, t: f64) -> (Vec<f64>, Vec<f64>);
    fn period(&self) -> f64 {
        TAU
    }
}

/// Circle of radius `radius` around `center` in the `(p, q)` plane of one mode;
/// other modes stay at `center`. Zero radius gives a constant path.
#[derive(Debug, Clone)]
pub struct CircularPath {
    pub center: CoherentLabel,
    pub mode: usize,
    pub radius: f64,
    pub angular_speed: f64,
}

impl LabelPath for CircularPath {
    fn label(&self, t: f64) -> CoherentLabel {
        let mut l = self.center.clone();
        let phase = self.angular_speed * t;
        l.p[self.mode] += self.radius * phase.cos();
        l.q[self.mode] += self.radius * phase.sin();
        l
    }

    fn velocity(&self, t: f64) -> (Vec<f64>, Vec<f64>) {
        let n = self.center.modes();
        let mut dp = vec![0.0; n];
        let mut dq = vec![0.0; n];
        let phase = self.angular_speed * t;
        dp[self.mode] = -self.radius * self.angular_speed * phase.sin();
        dq[self.mode] = self.radius * self.angular_speed * phase.cos();
        (dp, dq)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OneFormSample {
    pub t: f64,
    pub lhs: num_complex::Complex64,
    pub rhs: f64,
}

#[derive(Debug, Clone)]
pub struct GeometricReport {
    /// `max_t |Re(lhs) - rhs|`.
    pub max_residual: f64,
    /// `max_t |Im(lhs)|`; the rescaled one-form is real up to `O(h^2)`.
    pub max_imaginary: f64,
    pub samples: Vec<OneFormSample>,
}

// Analytic right-hand side: the one-form of each free mode plus
// -Im d/dt ln <0|r,s> for the constrained mode.
fn analytic_rhs(label: &CoherentLabel, dp: &[f64], dq: &[f64], constrained: usize) -> f64 {
    let mut total = 0.0;
    for j in 0..label.modes() {
        let (p, q) = (label.p[j], label.q[j]);
        if j == constrained {
            // <0|r,s> = exp(-|w|^2/2) * bridge phase; only the bridge is complex.
            let im_dlog = match label.convention {
                Convention::Weyl => 0.0,
                Convention::Canonical => -0.5 * (dp[j] * q + p * dq[j]),
            };
            total -= im_dlog;
        } else {
            total += match label.convention {
                Convention::Canonical => p * dq[j],
                Convention::Weyl => 0.5 * (p * dq[j] - q * dp[j]),
            };
        }
    }
    total
}

/// Compare `i <<x(t)| (|x(t+h)>> - |x(t-h)>>)/2h` with the analytic reduction
/// at `samples` equally spaced times over one period of `path`.
pub fn geometric_one_form_check(
    path: &dyn LabelPath,
    e: &Projector,
    constrained_mode: usize,
    samples: usize,
    step: f64,
) -> Result<GeometricReport> {
    if !(step > 0.0 && step <= MAX_STEP) {
        return Err(Error::StepSize {
            step,
            max: MAX_STEP,
        });
    }
    let deviation = vacuum_projector_deviation(e, constrained_mode)?;
    if deviation > FORM_TOLERANCE {
        return Err(Error::ProjectorForm { deviation });
    }
    let samples = samples.max(1);
    let mut out = Vec::with_capacity(samples);
    let mut max_residual = 0.0_f64;
    let mut max_imaginary = 0.0_f64;
    for k in 0..samples {
        let t = path.period() * k as f64 / samples as f64;
        let here = rescaled_state(&path.label(t), e)?;
        let ahead = rescaled_state(&path.label(t + step), e)?;
        let behind = rescaled_state(&path.label(t - step), e)?;
        let derivative =
            (&ahead.state.amplitudes - &behind.state.amplitudes).map(|z| z / (2.0 * step));
        let lhs = I * here.state.amplitudes.dotc(&derivative);
        let (dp, dq) = path.velocity(t);
        let rhs = analytic_rhs(&path.label(t), &dp, &dq, constrained_mode);
        max_residual = max_residual.max((lhs.re - rhs).abs());
        max_imaginary = max_imaginary.max(lhs.im.abs());
        out.push(OneFormSample { t, lhs, rhs });
    }
    Ok(GeometricReport {
        max_residual,
        max_imaginary,
        samples: out,
    })
}

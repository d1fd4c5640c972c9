use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on `|z_j|` for closed-form comparisons at `n_max = 40`.
pub const DEFAULT_LABEL_GUARD: f64 = 3.0;

/// Phase convention of a coherent state.
///
/// `Weyl` is the displaced vacuum `exp(z a^dagger - z* a)|0>`; `Canonical` is
/// `exp(-i q P) exp(i p Q)|0>`, which carries the extra phase `exp(-i p q / 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    Canonical,
    Weyl,
}

/// Phase-space point `(p, q)` per mode, units with hbar = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherentLabel {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub convention: Convention,
}

impl CoherentLabel {
    pub fn new(p: Vec<f64>, q: Vec<f64>, convention: Convention) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::LabelArity {
                expected: p.len(),
                got: q.len(),
            });
        }
        Ok(Self { p, q, convention })
    }

    pub fn weyl(p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        Self::new(p, q, Convention::Weyl)
    }

    pub fn canonical(p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        Self::new(p, q, Convention::Canonical)
    }

    /// Label with prescribed complex amplitudes `z_j = (q_j + i p_j)/sqrt 2`.
    pub fn from_amplitudes(z: &[Complex64], convention: Convention) -> Self {
        let s = std::f64::consts::SQRT_2;
        Self {
            p: z.iter().map(|z| z.im * s).collect(),
            q: z.iter().map(|z| z.re * s).collect(),
            convention,
        }
    }

    pub fn origin(modes: usize, convention: Convention) -> Self {
        Self {
            p: vec![0.0; modes],
            q: vec![0.0; modes],
            convention,
        }
    }

    pub fn modes(&self) -> usize {
        self.p.len()
    }

    /// `z_j = (q_j + i p_j)/sqrt 2`, recomputed on every call.
    pub fn amplitudes(&self) -> Vec<Complex64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        self.p
            .iter()
            .zip(&self.q)
            .map(|(&p, &q)| Complex64::new(q * s, p * s))
            .collect()
    }

    pub fn squared_norm(&self) -> f64 {
        self.amplitudes().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest single-mode `|z_j|`.
    pub fn max_amplitude(&self) -> f64 {
        self.amplitudes()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn with_convention(&self, convention: Convention) -> Self {
        Self {
            convention,
            ..self.clone()
        }
    }

    /// Phase multiplying the Weyl state to give this label's state:
    /// `exp(-i p.q/2)` for canonical, `1` for Weyl.
    pub fn bridge_phase(&self) -> Complex64 {
        match self.convention {
            Convention::Weyl => Complex64::new(1.0, 0.0),
            Convention::Canonical => {
                let pq: f64 = self.p.iter().zip(&self.q).map(|(p, q)| p * q).sum();
                Complex64::from_polar(1.0, -0.5 * pq)
            }
        }
    }

    pub fn check_guard(&self, guard: f64) -> Result<()> {
        let modulus = self.max_amplitude();
        if modulus > guard {
            Err(Error::LabelGuard { modulus, guard })
        } else {
            Ok(())
        }
    }

    /// Concatenate the modes of two labels (tensor-product label).
    pub fn join(&self, other: &Self) -> Result<Self> {
        if self.convention != other.convention {
            return Err(Error::ConventionMismatch);
        }
        let mut p = self.p.clone();
        p.extend_from_slice(&other.p);
        let mut q = self.q.clone();
        q.extend_from_slice(&other.q);
        Ok(Self {
            p,
            q,
            convention: self.convention,
        })
    }
}

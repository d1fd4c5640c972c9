//! Modified Bessel function `I_0` of complex argument by its power series.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest `|z|` for which the series is attempted.
pub const SERIES_GUARD: f64 = 50.0;

const RELATIVE_CUTOFF: f64 = 1e-17;

/// `I_0(z) = sum_k (z^2/4)^k / (k!)^2`.
///
/// Summation stops once a term drops below `1e-17` of the running sum. Purely
/// imaginary arguments alternate in sign and lose relative accuracy as `|z|`
/// approaches the guard; the projector kernels only use `|z|` of order one.
pub fn bessel_i0(z: Complex64) -> Result<Complex64> {
    let modulus = z.norm();
    if !modulus.is_finite() || modulus > SERIES_GUARD {
        return Err(Error::BesselGuard {
            modulus,
            guard: SERIES_GUARD,
        });
    }
    let quarter_sq = z * z * 0.25;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut k = 0.0_f64;
    loop {
        k += 1.0;
        term *= quarter_sq / (k * k);
        sum += term;
        if term.norm() <= RELATIVE_CUTOFF * sum.norm() || term.norm() == 0.0 {
            break;
        }
    }
    Ok(sum)
}

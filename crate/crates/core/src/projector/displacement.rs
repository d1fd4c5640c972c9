//! Matrix elements of the Weyl displacement `D(alpha) = exp(alpha a^dagger - alpha* a)`
//! between number states, taken from the infinite-dimensional operator.
//!
//! Exponentiating a truncated quadrature instead gives a different unitary
//! whose low-lying elements are wrong once `|alpha|^2` is comparable to the
//! cutoff; weighted integrals over large displacements need the exact ones.

use num_complex::Complex64;

use crate::linalg::CMatrix;

/// Generalized Laguerre polynomial `L_n^{(k)}(x)` by the three-term recurrence.
pub fn laguerre(n: usize, k: usize, x: f64) -> f64 {
    let k = k as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + k - x;
    for j in 1..n {
        let j = j as f64;
        let next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `<m|D(alpha)|n>` for `0 <= m, n <= n_max`.
pub fn displacement_matrix(n_max: usize, alpha: Complex64) -> CMatrix {
    let d = n_max + 1;
    let x = alpha.norm_sqr();
    let envelope = (-0.5 * x).exp();
    // ln n! table
    let mut log_fact = vec![0.0_f64; d];
    for n in 1..d {
        log_fact[n] = log_fact[n - 1] + (n as f64).ln();
    }
    let minus_conj = -alpha.conj();
    CMatrix::from_fn(d, d, |m, n| {
        let (lo, hi, base) = if m >= n {
            (n, m, alpha)
        } else {
            (m, n, minus_conj)
        };
        let k = hi - lo;
        let ratio = (0.5 * (log_fact[lo] - log_fact[hi])).exp();
        base.powu(k as u32) * (ratio * envelope * laguerre(lo, k, x))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm_pade, frobenius};

    #[test]
    fn laguerre_closed_forms() {
        let x = 0.7;
        assert_eq!(laguerre(0, 3, x), 1.0);
        assert!((laguerre(1, 2, x) - (3.0 - x)).abs() < 1e-15);
        let l2 = 0.5 * (x * x - 4.0 * x + 2.0);
        assert!((laguerre(2, 0, x) - l2).abs() < 1e-15);
    }

    #[test]
    fn first_column_is_coherent_state() {
        let alpha = Complex64::new(0.8, -1.1);
        let d = displacement_matrix(20, alpha);
        let mut coeff = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
        for n in 0..=20 {
            if n > 0 {
                coeff *= alpha / (n as f64).sqrt();
            }
            assert!((d[(n, 0)] - coeff).norm() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn low_block_matches_exponential_of_large_truncation() {
        // oracle: exp(alpha a^dagger - alpha* a) on a much larger truncation
        let big = 80;
        let alpha = Complex64::new(-0.9, 1.4);
        let mut a = CMatrix::zeros(big + 1, big + 1);
        for n in 1..=big {
            a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        let gen = a.adjoint().map(|z| z * alpha) - a.map(|z| z * alpha.conj());
        let u = expm_pade(&gen).unwrap();
        let d = displacement_matrix(10, alpha);
        let block = u.view((0, 0), (11, 11)).into_owned();
        assert!(frobenius(&(block - d)) < 1e-11);
    }
}

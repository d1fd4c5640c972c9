//! Truncated multimode bosonic basis.
//!
//! Basis states are occupation multi-indices `(n_1, ..., n_J)`. Two truncation
//! schemes are supported: an independent cutoff per mode (the basis is a
//! tensor product, mode 0 most significant in the flat index) and a cap on
//! the total number of quanta (the basis is ordered by total quanta, then
//! lexicographically descending in mode 0).

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Largest dimension accepted unless the caller raises the ceiling.
pub const DEFAULT_DIMENSION_CEILING: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Truncation {
    /// `n_j <= cutoffs[j]` for every mode.
    PerMode(Vec<usize>),
    /// `n_1 + ... + n_J <= max_quanta`.
    TotalQuanta(usize),
}

#[derive(Debug, Clone)]
pub struct FockSpace {
    modes: usize,
    scheme: Truncation,
    basis: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl PartialEq for FockSpace {
    fn eq(&self, other: &Self) -> bool {
        self.modes == other.modes && self.scheme == other.scheme
    }
}

impl Eq for FockSpace {}

impl FockSpace {
    pub fn new(modes: usize, scheme: Truncation) -> Result<Self> {
        Self::with_ceiling(modes, scheme, DEFAULT_DIMENSION_CEILING)
    }

    /// Single mode with cutoff `n_max`.
    pub fn single_mode(n_max: usize) -> Result<Self> {
        Self::new(1, Truncation::PerMode(vec![n_max]))
    }

    pub fn per_mode(cutoffs: &[usize]) -> Result<Self> {
        Self::new(cutoffs.len(), Truncation::PerMode(cutoffs.to_vec()))
    }

    pub fn total_quanta(modes: usize, max_quanta: usize) -> Result<Self> {
        Self::new(modes, Truncation::TotalQuanta(max_quanta))
    }

    pub fn with_ceiling(modes: usize, scheme: Truncation, ceiling: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::ZeroModes);
        }
        if let Truncation::PerMode(cutoffs) = &scheme {
            if cutoffs.len() != modes {
                return Err(Error::CutoffArity {
                    modes,
                    got: cutoffs.len(),
                });
            }
        }
        let dimension = predicted_dimension(modes, &scheme);
        if dimension > ceiling as u128 {
            return Err(Error::DimensionCeiling { dimension, ceiling });
        }

        let basis = match &scheme {
            Truncation::PerMode(cutoffs) => enumerate_per_mode(cutoffs),
            Truncation::TotalQuanta(n) => enumerate_total_quanta(modes, *n),
        };
        debug_assert_eq!(basis.len() as u128, dimension);
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        Ok(Self {
            modes,
            scheme,
            basis,
            index,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn scheme(&self) -> &Truncation {
        &self.scheme
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Occupation numbers of flat index `i`.
    pub fn unflatten(&self, i: usize) -> &[usize] {
        &self.basis[i]
    }

    /// Flat index of a multi-index, or `None` if the truncation excludes it.
    pub fn flatten(&self, occupations: &[usize]) -> Option<usize> {
        self.index.get(occupations).copied()
    }

    pub fn basis(&self) -> impl Iterator<Item = &[usize]> {
        self.basis.iter().map(Vec::as_slice)
    }

    pub fn total_quanta_of(&self, i: usize) -> usize {
        self.basis[i].iter().sum()
    }

    /// Largest occupation any single mode can reach.
    pub fn max_occupation(&self, mode: usize) -> usize {
        match &self.scheme {
            Truncation::PerMode(c) => c[mode],
            Truncation::TotalQuanta(n) => *n,
        }
    }

    pub fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.modes {
            Err(Error::ModeOutOfRange {
                mode,
                modes: self.modes,
            })
        } else {
            Ok(())
        }
    }

    /// True when one ladder step in any direction stays inside the truncation.
    ///
    /// Canonical commutators hold exactly on these states and fail only on the
    /// boundary layer.
    pub fn is_interior(&self, i: usize) -> bool {
        let n = &self.basis[i];
        match &self.scheme {
            Truncation::PerMode(c) => n.iter().zip(c).all(|(n, c)| n < c),
            Truncation::TotalQuanta(max) => n.iter().sum::<usize>() < *max,
        }
    }

    pub fn interior_indices(&self) -> Vec<usize> {
        (0..self.dimension())
            .filter(|&i| self.is_interior(i))
            .collect()
    }

    /// Flat indices of basis states with at most `quanta` total quanta.
    pub fn low_quanta_indices(&self, quanta: usize) -> Vec<usize> {
        (0..self.dimension())
            .filter(|&i| self.total_quanta_of(i) <= quanta)
            .collect()
    }
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

fn predicted_dimension(modes: usize, scheme: &Truncation) -> u128 {
    match scheme {
        Truncation::PerMode(cutoffs) => cutoffs
            .iter()
            .try_fold(1u128, |acc, &c| acc.checked_mul(c as u128 + 1))
            .unwrap_or(u128::MAX),
        Truncation::TotalQuanta(n) => {
            binomial((*n + modes) as u128, modes as u128).unwrap_or(u128::MAX)
        }
    }
}

fn enumerate_per_mode(cutoffs: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(cutoffs.len())];
    for &c in cutoffs {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=c).map(move |n| {
                    let mut v = prefix.clone();
                    v.push(n);
                    v
                })
            })
            .collect();
    }
    out
}

// All compositions of `total` into `modes` non-negative parts, mode 0 descending.
fn compositions(modes: usize, total: usize, out: &mut Vec<Vec<usize>>, prefix: &mut Vec<usize>) {
    if modes == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for n in (0..=total).rev() {
        prefix.push(n);
        compositions(modes - 1, total - n, out, prefix);
        prefix.pop();
    }
}

fn enumerate_total_quanta(modes: usize, max_quanta: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(modes);
    for total in 0..=max_quanta {
        compositions(modes, total, &mut out, &mut prefix);
    }
    out
}

//! Projected time evolution, propagator kernels, and the two worked examples.

mod evolution;
mod examples;
mod kernel;
mod lattice;

pub use evolution::{
    evolve_projected_exact, evolve_projected_trotter, evolve_with_multipliers,
    range_unitarity_defect, TrotterPlan, MULTIPLIER_BOUND,
};
pub use examples::{
    example2_factorization, reduced_hamiltonian, vacuum_overlap_normalization, Example2Report,
};
pub use kernel::{example1_closed_form, kernel_grid, KernelReport};
pub use lattice::{lattice_equivalence_check, LatticeReport, LATTICE_BUDGET};

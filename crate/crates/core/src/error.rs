use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("a Fock space needs at least one mode")]
    ZeroModes,

    #[error("truncation admits {dimension} basis states, above the ceiling of {ceiling}")]
    DimensionCeiling { dimension: u128, ceiling: usize },

    #[error("per-mode cutoff list has {got} entries for {modes} modes")]
    CutoffArity { modes: usize, got: usize },

    #[error("mode {mode} out of range for a {modes}-mode space")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operands live on different Fock spaces")]
    SpaceMismatch,

    #[error("matrix is not hermitian: residual {residual:.3e} exceeds {tolerance:.1e}")]
    NotHermitian { residual: f64, tolerance: f64 },

    #[error("matrix is not unitary: residual {residual:.3e} exceeds {tolerance:.1e}")]
    NotUnitary { residual: f64, tolerance: f64 },

    #[error("non-finite entries encountered in {0}")]
    NonFinite(&'static str),

    #[error("|z| = {modulus} lies outside the series guard radius {guard}")]
    BesselGuard { modulus: f64, guard: f64 },

    #[error("coherent label has {got} modes, space has {expected}")]
    LabelArity { expected: usize, got: usize },

    #[error("coherent label amplitude |z| = {modulus:.3} exceeds the guard {guard}")]
    LabelGuard { modulus: f64, guard: f64 },

    #[error("cannot compare labels in different phase conventions without a bridge")]
    ConventionMismatch,

    #[error("truncated state has zero norm")]
    ZeroNorm,

    #[error("quadrature grid too coarse: {points} points per axis (need at least {minimum})")]
    GridTooCoarse { points: usize, minimum: usize },

    #[error("projector annihilates the label: ||E|p,q>|| = {norm:.3e}")]
    AnnihilatedLabel { norm: f64 },

    #[error("finite-difference step {step:.1e} is outside (0, {max:.1e}]")]
    StepSize { step: f64, max: f64 },

    #[error("missing structure constants: {0}")]
    MissingStructure(&'static str),

    #[error("structure constants have the wrong shape: {0}")]
    StructureShape(String),

    #[error("constraint spectrum is not integral: max distance to an integer is {deviation:.3e}")]
    NonIntegerSpectrum { deviation: f64 },

    #[error("quadrature did not converge: refinement changed the result by {change:.3e}")]
    QuadratureNonConvergence { change: f64 },

    #[error("quadrature needs {required:.3e} operations, budget is {budget:.3e}")]
    QuadratureBudget { required: f64, budget: f64 },

    #[error("invalid quadrature specification: {0}")]
    QuadratureSpec(String),

    #[error(
        "projector does not have the vacuum-on-constrained-mode form: deviation {deviation:.3e}"
    )]
    ProjectorForm { deviation: f64 },

    #[error("invalid trotter plan: {0}")]
    TrotterPlan(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Check batteries behind each subcommand.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{RunConfig, Scheme, Suite};
use super::report::{Check, RunReport};
use crate::coherent::{
    geometric_one_form_check, unity_resolution_residual, upper_symbol, CircularPath, CoherentLabel,
    Convention,
};
use crate::dynamics::{
    evolve_projected_exact, evolve_projected_trotter, evolve_with_multipliers,
    example1_closed_form, example2_factorization, kernel_grid, lattice_equivalence_check,
    range_unitarity_defect, vacuum_overlap_normalization, TrotterPlan,
};
use crate::error::Result;
use crate::fock::FockSpace;
use crate::operator::{
    angular_momentum, commutator, number_operator, quadrature_operators, total_number,
    unitary_evolution, OperatorMatrix,
};
use crate::projector::{
    projector_diagnostics, projector_group_average_u1, projector_spectral,
    projector_weighted_integral, vacuum_projector_deviation, CanonicalPairFlow, ConstraintSet,
    Projector, Weight, DEFAULT_ZERO_TOL,
};
use crate::quadrature::{PhaseSpaceGrid, Rule1d};

/// Increase between successive cutoffs still read as "non-increasing":
/// once the truncation tail is below double precision the errors are round-off.
pub const ROUNDOFF_FLOOR: f64 = 1e-14;

struct Phases<'a> {
    report: &'a mut RunReport,
    start: Instant,
}

impl<'a> Phases<'a> {
    fn new(report: &'a mut RunReport) -> Self {
        Self {
            report,
            start: Instant::now(),
        }
    }

    fn check(&mut self, c: Check) {
        self.report.checks.push(c);
    }

    fn lap(&mut self, phase: &str) {
        if self.report.config.timings {
            let secs = self.start.elapsed().as_secs_f64();
            self.report.timings.insert(phase.to_string(), secs);
        }
        self.start = Instant::now();
    }
}

fn two_mode_space(scheme: Scheme, n: usize) -> Result<Arc<FockSpace>> {
    Ok(Arc::new(match scheme {
        Scheme::TotalQuanta => FockSpace::total_quanta(2, n)?,
        Scheme::PerMode => FockSpace::per_mode(&[n, n])?,
    }))
}

fn rotation_projector(space: &Arc<FockSpace>) -> Result<(OperatorMatrix, Projector)> {
    let l3 = angular_momentum(space)?;
    let top = (0..space.dimension())
        .map(|i| space.total_quanta_of(i))
        .max()
        .unwrap_or(0);
    let k = 2 * top + 1;
    let e = projector_group_average_u1(&l3, k)?;
    Ok((l3, e))
}

/// Run the checks for `config.suite`.
pub fn run_suite(config: RunConfig) -> Result<RunReport> {
    let mut report = RunReport::new(config.clone());
    let mut phases = Phases::new(&mut report);
    match config.suite {
        Suite::ProjectorSuite => projector_suite(&config, &mut phases)?,
        Suite::Example1 => example1(&config, &mut phases)?,
        Suite::Example2 => example2(&config, &mut phases)?,
        Suite::Trotter => trotter(&config, &mut phases)?,
        Suite::Gauge => gauge(&config, &mut phases)?,
        Suite::Unity => unity(&config, &mut phases)?,
    }
    Ok(report)
}

fn projector_suite(c: &RunConfig, out: &mut Phases<'_>) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    for &n in &c.nmax {
        let space = two_mode_space(c.scheme, n)?;
        let (l3, averaged) = rotation_projector(&space)?;
        let cs = ConstraintSet::new(vec![l3])?;
        let spectral = projector_spectral(&cs, DEFAULT_ZERO_TOL)?;
        out.check(Check::at_most(
            format!("n{n}_method_agreement"),
            averaged.distance(&spectral)?,
            1e-12,
        ));
        if c.scheme == Scheme::TotalQuanta {
            let expected = (n / 2 + 1) as f64;
            out.check(Check::at_most(
                format!("n{n}_rank_error"),
                (averaged.rank as f64 - expected).abs(),
                0.0,
            ));
        }
        for (tag, e) in [("group_average", &averaged), ("spectral", &spectral)] {
            out.check(Check::at_most(
                format!("n{n}_{tag}_idempotency"),
                e.idempotency_residual,
                1e-10,
            ));
            out.check(Check::at_most(
                format!("n{n}_{tag}_hermiticity"),
                e.hermiticity_residual,
                1e-10,
            ));
            out.check(Check::at_most(
                format!("n{n}_{tag}_trace_error"),
                (e.trace - e.rank as f64).abs(),
                1e-8,
            ));
        }
        let taus: Vec<Vec<f64>> = (0..10)
            .map(|_| vec![rng.random_range(-10.0..=10.0)])
            .collect();
        let diag = projector_diagnostics(&averaged, Some(&cs), &taus)?;
        out.check(Check::at_most(
            format!("n{n}_invariance"),
            diag.invariance.unwrap_or(0.0),
            1e-10,
        ));
        let h = total_number(&space);
        let mut worst = 0.0_f64;
        for t in [0.5, 1.3, 4.0] {
            let u = unitary_evolution(&h, t)?;
            worst = worst.max(commutator(averaged.operator(), &u)?.spectral_norm());
        }
        out.check(Check::at_most(
            format!("n{n}_symmetry_commutator"),
            worst,
            1e-12,
        ));

        // On two modes the truncation edge pins mode 1 and leaves a null vector,
        // so the canonical pair is tested on one mode.
        let mode = Arc::new(FockSpace::single_mode(n)?);
        let (s, r) = quadrature_operators(&mode, 0)?;
        let pair = projector_spectral(&ConstraintSet::new(vec![r, s])?, DEFAULT_ZERO_TOL)?;
        out.check(Check::at_most(
            format!("n{n}_second_class_kernel_rank"),
            pair.rank as f64,
            0.0,
        ));
        out.lap(&format!("n{n}"));
    }
    Ok(())
}

/// Label set for kernel grids, every joint `|z|` at most `radius`.
pub fn kernel_labels(radius: f64) -> Vec<CoherentLabel> {
    let c = |re: f64, im: f64| Complex64::new(re, im) * radius;
    let third = Complex64::from_polar(radius, PI / 3.0);
    [
        [c(0.0, 0.0), c(0.0, 0.0)],
        [c(1.0, 0.0), c(0.0, 0.0)],
        [c(0.0, 0.0), third],
        [c(0.6, 0.3), c(-0.4, 0.5)],
        [c(-0.5, -0.5), c(0.2, -0.6)],
    ]
    .iter()
    .map(|z| CoherentLabel::from_amplitudes(z, Convention::Weyl))
    .collect()
}

fn all_pairs(labels: &[CoherentLabel]) -> Vec<(CoherentLabel, CoherentLabel)> {
    labels
        .iter()
        .flat_map(|a| labels.iter().map(move |b| (a.clone(), b.clone())))
        .collect()
}

fn example1(c: &RunConfig, out: &mut Phases<'_>) -> Result<()> {
    let pairs = all_pairs(&kernel_labels(c.label_radius));
    let mut cutoffs = c.nmax.clone();
    cutoffs.sort_unstable();
    cutoffs.dedup();
    let mut errors = Vec::with_capacity(cutoffs.len());
    let mut symmetry = 0.0_f64;
    for &n in &cutoffs {
        let space = Arc::new(FockSpace::total_quanta(2, n)?);
        let (_, e) = rotation_projector(&space)?;
        let report = kernel_grid(e.operator(), &pairs)?.with_closed_form(example1_closed_form)?;
        let err = report.abs_error.unwrap_or(f64::NAN);
        out.check(Check::info(format!("n{n}_kernel_max_error"), err));
        errors.push(err);
        let k = pairs.len();
        let side = (k as f64).sqrt() as usize;
        for i in 0..side {
            for j in 0..side {
                let a = report.matrix_values[i * side + j];
                let b = report.matrix_values[j * side + i];
                symmetry = symmetry.max((a - b.conj()).norm());
            }
        }
        out.lap(&format!("n{n}"));
    }
    out.check(Check::at_most(
        "kernel_max_error",
        *errors.last().unwrap_or(&f64::NAN),
        1e-8,
    ));
    let increase = errors
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    if errors.len() > 1 {
        out.check(Check::at_most(
            "cutoff_error_increase",
            increase,
            ROUNDOFF_FLOOR,
        ));
    }
    out.check(Check::at_most("kernel_symmetry", symmetry, 1e-12));
    Ok(())
}

/// Single-mode Gaussian-weight projector on Gauss–Legendre `nodes^2` over
/// `[-10, 10]^2`, with refinement check.
pub fn gaussian_pair_projector(
    space: Arc<FockSpace>,
    mode: usize,
    nodes: usize,
) -> Result<Projector> {
    let flow = CanonicalPairFlow::new(space, mode)?;
    let rule = Rule1d::GaussLegendre {
        nodes,
        lo: -10.0,
        hi: 10.0,
    };
    projector_weighted_integral(&flow, &Weight::GaussianPair, &[rule, rule], true)
}

/// `1/2 (P^2 + Q^2) (x) (I + R + S)` on two modes, `(R, S) = (P, Q)` of mode 1.
pub fn coupled_oscillator(space: &Arc<FockSpace>) -> Result<OperatorMatrix> {
    let (q, p) = quadrature_operators(space, 0)?;
    let (s, r) = quadrature_operators(space, 1)?;
    let osc = p.try_mul(&p)?.try_add(&q.try_mul(&q)?)?.scale_real(0.5);
    let coupling = OperatorMatrix::identity(space.clone())
        .try_add(&r)?
        .try_add(&s)?;
    osc.try_mul(&coupling)?.into_hermitian()
}

/// Seeded canonical labels `(p, q; r, s)` with coordinates in `[-radius, radius]`.
pub fn sampled_labels(count: usize, radius: f64, seed: u64) -> Vec<CoherentLabel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut x = [0.0; 4];
            x.iter_mut()
                .for_each(|v| *v = rng.random_range(-radius..=radius));
            CoherentLabel {
                p: vec![x[0], x[2]],
                q: vec![x[1], x[3]],
                convention: Convention::Canonical,
            }
        })
        .collect()
}

/// The two one-form test paths: circles in the free `(p, q)` plane and in the
/// constrained `(r, s)` plane.
pub fn one_form_paths() -> [CircularPath; 2] {
    let center = CoherentLabel::canonical(vec![0.3, 0.5], vec![-0.2, 0.4]).expect("two modes");
    [
        CircularPath {
            center: center.clone(),
            mode: 0,
            radius: 0.7,
            angular_speed: 1.0,
        },
        CircularPath {
            center,
            mode: 1,
            radius: 0.6,
            angular_speed: 1.0,
        },
    ]
}

fn example2(c: &RunConfig, out: &mut Phases<'_>) -> Result<()> {
    let n = c.nmax[0];
    let single = Arc::new(FockSpace::single_mode(n)?);
    let local = gaussian_pair_projector(single, 0, 64)?;
    out.check(Check::at_most(
        "projector_vacuum_distance",
        vacuum_projector_deviation(&local, 0)?,
        1e-6,
    ));
    out.check(Check::at_most(
        "projector_trace_error",
        (local.trace - 1.0).abs(),
        1e-6,
    ));
    let space = two_mode_space(c.scheme, n)?;
    let embedded = gaussian_pair_projector(space.clone(), 1, 64)?;
    out.check(Check::at_most(
        "embedded_projector_distance",
        vacuum_projector_deviation(&embedded, 1)?,
        1e-6,
    ));
    out.lap("projector");

    let e = Projector::mode_vacuum(space.clone(), 1)?;
    let h = coupled_oscillator(&space)?;
    let symbol_labels = sampled_labels(10, 1.0, c.seed);
    let kernel = sampled_labels(3, 1.0, c.seed.wrapping_add(1));
    let rep = example2_factorization(&h, &e, &symbol_labels, &kernel, c.t)?;
    out.check(Check::at_most(
        "reduced_symbol_residual",
        rep.symbol_residual,
        1e-10,
    ));
    out.check(Check::at_most(
        "factorization_residual",
        rep.factorization_residual,
        1e-8,
    ));
    let grid = PhaseSpaceGrid::new(c.half_width, c.points)?;
    let norm = vacuum_overlap_normalization(&grid)?;
    out.check(Check::at_most(
        "vacuum_overlap_normalization_error",
        (norm - 1.0).abs(),
        1e-6,
    ));
    out.lap("reduction");

    for (path, tag) in one_form_paths().iter().zip(["pq", "rs"]) {
        let g = geometric_one_form_check(path, &e, 1, 16, 1e-3)?;
        out.check(Check::at_most(
            format!("one_form_{tag}_residual"),
            g.max_residual,
            1e-6,
        ));
    }
    out.lap("one_form");
    Ok(())
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    cov / var
}

fn trotter(c: &RunConfig, out: &mut Phases<'_>) -> Result<()> {
    let n = c.nmax[0];
    let space = two_mode_space(c.scheme, n)?;
    let (_, e) = rotation_projector(&space)?;
    let (q1, _) = quadrature_operators(&space, 0)?;
    let exact = evolve_projected_exact(&q1, &e, c.t)?;
    out.check(Check::at_most(
        "exact_range_unitarity",
        range_unitarity_defect(&exact, &e)?,
        1e-12,
    ));
    let mut errors = Vec::with_capacity(c.slices.len());
    for &slices in &c.slices {
        let approx = evolve_projected_trotter(&q1, &e, c.t, slices)?;
        let err = approx.distance(&exact)?;
        out.check(Check::info(format!("slices{slices}_error"), err));
        errors.push(err);
    }
    if errors.len() > 1 {
        let x: Vec<f64> = c.slices.iter().map(|&s| s as f64).collect();
        let order = -loglog_slope(&x, &errors);
        out.check(Check::within("convergence_order", order, 0.9, 1.3));
        let growth = errors
            .windows(2)
            .map(|w| w[1] / w[0])
            .fold(0.0_f64, f64::max);
        out.check(Check::at_most("max_successive_ratio", growth, 1.05));
        out.check(Check::at_least(
            "first_to_last_reduction",
            errors[0] / errors[errors.len() - 1],
            8.0,
        ));
    }
    out.lap("trotter");

    // Lattice forms on a small space: N_max = 4, L = 5, 32 points, two slices.
    let small = Arc::new(FockSpace::total_quanta(2, 4)?);
    let (_, e_small) = rotation_projector(&small)?;
    let (q_small, _) = quadrature_operators(&small, 0)?;
    let h_small = q_small.try_add(&total_number(&small))?;
    let grid = PhaseSpaceGrid::new(5.0, 32)?;
    let ends = [
        CoherentLabel::canonical(vec![0.4, -0.2], vec![0.1, 0.3])?,
        CoherentLabel::canonical(vec![-0.3, 0.2], vec![0.5, -0.4])?,
    ];
    let lattice = lattice_equivalence_check(&h_small, &e_small, &all_pairs(&ends), c.t, 2, &grid)?;
    out.check(Check::at_most(
        "lattice_form_residual",
        lattice.residual,
        1e-8,
    ));
    out.check(Check::at_most(
        "lattice_quadrature_deviation",
        lattice.quadrature_deviation,
        1e-2,
    ));
    out.lap("lattice");
    Ok(())
}

fn gauge(c: &RunConfig, out: &mut Phases<'_>) -> Result<()> {
    let n = c.nmax[0];
    let slices = c.slices[0];
    let space = two_mode_space(c.scheme, n)?;
    let (l3, e) = rotation_projector(&space)?;
    let h = total_number(&space);
    let cs = ConstraintSet::new(vec![l3])?;
    let plans = TrotterPlan::seeded_family(c.t, slices, 1, c.schedules, c.seed)?;
    let results = plans
        .iter()
        .map(|p| evolve_with_multipliers(&h, &cs, &e, p))
        .collect::<Result<Vec<_>>>()?;
    let reference = unitary_evolution(&h, c.t)?.try_mul(e.operator())?;
    let mut pairwise = 0.0_f64;
    let mut to_reference = 0.0_f64;
    for (i, a) in results.iter().enumerate() {
        to_reference = to_reference.max(a.distance(&reference)?);
        for b in &results[i + 1..] {
            pairwise = pairwise.max(a.distance(b)?);
        }
    }
    out.check(Check::at_most(
        "pairwise_schedule_difference",
        pairwise,
        1e-12,
    ));
    out.check(Check::at_most(
        "difference_from_unconstrained",
        to_reference,
        1e-12,
    ));
    out.lap("first_class");

    // Second-class single constraint R: schedule dependence is expected.
    let pair_space = Arc::new(FockSpace::per_mode(&[n, n])?);
    let (_, r) = quadrature_operators(&pair_space, 1)?;
    let e2 = Projector::mode_vacuum(pair_space.clone(), 1)?;
    let h2 = total_number(&pair_space);
    let cs2 = ConstraintSet::new(vec![r])?;
    let plans2 = TrotterPlan::seeded_family(c.t, slices, 1, 2, c.seed)?;
    let a = evolve_with_multipliers(&h2, &cs2, &e2, &plans2[0])?;
    let b = evolve_with_multipliers(&h2, &cs2, &e2, &plans2[1])?;
    out.check(Check::info("second_class_gauge_variance", a.distance(&b)?));
    out.lap("second_class");
    Ok(())
}

fn unity(c: &RunConfig, out: &mut Phases<'_>) -> Result<()> {
    let n = c.nmax[0];
    let space = Arc::new(FockSpace::single_mode(n)?);
    let grid = PhaseSpaceGrid::new(c.half_width, c.points)?;
    let low = space.low_quanta_indices(6.min(n));
    out.check(Check::at_most(
        "unity_residual",
        unity_resolution_residual(&space, &grid, &low)?,
        1e-3,
    ));
    out.lap("unity");

    let num = number_operator(&space, 0)?;
    let (q, _) = quadrature_operators(&space, 0)?;
    let combo = num.scale_real(2.5).try_add(&q.scale_real(-0.7))?;
    let mut symbol_error = 0.0_f64;
    let mut linearity = 0.0_f64;
    for i in 0..=4 {
        let r = c.label_radius * i as f64 / 4.0;
        for k in 0..8 {
            let z = Complex64::from_polar(r, PI * k as f64 / 4.0);
            let label = CoherentLabel::from_amplitudes(&[z], Convention::Canonical);
            let sn = upper_symbol(&num, &label)?;
            symbol_error = symbol_error.max((sn - z.norm_sqr()).norm());
            let sq = upper_symbol(&q, &label)?;
            let joint = upper_symbol(&combo, &label)?;
            linearity = linearity.max((joint - (sn * 2.5 - sq * 0.7)).norm());
        }
    }
    out.check(Check::at_most("number_symbol_error", symbol_error, 1e-10));
    out.check(Check::at_most("symbol_linearity", linearity, 1e-12));
    out.lap("symbols");
    Ok(())
}

//! Acceptance suite: twelve end-to-end criteria, each validating a headline
//! result against an analytic value or an independent oracle. Every criterion
//! reports named checks with measured values and tolerances so a failure is
//! diagnosable from the one-line report.

use crate::field::{Boundary, Grid1D, PhysConstants, WaveField};
use crate::hydro::{self, extract_fields};
use crate::oracles::{highprec_faddeeva, propagator_quadrature, QuadratureSpec};
use crate::packets::{
    box_farfield_density, gaussian_state, soliton_state, BoxSpec, GaussianSpec, SolitonSpec,
};
use crate::propagator::{propagate, shape_error, Method, Potential, PropagatorConfig};
use crate::scenario::{run_scenario, Check, Scenario, ScenarioConfig};
use crate::specfun;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub name: &'static str,
    pub checks: Vec<Check>,
}

impl CriterionResult {
    pub fn pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    /// The check with the worst measured/tolerance ratio, for the report line.
    pub fn worst(&self) -> &Check {
        self.checks
            .iter()
            .max_by(|a, b| {
                let ra = a.measured.abs() / a.tolerance;
                let rb = b.measured.abs() / b.tolerance;
                ra.partial_cmp(&rb).unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("criterion produced no checks")
    }

    pub fn report_line(&self) -> String {
        let w = self.worst();
        format!(
            "{} {:<28} worst: {} measured={:.3e} tolerance={:.3e} ({} checks)",
            if self.pass() { "PASS" } else { "FAIL" },
            self.name,
            w.name,
            w.measured,
            w.tolerance,
            self.checks.len()
        )
    }
}

type CriterionFn = fn() -> Result<Vec<Check>, String>;

pub const CRITERIA: [(&str, CriterionFn); 12] = [
    ("gaussian-flux-identity", gaussian_flux_identity),
    ("gaussian-diffusivity-decay", gaussian_diffusivity_decay),
    ("stationary-energy-split", stationary_energy_split),
    ("osmotic-identity", osmotic_identity),
    ("soliton-preservation", soliton_preservation),
    ("force-diffusion-opposition", force_diffusion_opposition),
    ("box-evolution-crosscheck", box_evolution_crosscheck),
    ("farfield-leakage", farfield_leakage),
    ("asymptotic-density", asymptotic_density),
    ("edge-flux-divergence", edge_flux_divergence_criterion),
    ("special-function-accuracy", special_function_accuracy),
    ("propagator-health", propagator_health),
];

/// Run the full suite, or a single criterion selected by name.
pub fn run(only: Option<&str>) -> Result<Vec<CriterionResult>, String> {
    let selected: Vec<_> = match only {
        Some(name) => {
            let hit: Vec<_> = CRITERIA.iter().filter(|(n, _)| *n == name).collect();
            if hit.is_empty() {
                let names: Vec<_> = CRITERIA.iter().map(|(n, _)| *n).collect();
                return Err(format!(
                    "unknown criterion '{name}'; available: {}",
                    names.join(", ")
                ));
            }
            hit
        }
        None => CRITERIA.iter().collect(),
    };
    Ok(selected
        .into_iter()
        .map(|&(name, f)| CriterionResult {
            name,
            checks: f().unwrap_or_else(|e| {
                vec![Check {
                    name: format!("execution-error: {e}"),
                    measured: f64::NAN,
                    tolerance: 0.0,
                    pass: false,
                }]
            }),
        })
        .collect())
}

fn unit_constants() -> PhysConstants {
    PhysConstants::new(1.0, 1.0).expect("unit constants")
}

fn l2_distance(a: &WaveField, b: &WaveField) -> f64 {
    let dx = a.grid().spacing();
    a.values()
        .iter()
        .zip(b.values())
        .map(|(p, q)| (p - q).norm_sqr() * dx)
        .sum::<f64>()
        .sqrt()
}

// ---------------------------------------------------------------------------
// 1. J = rho u0 + (t/T) D for the drifting Gaussian.
//
// On the stated grid (n = 2048, +-12 widths) the residual is dominated by the
// truncation of the 4th-order stencil, not by the identity itself: at t = 0 it
// equals (h^4/30) Im(conj(psi) d^5 psi) exactly. So two things are verified at
// each time: the stated-grid residual shrinks by the stencil order (h^4, i.e.
// 4096x) when the grid is refined 8x, and the refined residual is below 1e-8.

fn gaussian_flux_identity() -> Result<Vec<Check>, String> {
    let spec = GaussianSpec::new(1.0, 1.0, 0.0, unit_constants()).map_err(|e| e.to_string())?;
    let big_t = spec.spread_time();
    let u0 = spec.group_velocity();
    let u0_scale = u0.abs().max(1.0);

    let residual = |t: f64, n: usize| -> Result<f64, String> {
        let eps = spec.width(t);
        let c = spec.x0 + u0 * t;
        let grid = Grid1D::new(c - 12.0 * eps, c + 12.0 * eps, n, Boundary::Dirichlet)
            .map_err(|e| e.to_string())?;
        let psi = gaussian_state(&spec, &grid, t)
            .map_err(|e| e.to_string())?
            .field;
        let f = extract_fields(&psi, None).map_err(|e| e.to_string())?;
        let rho_max = f.rho.iter().cloned().fold(0.0, f64::max);
        let mut worst = 0.0f64;
        for i in 0..grid.len() {
            let want = f.rho[i] * u0 + (t / big_t) * f.diff_d[i];
            worst = worst.max((f.flux_j[i] - want).abs());
        }
        Ok(worst / (rho_max * u0_scale))
    };

    let mut checks = Vec::new();
    for (label, mult) in [("0", 0.0), ("T/2", 0.5), ("T", 1.0), ("3T", 3.0)] {
        let t = mult * big_t;
        let coarse = residual(t, 2048)?;
        let fine = residual(t, 16384)?;
        checks.push(Check::bound(
            format!("refined-residual-t-{label}"),
            fine,
            1e-8,
        ));
        // log2 of the coarse/fine ratio; 4th-order truncation gives 12
        checks.push(Check::near(
            format!("truncation-order-gap-t-{label}"),
            (coarse / fine).log2(),
            12.0,
            2.0,
        ));
    }
    Ok(checks)
}

// 2. D at fixed x decays as 1/t^3 once spreading dominates: D(x,2t)/D(x,t) -> 1/8.
fn gaussian_diffusivity_decay() -> Result<Vec<Check>, String> {
    let cfg = ScenarioConfig {
        scenario: Some(Scenario::GaussianAsymptotic),
        ..Default::default()
    };
    let out = run_scenario(&cfg).map_err(|e| e.to_string())?;
    Ok(out.summary.checks)
}

// 3. Infinite-well ground state: all kinetic energy in the diffusion term.
fn stationary_energy_split() -> Result<Vec<Check>, String> {
    let cfg = ScenarioConfig {
        scenario: Some(Scenario::StationaryEnergy),
        ..Default::default()
    };
    let out = run_scenario(&cfg).map_err(|e| e.to_string())?;
    Ok(out
        .summary
        .checks
        .into_iter()
        .filter(|c| c.name != "osmotic-identity-gap")
        .collect())
}

// 4. (1/2) M int rho u^2 equals e_diff on the same stationary state.
fn osmotic_identity() -> Result<Vec<Check>, String> {
    let cfg = ScenarioConfig {
        scenario: Some(Scenario::StationaryEnergy),
        ..Default::default()
    };
    let out = run_scenario(&cfg).map_err(|e| e.to_string())?;
    Ok(out
        .summary
        .checks
        .into_iter()
        .filter(|c| c.name == "osmotic-identity-gap")
        .collect())
}

// 5. The sech^2 profile survives 10 time units under the matched coupling and
// falls apart without it.
fn soliton_preservation() -> Result<Vec<Check>, String> {
    let cfg = ScenarioConfig {
        scenario: Some(Scenario::SolitonNls),
        ..Default::default()
    };
    let out = run_scenario(&cfg).map_err(|e| e.to_string())?;
    let mut checks: Vec<Check> = out
        .summary
        .checks
        .into_iter()
        .filter(|c| c.name != "norm-drift")
        .collect();
    let l2_soliton = checks
        .iter()
        .find(|c| c.name == "shape-error-l2")
        .map(|c| c.measured)
        .ok_or("missing shape-error check")?;

    // negative control: same initial state, no self-interaction
    let pc = unit_constants();
    let spec = SolitonSpec::new(1.0, 1.0, pc).map_err(|e| e.to_string())?;
    let grid = Grid1D::new(-80.0, 90.0, 4096, Boundary::Periodic).map_err(|e| e.to_string())?;
    let psi0 = soliton_state(&spec, &grid, 0.0).map_err(|e| e.to_string())?;
    let run = PropagatorConfig {
        dt: 1e-3,
        t_final: 10.0,
        method: Method::SplitStep,
        potential: Potential::None,
        nonlinearity_mu: 0.0,
        snapshot_stride: 10_000,
    };
    let traj = propagate(&psi0, &run).map_err(|e| e.to_string())?;
    let control = *shape_error(&traj, |x, t| spec.density(x, t))
        .l2
        .last()
        .unwrap();
    checks.push(Check {
        name: "control-dispersal-ratio".into(),
        measured: control / l2_soliton,
        tolerance: 10.0,
        pass: control >= 10.0 * l2_soliton,
    });
    Ok(checks)
}

// 6. The self-consistent force F = -dV/dx opposes the diffusion flux
// everywhere the density is resolvable, at three separate times.
fn force_diffusion_opposition() -> Result<Vec<Check>, String> {
    let pc = unit_constants();
    let spec = SolitonSpec::new(1.0, 1.0, pc).map_err(|e| e.to_string())?;
    let grid = Grid1D::new(-20.0, 30.0, 4096, Boundary::Periodic).map_err(|e| e.to_string())?;
    let mut checks = Vec::new();
    for t in [0.0, 5.0, 10.0] {
        let psi = soliton_state(&spec, &grid, t).map_err(|e| e.to_string())?;
        let rho = hydro::probability_density(&psi);
        let d = hydro::diffusion_flux(&psi);
        let potential: Vec<f64> = rho.iter().map(|r| -spec.coupling() * r).collect();
        let force: Vec<f64> = hydro::gradient(&potential, &grid)
            .into_iter()
            .map(|g| -g)
            .collect();
        let mut worst = f64::NEG_INFINITY;
        for i in 0..grid.len() {
            if rho[i] > 1e-12 {
                worst = worst.max(force[i] * d[i]);
            }
        }
        // roundoff guard: the product is -(mu hbar / 2M) (grad rho)^2 exactly
        checks.push(Check {
            name: format!("max-force-times-d-t-{t}"),
            measured: worst,
            tolerance: 1e-18,
            pass: worst <= 1e-18,
        });
    }
    Ok(checks)
}

// ---------------------------------------------------------------------------
// 7. Closed-form free evolution of the box state vs direct propagator
// quadrature, plus unit norm at four times.
//
// The norm integral needs care: for |x| > a/2 the density carries an
// interference beat at exactly nu = m a / (hbar t), with a smooth 1/x^2
// envelope, out to arbitrarily large |x|. The integral is split into a finely
// sampled core, geometric far segments whose trapezoid step is snapped to a
// half-integer number of beat periods (so the beat alternates sign and
// cancels), and an analytic envelope tail.

fn box_density_norm(spec: &BoxSpec, t: f64) -> Result<f64, String> {
    let pc = spec.constants;
    let a = spec.a;
    let nu = pc.mass * a / (pc.hbar * t);
    let beat = 2.0 * PI / nu;
    let rho = |x: f64| -> Result<f64, String> {
        Ok(spec.evolved_at(x, t).map_err(|e| e.to_string())?.norm_sqr())
    };

    // core: Fresnel oscillations near the former walls, fastest local
    // wavenumber m (x0 + a/2) / (hbar t)
    let x0 = a / 2.0 + 5.0 * (2.0 * pc.hbar * t / pc.mass).sqrt();
    let k_core = pc.mass * (x0 + a / 2.0) / (pc.hbar * t);
    let n_core = (2.0 * x0 * k_core / 0.002).ceil() as usize;
    let h_core = 2.0 * x0 / n_core as f64;
    let mut core = 0.5 * (rho(-x0)? + rho(x0)?);
    for i in 1..n_core {
        core += rho(-x0 + i as f64 * h_core)?;
    }
    core *= h_core;

    // far segments, one side (density is even), until the residual beat
    // integral is below 1e-8
    let x_stop = (pc.hbar * t * a / (pc.mass * 2.0 * PI * 1e-8)).sqrt();
    let mut x = x0;
    let mut side = 0.0;
    while x < x_stop {
        let mut h = 5e-5 * x;
        if h > beat / 20.0 {
            h = ((h / beat).floor() + 0.5) * beat;
        }
        let n = ((x / h).ceil() as usize).max(8);
        let mut s = 0.5 * (rho(x)? + rho(x + n as f64 * h)?);
        for i in 1..n {
            s += rho(x + i as f64 * h)?;
        }
        side += s * h;
        x += n as f64 * h;
    }
    // envelope tail: rho ~ (hbar t / 2 pi a m)(1/(x-a/2)^2 + 1/(x+a/2)^2)
    let tail = pc.hbar * t / (2.0 * PI * a * pc.mass) * (1.0 / (x - a / 2.0) + 1.0 / (x + a / 2.0));
    Ok(core + 2.0 * (side + tail))
}

fn box_evolution_crosscheck() -> Result<Vec<Check>, String> {
    let spec = BoxSpec::new(1.0, unit_constants()).map_err(|e| e.to_string())?;
    let q = QuadratureSpec::new(4_000_000, 1e-10).map_err(|e| e.to_string())?;
    let mut checks = Vec::new();
    let mut worst = 0.0f64;
    for &t in &[1e-3, 1e-2, 1e-1, 0.5, 1.0] {
        for &x in &[0.0, 0.3, 0.49, 0.75, 10.0] {
            let closed = spec.evolved_at(x, t).map_err(|e| e.to_string())?;
            let oracle = propagator_quadrature(&spec, x, t, q).map_err(|e| e.to_string())?;
            worst = worst.max((closed - oracle).norm());
        }
    }
    checks.push(Check::bound("closed-form-vs-quadrature-25pts", worst, 1e-8));
    for &t in &[1e-3, 1e-2, 1e-1, 1.0] {
        let norm = box_density_norm(&spec, t)?;
        checks.push(Check::near(format!("norm-gap-t-{t}"), norm, 1.0, 1e-6));
    }
    Ok(checks)
}

// 8. Probability has already reached [5a, 10a] at t = 1e-3, and the amount
// agrees with the quadrature oracle. Both sides are summed over the same
// beat-locked trapezoid so the comparison isolates the closed form.
fn farfield_leakage() -> Result<Vec<Check>, String> {
    let spec = BoxSpec::new(1.0, unit_constants()).map_err(|e| e.to_string())?;
    let t = 1e-3;
    let (lo, hi) = (5.0, 10.0);
    let pc = spec.constants;
    let beat = 2.0 * PI * pc.hbar * t / (pc.mass * spec.a);
    let h = 0.5 * beat;
    let n = ((hi - lo) / h).floor() as usize;
    let mut xs: Vec<f64> = (0..=n).map(|i| lo + i as f64 * h).collect();
    // fine sliver to land exactly on the upper endpoint
    let sliver_lo = *xs.last().unwrap();
    let sliver_n = 8;
    let sliver_h = (hi - sliver_lo) / sliver_n as f64;
    xs.extend((1..=sliver_n).map(|i| sliver_lo + i as f64 * sliver_h));

    let trapezoid = |rho_at: &dyn Fn(f64) -> Result<f64, String>| -> Result<f64, String> {
        let mut main = 0.0;
        for (i, &x) in xs[..=n].iter().enumerate() {
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            main += w * rho_at(x)?;
        }
        let mut sliver = 0.5 * (rho_at(sliver_lo)? + rho_at(hi)?);
        for &x in &xs[n + 1..n + sliver_n] {
            sliver += rho_at(x)?;
        }
        Ok(main * h + sliver * sliver_h)
    };

    let exact = trapezoid(&|x| Ok(spec.evolved_at(x, t).map_err(|e| e.to_string())?.norm_sqr()))?;
    let q = QuadratureSpec::new(2_000_000, 1e-9).map_err(|e| e.to_string())?;
    let oracle = trapezoid(&|x| {
        Ok(propagator_quadrature(&spec, x, t, q)
            .map_err(|e| e.to_string())?
            .norm_sqr())
    })?;

    Ok(vec![
        Check {
            name: "probability-positive".into(),
            measured: exact,
            tolerance: 0.0,
            pass: exact > 0.0,
        },
        Check::bound("oracle-relative-gap", (exact - oracle) / oracle, 0.05),
    ])
}

// 9. Two-term large-argument series for the far-field density vs the exact
// closed form at x = 10a.
fn asymptotic_density() -> Result<Vec<Check>, String> {
    let spec = BoxSpec::new(1.0, unit_constants()).map_err(|e| e.to_string())?;
    let x = 10.0 * spec.a;
    let t = 1e-2;
    let series = box_farfield_density(&spec, x, t, 2).map_err(|e| e.to_string())?;
    let exact = spec.evolved_at(x, t).map_err(|e| e.to_string())?.norm_sqr();
    let z1_mag =
        (spec.constants.mass / (2.0 * spec.constants.hbar * t)).sqrt() * (x - spec.a / 2.0);
    Ok(vec![
        Check {
            name: "z1-in-asymptotic-regime".into(),
            measured: z1_mag,
            tolerance: 3.0,
            pass: z1_mag >= 3.0,
        },
        Check::bound("series-relative-gap", (series - exact) / exact, 0.10),
    ])
}

// 10. max|D| of the sharp-walled initial state diverges like 1/dx, outward at
// both walls.
fn edge_flux_divergence_criterion() -> Result<Vec<Check>, String> {
    let cfg = ScenarioConfig {
        scenario: Some(Scenario::BoxEdgeFlux),
        ..Default::default()
    };
    let out = run_scenario(&cfg).map_err(|e| e.to_string())?;
    let mut checks = out.summary.checks;

    // explicit outward-sign probe on the finest grid
    let spec = BoxSpec::new(1.0, unit_constants()).map_err(|e| e.to_string())?;
    let grid = Grid1D::new(-1.0, 1.0, 4096, Boundary::Periodic).map_err(|e| e.to_string())?;
    let psi = crate::packets::box_initial(&spec, &grid).map_err(|e| e.to_string())?;
    let d = hydro::diffusion_flux(&psi);
    let dx = grid.spacing();
    let idx = |x: f64| ((x - grid.x_min()) / dx).round() as usize;
    let d_right = d[idx(0.5 - dx)];
    let d_left = d[idx(-0.5 + dx)];
    checks.push(Check {
        name: "outward-sign-at-walls".into(),
        measured: d_right.min(-d_left),
        tolerance: 0.0,
        pass: d_right > 0.0 && d_left < 0.0,
    });
    Ok(checks)
}

// 11. Fast Faddeeva vs the double-double oracle on random points, and the
// erf/erfc complement identity on a lattice.
fn special_function_accuracy() -> Result<Vec<Check>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0b5e55ed);
    let mut worst_w = 0.0f64;
    for _ in 0..1000 {
        let r = 6.0 * rng.gen::<f64>().sqrt();
        let th = 2.0 * PI * rng.gen::<f64>();
        let z = Complex64::from_polar(r, th);
        let fast = specfun::faddeeva(z).map_err(|e| format!("faddeeva({z}): {e}"))?;
        let slow = highprec_faddeeva(z).map_err(|e| format!("oracle({z}): {e}"))?;
        worst_w = worst_w.max((fast - slow).norm() / slow.norm());
    }

    let mut worst_c = 0.0f64;
    for i in 0..32 {
        for j in 0..32 {
            let z = Complex64::new(-3.0 + 6.0 * i as f64 / 31.0, -3.0 + 6.0 * j as f64 / 31.0);
            let s = specfun::erf(z).map_err(|e| e.to_string())?
                + specfun::erfc(z).map_err(|e| e.to_string())?;
            worst_c = worst_c.max((s - 1.0).norm());
        }
    }

    Ok(vec![
        Check::bound("faddeeva-vs-oracle-1000pts", worst_w, 1e-11),
        Check::bound("erf-erfc-complement-lattice", worst_c, 1e-12),
    ])
}

// 12. Propagator health: analytic benchmark, convergence order, reversibility,
// and agreement between the two independent schemes.
fn propagator_health() -> Result<Vec<Check>, String> {
    let pc = unit_constants();
    let spec = GaussianSpec::new(1.0, 1.0, 0.0, pc).map_err(|e| e.to_string())?;
    let big_t = spec.spread_time();
    let t_final = 1.0;
    let mut checks = Vec::new();

    // free packet vs closed form
    let grid = Grid1D::new(-16.0, 16.0, 2048, Boundary::Periodic).map_err(|e| e.to_string())?;
    let psi0 = gaussian_state(&spec, &grid, 0.0)
        .map_err(|e| e.to_string())?
        .field;
    let free_run = PropagatorConfig {
        dt: big_t / 4096.0,
        t_final,
        method: Method::SplitStep,
        potential: Potential::None,
        nonlinearity_mu: 0.0,
        snapshot_stride: usize::MAX,
    };
    let traj = propagate(&psi0, &free_run).map_err(|e| e.to_string())?;
    let exact = gaussian_state(&spec, &grid, t_final)
        .map_err(|e| e.to_string())?
        .field;
    checks.push(Check::bound(
        "free-gaussian-l2",
        l2_distance(traj.final_state(), &exact),
        1e-6,
    ));

    // Strang order: halving dt divides the error by ~4 (harmonic trap; the
    // splitting is exact for a free particle, so a potential is required)
    let cgrid = Grid1D::new(-16.0, 16.0, 128, Boundary::Periodic).map_err(|e| e.to_string())?;
    let cpsi0 = gaussian_state(&spec, &cgrid, 0.0)
        .map_err(|e| e.to_string())?
        .field;
    let harmonic: Vec<f64> = cgrid.points().map(|x| 0.5 * x * x).collect();
    let run_dt = |dt: f64| -> Result<WaveField, String> {
        let cfg = PropagatorConfig {
            dt,
            t_final,
            method: Method::SplitStep,
            potential: Potential::Static(harmonic.clone()),
            nonlinearity_mu: 0.0,
            snapshot_stride: usize::MAX,
        };
        Ok(propagate(&cpsi0, &cfg)
            .map_err(|e| e.to_string())?
            .final_state()
            .clone())
    };
    let reference = run_dt(0.0025)?;
    let err_coarse = l2_distance(&run_dt(0.02)?, &reference);
    let err_fine = l2_distance(&run_dt(0.01)?, &reference);
    checks.push(Check::near(
        "dt-halving-ratio-gap",
        err_coarse / err_fine,
        4.0,
        0.5,
    ));

    // time reversal through the same trap
    let rev_fwd = PropagatorConfig {
        dt: 1e-3,
        t_final,
        method: Method::SplitStep,
        potential: Potential::Static(cgrid.points().map(|x| 0.5 * x * x).collect()),
        nonlinearity_mu: 0.0,
        snapshot_stride: usize::MAX,
    };
    let fwd = propagate(&cpsi0, &rev_fwd).map_err(|e| e.to_string())?;
    let rev_bwd = PropagatorConfig {
        dt: -1e-3,
        t_final: -t_final,
        ..rev_fwd
    };
    let back = propagate(fwd.final_state(), &rev_bwd).map_err(|e| e.to_string())?;
    checks.push(Check::bound(
        "time-reversal-residual",
        l2_distance(back.final_state(), &cpsi0),
        1e-8,
    ));

    // spectral vs Crank-Nicolson terminal density; the CN grid is 8x finer
    // with coincident points, so the comparison reads every 8th value
    let cn_grid =
        Grid1D::new(-16.0, 16.0, 16385, Boundary::Dirichlet).map_err(|e| e.to_string())?;
    let cn_psi0 = gaussian_state(&spec, &cn_grid, 0.0)
        .map_err(|e| e.to_string())?
        .field;
    let cn_run = PropagatorConfig {
        dt: big_t / 4096.0,
        t_final,
        method: Method::CrankNicolson,
        potential: Potential::None,
        nonlinearity_mu: 0.0,
        snapshot_stride: usize::MAX,
    };
    let cn = propagate(&cn_psi0, &cn_run).map_err(|e| e.to_string())?;
    let rho_ss = hydro::probability_density(traj.final_state());
    let rho_cn = hydro::probability_density(cn.final_state());
    let dx = grid.spacing();
    let mut gap = 0.0;
    for i in 0..grid.len() {
        let diff = rho_ss[i] - rho_cn[8 * i];
        gap += diff * diff * dx;
    }
    checks.push(Check::bound("splitstep-vs-cn-density-l2", gap.sqrt(), 1e-5));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_criterion_name_is_rejected() {
        assert!(run(Some("warp-core")).is_err());
    }

    #[test]
    fn single_criterion_selection() {
        let results = run(Some("special-function-accuracy")).unwrap();
        assert_eq!(results.len(), 1);
        assert!(results[0].pass(), "{}", results[0].report_line());
    }

    #[test]
    fn report_line_shape() {
        let r = CriterionResult {
            name: "demo",
            checks: vec![Check::bound("inner", 0.5, 1.0)],
        };
        let line = r.report_line();
        assert!(line.starts_with("PASS demo"), "{line}");
        assert!(line.contains("measured="), "{line}");
    }
}

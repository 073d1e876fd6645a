//! Time evolution: Strang split-step Fourier on periodic grids (linear
//! Schrödinger, optional static or time-dependent potential, optional cubic
//! attractive nonlinearity) and a Crank-Nicolson tridiagonal integrator on
//! Dirichlet grids as an independent cross-check.

use crate::field::{Boundary, Grid1D, WaveField};
use crate::hydro::{kinetic_energy_split, EnergySplit};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PropagatorError {
    #[error("time step must be nonzero and t_final an integer multiple of it, got dt = {dt}, t_final = {t_final}")]
    BadTimeGrid { dt: f64, t_final: f64 },
    #[error("snapshot stride must be at least 1")]
    BadStride,
    #[error("nonlinearity coupling must be nonnegative, got {0}")]
    BadCoupling(f64),
    #[error("split-step needs a periodic grid; use CrankNicolson for Dirichlet boundaries")]
    NeedPeriodicGrid,
    #[error("Crank-Nicolson needs a Dirichlet grid; use SplitStep for periodic boundaries")]
    NeedDirichletGrid,
    #[error(
        "time step too large for this grid: |dt| hbar k_max^2 / (2m) = {0:.3} exceeds pi; \
         reduce dt or coarsen the grid"
    )]
    TimeStepTooLarge(f64),
    #[error("initial state must be normalized within 1e-6, got norm = {0}")]
    Unnormalized(f64),
    #[error("static potential has {got} samples but the grid has {want} points")]
    PotentialLengthMismatch { got: usize, want: usize },
}

/// Samples a potential over the grid at a given time.
pub type PotentialFn = dyn Fn(f64, &Grid1D) -> Vec<f64> + Send + Sync;

#[derive(Clone)]
pub enum Potential {
    None,
    Static(Vec<f64>),
    TimeDependent(Arc<PotentialFn>),
}

impl std::fmt::Debug for Potential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Potential::None => write!(f, "Potential::None"),
            Potential::Static(v) => write!(f, "Potential::Static({} samples)", v.len()),
            Potential::TimeDependent(_) => write!(f, "Potential::TimeDependent(..)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    SplitStep,
    CrankNicolson,
}

/// Run configuration. A negative `dt` (with matching negative `t_final`)
/// propagates backward in time, which the time-reversal checks rely on.
#[derive(Debug, Clone)]
pub struct PropagatorConfig {
    pub dt: f64,
    pub t_final: f64,
    pub method: Method,
    pub potential: Potential,
    pub nonlinearity_mu: f64,
    pub snapshot_stride: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Diagnostics {
    pub norm: f64,
    pub energy: Option<EnergySplit>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<WaveField>,
    pub diagnostics: Vec<Diagnostics>,
}

impl Trajectory {
    pub fn final_state(&self) -> &WaveField {
        self.states
            .last()
            .expect("trajectory holds at least the initial state")
    }
}

fn step_count(dt: f64, t_final: f64) -> Result<usize, PropagatorError> {
    if dt == 0.0 || !dt.is_finite() || !t_final.is_finite() {
        return Err(PropagatorError::BadTimeGrid { dt, t_final });
    }
    let ratio = t_final / dt;
    let steps = ratio.round();
    if steps < 1.0 || (ratio - steps).abs() > 1e-9 * steps.max(1.0) {
        return Err(PropagatorError::BadTimeGrid { dt, t_final });
    }
    Ok(steps as usize)
}

fn potential_at(p: &Potential, t: f64, grid: &Grid1D) -> Result<Option<Vec<f64>>, PropagatorError> {
    match p {
        Potential::None => Ok(None),
        Potential::Static(v) => {
            if v.len() != grid.len() {
                return Err(PropagatorError::PotentialLengthMismatch {
                    got: v.len(),
                    want: grid.len(),
                });
            }
            Ok(Some(v.clone()))
        }
        Potential::TimeDependent(f) => {
            let v = f(t, grid);
            if v.len() != grid.len() {
                return Err(PropagatorError::PotentialLengthMismatch {
                    got: v.len(),
                    want: grid.len(),
                });
            }
            Ok(Some(v))
        }
    }
}

pub fn propagate(
    psi0: &WaveField,
    config: &PropagatorConfig,
) -> Result<Trajectory, PropagatorError> {
    let norm0 = psi0.norm();
    if (norm0 - 1.0).abs() > 1e-6 {
        return Err(PropagatorError::Unnormalized(norm0));
    }
    if config.snapshot_stride == 0 {
        return Err(PropagatorError::BadStride);
    }
    if config.nonlinearity_mu < 0.0 {
        return Err(PropagatorError::BadCoupling(config.nonlinearity_mu));
    }
    let steps = step_count(config.dt, config.t_final)?;
    match config.method {
        Method::SplitStep => split_step(psi0, config, steps),
        Method::CrankNicolson => crank_nicolson(psi0, config, steps),
    }
}

fn record(traj: &mut Trajectory, grid: &Grid1D, psi: &WaveField, t: f64) {
    let norm = psi.norm();
    let energy = kinetic_energy_split(psi, None).ok();
    let _ = grid;
    traj.times.push(t);
    traj.states.push(psi.clone());
    traj.diagnostics.push(Diagnostics { norm, energy });
}

fn split_step(
    psi0: &WaveField,
    config: &PropagatorConfig,
    steps: usize,
) -> Result<Trajectory, PropagatorError> {
    let grid = psi0.grid().clone();
    if grid.boundary() != Boundary::Periodic {
        return Err(PropagatorError::NeedPeriodicGrid);
    }
    let pc = psi0.constants();
    let n = grid.len();
    let dx = grid.spacing();
    let k_max = std::f64::consts::PI / dx;
    let stability = config.dt.abs() * pc.hbar * k_max * k_max / (2.0 * pc.mass);
    if stability > std::f64::consts::PI {
        return Err(PropagatorError::TimeStepTooLarge(stability));
    }

    let length = n as f64 * dx;
    let mut kinetic_phase = Vec::with_capacity(n);
    for j in 0..n {
        let jj = if j <= n / 2 {
            j as isize
        } else {
            j as isize - n as isize
        };
        let k = 2.0 * std::f64::consts::PI * jj as f64 / length;
        kinetic_phase.push(Complex64::from_polar(
            1.0,
            -pc.hbar * k * k * config.dt / (2.0 * pc.mass),
        ));
    }
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);

    let mut psi: Vec<Complex64> = psi0.values().to_vec();
    let mut traj = Trajectory {
        times: vec![],
        states: vec![],
        diagnostics: vec![],
    };
    record(&mut traj, &grid, psi0, 0.0);

    let half = -config.dt / (2.0 * pc.hbar);
    for s in 0..steps {
        let t_mid = (s as f64 + 0.5) * config.dt;
        let v = potential_at(&config.potential, t_mid, &grid)?;
        let apply_half = |psi: &mut [Complex64]| {
            for i in 0..n {
                let mut pot = -config.nonlinearity_mu * psi[i].norm_sqr();
                if let Some(v) = &v {
                    pot += v[i];
                }
                psi[i] *= Complex64::from_polar(1.0, half * pot);
            }
        };
        apply_half(&mut psi);
        fft.process(&mut psi);
        for i in 0..n {
            psi[i] *= kinetic_phase[i];
        }
        ifft.process(&mut psi);
        let scale = 1.0 / n as f64;
        for v in psi.iter_mut() {
            *v *= scale;
        }
        apply_half(&mut psi);

        let t = (s + 1) as f64 * config.dt;
        if (s + 1) % config.snapshot_stride == 0 || s + 1 == steps {
            let field = WaveField::new(grid.clone(), psi.clone(), pc)
                .expect("propagated samples stay finite");
            record(&mut traj, &grid, &field, t);
        }
    }
    Ok(traj)
}

/// Thomas solve of a complex tridiagonal system with constant off-diagonals.
fn solve_tridiag(off: Complex64, diag: &[Complex64], rhs: &[Complex64]) -> Vec<Complex64> {
    let n = diag.len();
    let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
    let mut d_prime = vec![Complex64::new(0.0, 0.0); n];
    c_prime[0] = off / diag[0];
    d_prime[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - off * c_prime[i - 1];
        c_prime[i] = off / m;
        d_prime[i] = (rhs[i] - off * d_prime[i - 1]) / m;
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    x[n - 1] = d_prime[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d_prime[i] - c_prime[i] * x[i + 1];
    }
    x
}

fn crank_nicolson(
    psi0: &WaveField,
    config: &PropagatorConfig,
    steps: usize,
) -> Result<Trajectory, PropagatorError> {
    let grid = psi0.grid().clone();
    if grid.boundary() != Boundary::Dirichlet {
        return Err(PropagatorError::NeedDirichletGrid);
    }
    let pc = psi0.constants();
    let n = grid.len();
    let dx = grid.spacing();
    let alpha = Complex64::new(0.0, config.dt / (2.0 * pc.hbar));
    let h_off = -pc.hbar * pc.hbar / (2.0 * pc.mass * dx * dx);
    let h_diag0 = pc.hbar * pc.hbar / (pc.mass * dx * dx);

    let mut psi: Vec<Complex64> = psi0.values().to_vec();
    let mut traj = Trajectory {
        times: vec![],
        states: vec![],
        diagnostics: vec![],
    };
    record(&mut traj, &grid, psi0, 0.0);

    let mut h_diag = vec![0.0f64; n];
    let mut diag_a = vec![Complex64::new(0.0, 0.0); n];
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    for s in 0..steps {
        let t_mid = (s as f64 + 0.5) * config.dt;
        let v = potential_at(&config.potential, t_mid, &grid)?;
        for i in 0..n {
            let mut pot = -config.nonlinearity_mu * psi[i].norm_sqr();
            if let Some(v) = &v {
                pot += v[i];
            }
            h_diag[i] = h_diag0 + pot;
            diag_a[i] = 1.0 + alpha * h_diag[i];
        }
        // rhs = (I - i dt/(2 hbar) H) psi with psi = 0 outside the walls
        for i in 0..n {
            let lap_neighbors = if i == 0 {
                psi[1]
            } else if i == n - 1 {
                psi[n - 2]
            } else {
                psi[i - 1] + psi[i + 1]
            };
            let h_psi = h_diag[i] * psi[i] + h_off * lap_neighbors;
            rhs[i] = psi[i] - alpha * h_psi;
        }
        psi = solve_tridiag(alpha * h_off, &diag_a, &rhs);

        let t = (s + 1) as f64 * config.dt;
        if (s + 1) % config.snapshot_stride == 0 || s + 1 == steps {
            let field = WaveField::new(grid.clone(), psi.clone(), pc)
                .expect("propagated samples stay finite");
            record(&mut traj, &grid, &field, t);
        }
    }
    Ok(traj)
}

#[derive(Debug, Clone)]
pub struct ShapeError {
    /// L2 distance between the snapshot density and the reference density.
    pub l2: Vec<f64>,
    /// Center of mass <x>(t) per snapshot.
    pub center_of_mass: Vec<f64>,
}

/// Per-snapshot L2 distance between the trajectory's density and a reference
/// density `rho_ref(x, t)`, plus the center-of-mass track.
pub fn shape_error(traj: &Trajectory, rho_ref: impl Fn(f64, f64) -> f64) -> ShapeError {
    let mut l2 = Vec::with_capacity(traj.states.len());
    let mut com = Vec::with_capacity(traj.states.len());
    for (psi, &t) in traj.states.iter().zip(traj.times.iter()) {
        let grid = psi.grid();
        let mut diff2 = 0.0;
        let mut mass = 0.0;
        let mut xbar = 0.0;
        for (i, x) in grid.points().enumerate() {
            let rho = psi.values()[i].norm_sqr();
            let d = rho - rho_ref(x, t);
            let w = grid.weight(i);
            diff2 += w * d * d;
            mass += w * rho;
            xbar += w * x * rho;
        }
        l2.push(diff2.sqrt());
        com.push(xbar / mass);
    }
    ShapeError {
        l2,
        center_of_mass: com,
    }
}

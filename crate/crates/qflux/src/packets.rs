//! Analytic wave packets evaluated at arbitrary (x, t): the spreading free
//! Gaussian, the bright sech soliton, and the box state with its closed-form
//! free evolution through the complex error function.

use crate::field::{FieldError, Grid1D, PhysConstants, WaveField};
use crate::specfun::{self, SpecFunError};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PacketError {
    #[error("packet width must be positive, got {0}")]
    NonPositiveWidth(f64),
    #[error("time must be {expected}, got {t}")]
    BadTime { t: f64, expected: &'static str },
    #[error("grid [{x_min}, {x_max}] does not cover the box [{lo}, {hi}] with one cell of margin")]
    GridDoesNotCoverBox {
        x_min: f64,
        x_max: f64,
        lo: f64,
        hi: f64,
    },
    #[error("far-field series needs |x| >= 5a, got x = {x} with a = {a}")]
    NotFarField { x: f64, a: f64 },
    #[error("far-field series needs |z1| >= 3, got {0}; use the exact evolved state instead")]
    OutsideShortTimeRegime(f64),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

/// Free Gaussian packet: initial 1/e half-width `a`, carrier wavenumber `k0`,
/// initial center `x0`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianSpec {
    pub a: f64,
    pub k0: f64,
    pub x0: f64,
    pub constants: PhysConstants,
}

impl GaussianSpec {
    pub fn new(a: f64, k0: f64, x0: f64, constants: PhysConstants) -> Result<Self, PacketError> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(PacketError::NonPositiveWidth(a));
        }
        Ok(Self {
            a,
            k0,
            x0,
            constants,
        })
    }

    /// Spreading time scale T = m a^2 / (2 hbar).
    pub fn spread_time(&self) -> f64 {
        self.constants.mass * self.a * self.a / (2.0 * self.constants.hbar)
    }

    /// Group velocity u0 = hbar k0 / m.
    pub fn group_velocity(&self) -> f64 {
        self.constants.hbar * self.k0 / self.constants.mass
    }

    /// Width eps(t) = a sqrt(1 + (t/T)^2).
    pub fn width(&self, t: f64) -> f64 {
        let tau = t / self.spread_time();
        self.a * (1.0 + tau * tau).sqrt()
    }

    /// Pointwise value of the packet.
    pub fn evaluate(&self, x: f64, t: f64) -> Complex64 {
        let pc = self.constants;
        let tau = t / self.spread_time();
        let eps = self.width(t);
        let xi = x - self.x0 - self.group_velocity() * t;
        let amp =
            (2.0 / std::f64::consts::PI).powf(0.25) / eps.sqrt() * (-xi * xi / (eps * eps)).exp();
        let phase = self.k0 * x - pc.hbar * self.k0 * self.k0 * t / (2.0 * pc.mass)
            + (xi * xi / (eps * eps)) * tau
            - 0.5 * tau.atan();
        Complex64::from_polar(amp, phase)
    }
}

/// Sampled Gaussian packet plus the probability mass the grid failed to
/// capture. A clipped mass at or above 1e-6 marks the sample as truncated.
#[derive(Debug, Clone)]
pub struct GaussianState {
    pub field: WaveField,
    pub clipped_mass: f64,
}

impl GaussianState {
    pub fn truncated(&self) -> bool {
        self.clipped_mass >= 1e-6
    }
}

pub fn gaussian_state(
    spec: &GaussianSpec,
    grid: &Grid1D,
    t: f64,
) -> Result<GaussianState, PacketError> {
    if !(t >= 0.0) {
        return Err(PacketError::BadTime {
            t,
            expected: "nonnegative",
        });
    }
    let field = WaveField::from_fn(grid.clone(), spec.constants, |x| spec.evaluate(x, t))?;
    // analytic mass inside the grid: (erf(s_max) - erf(s_min)) / 2 with
    // s = sqrt(2) (x - center) / eps
    let center = spec.x0 + spec.group_velocity() * t;
    let eps = spec.width(t);
    let s = |x: f64| std::f64::consts::SQRT_2 * (x - center) / eps;
    let inside = 0.5
        * (specfun::erf(Complex64::new(s(grid.x_max()), 0.0))?.re
            - specfun::erf(Complex64::new(s(grid.x_min()), 0.0))?.re);
    Ok(GaussianState {
        field,
        clipped_mass: (1.0 - inside).max(0.0),
    })
}

/// Bright soliton of the attractive cubic Schrödinger equation: width
/// `sigma0`, translation speed `u0`.
#[derive(Debug, Clone, Copy)]
pub struct SolitonSpec {
    pub sigma0: f64,
    pub u0: f64,
    pub constants: PhysConstants,
}

impl SolitonSpec {
    pub fn new(sigma0: f64, u0: f64, constants: PhysConstants) -> Result<Self, PacketError> {
        if !(sigma0 > 0.0 && sigma0.is_finite()) {
            return Err(PacketError::NonPositiveWidth(sigma0));
        }
        Ok(Self {
            sigma0,
            u0,
            constants,
        })
    }

    /// Nonlinear coupling mu = 2 hbar^2 / (m sigma0); the self-consistent
    /// potential is -mu rho.
    pub fn coupling(&self) -> f64 {
        2.0 * self.constants.hbar * self.constants.hbar / (self.constants.mass * self.sigma0)
    }

    pub fn density(&self, x: f64, t: f64) -> f64 {
        let arg = (x - self.u0 * t) / self.sigma0;
        let sech = 1.0 / arg.cosh();
        sech * sech / (2.0 * self.sigma0)
    }

    pub fn evaluate(&self, x: f64, t: f64) -> Complex64 {
        let pc = self.constants;
        // boost phase plus the binding-energy term hbar t / (2 m sigma0^2)
        let phase = (pc.mass * self.u0 * x
            - (0.5 * pc.mass * self.u0 * self.u0
                - pc.hbar * pc.hbar / (2.0 * pc.mass * self.sigma0 * self.sigma0))
                * t)
            / pc.hbar;
        Complex64::from_polar(self.density(x, t).sqrt(), phase)
    }
}

pub fn soliton_state(spec: &SolitonSpec, grid: &Grid1D, t: f64) -> Result<WaveField, PacketError> {
    Ok(WaveField::from_fn(grid.clone(), spec.constants, |x| {
        spec.evaluate(x, t)
    })?)
}

/// Self-consistent potential V(x,t) = -mu rho_sol(x,t).
pub fn soliton_potential(spec: &SolitonSpec, grid: &Grid1D, t: f64) -> Vec<f64> {
    let mu = spec.coupling();
    grid.points().map(|x| -mu * spec.density(x, t)).collect()
}

/// Box state of width `a` centered at the origin.
#[derive(Debug, Clone, Copy)]
pub struct BoxSpec {
    pub a: f64,
    pub constants: PhysConstants,
}

impl BoxSpec {
    pub fn new(a: f64, constants: PhysConstants) -> Result<Self, PacketError> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(PacketError::NonPositiveWidth(a));
        }
        Ok(Self { a, constants })
    }

    /// Closed-form free evolution at a single point, valid for t > 0:
    /// Psi(x,t) = [erf(beta (a/2 - x)) + erf(beta (a/2 + x))] / (2 sqrt(a))
    /// with beta = exp(-i pi/4) sqrt(m / (2 hbar t)). Both arguments lie on
    /// the anti-Stokes line, so the erf evaluation never overflows.
    pub fn evolved_at(&self, x: f64, t: f64) -> Result<Complex64, PacketError> {
        if !(t > 0.0) {
            return Err(PacketError::BadTime {
                t,
                expected: "positive",
            });
        }
        let pc = self.constants;
        let beta = Complex64::from_polar(
            (pc.mass / (2.0 * pc.hbar * t)).sqrt(),
            -std::f64::consts::FRAC_PI_4,
        );
        let e1 = specfun::erf(beta * (self.a / 2.0 - x))?;
        let e2 = specfun::erf(beta * (self.a / 2.0 + x))?;
        Ok((e1 + e2) / (2.0 * self.a.sqrt()))
    }
}

/// Sharp box profile sampled on the grid: a^{-1/2} strictly inside, 0
/// strictly outside, and the midpoint value a^{-1/2}/2 at grid points within
/// half a cell of either edge.
pub fn box_initial(spec: &BoxSpec, grid: &Grid1D) -> Result<WaveField, PacketError> {
    let half = spec.a / 2.0;
    let dx = grid.spacing();
    if grid.x_min() > -half - dx || grid.x_max() < half + dx {
        return Err(PacketError::GridDoesNotCoverBox {
            x_min: grid.x_min(),
            x_max: grid.x_max(),
            lo: -half - dx,
            hi: half + dx,
        });
    }
    let amp = 1.0 / spec.a.sqrt();
    Ok(WaveField::from_fn(grid.clone(), spec.constants, |x| {
        let v = if (x.abs() - half).abs() <= 0.5 * dx {
            0.5 * amp
        } else if x.abs() < half {
            amp
        } else {
            0.0
        };
        Complex64::new(v, 0.0)
    })?)
}

/// Free evolution of the box state sampled on the grid; see
/// [`BoxSpec::evolved_at`].
pub fn box_evolved(spec: &BoxSpec, grid: &Grid1D, t: f64) -> Result<WaveField, PacketError> {
    if !(t > 0.0) {
        return Err(PacketError::BadTime {
            t,
            expected: "positive",
        });
    }
    let mut values = Vec::with_capacity(grid.len());
    for x in grid.points() {
        values.push(spec.evolved_at(x, t)?);
    }
    Ok(WaveField::new(grid.clone(), values, spec.constants)?)
}

/// Far-field density from the short-time asymptotic series: with
/// z_j = exp(i pi/4) sqrt(m/(2 hbar t)) (|x| -/+ a/2), the density is
/// |T(z1) - T(z2)|^2 / (4a) where T is the truncated tail series. Valid for
/// |x| >= 5a and |z1| >= 3.
pub fn box_farfield_density(
    spec: &BoxSpec,
    x: f64,
    t: f64,
    terms: usize,
) -> Result<f64, PacketError> {
    if !(t > 0.0) {
        return Err(PacketError::BadTime {
            t,
            expected: "positive",
        });
    }
    let xa = x.abs();
    if xa < 5.0 * spec.a {
        return Err(PacketError::NotFarField { x, a: spec.a });
    }
    let pc = spec.constants;
    let scale = (pc.mass / (2.0 * pc.hbar * t)).sqrt();
    let z1 = Complex64::from_polar(scale * (xa - spec.a / 2.0), std::f64::consts::FRAC_PI_4);
    if z1.norm() < 3.0 {
        return Err(PacketError::OutsideShortTimeRegime(z1.norm()));
    }
    let z2 = Complex64::from_polar(scale * (xa + spec.a / 2.0), std::f64::consts::FRAC_PI_4);
    let t1 = specfun::erfc_asymptotic_tail(z1, terms)?;
    let t2 = specfun::erfc_asymptotic_tail(z2, terms)?;
    Ok((t1 - t2).norm_sqr() / (4.0 * spec.a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Boundary;
    use crate::oracles::{propagator_quadrature, QuadratureSpec};

    fn pc() -> PhysConstants {
        PhysConstants::default()
    }

    #[test]
    fn gaussian_width_and_group_velocity() {
        let g = GaussianSpec::new(1.0, 1.0, 0.0, pc()).unwrap();
        assert_eq!(g.spread_time(), 0.5);
        assert_eq!(g.group_velocity(), 1.0);
        // eps(T) = a sqrt(2)
        let t = g.spread_time();
        assert!((g.width(t) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gaussian_density_at_moving_center() {
        // at t = 2T the on-center density is sqrt(2/pi) / (a sqrt(5))
        let g = GaussianSpec::new(1.0, 2.0, 0.3, pc()).unwrap();
        let t = 2.0 * g.spread_time();
        let center = g.x0 + g.group_velocity() * t;
        let rho = g.evaluate(center, t).norm_sqr();
        let want = (2.0 / std::f64::consts::PI).sqrt() / (g.a * 5f64.sqrt());
        assert!((rho - want).abs() < 1e-14 * want);
    }

    #[test]
    fn gaussian_state_norm_and_truncation() {
        let g = GaussianSpec::new(1.0, 0.0, 0.0, pc()).unwrap();
        let wide = Grid1D::new(-12.0, 12.0, 2048, Boundary::Dirichlet).unwrap();
        let s = gaussian_state(&g, &wide, 0.0).unwrap();
        assert!((s.field.norm() - 1.0).abs() < 1e-9);
        assert!(!s.truncated());

        let narrow = Grid1D::new(-1.0, 1.0, 64, Boundary::Dirichlet).unwrap();
        let s = gaussian_state(&g, &narrow, 0.0).unwrap();
        assert!(s.truncated());
        assert!(s.clipped_mass > 0.04);
    }

    #[test]
    fn gaussian_at_rest_is_real_at_t_zero() {
        let g = GaussianSpec::new(1.0, 0.0, 0.0, pc()).unwrap();
        let v = g.evaluate(0.7, 0.0);
        assert_eq!(v.im, 0.0);
        assert!(v.re > 0.0);
    }

    #[test]
    fn soliton_norm_peak_and_stationarity() {
        let s = SolitonSpec::new(0.7, 1.3, pc()).unwrap();
        let grid = Grid1D::new(-30.0, 30.0, 4096, Boundary::Dirichlet).unwrap();
        let psi = soliton_state(&s, &grid, 0.4).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-9);
        // peak density rides at x = u0 t
        let peak = s.density(s.u0 * 0.4, 0.4);
        assert!((peak - 1.0 / (2.0 * s.sigma0)).abs() < 1e-15);

        let frozen = SolitonSpec::new(0.7, 0.0, pc()).unwrap();
        for x in [-1.0, 0.0, 2.5] {
            assert!((frozen.density(x, 0.0) - frozen.density(x, 7.7)).abs() < 1e-16);
        }
    }

    #[test]
    fn soliton_potential_minimum() {
        let s = SolitonSpec::new(0.5, 0.0, pc()).unwrap();
        let grid = Grid1D::new(-10.0, 10.0, 2001, Boundary::Dirichlet).unwrap();
        let v = soliton_potential(&s, &grid, 0.0);
        let vmin = v.iter().cloned().fold(f64::INFINITY, f64::min);
        // minimum -mu/(2 sigma0) at the center; x = 0 is on this grid
        let want = -s.coupling() / (2.0 * s.sigma0);
        assert!((vmin - want).abs() < 1e-12);
        assert!(v[0].abs() < 1e-12);
    }

    #[test]
    fn box_initial_profile_and_norm() {
        let b = BoxSpec::new(1.0, pc()).unwrap();
        let grid = Grid1D::new(-1.0, 1.0, 4096, Boundary::Dirichlet).unwrap();
        let psi = box_initial(&b, &grid).unwrap();
        let dx = grid.spacing();
        assert!((psi.norm() - 1.0).abs() <= 2.0 * dx / b.a);
        // value 1 at the center, 0 well outside
        let at = |x: f64| {
            let i = ((x - grid.x_min()) / dx).round() as usize;
            psi.values()[i]
        };
        assert!((at(0.0).re - 1.0).abs() < 1e-12);
        assert_eq!(at(0.9).re, 0.0);

        let narrow = Grid1D::new(-0.4, 0.4, 64, Boundary::Dirichlet).unwrap();
        assert!(matches!(
            box_initial(&b, &narrow),
            Err(PacketError::GridDoesNotCoverBox { .. })
        ));
    }

    #[test]
    fn box_evolved_short_time_limit_at_center() {
        let b = BoxSpec::new(1.0, pc()).unwrap();
        // density at x = 0 tends to 1/a as t -> 0+
        let rho = b.evolved_at(0.0, 1e-7).unwrap().norm_sqr();
        assert!((rho - 1.0).abs() < 1e-3, "rho = {rho}");
    }

    #[test]
    fn box_evolved_matches_quadrature() {
        let b = BoxSpec::new(1.0, pc()).unwrap();
        let q = QuadratureSpec::new(500_000, 1e-10).unwrap();
        for (x, t) in [(0.3, 0.1), (0.0, 0.05), (1.5, 0.2), (5.0, 0.001)] {
            let closed = b.evolved_at(x, t).unwrap();
            let quad = propagator_quadrature(&b, x, t, q).unwrap();
            assert!((closed - quad).norm() < 1e-8, "x = {x}, t = {t}");
        }
    }

    #[test]
    fn box_evolved_far_field_is_positive() {
        let b = BoxSpec::new(1.0, pc()).unwrap();
        let rho = b.evolved_at(5.0, 0.001).unwrap().norm_sqr();
        assert!(rho > 0.0);
        assert!(rho < 1e-3);
    }

    #[test]
    fn far_field_series_against_exact_path() {
        let b = BoxSpec::new(1.0, pc()).unwrap();
        let (x, t) = (10.0, 0.0005);
        let exact = b.evolved_at(x, t).unwrap().norm_sqr();
        let two = box_farfield_density(&b, x, t, 2).unwrap();
        assert!((two - exact).abs() < 0.1 * exact);
        // even in x
        let mirrored = box_farfield_density(&b, -x, t, 2).unwrap();
        assert_eq!(two, mirrored);
        // one- and two-term values bracket the exact density
        let one = box_farfield_density(&b, x, t, 1).unwrap();
        assert!(
            (one <= exact && exact <= two) || (two <= exact && exact <= one),
            "one = {one}, exact = {exact}, two = {two}"
        );
    }

    #[test]
    fn far_field_regime_gates() {
        let b = BoxSpec::new(1.0, pc()).unwrap();
        assert!(matches!(
            box_farfield_density(&b, 2.0, 0.0005, 2),
            Err(PacketError::NotFarField { .. })
        ));
        assert!(matches!(
            box_farfield_density(&b, 10.0, 50.0, 2),
            Err(PacketError::OutsideShortTimeRegime(_))
        ));
    }
}

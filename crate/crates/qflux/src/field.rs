//! Grids, sampled wavefunctions and the physical-constant context shared by
//! every other module.

use num_complex::Complex64;
use thiserror::Error;

/// Physical constants attached to a wavefunction. Natural units (`hbar = mass = 1`)
/// by default; every operation reads these from the field it acts on, never
/// from globals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysConstants {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for PhysConstants {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
        }
    }
}

impl PhysConstants {
    pub fn new(hbar: f64, mass: f64) -> Result<Self, GridError> {
        if !(hbar > 0.0 && hbar.is_finite()) || !(mass > 0.0 && mass.is_finite()) {
            return Err(GridError::BadConstants { hbar, mass });
        }
        Ok(Self { hbar, mass })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    Dirichlet,
}

#[derive(Debug, Error)]
pub enum GridError {
    #[error("grid bounds must be finite with x_max > x_min, got [{x_min}, {x_max}]")]
    DegenerateInterval { x_min: f64, x_max: f64 },
    #[error("grid needs at least 8 points, got {0}")]
    TooFewPoints(usize),
    #[error("constants must be positive and finite, got hbar = {hbar}, mass = {mass}")]
    BadConstants { hbar: f64, mass: f64 },
}

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("interval [{l1}, {l2}] is empty or inverted")]
    EmptyInterval { l1: f64, l2: f64 },
    #[error("interval [{l1}, {l2}] does not intersect grid [{x_min}, {x_max}]")]
    IntervalOutsideGrid {
        l1: f64,
        l2: f64,
        x_min: f64,
        x_max: f64,
    },
    #[error("field has {values} values but grid has {points} points")]
    LengthMismatch { values: usize, points: usize },
    #[error("non-finite value at grid index {0}")]
    NonFiniteValue(usize),
}

/// Uniform 1-D grid. Periodic grids exclude the duplicate right endpoint, so
/// `spacing = (x_max - x_min) / n`; Dirichlet grids include both endpoints and
/// use `n - 1` cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n: usize,
    boundary: Boundary,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n: usize, boundary: Boundary) -> Result<Self, GridError> {
        if !x_min.is_finite() || !x_max.is_finite() || x_max <= x_min {
            return Err(GridError::DegenerateInterval { x_min, x_max });
        }
        if n < 8 {
            return Err(GridError::TooFewPoints(n));
        }
        Ok(Self {
            x_min,
            x_max,
            n,
            boundary,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn spacing(&self) -> f64 {
        match self.boundary {
            Boundary::Periodic => (self.x_max - self.x_min) / self.n as f64,
            Boundary::Dirichlet => (self.x_max - self.x_min) / (self.n - 1) as f64,
        }
    }

    pub fn point(&self, i: usize) -> f64 {
        debug_assert!(i < self.n);
        self.x_min + i as f64 * self.spacing()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.point(i))
    }

    /// Quadrature weight of grid point `i`: rectangle rule on periodic grids,
    /// trapezoid on Dirichlet ones.
    pub fn weight(&self, i: usize) -> f64 {
        let dx = self.spacing();
        match self.boundary {
            Boundary::Periodic => dx,
            Boundary::Dirichlet => {
                if i == 0 || i == self.n - 1 {
                    0.5 * dx
                } else {
                    dx
                }
            }
        }
    }

    /// Quadrature of a sampled real function over the whole grid.
    pub fn integrate(&self, samples: &[f64]) -> f64 {
        assert_eq!(samples.len(), self.n);
        samples
            .iter()
            .enumerate()
            .map(|(i, &v)| self.weight(i) * v)
            .sum()
    }
}

/// Complex wavefunction samples on a grid, with the constants that give the
/// samples physical meaning. Immutable value; all operations are pure.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    grid: Grid1D,
    values: Vec<Complex64>,
    constants: PhysConstants,
}

impl WaveField {
    pub fn new(
        grid: Grid1D,
        values: Vec<Complex64>,
        constants: PhysConstants,
    ) -> Result<Self, FieldError> {
        if values.len() != grid.len() {
            return Err(FieldError::LengthMismatch {
                values: values.len(),
                points: grid.len(),
            });
        }
        if let Some(i) = values
            .iter()
            .position(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(FieldError::NonFiniteValue(i));
        }
        Ok(Self {
            grid,
            values,
            constants,
        })
    }

    pub fn from_fn(
        grid: Grid1D,
        constants: PhysConstants,
        f: impl Fn(f64) -> Complex64,
    ) -> Result<Self, FieldError> {
        let values = grid.points().map(f).collect();
        Self::new(grid, values, constants)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn constants(&self) -> PhysConstants {
        self.constants
    }

    /// `∫ |Ψ|² dx` over the whole grid.
    pub fn norm(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| self.grid.weight(i) * v.norm_sqr())
            .sum()
    }

    /// `∫_{l1}^{l2} |Ψ|² dx`, with the integrand treated as piecewise linear
    /// between samples so that partial cells at the interval ends are handled
    /// consistently (and the result is exactly additive over adjacent
    /// intervals). The interval is clipped to the grid; an interval that
    /// misses the grid entirely is an error. On periodic grids the wrap cell
    /// `[x_{n-1}, x_max]` closes with the first sample.
    pub fn probability_in_interval(&self, l1: f64, l2: f64) -> Result<f64, FieldError> {
        if !(l1 < l2) {
            return Err(FieldError::EmptyInterval { l1, l2 });
        }
        let (x_min, x_max) = (self.grid.x_min(), self.grid.x_max());
        if l2 <= x_min || l1 >= x_max {
            return Err(FieldError::IntervalOutsideGrid {
                l1,
                l2,
                x_min,
                x_max,
            });
        }
        let a = l1.max(x_min);
        let b = l2.min(x_max);
        let dx = self.grid.spacing();
        let n = self.grid.len();

        // density at sample i, with the periodic wrap sample n mapping to 0
        let rho = |i: usize| -> f64 {
            let j = if i >= n { i - n } else { i };
            self.values[j].norm_sqr()
        };
        // number of cells: Dirichlet n-1, periodic n (last cell wraps)
        let n_cells = match self.grid.boundary() {
            Boundary::Periodic => n,
            Boundary::Dirichlet => n - 1,
        };
        // integral of the linear interpolant over [s, t] within cell c
        let cell_part = |c: usize, s: f64, t: f64| -> f64 {
            let x0 = x_min + c as f64 * dx;
            let (g0, g1) = (rho(c), rho(c + 1));
            let u0 = (s - x0) / dx;
            let u1 = (t - x0) / dx;
            let prim = |u: f64| g0 * u + 0.5 * (g1 - g0) * u * u;
            dx * (prim(u1) - prim(u0))
        };

        let c_lo = (((a - x_min) / dx).floor() as usize).min(n_cells - 1);
        let c_hi = (((b - x_min) / dx).ceil() as usize).max(1).min(n_cells) - 1;
        let mut total = 0.0;
        for c in c_lo..=c_hi {
            let lo = (x_min + c as f64 * dx).max(a);
            let hi = (x_min + (c + 1) as f64 * dx).min(b);
            if hi > lo {
                total += cell_part(c, lo, hi);
            }
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    #[test]
    fn periodic_grid_spacing_and_points() {
        let g = Grid1D::new(-1.0, 1.0, 8, Boundary::Periodic).unwrap();
        assert_eq!(g.spacing(), 0.25);
        assert_eq!(g.point(0), -1.0);
        assert_eq!(g.point(7), 0.75);
    }

    #[test]
    fn dirichlet_grid_includes_endpoints() {
        let g = Grid1D::new(0.0, 1.0, 9, Boundary::Dirichlet).unwrap();
        assert_eq!(g.spacing(), 0.125);
        assert_eq!(g.point(0), 0.0);
        assert_eq!(g.point(8), 1.0);
    }

    #[test]
    fn degenerate_interval_rejected() {
        assert!(Grid1D::new(1.0, 1.0, 8, Boundary::Periodic).is_err());
        assert!(Grid1D::new(0.0, f64::INFINITY, 8, Boundary::Periodic).is_err());
        assert!(Grid1D::new(0.0, 1.0, 7, Boundary::Dirichlet).is_err());
    }

    #[test]
    fn zero_field_norm() {
        let g = Grid1D::new(-1.0, 1.0, 16, Boundary::Dirichlet).unwrap();
        let psi = WaveField::from_fn(g, PhysConstants::default(), |_| C64::new(0.0, 0.0)).unwrap();
        assert_eq!(psi.norm(), 0.0);
        assert_eq!(psi.probability_in_interval(-0.5, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn gaussian_norm_is_one() {
        // rho = sqrt(2/pi) a^-1 exp(-2x^2/a^2) with a = 1 integrates to 1
        let g = Grid1D::new(-10.0, 10.0, 4096, Boundary::Dirichlet).unwrap();
        let amp = (2.0 / std::f64::consts::PI).powf(0.25);
        let psi = WaveField::from_fn(g, PhysConstants::default(), |x| {
            C64::new(amp * (-x * x).exp(), 0.0)
        })
        .unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn interval_full_grid_equals_norm() {
        let g = Grid1D::new(-3.0, 3.0, 128, Boundary::Periodic).unwrap();
        let psi = WaveField::from_fn(g, PhysConstants::default(), |x| {
            C64::new((-x * x).exp(), 0.3 * x.cos())
        })
        .unwrap();
        let full = psi.probability_in_interval(-3.0, 3.0).unwrap();
        assert!((full - psi.norm()).abs() < 1e-12 * psi.norm());
    }

    #[test]
    fn interval_outside_grid_is_error() {
        let g = Grid1D::new(-1.0, 1.0, 16, Boundary::Dirichlet).unwrap();
        let psi = WaveField::from_fn(g, PhysConstants::default(), |_| C64::new(1.0, 0.0)).unwrap();
        assert!(psi.probability_in_interval(2.0, 3.0).is_err());
        assert!(psi.probability_in_interval(0.5, 0.5).is_err());
    }

    #[test]
    fn norm_invariant_under_global_phase() {
        let g = Grid1D::new(-5.0, 5.0, 256, Boundary::Dirichlet).unwrap();
        let psi = WaveField::from_fn(g.clone(), PhysConstants::default(), |x| {
            C64::new((-x * x / 2.0).exp(), 0.0)
        })
        .unwrap();
        let phase = C64::from_polar(1.0, 1.234);
        let rotated = WaveField::new(
            g,
            psi.values().iter().map(|v| v * phase).collect(),
            psi.constants(),
        )
        .unwrap();
        assert!((psi.norm() - rotated.norm()).abs() <= 1e-14 * psi.norm());
    }
}

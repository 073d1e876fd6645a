//! Hydrodynamic decomposition of a wavefunction: probability density rho,
//! probability flux J = (hbar/M) Im(psi* psi'), diffusion flux
//! D = -(hbar/2M) rho', osmotic velocity u = -D/rho, phase, and the
//! flow/diffusion split of the kinetic energy.

use crate::field::{Boundary, Grid1D, WaveField};
use crate::packets::{box_initial, BoxSpec, PacketError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HydroError {
    #[error("kinetic energy split needs a normalized state, got norm = {0}")]
    Unnormalized(f64),
    #[error("density floor must be positive, got {0}")]
    BadFloor(f64),
    #[error("divergence fit needs at least 3 grids with strictly decreasing spacing")]
    TooFewGrids,
    #[error(transparent)]
    Packet(#[from] PacketError),
}

/// First derivative of a sampled real function: 4th-order central stencil in
/// the interior. Periodic grids wrap; Dirichlet grids fall back to 2nd-order
/// stencils in the two cells nearest each wall (one-sided at the wall itself).
pub fn gradient(samples: &[f64], grid: &Grid1D) -> Vec<f64> {
    assert_eq!(samples.len(), grid.len());
    let n = grid.len();
    let dx = grid.spacing();
    let mut out = vec![0.0; n];
    let central4 =
        |m2: f64, m1: f64, p1: f64, p2: f64| (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * dx);
    match grid.boundary() {
        Boundary::Periodic => {
            for i in 0..n {
                let idx = |o: isize| samples[(i as isize + o).rem_euclid(n as isize) as usize];
                out[i] = central4(idx(-2), idx(-1), idx(1), idx(2));
            }
        }
        Boundary::Dirichlet => {
            out[0] = (-3.0 * samples[0] + 4.0 * samples[1] - samples[2]) / (2.0 * dx);
            out[1] = (samples[2] - samples[0]) / (2.0 * dx);
            for i in 2..n - 2 {
                out[i] = central4(
                    samples[i - 2],
                    samples[i - 1],
                    samples[i + 1],
                    samples[i + 2],
                );
            }
            out[n - 2] = (samples[n - 1] - samples[n - 3]) / (2.0 * dx);
            out[n - 1] =
                (3.0 * samples[n - 1] - 4.0 * samples[n - 2] + samples[n - 3]) / (2.0 * dx);
        }
    }
    out
}

/// rho = |psi|^2 pointwise.
pub fn probability_density(psi: &WaveField) -> Vec<f64> {
    psi.values().iter().map(|v| v.norm_sqr()).collect()
}

/// J = (hbar/M) Im(psi* d psi / dx).
pub fn probability_flux(psi: &WaveField) -> Vec<f64> {
    let re: Vec<f64> = psi.values().iter().map(|v| v.re).collect();
    let im: Vec<f64> = psi.values().iter().map(|v| v.im).collect();
    let dre = gradient(&re, psi.grid());
    let dim = gradient(&im, psi.grid());
    let c = psi.constants().hbar / psi.constants().mass;
    (0..re.len())
        .map(|i| c * (re[i] * dim[i] - im[i] * dre[i]))
        .collect()
}

/// D = -(hbar/2M) d rho / dx.
pub fn diffusion_flux(psi: &WaveField) -> Vec<f64> {
    let rho = probability_density(psi);
    let drho = gradient(&rho, psi.grid());
    let c = -0.5 * psi.constants().hbar / psi.constants().mass;
    drho.into_iter().map(|v| c * v).collect()
}

fn default_floor(rho: &[f64]) -> f64 {
    1e-12 * rho.iter().cloned().fold(0.0, f64::max)
}

/// u = -D/rho where rho stays at or above the floor; NaN marks masked points
/// (nodes and numerically empty regions). `rho_floor = None` uses
/// 1e-12 * max(rho).
pub fn osmotic_velocity(psi: &WaveField, rho_floor: Option<f64>) -> Result<Vec<f64>, HydroError> {
    let rho = probability_density(psi);
    let floor = match rho_floor {
        Some(f) if f > 0.0 => f,
        Some(f) => return Err(HydroError::BadFloor(f)),
        None => default_floor(&rho),
    };
    let d = diffusion_flux(psi);
    Ok(rho
        .iter()
        .zip(d.iter())
        .map(|(&r, &dv)| if r >= floor { -dv / r } else { f64::NAN })
        .collect())
}

/// arg(psi) where the density stays at or above the floor, NaN elsewhere.
pub fn phase(psi: &WaveField, rho_floor: Option<f64>) -> Result<Vec<f64>, HydroError> {
    let rho = probability_density(psi);
    let floor = match rho_floor {
        Some(f) if f > 0.0 => f,
        Some(f) => return Err(HydroError::BadFloor(f)),
        None => default_floor(&rho),
    };
    Ok(psi
        .values()
        .iter()
        .zip(rho.iter())
        .map(|(v, &r)| if r >= floor { v.arg() } else { f64::NAN })
        .collect())
}

/// All derived fields of one wavefunction on its grid.
#[derive(Debug, Clone)]
pub struct HydroFields {
    pub rho: Vec<f64>,
    pub flux_j: Vec<f64>,
    pub diff_d: Vec<f64>,
    pub osmotic_u: Vec<f64>,
    pub phase_s: Vec<f64>,
}

pub fn extract_fields(psi: &WaveField, rho_floor: Option<f64>) -> Result<HydroFields, HydroError> {
    Ok(HydroFields {
        rho: probability_density(psi),
        flux_j: probability_flux(psi),
        diff_d: diffusion_flux(psi),
        osmotic_u: osmotic_velocity(psi, rho_floor)?,
        phase_s: phase(psi, rho_floor)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySplit {
    pub e_flow: f64,
    pub e_diff: f64,
    pub e_total: f64,
}

/// Fill masked entries of an integrand so the energy quadrature does not
/// silently drop boundary cells: interior gaps interpolate linearly between
/// their valid neighbors, gaps touching a grid end extrapolate quadratically
/// from the three nearest valid samples. Extrapolation reaches at most
/// `FILL_REACH` cells past the valid region; a long masked tail is genuinely
/// empty and stays zero rather than amplifying the fit.
const FILL_REACH: usize = 3;

fn fill_masked(values: &mut [f64], valid: &[bool]) {
    let n = values.len();
    let idx: Vec<usize> = (0..n).filter(|&i| valid[i]).collect();
    if idx.len() < 3 {
        for i in 0..n {
            if !valid[i] {
                values[i] = 0.0;
            }
        }
        return;
    }
    let quad = |pts: [usize; 3], x: f64, v: &[f64]| -> f64 {
        let (x0, x1, x2) = (pts[0] as f64, pts[1] as f64, pts[2] as f64);
        let (y0, y1, y2) = (v[pts[0]], v[pts[1]], v[pts[2]]);
        y0 * (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2))
            + y1 * (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2))
            + y2 * (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1))
    };
    let first = idx[0];
    let last = *idx.last().unwrap();
    let snapshot = values.to_vec();
    for i in 0..n {
        if valid[i] {
            continue;
        }
        if i < first {
            if first - i <= FILL_REACH {
                values[i] = quad([idx[0], idx[1], idx[2]], i as f64, &snapshot);
            } else {
                values[i] = 0.0;
            }
        } else if i > last {
            if i - last <= FILL_REACH {
                let m = idx.len();
                values[i] = quad([idx[m - 3], idx[m - 2], idx[m - 1]], i as f64, &snapshot);
            } else {
                values[i] = 0.0;
            }
        } else {
            // interior gap: bounding valid neighbors
            let lo = (0..i).rev().find(|&j| valid[j]).unwrap();
            let hi = (i + 1..n).find(|&j| valid[j]).unwrap();
            let w = (i - lo) as f64 / (hi - lo) as f64;
            values[i] = snapshot[lo] * (1.0 - w) + snapshot[hi] * w;
        }
    }
}

/// Kinetic-energy decomposition E_K = e_flow + e_diff with
/// e_flow = (M/2) ∫ J^2/rho and e_diff = (M/2) ∫ D^2/rho.
///
/// Sub-floor cells cannot be evaluated directly; their integrand is
/// reconstructed from neighboring valid cells (see `fill_masked`) so that a
/// hard wall, where rho vanishes but the integrand has a finite limit, does
/// not lose an O(dx) slice of energy. The identity e_diff = (M/2) ∫ rho u^2
/// is re-derived over the valid cells as an internal consistency check.
pub fn kinetic_energy_split(
    psi: &WaveField,
    rho_floor: Option<f64>,
) -> Result<EnergySplit, HydroError> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(HydroError::Unnormalized(norm));
    }
    let rho = probability_density(psi);
    let floor = match rho_floor {
        Some(f) if f > 0.0 => f,
        Some(f) => return Err(HydroError::BadFloor(f)),
        None => default_floor(&rho),
    };
    let j = probability_flux(psi);
    let d = diffusion_flux(psi);
    let grid = psi.grid();
    let n = grid.len();
    let valid: Vec<bool> = rho.iter().map(|&r| r >= floor).collect();

    let mut g_flow = vec![0.0; n];
    let mut g_diff = vec![0.0; n];
    for i in 0..n {
        if valid[i] {
            g_flow[i] = j[i] * j[i] / rho[i];
            g_diff[i] = d[i] * d[i] / rho[i];
        }
    }

    // the osmotic identity D^2/rho = rho u^2 must hold cell by cell before
    // any reconstruction
    let half_m = 0.5 * psi.constants().mass;
    let mut diff_direct = 0.0;
    let mut diff_osmotic = 0.0;
    for i in 0..n {
        if valid[i] {
            let u = -d[i] / rho[i];
            diff_direct += grid.weight(i) * g_diff[i];
            diff_osmotic += grid.weight(i) * rho[i] * u * u;
        }
    }
    debug_assert!(
        (diff_direct - diff_osmotic).abs() <= 1e-10 * diff_direct.max(1e-300),
        "osmotic energy identity violated"
    );

    fill_masked(&mut g_flow, &valid);
    fill_masked(&mut g_diff, &valid);
    let e_flow = half_m * grid.integrate(&g_flow);
    let e_diff = half_m * grid.integrate(&g_diff);
    Ok(EnergySplit {
        e_flow,
        e_diff,
        e_total: e_flow + e_diff,
    })
}

/// Least-squares slope of log(max|D|) against log(1/dx) for a family of
/// fields, one per grid. A slope near 1 signals a discrete delta in the
/// diffusion flux; a smooth density gives a slope near 0.
pub fn flux_divergence_slope(fields: &[WaveField]) -> Result<f64, HydroError> {
    if fields.len() < 3 {
        return Err(HydroError::TooFewGrids);
    }
    let mut pts = Vec::with_capacity(fields.len());
    let mut prev_dx = f64::INFINITY;
    for psi in fields {
        let dx = psi.grid().spacing();
        if dx >= prev_dx {
            return Err(HydroError::TooFewGrids);
        }
        prev_dx = dx;
        let dmax = diffusion_flux(psi)
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        pts.push(((1.0 / dx).ln(), dmax.ln()));
    }
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    Ok((m * sxy - sx * sy) / (m * sxx - sx * sx))
}

/// Grid-refinement probe of the delta-like diffusion flux at the box edges:
/// samples box_initial on each grid, fits the divergence slope, and checks
/// that D points outward next to both walls (positive just left of +a/2,
/// negative just right of -a/2).
pub fn edge_flux_divergence(spec: &BoxSpec, grids: &[Grid1D]) -> Result<f64, HydroError> {
    if grids.len() < 3 {
        return Err(HydroError::TooFewGrids);
    }
    let mut fields = Vec::with_capacity(grids.len());
    for g in grids {
        fields.push(box_initial(spec, g)?);
    }
    for psi in &fields {
        let d = diffusion_flux(psi);
        let g = psi.grid();
        let dx = g.spacing();
        let at = |x: f64| -> f64 {
            let i = ((x - g.x_min()) / dx).round() as usize;
            d[i.min(g.len() - 1)]
        };
        let right_edge = at(spec.a / 2.0 - dx);
        let left_edge = at(-spec.a / 2.0 + dx);
        if !(right_edge > 0.0 && left_edge < 0.0) {
            return Err(HydroError::TooFewGrids);
        }
    }
    flux_divergence_slope(&fields)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PhysConstants;
    use crate::packets::{gaussian_state, GaussianSpec};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn pc() -> PhysConstants {
        PhysConstants::default()
    }

    fn plane_wave(n: usize, k: f64, rho0: f64) -> WaveField {
        let g = Grid1D::new(0.0, 2.0 * PI, n, Boundary::Periodic).unwrap();
        WaveField::from_fn(g, pc(), |x| Complex64::from_polar(rho0.sqrt(), k * x)).unwrap()
    }

    fn well_ground_state(n: usize, l: f64) -> WaveField {
        let g = Grid1D::new(0.0, l, n, Boundary::Dirichlet).unwrap();
        WaveField::from_fn(g, pc(), |x| {
            Complex64::new((2.0 / l).sqrt() * (PI * x / l).sin(), 0.0)
        })
        .unwrap()
    }

    #[test]
    fn flux_of_plane_wave_is_uniform() {
        let k = 2.0;
        let rho0 = 1.0 / (2.0 * PI);
        let psi = plane_wave(1024, k, rho0);
        let j = probability_flux(&psi);
        let want = rho0 * k;
        for &v in &j {
            assert!((v - want).abs() < 1e-8, "J = {v}, want {want}");
        }
        let d = diffusion_flux(&psi);
        assert!(d.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn flux_of_real_field_vanishes() {
        let psi = well_ground_state(512, 1.0);
        let peak = probability_density(&psi)
            .iter()
            .cloned()
            .fold(0.0, f64::max);
        assert!(probability_flux(&psi)
            .iter()
            .all(|v| v.abs() < 1e-14 * peak));
    }

    #[test]
    fn gaussian_diffusion_flux_closed_form() {
        let spec = GaussianSpec::new(1.0, 0.0, 0.0, pc()).unwrap();
        let grid = Grid1D::new(-12.0, 12.0, 8192, Boundary::Dirichlet).unwrap();
        let psi = gaussian_state(&spec, &grid, 0.0).unwrap().field;
        let d = diffusion_flux(&psi);
        // D(x) = 2 sqrt(2/pi) x exp(-2 x^2) at t = 0 with hbar = m = a = 1
        for (x, &dv) in grid.points().zip(d.iter()) {
            let want = 2.0 * (2.0 / PI).sqrt() * x * (-2.0 * x * x).exp();
            assert!((dv - want).abs() < 1e-8, "x = {x}");
        }
    }

    #[test]
    fn gaussian_osmotic_velocity_is_linear() {
        let spec = GaussianSpec::new(1.0, 0.0, 0.0, pc()).unwrap();
        let grid = Grid1D::new(-6.0, 6.0, 4096, Boundary::Dirichlet).unwrap();
        let psi = gaussian_state(&spec, &grid, 0.0).unwrap().field;
        let u = osmotic_velocity(&psi, None).unwrap();
        for (x, &uv) in grid.points().zip(u.iter()) {
            if uv.is_nan() {
                continue;
            }
            // u = -2 hbar x / (m a^2), pointing toward the density peak
            assert!(
                (uv + 2.0 * x).abs() < 1e-6 * (1.0 + x.abs()),
                "x = {x}, u = {uv}"
            );
        }
    }

    #[test]
    fn osmotic_identity_where_unmasked() {
        let spec = GaussianSpec::new(1.0, 1.5, 0.2, pc()).unwrap();
        let grid = Grid1D::new(-10.0, 10.0, 2048, Boundary::Dirichlet).unwrap();
        let psi = gaussian_state(&spec, &grid, 0.3).unwrap().field;
        let rho = probability_density(&psi);
        let d = diffusion_flux(&psi);
        let u = osmotic_velocity(&psi, None).unwrap();
        let dmax = d.iter().cloned().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..rho.len() {
            if u[i].is_nan() {
                continue;
            }
            assert!((-u[i] * rho[i] - d[i]).abs() <= 1e-12 * dmax);
        }
    }

    #[test]
    fn momentum_density_split() {
        // (hbar/M) psi* dpsi = -D + iJ pointwise once the stencil error is
        // below 1e-12; needs a fine grid because D differentiates |psi|^2
        // while the split differentiates psi
        let spec = GaussianSpec::new(1.0, 1.0, 0.0, pc()).unwrap();
        let grid = Grid1D::new(-12.0, 12.0, 32768, Boundary::Dirichlet).unwrap();
        let psi = gaussian_state(&spec, &grid, 0.25).unwrap().field;
        let j = probability_flux(&psi);
        let d = diffusion_flux(&psi);
        let re: Vec<f64> = psi.values().iter().map(|v| v.re).collect();
        let im: Vec<f64> = psi.values().iter().map(|v| v.im).collect();
        let dre = gradient(&re, psi.grid());
        let dim = gradient(&im, psi.grid());
        for i in 2..grid.len() - 2 {
            let split = Complex64::new(re[i], -im[i]) * Complex64::new(dre[i], dim[i]);
            assert!((split.re - (-d[i])).abs() < 1e-12);
            assert!((split.im - j[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn plane_wave_energy_is_pure_flow() {
        // stencil bias in e_flow is ~2 k^4 dx^4 / 30 relative
        let k = 2.0;
        let es = kinetic_energy_split(&plane_wave(1024, k, 1.0 / (2.0 * PI)), None).unwrap();
        assert!((es.e_flow - 0.5 * k * k).abs() < 1e-8);
        assert!(es.e_diff < 1e-12);
        assert_eq!(es.e_total, es.e_flow + es.e_diff);
    }

    #[test]
    fn well_ground_state_energy_is_pure_diffusion() {
        let l = 1.0;
        let es = kinetic_energy_split(&well_ground_state(4096, l), None).unwrap();
        let want = PI * PI / (2.0 * l * l);
        assert!(es.e_flow < 1e-12);
        assert!(
            (es.e_diff - want).abs() < 1e-6 * want,
            "e_diff = {}",
            es.e_diff
        );
    }

    #[test]
    fn gaussian_energy_at_rest() {
        let spec = GaussianSpec::new(1.0, 0.0, 0.0, pc()).unwrap();
        let grid = Grid1D::new(-12.0, 12.0, 32768, Boundary::Dirichlet).unwrap();
        let psi = gaussian_state(&spec, &grid, 0.0).unwrap().field;
        let es = kinetic_energy_split(&psi, None).unwrap();
        // minimum-uncertainty packet: e_diff = hbar^2/(2 m a^2), no flow
        assert!(
            (es.e_diff - 0.5).abs() < 1e-6 * 0.5,
            "e_diff = {}",
            es.e_diff
        );
        assert!(es.e_flow < 1e-12);
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        let g = Grid1D::new(0.0, 1.0, 64, Boundary::Dirichlet).unwrap();
        let psi = WaveField::from_fn(g, pc(), |_| Complex64::new(2.0, 0.0)).unwrap();
        assert!(matches!(
            kinetic_energy_split(&psi, None),
            Err(HydroError::Unnormalized(_))
        ));
    }

    #[test]
    fn osmotic_velocity_blows_up_at_the_wall() {
        // nearest unmasked point to the node: |u| ~ 1/dx
        let u_near_wall = |n: usize| -> f64 {
            let psi = well_ground_state(n, 1.0);
            let u = osmotic_velocity(&psi, None).unwrap();
            u.iter().find(|v| !v.is_nan()).cloned().unwrap().abs()
        };
        let coarse = u_near_wall(512);
        let fine = u_near_wall(2048);
        assert!(fine > 3.0 * coarse, "coarse = {coarse}, fine = {fine}");
    }

    #[test]
    fn box_edge_divergence_slope() {
        let spec = BoxSpec::new(1.0, pc()).unwrap();
        // edges fall on grid points for every n, keeping the step response
        // aligned across refinements
        let grids: Vec<Grid1D> = [512usize, 1024, 2048]
            .iter()
            .map(|&n| Grid1D::new(-1.0, 1.0, n, Boundary::Periodic).unwrap())
            .collect();
        let slope = edge_flux_divergence(&spec, &grids).unwrap();
        assert!((slope - 1.0).abs() < 0.05, "slope = {slope}");

        // doubling n doubles max|D|
        let d1 = diffusion_flux(&box_initial(&spec, &grids[0]).unwrap())
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let d2 = diffusion_flux(&box_initial(&spec, &grids[1]).unwrap())
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        assert!((d2 / d1 - 2.0).abs() < 0.2);
    }

    #[test]
    fn smooth_density_has_no_divergence() {
        let spec = GaussianSpec::new(1.0, 0.0, 0.0, pc()).unwrap();
        let fields: Vec<WaveField> = [512usize, 1024, 2048]
            .iter()
            .map(|&n| {
                let g = Grid1D::new(-8.0, 8.0, n, Boundary::Dirichlet).unwrap();
                gaussian_state(&spec, &g, 0.0).unwrap().field
            })
            .collect();
        let slope = flux_divergence_slope(&fields).unwrap();
        assert!(slope.abs() < 0.05, "slope = {slope}");
    }

    #[test]
    fn too_few_grids_is_an_error() {
        let spec = BoxSpec::new(1.0, pc()).unwrap();
        let grids = vec![
            Grid1D::new(-1.0, 1.0, 512, Boundary::Periodic).unwrap(),
            Grid1D::new(-1.0, 1.0, 1024, Boundary::Periodic).unwrap(),
        ];
        assert!(matches!(
            edge_flux_divergence(&spec, &grids),
            Err(HydroError::TooFewGrids)
        ));
    }
}

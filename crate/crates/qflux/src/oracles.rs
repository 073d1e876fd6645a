//! Slow, independent reference implementations used only to validate the
//! production code. Nothing here shares a numerical kernel with the modules
//! under test: the Faddeeva reference runs a double-double Maclaurin series,
//! the propagator reference integrates the free kernel by direct adaptive
//! Gauss-Legendre summation, and the derivative reference builds its stencils
//! from scratch with Fornberg's algorithm.

use crate::field::{Boundary, Grid1D};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("reference Faddeeva is only tabulated for |z| <= 8, got |z| = {0}")]
    ArgumentTooLarge(f64),
    #[error("quadrature needs {needed} panels but the budget allows {budget}")]
    PanelBudgetExceeded { needed: usize, budget: usize },
    #[error("quadrature spec needs panels >= 64 and tolerance > 0")]
    BadQuadratureSpec,
    #[error("propagator quadrature requires t > 0, got {0}")]
    NonPositiveTime(f64),
}

// ---------------------------------------------------------------------------
// double-double arithmetic (Dekker/Knuth error-free transforms)

#[derive(Debug, Clone, Copy, PartialEq)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    (s, (a - (s - v)) + (b - v))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    fn sub(self, other: Dd) -> Dd {
        self.add(Dd {
            hi: -other.hi,
            lo: -other.lo,
        })
    }

    fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let (p, e) = two_prod(q1, d);
        let r = self.sub(Dd { hi: p, lo: e });
        let q2 = (r.hi + r.lo) / d;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

#[derive(Debug, Clone, Copy)]
struct DdC {
    re: Dd,
    im: Dd,
}

impl DdC {
    const ZERO: DdC = DdC {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };

    fn from(z: Complex64) -> DdC {
        DdC {
            re: Dd::from(z.re),
            im: Dd::from(z.im),
        }
    }

    fn add(self, o: DdC) -> DdC {
        DdC {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    fn sub(self, o: DdC) -> DdC {
        DdC {
            re: self.re.sub(o.re),
            im: self.im.sub(o.im),
        }
    }

    fn mul(self, o: DdC) -> DdC {
        DdC {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    fn scale(self, s: Dd) -> DdC {
        DdC {
            re: self.re.mul(s),
            im: self.im.mul(s),
        }
    }

    fn div(self, o: DdC) -> DdC {
        let den = o.re.mul(o.re).add(o.im.mul(o.im));
        let num = self.mul(DdC {
            re: o.re,
            im: Dd {
                hi: -o.im.hi,
                lo: -o.im.lo,
            },
        });
        DdC {
            re: dd_div(num.re, den),
            im: dd_div(num.im, den),
        }
    }

    fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

fn dd_div(a: Dd, b: Dd) -> Dd {
    let q1 = a.hi / b.hi;
    let r = a.sub(b.mul(Dd::from(q1)));
    let q2 = r.hi / b.hi;
    let r2 = r.sub(b.mul(Dd::from(q2)));
    let q3 = r2.hi / b.hi;
    let (hi, lo) = quick_two_sum(q1, q2 + q3);
    Dd { hi, lo }
}

const INV_SQRT_PI_DD: Dd = Dd {
    hi: std::f64::consts::FRAC_2_SQRT_PI / 2.0,
    lo: 7.667_729_806_582_94e-18,
};
const TWO_INV_SQRT_PI_DD: Dd = Dd {
    hi: std::f64::consts::FRAC_2_SQRT_PI,
    lo: 1.533_545_961_316_588e-17,
};

/// Reference Faddeeva function in double-double precision.
///
/// For |z| <= 6 it sums the entire Maclaurin series
/// w(z) = sum_n (iz)^n / Gamma(n/2 + 1); the worst-case cancellation in that
/// disc is about 1e10, leaving better than 1e-14 relative accuracy. For
/// 6 < |z| <= 8 it switches to a long double-double continued fraction
/// (upper half-plane) or the reflection formula (lower half-plane).
pub fn highprec_faddeeva(z: Complex64) -> Result<Complex64, OracleError> {
    let r = z.norm();
    if !(r <= 8.0) {
        return Err(OracleError::ArgumentTooLarge(r));
    }
    if r <= 6.0 {
        return Ok(maclaurin_w(z));
    }
    if z.im >= 0.0 {
        Ok(continued_fraction_w(DdC::from(z)).to_c64())
    } else {
        // w(z) = 2 exp(-z^2) - w(-z); the exp factor is plain f64, which caps
        // this branch near 1e-13 relative, still far below anything it checks
        let back = continued_fraction_w(DdC::from(-z)).to_c64();
        Ok(2.0 * (-z * z).exp() - back)
    }
}

fn maclaurin_w(z: Complex64) -> Complex64 {
    let iz = DdC {
        re: Dd::from(-z.im),
        im: Dd::from(z.re),
    };
    let mut pow = DdC {
        re: Dd::from(1.0),
        im: Dd::ZERO,
    };
    // c_0 = 1, c_1 = 2/sqrt(pi), c_{n+2} = 2 c_n / (n + 2)
    let mut c = [Dd::from(1.0), TWO_INV_SQRT_PI_DD];
    let mut sum = DdC::ZERO;
    for n in 0..260usize {
        let cn = c[n % 2];
        sum = sum.add(pow.scale(cn));
        let mag = pow.re.hi.hypot(pow.im.hi) * cn.hi;
        if n > 8 && mag.abs() < 1e-40 {
            break;
        }
        pow = pow.mul(iz);
        c[n % 2] = cn.mul(Dd::from(2.0)).div_f64((n + 2) as f64);
    }
    sum.to_c64()
}

fn continued_fraction_w(z: DdC) -> DdC {
    let mut r = DdC::ZERO;
    for k in (1..=120).rev() {
        let num = DdC {
            re: Dd::from(k as f64).div_f64(2.0),
            im: Dd::ZERO,
        };
        r = num.div(z.sub(r));
    }
    let i_over_sqrt_pi = DdC {
        re: Dd::ZERO,
        im: INV_SQRT_PI_DD,
    };
    i_over_sqrt_pi.div(z.sub(r))
}

// ---------------------------------------------------------------------------
// free-propagator quadrature

#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    /// Hard cap on the total number of leaf panels.
    pub panels: usize,
    /// Absolute error target for the returned amplitude.
    pub tolerance: f64,
}

impl QuadratureSpec {
    pub fn new(panels: usize, tolerance: f64) -> Result<Self, OracleError> {
        if panels < 64 || !(tolerance > 0.0) {
            return Err(OracleError::BadQuadratureSpec);
        }
        Ok(Self { panels, tolerance })
    }
}

const GL12_NODES: [f64; 12] = [
    -0.981_560_634_246_719_2,
    -0.904_117_256_370_474_9,
    -0.769_902_674_194_304_7,
    -0.587_317_954_286_617_5,
    -0.367_831_498_998_180_2,
    -0.125_233_408_511_468_9,
    0.125_233_408_511_468_9,
    0.367_831_498_998_180_2,
    0.587_317_954_286_617_5,
    0.769_902_674_194_304_7,
    0.904_117_256_370_474_9,
    0.981_560_634_246_719_2,
];

const GL12_WEIGHTS: [f64; 12] = [
    0.047_175_336_386_511_83,
    0.106_939_325_995_318_43,
    0.160_078_328_543_346_22,
    0.203_167_426_723_065_92,
    0.233_492_536_538_354_8,
    0.249_147_045_813_402_77,
    0.249_147_045_813_402_77,
    0.233_492_536_538_354_8,
    0.203_167_426_723_065_92,
    0.160_078_328_543_346_22,
    0.106_939_325_995_318_43,
    0.047_175_336_386_511_83,
];

fn gl12<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Complex64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = Complex64::new(0.0, 0.0);
    for (t, w) in GL12_NODES.iter().zip(GL12_WEIGHTS.iter()) {
        s += w * f(c + h * t);
    }
    s * h
}

struct AdaptState {
    leaves: usize,
    budget: usize,
}

fn adapt<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    whole: Complex64,
    tol: f64,
    depth: usize,
    st: &mut AdaptState,
) -> Result<Complex64, OracleError> {
    let mid = 0.5 * (a + b);
    let left = gl12(f, a, mid);
    let right = gl12(f, mid, b);
    let err = (left + right - whole).norm();
    if err <= tol || depth >= 40 {
        st.leaves += 2;
        if st.leaves > st.budget {
            return Err(OracleError::PanelBudgetExceeded {
                needed: st.leaves,
                budget: st.budget,
            });
        }
        return Ok(left + right);
    }
    let l = adapt(f, a, mid, left, 0.5 * tol, depth + 1, st)?;
    let r = adapt(f, mid, b, right, 0.5 * tol, depth + 1, st)?;
    Ok(l + r)
}

/// Free-space evolution of the normalized box state by direct quadrature of
/// the Fresnel kernel:
/// Psi(x,t) = ∫ sqrt(m/(2 pi i hbar t)) exp(i m (x-x')^2 / (2 hbar t)) a^{-1/2} dx'.
///
/// The interval is pre-split so every initial panel spans at most a quarter of
/// the local phase period, then refined adaptively; exceeding the panel budget
/// or the recursion limit surfaces as an error instead of a wrong answer.
pub fn propagator_quadrature(
    spec: &crate::packets::BoxSpec,
    x: f64,
    t: f64,
    q: QuadratureSpec,
) -> Result<Complex64, OracleError> {
    if !(t > 0.0) {
        return Err(OracleError::NonPositiveTime(t));
    }
    if q.panels < 64 || !(q.tolerance > 0.0) {
        return Err(OracleError::BadQuadratureSpec);
    }
    let a = spec.a;
    let hbar = spec.constants.hbar;
    let mass = spec.constants.mass;
    let c = mass / (2.0 * hbar * t);
    let pref = (mass / (2.0 * std::f64::consts::PI * hbar * t)).sqrt() / a.sqrt()
        * Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    let f = move |xp: f64| {
        let u = x - xp;
        Complex64::from_polar(1.0, c * u * u)
    };

    // local phase period in x' is pi hbar t / (m |x - x'|); quarter of the
    // smallest one over the interval sets the initial uniform panel width
    let u_max = (x + a / 2.0).abs().max((x - a / 2.0).abs());
    let mut width = a;
    if u_max > 0.0 {
        let quarter_period = std::f64::consts::PI * hbar * t / (2.0 * mass * u_max);
        width = width.min(quarter_period);
    }
    let n0 = ((a / width).ceil() as usize).clamp(8, q.panels);
    let mut st = AdaptState {
        leaves: 0,
        budget: q.panels,
    };
    let mut total = Complex64::new(0.0, 0.0);
    let tol_each = q.tolerance / (pref.norm() * n0 as f64);
    for i in 0..n0 {
        let lo = -a / 2.0 + a * i as f64 / n0 as f64;
        let hi = -a / 2.0 + a * (i + 1) as f64 / n0 as f64;
        let coarse = gl12(&f, lo, hi);
        total += adapt(&f, lo, hi, coarse, tol_each, 0, &mut st)?;
    }
    Ok(pref * total)
}

// ---------------------------------------------------------------------------
// reference finite differences (Fornberg weights, built per call)

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivOrder {
    Second,
    Fourth,
}

/// Fornberg's algorithm: weights of the m-th derivative at x0 on the given
/// stencil nodes.
fn fornberg_weights(x0: f64, nodes: &[f64], m: usize) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|row| row[m]).collect()
}

/// Reference first derivative of a sampled real field at the requested order
/// of accuracy. Periodic grids wrap; Dirichlet grids shift the stencil
/// one-sided near the edges, keeping the same order.
pub fn finite_difference_derivative(samples: &[f64], grid: &Grid1D, order: DerivOrder) -> Vec<f64> {
    assert_eq!(samples.len(), grid.len());
    let n = grid.len();
    let half = match order {
        DerivOrder::Second => 1isize,
        DerivOrder::Fourth => 2isize,
    };
    let width = (2 * half + 1) as usize;
    let dx = grid.spacing();
    let mut out = vec![0.0; n];
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        let offsets: Vec<isize> = match grid.boundary() {
            Boundary::Periodic => (-half..=half).collect(),
            Boundary::Dirichlet => {
                let lo = (i as isize - half).max(0).min(n as isize - width as isize);
                (lo - i as isize..lo - i as isize + width as isize).collect()
            }
        };
        let nodes: Vec<f64> = offsets.iter().map(|&o| o as f64 * dx).collect();
        let w = fornberg_weights(0.0, &nodes, 1);
        let mut acc = 0.0;
        for (&o, &wk) in offsets.iter().zip(w.iter()) {
            let j = (i as isize + o).rem_euclid(n as isize) as usize;
            acc += wk * samples[j];
        }
        out[i] = acc;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Boundary, Grid1D};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn dd_roundoff_is_recovered() {
        let a = Dd::from(1.0);
        let tiny = Dd::from(1e-25);
        let s = a.add(tiny).sub(a);
        assert_eq!(s.to_f64(), 1e-25);
    }

    #[test]
    fn reference_faddeeva_known_points() {
        assert_eq!(highprec_faddeeva(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        let w1 = highprec_faddeeva(c(1.0, 0.0)).unwrap();
        assert!((w1.re - 0.3678794411714423).abs() < 1e-14);
        assert!((w1.im - 0.6071577058413937).abs() < 1e-14);
        let w3i = highprec_faddeeva(c(0.0, 3.0)).unwrap();
        assert!((w3i.re - 0.17900115118138995).abs() < 1e-15);
        assert!(w3i.im.abs() < 1e-20);
    }

    #[test]
    fn reference_faddeeva_conjugate_symmetry() {
        for z in [c(1.7, 2.2), c(-3.0, 0.4), c(5.5, 1.0), c(2.0, -1.5)] {
            let a = highprec_faddeeva(c(-z.re, z.im)).unwrap().conj();
            let b = highprec_faddeeva(z).unwrap();
            assert!((a - b).norm() <= 1e-14 * b.norm(), "z = {z}");
        }
    }

    #[test]
    fn reference_faddeeva_regions_agree_at_switch_radius() {
        // series vs continued fraction, compared just inside/outside |z| = 6
        for th in [0.3f64, 1.0, 1.5, 2.6] {
            let inner = c(5.999 * th.cos(), 5.999 * th.sin());
            let series = maclaurin_w(inner);
            let cf = continued_fraction_w(DdC::from(inner)).to_c64();
            assert!((series - cf).norm() < 3e-14 * series.norm(), "theta = {th}");
        }
    }

    #[test]
    fn reference_faddeeva_rejects_large_argument() {
        assert!(matches!(
            highprec_faddeeva(c(8.0, 1.0)),
            Err(OracleError::ArgumentTooLarge(_))
        ));
    }

    fn unit_box() -> crate::packets::BoxSpec {
        crate::packets::BoxSpec::new(1.0, crate::field::PhysConstants::default()).unwrap()
    }

    #[test]
    fn quadrature_parity_and_decay() {
        let q = QuadratureSpec::new(200_000, 1e-10).unwrap();
        let plus = propagator_quadrature(&unit_box(), 0.7, 0.3, q).unwrap();
        let minus = propagator_quadrature(&unit_box(), -0.7, 0.3, q).unwrap();
        assert!((plus - minus).norm() < 1e-9);

        // |Psi(0,t)|^2 decays like 1/t once t is large
        let d1 = propagator_quadrature(&unit_box(), 0.0, 50.0, q)
            .unwrap()
            .norm_sqr();
        let d2 = propagator_quadrature(&unit_box(), 0.0, 100.0, q)
            .unwrap()
            .norm_sqr();
        let ratio = d1 / d2;
        assert!((ratio - 2.0).abs() < 0.02, "ratio = {ratio}");
    }

    #[test]
    fn quadrature_budget_error() {
        let q = QuadratureSpec {
            panels: 64,
            tolerance: 1e-12,
        };
        let r = propagator_quadrature(&unit_box(), 10.0, 5e-4, q);
        assert!(matches!(r, Err(OracleError::PanelBudgetExceeded { .. })));
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let g = Grid1D::new(0.0, 1.0, 32, Boundary::Dirichlet).unwrap();
        let d = finite_difference_derivative(&vec![3.5; 32], &g, DerivOrder::Fourth);
        assert!(d.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn derivative_of_sine_on_periodic_grid() {
        let n = 256;
        let g = Grid1D::new(0.0, 2.0 * std::f64::consts::PI, n, Boundary::Periodic).unwrap();
        let k = 3.0;
        let f: Vec<f64> = g.points().map(|x| (k * x).sin()).collect();
        let d = finite_difference_derivative(&f, &g, DerivOrder::Fourth);
        let err: f64 = g
            .points()
            .zip(d.iter())
            .map(|(x, &v)| (v - k * (k * x).cos()).abs())
            .fold(0.0, f64::max);
        // 4th-order truncation term k^5 dx^4 / 30 is ~3e-6 here
        assert!(err < 1e-5, "err = {err}");
    }

    #[test]
    fn order_gap_shrinks_under_refinement() {
        // |d4 - d2| measures the 2nd-order error term; refining dx by 2
        // shrinks it ~4x
        let gap = |n: usize| -> f64 {
            let g = Grid1D::new(0.0, 2.0 * std::f64::consts::PI, n, Boundary::Periodic).unwrap();
            let f: Vec<f64> = g
                .points()
                .map(|x| (2.0 * x).sin() + 0.3 * (5.0 * x).cos())
                .collect();
            let d2 = finite_difference_derivative(&f, &g, DerivOrder::Second);
            let d4 = finite_difference_derivative(&f, &g, DerivOrder::Fourth);
            d2.iter()
                .zip(d4.iter())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        };
        let ratio = gap(128) / gap(256);
        assert!((ratio - 4.0).abs() < 0.5, "ratio = {ratio}");
    }
}

//! The fractional Laplacian three ways: principal-value integral, weighted
//! second difference, and Fourier multiplier `|xi|^{2s}`; the symbol integral
//! that fixes `C(n, s)`; and the frequency-side `H^s` seminorm.
//!
//! ```
//! use fracsob::{fraclap::flap_quotient, Func, QuadConfig};
//! let g = Func::Gaussian { sigma: 1.0 };
//! let r = flap_quotient(&g, &[vec![0.0]], 0.5, &QuadConfig::default()).unwrap();
//! assert!((r.values[0] - (2.0 / std::f64::consts::PI).sqrt()).abs() < 1e-8);
//! ```

use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::catalog::{Field, Func};
use crate::constants::{c_const, cos_symbol_1d, sphere_measure};
use crate::error::{invalid, Error, Result, Warning};
use crate::grid::{GridFunction, QuadConfig, TailMode};
use crate::quad::{integrate, GaussRule};

/// Angular trapezoid nodes for 2-D spherical means.
const ANGLES: usize = 128;
const QUAD_ABS: f64 = 1e-12;
const QUAD_REL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Pv,
    Quotient,
    Spectral,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Pv => "pv",
            Method::Quotient => "quotient",
            Method::Spectral => "spectral",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlapResult {
    pub method: Method,
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
    /// Contribution of `|y| > R` added per point (zero for the spectral method
    /// and in bound-only mode).
    pub tail_correction: Vec<f64>,
    /// Largest quadrature error estimate over the points, plus the tail bound
    /// in bound-only mode.
    pub est_error: f64,
    pub warnings: Vec<Warning>,
    /// The whole output grid for the spectral method.
    pub field: Option<GridFunction>,
}

impl FlapResult {
    /// Value at the node or point nearest to `x`.
    pub fn value_at(&self, x: &[f64]) -> f64 {
        let d = |p: &Vec<f64>| p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        let (k, _) = self
            .points
            .iter()
            .enumerate()
            .min_by(|a, b| d(a.1).total_cmp(&d(b.1)))
            .expect("non-empty result");
        self.values[k]
    }
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return invalid(format!("s = {s} is outside (0, 1)"));
    }
    Ok(())
}

fn check_points(pts: &[Vec<f64>]) -> Result<usize> {
    let Some(first) = pts.first() else {
        return invalid("no evaluation points");
    };
    let n = first.len();
    if !(1..=2).contains(&n) || pts.iter().any(|p| p.len() != n) {
        return invalid("points must all have dimension 1 or all dimension 2");
    }
    Ok(n)
}

/// `int_{S^{n-1}} (u(x + r theta) + u(x - r theta) - 2 u(x)) d sigma(theta)`.
fn spherical_second_difference(u: &dyn Field, x: &[f64], r: f64, u0: f64) -> f64 {
    if x.len() == 1 {
        return 2.0 * (u.eval(&[x[0] + r]) + u.eval(&[x[0] - r]) - 2.0 * u0);
    }
    // the +theta and -theta halves coincide over the full circle
    let dphi = 2.0 * PI / ANGLES as f64;
    let mut acc = 0.0;
    for k in 0..ANGLES {
        let phi = k as f64 * dphi;
        acc += u.eval(&[x[0] + r * phi.cos(), x[1] + r * phi.sin()]) - u0;
    }
    2.0 * acc * dphi
}

/// `int_0^b r^{-1-2s} G(r) dr` for the spherical second difference `G`, with
/// `G(r) / r^2` continued to `r = 0` through the Laplacian.
struct RadialIntegral<'a> {
    u: &'a dyn Field,
    x: &'a [f64],
    s: f64,
    u0: f64,
    q0: f64,
    /// below this `G(r)/r^2` loses digits to cancellation and is replaced by
    /// the quadratic through `q0` and its value here
    tiny: f64,
}

impl<'a> RadialIntegral<'a> {
    fn new(u: &'a dyn Field, x: &'a [f64], s: f64, scale: f64) -> Self {
        let u0 = u.eval(x);
        let n = x.len();
        let omega = sphere_measure(n as i64 - 1).unwrap();
        let q0 = match u.laplacian(x) {
            Some(lap) => omega * lap / n as f64,
            None => {
                let y = 1e-2 * scale;
                let q = |r: f64| spherical_second_difference(u, x, r, u0) / (r * r);
                (4.0 * q(y) - q(2.0 * y)) / 3.0
            }
        };
        RadialIntegral { u, x, s, u0, q0, tiny: 1e-2 * scale }
    }

    fn q(&self, r: f64) -> f64 {
        spherical_second_difference(self.u, self.x, r, self.u0) / (r * r)
    }

    /// `(value, error)` over `[a, b]`; `a = 0` subtracts `q0` near the origin.
    fn over(&self, a: f64, b: f64) -> Result<(f64, f64)> {
        let e = 2.0 - 2.0 * self.s;
        if a == 0.0 {
            let qt = self.q(self.tiny) - self.q0;
            let rem = integrate(
                |r: f64| {
                    let dq = if r < self.tiny { qt * (r / self.tiny).powi(2) } else { self.q(r) - self.q0 };
                    r.powf(1.0 - 2.0 * self.s) * dq
                },
                0.0,
                b,
                QUAD_ABS,
                QUAD_REL,
            )?;
            Ok((self.q0 * b.powf(e) / e + rem.value, rem.err))
        } else {
            let q = integrate(|r: f64| r.powf(1.0 - 2.0 * self.s) * self.q(r), a, b, QUAD_ABS, QUAD_REL)?;
            Ok((q.value, q.err))
        }
    }
}

struct Pointwise {
    value: f64,
    tail: f64,
    err: f64,
    warning: Option<Warning>,
}

/// Contribution of `|y| > R` to the operator when `u` vanishes there;
/// `(term, bound, warning)`. Without a known support inside `B_R(x)` nothing
/// is added and the majorant `(C/2) 4 ||u||_inf omega R^{-2s} / (2s)` is
/// reported instead.
fn tail_term(u: &dyn Field, x: &[f64], s: f64, c: f64, cfg: &QuadConfig) -> (f64, f64, Option<Warning>) {
    let n = x.len();
    let omega = sphere_measure(n as i64 - 1).unwrap();
    let r = cfg.trunc_radius;
    let shell = omega * r.powf(-2.0 * s) / (2.0 * s);
    let bound = 0.5 * c * 4.0 * u.sup_norm() * shell;
    let xnorm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let inside = u.support_radius().is_some_and(|rad| xnorm + rad <= r);
    if !inside {
        return (0.0, bound, Some(Warning::TailAssumptionViolated { bound }));
    }
    match cfg.tail {
        TailMode::CompactSupportExact => (c * u.eval(x) * shell, 0.0, None),
        TailMode::BoundOnly => (0.0, bound, None),
    }
}

fn length_scale(u: &dyn Field, cfg: &QuadConfig) -> f64 {
    u.support_radius().map_or(1.0, |r| (r / GAUSS_LIKE).clamp(1e-6, 1.0)).min(0.5 * cfg.trunc_radius)
}

/// Support radius of a unit-width bump in units of its width.
const GAUSS_LIKE: f64 = 8.9;

fn quotient_at(u: &dyn Field, x: &[f64], s: f64, c: f64, cfg: &QuadConfig) -> Result<Pointwise> {
    let scale = length_scale(u, cfg);
    let ri = RadialIntegral::new(u, x, s, scale);
    let (near, e1) = ri.over(0.0, scale)?;
    let (far, e2) = ri.over(scale, cfg.trunc_radius)?;
    let (tail, bound, warning) = tail_term(u, x, s, c, cfg);
    Ok(Pointwise { value: -0.5 * c * (near + far) + tail, tail, err: 0.5 * c * (e1 + e2) + bound, warning })
}

fn collect(method: Method, pts: &[Vec<f64>], out: Vec<Result<Pointwise>>) -> Result<FlapResult> {
    let mut values = Vec::with_capacity(out.len());
    let mut tails = Vec::with_capacity(out.len());
    let mut err: f64 = 0.0;
    let mut warnings = Vec::new();
    for o in out {
        let o = o?;
        values.push(o.value);
        tails.push(o.tail);
        err = err.max(o.err);
        if let Some(w) = o.warning {
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        }
    }
    Ok(FlapResult { method, points: pts.to_vec(), values, tail_correction: tails, est_error: err, warnings, field: None })
}

/// `-(C/2) int (u(x+y) + u(x-y) - 2u(x)) / |y|^{n+2s} dy` at each point.
///
/// The integral runs over `|y| <= R` in polar form; the near-origin part uses
/// `G(r)/r^2 -> omega_{n-1} Δu(x) / n` so no exclusion is needed.
pub fn flap_quotient(u: &dyn Field, pts: &[Vec<f64>], s: f64, cfg: &QuadConfig) -> Result<FlapResult> {
    check_s(s)?;
    cfg.validate()?;
    let n = check_points(pts)?;
    let c = c_const(n, s)?;
    let out: Vec<Result<Pointwise>> = pts.par_iter().map(|x| quotient_at(u, x, s, c, cfg)).collect();
    collect(Method::Quotient, pts, out)
}

/// Treatment of `|y| < eps` in [`flap_pv_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PvShell {
    /// Pair `y` with `-y` inside the shell, which makes it integrable.
    Symmetrized,
    /// Leave the shell out, the bare truncated integral.
    Dropped,
}

fn pv_at(u: &dyn Field, x: &[f64], s: f64, c: f64, eps: f64, shell: PvShell, cfg: &QuadConfig) -> Result<Pointwise> {
    let ri = RadialIntegral::new(u, x, s, length_scale(u, cfg));
    let u0 = ri.u0;
    let n = x.len();
    // eps < |y| < R one-sided: int_S (u(x) - u(x + r theta)) = -G(r)/2
    let outer = integrate(
        |r: f64| {
            let h = match n {
                1 => 2.0 * u0 - u.eval(&[x[0] + r]) - u.eval(&[x[0] - r]),
                _ => {
                    let dphi = 2.0 * PI / ANGLES as f64;
                    (0..ANGLES)
                        .map(|k| {
                            let phi = k as f64 * dphi;
                            u0 - u.eval(&[x[0] + r * phi.cos(), x[1] + r * phi.sin()])
                        })
                        .sum::<f64>()
                        * dphi
                }
            };
            r.powf(-1.0 - 2.0 * s) * h
        },
        eps,
        cfg.trunc_radius,
        QUAD_ABS,
        QUAD_REL,
    )?;
    let (inner, e_in) = match shell {
        PvShell::Symmetrized => {
            let (v, e) = ri.over(0.0, eps)?;
            (-0.5 * v, 0.5 * e)
        }
        PvShell::Dropped => (0.0, 0.0),
    };
    let (tail, bound, warning) = tail_term(u, x, s, c, cfg);
    Ok(Pointwise { value: c * (outer.value + inner) + tail, tail, err: c * (outer.err + e_in) + bound, warning })
}

/// `C int_{eps<|x-y|<R} (u(x) - u(y)) / |x-y|^{n+2s} dy` plus the symmetrized
/// inner shell and the tail term.
///
/// The value is recomputed with `eps/2`; a relative change above `cfg.tol`
/// is a [`Error::PvInstability`].
pub fn flap_pv(u: &dyn Field, pts: &[Vec<f64>], s: f64, cfg: &QuadConfig) -> Result<FlapResult> {
    flap_pv_with(u, pts, s, cfg, PvShell::Symmetrized)
}

pub fn flap_pv_with(u: &dyn Field, pts: &[Vec<f64>], s: f64, cfg: &QuadConfig, shell: PvShell) -> Result<FlapResult> {
    check_s(s)?;
    cfg.validate()?;
    let n = check_points(pts)?;
    let c = c_const(n, s)?;
    let eps = cfg.eps_pv;
    let out: Vec<Result<Pointwise>> = pts
        .par_iter()
        .map(|x| {
            let a = pv_at(u, x, s, c, eps, shell, cfg)?;
            let b = pv_at(u, x, s, c, 0.5 * eps, shell, cfg)?;
            let change = (b.value - a.value).abs() / b.value.abs().max(f64::MIN_POSITIVE);
            if change > cfg.tol && (b.value - a.value).abs() > QUAD_ABS {
                return Err(Error::PvInstability { eps, change, tol: cfg.tol });
            }
            Ok(Pointwise { err: b.err.max((b.value - a.value).abs()), ..b })
        })
        .collect();
    collect(Method::Pv, pts, out)
}

/// Discrete unitary Fourier transform of grid samples.
///
/// `u_hat(xi_k) = h^n (2 pi)^{-n/2} sum_j u_j exp(-i xi_k . x_j)` on the
/// frequencies `xi_k = 2 pi k / (N h)`, `k` in the symmetric band
/// `[-N/2, N/2)`. With `d xi = 2 pi / (N h)` this satisfies
/// `sum |u|^2 h^n = sum |u_hat|^2 d xi^n` exactly.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub counts: Vec<usize>,
    pub spacing: Vec<f64>,
    pub lo: Vec<f64>,
    /// Coefficients in transform order (axis 1 fastest in 2-D).
    pub coeffs: Vec<Complex64>,
}

impl Spectrum {
    /// Frequency of transform index `k` on `axis`.
    pub fn xi(&self, axis: usize, k: usize) -> f64 {
        let n = self.counts[axis];
        let kk = if k >= n.div_ceil(2) { k as f64 - n as f64 } else { k as f64 };
        2.0 * PI * kk / (n as f64 * self.spacing[axis])
    }

    pub fn d_xi(&self, axis: usize) -> f64 {
        2.0 * PI / (self.counts[axis] as f64 * self.spacing[axis])
    }

    /// `|xi|` at flat index `k`.
    pub fn xi_norm(&self, k: usize) -> f64 {
        if self.counts.len() == 1 {
            return self.xi(0, k).abs();
        }
        let (i, j) = (k / self.counts[1], k % self.counts[1]);
        self.xi(0, i).hypot(self.xi(1, j))
    }

    pub fn cell(&self) -> f64 {
        (0..self.counts.len()).map(|a| self.d_xi(a)).product()
    }
}

/// In-place n-D FFT, unnormalized in both directions.
pub(crate) fn fft_nd(data: &mut [Complex64], counts: &[usize], inverse: bool) {
    let mut planner = FftPlanner::new();
    let plan = |n: usize, planner: &mut FftPlanner<f64>| {
        if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        }
    };
    if counts.len() == 1 {
        plan(counts[0], &mut planner).process(data);
        return;
    }
    let (n1, n2) = (counts[0], counts[1]);
    let rows = plan(n2, &mut planner);
    for row in data.chunks_mut(n2) {
        rows.process(row);
    }
    let cols = plan(n1, &mut planner);
    let mut col = vec![Complex64::new(0.0, 0.0); n1];
    for j in 0..n2 {
        for i in 0..n1 {
            col[i] = data[i * n2 + j];
        }
        cols.process(&mut col);
        for i in 0..n1 {
            data[i * n2 + j] = col[i];
        }
    }
}

pub fn unitary_dft(u: &GridFunction) -> Spectrum {
    let g = &u.grid;
    let dim = g.dim();
    let counts = g.counts().to_vec();
    let spacing: Vec<f64> = (0..dim).map(|a| g.spacing(a)).collect();
    let mut data: Vec<Complex64> = (0..g.len()).map(|k| Complex64::new(if u.active(k) { u.values[k] } else { 0.0 }, 0.0)).collect();
    fft_nd(&mut data, &counts, false);
    let mut sp = Spectrum { counts, spacing, lo: g.lo().to_vec(), coeffs: Vec::new() };
    let norm: f64 = sp.spacing.iter().product::<f64>() * (2.0 * PI).powf(-0.5 * dim as f64);
    for (k, c) in data.iter_mut().enumerate() {
        let phase = if dim == 1 {
            sp.xi(0, k) * sp.lo[0]
        } else {
            sp.xi(0, k / sp.counts[1]) * sp.lo[0] + sp.xi(1, k % sp.counts[1]) * sp.lo[1]
        };
        *c *= Complex64::from_polar(norm, -phase);
    }
    sp.coeffs = data;
    sp
}

/// Inverse of [`unitary_dft`] back to real samples (imaginary parts dropped).
pub fn inverse_unitary_dft(sp: &Spectrum) -> Vec<f64> {
    let dim = sp.counts.len();
    let norm: f64 = sp.spacing.iter().product::<f64>() * (2.0 * PI).powf(-0.5 * dim as f64);
    let total: usize = sp.counts.iter().product();
    let mut data: Vec<Complex64> = sp
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let phase = if dim == 1 {
                sp.xi(0, k) * sp.lo[0]
            } else {
                sp.xi(0, k / sp.counts[1]) * sp.lo[0] + sp.xi(1, k % sp.counts[1]) * sp.lo[1]
            };
            c * Complex64::from_polar(1.0 / norm, phase)
        })
        .collect();
    fft_nd(&mut data, &sp.counts, true);
    data.iter().map(|c| c.re / total as f64).collect()
}

fn boundary_max(u: &GridFunction) -> f64 {
    let g = &u.grid;
    let mut m: f64 = 0.0;
    for k in 0..g.len() {
        let idx = g.unflat(k);
        let edge = (0..g.dim()).any(|a| idx[a] == 0 || idx[a] + 1 == g.count(a));
        if edge && u.active(k) {
            m = m.max(u.values[k].abs());
        }
    }
    m
}

/// Relative boundary size above which the spectral methods warn.
pub const PERIODIZATION_TOL: f64 = 1e-6;

fn periodization_warning(u: &GridFunction) -> Option<Warning> {
    let b = boundary_max(u);
    (b > PERIODIZATION_TOL * u.max_abs().max(f64::MIN_POSITIVE)).then_some(Warning::Periodization { boundary_max: b })
}

/// `(-Δ)^s u` by the multiplier `|xi|^{2s}` on the periodic box; `s = 1`
/// gives the discrete-spectrum `-Δ`.
pub fn flap_spectral(u: &GridFunction, s: f64) -> Result<FlapResult> {
    if !(s > 0.0 && s <= 1.0) {
        return invalid(format!("s = {s} is outside (0, 1]"));
    }
    let g = &u.grid;
    let counts = g.counts().to_vec();
    let spacing: Vec<f64> = (0..g.dim()).map(|a| g.spacing(a)).collect();
    let sp = Spectrum { counts: counts.clone(), spacing, lo: g.lo().to_vec(), coeffs: Vec::new() };
    let mut data: Vec<Complex64> = (0..g.len()).map(|k| Complex64::new(if u.active(k) { u.values[k] } else { 0.0 }, 0.0)).collect();
    fft_nd(&mut data, &counts, false);
    let total = g.len() as f64;
    for (k, c) in data.iter_mut().enumerate() {
        let xi = sp.xi_norm(k);
        *c *= if xi == 0.0 { 0.0 } else { xi.powf(2.0 * s) / total };
    }
    fft_nd(&mut data, &counts, true);
    let values: Vec<f64> = data.iter().map(|c| c.re).collect();
    let field = GridFunction { grid: g.clone(), values: values.clone(), mask: u.mask.clone() };
    let points = (0..g.len()).map(|k| g.point(k)[..g.dim()].to_vec()).collect();
    Ok(FlapResult {
        method: Method::Spectral,
        points,
        values,
        tail_correction: vec![0.0; g.len()],
        est_error: 0.0,
        warnings: periodization_warning(u).into_iter().collect(),
        field: Some(field),
    })
}

/// `int_{R^n} (1 - cos(xi . y)) / |y|^{n+2s} dy`, which equals
/// `|xi|^{2s} / C(n, s)`.
pub fn symbol_integral(xi: &[f64], n: usize, s: f64, _cfg: &QuadConfig) -> Result<f64> {
    check_s(s)?;
    if xi.len() != n || !(1..=2).contains(&n) {
        return invalid("symbol_integral needs n in {1, 2} and xi of length n");
    }
    if n == 1 {
        return cos_symbol_1d(xi[0].abs(), s);
    }
    let norm = xi[0].hypot(xi[1]);
    if norm == 0.0 {
        return Ok(0.0);
    }
    // polar: int_0^{2 pi} int_0^inf (1 - cos(r xi . e_phi)) r^{-1-2s} dr dphi,
    // whose radial part is half the 1-D symbol at |xi . e_phi|. It vanishes
    // like v^{2s} at distance v from the two directions orthogonal to xi, so
    // each quarter arc from such a direction is mapped by
    // v = (pi/2) w^{1/(1+2s)}, which makes the integrand smooth in w
    let base = xi[1].atan2(xi[0]);
    let rule = GaussRule::new(16);
    let e = 1.0 / (1.0 + 2.0 * s);
    let mut acc = 0.0;
    for kink in [base - 0.5 * PI, base + 0.5 * PI] {
        for dir in [-1.0, 1.0] {
            // the correction terms are fractional powers of w, so panels
            // shrink geometrically towards w = 0
            let mut hi = 1.0;
            for _ in 0..24 {
                let lo = 0.25 * hi;
                for (w, wt) in rule.on(lo, hi) {
                    let v = 0.5 * PI * w.powf(e);
                    let dv = 0.5 * PI * e * w.powf(e - 1.0);
                    let phi = kink + dir * v;
                    let a = (xi[0] * phi.cos() + xi[1] * phi.sin()).abs();
                    acc += 0.5 * wt * dv * cos_symbol_1d(a, s)?;
                }
                hi = lo;
            }
        }
    }
    Ok(acc)
}

/// `C(n, s)` as the reciprocal of the symbol at a unit vector.
pub fn c_const_direct(n: usize, s: f64) -> Result<f64> {
    let e1: Vec<f64> = (0..n).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect();
    Ok(1.0 / symbol_integral(&e1, n, s, &QuadConfig::default())?)
}

/// `2 C(n,s)^{-1} sum |xi_k|^{2s} |u_hat_k|^2 d xi^n`.
pub fn plancherel_seminorm(u: &GridFunction, s: f64) -> Result<f64> {
    check_s(s)?;
    let n = u.grid.dim();
    let sp = unitary_dft(u);
    let mut acc = 0.0;
    for (k, c) in sp.coeffs.iter().enumerate() {
        let xi = sp.xi_norm(k);
        if xi > 0.0 {
            acc += xi.powf(2.0 * s) * c.norm_sqr();
        }
    }
    Ok(2.0 / c_const(n, s)? * acc * sp.cell())
}

/// `2 C(n,s)^{-1} ||(-Δ)^{s/2} u||^2_{L^2}` with the half power taken spectrally.
pub fn half_laplacian_seminorm(u: &GridFunction, s: f64) -> Result<f64> {
    check_s(s)?;
    let half = flap_spectral(u, 0.5 * s)?;
    let l2: f64 = half.values.iter().map(|v| v * v).sum::<f64>() * u.grid.cell_volume();
    Ok(2.0 / c_const(u.grid.dim(), s)? * l2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorScan {
    pub values: Vec<(f64, f64)>,
    /// `u(x)` and `-Δu(x)`, the `s -> 0` and `s -> 1` targets.
    pub target_low: f64,
    pub target_high: Option<f64>,
    /// Whether `u` has compact support; the `s -> 0` limit needs it.
    pub compact_support: bool,
    /// The limits are stated for `n > 1`; 1-D sweeps extrapolate.
    pub extrapolated: bool,
}

/// `flap_quotient` at one point for each `s` in `s_list`.
pub fn operator_limit_scan(u: &Func, x: &[f64], s_list: &[f64]) -> Result<OperatorScan> {
    if s_list.is_empty() {
        return invalid("s_list is empty");
    }
    let cfg = QuadConfig::default();
    let pts = vec![x.to_vec()];
    let values = s_list
        .iter()
        .map(|&s| Ok((s, flap_quotient(u, &pts, s, &cfg)?.values[0])))
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorScan {
        values,
        target_low: u.eval(x),
        target_high: u.laplacian(x).map(|l| -l),
        compact_support: u.support_radius().is_some(),
        extrapolated: x.len() == 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    #[test]
    fn frequencies_are_symmetric() {
        let g = Grid::new(&[0.0], &[7.0], &[8]).unwrap();
        let sp = unitary_dft(&GridFunction::zeros(g));
        let xs: Vec<f64> = (0..8).map(|k| sp.xi(0, k) / sp.d_xi(0)).collect();
        assert_eq!(xs, vec![0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]);
    }

    #[test]
    fn round_trip() {
        let g = Grid::new(&[-3.0, 1.0], &[3.0, 4.0], &[12, 9]).unwrap();
        let u = GridFunction::from_fn(g, |x| (x[0] * x[1]).sin() + x[0]);
        let back = inverse_unitary_dft(&unitary_dft(&u));
        for (a, b) in u.values.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

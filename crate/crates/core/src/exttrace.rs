//! Extension by zero, by reflection and by a Lipschitz cutoff, with measured
//! norm inflation; restriction to the hyperplane `x_n = 0` and its Fourier
//! right inverse.

use std::f64::consts::PI;
use std::fmt;

use rustfft::num_complex::Complex64;

use crate::catalog::Field;
use crate::constants::sphere_measure;
use crate::error::{invalid, Error, Result};
use crate::fraclap::{unitary_dft, Spectrum};
use crate::gagliardo::gagliardo_seminorm_p;
use crate::grid::{DomainSpec, FracParams, Grid, GridFunction, QuadConfig};
use crate::quad::{integrate, GaussRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionOp {
    ZeroExtend,
    Reflect,
    Cutoff,
}

impl fmt::Display for ExtensionOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtensionOp::ZeroExtend => "zero_extend",
            ExtensionOp::Reflect => "reflect",
            ExtensionOp::Cutoff => "cutoff",
        })
    }
}

/// Norms of a function before and after an extension or cutoff.
///
/// `norm_*` are full `W^{s,p}` norms `(||u||_p^p + [u]^p)^{1/p}`; the
/// `*_p` fields are the separate p-th powers. `ratio` is 0 when the input norm
/// is 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionReport {
    pub op: ExtensionOp,
    pub norm_in: f64,
    pub norm_out: f64,
    pub ratio: f64,
    /// Explicit constant of the estimate that was checked, if any.
    pub bound: Option<f64>,
    pub lp_in_p: f64,
    pub lp_out_p: f64,
    pub seminorm_in_p: f64,
    pub seminorm_out_p: f64,
    /// Zero extension: the independently computed outside interaction term.
    /// Cutoff: the split-kernel constant multiplying `||u||_p^p`.
    pub cross_term: Option<f64>,
    /// Right side the output seminorm power was checked against.
    pub seminorm_bound_p: Option<f64>,
    /// Quadrature slack allowed in the check.
    pub tolerance: f64,
    pub ok: bool,
}

fn full_norm(lp: f64, semi: f64, p: f64) -> f64 {
    (lp + semi).powf(1.0 / p)
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        0.0
    } else {
        a / b
    }
}

/// Distance from `x` to the complement of `omega` along the unit vector `e`.
fn exit_distance(omega: &DomainSpec, x: &[f64], e: &[f64]) -> Result<f64> {
    match omega {
        DomainSpec::Interval { a, b } => Ok(if e[0] > 0.0 { b - x[0] } else { x[0] - a }),
        DomainSpec::Box { lo, hi } => {
            let mut t = f64::INFINITY;
            for i in 0..lo.len() {
                if e[i] > 0.0 {
                    t = t.min((hi[i] - x[i]) / e[i]);
                } else if e[i] < 0.0 {
                    t = t.min((lo[i] - x[i]) / e[i]);
                }
            }
            Ok(t)
        }
        DomainSpec::Ball { center, radius } => {
            let d: Vec<f64> = x.iter().zip(center).map(|(a, c)| a - c).collect();
            let b: f64 = d.iter().zip(e).map(|(a, b)| a * b).sum();
            let c: f64 = d.iter().map(|a| a * a).sum::<f64>() - radius * radius;
            Ok(-b + (b * b - c).max(0.0).sqrt())
        }
        other => Err(Error::UnsupportedDomain(format!("zero extension from {other:?}"))),
    }
}

/// `int_{R^n \ omega} |x - y|^{-n-t} dy` for `x` inside `omega`, in polar
/// coordinates about `x` with the radial part exact.
fn outside_weight(omega: &DomainSpec, x: &[f64], t: f64) -> Result<f64> {
    match x.len() {
        1 => Ok(
            (exit_distance(omega, x, &[1.0])?.powf(-t) + exit_distance(omega, x, &[-1.0])?.powf(-t)) / t,
        ),
        _ => {
            const ANGLES: usize = 256;
            let mut acc = 0.0;
            for k in 0..ANGLES {
                let phi = 2.0 * PI * (k as f64 + 0.5) / ANGLES as f64;
                acc += exit_distance(omega, x, &[phi.cos(), phi.sin()])?.powf(-t);
            }
            Ok(acc * 2.0 * PI / ANGLES as f64 / t)
        }
    }
}

/// Extend `u` (sampled on a grid covering `omega`, supported in `k`) by
/// zero to the whole space.
///
/// The outside interaction `2 int_omega int_{R^n \ omega} |u(x)|^p /
/// |x-y|^{n+sp}` is evaluated a second time from the node values and the
/// report checks that it closes the gap between the two seminorms.
pub fn zero_extend(u: &GridFunction, omega: &DomainSpec, k: &DomainSpec, params: FracParams, cfg: &QuadConfig) -> Result<ExtensionReport> {
    let (olo, ohi) = omega.bounding_box().ok_or_else(|| Error::InvalidArgument("omega must be bounded".into()))?;
    let (klo, khi) = k.bounding_box().ok_or_else(|| Error::InvalidArgument("K must be bounded".into()))?;
    let dim = params.n();
    if (0..dim).any(|a| !(klo[a] > olo[a] && khi[a] < ohi[a])) {
        return Err(Error::PreconditionViolation("K must lie at positive distance inside omega".into()));
    }
    let g = &u.grid;
    let scale = u.max_abs();
    let mut values = vec![0.0; g.len()];
    let mut inside = 0usize;
    for (idx, v) in values.iter_mut().enumerate() {
        let x = &g.point(idx)[..dim];
        if !u.active(idx) || !omega.contains(x) {
            continue;
        }
        inside += 1;
        if !k.contains(x) && u.values[idx].abs() > 1e-14 * scale {
            return Err(Error::PreconditionViolation(format!(
                "u = {:e} at {x:?}, outside K",
                u.values[idx]
            )));
        }
        *v = u.values[idx];
    }
    if inside == 0 {
        return invalid("no grid node lies in omega");
    }
    let ext = GridFunction::new(g.clone(), values, None)?;
    let inner = gagliardo_seminorm_p(u, params, omega, cfg)?;
    let outer = gagliardo_seminorm_p(&ext, params, &DomainSpec::whole(dim), cfg)?;

    let t = params.sp();
    let p = params.p();
    let vol = g.cell_volume();
    let mut cross = 0.0;
    for idx in 0..g.len() {
        let val = ext.values[idx];
        if val != 0.0 {
            cross += val.abs().powf(p) * outside_weight(omega, &g.point(idx)[..dim], t)? * vol;
        }
    }
    cross *= 2.0;

    let tolerance = 1e-3 * outer.seminorm_p + inner.est_error + outer.est_error;
    let residual = (outer.seminorm_p - inner.seminorm_p - cross).abs();
    let norm_in = full_norm(inner.lp_norm_p, inner.seminorm_p, p);
    let norm_out = full_norm(outer.lp_norm_p, outer.seminorm_p, p);
    Ok(ExtensionReport {
        op: ExtensionOp::ZeroExtend,
        norm_in,
        norm_out,
        ratio: ratio(norm_out, norm_in),
        bound: None,
        lp_in_p: inner.lp_norm_p,
        lp_out_p: outer.lp_norm_p,
        seminorm_in_p: inner.seminorm_p,
        seminorm_out_p: outer.seminorm_p,
        cross_term: Some(cross),
        seminorm_bound_p: Some(inner.seminorm_p + cross),
        tolerance,
        ok: residual <= tolerance && norm_out >= norm_in * (1.0 - 1e-12),
    })
}

/// Even reflection across `x_n = 0`.
///
/// `u` lives on cells tiling `Omega_+ = box x (0, H)`; the result lives on
/// the doubled box. Checks `||ubar||_p^p = 2 ||u||_p^p` and
/// `[ubar]^p <= 4 [u]^p`, the seminorm bound with the larger of the two
/// refinement estimates as slack.
pub fn reflect_extend(u: &GridFunction, params: FracParams, cfg: &QuadConfig) -> Result<ExtensionReport> {
    let g = &u.grid;
    let dim = g.dim();
    if params.n() != dim {
        return invalid("dimension mismatch between params and grid");
    }
    let last = dim - 1;
    let (blo, bhi) = g.cell_box();
    let h = g.spacing(last);
    if blo[last].abs() > 1e-9 * h {
        return invalid(format!("the half box must start at x_n = 0, not {}", blo[last]));
    }
    let m = g.count(last);
    let mut lo = blo.clone();
    lo[last] = -bhi[last];
    let mut counts = g.counts().to_vec();
    counts[last] = 2 * m;
    let full = Grid::cells(&lo, &bhi, &counts)?;
    let mirror = |k: usize| -> usize {
        let mut idx = full.unflat(k);
        idx[last] = if idx[last] < m { m - 1 - idx[last] } else { idx[last] - m };
        g.flat(idx)
    };
    let values: Vec<f64> = (0..full.len()).map(|k| u.values[mirror(k)]).collect();
    let mask = u.mask.as_ref().map(|mk| (0..full.len()).map(|k| mk[mirror(k)]).collect());
    let ubar = GridFunction::new(full, values, mask)?;

    let half = DomainSpec::boxed(&blo, &bhi)?;
    let whole = DomainSpec::boxed(&lo, &bhi)?;
    let inner = gagliardo_seminorm_p(u, params, &half, cfg)?;
    let outer = gagliardo_seminorm_p(&ubar, params, &whole, cfg)?;
    let p = params.p();
    let tolerance = 4.0 * inner.est_error.max(0.0) + outer.est_error.max(0.0) + 1e-12 * outer.seminorm_p;
    let lp_ok = (outer.lp_norm_p - 2.0 * inner.lp_norm_p).abs() <= 1e-10 * outer.lp_norm_p.max(f64::MIN_POSITIVE);
    let semi_ok = outer.seminorm_p <= 4.0 * inner.seminorm_p + tolerance;
    let norm_in = full_norm(inner.lp_norm_p, inner.seminorm_p, p);
    let norm_out = full_norm(outer.lp_norm_p, outer.seminorm_p, p);
    Ok(ExtensionReport {
        op: ExtensionOp::Reflect,
        norm_in,
        norm_out,
        ratio: ratio(norm_out, norm_in),
        bound: Some(4.0),
        lp_in_p: inner.lp_norm_p,
        lp_out_p: outer.lp_norm_p,
        seminorm_in_p: inner.seminorm_p,
        seminorm_out_p: outer.seminorm_p,
        cross_term: None,
        seminorm_bound_p: Some(4.0 * inner.seminorm_p),
        tolerance,
        ok: lp_ok && semi_ok,
    })
}

/// `omega_{n-1} (Lambda^p / (p - sp) + 1 / (sp))`: the kernel split at
/// `|x - y| = 1` with the Lipschitz bound inside and `|psi(x) - psi(y)| <= 1`
/// outside.
pub fn cutoff_constant(params: FracParams, lambda: f64) -> Result<f64> {
    let sp = params.sp();
    let p = params.p();
    let omega = sphere_measure(params.n() as i64 - 1)?;
    Ok(omega * (lambda.powf(p) / (p - sp) + 1.0 / sp))
}

/// Multiply by a cutoff `0 <= psi <= 1` with Lipschitz constant `lambda`.
///
/// Checks `||psi u||_p <= ||u||_p` and
/// `[psi u]^p <= 2^{p-1} ([u]^p + C ||u||_p^p)` with `C` from
/// [`cutoff_constant`].
pub fn cutoff_multiply(u: &GridFunction, psi: &dyn Field, lambda: f64, params: FracParams, domain: &DomainSpec, cfg: &QuadConfig) -> Result<ExtensionReport> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return invalid(format!("Lipschitz constant {lambda} must be finite and non-negative"));
    }
    let g = &u.grid;
    let dim = g.dim();
    let mut values = u.values.clone();
    for (k, v) in values.iter_mut().enumerate() {
        let w = psi.eval(&g.point(k)[..dim]);
        if !(0.0..=1.0).contains(&w) {
            return invalid(format!("cutoff value {w} outside [0, 1] at node {k}"));
        }
        *v *= w;
    }
    let cut = GridFunction::new(g.clone(), values, u.mask.clone())?;
    let before = gagliardo_seminorm_p(u, params, domain, cfg)?;
    let after = gagliardo_seminorm_p(&cut, params, domain, cfg)?;
    let p = params.p();
    let c = cutoff_constant(params, lambda)?;
    let rhs = 2f64.powf(p - 1.0) * (before.seminorm_p + c * before.lp_norm_p);
    let tolerance = after.est_error.max(0.0) + 1e-12 * rhs;
    let norm_in = full_norm(before.lp_norm_p, before.seminorm_p, p);
    let norm_out = full_norm(after.lp_norm_p, after.seminorm_p, p);
    Ok(ExtensionReport {
        op: ExtensionOp::Cutoff,
        norm_in,
        norm_out,
        ratio: ratio(norm_out, norm_in),
        bound: None,
        lp_in_p: before.lp_norm_p,
        lp_out_p: after.lp_norm_p,
        seminorm_in_p: before.seminorm_p,
        seminorm_out_p: after.seminorm_p,
        cross_term: Some(c),
        seminorm_bound_p: Some(rhs),
        tolerance,
        ok: after.lp_norm_p <= before.lp_norm_p * (1.0 + 1e-12) && after.seminorm_p <= rhs + tolerance,
    })
}

/// The profile `exp(-1/(1-t^2))` on `(-1, 1)`, scaled to unit integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    /// Integral of the unscaled profile.
    pub mass: f64,
}

impl Bump {
    pub fn standard() -> Bump {
        let mass = integrate(|t| raw_bump(t), -1.0, 1.0, 1e-15, 1e-14).map(|q| q.value).unwrap_or(0.443_993_816_168_079_4);
        Bump { mass }
    }

    pub fn eval(&self, t: f64) -> f64 {
        raw_bump(t) / self.mass
    }

    /// `int (1 + t^2)^s phi(t)^2 dt`, the factor in the norm of the lift.
    pub fn norm_factor(&self, s: f64) -> f64 {
        GaussRule::new(64).integrate(|t| (1.0 + t * t).powf(s) * self.eval(t).powi(2), -1.0, 1.0)
    }
}

impl Default for Bump {
    fn default() -> Self {
        Bump::standard()
    }
}

fn raw_bump(t: f64) -> f64 {
    if t.abs() < 1.0 {
        (-1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}

/// A function on the plane paired with its restriction to `x_2 = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TracePair {
    pub u2d: GridFunction,
    pub v: GridFunction,
    pub s: Option<f64>,
    pub bump: Option<Bump>,
    /// `max |sum_k U(xi', xi_k) d xi_2 - (2 pi)^{1/2} V(xi')| / max |V|`
    /// with unitary transforms.
    pub fourier_residual: f64,
    /// `int (1 + t^2)^s phi^2`, set by [`trace_lift`].
    pub norm_factor: Option<f64>,
}

fn zero_row(g: &Grid) -> Result<usize> {
    if g.dim() != 2 {
        return invalid("trace restriction needs a 2-D grid");
    }
    let h = g.spacing(1);
    (0..g.count(1))
        .find(|&j| g.coord(1, j).abs() <= 1e-9 * h)
        .ok_or_else(|| Error::InvalidArgument("the grid has no row x_2 = 0".into()))
}

fn fourier_residual(big: &Spectrum, small: &Spectrum) -> f64 {
    let (n1, n2) = (big.counts[0], big.counts[1]);
    let d = big.d_xi(1);
    let root = (2.0 * PI).sqrt();
    let mut worst: f64 = 0.0;
    let mut scale: f64 = f64::MIN_POSITIVE;
    for i in 0..n1 {
        let sum: Complex64 = (0..n2).map(|j| big.coeffs[i * n2 + j]).sum::<Complex64>() * d;
        worst = worst.max((sum - small.coeffs[i] * root).norm());
        scale = scale.max(small.coeffs[i].norm() * root);
    }
    worst / scale
}

/// Restrict to the row `x_2 = 0` and measure the Fourier form of the
/// restriction.
pub fn trace_restrict(u2d: &GridFunction) -> Result<TracePair> {
    let g = &u2d.grid;
    let j0 = zero_row(g)?;
    let line = Grid::new(&g.lo()[..1], &g.hi()[..1], &g.counts()[..1])?;
    let values: Vec<f64> = (0..g.count(0)).map(|i| {
        let k = g.flat([i, j0]);
        if u2d.active(k) { u2d.values[k] } else { 0.0 }
    }).collect();
    let v = GridFunction::new(line, values, None)?;
    let residual = fourier_residual(&unitary_dft(u2d), &unitary_dft(&v));
    Ok(TracePair { u2d: u2d.clone(), v, s: None, bump: None, fourier_residual: residual, norm_factor: None })
}

/// `int_R (1 + t^2)^{-s} dt`, finite for `s > 1/2`.
pub fn trace_constant(s: f64) -> Result<f64> {
    if !(s > 0.5) || !s.is_finite() {
        return Err(Error::TraceUndefined { s });
    }
    let e = 2.0 / (2.0 * s - 1.0);
    // t = 1/u and u = w^{1/(2s-1)} turn the tail into a bounded integrand
    let near = integrate(|t| (1.0 + t * t).powf(-s), 0.0, 1.0, 1e-15, 1e-13)?;
    let far = integrate(|w: f64| (1.0 + w.powf(e)).powf(-s), 0.0, 1.0, 1e-15, 1e-13)?;
    Ok(2.0 * (near.value + far.value / (2.0 * s - 1.0)))
}

/// Lift `v` to the plane with
/// `U(xi', xi_2) = (2 pi)^{1/2} V(xi') phi(xi_2 / l) / l`,
/// `l = (1 + |xi'|^2)^{1/2}`.
///
/// The profile is renormalized on the discrete `xi_2` axis so that the sum
/// over `xi_2` reproduces `V` to rounding; the `x_2` axis uses half the
/// spacing of `v` and at least 64 units of length.
pub fn trace_lift(v: &GridFunction, s: f64, bump: &Bump) -> Result<TracePair> {
    if !(s > 0.5) || !s.is_finite() {
        return Err(Error::TraceUndefined { s });
    }
    if v.grid.dim() != 1 {
        return invalid("trace_lift takes a 1-D function");
    }
    let g1 = &v.grid;
    let n1 = g1.count(0);
    let h2 = 0.5 * g1.spacing(0);
    let length = (n1 as f64 * g1.spacing(0)).max(64.0);
    let n2 = ((length / h2).ceil() as usize).next_power_of_two();
    let half = (n2 / 2) as f64 * h2;
    let plane = Grid::new(&[g1.lo()[0], -half], &[g1.hi()[0], half - h2], &[n1, n2])?;

    let vhat = unitary_dft(v);
    let mut spec = Spectrum {
        counts: vec![n1, n2],
        spacing: vec![g1.spacing(0), h2],
        lo: plane.lo().to_vec(),
        coeffs: vec![Complex64::new(0.0, 0.0); n1 * n2],
    };
    let d2 = spec.d_xi(1);
    let root = (2.0 * PI).sqrt();
    let mut column = vec![0.0; n2];
    for i in 0..n1 {
        let l = spec.xi(0, i).hypot(1.0);
        let mut mass = 0.0;
        for (j, c) in column.iter_mut().enumerate() {
            *c = bump.eval(spec.xi(1, j) / l) / l;
            mass += *c * d2;
        }
        for j in 0..n2 {
            spec.coeffs[i * n2 + j] = vhat.coeffs[i] * (root * column[j] / mass);
        }
    }
    let values = crate::fraclap::inverse_unitary_dft(&spec);
    let u2d = GridFunction::new(plane, values, None)?;
    let restricted = trace_restrict(&u2d)?;
    Ok(TracePair {
        u2d,
        v: restricted.v,
        s: Some(s),
        bump: Some(*bump),
        fourier_residual: restricted.fourier_residual,
        norm_factor: Some(bump.norm_factor(s)),
    })
}

/// Discrete `||u||_{H^s}` with weight `(1 + |xi|^2)^s`.
pub fn hs_norm(u: &GridFunction, s: f64) -> f64 {
    let sp = unitary_dft(u);
    let acc: f64 = sp.coeffs.iter().enumerate().map(|(k, c)| (1.0 + sp.xi_norm(k).powi(2)).powf(s) * c.norm_sqr()).sum();
    (acc * sp.cell()).sqrt()
}

/// `(||v||_{H^{s-1/2}}, C(s)^{1/2} ||u||_{H^s})` for the pair, with
/// `C(s)` from [`trace_constant`].
pub fn trace_inequality(pair: &TracePair, s: f64) -> Result<(f64, f64)> {
    let c = trace_constant(s)?;
    Ok((hs_norm(&pair.v, s - 0.5), c.sqrt() * hs_norm(&pair.u2d, s)))
}

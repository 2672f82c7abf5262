//! The set bound, the dyadic sequence inequality and level-set profile behind
//! the fractional Sobolev inequality, and the Campanato and Hölder estimates in
//! the regime `sp > n`.

use rayon::prelude::*;

use crate::constants::{sphere_measure, unit_ball_volume};
use crate::error::{invalid, Error, Result};
use crate::gagliardo::gagliardo_seminorm_p;
use crate::grid::{dist, DomainSpec, FracParams, Grid, GridFunction, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `lhs >= constant * rhs`
    AtLeast,
    /// `lhs <= constant * rhs`
    AtMost,
}

/// One side-by-side evaluation of an inequality.
///
/// `margin` is `lhs - constant * rhs` for [`Relation::AtLeast`] and
/// `constant * rhs - lhs` for [`Relation::AtMost`], so a non-negative margin
/// always means the inequality holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub constant_used: f64,
    pub relation: Relation,
    pub margin: f64,
    pub tol: f64,
    pub ok: bool,
    /// Both sides vanish, so nothing was tested.
    pub degenerate: bool,
}

impl InequalityReport {
    pub fn new(lhs: f64, rhs: f64, constant: f64, relation: Relation, tol: f64) -> Self {
        let margin = match relation {
            Relation::AtLeast => lhs - constant * rhs,
            Relation::AtMost => constant * rhs - lhs,
        };
        let ok = margin >= -tol * lhs.abs().max((constant * rhs).abs()) || margin.is_nan() && lhs.is_infinite();
        InequalityReport { lhs, rhs, constant_used: constant, relation, margin, tol, ok, degenerate: lhs == 0.0 && rhs == 0.0 }
    }
}

/// `omega_{n-1} varpi_n^{sp/n} / (sp)`, attained when `E` is a ball centred
/// at `x`.
pub fn set_bound_constant(n: usize, sp: f64) -> Result<f64> {
    let omega = sphere_measure(n as i64 - 1)?;
    Ok(omega * unit_ball_volume(n).powf(sp / n as f64) / sp)
}

/// Parameter intervals along the ray `x + r e`, `r >= 0`, that lie in `e_set`.
fn ray_hits(e_set: &DomainSpec, x: &[f64], dir: &[f64], out: &mut Vec<(f64, f64)>) -> Result<()> {
    let ball = |c: &[f64], rad: f64, out: &mut Vec<(f64, f64)>| {
        let d: Vec<f64> = x.iter().zip(c).map(|(a, b)| a - b).collect();
        let b: f64 = d.iter().zip(dir).map(|(a, e)| a * e).sum();
        let q: f64 = d.iter().map(|a| a * a).sum::<f64>() - rad * rad;
        let disc = b * b - q;
        if disc > 0.0 {
            let r = disc.sqrt();
            let (lo, hi) = (-b - r, -b + r);
            if hi > 0.0 {
                out.push((lo.max(0.0), hi));
            }
        }
    };
    match e_set {
        DomainSpec::Interval { a, b } => ball(&[0.5 * (a + b)], 0.5 * (b - a), out),
        DomainSpec::Ball { center, radius } => ball(center, *radius, out),
        DomainSpec::BallUnion { balls } => {
            for (c, r) in balls {
                ball(c, *r, out);
            }
        }
        DomainSpec::Box { lo, hi } => {
            let (mut t0, mut t1) = (0.0f64, f64::INFINITY);
            for i in 0..lo.len() {
                if dir[i] == 0.0 {
                    if x[i] <= lo[i] || x[i] >= hi[i] {
                        return Ok(());
                    }
                } else {
                    let (a, b) = ((lo[i] - x[i]) / dir[i], (hi[i] - x[i]) / dir[i]);
                    t0 = t0.max(a.min(b));
                    t1 = t1.min(a.max(b));
                }
            }
            if t1 > t0 {
                out.push((t0, t1));
            }
        }
        other => return Err(Error::UnsupportedDomain(format!("set bound for {other:?}"))),
    }
    Ok(())
}

/// `int_0^inf 1_{x + r e not in E} r^{-1-t} dr`.
fn ray_complement(e_set: &DomainSpec, x: &[f64], dir: &[f64], t: f64) -> Result<f64> {
    let mut hits = Vec::new();
    ray_hits(e_set, x, dir, &mut hits)?;
    hits.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut reach = 0.0;
    let mut acc = 0.0;
    for (lo, hi) in hits {
        if lo > reach {
            if reach == 0.0 {
                return Ok(f64::INFINITY);
            }
            acc += (reach.powf(-t) - lo.powf(-t)) / t;
        }
        reach = f64::max(reach, hi);
    }
    if reach == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(acc + reach.powf(-t) / t)
}

/// Angles in the polar quadrature of the 2-D set integral.
const SET_ANGLES: usize = 4096;

/// `int_{complement of E} |x - y|^{-n-sp} dy` against
/// `C_exp |E|^{-sp/n}`.
///
/// Each ray from `x` is integrated exactly; in 2-D the angle uses a midpoint
/// rule, exact for a disc centred at `x`.
pub fn set_lower_bound(e_set: &DomainSpec, x: &[f64], params: FracParams, _cfg: &QuadConfig) -> Result<InequalityReport> {
    if !e_set.is_bounded() {
        return invalid("E must be bounded");
    }
    let n = params.n();
    if e_set.dim() != n || x.len() != n {
        return invalid("dimension mismatch");
    }
    let t = params.sp();
    let lhs = match n {
        1 => ray_complement(e_set, x, &[1.0], t)? + ray_complement(e_set, x, &[-1.0], t)?,
        2 => {
            let terms: Result<Vec<f64>> = (0..SET_ANGLES)
                .into_par_iter()
                .map(|k| {
                    let phi = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / SET_ANGLES as f64;
                    ray_complement(e_set, x, &[phi.cos(), phi.sin()], t)
                })
                .collect();
            terms?.iter().sum::<f64>() * 2.0 * std::f64::consts::PI / SET_ANGLES as f64
        }
        _ => return invalid("set bound implemented for n = 1, 2"),
    };
    let c = set_bound_constant(n, t)?;
    Ok(InequalityReport::new(lhs, e_set.measure().powf(-t / n as f64), c, Relation::AtLeast, 1e-12))
}

/// `T^{n/(n-sp)}`, the constant the Hölder step gives for the sequence
/// inequality.
pub fn sequence_constant(params: FracParams, t: f64) -> f64 {
    let n = params.n() as f64;
    t.powf(n / (n - params.sp()))
}

/// `sum_k a_k^{(n-sp)/n} T^k <= T^{n/(n-sp)} sum_{a_k != 0} a_{k+1} a_k^{-sp/n} T^k`
/// for `a[i] = a_{k0 + i}`, zero beyond the slice.
///
/// A slice starting at `k0` stands for the sequence continued by
/// `a_{k0 - 1} = a_{k0}`, whose only effect is the extra right-hand term at
/// `k = k0 - 1`.
pub fn sequence_inequality_check(a: &[f64], k0: i64, params: FracParams, t: f64) -> Result<InequalityReport> {
    let n = params.n() as f64;
    let sp = params.sp();
    if sp >= n {
        return Err(Error::WrongRegime(format!("the sequence inequality needs sp < n, got sp = {sp}")));
    }
    if !(t > 1.0) || !t.is_finite() {
        return invalid(format!("T = {t} must exceed 1"));
    }
    if a.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return invalid("entries must be finite and non-negative");
    }
    if a.windows(2).any(|w| w[1] > w[0]) {
        return invalid("the sequence must be non-increasing");
    }
    let g = (n - sp) / n;
    let at = |i: i64| -> f64 { if i >= 0 && (i as usize) < a.len() { a[i as usize] } else { 0.0 } };
    let pow_t = |i: i64| t.powf((k0 + i) as f64);
    let x: f64 = (0..a.len() as i64).map(|i| at(i).powf(g) * pow_t(i)).sum();
    let mut y = 0.0;
    if let Some(&first) = a.first() {
        if first > 0.0 {
            y += first * first.powf(-sp / n) * pow_t(-1);
        }
    }
    for i in 0..a.len() as i64 {
        let ai = at(i);
        if ai > 0.0 {
            y += at(i + 1) * ai.powf(-sp / n) * pow_t(i);
        }
    }
    Ok(InequalityReport::new(x, y, sequence_constant(params, t), Relation::AtMost, 1e-12))
}

/// Measures of the dyadic super-level sets `{|f| > 2^k}`.
///
/// Entry `i` is level `k_min + i`; below `k_min` the measure is that of the
/// support, from the last entry on it is 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelProfile {
    pub k_min: i64,
    /// Cells with `|f| > 2^k`.
    pub counts: Vec<u64>,
    pub cell_volume: f64,
    pub a_k: Vec<f64>,
    /// `a_k - a_{k+1}`.
    pub d_k: Vec<f64>,
}

impl LevelProfile {
    pub fn thresholds(&self) -> std::ops::Range<i64> {
        self.k_min..self.k_min + self.counts.len() as i64
    }

    pub fn count(&self, k: i64) -> u64 {
        if self.counts.is_empty() {
            return 0;
        }
        let i = k - self.k_min;
        if i < 0 {
            self.counts[0]
        } else {
            self.counts.get(i as usize).copied().unwrap_or(0)
        }
    }

    pub fn a(&self, k: i64) -> f64 {
        self.count(k) as f64 * self.cell_volume
    }

    /// Cells in `{2^k < |f| <= 2^{k+1}}`.
    pub fn d_count(&self, k: i64) -> u64 {
        self.count(k) - self.count(k + 1)
    }
}

pub fn level_profile(f: &GridFunction) -> LevelProfile {
    let vals: Vec<f64> = (0..f.values.len()).filter(|&k| f.active(k)).map(|k| f.values[k].abs()).filter(|v| *v > 0.0).collect();
    let vol = f.grid.cell_volume();
    if vals.is_empty() {
        return LevelProfile { k_min: 0, counts: Vec::new(), cell_volume: vol, a_k: Vec::new(), d_k: Vec::new() };
    }
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(0.0, f64::max);
    // one level below the smallest value keeps the whole support
    let k_min = lo.log2().floor() as i64 - 1;
    let k_max = hi.log2().ceil() as i64;
    let counts: Vec<u64> = (k_min..=k_max)
        .map(|k| {
            let th = 2f64.powi(k as i32);
            vals.iter().filter(|v| **v > th).count() as u64
        })
        .collect();
    let a_k: Vec<f64> = counts.iter().map(|c| *c as f64 * vol).collect();
    let d_k: Vec<f64> = (0..counts.len()).map(|i| (counts[i] - counts.get(i + 1).copied().unwrap_or(0)) as f64 * vol).collect();
    LevelProfile { k_min, counts, cell_volume: vol, a_k, d_k }
}

/// `sum_{a_k != 0} a_{k+1} a_k^{-sp/n} 2^{pk}` over all integers `k`, the
/// levels below the profile summed as a geometric series.
pub fn level_sum(profile: &LevelProfile, params: FracParams) -> f64 {
    if profile.counts.is_empty() {
        return 0.0;
    }
    let n = params.n() as f64;
    let p = params.p();
    let e = -params.sp() / n;
    let term = |k: i64| {
        let ak = profile.a(k);
        if ak > 0.0 {
            profile.a(k + 1) * ak.powf(e) * 2f64.powf(p * k as f64)
        } else {
            0.0
        }
    };
    let k0 = profile.k_min;
    let full = profile.a(k0);
    // k < k0: a_{k+1} = a_k = |supp f|
    let below = full * full.powf(e) * 2f64.powf(p * (k0 - 1) as f64) / (1.0 - 2f64.powf(-p));
    below + profile.thresholds().map(term).sum::<f64>()
}

/// The seminorm over `R^n` against the dyadic level sum.
///
/// The constant of the level-set bound is not explicit, so the report carries
/// the empirical ratio as `constant_used` and `ok` only records that both sides
/// are finite and positive (or both zero).
pub fn levelset_seminorm_bound(f: &GridFunction, params: FracParams, cfg: &QuadConfig) -> Result<InequalityReport> {
    let n = params.n();
    if params.sp() >= n as f64 {
        return Err(Error::WrongRegime(format!("the level-set bound needs sp < n, got sp = {}", params.sp())));
    }
    let lhs = gagliardo_seminorm_p(f, params, &DomainSpec::whole(n), cfg)?.seminorm_p;
    let rhs = level_sum(&level_profile(f), params);
    let c = if rhs > 0.0 { lhs / rhs } else { 0.0 };
    let mut r = InequalityReport::new(lhs, rhs, c, Relation::AtLeast, 1e-12);
    r.ok = (r.degenerate || lhs > 0.0 && rhs > 0.0) && lhs.is_finite() && rhs.is_finite();
    Ok(r)
}

/// `||f||_{p*}^p` against `[f]^p` over `R^n`: `lhs` is the seminorm power,
/// `rhs` the norm power, `constant_used` their ratio.
///
/// The constant of the Sobolev inequality is not explicit; `ok` records a
/// positive finite ratio, or a zero function.
pub fn sobolev_ratio(f: &GridFunction, params: FracParams, cfg: &QuadConfig) -> Result<InequalityReport> {
    let n = params.n();
    let p_star = params.p_star().ok_or_else(|| Error::WrongRegime(format!("sp = {} >= n: use the Hölder estimate", params.sp())))?;
    let semi = gagliardo_seminorm_p(f, params, &DomainSpec::whole(n), cfg)?.seminorm_p;
    let norm = f.lp_norm_p(p_star).powf(params.p() / p_star);
    let c = if norm > 0.0 { semi / norm } else { 0.0 };
    let mut r = InequalityReport::new(semi, norm, c, Relation::AtLeast, 1e-12);
    r.ok = r.degenerate || (c > 0.0 && c.is_finite());
    Ok(r)
}

/// The ladder `diam 2^{-j}`, `j = 0..=levels`.
pub fn campanato_radii(domain: &DomainSpec, levels: u32) -> Vec<f64> {
    let d = domain.diameter();
    (0..=levels).map(|j| d * 0.5f64.powi(j as i32)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampanatoResult {
    /// `(sup rho^{-sp} int_{B_rho ∩ Ω} |f - mean|^p)^{1/p}` over the sampled
    /// centres and radii, a lower bound for the continuum supremum.
    pub value: f64,
    /// Best scaled oscillation (p-th power) at each radius.
    pub per_radius: Vec<(f64, f64)>,
    /// The smallest radii give the largest values and still grow by more
    /// than 10% per halving.
    pub divergence_suspected: bool,
}

fn check_campanato_domain(domain: &DomainSpec) -> Result<()> {
    match domain {
        DomainSpec::Interval { .. } | DomainSpec::Box { .. } | DomainSpec::Ball { .. } => Ok(()),
        other => Err(Error::UnsupportedDomain(format!("{other:?}: the oscillation estimate needs an interval, box or ball"))),
    }
}

/// Campanato-type oscillation seminorm with centres on the active nodes.
pub fn campanato_seminorm(f: &GridFunction, params: FracParams, domain: &DomainSpec, radii: &[f64]) -> Result<CampanatoResult> {
    check_campanato_domain(domain)?;
    let diam = domain.diameter();
    if radii.iter().any(|r| !(*r > 0.0 && *r <= diam)) {
        return invalid("radii must lie in (0, diam]");
    }
    let g = &f.grid;
    let dim = g.dim();
    let nodes: Vec<usize> = (0..g.len()).filter(|&k| f.active(k) && domain.contains(&g.point(k)[..dim])).collect();
    let pts: Vec<[f64; 2]> = nodes.iter().map(|&k| g.point(k)).collect();
    let vol = g.cell_volume();
    let p = params.p();
    let sp = params.sp();
    let mut per_radius = Vec::with_capacity(radii.len());
    for &rho in radii {
        let best = (0..nodes.len())
            .into_par_iter()
            .map(|c| {
                let inside: Vec<usize> = (0..nodes.len()).filter(|&j| dist(&pts[j][..dim], &pts[c][..dim]) < rho).collect();
                let mean = inside.iter().map(|&j| f.values[nodes[j]]).sum::<f64>() / inside.len() as f64;
                let osc: f64 = inside.iter().map(|&j| (f.values[nodes[j]] - mean).abs().powf(p)).sum::<f64>() * vol;
                osc * rho.powf(-sp)
            })
            .reduce(|| 0.0, f64::max);
        per_radius.push((rho, best));
    }
    let value = per_radius.iter().map(|x| x.1).fold(0.0, f64::max).powf(1.0 / p);
    let mut by_size = per_radius.clone();
    by_size.sort_by(|a, b| a.0.total_cmp(&b.0));
    let divergence_suspected = by_size.len() >= 3 && {
        let (a, b, c) = (by_size[0].1, by_size[1].1, by_size[2].1);
        a > 1.1 * b && b > 1.1 * c
    };
    Ok(CampanatoResult { value, per_radius, divergence_suspected })
}

/// Discrete `sup_{i != j} |f_i - f_j| / |x_i - x_j|^alpha` over unmasked nodes.
pub fn holder_quotient(f: &GridFunction, alpha: f64) -> f64 {
    let g = &f.grid;
    let dim = g.dim();
    let act = f.active_indices();
    (0..act.len())
        .into_par_iter()
        .map(|a| {
            let xa = g.point(act[a]);
            let mut m: f64 = 0.0;
            for &kb in &act[a + 1..] {
                let d = dist(&xa[..dim], &g.point(kb)[..dim]);
                m = m.max((f.values[act[a]] - f.values[kb]).abs() / d.powf(alpha));
            }
            m
        })
        .reduce(|| 0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HolderReport {
    pub alpha: f64,
    pub holder_quotient: f64,
    pub sup_norm: f64,
    /// `(||f||_p^p + [f]^p)^{1/p}` on the domain.
    pub wsp_norm: f64,
    /// `(sup|f| + holder_quotient) / wsp_norm`.
    pub norm_ratio: f64,
    pub campanato: f64,
    /// `holder_quotient / campanato` for this function.
    pub constant: f64,
    /// The same constant for the linear calibration function.
    pub calibration: f64,
    /// `holder_quotient <= 2 calibration campanato`.
    pub inequality: InequalityReport,
}

/// Hölder estimate for `sp > n`.
///
/// The constant relating the Hölder quotient to the Campanato seminorm depends
/// on the domain; it is measured on `f(x) = x_1` sampled on the same grid and
/// the check allows twice that value.
pub fn holder_check(f: &GridFunction, params: FracParams, domain: &DomainSpec, cfg: &QuadConfig) -> Result<HolderReport> {
    let alpha = params.alpha().ok_or_else(|| Error::WrongRegime(format!("sp = {} <= n: use the Sobolev inequality", params.sp())))?;
    check_campanato_domain(domain)?;
    let radii = campanato_radii(domain, cfg.refine + 4);
    let calib = GridFunction::new(f.grid.clone(), (0..f.grid.len()).map(|k| f.grid.point(k)[0]).collect(), f.mask.clone())?;
    let cal_c = {
        let q = holder_quotient(&calib, alpha);
        q / campanato_seminorm(&calib, params, domain, &radii)?.value
    };
    let q = holder_quotient(f, alpha);
    let camp = campanato_seminorm(f, params, domain, &radii)?.value;
    let semi = gagliardo_seminorm_p(f, params, domain, cfg)?;
    let wsp = semi.full_norm_p.powf(1.0 / params.p());
    let sup = f.max_abs();
    let constant = if camp > 0.0 { q / camp } else { 0.0 };
    let inequality = InequalityReport::new(q, camp, 2.0 * cal_c, Relation::AtMost, 1e-12);
    Ok(HolderReport {
        alpha,
        holder_quotient: q,
        sup_norm: sup,
        wsp_norm: wsp,
        norm_ratio: if wsp > 0.0 { (sup + q) / wsp } else { 0.0 },
        campanato: camp,
        constant,
        calibration: cal_c,
        inequality,
    })
}

/// Same node layout scaled by `lambda`: `f_lambda(x) = f(x / lambda)`.
pub fn dilate(f: &GridFunction, lambda: f64) -> GridFunction {
    GridFunction { grid: Grid::dilate(&f.grid, lambda), values: f.values.clone(), mask: f.mask.clone() }
}

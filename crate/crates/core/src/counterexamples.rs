//! Two failures of the Lipschitz-domain theory: `rho * theta` on the cusp
//! domain, which is `W^{1,p}` but not `W^{s,p}`, and normalized indicators on
//! a chain of shrinking balls, bounded in `H^s` without an `L^2`-convergent
//! subsequence.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::catalog::{Field, Func};
use crate::error::{invalid, Result};
use crate::gagliardo::gagliardo_seminorm_p;
use crate::grid::{make_grid, DomainSpec, FracParams, Grid, QuadConfig};
use crate::quad::GaussRule;

/// Nodes per axis of the tensor rule on one strip pair.
const STRIP_NODES: usize = 8;
/// Nodes of the rule in `t` for the growth-law integral.
const GROWTH_NODES: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct CuspStudy {
    pub p: f64,
    pub s: f64,
    pub kappa: f64,
    /// `kappa (sp - 1) - p`.
    pub alpha_con: f64,
    /// `r_0 = r, r_{j+1} = r_j - r_j^kappa`, `j = 0..=j_max + 1`.
    pub r_seq: Vec<f64>,
    /// `|sum_{j <= j_max} r_j^kappa - (r - r_{j_max + 1})|`.
    pub telescoping_residual: f64,
    /// Double integral over each strip pair `D_j`, `j <= j_max`.
    pub strip_contribs: Vec<f64>,
    /// `strip_contribs[j] / (2^{-kappa} r_j^{kappa - alpha})`.
    pub fitted_c: Vec<f64>,
    /// `(max - min) / mean` of `fitted_c`.
    pub c_spread: f64,
    /// Sum of the strip contributions with `r_j` in `(r/2, r]`, for each `r`
    /// of the sweep.
    pub growth: Vec<(f64, f64)>,
    /// Least-squares slope of `log growth` against `log r`.
    pub slope: f64,
    /// `1 - alpha`.
    pub expected_slope: f64,
    /// Sup of `|grad u|^2` over the sample nodes of the domain.
    pub grad_sup: f64,
    /// Max deviation of `|grad u|^2` from `theta^2 + 1` on the same nodes.
    pub grad_identity_residual: f64,
    /// `(cells along x_1, [u]^p)` on the upper half disc.
    pub control: Vec<(usize, f64)>,
}

fn check_cusp_regime(p: f64, s: f64, kappa: f64, r: f64) -> Result<()> {
    let sp = s * p;
    if !(s > 0.0 && s < 1.0) {
        return invalid(format!("s = {s} is outside (0, 1)"));
    }
    if !(sp > 1.0) {
        return invalid(format!("sp > 1 fails: sp = {sp}"));
    }
    let need = (p + 1.0) / (sp - 1.0);
    if !(kappa > need) {
        return invalid(format!("kappa > (p+1)/(sp-1) fails: {kappa} <= {need}"));
    }
    if !(r > 0.0 && r <= 0.1) {
        return invalid(format!("0 < r <= 0.1 fails: r = {r}"));
    }
    Ok(())
}

/// `r_0 = r`, `r_{j+1} = r_j - r_j^kappa`, `len` terms.
pub fn cusp_radii(r: f64, kappa: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut x = r;
    for _ in 0..len {
        out.push(x);
        x -= x.powf(kappa);
    }
    out
}

/// `iint |u(x) - u(y)|^p / |x - y|^{2+sp}` with `x_1, y_1` in `(-t0, -t1)`,
/// `x_2` in `(|x_1|^kappa, 2|x_1|^kappa)` and `-y_2` in the same band.
pub fn strip_integral(t0: f64, t1: f64, p: f64, s: f64, kappa: f64) -> f64 {
    let rule = GaussRule::new(STRIP_NODES);
    let nodes: Vec<(f64, f64)> = rule.on(0.0, 1.0).collect();
    let w = t0 - t1;
    let u = Func::CuspRhoTheta;
    let e = 2.0 + s * p;
    // points in the upper band, with their weight including |x_1|^kappa
    let band: Vec<([f64; 2], f64)> = nodes
        .iter()
        .flat_map(|&(a, wa)| {
            let x1 = -(t1 + a * w);
            let h = x1.abs().powf(kappa);
            nodes.iter().map(move |&(b, wb)| ([x1, h * (1.0 + b)], wa * wb * w * h))
        })
        .collect();
    let vals: Vec<f64> = band.iter().map(|(x, _)| u.eval(x)).collect();
    let mut acc = 0.0;
    for (i, (x, wx)) in band.iter().enumerate() {
        for (j, (y, wy)) in band.iter().enumerate() {
            // the lower band is the mirror image, where u changes sign
            let dy = [x[0] - y[0], x[1] + y[1]];
            let d = dy[0].hypot(dy[1]);
            acc += wx * wy * (vals[i] + vals[j]).abs().powf(p) / d.powf(e);
        }
    }
    acc
}

/// Sum of [`strip_integral`] over the `j` with `r_j` in `(r/2, r]`, as
/// `int_{r/2}^r I(t) t^{-kappa} dt` where `I(t)` is the strip starting at `t`.
pub fn strip_growth(r: f64, p: f64, s: f64, kappa: f64) -> f64 {
    let rule = GaussRule::new(GROWTH_NODES);
    let terms: Vec<f64> = rule
        .on(0.5 * r, r)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(t, wt)| wt * strip_integral(t, t - t.powf(kappa), p, s, kappa) * t.powf(-kappa))
        .collect();
    terms.iter().sum()
}

/// The growth-law sum by direct summation over the strips.
pub fn strip_growth_direct(r: f64, p: f64, s: f64, kappa: f64) -> f64 {
    let mut radii = Vec::new();
    let mut x = r;
    while x > 0.5 * r {
        radii.push(x);
        x -= x.powf(kappa);
    }
    let terms: Vec<f64> = radii.par_iter().map(|&t| strip_integral(t, t - t.powf(kappa), p, s, kappa)).collect();
    terms.iter().sum()
}

fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x.ln() / n, b + y.ln() / n));
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| {
        let dx = x.ln() - mx;
        (a + dx * (y.ln() - my), b + dx * dx)
    });
    sxy / sxx
}

/// Cells along `x_1` for the half-disc control seminorms.
pub const CONTROL_CELLS: [usize; 3] = [24, 36, 48];

/// `[rho theta]^p` on the upper half of the unit disc, a Lipschitz domain
/// that stays off the cusp.
pub fn cusp_control(p: f64, s: f64, cells: usize, cfg: &QuadConfig) -> Result<f64> {
    let g = Grid::cells(&[-1.0, 0.0], &[1.0, 1.0], &[cells, cells.div_ceil(2)])?;
    let disc = DomainSpec::ball(&[0.0, 0.0], 1.0)?;
    let u = Func::CuspRhoTheta.sample(&g, Some(&disc));
    let half = DomainSpec::boxed(&[-1.0, 0.0], &[1.0, 1.0])?;
    Ok(gagliardo_seminorm_p(&u, FracParams::new(2, s, p)?, &half, cfg)?.seminorm_p)
}

/// Nodes per axis of the gradient sampling grid.
const GRAD_NODES: usize = 201;

pub fn cusp_divergence_study(p: f64, s: f64, kappa: f64, r: f64, j_max: usize, cfg: &QuadConfig) -> Result<CuspStudy> {
    check_cusp_regime(p, s, kappa, r)?;
    let sp = s * p;
    let alpha = kappa * (sp - 1.0) - p;
    let r_seq = cusp_radii(r, kappa, j_max + 2);
    let partial: f64 = r_seq[..=j_max].iter().map(|x| x.powf(kappa)).sum();
    let telescoping_residual = (partial - (r - r_seq[j_max + 1])).abs();
    let strip_contribs: Vec<f64> = (0..=j_max).into_par_iter().map(|j| strip_integral(r_seq[j], r_seq[j + 1], p, s, kappa)).collect();
    let fitted_c: Vec<f64> = strip_contribs
        .iter()
        .zip(&r_seq)
        .map(|(i, rj)| i / (2f64.powf(-kappa) * rj.powf(kappa - alpha)))
        .collect();
    let (lo, hi, mean) = fitted_c.iter().fold((f64::INFINITY, 0.0f64, 0.0), |(a, b, m), c| (a.min(*c), b.max(*c), m + c / fitted_c.len() as f64));
    let growth: Vec<(f64, f64)> = [r, 0.5 * r, 0.25 * r].iter().map(|&x| (x, strip_growth(x, p, s, kappa))).collect();
    let slope = fit_slope(&growth);

    let g = make_grid(&[-1.0, -1.0], &[1.0, 1.0], GRAD_NODES)?;
    let dom = DomainSpec::cusp_heart(kappa)?;
    let mut grad_sup: f64 = 0.0;
    let mut grad_identity_residual: f64 = 0.0;
    for k in 0..g.len() {
        let x = g.point(k);
        if !dom.contains(&x) {
            continue;
        }
        if let Some(gr) = Func::cusp_gradient(&x) {
            let g2 = gr[0] * gr[0] + gr[1] * gr[1];
            let theta = x[1].atan2(x[0]);
            grad_sup = grad_sup.max(g2);
            grad_identity_residual = grad_identity_residual.max((g2 - theta * theta - 1.0).abs());
        }
    }
    let control = CONTROL_CELLS.iter().map(|&c| Ok((c, cusp_control(p, s, c, cfg)?))).collect::<Result<Vec<_>>>()?;
    Ok(CuspStudy {
        p,
        s,
        kappa,
        alpha_con: alpha,
        r_seq,
        telescoping_residual,
        strip_contribs,
        fitted_c,
        c_spread: (hi - lo) / mean,
        growth,
        slope,
        expected_slope: 1.0 - alpha,
        grad_sup,
        grad_identity_residual,
        control,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallStudy {
    pub c_ratio: f64,
    pub s: f64,
    /// `a_k = C^{-k}`, `k = 1..=a_seq.len()`; balls beyond the last one change
    /// the seminorms by less than `C^{(2s-2) a_seq.len()}` relative.
    pub a_seq: Vec<f64>,
    pub f_norms_l2: Vec<f64>,
    /// `(n, m, ||f_n - f_m||_2)` for `n < m`.
    pub pair_dists: Vec<(usize, usize, f64)>,
    pub hs_seminorms: Vec<f64>,
    pub paper_bound: f64,
    /// Smallest `|x - y| / (|a_n - a_k| / 2)` over the quadrature nodes.
    pub separation_margin: f64,
}

/// Balls beyond `n_funcs` kept in the cross sums.
const EXTRA_BALLS: usize = 14;

/// Polar product rule on the ball of radius `rad` about the origin:
/// offsets and weights.
fn disc_rule(rad: f64) -> Vec<([f64; 2], f64)> {
    const RADIAL: usize = 6;
    const ANGLES: usize = 16;
    let rule = GaussRule::new(RADIAL);
    let mut out = Vec::new();
    for (r, wr) in rule.on(0.0, rad) {
        for k in 0..ANGLES {
            let phi = 2.0 * PI * k as f64 / ANGLES as f64;
            out.push(([r * phi.cos(), r * phi.sin()], wr * r * 2.0 * PI / ANGLES as f64));
        }
    }
    out
}

pub fn ball_family_study(c_ratio: f64, s: f64, n_funcs: usize, _cfg: &QuadConfig) -> Result<BallStudy> {
    if !(c_ratio > 10.0) {
        return invalid(format!("C > 10 fails: C = {c_ratio}"));
    }
    if !(s > 0.0 && s < 1.0) {
        return invalid(format!("s = {s} is outside (0, 1)"));
    }
    if n_funcs < 3 {
        return invalid("need at least 3 functions");
    }
    let total = n_funcs + EXTRA_BALLS;
    let a_seq: Vec<f64> = (1..=total).map(|k| c_ratio.powi(-(k as i32))).collect();
    DomainSpec::ball_union(a_seq.iter().map(|a| (vec![*a, 0.0], a * a)).collect())?;

    let height = |n: usize| PI.powf(-0.5) / (a_seq[n] * a_seq[n]);
    let f_norms_l2: Vec<f64> = (0..n_funcs).map(|n| (height(n).powi(2) * PI * a_seq[n].powi(4)).sqrt()).collect();
    let mut pair_dists = Vec::new();
    for n in 0..n_funcs {
        for m in n + 1..n_funcs {
            pair_dists.push((n + 1, m + 1, (f_norms_l2[n].powi(2) + f_norms_l2[m].powi(2)).sqrt()));
        }
    }
    let beta = 2.0 + 2.0 * s;
    let rules: Vec<Vec<([f64; 2], f64)>> = a_seq.iter().map(|a| disc_rule(a * a)).collect();
    let pair = |n: usize, k: usize| -> (f64, f64) {
        let dc = a_seq[k] - a_seq[n];
        let half = 0.5 * dc.abs();
        let mut acc = 0.0;
        let mut margin = f64::INFINITY;
        for (x, wx) in &rules[n] {
            for (y, wy) in &rules[k] {
                let d = (dc + y[0] - x[0]).hypot(y[1] - x[1]);
                margin = margin.min(d / half);
                acc += wx * wy * d.powf(-beta);
            }
        }
        (acc, margin)
    };
    let per_n: Vec<(f64, f64)> = (0..n_funcs)
        .into_par_iter()
        .map(|n| {
            let mut semi = 0.0;
            let mut margin = f64::INFINITY;
            for k in (0..total).filter(|&k| k != n) {
                let (j, m) = pair(n, k);
                semi += j;
                margin = margin.min(m);
            }
            (2.0 * height(n).powi(2) * semi, margin)
        })
        .collect();
    let q = c_ratio.powf(2.0 * s - 2.0);
    Ok(BallStudy {
        c_ratio,
        s,
        a_seq,
        f_norms_l2,
        pair_dists,
        hs_seminorms: per_n.iter().map(|x| x.0).collect(),
        paper_bound: 2f64.powf(6.0 + 4.0 * s) * PI * q / (1.0 - q),
        separation_margin: per_n.iter().map(|x| x.1).fold(f64::INFINITY, f64::min),
    })
}

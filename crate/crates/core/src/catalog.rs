//! Analytic test functions addressable by name, and sampling onto grids.

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::grid::{DomainSpec, Grid, GridFunction};

/// Anything that can be evaluated pointwise in `R^n`, `n` = `x.len()`.
pub trait Field: Sync {
    /// Value at `x`; `None` where the function is undefined.
    fn try_eval(&self, x: &[f64]) -> Option<f64>;

    fn eval(&self, x: &[f64]) -> f64 {
        self.try_eval(x).unwrap_or(0.0)
    }

    /// Upper bound for `|u|`.
    fn sup_norm(&self) -> f64;

    /// Radius of a ball about the origin outside which `u` is zero to double
    /// precision, if there is one.
    fn support_radius(&self) -> Option<f64>;

    /// `Δu(x)` where known in closed form.
    fn laplacian(&self, _x: &[f64]) -> Option<f64> {
        None
    }
}

/// Built-in analytic functions.
#[derive(Debug, Clone, PartialEq)]
pub enum Func {
    /// `exp(-|x|^2 / (2 sigma^2))`.
    Gaussian { sigma: f64 },
    /// Characteristic function of an interval or ball.
    Indicator(DomainSpec),
    /// `coef . x + offset`.
    Linear { coef: Vec<f64>, offset: f64 },
    /// `rho * theta` in polar coordinates, `theta` in `(-pi, pi)`; undefined
    /// on the negative `x1` axis.
    CuspRhoTheta,
    /// `pi^{-1/2} a_n^{-2}` on the ball of centre `(a_n, 0)` and radius
    /// `a_n^2`, `a_n = c_ratio^{-n}`.
    BallBumpN { c_ratio: f64, n: u32 },
    Constant(f64),
    /// `cos(k . x)`.
    Cosine { k: Vec<f64> },
    /// `exp(-1 / (1 - |x - c|^2 / r^2))` inside the ball, zero outside.
    Bump { center: Vec<f64>, radius: f64 },
}

/// Double-precision support radius of a unit Gaussian: `exp(-r^2/2) < 1e-17`.
const GAUSS_CUT: f64 = 8.9;

impl Func {
    /// Look up a catalog entry by name.
    ///
    /// | name | params |
    /// |---|---|
    /// | `gaussian` | `sigma` (default 1) |
    /// | `indicator` | `a b` (interval) or `cx cy r` (disc) |
    /// | `linear` | coefficients, then optional offset (one per `dim`) |
    /// | `cusp_rho_theta` | none |
    /// | `ball_bump_n` | `C n` |
    /// | `constant` | `c` |
    /// | `cos` | wave vector |
    /// | `bump` | centre coordinates then radius |
    pub fn parse(name: &str, params: &[f64], dim: usize) -> Result<Func> {
        let need = |k: usize| -> Result<()> {
            if params.len() < k {
                invalid(format!("{name} needs {k} parameters, got {}", params.len()))
            } else {
                Ok(())
            }
        };
        Ok(match name {
            "gaussian" => {
                let sigma = params.first().copied().unwrap_or(1.0);
                if !(sigma > 0.0) {
                    return invalid("gaussian width must be positive");
                }
                Func::Gaussian { sigma }
            }
            "indicator" => match dim {
                1 => {
                    need(2)?;
                    Func::Indicator(DomainSpec::interval(params[0], params[1])?)
                }
                _ => {
                    need(3)?;
                    Func::Indicator(DomainSpec::ball(&params[..2], params[2])?)
                }
            },
            "linear" => {
                let coef = if params.is_empty() { vec![1.0; 1] } else { params[..dim.min(params.len())].to_vec() };
                let offset = params.get(dim).copied().unwrap_or(0.0);
                Func::Linear { coef, offset }
            }
            "cusp_rho_theta" => Func::CuspRhoTheta,
            "ball_bump_n" => {
                need(2)?;
                if !(params[0] > 1.0) || params[1] < 1.0 {
                    return invalid("ball_bump_n needs C > 1 and n >= 1");
                }
                Func::BallBumpN { c_ratio: params[0], n: params[1] as u32 }
            }
            "constant" => Func::Constant(params.first().copied().unwrap_or(1.0)),
            "cos" => {
                need(dim)?;
                Func::Cosine { k: params[..dim].to_vec() }
            }
            "bump" => {
                need(dim + 1)?;
                if !(params[dim] > 0.0) {
                    return invalid("bump radius must be positive");
                }
                Func::Bump { center: params[..dim].to_vec(), radius: params[dim] }
            }
            other => return invalid(format!("unknown function '{other}'")),
        })
    }

    /// Gradient of `rho * theta`, i.e. `((x1 theta - x2)/rho, (x2 theta + x1)/rho)`.
    pub fn cusp_gradient(x: &[f64]) -> Option<[f64; 2]> {
        let rho = x[0].hypot(x[1]);
        if rho == 0.0 || (x[1] == 0.0 && x[0] < 0.0) {
            return None;
        }
        let theta = x[1].atan2(x[0]);
        Some([(x[0] * theta - x[1]) / rho, (x[1] * theta + x[0]) / rho])
    }

    /// Sample onto a grid; nodes outside `domain` or where undefined are masked.
    pub fn sample(&self, grid: &Grid, domain: Option<&DomainSpec>) -> GridFunction {
        sample(self, grid, domain)
    }
}

fn bump_profile(t2: f64) -> f64 {
    if t2 < 1.0 {
        (-1.0 / (1.0 - t2)).exp()
    } else {
        0.0
    }
}

impl Field for Func {
    fn try_eval(&self, x: &[f64]) -> Option<f64> {
        Some(match self {
            Func::Gaussian { sigma } => {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                (-0.5 * r2 / (sigma * sigma)).exp()
            }
            Func::Indicator(d) => {
                if d.contains(x) {
                    1.0
                } else {
                    0.0
                }
            }
            Func::Linear { coef, offset } => coef.iter().zip(x).map(|(c, v)| c * v).sum::<f64>() + offset,
            Func::CuspRhoTheta => {
                if x[1] == 0.0 && x[0] < 0.0 {
                    return None;
                }
                x[0].hypot(x[1]) * x[1].atan2(x[0])
            }
            Func::BallBumpN { c_ratio, n } => {
                let a = c_ratio.powi(-(*n as i32));
                let d2 = (x[0] - a).powi(2) + x.get(1).map_or(0.0, |y| y * y);
                if d2 < a.powi(4) {
                    1.0 / (PI.sqrt() * a * a)
                } else {
                    0.0
                }
            }
            Func::Constant(c) => *c,
            Func::Cosine { k } => k.iter().zip(x).map(|(k, v)| k * v).sum::<f64>().cos(),
            Func::Bump { center, radius } => {
                let t2: f64 = center.iter().zip(x).map(|(c, v)| (v - c) * (v - c)).sum::<f64>() / (radius * radius);
                bump_profile(t2)
            }
        })
    }

    fn laplacian(&self, x: &[f64]) -> Option<f64> {
        match self {
            Func::Gaussian { sigma } => {
                let s2 = sigma * sigma;
                let r2: f64 = x.iter().map(|v| v * v).sum();
                Some((r2 / (s2 * s2) - x.len() as f64 / s2) * (-0.5 * r2 / s2).exp())
            }
            Func::Linear { .. } | Func::Constant(_) => Some(0.0),
            Func::Cosine { k } => {
                let k2: f64 = k.iter().map(|v| v * v).sum();
                Some(-k2 * self.eval(x))
            }
            _ => None,
        }
    }

    fn sup_norm(&self) -> f64 {
        match self {
            Func::Gaussian { .. } | Func::Indicator(_) | Func::Cosine { .. } => 1.0,
            Func::Bump { .. } => (-1.0f64).exp(),
            Func::Constant(c) => c.abs(),
            Func::BallBumpN { c_ratio, n } => c_ratio.powi(2 * *n as i32) / PI.sqrt(),
            Func::Linear { .. } | Func::CuspRhoTheta => f64::INFINITY,
        }
    }

    fn support_radius(&self) -> Option<f64> {
        match self {
            Func::Gaussian { sigma } => Some(GAUSS_CUT * sigma),
            Func::Indicator(d) => d.bounding_box().map(|(lo, hi)| {
                lo.iter().chain(hi.iter()).map(|v| v.abs()).fold(0.0, f64::max) * (lo.len() as f64).sqrt()
            }),
            Func::BallBumpN { c_ratio, n } => {
                let a = c_ratio.powi(-(*n as i32));
                Some(a + a * a)
            }
            Func::Bump { center, radius } => Some(center.iter().map(|c| c * c).sum::<f64>().sqrt() + radius),
            _ => None,
        }
    }
}

/// Sample `f` at every node; nodes where `f` is undefined, or outside
/// `domain`, are masked out and hold 0.
pub fn sample(f: &dyn Field, grid: &Grid, domain: Option<&DomainSpec>) -> GridFunction {
    let dim = grid.dim();
    let mut values = Vec::with_capacity(grid.len());
    let mut mask = Vec::with_capacity(grid.len());
    let mut any_masked = false;
    for k in 0..grid.len() {
        let p = grid.point(k);
        let x = &p[..dim];
        let inside = domain.is_none_or(|d| d.contains(x));
        match f.try_eval(x) {
            Some(v) if inside => {
                values.push(v);
                mask.push(true);
            }
            _ => {
                values.push(0.0);
                mask.push(false);
                any_masked = true;
            }
        }
    }
    GridFunction { grid: grid.clone(), values, mask: any_masked.then_some(mask) }
}

/// Cubic-convolution interpolant of a grid function, zero outside the grid box.
pub struct Interpolated<'a> {
    u: &'a GridFunction,
}

impl<'a> Interpolated<'a> {
    pub fn new(u: &'a GridFunction) -> Self {
        Interpolated { u }
    }

    fn node(&self, idx: [isize; 2]) -> f64 {
        let g = &self.u.grid;
        for a in 0..g.dim() {
            if idx[a] < 0 || idx[a] >= g.count(a) as isize {
                return 0.0;
            }
        }
        let k = g.flat([idx[0] as usize, idx[1].max(0) as usize]);
        if self.u.active(k) {
            self.u.values[k]
        } else {
            0.0
        }
    }
}

// Keys kernel, a = -1/2.
fn keys(t: f64) -> f64 {
    let t = t.abs();
    if t < 1.0 {
        (1.5 * t - 2.5) * t * t + 1.0
    } else if t < 2.0 {
        ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0
    } else {
        0.0
    }
}

impl Field for Interpolated<'_> {
    fn try_eval(&self, x: &[f64]) -> Option<f64> {
        let g = &self.u.grid;
        let dim = g.dim();
        let mut base = [0isize; 2];
        let mut frac = [0.0; 2];
        for a in 0..dim {
            let t = (x[a] - g.lo()[a]) / g.spacing(a);
            if t < -1.0 || t > g.count(a) as f64 {
                return Some(0.0);
            }
            base[a] = t.floor() as isize;
            frac[a] = t - t.floor();
        }
        let mut v = 0.0;
        if dim == 1 {
            for di in -1..=2 {
                v += keys(frac[0] - di as f64) * self.node([base[0] + di, 0]);
            }
        } else {
            for di in -1..=2 {
                let wi = keys(frac[0] - di as f64);
                for dj in -1..=2 {
                    v += wi * keys(frac[1] - dj as f64) * self.node([base[0] + di, base[1] + dj]);
                }
            }
        }
        Some(v)
    }

    fn sup_norm(&self) -> f64 {
        // the Keys kernel overshoots by at most 1.25 in each direction
        self.u.max_abs() * 1.25f64.powi(self.u.grid.dim() as i32)
    }

    fn support_radius(&self) -> Option<f64> {
        let g = &self.u.grid;
        let r2: f64 = (0..g.dim())
            .map(|a| {
                let m = g.lo()[a].abs().max(g.hi()[a].abs()) + 2.0 * g.spacing(a);
                m * m
            })
            .sum();
        Some(r2.sqrt())
    }
}

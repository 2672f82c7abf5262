//! Sphere measures and the normalization constant `C(n, s)` of the fractional
//! Laplacian, with its pieces `A(n, s)`, `B(s)` and the radial integrals
//! `E_n(theta)`.
//!
//! ```
//! use fracsob::constants::{b_const, c_const, sphere_measure};
//! use std::f64::consts::PI;
//! assert!((sphere_measure(2).unwrap() - 4.0 * PI).abs() < 1e-12);
//! assert!((b_const(0.5).unwrap() - PI / 4.0).abs() < 1e-10);
//! assert!((c_const(1, 0.5).unwrap() - 1.0 / PI).abs() < 1e-10);
//! ```

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::quad::integrate;

const ABS_TOL: f64 = 1e-15;
const REL_TOL: f64 = 1e-13;

/// `omega_d`, the surface measure of the unit sphere `S^d` in `R^{d+1}`.
pub fn sphere_measure(d: i64) -> Result<f64> {
    if d < 0 {
        return invalid(format!("sphere dimension d = {d} is negative"));
    }
    // omega_d = 2 pi / (d - 1) * omega_{d-2}
    let mut w = if d % 2 == 0 { 2.0 } else { 2.0 * PI };
    let mut k = if d % 2 == 0 { 0 } else { 1 };
    while k < d {
        k += 2;
        w *= 2.0 * PI / (k - 1) as f64;
    }
    Ok(w)
}

/// Volume of the unit ball in `R^n`, `omega_{n-1} / n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    if n == 0 {
        return 1.0;
    }
    sphere_measure(n as i64 - 1).unwrap() / n as f64
}

/// A unit sphere together with the volume of the ball it bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereMeasure {
    pub d: usize,
    pub omega_d: f64,
    /// Volume of the unit ball of `R^{d+1}`.
    pub varpi: f64,
}

impl SphereMeasure {
    pub fn new(d: usize) -> Self {
        let omega_d = sphere_measure(d as i64).unwrap();
        SphereMeasure { d, omega_d, varpi: omega_d / (d + 1) as f64 }
    }
}

/// `E_n(theta) = int_0^inf rho^{n-2} (1 + rho^2)^{-theta/2} d rho`, finite
/// exactly when `theta > n - 1`.
pub fn e_integral(n: usize, theta: f64) -> Result<f64> {
    if n < 2 {
        return invalid("E_n is defined for n >= 2");
    }
    let nf = n as f64;
    if !(theta > nf - 1.0) {
        return Err(Error::DivergentIntegral(format!(
            "E_{n}({theta}) needs theta > n - 1 = {}",
            nf - 1.0
        )));
    }
    let head = integrate(|r: f64| r.powi(n as i32 - 2) * (1.0 + r * r).powf(-0.5 * theta), 0.0, 1.0, ABS_TOL, REL_TOL)?;
    // rho = 1/t on the tail gives t^{beta-1} (1 + t^2)^{-theta/2}, beta = theta - n + 1;
    // then t = w^{1/beta} removes the endpoint power.
    let beta = theta - nf + 1.0;
    let tail = integrate(
        |w: f64| {
            let t = w.powf(1.0 / beta);
            (1.0 + t * t).powf(-0.5 * theta) / beta
        },
        0.0,
        1.0,
        ABS_TOL,
        REL_TOL,
    )?;
    Ok(head.value + tail.value)
}

/// `A(n, s)`: the integral of `(1 + |eta|^2)^{-(n+2s)/2}` over `R^{n-1}`.
pub fn a_const(n: usize, s: f64) -> Result<f64> {
    check_ns(n, s)?;
    if n == 1 {
        return Ok(1.0);
    }
    Ok(sphere_measure(n as i64 - 2)? * e_integral(n, n as f64 + 2.0 * s)?)
}

/// `K(s) = int_0^inf (1 - cos t) t^{-1-2s} dt`.
fn half_line_cos_integral(s: f64) -> Result<f64> {
    // (0, 1): termwise from the cosine series
    let mut head = 0.0;
    let mut fact = 1.0;
    for k in 1..30 {
        fact *= (2 * k - 1) as f64 * (2 * k) as f64;
        let term = 1.0 / (fact * (2.0 * k as f64 - 2.0 * s));
        if k % 2 == 1 {
            head += term;
        } else {
            head -= term;
        }
        if term < 1e-18 * head.abs() {
            break;
        }
    }
    // (1, inf): the mean part 1/(2s) exactly, minus the oscillating cosine part
    let a = 1.0 + 2.0 * s;
    let two_pi = 2.0 * PI;
    let f = |t: f64| t.cos() * t.powf(-a);
    let mut osc = integrate(f, 1.0, two_pi, ABS_TOL, REL_TOL)?.value;
    const WINDOWS: usize = 64;
    for k in 1..WINDOWS {
        let lo = two_pi * k as f64;
        osc += integrate(f, lo, lo + two_pi, 1e-18, REL_TOL)?.value;
    }
    // tail beyond T = 2 pi WINDOWS by repeated integration by parts
    let t = two_pi * WINDOWS as f64;
    let mut coef = a;
    let mut pow = a + 1.0;
    let mut tail = 0.0;
    for j in 0..5 {
        let term = coef * t.powf(-pow);
        tail += if j % 2 == 0 { term } else { -term };
        coef *= pow * (pow + 1.0);
        pow += 2.0;
    }
    Ok(head + 1.0 / (2.0 * s) - osc - tail)
}

/// `B(s) = s (1 - s) int_R (1 - cos t) / |t|^{1+2s} dt`.
pub fn b_const(s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return invalid(format!("s = {s} is outside (0, 1)"));
    }
    Ok(2.0 * s * (1.0 - s) * half_line_cos_integral(s)?)
}

/// `int_R (1 - cos(a t)) / |t|^{1+2s} dt` for `a >= 0`.
pub(crate) fn cos_symbol_1d(a: f64, s: f64) -> Result<f64> {
    if a == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * a.abs().powf(2.0 * s) * half_line_cos_integral(s)?)
}

/// `C(n, s) = s (1 - s) / (A(n, s) B(s))`.
pub fn c_const(n: usize, s: f64) -> Result<f64> {
    check_ns(n, s)?;
    Ok(s * (1.0 - s) / (a_const(n, s)? * b_const(s)?))
}

/// Limit of `C(n, s) / (s (1 - s))` as `s -> 1`: `4 n / omega_{n-1}`.
pub fn c_ratio_limit_at_one(n: usize) -> f64 {
    4.0 * n as f64 / sphere_measure(n as i64 - 1).unwrap()
}

/// Limit of `C(n, s) / (s (1 - s))` as `s -> 0`: `2 / omega_{n-1}`.
pub fn c_ratio_limit_at_zero(n: usize) -> f64 {
    2.0 / sphere_measure(n as i64 - 1).unwrap()
}

/// Gradient-energy constant of the `s -> 1` seminorm limit for `p = 2`:
/// `omega_{n-1} / (2n)`.
pub fn bbm_constant(n: usize) -> f64 {
    sphere_measure(n as i64 - 1).unwrap() / (2.0 * n as f64)
}

/// `L^p`-norm constant of the `s -> 0` seminorm limit for `p = 2`:
/// `omega_{n-1}`.
pub fn ms_constant(n: usize) -> f64 {
    sphere_measure(n as i64 - 1).unwrap()
}

/// Closed form of `I_n^(1) = E_n(n + 2)`.
pub fn i1_closed(n: usize) -> f64 {
    sphere_measure(n as i64 - 1).unwrap() / (2.0 * n as f64 * sphere_measure(n as i64 - 2).unwrap())
}

/// Closed form of `I_n^(0) = E_n(n)`.
pub fn i0_closed(n: usize) -> f64 {
    sphere_measure(n as i64 - 1).unwrap() / (2.0 * sphere_measure(n as i64 - 2).unwrap())
}

/// Everything known about `C(n, s)` at once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantBundle {
    pub n: usize,
    pub s: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// `E_n(n)` and `E_n(n+2)` by quadrature; `None` for `n = 1`.
    pub i0: Option<f64>,
    pub i1: Option<f64>,
}

impl ConstantBundle {
    pub fn new(n: usize, s: f64) -> Result<Self> {
        let a = a_const(n, s)?;
        let b = b_const(s)?;
        let (i0, i1) = if n >= 2 {
            (Some(e_integral(n, n as f64)?), Some(e_integral(n, n as f64 + 2.0)?))
        } else {
            (None, None)
        };
        Ok(ConstantBundle { n, s, a, b, c: s * (1.0 - s) / (a * b), i0, i1 })
    }

    pub fn e(&self, theta: f64) -> Result<f64> {
        e_integral(self.n, theta)
    }
}

fn check_ns(n: usize, s: f64) -> Result<()> {
    if n < 1 {
        return invalid("n must be at least 1");
    }
    if !(s > 0.0 && s < 1.0) {
        return invalid(format!("s = {s} is outside (0, 1)"));
    }
    Ok(())
}

//! Exact and asymptotic integrals of `|x - y|^a` over pairs of grid cells.
//!
//! A pair of cells with centre offset `d` contributes
//! `int T(z) |d + z|^a dz`, `T` the tent obtained by convolving two cell
//! indicators. Near the diagonal this is done in polar coordinates about the
//! singular point with the radial integral in closed form; far away a
//! second-order Taylor expansion of `|w|^a` suffices.

use crate::quad::GaussRule;

/// Offsets with `max(|di|, |dj|)` at or below this use the exact polar moment.
pub(crate) const NEAR_2D: usize = 24;
const NEAR_1D: usize = 32;

/// `int_{[0,h]} int_{[kh,(k+1)h]} |x - y|^a dy dx` for `a > -2` (`a > -1`
/// when `k = 0`).
pub fn moment_1d(k: usize, h: f64, a: f64) -> f64 {
    if k == 0 {
        return 2.0 * h.powf(a + 2.0) / ((a + 1.0) * (a + 2.0));
    }
    let kf = k as f64;
    if k > NEAR_1D {
        let k2 = kf * kf;
        let c1 = a * (a - 1.0) / 12.0;
        let c2 = a * (a - 1.0) * (a - 2.0) * (a - 3.0) / 360.0;
        return h * h * (kf * h).powf(a) * (1.0 + c1 / k2 + c2 / (k2 * k2));
    }
    // second difference of m^{a+2}, written through expm1 so that a near -1
    // keeps its digits: m^{a+2} = m + m * expm1((a+1) ln m)
    let e = |m: f64| if m == 0.0 { 0.0 } else { m * ((a + 1.0) * m.ln()).exp_m1() };
    let bracket = e(kf + 1.0) - 2.0 * e(kf) + e(kf - 1.0);
    h.powf(a + 2.0) * bracket / ((a + 1.0) * (a + 2.0))
}

/// Kernel integral of a cell against the half-lines beyond `[lo, hi]`:
/// `int_{cell} int_{R \ [lo,hi]} |x - y|^{-1-t} dy dx` with the cell
/// `[c - h/2, c + h/2]` inside `[lo, hi]`. Infinite when the cell touches the
/// boundary and `t >= 1`.
pub fn exterior_1d(c: f64, h: f64, lo: f64, hi: f64, t: f64) -> f64 {
    let a = c - 0.5 * h;
    let b = c + 0.5 * h;
    // int_a^b (x - lo)^{-t} dx / t, and likewise for hi
    let side = |u0: f64, u1: f64| -> f64 {
        if (t - 1.0).abs() < 1e-12 {
            if u0 <= 0.0 {
                f64::INFINITY
            } else {
                (u1 / u0).ln()
            }
        } else if u0 <= 0.0 && t > 1.0 {
            f64::INFINITY
        } else {
            (u1.max(0.0).powf(1.0 - t) - u0.max(0.0).powf(1.0 - t)) / (1.0 - t)
        }
    };
    (side(a - lo, b - lo) + side(hi - b, hi - a)) / t
}

/// Polynomial in `(w1, w2)` up to degree 4 in each variable.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Poly2 {
    c: [[f64; 5]; 5],
}

impl Poly2 {
    /// `(alpha1 + sigma1 w1)(alpha2 + sigma2 w2)`
    fn bilinear(alpha1: f64, sigma1: f64, alpha2: f64, sigma2: f64) -> Self {
        let mut p = Poly2::default();
        p.c[0][0] = alpha1 * alpha2;
        p.c[1][0] = sigma1 * alpha2;
        p.c[0][1] = alpha1 * sigma2;
        p.c[1][1] = sigma1 * sigma2;
        p
    }

    /// Multiply by `w1^i w2^j`.
    fn shift(&self, i: usize, j: usize) -> Self {
        let mut p = Poly2::default();
        for k in 0..5 - i {
            for l in 0..5 - j {
                p.c[k + i][l + j] = self.c[k][l];
            }
        }
        p
    }
}

/// `int_{rect} P(w) |w|^b dw` for an axis-aligned rectangle, by signed
/// triangles from the origin and closed-form radial integrals.
pub(crate) fn rect_moment(x0: f64, x1: f64, y0: f64, y1: f64, poly: &Poly2, b: f64, rule: &GaussRule) -> f64 {
    let verts = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)];
    let mut total = 0.0;
    for e in 0..4 {
        let p = verts[e];
        let q = verts[(e + 1) % 4];
        total += triangle_moment(p, q, poly, b, rule);
    }
    total
}

fn triangle_moment(p: (f64, f64), q: (f64, f64), poly: &Poly2, b: f64, rule: &GaussRule) -> f64 {
    let (ex, ey) = (q.0 - p.0, q.1 - p.1);
    let len = ex.hypot(ey);
    // signed distance from the origin to the edge line
    let dist = (p.0 * ey - p.1 * ex) / len;
    let scale = p.0.hypot(p.1).max(q.0.hypot(q.1));
    if dist.abs() <= 1e-14 * scale {
        return 0.0;
    }
    let d = dist.abs();
    // unit normal towards the line and the tangent a quarter turn ahead of it
    let (nx, ny) = (ey / len * dist.signum(), -ex / len * dist.signum());
    let (tx, ty) = (-ny, nx);
    // line positions in units of d; the angle is atan(u), so the counter-clockwise
    // sweep direction and the triangle orientation agree
    let ua = (p.0 * tx + p.1 * ty) / d;
    let ub = (q.0 * tx + q.1 * ty) / d;
    let f = |u: f64| {
        let (wx, wy) = (d * (nx + u * tx), d * (ny + u * ty));
        let r = d * (1.0 + u * u).sqrt();
        radial(poly, wx / r, wy / r, r, b) / (1.0 + u * u)
    };
    signed_geometric(&f, ua, ub, rule)
}

/// `int_{ua}^{ub} f` with panels growing geometrically away from zero.
fn signed_geometric<F: Fn(f64) -> f64>(f: &F, ua: f64, ub: f64, rule: &GaussRule) -> f64 {
    let from_zero = |u: f64| -> f64 {
        let sgn = u.signum();
        let end = u.abs();
        let mut acc = 0.0;
        let mut lo = 0.0;
        let mut hi = end.min(1.0);
        while lo < end {
            acc += rule.integrate(|v| f(sgn * v), lo, hi);
            lo = hi;
            hi = (2.0 * hi).min(end);
        }
        sgn * acc
    };
    from_zero(ub) - from_zero(ua)
}

/// `int_0^R P(r c, r s) r^{b+1} dr` term by term.
fn radial(poly: &Poly2, c: f64, s: f64, r: f64, b: f64) -> f64 {
    let mut acc = 0.0;
    let lr = r.ln();
    for k in 0..5 {
        for l in 0..5 - k {
            let coef = poly.c[k][l];
            if coef == 0.0 {
                continue;
            }
            let m = (k + l) as f64 + b + 2.0;
            acc += coef * c.powi(k as i32) * s.powi(l as i32) * (m * lr).exp() / m;
        }
    }
    acc
}

/// Tent convolution pieces for offset `d`: four rectangles in `w = d + z`
/// with the bilinear tent weight on each.
fn tent_pieces(d: (f64, f64), h: (f64, f64)) -> [((f64, f64, f64, f64), Poly2); 4] {
    let mut out = [((0.0, 0.0, 0.0, 0.0), Poly2::default()); 4];
    let mut idx = 0;
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            // z1 in [0, h1] for s1 = 1, where h1 - |z1| = (h1 + d1) - w1
            let (x0, x1) = if s1 > 0.0 { (d.0, d.0 + h.0) } else { (d.0 - h.0, d.0) };
            let (y0, y1) = if s2 > 0.0 { (d.1, d.1 + h.1) } else { (d.1 - h.1, d.1) };
            let a1 = h.0 + s1 * d.0;
            let a2 = h.1 + s2 * d.1;
            out[idx] = ((x0, x1, y0, y1), Poly2::bilinear(a1, -s1, a2, -s2));
            idx += 1;
        }
    }
    out
}

/// Cell-pair moment in 2-D: `int T(z) |d + z|^a dz` with offset `d = (di h1, dj h2)`.
pub fn moment_2d(di: usize, dj: usize, h: (f64, f64), a: f64, rule: &GaussRule) -> f64 {
    let d = (di as f64 * h.0, dj as f64 * h.1);
    if di.max(dj) > NEAR_2D {
        let r2 = d.0 * d.0 + d.1 * d.1;
        let g = r2.powf(0.5 * a);
        let corr = (a * (h.0 * h.0 + h.1 * h.1) / r2
            + a * (a - 2.0) * (h.0 * h.0 * d.0 * d.0 + h.1 * h.1 * d.1 * d.1) / (r2 * r2))
            / 12.0;
        return h.0 * h.0 * h.1 * h.1 * g * (1.0 + corr);
    }
    tent_pieces(d, h)
        .iter()
        .map(|((x0, x1, y0, y1), p)| rect_moment(*x0, *x1, *y0, *y1, p, a, rule))
        .sum()
}

/// Tensor moment `int T(z) w_i w_j |w|^{a-2} dz`, `w = d + z`, as
/// `[m11, m12, m22]`.
pub fn tensor_moment_2d(di: usize, dj: usize, h: (f64, f64), a: f64, rule: &GaussRule) -> [f64; 3] {
    let d = (di as f64 * h.0, dj as f64 * h.1);
    let mut m = [0.0; 3];
    for ((x0, x1, y0, y1), p) in tent_pieces(d, h).iter() {
        m[0] += rect_moment(*x0, *x1, *y0, *y1, &p.shift(2, 0), a - 2.0, rule);
        m[1] += rect_moment(*x0, *x1, *y0, *y1, &p.shift(1, 1), a - 2.0, rule);
        m[2] += rect_moment(*x0, *x1, *y0, *y1, &p.shift(0, 2), a - 2.0, rule);
    }
    m
}

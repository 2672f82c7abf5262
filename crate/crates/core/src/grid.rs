//! Parameters, grids, sampled functions and domains shared by every module.

use crate::error::{invalid, Result};

/// The triple `(n, s, p)` with its derived exponents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracParams {
    n: usize,
    s: f64,
    p: f64,
}

impl FracParams {
    pub fn new(n: usize, s: f64, p: f64) -> Result<Self> {
        if n < 1 {
            return invalid("dimension n must be at least 1");
        }
        if !(s > 0.0 && s < 1.0) {
            return invalid(format!("s = {s} is outside (0, 1)"));
        }
        if !(p >= 1.0 && p.is_finite()) {
            return invalid(format!("p = {p} must be finite and at least 1"));
        }
        Ok(FracParams { n, s, p })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn s(&self) -> f64 {
        self.s
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn sp(&self) -> f64 {
        self.s * self.p
    }

    /// `n + s p`, the exponent of the Gagliardo kernel.
    pub fn kernel_exp(&self) -> f64 {
        self.n as f64 + self.sp()
    }

    /// Critical exponent `n p / (n - s p)`, only when `s p < n`.
    pub fn p_star(&self) -> Option<f64> {
        let n = self.n as f64;
        (self.sp() < n).then(|| n * self.p / (n - self.sp()))
    }

    /// Hölder exponent `(s p - n) / p`, only when `s p > n`.
    pub fn alpha(&self) -> Option<f64> {
        let n = self.n as f64;
        (self.sp() > n).then(|| (self.sp() - n) / self.p)
    }
}

/// Uniform tensor grid in dimension 1 or 2.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    lo: Vec<f64>,
    hi: Vec<f64>,
    counts: Vec<usize>,
}

/// Endpoint-inclusive uniform grid with `n_pts` points per axis.
pub fn make_grid(lo: &[f64], hi: &[f64], n_pts: usize) -> Result<Grid> {
    Grid::new(lo, hi, &vec![n_pts; lo.len()])
}

impl Grid {
    /// Endpoint-inclusive grid with a point count per axis.
    pub fn new(lo: &[f64], hi: &[f64], counts: &[usize]) -> Result<Grid> {
        let dim = lo.len();
        if !(1..=2).contains(&dim) || hi.len() != dim || counts.len() != dim {
            return invalid("grids are 1- or 2-dimensional with matching corner lengths");
        }
        for a in 0..dim {
            if !(lo[a] < hi[a]) || !lo[a].is_finite() || !hi[a].is_finite() {
                return invalid(format!("degenerate box on axis {a}: [{}, {}]", lo[a], hi[a]));
            }
            if counts[a] < 2 {
                return invalid(format!("need at least 2 points per axis, got {}", counts[a]));
            }
        }
        Ok(Grid { lo: lo.to_vec(), hi: hi.to_vec(), counts: counts.to_vec() })
    }

    /// Grid of cell midpoints for `cells[a]` equal cells tiling `[lo, hi]`.
    ///
    /// Integrals treat every node as the centre of a cell, so this is the
    /// constructor to use when the cells must tile a domain exactly.
    pub fn cells(lo: &[f64], hi: &[f64], cells: &[usize]) -> Result<Grid> {
        if lo.len() != hi.len() || cells.len() != lo.len() {
            return invalid("corner and count lengths differ");
        }
        let mut l = Vec::new();
        let mut h = Vec::new();
        for a in 0..lo.len() {
            if cells[a] < 2 {
                return invalid("need at least 2 cells per axis");
            }
            let dx = (hi[a] - lo[a]) / cells[a] as f64;
            l.push(lo[a] + 0.5 * dx);
            h.push(hi[a] - 0.5 * dx);
        }
        Grid::new(&l, &h, cells)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }
    pub fn lo(&self) -> &[f64] {
        &self.lo
    }
    pub fn hi(&self) -> &[f64] {
        &self.hi
    }
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }
    pub fn count(&self, axis: usize) -> usize {
        self.counts[axis]
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        (self.hi[axis] - self.lo[axis]) / (self.counts[axis] - 1) as f64
    }

    /// Volume of the cell owned by one node.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).product()
    }

    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        if i + 1 == self.counts[axis] {
            self.hi[axis]
        } else {
            self.lo[axis] + i as f64 * self.spacing(axis)
        }
    }

    /// Flat index; in 2-D axis 1 varies fastest.
    pub fn flat(&self, idx: [usize; 2]) -> usize {
        if self.dim() == 1 {
            idx[0]
        } else {
            idx[0] * self.counts[1] + idx[1]
        }
    }

    pub fn unflat(&self, k: usize) -> [usize; 2] {
        if self.dim() == 1 {
            [k, 0]
        } else {
            [k / self.counts[1], k % self.counts[1]]
        }
    }

    /// Coordinates of node `k` (second entry 0 in 1-D).
    pub fn point(&self, k: usize) -> [f64; 2] {
        let [i, j] = self.unflat(k);
        if self.dim() == 1 {
            [self.coord(0, i), 0.0]
        } else {
            [self.coord(0, i), self.coord(1, j)]
        }
    }

    /// Corners of the box tiled by the node cells.
    pub fn cell_box(&self) -> (Vec<f64>, Vec<f64>) {
        let lo = (0..self.dim()).map(|a| self.lo[a] - 0.5 * self.spacing(a)).collect();
        let hi = (0..self.dim()).map(|a| self.hi[a] + 0.5 * self.spacing(a)).collect();
        (lo, hi)
    }

    /// Same node layout scaled by `lambda` about the origin.
    pub fn dilate(&self, lambda: f64) -> Grid {
        Grid {
            lo: self.lo.iter().map(|x| x * lambda).collect(),
            hi: self.hi.iter().map(|x| x * lambda).collect(),
            counts: self.counts.clone(),
        }
    }
}

/// Real samples on a grid, optionally restricted by a mask.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub mask: Option<Vec<bool>>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>, mask: Option<Vec<bool>>) -> Result<Self> {
        if values.len() != grid.len() {
            return invalid(format!("{} values for a grid of {} nodes", values.len(), grid.len()));
        }
        if let Some(m) = &mask {
            if m.len() != grid.len() {
                return invalid("mask length differs from grid size");
            }
        }
        Ok(GridFunction { grid, values, mask })
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 2]) -> f64) -> Self {
        let values = (0..grid.len()).map(|k| f(grid.point(k))).collect();
        GridFunction { grid, values, mask: None }
    }

    pub fn zeros(grid: Grid) -> Self {
        let n = grid.len();
        GridFunction { grid, values: vec![0.0; n], mask: None }
    }

    pub fn active(&self, k: usize) -> bool {
        self.mask.as_ref().is_none_or(|m| m[k])
    }

    /// Indices of unmasked nodes, ascending.
    pub fn active_indices(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&k| self.active(k)).collect()
    }

    /// `sum |u|^p` times the cell volume over unmasked nodes.
    pub fn lp_norm_p(&self, p: f64) -> f64 {
        let dv = self.grid.cell_volume();
        let s: f64 = (0..self.values.len())
            .filter(|&k| self.active(k))
            .map(|k| self.values[k].abs().powf(p))
            .sum();
        s * dv
    }

    pub fn max_abs(&self) -> f64 {
        (0..self.values.len())
            .filter(|&k| self.active(k))
            .map(|k| self.values[k].abs())
            .fold(0.0, f64::max)
    }

    /// Restrict further to the nodes inside `domain`.
    pub fn with_domain(mut self, domain: &DomainSpec) -> Self {
        let m: Vec<bool> = (0..self.values.len())
            .map(|k| self.active(k) && domain.contains(&self.grid.point(k)[..self.grid.dim()]))
            .collect();
        self.mask = Some(m);
        self
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        GridFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            mask: self.mask.clone(),
        }
    }
}

/// A region that can be discretized by masking grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    Interval { a: f64, b: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    /// Pairwise disjoint balls with a common dimension.
    BallUnion { balls: Vec<(Vec<f64>, f64)> },
    /// `(R^2 \ C) ∩ B_1` for the cusp `C = {x1 <= 0, |x2| <= |x1|^kappa}`.
    CuspHeart { kappa: f64 },
    /// All of `R^dim`; samples vanish outside their grid box.
    WholeSpace { dim: usize },
}

impl DomainSpec {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if !(a < b) {
            return invalid(format!("empty interval ({a}, {b})"));
        }
        Ok(DomainSpec::Interval { a, b })
    }

    pub fn boxed(lo: &[f64], hi: &[f64]) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() || lo.iter().zip(hi).any(|(l, h)| !(l < h)) {
            return invalid("degenerate box");
        }
        Ok(DomainSpec::Box { lo: lo.to_vec(), hi: hi.to_vec() })
    }

    pub fn ball(center: &[f64], radius: f64) -> Result<Self> {
        if !(radius > 0.0) || center.is_empty() {
            return invalid("ball needs a positive radius");
        }
        Ok(DomainSpec::Ball { center: center.to_vec(), radius })
    }

    pub fn ball_union(balls: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        if balls.is_empty() {
            return invalid("empty ball union");
        }
        let d = balls[0].0.len();
        for (i, (ci, ri)) in balls.iter().enumerate() {
            if ci.len() != d || !(*ri > 0.0) {
                return invalid("ball union: mixed dimensions or nonpositive radius");
            }
            for (cj, rj) in &balls[i + 1..] {
                if dist(ci, cj) <= ri + rj {
                    return invalid(format!("balls at {ci:?} and {cj:?} overlap"));
                }
            }
        }
        Ok(DomainSpec::BallUnion { balls })
    }

    pub fn cusp_heart(kappa: f64) -> Result<Self> {
        if !(kappa > 1.0) {
            return invalid(format!("cusp exponent kappa = {kappa} must exceed 1"));
        }
        Ok(DomainSpec::CuspHeart { kappa })
    }

    pub fn whole(dim: usize) -> Self {
        DomainSpec::WholeSpace { dim }
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::Interval { .. } => 1,
            DomainSpec::Box { lo, .. } => lo.len(),
            DomainSpec::Ball { center, .. } => center.len(),
            DomainSpec::BallUnion { balls } => balls[0].0.len(),
            DomainSpec::CuspHeart { .. } => 2,
            DomainSpec::WholeSpace { dim } => *dim,
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, DomainSpec::WholeSpace { .. })
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            DomainSpec::Interval { a, b } => x[0] > *a && x[0] < *b,
            DomainSpec::Box { lo, hi } => (0..lo.len()).all(|i| x[i] > lo[i] && x[i] < hi[i]),
            DomainSpec::Ball { center, radius } => dist(x, center) < *radius,
            DomainSpec::BallUnion { balls } => balls.iter().any(|(c, r)| dist(x, c) < *r),
            DomainSpec::CuspHeart { kappa } => {
                let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                r < 1.0 && !(x[0] <= 0.0 && x[1].abs() <= x[0].abs().powf(*kappa))
            }
            DomainSpec::WholeSpace { .. } => true,
        }
    }

    /// Lebesgue measure (infinite for the whole space).
    pub fn measure(&self) -> f64 {
        match self {
            DomainSpec::Interval { a, b } => b - a,
            DomainSpec::Box { lo, hi } => lo.iter().zip(hi).map(|(l, h)| h - l).product(),
            DomainSpec::Ball { center, radius } => unit_ball_volume(center.len()) * radius.powi(center.len() as i32),
            DomainSpec::BallUnion { balls } => {
                let d = balls[0].0.len();
                balls.iter().map(|(_, r)| unit_ball_volume(d) * r.powi(d as i32)).sum()
            }
            DomainSpec::CuspHeart { kappa } => {
                let k = *kappa;
                let sliver = crate::quad::integrate(
                    |t: f64| 2.0 * t.powf(k).min((1.0 - t * t).max(0.0).sqrt()),
                    0.0,
                    1.0,
                    1e-13,
                    1e-12,
                )
                .map(|q| q.value)
                .unwrap_or(2.0 / (k + 1.0));
                std::f64::consts::PI - sliver
            }
            DomainSpec::WholeSpace { .. } => f64::INFINITY,
        }
    }

    /// Bounding box, if bounded.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match self {
            DomainSpec::Interval { a, b } => Some((vec![*a], vec![*b])),
            DomainSpec::Box { lo, hi } => Some((lo.clone(), hi.clone())),
            DomainSpec::Ball { center, radius } => Some((
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            )),
            DomainSpec::BallUnion { balls } => {
                let d = balls[0].0.len();
                let mut lo = vec![f64::INFINITY; d];
                let mut hi = vec![f64::NEG_INFINITY; d];
                for (c, r) in balls {
                    for i in 0..d {
                        lo[i] = lo[i].min(c[i] - r);
                        hi[i] = hi[i].max(c[i] + r);
                    }
                }
                Some((lo, hi))
            }
            DomainSpec::CuspHeart { .. } => Some((vec![-1.0, -1.0], vec![1.0, 1.0])),
            DomainSpec::WholeSpace { .. } => None,
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            DomainSpec::Ball { radius, .. } => 2.0 * radius,
            DomainSpec::CuspHeart { .. } => 2.0,
            _ => match self.bounding_box() {
                Some((lo, hi)) => dist(&lo, &hi),
                None => f64::INFINITY,
            },
        }
    }
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn unit_ball_volume(d: usize) -> f64 {
    crate::constants::unit_ball_volume(d)
}

/// How the singular near-diagonal cell pairs are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagPolicy {
    /// Pick from the samples: few distinct levels means piecewise constant.
    Auto,
    /// `|u(x) - u(y)| ≈ L |x - y|` with `L` the difference quotient; the
    /// remaining power of `|x - y|` is integrated exactly per cell pair.
    Lipschitz,
    /// `u` constant on cells; the kernel is integrated exactly per cell pair.
    PiecewiseConstant,
}

/// How the part of an operator integral beyond the truncation radius is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMode {
    /// `u` vanishes outside `B_R(x)`: add the closed-form contribution of `u(x)`.
    CompactSupportExact,
    /// Drop the tail and only report the `4 ||u||_inf` majorant.
    BoundOnly,
}

/// Quadrature controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub trunc_radius: f64,
    pub eps_pv: f64,
    pub refine: u32,
    pub tol: f64,
    pub diag_policy: DiagPolicy,
    pub tail: TailMode,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            trunc_radius: 20.0,
            eps_pv: 0.05,
            refine: 3,
            tol: 1e-6,
            diag_policy: DiagPolicy::Auto,
            tail: TailMode::CompactSupportExact,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_pv > 0.0) || !(self.trunc_radius > self.eps_pv) {
            return invalid(format!(
                "need R > eps_pv > 0, got R = {}, eps_pv = {}",
                self.trunc_radius, self.eps_pv
            ));
        }
        if !(self.tol > 0.0) {
            return invalid("tol must be positive");
        }
        Ok(())
    }
}

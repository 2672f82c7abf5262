use std::f64::consts::PI;
use std::time::Instant;

use fracsob::constants::{b_const, c_const, c_ratio_limit_at_one, c_ratio_limit_at_zero, e_integral, i0_closed, i1_closed};
use fracsob::counterexamples::{ball_family_study, cusp_divergence_study, CONTROL_CELLS};
use fracsob::exttrace::{reflect_extend, trace_constant, trace_lift, trace_restrict, Bump};
use fracsob::fraclap::{flap_pv, flap_quotient, flap_spectral, half_laplacian_seminorm, operator_limit_scan, plancherel_seminorm};
use fracsob::gagliardo::{gagliardo_seminorm_p, limit_scan, limit_target, LimitMode};
use fracsob::inequalities::{dilate, holder_check, sequence_inequality_check, set_lower_bound, sobolev_ratio};
use fracsob::{make_grid, DomainSpec, FracParams, Func, Grid, GridFunction, QuadConfig, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{rel_err, ReportRecord};

pub const GAUSS: Func = Func::Gaussian { sigma: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Asymptotics,
    Equivalence,
    Limits,
    Inequalities,
    Counterexamples,
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "asymptotics" => Suite::Asymptotics,
            "equivalence" => Suite::Equivalence,
            "limits" => Suite::Limits,
            "inequalities" => Suite::Inequalities,
            "counterexamples" => Suite::Counterexamples,
            "all" => Suite::All,
            _ => return Err(format!("unknown suite '{s}' (asymptotics | equivalence | limits | inequalities | counterexamples | all)")),
        })
    }
}

impl Suite {
    pub fn criteria(self) -> Vec<u32> {
        match self {
            Suite::Asymptotics => vec![1, 2, 3],
            Suite::Equivalence => vec![6, 7, 10],
            Suite::Limits => vec![4, 5, 8],
            Suite::Inequalities => vec![9, 11, 12, 13, 14],
            Suite::Counterexamples => vec![15, 16],
            Suite::All => (1..=16).collect(),
        }
    }
}

pub const TITLES: [&str; 16] = [
    "constant asymptotics",
    "B endpoints",
    "E recursion and closed forms",
    "BBM limit",
    "MS limit",
    "three-definition equivalence",
    "Plancherel and half-Laplacian identities",
    "operator limits",
    "reflection extension",
    "trace round trip",
    "set lower bound",
    "sequence inequality",
    "Sobolev ratio",
    "Hölder regime",
    "cusp counterexample",
    "ball counterexample",
];

/// Worst relative error seen so far, with the headline comparison kept
/// separately.
struct Tally {
    worst: f64,
    ok: bool,
}

impl Tally {
    fn new() -> Self {
        Tally { worst: 0.0, ok: true }
    }

    /// Relative check `|a - b| <= tol |b|`.
    fn rel(&mut self, a: f64, b: f64, tol: f64) -> f64 {
        let e = rel_err(a, b);
        self.worst = self.worst.max(e);
        self.ok &= e <= tol;
        e
    }

    /// Absolute check `|a - b| <= tol`.
    fn abs(&mut self, a: f64, b: f64, tol: f64) -> f64 {
        let e = (a - b).abs();
        self.worst = self.worst.max(rel_err(a, b));
        self.ok &= e <= tol;
        e
    }

    fn holds(&mut self, cond: bool) {
        self.ok &= cond;
    }

    fn finish(self, rec: ReportRecord) -> ReportRecord {
        let mut rec = rec;
        rec.rel_err = Some(self.worst);
        rec.ok = self.ok;
        rec
    }
}

fn head(k: u32) -> ReportRecord {
    ReportRecord::new(format!("criterion_{k:02}")).input("title", TITLES[k as usize - 1])
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

/// Run one criterion; errors become a failing record.
pub fn criterion(k: u32, seed: u64, timing: bool) -> ReportRecord {
    let t0 = Instant::now();
    let res = match k {
        1 => c01(),
        2 => c02(),
        3 => c03(),
        4 => c04(),
        5 => c05(),
        6 => c06(),
        7 => c07(),
        8 => c08(),
        9 => c09(seed),
        10 => c10(),
        11 => c11(seed),
        12 => c12(seed),
        13 => c13(),
        14 => c14(),
        15 => c15(),
        16 => c16(),
        _ => Err(fracsob::Error::InvalidArgument(format!("no criterion {k}"))),
    };
    let mut rec = match res {
        Ok(r) => r,
        Err(e) => head(k.clamp(1, 16)).input("error", e).ok(false),
    };
    if timing {
        rec.runtime_ms = Some(t0.elapsed().as_millis() as u64);
    }
    rec
}

pub fn run_suite(suite: Suite, seed: u64, timing: bool) -> Vec<ReportRecord> {
    suite.criteria().into_iter().map(|k| criterion(k, seed, timing)).collect()
}

fn c01() -> Result<ReportRecord> {
    let mut t = Tally::new();
    let ratio = |n: usize, s: f64| -> Result<f64> { Ok(c_const(n, s)? / (s * (1.0 - s))) };
    for n in 1..=3 {
        t.rel(ratio(n, 0.99)?, c_ratio_limit_at_one(n), 0.02);
        t.rel(ratio(n, 0.01)?, c_ratio_limit_at_zero(n), 0.02);
    }
    let rec = head(1).input("n", "1;2;3").input("s", "0.01;0.99").input("tol", 0.02).input("headline", "C(2,0.99)/(s(1-s)) vs 4/pi");
    Ok(t.finish(rec.against(ratio(2, 0.99)?, 4.0 / PI)))
}

fn c02() -> Result<ReportRecord> {
    let mut t = Tally::new();
    t.rel(b_const(0.999)?, 0.5, 0.01);
    t.rel(b_const(0.001)?, 1.0, 0.01);
    let half = b_const(0.5)?;
    t.abs(half, PI / 4.0, 1e-4);
    let rec = head(2).input("s", "0.001;0.5;0.999").input("tol", "0.01 rel; 1e-4 abs at 0.5").input("headline", "B(0.5) vs pi/4");
    Ok(t.finish(rec.against(half, PI / 4.0)))
}

fn c03() -> Result<ReportRecord> {
    let mut t = Tally::new();
    let mut worst_rec: f64 = 0.0;
    for n in 2..=4usize {
        for k in 1..=20 {
            let theta = n as f64 - 1.0 + 0.25 * k as f64;
            let e = e_integral(n, theta)?;
            let step = theta / (n as f64 - 1.0) * e_integral(n + 2, theta + 2.0)?;
            let r = (e - step).abs() / e;
            worst_rec = worst_rec.max(r);
            t.holds(r <= 1e-6);
        }
    }
    let i21 = e_integral(2, 4.0)?;
    t.abs(i21, PI / 4.0, 1e-8);
    t.abs(e_integral(2, 2.0)?, PI / 2.0, 1e-8);
    t.abs(e_integral(3, 3.0)?, 1.0, 1e-8);
    for n in 2..=6usize {
        t.rel(e_integral(n, n as f64 + 2.0)?, i1_closed(n), 1e-8);
        t.rel(e_integral(n, n as f64)?, i0_closed(n), 1e-8);
    }
    let rec = head(3)
        .input("n", "2;3;4")
        .input("theta", "n-1+0.25k, k=1..20")
        .input("recursion_worst", worst_rec)
        .input("tol", "1e-6 recursion; 1e-8 closed forms")
        .input("headline", "I_2^(1) vs pi/4");
    Ok(t.finish(rec.against(i21, PI / 4.0)))
}

fn c04() -> Result<ReportRecord> {
    let mut t = Tally::new();
    let g = Grid::cells(&[0.0], &[1.0], &[4096])?;
    let u = GridFunction::from_fn(g, |x| x[0]);
    let dom = DomainSpec::interval(0.0, 1.0)?;
    let s_list = [0.5, 0.9, 0.99];
    let scan = limit_scan(&u, 2.0, LimitMode::Bbm, &s_list, &dom)?;
    for &(s, v) in &scan {
        t.rel(v, 1.0 / (3.0 - 2.0 * s), 0.01);
    }
    let target = limit_target(&u, 2.0, LimitMode::Bbm, &dom)?;
    t.abs(target, 1.0, 1e-9);
    // closer to the target as s grows
    t.holds(scan.windows(2).all(|w| (w[1].1 - target).abs() < (w[0].1 - target).abs()));
    let (s, v) = scan[2];
    let rec = head(4).input("func", "x on (0,1)").input("grid", 4096).input("s", join(&s_list)).input("target", target).input("tol", 0.01);
    Ok(t.finish(rec.against(v, 1.0 / (3.0 - 2.0 * s))))
}

fn c05() -> Result<ReportRecord> {
    let mut t = Tally::new();
    let g = Grid::cells(&[-1.0], &[2.0], &[600])?;
    let u = GridFunction::from_fn(g, |x| if (0.0..=1.0).contains(&x[0]) { 1.0 } else { 0.0 });
    let dom = DomainSpec::whole(1);
    let s_list = [0.01, 0.1];
    let scan = limit_scan(&u, 2.0, LimitMode::Ms, &s_list, &dom)?;
    for &(s, v) in &scan {
        t.rel(v, 2.0 / (1.0 - 2.0 * s), 0.02);
    }
    let target = limit_target(&u, 2.0, LimitMode::Ms, &dom)?;
    t.abs(target, 2.0, 1e-12);
    t.holds((scan[0].1 - target).abs() < (scan[1].1 - target).abs());
    let (s, v) = scan[0];
    let rec = head(5).input("func", "indicator (0,1) on R").input("grid", "600 cells on (-1,2)").input("s", join(&s_list)).input("target", target).input("tol", 0.02);
    Ok(t.finish(rec.against(v, 2.0 / (1.0 - 2.0 * s))))
}

/// Box of `n` nodes per axis with spacing `h`, node `n/2` at the origin.
pub fn centred_grid(dim: usize, n: usize, h: f64) -> Result<Grid> {
    let lo = -((n / 2) as f64) * h;
    let hi = lo + (n - 1) as f64 * h;
    Grid::new(&vec![lo; dim], &vec![hi; dim], &vec![n; dim])
}

/// Spectral grid used for the Gaussian: 8192 nodes at 0.25 in 1-D, 512^2 at
/// 0.4 in 2-D.
pub fn spectral_grid(dim: usize) -> Result<Grid> {
    if dim == 1 {
        centred_grid(1, 8192, 0.25)
    } else {
        centred_grid(2, 512, 0.4)
    }
}

fn c06() -> Result<ReportRecord> {
    let mut t = Tally::new();
    let cfg = QuadConfig::default();
    let mut worst: f64 = 0.0;
    let mut headline = f64::NAN;
    for (n, pts) in [(1, vec![vec![0.0], vec![0.5], vec![2.5]]), (2, vec![vec![0.0, 0.0], vec![0.4, 0.8], vec![2.0, -1.2]])] {
        let grid = spectral_grid(n)?;
        let sample = GAUSS.sample(&grid, None);
        for s in [0.25, 0.5, 0.75] {
            let q = flap_quotient(&GAUSS, &pts, s, &cfg)?;
            let p = flap_pv(&GAUSS, &pts, s, &cfg)?;
            let f = flap_spectral(&sample, s)?;
            for (k, x) in pts.iter().enumerate() {
                let trio = [q.values[k], p.values[k], f.value_at(x)];
                for i in 0..3 {
                    for j in i + 1..3 {
                        worst = worst.max(rel_err(trio[i], trio[j]));
                    }
                }
                if n == 1 && s == 0.5 && k == 0 {
                    for v in trio {
                        t.abs(v, (2.0 / PI).sqrt(), 1e-4);
                    }
                    headline = trio[2];
                }
            }
        }
    }
    t.holds(worst < 1e-3);
    let rec = head(6)
        .input("func", "gaussian(1)")
        .input("s", "0.25;0.5;0.75")
        .input("spectral_grid", "1-D 8192 x 0.25; 2-D 512^2 x 0.4")
        .input("R", cfg.trunc_radius)
        .input("eps", cfg.eps_pv)
        .input("pairwise_worst", worst)
        .input("tol", "1e-3 pairwise; 1e-4 abs sqrt(2/pi)");
    let mut rec = t.finish(rec.against(headline, (2.0 / PI).sqrt()));
    rec.rel_err = Some(worst);
    Ok(rec)
}

fn c07() -> Result<ReportRecord> {
    let mut t = Tally::new();
    let u = GAUSS.sample(&centred_grid(1, 32768, 0.05)?, None);
    let freq = plancherel_seminorm(&u, 0.5)?;
    let half = half_laplacian_seminorm(&u, 0.5)?;
    let sample = GAUSS.sample(&Grid::cells(&[-9.0], &[9.0], &[1800])?, None);
    let ds = gagliardo_seminorm_p(&sample, FracParams::new(1, 0.5, 2.0)?, &DomainSpec::whole(1), &QuadConfig::default())?.seminorm_p;
    t.rel(ds, freq, 1e-3);
    let forms = rel_err(half, freq);
    t.holds(forms <= 1e-6);
    let rec = head(7)
        .input("func", "gaussian(1)")
        .input("s", 0.5)
        .input("double_sum_grid", "1800 cells on (-9,9)")
        .input("fft_grid", "32768 x 0.05")
        .input("frequency_forms_rel", forms)
        .input("tol", "1e-3 double sum; 1e-6 frequency forms");
    Ok(t.finish(rec.against(ds, freq)))
}

fn c08() -> Result<ReportRecord> {
    let mut t = Tally::new();
    let scan = operator_limit_scan(&GAUSS, &[0.0, 0.0], &[0.01, 0.99])?;
    let lo = scan.values[0].1;
    let hi = scan.values[1].1;
    t.rel(lo, scan.target_low, 0.03);
    t.rel(hi, scan.target_high.unwrap_or(f64::NAN), 0.03);
    let rec = head(8).input("func", "gaussian(1)").input("n", 2).input("x", "0;0").input("s", "0.01;0.99").input("value_s0.01", lo).input("tol", 0.03);
    Ok(t.finish(rec.against(hi, 2.0)))
}

/// Smooth field on the upper half square for the reflection corpus.
pub fn reflection_field(rng: &mut ChaCha8Rng) -> (GridFunction, f64) {
    let c0 = rng.gen_range(-0.4..0.4);
    let c1 = rng.gen_range(0.0..1.0);
    let w: f64 = rng.gen_range(0.15..0.6);
    let k = rng.gen_range(0.0..4.0);
    let s = rng.gen_range(0.1..0.9);
    let g = Grid::cells(&[-0.5, 0.0], &[0.5, 1.0], &[16, 16]).expect("fixed grid");
    let u = GridFunction::from_fn(g, move |x| {
        let r2 = (x[0] - c0) * (x[0] - c0) + (x[1] - c1) * (x[1] - c1);
        (-r2 / (2.0 * w * w)).exp() + 0.3 * (k * x[0] + x[1]).cos()
    });
    (u, s)
}

fn c09(seed: u64) -> Result<ReportRecord> {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_semi: f64 = 0.0;
    let mut worst_lp: f64 = 0.0;
    for _ in 0..10 {
        let (u, s) = reflection_field(&mut rng);
        let r = reflect_extend(&u, FracParams::new(2, s, 2.0)?, &QuadConfig::default())?;
        worst_semi = worst_semi.max(r.seminorm_out_p / r.seminorm_in_p);
        let lp = (r.lp_out_p / r.lp_in_p - 2.0).abs();
        worst_lp = worst_lp.max(lp);
        t.holds(r.seminorm_out_p <= 4.0 * r.seminorm_in_p + r.tolerance && lp <= 1e-10);
    }
    let rec = head(9)
        .input("corpus", "10 fields exp(-|x-c|^2/2w^2)+0.3cos(kx1+x2), 16x16 cells on (-0.5,0.5)x(0,1)")
        .input("seed", seed)
        .input("p", 2)
        .input("lp_ratio_worst_dev", worst_lp)
        .input("tol", "semi <= 4 semi + tol; lp ratio 2 to 1e-10");
    let mut rec = t.finish(rec.value(worst_semi));
    rec.oracle = Some(4.0);
    rec.rel_err = None;
    Ok(rec)
}

fn c10() -> Result<ReportRecord> {
    let mut t = Tally::new();
    let line = Grid::new(&[-12.8], &[12.7], &[256])?;
    let v = GAUSS.sample(&line, None);
    let bump = Bump::standard();
    let mut worst_rt: f64 = 0.0;
    let mut worst_res: f64 = 0.0;
    for s in [0.6, 0.75, 0.9] {
        let pair = trace_lift(&v, s, &bump)?;
        let err = pair.v.values.iter().zip(&v.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst_rt = worst_rt.max(err);
        worst_res = worst_res.max(pair.fourier_residual);
    }
    let g = Grid::new(&[-10.0, -10.0], &[10.0, 10.0], &[161, 129])?;
    let sep = GridFunction::from_fn(g, |x| (-x[0] * x[0] / 2.0).exp() * (-(x[1] - 0.3) * (x[1] - 0.3) / 0.98).exp());
    worst_res = worst_res.max(trace_restrict(&sep)?.fourier_residual);
    t.holds(worst_rt < 1e-6 && worst_res < 1e-10);
    let c1 = trace_constant(1.0)?;
    t.abs(c1, PI, 1e-8);
    let rec = head(10)
        .input("v", "gaussian(1), 256 x 0.1")
        .input("s", "0.6;0.75;0.9")
        .input("bump", "exp(-1/(1-t^2)), unit mass")
        .input("round_trip_max", worst_rt)
        .input("fourier_residual_max", worst_res)
        .input("tol", "1e-6 round trip; 1e-10 residual; 1e-8 C(1)")
        .input("headline", "C(1) vs pi");
    Ok(t.finish(rec.against(c1, PI)))
}

fn c11(seed: u64) -> Result<ReportRecord> {
    let mut t = Tally::new();
    let cfg = QuadConfig::default();
    let p1 = FracParams::new(1, 0.25, 2.0)?;
    let sp = p1.sp();
    for l in [0.5, 1.0, 3.0] {
        let r = set_lower_bound(&DomainSpec::interval(-0.5 * l, 0.5 * l)?, &[0.0], p1, &cfg)?;
        t.rel(r.lhs, 2f64.powf(1.0 + sp) / sp * l.powf(-sp), 1e-6);
        t.rel(r.lhs, r.constant_used * r.rhs, 1e-6);
    }
    let p2 = FracParams::new(2, 0.5, 2.0)?;
    let disc = set_lower_bound(&DomainSpec::ball(&[0.3, -0.2], 0.8)?, &[0.3, -0.2], p2, &cfg)?;
    t.rel(disc.lhs, disc.constant_used * disc.rhs, 1e-4);
    t.rel(disc.lhs, 2.0 * PI / 0.8, 1e-4);
    // random unions of intervals with total length 1
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pr = FracParams::new(1, 0.4, 2.0)?;
    let ball = set_lower_bound(&DomainSpec::interval(-0.5, 0.5)?, &[0.0], pr, &cfg)?.lhs;
    let mut min_margin = f64::INFINITY;
    for _ in 0..50 {
        let (e, x) = random_union(&mut rng)?;
        let r = set_lower_bound(&e, &[x], pr, &cfg)?;
        min_margin = min_margin.min((r.lhs - ball) / ball);
        t.holds(r.ok && r.lhs >= ball * (1.0 - 1e-12));
    }
    let rec = head(11)
        .input("sets", "centred intervals L=0.5;1;3 (s=0.25); disc r=0.8 (s=0.5); 50 unions of total length 1 (s=0.4)")
        .input("p", 2)
        .input("seed", seed)
        .input("random_min_rel_excess", min_margin)
        .input("tol", "1e-6 interval; 1e-4 disc")
        .input("headline", "centred disc vs C|E|^{-sp/n}");
    Ok(t.finish(rec.against(disc.lhs, disc.constant_used * disc.rhs)))
}

/// Up to four disjoint intervals of total length 1 and a point inside one.
pub fn random_union(rng: &mut ChaCha8Rng) -> Result<(DomainSpec, f64)> {
    let m = rng.gen_range(1..5);
    let mut lengths: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = lengths.iter().sum();
    lengths.iter_mut().for_each(|l| *l /= total);
    let mut balls = Vec::new();
    let mut at = 0.0;
    for l in &lengths {
        at += rng.gen_range(0.01..0.5);
        balls.push((vec![at + 0.5 * l], 0.5 * l));
        at += l;
    }
    let (c, r) = balls[rng.gen_range(0..m)].clone();
    let x = c[0] + rng.gen_range(-0.9..0.9) * r;
    Ok((DomainSpec::ball_union(balls)?, x))
}

fn c12(seed: u64) -> Result<ReportRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0u32;
    let mut min_margin = f64::INFINITY;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=2usize);
        let sp = [0.2, 0.4, 0.6, 0.8][rng.gen_range(0..4)] * n as f64;
        let t = [1.5, 2.0, 4.0][rng.gen_range(0..3)];
        let len = rng.gen_range(1..30);
        let mut a: Vec<f64> = (0..len).map(|_| rng.gen_range(0.0..1.0)).collect();
        a.sort_by(|x, y| y.total_cmp(x));
        let k0 = rng.gen_range(-6..6);
        let r = sequence_inequality_check(&a, k0, FracParams::new(n, sp / 2.0, 2.0)?, t)?;
        if !r.ok {
            violations += 1;
        }
        if r.lhs > 0.0 {
            min_margin = min_margin.min(r.margin / r.lhs);
        }
    }
    let rec = head(12)
        .input("sequences", 1000)
        .input("n", "1;2")
        .input("sp/n", "0.2;0.4;0.6;0.8")
        .input("T", "1.5;2;4")
        .input("seed", seed)
        .input("min_rel_margin", min_margin)
        .input("constant", "T^{n/(n-sp)}");
    Ok(rec.against(violations as f64, 0.0).ok(violations == 0))
}

fn c13() -> Result<ReportRecord> {
    let mut t = Tally::new();
    let cfg = QuadConfig::default();
    let pr = FracParams::new(1, 0.25, 2.0)?;
    let chi = GridFunction::from_fn(Grid::cells(&[0.0], &[1.0], &[512])?, |_| 1.0);
    let r = sobolev_ratio(&chi, pr, &cfg)?;
    t.rel(r.rhs, 1.0, 0.01);
    t.rel(r.lhs, 16.0, 0.01);
    let gauss = GAUSS.sample(&Grid::cells(&[-9.0], &[9.0], &[1800])?, None);
    let mut spread: f64 = 0.0;
    for f in [&chi, &gauss] {
        let ratios = [0.5, 1.0, 2.0].iter().map(|&l| Ok(sobolev_ratio(&dilate(f, l), pr, &cfg)?.constant_used)).collect::<Result<Vec<f64>>>()?;
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(0.0, f64::max);
        spread = spread.max((hi - lo) / ratios[1]);
    }
    t.holds(spread < 1e-3);
    let rec = head(13)
        .input("func", "indicator (0,1); gaussian(1) on (-9,9)")
        .input("s", 0.25)
        .input("p", 2)
        .input("lambda", "0.5;1;2")
        .input("norm_p*_p", r.rhs)
        .input("dilation_spread", spread)
        .input("tol", "0.01 values; 1e-3 spread")
        .input("headline", "[chi]^2 vs 16");
    Ok(t.finish(rec.against(r.lhs, 16.0)))
}

/// Hölder corpus on intervals: `(name, a, b, s, f)`.
#[allow(clippy::type_complexity)]
pub fn holder_corpus() -> Vec<(&'static str, f64, f64, f64, fn(f64) -> f64)> {
    vec![
        ("x^2", 0.0, 1.0, 0.75, |x| x * x),
        ("sin 3x", 0.0, 1.0, 0.75, |x| (3.0 * x).sin()),
        ("sqrt x", 0.0, 1.0, 0.75, f64::sqrt),
        ("|x|", -1.0, 1.0, 0.75, f64::abs),
        ("cos 2x", 0.0, 1.0, 0.9, |x| (2.0 * x).cos()),
        ("gaussian", -4.0, 4.0, 0.9, |x| (-x * x / 2.0).exp()),
    ]
}

fn c14() -> Result<ReportRecord> {
    let mut t = Tally::new();
    let cfg = QuadConfig::default();
    let dom = DomainSpec::interval(0.0, 1.0)?;
    let lin = GridFunction::from_fn(make_grid(&[0.0], &[1.0], 401)?, |x| x[0]);
    let cal = holder_check(&lin, FracParams::new(1, 0.75, 2.0)?, &dom, &cfg)?;
    t.abs(cal.alpha, 0.25, 1e-15);
    t.abs(cal.holder_quotient, 1.0, 1e-12);
    let mut worst: f64 = 0.0;
    for (_, a, b, s, f) in holder_corpus() {
        let g = make_grid(&[a], &[b], 401)?;
        let u = GridFunction::from_fn(g, |x| f(x[0]));
        let r = holder_check(&u, FracParams::new(1, s, 2.0)?, &DomainSpec::interval(a, b)?, &cfg)?;
        worst = worst.max(r.constant / r.calibration);
        t.holds(r.inequality.ok);
    }
    t.holds(worst <= 2.0);
    let names: Vec<&str> = holder_corpus().iter().map(|c| c.0).collect();
    let rec = head(14)
        .input("calibration", "x on (0,1), s=0.75, p=2, 401 nodes")
        .input("corpus", names.join(";"))
        .input("calibration_constant", cal.calibration)
        .input("worst_constant_over_calibration", worst)
        .input("tol", "1e-12 calibration; corpus <= 2x pin")
        .input("headline", "alpha-quotient of x vs 1");
    Ok(t.finish(rec.against(cal.holder_quotient, 1.0)))
}

fn c15() -> Result<ReportRecord> {
    let mut t = Tally::new();
    let st = cusp_divergence_study(2.0, 0.9, 5.0, 0.1, 8, &QuadConfig::default())?;
    t.holds(st.grad_sup <= PI * PI + 1.0);
    t.holds(st.grad_identity_residual <= 1e-10);
    t.rel(st.slope, st.expected_slope, 0.15);
    let c: Vec<f64> = st.control.iter().map(|x| x.1).collect();
    let stable = rel_err(c[c.len() - 2], c[c.len() - 1]);
    t.holds(c.iter().all(|v| v.is_finite() && *v > 0.0) && stable < 0.05);
    let rec = head(15)
        .input("p", 2)
        .input("s", 0.9)
        .input("kappa", 5)
        .input("r_sweep", join(&st.growth.iter().map(|g| g.0).collect::<Vec<_>>()))
        .input("j_max", 8)
        .input("alpha", st.alpha_con)
        .input("grad_sup", st.grad_sup)
        .input("grad_identity_residual", st.grad_identity_residual)
        .input("fitted_c_spread", st.c_spread)
        .input("control_cells", CONTROL_CELLS.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";"))
        .input("control_seminorm", join(&c))
        .input("tol", "slope 15%; control last step 5%")
        .input("headline", "growth-law slope vs 1-alpha");
    Ok(t.finish(rec.against(st.slope, st.expected_slope)))
}

fn c16() -> Result<ReportRecord> {
    let mut t = Tally::new();
    let st = ball_family_study(16.0, 0.5, 6, &QuadConfig::default())?;
    for x in &st.f_norms_l2 {
        t.abs(*x, 1.0, 1e-10);
    }
    for d in &st.pair_dists {
        t.abs(d.2, 2f64.sqrt(), 1e-10);
    }
    let top = st.hs_seminorms.iter().cloned().fold(0.0, f64::max);
    t.holds(st.hs_seminorms.iter().all(|h| *h > 0.0 && *h <= st.paper_bound));
    t.holds(st.separation_margin >= 1.0);
    let rec = head(16)
        .input("C", 16)
        .input("s", 0.5)
        .input("n_funcs", 6)
        .input("hs_seminorms", join(&st.hs_seminorms))
        .input("separation_margin", st.separation_margin)
        .input("tol", "1e-10 norms and distances");
    let mut rec = t.finish(rec.value(top));
    rec.oracle = Some(st.paper_bound);
    Ok(rec)
}

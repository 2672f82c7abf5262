use std::f64::consts::PI;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracsob::catalog::Field;
use fracsob::constants::{c_const, sphere_measure, ConstantBundle};
use fracsob::counterexamples::{ball_family_study, cusp_divergence_study};
use fracsob::exttrace::{cutoff_multiply, reflect_extend, trace_constant, trace_inequality, trace_lift, zero_extend, Bump, ExtensionReport};
use fracsob::fraclap::{c_const_direct, flap_pv, flap_quotient, flap_spectral, operator_limit_scan, FlapResult};
use fracsob::gagliardo::{gagliardo_seminorm_p, limit_scan, limit_target, LimitMode};
use fracsob::inequalities::{
    campanato_radii, campanato_seminorm, holder_check, levelset_seminorm_bound, sequence_inequality_check, set_lower_bound, sobolev_ratio,
    InequalityReport,
};
use fracsob::{make_grid, DomainSpec, FracParams, Func, Grid, QuadConfig, Warning};
use statrs::function::beta::beta;
use statrs::function::gamma::gamma;

use crate::report::{rel_err, ReportRecord};
use crate::suite::{centred_grid, run_suite, spectral_grid, Suite};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "fracsob", version, about = "Fractional Sobolev space experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    /// Seed of the randomized corpora.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Leave `runtime_ms` empty so reruns are byte-identical.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// A(n,s), B(s), C(n,s).
    Constants(Opts),
    /// Gagliardo seminorm of a catalog function.
    Seminorm {
        #[command(flatten)]
        opts: Opts,
        /// `box` for (a,b)^n, `whole` for R^n with zero outside the samples.
        #[arg(long)]
        domain: Option<String>,
    },
    /// Fractional Laplacian at a point.
    Flap {
        #[command(flatten)]
        opts: Opts,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x: Vec<f64>,
        /// pv | quotient | spectral | all
        #[arg(long, default_value = "all")]
        method: String,
    },
    /// Seminorm limits s -> 1 (bbm), s -> 0 (ms) and operator limits (op).
    Limits {
        #[command(flatten)]
        opts: Opts,
        #[arg(long, default_value = "bbm")]
        mode: String,
        #[arg(long, value_delimiter = ',')]
        s_list: Vec<f64>,
    },
    /// Trace lift and restriction on the plane.
    Trace(Opts),
    /// Extension operators: zero | reflect | cutoff.
    Extend {
        #[command(flatten)]
        opts: Opts,
        #[arg(long, default_value = "zero")]
        op: String,
    },
    /// set | sequence | levelset | sobolev | holder | campanato.
    Inequality {
        #[command(flatten)]
        opts: Opts,
        #[arg(long, default_value = "set")]
        kind: String,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x: Vec<f64>,
        /// Base of the sequence inequality.
        #[arg(long, default_value_t = 2.0)]
        t: f64,
        /// Index of the first sequence entry.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        k0: i64,
    },
    /// cusp | balls.
    Counterexample {
        #[arg(value_enum)]
        which: Example,
        #[command(flatten)]
        opts: Opts,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        c_ratio: Option<f64>,
        #[arg(long, default_value_t = 8)]
        j_max: usize,
        #[arg(long, default_value_t = 6)]
        n_funcs: usize,
    },
    /// asymptotics | equivalence | limits | inequalities | counterexamples | all.
    Suite { name: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Example {
    Cusp,
    Balls,
}

/// Flags shared by the subcommands; unset ones take per-command defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Catalog name: gaussian, indicator, linear, constant, cos, bump,
    /// cusp_rho_theta, ball_bump_n.
    #[arg(long)]
    pub func: Option<String>,
    /// Catalog parameters, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub params: Vec<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Cells (or nodes) per axis.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long = "R")]
    pub r_trunc: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub refine: Option<u32>,
    #[arg(long)]
    pub tol: Option<f64>,
}

impl Opts {
    fn cfg(&self) -> Result<QuadConfig, CliError> {
        let d = QuadConfig::default();
        let cfg = QuadConfig {
            trunc_radius: self.r_trunc.unwrap_or(d.trunc_radius),
            eps_pv: self.eps.unwrap_or(d.eps_pv),
            refine: self.refine.unwrap_or(d.refine),
            tol: self.tol.unwrap_or(d.tol),
            ..d
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn dim(&self, default: usize) -> Result<usize, CliError> {
        match self.n.unwrap_or(default) {
            n @ (1 | 2) => Ok(n),
            n => Err(CliError::Usage(format!("fields are 1-D or 2-D, got --n {n}"))),
        }
    }

    fn params(&self, n: usize, s: f64, p: f64) -> Result<FracParams, CliError> {
        Ok(FracParams::new(n, self.s.unwrap_or(s), self.p.unwrap_or(p))?)
    }

    fn interval(&self, a: f64, b: f64) -> (f64, f64) {
        (self.a.unwrap_or(a), self.b.unwrap_or(b))
    }

    /// Catalog entry; an indicator without parameters covers `(a,b)` or the
    /// disc inscribed in `(a,b)^2`.
    fn func(&self, default: &str, n: usize, ab: (f64, f64)) -> Result<(String, Func), CliError> {
        let name = self.func.clone().unwrap_or_else(|| default.to_string());
        let params = if self.params.is_empty() && name == "indicator" {
            let (a, b) = ab;
            if n == 1 {
                vec![a, b]
            } else {
                vec![0.5 * (a + b), 0.5 * (a + b), 0.5 * (b - a)]
            }
        } else {
            self.params.clone()
        };
        Ok((name.clone(), Func::parse(&name, &params, n)?))
    }
}

fn settings(rec: ReportRecord, cfg: &QuadConfig) -> ReportRecord {
    rec.input("R", cfg.trunc_radius).input("eps", cfg.eps_pv).input("refine", cfg.refine).input("tol", cfg.tol)
}

fn warned(rec: ReportRecord, w: &[Warning]) -> ReportRecord {
    if w.is_empty() {
        rec
    } else {
        rec.input("warnings", w.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(";"))
    }
}

/// Compare against an optional oracle with relative tolerance `tol`.
fn checked(rec: ReportRecord, computed: f64, oracle: Option<f64>, tol: f64) -> ReportRecord {
    match oracle {
        Some(o) => {
            let ok = rel_err(computed, o) <= tol;
            rec.against(computed, o).input("check_tol", tol).ok(ok)
        }
        None => rec.value(computed),
    }
}

fn box_grid(n: usize, ab: (f64, f64), cells: usize) -> Result<Grid, CliError> {
    Ok(Grid::cells(&vec![ab.0; n], &vec![ab.1; n], &vec![cells; n])?)
}

fn box_domain(n: usize, ab: (f64, f64)) -> Result<DomainSpec, CliError> {
    Ok(if n == 1 { DomainSpec::interval(ab.0, ab.1)? } else { DomainSpec::boxed(&[ab.0; 2], &[ab.1; 2])? })
}

/// `[chi_(0,L)]^p` over R: `4 L^{1-sp} / (sp (1 - sp))`.
fn indicator_seminorm(len: f64, sp: f64) -> Option<f64> {
    (sp < 1.0).then(|| 4.0 * len.powf(1.0 - sp) / (sp * (1.0 - sp)))
}

/// `[c x]^p` on an interval of length L: `2 |c|^p L^{p+1-sp} / ((p - sp)(p + 1 - sp))`.
fn linear_seminorm(c: f64, len: f64, p: f64, sp: f64) -> f64 {
    2.0 * c.abs().powf(p) * len.powf(p + 1.0 - sp) / ((p - sp) * (p + 1.0 - sp))
}

fn interval_len(f: &Func) -> Option<f64> {
    match f {
        Func::Indicator(DomainSpec::Interval { a, b }) => Some(b - a),
        _ => None,
    }
}

/// Closed forms for the seminorm over `domain` when one is known.
fn seminorm_oracle(f: &Func, params: FracParams, whole: bool, ab: (f64, f64)) -> Option<f64> {
    let (n, s, p, sp) = (params.n(), params.s(), params.p(), params.sp());
    match f {
        Func::Constant(_) => Some(0.0),
        Func::Indicator(_) if n == 1 && whole => interval_len(f).and_then(|l| indicator_seminorm(l, sp)),
        Func::Linear { coef, .. } if n == 1 && !whole => Some(linear_seminorm(coef[0], ab.1 - ab.0, p, sp)),
        // Plancherel: 2 C^{-1} int |xi|^{2s} sigma^2 exp(-sigma^2 xi^2)
        Func::Gaussian { sigma } if n == 1 && whole && p == 2.0 => {
            Some(2.0 * sigma.powf(1.0 - 2.0 * s) * gamma(s + 0.5) / c_const(1, s).ok()?)
        }
        _ => None,
    }
}

pub fn seminorm(opts: &Opts, domain: Option<&str>) -> Result<Vec<ReportRecord>, CliError> {
    let cfg = opts.cfg()?;
    let n = opts.dim(1)?;
    let default_func = "indicator";
    let is_gauss = opts.func.as_deref() == Some("gaussian");
    let ab = opts.interval(if is_gauss { -9.0 } else { 0.0 }, if is_gauss { 9.0 } else { 1.0 });
    let (name, f) = opts.func(default_func, n, ab)?;
    let whole = match domain {
        Some("whole") => true,
        Some("box") => false,
        None => matches!(f, Func::Indicator(_) | Func::Gaussian { .. } | Func::Bump { .. }),
        Some(d) => return Err(CliError::Usage(format!("unknown domain '{d}' (box | whole)"))),
    };
    let cells = opts.grid.unwrap_or(if n == 1 { 1024 } else { 48 });
    let params = opts.params(n, 0.5, 2.0)?;
    let grid = box_grid(n, ab, cells)?;
    let u = f.sample(&grid, None);
    let dom = if whole { DomainSpec::whole(n) } else { box_domain(n, ab)? };
    let r = gagliardo_seminorm_p(&u, params, &dom, &cfg)?;
    let rec = ReportRecord::new("seminorm")
        .input("func", &name)
        .input("n", n)
        .input("s", params.s())
        .input("p", params.p())
        .input("a", ab.0)
        .input("b", ab.1)
        .input("domain", if whole { "whole" } else { "box" })
        .input("grid", cells);
    let rec = settings(rec, &cfg)
        .input("diag_policy", format!("{:?}", r.diag_policy.policy))
        .input("lp_norm_p", r.lp_norm_p)
        .input("est_error", r.est_error);
    let rec = warned(rec, &r.warnings);
    Ok(vec![checked(rec, r.seminorm_p, seminorm_oracle(&f, params, whole, ab), 1e-3)])
}

pub fn constants(opts: &Opts) -> Result<Vec<ReportRecord>, CliError> {
    let n = opts.n.unwrap_or(1);
    let s = opts.s.unwrap_or(0.5);
    let b = ConstantBundle::new(n, s)?;
    let rec = ReportRecord::new("constants").input("n", n).input("s", s).input("A", b.a).input("B", b.b).input("omega_n-1", sphere_measure(n as i64 - 1)?);
    let rec = if n <= 2 { rec.input("oracle_kind", "direct quadrature of the symbol integral") } else { rec };
    let oracle = if n <= 2 { Some(c_const_direct(n, s)?) } else { None };
    Ok(vec![checked(rec, b.c, oracle, 1e-6)])
}

/// `(-Δ)^s exp(-|x|^2 / 2 sigma^2)` at the origin.
fn gauss_origin(n: usize, s: f64, sigma: f64) -> f64 {
    let h = n as f64 / 2.0;
    sigma.powf(-2.0 * s) * 2f64.powf(s) * gamma(s + h) / gamma(h)
}

pub fn flap(opts: &Opts, x: &[f64], method: &str) -> Result<Vec<ReportRecord>, CliError> {
    let cfg = opts.cfg()?;
    let n = opts.dim(if x.len() == 2 { 2 } else { 1 })?;
    let x = if x.is_empty() { vec![0.0; n] } else { x.to_vec() };
    if x.len() != n {
        return Err(CliError::Usage(format!("--x has {} coordinates, expected {n}", x.len())));
    }
    let s = opts.s.unwrap_or(0.5);
    let (name, f) = opts.func("gaussian", n, opts.interval(0.0, 1.0))?;
    let methods: Vec<&str> = match method {
        "all" => vec!["quotient", "pv", "spectral"],
        m @ ("quotient" | "pv" | "spectral") => vec![m],
        m => return Err(CliError::Usage(format!("unknown method '{m}' (pv | quotient | spectral | all)"))),
    };
    let oracle = match &f {
        Func::Gaussian { sigma } if x.iter().all(|v| *v == 0.0) => Some(gauss_origin(n, s, *sigma)),
        Func::Constant(_) => Some(0.0),
        Func::Cosine { k } => Some(k.iter().map(|v| v * v).sum::<f64>().powf(s) * f.eval(&x)),
        _ => None,
    };
    let pts = vec![x.clone()];
    let mut out = Vec::new();
    for m in methods {
        let (r, grid_note): (FlapResult, String) = match m {
            "quotient" => (flap_quotient(&f, &pts, s, &cfg)?, String::new()),
            "pv" => (flap_pv(&f, &pts, s, &cfg)?, String::new()),
            _ => {
                if !matches!(f, Func::Gaussian { .. } | Func::Bump { .. }) {
                    if method == "all" {
                        continue;
                    }
                    return Err(CliError::Usage("the spectral method needs a decaying function (gaussian or bump)".into()));
                }
                let (nodes, h) = match (n, opts.grid) {
                    (1, g) => (g.unwrap_or(8192), 0.25),
                    (_, g) => (g.unwrap_or(512), 0.4),
                };
                let grid = if opts.grid.is_some() { centred_grid(n, nodes, h)? } else { spectral_grid(n)? };
                (flap_spectral(&f.sample(&grid, None), s)?, format!("{nodes} x {h}"))
            }
        };
        let v = r.value_at(&x);
        let mut rec = ReportRecord::new(format!("flap.{m}"))
            .input("func", &name)
            .input("n", n)
            .input("s", s)
            .input("x", x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";"));
        if !grid_note.is_empty() {
            rec = rec.input("grid", grid_note);
        }
        let rec = settings(rec, &cfg).input("est_error", r.est_error);
        let rec = warned(rec, &r.warnings);
        out.push(checked(rec, v, oracle, 1e-3));
    }
    Ok(out)
}

pub fn limits(opts: &Opts, mode: &str, s_list: &[f64]) -> Result<Vec<ReportRecord>, CliError> {
    let mut out = Vec::new();
    match mode {
        "bbm" | "ms" => {
            let lm: LimitMode = mode.parse()?;
            let n = opts.dim(1)?;
            let p = opts.p.unwrap_or(2.0);
            let ab = opts.interval(0.0, 1.0);
            let (name, f) = opts.func(if lm == LimitMode::Bbm { "linear" } else { "indicator" }, n, ab)?;
            let cells = opts.grid.unwrap_or(if n == 1 { 4096 } else { 48 });
            let s_list = if s_list.is_empty() {
                if lm == LimitMode::Bbm {
                    vec![0.5, 0.9, 0.99]
                } else {
                    vec![0.01, 0.1, 0.2]
                }
            } else {
                s_list.to_vec()
            };
            let u = f.sample(&box_grid(n, ab, cells)?, None);
            let whole = lm == LimitMode::Ms;
            let dom = if whole { DomainSpec::whole(n) } else { box_domain(n, ab)? };
            let target = limit_target(&u, p, lm, &dom)?;
            for (s, v) in limit_scan(&u, p, lm, &s_list, &dom)? {
                let scale = if whole { s } else { 1.0 - s };
                let oracle = seminorm_oracle(&f, FracParams::new(n, s, p)?, whole, ab).map(|o| scale * o);
                let rec = ReportRecord::new(format!("limits.{mode}"))
                    .input("func", &name)
                    .input("n", n)
                    .input("p", p)
                    .input("s", s)
                    .input("a", ab.0)
                    .input("b", ab.1)
                    .input("grid", cells)
                    .input("target", target);
                out.push(checked(rec, v, oracle, 0.01));
            }
        }
        "op" => {
            let n = opts.dim(2)?;
            let (name, f) = opts.func("gaussian", n, opts.interval(0.0, 1.0))?;
            let s_list = if s_list.is_empty() { vec![0.01, 0.99] } else { s_list.to_vec() };
            let x = vec![0.0; n];
            let scan = operator_limit_scan(&f, &x, &s_list)?;
            for (s, v) in scan.values {
                let oracle = if s < 0.5 { Some(scan.target_low) } else { scan.target_high };
                let mut rec = ReportRecord::new("limits.op").input("func", &name).input("n", n).input("s", s).input("x", "origin");
                if scan.extrapolated {
                    rec = rec.input("label", "extrapolation-beyond-statement");
                }
                if !scan.compact_support {
                    rec = rec.input("label", "not compactly supported");
                }
                out.push(checked(rec, v, oracle, 0.03));
            }
        }
        m => return Err(CliError::Usage(format!("unknown limit mode '{m}' (bbm | ms | op)"))),
    }
    Ok(out)
}

pub fn trace(opts: &Opts) -> Result<Vec<ReportRecord>, CliError> {
    let s = opts.s.unwrap_or(0.75);
    let nodes = opts.grid.unwrap_or(256);
    let h = 0.1;
    let lo = -((nodes / 2) as f64) * h;
    let line = Grid::new(&[lo], &[lo + (nodes - 1) as f64 * h], &[nodes])?;
    let (name, f) = opts.func("gaussian", 1, opts.interval(-1.0, 1.0))?;
    let v = f.sample(&line, None);
    let bump = Bump::standard();
    let pair = trace_lift(&v, s, &bump)?;
    let err = pair.v.values.iter().zip(&v.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let base = || ReportRecord::new("").input("func", &name).input("s", s).input("grid", format!("{nodes} x {h}")).input("bump", "exp(-1/(1-t^2))");
    let named = |e: &str| {
        let mut r = base();
        r.experiment = format!("trace.{e}");
        r
    };
    let c = trace_constant(s)?;
    let (lhs, rhs) = trace_inequality(&pair, s)?;
    Ok(vec![
        named("round_trip").against(err, 0.0).ok(err < 1e-6),
        named("fourier_residual").against(pair.fourier_residual, 0.0).ok(pair.fourier_residual < 1e-10),
        checked(named("constant"), c, Some(beta(0.5, s - 0.5)), 1e-8),
        named("norm_factor").value(pair.norm_factor.unwrap_or(f64::NAN)),
        named("inequality").against(lhs, rhs).ok(lhs <= rhs),
    ])
}

fn ext_record(name: &str, func: &str, params: FracParams, r: &ExtensionReport) -> ReportRecord {
    ReportRecord::new(format!("extend.{name}"))
        .input("func", func)
        .input("n", params.n())
        .input("s", params.s())
        .input("p", params.p())
        .input("norm_in", r.norm_in)
        .input("norm_out", r.norm_out)
        .input("ratio", r.ratio)
        .input("seminorm_in_p", r.seminorm_in_p)
        .input("lp_in_p", r.lp_in_p)
        .input("lp_out_p", r.lp_out_p)
}

pub fn extend(opts: &Opts, op: &str) -> Result<Vec<ReportRecord>, CliError> {
    let cfg = opts.cfg()?;
    match op {
        "zero" => {
            let n = opts.dim(1)?;
            let params = opts.params(n, 0.25, 2.0)?;
            let (name, f) = opts.func("indicator", n, opts.interval(0.25, 0.75))?;
            let (klo, khi) = match &f {
                Func::Indicator(d) => d.bounding_box().expect("bounded"),
                Func::Bump { center, radius } => (center.iter().map(|c| c - radius).collect(), center.iter().map(|c| c + radius).collect()),
                _ => return Err(CliError::Usage("zero extension needs an indicator or a bump inside (0,1)^n".into())),
            };
            let gap = (0..n).map(|a| klo[a].min(1.0 - khi[a])).fold(f64::INFINITY, f64::min);
            if !(gap > 0.0) {
                return Err(CliError::Usage("the support must lie inside (0,1)^n".into()));
            }
            let k = if n == 1 {
                DomainSpec::interval(klo[0] - 0.5 * gap, khi[0] + 0.5 * gap)?
            } else {
                DomainSpec::boxed(&[klo[0] - 0.5 * gap, klo[1] - 0.5 * gap], &[khi[0] + 0.5 * gap, khi[1] + 0.5 * gap])?
            };
            let cells = opts.grid.unwrap_or(if n == 1 { 1024 } else { 40 });
            let u = f.sample(&box_grid(n, (0.0, 1.0), cells)?, None);
            let r = zero_extend(&u, &box_domain(n, (0.0, 1.0))?, &k, params, &cfg)?;
            let oracle = interval_len(&f).filter(|_| n == 1).and_then(|l| indicator_seminorm(l, params.sp()));
            let rec = settings(ext_record("zero", &name, params, &r).input("grid", cells).input("cross_term", r.cross_term.unwrap_or(f64::NAN)), &cfg);
            let ok = r.ok;
            let rec = checked(rec, r.seminorm_out_p, oracle, 1e-6);
            let ok = ok && rec.ok;
            Ok(vec![rec.ok(ok)])
        }
        "reflect" => {
            let n = opts.dim(2)?;
            let params = opts.params(n, 0.5, 2.0)?;
            let (name, f) = opts.func("gaussian", n, opts.interval(0.0, 1.0))?;
            let cells = opts.grid.unwrap_or(if n == 1 { 400 } else { 24 });
            let g = if n == 1 { Grid::cells(&[0.0], &[1.0], &[cells])? } else { Grid::cells(&[-0.5, 0.0], &[0.5, 1.0], &[cells, cells])? };
            let u = f.sample(&g, None);
            let r = reflect_extend(&u, params, &cfg)?;
            let semi_ratio = if r.seminorm_in_p > 0.0 { r.seminorm_out_p / r.seminorm_in_p } else { 0.0 };
            let rec = settings(ext_record("reflect", &name, params, &r).input("grid", cells).input("lp_ratio", r.lp_out_p / r.lp_in_p), &cfg);
            let mut rec = rec.value(semi_ratio).ok(r.ok);
            rec.oracle = Some(4.0);
            Ok(vec![rec])
        }
        "cutoff" => {
            let n = opts.dim(1)?;
            let params = opts.params(n, 0.5, 2.0)?;
            let (name, f) = opts.func("constant", n, opts.interval(0.0, 1.0))?;
            let cells = opts.grid.unwrap_or(if n == 1 { 1024 } else { 32 });
            let u = f.sample(&box_grid(n, (0.0, 1.0), cells)?, None);
            let mut coef = vec![0.0; n];
            coef[0] = 1.0;
            let psi = Func::Linear { coef, offset: 0.0 };
            let r = cutoff_multiply(&u, &psi, 1.0, params, &box_domain(n, (0.0, 1.0))?, &cfg)?;
            let rec = settings(ext_record("cutoff", &name, params, &r).input("psi", "x_1").input("lambda", 1).input("grid", cells), &cfg);
            let mut rec = rec.value(r.seminorm_out_p).ok(r.ok);
            rec.oracle = r.seminorm_bound_p;
            Ok(vec![rec])
        }
        o => Err(CliError::Usage(format!("unknown extension '{o}' (zero | reflect | cutoff)"))),
    }
}

fn ineq_record(kind: &str, params: FracParams, r: &InequalityReport) -> ReportRecord {
    ReportRecord::new(format!("inequality.{kind}"))
        .input("n", params.n())
        .input("s", params.s())
        .input("p", params.p())
        .input("lhs", r.lhs)
        .input("rhs", r.rhs)
        .input("constant", r.constant_used)
        .input("relation", format!("{:?}", r.relation))
        .input("margin", r.margin)
        .input("degenerate", r.degenerate)
}

pub fn inequality(opts: &Opts, kind: &str, x: &[f64], t: f64, k0: i64) -> Result<Vec<ReportRecord>, CliError> {
    let cfg = opts.cfg()?;
    let rec = match kind {
        "set" => {
            let n = opts.dim(1)?;
            let params = opts.params(n, 0.25, 2.0)?;
            let (a, b) = opts.interval(-0.5, 0.5);
            let c = 0.5 * (a + b);
            let e = if n == 1 { DomainSpec::interval(a, b)? } else { DomainSpec::ball(&[c, 0.0], 0.5 * (b - a))? };
            let x = if x.is_empty() { if n == 1 { vec![c] } else { vec![c, 0.0] } } else { x.to_vec() };
            let r = set_lower_bound(&e, &x, params, &cfg)?;
            let rec = ineq_record(kind, params, &r).input("a", a).input("b", b).input("x", x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";"));
            rec.against(r.lhs, r.constant_used * r.rhs).ok(r.ok)
        }
        "sequence" => {
            let n = opts.dim(1)?;
            let params = opts.params(n, 0.25, 2.0)?;
            let a = if opts.params.is_empty() { (0..10).map(|k| 0.5f64.powi(k)).collect() } else { opts.params.clone() };
            let r = sequence_inequality_check(&a, k0, params, t)?;
            let rec = ineq_record(kind, params, &r).input("T", t).input("k0", k0).input("len", a.len());
            rec.against(r.lhs, r.constant_used * r.rhs).ok(r.ok)
        }
        "levelset" | "sobolev" | "campanato" => {
            let n = opts.dim(1)?;
            let params = opts.params(n, if kind == "campanato" { 0.75 } else { 0.25 }, 2.0)?;
            let ab = opts.interval(0.0, 1.0);
            let (name, f) = opts.func("indicator", n, ab)?;
            let cells = opts.grid.unwrap_or(if n == 1 { 512 } else { 32 });
            let u = f.sample(&box_grid(n, ab, cells)?, None);
            let head = |r: ReportRecord| r.input("func", &name).input("a", ab.0).input("b", ab.1).input("grid", cells);
            match kind {
                "levelset" => {
                    let r = levelset_seminorm_bound(&u, params, &cfg)?;
                    head(ineq_record(kind, params, &r)).value(r.constant_used).ok(r.ok)
                }
                "sobolev" => {
                    let r = sobolev_ratio(&u, params, &cfg)?;
                    let oracle = matches!(f, Func::Indicator(_)).then_some(()).filter(|_| n == 1).and_then(|_| indicator_seminorm(1.0, params.sp()));
                    let rec = head(ineq_record(kind, params, &r)).input("p_star", params.p_star().unwrap_or(f64::NAN));
                    let ok = r.ok;
                    let rec = checked(rec, r.constant_used, oracle, 1e-3);
                    let ok = ok && rec.ok;
                    rec.ok(ok)
                }
                _ => {
                    let dom = box_domain(n, ab)?;
                    let levels = cfg.refine + 4;
                    let c = campanato_seminorm(&u, params, &dom, &campanato_radii(&dom, levels))?;
                    ReportRecord::new("inequality.campanato")
                        .input("n", n)
                        .input("s", params.s())
                        .input("p", params.p())
                        .input("func", &name)
                        .input("a", ab.0)
                        .input("b", ab.1)
                        .input("grid", cells)
                        .input("radii", levels)
                        .input("divergence_suspected", c.divergence_suspected)
                        .input("bound_kind", "lower bound")
                        .value(c.value)
                }
            }
        }
        "holder" => {
            let n = opts.dim(1)?;
            let params = opts.params(n, 0.75, 2.0)?;
            let ab = opts.interval(0.0, 1.0);
            let (name, f) = opts.func("linear", n, ab)?;
            let nodes = opts.grid.unwrap_or(if n == 1 { 401 } else { 25 });
            let g = make_grid(&vec![ab.0; n], &vec![ab.1; n], nodes)?;
            let u = f.sample(&g, None);
            let r = holder_check(&u, params, &box_domain(n, ab)?, &cfg)?;
            let oracle = match &f {
                Func::Linear { coef, .. } if n == 1 => Some(coef[0].abs() * (ab.1 - ab.0).powf(1.0 - r.alpha)),
                Func::Constant(_) => Some(0.0),
                _ => None,
            };
            let rec = ineq_record(kind, params, &r.inequality)
                .input("func", &name)
                .input("grid", nodes)
                .input("alpha", r.alpha)
                .input("sup_norm", r.sup_norm)
                .input("wsp_norm", r.wsp_norm)
                .input("norm_ratio", r.norm_ratio)
                .input("campanato", r.campanato)
                .input("constant_measured", r.constant)
                .input("calibration", r.calibration);
            let ok = r.inequality.ok;
            let rec = checked(rec, r.holder_quotient, oracle, 1e-9);
            let ok = ok && rec.ok;
            rec.ok(ok)
        }
        k => return Err(CliError::Usage(format!("unknown inequality '{k}' (set | sequence | levelset | sobolev | holder | campanato)"))),
    };
    Ok(vec![settings(rec, &cfg)])
}

pub fn counterexample(opts: &Opts, which: Example, kappa: Option<f64>, r: Option<f64>, c_ratio: Option<f64>, j_max: usize, n_funcs: usize) -> Result<Vec<ReportRecord>, CliError> {
    let cfg = opts.cfg()?;
    match which {
        Example::Cusp => {
            let p = opts.p.unwrap_or(2.0);
            let s = opts.s.unwrap_or(0.9);
            let kappa = kappa.unwrap_or(5.0);
            let r = r.unwrap_or(0.1);
            let st = cusp_divergence_study(p, s, kappa, r, j_max, &cfg)?;
            let base = |e: &str| {
                ReportRecord::new(format!("counterexample.cusp.{e}"))
                    .input("p", p)
                    .input("s", s)
                    .input("kappa", kappa)
                    .input("r", r)
                    .input("j_max", j_max)
                    .input("sp-1", s * p - 1.0)
                    .input("(p+1)/(sp-1)", (p + 1.0) / (s * p - 1.0))
                    .input("alpha", st.alpha_con)
            };
            let growth = st.growth.iter().map(|(r, g)| format!("{r}:{g}")).collect::<Vec<_>>().join(";");
            let slope = base("slope").input("growth", growth);
            let slope = checked(slope, st.slope, Some(st.expected_slope), 0.15);
            let mut grad = base("grad_sup").input("identity_residual", st.grad_identity_residual).value(st.grad_sup);
            grad.oracle = Some(PI * PI + 1.0);
            let grad = grad.ok(st.grad_sup <= PI * PI + 1.0 && st.grad_identity_residual <= 1e-10);
            let strips = base("strip_constant")
                .input("fitted_c", st.fitted_c.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";"))
                .input("telescoping_residual", st.telescoping_residual)
                .value(st.c_spread)
                .ok(st.c_spread < 0.05);
            let c: Vec<f64> = st.control.iter().map(|x| x.1).collect();
            let last = c[c.len() - 1];
            let control = base("control")
                .input("cells", st.control.iter().map(|x| x.0.to_string()).collect::<Vec<_>>().join(";"))
                .input("seminorms", c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";"))
                .against(last, c[c.len() - 2]);
            let ok = last.is_finite() && control.rel_err.unwrap_or(1.0) < 0.05;
            Ok(vec![slope, grad, strips, control.ok(ok)])
        }
        Example::Balls => {
            let c = c_ratio.unwrap_or(16.0);
            let s = opts.s.unwrap_or(0.5);
            let st = ball_family_study(c, s, n_funcs, &cfg)?;
            let mut out = Vec::new();
            for (k, h) in st.hs_seminorms.iter().enumerate() {
                let mut rec = ReportRecord::new("counterexample.balls.seminorm")
                    .input("C", c)
                    .input("s", s)
                    .input("n", k + 1)
                    .input("separation_margin", st.separation_margin)
                    .value(*h);
                rec.oracle = Some(st.paper_bound);
                out.push(rec.ok(*h > 0.0 && *h <= st.paper_bound));
            }
            let norm_err = st.f_norms_l2.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
            let min_dist = st.pair_dists.iter().map(|d| d.2).fold(f64::INFINITY, f64::min);
            out.push(ReportRecord::new("counterexample.balls.l2").input("C", c).input("s", s).input("n_funcs", n_funcs).input("norm_max_err", norm_err).against(min_dist, 2f64.sqrt()).ok(norm_err < 1e-10 && (min_dist - 2f64.sqrt()).abs() < 1e-10));
            Ok(out)
        }
    }
}

pub fn suite(name: &str, seed: u64, timing: bool) -> Result<Vec<ReportRecord>, CliError> {
    let suite: Suite = name.parse().map_err(CliError::Usage)?;
    Ok(run_suite(suite, seed, timing))
}

use fracsob::gagliardo::*;
use fracsob::{DomainSpec, FracParams, Grid, GridFunction, QuadConfig, Warning};
use proptest::prelude::*;

fn semi(u: &GridFunction, s: f64, p: f64, dom: &DomainSpec) -> SeminormResult {
    let params = FracParams::new(u.grid.dim(), s, p).unwrap();
    gagliardo_seminorm_p(u, params, dom, &QuadConfig::default()).unwrap()
}

fn unit_interval_cells(n: usize) -> Grid {
    Grid::cells(&[0.0], &[1.0], &[n]).unwrap()
}

fn indicator_on_line(cells_per_unit: usize) -> GridFunction {
    let g = Grid::cells(&[-1.0], &[2.0], &[3 * cells_per_unit]).unwrap();
    GridFunction::from_fn(g, |x| if (0.0..=1.0).contains(&x[0]) { 1.0 } else { 0.0 })
}

/// `int_0^1 int_0^1 |x - y|^{p - 1 - sp}` hand-integrated.
fn linear_oracle(s: f64) -> f64 {
    1.0 / ((1.0 - s) * (3.0 - 2.0 * s))
}

#[test]
fn constant_has_zero_seminorm() {
    let u = GridFunction::from_fn(unit_interval_cells(64), |_| 3.0);
    let dom = DomainSpec::interval(0.0, 1.0).unwrap();
    for (s, p) in [(0.3, 2.0), (0.8, 1.5), (0.5, 4.0)] {
        let r = semi(&u, s, p, &dom);
        assert_eq!(r.seminorm_p, 0.0);
        assert!((r.lp_norm_p - 3f64.powf(p)).abs() < 1e-9 * 3f64.powf(p));
        assert_eq!(r.full_norm_p, r.seminorm_p + r.lp_norm_p);
    }
}

#[test]
fn indicator_on_the_line() {
    // 2 * 2 * int_0^1 x^{-sp} dx / sp = 4 / (sp (1 - sp)) = 16
    let r = semi(&indicator_on_line(100), 0.25, 2.0, &DomainSpec::whole(1));
    assert!((r.seminorm_p - 16.0).abs() < 1e-8, "{}", r.seminorm_p);
    assert_eq!(r.diag_policy.policy, fracsob::DiagPolicy::PiecewiseConstant);
    // all mass on the box itself: only the closed-form exterior contributes
    let u = GridFunction::from_fn(unit_interval_cells(50), |_| 1.0);
    let r = semi(&u, 0.25, 2.0, &DomainSpec::whole(1));
    assert!((r.seminorm_p - 16.0).abs() < 1e-12);
    assert!((r.diag_policy.exterior - 16.0).abs() < 1e-12);
}

#[test]
fn linear_on_unit_interval() {
    let u = GridFunction::from_fn(unit_interval_cells(400), |x| x[0]);
    let dom = DomainSpec::interval(0.0, 1.0).unwrap();
    for s in [0.1, 0.25, 0.5, 0.75, 0.9] {
        let r = semi(&u, s, 2.0, &dom);
        assert!((r.seminorm_p - linear_oracle(s)).abs() < 1e-9 * linear_oracle(s), "s={s}: {}", r.seminorm_p);
    }
    assert!((semi(&u, 0.5, 2.0, &dom).seminorm_p - 1.0).abs() < 1e-9);
}

#[test]
fn bbm_closed_form() {
    let u = GridFunction::from_fn(unit_interval_cells(4096), |x| x[0]);
    let dom = DomainSpec::interval(0.0, 1.0).unwrap();
    let scan = limit_scan(&u, 2.0, LimitMode::Bbm, &[0.5, 0.9, 0.99], &dom).unwrap();
    for (s, v) in scan {
        let target = 1.0 / (3.0 - 2.0 * s);
        assert!((v - target).abs() < 0.01 * target, "s={s}: {v} vs {target}");
    }
    let t = limit_target(&u, 2.0, LimitMode::Bbm, &dom).unwrap();
    assert!((t - 1.0).abs() < 1e-9);
    let c = GridFunction::from_fn(unit_interval_cells(128), |_| 2.0);
    for (_, v) in limit_scan(&c, 2.0, LimitMode::Bbm, &[0.5, 0.99], &dom).unwrap() {
        assert_eq!(v, 0.0);
    }
    assert_eq!(limit_target(&c, 2.0, LimitMode::Bbm, &dom).unwrap(), 0.0);
}

#[test]
fn ms_closed_form() {
    let u = indicator_on_line(200);
    let scan = limit_scan(&u, 2.0, LimitMode::Ms, &[0.01, 0.1, 0.2], &DomainSpec::whole(1)).unwrap();
    for (s, v) in scan {
        let target = 2.0 / (1.0 - 2.0 * s);
        assert!((v - target).abs() < 0.01 * target, "s={s}: {v} vs {target}");
    }
    let t = limit_target(&u, 2.0, LimitMode::Ms, &DomainSpec::whole(1)).unwrap();
    assert!((t - 2.0).abs() < 1e-12);
}

#[test]
fn empty_scan_is_rejected() {
    let u = GridFunction::from_fn(unit_interval_cells(16), |x| x[0]);
    let dom = DomainSpec::interval(0.0, 1.0).unwrap();
    assert!(matches!(limit_scan(&u, 2.0, LimitMode::Bbm, &[], &dom), Err(fracsob::Error::InvalidArgument(_))));
}

#[test]
fn embedding_examples() {
    let dom = DomainSpec::interval(0.0, 1.0).unwrap();
    let u = GridFunction::from_fn(unit_interval_cells(400), |x| x[0]);
    let e = embedding_check(&u, 2.0, 0.25, 0.75, &dom).unwrap();
    assert!(e.ok && e.pointwise);
    assert!((e.lower_p - 0.533_333_333).abs() < 1e-6);
    assert!((e.upper_p - 2.666_666_667).abs() < 1e-6);
    let c = GridFunction::from_fn(unit_interval_cells(32), |_| 1.0);
    let e = embedding_check(&c, 2.0, 0.25, 0.75, &dom).unwrap();
    assert!(e.ok && e.lower_p == 0.0 && e.upper_p == 0.0);
    let chi = GridFunction::from_fn(unit_interval_cells(200), |x| if x[0] < 0.5 { 1.0 } else { 0.0 });
    let e = embedding_check(&chi, 1.0, 0.3, 0.6, &dom).unwrap();
    assert!(e.ok && e.lower_p > 0.0);
    // p = 1 indicator on (0,1): [u] = 2 int_0^{1/2} int_{1/2}^1 |x-y|^{-1-s}
    let oracle = |s: f64| 2.0 * (2.0 * 0.5f64.powf(1.0 - s) - 1.0) / (s * (1.0 - s));
    assert!((e.lower_p - oracle(0.3)).abs() < 1e-9 * oracle(0.3));
    assert!((e.upper_p - oracle(0.6)).abs() < 1e-9 * oracle(0.6));
}

#[test]
fn divergence_flag_for_jumps_at_high_order() {
    let r = semi(&indicator_on_line(50), 0.75, 2.0, &DomainSpec::whole(1));
    assert!(r.warnings.iter().any(|w| matches!(w, Warning::DivergenceSuspected { .. })));
    assert_eq!(r.diag_policy.refined_levels, Some(3));
    let r = semi(&indicator_on_line(50), 0.25, 2.0, &DomainSpec::whole(1));
    assert!(r.warnings.is_empty());
}

/// `[x_1]^2` on the unit square: `4 int_{[0,1]^2} (1-z1)(1-z2) z1^2 |z|^{-2-2s} dz`,
/// in polar coordinates with the radial part done by hand and Simpson in angle.
fn square_linear_oracle(s: f64) -> f64 {
    let radial = |c: f64, sn: f64, r: f64| {
        // int_0^r (1 - t c)(1 - t sn) c^2 t^{1-2s} dt
        let e = 2.0 - 2.0 * s;
        c * c * (r.powf(e) / e - (c + sn) * r.powf(e + 1.0) / (e + 1.0) + c * sn * r.powf(e + 2.0) / (e + 2.0))
    };
    let simpson = |a: f64, b: f64, f: &dyn Fn(f64) -> f64| {
        let m = 2000;
        let h = (b - a) / m as f64;
        let mut acc = f(a) + f(b);
        for i in 1..m {
            acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    };
    let q = std::f64::consts::FRAC_PI_4;
    let lower = simpson(0.0, q, &|t: f64| radial(t.cos(), t.sin(), 1.0 / t.cos()));
    let upper = simpson(q, 2.0 * q, &|t: f64| radial(t.cos(), t.sin(), 1.0 / t.sin()));
    4.0 * (lower + upper)
}

#[test]
fn linear_on_unit_square() {
    let g = Grid::cells(&[0.0, 0.0], &[1.0, 1.0], &[48, 48]).unwrap();
    let u = GridFunction::from_fn(g, |x| x[0]);
    let dom = DomainSpec::boxed(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
    for s in [0.3, 0.7] {
        let r = semi(&u, s, 2.0, &dom);
        let o = square_linear_oracle(s);
        assert!((r.seminorm_p - o).abs() < 2e-3 * o, "s={s}: {} vs {o}", r.seminorm_p);
    }
}

#[test]
fn square_indicator_two_ways() {
    // u = 1 on the whole grid box versus the same square padded with zeros
    let s = 0.3;
    let tight = GridFunction::from_fn(Grid::cells(&[0.0, 0.0], &[1.0, 1.0], &[16, 16]).unwrap(), |_| 1.0);
    let padded = GridFunction::from_fn(Grid::cells(&[-1.0, -1.0], &[2.0, 2.0], &[48, 48]).unwrap(), |x| {
        if (0.0..=1.0).contains(&x[0]) && (0.0..=1.0).contains(&x[1]) { 1.0 } else { 0.0 }
    });
    let a = semi(&tight, s, 2.0, &DomainSpec::whole(2)).seminorm_p;
    let b = semi(&padded, s, 2.0, &DomainSpec::whole(2)).seminorm_p;
    assert!((a - b).abs() < 1e-4 * a, "{a} vs {b}");
}

#[test]
fn masked_ball_excludes_outside() {
    let g = Grid::cells(&[-1.0, -1.0], &[1.0, 1.0], &[24, 24]).unwrap();
    let dom = DomainSpec::ball(&[0.0, 0.0], 1.0).unwrap();
    let u = GridFunction::from_fn(g.clone(), |x| x[0]);
    let wild = GridFunction::from_fn(g, |x| if x[0] * x[0] + x[1] * x[1] <= 1.0 { x[0] } else { 1e6 * x[1] });
    let a = semi(&u, 0.5, 2.0, &dom).seminorm_p;
    let b = semi(&wild, 0.5, 2.0, &dom).seminorm_p;
    assert!(a > 0.0 && ((a - b) / a).abs() < 0.05);
}

#[test]
fn refinement_is_cauchy() {
    let dom = DomainSpec::interval(0.0, 1.0).unwrap();
    let vals: Vec<f64> = [32, 64, 128, 256, 512]
        .iter()
        .map(|&n| semi(&GridFunction::from_fn(unit_interval_cells(n), |x| (3.0 * x[0]).sin()), 0.6, 2.0, &dom).seminorm_p)
        .collect();
    let diffs: Vec<f64> = vals.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    for d in diffs.windows(2) {
        assert!(d[1] < d[0], "{diffs:?}");
    }
}

#[test]
fn est_error_tracks_resolution() {
    let dom = DomainSpec::interval(0.0, 1.0).unwrap();
    let f = |n| semi(&GridFunction::from_fn(unit_interval_cells(n), |x| (3.0 * x[0]).sin()), 0.6, 2.0, &dom).est_error;
    assert!(f(256) < f(64));
}

fn random_values(len: usize, seed: u64) -> Vec<f64> {
    let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    (0..len)
        .map(|_| {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (x >> 11) as f64 / (1u64 << 53) as f64
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn symmetry_of_the_double_sum(seed in 0u64..1000, s in 0.05f64..0.95, p in 1.0f64..3.0, two_d in any::<bool>()) {
        let g = if two_d { Grid::cells(&[0.0, 0.0], &[1.0, 0.5], &[9, 7]).unwrap() } else { unit_interval_cells(23) };
        let u = GridFunction::new(g.clone(), random_values(g.len(), seed), None).unwrap();
        let dom = if two_d { DomainSpec::boxed(&[0.0, 0.0], &[1.0, 0.5]).unwrap() } else { DomainSpec::interval(0.0, 1.0).unwrap() };
        let params = FracParams::new(g.dim(), s, p).unwrap();
        let half = gagliardo_seminorm_p(&u, params, &dom, &QuadConfig::default()).unwrap().seminorm_p;
        let full = gagliardo_seminorm_p_unsymmetrized(&u, params, &dom, &QuadConfig::default()).unwrap();
        prop_assert!((half - full).abs() <= 1e-12 * full.abs());
    }

    #[test]
    fn scaling_law(s in 0.05f64..0.95, p in 1.0f64..3.0, big in any::<bool>(), linear in any::<bool>()) {
        let lambda = if big { 2.0 } else { 0.5 };
        let g = Grid::cells(&[-0.5], &[1.5], &[60]).unwrap();
        let f = move |x: [f64; 2]| if linear { x[0] } else if (0.0..=1.0).contains(&x[0]) { 1.0 } else { 0.0 };
        let u = GridFunction::from_fn(g.clone(), f);
        let ul = GridFunction::from_fn(g.dilate(lambda), move |x| f([x[0] / lambda, 0.0]));
        let dom = DomainSpec::interval(-0.5, 1.5).unwrap();
        let doml = DomainSpec::interval(-0.5 * lambda, 1.5 * lambda).unwrap();
        let params = FracParams::new(1, s, p).unwrap();
        let cfg = QuadConfig { diag_policy: if linear { fracsob::DiagPolicy::Lipschitz } else { fracsob::DiagPolicy::PiecewiseConstant }, ..QuadConfig::default() };
        let a = gagliardo_seminorm_p(&u, params, &dom, &cfg).unwrap().seminorm_p;
        let b = gagliardo_seminorm_p(&ul, params, &doml, &cfg).unwrap().seminorm_p;
        let expect = lambda.powf(1.0 - s * p) * a;
        prop_assert!((b - expect).abs() <= 1e-10 * expect.abs(), "{} vs {}", b, expect);
    }

    #[test]
    fn values_are_nonnegative(seed in 0u64..1000, s in 0.05f64..0.95, p in 1.0f64..3.0) {
        let g = unit_interval_cells(31);
        let u = GridFunction::new(g.clone(), random_values(g.len(), seed), None).unwrap();
        let r = gagliardo_seminorm_p(&u, FracParams::new(1, s, p).unwrap(), &DomainSpec::whole(1), &QuadConfig::default()).unwrap();
        prop_assert!(r.seminorm_p >= 0.0 && r.lp_norm_p >= 0.0);
        prop_assert_eq!(r.full_norm_p, r.seminorm_p + r.lp_norm_p);
    }
}

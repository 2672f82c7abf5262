use fracsob::inequalities::*;
use fracsob::{make_grid, DomainSpec, Error, FracParams, Func, Grid, GridFunction, QuadConfig};
use proptest::prelude::*;

fn params(n: usize, s: f64, p: f64) -> FracParams {
    FracParams::new(n, s, p).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn centred_interval_is_the_equality_case() {
    let cfg = QuadConfig::default();
    let pr = params(1, 0.25, 2.0);
    let t = pr.sp();
    for l in [0.5, 1.0, 3.0] {
        let e = DomainSpec::interval(-0.5 * l, 0.5 * l).unwrap();
        let r = set_lower_bound(&e, &[0.0], pr, &cfg).unwrap();
        let oracle = 2f64.powf(1.0 + t) / t * l.powf(-t);
        assert!(rel(r.lhs, oracle) < 1e-12);
        assert!(rel(r.constant_used * r.rhs, oracle) < 1e-12);
        assert!(r.ok && r.margin.abs() < 1e-9);
        let off = set_lower_bound(&e, &[0.2 * l], pr, &cfg).unwrap();
        assert!(off.lhs > r.lhs && off.margin > 0.0);
    }
    assert!(matches!(set_lower_bound(&DomainSpec::whole(1), &[0.0], pr, &cfg), Err(Error::InvalidArgument(_))));
}

#[test]
fn centred_disc_is_the_equality_case() {
    let pr = params(2, 0.5, 2.0);
    let e = DomainSpec::ball(&[0.3, -0.2], 0.8).unwrap();
    let r = set_lower_bound(&e, &[0.3, -0.2], pr, &QuadConfig::default()).unwrap();
    // 2 pi rho^{-sp} / sp
    let oracle = 2.0 * std::f64::consts::PI * 0.8f64.powf(-1.0) / 1.0;
    assert!(rel(r.lhs, oracle) < 1e-10);
    assert!(rel(r.constant_used * r.rhs, oracle) < 1e-10);
    let off = set_lower_bound(&e, &[0.6, -0.2], pr, &QuadConfig::default()).unwrap();
    assert!(off.margin > 0.0);
    // a square of the same area, centred
    let side = (std::f64::consts::PI * 0.64f64).sqrt();
    let sq = DomainSpec::boxed(&[-side / 2.0, -side / 2.0], &[side / 2.0, side / 2.0]).unwrap();
    let q = set_lower_bound(&sq, &[0.0, 0.0], pr, &QuadConfig::default()).unwrap();
    assert!(q.lhs > oracle && q.ok);
}

#[test]
fn two_intervals_beat_one() {
    let pr = params(1, 0.3, 2.0);
    let e = DomainSpec::ball_union(vec![(vec![0.0], 0.25), (vec![2.0], 0.25)]).unwrap();
    let r = set_lower_bound(&e, &[0.1], pr, &QuadConfig::default()).unwrap();
    // direct: outside (-0.25, 0.25) u (1.75, 2.25) seen from 0.1
    let t = pr.sp();
    let f = |d: f64| d.powf(-t) / t;
    let direct = f(0.35) + f(0.15) - f(1.65) + f(2.15);
    assert!(rel(r.lhs, direct) < 1e-12);
    assert!(r.ok && r.margin > 0.0);
    let outside = set_lower_bound(&e, &[1.0], pr, &QuadConfig::default()).unwrap();
    assert!(outside.lhs.is_infinite() && outside.ok);
}

#[test]
fn random_unions_of_intervals_are_not_better_than_the_ball() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let pr = params(1, 0.4, 2.0);
    for _ in 0..50 {
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
        let pick = rng.gen_range(0..m);
        let (c, r) = &balls[pick];
        let x = c[0] + rng.gen_range(-0.9..0.9) * r;
        let e = DomainSpec::ball_union(balls.clone()).unwrap();
        let rep = set_lower_bound(&e, &[x], pr, &QuadConfig::default()).unwrap();
        assert!(rep.ok, "{rep:?}");
    }
}

#[test]
fn sequence_examples() {
    let pr = params(1, 0.25, 2.0);
    // a = (1, 0, ...): X = 1 and Y = T^{-1} from the continued k = -1 term
    let r = sequence_inequality_check(&[1.0], 0, pr, 2.0).unwrap();
    assert_eq!(r.lhs, 1.0);
    assert!((r.rhs - 0.5).abs() < 1e-15);
    assert!(r.ok);
    // a_k = 2^{-k}, 0 <= k < 10, constant 1 on -5..0
    let mut a = vec![1.0; 5];
    a.extend((0..10).map(|k| 0.5f64.powi(k)));
    let r = sequence_inequality_check(&a, -5, pr, 2.0).unwrap();
    assert_eq!(r.constant_used, 4.0);
    let x: f64 = (-5..10).map(|k: i32| if k < 0 { 1.0 } else { 0.5f64.powi(k) }.sqrt() * 2f64.powi(k)).sum();
    assert!(rel(r.lhs, x) < 1e-14);
    assert!(r.ok, "{r:?}");
    assert!(matches!(sequence_inequality_check(&[1.0, 2.0], 0, pr, 2.0), Err(Error::InvalidArgument(_))));
    assert!(matches!(sequence_inequality_check(&[1.0], 0, pr, 1.0), Err(Error::InvalidArgument(_))));
    assert!(matches!(sequence_inequality_check(&[1.0], 0, params(1, 0.75, 2.0), 2.0), Err(Error::WrongRegime(_))));
}

#[test]
fn level_profiles() {
    let g = Grid::cells(&[0.0], &[3.0], &[300]).unwrap();
    let chi = GridFunction::from_fn(g.clone(), |_| 1.0);
    let prof = level_profile(&chi);
    assert!((prof.a(-1) - 3.0).abs() < 1e-12 && (prof.a(-7) - 3.0).abs() < 1e-12);
    assert_eq!(prof.a(0), 0.0);
    assert_eq!(prof.a(3), 0.0);
    let zero = level_profile(&GridFunction::zeros(g));
    assert!((-5..5).all(|k| zero.a(k) == 0.0));
    let fine = Grid::cells(&[-6.0], &[6.0], &[120_000]).unwrap();
    let gauss = Func::Gaussian { sigma: 1.0 }.sample(&fine, None);
    let prof = level_profile(&gauss);
    let oracle = 2.0 * (2.0 * 2f64.ln()).sqrt();
    assert!((prof.a(-1) - oracle).abs() <= 2.0 * fine.spacing(0));
}

#[test]
fn level_set_examples() {
    let g = Grid::cells(&[0.0], &[1.0], &[512]).unwrap();
    let chi = GridFunction::from_fn(g, |_| 1.0);
    let pr = params(1, 0.25, 2.0);
    let r = levelset_seminorm_bound(&chi, pr, &QuadConfig::default()).unwrap();
    assert!(rel(r.lhs, 16.0) < 1e-9, "{}", r.lhs);
    // a_k = 1 for k <= -1: sum_{k <= -2} 4^k
    assert!(rel(r.rhs, 1.0 / 12.0) < 1e-14, "{}", r.rhs);
    assert!(r.ok);
    let z = levelset_seminorm_bound(&GridFunction::zeros(Grid::cells(&[0.0], &[1.0], &[8]).unwrap()), pr, &QuadConfig::default()).unwrap();
    assert!(z.ok && z.degenerate);
    let ratios: Vec<f64> = [0.5, 1.0, 2.0]
        .iter()
        .map(|l| levelset_seminorm_bound(&dilate(&chi, *l), pr, &QuadConfig::default()).unwrap().constant_used)
        .collect();
    assert!(ratios.iter().all(|r| rel(*r, ratios[1]) < 1e-9), "{ratios:?}");
}

#[test]
fn sobolev_ratio_examples() {
    let cfg = QuadConfig::default();
    let pr = params(1, 0.25, 2.0);
    let chi = GridFunction::from_fn(Grid::cells(&[0.0], &[1.0], &[512]).unwrap(), |_| 1.0);
    let r = sobolev_ratio(&chi, pr, &cfg).unwrap();
    assert!(rel(r.rhs, 1.0) < 1e-12);
    assert!(rel(r.lhs, 16.0) < 1e-9);
    assert!(rel(r.constant_used, 16.0) < 1e-9);
    let gauss = Func::Gaussian { sigma: 1.0 }.sample(&Grid::cells(&[-9.0], &[9.0], &[1800]).unwrap(), None);
    for f in [&chi, &gauss] {
        let base = sobolev_ratio(f, pr, &cfg).unwrap().constant_used;
        for l in [0.5, 2.0] {
            let c = sobolev_ratio(&dilate(f, l), pr, &cfg).unwrap().constant_used;
            assert!(rel(c, base) < 1e-3, "lambda {l}: {c} vs {base}");
        }
    }
    let z = sobolev_ratio(&GridFunction::zeros(Grid::cells(&[0.0], &[1.0], &[8]).unwrap()), pr, &cfg).unwrap();
    assert!(z.degenerate && z.ok);
    assert!(matches!(sobolev_ratio(&chi, params(1, 0.5, 2.0), &cfg), Err(Error::WrongRegime(_))));
}

#[test]
fn campanato_examples() {
    let dom = DomainSpec::interval(0.0, 1.0).unwrap();
    let g = Grid::cells(&[0.0], &[1.0], &[400]).unwrap();
    let pr = params(1, 0.75, 2.0);
    let radii = campanato_radii(&dom, 6);
    let c = campanato_seminorm(&GridFunction::from_fn(g.clone(), |_| 2.0), pr, &dom, &radii).unwrap();
    assert_eq!(c.value, 0.0);
    // f = x: on (l, r) the oscillation is (r - l)^3 / 12
    let lin = GridFunction::from_fn(g.clone(), |x| x[0]);
    let c = campanato_seminorm(&lin, pr, &dom, &radii).unwrap();
    let mut best: f64 = 0.0;
    for &rho in &radii {
        for i in 0..4000 {
            let x0 = (i as f64 + 0.5) / 4000.0;
            let (l, r) = ((x0 - rho).max(0.0), (x0 + rho).min(1.0));
            best = best.max((r - l).powi(3) / 12.0 * rho.powf(-1.5));
        }
    }
    assert!(rel(c.value, best.sqrt()) < 1e-2, "{} vs {}", c.value, best.sqrt());
    // interior balls: (2/3) rho^{3/2}, increasing in rho
    let inner: Vec<f64> = c.per_radius.iter().map(|x| x.1).collect();
    assert!(inner[1..].windows(2).all(|w| w[0] >= w[1]));
    assert!(!c.divergence_suspected);
    let step = GridFunction::from_fn(g, |x| if x[0] < 0.5 { 0.0 } else { 1.0 });
    let c = campanato_seminorm(&step, pr, &dom, &campanato_radii(&dom, 7)).unwrap();
    assert!(c.divergence_suspected && c.value > 0.0);
    let cusp = DomainSpec::cusp_heart(3.0).unwrap();
    let e = campanato_seminorm(&lin, params(2, 0.75, 4.0), &cusp, &[0.5]).unwrap_err();
    assert!(matches!(e, Error::UnsupportedDomain(_)));
}

#[test]
fn holder_examples() {
    let cfg = QuadConfig::default();
    let pr = params(1, 0.75, 2.0);
    let dom = DomainSpec::interval(0.0, 1.0).unwrap();
    let g = make_grid(&[0.0], &[1.0], 401).unwrap();
    let lin = GridFunction::from_fn(g.clone(), |x| x[0]);
    let r = holder_check(&lin, pr, &dom, &cfg).unwrap();
    assert_eq!(r.alpha, 0.25);
    assert!((r.holder_quotient - 1.0).abs() < 1e-12);
    assert!(rel(r.constant, r.calibration) < 1e-12 && r.inequality.ok);
    let c = holder_check(&GridFunction::from_fn(g, |_| 3.0), pr, &dom, &cfg).unwrap();
    assert_eq!(c.holder_quotient, 0.0);
    assert!(c.inequality.ok);
    let dom = DomainSpec::interval(-4.0, 4.0).unwrap();
    let g = Grid::cells(&[-4.0], &[4.0], &[400]).unwrap();
    let fine = Grid::cells(&[-4.0], &[4.0], &[800]).unwrap();
    let pr = params(1, 0.9, 2.0);
    let a = holder_check(&Func::Gaussian { sigma: 1.0 }.sample(&g, None), pr, &dom, &cfg).unwrap();
    let b = holder_check(&Func::Gaussian { sigma: 1.0 }.sample(&fine, None), pr, &dom, &cfg).unwrap();
    assert!(a.norm_ratio.is_finite() && a.inequality.ok);
    assert!(rel(a.norm_ratio, b.norm_ratio) < 2e-2, "{} vs {}", a.norm_ratio, b.norm_ratio);
    assert!(matches!(holder_check(&lin, params(1, 0.25, 2.0), &DomainSpec::interval(0.0, 1.0).unwrap(), &cfg), Err(Error::WrongRegime(_))));
}

proptest! {
    #[test]
    fn sequence_inequality_holds(
        seed_vals in proptest::collection::vec(0.0f64..1.0, 1..30),
        n in 1usize..=2,
        sp_idx in 0usize..4,
        t_idx in 0usize..3,
        k0 in -6i64..6,
    ) {
        let sp = [0.2, 0.4, 0.6, 0.8][sp_idx] * n as f64;
        let t = [1.5, 2.0, 4.0][t_idx];
        let mut a = seed_vals.clone();
        a.sort_by(|x, y| y.total_cmp(x));
        let r = sequence_inequality_check(&a, k0, FracParams::new(n, sp / 2.0, 2.0).unwrap(), t).unwrap();
        prop_assert!(r.ok, "{:?}", r);
    }

    #[test]
    fn level_profile_consistency(vals in proptest::collection::vec(-50.0f64..50.0, 2..200)) {
        let g = Grid::cells(&[0.0], &[1.0], &[vals.len()]).unwrap();
        let f = GridFunction::new(g, vals, None).unwrap();
        let prof = level_profile(&f);
        let lp = f.lp_norm_p(2.0);
        for k in prof.thresholds() {
            let tail: u64 = (k..prof.thresholds().end + 1).map(|l| prof.d_count(l)).sum();
            prop_assert_eq!(tail, prof.count(k));
            prop_assert!(4f64.powi(k as i32) * prof.a(k) <= lp * (1.0 + 1e-12));
            prop_assert!(prof.count(k) >= prof.count(k + 1));
        }
    }
}

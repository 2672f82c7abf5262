use std::f64::consts::PI;

use fracsob::exttrace::*;
use fracsob::{DomainSpec, Error, FracParams, Func, Grid, GridFunction, QuadConfig};
use proptest::prelude::*;

fn params(n: usize, s: f64, p: f64) -> FracParams {
    FracParams::new(n, s, p).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn zero_extension_of_an_inner_indicator() {
    // [chi_(0,L)]^2 over R is L^{1-2s} 4 / (2s (1-2s)); L = 1/2, s = 1/4
    let g = Grid::cells(&[0.0], &[1.0], &[1024]).unwrap();
    let u = Func::Indicator(DomainSpec::interval(0.25, 0.75).unwrap()).sample(&g, None);
    let omega = DomainSpec::interval(0.0, 1.0).unwrap();
    let k = DomainSpec::interval(0.2, 0.8).unwrap();
    let r = zero_extend(&u, &omega, &k, params(1, 0.25, 2.0), &QuadConfig::default()).unwrap();
    let oracle = 0.5f64.sqrt() * 16.0;
    assert!(rel(r.seminorm_out_p, oracle) < 1e-9, "{}", r.seminorm_out_p);
    assert!(r.ok);
    // the outside interaction closes the gap to well inside the midpoint error
    let gap = r.seminorm_out_p - r.seminorm_in_p;
    assert!(rel(r.cross_term.unwrap(), gap) < 1e-5);
}

#[test]
fn zero_extension_trivial_and_bump() {
    let g = Grid::cells(&[0.0], &[1.0], &[600]).unwrap();
    let omega = DomainSpec::interval(0.0, 1.0).unwrap();
    let k = DomainSpec::interval(0.3, 0.7).unwrap();
    let zero = GridFunction::zeros(g.clone());
    let r = zero_extend(&zero, &omega, &k, params(1, 0.4, 2.0), &QuadConfig::default()).unwrap();
    assert_eq!((r.norm_in, r.norm_out, r.ratio), (0.0, 0.0, 0.0));
    let bump = Func::Bump { center: vec![0.5], radius: 1.0 / 6.0 }.sample(&g, None);
    let r = zero_extend(&bump, &omega, &k, params(1, 0.4, 2.0), &QuadConfig::default()).unwrap();
    assert!(r.ok);
    assert!(r.ratio >= 1.0 && r.ratio.is_finite());
}

#[test]
fn zero_extension_in_the_plane() {
    let g = Grid::cells(&[0.0, 0.0], &[1.0, 1.0], &[40, 40]).unwrap();
    let u = Func::Bump { center: vec![0.5, 0.5], radius: 0.3 }.sample(&g, None);
    let omega = DomainSpec::boxed(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
    let k = DomainSpec::ball(&[0.5, 0.5], 0.32).unwrap();
    let r = zero_extend(&u, &omega, &k, params(2, 0.5, 2.0), &QuadConfig::default()).unwrap();
    assert!(r.ok, "{r:?}");
    let gap = r.seminorm_out_p - r.seminorm_in_p;
    assert!(rel(r.cross_term.unwrap(), gap) < 1e-3);
}

#[test]
fn zero_extension_preconditions() {
    let g = Grid::cells(&[0.0], &[1.0], &[100]).unwrap();
    let omega = DomainSpec::interval(0.0, 1.0).unwrap();
    let ones = GridFunction::from_fn(g, |_| 1.0);
    let k = DomainSpec::interval(0.25, 0.75).unwrap();
    let e = zero_extend(&ones, &omega, &k, params(1, 0.3, 2.0), &QuadConfig::default()).unwrap_err();
    assert!(matches!(e, Error::PreconditionViolation(_)));
    let touching = DomainSpec::interval(0.0, 0.75).unwrap();
    let e = zero_extend(&ones, &omega, &touching, params(1, 0.3, 2.0), &QuadConfig::default()).unwrap_err();
    assert!(matches!(e, Error::PreconditionViolation(_)));
}

#[test]
fn reflection_of_constants_and_linear() {
    let g = Grid::cells(&[-0.5, 0.0], &[0.5, 1.0], &[24, 24]).unwrap();
    let one = GridFunction::from_fn(g.clone(), |_| 1.0);
    let r = reflect_extend(&one, params(2, 0.5, 2.0), &QuadConfig::default()).unwrap();
    assert!((r.lp_out_p / r.lp_in_p - 2.0).abs() < 1e-12);
    assert_eq!(r.seminorm_out_p, 0.0);
    assert!(r.ok);
    let lin = GridFunction::from_fn(g, |x| x[1]);
    let r = reflect_extend(&lin, params(2, 0.5, 2.0), &QuadConfig::default()).unwrap();
    assert!(r.ok);
    assert!(r.seminorm_out_p / r.seminorm_in_p <= 4.0);
}

#[test]
fn reflection_of_a_half_gaussian() {
    let g = Grid::cells(&[0.0], &[4.0], &[800]).unwrap();
    let u = Func::Gaussian { sigma: 1.0 }.sample(&g, None);
    let r = reflect_extend(&u, params(1, 0.6, 2.0), &QuadConfig::default()).unwrap();
    assert!(r.ok);
    assert!((r.lp_out_p / r.lp_in_p - 2.0).abs() < 1e-10);
    assert!(r.seminorm_out_p / r.seminorm_in_p <= 4.0);
}

#[test]
fn reflection_needs_a_half_box() {
    let g = Grid::cells(&[0.0], &[1.0], &[10]).unwrap();
    let shifted = Grid::cells(&[0.1], &[1.0], &[10]).unwrap();
    assert!(reflect_extend(&GridFunction::zeros(g), params(1, 0.5, 2.0), &QuadConfig::default()).is_ok());
    let e = reflect_extend(&GridFunction::zeros(shifted), params(1, 0.5, 2.0), &QuadConfig::default()).unwrap_err();
    assert!(matches!(e, Error::InvalidArgument(_)));
}

#[test]
fn cutoff_examples() {
    let g = Grid::cells(&[0.0], &[1.0], &[4096]).unwrap();
    let dom = DomainSpec::interval(0.0, 1.0).unwrap();
    let one = GridFunction::from_fn(g.clone(), |_| 1.0);
    let cfg = QuadConfig::default();
    let pr = params(1, 0.5, 2.0);
    let r = cutoff_multiply(&one, &Func::Linear { coef: vec![1.0], offset: 0.0 }, 1.0, pr, &dom, &cfg).unwrap();
    // [x]^2 on (0,1) is 1/((1-s)(3-2s)) = 1 at s = 1/2
    assert!(rel(r.seminorm_out_p, 1.0) < 1e-9, "{}", r.seminorm_out_p);
    assert!(r.ok);
    assert!((r.cross_term.unwrap() - 4.0).abs() < 1e-12);
    let gauss = Func::Gaussian { sigma: 0.3 }.sample(&g, None);
    let r = cutoff_multiply(&gauss, &Func::Constant(1.0), 0.0, pr, &dom, &cfg).unwrap();
    assert_eq!(r.ratio, 1.0);
    let r = cutoff_multiply(&gauss, &Func::Constant(0.0), 0.0, pr, &dom, &cfg).unwrap();
    assert_eq!((r.norm_out, r.ratio), (0.0, 0.0));
    let e = cutoff_multiply(&gauss, &Func::Constant(1.5), 0.0, pr, &dom, &cfg).unwrap_err();
    assert!(matches!(e, Error::InvalidArgument(_)));
}

fn separable(g: &Grid, a: f64, b: f64) -> GridFunction {
    GridFunction::from_fn(g.clone(), |x| (-x[0] * x[0] / (2.0 * a * a)).exp() * (-(x[1] - 0.3) * (x[1] - 0.3) / (2.0 * b * b)).exp())
}

#[test]
fn restriction_of_separable_and_odd_fields() {
    let g = Grid::new(&[-10.0, -10.0], &[10.0, 10.0], &[161, 129]).unwrap();
    let u = separable(&g, 1.0, 0.7);
    let t = trace_restrict(&u).unwrap();
    let h0 = (-0.09f64 / (2.0 * 0.49)).exp();
    for (k, v) in t.v.values.iter().enumerate() {
        let x = t.v.grid.coord(0, k);
        assert!((v - (-x * x / 2.0).exp() * h0).abs() < 1e-14);
    }
    assert!(t.fourier_residual < 1e-10, "{}", t.fourier_residual);
    let odd = GridFunction::from_fn(g, |x| x[1] * (-x[0] * x[0] - x[1] * x[1]).exp());
    let t = trace_restrict(&odd).unwrap();
    assert!(t.v.values.iter().all(|v| *v == 0.0));
    let no_row = Grid::new(&[-1.0, -1.0], &[1.0, 1.0], &[8, 8]).unwrap();
    assert!(matches!(trace_restrict(&GridFunction::zeros(no_row)), Err(Error::InvalidArgument(_))));
}

#[test]
fn lift_round_trip() {
    let line = Grid::new(&[-12.8], &[12.7], &[256]).unwrap();
    let v = Func::Gaussian { sigma: 1.0 }.sample(&line, None);
    let bump = Bump::standard();
    for s in [0.6, 0.75, 0.9] {
        let t = trace_lift(&v, s, &bump).unwrap();
        let err = t.v.values.iter().zip(&v.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-6, "s = {s}: {err}");
        assert!(t.fourier_residual < 1e-10);
    }
    let t = trace_lift(&GridFunction::zeros(line.clone()), 0.75, &bump).unwrap();
    assert!(t.u2d.values.iter().all(|x| *x == 0.0));
    assert!(matches!(trace_lift(&v, 0.5, &bump), Err(Error::TraceUndefined { .. })));
}

#[test]
fn bump_and_trace_constant() {
    let b = Bump::standard();
    let n = 20000;
    let mass: f64 = (0..n).map(|k| b.eval(-1.0 + 2.0 * (k as f64 + 0.5) / n as f64)).sum::<f64>() * 2.0 / n as f64;
    assert!((mass - 1.0).abs() < 1e-12);
    assert!((trace_constant(1.0).unwrap() - PI).abs() < 1e-8);
    // int (1+t^2)^{-s} = B(1/2, s - 1/2)
    for s in [0.6, 0.75, 0.9, 2.5] {
        let beta = statrs::function::beta::beta(0.5, s - 0.5);
        assert!(rel(trace_constant(s).unwrap(), beta) < 1e-9, "s = {s}");
    }
    assert!(matches!(trace_constant(0.5), Err(Error::TraceUndefined { .. })));
    // phi^2 weighted integral by a fine midpoint sum
    let f = |t: f64| (1.0 + t * t).powf(0.75) * b.eval(t).powi(2);
    let mid: f64 = (0..n).map(|k| f(-1.0 + 2.0 * (k as f64 + 0.5) / n as f64)).sum::<f64>() * 2.0 / n as f64;
    assert!(rel(b.norm_factor(0.75), mid) < 1e-10);
}

#[test]
fn trace_inequality_on_separable_gaussians() {
    let g = Grid::new(&[-12.0, -12.0], &[12.0, 12.0], &[193, 193]).unwrap();
    for (a, b) in [(1.0, 1.0), (0.5, 2.0), (2.0, 0.4), (1.5, 0.8)] {
        let t = trace_restrict(&separable(&g, a, b)).unwrap();
        for s in [0.6, 0.75, 0.9] {
            let (lhs, rhs) = trace_inequality(&t, s).unwrap();
            assert!(lhs > 0.0 && lhs <= rhs, "a={a} b={b} s={s}: {lhs} > {rhs}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]
    #[test]
    fn reflection_corpus(c0 in -0.4f64..0.4, c1 in 0.0f64..1.0, w in 0.15f64..0.6, k in 0.0f64..4.0, s in 0.1f64..0.9) {
        let g = Grid::cells(&[-0.5, 0.0], &[0.5, 1.0], &[16, 16]).unwrap();
        let u = GridFunction::from_fn(g, |x| {
            let r2 = (x[0] - c0).powi(2) + (x[1] - c1).powi(2);
            (-r2 / (2.0 * w * w)).exp() + 0.3 * (k * x[0] + x[1]).cos()
        });
        let r = reflect_extend(&u, params(2, s, 2.0), &QuadConfig::default()).unwrap();
        prop_assert!((r.lp_out_p / r.lp_in_p - 2.0).abs() < 1e-10);
        prop_assert!(r.seminorm_out_p <= 4.0 * r.seminorm_in_p + r.tolerance);
    }
}

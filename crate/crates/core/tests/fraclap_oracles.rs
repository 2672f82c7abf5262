use fracsob::catalog::{Field, Interpolated};
use fracsob::fraclap::*;
use fracsob::gagliardo::gagliardo_seminorm_p;
use fracsob::{DomainSpec, Error, FracParams, Func, Grid, GridFunction, QuadConfig, TailMode, Warning};
use proptest::prelude::*;
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

const GAUSS: Func = Func::Gaussian { sigma: 1.0 };

/// `(-Δ)^s exp(-|x|^2/2)` at the origin: `2^s Gamma(s + n/2) / Gamma(n/2)`.
fn gauss_at_origin(n: usize, s: f64) -> f64 {
    let h = n as f64 / 2.0;
    2f64.powf(s) * gamma(s + h) / gamma(h)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Box of `n` nodes per axis with spacing `h`, node `n/2` at the origin.
fn centred_grid(dim: usize, n: usize, h: f64) -> Grid {
    let lo = -((n / 2) as f64) * h;
    let hi = lo + (n - 1) as f64 * h;
    Grid::new(&vec![lo; dim], &vec![hi; dim], &vec![n; dim]).unwrap()
}

fn spectral_gauss(dim: usize, s: f64) -> FlapResult {
    let g = if dim == 1 { centred_grid(1, 8192, 0.25) } else { centred_grid(2, 512, 0.4) };
    flap_spectral(&GAUSS.sample(&g, None), s).unwrap()
}

#[test]
fn constants_are_annihilated() {
    let c = Func::Constant(2.5);
    let cfg = QuadConfig::default();
    for s in [0.25, 0.75] {
        for x in [vec![0.3], vec![0.1, -0.2]] {
            assert!(flap_quotient(&c, &[x.clone()], s, &cfg).unwrap().values[0].abs() < 1e-12);
            assert!(flap_pv(&c, &[x], s, &cfg).unwrap().values[0].abs() < 1e-12);
        }
    }
    let u = GridFunction::from_fn(centred_grid(1, 64, 0.1), |_| 2.5);
    let r = flap_spectral(&u, 0.5).unwrap();
    assert!(r.values.iter().all(|v| v.abs() < 1e-12));
    assert!(r.warnings.iter().any(|w| matches!(w, Warning::Periodization { .. })));
}

#[test]
fn gaussian_at_origin_quotient_and_pv() {
    let cfg = QuadConfig::default();
    for n in [1, 2] {
        for s in [0.25, 0.5, 0.75] {
            let x = vec![0.0; n];
            let q = flap_quotient(&GAUSS, &[x.clone()], s, &cfg).unwrap();
            let p = flap_pv(&GAUSS, &[x], s, &cfg).unwrap();
            let o = gauss_at_origin(n, s);
            assert!(rel(q.values[0], o) < 1e-8, "quotient n={n} s={s}: {} vs {o}", q.values[0]);
            assert!(rel(p.values[0], o) < 1e-8, "pv n={n} s={s}: {} vs {o}", p.values[0]);
            assert!(q.warnings.is_empty());
        }
    }
    let q = flap_quotient(&GAUSS, &[vec![0.0]], 0.5, &cfg).unwrap();
    assert!((q.values[0] - (2.0 / PI).sqrt()).abs() < 1e-10);
}

#[test]
fn near_one_recovers_minus_laplacian() {
    let q = flap_quotient(&GAUSS, &[vec![0.0]], 0.999, &QuadConfig::default()).unwrap();
    assert!((q.values[0] - 1.0).abs() < 0.02, "{}", q.values[0]);
}

#[test]
fn spectral_gaussian_at_origin() {
    for n in [1, 2] {
        for s in [0.25, 0.5, 0.75] {
            let r = spectral_gauss(n, s);
            let v = r.value_at(&vec![0.0; n]);
            assert!(rel(v, gauss_at_origin(n, s)) < 1e-4, "n={n} s={s}: {v}");
            assert!(r.warnings.is_empty());
        }
    }
    let v = spectral_gauss(1, 0.5).value_at(&[0.0]);
    assert!((v - (2.0 / PI).sqrt()).abs() < 1e-4);
    // s = 1 reduces to -u''
    let v = spectral_gauss(1, 1.0).value_at(&[0.0]);
    assert!((v - 1.0).abs() < 1e-8);
}

#[test]
fn three_definitions_agree_off_centre() {
    let cfg = QuadConfig::default();
    for (n, pts) in [(1, vec![vec![0.0], vec![0.5], vec![2.5]]), (2, vec![vec![0.0, 0.0], vec![0.4, 0.8], vec![2.0, -1.2]])] {
        for s in [0.25, 0.5, 0.75] {
            let q = flap_quotient(&GAUSS, &pts, s, &cfg).unwrap();
            let p = flap_pv(&GAUSS, &pts, s, &cfg).unwrap();
            let f = spectral_gauss(n, s);
            for (k, x) in pts.iter().enumerate() {
                let sv = f.value_at(x);
                assert!((q.values[k] - p.values[k]).abs() <= cfg.tol * q.values[k].abs().max(1.0));
                assert!(rel(sv, q.values[k]) < 1e-3, "n={n} s={s} x={x:?}: {sv} vs {}", q.values[k]);
            }
        }
    }
}

#[test]
fn dropped_shell_is_unstable() {
    let cfg = QuadConfig::default();
    let err = flap_pv_with(&GAUSS, &[vec![0.0]], 0.5, &cfg, PvShell::Dropped).unwrap_err();
    assert!(matches!(err, Error::PvInstability { .. }), "{err}");
    assert!(flap_pv_with(&GAUSS, &[vec![0.0]], 0.5, &cfg, PvShell::Symmetrized).is_ok());
}

#[test]
fn tail_modes() {
    let short = QuadConfig { trunc_radius: 4.0, ..QuadConfig::default() };
    let r = flap_quotient(&GAUSS, &[vec![0.0]], 0.5, &short).unwrap();
    assert!(r.warnings.iter().any(|w| matches!(w, Warning::TailAssumptionViolated { .. })));
    let bound_only = QuadConfig { tail: TailMode::BoundOnly, trunc_radius: 1e6, ..QuadConfig::default() };
    let r = flap_quotient(&GAUSS, &[vec![0.0]], 0.5, &bound_only).unwrap();
    assert_eq!(r.tail_correction[0], 0.0);
    assert!(r.est_error > 0.0);
    assert!((r.values[0] - (2.0 / PI).sqrt()).abs() < r.est_error + 1e-8);
    let exact = flap_quotient(&GAUSS, &[vec![0.0]], 0.5, &QuadConfig::default()).unwrap();
    assert!(exact.tail_correction[0] > 0.0);
}

#[test]
fn grid_sampled_input() {
    let g = centred_grid(1, 801, 0.025);
    let u = GAUSS.sample(&g, None);
    let f = Interpolated::new(&u);
    let v = flap_quotient(&f, &[vec![0.3]], 0.5, &QuadConfig::default()).unwrap().values[0];
    let w = flap_quotient(&GAUSS, &[vec![0.3]], 0.5, &QuadConfig::default()).unwrap().values[0];
    assert!(rel(v, w) < 1e-4, "{v} vs {w}");
}

#[test]
fn eigenfunction_of_the_multiplier() {
    let n = 64;
    let h = 0.1;
    let g = Grid::new(&[0.0], &[(n - 1) as f64 * h], &[n]).unwrap();
    for m in [1usize, 5, 17] {
        let k = 2.0 * PI * m as f64 / (n as f64 * h);
        let u = GridFunction::from_fn(g.clone(), |x| (k * x[0]).cos());
        let r = flap_spectral(&u, 0.3).unwrap();
        let scale = k.powf(0.6);
        for (a, b) in r.values.iter().zip(&u.values) {
            assert!((a - scale * b).abs() < 1e-12 * scale);
        }
    }
    // 2-D mode
    let g2 = Grid::new(&[0.0, 0.0], &[3.1, 1.5], &[32, 16]).unwrap();
    let (k1, k2) = (2.0 * PI * 3.0 / 3.2, 2.0 * PI * 2.0 / 1.6);
    let u = GridFunction::from_fn(g2, |x| (k1 * x[0] + k2 * x[1]).cos());
    let r = flap_spectral(&u, 0.7).unwrap();
    let scale = k1.hypot(k2).powf(1.4);
    for (a, b) in r.values.iter().zip(&u.values) {
        assert!((a - scale * b).abs() < 1e-11 * scale);
    }
}

#[test]
fn discrete_plancherel() {
    for g in [Grid::new(&[-2.0], &[3.0], &[101]).unwrap(), Grid::new(&[-1.0, 0.5], &[2.0, 3.0], &[40, 33]).unwrap()] {
        let u = GridFunction::from_fn(g.clone(), |x| (x[0] * 1.3).sin() * (1.0 + x[1] * x[1]).recip() + 0.2);
        let sp = unitary_dft(&u);
        let lhs: f64 = u.values.iter().map(|v| v * v).sum::<f64>() * g.cell_volume();
        let rhs: f64 = sp.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() * sp.cell();
        assert!(rel(rhs, lhs) < 1e-12);
    }
    // unitary transform of the Gaussian is the Gaussian
    let g = centred_grid(1, 256, 0.1);
    let sp = unitary_dft(&GAUSS.sample(&g, None));
    for k in [0usize, 3, 20] {
        let xi = sp.xi(0, k);
        assert!((sp.coeffs[k].re - (-0.5 * xi * xi).exp()).abs() < 1e-12);
        assert!(sp.coeffs[k].im.abs() < 1e-12);
    }
}

#[test]
fn plancherel_identities() {
    // 2 pi int |xi| exp(-xi^2) = 2 pi; the kink of |xi| at 0 costs O(d xi^2)
    let g = centred_grid(1, 32768, 0.05);
    let u = GAUSS.sample(&g, None);
    let freq = plancherel_seminorm(&u, 0.5).unwrap();
    let half = half_laplacian_seminorm(&u, 0.5).unwrap();
    assert!(rel(freq, 2.0 * PI) < 1e-5, "{freq}");
    assert!(rel(half, freq) < 1e-10);
    let zero = GridFunction::zeros(g);
    assert_eq!(plancherel_seminorm(&zero, 0.5).unwrap(), 0.0);
    // against the double sum over R
    let sample = GAUSS.sample(&Grid::cells(&[-9.0], &[9.0], &[1800]).unwrap(), None);
    let ds = gagliardo_seminorm_p(&sample, FracParams::new(1, 0.5, 2.0).unwrap(), &DomainSpec::whole(1), &QuadConfig::default()).unwrap();
    assert!(rel(ds.seminorm_p, freq) < 1e-3, "{} vs {freq}", ds.seminorm_p);
}

#[test]
fn symbol_examples() {
    let cfg = QuadConfig::default();
    assert_eq!(symbol_integral(&[0.0], 1, 0.5, &cfg).unwrap(), 0.0);
    assert_eq!(symbol_integral(&[0.0, 0.0], 2, 0.5, &cfg).unwrap(), 0.0);
    assert!((symbol_integral(&[1.0], 1, 0.5, &cfg).unwrap() - PI).abs() < 1e-10);
    assert!((symbol_integral(&[2.0], 1, 0.5, &cfg).unwrap() - 2.0 * PI).abs() < 1e-10);
    for s in [0.1, 0.5, 0.9] {
        let d = c_const_direct(2, s).unwrap();
        let c = fracsob::constants::c_const(2, s).unwrap();
        assert!(rel(d, c) < 1e-9, "s={s}: {d} vs {c}");
    }
}

#[test]
fn rotational_invariance() {
    let cfg = QuadConfig::default();
    let base = [0.7f64, 1.1];
    let r = base[0].hypot(base[1]);
    let vals: Vec<f64> = (0..8)
        .map(|k| {
            let t = 0.3 + k as f64 * PI / 4.0;
            symbol_integral(&[r * t.cos(), r * t.sin()], 2, 0.35, &cfg).unwrap()
        })
        .collect();
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(0.0, f64::max);
    assert!((hi - lo) / lo < 1e-6, "{vals:?}");
}

#[test]
fn operator_limits_in_the_plane() {
    let scan = operator_limit_scan(&GAUSS, &[0.0, 0.0], &[0.01, 0.99]).unwrap();
    assert!((scan.values[0].1 - 1.0).abs() < 0.03, "{:?}", scan.values);
    assert!((scan.values[1].1 - 2.0).abs() < 0.03 * 2.0, "{:?}", scan.values);
    assert_eq!(scan.target_high, Some(2.0));
    assert!(scan.compact_support && !scan.extrapolated);
    let c = operator_limit_scan(&Func::Constant(1.0), &[0.0, 0.0], &[0.01]).unwrap();
    assert!(c.values[0].1.abs() < 1e-12);
    assert!(!c.compact_support);
    assert!(operator_limit_scan(&GAUSS, &[0.0], &[0.5]).unwrap().extrapolated);
}

struct Combo {
    a: f64,
    b: f64,
}

impl Field for Combo {
    fn try_eval(&self, x: &[f64]) -> Option<f64> {
        Some(self.a * GAUSS.eval(x) + self.b * Func::Gaussian { sigma: 0.5 }.eval(x))
    }
    fn sup_norm(&self) -> f64 {
        self.a.abs() + self.b.abs()
    }
    fn support_radius(&self) -> Option<f64> {
        Some(8.9)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn symbol_homogeneity(s in 0.05f64..0.95, x in 0.1f64..2.0, y in -2.0f64..2.0, big in any::<bool>()) {
        let cfg = QuadConfig::default();
        let l = if big { 3.0 } else { 2.0 };
        let a = symbol_integral(&[x, y], 2, s, &cfg).unwrap();
        let b = symbol_integral(&[l * x, l * y], 2, s, &cfg).unwrap();
        prop_assert!(rel(b, l.powf(2.0 * s) * a) < 1e-9);
        let a1 = symbol_integral(&[x], 1, s, &cfg).unwrap();
        let b1 = symbol_integral(&[l * x], 1, s, &cfg).unwrap();
        prop_assert!(rel(b1, l.powf(2.0 * s) * a1) < 1e-12);
    }

    #[test]
    fn linearity(a in -2.0f64..2.0, b in -2.0f64..2.0, s in 0.1f64..0.9, x in -1.0f64..1.0) {
        let cfg = QuadConfig::default();
        let pts = [vec![x]];
        let combo = Combo { a, b };
        let narrow = Func::Gaussian { sigma: 0.5 };
        let lhs = flap_quotient(&combo, &pts, s, &cfg).unwrap().values[0];
        let rhs = a * flap_quotient(&GAUSS, &pts, s, &cfg).unwrap().values[0]
            + b * flap_quotient(&narrow, &pts, s, &cfg).unwrap().values[0];
        prop_assert!((lhs - rhs).abs() < 1e-8 * (a.abs() + b.abs() + 1.0));
        let g = centred_grid(1, 1024, 0.05);
        let su = GAUSS.sample(&g, None);
        let sv = narrow.sample(&g, None);
        let sw = GridFunction::from_fn(g.clone(), |p| combo.eval(&p[..1]));
        let fu = flap_spectral(&su, s).unwrap().values;
        let fv = flap_spectral(&sv, s).unwrap().values;
        let fw = flap_spectral(&sw, s).unwrap().values;
        for k in 0..fw.len() {
            prop_assert!((fw[k] - a * fu[k] - b * fv[k]).abs() < 1e-12 * (a.abs() + b.abs() + 1.0) * 10.0);
        }
    }
}

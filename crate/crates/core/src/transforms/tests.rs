use super::*;
use crate::massive::e1_massive_twisted;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn tp(a: f64, b: f64) -> TorusPoint {
    TorusPoint::new(a, b).unwrap()
}

fn square() -> UpperHalfPoint {
    UpperHalfPoint::new(0.0, 1.0).unwrap()
}

#[test]
fn forward_mellin_identity() {
    let tau = square();
    let z = tp(0.0, 0.5);
    for &s in &[0.5, 1.5, 2.0] {
        let f = mellin_forward(&z, &tau, c(s), &MellinGrid::default(), 1e-9).unwrap();
        let r = mellin_rhs(&z, &tau, c(s), 1e-13).unwrap();
        assert!((f.value - r).norm() < 1e-5, "{s}: {} {r}", f.value);
        assert!(f.value.im.abs() < 1e-10);
    }
}

#[test]
fn forward_mellin_preconditions() {
    let tau = square();
    let g = MellinGrid::default();
    assert!(mellin_forward(&tp(0.0, 0.5), &tau, c(-0.5), &g, 1e-8).is_err());
    assert!(mellin_forward(&tp(0.0, 0.0), &tau, c(1.5), &g, 1e-8).is_err());
    assert!(MellinGrid::new(0.0, 1.0, 100).is_err());
    assert!(MellinContour::new(0.0, 10.0, 16).is_err());
}

#[test]
fn inverse_mellin() {
    let tau = square();
    let z = tp(0.0, 0.5);
    let mu = 0.5;
    let exact = e1_massive(&z, &tau, mu, 1e-14).unwrap().value;
    let inv = |cc: f64, t: f64| mellin_inverse(&z, &tau, mu, &MellinContour::new(cc, t, 16).unwrap(), 1e-13).unwrap();
    let errs: Vec<f64> = [10.0, 20.0, 40.0].iter().map(|&t| (inv(1.0, t).value - exact).norm()).collect();
    assert!(errs[2] < 1e-4);
    assert!(errs[0] >= errs[1] && errs[1] >= errs[2] && errs[0] > errs[2], "{errs:?}");
    let a = inv(0.7, 40.0);
    let b = inv(1.3, 40.0);
    assert!((a.value - b.value).norm() < 1e-12);
    let seg = |t0: f64, t1: f64| mellin_inverse_segment(&z, &tau, mu, 1.0, t0, t1, 16, 1e-13).unwrap().abs();
    assert!(seg(20.0, 40.0) > seg(40.0, 80.0));
    assert!(seg(10.0, 20.0) > seg(20.0, 40.0));
}

#[test]
fn power_series_matches_twisted_bessel_sum() {
    let tau = square();
    let (w, z) = (tp(0.2, 0.1), tp(0.3, 0.4));
    let mu = 0.05;
    let exact = e1_massive_twisted(&w, &z, &tau, mu, 1e-14).unwrap().value;
    for &n in &[4, 6, 8, 10] {
        let p = power_series(&w, &z, &tau, mu, n, 1e-14).unwrap();
        assert!((p.value - exact).norm() <= 2.0 * p.next_term, "{n}");
    }
}

#[test]
fn power_series_quasiperiodic() {
    let tau = UpperHalfPoint::new(0.15, 1.2).unwrap();
    let (w, z) = (tp(0.2, 0.1), tp(0.3, 0.4));
    let a = power_series(&w, &z, &tau, 0.05, 10, 1e-14).unwrap();
    let b = power_series(&w, &tp(0.3, 1.4), &tau, 0.05, 10, 1e-14).unwrap();
    let phase = C64::from_polar(1.0, 2.0 * PI * w.alpha);
    assert!((b.value - phase * a.value).norm() < a.next_term);
}

#[test]
fn power_series_rejects_lattice_points() {
    let tau = square();
    assert!(matches!(
        power_series(&TorusPoint::origin(), &tp(0.0, 0.5), &tau, 0.05, 10, 1e-12),
        Err(Error::Singular(_))
    ));
}

/// Least-squares polynomial residual of samples (x_i, y_i) at the given degree.
fn polyfit_residual(x: &[f64], y: &[f64], degree: usize) -> f64 {
    let n = degree + 1;
    let mut a = vec![vec![0.0; n + 1]; n];
    for (xi, yi) in x.iter().zip(y) {
        let pows: Vec<f64> = (0..n).map(|k| xi.powi(k as i32)).collect();
        for i in 0..n {
            for j in 0..n {
                a[i][j] += pows[i] * pows[j];
            }
            a[i][n] += pows[i] * yi;
        }
    }
    for i in 0..n {
        let p = (i..n).max_by(|&r, &s| a[r][i].abs().total_cmp(&a[s][i].abs())).unwrap();
        a.swap(i, p);
        for r in 0..n {
            if r != i {
                let f = a[r][i] / a[i][i];
                for k in i..=n {
                    a[r][k] -= f * a[i][k];
                }
            }
        }
    }
    let coef: Vec<f64> = (0..n).map(|i| a[i][n] / a[i][i]).collect();
    x.iter()
        .zip(y)
        .map(|(xi, yi)| (yi - coef.iter().rev().fold(0.0, |acc, c| acc * xi + c)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn twisted_sum_is_polynomial_in_small_mu() {
    // no mu^n log(mu) terms: a degree-6 polynomial fits the Bessel sum on [0.01, 0.05]
    let tau = square();
    let (w, z) = (tp(0.2, 0.1), tp(0.3, 0.4));
    let mus: Vec<f64> = (0..9).map(|k| 0.01 + 0.005 * k as f64).collect();
    let vals: Vec<C64> = mus
        .iter()
        .map(|&m| e1_massive_twisted(&w, &z, &tau, m, 1e-14).unwrap().value)
        .collect();
    let re: Vec<f64> = vals.iter().map(|v| v.re).collect();
    let im: Vec<f64> = vals.iter().map(|v| v.im).collect();
    assert!(polyfit_residual(&mus, &re, 6) < 1e-8);
    assert!(polyfit_residual(&mus, &im, 6) < 1e-8);
    // while mu log mu is visibly not
    let log: Vec<f64> = mus.iter().map(|m| m * m.ln()).collect();
    assert!(polyfit_residual(&mus, &log, 2) > 1e-6);
}

#[test]
fn w_generating_function() {
    let tau = square();
    let mu = 0.5;
    let w = w_generating(&tau, mu, 1e-5).unwrap();
    let d2 = log_generating_second_difference(&tau, mu, 1e-3 * mu, 1e-5).unwrap();
    assert!((w.value + d2.value).norm() < 1e-4, "{} {}", w.value, d2.value);
    // the lattice-point count makes W ~ pi / mu, not a faster power
    let big = w_generating(&tau, 100.0, 1e-5).unwrap().value.re;
    let bigger = w_generating(&tau, 1000.0, 1e-5).unwrap().value.re;
    assert!(bigger < big && big < w.value.re);
    assert!((1000.0 * bigger - PI).abs() < 1e-2, "{}", 1000.0 * bigger);
    assert!((big / bigger - 10.0).abs() < 0.5);
}

#[test]
fn w_generating_decreasing() {
    let tau = UpperHalfPoint::new(0.3, 0.8).unwrap();
    let v: Vec<f64> = [0.1, 0.3, 0.9, 2.7]
        .iter()
        .map(|&m| w_generating(&tau, m, 1e-4).unwrap().value.re)
        .collect();
    assert!(v.windows(2).all(|p| p[1] < p[0]), "{v:?}");
}

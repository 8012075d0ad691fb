use massive_core::massive::es_massive;
use massive_core::{Complex64, TorusPoint, UpperHalfPoint};
use proptest::prelude::*;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// The four generator residuals of E_{s,mu}(z; tau) at fixed mu, as relative deviations.
fn residuals(s: f64, tau: &UpperHalfPoint, z: &TorusPoint, mu: f64) -> [f64; 4] {
    let e = |z: &TorusPoint, t: &UpperHalfPoint| es_massive(c(s), z, t, mu, 1e-13).unwrap().value;
    let base = e(z, tau);
    let zc = z.z(tau);
    let n = base.norm();
    // (tau, z) -> (tau + 1, z) and (-1/tau, z/tau) hold the complex z fixed
    let t1 = tau.translate();
    let ti = tau.invert();
    [
        (e(&TorusPoint::from_z(zc, &t1), &t1) - base).norm() / n,
        (e(&TorusPoint::from_z(zc / tau.tau(), &ti), &ti) - base).norm() / n,
        (e(&TorusPoint::new(z.alpha, z.beta + 1.0).unwrap(), tau) - base).norm() / n,
        (e(&TorusPoint::new(z.alpha + 1.0, z.beta).unwrap(), tau) - base).norm() / n,
    ]
}

#[test]
fn generators_at_fixed_mass() {
    let tau = UpperHalfPoint::new(0.2, 1.1).unwrap();
    let z = TorusPoint::new(0.3, 0.7).unwrap();
    for s in [1.0, 1.7, 2.5] {
        for mu in [0.25, 1.0] {
            let r = residuals(s, &tau, &z, mu);
            assert!(r.iter().all(|&x| x < 1e-8), "s = {s}, mu = {mu}: {r:?}");
        }
    }
}

#[test]
fn real_for_real_order() {
    let tau = UpperHalfPoint::new(-0.35, 0.9).unwrap();
    let z = TorusPoint::new(0.15, 0.6).unwrap();
    let v = es_massive(c(1.7), &z, &tau, 0.4, 1e-13).unwrap().value;
    assert!(v.im.abs() < 1e-13 * v.re.abs());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn generators_hold_everywhere(
        t1 in -0.5f64..0.5, t2 in 0.8f64..1.6,
        a in 0.05f64..0.95, b in 0.05f64..0.95,
        s in 1.0f64..2.5, mu in 0.2f64..1.5,
    ) {
        let tau = UpperHalfPoint::new(t1, t2).unwrap();
        let z = TorusPoint::new(a, b).unwrap();
        let r = residuals(s, &tau, &z, mu);
        prop_assert!(r.iter().all(|&x| x < 1e-8), "{:?}", r);
    }
}

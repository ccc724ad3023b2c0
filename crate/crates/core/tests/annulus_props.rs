use std::f64::consts::PI;

use droplet_core::annulus::{
    annulus_periods, f_ab, phi_prime_ratio_spread, prime_p, theta1, theta_prime_consistency, PrimeFactor,
};
use droplet_core::{AnnulusConfig, Complex64};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn prime_function_identities(r in 0.05f64..0.6, s in 0.0f64..1.0, t in -PI..PI) {
        let cfg = AnnulusConfig::new(r, 0.5 * (r + 1.0)).unwrap();
        let z = Complex64::from_polar(r + s * (1.0 - r), t);
        let p = prime_p(z, &cfg).unwrap();
        prop_assert!((prime_p(z.inv(), &cfg).unwrap() + p / z).norm() < 1e-12);
        prop_assert!((prime_p(r * r * z, &cfg).unwrap() + p / z).norm() < 1e-12);
    }

    #[test]
    fn f_ab_positive_on_both_circles(r in 0.1f64..0.6, a in 0.0f64..1.0, b in 0.0f64..1.0, arg in -PI..PI) {
        let cfg = AnnulusConfig::new(r, 0.5 * (r + 1.0)).unwrap();
        let dir = Complex64::from_polar(1.0, arg);
        let ra = r + (0.05 + 0.9 * a) * (1.0 - r);
        let rb = r + (0.05 + 0.9 * b) * (1.0 - r);
        let factor = PrimeFactor::new(ra * dir, rb * dir);
        prop_assert!(factor.is_positive_pair());
        for s in [1.0, r] {
            for k in 0..64 {
                let v = f_ab(Complex64::from_polar(s, 2.0 * PI * (k as f64 + 0.5) / 64.0), &factor, &cfg).unwrap();
                prop_assert!(v.re > 0.0 && v.im.abs() <= 1e-10 * v.re);
            }
        }
    }

    #[test]
    fn theta_is_odd(re in -2.0f64..2.0, im in -0.5f64..0.5, q in 0.05f64..0.6) {
        let v = Complex64::new(re, im);
        prop_assert!((theta1(-v, q) + theta1(v, q)).norm() < 1e-13 * (1.0 + theta1(v, q).norm()));
    }
}

#[test]
fn theta_ratio_constant_across_radii() {
    for r in [0.2, 0.3, 0.5] {
        let cfg = AnnulusConfig::new(r, 0.7).unwrap();
        assert!(theta_prime_consistency(&cfg, &[r.sqrt(), 0.95], 32).unwrap() < 1e-10);
    }
}

#[test]
fn map_derivative_forms_agree_up_to_constant() {
    for (r, x) in [(0.3, 0.5), (0.2, 0.8), (0.5, 0.6)] {
        let cfg = AnnulusConfig::new(r, x).unwrap();
        let spread = phi_prime_ratio_spread(&cfg, r.sqrt(), 64).unwrap();
        assert!(spread[0] < 1e-9, "{spread:?}");
    }
}

#[test]
fn periods_radius_invariant() {
    for x in [0.35, 0.6, 0.9] {
        let cfg = AnnulusConfig::new(0.3, x).unwrap();
        let rep = annulus_periods(&cfg, &[0.31, 0.55, 0.99]).unwrap();
        assert!(rep.spread() < 1e-10, "{rep:?}");
    }
}

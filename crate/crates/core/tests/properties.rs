use num_complex::Complex64;
use proptest::prelude::*;
use secres::coords::{poincare_to_slowfast, slowfast_to_poincare, SlowFastState};
use secres::dynamics::{phi_h, phi_v, recover_gamma};
use secres::melnikov::first_order_jump;
use secres::{Model, ModelParams, Point};

fn model() -> Model {
    Model::new(ModelParams::default())
}

/// G = L − (ξ² + η²)/2 > 0 and |cos i| = |Γ/G + 1/2| < 1 at L = 1.
fn physical(xi: f64, eta: f64, gam: f64) -> bool {
    let g = 1.0 - 0.5 * (xi * xi + eta * eta);
    g > 0.05 && (gam / g + 0.5).abs() < 0.99
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn reversors_preserve_the_coplanar_energy(
        xi in -0.9f64..0.9, eta in -0.9f64..0.9, gam in -0.1f64..0.2, h in -7.0f64..7.0,
    ) {
        prop_assume!(physical(xi, eta, gam));
        let m = model();
        let p = Point::new(xi, eta, gam, h);
        let e = m.hcp(&p);
        for q in [phi_h(&p), phi_v(&p)] {
            prop_assert!((m.hcp(&q) - e).abs() <= 1e-14 * e.abs().max(1e-300));
        }
    }

    #[test]
    fn antipodal_map_preserves_the_coplanar_energy(
        xi in -0.9f64..0.9, eta in -0.9f64..0.9, gam in -0.1f64..0.2, h in -7.0f64..7.0,
    ) {
        prop_assume!(physical(xi, eta, gam));
        let m = model();
        let e = m.hcp(&Point::new(xi, eta, gam, h));
        let f = m.hcp(&Point::new(-xi, -eta, gam, h));
        prop_assert!((f - e).abs() <= 1e-14 * e.abs());
    }

    #[test]
    fn poincare_roundtrip(x in -3.1f64..3.1, y in 0.01f64..0.49, gam in -0.1f64..0.2, h in -3.0f64..3.0) {
        let s = SlowFastState { x, y, gam, h };
        let p = slowfast_to_poincare(&s, 1.0).unwrap();
        let (b, _) = poincare_to_slowfast(&p, 1.0);
        prop_assert!((b.y - y).abs() < 1e-14);
        let dx = (b.x - x).rem_euclid(std::f64::consts::TAU);
        prop_assert!(dx.min(std::f64::consts::TAU - dx) < 1e-12);
    }

    #[test]
    fn gamma_recovery_inverts_the_energy(xi in -0.5f64..0.5, eta in -0.5f64..0.5, gam in 0.03f64..0.07) {
        let m = model();
        let p = Point::new(xi, eta, gam, 0.0);
        let e = m.hcp(&p);
        let g = recover_gamma(&m, xi, eta, 0.0, e, 0.05).unwrap();
        prop_assert!((m.hcp(&Point::new(xi, eta, g, 0.0)) - e).abs() < 1e-18);
    }

    #[test]
    fn first_order_jump_is_bounded(re in -1.0f64..1.0, im in -1.0f64..1.0, om in 0.0f64..6.3, i_m in 0.0f64..1e-2) {
        let c = Complex64::new(re, im);
        prop_assert!(first_order_jump(c, om, i_m).abs() <= 2.0 * i_m * c.norm() * (1.0 + 1e-15));
    }
}

use secres::dynamics::{self, FlowSettings};
use secres::manifolds::*;
use secres::periodic::solve_periodic;
use secres::{Model, ModelParams};

fn model() -> Model {
    Model::new(ModelParams::default())
}

#[test]
fn primary_point_lies_on_the_axis_and_level() {
    let m = model();
    let s = FlowSettings::default();
    let h = find_homoclinic(&m, 6.0e-7, Channel::Pri, s).unwrap();
    assert!(h.point.eta.abs() < 1e-10, "{:?}", h.point);
    assert!(h.point.xi < 0.0 && h.coord == h.point.xi.abs());
    let de = (m.hcp(&h.point) - 6.0e-7).abs();
    assert!(de < 1e-11 && de < 1e-10 * 6.0e-7, "{de:e}");
    assert!(h.phi > 0.0 && h.phi <= std::f64::consts::PI);
    assert_eq!(h.phi, h.phi_oriented.abs());
    assert!(h.e_max > 0.5 && h.e_max < 0.7, "{}", h.e_max);
    assert!(h.i_min <= h.i_max);
}

#[test]
fn stable_branch_meets_the_same_primary_point() {
    let m = model();
    let s = FlowSettings::default();
    let e = 3.0e-7;
    let hu = find_homoclinic(&m, e, Channel::Pri, s).unwrap();
    let orbit = solve_periodic(&m, e, &s).unwrap();
    let search = CrossingSearch::default();
    let best = [-1.0, 1.0]
        .iter()
        .filter_map(|&sign| {
            let b = Branch::new(&m, orbit, Side::Stable, sign, s).ok()?;
            let tau = find_crossing(&b, Channel::Pri, &search).ok()?;
            let p = b.point(tau).ok()?;
            Some((p.xi - hu.point.xi).abs() + (p.gam - hu.point.gam).abs())
        })
        .fold(f64::INFINITY, f64::min);
    assert!(best < 1e-9, "{best:e}");
}

#[test]
fn reversor_maps_the_unstable_polyline_to_the_stable_one() {
    let m = model();
    let s = FlowSettings::default();
    let b = Branch::unstable(&m, 6.0e-7, s).unwrap();
    let poly = globalize(&b, 6, 0.05, 200);
    assert!(poly.points.len() > 16);
    for &(_, p) in &poly.points {
        assert!((m.hcp(&p) - 6.0e-7).abs() < 1e-11 * 6.0e-7);
    }
    let mirror = poly.mirrored();
    assert_eq!(mirror.side, Side::Stable);
    // A point of the mirrored polyline returns to the section along Π₀⁻¹
    // as the mirror of the forward image.
    let (_, p) = poly.points[poly.points.len() / 2];
    let q = dynamics::phi_v(&p);
    let back = dynamics::poincare_map_inverse(&m, &q, &s).unwrap();
    let fwd = dynamics::phi_v(&dynamics::poincare_map(&m, &p, &s).unwrap());
    for (x, y) in back.as_array().iter().zip(fwd.as_array()) {
        assert!((x - y).abs() < 1e-10);
    }
}

#[test]
fn first_tangency_is_bracketed() {
    let m = model();
    let s = FlowSettings::default();
    let t = scan_tangencies(&m, &[2.05e-7, 2.15e-7], Channel::Pri, s, 1e-16).unwrap();
    assert_eq!(t.len(), 1);
    assert!((t[0].energy - 2.1005e-7).abs() < 1e-3 * 2.1005e-7, "{:e}", t[0].energy);
    assert!(t[0].residual.0.signum() != t[0].residual.1.signum());
}

#[test]
fn secondary_point_is_close_to_the_saddle() {
    let m = model();
    let s = FlowSettings::default();
    let h = find_homoclinic(&m, 6.066e-7, Channel::Sec, s).unwrap();
    assert!(h.point.xi.abs() < 1e-10 * h.coord.max(1.0) + 1e-8, "{:?}", h.point);
    assert!(h.point.eta < 0.0 && h.coord < 1e-3);
    assert!(h.e_max > 0.5);
}

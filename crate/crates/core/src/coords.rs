//! Delaunay, slow–fast and Poincaré coordinates of the satellite orbit.
//!
//! With Delaunay actions (L, G, H) and angles (l, g, h):
//! x = 2g + h, y = G/2, Γ = H − G/2, and
//! ξ + iη = √(2L − 4y) · e^{ix/2}.

use crate::error::{Error, Result};
use crate::hamiltonians::Point;
use std::f64::consts::{PI, TAU};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DelaunayState {
    pub ld: f64,
    pub g: f64,
    pub h_act: f64,
    pub l: f64,
    pub g_ang: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SlowFastState {
    pub x: f64,
    pub y: f64,
    pub gam: f64,
    pub h: f64,
}

impl DelaunayState {
    pub fn eccentricity(&self) -> f64 {
        (1.0 - (self.g / self.ld).powi(2)).max(0.0).sqrt()
    }

    pub fn inclination(&self) -> f64 {
        (self.h_act / self.g).clamp(-1.0, 1.0).acos()
    }
}

pub fn delaunay_to_slowfast(d: &DelaunayState) -> SlowFastState {
    SlowFastState {
        x: (2.0 * d.g_ang + d.h).rem_euclid(TAU),
        y: d.g / 2.0,
        gam: d.h_act - d.g / 2.0,
        h: d.h,
    }
}

/// Inverse of [`delaunay_to_slowfast`]; g is returned in [0, π) since only
/// 2g enters, and the mean anomaly is set to `l`.
pub fn slowfast_to_delaunay(s: &SlowFastState, ld: f64, l: f64) -> DelaunayState {
    let g = 2.0 * s.y;
    DelaunayState {
        ld,
        g,
        h_act: s.gam + s.y,
        l,
        g_ang: ((s.x - s.h) / 2.0).rem_euclid(PI),
        h: s.h,
    }
}

pub fn slowfast_to_poincare(s: &SlowFastState, l: f64) -> Result<Point> {
    let m2 = 2.0 * l - 4.0 * s.y;
    if m2 < 0.0 {
        return Err(Error::Domain(format!("y = {} exceeds L/2", s.y)));
    }
    let r = m2.sqrt();
    let (sn, cs) = (s.x / 2.0).sin_cos();
    Ok(Point::new(r * cs, r * sn, s.gam, s.h))
}

/// Inverse of [`slowfast_to_poincare`]. At ξ = η = 0 the angle x is
/// undefined and 0 is returned with the flag set.
pub fn poincare_to_slowfast(p: &Point, l: f64) -> (SlowFastState, bool) {
    let m2 = p.xi * p.xi + p.eta * p.eta;
    let circular = m2 == 0.0;
    let x = if circular {
        0.0
    } else {
        (2.0 * p.eta.atan2(p.xi)).rem_euclid(TAU)
    };
    (
        SlowFastState {
            x,
            y: (2.0 * l - m2) / 4.0,
            gam: p.gam,
            h: p.h,
        },
        circular,
    )
}

/// Osculating (e, i) of a Poincaré state, i in radians.
pub fn osculating_elements(p: &Point, l: f64) -> Result<(f64, f64)> {
    let m2 = p.xi * p.xi + p.eta * p.eta;
    let g = (2.0 * l - m2) / 2.0;
    if g <= 0.0 {
        return Err(Error::Domain(format!("G = {g} ≤ 0")));
    }
    let h_act = p.gam + g / 2.0;
    if h_act.abs() > g {
        return Err(Error::Domain(format!("|H| = {} > G = {g}", h_act.abs())));
    }
    let e = (1.0 - (g / l).powi(2)).max(0.0).sqrt();
    Ok((e, (h_act / g).acos()))
}

/// ξ² + η² for a given eccentricity: M = 2L(1 − √(1 − e²)).
pub fn m_from_eccentricity(e: f64, l: f64) -> f64 {
    2.0 * l * (1.0 - (1.0 - e * e).sqrt())
}

/// Γ on the circular orbit (ξ = η = 0) with inclination i.
pub fn gamma_for_circular_inclination(i: f64, l: f64) -> f64 {
    l * (i.cos() - 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::slow_fast;
    use crate::{Model, ModelParams};

    #[test]
    fn delaunay_slowfast_examples() {
        let d = DelaunayState {
            ld: 1.0,
            g: 1.0,
            h_act: 0.5,
            l: 0.0,
            g_ang: 0.0,
            h: 0.0,
        };
        let s = delaunay_to_slowfast(&d);
        assert_eq!((s.y, s.gam, s.x), (0.5, 0.0, 0.0));
        let d = DelaunayState {
            ld: 1.0,
            g: 0.8,
            h_act: 0.3,
            l: 0.4,
            g_ang: 1.1,
            h: 2.3,
        };
        let back = slowfast_to_delaunay(&delaunay_to_slowfast(&d), 1.0, 0.4);
        for (a, b) in [(back.g, d.g), (back.h_act, d.h_act), (back.g_ang, d.g_ang), (back.h, d.h)] {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn resonance_ratio_from_inclination() {
        let i_star = ((1.0 + 21f64.sqrt()) / 10.0).acos();
        let g = 0.9;
        let d = DelaunayState {
            ld: 1.0,
            g,
            h_act: g * i_star.cos(),
            l: 0.0,
            g_ang: 0.0,
            h: 0.0,
        };
        let s = delaunay_to_slowfast(&d);
        assert!((s.gam / s.y - (-4.0 + 21f64.sqrt()) / 5.0).abs() < 1e-15);
        assert!((i_star.to_degrees() - 56.06).abs() < 0.01);
    }

    #[test]
    fn poincare_examples_and_roundtrip() {
        let p = slowfast_to_poincare(&SlowFastState { x: 0.0, y: 0.5, gam: 0.0, h: 0.0 }, 1.0).unwrap();
        assert_eq!((p.xi, p.eta), (0.0, 0.0));
        let p = slowfast_to_poincare(&SlowFastState { x: 0.0, y: 0.25, gam: 0.0, h: 0.0 }, 1.0).unwrap();
        assert!((p.xi - 1.0).abs() < 1e-15 && p.eta.abs() < 1e-15);
        let s = SlowFastState { x: 1.3, y: 0.31, gam: 0.02, h: 0.5 };
        let (b, flag) = poincare_to_slowfast(&slowfast_to_poincare(&s, 1.0).unwrap(), 1.0);
        assert!(!flag);
        assert!((b.x - s.x).abs() < 1e-15 && (b.y - s.y).abs() < 1e-15);
        assert!(slowfast_to_poincare(&SlowFastState { x: 0.0, y: 0.6, gam: 0.0, h: 0.0 }, 1.0).is_err());
    }

    #[test]
    fn osculating_examples() {
        let l = 1.0;
        let [pro, retro] = slow_fast::resonance_inclinations_deg();
        for (deg, want) in [(pro, 56.06), (retro, 110.99)] {
            let gam = gamma_for_circular_inclination(deg.to_radians(), l);
            let (e, i) = osculating_elements(&Point::new(0.0, 0.0, gam, 0.0), l).unwrap();
            assert_eq!(e, 0.0);
            assert!((i.to_degrees() - want).abs() < 0.01, "{}", i.to_degrees());
        }
        let m2 = m_from_eccentricity(0.78, l);
        let (e, _) = osculating_elements(&Point::new(m2.sqrt(), 0.0, 0.0, 0.0), l).unwrap();
        assert!((e - 0.78).abs() < 1e-12);
    }

    #[test]
    fn resonance_line_is_critical() {
        let model = Model::new(ModelParams::default());
        let k = (-4.0 + 21f64.sqrt()) / 5.0;
        for y in [0.2, 0.3, 0.45, 0.5] {
            let d = slow_fast::dh0_dy(&model, y, k * y);
            let scale = slow_fast::h0(&model, y, k * y).abs() / y;
            assert!((d / scale).abs() < 1e-12, "{d:e}");
        }
    }

    #[test]
    fn poincare_block_is_symplectic() {
        let l = 1.0;
        let f = |x: f64, y: f64| {
            let p = slowfast_to_poincare(&SlowFastState { x, y, gam: 0.0, h: 0.0 }, l).unwrap();
            (p.xi, p.eta)
        };
        let d = 1e-6;
        for k in 0..200 {
            let x = 0.1 + 0.031 * k as f64;
            let y = 0.05 + 0.4 * ((k * 37) % 101) as f64 / 101.0;
            let (a1, b1) = f(x + d, y);
            let (a0, b0) = f(x - d, y);
            let (c1, e1) = f(x, y + d);
            let (c0, e0) = f(x, y - d);
            let det = ((a1 - a0) * (e1 - e0) - (b1 - b0) * (c1 - c0)) / (4.0 * d * d);
            assert!((det - 1.0).abs() < 1e-8, "{det}");
        }
    }
}

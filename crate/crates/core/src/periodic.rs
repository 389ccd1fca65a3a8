//! Circular periodic orbits 𝒫_E = (0, Γ_E(t), 0, h_E(t)) of ℋ_CP, their
//! periods and Floquet multipliers, and the equilibria of the h-averaged
//! model ℋ_AV at ξ = η = 0.

use crate::dynamics::{self, FlowSettings};
use crate::error::{Error, Result};
use crate::hamiltonians::{Model, Point};
use crate::jet::{Jet2, Scalar};
use crate::ode;
use crate::roots;
use nalgebra::{Matrix2, Matrix4, Vector2};
use std::f64::consts::{PI, TAU};

/// Lower and upper energies of the window where the cylinder is studied.
pub const E_MIN: f64 = -2.12e-7;
pub const E_MAX: f64 = 1.36e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitKind {
    Hyperbolic,
    Elliptic,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PeriodicOrbitRecord {
    pub energy: f64,
    /// Γ of the orbit on the section h = 0.
    pub gam0: f64,
    /// Physical period (positive).
    pub t0: f64,
    /// Floquet multiplier of modulus > 1 in the (ξ, η) block (or the
    /// modulus-one multiplier's real part when elliptic).
    pub lambda: f64,
    pub exponent: f64,
    /// Unit eigendirections in the (ξ, η) plane, ξ-component ≥ 0.
    pub evec_u: [f64; 2],
    pub evec_s: [f64; 2],
    pub kind: OrbitKind,
    /// Γ range along the orbit.
    pub gam_min: f64,
    pub gam_max: f64,
}

impl PeriodicOrbitRecord {
    /// J = −E/n_ΩM labels the orbit on the cylinder.
    pub fn action(&self, model: &Model) -> f64 {
        -self.energy / model.n_omega
    }

    pub fn n_t0(&self, model: &Model) -> f64 {
        model.n_omega * self.t0
    }

    pub fn fixed_point(&self) -> Point {
        Point::new(0.0, 0.0, self.gam0, 0.0)
    }
}

/// Γ₀ with ℋ_CP(0, Γ₀, 0, 0) = E, bracketed in [0, 0.49 L].
pub fn gamma0(model: &Model, energy: f64) -> Result<f64> {
    let f = |g: f64| Ok(model.hcp(&Point::new(0.0, 0.0, g, 0.0)) - energy);
    let hi = 0.49 * model.l;
    let (fa, fb) = (f(0.0)?, f(hi)?);
    if fa.abs() <= 1e-12 {
        return Ok(0.0);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::InvalidParameter {
            name: "energy".into(),
            reason: format!(
                "E = {energy:e} outside [{:e}, {:e}] reachable on the circular set",
                fb + energy,
                fa + energy
            ),
        });
    }
    roots::brent_with_values(0.0, fa, hi, fb, 1e-16, 200, f)
}

/// Integrates the circular orbit over one return with the reparametrized
/// flow, augmented by t(s) and by Γ extrema. Returns (T, Γ_end, Γ_min, Γ_max).
fn circular_return(model: &Model, gam0: f64, settings: &FlowSettings) -> Result<(f64, f64, f64, f64)> {
    let p = Point::new(0.0, 0.0, gam0, 0.0);
    let hd = dynamics::h_dot(model, &p);
    if hd == 0.0 {
        return Err(Error::Domain(format!("ḣ = 0 on the circular orbit Γ₀ = {gam0}")));
    }
    let span = TAU * hd.signum();
    let sys = |s: f64, y: &[f64; 2], dy: &mut [f64; 2]| {
        let g = model.hcp_grad(&Point::new(0.0, 0.0, y[0], s));
        dy[0] = -g.d_h / g.d_gam;
        dy[1] = 1.0 / g.d_gam;
    };
    let (mut lo, mut hi) = (gam0, gam0);
    let mut sign_flip = false;
    let y = ode::integrate_observed(&sys, 0.0, [gam0, 0.0], span, settings.tolerances(), |st| {
        lo = lo.min(st.y[0]);
        hi = hi.max(st.y[0]);
        if dynamics::h_dot(model, &Point::new(0.0, 0.0, st.y[0], st.t)).signum() != hd.signum() {
            sign_flip = true;
            return false;
        }
        true
    })?;
    if sign_flip {
        return Err(Error::Domain("ḣ changes sign along the circular orbit".into()));
    }
    Ok((y[1], y[0], lo, hi))
}

/// Period of the circular orbit through Γ₀ at h = 0.
pub fn period(model: &Model, gam0: f64, settings: &FlowSettings) -> Result<f64> {
    Ok(circular_return(model, gam0, settings)?.0)
}

/// Multipliers and eigendirections of a 2×2 symplectic block.
fn split_block(b: Matrix2<f64>) -> (f64, [f64; 2], [f64; 2], OrbitKind) {
    let tr = b.trace();
    let disc = tr * tr / 4.0 - b.determinant();
    if disc <= 0.0 || tr.abs() <= 2.0 {
        return (tr / 2.0, [0.0; 2], [0.0; 2], OrbitKind::Elliptic);
    }
    let sq = disc.sqrt();
    let (l1, l2) = (tr / 2.0 + sq, tr / 2.0 - sq);
    let (lu, ls) = if l1.abs() > l2.abs() { (l1, l2) } else { (l2, l1) };
    let evec = |lam: f64| -> [f64; 2] {
        let m = b - Matrix2::identity() * lam;
        let v = if m.row(0).amax() >= m.row(1).amax() {
            Vector2::new(-m[(0, 1)], m[(0, 0)])
        } else {
            Vector2::new(-m[(1, 1)], m[(1, 0)])
        };
        let v = v.normalize();
        let s = if v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0) { -1.0 } else { 1.0 };
        [s * v[0], s * v[1]]
    };
    (lu, evec(lu), evec(ls), OrbitKind::Hyperbolic)
}

/// Monodromy matrix of the circular orbit through (0, Γ₀, 0, 0) over one
/// physical period.
pub fn monodromy(model: &Model, gam0: f64, t0: f64, settings: &FlowSettings) -> Result<Matrix4<f64>> {
    let (_, m) = dynamics::variational_flow(model, &Point::new(0.0, 0.0, gam0, 0.0), Matrix4::identity(), t0, settings)?;
    Ok(m)
}

pub fn solve_periodic(model: &Model, energy: f64, settings: &FlowSettings) -> Result<PeriodicOrbitRecord> {
    let gam0 = gamma0(model, energy)?;
    let (t0, gam_end, gam_min, gam_max) = circular_return(model, gam0, settings)?;
    if (gam_end - gam0).abs() > 1e-9 {
        return Err(Error::NonConvergence {
            what: "circular orbit closure",
            iterations: 1,
            residual: gam_end - gam0,
        });
    }
    let m = monodromy(model, gam0, t0, settings)?;
    let block = m.fixed_view::<2, 2>(0, 0).into_owned();
    let (lambda, evec_u, evec_s, kind) = split_block(block);
    let exponent = match kind {
        OrbitKind::Hyperbolic => lambda.abs().ln() / t0,
        OrbitKind::Elliptic => 0.0,
    };
    Ok(PeriodicOrbitRecord {
        energy,
        gam0,
        t0,
        lambda,
        exponent,
        evec_u,
        evec_s,
        kind,
        gam_min,
        gam_max,
    })
}

/// Records on a uniform grid; failed points are reported in place.
pub fn scan_periodic(model: &Model, e_lo: f64, e_hi: f64, n: usize, settings: &FlowSettings) -> Vec<(f64, Result<PeriodicOrbitRecord>)> {
    grid(e_lo, e_hi, n)
        .into_iter()
        .map(|e| (e, solve_periodic(model, e, settings)))
        .collect()
}

pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Energy of the double resonance n_ΩM 𝒯₀ = 4π and its action J_res,
/// searched on [e_lo, e_hi].
pub fn find_jres(model: &Model, e_lo: f64, e_hi: f64, settings: &FlowSettings) -> Result<(f64, f64)> {
    let f = |e: f64| -> Result<f64> {
        let g = gamma0(model, e)?;
        Ok(model.n_omega * period(model, g, settings)? - 4.0 * PI)
    };
    let brackets = roots::sign_changes(e_lo, e_hi, 16, f)?;
    let (a, fa, b, fb) = *brackets
        .first()
        .ok_or_else(|| Error::NoIntersection("n_ΩM 𝒯₀ − 4π has no sign change in the window".into()))?;
    let e_res = roots::brent_with_values(a, fa, b, fb, 1e-22, 200, f)?;
    Ok((-e_res / model.n_omega, e_res))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EquilibriumKind {
    Center,
    Saddle,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AveragedEquilibrium {
    pub gam: f64,
    pub kind: EquilibriumKind,
    /// Square of the eigenvalues of the linearized field at ξ = η = 0.
    pub eigsq: f64,
}

/// Linearization of the ℋ_AV field at (ξ, η) = (0, 0) for given Γ.
pub fn classify_averaged(model: &Model, gam: f64) -> AveragedEquilibrium {
    let j = model.hav_generic(Jet2::<2>::var(0.0, 0), Jet2::var(0.0, 1), Jet2::cst(gam));
    let h = j.h;
    let eigsq = h[0][1] * h[0][1] - h[0][0] * h[1][1];
    let kind = if eigsq > 0.0 {
        EquilibriumKind::Saddle
    } else if eigsq < 0.0 {
        EquilibriumKind::Center
    } else {
        EquilibriumKind::Degenerate
    };
    AveragedEquilibrium { gam, kind, eigsq }
}

/// Γ₁, Γ₂ where the averaged equilibrium changes type, and
/// E^AV_k = ℋ_AV(0, 0, Γ_k).
pub fn find_gamma12(model: &Model) -> Result<(f64, f64, f64, f64)> {
    let m = (-4.0 + 21f64.sqrt()) / 5.0;
    let l = model.l;
    let f = |g: f64| Ok(classify_averaged(model, g).eigsq);
    let g1 = roots::brent(1e-9 * l, 0.5 * m * l, 1e-15, 200, f)?;
    let g2 = roots::brent(0.5 * m * l, 0.4999 * l, 1e-15, 200, f)?;
    Ok((g1, g2, model.hav(0.0, 0.0, g1), model.hav(0.0, 0.0, g2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ModelParams;

    fn model() -> Model {
        Model::new(ModelParams::default())
    }

    fn threshold_model() -> Model {
        Model::new(ModelParams::new(crate::PhysicalConstants::threshold_profile()).unwrap())
    }

    #[test]
    fn top_energy_has_zero_gamma() {
        let m = threshold_model();
        let g = gamma0(&m, 2.477266122798186e-6).unwrap();
        assert!(g.abs() < 1e-12, "{g:e}");
    }

    #[test]
    fn averaged_thresholds() {
        let (g1, g2, e1, e2) = find_gamma12(&threshold_model()).unwrap();
        assert!((g1 - 0.029613649805289).abs() < 1e-9, "{g1}");
        assert!((g2 - 0.084971418151141).abs() < 1e-9, "{g2}");
        assert!((e1 - 2.072230388690642e-6).abs() < 1e-12, "{e1:e}");
        assert!((e2 + 3.473759155836634e-7).abs() < 1e-12, "{e2:e}");
        let m = model();
        assert_eq!(classify_averaged(&m, 0.5 * (g1 + g2)).kind, EquilibriumKind::Saddle);
        assert_eq!(classify_averaged(&m, 0.5 * g1).kind, EquilibriumKind::Center);
    }

    #[test]
    fn galileo_orbit_is_hyperbolic() {
        let m = model();
        let s = FlowSettings::default();
        let r = solve_periodic(&m, 1.7e-8, &s).unwrap();
        assert_eq!(r.kind, OrbitKind::Hyperbolic);
        let years = m.params.time_in_years(r.t0);
        assert!(years > 30.0 && years < 40.0, "{years}");
        let n = r.n_t0(&m) / PI;
        assert!((3.9..4.15).contains(&n), "{n}");
    }
}

//! Flows of the coplanar and inclined models.
//!
//! States are stored as `[ξ, η, Γ, h]`. The canonical equations are
//! ξ̇ = ∂ηℋ, η̇ = −∂ξℋ, Γ̇ = −∂hℋ, ḣ = ∂Γℋ. Along the whole resonant region
//! ∂Γℋ_CP < 0 (the node regresses), so the section {h = 0} is crossed with h
//! decreasing and one physical return advances the node angle h by −2π.
//!
//! The reparametrized flow uses h itself as the independent variable s,
//! dividing every component by ∂Γℋ_CP. Moving forward in physical time thus
//! means moving backward in s.

use crate::error::{Error, Result};
use crate::hamiltonians::{Model, Point};
use crate::jet::{Jet1, Scalar};
use crate::ode::{self, Tolerances};
use nalgebra::{Matrix4, SMatrix};
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FlowSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_step: f64,
    /// Tolerance on h when a section crossing is refined.
    pub event_tol: f64,
}

impl Default for FlowSettings {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-13,
            max_step: f64::INFINITY,
            event_tol: 1e-13,
        }
    }
}

impl FlowSettings {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: tol,
            ..Self::default()
        }
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            rtol: self.rel_tol,
            atol: self.abs_tol,
            h_max: self.max_step,
            ..Tolerances::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("abs_tol", self.abs_tol), ("rel_tol", self.rel_tol), ("event_tol", self.event_tol)] {
            if !(v > 0.0 && v < 1e-6) {
                return Err(Error::InvalidParameter {
                    name: name.into(),
                    reason: format!("{v:e} not in (0, 1e-6)"),
                });
            }
        }
        Ok(())
    }
}

/// Symplectic gradient: maps (∂ξ, ∂η, ∂Γ, ∂h) to (ξ̇, η̇, Γ̇, ḣ).
fn sympl(g: [f64; 4]) -> [f64; 4] {
    [g[1], -g[0], -g[3], g[2]]
}

pub fn vf_physical(model: &Model, y: &[f64; 4]) -> [f64; 4] {
    let g = model.hcp_grad(&Point::from_array(*y));
    sympl([g.d_xi, g.d_eta, g.d_gam, g.d_h])
}

/// Reparametrized field d/ds with dh/ds = 1.
pub fn vf_reparam(model: &Model, y: &[f64; 4]) -> [f64; 4] {
    let v = vf_physical(model, y);
    let k = 1.0 / v[3];
    [v[0] * k, v[1] * k, v[2] * k, 1.0]
}

/// Jacobian of the physical field, built from the Hessian of ℋ_CP.
pub fn vf_jacobian(model: &Model, y: &[f64; 4]) -> Matrix4<f64> {
    let hs = model.hcp_hessian(&Point::from_array(*y)).h;
    let row = |i: usize| hs[i];
    let rows = [row(1), row(0).map(|v| -v), row(3).map(|v| -v), row(2)];
    Matrix4::from_fn(|i, j| rows[i][j])
}

/// ∂Γℋ_CP, the physical angular velocity of h.
pub fn h_dot(model: &Model, p: &Point) -> f64 {
    model.hcp_grad(p).d_gam
}

fn check_finite(y: &[f64], t: f64) -> Result<()> {
    if y.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Integration {
            t,
            reason: "state left the model domain".into(),
        })
    }
}

/// Physical-time flow over time `t`.
pub fn flow_physical(model: &Model, p: &Point, t: f64, settings: &FlowSettings) -> Result<Point> {
    let sys = |_t: f64, y: &[f64; 4], dy: &mut [f64; 4]| *dy = vf_physical(model, y);
    let y = ode::integrate(&sys, 0.0, p.as_array(), t, settings.tolerances())?;
    check_finite(&y, t)?;
    Ok(Point::from_array(y))
}

/// Reparametrized flow over Δh = `s`. Fails if ∂Γℋ_CP vanishes on the way.
pub fn flow_reparam(model: &Model, p: &Point, s: f64, settings: &FlowSettings) -> Result<Point> {
    let sys = |_t: f64, y: &[f64; 4], dy: &mut [f64; 4]| *dy = vf_reparam(model, y);
    let sign0 = h_dot(model, p).signum();
    let mut broke = false;
    let y = ode::integrate_observed(&sys, 0.0, p.as_array(), s, settings.tolerances(), |st| {
        if h_dot(model, &Point::from_array(st.y)).signum() != sign0 {
            broke = true;
            return false;
        }
        true
    })?;
    if broke {
        return Err(Error::Domain("∂Γℋ_CP changes sign: reparametrization breaks down".into()));
    }
    check_finite(&y, s)?;
    let mut out = Point::from_array(y);
    out.h = p.h + s;
    Ok(out)
}

/// Δs of one forward (physical-time) return to the section through `p`.
fn return_span(model: &Model, p: &Point) -> Result<f64> {
    let hd = h_dot(model, p);
    if hd == 0.0 || !hd.is_finite() {
        return Err(Error::Domain(format!("ḣ = {hd:e} at {p:?}")));
    }
    Ok(TAU * hd.signum())
}

/// First return Π₀ to the section through `p` in forward physical time,
/// computed with the reparametrized flow. The returned h equals `p.h`.
pub fn poincare_map(model: &Model, p: &Point, settings: &FlowSettings) -> Result<Point> {
    let span = return_span(model, p)?;
    let mut q = flow_reparam(model, p, span, settings)?;
    q.h = p.h;
    Ok(q)
}

/// Π₀⁻¹.
pub fn poincare_map_inverse(model: &Model, p: &Point, settings: &FlowSettings) -> Result<Point> {
    let span = return_span(model, p)?;
    let mut q = flow_reparam(model, p, -span, settings)?;
    q.h = p.h;
    Ok(q)
}

/// Return time and point of Π₀ computed in physical time with the crossing
/// of h = p.h ∓ 2π located on the dense output.
pub fn poincare_map_physical(model: &Model, p: &Point, settings: &FlowSettings, t_max: f64) -> Result<(f64, Point)> {
    let span = return_span(model, p)?;
    let target = p.h + span;
    let sys = |_t: f64, y: &[f64; 4], dy: &mut [f64; 4]| *dy = vf_physical(model, y);
    let dir = if span > 0.0 { 1 } else { -1 };
    let ev = ode::integrate_to_event(
        &sys,
        0.0,
        p.as_array(),
        t_max,
        settings.tolerances(),
        dir,
        settings.event_tol,
        |_t, y| y[3] - target,
    )?
    .ok_or_else(|| Error::NoIntersection(format!("no return to the section within t = {t_max:e}")))?;
    check_finite(&ev.y, ev.t)?;
    let mut q = Point::from_array(ev.y);
    q.h = p.h;
    Ok((ev.t, q))
}

/// State and fundamental matrix of the variational equations after time `t`.
pub fn variational_flow(
    model: &Model,
    p: &Point,
    m0: Matrix4<f64>,
    t: f64,
    settings: &FlowSettings,
) -> Result<(Point, Matrix4<f64>)> {
    let sys = |_t: f64, y: &[f64; 20], dy: &mut [f64; 20]| {
        let x = [y[0], y[1], y[2], y[3]];
        let v = vf_physical(model, &x);
        let a = vf_jacobian(model, &x);
        let m = SMatrix::<f64, 4, 4>::from_column_slice(&y[4..20]);
        let dm = a * m;
        dy[..4].copy_from_slice(&v);
        dy[4..].copy_from_slice(dm.as_slice());
    };
    let mut y0 = [0.0; 20];
    y0[..4].copy_from_slice(&p.as_array());
    y0[4..].copy_from_slice(m0.as_slice());
    let y = ode::integrate(&sys, 0.0, y0, t, settings.tolerances())?;
    check_finite(&y, t)?;
    Ok((
        Point::new(y[0], y[1], y[2], y[3]),
        Matrix4::from_column_slice(&y[4..20]),
    ))
}

/// Solves ℋ_CP(ξ, η, Γ, h) = E for Γ by Newton's method from `guess`.
pub fn recover_gamma(model: &Model, xi: f64, eta: f64, h: f64, energy: f64, guess: f64) -> Result<f64> {
    let mut gam = guess;
    let mut res = f64::NAN;
    for _ in 0..30 {
        let j = model.hcp_generic(
            <Jet1<1> as Scalar>::cst(xi),
            Jet1::cst(eta),
            Jet1::var(gam, 0),
            Jet1::cst(h),
        );
        res = j.v - energy;
        let step = res / j.d[0];
        if !step.is_finite() {
            break;
        }
        gam -= step;
        if step.abs() <= 1e-15 * gam.abs().max(1e-3) {
            let p = Point::new(xi, eta, gam, h);
            model.check_domain(&p)?;
            return Ok(gam);
        }
    }
    Err(Error::NonConvergence {
        what: "Γ recovery",
        iterations: 30,
        residual: res,
    })
}

/// Jacobian of the reparametrized field with respect to (ξ, η, Γ).
pub fn vf_reparam_jacobian(model: &Model, y: &[f64; 4]) -> nalgebra::Matrix3<f64> {
    let jet = model.hcp_hessian(&Point::from_array(*y));
    let (g, hs) = (jet.d, jet.h);
    // Numerators of (ξ', η', Γ') as ±∂_k ℋ over ∂_Γ ℋ.
    let comps = [(1.0, 1usize), (-1.0, 0usize), (-1.0, 3usize)];
    let gg = g[2];
    nalgebra::Matrix3::from_fn(|i, j| {
        let (sg, k) = comps[i];
        sg * (hs[k][j] * gg - g[k] * hs[2][j]) / (gg * gg)
    })
}

/// Reparametrized flow over Δh = `s` together with the image of a tangent
/// vector (δξ, δη, δΓ) at fixed h.
pub fn flow_reparam_tangent(
    model: &Model,
    p: &Point,
    v: [f64; 3],
    s: f64,
    settings: &FlowSettings,
) -> Result<(Point, [f64; 3])> {
    let sys = |_t: f64, y: &[f64; 7], dy: &mut [f64; 7]| {
        let x = [y[0], y[1], y[2], y[3]];
        let f = vf_reparam(model, &x);
        let a = vf_reparam_jacobian(model, &x);
        let dv = a * nalgebra::Vector3::new(y[4], y[5], y[6]);
        dy[..4].copy_from_slice(&f);
        dy[4..].copy_from_slice(dv.as_slice());
    };
    let a = p.as_array();
    let y0 = [a[0], a[1], a[2], a[3], v[0], v[1], v[2]];
    let y = ode::integrate(&sys, 0.0, y0, s, settings.tolerances())?;
    check_finite(&y, s)?;
    Ok((Point::new(y[0], y[1], y[2], p.h + s), [y[4], y[5], y[6]]))
}

/// Reversor Φʰ(ξ, η, Γ, h) = (ξ, −η, Γ, −h).
pub fn phi_h(p: &Point) -> Point {
    Point::new(p.xi, -p.eta, p.gam, -p.h)
}

/// Reversor Φᵛ(ξ, η, Γ, h) = (−ξ, η, Γ, −h).
pub fn phi_v(p: &Point) -> Point {
    Point::new(-p.xi, p.eta, p.gam, -p.h)
}

/// Physical field of the inclined problem on the extended state
/// `[ξ, η, Γ, h, J, Ω_M]`, with Ω̇_M = n_ΩM and J̇ = −∂_Ωℋ.
pub fn vf_extended(model: &Model, i_m: f64, y: &[f64; 6]) -> [f64; 6] {
    let j = model.h_full_generic(
        Jet1::<5>::var(y[0], 0),
        Jet1::var(y[1], 1),
        Jet1::var(y[2], 2),
        Jet1::var(y[3], 3),
        Jet1::var(y[5], 4),
        i_m,
    );
    let v = sympl([j.d[0], j.d[1], j.d[2], j.d[3]]);
    [v[0], v[1], v[2], v[3], -j.d[4], model.n_omega]
}

/// Extended-phase-space energy 𝒦 = ℋ + n_ΩM J.
pub fn extended_energy(model: &Model, i_m: f64, y: &[f64; 6]) -> f64 {
    model.h_full(&Point::new(y[0], y[1], y[2], y[3]), y[5], i_m) + model.n_omega * y[4]
}

/// Reparametrized extended field (d/dh), valid while ḣ ≠ 0.
pub fn vf_extended_reparam(model: &Model, i_m: f64, y: &[f64; 6]) -> [f64; 6] {
    let v = vf_extended(model, i_m, y);
    let k = 1.0 / v[3];
    [v[0] * k, v[1] * k, v[2] * k, 1.0, v[4] * k, v[5] * k]
}

pub fn flow_extended_reparam(model: &Model, i_m: f64, y0: [f64; 6], s: f64, settings: &FlowSettings) -> Result<[f64; 6]> {
    let sys = |_t: f64, y: &[f64; 6], dy: &mut [f64; 6]| *dy = vf_extended_reparam(model, i_m, y);
    let mut y = ode::integrate(&sys, 0.0, y0, s, settings.tolerances())?;
    check_finite(&y, s)?;
    y[3] = y0[3] + s;
    Ok(y)
}

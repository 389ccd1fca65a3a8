//! Phase shift of the scattering map and first-order coefficients of the
//! inner and outer maps of the inclined problem.
//!
//! With ℋ = ℋ_CP + i_M α³ ℛ₁ + O(i_M²), ℛ₁ = ℛ₁⁺ e^{iΩ_M} + ℛ₁⁻ e^{−iΩ_M} and
//! J̇ = −∂_{Ω_M}ℋ, the change of J along an orbit of the coplanar flow whose
//! lunar node advances as Ω_M + n t is, to first order,
//! −i_M α³ ∫ i(ℛ₁⁺ e^{i(Ω_M + n t)} − c.c.) dt.
//!
//! All integrals run in forward physical time t and are accumulated alongside
//! the reparametrized flow: one block is one return to {h = 0}, of duration
//! 𝒯₀ on the periodic orbit. Along a homoclinic orbit block durations and
//! integrands converge to their periodic values at the rate of the
//! hyperbolicity, so the improper integrals are summed block by block as
//! differences with the periodic orbit.
//!
//! Phases follow the scattering map: the homoclinic point carries
//! Ω_M = Ω₋ + n ζ₊, its past asymptotic point on the cylinder Ω₋ and its
//! future one Ω₋ + 2n ζ₊.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::dynamics::{self, FlowSettings};
use crate::error::{Error, Result};
use crate::hamiltonians::{Model, Point};
use crate::manifolds::{self, Channel, HomoclinicRecord};
use crate::ode;
use crate::periodic::{self, PeriodicOrbitRecord};

/// One return of the coplanar flow to {h = 0}.
#[derive(Debug, Clone, Copy)]
pub struct Block {
    pub end: Point,
    /// Elapsed physical time; negative for a backward block.
    pub duration: f64,
    /// ∫ g(z(t)) e^{i n t} dt from the start of the block (t = 0) to its end.
    pub integral: Complex64,
}

/// Integrates one forward (or backward) return from `p` together with the
/// elapsed time and the weighted integral of `g`.
pub fn block<G>(model: &Model, p: &Point, backward: bool, settings: &FlowSettings, g: &G) -> Result<Block>
where
    G: Fn(&Point) -> Complex64,
{
    let hd = dynamics::h_dot(model, p);
    if hd == 0.0 || !hd.is_finite() {
        return Err(Error::Domain(format!("ḣ = {hd:e} at {p:?}")));
    }
    let span = if backward { -TAU } else { TAU } * hd.signum();
    let n = model.n_omega;
    let sys = |_s: f64, y: &[f64; 7], dy: &mut [f64; 7]| {
        let z = [y[0], y[1], y[2], y[3]];
        let grad = model.hcp_grad(&Point::from_array(z));
        let k = 1.0 / grad.d_gam;
        let w = g(&Point::from_array(z)) * Complex64::from_polar(k, n * y[4]);
        *dy = [grad.d_eta * k, -grad.d_xi * k, -grad.d_h * k, 1.0, k, w.re, w.im];
    };
    let y0 = [p.xi, p.eta, p.gam, p.h, 0.0, 0.0, 0.0];
    let y = ode::integrate(&sys, 0.0, y0, span, settings.tolerances())?;
    if !y.iter().all(|v| v.is_finite()) {
        return Err(Error::Integration {
            t: span,
            reason: "state left the model domain".into(),
        });
    }
    Ok(Block {
        end: Point::new(y[0], y[1], y[2], p.h),
        duration: y[4],
        integral: Complex64::new(y[5], y[6]),
    })
}

/// Period 𝒯₀ and P = ∫₀^{𝒯₀} g(γ(t)) e^{i n t} dt over the periodic orbit.
pub fn periodic_integral<G>(model: &Model, orbit: &PeriodicOrbitRecord, settings: &FlowSettings, g: &G) -> Result<(f64, Complex64)>
where
    G: Fn(&Point) -> Complex64,
{
    let b = block(model, &orbit.fixed_point(), false, settings, g)?;
    Ok((b.duration, b.integral))
}

/// A₁⁺ = −i α³ ∫₀^{𝒯₀} ℛ₁⁺(γ(t)) e^{i n t} dt, so that one period of the inner
/// map changes J by i_M (A₁⁺ e^{iΩ_M} + c.c.).
pub fn a1(model: &Model, orbit: &PeriodicOrbitRecord, settings: &FlowSettings) -> Result<Complex64> {
    let (_, p) = periodic_integral(model, orbit, settings, &|z: &Point| model.r1_plus(z))?;
    Ok(-Complex64::i() * model.alpha3 * p)
}

/// Stopping rule for the tail sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailSettings {
    /// A block whose phase contribution n·|Δt − 𝒯₀| and relative integrand
    /// difference are both below this ends the sum.
    pub block_tol: f64,
    /// Tails whose blocks stop decreasing are accepted if the smallest block
    /// reached this level; the orbit then has drifted off the manifold by the
    /// accuracy of the homoclinic point.
    pub accept_tol: f64,
    pub max_blocks: usize,
}

impl Default for TailSettings {
    fn default() -> Self {
        Self {
            block_tol: 1e-14,
            accept_tol: 1e-6,
            max_blocks: 400,
        }
    }
}

/// Blocks of one half of a homoclinic orbit, starting at the homoclinic point.
#[derive(Debug, Clone)]
pub struct Tail {
    /// Start time of each block, relative to the homoclinic point.
    pub starts: Vec<f64>,
    pub blocks: Vec<Block>,
    /// Size of the last block kept, relative to 𝒯₀.
    pub last: f64,
}

impl Tail {
    /// Σ (|Δt_l| − 𝒯₀).
    pub fn excess(&self, t0: f64) -> f64 {
        self.blocks.iter().map(|b| b.duration.abs() - t0).sum()
    }
}

/// Integrates the homoclinic orbit from `x` forward or backward until its
/// blocks match those of the periodic orbit.
pub fn tail<G>(
    model: &Model,
    x: &Point,
    t0: f64,
    per: Complex64,
    backward: bool,
    settings: &FlowSettings,
    tails: &TailSettings,
    g: &G,
) -> Result<Tail>
where
    G: Fn(&Point) -> Complex64,
{
    let n = model.n_omega;
    let scale = per.norm().max(f64::MIN_POSITIVE);
    let mut z = *x;
    let mut t = 0.0;
    let mut out = Tail {
        starts: Vec::new(),
        blocks: Vec::new(),
        last: f64::INFINITY,
    };
    let mut best = f64::INFINITY;
    let mut best_len = 0;
    let mut departed = false;
    for l in 0..tails.max_blocks {
        let b = block(model, &z, backward, settings, g)?;
        let dt = b.duration.abs() - t0;
        // Compare with the periodic block in the frame of the block's start.
        let dint = (b.integral - if backward { -per * Complex64::from_polar(1.0, -n * t0) } else { per }).norm() / scale;
        let size = (n * dt).abs().max(dint);
        out.starts.push(t);
        out.blocks.push(b);
        t += b.duration;
        z = b.end;
        // Secondary orbits start next to the cylinder and only settle after
        // their excursion.
        departed |= size >= 1e-3;
        if !departed {
            continue;
        }
        if size < best {
            best = size;
            best_len = l + 1;
        }
        if size < tails.block_tol {
            out.last = size;
            return Ok(out);
        }
        // Blocks growing again after having become small: the orbit is
        // leaving the cylinder along the error of the homoclinic point.
        if best < 1e-3 && l >= best_len + 2 {
            break;
        }
    }
    if best < tails.accept_tol {
        out.starts.truncate(best_len);
        out.blocks.truncate(best_len);
        out.last = best;
        return Ok(out);
    }
    Err(Error::NonConvergence {
        what: "homoclinic tail",
        iterations: out.blocks.len(),
        residual: best,
    })
}

/// Coefficients of the inner and outer maps at one energy and channel.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct MelnikovRecord {
    pub energy: f64,
    /// J = −E/n_ΩM.
    pub j: f64,
    pub channel: Channel,
    pub t0: f64,
    /// ζ₊ from the forward tail and ζ₋ from the backward tail.
    pub zeta_plus: f64,
    pub zeta_minus: f64,
    pub zeta: f64,
    pub a1p: Complex64,
    pub b1p: Complex64,
    pub f_plus: Complex64,
    /// Blocks used in the forward and backward tails.
    pub blocks: (usize, usize),
    /// Size of the last block kept in each tail.
    pub tail_residual: (f64, f64),
}

impl MelnikovRecord {
    pub fn a1m(&self) -> Complex64 {
        self.a1p.conj()
    }

    pub fn b1m(&self) -> Complex64 {
        self.b1p.conj()
    }

    pub fn f_minus(&self) -> Complex64 {
        self.f_plus.conj()
    }

    /// n ζ / π.
    pub fn n_zeta_over_pi(&self, model: &Model) -> f64 {
        model.n_omega * self.zeta / std::f64::consts::PI
    }

    /// B̃₁⁺ = B₁⁺ − A₁⁺ (e^{inζ} − 1)/(e^{in𝒯₀} − 1), valid away from the
    /// double resonance.
    pub fn b1_tilde(&self, model: &Model) -> Result<Complex64> {
        let (et, ez) = self.phase_factors(model);
        if et.norm() < 1e-6 {
            return Err(Error::InvalidParameter {
                name: "energy".into(),
                reason: format!("|e^(in T0) - 1| = {:e}: too close to the double resonance", et.norm()),
            });
        }
        Ok(self.b1p - self.a1p * ez / et)
    }

    /// Â₁⁺ = A₁⁺ − B₁⁺ (e^{in𝒯₀} − 1)/(e^{inζ} − 1), used near the double
    /// resonance.
    pub fn a1_hat(&self, model: &Model) -> Result<Complex64> {
        let (et, ez) = self.phase_factors(model);
        if ez.norm() < 1e-6 {
            return Err(Error::InvalidParameter {
                name: "energy".into(),
                reason: format!("|e^(in zeta) - 1| = {:e}", ez.norm()),
            });
        }
        Ok(self.a1p - self.b1p * et / ez)
    }

    /// (e^{in𝒯₀} − 1, e^{inζ} − 1).
    fn phase_factors(&self, model: &Model) -> (Complex64, Complex64) {
        let n = model.n_omega;
        (
            Complex64::from_polar(1.0, n * self.t0) - 1.0,
            Complex64::from_polar(1.0, n * self.zeta) - 1.0,
        )
    }
}

/// Σ over the first `n_blocks` blocks of each tail of the homoclinic
/// integrand minus its asymptotic periodic counterpart, i.e. B₁⁺/(−iα³).
fn outer_sum(model: &Model, fwd: &Tail, bwd: &Tail, t0: f64, per: Complex64, zeta_plus: f64, n_blocks: usize) -> Complex64 {
    let n = model.n_omega;
    let e = |phase: f64| Complex64::from_polar(1.0, n * phase);
    let mut sum = Complex64::new(0.0, 0.0);
    // Forward: homoclinic phase Ω₋ + nζ₊ against the cylinder at Ω₋ + 2nζ₊.
    for (l, (b, &ts)) in fwd.blocks.iter().zip(&fwd.starts).enumerate().take(n_blocks) {
        sum += e(ts + zeta_plus) * b.integral - e(l as f64 * t0 + 2.0 * zeta_plus) * per;
    }
    // Backward: blocks run from t_l down to t_l + Δt_l against the cylinder at Ω₋.
    for (l, (b, &ts)) in bwd.blocks.iter().zip(&bwd.starts).enumerate().take(n_blocks) {
        sum += -e(ts + zeta_plus) * b.integral - e(-((l + 1) as f64) * t0) * per;
    }
    sum
}

/// Computes ζ±, A₁⁺, B₁⁺ and f₊ for the homoclinic orbit through `hom`.
pub fn melnikov_at(
    model: &Model,
    orbit: &PeriodicOrbitRecord,
    hom: &HomoclinicRecord,
    settings: &FlowSettings,
    tails: &TailSettings,
) -> Result<MelnikovRecord> {
    let n = model.n_omega;
    let r = |z: &Point| model.r1_plus(z);
    let (t0, per) = periodic_integral(model, orbit, settings, &r)?;
    let a1p = -Complex64::i() * model.alpha3 * per;
    let x = Point::new(hom.point.xi, hom.point.eta, hom.point.gam, 0.0);
    let fwd = tail(model, &x, t0, per, false, settings, tails, &r)?;
    let bwd = tail(model, &x, t0, per, true, settings, tails, &r)?;
    let zeta_plus = fwd.excess(t0);
    let zeta_minus = -bwd.excess(t0);
    let sum = outer_sum(model, &fwd, &bwd, t0, per, zeta_plus, usize::MAX);
    let b1p = -Complex64::i() * model.alpha3 * sum;
    let zeta = zeta_plus - zeta_minus;
    let e = |phase: f64| Complex64::from_polar(1.0, n * phase);
    let f_plus = (e(t0) - 1.0) * b1p - (e(zeta) - 1.0) * a1p;
    Ok(MelnikovRecord {
        energy: orbit.energy,
        j: -orbit.energy / n,
        channel: hom.channel,
        t0,
        zeta_plus,
        zeta_minus,
        zeta,
        a1p,
        b1p,
        f_plus,
        blocks: (fwd.blocks.len(), bwd.blocks.len()),
        tail_residual: (fwd.last, bwd.last),
    })
}

/// Melnikov record of `channel` at energy `e`, on the negative unstable
/// branch.
pub fn melnikov(model: &Model, e: f64, channel: Channel, settings: &FlowSettings) -> Result<MelnikovRecord> {
    let orbit = periodic::solve_periodic(model, e, settings)?;
    let branch = manifolds::Branch::new(model, orbit, manifolds::Side::Unstable, -1.0, *settings)?;
    let hom = manifolds::homoclinic(&branch, channel, &manifolds::CrossingSearch::default())?;
    melnikov_at(model, &orbit, &hom, settings, &TailSettings::default())
}

/// Melnikov records on an energy grid, in grid order.
pub fn scan(model: &Model, energies: &[f64], channel: Channel, settings: &FlowSettings) -> Vec<(f64, Result<MelnikovRecord>)> {
    energies.iter().map(|&e| (e, melnikov(model, e, channel, settings))).collect()
}

/// Golden-section minimization of |f₊| on [lo, hi].
pub fn minimize_abs_f(model: &Model, lo: f64, hi: f64, channel: Channel, settings: &FlowSettings, e_tol: f64) -> Result<MelnikovRecord> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let f = |e: f64| melnikov(model, e, channel, settings);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > e_tol {
        if fc.f_plus.norm() < fd.f_plus.norm() {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc.f_plus.norm() < fd.f_plus.norm() { fc } else { fd })
}

/// J-increment i_M (C e^{iΩ} + c.c.) of a first-order map with coefficient C.
pub fn first_order_jump(c: Complex64, omega: f64, i_m: f64) -> f64 {
    2.0 * i_m * (c * Complex64::from_polar(1.0, omega)).re
}

/// J-increments of the inclined flow (i_M > 0) integrated directly, for
/// comparison with the first-order maps.
pub mod oracle {
    use super::*;

    /// Extended state [ξ, η, Γ, h, J, Ω_M] after `returns` returns to the
    /// section, forward or backward in time.
    fn returns(model: &Model, i_m: f64, y0: [f64; 6], count: usize, backward: bool, settings: &FlowSettings) -> Result<[f64; 6]> {
        let mut y = y0;
        for _ in 0..count {
            let hd = dynamics::vf_extended(model, i_m, &y)[3];
            let span = if backward { -TAU } else { TAU } * hd.signum();
            y = dynamics::flow_extended_reparam(model, i_m, y, span, settings)?;
            y[3] = y0[3];
        }
        Ok(y)
    }

    /// ΔJ over one return from the periodic orbit's section point with the
    /// lunar node at `omega`.
    pub fn inner_jump(model: &Model, orbit: &PeriodicOrbitRecord, omega: f64, i_m: f64, settings: &FlowSettings) -> Result<f64> {
        let y0 = [0.0, 0.0, orbit.gam0, 0.0, 0.0, omega];
        Ok(returns(model, i_m, y0, 1, false, settings)?[4])
    }

    /// ΔJ across `n_blocks` returns on each side of the homoclinic point, minus
    /// the increments of the past and future cylinder orbits over the same
    /// number of returns. `omega_minus` is the node phase of the past
    /// asymptotic point and `zeta_plus` the coplanar phase shift.
    pub fn outer_jump(
        model: &Model,
        orbit: &PeriodicOrbitRecord,
        hom: &HomoclinicRecord,
        zeta_plus: f64,
        omega_minus: f64,
        i_m: f64,
        n_blocks: usize,
        settings: &FlowSettings,
    ) -> Result<f64> {
        let n = model.n_omega;
        let x = [hom.point.xi, hom.point.eta, hom.point.gam, 0.0, 0.0, omega_minus + n * zeta_plus];
        let fwd = returns(model, i_m, x, n_blocks, false, settings)?[4];
        let bwd = returns(model, i_m, x, n_blocks, true, settings)?[4];
        let c = [0.0, 0.0, orbit.gam0, 0.0, 0.0, 0.0];
        let plus = returns(model, i_m, [c[0], c[1], c[2], c[3], 0.0, omega_minus + 2.0 * n * zeta_plus], n_blocks, false, settings)?[4];
        let minus = returns(model, i_m, [c[0], c[1], c[2], c[3], 0.0, omega_minus], n_blocks, true, settings)?[4];
        Ok((fwd - bwd) - (plus - minus))
    }

    /// First-order prediction matching [`outer_jump`]: B₁⁺ summed over the same
    /// `n_blocks` blocks on each side.
    pub fn b1_truncated(
        model: &Model,
        orbit: &PeriodicOrbitRecord,
        hom: &HomoclinicRecord,
        zeta_plus: f64,
        n_blocks: usize,
        settings: &FlowSettings,
    ) -> Result<Complex64> {
        let r = |z: &Point| model.r1_plus(z);
        let (t0, per) = periodic_integral(model, orbit, settings, &r)?;
        let x = Point::new(hom.point.xi, hom.point.eta, hom.point.gam, 0.0);
        let fwd = fixed_tail(model, &x, n_blocks, false, settings, &r)?;
        let bwd = fixed_tail(model, &x, n_blocks, true, settings, &r)?;
        Ok(-Complex64::i() * model.alpha3 * outer_sum(model, &fwd, &bwd, t0, per, zeta_plus, n_blocks))
    }

    fn fixed_tail<G>(model: &Model, x: &Point, count: usize, backward: bool, settings: &FlowSettings, g: &G) -> Result<Tail>
    where
        G: Fn(&Point) -> Complex64,
    {
        let mut out = Tail {
            starts: Vec::with_capacity(count),
            blocks: Vec::with_capacity(count),
            last: f64::NAN,
        };
        let (mut z, mut t) = (*x, 0.0);
        for _ in 0..count {
            let b = block(model, &z, backward, settings, g)?;
            out.starts.push(t);
            out.blocks.push(b);
            t += b.duration;
            z = b.end;
        }
        Ok(out)
    }
}

//! First-order inner and scattering maps on the cylinder of circular periodic
//! orbits, and a greedy transition chain that drifts the action J.
//!
//! The cylinder is parametrized by (J, Ω_M) with E = −n J. At first order in
//! i_M the inner map is J' = J + i_M(A₁⁺e^{iΩ} + c.c.), Ω' = Ω + n𝒯₀(J), and
//! the scattering map of a channel is J' = J + i_M(B₁⁺e^{iΩ} + c.c.),
//! Ω' = Ω + nζ(J). The coefficients come from tables on an energy grid.
//!
//! Away from the double resonance n𝒯₀ = 4π the combination
//! J̃ = J − 2 i_M Re(A₁⁺e^{iΩ}/(e^{in𝒯₀} − 1)) is invariant under the inner map
//! and jumps by 2 i_M Re(B̃₁⁺e^{iΩ}) under the scattering map, so the builder
//! rotates with the inner map until that jump is large and positive, then
//! scatters. Near the double resonance the roles are exchanged with
//! Â₁⁺ = A₁⁺ − B₁⁺(e^{in𝒯₀} − 1)/(e^{inζ} − 1): the scattering map rotates and
//! the inner map jumps.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::dynamics::FlowSettings;
use crate::error::{Error, Result};
use crate::hamiltonians::Model;
use crate::manifolds::{self, Branch, Channel, CrossingSearch, Side};
use crate::melnikov::{self, TailSettings};
use crate::periodic::{self, grid};

/// Point (J, Ω_M) of the cylinder.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CylinderPoint {
    pub j: f64,
    pub omega: f64,
}

/// Coefficients at one grid energy.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct Node {
    pub energy: f64,
    pub t0: f64,
    pub a1p: Complex64,
    /// Primary channel data; absent where the homoclinic computation failed.
    pub pri: Option<ChannelData>,
    /// Section values for the primary homoclinic orbit (e_max, i_min, i_max)
    /// and the inclination of the periodic orbit [deg].
    pub e_max: f64,
    pub i_min: f64,
    pub i_max: f64,
    pub i_periodic: f64,
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ChannelData {
    pub zeta: f64,
    pub b1p: Complex64,
}

/// Secondary channel data at a primary tangency energy.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct Band {
    pub energy: f64,
    pub sec: ChannelData,
}

/// Interpolation tables for the maps.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Tables {
    pub n_omega: f64,
    pub nodes: Vec<Node>,
    /// Primary tangencies, each with secondary data.
    pub bands: Vec<Band>,
    /// Half-width in energy of the bands where the secondary channel is used.
    pub delta: f64,
}

/// Grid specification for [`Tables::build`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableSpec {
    pub e_lo: f64,
    pub e_hi: f64,
    pub n: usize,
    pub delta: f64,
}

impl Default for TableSpec {
    fn default() -> Self {
        Self {
            e_lo: 1.0e-8,
            e_hi: 1.32e-6,
            n: 80,
            delta: 1e-9,
        }
    }
}

impl Tables {
    /// Scans the periodic orbits, primary homoclinics and Melnikov
    /// coefficients on the grid, locates the primary tangencies inside it and
    /// computes the secondary channel there.
    pub fn build(model: &Model, spec: &TableSpec, settings: &FlowSettings) -> Result<Tables> {
        let search = CrossingSearch::default();
        let tails = TailSettings::default();
        let mut nodes = Vec::with_capacity(spec.n);
        let mut angles = Vec::with_capacity(spec.n);
        for e in grid(spec.e_lo, spec.e_hi, spec.n) {
            let orbit = periodic::solve_periodic(model, e, settings)?;
            let a1p = melnikov::a1(model, &orbit, settings)?;
            let branch = Branch::new(model, orbit, Side::Unstable, -1.0, *settings)?;
            let hom = manifolds::homoclinic(&branch, Channel::Pri, &search)?;
            angles.push(hom.phi_oriented);
            let pri = melnikov::melnikov_at(model, &orbit, &hom, settings, &tails)
                .ok()
                .map(|r| ChannelData { zeta: r.zeta, b1p: r.b1p });
            nodes.push(Node {
                energy: e,
                t0: orbit.t0,
                a1p,
                pri,
                e_max: hom.e_max,
                i_min: hom.i_min,
                i_max: hom.i_max,
                i_periodic: model.inclination(&orbit.fixed_point()).to_degrees(),
            });
        }
        let energies: Vec<f64> = nodes.iter().map(|n| n.energy).collect();
        let tangencies = refine_tangencies(model, &energies, &angles, settings)?;
        let mut bands = Vec::with_capacity(tangencies.len());
        for e in tangencies {
            let r = melnikov::melnikov(model, e, Channel::Sec, settings)?;
            bands.push(Band {
                energy: e,
                sec: ChannelData { zeta: r.zeta, b1p: r.b1p },
            });
        }
        Ok(Tables {
            n_omega: model.n_omega,
            nodes,
            bands,
            delta: spec.delta,
        })
    }

    pub fn energy(&self, j: f64) -> f64 {
        -self.n_omega * j
    }

    pub fn action(&self, e: f64) -> f64 {
        -e / self.n_omega
    }

    fn check_energy(&self, e: f64) -> Result<()> {
        let (lo, hi) = (self.nodes[0].energy, self.nodes[self.nodes.len() - 1].energy);
        if !(lo..=hi).contains(&e) {
            return Err(Error::Domain(format!("E = {e:e} outside the tables [{lo:e}, {hi:e}]")));
        }
        Ok(())
    }

    /// Band containing `e`, if any.
    pub fn band(&self, e: f64) -> Option<&Band> {
        self.bands.iter().find(|b| (e - b.energy).abs() <= self.delta)
    }

    pub fn t0(&self, e: f64) -> Result<f64> {
        self.check_energy(e)?;
        Ok(interpolate(&self.nodes, e, |n| Some(n.t0)))
    }

    pub fn a1p(&self, e: f64) -> Result<Complex64> {
        self.check_energy(e)?;
        Ok(Complex64::new(
            interpolate(&self.nodes, e, |n| Some(n.a1p.re)),
            interpolate(&self.nodes, e, |n| Some(n.a1p.im)),
        ))
    }

    /// Channel used at energy `e` and its (ζ, B₁⁺): the secondary channel
    /// inside a tangency band, the primary one elsewhere. Primary values are
    /// interpolated only from nodes between the same pair of tangencies.
    pub fn channel(&self, e: f64) -> Result<(Channel, ChannelData)> {
        self.check_energy(e)?;
        if let Some(b) = self.band(e) {
            return Ok((Channel::Sec, b.sec));
        }
        let lo = self.bands.iter().map(|b| b.energy).filter(|&t| t < e).fold(f64::NEG_INFINITY, f64::max);
        let hi = self.bands.iter().map(|b| b.energy).filter(|&t| t > e).fold(f64::INFINITY, f64::min);
        let seg: Vec<Node> = self
            .nodes
            .iter()
            .filter(|n| n.pri.is_some() && n.energy > lo && n.energy < hi)
            .copied()
            .collect();
        if seg.is_empty() {
            return Err(Error::Domain(format!("no primary channel data near E = {e:e}")));
        }
        let zeta = interpolate(&seg, e, |n| n.pri.map(|p| p.zeta));
        let re = interpolate(&seg, e, |n| n.pri.map(|p| p.b1p.re));
        let im = interpolate(&seg, e, |n| n.pri.map(|p| p.b1p.im));
        Ok((
            Channel::Pri,
            ChannelData {
                zeta,
                b1p: Complex64::new(re, im),
            },
        ))
    }

    /// Section values (e_max, i_min, i_max) of the primary homoclinic orbit
    /// and the inclination of the periodic orbit at `e`.
    pub fn excursion(&self, e: f64) -> Result<(f64, f64, f64, f64)> {
        self.check_energy(e)?;
        Ok((
            interpolate(&self.nodes, e, |n| Some(n.e_max)),
            interpolate(&self.nodes, e, |n| Some(n.i_min)),
            interpolate(&self.nodes, e, |n| Some(n.i_max)),
            interpolate(&self.nodes, e, |n| Some(n.i_periodic)),
        ))
    }
}

/// Brackets the sign changes of the oriented primary splitting angle on the
/// grid and refines them.
fn refine_tangencies(model: &Model, energies: &[f64], angles: &[f64], settings: &FlowSettings) -> Result<Vec<f64>> {
    let search = CrossingSearch::default();
    let angle = |e: f64| -> Result<f64> {
        let b = Branch::unstable(model, e, *settings)?;
        let tau = manifolds::find_crossing(&b, Channel::Pri, &search)?;
        Ok(manifolds::oriented_angle(b.tangent(tau)?))
    };
    let mut out = Vec::new();
    for k in 1..energies.len() {
        if angles[k - 1].signum() != angles[k].signum() {
            let e = crate::roots::brent_with_values(energies[k - 1], angles[k - 1], energies[k], angles[k], 1e-16, 200, angle)?;
            out.push(e);
        }
    }
    Ok(out)
}

/// Cubic interpolation through the four nodes nearest to `e` among those
/// where `f` is defined; fewer nodes lower the degree.
fn interpolate<F>(nodes: &[Node], e: f64, f: F) -> f64
where
    F: Fn(&Node) -> Option<f64>,
{
    let pts: Vec<(f64, f64)> = nodes.iter().filter_map(|n| f(n).map(|v| (n.energy, v))).collect();
    let k = pts.partition_point(|p| p.0 < e);
    let lo = k.saturating_sub(2).min(pts.len().saturating_sub(4));
    let hi = (lo + 4).min(pts.len());
    let win = &pts[lo..hi];
    let mut acc = 0.0;
    for (i, &(xi, yi)) in win.iter().enumerate() {
        let mut w = 1.0;
        for (m, &(xm, _)) in win.iter().enumerate() {
            if m != i {
                w *= (e - xm) / (xi - xm);
            }
        }
        acc += w * yi;
    }
    acc
}

fn wrap(omega: f64) -> f64 {
    omega.rem_euclid(TAU)
}

/// J-increment 2 i_M Re(C e^{iΩ}) of a first-order map with coefficient C.
fn jump(c: Complex64, omega: f64, i_m: f64) -> f64 {
    melnikov::first_order_jump(c, omega, i_m)
}

/// One step of the inner map.
pub fn inner_map(p: CylinderPoint, i_m: f64, tables: &Tables) -> Result<CylinderPoint> {
    let e = tables.energy(p.j);
    let a = tables.a1p(e)?;
    Ok(CylinderPoint {
        j: p.j + jump(a, p.omega, i_m),
        omega: wrap(p.omega + tables.n_omega * tables.t0(e)?),
    })
}

/// One step of the scattering map of the channel in use at J.
pub fn outer_map(p: CylinderPoint, i_m: f64, tables: &Tables) -> Result<(Channel, CylinderPoint)> {
    let e = tables.energy(p.j);
    let (ch, data) = tables.channel(e)?;
    Ok((
        ch,
        CylinderPoint {
            j: p.j + jump(data.b1p, p.omega, i_m),
            omega: wrap(p.omega + tables.n_omega * data.zeta),
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Move {
    Inner,
    Outer(Channel),
}

impl Move {
    pub fn tag(&self) -> &'static str {
        match self {
            Move::Inner => "inner",
            Move::Outer(Channel::Pri) => "outer_pri",
            Move::Outer(Channel::Sec) => "outer_sec",
        }
    }
}

/// One applied map.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct Step {
    pub mv: Move,
    pub from: CylinderPoint,
    pub to: CylinderPoint,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct PseudoOrbit {
    pub start: CylinderPoint,
    pub steps: Vec<Step>,
    pub i_m: f64,
}

impl PseudoOrbit {
    pub fn end(&self) -> CylinderPoint {
        self.steps.last().map_or(self.start, |s| s.to)
    }

    pub fn count(&self, inner: bool) -> usize {
        self.steps.iter().filter(|s| (s.mv == Move::Inner) == inner).count()
    }
}

/// Parameters of the greedy builder. Energies are those of the start and
/// target cylinder points; the builder drifts in whichever direction joins
/// them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuilderSettings {
    pub e_start: f64,
    pub e_target: f64,
    /// Tolerance on reaching the target, in J.
    pub nu: f64,
    pub omega0: f64,
    /// |n𝒯₀ − 4π| below which the roles of the maps are exchanged [rad].
    pub resonance_gate: f64,
    /// Consecutive rotation steps allowed without finding an admissible phase.
    pub max_wait: usize,
    pub max_steps: usize,
}

impl Default for BuilderSettings {
    fn default() -> Self {
        Self {
            e_start: 1.7e-8,
            e_target: 1.3e-6,
            nu: 1e-9,
            omega0: 0.0,
            resonance_gate: 1e-3,
            max_wait: 100_000,
            max_steps: 50_000_000,
        }
    }
}

/// Starting phase derived from a seed, so runs are reproducible.
pub fn seeded_phase(seed: u64) -> f64 {
    use rand::{Rng, SeedableRng};
    rand::rngs::StdRng::seed_from_u64(seed).random_range(0.0..TAU)
}

/// Builds a pseudo-orbit from J(e_start) to within ν of J(e_target).
pub fn build_pseudo_orbit(i_m: f64, tables: &Tables, s: &BuilderSettings) -> Result<PseudoOrbit> {
    let n = tables.n_omega;
    let j_start = tables.action(s.e_start);
    let j_target = tables.action(s.e_target);
    let dir = (j_target - j_start).signum();
    let mut p = CylinderPoint {
        j: j_start,
        omega: wrap(s.omega0),
    };
    let mut orbit = PseudoOrbit {
        start: p,
        steps: Vec::new(),
        i_m,
    };
    if i_m == 0.0 {
        return Ok(orbit);
    }
    let mut wait = 0usize;
    while dir * (j_target - p.j) > s.nu {
        if orbit.steps.len() >= s.max_steps {
            return Err(Error::NonConvergence {
                what: "pseudo-orbit",
                iterations: orbit.steps.len(),
                residual: (j_target - p.j).abs(),
            });
        }
        let e = tables.energy(p.j);
        let t0 = tables.t0(e)?;
        let a = tables.a1p(e)?;
        let (_, data) = tables.channel(e)?;
        let et = Complex64::from_polar(1.0, n * t0) - 1.0;
        let ez = Complex64::from_polar(1.0, n * data.zeta) - 1.0;
        let resonant = (n * t0 - 2.0 * TAU).abs() < s.resonance_gate;
        // Coefficient of the jump that moves the straightened action, and the
        // map that produces it.
        let (coef, jumper) = if resonant {
            (a - data.b1p * et / ez, Move::Inner)
        } else {
            (data.b1p - a * ez / et, Move::Outer(Channel::Pri))
        };
        let gain = dir * jump(coef, p.omega, i_m);
        let admissible = gain >= 0.5 * 2.0 * i_m * coef.norm();
        let mv = match (admissible, jumper) {
            (true, Move::Inner) | (false, Move::Outer(_)) => Move::Inner,
            _ => Move::Outer(Channel::Pri),
        };
        let (mv, q) = match mv {
            Move::Inner => (Move::Inner, inner_map(p, i_m, tables)?),
            Move::Outer(_) => {
                let (ch, q) = outer_map(p, i_m, tables)?;
                (Move::Outer(ch), q)
            }
        };
        wait = if admissible { 0 } else { wait + 1 };
        if wait > s.max_wait {
            return Err(Error::NonConvergence {
                what: "pseudo-orbit phase search",
                iterations: wait,
                residual: gain,
            });
        }
        orbit.steps.push(Step { mv, from: p, to: q });
        p = q;
    }
    Ok(orbit)
}

/// Energy, eccentricity and inclination covered by a pseudo-orbit.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DriftSummary {
    pub e_start: f64,
    pub e_end: f64,
    pub steps: usize,
    pub inner_steps: usize,
    pub outer_steps: usize,
    /// Eccentricity of the cylinder orbits at the ends (circular) and the
    /// largest section eccentricity of the homoclinic excursions at the end
    /// energy.
    pub ecc_start: f64,
    pub ecc_end: f64,
    /// Section inclination envelope [deg] over the energies visited.
    pub i_min: f64,
    pub i_max: f64,
}

pub fn report_drift(po: &PseudoOrbit, tables: &Tables) -> Result<DriftSummary> {
    let e_start = tables.energy(po.start.j);
    let e_end = tables.energy(po.end().j);
    let (lo, hi) = (e_start.min(e_end), e_start.max(e_end));
    let (_, _, _, ip_lo) = tables.excursion(lo)?;
    let (mut i_min, mut i_max) = (ip_lo, ip_lo);
    let mut visit = |e: f64| -> Result<()> {
        let (_, a, b, c) = tables.excursion(e)?;
        i_min = i_min.min(a).min(c);
        i_max = i_max.max(b).max(c);
        Ok(())
    };
    visit(lo)?;
    visit(hi)?;
    for n in tables.nodes.iter().filter(|n| n.energy > lo && n.energy < hi) {
        i_min = i_min.min(n.i_min).min(n.i_periodic);
        i_max = i_max.max(n.i_max).max(n.i_periodic);
    }
    let (ecc_end, _, _, _) = tables.excursion(e_end)?;
    Ok(DriftSummary {
        e_start,
        e_end,
        steps: po.steps.len(),
        inner_steps: po.count(true),
        outer_steps: po.count(false),
        ecc_start: 0.0,
        ecc_end,
        i_min,
        i_max,
    })
}

/// Step counts for several i_M and the least-squares slope of
/// log(steps) against log(i_M).
pub fn scaling_study(tables: &Tables, i_ms: &[f64], s: &BuilderSettings) -> Result<(Vec<(f64, usize)>, f64)> {
    let mut counts = Vec::with_capacity(i_ms.len());
    for &i_m in i_ms {
        counts.push((i_m, build_pseudo_orbit(i_m, tables, s)?.steps.len()));
    }
    let xs: Vec<f64> = counts.iter().map(|c| c.0.ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|c| (c.1 as f64).ln()).collect();
    let (mx, my) = (mean(&xs), mean(&ys));
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok((counts, sxy / sxx))
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Twist of the unperturbed inner map: sign of d(n𝒯₀)/dJ on the tables.
pub fn twist_sign(tables: &Tables) -> f64 {
    let n = &tables.nodes;
    let dj = tables.action(n[n.len() - 1].energy) - tables.action(n[0].energy);
    ((n[n.len() - 1].t0 - n[0].t0) * tables.n_omega / dj).signum()
}

#[cfg(test)]
mod tests {
    use super::*;

    const N_OMEGA: f64 = 8.9e-5;

    fn synthetic() -> Tables {
        let nodes = grid(1.0e-8, 1.32e-6, 40)
            .into_iter()
            .map(|e| Node {
                energy: e,
                t0: 1.387e5 + 5.5e9 * e,
                a1p: Complex64::new(-2.5e-4 + 100.0 * e, -2.4e-3 + 2.0e3 * e),
                pri: Some(ChannelData {
                    zeta: -1.7e5 - 5e11 * e,
                    b1p: Complex64::new(0.02 * (1e7 * e).cos(), 0.02 * (1e7 * e).sin()),
                }),
                e_max: 0.35 + 3.4e5 * e,
                i_min: 56.06,
                i_max: 56.3 + 1.4e6 * e,
                i_periodic: 56.06 + 1e5 * e,
            })
            .collect();
        Tables {
            n_omega: N_OMEGA,
            nodes,
            bands: vec![Band {
                energy: 6.0e-7,
                sec: ChannelData {
                    zeta: -7.9e5,
                    b1p: Complex64::new(0.05, 0.06),
                },
            }],
            delta: 1e-9,
        }
    }

    #[test]
    fn cubic_interpolation_is_exact_on_cubics() {
        let f = |e: f64| 1.0 + 2e6 * e - 3e12 * e * e + 4e18 * e * e * e;
        let mut t = synthetic();
        for n in &mut t.nodes {
            n.t0 = f(n.energy);
        }
        for e in [1.0e-8, 3.3e-7, 7.77e-7, 1.32e-6] {
            assert!((t.t0(e).unwrap() - f(e)).abs() < 1e-12 * f(e).abs());
        }
        assert!(t.t0(1.4e-6).is_err());
    }

    #[test]
    fn zero_perturbation_rotates_only() {
        let t = synthetic();
        let p = CylinderPoint { j: t.action(4e-7), omega: 1.0 };
        let q = inner_map(p, 0.0, &t).unwrap();
        assert_eq!(q.j, p.j);
        let rot = (N_OMEGA * t.t0(4e-7).unwrap()).rem_euclid(TAU);
        assert!(((q.omega - p.omega).rem_euclid(TAU) - rot).abs() < 1e-9);
        let (ch, q) = outer_map(p, 0.0, &t).unwrap();
        assert_eq!(ch, Channel::Pri);
        assert_eq!(q.j, p.j);
    }

    #[test]
    fn inner_jump_is_a_pure_first_harmonic() {
        let t = synthetic();
        let (e, i_m) = (5e-7, 1e-3);
        let a = t.a1p(e).unwrap();
        let jumps: Vec<f64> = (0..64)
            .map(|k| {
                let p = CylinderPoint { j: t.action(e), omega: TAU * k as f64 / 64.0 };
                inner_map(p, i_m, &t).unwrap().j - p.j
            })
            .collect();
        let mean = jumps.iter().sum::<f64>() / 64.0;
        let max = jumps.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert!(mean.abs() < 1e-18);
        assert!((max - 2.0 * i_m * a.norm()).abs() < 1e-3 * max);
    }

    #[test]
    fn channels_cover_the_window() {
        let t = synthetic();
        for e in grid(1.0e-8, 1.32e-6, 2001) {
            let (ch, _) = t.channel(e).unwrap();
            assert_eq!(ch == Channel::Sec, (e - 6.0e-7).abs() <= 1e-9);
        }
        assert_eq!(t.channel(6.0e-7 + 5e-10).unwrap().0, Channel::Sec);
    }

    #[test]
    fn builder_reaches_target_with_bounded_steps() {
        let t = synthetic();
        let s = BuilderSettings {
            e_target: 1.2e-6,
            ..Default::default()
        };
        let po = build_pseudo_orbit(1e-3, &t, &s).unwrap();
        let end = po.end();
        assert!(t.energy(end.j) >= 1.2e-6 - N_OMEGA * s.nu);
        for st in &po.steps {
            let e = t.energy(st.from.j);
            let (_, d) = t.channel(e).unwrap();
            let bound = 1e-3 * (2.0 * d.b1p.norm() + 2.0 * t.a1p(e).unwrap().norm());
            assert!((st.to.j - st.from.j).abs() <= bound * (1.0 + 1e-12));
        }
        let again = build_pseudo_orbit(1e-3, &t, &s).unwrap();
        assert_eq!(again.steps.len(), po.steps.len());
        assert_eq!(again.end(), end);
        let r = report_drift(&po, &t).unwrap();
        assert_eq!(r.e_start, s.e_start);
        assert_eq!(r.steps, r.inner_steps + r.outer_steps);
    }

    #[test]
    fn zero_perturbation_builds_nothing() {
        let t = synthetic();
        let po = build_pseudo_orbit(0.0, &t, &BuilderSettings::default()).unwrap();
        assert!(po.steps.is_empty());
        assert_eq!(po.end().j, t.action(1.7e-8));
    }

    #[test]
    fn synthetic_twist_is_negative() {
        assert_eq!(twist_sign(&synthetic()), -1.0);
    }

    #[test]
    fn seeded_phase_is_reproducible() {
        assert_eq!(seeded_phase(7), seeded_phase(7));
        assert!((0.0..TAU).contains(&seeded_phase(11)));
    }
}

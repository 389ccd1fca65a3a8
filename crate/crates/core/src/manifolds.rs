//! Unstable and stable manifolds of the circular periodic orbits on the
//! section {h = 0}, their homoclinic intersections with the symmetry axes,
//! splitting angles and tangency energies.
//!
//! A branch is parametrized by τ ≥ 0: with n = ⌊τ⌋ and u = τ − n,
//! W(τ) = Π₀ⁿ(p* + σ ε λᵘ v), where v is the eigendirection, ε = 1e−8 and
//! σ = ±1 picks the branch. Π₀ maps the fundamental segment τ ∈ [0, 1) onto
//! τ ∈ [1, 2) to first order in ε. Points are placed on the energy level of
//! the periodic orbit by solving for Γ. The stable branch uses Π₀⁻¹ and the
//! contracting direction.

use crate::dynamics::{self, FlowSettings};
use crate::error::{Error, Result};
use crate::hamiltonians::{Model, Point};
use crate::periodic::{self, OrbitKind, PeriodicOrbitRecord};
use crate::roots;

pub const SEED_DISTANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Unstable,
    Stable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    /// Homoclinic point on {η = 0, h = 0}.
    Pri,
    /// Homoclinic point on {ξ = 0, h = 0}.
    Sec,
}

impl Channel {
    pub fn name(&self) -> &'static str {
        match self {
            Channel::Pri => "pri",
            Channel::Sec => "sec",
        }
    }
}

impl std::str::FromStr for Channel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pri" => Ok(Channel::Pri),
            "sec" => Ok(Channel::Sec),
            _ => Err(Error::InvalidParameter {
                name: "channel".into(),
                reason: format!("expected `pri` or `sec`, got `{s}`"),
            }),
        }
    }
}

/// Parametrization τ ↦ W(τ) of one manifold branch.
#[derive(Debug, Clone, Copy)]
pub struct Branch<'a> {
    pub model: &'a Model,
    pub orbit: PeriodicOrbitRecord,
    pub side: Side,
    /// −1 for the negative branch, +1 for the positive one.
    pub sign: f64,
    pub settings: FlowSettings,
}

impl<'a> Branch<'a> {
    pub fn new(model: &'a Model, orbit: PeriodicOrbitRecord, side: Side, sign: f64, settings: FlowSettings) -> Result<Self> {
        if orbit.kind != OrbitKind::Hyperbolic {
            return Err(Error::NotHyperbolic {
                energy: orbit.energy,
                trace: 2.0 * orbit.lambda,
            });
        }
        Ok(Self {
            model,
            orbit,
            side,
            sign,
            settings,
        })
    }

    /// Negative unstable branch at energy `e`.
    pub fn unstable(model: &'a Model, e: f64, settings: FlowSettings) -> Result<Self> {
        let orbit = periodic::solve_periodic(model, e, &settings)?;
        Self::new(model, orbit, Side::Unstable, -1.0, settings)
    }

    pub fn energy(&self) -> f64 {
        self.orbit.energy
    }

    /// Point of the fundamental segment, u ∈ [0, 1].
    pub fn seed(&self, u: f64) -> Result<Point> {
        let v = match self.side {
            Side::Unstable => self.orbit.evec_u,
            Side::Stable => self.orbit.evec_s,
        };
        let d = self.sign * SEED_DISTANCE * self.orbit.lambda.abs().powf(u);
        let (xi, eta) = (d * v[0], d * v[1]);
        let gam = dynamics::recover_gamma(self.model, xi, eta, 0.0, self.orbit.energy, self.orbit.gam0)?;
        Ok(Point::new(xi, eta, gam, 0.0))
    }

    /// One application of Π₀ (unstable side) or Π₀⁻¹ (stable side).
    pub fn step(&self, p: &Point) -> Result<Point> {
        match self.side {
            Side::Unstable => dynamics::poincare_map(self.model, p, &self.settings),
            Side::Stable => dynamics::poincare_map_inverse(self.model, p, &self.settings),
        }
    }

    pub fn point(&self, tau: f64) -> Result<Point> {
        let n = tau.floor();
        let mut p = self.seed(tau - n)?;
        for _ in 0..n as usize {
            p = self.step(&p)?;
        }
        Ok(p)
    }

    /// Point W(τ) and tangent dW/dτ in (ξ, η, Γ), propagated with the
    /// variational equations of the reparametrized flow.
    pub fn point_and_tangent(&self, tau: f64) -> Result<(Point, [f64; 3])> {
        let n = tau.floor();
        let mut p = self.seed(tau - n)?;
        let ln_l = self.orbit.lambda.abs().ln();
        let g = self.model.hcp_grad(&p);
        let (dxi, deta) = ((p.xi) * ln_l, (p.eta) * ln_l);
        let mut v = [dxi, deta, -(g.d_xi * dxi + g.d_eta * deta) / g.d_gam];
        for _ in 0..n as usize {
            let span = std::f64::consts::TAU * dynamics::h_dot(self.model, &p).signum();
            let span = match self.side {
                Side::Unstable => span,
                Side::Stable => -span,
            };
            let (q, w) = dynamics::flow_reparam_tangent(self.model, &p, v, span, &self.settings)?;
            p = Point::new(q.xi, q.eta, q.gam, 0.0);
            v = w;
        }
        Ok((p, v))
    }

    /// dW/dτ in the section plane.
    pub fn tangent(&self, tau: f64) -> Result<[f64; 2]> {
        let (_, v) = self.point_and_tangent(tau)?;
        Ok([v[0], v[1]])
    }

    /// Orbits of `n_seeds` equally spaced seeds, `depth` iterations each,
    /// merged into a polyline ordered by τ. Orbits stop when they leave the
    /// model domain.
    pub fn sample(&self, n_seeds: usize, depth: usize) -> Result<Vec<(f64, Point)>> {
        let mut pts = Vec::with_capacity(n_seeds * (depth + 1));
        for k in 0..n_seeds {
            let u = k as f64 / n_seeds as f64;
            let mut p = self.seed(u)?;
            for n in 0..=depth {
                pts.push((n as f64 + u, p));
                if n == depth {
                    break;
                }
                match self.step(&p) {
                    Ok(q) => p = q,
                    Err(_) => break,
                }
            }
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(pts)
    }
}

fn axis_value(channel: Channel, p: &Point) -> f64 {
    match channel {
        Channel::Pri => p.eta,
        Channel::Sec => p.xi,
    }
}

fn along_axis(channel: Channel, p: &Point) -> f64 {
    match channel {
        Channel::Pri => p.xi,
        Channel::Sec => p.eta,
    }
}

/// Seeds and iteration depth used when scanning a branch for axis crossings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingSearch {
    pub n_seeds: usize,
    pub depth: usize,
    /// Tolerance on τ when refining a crossing.
    pub tau_tol: f64,
}

impl Default for CrossingSearch {
    fn default() -> Self {
        Self {
            n_seeds: 40,
            depth: 150,
            tau_tol: 1e-13,
        }
    }
}

/// First crossing τ of the branch with the channel's symmetry axis. For the
/// primary channel this is the first crossing of {η = 0} away from the fixed
/// point; for the secondary channel it is the first crossing of {ξ = 0} after
/// the branch has come back towards the fixed point from its first excursion.
///
/// The branch is generated one iterate at a time, so the cost is proportional
/// to the τ of the crossing rather than to `search.depth`.
pub fn find_crossing(branch: &Branch, channel: Channel, search: &CrossingSearch) -> Result<f64> {
    let n = search.n_seeds.max(2);
    let mut level: Vec<Option<Point>> = (0..n)
        .map(|k| branch.seed(k as f64 / n as f64).ok())
        .collect();
    let dist = |p: &Point| p.xi.hypot(p.eta);
    let mut far = 0.0f64;
    let mut returned = false;
    let mut prev: Option<(f64, Point)> = None;
    for depth in 0..=search.depth {
        for (k, slot) in level.iter().enumerate() {
            let Some(p1) = *slot else {
                prev = None;
                continue;
            };
            let t1 = depth as f64 + k as f64 / n as f64;
            far = far.max(dist(&p1));
            if let Some((t0, p0)) = prev {
                let active = match channel {
                    Channel::Pri => along_axis(channel, &p1).abs() > 1e-3,
                    Channel::Sec => {
                        returned = returned || (far > 0.1 && dist(&p1) < 0.1 * far);
                        returned
                    }
                };
                let (a, b) = (axis_value(channel, &p0), axis_value(channel, &p1));
                if active && a.signum() != b.signum() {
                    let f = |t: f64| Ok(axis_value(channel, &branch.point(t)?));
                    return roots::brent_with_values(t0, a, t1, b, search.tau_tol, 200, f);
                }
            }
            prev = Some((t1, p1));
        }
        if depth < search.depth {
            for slot in level.iter_mut() {
                *slot = slot.and_then(|p| branch.step(&p).ok());
            }
            if level.iter().all(Option::is_none) {
                break;
            }
        }
    }
    Err(Error::NoIntersection(format!(
        "{} axis not crossed within {} iterates at E = {:e}",
        channel.name(),
        search.depth,
        branch.energy()
    )))
}

/// Oriented splitting angle 2·atan(v_ξ/v_η) ∈ (−π, π) between the tangent `v`
/// of W^u at a symmetric homoclinic point and the tangent of W^s, which is the
/// reflection of `v` by the reversor fixing the point. It vanishes, with a
/// sign change, at a tangency.
pub fn oriented_angle(v: [f64; 2]) -> f64 {
    2.0 * (v[0] / v[1]).atan()
}

/// A homoclinic point of the branch on a symmetry axis and the excursion of
/// its orbit.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct HomoclinicRecord {
    pub energy: f64,
    pub channel: Channel,
    /// Branch parameter of the point.
    pub tau: f64,
    pub point: Point,
    /// Distance of the point from the fixed point along the axis.
    pub coord: f64,
    /// Splitting angle in [0, π].
    pub phi: f64,
    pub phi_oriented: f64,
    /// Largest eccentricity and inclination range [deg] over the returns of
    /// the orbit to the section.
    pub e_max: f64,
    pub i_min: f64,
    pub i_max: f64,
    /// The same quantities over the continuous flow between returns.
    pub flow: Excursion,
}

/// Locates the homoclinic point of `channel` on the branch and measures its
/// orbit.
pub fn homoclinic(branch: &Branch, channel: Channel, search: &CrossingSearch) -> Result<HomoclinicRecord> {
    let tau = find_crossing(branch, channel, search)?;
    let (point, v) = branch.point_and_tangent(tau)?;
    let phi_oriented = oriented_angle([v[0], v[1]]);
    let (section, flow) = excursion(branch, tau)?;
    Ok(HomoclinicRecord {
        energy: branch.energy(),
        channel,
        tau,
        point,
        coord: along_axis(channel, &point).abs(),
        phi: phi_oriented.abs(),
        phi_oriented,
        e_max: section.e_max,
        i_min: section.i_min,
        i_max: section.i_max,
        flow,
    })
}

/// Homoclinic record of `channel` on the negative unstable branch at energy `e`.
pub fn find_homoclinic(model: &Model, e: f64, channel: Channel, settings: FlowSettings) -> Result<HomoclinicRecord> {
    let branch = Branch::unstable(model, e, settings)?;
    homoclinic(&branch, channel, &CrossingSearch::default())
}

/// Eccentricity maximum and inclination range [deg] of an orbit segment.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Excursion {
    pub e_max: f64,
    pub i_min: f64,
    pub i_max: f64,
}

impl Excursion {
    fn at(model: &Model, p: &Point) -> Self {
        let i = model.inclination(p).to_degrees();
        Self {
            e_max: model.eccentricity(p),
            i_min: i,
            i_max: i,
        }
    }

    fn visit(&mut self, model: &Model, p: &Point) {
        let o = Self::at(model, p);
        self.e_max = self.e_max.max(o.e_max);
        self.i_min = self.i_min.min(o.i_min);
        self.i_max = self.i_max.max(o.i_max);
    }
}

/// Excursion of the orbit from the seed of W(τ) up to W(τ), sampled on the
/// section (first) and along the whole flow (second). For a point on a
/// symmetry axis the rest of the homoclinic orbit is the reversed image of
/// this half, along which e and i take the same values.
pub fn excursion(branch: &Branch, tau: f64) -> Result<(Excursion, Excursion)> {
    let model = branch.model;
    let n = tau.floor() as usize;
    let mut p = branch.seed(tau - tau.floor())?;
    let mut on_section = Excursion::at(model, &p);
    let mut along_flow = on_section;
    let sys = |_t: f64, y: &[f64; 4], dy: &mut [f64; 4]| *dy = dynamics::vf_reparam(model, y);
    for _ in 0..n {
        let span = std::f64::consts::TAU * dynamics::h_dot(model, &p).signum();
        let span = match branch.side {
            Side::Unstable => span,
            Side::Stable => -span,
        };
        let y = crate::ode::integrate_observed(&sys, 0.0, p.as_array(), span, branch.settings.tolerances(), |st| {
            let (a, b) = (st.t_old(), st.t);
            for k in 1..=8 {
                along_flow.visit(model, &Point::from_array(st.dense(a + (b - a) * k as f64 / 8.0)));
            }
            true
        })?;
        p = Point::new(y[0], y[1], y[2], 0.0);
        on_section.visit(model, &p);
    }
    Ok((on_section, along_flow))
}

/// Energy at which the oriented splitting angle of the primary channel
/// changes sign, with the grid bracket it was refined from.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct Tangency {
    pub energy: f64,
    pub bracket: (f64, f64),
    /// Oriented angles at the ends of the final bracket.
    pub residual: (f64, f64),
}

/// Tangencies of `channel` on an energy grid: sign changes of the oriented
/// splitting angle, refined by Brent's method to `e_tol`.
pub fn scan_tangencies(
    model: &Model,
    grid: &[f64],
    channel: Channel,
    settings: FlowSettings,
    e_tol: f64,
) -> Result<Vec<Tangency>> {
    let search = CrossingSearch::default();
    let angle = |e: f64| -> Result<f64> {
        let branch = Branch::unstable(model, e, settings)?;
        let tau = find_crossing(&branch, channel, &search)?;
        Ok(oriented_angle(branch.tangent(tau)?))
    };
    let values: Vec<f64> = grid.iter().map(|&e| angle(e)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for k in 1..grid.len() {
        let (e0, e1, a0, a1) = (grid[k - 1], grid[k], values[k - 1], values[k]);
        if a0.signum() == a1.signum() {
            continue;
        }
        let mut last = (a0, a1);
        let energy = roots::brent_with_values(e0, a0, e1, a1, e_tol, 200, |e| {
            let a = angle(e)?;
            last = if a.signum() == last.0.signum() { (a, last.1) } else { (last.0, a) };
            Ok(a)
        })?;
        out.push(Tangency {
            energy,
            bracket: (e0, e1),
            residual: last,
        });
    }
    Ok(out)
}

/// Sampled manifold branch on the section.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ManifoldBranch {
    pub energy: f64,
    pub side: Side,
    pub sign: f64,
    pub depth: usize,
    /// Polyline (τ, point), ordered by τ.
    pub points: Vec<(f64, Point)>,
    /// Whether every gap between consecutive points is below the requested
    /// spacing; false when the seed budget ran out first.
    pub resolved: bool,
}

impl ManifoldBranch {
    /// Image under the reversor Φᵛ, which maps W^u onto W^s.
    pub fn mirrored(&self) -> ManifoldBranch {
        ManifoldBranch {
            side: match self.side {
                Side::Unstable => Side::Stable,
                Side::Stable => Side::Unstable,
            },
            points: self.points.iter().map(|&(t, p)| (t, dynamics::phi_v(&p))).collect(),
            ..self.clone()
        }
    }
}

fn orbit(branch: &Branch, u: f64, depth: usize) -> Vec<Point> {
    let mut pts = Vec::with_capacity(depth + 1);
    let Ok(mut p) = branch.seed(u) else {
        return pts;
    };
    pts.push(p);
    for _ in 0..depth {
        match branch.step(&p) {
            Ok(q) => {
                p = q;
                pts.push(p);
            }
            Err(_) => break,
        }
    }
    pts
}

/// Globalizes the branch to `depth` iterates. The fundamental segment is
/// refined by midpoint insertion until images of neighbouring seeds are less
/// than `delta_max` apart at every depth, or `max_seeds` is reached.
pub fn globalize(branch: &Branch, depth: usize, delta_max: f64, max_seeds: usize) -> ManifoldBranch {
    let gap = |a: &[Point], b: &[Point]| {
        a.iter()
            .zip(b)
            .map(|(p, q)| (p.xi - q.xi).hypot(p.eta - q.eta))
            .fold(0.0, f64::max)
    };
    let n0 = 16;
    let mut seeds: Vec<(f64, Vec<Point>)> = (0..=n0)
        .map(|k| {
            let u = k as f64 / n0 as f64;
            (u, orbit(branch, u, depth))
        })
        .collect();
    let mut resolved = true;
    loop {
        let mut next: Vec<(f64, Vec<Point>)> = Vec::with_capacity(2 * seeds.len());
        let mut budget = max_seeds.saturating_sub(seeds.len());
        let mut inserted = false;
        for item in seeds {
            if let Some((ua, a)) = next.last() {
                let (ub, b) = (&item.0, &item.1);
                if gap(a, b) > delta_max && ub - ua > 1e-12 {
                    if budget == 0 {
                        resolved = false;
                    } else {
                        let um = 0.5 * (ua + ub);
                        next.push((um, orbit(branch, um, depth)));
                        budget -= 1;
                        inserted = true;
                    }
                }
            }
            next.push(item);
        }
        seeds = next;
        if !inserted {
            break;
        }
    }
    let mut points: Vec<(f64, Point)> = seeds
        .iter()
        .filter(|(u, _)| *u < 1.0)
        .flat_map(|(u, orb)| orb.iter().enumerate().map(move |(n, p)| (n as f64 + u, *p)))
        .collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    ManifoldBranch {
        energy: branch.energy(),
        side: branch.side,
        sign: branch.sign,
        depth,
        points,
        resolved,
    }
}

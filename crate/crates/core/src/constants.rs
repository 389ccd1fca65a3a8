//! Physical constants, the non-dimensional scaling and the derived
//! coefficients of the secular model.
//!
//! Internally the distance unit is the satellite semi-major axis and the
//! time unit is chosen so that the satellite orbital period is 2π; hence
//! μ = 1 and L = √(μ a) = 1 for the nominal orbit.

use crate::error::{Error, Result};
use serde::Serialize;
use std::f64::consts::PI;

const SECONDS_PER_DAY: f64 = 86_400.0;

/// Dimensional inputs, in km, km³/s², days and degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// Earth gravitational parameter [km³/s²].
    pub mu: f64,
    /// Moon gravitational parameter [km³/s²].
    pub mu_m: f64,
    /// Moon semi-major axis [km].
    pub a_m: f64,
    /// Lunar eccentricity entering ρ₁.
    pub e_m: f64,
    /// Second zonal harmonic.
    pub j2: f64,
    /// Earth equatorial radius [km].
    pub r_e: f64,
    /// Obliquity of the ecliptic [deg].
    pub eps_deg: f64,
    /// Satellite semi-major axis [km].
    pub a_sat: f64,
    /// Period of the lunar node (one Saros) [days].
    pub t_saros: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            mu: 398_600.44,
            mu_m: 4_902.87,
            a_m: 384_400.0,
            e_m: 0.054_900_6,
            j2: 1.08e-3,
            r_e: 6_378.14,
            eps_deg: 23.44,
            a_sat: 29_600.0,
            t_saros: 6_585.321_347,
        }
    }
}

/// Lunar eccentricity with which the published boundary energies 𝐄₁, 𝐄₂
/// and the averaged thresholds Γ₁, Γ₂, 𝐄^AV are reproduced to 1e−12. All
/// other published quantities correspond to the catalogue value.
pub const THRESHOLD_E_M: f64 = 0.0054;

/// Names accepted by [`PhysicalConstants::set`] and the config file.
pub const CONFIG_KEYS: [&str; 9] = [
    "mu", "mu_M", "a_M", "e_M", "J2", "R_E", "eps_deg", "a_sat", "T_saros",
];

impl PhysicalConstants {
    /// Defaults with [`THRESHOLD_E_M`].
    pub fn threshold_profile() -> Self {
        Self {
            e_m: THRESHOLD_E_M,
            ..Self::default()
        }
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = match name {
            "mu" => &mut self.mu,
            "mu_M" => &mut self.mu_m,
            "a_M" => &mut self.a_m,
            "e_M" => &mut self.e_m,
            "J2" => &mut self.j2,
            "R_E" => &mut self.r_e,
            "eps_deg" => &mut self.eps_deg,
            "a_sat" => &mut self.a_sat,
            "T_saros" => &mut self.t_saros,
            _ => {
                return Err(Error::InvalidParameter {
                    name: name.to_string(),
                    reason: format!("unknown key (expected one of {})", CONFIG_KEYS.join(", ")),
                })
            }
        };
        *slot = value;
        Ok(())
    }

    /// Applies `name = value` lines; `#` starts a comment.
    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Config {
                line: i + 1,
                reason: format!("expected `name = value`, got `{line}`"),
            })?;
            let value: f64 = v.trim().parse().map_err(|_| Error::Config {
                line: i + 1,
                reason: format!("`{}` is not a number", v.trim()),
            })?;
            self.set(k.trim(), value).map_err(|e| Error::Config {
                line: i + 1,
                reason: e.to_string(),
            })?;
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        let checks = [
            ("mu", self.mu),
            ("mu_M", self.mu_m),
            ("a_M", self.a_m),
            ("J2", self.j2),
            ("R_E", self.r_e),
            ("eps_deg", self.eps_deg),
            ("a_sat", self.a_sat),
            ("T_saros", self.t_saros),
        ];
        for (name, v) in checks {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter {
                    name: name.into(),
                    reason: format!("must be positive, got {v}"),
                });
            }
        }
        if !(0.0..1.0).contains(&self.e_m) {
            return Err(Error::InvalidParameter {
                name: "e_M".into(),
                reason: format!("must lie in [0, 1), got {}", self.e_m),
            });
        }
        if self.a_sat <= self.r_e {
            return Err(Error::InvalidParameter {
                name: "a_sat".into(),
                reason: "satellite orbit must lie outside the Earth".into(),
            });
        }
        if self.a_sat >= self.a_m {
            return Err(Error::InvalidParameter {
                name: "a_sat".into(),
                reason: "satellite orbit must lie inside the lunar orbit".into(),
            });
        }
        Ok(())
    }
}

/// Non-dimensional model parameters, immutable after construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub physical: PhysicalConstants,
    /// Delaunay action of the satellite orbit (1 for the nominal orbit).
    pub l: f64,
    /// a_sat / a_M.
    pub alpha: f64,
    /// J₂ R² in units of a_sat.
    pub rho0: f64,
    /// μ_M/μ · (1 − e_M²)^(−3/2).
    pub rho1: f64,
    /// Obliquity [rad].
    pub eps: f64,
    /// Lunar node frequency 2π/T_saros in non-dimensional time.
    pub n_omega: f64,
    /// Length of the time unit [s].
    pub time_unit: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::new(PhysicalConstants::default()).expect("default constants are valid")
    }
}

impl ModelParams {
    pub fn new(physical: PhysicalConstants) -> Result<Self> {
        physical.validate()?;
        let p = &physical;
        let time_unit = (p.a_sat.powi(3) / p.mu).sqrt();
        let saros_nd = p.t_saros * SECONDS_PER_DAY / time_unit;
        Ok(Self {
            physical,
            l: 1.0,
            alpha: p.a_sat / p.a_m,
            rho0: p.j2 * (p.r_e / p.a_sat).powi(2),
            rho1: p.mu_m / p.mu / (1.0 - p.e_m * p.e_m).powf(1.5),
            eps: p.eps_deg.to_radians(),
            n_omega: 2.0 * PI / saros_nd,
            time_unit,
        })
    }

    pub fn from_config(text: &str) -> Result<Self> {
        let mut p = PhysicalConstants::default();
        p.apply_config(text)?;
        Self::new(p)
    }

    pub fn alpha3(&self) -> f64 {
        self.alpha.powi(3)
    }

    pub fn length_to_nd(&self, km: f64) -> f64 {
        km / self.physical.a_sat
    }

    pub fn length_from_nd(&self, x: f64) -> f64 {
        x * self.physical.a_sat
    }

    pub fn time_to_nd(&self, seconds: f64) -> f64 {
        seconds / self.time_unit
    }

    pub fn time_from_nd(&self, t: f64) -> f64 {
        t * self.time_unit
    }

    /// Non-dimensional time expressed in Julian years.
    pub fn time_in_years(&self, t: f64) -> f64 {
        self.time_from_nd(t) / (365.25 * SECONDS_PER_DAY)
    }

    /// Energy unit μ/a_sat [km²/s²].
    pub fn energy_unit(&self) -> f64 {
        self.physical.mu / self.physical.a_sat
    }
}

/// Giacaglia obliquity coefficients U₂^{m,s}(ε) for m ∈ {0,1,2}, s ∈ {−2..2}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Giacaglia {
    table: [[f64; 5]; 3],
}

impl Giacaglia {
    pub fn new(eps: f64) -> Self {
        let c = (eps / 2.0).cos();
        let s = (eps / 2.0).sin();
        let (c2, c4, c6) = (c * c, c.powi(4), c.powi(6));
        let q = c2 - 1.0;
        let table = [
            [
                c2 / (s * s) * q * q,
                -2.0 * c / s * (2.0 * c4 - 3.0 * c2 + 1.0),
                1.0 - 6.0 * c2 + 6.0 * c4,
                -2.0 * c * s * (1.0 - 2.0 * c2),
                c2 * s * s,
            ],
            [
                -c / s.powi(3) * q.powi(3),
                (4.0 * c6 - 9.0 * c4 + 6.0 * c2 - 1.0) / (s * s),
                -3.0 * c / s * (2.0 * c4 - 3.0 * c2 + 1.0),
                c2 * (4.0 * c2 - 3.0),
                -c.powi(3) * s,
            ],
            [
                q.powi(4) / s.powi(4),
                -4.0 * c / s.powi(3) * q.powi(3),
                6.0 * c2 / (s * s) * q * q,
                -4.0 * c.powi(3) / s * q,
                c4,
            ],
        ];
        Self { table }
    }

    /// U₂^{m,s}; panics outside m ∈ {0,1,2}, s ∈ {−2..2}.
    pub fn u(&self, m: usize, s: i32) -> f64 {
        assert!(m <= 2 && (-2..=2).contains(&s), "U_2^({m},{s}) out of range");
        self.table[m][(s + 2) as usize]
    }
}

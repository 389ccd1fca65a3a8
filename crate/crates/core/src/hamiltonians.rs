//! The Hamiltonian hierarchy in Poincaré variables (ξ, η, Γ, h):
//! the oblateness part ℋ₀, the coplanar lunar part ℋ_CP,1, the first-order
//! lunar-inclination coupling ℛ₁, the complete lunar term at finite i_M, and
//! the h-averaged model ℋ_AV.
//!
//! Each formula is generic over [`Scalar`], so the same code yields values
//! (`f64`), gradients ([`Jet1`]) and Hessians ([`Jet2`]).

use crate::constants::{Giacaglia, ModelParams};
use crate::jet::{Jet1, Jet2, Scalar};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Point of the coplanar phase space.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize)]
pub struct Point {
    pub xi: f64,
    pub eta: f64,
    pub gam: f64,
    pub h: f64,
}

impl Point {
    pub fn new(xi: f64, eta: f64, gam: f64, h: f64) -> Self {
        Self { xi, eta, gam, h }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.xi, self.eta, self.gam, self.h]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
}

/// First partial derivatives of a Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Gradient {
    pub value: f64,
    pub d_xi: f64,
    pub d_eta: f64,
    pub d_gam: f64,
    pub d_h: f64,
}

/// Coefficients of the secular model derived from [`ModelParams`].
#[derive(Debug, Clone, Copy)]
pub struct Model {
    pub params: ModelParams,
    pub l: f64,
    pub rho0: f64,
    pub rho1: f64,
    pub alpha3: f64,
    pub n_omega: f64,
    pub giacaglia: Giacaglia,
    f0: [f64; 3],
    fcos: [f64; 3],
    fsin: [f64; 3],
}

/// c_{m,s} = (−1)^⌊m/2⌋ ε_m ε_s / 2 · (2−s)!/(2+m)!, with ε₀ = 1, ε_k = 2.
pub fn c_ms(m: usize, s: usize) -> f64 {
    let fact = |n: usize| (1..=n).product::<usize>() as f64;
    let eps = |k: usize| if k == 0 { 1.0 } else { 2.0 };
    let sign = if (m / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * eps(m) * eps(s) / 2.0 * fact(2 - s) / fact(2 + m)
}

/// Kaula inclination functions F_{2,s,1}(i).
pub fn kaula(s: usize, i: f64) -> f64 {
    let (si, ci) = i.sin_cos();
    match s {
        0 => -0.5 + 0.75 * si * si,
        1 => -1.5 * si * ci,
        2 => 1.5 * si * si,
        _ => panic!("F_2,{s},1 not defined"),
    }
}

/// 𝒟_{m,p}(M, Γ) and the angular factors A·cos ψ_{m,p,0}, A·sin ψ_{m,p,0}.
struct Blocks<S> {
    d: [[S; 3]; 3],
    cpsi: [[S; 3]; 3],
    spsi: [[S; 3]; 3],
}

impl Model {
    pub fn new(params: ModelParams) -> Self {
        let g = Giacaglia::new(params.eps);
        let mut f0 = [0.0; 3];
        let mut fcos = [0.0; 3];
        let mut fsin = [0.0; 3];
        for m in 0..3 {
            f0[m] = c_ms(m, 0) * g.u(m, 0);
            fcos[m] = c_ms(m, 1) * (g.u(m, 1) - g.u(m, -1));
            fsin[m] = c_ms(m, 1) * (g.u(m, 1) + g.u(m, -1));
        }
        Self {
            params,
            l: params.l,
            rho0: params.rho0,
            rho1: params.rho1,
            alpha3: params.alpha3(),
            n_omega: params.n_omega,
            giacaglia: g,
            f0,
            fcos,
            fsin,
        }
    }

    /// ℋ₀ = ρ₀/2 · [(2L−M)² − 24(2L−M)Γ − 48Γ²] / (L³(2L−M)⁵), M = ξ²+η².
    pub fn h0_generic<S: Scalar>(&self, m2: S, gam: S) -> S {
        let l = self.l;
        let d = -m2 + 2.0 * l;
        let num = d * d - d * gam * 24.0 - gam * gam * 48.0;
        num / d.powi(5) * (self.rho0 / (2.0 * l.powi(3)))
    }

    fn blocks<S: Scalar>(&self, xi: S, eta: S, gam: S, h: S) -> Blocks<S> {
        let l = self.l;
        let m2 = xi * xi + eta * eta;
        let c = (xi * xi - eta * eta) * 0.5;
        let s = xi * eta;
        let d = -m2 + 2.0 * l;
        let a = d - gam * 4.0;
        let b = -m2 * 3.0 + gam * 4.0 + 6.0 * l;
        let q = -m2 + 4.0 * l;
        let e = d + gam * 4.0;
        let pre = (d * d).recip() * (1.0 / (l * l));
        let sa = a.sqrt();
        let sb = b.sqrt();
        let d00 = a * b * q * pre * (-15.0 / 128.0);
        let d01 = (d * d - d * gam * 24.0 - gam * gam * 48.0) * pre * (1.0 / 128.0);
        let d10 = sa * b * sb * q * pre * (15.0 / 64.0);
        let d11 = sa * sb * e * pre * (-3.0 / 64.0);
        let d12 = a * sa * sb * q * pre * (-15.0 / 64.0);
        let d20 = b * b * q * pre * (15.0 / 64.0);
        let d21 = a * b * pre * (3.0 / 64.0);
        let d22 = a * a * q * pre * (15.0 / 64.0);

        let (s1, c1) = h.sin_cos();
        let c2 = c1 * c1 * 2.0 - 1.0;
        let s2 = s1 * c1 * 2.0;
        let c3 = c2 * c1 - s2 * s1;
        let s3 = s2 * c1 + c2 * s1;
        let one = S::cst(1.0);
        let zero = S::cst(0.0);
        let poly = -m2 * m2 * 3.0 + m2 * (12.0 * l) + 8.0 * l * l;
        // (cos kh, sin kh) for the phases (1−m)h, mh and (1+m)h.
        let cs = |k: i32| -> (S, S) {
            match k {
                -1 => (c1, -s1),
                0 => (one, zero),
                1 => (c1, s1),
                2 => (c2, s2),
                3 => (c3, s3),
                _ => unreachable!(),
            }
        };
        let mut cpsi = [[zero; 3]; 3];
        let mut spsi = [[zero; 3]; 3];
        for m in 0..3 {
            let (cf, sf) = cs(1 - m as i32);
            cpsi[m][0] = c * cf + s * sf;
            spsi[m][0] = s * cf - c * sf;
            let (cm, sm) = cs(m as i32);
            cpsi[m][1] = poly * cm;
            spsi[m][1] = poly * sm;
            let (cf, sf) = cs(1 + m as i32);
            cpsi[m][2] = c * cf + s * sf;
            spsi[m][2] = -(s * cf - c * sf);
        }
        Blocks {
            d: [[d00, d01, d00], [d10, d11, d12], [d20, d21, d22]],
            cpsi,
            spsi,
        }
    }

    /// ℋ_CP,1 = ρ₁/L² Σ f⁰_m 𝒟_{m,p} · A cos ψ_{m,p,0}.
    pub fn hcp1_generic<S: Scalar>(&self, xi: S, eta: S, gam: S, h: S) -> S {
        let b = self.blocks(xi, eta, gam, h);
        let mut acc = S::cst(0.0);
        for m in 0..3 {
            for p in 0..3 {
                acc = acc + b.d[m][p] * b.cpsi[m][p] * self.f0[m];
            }
        }
        acc * (self.rho1 / (self.l * self.l))
    }

    /// Coplanar Hamiltonian ℋ_CP = ℋ₀ + α³ ℋ_CP,1.
    pub fn hcp_generic<S: Scalar>(&self, xi: S, eta: S, gam: S, h: S) -> S {
        let m2 = xi * xi + eta * eta;
        self.h0_generic(m2, gam) + self.hcp1_generic(xi, eta, gam, h) * self.alpha3
    }

    /// (ℛ_cos, ℛ_sin) with ℛ₁ = ℛ_cos cos Ω_M + ℛ_sin sin Ω_M.
    pub fn r1_parts_generic<S: Scalar>(&self, xi: S, eta: S, gam: S, h: S) -> (S, S) {
        let b = self.blocks(xi, eta, gam, h);
        let mut rc = S::cst(0.0);
        let mut rs = S::cst(0.0);
        for m in 0..3 {
            for p in 0..3 {
                rc = rc + b.d[m][p] * b.cpsi[m][p] * self.fcos[m];
                rs = rs + b.d[m][p] * b.spsi[m][p] * self.fsin[m];
            }
        }
        let k = 1.5 * self.rho1 / (self.l * self.l);
        (rc * k, rs * k)
    }

    /// Lunar term ℋ̃₁(i_M, Ω_M) with all obliquity harmonics s = 0, 1, 2.
    pub fn h1_full_generic<S: Scalar>(&self, xi: S, eta: S, gam: S, h: S, omega: S, i_m: f64) -> S {
        let b = self.blocks(xi, eta, gam, h);
        let g = &self.giacaglia;
        let half_pi = PI / 2.0;
        let mut acc = S::cst(0.0);
        for s in 0..3usize {
            let fs = kaula(s, i_m);
            if fs == 0.0 {
                continue;
            }
            let y = if s % 2 == 1 { 0.5 } else { 0.0 };
            let sf = s as f64;
            let (sp, cp) = ((omega - half_pi) * sf - y * PI).sin_cos();
            let (sm, cm) = ((omega - half_pi) * (-sf) - y * PI).sin_cos();
            for m in 0..3 {
                let w = c_ms(m, s) * fs;
                let (um, up) = (g.u(m, -(s as i32)), g.u(m, s as i32));
                for p in 0..3 {
                    let (c, sn) = (b.cpsi[m][p], b.spsi[m][p]);
                    let ang = (c * cp - sn * sp) * um + (c * cm - sn * sm) * up;
                    acc = acc + b.d[m][p] * ang * w;
                }
            }
        }
        acc * (-self.rho1 / (self.l * self.l))
    }

    /// Full Hamiltonian ℋ₀ + α³ ℋ̃₁(i_M, Ω_M) of the non-coplanar problem.
    pub fn h_full_generic<S: Scalar>(&self, xi: S, eta: S, gam: S, h: S, omega: S, i_m: f64) -> S {
        let m2 = xi * xi + eta * eta;
        self.h0_generic(m2, gam) + self.h1_full_generic(xi, eta, gam, h, omega, i_m) * self.alpha3
    }

    /// h-averaged Hamiltonian ℋ_AV(ξ, η, Γ).
    pub fn hav_generic<S: Scalar>(&self, xi: S, eta: S, gam: S) -> S {
        let l = self.l;
        let m2 = xi * xi + eta * eta;
        let b = self.blocks(xi, eta, gam, S::cst(0.0));
        // At h = 0 the m = 1, p = 0 block is C and the m = 0, p = 1 block is P(M).
        let lunar = b.d[1][0] * b.cpsi[1][0] * self.f0[1] + b.d[0][1] * b.cpsi[0][1] * self.f0[0];
        self.h0_generic(m2, gam) + lunar * (self.alpha3 * self.rho1 / (l * l))
    }

    /// Rejects states where e ≥ 1 or a square root of the lunar blocks
    /// would have a negative argument.
    pub fn check_domain(&self, p: &Point) -> crate::Result<()> {
        let l = self.l;
        let m2 = p.xi * p.xi + p.eta * p.eta;
        let fail = |what: &str| Err(crate::Error::Domain(format!("{what} at {p:?}")));
        if !(m2 < 2.0 * l) {
            return fail("ξ² + η² ≥ 2L");
        }
        if 2.0 * l - m2 - 4.0 * p.gam < 0.0 {
            return fail("2L − M − 4Γ < 0");
        }
        if 6.0 * l - 3.0 * m2 + 4.0 * p.gam < 0.0 {
            return fail("6L − 3M + 4Γ < 0");
        }
        Ok(())
    }

    /// ℋ_CP with the domain checked first.
    pub fn try_hcp(&self, p: &Point) -> crate::Result<f64> {
        self.check_domain(p)?;
        Ok(self.hcp(p))
    }

    pub fn hcp(&self, p: &Point) -> f64 {
        self.hcp_generic(p.xi, p.eta, p.gam, p.h)
    }

    pub fn h0(&self, p: &Point) -> f64 {
        self.h0_generic(p.xi * p.xi + p.eta * p.eta, p.gam)
    }

    pub fn hcp1(&self, p: &Point) -> f64 {
        self.hcp1_generic(p.xi, p.eta, p.gam, p.h)
    }

    pub fn hav(&self, xi: f64, eta: f64, gam: f64) -> f64 {
        self.hav_generic(xi, eta, gam)
    }

    pub fn hcp_grad(&self, p: &Point) -> Gradient {
        let j = self.hcp_generic(
            Jet1::<4>::var(p.xi, 0),
            Jet1::var(p.eta, 1),
            Jet1::var(p.gam, 2),
            Jet1::var(p.h, 3),
        );
        Gradient {
            value: j.v,
            d_xi: j.d[0],
            d_eta: j.d[1],
            d_gam: j.d[2],
            d_h: j.d[3],
        }
    }

    /// Hessian of ℋ_CP in the order (ξ, η, Γ, h).
    pub fn hcp_hessian(&self, p: &Point) -> Jet2<4> {
        self.hcp_generic(
            Jet2::<4>::var(p.xi, 0),
            Jet2::var(p.eta, 1),
            Jet2::var(p.gam, 2),
            Jet2::var(p.h, 3),
        )
    }

    /// ℛ₁ at phase Ω_M.
    pub fn r1(&self, p: &Point, omega: f64) -> f64 {
        let (rc, rs) = self.r1_parts_generic(p.xi, p.eta, p.gam, p.h);
        rc * omega.cos() + rs * omega.sin()
    }

    /// ℛ₁⁺ = (ℛ_cos − i ℛ_sin)/2, so that ℛ₁ = ℛ₁⁺ e^{iΩ} + ℛ₁⁻ e^{−iΩ}.
    pub fn r1_plus(&self, p: &Point) -> Complex64 {
        let (rc, rs) = self.r1_parts_generic(p.xi, p.eta, p.gam, p.h);
        Complex64::new(rc, -rs) * 0.5
    }

    pub fn h_full(&self, p: &Point, omega: f64, i_m: f64) -> f64 {
        self.h_full_generic(p.xi, p.eta, p.gam, p.h, omega, i_m)
    }

    /// Osculating eccentricity e = √(1 − (G/L)²), G = L − M/2.
    pub fn eccentricity(&self, p: &Point) -> f64 {
        let g = self.l - 0.5 * (p.xi * p.xi + p.eta * p.eta);
        (1.0 - (g / self.l).powi(2)).max(0.0).sqrt()
    }

    /// Osculating inclination [rad], cos i = H/G with H = Γ + G/2.
    pub fn inclination(&self, p: &Point) -> f64 {
        let g = self.l - 0.5 * (p.xi * p.xi + p.eta * p.eta);
        ((p.gam + 0.5 * g) / g).clamp(-1.0, 1.0).acos()
    }

    /// Coefficients f⁰_m = ĉ_m U^{m,0}.
    pub fn f0(&self) -> [f64; 3] {
        self.f0
    }
}

/// Forms of the unperturbed problem in slow–fast variables (x, y, Γ, h).
pub mod slow_fast {
    use super::Model;

    /// ℋ₀(y, Γ) = ρ₀/128 · (y² − 6yΓ − 3Γ²)/(L³ y⁵).
    pub fn h0(model: &Model, y: f64, gam: f64) -> f64 {
        model.rho0 / 128.0 * (y * y - 6.0 * y * gam - 3.0 * gam * gam) / (model.l.powi(3) * y.powi(5))
    }

    /// ∂ℋ₀/∂y = 3ρ₀/(128L³) · (5Γ² + 8yΓ − y²)/y⁶.
    pub fn dh0_dy(model: &Model, y: f64, gam: f64) -> f64 {
        3.0 * model.rho0 / (128.0 * model.l.powi(3)) * (5.0 * gam * gam + 8.0 * y * gam - y * y)
            / y.powi(6)
    }

    /// Slopes Γ/y of the two resonance lines ∂ℋ₀/∂y = 0.
    pub fn resonance_slopes() -> [f64; 2] {
        let r = 21f64.sqrt();
        [(-4.0 + r) / 5.0, (-4.0 - r) / 5.0]
    }

    /// Inclinations [deg] of the 2g+h resonance: cos i = (1 ± √21)/10.
    pub fn resonance_inclinations_deg() -> [f64; 2] {
        let r = 21f64.sqrt();
        [
            ((1.0 + r) / 10.0).acos().to_degrees(),
            ((1.0 - r) / 10.0).acos().to_degrees(),
        ]
    }

    /// ℋ_CP,1 from the (y, Γ) coefficient table and phases ψ_{m,p,0}(x, h).
    pub fn hcp1(model: &Model, x: f64, y: f64, gam: f64, h: f64) -> f64 {
        let l = model.l;
        let w = y - gam;
        let v = 3.0 * y + gam;
        let lm = (l - 2.0 * y) * (l + 2.0 * y);
        let k = 5.0 * l * l - 12.0 * y * y;
        let r = (w * v).sqrt();
        let d = [
            [
                -15.0 / 64.0 * w * v * lm,
                (y * y - 6.0 * gam * y - 3.0 * gam * gam) * k / 32.0,
                -15.0 / 64.0 * w * v * lm,
            ],
            [
                15.0 / 32.0 * r * v * lm,
                -3.0 / 16.0 * r * (gam + y) * k,
                -15.0 / 32.0 * r * w * lm,
            ],
            [
                15.0 / 32.0 * v * v * lm,
                3.0 / 16.0 * w * v * k,
                15.0 / 32.0 * w * w * lm,
            ],
        ];
        let f0 = model.f0();
        let mut acc = 0.0;
        for m in 0..3 {
            let mf = m as f64;
            for p in 0..3 {
                let pf = p as f64;
                let psi = (1.0 - pf) * x - (1.0 - pf - mf) * h;
                acc += f0[m] * d[m][p] * psi.cos();
            }
        }
        model.rho1 / (l * l) * acc / (l * y).powi(2)
    }
}

/// Closed-form partials on the invariant plane ξ = η = 0.
pub mod invariant_plane {
    use super::Model;

    pub fn dgam_h0(model: &Model, gam: f64) -> f64 {
        let l = model.l;
        -3.0 * model.rho0 / (4.0 * l.powi(8)) * (l + 2.0 * gam)
    }

    pub fn dgam_hcp1(model: &Model, gam: f64, h: f64) -> f64 {
        let l = model.l;
        let g = &model.giacaglia;
        let root = ((l - 2.0 * gam) * (3.0 * l + 2.0 * gam)).sqrt();
        -model.rho1 / (8.0 * l.powi(4))
            * (3.0 * g.u(0, 0) * (l + 2.0 * gam)
                + 4.0 * g.u(1, 0) * (l * l - 4.0 * l * gam - 4.0 * gam * gam) / root * h.cos()
                - g.u(2, 0) * (l + 2.0 * gam) * (2.0 * h).cos())
    }

    pub fn dh_hcp1(model: &Model, gam: f64, h: f64) -> f64 {
        let l = model.l;
        let g = &model.giacaglia;
        let prod = (l - 2.0 * gam) * (3.0 * l + 2.0 * gam);
        model.rho1 / (16.0 * l.powi(4))
            * (2.0 * g.u(1, 0) * prod.sqrt() * (2.0 * gam + l) * h.sin()
                + g.u(2, 0) * prod * (2.0 * h).sin())
    }
}

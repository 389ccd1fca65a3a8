//! Explicit Runge–Kutta 8(5,3) integrator of Dormand and Prince with
//! seventh-order dense output, step-size control after Hairer, Nørsett and
//! Wanner, and event location on the dense interpolant.

use crate::error::{Error, Result};

/// Right-hand side of an autonomous or non-autonomous ODE y' = f(t, y).
pub trait System<const N: usize> {
    fn rhs(&self, t: f64, y: &[f64; N], dy: &mut [f64; N]);
}

impl<const N: usize, F: Fn(f64, &[f64; N], &mut [f64; N])> System<N> for F {
    fn rhs(&self, t: f64, y: &[f64; N], dy: &mut [f64; N]) {
        self(t, y, dy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub h_max: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rtol: 1e-13,
            atol: 1e-13,
            max_steps: 1_000_000,
            h_max: f64::INFINITY,
        }
    }
}

impl Tolerances {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            ..Self::default()
        }
    }
}

/// Stepper state. After each accepted step the interval [t_old, t] is
/// covered by the dense interpolant.
pub struct Dop853<'a, S: System<N>, const N: usize> {
    sys: &'a S,
    tol: Tolerances,
    pub t: f64,
    pub y: [f64; N],
    f: [f64; N],
    h: f64,
    dir: f64,
    facold: f64,
    last_rejected: bool,
    pub steps: usize,
    pub evals: usize,
    // Data of the last accepted step, for dense output.
    t_old: f64,
    h_old: f64,
    y_old: [f64; N],
    k: [[f64; N]; 16],
    cont: Option<[[f64; N]; 8]>,
}

impl<'a, S: System<N>, const N: usize> Dop853<'a, S, N> {
    pub fn new(sys: &'a S, t0: f64, y0: [f64; N], t_dir_hint: f64, tol: Tolerances) -> Self {
        let mut f = [0.0; N];
        sys.rhs(t0, &y0, &mut f);
        let dir = if t_dir_hint >= 0.0 { 1.0 } else { -1.0 };
        let mut s = Self {
            sys,
            tol,
            t: t0,
            y: y0,
            f,
            h: 0.0,
            dir,
            facold: 1e-4,
            last_rejected: false,
            steps: 0,
            evals: 1,
            t_old: t0,
            h_old: 0.0,
            y_old: y0,
            k: [[0.0; N]; 16],
            cont: None,
        };
        s.h = dir * s.initial_step(t_dir_hint.abs());
        s
    }

    fn sk(&self, a: f64, b: f64) -> f64 {
        self.tol.atol + self.tol.rtol * a.abs().max(b.abs())
    }

    fn initial_step(&mut self, span: f64) -> f64 {
        let (mut dnf, mut dny) = (0.0, 0.0);
        for i in 0..N {
            let sk = self.sk(self.y[i], self.y[i]);
            dnf += (self.f[i] / sk).powi(2);
            dny += (self.y[i] / sk).powi(2);
        }
        let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
            1e-6
        } else {
            (dny / dnf).sqrt() * 0.01
        };
        h = h.min(self.tol.h_max).min(span.max(f64::MIN_POSITIVE));
        let mut y1 = [0.0; N];
        for i in 0..N {
            y1[i] = self.y[i] + self.dir * h * self.f[i];
        }
        let mut f1 = [0.0; N];
        self.sys.rhs(self.t + self.dir * h, &y1, &mut f1);
        self.evals += 1;
        let mut der2 = 0.0;
        for i in 0..N {
            der2 += ((f1[i] - self.f[i]) / self.sk(self.y[i], self.y[i])).powi(2);
        }
        let der2 = der2.sqrt() / h;
        let der12 = der2.max(dnf.sqrt());
        let h1 = if der12 <= 1e-15 {
            (h * 1e-3).max(1e-6)
        } else {
            (0.01 / der12).powf(1.0 / 8.0)
        };
        (100.0 * h).min(h1).min(self.tol.h_max).min(span.max(f64::MIN_POSITIVE))
    }

    fn stage(&self, coeffs: &[(usize, f64)], h: f64, out: &mut [f64; N]) {
        for i in 0..N {
            let mut acc = 0.0;
            for &(j, a) in coeffs {
                acc += a * self.k[j][i];
            }
            out[i] = self.y[i] + h * acc;
        }
    }

    /// Attempts one step, never passing `t_end`. Returns Ok(true) once
    /// `t_end` has been reached.
    pub fn step(&mut self, t_end: f64) -> Result<bool> {
        use tableau::*;
        loop {
            if self.steps >= self.tol.max_steps {
                return Err(Error::Integration {
                    t: self.t,
                    reason: format!("more than {} steps", self.tol.max_steps),
                });
            }
            let remaining = t_end - self.t;
            if remaining * self.dir <= 0.0 {
                return Ok(true);
            }
            let mut h = self.h;
            if h.abs() > self.tol.h_max {
                h = self.dir * self.tol.h_max;
            }
            let last = (h.abs() >= remaining.abs()) || ((self.t + h - t_end) * self.dir >= 0.0);
            if last {
                h = remaining;
            }
            if h.abs() <= 1e-14 * self.t.abs().max(1.0) {
                return Err(Error::Integration {
                    t: self.t,
                    reason: format!("step size underflow (h = {h:e})"),
                });
            }
            self.k[0] = self.f;
            let mut yt = [0.0; N];
            let t = self.t;
            let plan: [(&[(usize, f64)], f64); 11] = [
                (&[(0, A21)], C2),
                (&[(0, A31), (1, A32)], C3),
                (&[(0, A41), (2, A43)], C4),
                (&[(0, A51), (2, A53), (3, A54)], C5),
                (&[(0, A61), (3, A64), (4, A65)], C6),
                (&[(0, A71), (3, A74), (4, A75), (5, A76)], C7),
                (&[(0, A81), (3, A84), (4, A85), (5, A86), (6, A87)], C8),
                (&[(0, A91), (3, A94), (4, A95), (5, A96), (6, A97), (7, A98)], C9),
                (
                    &[(0, A101), (3, A104), (4, A105), (5, A106), (6, A107), (7, A108), (8, A109)],
                    C10,
                ),
                (
                    &[
                        (0, A111),
                        (3, A114),
                        (4, A115),
                        (5, A116),
                        (6, A117),
                        (7, A118),
                        (8, A119),
                        (9, A1110),
                    ],
                    C11,
                ),
                (
                    &[
                        (0, A121),
                        (3, A124),
                        (4, A125),
                        (5, A126),
                        (6, A127),
                        (7, A128),
                        (8, A129),
                        (9, A1210),
                        (10, A1211),
                    ],
                    1.0,
                ),
            ];
            for (idx, (coeffs, c)) in plan.iter().enumerate() {
                self.stage(coeffs, h, &mut yt);
                let mut out = [0.0; N];
                self.sys.rhs(t + c * h, &yt, &mut out);
                self.k[idx + 1] = out;
            }
            self.evals += 11;
            let k = &self.k;
            let mut ynew = [0.0; N];
            let mut err = 0.0;
            let mut err2 = 0.0;
            for i in 0..N {
                let bsum = B1 * k[0][i]
                    + B6 * k[5][i]
                    + B7 * k[6][i]
                    + B8 * k[7][i]
                    + B9 * k[8][i]
                    + B10 * k[9][i]
                    + B11 * k[10][i]
                    + B12 * k[11][i];
                ynew[i] = self.y[i] + h * bsum;
                let sk = self.sk(self.y[i], ynew[i]);
                let e2 = bsum - BHH1 * k[0][i] - BHH2 * k[8][i] - BHH3 * k[11][i];
                err2 += (e2 / sk).powi(2);
                let e1 = ER1 * k[0][i]
                    + ER6 * k[5][i]
                    + ER7 * k[6][i]
                    + ER8 * k[7][i]
                    + ER9 * k[8][i]
                    + ER10 * k[9][i]
                    + ER11 * k[10][i]
                    + ER12 * k[11][i];
                err += (e1 / sk).powi(2);
            }
            let mut deno = err + 0.01 * err2;
            if deno <= 0.0 {
                deno = 1.0;
            }
            let err = h.abs() * err * (1.0 / (deno * N as f64)).sqrt();
            if !err.is_finite() {
                self.h *= 0.1;
                self.last_rejected = true;
                self.steps += 1;
                continue;
            }
            let fac11 = err.powf(0.125);
            let fac = (fac11 / 0.9).clamp(1.0 / 6.0, 1.0 / 0.333);
            let mut h_new = h / fac;
            self.steps += 1;
            if err <= 1.0 {
                self.facold = err.max(1e-4);
                let mut fnew = [0.0; N];
                self.sys.rhs(t + h, &ynew, &mut fnew);
                self.evals += 1;
                self.k[12] = fnew;
                self.t_old = t;
                self.h_old = h;
                self.y_old = self.y;
                self.cont = None;
                self.t = if last { t_end } else { t + h };
                self.y = ynew;
                self.f = fnew;
                if self.last_rejected && h_new.abs() > h.abs() {
                    h_new = h;
                }
                self.last_rejected = false;
                self.h = h_new;
                return Ok(last);
            } else {
                h_new = h / (1.0 / 0.333f64).min(fac11 / 0.9);
                self.last_rejected = true;
                self.h = h_new;
            }
        }
    }

    fn build_dense(&mut self) -> [[f64; N]; 8] {
        use tableau::*;
        if let Some(c) = self.cont {
            return c;
        }
        let h = self.h_old;
        let y = self.y_old;
        let k = &mut self.k;
        let stage = |k: &[[f64; N]; 16], coeffs: &[(usize, f64)]| -> [f64; N] {
            let mut out = [0.0; N];
            for i in 0..N {
                let mut acc = 0.0;
                for &(j, a) in coeffs {
                    acc += a * k[j][i];
                }
                out[i] = y[i] + h * acc;
            }
            out
        };
        let y14 = stage(
            k,
            &[(0, A141), (6, A147), (7, A148), (8, A149), (9, A1410), (10, A1411), (11, A1412), (12, A1413)],
        );
        let mut f = [0.0; N];
        self.sys.rhs(self.t_old + C14 * h, &y14, &mut f);
        k[13] = f;
        let y15 = stage(
            k,
            &[(0, A151), (5, A156), (6, A157), (7, A158), (10, A1511), (11, A1512), (12, A1513), (13, A1514)],
        );
        self.sys.rhs(self.t_old + C15 * h, &y15, &mut f);
        k[14] = f;
        let y16 = stage(
            k,
            &[(0, A161), (5, A166), (6, A167), (7, A168), (8, A169), (12, A1613), (13, A1614), (14, A1615)],
        );
        self.sys.rhs(self.t_old + C16 * h, &y16, &mut f);
        k[15] = f;
        self.evals += 3;
        let mut c = [[0.0; N]; 8];
        let dd: [[f64; 16]; 4] = [D4, D5, D6, D7];
        for i in 0..N {
            let ydiff = self.y[i] - y[i];
            let bspl = h * k[0][i] - ydiff;
            c[0][i] = y[i];
            c[1][i] = ydiff;
            c[2][i] = bspl;
            c[3][i] = ydiff - h * k[12][i] - bspl;
            for (r, d) in dd.iter().enumerate() {
                let mut acc = 0.0;
                for j in 0..16 {
                    acc += d[j] * k[j][i];
                }
                c[4 + r][i] = h * acc;
            }
        }
        self.cont = Some(c);
        c
    }

    /// Dense output inside the last accepted step.
    pub fn dense(&mut self, t: f64) -> [f64; N] {
        let c = self.build_dense();
        let s = (t - self.t_old) / self.h_old;
        let s1 = 1.0 - s;
        let mut out = [0.0; N];
        for i in 0..N {
            let conpar = c[4][i] + s * (c[5][i] + s1 * (c[6][i] + s * c[7][i]));
            out[i] = c[0][i] + s * (c[1][i] + s1 * (c[2][i] + s * (c[3][i] + s1 * conpar)));
        }
        out
    }

    pub fn t_old(&self) -> f64 {
        self.t_old
    }

    pub fn y_old(&self) -> [f64; N] {
        self.y_old
    }

    pub fn derivative(&self) -> [f64; N] {
        self.f
    }
}

/// Integrates from t0 to t1 and returns the final state.
pub fn integrate<S: System<N>, const N: usize>(
    sys: &S,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    tol: Tolerances,
) -> Result<[f64; N]> {
    let mut st = Dop853::new(sys, t0, y0, t1 - t0, tol);
    while !st.step(t1)? {}
    Ok(st.y)
}

/// Integrates from t0 to t1 calling `observe(stepper)` after every accepted
/// step. Returning `false` from the observer stops the integration early.
pub fn integrate_observed<S: System<N>, const N: usize, F>(
    sys: &S,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    tol: Tolerances,
    mut observe: F,
) -> Result<[f64; N]>
where
    F: FnMut(&mut Dop853<'_, S, N>) -> bool,
{
    let mut st = Dop853::new(sys, t0, y0, t1 - t0, tol);
    loop {
        let done = st.step(t1)?;
        if !observe(&mut st) || done {
            return Ok(st.y);
        }
    }
}

/// Located zero of an event function.
#[derive(Debug, Clone, Copy)]
pub struct Event<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
}

/// Integrates until `g(t, y)` changes sign in the given direction
/// (+1 increasing, −1 decreasing, 0 either); the crossing is refined on the
/// dense interpolant by bracketed secant/bisection to |Δt| ≤ `t_tol`.
pub fn integrate_to_event<S: System<N>, const N: usize, G>(
    sys: &S,
    t0: f64,
    y0: [f64; N],
    t_max: f64,
    tol: Tolerances,
    direction: i32,
    t_tol: f64,
    g: G,
) -> Result<Option<Event<N>>>
where
    G: Fn(f64, &[f64; N]) -> f64,
{
    let mut st = Dop853::new(sys, t0, y0, t_max - t0, tol);
    let mut g_prev = g(t0, &y0);
    loop {
        let done = st.step(t_max)?;
        let g_new = g(st.t, &st.y);
        let crossed = match direction {
            1 => g_prev < 0.0 && g_new >= 0.0,
            -1 => g_prev > 0.0 && g_new <= 0.0,
            _ => (g_prev < 0.0 && g_new >= 0.0) || (g_prev > 0.0 && g_new <= 0.0),
        };
        if crossed {
            let (mut ta, mut tb) = (st.t_old(), st.t);
            let (mut ga, mut gb) = (g_prev, g_new);
            let mut tm = tb;
            for it in 0..200 {
                tm = if it % 3 == 2 {
                    0.5 * (ta + tb)
                } else {
                    tb - gb * (tb - ta) / (gb - ga)
                };
                if !(tm - ta.min(tb) >= 0.0 && ta.max(tb) - tm >= 0.0) {
                    tm = 0.5 * (ta + tb);
                }
                let gm = g(tm, &st.dense(tm));
                if gm == 0.0 {
                    break;
                }
                if (gm < 0.0) == (ga < 0.0) {
                    ta = tm;
                    ga = gm;
                } else {
                    tb = tm;
                    gb = gm;
                }
                if (tb - ta).abs() <= t_tol {
                    tm = if ga.abs() < gb.abs() { ta } else { tb };
                    break;
                }
            }
            let y = st.dense(tm);
            return Ok(Some(Event { t: tm, y }));
        }
        if done {
            return Ok(None);
        }
        g_prev = g_new;
    }
}

#[allow(clippy::excessive_precision, clippy::unreadable_literal)]
mod tableau {
    pub const C2: f64 = 0.526001519587677318785587544488e-01;
    pub const C3: f64 = 0.789002279381515978178381316732e-01;
    pub const C4: f64 = 0.118350341907227396726757197510e+00;
    pub const C5: f64 = 0.281649658092772603273242802490e+00;
    pub const C6: f64 = 0.333333333333333333333333333333e+00;
    pub const C7: f64 = 0.25e+00;
    pub const C8: f64 = 0.307692307692307692307692307692e+00;
    pub const C9: f64 = 0.651282051282051282051282051282e+00;
    pub const C10: f64 = 0.6e+00;
    pub const C11: f64 = 0.857142857142857142857142857142e+00;
    pub const C14: f64 = 0.1e+00;
    pub const C15: f64 = 0.2e+00;
    pub const C16: f64 = 0.777777777777777777777777777778e+00;

    pub const B1: f64 = 5.42937341165687622380535766363e-2;
    pub const B6: f64 = 4.45031289275240888144113950566e0;
    pub const B7: f64 = 1.89151789931450038304281599044e0;
    pub const B8: f64 = -5.8012039600105847814672114227e0;
    pub const B9: f64 = 3.1116436695781989440891606237e-1;
    pub const B10: f64 = -1.52160949662516078556178806805e-1;
    pub const B11: f64 = 2.01365400804030348374776537501e-1;
    pub const B12: f64 = 4.47106157277725905176885569043e-2;

    pub const BHH1: f64 = 0.244094488188976377952755905512e+00;
    pub const BHH2: f64 = 0.733846688281611857341361741547e+00;
    pub const BHH3: f64 = 0.220588235294117647058823529412e-01;

    pub const ER1: f64 = 0.1312004499419488073250102996e-01;
    pub const ER6: f64 = -0.1225156446376204440720569753e+01;
    pub const ER7: f64 = -0.4957589496572501915214079952e+00;
    pub const ER8: f64 = 0.1664377182454986536961530415e+01;
    pub const ER9: f64 = -0.3503288487499736816886487290e+00;
    pub const ER10: f64 = 0.3341791187130174790297318841e+00;
    pub const ER11: f64 = 0.8192320648511571246570742613e-01;
    pub const ER12: f64 = -0.2235530786388629525884427845e-01;

    pub const A21: f64 = 5.26001519587677318785587544488e-2;
    pub const A31: f64 = 1.97250569845378994544595329183e-2;
    pub const A32: f64 = 5.91751709536136983633785987549e-2;
    pub const A41: f64 = 2.95875854768068491816892993775e-2;
    pub const A43: f64 = 8.87627564304205475450678981324e-2;
    pub const A51: f64 = 2.41365134159266685502369798665e-1;
    pub const A53: f64 = -8.84549479328286085344864962717e-1;
    pub const A54: f64 = 9.24834003261792003115737966543e-1;
    pub const A61: f64 = 3.7037037037037037037037037037e-2;
    pub const A64: f64 = 1.70828608729473871279604482173e-1;
    pub const A65: f64 = 1.25467687566822425016691814123e-1;
    pub const A71: f64 = 3.7109375e-2;
    pub const A74: f64 = 1.70252211019544039314978060272e-1;
    pub const A75: f64 = 6.02165389804559606850219397283e-2;
    pub const A76: f64 = -1.7578125e-2;
    pub const A81: f64 = 3.70920001185047927108779319836e-2;
    pub const A84: f64 = 1.70383925712239993810214054705e-1;
    pub const A85: f64 = 1.07262030446373284651809199168e-1;
    pub const A86: f64 = -1.53194377486244017527936158236e-2;
    pub const A87: f64 = 8.27378916381402288758473766002e-3;
    pub const A91: f64 = 6.24110958716075717114429577812e-1;
    pub const A94: f64 = -3.36089262944694129406857109825e0;
    pub const A95: f64 = -8.68219346841726006818189891453e-1;
    pub const A96: f64 = 2.75920996994467083049415600797e1;
    pub const A97: f64 = 2.01540675504778934086186788979e1;
    pub const A98: f64 = -4.34898841810699588477366255144e1;
    pub const A101: f64 = 4.77662536438264365890433908527e-1;
    pub const A104: f64 = -2.48811461997166764192642586468e0;
    pub const A105: f64 = -5.90290826836842996371446475743e-1;
    pub const A106: f64 = 2.12300514481811942347288949897e1;
    pub const A107: f64 = 1.52792336328824235832596922938e1;
    pub const A108: f64 = -3.32882109689848629194453265587e1;
    pub const A109: f64 = -2.03312017085086261358222928593e-2;
    pub const A111: f64 = -9.3714243008598732571704021658e-1;
    pub const A114: f64 = 5.18637242884406370830023853209e0;
    pub const A115: f64 = 1.09143734899672957818500254654e0;
    pub const A116: f64 = -8.14978701074692612513997267357e0;
    pub const A117: f64 = -1.85200656599969598641566180701e1;
    pub const A118: f64 = 2.27394870993505042818970056734e1;
    pub const A119: f64 = 2.49360555267965238987089396762e0;
    pub const A1110: f64 = -3.0467644718982195003823669022e0;
    pub const A121: f64 = 2.27331014751653820792359768449e0;
    pub const A124: f64 = -1.05344954667372501984066689879e1;
    pub const A125: f64 = -2.00087205822486249909675718444e0;
    pub const A126: f64 = -1.79589318631187989172765950534e1;
    pub const A127: f64 = 2.79488845294199600508499808837e1;
    pub const A128: f64 = -2.85899827713502369474065508674e0;
    pub const A129: f64 = -8.87285693353062954433549289258e0;
    pub const A1210: f64 = 1.23605671757943030647266201528e1;
    pub const A1211: f64 = 6.43392746015763530355970484046e-1;

    pub const A141: f64 = 5.61675022830479523392909219681e-2;
    pub const A147: f64 = 2.53500210216624811088794765333e-1;
    pub const A148: f64 = -2.46239037470802489917441475441e-1;
    pub const A149: f64 = -1.24191423263816360469010140626e-1;
    pub const A1410: f64 = 1.5329179827876569731206322685e-1;
    pub const A1411: f64 = 8.20105229563468988491666602057e-3;
    pub const A1412: f64 = 7.56789766054569976138603589584e-3;
    pub const A1413: f64 = -8.298e-3;
    pub const A151: f64 = 3.18346481635021405060768473261e-2;
    pub const A156: f64 = 2.83009096723667755288322961402e-2;
    pub const A157: f64 = 5.35419883074385676223797384372e-2;
    pub const A158: f64 = -5.49237485713909884646569340306e-2;
    pub const A1511: f64 = -1.08347328697249322858509316994e-4;
    pub const A1512: f64 = 3.82571090835658412954920192323e-4;
    pub const A1513: f64 = -3.40465008687404560802977114492e-4;
    pub const A1514: f64 = 1.41312443674632500278074618366e-1;
    pub const A161: f64 = -4.28896301583791923408573538692e-1;
    pub const A166: f64 = -4.69762141536116384314449447206e0;
    pub const A167: f64 = 7.68342119606259904184240953878e0;
    pub const A168: f64 = 4.06898981839711007970213554331e0;
    pub const A169: f64 = 3.56727187455281109270669543021e-1;
    pub const A1613: f64 = -1.39902416515901462129418009734e-3;
    pub const A1614: f64 = 2.9475147891527723389556272149e0;
    pub const A1615: f64 = -9.15095847217987001081870187138e0;

    // Dense-output weights indexed by stage 1..16 (0-based), zero where unused.
    pub const D4: [f64; 16] = [
        -0.84289382761090128651353491142e+01, 0.0, 0.0, 0.0, 0.0,
        0.56671495351937776962531783590e+00, -0.30689499459498916912797304727e+01,
        0.23846676565120698287728149680e+01, 0.21170345824450282767155149946e+01,
        -0.87139158377797299206789907490e+00, 0.22404374302607882758541771650e+01,
        0.63157877876946881815570249290e+00, -0.88990336451333310820698117400e-01,
        0.18148505520854727256656404962e+02, -0.91946323924783554000451984436e+01,
        -0.44360363875948939664310572000e+01,
    ];
    pub const D5: [f64; 16] = [
        0.10427508642579134603413151009e+02, 0.0, 0.0, 0.0, 0.0,
        0.24228349177525818288430175319e+03, 0.16520045171727028198505394887e+03,
        -0.37454675472269020279518312152e+03, -0.22113666853125306036270938578e+02,
        0.77334326684722638389603898808e+01, -0.30674084731089398182061213626e+02,
        -0.93321305264302278729567221706e+01, 0.15697238121770843886131091075e+02,
        -0.31139403219565177677282850411e+02, -0.93529243588444783865713862664e+01,
        0.35816841486394083752465898540e+02,
    ];
    pub const D6: [f64; 16] = [
        0.19985053242002433820987653617e+02, 0.0, 0.0, 0.0, 0.0,
        -0.38703730874935176555105901742e+03, -0.18917813819516756882830838328e+03,
        0.52780815920542364900561016686e+03, -0.11573902539959630126141871134e+02,
        0.68812326946963000169666922661e+01, -0.10006050966910838403183860980e+01,
        0.77771377980534432092869265740e+00, -0.27782057523535084065932004339e+01,
        -0.60196695231264120758267380846e+02, 0.84320405506677161018159903784e+02,
        0.11992291136182789328035130030e+02,
    ];
    pub const D7: [f64; 16] = [
        -0.25693933462703749003312586129e+02, 0.0, 0.0, 0.0, 0.0,
        -0.15418974869023643374053993627e+03, -0.23152937917604549567536039109e+03,
        0.35763911791061412378285349910e+03, 0.93405324183624310003907691704e+02,
        -0.37458323136451633156875139351e+02, 0.10409964950896230045147246184e+03,
        0.29840293426660503123344363579e+02, -0.43533456590011143754432175058e+02,
        0.96324553959188282948394950600e+02, -0.39177261675615439165231486172e+02,
        -0.14972683625798562581422125276e+03,
    ];
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_period() {
        let sys = |_t: f64, y: &[f64; 2], dy: &mut [f64; 2]| {
            dy[0] = y[1];
            dy[1] = -y[0];
        };
        let y = integrate(&sys, 0.0, [1.0, 0.0], 2.0 * std::f64::consts::PI, Tolerances::default()).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-12 && y[1].abs() < 1e-12, "{y:?}");
        let yb = integrate(&sys, 0.0, [1.0, 0.0], -3.0, Tolerances::default()).unwrap();
        assert!((yb[0] - 3f64.cos()).abs() < 1e-12 && (yb[1] - 3f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn dense_output_is_accurate() {
        let sys = |_t: f64, y: &[f64; 2], dy: &mut [f64; 2]| {
            dy[0] = y[1];
            dy[1] = -y[0];
        };
        let mut worst: f64 = 0.0;
        integrate_observed(&sys, 0.0, [1.0, 0.0], 10.0, Tolerances::with_tol(1e-12), |st| {
            let (a, b) = (st.t_old(), st.t);
            for k in 1..8 {
                let t = a + (b - a) * k as f64 / 8.0;
                let y = st.dense(t);
                worst = worst.max((y[0] - t.cos()).abs());
            }
            true
        })
        .unwrap();
        assert!(worst < 1e-10, "{worst:e}");
    }

    #[test]
    fn event_location() {
        let sys = |_t: f64, y: &[f64; 2], dy: &mut [f64; 2]| {
            dy[0] = y[1];
            dy[1] = -y[0];
        };
        let ev = integrate_to_event(&sys, 0.0, [1.0, 0.0], 10.0, Tolerances::default(), -1, 1e-14, |_t, y| y[0])
            .unwrap()
            .unwrap();
        assert!((ev.t - std::f64::consts::FRAC_PI_2).abs() < 1e-12, "{}", ev.t);
    }
}

//! Acceptance criteria, one PASS/FAIL line each with the measured values.
//! Failing criteria are reported, not hidden; the process exits 0 so that
//! the rest of the workspace tests still run.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use secres::diffusion::{self, BuilderSettings, TableSpec, Tables};
use secres::dynamics::FlowSettings;
use secres::hamiltonians::slow_fast;
use secres::manifolds::{self, Channel};
use secres::melnikov::{self, oracle};
use secres::periodic::{self, grid, E_MAX, E_MIN};
use secres::validation;
use secres::{Model, ModelParams, PhysicalConstants, Point};

const TABLE_TANGENCIES: [f64; 6] = [2.1005e-7, 6.0660e-7, 8.9021e-7, 1.09175e-6, 1.23625e-6, 1.34294e-6];
const TABLE_PHI_SEC: [f64; 6] = [1.935, 1.554, 1.276, 1.183, 0.997, 0.788];

fn model() -> Model {
    Model::new(ModelParams::default())
}

fn threshold_model() -> Model {
    Model::new(ModelParams::new(PhysicalConstants::threshold_profile()).unwrap())
}

struct Line {
    pass: bool,
    details: Vec<String>,
}

impl Line {
    fn new() -> Self {
        Line {
            pass: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: String) {
        self.pass &= ok;
        self.details.push(format!("{} {detail}", if ok { "ok  " } else { "MISS" }));
    }

    fn note(&mut self, detail: String) {
        self.details.push(format!("     {detail}"));
    }
}

fn criterion_1() -> Line {
    let mut l = Line::new();
    let m = threshold_model();
    let top = m.hcp(&Point::new(0.0, 0.0, 0.0, 0.0));
    let bottom = m.hcp(&Point::new(0.0, 0.0, 0.49, PI));
    l.check((top - 2.477266122798186e-6).abs() < 1e-12, format!("H_CP(0,0,0,0) = {top:.15e} (threshold profile)"));
    l.check((bottom + 2.515161379204321e-5).abs() < 1e-12, format!("H_CP(0,0.49,0,pi) = {bottom:.15e}"));
    let d = model();
    l.note(format!(
        "default e_M: top {:.15e}, bottom {:.15e}",
        d.hcp(&Point::new(0.0, 0.0, 0.0, 0.0)),
        d.hcp(&Point::new(0.0, 0.0, 0.49, PI))
    ));
    l
}

fn criterion_2() -> Line {
    let mut l = Line::new();
    match periodic::find_gamma12(&threshold_model()) {
        Ok((g1, g2, e1, e2)) => {
            l.check((g1 - 0.029613649805289).abs() < 1e-9, format!("Gamma1 = {g1:.15}"));
            l.check((g2 - 0.084971418151141).abs() < 1e-9, format!("Gamma2 = {g2:.15}"));
            l.check((e1 - 2.072230388690642e-6).abs() < 1e-12, format!("E1_AV = {e1:.15e}"));
            l.check((e2 + 3.473759155836634e-7).abs() < 1e-12, format!("E2_AV = {e2:.15e}"));
        }
        Err(e) => l.check(false, format!("error: {e}")),
    }
    l
}

fn criterion_3() -> Line {
    let mut l = Line::new();
    let [pro, retro] = slow_fast::resonance_inclinations_deg();
    l.check((pro - 56.06).abs() < 0.01, format!("prograde i* = {pro:.4} deg"));
    l.check((retro - 110.99).abs() < 0.01, format!("retrograde i* = {retro:.4} deg"));
    let m = model();
    let k = (-4.0 + 21f64.sqrt()) / 5.0;
    let worst = [0.1, 0.2, 0.3, 0.4, 0.5]
        .iter()
        .map(|&y| slow_fast::dh0_dy(&m, y, k * y).abs())
        .fold(0.0, f64::max);
    l.check(worst < 1e-12, format!("max |dH0/dy| on Gamma = {k:.12} y: {worst:.2e}"));
    l
}

fn criterion_4(records: &[periodic::PeriodicOrbitRecord]) -> Line {
    let mut l = Line::new();
    let m = model();
    let s = FlowSettings::default();
    match periodic::find_jres(&m, 3e-7, 6e-7, &s) {
        Ok((_, e)) => l.check(
            ((e - 4.4472e-7) / 4.4472e-7).abs() < 1e-3,
            format!("n T0 = 4 pi at E = {e:.6e}"),
        ),
        Err(e) => l.check(false, format!("error: {e}")),
    }
    let increasing = records.windows(2).all(|w| w[1].t0 > w[0].t0);
    l.check(increasing, format!("T0 strictly increasing over {} energies", records.len()));
    let n: Vec<f64> = records.iter().map(|r| r.n_t0(&m) / PI).collect();
    let (lo, hi) = (n.iter().cloned().fold(f64::INFINITY, f64::min), n.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    l.check(lo >= 3.9 && hi <= 4.15, format!("n T0 / pi in [{lo:.5}, {hi:.5}]"));
    l
}

fn criterion_5() -> Line {
    let mut l = Line::new();
    let m = model();
    let s = FlowSettings::default();
    let t = Instant::now();
    let tangencies = manifolds::scan_tangencies(&m, &grid(1e-7, E_MAX, 40), Channel::Pri, s, 1e-17);
    let tangencies = match tangencies {
        Ok(t) => t,
        Err(e) => {
            l.check(false, format!("scan error: {e}"));
            return l;
        }
    };
    l.note(format!("tangency scan: {} found in {:.1?}", tangencies.len(), t.elapsed()));
    l.check(tangencies.len() == 6, format!("{} primary tangencies", tangencies.len()));
    for (k, t) in tangencies.iter().enumerate().take(6) {
        let rel = (t.energy - TABLE_TANGENCIES[k]) / TABLE_TANGENCIES[k];
        l.check(rel.abs() < 1e-3, format!("E_tan = {:.6e} vs {:.5e} (rel {rel:+.1e})", t.energy, TABLE_TANGENCIES[k]));
    }
    for (k, t) in tangencies.iter().enumerate().take(6) {
        match manifolds::find_homoclinic(&m, t.energy, Channel::Sec, s) {
            Ok(h) => l.check(
                (h.phi - TABLE_PHI_SEC[k]).abs() < 0.02,
                format!("phi_sec({:.6e}) = {:.4} vs {:.3}", t.energy, h.phi, TABLE_PHI_SEC[k]),
            ),
            Err(e) => l.check(false, format!("phi_sec({:.6e}): {e}", t.energy)),
        }
    }
    // Sensitivity of the secondary angle across the rounding interval of the
    // published energies.
    for (k, &e) in TABLE_TANGENCIES.iter().enumerate() {
        let phis: Vec<f64> = grid(e - 5e-12, e + 5e-12, 5)
            .iter()
            .filter_map(|&x| manifolds::find_homoclinic(&m, x, Channel::Sec, s).ok().map(|h| h.phi))
            .collect();
        let lo = phis.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = phis.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        l.note(format!("phi_sec over {e:.5e} +- 5e-12: [{lo:.3}, {hi:.3}] (published {:.3})", TABLE_PHI_SEC[k]));
    }
    l
}

fn criterion_6(records: &[periodic::PeriodicOrbitRecord]) -> Line {
    let mut l = Line::new();
    let m = model();
    let s = FlowSettings::default();
    let incl = |g: f64| m.inclination(&Point::new(0.0, 0.0, g, 0.0)).to_degrees();
    let (mut i_lo, mut i_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut o_lo, mut o_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for r in records {
        i_lo = i_lo.min(incl(r.gam0));
        i_hi = i_hi.max(incl(r.gam0));
        for g in [r.gam_min, r.gam_max] {
            o_lo = o_lo.min(incl(g));
            o_hi = o_hi.max(incl(g));
        }
    }
    l.note(format!("periodic orbits on the section: i in [{i_lo:.4}, {i_hi:.4}]; along the orbits [{o_lo:.4}, {o_hi:.4}]"));
    let (mut f_lo, mut f_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for e in grid(E_MIN, E_MAX, 16).into_iter().chain([1.7e-8]) {
        match manifolds::find_homoclinic(&m, e, Channel::Pri, s) {
            Ok(h) => {
                i_lo = i_lo.min(h.i_min);
                i_hi = i_hi.max(h.i_max);
                f_lo = f_lo.min(h.flow.i_min);
                f_hi = f_hi.max(h.flow.i_max);
                if e == 1.7e-8 {
                    l.check((h.e_max - 0.35).abs() <= 0.03, format!("e_max(1.7e-8) = {:.4} (flow {:.4})", h.e_max, h.flow.e_max));
                }
                if e == E_MAX {
                    l.check(h.e_max >= 0.795, format!("e_max({E_MAX:e}) = {:.4} (flow {:.4})", h.e_max, h.flow.e_max));
                }
            }
            Err(err) => l.check(false, format!("homoclinic at {e:e}: {err}")),
        }
    }
    // The published envelope carries two decimals.
    l.check(
        i_lo >= 55.70 - 0.005 && i_hi <= 58.18 + 0.005,
        format!("section inclination envelope [{i_lo:.4}, {i_hi:.4}] deg"),
    );
    l.note(format!("continuous-flow inclination envelope [{f_lo:.4}, {f_hi:.4}] deg"));
    l
}

fn criterion_7() -> Line {
    let mut l = Line::new();
    let m = model();
    let s = FlowSettings::default();
    let e_res = periodic::find_jres(&m, 3e-7, 6e-7, &s).map(|r| r.1).unwrap_or(4.4472e-7);
    match melnikov::melnikov(&m, e_res, Channel::Pri, &s) {
        Ok(r) => {
            let v = r.n_zeta_over_pi(&m);
            l.check((v - 5.61).abs() <= 0.06, format!("n zeta_pri / pi at {e_res:.6e} = {v:.4}"));
            let anti = (r.zeta_plus + r.zeta_minus).abs() / r.zeta_plus.abs();
            l.check(anti < 1e-8, format!("zeta_+ = {:.6e}, zeta_- = {:.6e} (rel {anti:.1e})", r.zeta_plus, r.zeta_minus));
            l.check(
                r.a1m() == r.a1p.conj() && r.b1m() == r.b1p.conj(),
                "A1- = conj(A1+), B1- = conj(B1+)".into(),
            );
        }
        Err(e) => l.check(false, format!("melnikov at {e_res:e}: {e}")),
    }
    let energies = grid(E_MIN + 1e-9, E_MAX, 80);
    let scan = melnikov::scan(&m, &energies, Channel::Pri, &s);
    let vals: Vec<(f64, f64)> = scan
        .iter()
        .filter_map(|(e, r)| r.as_ref().ok().map(|r| (*e, r.f_plus.norm())))
        .collect();
    l.note(format!("|f+| scan: {} of {} energies converged", vals.len(), energies.len()));
    let mut minima: Vec<melnikov::MelnikovRecord> = Vec::new();
    for w in vals.windows(3) {
        if w[1].1 <= w[0].1 && w[1].1 <= w[2].1 {
            if let Ok(r) = melnikov::minimize_abs_f(&m, w[0].0, w[2].0, Channel::Pri, &s, 1e-12) {
                minima.push(r);
            }
        }
    }
    let best = minima.iter().copied().min_by(|a, b| a.f_plus.norm().total_cmp(&b.f_plus.norm()));
    if let Some(r) = minima.iter().min_by(|a, b| (a.energy - 4.81143e-7).abs().total_cmp(&(b.energy - 4.81143e-7).abs())) {
        l.note(format!("local minimum nearest 4.81143e-7: |f+| = {:.6e} at E = {:.6e}", r.f_plus.norm(), r.energy));
    }
    match best {
        Some(r) => {
            let f = r.f_plus.norm();
            l.check(
                (f - 0.0014295).abs() <= 0.05 * 0.0014295 && (r.energy - 4.81143e-7).abs() <= 1e-8,
                format!("min |f+| = {f:.6e} at E = {:.6e}", r.energy),
            );
        }
        None => l.check(false, "no interior minimum of |f+|".into()),
    }
    l
}

fn criterion_8() -> Line {
    let mut l = Line::new();
    let m = model();
    let s = FlowSettings::default();
    for e in [2.0e-7, 6.0e-7, 1.0e-6] {
        let o = match periodic::solve_periodic(&m, e, &s) {
            Ok(o) => o,
            Err(err) => {
                l.check(false, format!("{e:e}: {err}"));
                continue;
            }
        };
        let run = || -> secres::Result<(f64, f64, f64, f64)> {
            let a = melnikov::a1(&m, &o, &s)?;
            let h = manifolds::find_homoclinic(&m, e, Channel::Pri, s)?;
            let r = melnikov::melnikov_at(&m, &o, &h, &s, &Default::default())?;
            let b = oracle::b1_truncated(&m, &o, &h, r.zeta_plus, 6, &s)?;
            let mut inner = [0.0; 2];
            let mut outer = [0.0; 2];
            for (k, &im) in [1e-3, 1e-4].iter().enumerate() {
                for j in 0..8 {
                    let om = TAU * j as f64 / 8.0;
                    let di = oracle::inner_jump(&m, &o, om, im, &s)? - melnikov::first_order_jump(a, om, im);
                    let dout = oracle::outer_jump(&m, &o, &h, r.zeta_plus, om, im, 6, &s)? - melnikov::first_order_jump(b, om, im);
                    inner[k] += di * di / 8.0;
                    outer[k] += dout * dout / 8.0;
                }
            }
            Ok((
                (inner[0] / inner[1]).sqrt(),
                (outer[0] / outer[1]).sqrt(),
                outer[1].sqrt() / 1e-8,
                (b - r.b1p).norm() / r.b1p.norm(),
            ))
        };
        match run() {
            Ok((ri, ro, c, trunc)) => {
                l.check((75.0..=125.0).contains(&ri), format!("E = {e:.1e}: inner residual ratio 1e-3/1e-4 = {ri:.2}"));
                l.check(
                    (75.0..=125.0).contains(&ro),
                    format!("E = {e:.1e}: outer residual ratio = {ro:.2} (6 returns per side, residual/i_M^2 = {c:.3})"),
                );
                l.note(format!("E = {e:.1e}: |B1(6 returns) - B1| / |B1| = {trunc:.2e}"));
            }
            Err(err) => l.check(false, format!("{e:e}: {err}")),
        }
    }
    l
}

fn criterion_9() -> Line {
    let mut l = Line::new();
    let m = model();
    let s = FlowSettings::default();
    let t = Instant::now();
    let tables = match Tables::build(&m, &TableSpec::default(), &s) {
        Ok(t) => t,
        Err(e) => {
            l.check(false, format!("tables: {e}"));
            return l;
        }
    };
    l.note(format!("tables: {} energies, {} tangency bands, {:.1?}", tables.nodes.len(), tables.bands.len(), t.elapsed()));
    let bs = BuilderSettings::default();
    match diffusion::build_pseudo_orbit(1e-3, &tables, &bs) {
        Ok(po) => {
            let (j0, j1) = (tables.action(bs.e_start), tables.action(bs.e_target));
            let end = po.end();
            l.check(
                (po.start.j - j0).abs() <= bs.nu && (end.j - j1) * (j1 - j0).signum() >= -bs.nu,
                format!("J from {:.9e} to {:.9e} (targets {j0:.9e}, {j1:.9e}, nu = {:e})", po.start.j, end.j, bs.nu),
            );
            // Monotone trend: the action averaged over blocks of steps moves
            // towards the target.
            let block = (po.steps.len() / 20).max(1);
            let means: Vec<f64> = po
                .steps
                .chunks(block)
                .map(|c| c.iter().map(|s| s.to.j).sum::<f64>() / c.len() as f64)
                .collect();
            let dir = (j1 - j0).signum();
            let monotone = means.windows(2).all(|w| (w[1] - w[0]) * dir > 0.0);
            l.check(monotone, format!("block-averaged J monotone over {} blocks", means.len()));
            match diffusion::report_drift(&po, &tables) {
                Ok(r) => {
                    l.check(
                        r.e_start <= 1.7e-8 + 1e-15 && r.e_end >= 1.3e-6 - 1e-15,
                        format!("H from {:.4e} to {:.6e} in {} steps ({} outer)", r.e_start, r.e_end, r.steps, r.outer_steps),
                    );
                    l.note(format!(
                        "eccentricity {:.2} -> {:.4}, inclination envelope [{:.3}, {:.3}] deg",
                        r.ecc_start, r.ecc_end, r.i_min, r.i_max
                    ));
                }
                Err(e) => l.check(false, format!("report: {e}")),
            }
        }
        Err(e) => l.check(false, format!("builder: {e}")),
    }
    match diffusion::scaling_study(&tables, &[1e-2, 1e-3, 1e-4], &bs) {
        Ok((counts, slope)) => l.check(
            (slope + 1.0).abs() <= 0.15,
            format!("log-log slope {slope:.3} from steps {counts:?}"),
        ),
        Err(e) => l.check(false, format!("scaling: {e}")),
    }
    l
}

fn criterion_10() -> Line {
    let mut l = Line::new();
    for (name, tol) in [
        ("energy_drift_100_returns", 1e-12),
        ("reversibility_defect", 1e-10),
        ("monodromy_det_defect", 1e-9),
        ("gradient_fd_rel_defect", 1e-8),
    ] {
        for r in validation::run_suite(Some(name)) {
            l.check(r.passed, format!("{} = {:.2e} (tol {tol:.0e})", r.name, r.measured));
        }
    }
    let dev = validation::giacaglia_max_deviation();
    l.check(dev <= 5e-7, format!("Giacaglia table, max |U - printed| = {dev:.2e} (tol 5e-7)"));
    let trunc = validation::giacaglia_truncation_deviation();
    l.note(format!("Giacaglia table truncated to six decimals: max deviation {trunc:.1e}"));
    l
}

fn main() {
    let t0 = Instant::now();
    let m = model();
    let s = FlowSettings::default();
    let records: Vec<_> = periodic::scan_periodic(&m, E_MIN, E_MAX, 200, &s)
        .into_iter()
        .filter_map(|(_, r)| r.ok())
        .collect();
    let criteria: [(&str, Box<dyn Fn() -> Line>); 10] = [
        ("boundary energies", Box::new(criterion_1)),
        ("averaged-model thresholds", Box::new(criterion_2)),
        ("resonance geometry", Box::new(criterion_3)),
        ("double-resonance energy and twist", Box::new(|| criterion_4(&records))),
        ("tangency table", Box::new(criterion_5)),
        ("homoclinic eccentricity and inclination", Box::new(|| criterion_6(&records))),
        ("Melnikov outputs", Box::new(criterion_7)),
        ("first-order-map oracle", Box::new(criterion_8)),
        ("drift demonstration", Box::new(criterion_9)),
        ("structural suite", Box::new(criterion_10)),
    ];
    let mut passed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let line = f();
        passed += line.pass as usize;
        println!(
            "criterion {:>2} [{}] {name} ({:.1?})",
            k + 1,
            if line.pass { "PASS" } else { "FAIL" },
            t.elapsed()
        );
        for d in &line.details {
            println!("    {d}");
        }
    }
    println!("acceptance: {passed}/10 criteria pass ({:.1?})", t0.elapsed());
}

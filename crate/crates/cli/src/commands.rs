//! Subcommands. Each one returns its tables; emission lives in `output`.

use anyhow::Result;
use clap::{Args, Subcommand};
use rayon::prelude::*;

use secres::diffusion::{self, BuilderSettings, TableSpec, Tables};
use secres::dynamics::FlowSettings;
use secres::manifolds::{self, Branch, Channel};
use secres::melnikov::{self, MelnikovRecord};
use secres::periodic::{self, PeriodicOrbitRecord};
use secres::validation;
use secres::{Error, Model};

use crate::output::{num, Manifest, Report, Table};

#[derive(Subcommand)]
pub enum Command {
    /// Physical constants, derived coefficients and obliquity functions.
    Constants,
    /// Circular periodic orbits on an energy grid.
    Periodic(PeriodicArgs),
    /// Manifold polyline and homoclinic point at one energy, or a tangency scan.
    Manifolds(ManifoldArgs),
    /// Phase shifts and Melnikov coefficients on an energy grid.
    Melnikov(MelnikovArgs),
    /// First-order pseudo-orbit along the cylinder.
    Diffuse(DiffuseArgs),
    /// Golden-value and oracle checks.
    Validate(ValidateArgs),
}

#[derive(Args)]
pub struct PeriodicArgs {
    #[arg(long, default_value_t = 1e-8)]
    emin: f64,
    #[arg(long, default_value_t = 1.32e-6)]
    emax: f64,
    #[arg(long, default_value_t = 60)]
    n: usize,
}

#[derive(Args)]
pub struct ManifoldArgs {
    #[arg(long, default_value_t = 4.8e-7)]
    e: f64,
    #[arg(long, default_value = "pri")]
    channel: Channel,
    /// Number of section returns applied to the fundamental segment.
    #[arg(long, default_value_t = 12)]
    depth: usize,
    /// Largest gap between neighbouring polyline points.
    #[arg(long, default_value_t = 2e-3)]
    delta_max: f64,
    #[arg(long, default_value_t = 4000)]
    max_seeds: usize,
    /// Locate the primary tangencies on [emin, emax] instead.
    #[arg(long)]
    scan_tangencies: bool,
    #[arg(long, default_value_t = 1e-8)]
    emin: f64,
    #[arg(long, default_value_t = 1.32e-6)]
    emax: f64,
    #[arg(long, default_value_t = 80)]
    n: usize,
}

#[derive(Args)]
pub struct MelnikovArgs {
    #[arg(long, default_value_t = 1e-8)]
    emin: f64,
    #[arg(long, default_value_t = 1.32e-6)]
    emax: f64,
    #[arg(long, default_value_t = 60)]
    n: usize,
    #[arg(long, default_value = "pri")]
    channel: Channel,
}

#[derive(Args)]
pub struct DiffuseArgs {
    /// Lunar inclination i_M [rad].
    #[arg(long, default_value_t = 1e-3)]
    im: f64,
    /// Stopping distance from the target action.
    #[arg(long, default_value_t = 1e-9)]
    nu: f64,
    /// Seed for the initial phase Ω_M (Ω_M = 0 when absent).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1.7e-8)]
    e_start: f64,
    #[arg(long, default_value_t = 1.3e-6)]
    e_target: f64,
    /// Table grid size.
    #[arg(long, default_value_t = 80)]
    tables_n: usize,
    /// Half-width in energy of the secondary bands.
    #[arg(long, default_value_t = 1e-9)]
    delta: f64,
    /// Also run the step-count study over i_M ∈ {1e-2, 1e-3, 1e-4}.
    #[arg(long)]
    scaling: bool,
}

#[derive(Args)]
pub struct ValidateArgs {
    /// Run only checks whose name contains this string.
    #[arg(long)]
    filter: Option<String>,
    /// Print the current values of the derived goldens with the command
    /// that regenerates them.
    #[arg(long)]
    regen_oracles: bool,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Constants => "constants",
            Command::Periodic(_) => "periodic",
            Command::Manifolds(_) => "manifolds",
            Command::Melnikov(_) => "melnikov",
            Command::Diffuse(_) => "diffuse",
            Command::Validate(_) => "validate",
        }
    }

    pub fn run(&self, model: &Model, config_hash: String) -> Result<Report> {
        let manifest = |grid: String| Manifest {
            command: std::env::args().skip(1).collect::<Vec<_>>().join(" "),
            config_hash: config_hash.clone(),
            grid,
        };
        let settings = FlowSettings::default();
        match self {
            Command::Constants => Ok(constants(model, manifest("none".into()))),
            Command::Periodic(a) => {
                check_grid(a.emin, a.emax, a.n)?;
                Ok(periodic_table(model, a, &settings, manifest(grid_spec(a.emin, a.emax, a.n))))
            }
            Command::Manifolds(a) if a.scan_tangencies => {
                check_grid(a.emin, a.emax, a.n)?;
                tangencies(model, a, &settings, manifest(grid_spec(a.emin, a.emax, a.n)))
            }
            Command::Manifolds(a) => manifold(model, a, &settings, manifest(format!("E={}", num(a.e)))),
            Command::Melnikov(a) => {
                check_grid(a.emin, a.emax, a.n)?;
                melnikov_table(model, a, &settings, manifest(grid_spec(a.emin, a.emax, a.n)))
            }
            Command::Diffuse(a) => {
                let grid = format!("tables {}; delta={}", grid_spec(1e-8, 1.32e-6, a.tables_n), num(a.delta));
                diffuse(model, a, &settings, manifest(grid))
            }
            Command::Validate(a) => Ok(validate(a, manifest("none".into()))),
        }
    }
}

fn grid_spec(lo: f64, hi: f64, n: usize) -> String {
    format!("E in [{}, {}], n={n}", num(lo), num(hi))
}

fn invalid(name: &str, reason: impl Into<String>) -> anyhow::Error {
    Error::InvalidParameter {
        name: name.into(),
        reason: reason.into(),
    }
    .into()
}

fn check_grid(lo: f64, hi: f64, n: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("n", "grid needs at least one point"));
    }
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(invalid("emin", format!("need emin <= emax, got [{lo}, {hi}]")));
    }
    Ok(())
}

fn status<T>(r: &secres::Result<T>) -> String {
    match r {
        Ok(_) => "ok".into(),
        Err(e) => e.to_string(),
    }
}

fn constants(model: &Model, manifest: Manifest) -> Report {
    let p = &model.params;
    let c = &p.physical;
    let mut t = Table::new("constants", &["name", "value", "unit"]);
    let rows: [(&str, f64, &str); 18] = [
        ("mu", c.mu, "km^3/s^2"),
        ("mu_M", c.mu_m, "km^3/s^2"),
        ("a_M", c.a_m, "km"),
        ("e_M", c.e_m, "-"),
        ("J2", c.j2, "-"),
        ("R_E", c.r_e, "km"),
        ("eps_deg", c.eps_deg, "deg"),
        ("a_sat", c.a_sat, "km"),
        ("T_saros", c.t_saros, "day"),
        ("L", p.l, "nd"),
        ("alpha", p.alpha, "-"),
        ("alpha3", p.alpha3(), "-"),
        ("rho0", p.rho0, "nd"),
        ("rho1", p.rho1, "-"),
        ("eps", p.eps, "rad"),
        ("n_omega", p.n_omega, "nd"),
        ("time_unit", p.time_unit, "s"),
        ("energy_unit", p.energy_unit(), "km^2/s^2"),
    ];
    for (name, value, unit) in rows {
        t.push(vec![name.into(), value.to_string(), unit.into()]);
    }
    let mut g = Table::new("giacaglia", &["m", "s", "U", "tabulated"]);
    for (m, s, printed) in validation::GIACAGLIA_TABLE {
        g.push(vec![m.to_string(), s.to_string(), model.giacaglia.u(m, s).to_string(), printed.to_string()]);
    }
    Report {
        manifest,
        tables: vec![t, g],
        failures: 0,
    }
}

fn periodic_table(model: &Model, a: &PeriodicArgs, settings: &FlowSettings, manifest: Manifest) -> Report {
    let header = [
        "E", "J", "Gam0", "T0", "T0_years", "nSarosT_over_pi", "lambda", "kind", "i_deg", "jres", "status",
    ];
    let mut t = Table::new("orbits", &header);
    let energies = periodic::grid(a.emin, a.emax, a.n);
    let records: Vec<_> = energies.par_iter().map(|&e| periodic::solve_periodic(model, e, settings)).collect();
    let jres = if a.n > 1 { periodic::find_jres(model, a.emin, a.emax, settings).ok() } else { None };
    let row = |e: f64, r: &secres::Result<PeriodicOrbitRecord>, flag: bool| -> Vec<String> {
        let mut v = vec![num(e), num(-e / model.n_omega)];
        match r {
            Ok(o) => v.extend([
                num(o.gam0),
                num(o.t0),
                num(model.params.time_in_years(o.t0)),
                num(o.n_t0(model) / std::f64::consts::PI),
                num(o.lambda),
                format!("{:?}", o.kind).to_lowercase(),
                num(model.inclination(&o.fixed_point()).to_degrees()),
            ]),
            Err(_) => v.extend(std::iter::repeat_n(String::new(), 7)),
        }
        v.push(u8::from(flag).to_string());
        v.push(status(r));
        v
    };
    let mut rows: Vec<(f64, Vec<String>)> = energies.iter().zip(&records).map(|(&e, r)| (e, row(e, r, false))).collect();
    let mut failures = records.iter().filter(|r| r.is_err()).count();
    if let Some((_, e)) = jres {
        let r = periodic::solve_periodic(model, e, settings);
        failures += usize::from(r.is_err());
        rows.push((e, row(e, &r, true)));
        rows.sort_by(|x, y| x.0.total_cmp(&y.0));
    }
    for (_, r) in rows {
        t.push(r);
    }
    Report {
        manifest,
        tables: vec![t],
        failures,
    }
}

fn manifold(model: &Model, a: &ManifoldArgs, settings: &FlowSettings, manifest: Manifest) -> Result<Report> {
    let branch = Branch::unstable(model, a.e, *settings)?;
    let orbit = periodic::solve_periodic(model, a.e, settings)?;
    let mut poly = Table::new("polyline", &["E", "branch", "tau", "xi", "eta", "Gam", "e"]);
    let fixed = orbit.fixed_point();
    poly.push(vec![
        num(a.e),
        "fixed".into(),
        String::new(),
        num(fixed.xi),
        num(fixed.eta),
        num(fixed.gam),
        num(model.eccentricity(&fixed)),
    ]);
    let mut failures = 0;
    if a.depth > 0 {
        let u = manifolds::globalize(&branch, a.depth, a.delta_max, a.max_seeds);
        if !u.resolved {
            eprintln!("secres: seed budget exhausted before the polyline reached delta_max");
        }
        let s = u.mirrored();
        for (tag, b) in [("u", &u), ("s", &s)] {
            for (tau, p) in &b.points {
                poly.push(vec![
                    num(a.e),
                    tag.into(),
                    num(*tau),
                    num(p.xi),
                    num(p.eta),
                    num(p.gam),
                    num(model.eccentricity(p)),
                ]);
            }
        }
    }
    let mut hom = Table::new(
        "homoclinic",
        &["E", "channel", "coord", "phi", "phi_oriented", "e_max", "i_min", "i_max", "status"],
    );
    let r = manifolds::homoclinic(&branch, a.channel, &manifolds::CrossingSearch::default());
    let mut row = vec![num(a.e), a.channel.name().into()];
    match &r {
        Ok(h) => row.extend([num(h.coord), num(h.phi), num(h.phi_oriented), num(h.e_max), num(h.i_min), num(h.i_max)]),
        Err(_) => {
            failures += 1;
            row.extend(std::iter::repeat_n(String::new(), 6));
        }
    }
    row.push(status(&r));
    hom.push(row);
    Ok(Report {
        manifest,
        tables: vec![poly, hom],
        failures,
    })
}

fn tangencies(model: &Model, a: &ManifoldArgs, settings: &FlowSettings, manifest: Manifest) -> Result<Report> {
    let grid = periodic::grid(a.emin, a.emax, a.n);
    let found = manifolds::scan_tangencies(model, &grid, Channel::Pri, *settings, 1e-13)?;
    let mut t = Table::new("tangencies", &["k", "E", "bracket_lo", "bracket_hi", "angle_lo", "angle_hi"]);
    for (k, tg) in found.iter().enumerate() {
        t.push(vec![
            (k + 1).to_string(),
            num(tg.energy),
            num(tg.bracket.0),
            num(tg.bracket.1),
            num(tg.residual.0),
            num(tg.residual.1),
        ]);
    }
    Ok(Report {
        manifest,
        tables: vec![t],
        failures: 0,
    })
}

fn melnikov_row(model: &Model, e: f64, r: &secres::Result<MelnikovRecord>) -> Vec<String> {
    let c = |z: (f64, f64)| [num(z.0), num(z.1)];
    let mut v = vec![num(e)];
    match r {
        Ok(m) => {
            let bt = m.b1_tilde(model).map(|z| (z.re, z.im)).unwrap_or((f64::NAN, f64::NAN));
            v.extend([num(m.j), num(m.t0), num(m.zeta_plus), num(m.zeta_minus), num(m.zeta)]);
            v.push(num(m.n_zeta_over_pi(model)));
            v.extend(c((m.a1p.re, m.a1p.im)));
            v.extend(c((m.b1p.re, m.b1p.im)));
            v.extend(c((m.f_plus.re, m.f_plus.im)));
            v.push(num(m.f_plus.norm()));
            v.extend(c(bt));
            v.push(m.blocks.0.to_string());
            v.push(m.blocks.1.to_string());
            v.push(num(m.tail_residual.0.max(m.tail_residual.1)));
            v.push(num((m.zeta_plus + m.zeta_minus).abs()));
        }
        Err(_) => v.extend(std::iter::repeat_n(String::new(), MELNIKOV_HEADER.len() - 2)),
    }
    v.push(status(r));
    v
}

const MELNIKOV_HEADER: [&str; 21] = [
    "E",
    "J",
    "T0",
    "zeta_plus",
    "zeta_minus",
    "zeta",
    "nSarosZeta_over_pi",
    "A1_re",
    "A1_im",
    "B1_re",
    "B1_im",
    "f_re",
    "f_im",
    "abs_f",
    "B1tilde_re",
    "B1tilde_im",
    "blocks_fwd",
    "blocks_bwd",
    "tail_residual",
    "zeta_antisym",
    "status",
];

fn melnikov_table(model: &Model, a: &MelnikovArgs, settings: &FlowSettings, manifest: Manifest) -> Result<Report> {
    let mut t = Table::new("coefficients", &MELNIKOV_HEADER);
    let energies = periodic::grid(a.emin, a.emax, a.n);
    let records: Vec<_> = energies.par_iter().map(|&e| melnikov::melnikov(model, e, a.channel, settings)).collect();
    let failures = records.iter().filter(|r| r.is_err()).count();
    for (&e, r) in energies.iter().zip(&records) {
        t.push(melnikov_row(model, e, r));
    }

    let mut s = Table::new("summary", &["quantity", "E", "value", "status"]);
    let best = records
        .iter()
        .enumerate()
        .filter_map(|(k, r)| r.as_ref().ok().map(|m| (k, m.f_plus.norm())))
        .min_by(|x, y| x.1.total_cmp(&y.1));
    if let Some((k, _)) = best {
        let lo = energies[k.saturating_sub(1)];
        let hi = energies[(k + 1).min(energies.len() - 1)];
        let r = if lo < hi {
            melnikov::minimize_abs_f(model, lo, hi, a.channel, settings, 1e-12)
        } else {
            records[k].clone()
        };
        match &r {
            Ok(m) => s.push(vec!["min_abs_f".into(), num(m.energy), num(m.f_plus.norm()), "ok".into()]),
            Err(e) => s.push(vec!["min_abs_f".into(), String::new(), String::new(), e.to_string()]),
        }
    }
    let antisym = records
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .map(|m| (m.zeta_plus + m.zeta_minus).abs())
        .fold(0.0, f64::max);
    s.push(vec!["max_zeta_antisym".into(), String::new(), num(antisym), "ok".into()]);
    if energies.len() > 1 {
        match periodic::find_jres(model, a.emin, a.emax, settings) {
            Ok((_, e)) => {
                let r = melnikov::melnikov(model, e, a.channel, settings);
                let value = r.as_ref().map(|m| num(m.n_zeta_over_pi(model))).unwrap_or_default();
                s.push(vec!["resonance_nSarosZeta_over_pi".into(), num(e), value, status(&r)]);
            }
            Err(e) => s.push(vec!["resonance_nSarosZeta_over_pi".into(), String::new(), String::new(), e.to_string()]),
        }
    }
    Ok(Report {
        manifest,
        tables: vec![t, s],
        failures,
    })
}

fn diffuse(model: &Model, a: &DiffuseArgs, settings: &FlowSettings, manifest: Manifest) -> Result<Report> {
    if !(a.im >= 0.0 && a.im.is_finite()) {
        return Err(invalid("im", format!("must be a non-negative angle, got {}", a.im)));
    }
    if a.tables_n < 4 {
        return Err(invalid("tables-n", "interpolation needs at least 4 nodes"));
    }
    let spec = TableSpec {
        n: a.tables_n,
        delta: a.delta,
        ..TableSpec::default()
    };
    for (name, e) in [("e-start", a.e_start), ("e-target", a.e_target)] {
        if !(spec.e_lo..=spec.e_hi).contains(&e) {
            return Err(invalid(name, format!("{e} lies outside the tables [{}, {}]", spec.e_lo, spec.e_hi)));
        }
    }
    let tables = Tables::build(model, &spec, settings)?;
    let bs = BuilderSettings {
        e_start: a.e_start,
        e_target: a.e_target,
        nu: a.nu,
        omega0: a.seed.map_or(0.0, diffusion::seeded_phase),
        ..BuilderSettings::default()
    };
    let po = diffusion::build_pseudo_orbit(a.im, &tables, &bs)?;
    let mut trace = Table::new("trace", &["step", "move", "J", "E", "Omega_M", "jump"]);
    trace.push(vec![
        "0".into(),
        "start".into(),
        num(po.start.j),
        num(tables.energy(po.start.j)),
        num(po.start.omega),
        num(0.0),
    ]);
    for (k, st) in po.steps.iter().enumerate() {
        trace.push(vec![
            (k + 1).to_string(),
            st.mv.tag().into(),
            num(st.to.j),
            num(tables.energy(st.to.j)),
            num(st.to.omega),
            num(st.to.j - st.from.j),
        ]);
    }
    let d = diffusion::report_drift(&po, &tables)?;
    let mut summary = Table::new("summary", &["quantity", "value"]);
    let rows: [(&str, String); 10] = [
        ("i_M", num(a.im)),
        ("E_start", num(d.e_start)),
        ("E_end", num(d.e_end)),
        ("steps", d.steps.to_string()),
        ("inner_steps", d.inner_steps.to_string()),
        ("outer_steps", d.outer_steps.to_string()),
        ("ecc_start", num(d.ecc_start)),
        ("ecc_end", num(d.ecc_end)),
        ("i_min_deg", num(d.i_min)),
        ("i_max_deg", num(d.i_max)),
    ];
    for (k, v) in rows {
        summary.push(vec![k.into(), v]);
    }
    let mut tables_out = vec![trace, summary];
    if a.scaling {
        let (counts, slope) = diffusion::scaling_study(&tables, &[1e-2, 1e-3, 1e-4], &bs)?;
        let mut sc = Table::new("scaling", &["i_M", "steps", "loglog_slope"]);
        for (i_m, n) in counts {
            sc.push(vec![num(i_m), n.to_string(), num(slope)]);
        }
        tables_out.push(sc);
    }
    Ok(Report {
        manifest,
        tables: tables_out,
        failures: 0,
    })
}

fn validate(a: &ValidateArgs, manifest: Manifest) -> Report {
    let results = validation::run_suite(a.filter.as_deref());
    let mut t = Table::new(
        "checks",
        &["name", "status", "measured", "expected", "tolerance", "provenance", "error"],
    );
    let failures = results.iter().filter(|r| !r.passed).count();
    for r in &results {
        t.push(vec![
            r.name.into(),
            if r.passed { "pass" } else { "fail" }.into(),
            num(r.measured),
            num(r.expected),
            num(r.tolerance),
            r.provenance.into(),
            r.error.clone().unwrap_or_default(),
        ]);
    }
    let mut tables = vec![t];
    if a.regen_oracles {
        let mut g = Table::new("derived_goldens", &["name", "value", "command"]);
        for r in results.iter().filter(|r| r.provenance.starts_with("DERIVED")) {
            g.push(vec![
                r.name.into(),
                num(r.measured),
                format!("secres validate --filter {} --regen-oracles", r.name),
            ]);
        }
        tables.push(g);
    }
    if failures > 0 {
        eprintln!("secres: {failures} check(s) failed");
    }
    Report {
        manifest,
        tables,
        failures,
    }
}

//! Subcommand drivers. Each writes its files into the scenario directory and
//! returns whether every tolerance gate passed.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use canonlab::bcmethod::{
    boundary_amplitude, bt_element, connecting_operator, control_operator, controllability_check, reachability_defect,
    sigma_min_trend, wavefront_amplitude, BTSpace, ControlBasis, ControlMode, ControllabilityReport,
};
use canonlab::builders::{
    build_h_from_density, build_h_from_dirac, build_h_from_potential, build_h_jacobi, diagonalize_h, eikonal,
    DiracReduction,
};
use canonlab::frequency::{
    hb_check, kernel_gram, standard_hb_grid, write_sweep_csv, DeBrangesFunction, DeBrangesOptions,
};
use canonlab::io::{write_evolution_csv, write_json, write_trace_csv};
use canonlab::timedomain::{
    canonical_fields_from_wave, extrapolated_trace, solve_canonical_i, solve_dirac, solve_dirac_type,
    solve_jacobi_discrete, solve_wave_density, solve_wave_potential, trace_distance, DiracSign, EvolutionResult,
    FieldData, Orientation, Recording, SolveOptions, SystemDescriptor, JACOBI_STEP_BOUND,
};
use canonlab::{smoothed_delta, BoundaryControl, HamiltonianField, SpaceGrid, TimeGrid};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::{BcSpec, DebrangesSpec, Scenario, SystemSpec, SCHEMA_VERSION};
use crate::CliError;

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn report(dir: &Path, name: &str, value: &serde_json::Value) -> Result<(), CliError> {
    let mut w = create(dir, name)?;
    write_json(&mut w, value)?;
    w.flush()?;
    Ok(())
}

fn header(s: &Scenario, command: &str) -> serde_json::Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "scenario": s.name,
        "command": command,
        "system": s.cfg.system.kind(),
        "seed": s.cfg.seed,
    })
}

fn merge(mut a: serde_json::Value, b: serde_json::Value) -> serde_json::Value {
    if let (Some(a), serde_json::Value::Object(b)) = (a.as_object_mut(), b) {
        a.extend(b);
    }
    a
}

/// Hamiltonian of a system on `space` (piecewise for Jacobi systems).
fn hamiltonian_of(s: &Scenario, sys: &SystemSpec, space: &SpaceGrid<f64>) -> Result<HamiltonianField<f64>, CliError> {
    Ok(match sys {
        SystemSpec::WavePotential { q } => build_h_from_potential(&s.coef(q, space)?, space)?.field,
        SystemSpec::WaveDensity { rho } => build_h_from_density(&s.coef(rho, space)?, space)?,
        SystemSpec::Dirac { p, q } => build_h_from_dirac(&s.coef(p, space)?, &s.coef(q, space)?, space)?.field,
        SystemSpec::DiracType { d1, d2, psi } => {
            let red = s.reduction(d1, d2, psi, space)?;
            HamiltonianField::sampled(*space, red.reconstruct(), None)?
        }
        SystemSpec::JacobiContinuous { jacobi, .. } | SystemSpec::JacobiDiscrete { jacobi, .. } => {
            build_h_jacobi(&s.jacobi(jacobi)?)?
        }
        SystemSpec::CanonicalI { h, .. } => s.hamiltonian_input(h, space)?,
    })
}

/// `max(1, max 1/sqrt(det H))`: Dirac-derived Hamiltonians have `det H = 1`
/// only up to rounding, and the canonical solver checks its own speed.
fn canonical_speed(h: &HamiltonianField<f64>) -> f64 {
    h.dets()
        .map(|d| d.iter().map(|d| 1.0 / d.sqrt()).fold(1.0, f64::max))
        .unwrap_or(1.0)
}

pub fn hamiltonian(s: &Scenario, dir: &Path) -> Result<bool, CliError> {
    let space = s.space()?;
    let h = hamiltonian_of(s, &s.cfg.system, &space)?;
    let grid = if h.is_piecewise() { SpaceGrid::new(h.extent(), space.len())? } else { space };
    let samples = h.sample_on(&grid);
    let tau = eikonal(&h).ok();
    let mut w = create(dir, "hamiltonian.csv")?;
    writeln!(w, "x,h11,h12,h21,h22,det,trace,tau")?;
    for (i, m) in samples.iter().enumerate() {
        let x = grid.x(i);
        let t = tau.as_ref().map(|e| e.at(x).to_string()).unwrap_or_default();
        writeln!(w, "{x},{},{},{},{},{},{},{t}", m.a, m.b, m.b, m.c, m.det(), m.trace())?;
    }
    w.flush()?;
    let red = if h.require_strictly_positive().is_ok() { diagonalize_h(&h).ok() } else { None };
    if let Some(red) = &red {
        let mut w = create(dir, "reduction.csv")?;
        writeln!(w, "x,d1,d2,phi,psi")?;
        for i in 0..red.grid().len() {
            writeln!(w, "{},{},{},{},{}", red.grid().x(i), red.d1()[i], red.d2()[i], red.phi()[i], red.psi()[i])?;
        }
        w.flush()?;
    }
    let dets: Vec<f64> = samples.iter().map(|m| m.det()).collect();
    report(
        dir,
        "hamiltonian.json",
        &merge(
            header(s, "hamiltonian"),
            json!({
                "extent": h.extent(),
                "n_points": grid.len(),
                "piecewise": h.is_piecewise(),
                "strictly_positive": h.require_strictly_positive().ok(),
                "min_det": dets.iter().copied().fold(f64::INFINITY, f64::min),
                "max_det": dets.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                "eikonal_total": tau.as_ref().map(|e| e.total()),
                "diagonalized": red.is_some(),
                "max_speed": red.as_ref().map(|r| r.max_speed()),
                "hamiltonian_hash": format!("{:016x}", h.content_hash()),
            }),
        ),
    )?;
    Ok(true)
}

fn recording(s: &Scenario) -> SolveOptions {
    SolveOptions::recording(match s.cfg.grid.record_every {
        Some(k) => Recording::Every(k),
        None => Recording::Final,
    })
}

fn write_scalar_evolution(dir: &Path, r: &EvolutionResult<f64>) -> Result<(), CliError> {
    let (Some(space), FieldData::Scalar(ev)) = (r.space, &r.field) else {
        return Ok(());
    };
    let mut w = create(dir, "evolution.csv")?;
    writeln!(w, "t,x,re,im")?;
    for (&k, frame) in ev.steps().iter().zip(ev.frames()) {
        let t = r.time.t(k);
        for (i, z) in frame.iter().enumerate() {
            writeln!(w, "{t},{},{},{}", space.x(i), z.re, z.im)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn simulate(s: &Scenario, dir: &Path) -> Result<bool, CliError> {
    let space = s.space()?;
    let opts = recording(s);
    let (result, control) = match &s.cfg.system {
        SystemSpec::JacobiDiscrete { jacobi, n, dt_mode } => {
            let sys = s.jacobi(jacobi)?;
            // discrete time runs in unit steps
            let steps = s.cfg.grid.t_max.round().max(0.0) as usize;
            if steps < 2 {
                return Err(CliError::Input("jacobi-discrete counts unit steps; t_max must be at least 2".into()));
            }
            let time = TimeGrid::new(steps as f64, steps)?;
            let f = s.control(&time)?;
            let n = n.unwrap_or(sys.matrix().dim());
            (solve_jacobi_discrete(&sys, f.samples(), n, steps, (*dt_mode).into(), &opts)?, f)
        }
        SystemSpec::JacobiContinuous { jacobi, n } => {
            let sys = s.jacobi(jacobi)?;
            let matrix = sys.matrix().clone();
            let n = n.unwrap_or(matrix.dim());
            let g = &s.cfg.grid;
            let steps = (g.t_max * matrix.norm_bound() / (JACOBI_STEP_BOUND * g.cfl)).ceil().max(1.0) as usize;
            let time = TimeGrid::new(g.t_max, steps)?;
            let f = s.control(&time)?;
            (SystemDescriptor::JacobiContinuous { matrix, n }.solve(&f, &opts)?, f)
        }
        sys => {
            let (desc, speed) = descriptor(s, sys, &space)?;
            let time = s.time(&space, speed)?;
            let f = s.control(&time)?;
            (desc.solve(&f, &opts)?, f)
        }
    };
    let mut w = create(dir, "response.csv")?;
    write_trace_csv(&mut w, &result.time, &result.response)?;
    w.flush()?;
    if s.cfg.grid.record_every.is_some() {
        match (&result.field, result.space) {
            (FieldData::Vector(ev), Some(space)) => {
                let mut w = create(dir, "evolution.csv")?;
                write_evolution_csv(&mut w, &space, &result.time, ev)?;
                w.flush()?;
            }
            _ => write_scalar_evolution(dir, &result)?,
        }
    }
    let peak = result.response.iter().map(|z| z.norm()).fold(0.0, f64::max);
    report(
        dir,
        "simulate.json",
        &merge(
            header(s, "simulate"),
            json!({
                "meta": result.meta,
                "response_max": peak,
                "field_max": result.field.max_norm(),
                "control_mismatch": result.control_mismatch(0, control.samples()),
            }),
        ),
    )?;
    Ok(true)
}

fn descriptor(s: &Scenario, sys: &SystemSpec, space: &SpaceGrid<f64>) -> Result<(SystemDescriptor<f64>, f64), CliError> {
    Ok(match sys {
        SystemSpec::WavePotential { q } => (SystemDescriptor::WavePotential { q: s.coef(q, space)?, space: *space }, 1.0),
        SystemSpec::WaveDensity { rho } => {
            let rho = s.coef(rho, space)?;
            let speed = rho.iter().map(|r| 1.0 / r.sqrt()).fold(0.0, f64::max);
            (SystemDescriptor::WaveDensity { rho, space: *space }, speed)
        }
        SystemSpec::Dirac { p, q } => (
            SystemDescriptor::Dirac {
                p: s.coef(p, space)?,
                q: s.coef(q, space)?,
                space: *space,
            },
            1.0,
        ),
        SystemSpec::DiracType { d1, d2, psi } => {
            let red = s.reduction(d1, d2, psi, space)?;
            let speed = red.max_speed();
            (
                SystemDescriptor::DiracType {
                    red,
                    sign: DiracSign::Forward,
                },
                speed,
            )
        }
        SystemSpec::CanonicalI { h, orientation } => {
            let h = s.hamiltonian_input(h, space)?;
            let speed = canonical_speed(&h);
            (
                SystemDescriptor::CanonicalI {
                    h,
                    orientation: (*orientation).into(),
                },
                speed,
            )
        }
        SystemSpec::JacobiContinuous { .. } | SystemSpec::JacobiDiscrete { .. } => {
            return Err(CliError::Input("Jacobi systems have no spatial descriptor".into()))
        }
    })
}

/// Centered derivative of a control, one-sided at the ends.
fn derivative(f: &BoundaryControl<f64>) -> Result<BoundaryControl<f64>, CliError> {
    let dt = f.grid().dt();
    Ok(BoundaryControl::from_samples(*f.grid(), canonlab::interp::derivative(f.samples(), dt))?)
}

pub fn equivalence(s: &Scenario, dir: &Path) -> Result<bool, CliError> {
    let space = s.space()?;
    let sys = &s.cfg.system;
    let other = s
        .cfg
        .equivalence
        .as_ref()
        .and_then(|e| e.canonical_side.as_ref())
        .unwrap_or(sys);
    if other.kind() != sys.kind() {
        return Err(CliError::Input(format!(
            "canonical side is {} but the system is {}",
            other.kind(),
            sys.kind()
        )));
    }
    let final_only = SolveOptions::recording(Recording::Final);
    let (time, a, b, relation) = match (sys, other) {
        (SystemSpec::WavePotential { q }, SystemSpec::WavePotential { q: q2 }) => {
            let time = s.time(&space, 1.0)?;
            let f = s.control(&time)?;
            let a = solve_wave_potential(&s.coef(q, &space)?, &f, &space, &final_only)?.response;
            let q2 = s.coef(q2, &space)?;
            let pot = build_h_from_potential(&q2, &space)?;
            let u = solve_wave_potential(&q2, &f, &space, &SolveOptions::default())?;
            let b = extrapolated_trace(&canonical_fields_from_wave(&u, &pot)?, 1);
            (time, a, b, "u_x(0, t) = c^2(0, t)")
        }
        (SystemSpec::WaveDensity { rho }, SystemSpec::WaveDensity { rho: rho2 }) => {
            let rho = s.coef(rho, &space)?;
            let speed = rho.iter().map(|r| 1.0 / r.sqrt()).fold(0.0, f64::max);
            let time = s.time(&space, speed)?;
            let f = s.control(&time)?;
            let a = solve_wave_density(&rho, &f, &space, &final_only)?.response;
            let h = build_h_from_density(&s.coef(rho2, &space)?, &space)?;
            let g = derivative(&f)?;
            let mi = Complex::new(0.0, -1.0);
            let b = solve_canonical_i(&h, &g, Orientation::Standard, &final_only)?
                .response
                .into_iter()
                .map(|z| z * mi)
                .collect();
            (time, a, b, "u_x(0, t) = -i y^2(0, t) with y^1(0, t) = f'(t)")
        }
        (SystemSpec::Dirac { p, q }, SystemSpec::Dirac { p: p2, q: q2 }) => {
            let dh = build_h_from_dirac(&s.coef(p2, &space)?, &s.coef(q2, &space)?, &space)?;
            let time = s.time(&space, canonical_speed(&dh.field))?;
            let f = s.control(&time)?;
            let a = solve_dirac(&s.coef(p, &space)?, &s.coef(q, &space)?, &f, &space, &final_only)?.response;
            let b = solve_canonical_i(&dh.field, &f, Orientation::Reversed, &final_only)?.response;
            (time, a, b, "u_2(0, t) = y^2(0, t)")
        }
        _ => {
            return Err(CliError::Input(format!("no paired canonical system for {}", sys.kind())));
        }
    };
    let discrepancy = trace_distance(&time, &a, &b)?;
    let passed = discrepancy <= s.cfg.tolerance;
    let mut w = create(dir, "traces.csv")?;
    writeln!(w, "t,re_a,im_a,re_b,im_b")?;
    for (k, (x, y)) in a.iter().zip(&b).enumerate() {
        writeln!(w, "{},{},{},{},{}", time.t(k), x.re, x.im, y.re, y.im)?;
    }
    w.flush()?;
    report(
        dir,
        "equivalence.json",
        &merge(
            header(s, "equivalence"),
            json!({
                "relation": relation,
                "discrepancy": discrepancy,
                "tolerance": s.cfg.tolerance,
                "dt": time.dt(),
                "n_steps": time.n_steps(),
                "h": space.h(),
                "passed": passed,
            }),
        ),
    )?;
    Ok(passed)
}

pub fn debranges(s: &Scenario, dir: &Path) -> Result<bool, CliError> {
    let spec = s.cfg.debranges.clone().unwrap_or_default();
    let DebrangesSpec {
        lambda_min,
        lambda_max,
        lambda_n,
        ..
    } = spec;
    if lambda_n == 0 {
        return Err(CliError::Input("empty lambda grid".into()));
    }
    if !(lambda_max >= lambda_min) {
        return Err(CliError::Input("lambda_max below lambda_min".into()));
    }
    let space = s.space()?;
    let h = hamiltonian_of(s, &s.cfg.system, &space)?;
    let strictly_positive = h.require_strictly_positive().is_ok();
    let x = spec.x.unwrap_or(h.extent());
    let e = DeBrangesFunction::new(
        &h,
        x,
        DeBrangesOptions {
            c0: spec.c0,
            normalize: spec.normalize,
        },
    )?;
    let lambdas: Vec<f64> = if lambda_n == 1 {
        vec![lambda_min]
    } else {
        let d = (lambda_max - lambda_min) / (lambda_n - 1) as f64;
        (0..lambda_n).map(|k| lambda_min + d * k as f64).collect()
    };
    let mut w = create(dir, "sweep.csv")?;
    write_sweep_csv(&mut w, &e, &lambdas)?;
    w.flush()?;
    let hb = hb_check(&e, &standard_hb_grid())?;
    let mut rng = ChaCha8Rng::seed_from_u64(s.cfg.seed);
    let points: Vec<Complex<f64>> = (0..spec.gram_points)
        .map(|_| Complex::new(rng.gen_range(-5.0..5.0), rng.gen_range(0.1..2.0)))
        .collect();
    let gram = kernel_gram(&e, &points)?;
    let hb_ok = !strictly_positive || hb.passed;
    let passed = hb_ok && gram.psd.psd && gram.diagonal_positive;
    report(dir, "hb.json", &merge(header(s, "debranges"), json!({ "x": x, "hb": hb })))?;
    report(dir, "kernel.json", &merge(header(s, "debranges"), json!({ "gram": gram })))?;
    report(
        dir,
        "debranges.json",
        &merge(
            header(s, "debranges"),
            json!({
                "x": x,
                "strictly_positive": strictly_positive,
                "lambda_n": lambdas.len(),
                "hb_min_margin": hb.min_margin,
                "hb_passed": hb.passed,
                "gram_psd": gram.psd.psd,
                "gram_min_eigenvalue": gram.psd.min_eigenvalue,
                "gram_diagonal_positive": gram.diagonal_positive,
                "passed": passed,
            }),
        ),
    )?;
    Ok(passed)
}

fn reduction_of(s: &Scenario, space: &SpaceGrid<f64>) -> Result<DiracReduction<f64>, CliError> {
    match &s.cfg.system {
        SystemSpec::DiracType { d1, d2, psi } => s.reduction(d1, d2, psi, space),
        SystemSpec::CanonicalI { .. } | SystemSpec::WaveDensity { .. } | SystemSpec::Dirac { .. } => {
            Ok(diagonalize_h(&hamiltonian_of(s, &s.cfg.system, space)?)?)
        }
        other => Err(CliError::Input(format!(
            "{} has no strictly positive Hamiltonian; bcmethod needs a Dirac-type scenario",
            other.kind()
        ))),
    }
}

fn extended_sigma(s: &Scenario, spec: &BcSpec, space: &SpaceGrid<f64>, stride: usize) -> Result<ControllabilityReport, CliError> {
    let red = reduction_of(s, space)?;
    let time = s.time(space, red.max_speed())?;
    let basis = ControlBasis::new(&time, stride)?;
    let w = control_operator(&red, &basis, ControlMode::Extended)?;
    Ok(controllability_check(&w, spec.floor)?)
}

pub fn bcmethod(s: &Scenario, dir: &Path) -> Result<bool, CliError> {
    let spec = s.cfg.bcmethod.clone().unwrap_or_default();
    let space = s.space()?;
    let red = reduction_of(s, &space)?;
    let time = s.time(&space, red.max_speed())?;
    let basis = ControlBasis::new(&time, spec.stride)?;
    let single = control_operator(&red, &basis, ControlMode::Single)?;
    let extended = control_operator(&red, &basis, ControlMode::Extended)?;
    let defect = reachability_defect(&single)?;
    let ctrl = controllability_check(&extended, spec.floor)?;
    let c = connecting_operator(&extended)?;

    let mut trend_reports = vec![ctrl.clone()];
    let mut fine = space;
    for r in 1..=spec.refinements {
        fine = fine.refined();
        trend_reports.push(extended_sigma(s, &spec, &fine, spec.stride << r)?);
    }
    let trend = sigma_min_trend(&trend_reports);

    let wavefront = if spec.wavefront {
        let width = (6.0 * time.dt()).max(time.t_max() / 40.0);
        let f = smoothed_delta(width + 2.0 * time.dt(), width, &time)?;
        let r = solve_dirac_type(&red, &f, DiracSign::Forward, &SolveOptions::default())?;
        Some(wavefront_amplitude(&r, &red, &boundary_amplitude(&red)?, &f)?)
    } else {
        None
    };
    let wavefront_ok = wavefront
        .as_ref()
        .map(|w| w.transport.max_rel_deviation <= spec.wavefront_tol && w.ahead_of_front < 1e-7)
        .unwrap_or(true);

    let mut w = create(dir, "singular_values.csv")?;
    writeln!(w, "k,sigma_single,sigma_extended")?;
    for k in 0..defect.singular_values.len().max(ctrl.singular_values.len()) {
        let a = defect.singular_values.get(k).map(|v| v.to_string()).unwrap_or_default();
        let b = ctrl.singular_values.get(k).map(|v| v.to_string()).unwrap_or_default();
        writeln!(w, "{k},{a},{b}")?;
    }
    w.flush()?;

    let bt = BTSpace::new(extended)?;
    let lambdas: Vec<f64> = (0..=40).map(|k| -10.0 + 0.5 * k as f64).collect();
    let q0 = &bt.control().basis.controls()[0];
    let zero = BoundaryControl::zero(time);
    let elem = bt_element(&bt, q0, &zero, &lambdas)?;
    let mut w = create(dir, "bt_element.csv")?;
    elem.write_csv(&mut w)?;
    w.flush()?;

    let passed = ctrl.passed && defect.defect >= spec.min_defect && c.psd.psd && wavefront_ok;
    report(
        dir,
        "bcmethod.json",
        &merge(
            header(s, "bcmethod"),
            json!({
                "t_max": time.t_max(),
                "dt": time.dt(),
                "h": space.h(),
                "n_basis": basis.len(),
                "reach": single.reach,
                "defect": defect,
                "controllability": ctrl,
                "sigma_min_trend": trend,
                "connecting": {
                    "n": c.n,
                    "asymmetry": c.asymmetry,
                    "psd": c.psd,
                    "norm": c.norm,
                    "distance_to_twice_identity": c.distance_to_identity(2.0),
                },
                "wavefront": wavefront,
                "passed": passed,
            }),
        ),
    )?;
    Ok(passed)
}

use std::process::ExitCode;

use num_complex::Complex64;
use resonance_core::gamow::{decay_probability, emission_speed, GamowState, ShellMode};
use resonance_core::green::{green_function, wronskian};
use resonance_core::resonances::{compare_methods, find_poles, Method, SearchOptions};
use resonance_core::smatrix::{f_l2, phase_shift_scan, s_matrix};
use resonance_core::solutions::RadialFunction;
use resonance_core::verify::run_suite;
use resonance_core::{BarrierSpec, ComplexRect, Error, ResonancePole};

use crate::output::{emit_json, write_with, Cell, Table};
use crate::{Cli, CliError, Command, Format, RectArgs};

pub fn run(cli: &Cli, spec: &BarrierSpec) -> Result<ExitCode, CliError> {
    let l = cli.l;
    match &cli.command {
        Command::Poles { rect, max_poles } => poles(cli, spec, &rect.rect()?, *max_poles),
        Command::Smatrix { e_min, e_max, steps } => {
            smatrix(l, spec, *e_min, *e_max, *steps)?.emit(cli.format, cli.out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Wavefunction {
            pole,
            energy,
            r_max,
            points,
            rect,
        } => {
            wavefunction(l, spec, *pole, *energy, *r_max, *points, rect)?.emit(cli.format, cli.out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Decay {
            pole,
            r0,
            dr0,
            t_min,
            t_max,
            steps,
            rect,
        } => {
            decay(l, spec, *pole, *r0, *dr0, *t_min, *t_max, *steps, rect)?.emit(cli.format, cli.out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Green {
            k_re,
            k_im,
            rprime,
            r_max,
            points,
        } => {
            green(l, spec, Complex64::new(*k_re, *k_im), *rprime, *r_max, *points)?
                .emit(cli.format, cli.out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { rect } => verify(cli, spec, &rect.rect()?),
    }
}

fn linspace(from: f64, to: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![from],
        _ => (0..n).map(|i| from + (to - from) * i as f64 / (n - 1) as f64).collect(),
    }
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Usage(msg()))
    }
}

/// Core errors caused by bad input map to usage errors, the rest to failures.
fn core_error(e: Error) -> CliError {
    match e {
        Error::Domain(_) | Error::InvalidSpec(_) | Error::Config(_) | Error::UnsupportedOrder { .. } => {
            CliError::usage(e)
        }
        _ => CliError::failure(e),
    }
}

fn pole_row(p: &ResonancePole) -> Vec<Cell> {
    vec![
        Cell::Int(p.l as i64),
        Cell::Num(p.k_d.re),
        Cell::Num(p.k_d.im),
        Cell::Num(p.e_r),
        Cell::Num(p.gamma),
        Cell::Num(p.method_residuals[&Method::SMatrix]),
        Cell::Num(p.method_residuals[&Method::Determinant]),
        Cell::Num(p.method_residuals[&Method::Green]),
        Cell::Num(p.s_residue_k.re),
        Cell::Num(p.s_residue_k.im),
        Cell::Num(p.s_residue_e.re),
        Cell::Num(p.s_residue_e.im),
    ]
}

const POLE_COLUMNS: [&str; 12] = [
    "l",
    "re_k",
    "im_k",
    "e_r",
    "gamma",
    "residual_smatrix",
    "residual_determinant",
    "residual_green",
    "s_residue_k_re",
    "s_residue_k_im",
    "s_residue_e_re",
    "s_residue_e_im",
];

fn poles(cli: &Cli, spec: &BarrierSpec, rect: &ComplexRect, max_poles: usize) -> Result<ExitCode, CliError> {
    let opts = SearchOptions {
        max_poles,
        ..SearchOptions::default()
    };
    let report = compare_methods(cli.l, rect, spec, &opts).map_err(core_error)?;
    let mut table = Table::new(&POLE_COLUMNS);
    eprintln!(
        "argument-principle count {}, max method distance {:.3e}",
        report.argument_count, report.max_distance
    );
    for p in &report.poles {
        table.push(pole_row(p));
    }
    table.emit(cli.format, cli.out.as_deref())?;
    if report.agrees() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "error: pole routes disagree (scaled distance {:e}, determinant {} roots, green {} roots, expected {})",
            report.max_distance,
            report.determinant_roots.len(),
            report.green_roots.len(),
            report.argument_count
        );
        Ok(ExitCode::from(1))
    }
}

fn smatrix(l: u32, spec: &BarrierSpec, e_min: f64, e_max: f64, steps: usize) -> Result<Table, CliError> {
    require(e_min > 0.0 && e_max > e_min && e_max.is_finite(), || {
        format!("need 0 < e_min < e_max, got e_min = {e_min}, e_max = {e_max}")
    })?;
    require(steps >= 1, || "steps must be at least 1".into())?;
    let energies = linspace(e_min, e_max, steps);
    let ks: Vec<f64> = energies.iter().map(|e| (e * spec.k2_per_energy()).sqrt()).collect();
    let deltas = phase_shift_scan(l, &ks, spec).map_err(core_error)?;
    let mut table = Table::new(&["E", "Re(S)", "Im(S)", "|S|", "delta_l"]);
    for ((e, k), d) in energies.iter().zip(&ks).zip(&deltas) {
        let s = s_matrix(l, Complex64::new(*k, 0.0), spec).map_err(core_error)?;
        table.push(vec![
            Cell::Num(*e),
            Cell::Num(s.re),
            Cell::Num(s.im),
            Cell::Num(s.norm()),
            Cell::Num(*d),
        ]);
    }
    Ok(table)
}

fn pick_pole(l: u32, spec: &BarrierSpec, rect: &RectArgs, index: usize) -> Result<ResonancePole, CliError> {
    let poles = find_poles(l, &rect.rect()?, spec, index + 1).map_err(core_error)?;
    let n = poles.len();
    poles
        .into_iter()
        .nth(index)
        .ok_or_else(|| CliError::Usage(format!("pole index {index} out of range: {n} poles in the rectangle")))
}

fn wavefunction(
    l: u32,
    spec: &BarrierSpec,
    pole: Option<usize>,
    energy: Option<f64>,
    r_max: f64,
    points: usize,
    rect: &RectArgs,
) -> Result<Table, CliError> {
    require(r_max > 0.0 && r_max.is_finite(), || {
        format!("r_max = {r_max} must be positive")
    })?;
    require(points >= 2, || "need at least 2 points".into())?;
    let mut table = Table::new(&["r", "Re", "Im", "|·|²"]);
    let f = match (pole, energy) {
        (Some(i), _) => {
            let p = pick_pole(l, spec, rect, i)?;
            *GamowState::decaying(&p, spec).map_err(core_error)?.radial()
        }
        (None, Some(e)) => {
            require(e > 0.0 && e.is_finite(), || format!("energy {e} must be positive"))?;
            let k = Complex64::new((e * spec.k2_per_energy()).sqrt(), 0.0);
            RadialFunction::regular(l, k, spec).map_err(core_error)?
        }
        (None, None) => return Err(CliError::Usage("give --pole or --energy".into())),
    };
    for r in linspace(0.0, r_max, points) {
        let v = f.value(r).map_err(core_error)?;
        table.push(vec![
            Cell::Num(r),
            Cell::Num(v.re),
            Cell::Num(v.im),
            Cell::Num(v.norm_sqr()),
        ]);
    }
    Ok(table)
}

#[allow(clippy::too_many_arguments)]
fn decay(
    l: u32,
    spec: &BarrierSpec,
    pole: usize,
    r0: f64,
    dr0: f64,
    t_min: f64,
    t_max: Option<f64>,
    steps: usize,
    rect: &RectArgs,
) -> Result<Table, CliError> {
    require(r0 > spec.b && r0.is_finite(), || {
        format!(
            "detector radius r0 = {r0} must lie outside the barrier (b = {})",
            spec.b
        )
    })?;
    require(dr0 > 0.0 && dr0.is_finite(), || format!("dr0 = {dr0} must be positive"))?;
    require(steps >= 1, || "steps must be at least 1".into())?;
    let p = pick_pole(l, spec, rect, pole)?;
    let state = GamowState::decaying(&p, spec).map_err(core_error)?;
    let v = emission_speed(&p, spec);
    let t_max = t_max.unwrap_or(r0 / v + 10.0 * spec.hbar / p.gamma);
    require(t_max > t_min && t_max.is_finite(), || {
        format!("need t_min < t_max, got {t_min}, {t_max}")
    })?;

    let mut table = Table::new(&["t", "P_exact", "P_small_shell", "causal_zero"]);
    eprintln!(
        "pole k = {} {:+}i, Gamma = {}, v = {}, r0/v = {}",
        p.k_d.re,
        p.k_d.im,
        p.gamma,
        v,
        r0 / v
    );
    for t in linspace(t_min, t_max, steps) {
        let exact = decay_probability(&state, spec, r0, dr0, t, ShellMode::ExactShell).map_err(core_error)?;
        let small = decay_probability(&state, spec, r0, dr0, t, ShellMode::SmallShell).map_err(core_error)?;
        table.push(vec![
            Cell::Num(t),
            Cell::Num(exact.probability),
            Cell::Num(small.probability),
            Cell::Flag(exact.causal_zero),
        ]);
    }
    Ok(table)
}

fn green(l: u32, spec: &BarrierSpec, k: Complex64, rprime: f64, r_max: f64, points: usize) -> Result<Table, CliError> {
    require(rprime >= 0.0 && rprime.is_finite(), || {
        format!("rprime = {rprime} must be non-negative")
    })?;
    require(r_max > 0.0 && r_max.is_finite(), || {
        format!("r_max = {r_max} must be positive")
    })?;
    require(points >= 2, || "need at least 2 points".into())?;
    let g0 = green_function(l, k, spec, rprime, rprime);
    if let Err(Error::PoleEvaluation { .. }) = g0 {
        return Err(CliError::Failure(format!(
            "k = {k} is a pole of G; use the residue instead (see the poles command)"
        )));
    }
    g0.map_err(core_error)?;
    let w = wronskian(l, k, spec, rprime).map_err(core_error)?;
    let denom = 2.0 * Complex64::i() * k * f_l2(l, k, spec).map_err(core_error)?;
    let mut table = Table::new(&["r", "Re(G)", "Im(G)"]);
    table.comments.push(format!("W = {:.16e} {:+.16e}i", w.re, w.im));
    table
        .comments
        .push(format!("2ikF2 = {:.16e} {:+.16e}i", denom.re, denom.im));
    let ratio = w / denom;
    table
        .comments
        .push(format!("W/(2ikF2) = {:.16e} {:+.16e}i", ratio.re, ratio.im));
    for r in linspace(0.0, r_max, points) {
        let g = green_function(l, k, spec, r, rprime).map_err(core_error)?;
        table.push(vec![Cell::Num(r), Cell::Num(g.re), Cell::Num(g.im)]);
    }
    Ok(table)
}

fn verify(cli: &Cli, spec: &BarrierSpec, rect: &ComplexRect) -> Result<ExitCode, CliError> {
    let report = run_suite(spec, cli.l, rect).map_err(core_error)?;
    match cli.format {
        Format::Json => {
            let value = serde_json::to_value(&report).map_err(CliError::failure)?;
            emit_json(&value, cli.out.as_deref())?;
        }
        Format::Csv => write_with(cli.out.as_deref(), |w| {
            writeln!(w, "# l = {}, poles found: {}", report.l, report.poles_found)?;
            for c in &report.checks {
                let verdict = match (c.informational, c.passed) {
                    (true, true) => "INFO holds",
                    (true, false) => "INFO fails",
                    (false, true) => "PASS",
                    (false, false) => "FAIL",
                };
                if c.informational {
                    writeln!(w, "{verdict}: {}", c.name)?;
                } else {
                    writeln!(
                        w,
                        "{verdict}: {} (measured {:.3e}, tolerance {:.0e})",
                        c.name, c.measured, c.tolerance
                    )?;
                }
            }
            Ok(())
        })?,
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

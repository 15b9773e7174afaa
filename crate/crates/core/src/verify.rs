//! Invariant suite run against a single barrier configuration.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::gamow::{decay_probability, emission_speed, verify_outgoing_condition, GamowState, ShellMode};
use crate::green::{derivative_jump, green_residue_with, wronskian};
use crate::model::BarrierSpec;
use crate::numerics::ComplexRect;
use crate::resonances::{compare_methods, pole_pair, SearchOptions};
use crate::smatrix::{f_l2, s_matrix};
use crate::solutions::{coefficients, coefficients_closed_form, s_wave_coefficients};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Reported but not counted towards the verdict.
    pub informational: bool,
}

impl Check {
    fn new(name: &'static str, measured: f64, tolerance: f64) -> Self {
        Self {
            name,
            measured,
            tolerance,
            passed: measured <= tolerance,
            informational: false,
        }
    }

    fn info(name: &'static str, measured: f64, holds: bool) -> Self {
        Self {
            name,
            measured,
            tolerance: f64::NAN,
            passed: holds,
            informational: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub l: u32,
    pub poles_found: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.informational || c.passed)
    }
}

/// Deterministic, well-spread sample points in `rect` (additive recurrence).
fn sample_points(rect: &ComplexRect, n: usize) -> Vec<Complex64> {
    let (g1, g2) = (0.754_877_666_246_692_7, 0.569_840_290_998_053_2);
    (1..=n)
        .map(|i| {
            let u = (0.5 + g1 * i as f64).fract();
            let v = (0.5 + g2 * i as f64).fract();
            Complex64::new(rect.re_min + u * rect.width(), rect.im_min + v * rect.height())
        })
        .collect()
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter()
        .fold(0.0, |m, x| if x.is_nan() || m.is_nan() { f64::NAN } else { m.max(x) })
}

/// Runs every invariant for partial wave `l`, searching for poles in `rect`.
pub fn run_suite(spec: &BarrierSpec, l: u32, rect: &ComplexRect) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let k_max = rect.re_max.max(1.0);

    let unitarity = max_of((0..200).map(|i| {
        let k = 0.05 + (k_max - 0.05) * i as f64 / 199.0;
        s_matrix(l, Complex64::new(k, 0.0), spec).map_or(f64::NAN, |s| (s.norm() - 1.0).abs())
    }));
    checks.push(Check::new("S-matrix unitarity on the real axis", unitarity, 1e-12));

    let free = spec.with_v0(1e-12);
    let free_dev = max_of(
        [0.5, 1.5, 3.0].map(|k| s_matrix(l, Complex64::new(k, 0.0), &free).map_or(f64::NAN, |s| (s - 1.0).norm())),
    );
    checks.push(Check::new("free limit S = 1", free_dev, 1e-9));

    let sample_rect = ComplexRect::new(0.2, k_max, -1.0, 1.0)?;
    let samples = sample_points(&sample_rect, 20);

    let wr = max_of(samples.iter().flat_map(|&k| {
        [0.5 * spec.a, 0.5 * (spec.a + spec.b), 2.0 * spec.b].map(|r| {
            match (wronskian(l, k, spec, r), f_l2(l, k, spec)) {
                (Ok(w), Ok(f2)) => (w / (2.0 * Complex64::i() * k * f2) - 1.0).norm(),
                _ => f64::NAN,
            }
        })
    }));
    checks.push(Check::new("Wronskian equals 2ikF2", wr, 1e-10));

    let closed =
        max_of(samples.iter().map(
            |&k| match (coefficients(l, k, spec), coefficients_closed_form(l, k, spec)) {
                (Ok(a), Ok(b)) => {
                    let scale = a.f_l1.norm().max(a.f_l2.norm()).max(1.0);
                    ((a.f_l1 - b.f_l1).norm() + (a.f_l2 - b.f_l2).norm()) / scale
                }
                _ => f64::NAN,
            },
        ));
    checks.push(Check::new("closed-form coefficients match linear solve", closed, 1e-10));

    let s_wave = max_of(
        samples
            .iter()
            .map(|&k| match (coefficients(0, k, spec), s_wave_coefficients(k, spec)) {
                (Ok(a), Ok(b)) => {
                    let scale = a.f_l1.norm().max(a.f_l2.norm()).max(1.0);
                    [
                        a.alpha_l2 - b.alpha_l2,
                        a.beta_l2 - b.beta_l2,
                        a.f_l1 - b.f_l1,
                        a.f_l2 - b.f_l2,
                    ]
                    .iter()
                    .map(|d| d.norm() / scale)
                    .fold(0.0, f64::max)
                }
                _ => f64::NAN,
            }),
    );
    checks.push(Check::new("s-wave reduction of general coefficients", s_wave, 1e-12));

    let report = compare_methods(l, rect, spec, &SearchOptions::default())?;
    checks.push(Check::new("three-method pole agreement", report.max_distance, 1e-9));
    let poles = &report.poles;

    let mirror = max_of(poles.iter().map(|p| {
        pole_pair(p, spec).map_or(f64::INFINITY, |_| {
            f_l2(l, -p.k_d.conj(), spec).map_or(f64::NAN, |f| f.norm())
        })
    }));
    checks.push(Check::new("mirror pole -conj(k_d) is a zero of F2", mirror, 1e-9));

    let nearest = |i: usize| {
        poles
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| (q.k_d - poles[i].k_d).norm())
            .fold(f64::INFINITY, f64::min)
    };
    let green_res = max_of(poles.iter().enumerate().take(3).map(|(i, p)| {
        green_residue_with(p, spec, 0.5 * spec.a, 1.5 * spec.b, nearest(i))
            .map_or(f64::INFINITY, |g| g.relative_mismatch)
    }));
    checks.push(Check::new("Green residue matches contour integral", green_res, 1e-6));

    let mut outgoing = 0.0f64;
    let mut slope = 0.0f64;
    for p in poles {
        let state = GamowState::decaying(p, spec)?;
        let rep = verify_outgoing_condition(&state, spec)?;
        let bound = if l == 0 { 1e-10 } else { 1.0 };
        let scaled = if l == 0 {
            rep.max()
        } else {
            max_of(
                rep.radii
                    .iter()
                    .zip(rep.residuals)
                    .map(|(r, res)| res * (p.k_d.norm() * r).powi(2) / (l * (l + 1)) as f64),
            )
        };
        outgoing = outgoing.max(scaled / bound);

        let r0 = 2.0 * spec.b;
        let t0 = r0 / emission_speed(p, spec);
        let ts: Vec<f64> = (1..=50).map(|i| t0 + i as f64 * 0.05 * spec.hbar / p.gamma).collect();
        let logs: Vec<f64> = ts
            .iter()
            .map(|&t| {
                decay_probability(&state, spec, r0, 0.1, t, ShellMode::ExactShell)
                    .map_or(f64::NAN, |o| o.probability.ln())
            })
            .collect();
        let fitted = regression_slope(&ts, &logs);
        let expected = -p.gamma / spec.hbar;
        slope = slope.max(((fitted - expected) / expected).abs());
    }
    checks.push(Check::new("Gamow states are purely outgoing", outgoing, 1.0));
    checks.push(Check::new("decay-law slope equals -Gamma/hbar", slope, 1e-10));

    let jump_k = Complex64::new(0.5 * (rect.re_min + rect.re_max), 0.0);
    let jump = derivative_jump(l, jump_k, spec, 0.5 * (spec.a + spec.b))
        .map_or(f64::NAN, |j| (j / spec.k2_per_energy() - 1.0).norm());
    checks.push(Check::new("Green derivative jump equals 2m/hbar^2", jump, 1e-6));

    let increasing = poles.windows(2).all(|w| w[1].gamma > w[0].gamma);
    checks.push(Check::info(
        "widths increase with resonance energy",
        poles.len() as f64,
        increasing,
    ));

    Ok(VerifyReport {
        l,
        poles_found: poles.len(),
        checks,
    })
}

/// Least-squares slope of `y` against `x`.
pub fn regression_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_rect() -> ComplexRect {
        ComplexRect::new(0.1, 6.0, -2.0, 0.0).unwrap()
    }

    #[test]
    fn reference_barrier_passes() {
        let spec = BarrierSpec::reference();
        let report = run_suite(&spec, 0, &reference_rect()).unwrap();
        for c in &report.checks {
            assert!(c.informational || c.passed, "{}: {}", c.name, c.measured);
        }
        assert!(report.poles_found >= 3);
    }

    #[test]
    fn no_barrier_has_no_poles() {
        let spec = BarrierSpec::with_default_units(0.0, 1.0, 2.0).unwrap();
        let report = run_suite(&spec, 0, &reference_rect()).unwrap();
        assert_eq!(report.poles_found, 0);
        for c in &report.checks {
            assert!(c.informational || c.passed, "{}: {}", c.name, c.measured);
        }
    }

    #[test]
    fn slope_of_a_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = x.map(|t| 2.0 - 0.5 * t);
        assert!((regression_slope(&x, &y) + 0.5).abs() < 1e-15);
    }
}

//! Acceptance criteria on the reference barrier (V₀ = 8, a = 1, b = 2,
//! ħ = 1, m = 1/2). Each test prints one PASS/FAIL line.

mod common;

use std::time::{Duration, Instant};

use common::*;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use resonance_core::gamow::{decay_probability, emission_speed, peak_probability, GamowState, ShellMode};
use resonance_core::green::{derivative_jump, green_residue_with, wronskian};
use resonance_core::numerics::{count_zeros, ComplexRect};
use resonance_core::resonances::{find_poles_with, SearchOptions};
use resonance_core::smatrix::{f_l2, s_matrix};
use resonance_core::solutions::{coefficients, s_wave_coefficients, RadialFunction};
use resonance_core::verify::regression_slope;
use resonance_core::{pole_pair, three_method_agreement, BarrierSpec, ResonancePole};

fn report(n: u32, name: &str, measured: f64, tolerance: f64, elapsed: Duration, limit: Duration) {
    let ok = measured <= tolerance && elapsed < limit;
    println!(
        "criterion {n:>2} {}: {name}: measured {measured:.3e} (tol {tolerance:.0e}), {:.3} s (limit {} s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    assert!(measured <= tolerance, "criterion {n}: {measured:e} > {tolerance:e}");
    assert!(elapsed < limit, "criterion {n}: took {elapsed:?}");
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn reference_rect() -> ComplexRect {
    ComplexRect::new(0.1, 6.0, -2.0, 0.0).unwrap()
}

fn first_poles(n: usize) -> Vec<ResonancePole> {
    let opts = SearchOptions {
        max_poles: n,
        ..SearchOptions::default()
    };
    find_poles_with(0, &reference_rect(), &BarrierSpec::reference(), &opts)
        .unwrap()
        .poles
}

#[test]
fn criterion_01_three_method_equivalence() {
    let spec = BarrierSpec::reference();
    let start = Instant::now();
    let rep = three_method_agreement(0, &reference_rect(), &spec).unwrap();
    let elapsed = start.elapsed();
    assert!(rep.poles.len() >= 3, "only {} poles", rep.poles.len());
    // pairwise, not scaled by 1 + |k|
    let mut worst: f64 = 0.0;
    for p in &rep.poles {
        for roots in [&rep.determinant_roots, &rep.green_roots] {
            let d = roots.iter().map(|&w| (w - p.k_d).norm()).fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
    }
    for (d, g) in rep.determinant_roots.iter().zip(&rep.green_roots) {
        worst = worst.max((d - g).norm());
    }
    report(1, "three-method pole equivalence", worst, 1e-9, elapsed, secs(10));
}

#[test]
fn criterion_02_unitarity() {
    let spec = BarrierSpec::reference();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for l in 0..3 {
        for i in 0..200 {
            let k = 0.05 + 0.04 * i as f64;
            let s = s_matrix(l, c(k, 0.0), &spec).unwrap();
            worst = worst.max((s.norm() - 1.0).abs());
        }
    }
    report(2, "S-matrix unitarity", worst, 1e-12, start.elapsed(), secs(1));
}

#[test]
fn criterion_03_free_limit() {
    let spec = BarrierSpec::reference().with_v0(1e-12);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for l in 0..3 {
        for i in 0..50 {
            let k = 0.1 + 0.15 * i as f64;
            worst = worst.max((s_matrix(l, c(k, 0.0), &spec).unwrap() - 1.0).norm());
        }
    }
    report(3, "free limit", worst, 1e-9, start.elapsed(), secs(1));
}

#[test]
fn criterion_04_wronskian_identity() {
    let spec = BarrierSpec::reference();
    let mut rng = StdRng::seed_from_u64(4);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let k = c(rng.gen_range(0.2..7.0), rng.gen_range(-1.0..1.0));
        for l in 0..3 {
            let f2 = f_l2(l, k, &spec).unwrap();
            for r in [0.5 * spec.a, 0.5 * (spec.a + spec.b), 2.0 * spec.b] {
                let w = wronskian(l, k, &spec, r).unwrap();
                worst = worst.max((w / (2.0 * I * k * f2) - 1.0).norm());
            }
        }
    }
    report(4, "Wronskian identity", worst, 1e-10, start.elapsed(), secs(1));
}

#[test]
fn criterion_05_mirror_symmetry() {
    let spec = BarrierSpec::reference();
    let poles = first_poles(16);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for p in &poles {
        let g = pole_pair(p, &spec).unwrap();
        worst = worst.max(f_l2(0, g.k_g, &spec).unwrap().norm());
    }
    report(5, "pole mirror symmetry", worst, 1e-9, start.elapsed(), secs(1));
}

#[test]
fn criterion_06_residues() {
    let spec = BarrierSpec::reference();
    let start = Instant::now();
    let poles = first_poles(3);
    assert_eq!(poles.len(), 3);
    let mut worst: f64 = 0.0;
    for (i, p) in poles.iter().enumerate() {
        let nearest = poles
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| (q.k_d - p.k_d).norm())
            .fold(f64::INFINITY, f64::min);
        let s = resonance_core::smatrix::s_residue(0, p.k_d, &spec, nearest).unwrap();
        worst = worst.max(s.relative_mismatch);
        for (r, rp) in [(0.5, 1.5 * spec.b), (1.5, 2.5)] {
            let g = green_residue_with(p, &spec, r, rp, nearest).unwrap();
            worst = worst.max(g.relative_mismatch);
        }
    }
    report(6, "residue cross-validation", worst, 1e-6, start.elapsed(), secs(5));
}

#[test]
fn criterion_07_decay_law() {
    let spec = BarrierSpec::reference();
    let pole = first_poles(1).remove(0);
    let start = Instant::now();
    let state = GamowState::decaying(&pole, &spec).unwrap();
    let (r0, dr0) = (3.0 * spec.b, 0.2);
    let t0 = r0 / emission_speed(&pole, &spec);
    let mut worst: f64 = 0.0;
    for mode in [ShellMode::ExactShell, ShellMode::SmallShell] {
        let ts: Vec<f64> = (1..=50).map(|i| t0 + 0.1 * i as f64 / pole.gamma).collect();
        let ps: Vec<f64> = ts
            .iter()
            .map(|&t| decay_probability(&state, &spec, r0, dr0, t, mode).unwrap().probability)
            .collect();
        let logs: Vec<f64> = ps.iter().map(|p| p.ln()).collect();
        let slope = regression_slope(&ts, &logs);
        let expected = -pole.gamma / spec.hbar;
        worst = worst.max(((slope - expected) / expected).abs());

        for t in [0.0, 0.5 * t0, t0] {
            let obs = decay_probability(&state, &spec, r0, dr0, t, mode).unwrap();
            assert!(obs.causal_zero && obs.probability == 0.0);
        }
        let peak = peak_probability(&state, &spec, r0, dr0, mode).unwrap();
        assert!(ps.iter().all(|&p| p < peak));
        assert!(ps.windows(2).all(|w| w[1] < w[0]));
        let right_limit = decay_probability(&state, &spec, r0, dr0, t0 * (1.0 + 1e-13), mode).unwrap();
        assert!((right_limit.probability / peak - 1.0).abs() < 1e-10);
    }
    report(7, "exponential decay law", worst, 1e-10, start.elapsed(), secs(1));
}

#[test]
fn criterion_08_ode_oracle() {
    let spec = BarrierSpec::reference();
    let mut rng = StdRng::seed_from_u64(8);
    let ks: Vec<Complex64> = (0..10)
        .map(|i| {
            let re = rng.gen_range(0.3..7.0);
            let im = if i < 5 { 0.0 } else { rng.gen_range(-1.0..1.0) };
            c(re, im)
        })
        .collect();
    let rs: Vec<f64> = (0..=60).map(|i| 3.0 * spec.b * i as f64 / 60.0).collect();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for &k in &ks {
        for l in 0..3 {
            let chi = RadialFunction::regular(l, k, &spec).unwrap();
            let lib: Vec<Complex64> = rs.iter().map(|&r| chi.value(r).unwrap()).collect();
            worst = worst.max(grid_relative_error(&lib, &chi_by_ode(l, k, &spec, &rs)));

            // ψ is singular at the origin for l > 0
            let rs_psi = &rs[1..];
            let psi = RadialFunction::outgoing(l, k, &spec).unwrap();
            let lib: Vec<Complex64> = rs_psi.iter().map(|&r| psi.value(r).unwrap()).collect();
            let ode = psi_by_ode(l, k, &spec, rs_psi, 3.0 * spec.b);
            worst = worst.max(grid_relative_error(&lib, &ode));
        }
    }
    report(
        8,
        "closed forms against ODE integration",
        worst,
        1e-8,
        start.elapsed(),
        secs(10),
    );
}

#[test]
fn criterion_09_s_wave_reduction() {
    let spec = BarrierSpec::reference();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let k = c(0.2 + 0.15 * i as f64, -1.0 + 0.04 * i as f64);
        let general = coefficients(0, k, &spec).unwrap();
        let closed = s_wave_coefficients(k, &spec).unwrap();
        let scale = general.f_l1.norm().max(general.f_l2.norm()).max(1.0);
        for (a, b) in [
            (general.alpha_l2, closed.alpha_l2),
            (general.beta_l2, closed.beta_l2),
            (general.f_l1, closed.f_l1),
            (general.f_l2, closed.f_l2),
        ] {
            worst = worst.max((a - b).norm() / scale);
        }
    }
    report(
        9,
        "l = 0 reduction of general coefficients",
        worst,
        1e-12,
        start.elapsed(),
        secs(1),
    );
}

#[test]
fn criterion_10_completeness() {
    let spec = BarrierSpec::reference();
    let start = Instant::now();
    let base = find_poles_with(0, &reference_rect(), &spec, &SearchOptions::default()).unwrap();
    let dense = SearchOptions {
        grid_re: 80,
        grid_im: 40,
        ..SearchOptions::default()
    };
    let doubled = find_poles_with(0, &reference_rect(), &spec, &dense).unwrap();
    let f = |k: Complex64| f_l2(0, k, &spec).unwrap();
    let count = count_zeros(f, &base.rect, 4096).unwrap();
    assert_eq!(count, base.poles.len(), "argument principle count");
    assert_eq!(doubled.poles.len(), base.poles.len());
    let shift = base
        .poles
        .iter()
        .zip(&doubled.poles)
        .map(|(a, b)| (a.k_d - b.k_d).norm())
        .fold(0.0, f64::max);
    report(10, "completeness guard", shift, 1e-9, start.elapsed(), secs(10));
}

#[test]
fn criterion_11_pole_structure() {
    let spec = BarrierSpec::reference();
    let start = Instant::now();
    let rect = ComplexRect::new(0.1, 7.5, -2.0, 0.0).unwrap();
    let mut poles = find_poles_with(0, &rect, &spec, &SearchOptions::default())
        .unwrap()
        .poles;
    poles.sort_by(|a, b| a.e_r.total_cmp(&b.e_r));
    assert!(poles.len() >= 4, "only {} poles", poles.len());
    let first = &poles[..4];
    let violations = first.windows(2).filter(|w| w[1].gamma <= w[0].gamma).count();
    let narrowest = first.iter().min_by(|a, b| a.gamma.total_cmp(&b.gamma)).unwrap();
    let below = if narrowest.e_r < spec.v0 { 0.0 } else { 1.0 };
    report(
        11,
        "widths increase with energy, narrowest below V0",
        violations as f64 + below,
        0.0,
        start.elapsed(),
        secs(10),
    );
}

#[test]
fn criterion_12_green_jump() {
    let spec = BarrierSpec::reference();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (l, k, rp) in [(0, c(2.0, 0.0), 0.6), (1, c(3.1, -0.3), 1.5), (2, c(4.4, 0.2), 3.0)] {
        let jump = derivative_jump(l, k, &spec, rp).unwrap();
        worst = worst.max((jump / spec.k2_per_energy() - 1.0).norm());
    }
    report(12, "Green delta jump", worst, 1e-6, start.elapsed(), secs(1));
}

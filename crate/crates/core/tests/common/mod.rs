//! Test-only oracles that share no code with the library: direct integration
//! of the radial equation and Riccati functions by recurrence.

#![allow(dead_code)]

use num_complex::Complex64;
use resonance_core::BarrierSpec;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `ĥ⁺_l(z)` and its derivative by upward recurrence from `l = 0, 1`.
pub fn hankel_plus(l: u32, z: Complex64) -> (Complex64, Complex64) {
    let e = (I * z).exp();
    // u_{-1} = i e^{iz} for the outgoing Riccati–Hankel family
    let mut prev = I * e;
    let mut cur = e;
    for n in 0..l {
        let next = (2 * n + 1) as f64 / z * cur - prev;
        prev = cur;
        cur = next;
    }
    (cur, prev - l as f64 / z * cur)
}

/// `ĥ⁻_l(z) = (-1)^l ĥ⁺_l(-z)`, derivative by the chain rule.
pub fn hankel_minus(l: u32, z: Complex64) -> (Complex64, Complex64) {
    let (h, dh) = hankel_plus(l, -z);
    let s = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
    (s * h, -s * dh)
}

fn double_factorial(n: u32) -> f64 {
    (1..=n).rev().step_by(2).map(f64::from).product()
}

/// Regular free solution `ĵ_l(kr)` and `d/dr` from its power series in `r`.
pub fn frobenius(l: u32, k: Complex64, r: f64) -> (Complex64, Complex64) {
    let mut u = c(0.0, 0.0);
    let mut du = c(0.0, 0.0);
    let mut fact = 1.0;
    for n in 0..30u32 {
        if n > 0 {
            fact *= n as f64;
        }
        let p = l + 1 + 2 * n;
        let coeff = k.powu(p) * (-0.5f64).powi(n as i32) / (fact * double_factorial(2 * l + 2 * n + 1));
        u += coeff * r.powi(p as i32);
        du += coeff * p as f64 * r.powi(p as i32 - 1);
    }
    (u, du)
}

/// `(u, u')' = (u', (l(l+1)/r² + w - k²) u)` with `w = 2mV/ħ²` constant.
fn rhs(l: u32, k2: Complex64, w: f64, r: f64, y: [Complex64; 2]) -> [Complex64; 2] {
    let ll = (l * (l + 1)) as f64;
    [y[1], (ll / (r * r) + w - k2) * y[0]]
}

fn rk4(l: u32, k2: Complex64, w: f64, from: f64, to: f64, n: usize, mut y: [Complex64; 2]) -> [Complex64; 2] {
    let h = (to - from) / n as f64;
    let add = |y: [Complex64; 2], d: [Complex64; 2], s: f64| [y[0] + d[0] * s, y[1] + d[1] * s];
    for i in 0..n {
        let r = from + i as f64 * h;
        let k1 = rhs(l, k2, w, r, y);
        let k2_ = rhs(l, k2, w, r + 0.5 * h, add(y, k1, 0.5 * h));
        let k3 = rhs(l, k2, w, r + 0.5 * h, add(y, k2_, 0.5 * h));
        let k4 = rhs(l, k2, w, r + h, add(y, k3, h));
        for j in 0..2 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2_[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    y
}

/// One smooth segment: classical RK4 at step `h` and `h/2`, Richardson-combined.
fn segment(l: u32, k: Complex64, w: f64, from: f64, to: f64, y: [Complex64; 2]) -> [Complex64; 2] {
    let rate = k.norm() + w.abs().sqrt() + ((l * (l + 1)) as f64).sqrt() / from.min(to) + 1.0;
    let n = ((to - from).abs() * rate / 2e-3).ceil().max(1.0) as usize;
    let coarse = rk4(l, k * k, w, from, to, n, y);
    let fine = rk4(l, k * k, w, from, to, 2 * n, y);
    [0, 1].map(|j| (16.0 * fine[j] - coarse[j]) / 15.0)
}

/// Integrates `u'' = (l(l+1)/r² + 2mV/ħ² - k²) u` from `(r0, u, u')` through
/// `targets` (monotone, same direction), restarting at every interface.
pub fn integrate(
    l: u32,
    k: Complex64,
    spec: &BarrierSpec,
    r0: f64,
    start: (Complex64, Complex64),
    targets: &[f64],
) -> Vec<(Complex64, Complex64)> {
    let mut y = [start.0, start.1];
    let mut r = r0;
    let mut out = Vec::with_capacity(targets.len());
    for &t in targets {
        let mut stops: Vec<f64> = [spec.a, spec.b]
            .into_iter()
            .filter(|&x| (x - r) * (t - x) > 0.0)
            .collect();
        if t < r {
            stops.reverse();
        }
        stops.push(t);
        for s in stops {
            if s == r {
                continue;
            }
            let w = spec.k2_per_energy() * spec.potential(0.5 * (r + s));
            y = segment(l, k, w, r, s, y);
            r = s;
        }
        out.push((y[0], y[1]));
    }
    out
}

/// Regular solution with `α_l = 1` sampled on `rs` (ascending, `≥ 0`).
pub fn chi_by_ode(l: u32, k: Complex64, spec: &BarrierSpec, rs: &[f64]) -> Vec<Complex64> {
    let r0 = 0.05 * spec.a;
    let start = frobenius(l, k, r0);
    let (near, far): (Vec<f64>, Vec<f64>) = rs.iter().partition(|&&r| r <= r0);
    let mut vals: Vec<Complex64> = near.iter().map(|&r| frobenius(l, k, r).0).collect();
    vals.extend(integrate(l, k, spec, r0, start, &far).into_iter().map(|p| p.0));
    vals
}

/// Outgoing solution, `ĥ⁺_l(kr)` beyond `b`, sampled on `rs` (ascending, `> 0`)
/// by integrating inward from `r_end ≥ max(rs)`.
pub fn psi_by_ode(l: u32, k: Complex64, spec: &BarrierSpec, rs: &[f64], r_end: f64) -> Vec<Complex64> {
    let (h, dh) = hankel_plus(l, k * r_end);
    let targets: Vec<f64> = rs.iter().rev().copied().collect();
    let mut vals: Vec<Complex64> = integrate(l, k, spec, r_end, (h, k * dh), &targets)
        .into_iter()
        .map(|p| p.0)
        .collect();
    vals.reverse();
    vals
}

/// Outer amplitudes `(F₁, F₂)` of the regular solution from shooting to `b`.
pub fn shoot_f(l: u32, k: Complex64, spec: &BarrierSpec) -> (Complex64, Complex64) {
    let r0 = 0.05 * spec.a;
    let (u, du) = integrate(l, k, spec, r0, frobenius(l, k, r0), &[spec.b])[0];
    let (hp, dhp) = hankel_plus(l, k * spec.b);
    let (hm, dhm) = hankel_minus(l, k * spec.b);
    let det = hp * k * dhm - k * dhp * hm;
    ((u * k * dhm - du * hm) / det, (hp * du - k * dhp * u) / det)
}

/// `max |a - b| / max |b|`
pub fn grid_relative_error(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

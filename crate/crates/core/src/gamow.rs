//! Gamow states at the poles, their incoming/outgoing components outside the
//! barrier, and the exponential decay of the shell-detection probability.
//!
//! `Im k` is stored signed (negative for both poles); the closed forms below
//! use its magnitude `κ = |Im k|`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{energy_from_k, BarrierSpec, ComplexEnergy, ComplexWaveNumber};
use crate::numerics::{riccati_hankel, HankelSign};
use crate::resonances::{GrowingPole, ResonancePole, CERTIFICATION_TOL};
use crate::solutions::{coefficients, CoefficientSet, RadialFunction};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GamowKind {
    /// `z = E_R - iΓ/2`, `k` in the fourth quadrant
    Decaying,
    /// `z* = E_R + iΓ/2`, `k` in the third quadrant
    Growing,
}

/// Eigenfunction of the radial Hamiltonian with complex energy, obeying the
/// purely outgoing condition `F_l2 = 0`. Not normalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GamowState {
    pub l: u32,
    pub kind: GamowKind,
    pub k: Complex64,
    pub z: ComplexEnergy,
    /// Coefficients at `k`, with `f_l2` set to zero.
    pub coeffs: CoefficientSet,
    /// `|F_l2(k)|` before it was zeroed.
    pub f_l2_residual: f64,
    radial: RadialFunction,
}

impl GamowState {
    pub fn decaying(pole: &ResonancePole, spec: &BarrierSpec) -> Result<Self> {
        Self::at(pole.l, pole.k_d, GamowKind::Decaying, spec)
    }

    pub fn growing(pole: &GrowingPole, spec: &BarrierSpec) -> Result<Self> {
        Self::at(pole.l, pole.k_g, GamowKind::Growing, spec)
    }

    fn at(l: u32, k: Complex64, kind: GamowKind, spec: &BarrierSpec) -> Result<Self> {
        let mut coeffs = coefficients(l, k, spec)?;
        let f_l2_residual = coeffs.f_l2.norm();
        if !(f_l2_residual <= CERTIFICATION_TOL) {
            return Err(Error::Certification {
                k,
                method: "smatrix",
                residual: f_l2_residual,
            });
        }
        coeffs.f_l2 = Complex64::new(0.0, 0.0);
        Ok(Self {
            l,
            kind,
            k,
            z: energy_from_k(ComplexWaveNumber(k), spec),
            coeffs,
            f_l2_residual,
            radial: RadialFunction::purely_outgoing(&coeffs, spec),
        })
    }

    /// `χ(r; z)`, with only the `F_l1 ĥ⁺_l(kr)` term beyond `b`.
    pub fn wavefunction(&self, r: f64) -> Result<Complex64> {
        self.radial.value(r)
    }

    pub fn value_and_derivative(&self, r: f64) -> Result<(Complex64, Complex64)> {
        self.radial.value_and_derivative(r)
    }

    pub fn radial(&self) -> &RadialFunction {
        &self.radial
    }
}

pub fn gamow_wavefunction(state: &GamowState, r: f64) -> Result<Complex64> {
    state.wavefunction(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutgoingReport {
    pub radii: [f64; 3],
    /// `|χ' - ikχ| / |ikχ|` at each radius.
    pub residuals: [f64; 3],
}

impl OutgoingReport {
    pub fn max(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Checks `χ' - ikχ → 0` at `1.5b`, `3b`, `10b`. Exact for `l = 0`; decays
/// like `1/(|k|r)²` for higher `l`.
pub fn verify_outgoing_condition(state: &GamowState, spec: &BarrierSpec) -> Result<OutgoingReport> {
    outgoing_report(state.radial(), state.k, spec)
}

/// Same check for the regular solution at an arbitrary `k`.
pub fn outgoing_residual(l: u32, k: Complex64, spec: &BarrierSpec) -> Result<OutgoingReport> {
    outgoing_report(&RadialFunction::regular(l, k, spec)?, k, spec)
}

fn outgoing_report(f: &RadialFunction, k: Complex64, spec: &BarrierSpec) -> Result<OutgoingReport> {
    let radii = [1.5 * spec.b, 3.0 * spec.b, 10.0 * spec.b];
    let mut residuals = [0.0; 3];
    for (res, &r) in residuals.iter_mut().zip(&radii) {
        let (x, dx) = f.value_and_derivative(r)?;
        *res = (dx - I * k * x).norm() / (I * k * x).norm();
    }
    Ok(OutgoingReport { radii, residuals })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Incoming,
    Outgoing,
}

/// One of the two outer solutions at a pole wave number, before the purely
/// outgoing condition removes one of them:
///
/// | kind      | incoming             | outgoing             |
/// |-----------|----------------------|----------------------|
/// | decaying  | `F₂ ĥ⁻(k_d r)`       | `F₁ ĥ⁺(k_d r)`       |
/// | growing   | `F₁ ĥ⁺(k_g r)`       | `F₂ ĥ⁻(k_g r)`       |
///
/// times `e^{-iz t/ħ}`. For `l = 0`, `ĥ^± = e^{±ikr}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComponentWave {
    pub l: u32,
    pub direction: Direction,
    pub kind: GamowKind,
    pub k: Complex64,
    pub z: Complex64,
    pub amplitude: Complex64,
    pub hbar: f64,
    pub b: f64,
}

impl ComponentWave {
    /// Amplitude taken from the unconstrained coefficients at the pole's wave
    /// number (so the forbidden component has amplitude `F₂ ≈ 0`).
    pub fn from_pole(direction: Direction, kind: GamowKind, pole: &ResonancePole, spec: &BarrierSpec) -> Result<Self> {
        let k = match kind {
            GamowKind::Decaying => pole.k_d,
            GamowKind::Growing => -pole.k_d.conj(),
        };
        let c = coefficients(pole.l, k, spec)?;
        let amplitude = match Self::sign(direction, kind) {
            HankelSign::Plus => c.f_l1,
            HankelSign::Minus => c.f_l2,
        };
        Ok(Self::with_amplitude(direction, kind, pole.l, k, amplitude, spec))
    }

    pub fn with_amplitude(
        direction: Direction,
        kind: GamowKind,
        l: u32,
        k: Complex64,
        amplitude: Complex64,
        spec: &BarrierSpec,
    ) -> Self {
        Self {
            l,
            direction,
            kind,
            k,
            z: energy_from_k(ComplexWaveNumber(k), spec).e,
            amplitude,
            hbar: spec.hbar,
            b: spec.b,
        }
    }

    fn sign(direction: Direction, kind: GamowKind) -> HankelSign {
        match (direction, kind) {
            (Direction::Outgoing, GamowKind::Decaying) | (Direction::Incoming, GamowKind::Growing) => HankelSign::Plus,
            _ => HankelSign::Minus,
        }
    }

    fn check(&self, r: f64) -> Result<()> {
        if !(r > self.b) {
            return Err(Error::Domain(format!(
                "component waves live outside the barrier, need r > {}, got {r}",
                self.b
            )));
        }
        Ok(())
    }

    fn kappa(&self) -> f64 {
        self.k.im.abs()
    }

    /// `Γ` for this wave's energy, always positive.
    pub fn gamma(&self) -> f64 {
        2.0 * self.z.im.abs()
    }

    /// `v = Γ/(2ħκ)`
    pub fn speed(&self) -> f64 {
        self.gamma() / (2.0 * self.hbar * self.kappa())
    }

    pub fn value(&self, r: f64, t: f64) -> Result<Complex64> {
        self.check(r)?;
        let h = riccati_hankel(Self::sign(self.direction, self.kind), self.l, self.k * r)?;
        Ok(self.amplitude * h * (-I * self.z * t / self.hbar).exp())
    }

    /// The closed-form density. For `l = 0`,
    /// decaying: `|F|² e^{-Γ/ħ (t ∓ r/v)}`, growing: `|F|² e^{Γ/ħ (t ± r/v)}`,
    /// upper signs for the outgoing kinds.
    pub fn density(&self, r: f64, t: f64) -> Result<f64> {
        self.check(r)?;
        let a2 = self.amplitude.norm_sqr();
        let g = self.gamma() / self.hbar;
        if self.l > 0 {
            let h = riccati_hankel(Self::sign(self.direction, self.kind), self.l, self.k * r)?;
            let time = match self.kind {
                GamowKind::Decaying => (-g * t).exp(),
                GamowKind::Growing => (g * t).exp(),
            };
            return Ok(a2 * h.norm_sqr() * time);
        }
        let v = self.speed();
        let exponent = match (self.kind, self.direction) {
            (GamowKind::Decaying, Direction::Incoming) => -g * (t + r / v),
            (GamowKind::Decaying, Direction::Outgoing) => -g * (t - r / v),
            (GamowKind::Growing, Direction::Incoming) => g * (t + r / v),
            (GamowKind::Growing, Direction::Outgoing) => g * (t - r / v),
        };
        Ok(a2 * exponent.exp())
    }
}

pub fn component_wave(
    direction: Direction,
    kind: GamowKind,
    pole: &ResonancePole,
    spec: &BarrierSpec,
    r: f64,
    t: f64,
) -> Result<Complex64> {
    ComponentWave::from_pole(direction, kind, pole, spec)?.value(r, t)
}

pub fn probability_density(
    direction: Direction,
    kind: GamowKind,
    pole: &ResonancePole,
    spec: &BarrierSpec,
    r: f64,
    t: f64,
) -> Result<f64> {
    ComponentWave::from_pole(direction, kind, pole, spec)?.density(r, t)
}

/// `v = Γ/(2ħ|Im k_d|)`. Algebraically this is `ħ Re(k_d)/m`.
pub fn emission_speed(pole: &ResonancePole, spec: &BarrierSpec) -> f64 {
    pole.gamma / (2.0 * spec.hbar * pole.k_d.im.abs())
}

/// `ħ Re(k_d)/m`, the group velocity at the resonance.
pub fn group_velocity(pole: &ResonancePole, spec: &BarrierSpec) -> f64 {
    spec.hbar * pole.k_d.re / spec.mass
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShellMode {
    /// `e^{-Γt/ħ} ∫_{r0}^{r0+Δr0} |χ|² dr`
    ExactShell,
    /// `|χ(r0)|² Δr0 e^{-Γt/ħ}`, i.e. `|F₁|² Δr0 e^{-Γ/ħ (t - r0/v)}` for `l = 0`
    SmallShell,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayObservation {
    pub r0: f64,
    pub dr0: f64,
    pub t: f64,
    pub mode: ShellMode,
    pub probability: f64,
    /// Set when `t ≤ r0/v`: nothing emitted at `t = 0` can have reached `r0`.
    pub causal_zero: bool,
}

/// Unnormalized probability of finding the decaying state in the shell
/// `[r0, r0 + dr0]` at time `t`.
pub fn decay_probability(
    state: &GamowState,
    spec: &BarrierSpec,
    r0: f64,
    dr0: f64,
    t: f64,
    mode: ShellMode,
) -> Result<DecayObservation> {
    if state.kind != GamowKind::Decaying {
        return Err(Error::Domain("decay probability needs a decaying state".into()));
    }
    if !(r0 > spec.b) || !r0.is_finite() {
        return Err(Error::Domain(format!(
            "detector radius r0 = {r0} must exceed b = {}",
            spec.b
        )));
    }
    if !(dr0 > 0.0) || !dr0.is_finite() {
        return Err(Error::Domain(format!("shell thickness dr0 = {dr0} must be positive")));
    }
    if !t.is_finite() {
        return Err(Error::Domain(format!("time t = {t} is not finite")));
    }
    let v = state_speed(state, spec);
    let causal_zero = t <= r0 / v;
    let probability = if causal_zero {
        0.0
    } else {
        shell_weight(state, spec, r0, dr0, mode)? * (-state_gamma(state) * t / spec.hbar).exp()
    };
    Ok(DecayObservation {
        r0,
        dr0,
        t,
        mode,
        probability,
        causal_zero,
    })
}

/// `lim_{t → r0/v⁺} P(t)`, the largest value the decay curve attains.
pub fn peak_probability(state: &GamowState, spec: &BarrierSpec, r0: f64, dr0: f64, mode: ShellMode) -> Result<f64> {
    let t0 = r0 / state_speed(state, spec);
    Ok(shell_weight(state, spec, r0, dr0, mode)? * (-state_gamma(state) * t0 / spec.hbar).exp())
}

fn state_gamma(state: &GamowState) -> f64 {
    state.z.width().abs()
}

fn state_speed(state: &GamowState, spec: &BarrierSpec) -> f64 {
    state_gamma(state) / (2.0 * spec.hbar * state.k.im.abs())
}

/// The `t`-independent factor of the decay probability.
fn shell_weight(state: &GamowState, spec: &BarrierSpec, r0: f64, dr0: f64, mode: ShellMode) -> Result<f64> {
    let f1 = state.coeffs.f_l1;
    let kappa = state.k.im.abs();
    match (mode, state.l) {
        (ShellMode::SmallShell, 0) => {
            let v = state_speed(state, spec);
            let g = state_gamma(state) / spec.hbar;
            Ok(f1.norm_sqr() * dr0 * (g * r0 / v).exp())
        }
        (ShellMode::SmallShell, _) => Ok(state.wavefunction(r0)?.norm_sqr() * dr0),
        (ShellMode::ExactShell, 0) => {
            let x = 2.0 * kappa;
            Ok(f1.norm_sqr() * (x * r0).exp() * (x * dr0).exp_m1() / x)
        }
        (ShellMode::ExactShell, _) => {
            let (nodes, weights) = gauss_legendre(24);
            let pieces = (dr0 * (1.0 + 2.0 * kappa + state.k.norm())).ceil().max(1.0) as usize;
            let h = dr0 / pieces as f64;
            let mut sum = 0.0;
            for p in 0..pieces {
                let mid = r0 + (p as f64 + 0.5) * h;
                for (x, w) in nodes.iter().zip(&weights) {
                    sum += w * state.wavefunction(mid + 0.5 * h * x)?.norm_sqr();
                }
            }
            Ok(0.5 * h * sum)
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` (Golub–Welsch).
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i.abs_diff(j) == 1 {
            let m = i.max(j) as f64;
            m / (4.0 * m * m - 1.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], 2.0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

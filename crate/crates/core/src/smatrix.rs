//! Partial-wave S-matrix `S_l(k) = -F_l1(k) / F_l2(k)`, phase shifts and
//! pole residues.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::BarrierSpec;
use crate::numerics::{central_derivative, contour_residue, derivative_step};
use crate::solutions::coefficients;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SMatrixValue {
    pub l: u32,
    pub k: Complex64,
    pub s: Complex64,
}

/// `|F_l2|` below this fraction of `max(1, |F_l1|)` counts as a pole.
const POLE_THRESHOLD: f64 = 1e-14;

pub fn s_matrix(l: u32, k: Complex64, spec: &BarrierSpec) -> Result<Complex64> {
    let c = coefficients(l, k, spec)?;
    if c.f_l2.norm() <= POLE_THRESHOLD * c.f_l1.norm().max(1.0) {
        return Err(Error::PoleEvaluation { k });
    }
    Ok(-c.f_l1 / c.f_l2)
}

pub fn s_matrix_value(l: u32, k: Complex64, spec: &BarrierSpec) -> Result<SMatrixValue> {
    Ok(SMatrixValue {
        l,
        k,
        s: s_matrix(l, k, spec)?,
    })
}

/// `F_l2(k)`, the denominator of the S-matrix and the resonance function.
pub fn f_l2(l: u32, k: Complex64, spec: &BarrierSpec) -> Result<Complex64> {
    Ok(coefficients(l, k, spec)?.f_l2)
}

/// `F_l2` as a total function for root finders: failures map to NaN.
pub(crate) fn f_l2_or_nan(l: u32, spec: &BarrierSpec) -> impl Fn(Complex64) -> Complex64 + '_ {
    move |k| f_l2(l, k, spec).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
}

/// `δ_l = arg(S)/2` in `(-π/2, π/2]` at a single real `k > 0`.
pub fn phase_shift(l: u32, k: f64, spec: &BarrierSpec) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("phase shift needs real k > 0, got {k}")));
    }
    Ok(s_matrix(l, Complex64::new(k, 0.0), spec)?.arg() / 2.0)
}

/// Phase shifts along an increasing k-grid, continued from `δ_l(k_0)` by
/// picking the branch of `arg S` nearest to the previous value.
pub fn phase_shift_scan(l: u32, ks: &[f64], spec: &BarrierSpec) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(ks.len());
    let mut prev_arg: Option<f64> = None;
    for &k in ks {
        let raw = 2.0 * phase_shift(l, k, spec)?;
        let arg = match prev_arg {
            None => raw,
            Some(p) => {
                let mut d = raw - p;
                d -= 2.0 * PI * (d / (2.0 * PI)).round();
                p + d
            }
        };
        out.push(arg / 2.0);
        prev_arg = Some(arg);
    }
    Ok(out)
}

/// Residues of `S_l` at a simple pole, in the k-plane and in the E-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SResidue {
    /// `-F_l1(k_d) / F_l2'(k_d)`
    pub k_plane: Complex64,
    /// `k_plane · ħ² k_d / m`
    pub e_plane: Complex64,
    /// Trapezoidal contour integral of `S` around the pole.
    pub contour_k: Complex64,
    pub relative_mismatch: f64,
}

/// Mismatch between analytic and contour residue that flags a bad pole.
pub const RESIDUE_MISMATCH_LIMIT: f64 = 1e-6;
const CONTOUR_POINTS: usize = 256;

/// Radius of the validation circle around a pole at `k_d`, given the
/// distance to the nearest other singularity.
pub fn residue_radius(k_d: Complex64, nearest_other: f64) -> f64 {
    (0.5 * k_d.im.abs())
        .min(0.1)
        .min(0.3 * nearest_other)
        .min(0.3 * k_d.norm())
}

/// `F_l2'(k)` by fourth-order central differences.
pub fn f_l2_derivative(l: u32, k: Complex64, spec: &BarrierSpec) -> Complex64 {
    central_derivative(f_l2_or_nan(l, spec), k, derivative_step(k))
}

/// Residue of `S_l` at the pole `k_d`, checked against a contour integral.
///
/// `nearest_other` is the distance to the closest other pole (use
/// `f64::INFINITY` when unknown).
pub fn s_residue(l: u32, k_d: Complex64, spec: &BarrierSpec, nearest_other: f64) -> Result<SResidue> {
    let c = coefficients(l, k_d, spec)?;
    let df2 = f_l2_derivative(l, k_d, spec);
    let k_plane = -c.f_l1 / df2;
    let e_plane = k_plane * (spec.hbar * spec.hbar * k_d / spec.mass);

    let radius = residue_radius(k_d, nearest_other);
    let s = |k: Complex64| {
        coefficients(l, k, spec)
            .map(|c| -c.f_l1 / c.f_l2)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    };
    let contour_k = contour_residue(s, k_d, radius, CONTOUR_POINTS);
    let relative_mismatch = (contour_k - k_plane).norm() / contour_k.norm();
    if !(relative_mismatch <= RESIDUE_MISMATCH_LIMIT) {
        return Err(Error::SuspiciousPole {
            k: k_d,
            mismatch: relative_mismatch,
        });
    }
    Ok(SResidue {
        k_plane,
        e_plane,
        contour_k,
        relative_mismatch,
    })
}

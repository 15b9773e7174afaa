//! Outgoing radial Green function
//! `G_l(r, r'; k) = (2m/ħ²) χ_l(r_<) ψ_l(r_>) / (2ik F_l2(k))`
//! and its residues at the resonance poles.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::BarrierSpec;
use crate::numerics::contour_residue;
use crate::resonances::ResonancePole;
use crate::smatrix::{f_l2_derivative, residue_radius, RESIDUE_MISMATCH_LIMIT};
use crate::solutions::{coefficients, RadialFunction};

const I: Complex64 = Complex64::new(0.0, 1.0);
const POLE_THRESHOLD: f64 = 1e-14;
const CONTOUR_POINTS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreenValue {
    pub l: u32,
    pub k: Complex64,
    pub r: f64,
    pub rprime: f64,
    pub g: Complex64,
}

/// `χ ψ' - χ' ψ` evaluated at `r`. Constant in `r` and equal to `2ik F_l2(k)`.
pub fn wronskian(l: u32, k: Complex64, spec: &BarrierSpec, r: f64) -> Result<Complex64> {
    let chi = RadialFunction::regular(l, k, spec)?;
    let psi = RadialFunction::outgoing(l, k, spec)?;
    let (x, dx) = chi.value_and_derivative(r)?;
    let (p, dp) = psi.value_and_derivative(r)?;
    Ok(x * dp - dx * p)
}

/// Green function with the denominator taken as `2ik F_l2(k)`.
pub fn green_function(l: u32, k: Complex64, spec: &BarrierSpec, r: f64, rprime: f64) -> Result<Complex64> {
    if !(r >= 0.0 && rprime >= 0.0) {
        return Err(Error::Domain(format!(
            "radii must be non-negative, got r = {r}, r' = {rprime}"
        )));
    }
    let c = coefficients(l, k, spec)?;
    if c.f_l2.norm() <= POLE_THRESHOLD * c.f_l1.norm().max(1.0) {
        return Err(Error::PoleEvaluation { k });
    }
    let (lo, hi) = if r <= rprime { (r, rprime) } else { (rprime, r) };
    let chi = RadialFunction::from_coefficients(&c, spec).value(lo)?;
    let psi = RadialFunction::outgoing(l, k, spec)?.value(hi)?;
    Ok(spec.k2_per_energy() * chi * psi / (2.0 * I * c.k * c.f_l2))
}

pub fn green_value(l: u32, k: Complex64, spec: &BarrierSpec, r: f64, rprime: f64) -> Result<GreenValue> {
    Ok(GreenValue {
        l,
        k,
        r,
        rprime,
        g: green_function(l, k, spec, r, rprime)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreenResidue {
    /// `(2m/ħ²) χ(r_<) χ(r_>) / (2ik_d F_l1(k_d) F_l2'(k_d))`
    pub analytic: Complex64,
    pub contour: Complex64,
    pub relative_mismatch: f64,
}

/// Residue of `k ↦ G_l(r, r'; k)` at a pole, checked against a contour integral.
pub fn green_residue(pole: &ResonancePole, spec: &BarrierSpec, r: f64, rprime: f64) -> Result<GreenResidue> {
    green_residue_with(pole, spec, r, rprime, f64::INFINITY)
}

/// As [`green_residue`], with the distance to the nearest other pole bounding
/// the contour radius.
pub fn green_residue_with(
    pole: &ResonancePole,
    spec: &BarrierSpec,
    r: f64,
    rprime: f64,
    nearest_other: f64,
) -> Result<GreenResidue> {
    let (l, k_d) = (pole.l, pole.k_d);
    let analytic = green_residue_analytic(l, k_d, spec, r, rprime)?;
    let nearest = nearest_other.min(2.0 * k_d.re.abs());
    let g = |k: Complex64| green_function(l, k, spec, r, rprime).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    let contour = contour_residue(g, k_d, residue_radius(k_d, nearest), CONTOUR_POINTS);
    let relative_mismatch = (contour - analytic).norm() / contour.norm();
    if !(relative_mismatch <= RESIDUE_MISMATCH_LIMIT) {
        return Err(Error::SuspiciousPole {
            k: k_d,
            mismatch: relative_mismatch,
        });
    }
    Ok(GreenResidue {
        analytic,
        contour,
        relative_mismatch,
    })
}

/// The analytic residue formula alone.
pub fn green_residue_analytic(l: u32, k_d: Complex64, spec: &BarrierSpec, r: f64, rprime: f64) -> Result<Complex64> {
    let c = coefficients(l, k_d, spec)?;
    let chi = RadialFunction::from_coefficients(&c, spec);
    let df2 = f_l2_derivative(l, k_d, spec);
    Ok(spec.k2_per_energy() * chi.value(r)? * chi.value(rprime)? / (2.0 * I * k_d * c.f_l1 * df2))
}

/// `∂_r G(r'⁺) - ∂_r G(r'⁻)` from second differences, Richardson-extrapolated
/// over `ε = 1e-3, 5e-4, 2.5e-4`. Should equal `2m/ħ²`.
pub fn derivative_jump(l: u32, k: Complex64, spec: &BarrierSpec, rprime: f64) -> Result<Complex64> {
    let g = |r: f64| green_function(l, k, spec, r, rprime);
    let g0 = g(rprime)?;
    let jump = |eps: f64| -> Result<Complex64> { Ok((g(rprime + eps)? + g(rprime - eps)? - 2.0 * g0) / eps) };
    let (j1, j2, j3) = (jump(1e-3)?, jump(5e-4)?, jump(2.5e-4)?);
    let r1 = 2.0 * j2 - j1;
    let r2 = 2.0 * j3 - j2;
    Ok((4.0 * r2 - r1) / 3.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Character {
    Outgoing,
    Incoming,
    Indeterminate,
}

/// The Green function is outgoing for `Re k > 0` and incoming for `Re k < 0`.
pub fn incoming_outgoing_character(k: Complex64) -> Character {
    if k.re > 0.0 {
        Character::Outgoing
    } else if k.re < 0.0 {
        Character::Incoming
    } else {
        Character::Indeterminate
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ComplexRect;
    use crate::resonances::find_poles;
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poles(n: usize) -> Vec<ResonancePole> {
        let rect = ComplexRect::new(0.1, 6.0, -2.0, -1e-9).unwrap();
        find_poles(0, &rect, &BarrierSpec::reference(), n).unwrap()
    }

    #[test]
    fn free_wronskian() {
        let spec = BarrierSpec::with_default_units(0.0, 1.0, 2.0).unwrap();
        let k = c(1.7, 0.0);
        for r in [0.5, 1.5, 4.0] {
            let w = wronskian(0, k, &spec, r).unwrap();
            assert!((w - 2.0 * I * k * c(0.0, 0.5)).norm() < 1e-12);
        }
    }

    #[test]
    fn symmetric_and_continuous() {
        let spec = BarrierSpec::reference();
        let k = c(2.9, -0.3);
        for l in 0..3 {
            for (r, rp) in [(0.4, 1.3), (1.6, 3.0), (0.2, 5.0)] {
                let g1 = green_function(l, k, &spec, r, rp).unwrap();
                let g2 = green_function(l, k, &spec, rp, r).unwrap();
                assert!((g1 - g2).norm() <= 1e-14 * g1.norm());
            }
            let at = green_function(l, k, &spec, 1.5, 1.5).unwrap();
            let near = green_function(l, k, &spec, 1.5 + 1e-9, 1.5).unwrap();
            assert!((at - near).norm() < 1e-7 * at.norm());
        }
    }

    #[test]
    fn delta_jump() {
        let spec = BarrierSpec::new(8.0, 1.0, 2.0, 1.3, 0.8).unwrap();
        for (l, k, rp) in [(0, c(2.1, 0.0), 0.6), (1, c(3.0, -0.4), 1.4), (2, c(1.5, 0.2), 3.1)] {
            let jump = derivative_jump(l, k, &spec, rp).unwrap();
            let expected = spec.k2_per_energy();
            assert!((jump - expected).norm() <= 1e-6 * expected, "{jump}");
        }
    }

    #[test]
    fn satisfies_radial_equation_away_from_source() {
        // (-ħ²/2m ∂² + ħ²l(l+1)/2mr² + V - E) G = 0 for r ≠ r'
        let spec = BarrierSpec::reference();
        let k = c(2.3, -0.2);
        let rp = 1.4;
        for l in 0..3u32 {
            for r in [0.5, 1.7, 3.5] {
                let h = 1e-3;
                let g = |x: f64| green_function(l, k, &spec, x, rp).unwrap();
                let d2 = (-g(r + 2.0 * h) + 16.0 * g(r + h) - 30.0 * g(r) + 16.0 * g(r - h) - g(r - 2.0 * h))
                    / (12.0 * h * h);
                let ll = (l * (l + 1)) as f64;
                let res = -d2 + (ll / (r * r) + spec.k2_per_energy() * spec.potential(r) - k * k) * g(r);
                let scale = d2.norm().max((k * k * g(r)).norm());
                assert!(res.norm() <= 1e-6 * scale, "l = {l}, r = {r}: {}", res.norm() / scale);
            }
        }
    }

    #[test]
    fn pole_evaluation_is_rejected() {
        let spec = BarrierSpec::reference();
        let p = &poles(1)[0];
        assert!(matches!(
            green_function(0, p.k_d, &spec, 0.5, 3.0),
            Err(Error::PoleEvaluation { .. })
        ));
    }

    #[test]
    fn residues_match_contour() {
        let spec = BarrierSpec::reference();
        for p in poles(3) {
            let res = green_residue(&p, &spec, 0.5, 1.5 * spec.b).unwrap();
            assert!(res.relative_mismatch <= 1e-6);
            let swapped = green_residue(&p, &spec, 1.5 * spec.b, 0.5).unwrap();
            assert!((res.analytic - swapped.analytic).norm() <= 1e-13 * res.analytic.norm());
        }
    }

    #[test]
    fn residue_is_rank_one() {
        let spec = BarrierSpec::reference();
        let p = &poles(1)[0];
        let rs = [0.3, 0.9, 1.6, 3.0];
        let m = DMatrix::from_fn(4, 4, |i, j| {
            green_residue_analytic(0, p.k_d, &spec, rs[i], rs[j]).unwrap()
        });
        let sv = m.singular_values();
        assert!(sv[1] <= 1e-8 * sv[0]);
    }

    #[test]
    fn character() {
        assert_eq!(incoming_outgoing_character(c(2.0, -0.1)), Character::Outgoing);
        assert_eq!(incoming_outgoing_character(c(-2.0, -0.1)), Character::Incoming);
        assert_eq!(incoming_outgoing_character(c(0.0, 1.0)), Character::Indeterminate);
    }

    proptest! {
        #[test]
        fn wronskian_is_constant_and_scaled_f2(re in 0.2f64..7.0, im in -1.5f64..1.0, l in 0u32..3) {
            let spec = BarrierSpec::reference();
            let k = c(re, im);
            let f2 = coefficients(l, k, &spec).unwrap().f_l2;
            let expected = 2.0 * I * k * f2;
            for r in [0.5 * spec.a, 0.5 * (spec.a + spec.b), 2.0 * spec.b] {
                let w = wronskian(l, k, &spec, r).unwrap();
                prop_assert!((w / expected - 1.0).norm() <= 1e-10, "r = {}: {}", r, w / expected);
            }
        }
    }
}

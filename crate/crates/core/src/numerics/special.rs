//! Riccati–Bessel and Riccati–Hankel functions of complex argument.
//!
//! Conventions: `ĥ⁺_l(z) = i z h⁽¹⁾_l(z)` and `ĥ⁻_l(z) = -i z h⁽²⁾_l(z)`, so that
//! `ĥ⁺_0(z) = e^{iz}`, `ĥ⁻_0(z) = e^{-iz}` and `ĥ^±_l(z) ~ e^{±i(z - lπ/2)}` for
//! large `|z|`. The regular function is `ĵ_l = (ĥ⁺_l - ĥ⁻_l) / 2i`.
//!
//! The Hankel functions are evaluated from their closed form (a polynomial in
//! `1/z` times `e^{±iz}`). `ĵ_l` switches to its power series near the origin,
//! where the difference of the two Hankel functions cancels catastrophically.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest angular momentum accepted by the public evaluators.
pub const L_MAX: u32 = 10;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which Riccati–Hankel function: `+` outgoing, `-` incoming.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HankelSign {
    Plus,
    Minus,
}

impl HankelSign {
    fn factor(self) -> f64 {
        match self {
            HankelSign::Plus => 1.0,
            HankelSign::Minus => -1.0,
        }
    }
}

fn check_order(l: u32) -> Result<()> {
    if l > L_MAX {
        return Err(Error::UnsupportedOrder { l, max: L_MAX });
    }
    Ok(())
}

/// `(l+m)! / (m! (l-m)!)`, exact in f64 for `l <= L_MAX + 1`.
fn hankel_coefficient(l: u32, m: u32) -> f64 {
    let mut c = 1.0;
    for j in (l - m + 1)..=(l + m) {
        c *= j as f64;
    }
    for j in 1..=m {
        c /= j as f64;
    }
    c
}

/// Closed form without order check; valid for any `l`, used internally for `l + 1`.
fn hankel_unchecked(sign: HankelSign, l: u32, z: Complex64) -> Complex64 {
    let s = sign.factor();
    // (∓i)^l e^{±iz} Σ_m c_{l,m} (±i / 2z)^m
    let x = Complex64::new(0.0, s) / (2.0 * z);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for m in 0..=l {
        sum += hankel_coefficient(l, m) * pow;
        pow *= x;
    }
    let phase = Complex64::new(0.0, -s).powu(l);
    phase * (Complex64::new(0.0, s) * z).exp() * sum
}

/// Riccati–Hankel function `ĥ^±_l(z)`.
pub fn riccati_hankel(sign: HankelSign, l: u32, z: Complex64) -> Result<Complex64> {
    check_order(l)?;
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("Riccati-Hankel function evaluated at z = 0".into()));
    }
    Ok(hankel_unchecked(sign, l, z))
}

/// Derivative `dĥ^±_l/dz`, from `u_l' = u_{l-1} - (l/z) u_l`.
pub fn riccati_hankel_deriv(sign: HankelSign, l: u32, z: Complex64) -> Result<Complex64> {
    let h = riccati_hankel(sign, l, z)?;
    if l == 0 {
        return Ok(Complex64::new(0.0, sign.factor()) * h);
    }
    let lower = hankel_unchecked(sign, l - 1, z);
    Ok(lower - (l as f64) / z * h)
}

/// Value and derivative of `ĥ^±_l` in one call.
pub fn riccati_hankel_pair(sign: HankelSign, l: u32, z: Complex64) -> Result<(Complex64, Complex64)> {
    let h = riccati_hankel(sign, l, z)?;
    let dh = if l == 0 {
        Complex64::new(0.0, sign.factor()) * h
    } else {
        hankel_unchecked(sign, l - 1, z) - (l as f64) / z * h
    };
    Ok((h, dh))
}

/// Radius below which `ĵ_l` is summed from its power series.
fn series_radius(l: u32) -> f64 {
    l as f64 + 1.0
}

/// `ĵ_l(z) = z^{l+1} Σ_n (-z²/2)^n / (n! (2l+2n+1)!!)`.
fn bessel_series(l: u32, z: Complex64) -> Complex64 {
    let mut double_fact = 1.0;
    for j in (1..=(2 * l + 1)).step_by(2) {
        double_fact *= j as f64;
    }
    let w = -z * z / 2.0;
    let mut term = Complex64::new(1.0 / double_fact, 0.0);
    let mut sum = term;
    for n in 1..200u32 {
        term *= w / (n as f64 * (2 * l + 2 * n + 1) as f64);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    z.powu(l + 1) * sum
}

fn bessel_unchecked(l: u32, z: Complex64) -> Complex64 {
    if l == 0 {
        return z.sin();
    }
    if z.norm() < series_radius(l) {
        return bessel_series(l, z);
    }
    (hankel_unchecked(HankelSign::Plus, l, z) - hankel_unchecked(HankelSign::Minus, l, z)) / (2.0 * I)
}

/// Riccati–Bessel function `ĵ_l(z)`, regular at the origin.
pub fn riccati_bessel_j(l: u32, z: Complex64) -> Result<Complex64> {
    check_order(l)?;
    Ok(bessel_unchecked(l, z))
}

/// Derivative `dĵ_l/dz`.
pub fn riccati_bessel_j_deriv(l: u32, z: Complex64) -> Result<Complex64> {
    check_order(l)?;
    if l == 0 {
        return Ok(z.cos());
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(bessel_unchecked(l - 1, z) - (l as f64) / z * bessel_unchecked(l, z))
}

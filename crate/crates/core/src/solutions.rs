//! Piecewise radial solutions of the barrier problem.
//!
//! The regular solution `χ_l(r; k)` is normalised with `α_l = 1`:
//!
//! ```text
//! χ_l = ĵ_l(kr)                        0 < r < a
//!     = α_l2 ĥ⁺_l(Qr) + β_l2 ĥ⁻_l(Qr)  a < r < b
//!     = F_l1 ĥ⁺_l(kr) + F_l2 ĥ⁻_l(kr)  b < r
//! ```
//!
//! The outgoing solution `ψ_l` equals `ĥ⁺_l(kr)` for `r > b` and is continued
//! inward. Both coefficient sets come from 4×4 continuity systems solved by
//! LU with partial pivoting; the textbook closed forms are kept alongside as
//! independent cross-checks.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{inner_q, BarrierSpec};
use crate::numerics::{riccati_bessel_j, riccati_bessel_j_deriv, riccati_hankel_pair, HankelSign};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Matching amplitudes of `χ_l` at one wave number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientSet {
    pub l: u32,
    pub k: Complex64,
    /// Barrier wave number the barrier amplitudes refer to.
    pub q: Complex64,
    pub alpha_l: Complex64,
    pub alpha_l2: Complex64,
    pub beta_l2: Complex64,
    pub f_l1: Complex64,
    pub f_l2: Complex64,
}

/// Interior amplitudes of the outgoing solution `ψ_l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutgoingCoefficients {
    pub l: u32,
    pub k: Complex64,
    pub q: Complex64,
    pub a_l1: Complex64,
    pub b_l1: Complex64,
    pub a_l2: Complex64,
    pub b_l2: Complex64,
}

/// `ĥ⁺, ĥ⁺', ĥ⁻, ĥ⁻'` at one argument.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Hankels {
    pub plus: Complex64,
    pub dplus: Complex64,
    pub minus: Complex64,
    pub dminus: Complex64,
}

impl Hankels {
    pub(crate) fn at(l: u32, z: Complex64) -> Result<Self> {
        let (plus, dplus) = riccati_hankel_pair(HankelSign::Plus, l, z)?;
        let (minus, dminus) = riccati_hankel_pair(HankelSign::Minus, l, z)?;
        Ok(Self {
            plus,
            dplus,
            minus,
            dminus,
        })
    }
}

/// Wave numbers `(k, Q)` after the degeneracy checks shared by all solvers.
pub(crate) fn wave_numbers(k: Complex64, spec: &BarrierSpec) -> Result<(Complex64, Complex64)> {
    if !(k.re.is_finite() && k.im.is_finite()) || k.norm() < 1e-12 {
        return Err(Error::DegenerateWavenumber { k });
    }
    let q = inner_q(k, spec);
    if q.norm() < 1e-12 * k.norm().max(1.0) {
        return Err(Error::DegenerateWavenumber { k });
    }
    Ok((k, q))
}

fn solve4(m: Matrix4<Complex64>, rhs: Vector4<Complex64>, k: Complex64) -> Result<Vector4<Complex64>> {
    let x = m.lu().solve(&rhs).ok_or(Error::DegenerateWavenumber { k })?;
    if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::DegenerateWavenumber { k });
    }
    Ok(x)
}

/// Coefficients of the regular solution with `α_l = 1`, from the continuity
/// conditions of `χ` and `dχ/dr` at `r = a` and `r = b`.
pub fn coefficients(l: u32, k: Complex64, spec: &BarrierSpec) -> Result<CoefficientSet> {
    let (k, q) = wave_numbers(k, spec)?;
    let ka = k * spec.a;
    let j = riccati_bessel_j(l, ka)?;
    let dj = riccati_bessel_j_deriv(l, ka)?;
    let qa = Hankels::at(l, q * spec.a)?;
    let qb = Hankels::at(l, q * spec.b)?;
    let kb = Hankels::at(l, k * spec.b)?;

    // unknowns (α_l2, β_l2, F_l1, F_l2); rows are χ and χ' (in r) at a, then at b
    #[rustfmt::skip]
    let m = Matrix4::new(
        qa.plus,        qa.minus,        ZERO,          ZERO,
        q * qa.dplus,   q * qa.dminus,   ZERO,          ZERO,
        -qb.plus,       -qb.minus,       kb.plus,       kb.minus,
        -q * qb.dplus,  -q * qb.dminus,  k * kb.dplus,  k * kb.dminus,
    );
    let rhs = Vector4::new(j, k * dj, ZERO, ZERO);
    let x = solve4(m, rhs, k)?;
    Ok(CoefficientSet {
        l,
        k,
        q,
        alpha_l: Complex64::new(1.0, 0.0),
        alpha_l2: x[0],
        beta_l2: x[1],
        f_l1: x[2],
        f_l2: x[3],
    })
}

/// General-`l` closed forms written as ratios of Riccati–Hankel Wronskian
/// products (`α_l = 1`). Numerically inferior to [`coefficients`] near
/// cancellations; used to cross-check it.
pub fn coefficients_closed_form(l: u32, k: Complex64, spec: &BarrierSpec) -> Result<CoefficientSet> {
    let (k, q) = wave_numbers(k, spec)?;
    let ka = k * spec.a;
    let j = riccati_bessel_j(l, ka)?;
    let dj = riccati_bessel_j_deriv(l, ka)?;
    let qa = Hankels::at(l, q * spec.a)?;
    let qb = Hankels::at(l, q * spec.b)?;
    let kb = Hankels::at(l, k * spec.b)?;
    let k_over_q = k / q;
    let q_over_k = q / k;

    let num_alpha = j * qa.dminus - k_over_q * dj * qa.minus;
    let num_beta = j * qa.dplus - k_over_q * dj * qa.plus;
    let w_qa_pm = qa.plus * qa.dminus - qa.dplus * qa.minus;
    let w_qa_mp = qa.minus * qa.dplus - qa.dminus * qa.plus;
    let w_kb_pm = kb.plus * kb.dminus - kb.dplus * kb.minus;
    let w_kb_mp = kb.minus * kb.dplus - kb.dminus * kb.plus;

    let alpha_l2 = num_alpha / w_qa_pm;
    let beta_l2 = num_beta / w_qa_mp;

    let f_l1 = (qb.plus * kb.dminus - q_over_k * qb.dplus * kb.minus) * num_alpha / (w_kb_pm * w_qa_pm)
        + (qb.minus * kb.dminus - q_over_k * qb.dminus * kb.minus) * num_beta / (w_kb_pm * w_qa_mp);
    let f_l2 = (qb.plus * kb.dplus - q_over_k * qb.dplus * kb.plus) * num_alpha / (w_kb_mp * w_qa_pm)
        + (qb.minus * kb.dplus - q_over_k * qb.dminus * kb.plus) * num_beta / (w_kb_mp * w_qa_mp);

    Ok(CoefficientSet {
        l,
        k,
        q,
        alpha_l: Complex64::new(1.0, 0.0),
        alpha_l2,
        beta_l2,
        f_l1,
        f_l2,
    })
}

/// s-wave closed forms in terms of `sin(ka)`, `cos(ka)` and `e^{±iQ(b-a)}`
/// (`α = 1`).
pub fn s_wave_coefficients(k: Complex64, spec: &BarrierSpec) -> Result<CoefficientSet> {
    let (k, q) = wave_numbers(k, spec)?;
    let (a, b) = (spec.a, spec.b);
    let s = (k * a).sin();
    let c = (k * a).cos();
    let k_over_iq = k / (I * q);
    let plus = s + k_over_iq * c;
    let minus = s - k_over_iq * c;
    let e_qd = (I * q * (b - a)).exp();
    let e_qd_inv = (-I * q * (b - a)).exp();
    let q_over_k = q / k;

    Ok(CoefficientSet {
        l: 0,
        k,
        q,
        alpha_l: Complex64::new(1.0, 0.0),
        alpha_l2: 0.5 * (-I * q * a).exp() * plus,
        beta_l2: 0.5 * (I * q * a).exp() * minus,
        f_l1: (-I * k * b).exp() / 4.0 * ((1.0 + q_over_k) * e_qd * plus + (1.0 - q_over_k) * e_qd_inv * minus),
        f_l2: (I * k * b).exp() / 4.0 * ((1.0 - q_over_k) * e_qd * plus + (1.0 + q_over_k) * e_qd_inv * minus),
    })
}

/// Left-hand side of the s-wave pole condition
/// `(1 - Q/k) e^{iQ(b-a)} [sin ka + (k/iQ) cos ka] + (1 + Q/k) e^{-iQ(b-a)} [sin ka - (k/iQ) cos ka]`,
/// equal to `4 e^{-ikb} F_2(k)`.
pub fn s_wave_pole_condition(k: Complex64, spec: &BarrierSpec) -> Result<Complex64> {
    let (k, q) = wave_numbers(k, spec)?;
    let (a, b) = (spec.a, spec.b);
    let s = (k * a).sin();
    let c = (k * a).cos();
    let k_over_iq = k / (I * q);
    let q_over_k = q / k;
    Ok((1.0 - q_over_k) * (I * q * (b - a)).exp() * (s + k_over_iq * c)
        + (1.0 + q_over_k) * (-I * q * (b - a)).exp() * (s - k_over_iq * c))
}

/// Interior coefficients of `ψ_l`, which equals `ĥ⁺_l(kr)` for `r > b`.
pub fn outgoing_coefficients(l: u32, k: Complex64, spec: &BarrierSpec) -> Result<OutgoingCoefficients> {
    let (k, q) = wave_numbers(k, spec)?;
    let ka = Hankels::at(l, k * spec.a)?;
    let qa = Hankels::at(l, q * spec.a)?;
    let qb = Hankels::at(l, q * spec.b)?;
    let kb = Hankels::at(l, k * spec.b)?;

    // unknowns (a_l1, b_l1, a_l2, b_l2)
    #[rustfmt::skip]
    let m = Matrix4::new(
        ka.plus,       ka.minus,       -qa.plus,       -qa.minus,
        k * ka.dplus,  k * ka.dminus,  -q * qa.dplus,  -q * qa.dminus,
        ZERO,          ZERO,           qb.plus,        qb.minus,
        ZERO,          ZERO,           q * qb.dplus,   q * qb.dminus,
    );
    let rhs = Vector4::new(ZERO, ZERO, kb.plus, k * kb.dplus);
    let x = solve4(m, rhs, k)?;
    Ok(OutgoingCoefficients {
        l,
        k,
        q,
        a_l1: x[0],
        b_l1: x[1],
        a_l2: x[2],
        b_l2: x[3],
    })
}

/// Which of the three potential regions a radius belongs to. The region
/// boundaries `r = a`, `r = b` belong to the inner side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Inner,
    Barrier,
    Outer,
}

impl Region {
    pub fn of(r: f64, spec: &BarrierSpec) -> Self {
        if r <= spec.a {
            Region::Inner
        } else if r <= spec.b {
            Region::Barrier
        } else {
            Region::Outer
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RadialKind {
    /// `χ_l`, vanishing at the origin
    Regular,
    /// `ψ_l`, equal to `ĥ⁺_l(kr)` outside the barrier
    Outgoing,
    /// `χ_l` at a pole with the incoming outer term removed
    Gamow,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum InnerPart {
    Regular { alpha: Complex64 },
    Hankel { plus: Complex64, minus: Complex64 },
}

/// Piecewise evaluator of a radial solution over the three regions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialFunction {
    pub l: u32,
    pub k: Complex64,
    pub q: Complex64,
    pub kind: RadialKind,
    a: f64,
    b: f64,
    inner: InnerPart,
    barrier: [Complex64; 2],
    outer: [Complex64; 2],
}

impl RadialFunction {
    pub fn regular(l: u32, k: Complex64, spec: &BarrierSpec) -> Result<Self> {
        Ok(Self::from_coefficients(&coefficients(l, k, spec)?, spec))
    }

    pub fn from_coefficients(c: &CoefficientSet, spec: &BarrierSpec) -> Self {
        Self {
            l: c.l,
            k: c.k,
            q: c.q,
            kind: RadialKind::Regular,
            a: spec.a,
            b: spec.b,
            inner: InnerPart::Regular { alpha: c.alpha_l },
            barrier: [c.alpha_l2, c.beta_l2],
            outer: [c.f_l1, c.f_l2],
        }
    }

    pub fn outgoing(l: u32, k: Complex64, spec: &BarrierSpec) -> Result<Self> {
        let c = outgoing_coefficients(l, k, spec)?;
        Ok(Self {
            l,
            k: c.k,
            q: c.q,
            kind: RadialKind::Outgoing,
            a: spec.a,
            b: spec.b,
            inner: InnerPart::Hankel {
                plus: c.a_l1,
                minus: c.b_l1,
            },
            barrier: [c.a_l2, c.b_l2],
            outer: [Complex64::new(1.0, 0.0), ZERO],
        })
    }

    /// The regular solution with its `ĥ⁻` outer amplitude dropped.
    pub(crate) fn purely_outgoing(c: &CoefficientSet, spec: &BarrierSpec) -> Self {
        let mut f = Self::from_coefficients(c, spec);
        f.outer[1] = ZERO;
        f.kind = RadialKind::Gamow;
        f
    }

    /// Outer amplitudes `(ĥ⁺, ĥ⁻)`.
    pub fn outer_amplitudes(&self) -> (Complex64, Complex64) {
        (self.outer[0], self.outer[1])
    }

    fn region(&self, r: f64) -> Region {
        if r <= self.a {
            Region::Inner
        } else if r <= self.b {
            Region::Barrier
        } else {
            Region::Outer
        }
    }

    /// Value and `d/dr` at `r`, using the branch of `region` regardless of
    /// where `r` lies. Lets callers compare both sides of an interface.
    pub fn evaluate_in(&self, region: Region, r: f64) -> Result<(Complex64, Complex64)> {
        if !(r >= 0.0) {
            return Err(Error::Domain(format!("radius must be non-negative, got {r}")));
        }
        let combine = |x: Complex64, coeffs: [Complex64; 2]| -> Result<(Complex64, Complex64)> {
            let h = Hankels::at(self.l, x * r)?;
            Ok((
                coeffs[0] * h.plus + coeffs[1] * h.minus,
                x * (coeffs[0] * h.dplus + coeffs[1] * h.dminus),
            ))
        };
        match region {
            Region::Inner => match self.inner {
                InnerPart::Regular { alpha } => {
                    let z = self.k * r;
                    Ok((
                        alpha * riccati_bessel_j(self.l, z)?,
                        alpha * self.k * riccati_bessel_j_deriv(self.l, z)?,
                    ))
                }
                InnerPart::Hankel { plus, minus } => combine(self.k, [plus, minus]),
            },
            Region::Barrier => combine(self.q, self.barrier),
            Region::Outer => combine(self.k, self.outer),
        }
    }

    pub fn value_and_derivative(&self, r: f64) -> Result<(Complex64, Complex64)> {
        self.evaluate_in(self.region(r), r)
    }

    pub fn value(&self, r: f64) -> Result<Complex64> {
        Ok(self.value_and_derivative(r)?.0)
    }

    pub fn derivative(&self, r: f64) -> Result<Complex64> {
        Ok(self.value_and_derivative(r)?.1)
    }
}

/// `χ_l(r; k)` with `α_l = 1`.
pub fn chi(l: u32, k: Complex64, spec: &BarrierSpec, r: f64) -> Result<Complex64> {
    RadialFunction::regular(l, k, spec)?.value(r)
}

/// `ψ_l(r; k)`, equal to `ĥ⁺_l(kr)` for `r > b`.
pub fn psi_outgoing(l: u32, k: Complex64, spec: &BarrierSpec, r: f64) -> Result<Complex64> {
    RadialFunction::outgoing(l, k, spec)?.value(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KetSign {
    /// `|E⁺⟩`, outgoing scattering boundary condition
    Plus,
    /// `|E⁻⟩`, incoming scattering boundary condition
    Minus,
}

/// s-wave Lippmann–Schwinger eigenfunctions in position representation:
/// `⟨r|E⁺⟩ = -χ/(2i F₂)` and `⟨r|E⁻⟩ = χ/(2i F₁)`, for real `k > 0`.
pub fn lippmann_schwinger_ket(sign: KetSign, k: f64, spec: &BarrierSpec, r: f64) -> Result<Complex64> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Domain(format!("scattering kets need real k > 0, got {k}")));
    }
    let c = coefficients(0, Complex64::new(k, 0.0), spec)?;
    let chi = RadialFunction::from_coefficients(&c, spec).value(r)?;
    Ok(match sign {
        KetSign::Plus => -chi / (2.0 * I * c.f_l2),
        KetSign::Minus => chi / (2.0 * I * c.f_l1),
    })
}

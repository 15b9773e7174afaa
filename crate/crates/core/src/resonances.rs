//! Resonance poles in the lower half k-plane.
//!
//! Poles are located as zeros of `F_l2(k)`, seeded from a uniform grid and
//! polished by Newton. Each one is certified against two other functions that
//! share the same zeros: the determinant of the purely-outgoing matching system
//! and the pointwise Wronskian `χψ' - χ'ψ` (the Green-function denominator).
//! The argument principle on the search rectangle guards against missed poles.

use std::collections::BTreeMap;

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::green;
use crate::model::{energy_from_k, BarrierSpec, ComplexEnergy, ComplexWaveNumber};
use crate::numerics::{count_zeros, dedup_roots, find_root, riccati_bessel_j, riccati_bessel_j_deriv, ComplexRect};
use crate::smatrix::{f_l2, s_residue};
use crate::solutions::{wave_numbers, Hankels};

/// Upper edge of every search rectangle; keeps the real axis out.
pub const REAL_AXIS_CLEARANCE: f64 = 1e-9;
/// Bound on the scaled residual of each route at a certified pole.
pub const CERTIFICATION_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_POLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// zeros of `F_l2`
    SMatrix,
    /// zeros of the 4×4 matching determinant
    Determinant,
    /// zeros of the Wronskian `χψ' - χ'ψ`
    Green,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::SMatrix, Method::Determinant, Method::Green];

    pub fn name(self) -> &'static str {
        match self {
            Method::SMatrix => "smatrix",
            Method::Determinant => "determinant",
            Method::Green => "green",
        }
    }

    /// The function whose zeros this route looks for.
    pub fn evaluate(self, l: u32, k: Complex64, spec: &BarrierSpec) -> Result<Complex64> {
        match self {
            Method::SMatrix => f_l2(l, k, spec),
            Method::Determinant => determinant_condition(l, k, spec),
            Method::Green => green_denominator(l, k, spec),
        }
    }

    fn total(self, l: u32, spec: &BarrierSpec) -> impl Fn(Complex64) -> Complex64 + '_ {
        move |k| self.evaluate(l, k, spec).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

/// A decaying resonance: `k_d` in the fourth quadrant, `z = E_R - iΓ/2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonancePole {
    pub l: u32,
    pub k_d: Complex64,
    pub z: ComplexEnergy,
    pub gamma: f64,
    pub e_r: f64,
    pub s_residue_k: Complex64,
    pub s_residue_e: Complex64,
    /// `|f(k_d)| / max(1, median |f| on the seed grid)` per route.
    pub method_residuals: BTreeMap<Method, f64>,
}

/// The growing partner of a decaying pole: `k_g = -conj(k_d)`, `z* = E_R + iΓ/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowingPole {
    pub l: u32,
    pub k_g: Complex64,
    pub z_star: ComplexEnergy,
}

/// Determinant of the homogeneous system for `(α_l, F_l1, α_l2, β_l2)` that
/// expresses regularity at the origin, continuity at `a` and `b`, and a purely
/// outgoing outer solution. Equals `-4 F_l2(k)` identically.
pub fn determinant_condition(l: u32, k: Complex64, spec: &BarrierSpec) -> Result<Complex64> {
    let (k, q) = wave_numbers(k, spec)?;
    let ka = k * spec.a;
    let j = riccati_bessel_j(l, ka)?;
    let dj = riccati_bessel_j_deriv(l, ka)?;
    let qa = Hankels::at(l, q * spec.a)?;
    let qb = Hankels::at(l, q * spec.b)?;
    let kb = Hankels::at(l, k * spec.b)?;
    let zero = Complex64::new(0.0, 0.0);
    let k_over_q = k / q;
    let q_over_k = q / k;
    #[rustfmt::skip]
    let m = Matrix4::new(
        -j,             zero,       qa.plus,              qa.minus,
        -k_over_q * dj, zero,       qa.dplus,             qa.dminus,
        zero,           -kb.plus,   qb.plus,              qb.minus,
        zero,           -kb.dplus,  q_over_k * qb.dplus,  q_over_k * qb.dminus,
    );
    Ok(m.determinant())
}

/// `χ_l ψ_l' - χ_l' ψ_l`, evaluated pointwise in the middle of the barrier.
pub fn green_denominator(l: u32, k: Complex64, spec: &BarrierSpec) -> Result<Complex64> {
    green::wronskian(l, k, spec, 0.5 * (spec.a + spec.b))
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub grid_re: usize,
    pub grid_im: usize,
    pub max_poles: usize,
    pub boundary_points: usize,
    pub max_iter: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            grid_re: 40,
            grid_im: 20,
            max_poles: DEFAULT_MAX_POLES,
            boundary_points: 2048,
            max_iter: 100,
        }
    }
}

/// Outcome of a pole search with the data needed to audit it.
#[derive(Debug, Clone, Serialize)]
pub struct PoleSearch {
    pub poles: Vec<ResonancePole>,
    /// Winding number of `F_l2` around the (clipped) rectangle.
    pub argument_count: usize,
    pub rect: ComplexRect,
}

/// Rectangle with its upper edge clipped below the real axis.
pub fn clip_to_lower_half(rect: &ComplexRect) -> Result<ComplexRect> {
    ComplexRect::new(
        rect.re_min,
        rect.re_max,
        rect.im_min,
        rect.im_max.min(-REAL_AXIS_CLEARANCE),
    )
}

fn median_modulus(f: impl Fn(Complex64) -> Complex64, pts: &[Complex64]) -> f64 {
    let mut m: Vec<f64> = pts.iter().map(|&z| f(z).norm()).filter(|v| v.is_finite()).collect();
    if m.is_empty() {
        return 1.0;
    }
    m.sort_by(f64::total_cmp);
    m[m.len() / 2]
}

/// Grid-seeded Newton search for the zeros of one route inside `rect`.
/// Returns the deduplicated zeros and the seed-grid scale of the function.
fn locate_zeros(
    method: Method,
    l: u32,
    rect: &ComplexRect,
    spec: &BarrierSpec,
    opts: &SearchOptions,
) -> (Vec<Complex64>, f64) {
    let f = method.total(l, spec);
    let seeds = rect.grid(opts.grid_re, opts.grid_im);
    let scale = median_modulus(&f, &seeds).max(1.0);
    let tol = 1e-12 * scale;
    let found = seeds
        .iter()
        .filter_map(|&seed| find_root(&f, seed, tol, opts.max_iter).ok())
        .map(|r| r.root)
        .filter(|&z| rect.contains(z));
    let mut roots = dedup_roots(found);
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    (roots, scale)
}

fn nearest_distance(k: Complex64, others: &[Complex64]) -> f64 {
    others
        .iter()
        .filter(|&&w| w != k)
        .map(|&w| (w - k).norm())
        .fold(f64::INFINITY, f64::min)
}

/// All certified decaying poles of `S_l` inside `rect`, sorted by `Re k`.
pub fn find_poles(l: u32, rect: &ComplexRect, spec: &BarrierSpec, max_poles: usize) -> Result<Vec<ResonancePole>> {
    let opts = SearchOptions {
        max_poles,
        ..SearchOptions::default()
    };
    Ok(find_poles_with(l, rect, spec, &opts)?.poles)
}

pub fn find_poles_with(l: u32, rect: &ComplexRect, spec: &BarrierSpec, opts: &SearchOptions) -> Result<PoleSearch> {
    let rect = clip_to_lower_half(rect)?;
    let (roots, scale) = locate_zeros(Method::SMatrix, l, &rect, spec, opts);

    let argument_count = count_zeros(Method::SMatrix.total(l, spec), &rect, opts.boundary_points)?;
    if argument_count != roots.len() {
        return Err(Error::IncompleteSearch {
            found: roots.len(),
            expected: argument_count,
        });
    }

    let seeds = rect.grid(opts.grid_re, opts.grid_im);
    let scales: BTreeMap<Method, f64> = Method::ALL
        .iter()
        .map(|&m| {
            let s = if m == Method::SMatrix {
                scale
            } else {
                median_modulus(m.total(l, spec), &seeds).max(1.0)
            };
            (m, s)
        })
        .collect();

    let mut poles = Vec::with_capacity(roots.len());
    for &k_d in roots.iter().take(opts.max_poles) {
        let mut method_residuals = BTreeMap::new();
        for m in Method::ALL {
            let residual = m.evaluate(l, k_d, spec)?.norm() / scales[&m];
            if !(residual <= CERTIFICATION_TOL) {
                return Err(Error::Certification {
                    k: k_d,
                    method: m.name(),
                    residual,
                });
            }
            method_residuals.insert(m, residual);
        }
        // the mirror pole -conj(k_d) is a singularity as well
        let nearest = nearest_distance(k_d, &roots).min(2.0 * k_d.re.abs().max(1e-300));
        let residue = s_residue(l, k_d, spec, nearest)?;
        let z = energy_from_k(ComplexWaveNumber(k_d), spec);
        poles.push(ResonancePole {
            l,
            k_d,
            z,
            gamma: z.width(),
            e_r: z.resonance_energy(),
            s_residue_k: residue.k_plane,
            s_residue_e: residue.e_plane,
            method_residuals,
        });
    }
    Ok(PoleSearch {
        poles,
        argument_count,
        rect,
    })
}

/// Growing partner `k_g = -conj(k_d)`, checked to be a zero of `F_l2` itself.
pub fn pole_pair(pole: &ResonancePole, spec: &BarrierSpec) -> Result<GrowingPole> {
    let k_g = -pole.k_d.conj();
    let residual = f_l2(pole.l, k_g, spec)?.norm();
    if !(residual <= CERTIFICATION_TOL) {
        return Err(Error::SymmetryViolation { k: k_g, residual });
    }
    Ok(GrowingPole {
        l: pole.l,
        k_g,
        z_star: energy_from_k(ComplexWaveNumber(k_g), spec),
    })
}

/// Poles found independently by the three routes and their worst mismatch.
#[derive(Debug, Clone, Serialize)]
pub struct AgreementReport {
    pub l: u32,
    pub poles: Vec<ResonancePole>,
    pub determinant_roots: Vec<Complex64>,
    pub green_roots: Vec<Complex64>,
    /// Largest distance from an `F_l2` pole to the nearest zero of another
    /// route, scaled by `1 + |k|`; infinite when the counts differ.
    pub max_distance: f64,
    pub argument_count: usize,
}

impl AgreementReport {
    pub fn agrees(&self) -> bool {
        self.max_distance <= AGREEMENT_TOL
    }
}

pub const AGREEMENT_TOL: f64 = 1e-9;

/// Runs all three routes without failing on disagreement.
pub fn compare_methods(
    l: u32,
    rect: &ComplexRect,
    spec: &BarrierSpec,
    opts: &SearchOptions,
) -> Result<AgreementReport> {
    let search = find_poles_with(l, rect, spec, opts)?;
    let (determinant_roots, _) = locate_zeros(Method::Determinant, l, &search.rect, spec, opts);
    let (green_roots, _) = locate_zeros(Method::Green, l, &search.rect, spec, opts);

    let n = search.argument_count;
    let mut max_distance: f64 = 0.0;
    if determinant_roots.len() != n || green_roots.len() != n {
        max_distance = f64::INFINITY;
    } else {
        for pole in &search.poles {
            for others in [&determinant_roots, &green_roots] {
                let d = others
                    .iter()
                    .map(|&w| (w - pole.k_d).norm())
                    .fold(f64::INFINITY, f64::min);
                max_distance = max_distance.max(d / (1.0 + pole.k_d.norm()));
            }
        }
    }
    Ok(AgreementReport {
        l,
        poles: search.poles,
        determinant_roots,
        green_roots,
        max_distance,
        argument_count: search.argument_count,
    })
}

/// Locates the poles by all three routes and requires them to coincide to
/// `1e-9·(1 + |k|)`.
pub fn three_method_agreement(l: u32, rect: &ComplexRect, spec: &BarrierSpec) -> Result<AgreementReport> {
    let report = compare_methods(l, rect, spec, &SearchOptions::default())?;
    if !report.agrees() {
        return Err(Error::Disagreement {
            distance: report.max_distance,
            tolerance: AGREEMENT_TOL,
        });
    }
    Ok(report)
}

//! Newton iteration, argument-principle zero counting and circular contour
//! residues for analytic functions of one complex variable.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexRect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl ComplexRect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let all_finite = [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite());
        if !all_finite || re_min >= re_max || im_min >= im_max {
            return Err(Error::Domain(format!(
                "rectangle [{re_min}, {re_max}] x [{im_min}, {im_max}] is empty or not finite"
            )));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    /// Cell-centred `nx × ny` grid, row-major in the real direction.
    pub fn grid(&self, nx: usize, ny: usize) -> Vec<Complex64> {
        let dx = self.width() / nx as f64;
        let dy = self.height() / ny as f64;
        let mut pts = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                pts.push(Complex64::new(
                    self.re_min + (i as f64 + 0.5) * dx,
                    self.im_min + (j as f64 + 0.5) * dy,
                ));
            }
        }
        pts
    }

    /// Corners in counter-clockwise order starting at the lower-left one.
    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootResult {
    pub root: Complex64,
    /// `|f(root)|`
    pub residual: f64,
    pub iterations: usize,
    pub seed: Complex64,
}

/// Step of the finite-difference derivative used by Newton and the residue code.
pub fn derivative_step(z: Complex64) -> f64 {
    1e-6 * (1.0 + z.norm())
}

/// Fourth-order central difference `f'(z)` along the real direction with the
/// given step. For analytic `f` this is the complex derivative.
pub fn central_derivative<F>(f: F, z: Complex64, h: f64) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let h1 = Complex64::new(h, 0.0);
    let h2 = Complex64::new(2.0 * h, 0.0);
    (f(z - h2) - 8.0 * f(z - h1) + 8.0 * f(z + h1) - f(z + h2)) / (12.0 * h)
}

/// Relative step size below which Newton is considered converged, once the
/// residual tolerance is also met.
const STEP_TOL: f64 = 1e-13;

/// Damped Newton iteration for a zero of `f` starting from `seed`.
///
/// Stops when `|f| <= tol` and the Newton step has shrunk below
/// `1e-13·(1 + |z|)`. Non-finite evaluations abort with [`Error::Divergence`].
pub fn find_root<F>(f: F, seed: Complex64, tol: f64, max_iter: usize) -> Result<RootResult>
where
    F: Fn(Complex64) -> Complex64,
{
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("root tolerance must be positive, got {tol}")));
    }
    let diverged = |last: Complex64, iterations: usize, residual: f64| Error::Divergence {
        seed,
        last,
        iterations,
        residual,
    };

    let mut z = seed;
    let mut fz = f(z);
    for iter in 1..=max_iter {
        if !fz.re.is_finite() || !fz.im.is_finite() {
            return Err(diverged(z, iter, f64::INFINITY));
        }
        if fz.norm() == 0.0 {
            return Ok(RootResult {
                root: z,
                residual: 0.0,
                iterations: iter - 1,
                seed,
            });
        }
        let dfz = central_derivative(&f, z, derivative_step(z));
        if dfz.norm() == 0.0 || !dfz.re.is_finite() || !dfz.im.is_finite() {
            return Err(diverged(z, iter, fz.norm()));
        }
        let step = fz / dfz;

        // halve the step until |f| does not grow (at most a few times)
        let mut lambda = 1.0;
        let mut candidate = z - step;
        let mut f_candidate = f(candidate);
        for _ in 0..8 {
            if f_candidate.norm() <= fz.norm() || step.norm() <= STEP_TOL * (1.0 + z.norm()) {
                break;
            }
            lambda *= 0.5;
            candidate = z - lambda * step;
            f_candidate = f(candidate);
        }

        let converged_step = (lambda * step).norm() <= STEP_TOL * (1.0 + candidate.norm());
        z = candidate;
        fz = f_candidate;
        if converged_step && fz.norm() <= tol {
            return Ok(RootResult {
                root: z,
                residual: fz.norm(),
                iterations: iter,
                seed,
            });
        }
    }
    Err(diverged(z, max_iter, fz.norm()))
}

/// Options for [`count_zeros_with`].
#[derive(Debug, Clone, Copy)]
pub struct ContourOptions {
    /// Uniform samples along the perimeter before adaptive refinement.
    pub boundary_points: usize,
    /// A boundary modulus below `min_modulus_rel × median |f|` is an error.
    pub min_modulus_rel: f64,
    /// Largest phase change tolerated between neighbouring samples.
    pub max_phase_step: f64,
    pub max_depth: u32,
}

impl Default for ContourOptions {
    fn default() -> Self {
        Self {
            boundary_points: 2048,
            min_modulus_rel: 1e-6,
            max_phase_step: PI / 4.0,
            max_depth: 24,
        }
    }
}

/// Number of zeros of `f` inside `rect` (with multiplicity) from the winding
/// number of `f` along the boundary.
pub fn count_zeros<F>(f: F, rect: &ComplexRect, n_boundary_points: usize) -> Result<usize>
where
    F: Fn(Complex64) -> Complex64,
{
    count_zeros_with(
        f,
        rect,
        &ContourOptions {
            boundary_points: n_boundary_points,
            ..ContourOptions::default()
        },
    )
}

pub fn count_zeros_with<F>(f: F, rect: &ComplexRect, opts: &ContourOptions) -> Result<usize>
where
    F: Fn(Complex64) -> Complex64,
{
    let corners = rect.corners();
    let perimeter = 2.0 * (rect.width() + rect.height());
    let n_total = opts.boundary_points.max(16);

    let mut points = Vec::with_capacity(n_total + 4);
    for side in 0..4 {
        let (start, end) = (corners[side], corners[(side + 1) % 4]);
        let n_side = ((n_total as f64 * (end - start).norm() / perimeter).ceil() as usize).max(4);
        for i in 0..n_side {
            points.push(start + (end - start) * (i as f64 / n_side as f64));
        }
    }
    let values: Vec<Complex64> = points.iter().map(|&z| f(z)).collect();
    if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Domain("non-finite function value on the contour".into()));
    }

    let mut moduli: Vec<f64> = values.iter().map(|v| v.norm()).collect();
    moduli.sort_by(f64::total_cmp);
    let threshold = opts.min_modulus_rel * moduli[moduli.len() / 2];

    let mut min_modulus = f64::INFINITY;
    let mut total_phase = 0.0;
    let n = points.len();
    for i in 0..n {
        let j = (i + 1) % n;
        total_phase += segment_phase(
            &f,
            (points[i], values[i]),
            (points[j], values[j]),
            opts,
            0,
            &mut min_modulus,
        )?;
    }
    if min_modulus < threshold {
        return Err(Error::UnreliableContour { min_modulus, threshold });
    }

    let winding = total_phase / (2.0 * PI);
    let rounded = winding.round();
    if (winding - rounded).abs() > 1e-3 || rounded < 0.0 {
        return Err(Error::UnreliableContour { min_modulus, threshold });
    }
    Ok(rounded as usize)
}

/// Phase change of `f` from `a` to `b`, bisecting until each sub-step is
/// below `max_phase_step`.
fn segment_phase<F>(
    f: &F,
    a: (Complex64, Complex64),
    b: (Complex64, Complex64),
    opts: &ContourOptions,
    depth: u32,
    min_modulus: &mut f64,
) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64,
{
    *min_modulus = min_modulus.min(a.1.norm()).min(b.1.norm());
    let dphi = (b.1 / a.1).arg();
    if dphi.abs() <= opts.max_phase_step || depth >= opts.max_depth {
        return Ok(dphi);
    }
    let zm = 0.5 * (a.0 + b.0);
    let fm = f(zm);
    if !fm.re.is_finite() || !fm.im.is_finite() {
        return Err(Error::Domain("non-finite function value on the contour".into()));
    }
    Ok(segment_phase(f, a, (zm, fm), opts, depth + 1, min_modulus)?
        + segment_phase(f, (zm, fm), b, opts, depth + 1, min_modulus)?)
}

/// `(1/2πi) ∮ f dz` over the circle `|z - center| = radius`, trapezoidal rule.
pub fn contour_residue<F>(f: F, center: Complex64, radius: f64, n_points: usize) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let n = n_points.max(4);
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let theta = 2.0 * PI * j as f64 / n as f64;
        let w = Complex64::from_polar(radius, theta);
        acc += f(center + w) * w;
    }
    acc / n as f64
}

/// Removes near-duplicates: `z₁ ≡ z₂` when `|z₁ - z₂| < 1e-8·(1 + |z₁|)`.
pub fn dedup_roots(roots: impl IntoIterator<Item = Complex64>) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for z in roots {
        if !out.iter().any(|&w| (w - z).norm() < 1e-8 * (1.0 + w.norm())) {
            out.push(z);
        }
    }
    out
}

//! Barrier geometry, units, and the k ↔ E map on the two-sheeted energy surface.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spherical square barrier: `V = 0` for `r < a`, `V = v0` for `a < r < b`,
/// `V = 0` for `r > b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarrierSpec {
    pub v0: f64,
    pub a: f64,
    pub b: f64,
    #[serde(default = "default_hbar")]
    pub hbar: f64,
    #[serde(default = "default_mass")]
    pub mass: f64,
}

fn default_hbar() -> f64 {
    1.0
}

fn default_mass() -> f64 {
    0.5
}

impl BarrierSpec {
    /// Validated constructor. `v0 = 0` (no potential) is accepted.
    pub fn new(v0: f64, a: f64, b: f64, hbar: f64, mass: f64) -> Result<Self> {
        let spec = Self { v0, a, b, hbar, mass };
        spec.validate()?;
        Ok(spec)
    }

    /// Barrier in units with `ħ = 1`, `m = 1/2` (so `k² = E`).
    pub fn with_default_units(v0: f64, a: f64, b: f64) -> Result<Self> {
        Self::new(v0, a, b, 1.0, 0.5)
    }

    /// `V₀ = 8`, `a = 1`, `b = 2` with `ħ = 1`, `m = 1/2`.
    pub fn reference() -> Self {
        Self {
            v0: 8.0,
            a: 1.0,
            b: 2.0,
            hbar: 1.0,
            mass: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("v0", self.v0),
            ("a", self.a),
            ("b", self.b),
            ("hbar", self.hbar),
            ("mass", self.mass),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::InvalidSpec(format!("{name} = {value} is not finite")));
            }
        }
        if self.v0 < 0.0 {
            return Err(Error::InvalidSpec(format!("v0 = {} must be non-negative", self.v0)));
        }
        if !(self.a > 0.0 && self.a < self.b) {
            return Err(Error::InvalidSpec(format!(
                "radii must satisfy 0 < a < b (a = {}, b = {})",
                self.a, self.b
            )));
        }
        if self.hbar <= 0.0 || self.mass <= 0.0 {
            return Err(Error::InvalidSpec("hbar and mass must be positive".into()));
        }
        Ok(())
    }

    /// Parses and validates a JSON object `{"v0", "a", "b", "hbar", "mass"}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: BarrierSpec = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// `2m/ħ²`
    pub fn k2_per_energy(&self) -> f64 {
        2.0 * self.mass / (self.hbar * self.hbar)
    }

    /// `2m V₀ / ħ²`
    pub fn barrier_k2(&self) -> f64 {
        self.k2_per_energy() * self.v0
    }

    pub fn potential(&self, r: f64) -> f64 {
        if r > self.a && r < self.b {
            self.v0
        } else {
            0.0
        }
    }

    pub fn with_v0(&self, v0: f64) -> Self {
        Self { v0, ..*self }
    }
}

/// Which sheet of the energy surface `k² = 2mE/ħ²` a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sheet {
    /// `Im k ≥ 0` (physical sheet)
    First,
    /// `Im k < 0`, where resonance poles live
    Second,
}

/// A point of the complex wave-number plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexWaveNumber(pub Complex64);

impl ComplexWaveNumber {
    pub fn new(re: f64, im: f64) -> Self {
        Self(Complex64::new(re, im))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn sheet(self) -> Sheet {
        if self.0.im < 0.0 {
            Sheet::Second
        } else {
            Sheet::First
        }
    }
}

impl From<Complex64> for ComplexWaveNumber {
    fn from(k: Complex64) -> Self {
        Self(k)
    }
}

/// Complex energy tagged with its sheet; `E` alone does not fix `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexEnergy {
    pub e: Complex64,
    pub sheet: Sheet,
}

impl ComplexEnergy {
    pub fn new(e: Complex64, sheet: Sheet) -> Self {
        Self { e, sheet }
    }

    /// `E_R` for `z = E_R - iΓ/2`
    pub fn resonance_energy(&self) -> f64 {
        self.e.re
    }

    /// `Γ = -2 Im z`
    pub fn width(&self) -> f64 {
        -2.0 * self.e.im
    }
}

/// `k = ±sqrt(2mE/ħ²)`, sign chosen by the sheet.
///
/// On the second sheet, points of the positive real E axis map to `k > 0`
/// (the sheet boundary approached from below).
pub fn k_from_energy(e: ComplexEnergy, spec: &BarrierSpec) -> ComplexWaveNumber {
    let root = (e.e * spec.k2_per_energy()).sqrt();
    let flip = match e.sheet {
        Sheet::First => root.im < 0.0,
        Sheet::Second => root.im > 0.0,
    };
    ComplexWaveNumber(if flip { -root } else { root })
}

/// `E = ħ²k²/2m`, second sheet iff `Im k < 0`.
pub fn energy_from_k(k: ComplexWaveNumber, spec: &BarrierSpec) -> ComplexEnergy {
    ComplexEnergy {
        e: k.0 * k.0 / spec.k2_per_energy(),
        sheet: k.sheet(),
    }
}

/// Barrier-region wave number `Q = sqrt(k² - 2mV₀/ħ²)`, principal branch.
pub fn inner_q(k: Complex64, spec: &BarrierSpec) -> Complex64 {
    (k * k - spec.barrier_k2()).sqrt()
}

//! WKB wave number and the quasi-time map `τ(z)` for the potential `V = F z`.
//!
//! The map is evaluated in the form `τ = −√(2m) z / (√(E − F z) + √E)`, which is
//! free of cancellation and remains valid as `F → 0`. Above the turning point
//! `z_t = E/F` the map continues to `(√(2m)/F)(i√(Fz − E) − √E)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Result};
use crate::model::{CanonicalBeam, FieldStrength, Species, UnitsMode};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiTimeMap {
    pub energy: f64,
    pub force: f64,
    pub mass: f64,
    pub hbar: f64,
}

/// A quasi-time value. `classical` is true exactly when `tau` is real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiTime {
    pub tau: Complex64,
    pub classical: bool,
}

impl QuasiTime {
    /// Effective propagation time entering the free-particle amplitude:
    /// `|τ|` on the real branch and `−τ` beyond the turning point.
    pub fn effective(&self) -> Complex64 {
        if self.classical {
            Complex64::new(self.tau.re.abs(), 0.0)
        } else {
            -self.tau
        }
    }
}

impl QuasiTimeMap {
    /// `force = 0` is accepted and gives the free-particle map.
    pub fn new(energy: f64, force: f64, mass: f64, hbar: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return invalid(format!("mass must be positive, got {mass}"));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return invalid(format!("hbar must be positive, got {hbar}"));
        }
        if !(force >= 0.0 && force.is_finite()) {
            return domain(format!("force must be non-negative, got {force}"));
        }
        if !(energy >= 0.0 && energy.is_finite()) {
            return domain(format!("total energy must be non-negative, got {energy}"));
        }
        Ok(QuasiTimeMap { energy, force, mass, hbar })
    }

    pub fn from_beam(
        species: &Species,
        field: &FieldStrength,
        beam: &CanonicalBeam,
        units: UnitsMode,
    ) -> Result<Self> {
        Self::new(beam.energy, field.force(species), species.m_inertial, units.hbar())
    }

    /// Turning point `E/F` (infinite for a free particle).
    pub fn turning_point(&self) -> f64 {
        if self.force == 0.0 {
            f64::INFINITY
        } else {
            self.energy / self.force
        }
    }

    pub fn wavenumber(&self, z: f64) -> f64 {
        (2.0 * self.mass * (self.energy - self.force * z).abs()).sqrt() / self.hbar
    }

    pub fn tau_of_z(&self, z: f64) -> QuasiTime {
        let e = self.energy;
        let f = self.force;
        let s2m = (2.0 * self.mass).sqrt();
        if z <= self.turning_point() {
            let den = (e - f * z).max(0.0).sqrt() + e.sqrt();
            let tau = if den == 0.0 { 0.0 } else { -s2m * z / den };
            QuasiTime { tau: Complex64::new(tau, 0.0), classical: true }
        } else {
            let tau = Complex64::new(-e.sqrt(), (f * z - e).sqrt()) * (s2m / f);
            QuasiTime { tau, classical: false }
        }
    }

    /// Inverse of [`Self::tau_of_z`] on the real branch.
    pub fn z_of_tau(&self, tau: f64) -> Result<f64> {
        let (e, f, m) = (self.energy, self.force, self.mass);
        let root = e.sqrt() + f * tau / (2.0 * m).sqrt();
        if !(root >= 0.0) {
            return domain(format!("quasi-time {tau} lies beyond the turning point"));
        }
        Ok(-tau * (2.0 * e / m).sqrt() - f * tau * tau / (2.0 * m))
    }

    /// `dτ/dz = −m/p(z)` on the real branch, with `p = √(2m(E − Fz))`.
    pub fn dtau_dz(&self, z: f64) -> f64 {
        -self.mass / (2.0 * self.mass * (self.energy - self.force * z)).sqrt()
    }

    /// Semiclassical smallness parameter `m F / (ħ² k³)`; `+∞` at the turning point.
    pub fn wkb_validity(&self, z: f64) -> f64 {
        let k = self.wavenumber(z);
        if k == 0.0 {
            f64::INFINITY
        } else {
            self.mass * self.force / (self.hbar * self.hbar * k * k * k)
        }
    }
}

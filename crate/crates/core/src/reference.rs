//! Closed-form results for falling particles used to cross-check the solvers:
//! the quantum bouncer, the Gaussian packet in a uniform field and the
//! gravitational phase of a matter-wave interferometer.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::model::{FieldStrength, Species, UnitsMode};
use crate::specfun::{airy_ai, airy_zero};

/// Energy-level formula of the bouncer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BouncerBasis {
    /// `ħ(m/ħ)^{1/3}(F/m)^{2/3}[3π/8 (n − 1/4)]^{2/3}`, without the 2^{−1/3} of the textbook form.
    WkbPaper,
    /// `(ħ²F²/2m)^{1/3}[3π/2 (n − 1/4)]^{2/3}`.
    WkbTextbook,
    /// `−a_n (ħ²F²/2m)^{1/3}` from the zeros of Ai.
    ExactAiry,
}

/// Mass, force and ħ of a bouncer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bouncer {
    pub mass: f64,
    pub force: f64,
    pub hbar: f64,
}

impl Bouncer {
    pub fn new(species: &Species, field: &FieldStrength, units: UnitsMode) -> Result<Self> {
        let force = field.force(species);
        if !(force > 0.0) {
            return invalid("the bouncer needs a positive force");
        }
        Ok(Bouncer { mass: species.m_inertial, force, hbar: units.hbar() })
    }

    /// Energy scale `(ħ²F²/2m)^{1/3}`.
    pub fn energy_scale(&self) -> f64 {
        (self.hbar * self.hbar * self.force * self.force / (2.0 * self.mass)).cbrt()
    }

    /// Inverse length `(2mF/ħ²)^{1/3}`.
    pub fn kappa(&self) -> f64 {
        (2.0 * self.mass * self.force / (self.hbar * self.hbar)).cbrt()
    }

    pub fn level(&self, n: usize, basis: BouncerBasis) -> Result<f64> {
        if n == 0 {
            return invalid("bouncer levels are numbered from 1");
        }
        let nq = n as f64 - 0.25;
        Ok(match basis {
            BouncerBasis::WkbPaper => {
                let m = self.mass;
                self.hbar * (m / self.hbar).cbrt() * (self.force / m).powf(2.0 / 3.0)
                    * (3.0 * PI / 8.0 * nq).powf(2.0 / 3.0)
            }
            BouncerBasis::WkbTextbook => self.energy_scale() * (1.5 * PI * nq).powf(2.0 / 3.0),
            BouncerBasis::ExactAiry => -airy_zero(n)? * self.energy_scale(),
        })
    }

    pub fn levels(&self, n_max: usize, basis: BouncerBasis) -> Result<Vec<f64>> {
        if n_max == 0 {
            return invalid("n_max must be at least 1");
        }
        (1..=n_max).map(|n| self.level(n, basis)).collect()
    }

    /// `(E_n − E_n')/ħ`.
    pub fn bohr_frequency(&self, n: usize, n_prime: usize, basis: BouncerBasis) -> Result<f64> {
        Ok((self.level(n, basis)? - self.level(n_prime, basis)?) / self.hbar)
    }

    /// Normalized eigenfunction `√κ Ai(κz + a_n)/|Ai'(a_n)|` on `z ≥ 0`.
    pub fn eigenfunction(&self, n: usize, z: f64) -> Result<f64> {
        if z < 0.0 {
            return Ok(0.0);
        }
        let a = airy_zero(n)?;
        let k = self.kappa();
        Ok(k.sqrt() * airy_ai(k * z + a).value / airy_ai(a).deriv.abs())
    }
}

pub fn bouncer_levels(
    n_max: usize,
    species: &Species,
    field: &FieldStrength,
    units: UnitsMode,
    basis: BouncerBasis,
) -> Result<Vec<f64>> {
    Bouncer::new(species, field, units)?.levels(n_max, basis)
}

pub fn bohr_frequency(
    n: usize,
    n_prime: usize,
    species: &Species,
    field: &FieldStrength,
    units: UnitsMode,
    basis: BouncerBasis,
) -> Result<f64> {
    Bouncer::new(species, field, units)?.bohr_frequency(n, n_prime, basis)
}

/// Superposition of bouncer eigenstates, `C_n` for `n = 1, 2, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct BouncerState {
    pub coefficients: Vec<Complex64>,
    pub levels: Vec<f64>,
    pub basis: BouncerBasis,
}

impl BouncerState {
    /// Normalizes `coefficients` and attaches the levels of `basis`.
    pub fn new(bouncer: &Bouncer, coefficients: &[Complex64], basis: BouncerBasis) -> Result<Self> {
        let norm: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if coefficients.is_empty() || norm == 0.0 {
            return invalid("a bouncer state needs at least one nonzero coefficient");
        }
        Ok(BouncerState {
            coefficients: coefficients.iter().map(|c| c / norm).collect(),
            levels: bouncer.levels(coefficients.len(), basis)?,
            basis,
        })
    }
}

/// `|Σ C_n ψ_n(z) e^{−iE_n t/ħ}|²` at each `z`.
pub fn bouncer_density(bouncer: &Bouncer, state: &BouncerState, z: &[f64], t: f64) -> Result<Vec<f64>> {
    let phases: Vec<Complex64> = state
        .coefficients
        .iter()
        .zip(&state.levels)
        .map(|(c, e)| c * Complex64::from_polar(1.0, -e * t / bouncer.hbar))
        .collect();
    z.iter()
        .map(|&zz| {
            let mut amp = Complex64::new(0.0, 0.0);
            for (n, p) in phases.iter().enumerate() {
                amp += p * bouncer.eigenfunction(n + 1, zz)?;
            }
            Ok(amp.norm_sqr())
        })
        .collect()
}

/// Initial Gaussian `(2πσ²)^{−1/4} exp(−(z − z0)²/4σ² + i k0 z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    pub z0: f64,
    pub sigma: f64,
    pub k0: f64,
}

/// Propagates a Gaussian packet in the potential `F z` for time `t > 0` by
/// integrating the Gaussian initial state against the closed-form kernel with
/// action `m(z−z')²/2t − Ft(z+z')/2 − F²t³/24m`.
pub fn gaussian_in_field(packet: &GaussianPacket, z: f64, t: f64, mass: f64, force: f64, hbar: f64) -> Complex64 {
    let i = Complex64::i();
    let s2 = packet.sigma * packet.sigma;
    let norm = (2.0 * PI * s2).powf(-0.25);
    if t == 0.0 {
        let d = z - packet.z0;
        return norm * (Complex64::new(-d * d / (4.0 * s2), packet.k0 * z)).exp();
    }
    // ∫ exp(−a z'² + b z' + c) dz' = √(π/a) exp(b²/4a + c)
    let a = Complex64::new(1.0 / (4.0 * s2), -mass / (2.0 * hbar * t));
    let b = packet.z0 / (2.0 * s2) + i * packet.k0 - i * (mass * z / t + force * t / 2.0) / hbar;
    let c = -packet.z0 * packet.z0 / (4.0 * s2)
        + i * (mass * z * z / (2.0 * t) - force * t * z / 2.0 - force * force * t.powi(3) / (24.0 * mass)) / hbar;
    let pre = (Complex64::new(mass, 0.0) / (2.0 * hbar * t * i * a)).sqrt();
    norm * pre * (b * b / (4.0 * a) + c).exp()
}

/// Deviations found when comparing the field-propagated packet with the
/// free packet shifted by the free-fall distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FallingPacketCheck {
    /// `max |ρ_field(z) − ρ_free(z + Ft²/2m)|` over the sample.
    pub density_deviation: f64,
    /// `max |arg ψ_field − arg ψ_free(z + Ft²/2m) + (Ft/ħ)(z + Ft²/6m)|` (mod 2π).
    pub phase_deviation: f64,
    /// `⟨z⟩` of the field-propagated packet.
    pub centroid: f64,
    /// Predicted centroid `z0 + ħk0 t/m − Ft²/2m`.
    pub predicted_centroid: f64,
}

/// Checks the free-fall translation identity
/// `ψ_field(z,t) = exp{−(iFt/ħ)(z + Ft²/6m)} ψ_free(z + Ft²/2m, t)`.
pub fn falling_packet(
    packet: &GaussianPacket,
    t: f64,
    species: &Species,
    field: &FieldStrength,
    units: UnitsMode,
) -> Result<FallingPacketCheck> {
    if !(packet.sigma > 0.0) {
        return invalid("packet width must be positive");
    }
    let (m, f, h) = (species.m_inertial, field.force(species), units.hbar());
    let shift = f * t * t / (2.0 * m);
    let predicted_centroid = packet.z0 + h * packet.k0 * t / m - shift;
    let spread = packet.sigma * (1.0 + (h * t / (2.0 * m * packet.sigma * packet.sigma)).powi(2)).sqrt();
    let n = 2001;
    let lo = predicted_centroid - 10.0 * spread;
    let dz = 20.0 * spread / (n - 1) as f64;
    let mut dens_dev: f64 = 0.0;
    let mut phase_dev: f64 = 0.0;
    let (mut mass_sum, mut first_moment) = (0.0, 0.0);
    for j in 0..n {
        let z = lo + dz * j as f64;
        let pf = gaussian_in_field(packet, z, t, m, f, h);
        let p0 = gaussian_in_field(packet, z + shift, t, m, 0.0, h);
        dens_dev = dens_dev.max((pf.norm_sqr() - p0.norm_sqr()).abs());
        if p0.norm() > 1e-8 {
            let predicted = -(f * t / h) * (z + f * t * t / (6.0 * m));
            let diff = (pf / p0).arg() - predicted;
            let wrapped = diff - 2.0 * PI * (diff / (2.0 * PI)).round();
            phase_dev = phase_dev.max(wrapped.abs());
        }
        let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
        mass_sum += w * pf.norm_sqr();
        first_moment += w * z * pf.norm_sqr();
    }
    Ok(FallingPacketCheck {
        density_deviation: dens_dev,
        phase_deviation: phase_dev,
        centroid: first_moment / mass_sum,
        predicted_centroid,
    })
}

/// Enclosed area of an interferometer in a uniform field.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferometerConfig {
    pub area: f64,
    pub species: Species,
    pub field: FieldStrength,
}

/// Gravitational phase difference `m_i F A/ħ²`.
pub fn interferometer_phase(config: &InterferometerConfig, units: UnitsMode) -> Result<f64> {
    if !(config.area >= 0.0) {
        return invalid("enclosed area must be non-negative");
    }
    let h = units.hbar();
    Ok(config.species.m_inertial * config.field.force(&config.species) * config.area / (h * h))
}

//! Paraxial slit diffraction in quasi-time, the on-axis focusing constant and
//! the height of the gravitational focus.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{domain, invalid, Result};
use crate::model::{Aperture, CanonicalBeam, Direction, FieldStrength, Grid, Species, UnitsMode};
use crate::numeric::roots::newton_bracketed;
use crate::quasitime::QuasiTimeMap;
use crate::specfun::fresnel_f;

/// Normalized transmitted wave right behind the plate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApertureWave {
    pub aperture: Aperture,
}

impl ApertureWave {
    pub fn height(&self) -> f64 {
        match self.aperture {
            Aperture::Single { width } => 1.0 / width.sqrt(),
            Aperture::Double { width, .. } => 1.0 / (2.0 * width).sqrt(),
        }
    }

    /// Value at `x`; exactly half the height on a slit edge.
    pub fn value(&self, x: f64) -> f64 {
        let half = 0.5 * self.aperture.width();
        let inside: f64 = self
            .aperture
            .centres()
            .iter()
            .map(|c| {
                let d = (x - c).abs();
                if d < half {
                    1.0
                } else if d == half {
                    0.5
                } else {
                    0.0
                }
            })
            .sum();
        inside * self.height()
    }

    /// `∫|ψ|² dx`, which is 1 by construction.
    pub fn norm(&self) -> f64 {
        let h = self.height();
        h * h * self.aperture.width() * self.aperture.centres().len() as f64
    }
}

pub fn aperture_wave(aperture: Aperture) -> ApertureWave {
    ApertureWave { aperture }
}

/// Free-particle amplitude after effective time `s` (complex beyond the turning point).
pub fn amplitude_at_time(x: f64, s: Complex64, aperture: &Aperture, mass: f64, hbar: f64) -> Complex64 {
    if s == Complex64::new(0.0, 0.0) {
        return Complex64::new(aperture_wave(*aperture).value(x), 0.0);
    }
    let c = (Complex64::new(mass, 0.0) / (2.0 * hbar * s)).sqrt();
    let phase = Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2);
    match *aperture {
        Aperture::Single { width } => {
            let h = 0.5 * width;
            phase / (PI * width).sqrt() * (fresnel_f(c * (h - x)) + fresnel_f(c * (h + x)))
        }
        Aperture::Double { width, half_separation: a } => {
            let h = 0.5 * width;
            let mut sum = Complex64::new(0.0, 0.0);
            for p in [-1.0, 1.0] {
                for q in [-1.0, 1.0] {
                    sum += fresnel_f(c * (h + p * a + q * x));
                }
            }
            phase / (2.0 * width * PI).sqrt() * sum
        }
    }
}

/// Diffracted amplitude at `(x, z)`; `F` enters only through `τ(z)`.
pub fn slit_amplitude(x: f64, z: f64, aperture: &Aperture, map: &QuasiTimeMap) -> Complex64 {
    let s = map.tau_of_z(z).effective();
    amplitude_at_time(x, s, aperture, map.mass, map.hbar)
}

/// On-axis single-slit amplitude `2 √(1/(iπL)) F(Z)` with `Z = √(m/(2ħs))·L/2`.
pub fn on_axis_single(z: f64, width: f64, map: &QuasiTimeMap) -> Complex64 {
    let s = map.tau_of_z(z).effective();
    let big_z = (Complex64::new(map.mass, 0.0) / (2.0 * map.hbar * s)).sqrt() * (0.5 * width);
    2.0 * (Complex64::new(0.0, PI * width)).inv().sqrt() * fresnel_f(big_z)
}

fn focus_equation(z: f64) -> (f64, f64) {
    let f = fresnel_f(Complex64::new(z, 0.0));
    let (s, c) = (z * z).sin_cos();
    let g = c * f.re + s * f.im;
    let dg = 1.0 + 2.0 * z * (c * f.im - s * f.re);
    (g, dg)
}

/// Root `Z*` of `cos(Z²)C(Z) + sin(Z²)S(Z) = 0` belonging to the first
/// maximum of `|F(Z)|²`.
pub fn focus_root() -> f64 {
    let mut a = 0.5;
    let step = 0.05;
    while focus_equation(a + step).0 > 0.0 {
        a += step;
    }
    newton_bracketed(focus_equation, a, a + step, 1e-15, 100).expect("bracket has a sign change")
}

/// Dimensionless focus constant `c* = ħτ*/(m L²) = 1/(8 Z*²)`.
pub fn focus_constant() -> f64 {
    let z = focus_root();
    1.0 / (8.0 * z * z)
}

/// Large-`Z` estimates of the focus constant.
///
/// Order 1 keeps the leading term of the asymptotic expansion, giving
/// `Z² = 3π/4`; order 2 adds the `1/Z³` correction.
pub fn focus_constant_asymptotic(order: u32) -> f64 {
    let zsq = 0.75 * PI;
    if order <= 1 {
        return 1.0 / (8.0 * zsq);
    }
    // √π/2 · sin(Z² + π/4) = 1/(4Z³)
    let h = |z: f64| {
        let v = 0.5 * PI.sqrt() * (z * z + 0.25 * PI).sin() - 0.25 / (z * z * z);
        let d = PI.sqrt() * z * (z * z + 0.25 * PI).cos() + 0.75 / z.powi(4);
        (v, d)
    };
    let z0 = zsq.sqrt();
    let z = newton_bracketed(h, z0 - 0.2, z0 + 0.2, 1e-15, 100).unwrap_or(z0);
    1.0 / (8.0 * z * z)
}

/// Source of the focus constant used by focus-height formulas.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FocusConstant {
    /// The root of the transcendental equation, computed at run time.
    #[default]
    Solved,
    /// The rounded value 0.055.
    Printed,
    Custom(f64),
}

impl FocusConstant {
    pub const PRINTED: f64 = 0.055;

    pub fn value(&self) -> f64 {
        match *self {
            FocusConstant::Solved => focus_constant(),
            FocusConstant::Printed => Self::PRINTED,
            FocusConstant::Custom(c) => c,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FocusReport {
    pub c_star: f64,
    pub tau_star: f64,
    pub z_star: f64,
    pub species: Species,
    pub field: FieldStrength,
    pub beam: CanonicalBeam,
    pub width: f64,
    pub hbar: f64,
}

/// Height of the gravitational focus below the plate.
///
/// Evaluated as `−F τ*²/(2m) − τ* √(2E/m)` with `τ* = c* m L²/ħ`; both terms
/// are negative, so nothing cancels.
pub fn focus_height(
    species: &Species,
    field: &FieldStrength,
    beam: &CanonicalBeam,
    width: f64,
    units: UnitsMode,
    constant: FocusConstant,
) -> Result<FocusReport> {
    let force = field.force(species);
    if !(force > 0.0) {
        return domain(format!("the focus requires a positive force, got {force}"));
    }
    if !(width > 0.0 && width.is_finite()) {
        return invalid(format!("slit width must be positive, got {width}"));
    }
    let map = QuasiTimeMap::from_beam(species, field, beam, units)?;
    let c_star = constant.value();
    let tau_star = c_star * species.m_inertial * width * width / map.hbar;
    let z_star = map.z_of_tau(tau_star)?;
    Ok(FocusReport {
        c_star,
        tau_star,
        z_star,
        species: species.clone(),
        field: *field,
        beam: *beam,
        width,
        hbar: map.hbar,
    })
}

/// How grid nodes on the incident side of the plate are filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IncidentFill {
    #[default]
    Zero,
    /// Plane wave with the WKB intensity profile `k(0)/k(z)`.
    Wkb,
}

/// Whether the evaluation may enter the classically forbidden region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    #[default]
    Continue,
    RealOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PatternOptions {
    pub direction: Direction,
    pub incident: IncidentFill,
    pub branch: Branch,
}

/// Complex amplitudes on a grid, row-major in z then x.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexAmplitudeField {
    pub grid: Grid,
    pub amplitudes: Vec<Complex64>,
}

impl ComplexAmplitudeField {
    pub fn intensity(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn at(&self, ix: usize, iz: usize) -> Complex64 {
        self.amplitudes[iz * self.grid.nx + ix]
    }
}

pub fn pattern_grid(
    aperture: &Aperture,
    map: &QuasiTimeMap,
    grid: &Grid,
    options: PatternOptions,
) -> Result<ComplexAmplitudeField> {
    let zt = map.turning_point();
    if options.branch == Branch::RealOnly && grid.z_max.max(grid.z_min) > zt {
        return domain(format!("grid reaches beyond the turning point z_t = {zt}"));
    }
    let k0 = map.wavenumber(0.0);
    let amplitudes = (0..grid.len())
        .into_par_iter()
        .map(|node| {
            let (x, z) = grid.node(node);
            let downstream = match options.direction {
                Direction::Downward => z <= 0.0,
                Direction::Upward => z >= 0.0,
            };
            if downstream {
                slit_amplitude(x, z, aperture, map)
            } else {
                match options.incident {
                    IncidentFill::Zero => Complex64::new(0.0, 0.0),
                    IncidentFill::Wkb => {
                        let k = map.wavenumber(z);
                        Complex64::new(if k > 0.0 { (k0 / k).sqrt() } else { 0.0 }, 0.0)
                    }
                }
            }
        })
        .collect();
    Ok(ComplexAmplitudeField { grid: *grid, amplitudes })
}

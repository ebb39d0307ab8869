//! Free-fall metrology with the gravitational focus: first-order response to
//! violations of the equivalence principle or changes of g, energy-spread
//! broadening, and the table of beam realizations.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Result};
use crate::model::{constants, kinetic_energy_from_temperature, CanonicalBeam, FieldStrength, Species, UnitsMode};
use crate::paraxial::{focus_height, FocusConstant};

/// Fractional changes of g and of the gravitational mass.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WepVariation {
    pub delta_g_over_g: f64,
    pub delta_mg_over_mi: f64,
}

impl WepVariation {
    /// `ε = −δg/g − δm_g/m_i`.
    pub fn epsilon(&self) -> f64 {
        0.0 - self.delta_g_over_g - self.delta_mg_over_mi
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub species: String,
    pub e_kin: f64,
    pub width: f64,
    pub c_star: f64,
    pub z_focus_0: f64,
    pub z_focus_prime_0: f64,
    pub epsilon: f64,
    pub z_focus_shifted: f64,
    /// `|dz_focus/dE|`, length per unit energy.
    pub dz_de: f64,
}

/// Quantum part of the focus depth, `c² L⁴ β² F/(2 m)` with `β = m/ħ`.
fn sensitivity_factor(c: f64, width: f64, mass: f64, force: f64, hbar: f64) -> f64 {
    let beta = mass / hbar;
    c * c * width.powi(4) * beta * beta * force / (2.0 * mass)
}

/// `c L² β / √(2 m E)`.
fn energy_slope(c: f64, width: f64, mass: f64, hbar: f64, e_kin: f64) -> f64 {
    c * width * width * (mass / hbar) / (2.0 * mass * e_kin).sqrt()
}

/// Focus position and its first-order response for a beam entering the slit
/// with kinetic energy `e_kin` (source at the plate).
pub fn sensitivity_report(
    species: &Species,
    field: &FieldStrength,
    e_kin: f64,
    width: f64,
    variation: &WepVariation,
    units: UnitsMode,
    constant: FocusConstant,
) -> Result<SensitivityReport> {
    if !(e_kin >= 0.0) {
        return domain(format!("kinetic energy must be non-negative, got {e_kin}"));
    }
    let beam = CanonicalBeam { energy: e_kin, speed: (2.0 * e_kin / species.m_inertial).sqrt(), z0: 0.0 };
    let focus = focus_height(species, field, &beam, width, units, constant)?;
    let c = focus.c_star;
    let force = field.force(species);
    let z_prime = sensitivity_factor(c, width, species.m_inertial, force, focus.hbar);
    let epsilon = variation.epsilon();
    let dz_de = if e_kin > 0.0 {
        energy_slope(c, width, species.m_inertial, focus.hbar, e_kin)
    } else {
        f64::INFINITY
    };
    Ok(SensitivityReport {
        species: species.name.clone(),
        e_kin,
        width,
        c_star: c,
        z_focus_0: focus.z_star,
        z_focus_prime_0: z_prime,
        epsilon,
        z_focus_shifted: focus.z_star + epsilon * z_prime,
        dz_de,
    })
}

/// Focus displacement `|dz/dE|·δE` caused by an energy spread `δE`.
pub fn energy_spread_width(
    species: &Species,
    e_kin: f64,
    width: f64,
    delta_e: f64,
    units: UnitsMode,
    constant: FocusConstant,
) -> Result<f64> {
    if !(e_kin > 0.0) {
        return domain("the energy-spread width diverges at zero kinetic energy");
    }
    if !(width > 0.0) {
        return invalid(format!("slit width must be positive, got {width}"));
    }
    Ok(energy_slope(constant.value(), width, species.m_inertial, units.hbar(), e_kin) * delta_e.abs())
}

/// One beam realization of the reference table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Preset {
    pub species: Species,
    pub kind: &'static str,
    pub temperature: Option<f64>,
    pub width: f64,
    /// Tabulated kinetic energy in eV.
    pub e_kin_ev: f64,
    pub printed_z_focus0: f64,
    pub printed_z_focus_prime0: f64,
    pub flags: Vec<String>,
}

/// The reference beam realizations.
pub fn table1_presets() -> Vec<Table1Preset> {
    let n = Species::neutron;
    let nh3 = Species::ammonia;
    let row = |species: Species, kind, t: Option<f64>, l, e, z0, zp, flags: &[&str]| Table1Preset {
        species,
        kind,
        temperature: t,
        width: l,
        e_kin_ev: e,
        printed_z_focus0: z0,
        printed_z_focus_prime0: zp,
        flags: flags.iter().map(|s| s.to_string()).collect(),
    };
    vec![
        row(n(), "nuclear", None, 1e-3, 3.00e-7, -10.34, 3.73, &[]),
        row(
            n(),
            "nuclear",
            Some(20.0),
            1e-3,
            2.58e-3,
            -6.17e5,
            3.73,
            &["exponent_discrepancy", "printed_z_focus0_m=-6.17e5"],
        ),
        row(n(), "nuclear", Some(300.0), 1e-3, 3.87e-2, -2.38e3, 3.73, &[]),
        row(nh3(), "molecular", Some(77.0), 1e-5, 9.95e-3, -0.49, 1.07e-5, &[]),
        row(nh3(), "molecular", Some(300.0), 1e-5, 3.87e-2, -0.98, 1.07e-5, &[]),
        row(nh3(), "molecular", Some(1200.0), 1e-5, 1.54e-1, -1.96, 1.07e-5, &[]),
        row(
            Species::cesium133(),
            "atomic",
            Some(1.0),
            1e-4,
            8.61e-5,
            -19.51,
            6.59,
            &["printed_E_kin_equals_kB_T"],
        ),
        row(
            Species::rubidium87(),
            "bec",
            Some(1.7e-7),
            1e-4,
            4.28e-11,
            -2.72,
            2.71,
            &["free_fall_energy_only"],
        ),
        row(
            Species::potassium39(),
            "bec",
            Some(5.0e-7),
            1e-4,
            4.28e-11,
            -0.57,
            0.56,
            &["free_fall_energy_only"],
        ),
    ]
}

/// A computed table row; serializes to the report schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub species: String,
    #[serde(rename = "T_K")]
    pub temperature: Option<f64>,
    #[serde(rename = "L_m")]
    pub width: f64,
    #[serde(rename = "E_kin_eV")]
    pub e_kin_ev: f64,
    #[serde(rename = "z_focus0_m")]
    pub z_focus0: f64,
    #[serde(rename = "z_focus_prime0_m")]
    pub z_focus_prime0: f64,
    pub flags: Vec<String>,
}

/// Computes every table row at standard gravity in SI units.
///
/// Kinetic energies are the tabulated ones; for thermal rows they agree with
/// `3 k_B T/2` to within rounding, except for the flagged Cs row.
pub fn table1_generate(presets: &[Table1Preset], field: &FieldStrength, constant: FocusConstant) -> Result<Vec<Table1Row>> {
    presets
        .par_iter()
        .map(|p| {
            let e_kin = p.e_kin_ev * constants::EV;
            let r = sensitivity_report(
                &p.species,
                field,
                e_kin,
                p.width,
                &WepVariation::default(),
                UnitsMode::Si,
                constant,
            )?;
            let mut flags = p.flags.clone();
            if let Some(t) = p.temperature.filter(|_| p.kind != "bec") {
                let thermal = kinetic_energy_from_temperature(t)? / constants::EV;
                if ((thermal - p.e_kin_ev) / thermal).abs() > 0.02 {
                    flags.push(format!("thermal_E_kin_eV={thermal:.3e}"));
                }
            }
            Ok(Table1Row {
                species: p.species.name.clone(),
                temperature: p.temperature,
                width: p.width,
                e_kin_ev: p.e_kin_ev,
                z_focus0: r.z_focus_0,
                z_focus_prime0: r.z_focus_prime_0,
                flags,
            })
        })
        .collect()
}

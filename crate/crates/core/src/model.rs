//! Domain types shared by every solver: unit conventions, constants, particle
//! species, field strength, beam specification, apertures and sampling grids.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};

/// Fixed SI constants.
pub mod constants {
    /// Reduced Planck constant, J·s.
    pub const HBAR: f64 = 1.054571817e-34;
    /// Boltzmann constant, J/K.
    pub const K_B: f64 = 1.380649e-23;
    /// Standard gravity, m/s².
    pub const G_STANDARD: f64 = 9.80665;
    /// One electron-volt in joules.
    pub const EV: f64 = 1.602176634e-19;
    /// Atomic mass unit, kg.
    pub const AMU: f64 = 1.66053907e-27;
    /// Neutron mass, kg.
    pub const NEUTRON_MASS: f64 = 1.67492750e-27;
}

/// How raw numbers are interpreted.
///
/// `Model` takes every value verbatim with ħ = 1 (the convention of the
/// dimensionless figure parameters); `Si` uses SI units and the fixed constants
/// in [`constants`]. Neither mode performs unit checking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitsMode {
    #[default]
    Model,
    Si,
}

impl UnitsMode {
    pub fn hbar(self) -> f64 {
        match self {
            UnitsMode::Model => 1.0,
            UnitsMode::Si => constants::HBAR,
        }
    }
}

/// A particle species with separately specified inertial and gravitational mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Species {
    pub name: String,
    pub m_inertial: f64,
    pub m_grav: f64,
}

impl Species {
    pub fn new(name: impl Into<String>, m_inertial: f64, m_grav: f64) -> Result<Self> {
        let name = name.into();
        if !(m_inertial > 0.0 && m_inertial.is_finite()) {
            return invalid(format!("{name}: inertial mass must be positive, got {m_inertial}"));
        }
        if !(m_grav > 0.0 && m_grav.is_finite()) {
            return invalid(format!("{name}: gravitational mass must be positive, got {m_grav}"));
        }
        Ok(Species { name, m_inertial, m_grav })
    }

    /// Species obeying the weak equivalence principle (m_g = m_i).
    pub fn with_mass(name: impl Into<String>, mass: f64) -> Result<Self> {
        Self::new(name, mass, mass)
    }

    pub fn neutron() -> Self {
        Species::with_mass("neutron", constants::NEUTRON_MASS).unwrap()
    }

    pub fn ammonia() -> Self {
        Species::with_mass("NH3", 17.03 * constants::AMU).unwrap()
    }

    pub fn cesium133() -> Self {
        Species::with_mass("Cs-133", 132.905 * constants::AMU).unwrap()
    }

    pub fn rubidium87() -> Self {
        Species::with_mass("Rb-87", 86.909 * constants::AMU).unwrap()
    }

    pub fn potassium39() -> Self {
        Species::with_mass("K-39", 39.0983 * constants::AMU).unwrap()
    }

    /// Unit-mass particle used by the dimensionless figure presets.
    pub fn model_unit() -> Self {
        Species::with_mass("model", 1.0).unwrap()
    }

    pub fn presets() -> Vec<Species> {
        vec![
            Self::neutron(),
            Self::ammonia(),
            Self::cesium133(),
            Self::rubidium87(),
            Self::potassium39(),
        ]
    }

    /// Looks up a preset by name; a few common aliases are accepted.
    pub fn preset(name: &str) -> Option<Species> {
        let key = name.to_ascii_lowercase();
        let canonical = match key.as_str() {
            "n" | "neutron" => "neutron",
            "nh3" | "ammonia" => "NH3",
            "cs" | "cs-133" | "cs133" => "Cs-133",
            "rb" | "rb-87" | "rb87" => "Rb-87",
            "k" | "k-39" | "k39" => "K-39",
            "model" => return Some(Self::model_unit()),
            _ => return None,
        };
        Self::presets().into_iter().find(|s| s.name == canonical)
    }

    /// Copy whose gravitational mass differs from the inertial one by the
    /// fraction `delta_mg_over_mi`.
    pub fn with_wep_violation(&self, delta_mg_over_mi: f64) -> Result<Self> {
        Species::new(
            self.name.clone(),
            self.m_inertial,
            self.m_inertial * (1.0 + delta_mg_over_mi),
        )
    }
}

/// Uniform gravitational acceleration; the force on a species is `m_g · g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldStrength {
    pub g: f64,
}

impl Default for FieldStrength {
    fn default() -> Self {
        FieldStrength { g: constants::G_STANDARD }
    }
}

impl FieldStrength {
    pub fn new(g: f64) -> Result<Self> {
        if !(g >= 0.0 && g.is_finite()) {
            return invalid(format!("acceleration must be finite and non-negative, got {g}"));
        }
        Ok(FieldStrength { g })
    }

    /// Field that exerts `force` on `species`.
    pub fn from_force(force: f64, species: &Species) -> Result<Self> {
        Self::new(force / species.m_grav)
    }

    pub fn force(&self, species: &Species) -> f64 {
        species.m_grav * self.g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Downward,
    Upward,
}

/// One of the three equivalent ways to specify the incident beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BeamSpec {
    /// Total energy E with the source at height `z0`.
    TotalEnergy { energy: f64, z0: f64 },
    /// Kinetic energy at the source height `z0`.
    KineticEnergy { e_kin: f64, z0: f64 },
    /// Speed at the source height `z0`.
    Speed { v: f64, z0: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamConfig {
    pub spec: BeamSpec,
    pub direction: Direction,
}

impl BeamConfig {
    pub fn downward(spec: BeamSpec) -> Self {
        BeamConfig { spec, direction: Direction::Downward }
    }

    pub fn upward(spec: BeamSpec) -> Self {
        BeamConfig { spec, direction: Direction::Upward }
    }
}

/// Canonical beam triple satisfying `E = m_i v²/2 + F z0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalBeam {
    pub energy: f64,
    pub speed: f64,
    pub z0: f64,
}

impl CanonicalBeam {
    pub fn kinetic_energy(&self, species: &Species) -> f64 {
        0.5 * species.m_inertial * self.speed * self.speed
    }

    pub fn to_spec(&self, species: &Species, kind: BeamSpecKind) -> BeamSpec {
        match kind {
            BeamSpecKind::TotalEnergy => BeamSpec::TotalEnergy { energy: self.energy, z0: self.z0 },
            BeamSpecKind::KineticEnergy => BeamSpec::KineticEnergy {
                e_kin: self.kinetic_energy(species),
                z0: self.z0,
            },
            BeamSpecKind::Speed => BeamSpec::Speed { v: self.speed, z0: self.z0 },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeamSpecKind {
    TotalEnergy,
    KineticEnergy,
    Speed,
}

/// Resolves any beam specification to the canonical (E, v, z0) triple.
pub fn convert_beam(
    beam: &BeamConfig,
    species: &Species,
    field: &FieldStrength,
) -> Result<CanonicalBeam> {
    let m = species.m_inertial;
    let force = field.force(species);
    let (energy, e_kin, z0) = match beam.spec {
        BeamSpec::TotalEnergy { energy, z0 } => (energy, energy - force * z0, z0),
        BeamSpec::KineticEnergy { e_kin, z0 } => (e_kin + force * z0, e_kin, z0),
        BeamSpec::Speed { v, z0 } => {
            if !(v >= 0.0) {
                return domain(format!("speed must be non-negative, got {v}"));
            }
            (0.5 * m * v * v + force * z0, 0.5 * m * v * v, z0)
        }
    };
    if !(energy.is_finite() && z0.is_finite()) {
        return invalid("beam parameters must be finite");
    }
    if e_kin < 0.0 {
        return domain(format!("implied kinetic energy at the source is negative ({e_kin})"));
    }
    let speed = match beam.spec {
        BeamSpec::Speed { v, .. } => v,
        _ => (2.0 * e_kin / m).sqrt(),
    };
    Ok(CanonicalBeam { energy, speed, z0 })
}

/// Mean thermal kinetic energy `3 k_B T / 2`, in joules.
pub fn kinetic_energy_from_temperature(temperature: f64) -> Result<f64> {
    if !(temperature >= 0.0) {
        return domain(format!("temperature must be non-negative, got {temperature}"));
    }
    Ok(1.5 * constants::K_B * temperature)
}

/// Rectangular aperture in the plate at z = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Aperture {
    /// One slit of width `width` centred at x = 0.
    Single { width: f64 },
    /// Two slits of width `width` centred at ±`half_separation`.
    Double { width: f64, half_separation: f64 },
}

impl Aperture {
    pub fn single(width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return invalid(format!("slit width must be positive, got {width}"));
        }
        Ok(Aperture::Single { width })
    }

    pub fn double(width: f64, half_separation: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return invalid(format!("slit width must be positive, got {width}"));
        }
        if !(half_separation > 0.5 * width && half_separation.is_finite()) {
            return invalid(format!(
                "double slit requires a > L/2 (a = {half_separation}, L = {width})"
            ));
        }
        Ok(Aperture::Double { width, half_separation })
    }

    pub fn width(&self) -> f64 {
        match *self {
            Aperture::Single { width } | Aperture::Double { width, .. } => width,
        }
    }

    /// Slit centres.
    pub fn centres(&self) -> Vec<f64> {
        match *self {
            Aperture::Single { .. } => vec![0.0],
            Aperture::Double { half_separation, .. } => vec![-half_separation, half_separation],
        }
    }
}

/// Rectangular (x, z) sampling grid. Node ordering is row-major in z, then x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub z_min: f64,
    pub z_max: f64,
    pub nz: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, nx: usize, z_min: f64, z_max: f64, nz: usize) -> Result<Self> {
        if nx == 0 || nz == 0 {
            return invalid("grid counts must be at least 1");
        }
        for (lo, hi, n, axis) in [(x_min, x_max, nx, "x"), (z_min, z_max, nz, "z")] {
            if !(lo.is_finite() && hi.is_finite()) {
                return invalid(format!("{axis} range must be finite"));
            }
            if n > 1 && !(hi > lo) {
                return invalid(format!("{axis} range is degenerate ({lo} .. {hi})"));
            }
        }
        Ok(Grid { x_min, x_max, nx, z_min, z_max, nz })
    }

    pub fn len(&self) -> usize {
        self.nx * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self, i: usize) -> f64 {
        axis_value(self.x_min, self.x_max, self.nx, i)
    }

    pub fn z(&self, j: usize) -> f64 {
        axis_value(self.z_min, self.z_max, self.nz, j)
    }

    pub fn dx(&self) -> f64 {
        axis_step(self.x_min, self.x_max, self.nx)
    }

    pub fn dz(&self) -> f64 {
        axis_step(self.z_min, self.z_max, self.nz)
    }

    /// Coordinates of the node at flat index `k`.
    pub fn node(&self, k: usize) -> (f64, f64) {
        (self.x(k % self.nx), self.z(k / self.nx))
    }
}

fn axis_value(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if n == 1 {
        lo
    } else if i == n - 1 {
        hi
    } else {
        lo + (hi - lo) * (i as f64) / ((n - 1) as f64)
    }
}

fn axis_step(lo: f64, hi: f64, n: usize) -> f64 {
    if n == 1 {
        0.0
    } else {
        (hi - lo) / ((n - 1) as f64)
    }
}

/// Species table plus the default acceleration, exchanged as `key = value` text.
///
/// Keys are `<species>.m_inertial`, `<species>.m_grav` and `g`; `#` starts a comment.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesRegistry {
    pub species: BTreeMap<String, Species>,
    pub g: f64,
}

impl Default for SpeciesRegistry {
    fn default() -> Self {
        let species = Species::presets().into_iter().map(|s| (s.name.clone(), s)).collect();
        SpeciesRegistry { species, g: constants::G_STANDARD }
    }
}

impl SpeciesRegistry {
    pub fn get(&self, name: &str) -> Option<&Species> {
        self.species
            .get(name)
            .or_else(|| Species::preset(name).and_then(|p| self.species.get(&p.name)))
    }

    pub fn to_kv_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# hbar = {:e} (fixed)", constants::HBAR);
        let _ = writeln!(out, "# k_B = {:e} (fixed)", constants::K_B);
        let _ = writeln!(out, "# eV = {:e} (fixed)", constants::EV);
        let _ = writeln!(out, "g = {:?}", self.g);
        for s in self.species.values() {
            let _ = writeln!(out, "{}.m_inertial = {:?}", s.name, s.m_inertial);
            let _ = writeln!(out, "{}.m_grav = {:?}", s.name, s.m_grav);
        }
        out
    }

    /// Applies `key = value` overrides on top of `self`. A species named for the
    /// first time must supply `m_inertial`; `m_grav` defaults to it.
    pub fn apply_kv_text(&mut self, text: &str) -> Result<()> {
        let mut pending: BTreeMap<String, (Option<f64>, Option<f64>)> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim();
            let value: f64 = value.trim().parse().map_err(|_| {
                Error::Parse(format!("line {}: `{}` is not a number", lineno + 1, value.trim()))
            })?;
            if key == "g" {
                self.g = FieldStrength::new(value)?.g;
                continue;
            }
            let (name, field) = key.rsplit_once('.').ok_or_else(|| {
                Error::Parse(format!("line {}: unknown key `{key}`", lineno + 1))
            })?;
            let entry = pending.entry(name.to_string()).or_default();
            match field {
                "m_inertial" => entry.0 = Some(value),
                "m_grav" => entry.1 = Some(value),
                other => {
                    return Err(Error::Parse(format!(
                        "line {}: unknown species field `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        for (name, (mi, mg)) in pending {
            let base = self.species.get(&name).cloned();
            let m_inertial = mi
                .or(base.as_ref().map(|s| s.m_inertial))
                .ok_or_else(|| Error::Parse(format!("species `{name}` lacks m_inertial")))?;
            let m_grav = mg.or(base.as_ref().map(|s| s.m_grav)).unwrap_or(m_inertial);
            self.species.insert(name.clone(), Species::new(name, m_inertial, m_grav)?);
        }
        Ok(())
    }

    pub fn from_kv_text(text: &str) -> Result<Self> {
        let mut reg = SpeciesRegistry { species: BTreeMap::new(), g: constants::G_STANDARD };
        reg.apply_kv_text(text)?;
        Ok(reg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_beam_has_zero_energy() {
        let sp = Species::model_unit();
        let f = FieldStrength::from_force(5.0, &sp).unwrap();
        let c = convert_beam(&BeamConfig::downward(BeamSpec::Speed { v: 0.0, z0: 0.0 }), &sp, &f)
            .unwrap();
        assert_eq!(c.energy, 0.0);
    }

    #[test]
    fn model_units_energy() {
        let sp = Species::model_unit();
        let f = FieldStrength::from_force(5.0, &sp).unwrap();
        let c = convert_beam(&BeamConfig::downward(BeamSpec::Speed { v: 2.0, z0: 0.0 }), &sp, &f)
            .unwrap();
        assert_eq!(c.energy, 2.0);
    }

    #[test]
    fn ucn_speed() {
        let sp = Species::neutron();
        let f = FieldStrength::default();
        let e_kin = 3.00e-7 * constants::EV;
        let c = convert_beam(
            &BeamConfig::downward(BeamSpec::KineticEnergy { e_kin, z0: 0.0 }),
            &sp,
            &f,
        )
        .unwrap();
        // arithmetic oracle: sqrt(2 E / m) = 7.5759 m/s
        let oracle = (2.0 * 3.00e-7 * 1.602176634e-19 / 1.67492750e-27_f64).sqrt();
        assert!((c.speed - oracle).abs() < 1e-12 * oracle);
        assert!((c.speed - 7.58).abs() / 7.58 < 0.005);
    }

    #[test]
    fn negative_kinetic_energy_is_domain_error() {
        let sp = Species::model_unit();
        let f = FieldStrength::from_force(5.0, &sp).unwrap();
        let beam = BeamConfig::downward(BeamSpec::TotalEnergy { energy: 1.0, z0: 1.0 });
        assert!(matches!(convert_beam(&beam, &sp, &f), Err(Error::Domain(_))));
        let beam = BeamConfig::downward(BeamSpec::KineticEnergy { e_kin: -1.0, z0: 0.0 });
        assert!(matches!(convert_beam(&beam, &sp, &f), Err(Error::Domain(_))));
    }

    #[test]
    fn thermal_energies() {
        assert_eq!(kinetic_energy_from_temperature(0.0).unwrap(), 0.0);
        let e300 = kinetic_energy_from_temperature(300.0).unwrap() / constants::EV;
        assert!((e300 - 3.87e-2).abs() / 3.87e-2 < 0.01);
        let e20 = kinetic_energy_from_temperature(20.0).unwrap() / constants::EV;
        assert!((e20 - 2.58e-3).abs() / 2.58e-3 < 0.01);
        assert!(kinetic_energy_from_temperature(-1.0).is_err());
        let t = 123.4;
        assert_eq!(
            kinetic_energy_from_temperature(2.0 * t).unwrap(),
            2.0 * kinetic_energy_from_temperature(t).unwrap()
        );
    }

    #[test]
    fn aperture_validation() {
        assert!(Aperture::single(0.0).is_err());
        assert!(Aperture::double(1.0, 0.5).is_err());
        assert!(Aperture::double(1.0, 0.51).is_ok());
    }

    #[test]
    fn grid_nodes() {
        let g = Grid::new(-1.0, 1.0, 3, -2.0, 0.0, 2).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.node(0), (-1.0, -2.0));
        assert_eq!(g.node(4), (0.0, 0.0));
        assert!(Grid::new(0.0, 0.0, 2, 0.0, 1.0, 2).is_err());
        assert!(Grid::new(0.0, 0.0, 1, 0.0, 1.0, 2).is_ok());
        assert!(Grid::new(0.0, 1.0, 0, 0.0, 1.0, 2).is_err());
    }

    #[test]
    fn registry_text_round_trip() {
        let reg = SpeciesRegistry::default();
        let text = reg.to_kv_text();
        let back = SpeciesRegistry::from_kv_text(&text).unwrap();
        assert_eq!(reg, back);
    }

    #[test]
    fn registry_overrides() {
        let mut reg = SpeciesRegistry::default();
        reg.apply_kv_text("# violate WEP\nneutron.m_grav = 1.7e-27\nfoo.m_inertial = 2.0\ng = 9.81\n")
            .unwrap();
        assert_eq!(reg.get("neutron").unwrap().m_grav, 1.7e-27);
        assert_eq!(reg.get("foo").unwrap().m_grav, 2.0);
        assert_eq!(reg.g, 9.81);
        assert!(reg.apply_kv_text("bar.m_grav = 1.0").is_err());
        assert!(reg.apply_kv_text("nonsense").is_err());
        assert!(reg.apply_kv_text("neutron.m_inertial = -1").is_err());
    }
}

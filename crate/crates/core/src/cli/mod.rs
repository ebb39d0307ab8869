//! Command-line front end.
//!
//! Every parameter can come from a preset, a `key = value` config file or a
//! flag of the same name, in increasing order of precedence. Output is CSV or
//! JSON written to `--out` or standard output.

pub mod presets;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use crate::error::Error;
use crate::metrology::{self, WepVariation};
use crate::model::{
    constants, convert_beam, kinetic_energy_from_temperature, Aperture, BeamConfig, BeamSpec,
    CanonicalBeam, Direction, FieldStrength, Grid, Species, SpeciesRegistry, UnitsMode,
};
use crate::nonparaxial::{self, KappaStrategy, NonparaxialParams, QuadratureSpec};
use crate::paraxial::{self, FocusConstant, IncidentFill, PatternOptions};
use crate::quasitime::QuasiTimeMap;
use crate::reference::{BouncerBasis, Bouncer};
use crate::selftest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_SELFTEST: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "gravidiff", version, about = "Matter-wave diffraction in a uniform gravitational field")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Paraxial diffraction pattern on a grid (CSV).
    Pattern(Params),
    /// Near-zone single-slit field beyond the paraxial approximation (CSV).
    Nearzone(Params),
    /// Location of the gravitational focus (JSON).
    Focus(Params),
    /// Focus shift under equivalence-principle or g variations (JSON).
    Sensitivity(Params),
    /// Table of beam realizations (JSON or CSV).
    Table1(Params),
    /// Quantum-bouncer levels and Bohr frequencies (JSON).
    Bounce(Params),
    /// Run the built-in consistency checks.
    Selftest,
}

#[derive(Args, Debug, Default)]
struct Params {
    /// Flat `key = value` file; flags override it.
    #[arg(long, allow_negative_numbers = true)]
    config: Option<String>,
    /// Named parameter set: fig1, fig2, fig3, fig4.
    #[arg(long, allow_negative_numbers = true)]
    preset: Option<String>,
    /// Species overrides as `name.m_inertial = ...` lines.
    #[arg(long, allow_negative_numbers = true)]
    species_file: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long, allow_negative_numbers = true)]
    out: Option<String>,
    /// model | si
    #[arg(long, allow_negative_numbers = true)]
    units: Option<String>,
    /// Species preset name (neutron, NH3, Cs-133, Rb-87, K-39).
    #[arg(long, allow_negative_numbers = true)]
    species: Option<String>,
    /// Inertial mass (also sets the gravitational mass unless given).
    #[arg(long, allow_negative_numbers = true)]
    mass: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    m_grav: Option<String>,
    /// Gravitational acceleration.
    #[arg(long, allow_negative_numbers = true)]
    g: Option<String>,
    /// Force m_g·g; takes precedence over --g.
    #[arg(long, allow_negative_numbers = true)]
    force: Option<String>,
    /// Total energy.
    #[arg(long, allow_negative_numbers = true)]
    energy: Option<String>,
    /// Kinetic energy at the source.
    #[arg(long, allow_negative_numbers = true)]
    ekin: Option<String>,
    /// Kinetic energy at the source in eV (SI units only).
    #[arg(long, allow_negative_numbers = true)]
    ekin_ev: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    speed: Option<String>,
    /// Temperature for a thermal kinetic energy 3k_BT/2 (SI units only).
    #[arg(long, allow_negative_numbers = true)]
    temperature: Option<String>,
    /// Source height.
    #[arg(long, allow_negative_numbers = true)]
    z0: Option<String>,
    /// downward | upward
    #[arg(long, allow_negative_numbers = true)]
    direction: Option<String>,
    /// single | double
    #[arg(long, allow_negative_numbers = true)]
    aperture: Option<String>,
    /// Slit width L.
    #[arg(long, allow_negative_numbers = true)]
    width: Option<String>,
    /// Half-separation a of a double slit.
    #[arg(long, allow_negative_numbers = true)]
    half_sep: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    x_min: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    x_max: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    nx: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    z_min: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    z_max: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    nz: Option<String>,
    /// Grid axes: energy (zħ/√(2mE), x/L), force (2zħ/(FmL⁴), x/L) or raw.
    #[arg(long, allow_negative_numbers = true)]
    axes: Option<String>,
    /// Incident side of the grid: zero | wkb
    #[arg(long, allow_negative_numbers = true)]
    incident: Option<String>,
    /// csv | json
    #[arg(long, allow_negative_numbers = true)]
    format: Option<String>,
    /// Focus constant: solved | printed | a number.
    #[arg(long, allow_negative_numbers = true)]
    constant: Option<String>,
    /// consistent | paper-literal
    #[arg(long, allow_negative_numbers = true)]
    kappa: Option<String>,
    /// Quadrature tolerance for near-zone fields.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    delta_g: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    delta_mg: Option<String>,
    /// Energy spread for the focus-width estimate.
    #[arg(long, allow_negative_numbers = true)]
    delta_e: Option<String>,
    /// Energy spread in eV (SI units only).
    #[arg(long, allow_negative_numbers = true)]
    delta_e_ev: Option<String>,
    /// Number of bouncer levels.
    #[arg(long, allow_negative_numbers = true)]
    n_max: Option<String>,
}

impl Params {
    fn flag_pairs(&self) -> Vec<(&'static str, &Option<String>)> {
        vec![
            ("units", &self.units),
            ("species", &self.species),
            ("mass", &self.mass),
            ("m-grav", &self.m_grav),
            ("g", &self.g),
            ("force", &self.force),
            ("energy", &self.energy),
            ("ekin", &self.ekin),
            ("ekin-ev", &self.ekin_ev),
            ("speed", &self.speed),
            ("temperature", &self.temperature),
            ("z0", &self.z0),
            ("direction", &self.direction),
            ("aperture", &self.aperture),
            ("width", &self.width),
            ("half-sep", &self.half_sep),
            ("x-min", &self.x_min),
            ("x-max", &self.x_max),
            ("nx", &self.nx),
            ("z-min", &self.z_min),
            ("z-max", &self.z_max),
            ("nz", &self.nz),
            ("axes", &self.axes),
            ("incident", &self.incident),
            ("format", &self.format),
            ("constant", &self.constant),
            ("kappa", &self.kappa),
            ("tol", &self.tol),
            ("delta-g", &self.delta_g),
            ("delta-mg", &self.delta_mg),
            ("delta-e", &self.delta_e),
            ("delta-e-ev", &self.delta_e_ev),
            ("n-max", &self.n_max),
        ]
    }
}

const KNOWN_KEYS: [&str; 33] = [
    "units", "species", "mass", "m-grav", "g", "force", "energy", "ekin", "ekin-ev", "speed",
    "temperature", "z0", "direction", "aperture", "width", "half-sep", "x-min", "x-max", "nx",
    "z-min", "z-max", "nz", "axes", "incident", "format", "constant", "kappa", "tol", "delta-g",
    "delta-mg", "delta-e", "delta-e-ev", "n-max",
];

/// Failure of a CLI run, mapped to an exit status.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Usage(m),
            other => Failure::Domain(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(msg.into()))
}

/// Resolved parameters after layering preset, config file and flags.
struct Settings {
    values: BTreeMap<String, String>,
    registry: SpeciesRegistry,
}

impl Settings {
    fn resolve(p: &Params) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        if let Some(name) = &p.preset {
            let pairs = presets::preset(name).ok_or_else(|| {
                Failure::Usage(format!("unknown preset `{name}` (known: {})", presets::NAMES.join(", ")))
            })?;
            for (k, v) in pairs {
                values.insert(k.to_string(), v.to_string());
            }
        }
        if let Some(path) = &p.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read config `{path}`: {e}")))?;
            for (k, v) in parse_config(&text)? {
                values.insert(k, v);
            }
        }
        for (k, v) in p.flag_pairs() {
            if let Some(v) = v {
                values.insert(k.to_string(), v.clone());
            }
        }
        let mut registry = SpeciesRegistry::default();
        if let Some(path) = &p.species_file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read species file `{path}`: {e}")))?;
            registry.apply_kv_text(&text)?;
        }
        Ok(Settings { values, registry })
    }

    fn str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn num(&self, key: &str) -> CliResult<Option<f64>> {
        match self.str(key) {
            None => Ok(None),
            Some(s) => s
                .trim()
                .parse::<f64>()
                .map(Some)
                .map_err(|_| Failure::Usage(format!("--{key}: `{s}` is not a number"))),
        }
    }

    fn num_or(&self, key: &str, default: f64) -> CliResult<f64> {
        Ok(self.num(key)?.unwrap_or(default))
    }

    fn require(&self, key: &str) -> CliResult<f64> {
        self.num(key)?.ok_or_else(|| Failure::Usage(format!("missing --{key}")))
    }

    fn count(&self, key: &str, default: usize) -> CliResult<usize> {
        match self.str(key) {
            None => Ok(default),
            Some(s) => s
                .trim()
                .parse::<usize>()
                .map_err(|_| Failure::Usage(format!("--{key}: `{s}` is not a count"))),
        }
    }

    fn choice<'a>(&'a self, key: &str, default: &'a str, allowed: &[&str]) -> CliResult<&'a str> {
        let v = self.str(key).unwrap_or(default);
        if allowed.contains(&v) {
            Ok(v)
        } else {
            usage(format!("--{key}: `{v}` is not one of {}", allowed.join(", ")))
        }
    }

    fn units(&self) -> CliResult<UnitsMode> {
        Ok(match self.choice("units", "model", &["model", "si"])? {
            "si" => UnitsMode::Si,
            _ => UnitsMode::Model,
        })
    }

    fn species(&self, units: UnitsMode) -> CliResult<Species> {
        let base = match self.str("species") {
            Some(name) => self
                .registry
                .get(name)
                .cloned()
                .ok_or_else(|| Failure::Usage(format!("unknown species `{name}`")))?,
            None if self.str("mass").is_some() => Species::model_unit(),
            None if units == UnitsMode::Model => Species::model_unit(),
            None => return usage("SI units need --species or --mass"),
        };
        let mi = self.num("mass")?.unwrap_or(base.m_inertial);
        let mg = match (self.num("m-grav")?, self.str("mass")) {
            (Some(v), _) => v,
            (None, Some(_)) => mi,
            (None, None) => base.m_grav,
        };
        Ok(Species::new(base.name, mi, mg)?)
    }

    fn field(&self, species: &Species, units: UnitsMode) -> CliResult<FieldStrength> {
        if let Some(f) = self.num("force")? {
            return Ok(FieldStrength::from_force(f, species)?);
        }
        match (self.num("g")?, units) {
            (Some(g), _) => Ok(FieldStrength::new(g)?),
            (None, UnitsMode::Si) => Ok(FieldStrength::default()),
            (None, UnitsMode::Model) => usage("model units need --force or --g"),
        }
    }

    fn energy_ev(&self, key: &str, units: UnitsMode) -> CliResult<Option<f64>> {
        match self.num(key)? {
            Some(_) if units == UnitsMode::Model => usage(format!("--{key} requires --units si")),
            Some(v) => Ok(Some(v * constants::EV)),
            None => Ok(None),
        }
    }

    fn beam(&self, species: &Species, field: &FieldStrength, units: UnitsMode) -> CliResult<(BeamConfig, CanonicalBeam)> {
        let z0 = self.num_or("z0", 0.0)?;
        let ekin_ev = self.energy_ev("ekin-ev", units)?;
        let thermal = match self.num("temperature")? {
            Some(_) if units == UnitsMode::Model => return usage("--temperature requires --units si"),
            Some(t) => Some(kinetic_energy_from_temperature(t)?),
            None => None,
        };
        let candidates = [
            self.num("energy")?.map(|energy| BeamSpec::TotalEnergy { energy, z0 }),
            self.num("ekin")?.map(|e_kin| BeamSpec::KineticEnergy { e_kin, z0 }),
            ekin_ev.map(|e_kin| BeamSpec::KineticEnergy { e_kin, z0 }),
            self.num("speed")?.map(|v| BeamSpec::Speed { v, z0 }),
            thermal.map(|e_kin| BeamSpec::KineticEnergy { e_kin, z0 }),
        ];
        let given: Vec<BeamSpec> = candidates.into_iter().flatten().collect();
        let spec = match given.as_slice() {
            [one] => *one,
            [] => return usage("specify the beam with one of --energy, --ekin, --ekin-ev, --speed, --temperature"),
            _ => return usage("the beam is over-specified; give only one energy, speed or temperature"),
        };
        let direction = match self.choice("direction", "downward", &["downward", "upward"])? {
            "upward" => Direction::Upward,
            _ => Direction::Downward,
        };
        let cfg = BeamConfig { spec, direction };
        let canon = convert_beam(&cfg, species, field)?;
        Ok((cfg, canon))
    }

    fn aperture(&self) -> CliResult<Aperture> {
        let width = self.require("width")?;
        Ok(match self.choice("aperture", "single", &["single", "double"])? {
            "double" => Aperture::double(width, self.require("half-sep")?)?,
            _ => Aperture::single(width)?,
        })
    }

    fn grid(&self) -> CliResult<Grid> {
        Ok(Grid::new(
            self.require("x-min")?,
            self.require("x-max")?,
            self.count("nx", 101)?,
            self.require("z-min")?,
            self.require("z-max")?,
            self.count("nz", 101)?,
        )?)
    }

    fn constant(&self) -> CliResult<FocusConstant> {
        match self.str("constant") {
            None | Some("solved") => Ok(FocusConstant::Solved),
            Some("printed") => Ok(FocusConstant::Printed),
            Some(s) => s
                .parse::<f64>()
                .map(FocusConstant::Custom)
                .map_err(|_| Failure::Usage(format!("--constant: `{s}` is not solved, printed or a number"))),
        }
    }
}

fn parse_config(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return usage(format!("config line {}: expected key = value", i + 1));
        };
        let key = k.trim().replace('_', "-");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return usage(format!("config line {}: unknown key `{}`", i + 1, k.trim()));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Linear map between grid coordinates as written and physical coordinates.
struct Axes {
    x_scale: f64,
    z_scale: f64,
}

fn axes(s: &Settings, width: f64, mass: f64, force: f64, energy: f64, hbar: f64) -> CliResult<Axes> {
    Ok(match s.choice("axes", "raw", &["energy", "force", "raw"])? {
        "energy" => {
            if !(energy > 0.0) {
                return usage("energy axes need a positive energy");
            }
            Axes { x_scale: width, z_scale: (2.0 * mass * energy).sqrt() / hbar }
        }
        "force" => {
            if !(force > 0.0) {
                return usage("force axes need a positive force");
            }
            Axes { x_scale: width, z_scale: force * mass * width.powi(4) / (2.0 * hbar) }
        }
        _ => Axes { x_scale: 1.0, z_scale: 1.0 },
    })
}

fn physical_grid(g: &Grid, a: &Axes) -> CliResult<Grid> {
    Ok(Grid::new(
        g.x_min * a.x_scale,
        g.x_max * a.x_scale,
        g.nx,
        g.z_min * a.z_scale,
        g.z_max * a.z_scale,
        g.nz,
    )?)
}

/// CSV with one row per node, coordinates as given on the command line.
pub fn field_csv(grid: &Grid, amplitudes: &[Complex64]) -> String {
    let mut out = String::with_capacity(amplitudes.len() * 120 + 64);
    out.push_str("x_dimless,z_dimless,re,im,intensity\n");
    for (k, a) in amplitudes.iter().enumerate() {
        let (x, z) = grid.node(k);
        let _ = writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", x, z, a.re, a.im, a.norm_sqr());
    }
    out
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn cmd_pattern(s: &Settings) -> CliResult<String> {
    let units = s.units()?;
    let species = s.species(units)?;
    let field = s.field(&species, units)?;
    let (cfg, beam) = s.beam(&species, &field, units)?;
    let aperture = s.aperture()?;
    let map = QuasiTimeMap::from_beam(&species, &field, &beam, units)?;
    let shown = s.grid()?;
    let ax = axes(s, aperture.width(), map.mass, map.force, map.energy, map.hbar)?;
    let grid = physical_grid(&shown, &ax)?;
    let incident = match s.choice("incident", "zero", &["zero", "wkb"])? {
        "wkb" => IncidentFill::Wkb,
        _ => IncidentFill::Zero,
    };
    let opts = PatternOptions { direction: cfg.direction, incident, ..Default::default() };
    let field = paraxial::pattern_grid(&aperture, &map, &grid, opts)?;
    Ok(field_csv(&shown, &field.amplitudes))
}

fn cmd_nearzone(s: &Settings, err: &mut dyn Write) -> CliResult<String> {
    let units = s.units()?;
    let species = s.species(units)?;
    let field = s.field(&species, units)?;
    let (_, beam) = s.beam(&species, &field, units)?;
    let aperture = s.aperture()?;
    if !matches!(aperture, Aperture::Single { .. }) {
        return usage("the near-zone field is available for single slits only");
    }
    let strategy = match s.choice("kappa", "consistent", &["consistent", "paper-literal"])? {
        "paper-literal" => KappaStrategy::PaperLiteral,
        _ => KappaStrategy::Consistent,
    };
    let params = NonparaxialParams::with_strategy(
        beam.energy,
        field.force(&species),
        species.m_inertial,
        units.hbar(),
        strategy,
        units,
    )?;
    let shown = s.grid()?;
    let ax = axes(s, aperture.width(), params.mass, params.force, params.energy, params.hbar)?;
    let grid = physical_grid(&shown, &ax)?;
    let tol = s.num_or("tol", 1e-9)?;
    let spec = QuadratureSpec { abs_tol: tol, rel_tol: tol, ..Default::default() };
    let (f, warnings) = nonparaxial::nearzone_grid(aperture.width(), &params, &grid, &spec)?;
    if warnings > 0 {
        let _ = writeln!(err, "warning: {warnings} nodes missed the quadrature tolerance");
    }
    Ok(field_csv(&shown, &f.amplitudes))
}

fn cmd_focus(s: &Settings) -> CliResult<String> {
    let units = s.units()?;
    let species = s.species(units)?;
    let field = s.field(&species, units)?;
    let (_, beam) = s.beam(&species, &field, units)?;
    let width = s.require("width")?;
    let r = paraxial::focus_height(&species, &field, &beam, width, units, s.constant()?)?;
    let map = QuasiTimeMap::from_beam(&species, &field, &beam, units)?;
    let z_energy = if beam.energy > 0.0 {
        Some(r.z_star * map.hbar / (2.0 * map.mass * map.energy).sqrt())
    } else {
        None
    };
    Ok(json_text(&json!({
        "c_star": r.c_star,
        "tau_star": r.tau_star,
        "z_star": r.z_star,
        "z_star_dimless": z_energy,
        "species": r.species,
        "g": r.field.g,
        "force": map.force,
        "beam": r.beam,
        "L": r.width,
        "hbar": r.hbar,
    })))
}

fn cmd_sensitivity(s: &Settings) -> CliResult<String> {
    let units = s.units()?;
    let species = s.species(units)?;
    let field = s.field(&species, units)?;
    let (_, beam) = s.beam(&species, &field, units)?;
    if beam.z0 != 0.0 {
        return usage("sensitivity reports assume the source at the plate (z0 = 0)");
    }
    let e_kin = beam.kinetic_energy(&species);
    let width = s.require("width")?;
    let var = WepVariation {
        delta_g_over_g: s.num_or("delta-g", 0.0)?,
        delta_mg_over_mi: s.num_or("delta-mg", 0.0)?,
    };
    let constant = s.constant()?;
    let r = metrology::sensitivity_report(&species, &field, e_kin, width, &var, units, constant)?;
    let delta_e = match (s.num("delta-e")?, s.energy_ev("delta-e-ev", units)?) {
        (Some(_), Some(_)) => return usage("give only one of --delta-e and --delta-e-ev"),
        (a, b) => a.or(b),
    };
    let spread = match delta_e {
        Some(de) => Some(metrology::energy_spread_width(&species, e_kin, width, de, units, constant)?),
        None => None,
    };
    let e_kin_ev = (units == UnitsMode::Si).then(|| e_kin / constants::EV);
    Ok(json_text(&json!({
        "species": r.species,
        "E_kin": r.e_kin,
        "E_kin_eV": e_kin_ev,
        "L": r.width,
        "c_star": r.c_star,
        "z_focus0": r.z_focus_0,
        "z_focus_prime0": r.z_focus_prime_0,
        "epsilon": r.epsilon,
        "z_focus_shifted": r.z_focus_shifted,
        "dz_dE": if r.dz_de.is_finite() { Some(r.dz_de) } else { None },
        "spread_width": spread,
    })))
}

fn cmd_table1(s: &Settings) -> CliResult<String> {
    let g = s.num_or("g", constants::G_STANDARD)?;
    let constant = match s.str("constant") {
        None => FocusConstant::Printed,
        Some(_) => s.constant()?,
    };
    let rows = metrology::table1_generate(&metrology::table1_presets(), &FieldStrength::new(g)?, constant)?;
    match s.choice("format", "json", &["json", "csv"])? {
        "csv" => {
            let mut out = String::from("species,T_K,L_m,E_kin_eV,z_focus0_m,z_focus_prime0_m,flags\n");
            for r in &rows {
                let t = r.temperature.map(|t| format!("{t:e}")).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},{},{:e},{:e},{:.16e},{:.16e},{}",
                    r.species,
                    t,
                    r.width,
                    r.e_kin_ev,
                    r.z_focus0,
                    r.z_focus_prime0,
                    r.flags.join(";")
                );
            }
            Ok(out)
        }
        _ => Ok(json_text(&serde_json::to_value(&rows).expect("rows serialize"))),
    }
}

fn cmd_bounce(s: &Settings) -> CliResult<String> {
    let units = s.units()?;
    let species = s.species(units)?;
    let field = s.field(&species, units)?;
    let n_max = s.count("n-max", 5)?;
    let b = Bouncer::new(&species, &field, units)?;
    let mut levels = serde_json::Map::new();
    let mut freqs = serde_json::Map::new();
    for (name, basis) in [
        ("exact_airy", BouncerBasis::ExactAiry),
        ("wkb_textbook", BouncerBasis::WkbTextbook),
        ("wkb_paper", BouncerBasis::WkbPaper),
    ] {
        let l = b.levels(n_max, basis)?;
        let w: Vec<f64> = (2..=n_max).map(|n| (l[n - 1] - l[0]) / b.hbar).collect();
        levels.insert(name.into(), json!(l));
        freqs.insert(name.into(), json!(w));
    }
    Ok(json_text(&json!({
        "species": species.name,
        "mass": b.mass,
        "force": b.force,
        "hbar": b.hbar,
        "levels": levels,
        "omega_n1": freqs,
    })))
}

fn write_output(path: Option<&str>, text: &str, out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Domain(format!("cannot write `{p}`: {e}"))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Domain(format!("cannot write output: {e}"))),
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let (params, text) = match &cli.command {
        Command::Selftest => {
            let results = selftest::run_all();
            let mut failed = 0;
            for r in &results {
                let _ = writeln!(out, "{} {} {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
                failed += usize::from(!r.passed);
            }
            let _ = writeln!(out, "{} checks, {} failed", results.len(), failed);
            return Ok(if failed == 0 { EXIT_OK } else { EXIT_SELFTEST });
        }
        Command::Pattern(p) => (p, cmd_pattern(&Settings::resolve(p)?)?),
        Command::Nearzone(p) => (p, cmd_nearzone(&Settings::resolve(p)?, err)?),
        Command::Focus(p) => (p, cmd_focus(&Settings::resolve(p)?)?),
        Command::Sensitivity(p) => (p, cmd_sensitivity(&Settings::resolve(p)?)?),
        Command::Table1(p) => (p, cmd_table1(&Settings::resolve(p)?)?),
        Command::Bounce(p) => (p, cmd_bounce(&Settings::resolve(p)?)?),
    };
    write_output(params.out.as_deref(), &text, out)?;
    Ok(EXIT_OK)
}

/// Thread count requested through `GRAVIDIFF_THREADS`, if any.
fn requested_threads() -> Option<usize> {
    std::env::var("GRAVIDIFF_THREADS").ok()?.trim().parse().ok().filter(|n| *n > 0)
}

/// Runs the CLI on `argv` (including the program name) and returns the exit status.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match requested_threads() {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => {
                let (mut o, mut e) = (Vec::new(), Vec::new());
                let r = pool.install(|| dispatch(cli, &mut o, &mut e));
                let _ = out.write_all(&o);
                let _ = err.write_all(&e);
                r
            }
            Err(e) => Err(Failure::Domain(format!("cannot start thread pool: {e}"))),
        },
        None => dispatch(cli, out, err),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}\n\nRun `gravidiff <command> --help` for usage.");
            EXIT_USAGE
        }
        Err(Failure::Domain(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_DOMAIN
        }
    }
}

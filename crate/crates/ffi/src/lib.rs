//! C interface to `gravidiff`.
//!
//! Every fallible function returns a [`GdStatus`]; on failure a message is
//! kept per thread and can be read with [`gd_last_error`]. Objects are handed
//! out as opaque pointers and must be released with the matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;

use gravidiff::metrology::{sensitivity_report, table1_generate, table1_presets, WepVariation};
use gravidiff::model::{Aperture, FieldStrength, Grid, Species, UnitsMode};
use gravidiff::paraxial::{focus_constant, pattern_grid, ComplexAmplitudeField, FocusConstant, PatternOptions};
use gravidiff::quasitime::QuasiTimeMap;
use gravidiff::specfun::{airy_ai, airy_bi, airy_zero, fresnel_f};
use gravidiff::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GdStatus {
    Ok = 0,
    /// A required pointer argument was null.
    ErrNull = 1,
    ErrDomain = 2,
    ErrInvalid = 3,
    /// Evaluation hit a zero of an Airy denominator.
    ErrPole = 4,
    ErrParse = 5,
    /// An internal panic was caught at the boundary.
    ErrPanic = 6,
    /// The caller-provided buffer is too small.
    ErrBuffer = 7,
}

pub const GD_UNITS_MODEL: u32 = 0;
pub const GD_UNITS_SI: u32 = 1;

pub const GD_CONSTANT_SOLVED: u32 = 0;
pub const GD_CONSTANT_PRINTED: u32 = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GdComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for GdComplex {
    fn from(z: Complex64) -> Self {
        GdComplex { re: z.re, im: z.im }
    }
}

impl From<GdComplex> for Complex64 {
    fn from(z: GdComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GdAiry {
    pub ai: f64,
    pub ai_prime: f64,
    pub bi: f64,
    pub bi_prime: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GdSensitivity {
    pub c_star: f64,
    pub e_kin: f64,
    pub width: f64,
    pub z_focus_0: f64,
    pub z_focus_prime_0: f64,
    pub epsilon: f64,
    pub z_focus_shifted: f64,
    pub dz_de: f64,
}

/// One row of the beam-realization table. `temperature` is NaN when the row
/// has none.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdTableRow {
    pub species: [c_char; 32],
    pub temperature: f64,
    pub width: f64,
    pub e_kin_ev: f64,
    pub z_focus_0: f64,
    pub z_focus_prime_0: f64,
    /// Number of annotation flags attached to the row.
    pub n_flags: u32,
}

impl Default for GdTableRow {
    fn default() -> Self {
        GdTableRow {
            species: [0; 32],
            temperature: f64::NAN,
            width: 0.0,
            e_kin_ev: 0.0,
            z_focus_0: 0.0,
            z_focus_prime_0: 0.0,
            n_flags: 0,
        }
    }
}

/// Opaque particle species.
pub struct GdSpecies(Species);

/// Opaque quasi-time map for one beam in a uniform field.
pub struct GdMap(QuasiTimeMap);

/// Opaque grid of complex amplitudes.
pub struct GdField(ComplexAmplitudeField);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    let c = CString::new(text).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: GdStatus, msg: impl Into<String>) -> GdStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> GdStatus {
    let status = match e {
        Error::Domain(_) => GdStatus::ErrDomain,
        Error::InvalidParameter(_) => GdStatus::ErrInvalid,
        Error::Pole { .. } => GdStatus::ErrPole,
        Error::Parse(_) => GdStatus::ErrParse,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), GdStatus>) -> GdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GdStatus::Ok,
        Ok(Err(s)) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(GdStatus::ErrPanic, format!("panic: {msg}"))
        }
    }
}

fn lift<T>(r: gravidiff::Result<T>) -> Result<T, GdStatus> {
    r.map_err(from_error)
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, GdStatus> {
    p.as_mut().ok_or_else(|| fail(GdStatus::ErrNull, format!("{what} is null")))
}

unsafe fn input<'a, T>(p: *const T, what: &str) -> Result<&'a T, GdStatus> {
    p.as_ref().ok_or_else(|| fail(GdStatus::ErrNull, format!("{what} is null")))
}

fn units(code: u32) -> Result<UnitsMode, GdStatus> {
    match code {
        GD_UNITS_MODEL => Ok(UnitsMode::Model),
        GD_UNITS_SI => Ok(UnitsMode::Si),
        _ => Err(fail(GdStatus::ErrInvalid, format!("unknown units code {code}"))),
    }
}

fn constant(code: u32) -> Result<FocusConstant, GdStatus> {
    match code {
        GD_CONSTANT_SOLVED => Ok(FocusConstant::Solved),
        GD_CONSTANT_PRINTED => Ok(FocusConstant::Printed),
        _ => Err(fail(GdStatus::ErrInvalid, format!("unknown focus-constant code {code}"))),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or null if none.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn gd_clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// The solved focus constant c*.
#[no_mangle]
pub extern "C" fn gd_focus_constant() -> f64 {
    focus_constant()
}

/// # Safety
/// `result` must be null or point to writable memory for one `GdComplex`.
#[no_mangle]
pub unsafe extern "C" fn gd_fresnel(z: GdComplex, result: *mut GdComplex) -> GdStatus {
    guard(|| {
        *out(result, "result")? = fresnel_f(z.into()).into();
        Ok(())
    })
}

/// # Safety
/// `result` must be null or point to writable memory for one `GdAiry`.
#[no_mangle]
pub unsafe extern "C" fn gd_airy(x: f64, result: *mut GdAiry) -> GdStatus {
    guard(|| {
        let r = out(result, "result")?;
        let (a, b) = (airy_ai(x), airy_bi(x));
        *r = GdAiry { ai: a.value, ai_prime: a.deriv, bi: b.value, bi_prime: b.deriv };
        Ok(())
    })
}

/// n-th zero of Ai, counting from 1.
///
/// # Safety
/// `result` must be null or point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn gd_airy_zero(n: usize, result: *mut f64) -> GdStatus {
    guard(|| {
        let r = out(result, "result")?;
        *r = lift(airy_zero(n))?;
        Ok(())
    })
}

/// Looks up a built-in species by name (`neutron`, `NH3`, `Cs-133`, `Rb-87`, `K-39`, `model`).
///
/// # Safety
/// `name` must be null or a NUL-terminated string; `result` must be null or
/// point to a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gd_species_preset(name: *const c_char, result: *mut *mut GdSpecies) -> GdStatus {
    guard(|| {
        let r = out(result, "result")?;
        let name = CStr::from_ptr(input(name, "name")?).to_string_lossy();
        let species = Species::preset(&name)
            .ok_or_else(|| fail(GdStatus::ErrInvalid, format!("unknown species '{name}'")))?;
        *r = Box::into_raw(Box::new(GdSpecies(species)));
        Ok(())
    })
}

/// Species with separate inertial and gravitational masses.
///
/// # Safety
/// As for [`gd_species_preset`].
#[no_mangle]
pub unsafe extern "C" fn gd_species_new(
    name: *const c_char,
    m_inertial: f64,
    m_grav: f64,
    result: *mut *mut GdSpecies,
) -> GdStatus {
    guard(|| {
        let r = out(result, "result")?;
        let name = CStr::from_ptr(input(name, "name")?).to_string_lossy().into_owned();
        *r = Box::into_raw(Box::new(GdSpecies(lift(Species::new(name, m_inertial, m_grav))?)));
        Ok(())
    })
}

/// Inertial mass of a species, or NaN for a null handle.
///
/// # Safety
/// `species` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gd_species_mass(species: *const GdSpecies) -> f64 {
    species.as_ref().map_or(f64::NAN, |s| s.0.m_inertial)
}

/// # Safety
/// `species` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gd_species_free(species: *mut GdSpecies) {
    if !species.is_null() {
        drop(Box::from_raw(species));
    }
}

/// Quasi-time map for total energy `energy` (zero at the plate), force
/// `force`, mass `mass` and Planck constant `hbar`.
///
/// # Safety
/// `result` must be null or point to a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gd_map_new(
    energy: f64,
    force: f64,
    mass: f64,
    hbar: f64,
    result: *mut *mut GdMap,
) -> GdStatus {
    guard(|| {
        let r = out(result, "result")?;
        *r = Box::into_raw(Box::new(GdMap(lift(QuasiTimeMap::new(energy, force, mass, hbar))?)));
        Ok(())
    })
}

/// # Safety
/// `map` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gd_map_free(map: *mut GdMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Classical turning point, or NaN for a null handle.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gd_map_turning_point(map: *const GdMap) -> f64 {
    map.as_ref().map_or(f64::NAN, |m| m.0.turning_point())
}

/// Quasi-time at height `z`. `classical` receives 1 on the real branch and 0
/// beyond the turning point; it may be null.
///
/// # Safety
/// `map` must be a live handle; `tau` must point to a writable `GdComplex`;
/// `classical` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn gd_map_tau(map: *const GdMap, z: f64, tau: *mut GdComplex, classical: *mut i32) -> GdStatus {
    guard(|| {
        let m = input(map, "map")?;
        let t = out(tau, "tau")?;
        let q = m.0.tau_of_z(z);
        *t = q.tau.into();
        if let Some(c) = classical.as_mut() {
            *c = q.classical as i32;
        }
        Ok(())
    })
}

/// Height reached at real quasi-time `tau`.
///
/// # Safety
/// `map` must be a live handle; `z` must point to a writable `double`.
#[no_mangle]
pub unsafe extern "C" fn gd_map_z(map: *const GdMap, tau: f64, z: *mut f64) -> GdStatus {
    guard(|| {
        let m = input(map, "map")?;
        let r = out(z, "z")?;
        *r = lift(m.0.z_of_tau(tau))?;
        Ok(())
    })
}

/// Paraxial amplitudes on an `nx × nz` grid below (or above) the plate.
///
/// A single slit of width `width` is used when `half_separation` is zero,
/// otherwise two slits centred at `±half_separation`.
///
/// # Safety
/// `map` must be a live handle; `result` must point to a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gd_pattern_grid(
    map: *const GdMap,
    width: f64,
    half_separation: f64,
    x_min: f64,
    x_max: f64,
    nx: usize,
    z_min: f64,
    z_max: f64,
    nz: usize,
    result: *mut *mut GdField,
) -> GdStatus {
    guard(|| {
        let m = input(map, "map")?;
        let r = out(result, "result")?;
        let aperture = if half_separation == 0.0 {
            lift(Aperture::single(width))?
        } else {
            lift(Aperture::double(width, half_separation))?
        };
        let grid = lift(Grid::new(x_min, x_max, nx, z_min, z_max, nz))?;
        let field = lift(pattern_grid(&aperture, &m.0, &grid, PatternOptions::default()))?;
        *r = Box::into_raw(Box::new(GdField(field)));
        Ok(())
    })
}

/// Number of grid nodes, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gd_field_len(field: *const GdField) -> usize {
    field.as_ref().map_or(0, |f| f.0.amplitudes.len())
}

/// Copies the amplitudes, row-major in z then x, into `buffer`.
///
/// # Safety
/// `field` must be a live handle; `buffer` must hold `capacity` elements.
#[no_mangle]
pub unsafe extern "C" fn gd_field_copy(field: *const GdField, buffer: *mut GdComplex, capacity: usize) -> GdStatus {
    guard(|| {
        let f = input(field, "field")?;
        let n = f.0.amplitudes.len();
        if buffer.is_null() {
            return Err(fail(GdStatus::ErrNull, "buffer is null"));
        }
        if capacity < n {
            return Err(fail(GdStatus::ErrBuffer, format!("buffer holds {capacity}, need {n}")));
        }
        let dst = std::slice::from_raw_parts_mut(buffer, n);
        for (d, a) in dst.iter_mut().zip(&f.0.amplitudes) {
            *d = (*a).into();
        }
        Ok(())
    })
}

/// # Safety
/// `field` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gd_field_free(field: *mut GdField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Focus depth and its response to `δg/g` and `δm_g/m_i` for a beam
/// entering the slit with kinetic energy `e_kin`.
///
/// # Safety
/// `species` must be a live handle; `result` must point to a writable
/// `GdSensitivity`.
#[no_mangle]
pub unsafe extern "C" fn gd_sensitivity(
    species: *const GdSpecies,
    g: f64,
    e_kin: f64,
    width: f64,
    delta_g_over_g: f64,
    delta_mg_over_mi: f64,
    units_code: u32,
    constant_code: u32,
    result: *mut GdSensitivity,
) -> GdStatus {
    guard(|| {
        let s = input(species, "species")?;
        let r = out(result, "result")?;
        let field = lift(FieldStrength::new(g))?;
        let variation = WepVariation { delta_g_over_g, delta_mg_over_mi };
        let rep = lift(sensitivity_report(
            &s.0,
            &field,
            e_kin,
            width,
            &variation,
            units(units_code)?,
            constant(constant_code)?,
        ))?;
        *r = GdSensitivity {
            c_star: rep.c_star,
            e_kin: rep.e_kin,
            width: rep.width,
            z_focus_0: rep.z_focus_0,
            z_focus_prime_0: rep.z_focus_prime_0,
            epsilon: rep.epsilon,
            z_focus_shifted: rep.z_focus_shifted,
            dz_de: rep.dz_de,
        };
        Ok(())
    })
}

/// Fills `rows` with the beam-realization table at standard gravity.
///
/// `count` always receives the number of rows; when `capacity` is too small
/// nothing is written and `GD_ERR_BUFFER` is returned.
///
/// # Safety
/// `rows` must hold `capacity` elements (it may be null when `capacity` is
/// 0); `count` must point to a writable `size_t`.
#[no_mangle]
pub unsafe extern "C" fn gd_table1(constant_code: u32, rows: *mut GdTableRow, capacity: usize, count: *mut usize) -> GdStatus {
    guard(|| {
        let n_out = out(count, "count")?;
        let table = lift(table1_generate(&table1_presets(), &FieldStrength::default(), constant(constant_code)?))?;
        *n_out = table.len();
        if capacity < table.len() {
            return Err(fail(GdStatus::ErrBuffer, format!("buffer holds {capacity}, need {}", table.len())));
        }
        if rows.is_null() {
            return Err(fail(GdStatus::ErrNull, "rows is null"));
        }
        let dst = std::slice::from_raw_parts_mut(rows, table.len());
        for (d, row) in dst.iter_mut().zip(&table) {
            let mut name = [0 as c_char; 32];
            for (c, b) in name.iter_mut().zip(row.species.bytes().take(31)) {
                *c = b as c_char;
            }
            *d = GdTableRow {
                species: name,
                temperature: row.temperature.unwrap_or(f64::NAN),
                width: row.width,
                e_kin_ev: row.e_kin_ev,
                z_focus_0: row.z_focus0,
                z_focus_prime_0: row.z_focus_prime0,
                n_flags: row.flags.len() as u32,
            };
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_are_recorded_per_thread() {
        gd_clear_error();
        let s = unsafe { gd_fresnel(GdComplex::default(), ptr::null_mut()) };
        assert_eq!(s, GdStatus::ErrNull);
        let msg = unsafe { CStr::from_ptr(gd_last_error()) }.to_str().unwrap().to_owned();
        assert!(msg.contains("result"));
        std::thread::spawn(|| assert!(gd_last_error().is_null())).join().unwrap();
    }

    #[test]
    fn panics_are_caught() {
        assert_eq!(guard(|| panic!("boom")), GdStatus::ErrPanic);
        let msg = unsafe { CStr::from_ptr(gd_last_error()) }.to_str().unwrap();
        assert_eq!(msg, "panic: boom");
    }

    #[test]
    fn error_mapping() {
        assert_eq!(from_error(Error::Domain("x".into())), GdStatus::ErrDomain);
        assert_eq!(from_error(Error::Pole { argument: 1.0 }), GdStatus::ErrPole);
        assert_eq!(from_error(Error::Parse("x".into())), GdStatus::ErrParse);
    }
}

use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use gravidiff_ffi::*;

fn last_error() -> String {
    let p = gd_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn special_functions() {
    let mut f = GdComplex::default();
    assert_eq!(unsafe { gd_fresnel(GdComplex { re: 1e4, im: 0.0 }, &mut f) }, GdStatus::Ok);
    let lim = (std::f64::consts::PI / 8.0).sqrt();
    assert!((f.re - lim).abs() < 1e-4 && (f.im - lim).abs() < 1e-4);

    let mut a = GdAiry::default();
    assert_eq!(unsafe { gd_airy(0.0, &mut a) }, GdStatus::Ok);
    assert!((a.ai - 0.355_028_053_887_817_2).abs() < 1e-15);
    assert!((a.bi - 0.614_926_627_446_000_7).abs() < 1e-15);

    let mut z = 0.0;
    assert_eq!(unsafe { gd_airy_zero(1, &mut z) }, GdStatus::Ok);
    assert!((z + 2.338_107_410_459_767).abs() < 1e-12);
    assert_eq!(unsafe { gd_airy_zero(0, &mut z) }, GdStatus::ErrInvalid);
    assert!(!last_error().is_empty());

    assert!((gd_focus_constant() - 0.054_408).abs() < 1e-5);
}

#[test]
fn map_round_trip_and_branches() {
    let mut map = ptr::null_mut();
    assert_eq!(unsafe { gd_map_new(2.0, 5.0, 1.0, 1.0, &mut map) }, GdStatus::Ok);
    assert!((unsafe { gd_map_turning_point(map) } - 0.4).abs() < 1e-15);

    let mut tau = GdComplex::default();
    let mut classical = -1;
    assert_eq!(unsafe { gd_map_tau(map, -1.0, &mut tau, &mut classical) }, GdStatus::Ok);
    assert_eq!(classical, 1);
    assert_eq!(tau.im, 0.0);
    let mut z = 0.0;
    assert_eq!(unsafe { gd_map_z(map, tau.re, &mut z) }, GdStatus::Ok);
    assert!((z + 1.0).abs() < 1e-13);

    assert_eq!(unsafe { gd_map_tau(map, 1.0, &mut tau, ptr::null_mut()) }, GdStatus::Ok);
    assert!(tau.im != 0.0);
    unsafe { gd_map_free(map) };

    assert_eq!(unsafe { gd_map_new(-1.0, 5.0, 1.0, 1.0, &mut map) }, GdStatus::ErrDomain);
    assert!(last_error().contains("energy"));
    assert_eq!(unsafe { gd_map_new(1.0, 5.0, 0.0, 1.0, &mut map) }, GdStatus::ErrInvalid);
}

#[test]
fn pattern_matches_core() {
    let mut map = ptr::null_mut();
    assert_eq!(unsafe { gd_map_new(2.0, 5.0, 1.0, 1.0, &mut map) }, GdStatus::Ok);
    let mut field = ptr::null_mut();
    let s = unsafe { gd_pattern_grid(map, 1.0, 1.0, -2.0, 2.0, 9, -2.0, -0.5, 4, &mut field) };
    assert_eq!(s, GdStatus::Ok);
    let n = unsafe { gd_field_len(field) };
    assert_eq!(n, 36);

    let mut small = vec![GdComplex::default(); 10];
    assert_eq!(unsafe { gd_field_copy(field, small.as_mut_ptr(), small.len()) }, GdStatus::ErrBuffer);
    let mut buf = vec![GdComplex::default(); n];
    assert_eq!(unsafe { gd_field_copy(field, buf.as_mut_ptr(), n) }, GdStatus::Ok);

    let core_map = gravidiff::quasitime::QuasiTimeMap::new(2.0, 5.0, 1.0, 1.0).unwrap();
    let ap = gravidiff::model::Aperture::double(1.0, 1.0).unwrap();
    let expected = gravidiff::paraxial::slit_amplitude(-2.0, -2.0, &ap, &core_map);
    assert_eq!((buf[0].re, buf[0].im), (expected.re, expected.im));
    // mirror symmetry within the first row
    assert!((buf[0].re - buf[8].re).abs() < 1e-14 && (buf[0].im - buf[8].im).abs() < 1e-14);

    let mut bad = ptr::null_mut();
    let s = unsafe { gd_pattern_grid(map, 1.0, 0.3, -1.0, 1.0, 3, -1.0, 0.0, 3, &mut bad) };
    assert_eq!(s, GdStatus::ErrInvalid);
    assert!(bad.is_null());

    unsafe {
        gd_field_free(field);
        gd_map_free(map);
        gd_field_free(ptr::null_mut());
    }
}

#[test]
fn sensitivity_and_table() {
    let name = CString::new("neutron").unwrap();
    let mut n = ptr::null_mut();
    assert_eq!(unsafe { gd_species_preset(name.as_ptr(), &mut n) }, GdStatus::Ok);
    assert_eq!(unsafe { gd_species_mass(n) }, gravidiff::model::Species::neutron().m_inertial);

    let mut rep = GdSensitivity::default();
    let e = 3.0e-7 * 1.602_176_634e-19;
    let s = unsafe { gd_sensitivity(n, 9.80665, e, 1e-3, 1e-3, 0.0, GD_UNITS_SI, GD_CONSTANT_PRINTED, &mut rep) };
    assert_eq!(s, GdStatus::Ok);
    assert_eq!(rep.c_star, 0.055);
    assert!(rep.z_focus_0 < 0.0);
    assert!((rep.z_focus_prime_0 - 3.73).abs() / 3.73 < 0.03);
    assert_eq!(rep.epsilon, -1e-3);
    let s = unsafe { gd_sensitivity(n, 9.80665, e, 1e-3, 0.0, 0.0, 7, GD_CONSTANT_SOLVED, &mut rep) };
    assert_eq!(s, GdStatus::ErrInvalid);
    unsafe { gd_species_free(n) };

    let unknown = CString::new("unobtainium").unwrap();
    let mut u = ptr::null_mut();
    assert_eq!(unsafe { gd_species_preset(unknown.as_ptr(), &mut u) }, GdStatus::ErrInvalid);
    assert!(last_error().contains("unobtainium"));

    let mut count = 0;
    assert_eq!(unsafe { gd_table1(GD_CONSTANT_PRINTED, ptr::null_mut(), 0, &mut count) }, GdStatus::ErrBuffer);
    assert_eq!(count, 9);
    let mut rows = vec![GdTableRow::default(); count];
    assert_eq!(unsafe { gd_table1(GD_CONSTANT_PRINTED, rows.as_mut_ptr(), rows.len(), &mut count) }, GdStatus::Ok);
    let first = unsafe { CStr::from_ptr(rows[0].species.as_ptr()) };
    assert_eq!(first.to_str().unwrap(), "neutron");
    assert!(rows[0].temperature.is_nan());
    assert!(rows.iter().all(|r| r.z_focus_0 < 0.0));
}

#[test]
fn null_pointers_are_reported() {
    assert_eq!(unsafe { gd_airy(1.0, ptr::null_mut()) }, GdStatus::ErrNull);
    assert_eq!(unsafe { gd_map_tau(ptr::null(), 0.0, &mut GdComplex::default(), ptr::null_mut()) }, GdStatus::ErrNull);
    assert!(last_error().contains("map"));
    assert!(unsafe { gd_species_mass(ptr::null()) }.is_nan());
    assert_eq!(unsafe { gd_field_len(ptr::null()) }, 0);
    gd_clear_error();
    assert!(gd_last_error().is_null());
}

#[test]
fn version_matches_package() {
    let v = unsafe { CStr::from_ptr(gd_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn library_dir() -> PathBuf {
    // target/<profile>/deps/<test-binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <math.h>
#include "gravidiff.h"

int main(void) {
    GdAiry a;
    if (gd_airy(0.0, &a) != GD_STATUS_OK || fabs(a.ai - 0.3550280538878172) > 1e-15) return 1;
    GdMap *map = NULL;
    if (gd_map_new(2.0, 5.0, 1.0, 1.0, &map) != GD_STATUS_OK) return 2;
    GdField *field = NULL;
    if (gd_pattern_grid(map, 1.0, 0.0, -1.0, 1.0, 5, -1.0, 0.0, 3, &field) != GD_STATUS_OK) return 3;
    GdComplex buf[15];
    if (gd_field_copy(field, buf, 15) != GD_STATUS_OK) return 4;
    if (gd_map_new(-1.0, 5.0, 1.0, 1.0, &map) != GD_STATUS_ERR_DOMAIN || gd_last_error() == NULL) return 5;
    printf("%.17g %.17g\n", buf[0].re, buf[0].im);
    gd_field_free(field);
    gd_map_free(map);
    return 0;
}
"#;

#[test]
fn header_compiles_and_links_from_c() {
    let header_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    assert!(header_dir.join("gravidiff.h").exists());
    let lib = library_dir().join("libgravidiff_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("c_smoke");
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("smoke.c");
    let exe = dir.join("smoke");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&header_dir)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "C program exited with {:?}", run.status.code());

    let map = gravidiff::quasitime::QuasiTimeMap::new(2.0, 5.0, 1.0, 1.0).unwrap();
    let ap = gravidiff::model::Aperture::single(1.0).unwrap();
    let a = gravidiff::paraxial::slit_amplitude(-1.0, -1.0, &ap, &map);
    let printed: Vec<f64> = String::from_utf8(run.stdout)
        .unwrap()
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    assert_eq!(printed, vec![a.re, a.im]);
}

//! Fast consistency checks run by `gravidiff selftest`.

use num_complex::Complex64;

use crate::model::{Aperture, FieldStrength, Species, UnitsMode};
use crate::nonparaxial::{kernel_k, NonparaxialParams, QuadratureSpec};
use crate::paraxial::{focus_constant, on_axis_single, slit_amplitude};
use crate::quasitime::QuasiTimeMap;
use crate::reference::{Bouncer, BouncerBasis};
use crate::specfun::{airy_ai, airy_bi, airy_zero, fresnel_f, fresnel_limit};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, deviation: f64, tol: f64) -> CheckResult {
    CheckResult {
        name,
        passed: deviation <= tol,
        detail: format!("deviation={deviation:.3e} tol={tol:.1e}"),
    }
}

fn fresnel_limit_check() -> CheckResult {
    let far = fresnel_f(Complex64::new(1e4, 0.0));
    check("fresnel_limit", (far - Complex64::new(1.0, 1.0) * fresnel_limit()).norm(), 1e-4)
}

fn airy_wronskian() -> CheckResult {
    let worst = [-12.0, -3.3, 0.0, 2.0, 7.5]
        .iter()
        .map(|&x| {
            let (a, b) = (airy_ai(x), airy_bi(x));
            (a.value * b.deriv - a.deriv * b.value - std::f64::consts::FRAC_1_PI).abs() * std::f64::consts::PI
        })
        .fold(0.0, f64::max);
    check("airy_wronskian", worst, 1e-12)
}

fn airy_first_zero() -> CheckResult {
    let a1 = airy_zero(1).unwrap_or(f64::NAN);
    check("airy_first_zero", (a1 + 2.338107410459767).abs(), 1e-12)
}

fn quasitime_roundtrip() -> CheckResult {
    let map = QuasiTimeMap::new(2.0, 5.0, 1.0, 1.0).expect("valid map");
    let worst = [-3.0, -0.1, 0.0, 0.2, 0.39]
        .iter()
        .map(|&z| {
            let tau = map.tau_of_z(z).tau.re;
            (map.z_of_tau(tau).unwrap_or(f64::NAN) - z).abs()
        })
        .fold(0.0, f64::max);
    check("quasitime_roundtrip", worst, 1e-12)
}

fn symmetry() -> CheckResult {
    let map = QuasiTimeMap::new(2.0, 5.0, 1.0, 1.0).expect("valid map");
    let ap = Aperture::double(1.0, 1.0).expect("valid aperture");
    let worst = [0.3, 1.1, 2.4]
        .iter()
        .map(|&x| (slit_amplitude(x, -1.0, &ap, &map) - slit_amplitude(-x, -1.0, &ap, &map)).norm())
        .fold(0.0, f64::max);
    check("pattern_symmetry", worst, 1e-14)
}

fn focus_on_axis() -> CheckResult {
    let c = focus_constant();
    let map = QuasiTimeMap::new(0.0, 1.0, 1.0, 1.0).expect("valid map");
    let z = map.z_of_tau(c).unwrap_or(f64::NAN);
    let i = |z: f64| on_axis_single(z, 1.0, &map).norm_sqr();
    let h = 1e-4 * z.abs();
    check("focus_is_maximum", ((i(z + h) - i(z - h)) / (2.0 * h * i(z))).abs(), 1e-5)
}

fn kernel_free_limit() -> CheckResult {
    // Free-space Green's function oracle at (0.3, -0.2), k = 2.
    let p = NonparaxialParams::new(2.0, 1e-6, 1.0, 1.0).expect("valid params");
    let expected = Complex64::new(0.5961237553766991, 0.18727863502612357);
    let dev = kernel_k(0.3, -0.2, &p, &QuadratureSpec::default())
        .map(|e| (e.value - expected).norm())
        .unwrap_or(f64::INFINITY);
    check("kernel_free_limit", dev, 1e-6)
}

fn bouncer_ground_state() -> CheckResult {
    let b = Bouncer::new(&Species::model_unit(), &FieldStrength::new(1.0).expect("g"), UnitsMode::Model)
        .expect("valid bouncer");
    let e1 = b.level(1, BouncerBasis::ExactAiry).unwrap_or(f64::NAN);
    check("bouncer_ground_state", (e1 - 1.855757081489238).abs(), 1e-12)
}

/// Runs every check.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        fresnel_limit_check(),
        airy_wronskian(),
        airy_first_zero(),
        quasitime_roundtrip(),
        symmetry(),
        focus_on_axis(),
        kernel_free_limit(),
        bouncer_ground_state(),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_pass() {
        for r in super::run_all() {
            assert!(r.passed, "{} {}", r.name, r.detail);
        }
    }
}

//! Exponential Fresnel integral `F(Z) = ∫₀^Z exp(i t²) dt` for complex `Z`.
//!
//! With `w = exp(-iπ/4) Z` the integral is `exp(iπ/4) (√π/2) erf(w)`. The error
//! function is summed from its Maclaurin series while the cancellation in that
//! series stays below about four digits, and from the Laplace continued
//! fraction for `erfc` otherwise.

use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

const SERIES_LOSS_LIMIT: f64 = 9.5;

/// `∫₀^Z exp(i t²) dt`.
pub fn fresnel_f(z: Complex64) -> Complex64 {
    let rot = Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
    let w = z * rot.conj();
    rot * (0.5 * PI.sqrt()) * erf(w)
}

/// `(C(x), S(x)) = (∫₀^x cos t² dt, ∫₀^x sin t² dt)`.
pub fn fresnel_cs(x: f64) -> (f64, f64) {
    let f = fresnel_f(Complex64::new(x, 0.0));
    (f.re, f.im)
}

/// `sqrt(π/8)`, the limit of `C(x)` and `S(x)` as `x → ∞`.
pub fn fresnel_limit() -> f64 {
    (PI / 8.0).sqrt()
}

fn erf(w: Complex64) -> Complex64 {
    if w.re < 0.0 {
        return -erf(-w);
    }
    let r2 = w.norm_sqr();
    // series loss ~ exp(|w|²)/max(1, |exp(-w²)|)
    let loss = if w.im.abs() > w.re { 2.0 * w.re * w.re } else { r2 };
    if loss <= SERIES_LOSS_LIMIT {
        erf_series(w)
    } else {
        let e = (-w * w).exp();
        Complex64::new(1.0, 0.0) - e * erfc_cf(w) / PI.sqrt()
    }
}

fn erf_series(w: Complex64) -> Complex64 {
    let w2 = -w * w;
    let mut term = w;
    let mut sum = w;
    for n in 1..400 {
        term = term * w2 / n as f64;
        let contrib = term / (2 * n + 1) as f64;
        sum += contrib;
        if contrib.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum * (2.0 / PI.sqrt())
}

/// `√π exp(w²) erfc(w)` for `Re w ≥ 2`, by modified Lentz on
/// `1/(w + (1/2)/(w + 1/(w + (3/2)/(w + ...))))`.
fn erfc_cf(w: Complex64) -> Complex64 {
    let tiny = 1e-300;
    let mut f = w;
    let mut c = w;
    let mut d = Complex64::new(0.0, 0.0);
    for j in 1..2000 {
        let a = 0.5 * j as f64;
        d = w + a * d;
        if d.norm() < tiny {
            d = Complex64::new(tiny, 0.0);
        }
        c = w + a / c;
        if c.norm() < tiny {
            c = Complex64::new(tiny, 0.0);
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    f.inv()
}

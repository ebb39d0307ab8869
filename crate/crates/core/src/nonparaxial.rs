//! Stationary solution beyond the paraxial approximation.
//!
//! Each transverse Fourier component `e^{ikx}` is carried downward by the
//! longitudinal solution of `−(ħ²/2m)ψ'' + Fzψ = ε(k)ψ`, `ε = E − ħ²k²/2m`,
//! normalized to one at the plate. The downward-moving solution is the
//! outgoing Airy combination `W = Ai − iBi` at argument `κz − γε`, which
//! oscillates for propagating components and decays for evanescent ones.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::model::{Grid, UnitsMode};
use crate::numeric::quad::integrate_complex;
use crate::paraxial::ComplexAmplitudeField;
use crate::specfun::{airy_ai, airy_outgoing, outgoing_ratio};

/// Which expression is used for the Airy scale `κ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KappaStrategy {
    /// `κ = (2 m F/ħ²)^{1/3}`, an inverse length.
    #[default]
    Consistent,
    /// `κ = (ħ² F⁵)^{1/3}/(2m)` as printed; only meaningful in model units.
    PaperLiteral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonparaxialParams {
    pub energy: f64,
    pub force: f64,
    pub mass: f64,
    pub hbar: f64,
    pub kappa: f64,
    pub gamma: f64,
}

impl NonparaxialParams {
    pub fn new(energy: f64, force: f64, mass: f64, hbar: f64) -> Result<Self> {
        Self::with_strategy(energy, force, mass, hbar, KappaStrategy::Consistent, UnitsMode::Model)
    }

    pub fn with_strategy(
        energy: f64,
        force: f64,
        mass: f64,
        hbar: f64,
        strategy: KappaStrategy,
        units: UnitsMode,
    ) -> Result<Self> {
        if !(force > 0.0 && force.is_finite()) {
            return Err(Error::Domain(format!("force must be positive, got {force}")));
        }
        if !(mass > 0.0 && hbar > 0.0 && energy.is_finite()) {
            return invalid("mass and hbar must be positive, energy finite");
        }
        let kappa = match strategy {
            KappaStrategy::Consistent => (2.0 * mass * force / (hbar * hbar)).cbrt(),
            KappaStrategy::PaperLiteral => {
                if units == UnitsMode::Si {
                    return invalid("the paper-literal kappa is defined in model units only");
                }
                (hbar * hbar * force.powi(5)).cbrt() / (2.0 * mass)
            }
        };
        Ok(NonparaxialParams { energy, force, mass, hbar, kappa, gamma: kappa / force })
    }

    /// Longitudinal energy `ε(k) = E − ħ²k²/(2m)`.
    pub fn epsilon(&self, k: f64) -> f64 {
        self.energy - self.hbar * self.hbar * k * k / (2.0 * self.mass)
    }

    /// `sqrt(2mE)/ħ`, the wave number at the plate (zero when dropping from rest).
    pub fn k_energy(&self) -> f64 {
        (2.0 * self.mass * self.energy.max(0.0)).sqrt() / self.hbar
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuotientMode {
    /// Outgoing solution `W(κz − γε)/W(−γε)`.
    #[default]
    Exact,
    /// Standing solution `Ai(κz − γε)/Ai(−γε)`; fails near zeros of Ai.
    Standing,
    /// Leading WKB form `(x0/x)^{1/4} exp{(2i/3)(y^{3/2} − y0^{3/2})}`, `y = −x`.
    Asymptotic,
    /// First-order small-z form `1 + κz/(4γε)`.
    Linear,
}

/// Longitudinal propagation factor at height `z` for transverse wave number `k`.
pub fn airy_quotient(z: f64, k: f64, p: &NonparaxialParams, mode: QuotientMode) -> Result<Complex64> {
    let ge = p.gamma * p.epsilon(k);
    let x0 = -ge;
    let x = p.kappa * z + x0;
    if z == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    match mode {
        QuotientMode::Exact => Ok(outgoing_ratio(x, x0)),
        QuotientMode::Standing => {
            let den = airy_ai(x0).value;
            if den.abs() < 1e-12 {
                return Err(Error::Pole { argument: x0 });
            }
            Ok(Complex64::new(airy_ai(x).value / den, 0.0))
        }
        QuotientMode::Asymptotic => {
            let cx = Complex64::new(x, 0.0);
            let cx0 = Complex64::new(x0, 0.0);
            let (y, y0) = (-cx, -cx0);
            let amp = (cx0 / cx).powf(0.25);
            let phase = Complex64::new(0.0, 2.0 / 3.0) * (y.powf(1.5) - y0.powf(1.5));
            Ok(amp * phase.exp())
        }
        QuotientMode::Linear => Ok(Complex64::new(1.0 + p.kappa * z / (4.0 * ge), 0.0)),
    }
}

/// `∂Q/∂z` at the plate: `κ W'(x0)/W(x0)`.
pub fn quotient_slope(k: f64, p: &NonparaxialParams) -> Complex64 {
    let x0 = -p.gamma * p.epsilon(k);
    p.kappa * airy_outgoing(x0).log_deriv()
}

/// Controls for the transverse-wave-number integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Upper truncation in k; chosen from the decay rate when absent.
    pub k_max: Option<f64>,
    pub max_intervals: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { abs_tol: 1e-10, rel_tol: 1e-10, k_max: None, max_intervals: 200 }
    }
}

/// An integral together with its error estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluated {
    pub value: Complex64,
    pub error: f64,
    /// Set when a panel or the truncated tail missed the requested tolerance.
    pub warning: Option<String>,
}

impl Evaluated {
    fn exact(value: Complex64) -> Self {
        Evaluated { value, error: 0.0, warning: None }
    }
}

/// Integrates `f` over `[0, k_max]` in panels no wider than `width`, with extra
/// breakpoints. Returns value, error and the worst panel failure.
fn panels<F: Fn(f64) -> Complex64>(
    f: F,
    k_max: f64,
    width: f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> (Complex64, f64, bool) {
    let mut cuts: Vec<f64> = vec![0.0, k_max];
    cuts.extend(breaks.iter().copied().filter(|b| *b > 0.0 && *b < k_max));
    let n = (k_max / width).ceil().max(1.0) as usize;
    cuts.extend((1..n).map(|i| k_max * i as f64 / n as f64));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let pieces = cuts.len() as f64;
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut ok = true;
    for w in cuts.windows(2) {
        let r = integrate_complex(&f, w[0], w[1], spec.abs_tol / pieces, spec.rel_tol, spec.max_intervals);
        value += r.value;
        error += r.error;
        ok &= r.converged;
    }
    (value, error, ok)
}

/// Truncation point for integrands decaying at least like `e^{−k|z|}` past `k_E`.
fn decay_cutoff(p: &NonparaxialParams, z: f64, spec: &QuadratureSpec, floor: f64) -> f64 {
    if let Some(k) = spec.k_max {
        return k;
    }
    let digits = (1.0 / spec.abs_tol.max(1e-300)).ln();
    (p.k_energy() + (digits + 5.0) / z.abs()).min(floor.max(p.k_energy() + 1.0))
}

/// Diffraction kernel `K(dx, z) = (1/π) ∫₀^∞ Q(z, k) cos(k dx) dk` for `z < 0`.
///
/// The reference `e^{−k|z|}`, whose transform is `|z|/(π(z² + dx²))`, is
/// subtracted before integrating.
pub fn kernel_k(dx: f64, z: f64, p: &NonparaxialParams, spec: &QuadratureSpec) -> Result<Evaluated> {
    if !(z < 0.0) {
        return invalid("the kernel is a delta distribution at z = 0 and undefined above the plate");
    }
    let az = z.abs();
    let reference = az / (PI * (z * z + dx * dx));
    let k_max = decay_cutoff(p, z, spec, 1e7);
    let width = PI / dx.abs().max(1.0 / k_max).max(1e-300);
    let width = width.min(0.25 * k_max).max(k_max / 20000.0);
    let kq = airy_cutoffs(p);
    let f = |k: f64| {
        let q = airy_quotient(z, k, p, QuotientMode::Exact).unwrap_or_default();
        (q - (-k * az).exp()) * (k * dx).cos()
    };
    let (v, e, ok) = panels(f, k_max, width, &kq, spec);
    let value = reference + v / PI;
    Ok(Evaluated {
        value,
        error: e / PI,
        warning: (!ok).then(|| format!("kernel quadrature did not converge (error {:.1e})", e / PI)),
    })
}

/// Break points around the turning region `|γε| ≤ 8` of the Airy argument.
fn airy_cutoffs(p: &NonparaxialParams) -> Vec<f64> {
    let ke = p.k_energy();
    let mut out = vec![ke];
    let h2 = p.hbar * p.hbar / (2.0 * p.mass);
    for shift in [-8.0, 8.0] {
        let eps = shift / p.gamma;
        let ksq = (p.energy - eps) / h2;
        if ksq > 0.0 {
            out.push(ksq.sqrt());
        }
    }
    out
}

/// Field `(1/2π) ∫ φ̂(k) Q(z, k) e^{ikx} dk` for an even profile with real
/// transform `phi_hat`.
pub fn propagate_even_profile<G: Fn(f64) -> f64>(
    x: f64,
    z: f64,
    phi_hat: G,
    k_max: f64,
    p: &NonparaxialParams,
    spec: &QuadratureSpec,
) -> Evaluated {
    let width = PI / x.abs().max(1.0);
    let f = |k: f64| {
        let q = airy_quotient(z, k, p, QuotientMode::Exact).unwrap_or_default();
        q * phi_hat(k) * (k * x).cos()
    };
    let (v, e, ok) = panels(f, k_max, width, &airy_cutoffs(p), spec);
    Evaluated {
        value: v / PI,
        error: e / PI,
        warning: (!ok).then(|| "profile quadrature did not converge".to_string()),
    }
}

/// Amplitude of a single slit of width `L` centred at 0, just below the plate.
///
/// `ψ = (1/(π√L)) ∫₀^∞ Q(z,k) [sin kA − sin kB]/k dk` with `A = x + L/2`,
/// `B = x − L/2`. The part carried by `e^{−k|z|}` is `atan(A/|z|) − atan(B/|z|)`.
pub fn nearzone_single_slit(
    x: f64,
    z: f64,
    width: f64,
    p: &NonparaxialParams,
    spec: &QuadratureSpec,
) -> Result<Evaluated> {
    if !(width > 0.0) {
        return invalid(format!("slit width must be positive, got {width}"));
    }
    if z > 0.0 {
        return invalid("the near-zone field is defined below the plate (z ≤ 0)");
    }
    let a = x + 0.5 * width;
    let b = x - 0.5 * width;
    let pre = 1.0 / (PI * width.sqrt());
    if z == 0.0 {
        let ind = 0.5 * (a.signum() - b.signum());
        return Ok(Evaluated::exact(Complex64::new(ind / width.sqrt(), 0.0)));
    }
    let az = z.abs();
    let reference = pre * ((a / az).atan() - (b / az).atan());
    let g = |k: f64| -> Complex64 {
        let q = airy_quotient(z, k, p, QuotientMode::Exact).unwrap_or_default();
        let r = q - (-k * az).exp();
        if k == 0.0 {
            r * (a - b)
        } else {
            r * (((k * a).sin() - (k * b).sin()) / k)
        }
    };
    let k_max = spec.k_max.unwrap_or_else(|| {
        let scale = p.kappa.max(1.0 / width).max(p.k_energy());
        (p.k_energy() + 40.0 / az).min(400.0 * scale).max(4.0 * p.k_energy() + 40.0 * scale)
    });
    let width_k = PI / a.abs().max(b.abs()).max(1e-3);
    let width_k = width_k.max(k_max / 20000.0);
    let (v, e, ok) = panels(g, k_max, width_k, &airy_cutoffs(p), spec);
    let tail = sine_tail(
        |k| {
            let q = airy_quotient(z, k, p, QuotientMode::Exact).unwrap_or_default();
            (q - (-k * az).exp()) / k
        },
        k_max,
        a,
        b,
    );
    let value = Complex64::new(reference, 0.0) + pre * (v + tail);
    let err = pre * (e + 0.1 * tail.norm());
    let converged = ok && err <= spec.abs_tol.max(1e-6);
    Ok(Evaluated {
        value,
        error: err,
        warning: (!converged).then(|| format!("near-zone quadrature error estimate {err:.1e}")),
    })
}

/// Two-term integration-by-parts estimate of `∫_K^∞ g(k)(sin kA − sin kB) dk`.
fn sine_tail<G: Fn(f64) -> Complex64>(g: G, k: f64, a: f64, b: f64) -> Complex64 {
    let h = 1e-4 * k;
    let g0 = g(k);
    let dg = (g(k + h) - g(k - h)) / (2.0 * h);
    let one = |c: f64| -> Complex64 {
        if c == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if (c * k).abs() < 2.0 {
            // slowly varying sine: g decays at least like k^{-3}
            return g0 * c * k * k;
        }
        g0 * ((k * c).cos() / c) + dg * ((k * c).sin() / (c * c))
    };
    one(a) - one(b)
}

/// Exact derivative `∂ψ/∂z` at the plate for the single slit.
///
/// The reference part gives `(1/(π√L))(1/A − 1/B)`; the rest is
/// `(1/(π√L)) ∫ (κW'/W − k)(sin kA − sin kB)/k dk`.
pub fn nearzone_slope(x: f64, width: f64, p: &NonparaxialParams, spec: &QuadratureSpec) -> Result<Evaluated> {
    let a = x + 0.5 * width;
    let b = x - 0.5 * width;
    if a == 0.0 || b == 0.0 {
        return Err(Error::Domain("the slope diverges on a slit edge".into()));
    }
    let pre = 1.0 / (PI * width.sqrt());
    let g = |k: f64| -> Complex64 {
        let d = quotient_slope(k, p) - k;
        if k == 0.0 {
            d * (a - b)
        } else {
            d * (((k * a).sin() - (k * b).sin()) / k)
        }
    };
    let scale = p.kappa.max(1.0 / width).max(p.k_energy());
    let k_max = spec.k_max.unwrap_or(4.0 * p.k_energy() + 2000.0 * scale);
    let width_k = (PI / a.abs().max(b.abs())).max(k_max / 20000.0);
    let (v, e, ok) = panels(g, k_max, width_k, &airy_cutoffs(p), spec);
    let tail = sine_tail(|k| (quotient_slope(k, p) - k) / k, k_max, a, b);
    Ok(Evaluated {
        value: pre * (Complex64::new(1.0 / a - 1.0 / b, 0.0) + v + tail),
        error: pre * (e + 0.1 * tail.norm()),
        warning: (!ok).then(|| "slope quadrature did not converge".to_string()),
    })
}

/// Closed-form small-z approximation `φ(x) − κ z x √L / 4`.
pub fn nearzone_smallz(x: f64, z: f64, width: f64, p: &NonparaxialParams) -> Complex64 {
    let h = 0.5 * width;
    let phi = if x.abs() < h {
        1.0 / width.sqrt()
    } else if x.abs() == h {
        0.5 / width.sqrt()
    } else {
        0.0
    };
    let bracket = (x - h).powi(2) - (x + h).powi(2);
    Complex64::new(phi + p.kappa * z / (8.0 * width.sqrt()) * bracket, 0.0)
}

/// Near-zone single-slit field on a grid, row-major in z then x.
pub fn nearzone_grid(
    width: f64,
    p: &NonparaxialParams,
    grid: &Grid,
    spec: &QuadratureSpec,
) -> Result<(ComplexAmplitudeField, usize)> {
    if grid.z_max > 0.0 {
        return invalid("near-zone grids must lie below the plate (z ≤ 0)");
    }
    let values: Vec<Result<Evaluated>> = (0..grid.len())
        .into_par_iter()
        .map(|node| {
            let (x, z) = grid.node(node);
            nearzone_single_slit(x, z, width, p, spec)
        })
        .collect();
    let mut amplitudes = Vec::with_capacity(values.len());
    let mut warnings = 0;
    for v in values {
        let v = v?;
        warnings += usize::from(v.warning.is_some());
        amplitudes.push(v.value);
    }
    Ok((ComplexAmplitudeField { grid: *grid, amplitudes }, warnings))
}

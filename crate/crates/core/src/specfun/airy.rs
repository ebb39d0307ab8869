//! Airy functions Ai, Bi, their derivatives, the zeros of Ai, and the
//! outgoing combination `W = Ai − i Bi`.
//!
//! For `|x| ≤ 8` the Maclaurin series is summed in double-double arithmetic,
//! which absorbs the cancellation between the two power series. Beyond that the
//! standard asymptotic expansions are used, truncated at their smallest term.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{invalid, Result};
use crate::numeric::dd::Dd;

const SERIES_LIMIT: f64 = 8.0;

/// Ai(0).
const AI0: Dd = Dd::new(0.3550280538878172, 2.05233632436212e-17);
/// −Ai'(0).
const MAI0P: Dd = Dd::new(0.2588194037928068, -2.522243111610832e-17);
const SQRT3: Dd = Dd::new(1.7320508075688772, 1.0035084221806903e-16);

/// Value and derivative of an Airy function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryPair {
    pub value: f64,
    pub deriv: f64,
}

struct Series {
    ai: f64,
    aip: f64,
    bi: f64,
    bip: f64,
}

fn maclaurin(x: f64) -> Series {
    let xd = Dd::from(x);
    let x3 = xd * xd * xd;
    let (mut f, mut g) = (Dd::ONE, xd);
    let (mut fp, mut gp) = (Dd::ZERO, Dd::ONE);
    let (mut tf, mut tg) = (Dd::ONE, xd);
    let mut tfp = (xd * xd).mul_f64(0.5);
    let mut tgp = Dd::ONE;
    fp = fp + tfp;
    for k in 1..400usize {
        let k3 = 3.0 * k as f64;
        tf = (tf * x3).div_f64((k3 - 1.0) * k3);
        tg = (tg * x3).div_f64(k3 * (k3 + 1.0));
        tgp = (tgp * x3).div_f64((k3 - 2.0) * k3);
        f = f + tf;
        g = g + tg;
        gp = gp + tgp;
        if k >= 2 {
            tfp = (tfp * x3).div_f64((k3 - 3.0) * (k3 - 1.0));
            fp = fp + tfp;
        }
        let small = |t: Dd, s: Dd| t.hi.abs() <= 1e-34 * s.hi.abs().max(1.0);
        if k > 2 && small(tf, f) && small(tg, g) && small(tfp, fp) && small(tgp, gp) {
            break;
        }
    }
    let ai = AI0 * f - MAI0P * g;
    let aip = AI0 * fp - MAI0P * gp;
    let bi = SQRT3 * (AI0 * f + MAI0P * g);
    let bip = SQRT3 * (AI0 * fp + MAI0P * gp);
    Series { ai: ai.to_f64(), aip: aip.to_f64(), bi: bi.to_f64(), bip: bip.to_f64() }
}

/// Coefficients u_k / ζ^k and v_k / ζ^k of the asymptotic expansions, up to
/// the smallest term.
fn asymptotic_terms(zeta: f64) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    let mut uk = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200usize {
        let kf = k as f64;
        uk *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        uk /= zeta;
        let vk = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk;
        let size = uk.abs().max(vk.abs());
        if size >= last {
            break;
        }
        u.push(uk);
        v.push(vk);
        last = size;
        if size < 1e-18 {
            break;
        }
    }
    (u, v)
}

/// Σ s^k t_k over the terms.
fn alternating(terms: &[f64], sign: f64) -> f64 {
    terms
        .iter()
        .enumerate()
        .map(|(k, t)| if k % 2 == 1 { sign * t } else { *t })
        .sum()
}

/// (Σ (−1)^k t_{2k}, Σ (−1)^k t_{2k+1}).
fn even_odd(terms: &[f64]) -> (f64, f64) {
    let mut even = 0.0;
    let mut odd = 0.0;
    for (k, t) in terms.iter().enumerate() {
        let s = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            even += s * t;
        } else {
            odd += s * t;
        }
    }
    (even, odd)
}

/// Scaled positive-side sums: Ai·e^{ζ}, Ai'·e^{ζ}, Bi·e^{−ζ}, Bi'·e^{−ζ}.
fn positive_scaled(x: f64) -> (f64, Series) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let (u, v) = asymptotic_terms(zeta);
    let q = x.powf(0.25);
    let sp = PI.sqrt();
    let s = Series {
        ai: alternating(&u, -1.0) / (2.0 * sp * q),
        aip: -q * alternating(&v, -1.0) / (2.0 * sp),
        bi: alternating(&u, 1.0) / (sp * q),
        bip: q * alternating(&v, 1.0) / sp,
    };
    (zeta, s)
}

/// Negative-side sums for x = −y: returns θ = ζ − π/4, (P, Q, R, S) and y^{1/4}.
fn negative_parts(y: f64) -> (f64, f64, f64, f64, f64, f64) {
    let zeta = 2.0 / 3.0 * y * y.sqrt();
    let (u, v) = asymptotic_terms(zeta);
    let (p, q) = even_odd(&u);
    let (r, s) = even_odd(&v);
    (zeta - FRAC_PI_4, p, q, r, s, y.powf(0.25))
}

fn evaluate(x: f64) -> Series {
    if x.abs() <= SERIES_LIMIT {
        return maclaurin(x);
    }
    if x > 0.0 {
        let (zeta, s) = positive_scaled(x);
        let (d, g) = ((-zeta).exp(), zeta.exp());
        Series { ai: s.ai * d, aip: s.aip * d, bi: s.bi * g, bip: s.bip * g }
    } else {
        let (theta, p, q, r, s, y4) = negative_parts(-x);
        let (sn, cs) = theta.sin_cos();
        let sp = PI.sqrt();
        Series {
            ai: (cs * p + sn * q) / (sp * y4),
            aip: y4 * (sn * r - cs * s) / sp,
            bi: (-sn * p + cs * q) / (sp * y4),
            bip: y4 * (cs * r + sn * s) / sp,
        }
    }
}

/// Ai(x) and Ai'(x).
pub fn airy_ai(x: f64) -> AiryPair {
    let s = evaluate(x);
    AiryPair { value: s.ai, deriv: s.aip }
}

/// Bi(x) and Bi'(x).
pub fn airy_bi(x: f64) -> AiryPair {
    let s = evaluate(x);
    AiryPair { value: s.bi, deriv: s.bip }
}

/// `n`-th zero of Ai (negative), `n ≥ 1`.
pub fn airy_zero(n: usize) -> Result<f64> {
    if n == 0 {
        return invalid("Airy zeros are numbered from 1");
    }
    let t = 3.0 * PI * (4.0 * n as f64 - 1.0) / 8.0;
    let t2 = t.powi(-2);
    let mut x = -t.powf(2.0 / 3.0)
        * (1.0 + t2 * (5.0 / 48.0 - t2 * (5.0 / 36.0 - t2 * 77125.0 / 82944.0)));
    for _ in 0..50 {
        let a = airy_ai(x);
        let step = a.value / a.deriv;
        x -= step;
        if step.abs() <= 1e-15 * x.abs() {
            break;
        }
    }
    Ok(x)
}

/// The outgoing combination `W = Ai − i Bi` in scaled form.
///
/// `W(x) = exp(exponent)·value` and `W'(x) = exp(exponent)·deriv`. The exponent
/// is `ζ` for x > 8, `i(ζ − π/4)` for x < −8 and zero in between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outgoing {
    pub exponent: Complex64,
    pub value: Complex64,
    pub deriv: Complex64,
}

impl Outgoing {
    pub fn unscaled(&self) -> (Complex64, Complex64) {
        let e = self.exponent.exp();
        (e * self.value, e * self.deriv)
    }

    /// Logarithmic derivative W'/W.
    pub fn log_deriv(&self) -> Complex64 {
        self.deriv / self.value
    }
}

pub fn airy_outgoing(x: f64) -> Outgoing {
    let i = Complex64::i();
    if x.abs() <= SERIES_LIMIT {
        let s = maclaurin(x);
        return Outgoing {
            exponent: Complex64::new(0.0, 0.0),
            value: Complex64::new(s.ai, -s.bi),
            deriv: Complex64::new(s.aip, -s.bip),
        };
    }
    if x > 0.0 {
        let (zeta, s) = positive_scaled(x);
        let d = (-2.0 * zeta).exp();
        Outgoing {
            exponent: Complex64::new(zeta, 0.0),
            value: Complex64::new(s.ai * d, -s.bi),
            deriv: Complex64::new(s.aip * d, -s.bip),
        }
    } else {
        let (theta, p, q, r, s, y4) = negative_parts(-x);
        let sp = PI.sqrt();
        Outgoing {
            exponent: Complex64::new(0.0, theta),
            value: Complex64::new(p, -q) / (sp * y4),
            deriv: (-i * r - s) * (y4 / sp),
        }
    }
}

/// `(2/3)(|b|^{3/2} − |a|^{3/2})` without cancellation, for a, b of equal sign.
fn zeta_difference(b: f64, a: f64) -> f64 {
    let (b, a) = (b.abs(), a.abs());
    let (sb, sa) = (b.sqrt(), a.sqrt());
    2.0 / 3.0 * (b - a) * (b + sb * sa + a) / (sb + sa)
}

/// `W(x1)/W(x0)`, finite even when both values overflow separately.
pub fn outgoing_ratio(x1: f64, x0: f64) -> Complex64 {
    let w1 = airy_outgoing(x1);
    let w0 = airy_outgoing(x0);
    let mantissa = w1.value / w0.value;
    let exponent = if x1 > SERIES_LIMIT && x0 > SERIES_LIMIT {
        Complex64::new(zeta_difference(x1, x0), 0.0)
    } else if x1 < -SERIES_LIMIT && x0 < -SERIES_LIMIT {
        Complex64::new(0.0, zeta_difference(x1, x0))
    } else {
        w1.exponent - w0.exponent
    };
    mantissa * exponent.exp()
}

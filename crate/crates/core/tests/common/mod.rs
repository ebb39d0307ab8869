//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the library; each oracle uses a different
//! algorithm from the production code path.

#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;

/// Adaptive Simpson quadrature with Richardson correction.
pub fn simpson<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64) -> Complex64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> Complex64>(
        f: &F,
        a: f64,
        b: f64,
        fa: Complex64,
        fm: Complex64,
        fb: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Complex64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        // Below this the difference is rounding noise, not truncation error.
        let noise = 8.0 * f64::EPSILON * (b - a) * (fa.norm() + 4.0 * fm.norm() + fb.norm()) / 6.0;
        if depth == 0 || delta.norm() <= (15.0 * tol).max(noise) {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    // Seed with a uniform split so oscillatory integrands are resolved from the start.
    let pieces = 64;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let (x0, x1) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let (f0, fm, f1) = (f(x0), f(0.5 * (x0 + x1)), f(x1));
            let whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
            rec(f, x0, x1, f0, fm, f1, whole, tol / pieces as f64, 30)
        })
        .sum()
}

pub fn simpson_real<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    simpson(&|x| Complex64::new(f(x), 0.0), a, b, tol).re
}

/// Nodes and weights of the 16-point Gauss–Legendre rule on `[-1, 1]`.
fn legendre_rule() -> Vec<(f64, f64)> {
    let n = 16;
    (1..=n)
        .map(|i| {
            let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Composite Gauss–Legendre quadrature, doubling the panel count until two
/// successive results agree to `tol` (relative to the larger of 1 and |I|).
pub fn gauss<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64) -> Complex64 {
    let rule = legendre_rule();
    let eval = |panels: usize| -> Complex64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|p| {
                let mid = a + (p as f64 + 0.5) * h;
                rule.iter().map(|&(x, w)| w * f(mid + 0.5 * h * x)).sum::<Complex64>() * (0.5 * h)
            })
            .sum()
    };
    let mut panels = 2;
    let mut prev = eval(panels);
    loop {
        panels *= 2;
        let next = eval(panels);
        if (next - prev).norm() <= tol * next.norm().max(1.0) || panels >= 1 << 16 {
            return next;
        }
        prev = next;
    }
}

pub fn gauss_real<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    gauss(&|x| Complex64::new(f(x), 0.0), a, b, tol).re
}

/// Golden-section search for a maximum of a unimodal function on `[a, b]`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// `∫₀^Z exp(i t²) dt` along the straight segment, `Z ∫₀¹ exp(i Z² s²) ds`.
pub fn fresnel_quad(z: Complex64, tol: f64) -> Complex64 {
    let z2 = z * z;
    z * gauss(&|s| (Complex64::i() * z2 * s * s).exp(), 0.0, 1.0, tol)
}

/// Power series `Σ iⁿ Z^{2n+1}/(n!(2n+1))`, accurate for moderate real `Z`.
pub fn fresnel_series(z: f64) -> Complex64 {
    let z2 = z * z;
    let mut term = Complex64::new(z, 0.0);
    let mut sum = term;
    for n in 1..200 {
        term *= Complex64::i() * z2 / n as f64;
        let add = term / (2 * n + 1) as f64;
        sum += add;
        if add.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

/// Ai from integral representations: a decaying real integral for `x ≥ 0`
/// and the steepest-descent rays `arg t = ±π/3` for `x < 0`.
pub fn airy_ai_quad(x: f64) -> f64 {
    if x >= 0.0 {
        let zeta = 2.0 / 3.0 * x.powf(1.5);
        let sx = x.sqrt();
        let upper = if sx > 0.0 { (60.0 / sx).sqrt().min(8.0) } else { 8.0 };
        (-zeta).exp() / PI * gauss_real(&|t| (-sx * t * t).exp() * (t * t * t / 3.0).cos(), 0.0, upper, 1e-14)
    } else {
        let w = Complex64::from_polar(1.0, PI / 3.0);
        let i = gauss(&|r| (-(r * r * r) / 3.0 - x * r * w).exp(), 0.0, 8.0, 1e-14);
        (w * i).im / PI
    }
}

/// Ai and Ai' from a plain Maclaurin series; reliable for `|x| ≲ 3`.
pub fn airy_maclaurin(x: f64) -> (f64, f64) {
    let c1 = 0.355_028_053_887_817_2;
    let c2 = 0.258_819_403_792_806_8;
    // f = Σ 3^k (1/3)_k x^{3k}/(3k)!, g = Σ 3^k (2/3)_k x^{3k+1}/(3k+1)!
    let (mut f, mut g) = (1.0, x);
    let (mut fp, mut gp) = (0.0, 1.0);
    let (mut tf, mut tg) = (1.0, x);
    for k in 1..80 {
        let kf = k as f64;
        tf *= x * x * x / ((3.0 * kf - 1.0) * (3.0 * kf));
        tg *= x * x * x / ((3.0 * kf) * (3.0 * kf + 1.0));
        f += tf;
        g += tg;
        fp += 3.0 * kf * tf / x;
        gp += (3.0 * kf + 1.0) * tg / x;
    }
    if x == 0.0 {
        return (c1, -c2);
    }
    (c1 * f - c2 * g, c1 * fp - c2 * gp)
}

/// Bessel J₁ and Y₁ from their integral representations.
pub fn bessel_j1_y1(x: f64) -> (f64, f64) {
    let j1 = gauss_real(&|t| (t - x * t.sin()).cos(), 0.0, PI, 1e-14) / PI;
    let y_a = gauss_real(&|t| (x * t.sin() - t).sin(), 0.0, PI, 1e-14) / PI;
    let t_max = (60.0 / x).asinh() + 2.0;
    let y_b = gauss_real(&|t| (t.exp() - (-t).exp()) * (-x * t.sinh()).exp(), 0.0, t_max, 1e-14) / PI;
    (j1, y_a - y_b)
}

/// Free half-space propagator `(1/π)∫₀^∞ exp(i k_z |z|) cos(k dx) dk` with
/// `k_z = √(k₀² − k²)` continued to `i√(k² − k₀²)`, in closed form
/// `i k₀ |z| H₁⁽¹⁾(k₀ ρ)/(2ρ)`.
pub fn free_kernel(dx: f64, z: f64, k0: f64) -> Complex64 {
    let rho = (dx * dx + z * z).sqrt();
    let (j1, y1) = bessel_j1_y1(k0 * rho);
    Complex64::i() * (k0 * z.abs() / (2.0 * rho)) * Complex64::new(j1, y1)
}

/// Free-particle amplitude of a normalized slit, by direct quadrature of the
/// free propagator over the aperture.
pub fn free_slit(x: f64, t: f64, width: f64, mass: f64, hbar: f64) -> Complex64 {
    let pref = (Complex64::new(mass / (2.0 * PI * hbar * t), 0.0) / Complex64::i()).sqrt() / width.sqrt();
    let a = mass / (2.0 * hbar * t);
    pref * gauss(&|xp| (Complex64::i() * a * (x - xp) * (x - xp)).exp(), -0.5 * width, 0.5 * width, 1e-13)
}

/// Double-double arithmetic for the extended-precision focus oracle.
#[derive(Debug, Clone, Copy)]
pub struct D2(pub f64, pub f64);

impl D2 {
    pub fn new(x: f64) -> Self {
        D2(x, 0.0)
    }
    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }
    pub fn add(self, o: D2) -> D2 {
        let (s, e) = Self::two_sum(self.0, o.0);
        let e = e + self.1 + o.1;
        let (h, l) = Self::two_sum(s, e);
        D2(h, l)
    }
    pub fn neg(self) -> D2 {
        D2(-self.0, -self.1)
    }
    pub fn sub(self, o: D2) -> D2 {
        self.add(o.neg())
    }
    pub fn mul(self, o: D2) -> D2 {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p) + self.0 * o.1 + self.1 * o.0;
        let (h, l) = Self::two_sum(p, e);
        D2(h, l)
    }
    pub fn div(self, o: D2) -> D2 {
        let q1 = self.0 / o.0;
        let r = self.sub(o.mul(D2::new(q1)));
        let q2 = r.0 / o.0;
        let r = r.sub(o.mul(D2::new(q2)));
        let q3 = r.0 / o.0;
        D2::new(q1).add(D2::new(q2)).add(D2::new(q3))
    }
    pub fn sqrt(self) -> D2 {
        let y = D2::new(self.0.sqrt());
        // One Newton step doubles the f64 accuracy.
        y.add(self.sub(y.mul(y)).div(y.add(y)))
    }
    pub fn to_f64(self) -> f64 {
        self.0 + self.1
    }
}

/// `α E/m − (L⁴β²/2α)[c + (α/(βL²))√(2E/m)]²` with `α = m/F`, `β = m/ħ`,
/// evaluated term by term in double-double arithmetic.
pub fn focus_direct_dd(mass: f64, force: f64, hbar: f64, e_kin: f64, width: f64, c: f64) -> f64 {
    let (m, f, h, e, l) = (D2::new(mass), D2::new(force), D2::new(hbar), D2::new(e_kin), D2::new(width));
    let alpha = m.div(f);
    let beta = m.div(h);
    let l2 = l.mul(l);
    let classical = alpha.mul(e).div(m);
    let v = D2::new(2.0).mul(e).div(m).sqrt();
    let bracket = D2::new(c).add(alpha.div(beta.mul(l2)).mul(v));
    let quantum = l2.mul(l2).mul(beta).mul(beta).div(D2::new(2.0).mul(alpha)).mul(bracket).mul(bracket);
    classical.sub(quantum).to_f64()
}

/// The same expression in plain double precision.
pub fn focus_direct_f64(mass: f64, force: f64, hbar: f64, e_kin: f64, width: f64, c: f64) -> f64 {
    let alpha = mass / force;
    let beta = mass / hbar;
    let bracket = c + alpha / (beta * width * width) * (2.0 * e_kin / mass).sqrt();
    alpha * e_kin / mass - width.powi(4) * beta * beta / (2.0 * alpha) * bracket * bracket
}

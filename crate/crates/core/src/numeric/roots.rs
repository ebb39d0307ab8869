//! Bracketed root finding: Newton steps guarded by bisection.

use crate::error::{invalid, Result};

/// Finds a root of `f` in `[a, b]` given `fdf(x) = (f(x), f'(x))`.
///
/// The bracket must have a sign change. Newton steps that leave the current
/// bracket, or fail to halve it, fall back to bisection.
pub fn newton_bracketed<F>(mut fdf: F, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (mut fa, _) = fdf(a);
    let (fb, _) = fdf(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return invalid(format!("no sign change on [{a}, {b}]"));
    }
    let mut x = 0.5 * (a + b);
    let mut prev_width = (b - a).abs();
    for _ in 0..max_iter {
        let (fx, dfx) = fdf(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
        }
        let width = (b - a).abs();
        let newton = x - fx / dfx;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let next = if dfx != 0.0 && newton > lo && newton < hi && width < 0.75 * prev_width + tol {
            newton
        } else {
            0.5 * (a + b)
        };
        prev_width = width;
        if (next - x).abs() <= tol * (1.0 + x.abs()) || width <= tol * (1.0 + x.abs()) {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

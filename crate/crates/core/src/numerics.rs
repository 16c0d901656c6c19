//! Small shared numerical routines: adaptive quadrature, root bracketing
//! and bisection, cubic interpolation on uniform grids.

use crate::error::{Error, Result};

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance
/// `tol`. Recursion splits until the Richardson estimate of the local error
/// is below the locally allotted tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 60).ok_or_else(|| {
        Error::Quadrature(format!(
            "adaptive Simpson did not converge on [{a}, {b}] to tol {tol}"
        ))
    })
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Option<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let err = left + right - whole;
    if err.abs() <= 15.0 * tol || (b - a).abs() < 1e-14 {
        return Some(left + right + err / 15.0);
    }
    if depth == 0 {
        return None;
    }
    let l = simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Some(l + r)
}

/// Bisection on `[a, b]`. Requires a sign change; converges to `xtol`.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, xtol: f64) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NumericalFailure(format!(
            "bisection bracket [{a}, {b}] has no sign change (f(a) = {fa}, f(b) = {fb})"
        )));
    }
    while (b - a).abs() > xtol {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Scan `[a, b]` at `n` points and return every subinterval with a sign change.
pub fn sign_change_brackets<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut xp = a;
    let mut fp = f(a);
    for i in 1..=n {
        let x = a + (b - a) * i as f64 / n as f64;
        let fx = f(x);
        if fp == 0.0 || fp.signum() != fx.signum() {
            out.push((xp, x));
        }
        xp = x;
        fp = fx;
    }
    out
}

/// Cubic (Catmull-Rom) interpolation on a uniform grid. `ys` are samples at
/// `x0 + i*dx`; outside the sample range the value is 0 (our tabulated
/// wavefunctions vanish at the domain walls).
pub struct UniformCubic {
    x0: f64,
    dx: f64,
    ys: Vec<f64>,
}

impl UniformCubic {
    pub fn new(x0: f64, dx: f64, ys: Vec<f64>) -> Self {
        assert!(ys.len() >= 4, "need at least 4 samples");
        Self { x0, dx, ys }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.ys.len();
        let u = (x - self.x0) / self.dx;
        if u < 0.0 || u > (n - 1) as f64 {
            return 0.0;
        }
        let i = (u.floor() as usize).min(n - 2);
        let t = u - i as f64;
        // one-sided neighbours at the ends, zero-padded (functions vanish there)
        let ym = if i == 0 { 0.0 } else { self.ys[i - 1] };
        let y0 = self.ys[i];
        let y1 = self.ys[i + 1];
        let yp = if i + 2 >= n { 0.0 } else { self.ys[i + 2] };
        let a = -0.5 * ym + 1.5 * y0 - 1.5 * y1 + 0.5 * yp;
        let b = ym - 2.5 * y0 + 2.0 * y1 - 0.5 * yp;
        let c = 0.5 * (y1 - ym);
        ((a * t + b) * t + c) * t + y0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_exact_on_cubics() {
        let v = integrate(&|x: f64| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, 1e-12).unwrap();
        // antiderivative x^4/4 - x^2 + x
        let exact = (81.0 / 4.0 - 9.0 + 3.0) - (0.25 - 1.0 - 1.0);
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn simpson_oscillatory() {
        let v = integrate(&|x: f64| (10.0 * x).sin(), 0.0, 1.0, 1e-12).unwrap();
        let exact = (1.0 - (10.0_f64).cos()) / 10.0;
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(&|x: f64| x * x - 2.0, 0.0, 2.0, 1e-13).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn bisect_rejects_bad_bracket() {
        assert!(bisect(&|x: f64| x * x + 1.0, -1.0, 1.0, 1e-13).is_err());
    }

    #[test]
    fn cubic_reproduces_smooth_function() {
        let n = 200;
        let dx = 0.05;
        let ys: Vec<f64> = (0..n).map(|i| (0.3 * i as f64 * dx).sin()).collect();
        let interp = UniformCubic::new(0.0, dx, ys);
        for k in 0..50 {
            let x = 0.5 + 0.17 * k as f64;
            if x < (n - 1) as f64 * dx {
                assert!((interp.eval(x) - (0.3 * x).sin()).abs() < 1e-6);
            }
        }
    }
}

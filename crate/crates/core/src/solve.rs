//! Scalar root finders used by the chord, polarity and carousel solvers.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    /// Stop once `|f(x)| <= ftol`.
    pub ftol: f64,
    /// Stop once the bracket is narrower than `xtol`.
    pub xtol: f64,
    pub max_iter: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { ftol: 0.0, xtol: 1e-15, max_iter: 200 }
    }
}

/// Newton iteration safeguarded by a sign-change bracket `[lo, hi]`.
///
/// `f` returns the value and derivative. Steps that leave the bracket, or do
/// not at least halve `|f|`, are replaced by bisection.
pub fn safeguarded_newton(
    mut f: impl FnMut(f64) -> Result<(f64, f64)>,
    mut lo: f64,
    mut hi: f64,
    x0: Option<f64>,
    tol: Tolerance,
) -> Result<f64> {
    let (flo, _) = f(lo)?;
    let (fhi, _) = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::solver(format!("no sign change on [{lo}, {hi}] (f = {flo:e}, {fhi:e})")));
    }
    let lo_negative = flo < 0.0;
    let mut x = x0.filter(|x| *x > lo && *x < hi).unwrap_or(0.5 * (lo + hi));
    let mut last_abs = f64::INFINITY;
    for _ in 0..tol.max_iter {
        let (fx, dfx) = f(x)?;
        if !fx.is_finite() {
            return Err(Error::solver(format!("non-finite residual at {x}")));
        }
        if fx.abs() <= tol.ftol || fx == 0.0 {
            return Ok(x);
        }
        if (fx < 0.0) == lo_negative {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= tol.xtol * (1.0 + x.abs()) {
            return Ok(x);
        }
        let newton = x - fx / dfx;
        let ok = dfx != 0.0 && newton.is_finite() && newton > lo && newton < hi && fx.abs() < 0.5 * last_abs;
        last_abs = fx.abs();
        x = if ok { newton } else { 0.5 * (lo + hi) };
    }
    Err(Error::solver(format!("Newton did not converge within {} iterations", tol.max_iter)))
}

/// Illinois variant of regula falsi; derivative-free.
pub fn illinois(mut f: impl FnMut(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: Tolerance) -> Result<f64> {
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::solver(format!("no sign change on [{a}, {b}]")));
    }
    let mut side = 0i8;
    for _ in 0..tol.max_iter {
        let c = (a * fb - b * fa) / (fb - fa);
        let fc = f(c)?;
        if fc.abs() <= tol.ftol || fc == 0.0 || (b - a).abs() <= tol.xtol * (1.0 + c.abs()) {
            return Ok(c);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Err(Error::solver("regula falsi did not converge"))
}

/// Sign changes of `f` on a uniform grid of `n` points over `[a, b)`.
/// Returns the subintervals `(u_i, u_{i+1})` with `f(u_i)·f(u_{i+1}) < 0`,
/// together with the sign of `f` at the left end.
pub fn scan_sign_changes(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, n: usize) -> Vec<(f64, f64, f64)> {
    let h = (b - a) / n as f64;
    let mut out = Vec::new();
    let mut u0 = a;
    let mut f0 = f(u0);
    for i in 1..=n {
        let u1 = a + i as f64 * h;
        let f1 = f(u1);
        if f0 == 0.0 || f0.signum() != f1.signum() && f1 != 0.0 {
            out.push((u0, u1, f0.signum()));
        }
        u0 = u1;
        f0 = f1;
    }
    out
}

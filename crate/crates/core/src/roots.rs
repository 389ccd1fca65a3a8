//! Bracketed scalar root finding.

use crate::error::{Error, Result};

/// Brent's method (zeroin) on a bracket [a, b] with f(a)·f(b) ≤ 0.
/// Each iteration costs one evaluation of `f`; errors from `f` propagate.
pub fn brent<F>(a: f64, b: f64, xtol: f64, max_iter: usize, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (fa, fb) = (f(a)?, f(b)?);
    brent_with_values(a, fa, b, fb, xtol, max_iter, f)
}

/// As [`brent`] with the endpoint values already known.
pub fn brent_with_values<F>(
    mut a: f64,
    mut fa: f64,
    mut b: f64,
    mut fb: f64,
    xtol: f64,
    max_iter: usize,
    mut f: F,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoIntersection(format!(
            "root not bracketed: f({a:e}) = {fa:e}, f({b:e}) = {fb:e}"
        )));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::NonConvergence {
        what: "Brent root search",
        iterations: max_iter,
        residual: fb,
    })
}

/// Scans `f` on a uniform grid of `n` intervals over [a, b] and returns the
/// sub-intervals where it changes sign, with endpoint values.
pub fn sign_changes<F>(a: f64, b: f64, n: usize, mut f: F) -> Result<Vec<(f64, f64, f64, f64)>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut out = Vec::new();
    let mut x0 = a;
    let mut f0 = f(a)?;
    for k in 1..=n {
        let x1 = a + (b - a) * k as f64 / n as f64;
        let f1 = f(x1)?;
        if f0.signum() != f1.signum() || f1 == 0.0 {
            out.push((x0, f0, x1, f1));
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_simple_roots() {
        let r = brent(0.0, 2.0, 1e-15, 100, |x| Ok(x * x - 2.0)).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        let r = brent(3.0, 4.0, 1e-15, 100, |x: f64| Ok(x.sin())).unwrap();
        assert!((r - std::f64::consts::PI).abs() < 1e-14);
        assert!(brent(0.0, 1.0, 1e-12, 100, |x| Ok(x + 1.0)).is_err());
    }

    #[test]
    fn evaluation_count_is_small() {
        let mut n = 0;
        brent(0.0, 3.0, 1e-14, 100, |x: f64| {
            n += 1;
            Ok(x.exp() - 5.0)
        })
        .unwrap();
        assert!(n < 15, "{n}");
    }

    #[test]
    fn scans_sign_changes() {
        let v = sign_changes(0.1, 10.0, 100, |x: f64| Ok(x.sin())).unwrap();
        assert_eq!(v.len(), 3);
    }
}

//! Brent's method: inverse quadratic interpolation and secant steps,
//! safeguarded by bisection.

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("f({a}) = {fa} and f({b}) = {fb} have the same sign")]
    NoSignChange { a: f64, fa: f64, b: f64, fb: f64 },
    #[error("function returned a non-finite value at {x}")]
    NotFinite { x: f64 },
    #[error("maximum number of iterations reached")]
    MaxIter,
}

/// Termination controls. The search stops once the bracket is narrower than
/// `xtol_abs + xtol_rel * |x|` or `|f(x)| <= ftol`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance<T> {
    pub xtol_abs: T,
    pub xtol_rel: T,
    pub ftol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Tolerance {
            xtol_abs: T::zero(),
            xtol_rel: T::epsilon() * T::two(),
            ftol: T::zero(),
            max_iter: 200,
        }
    }
}

impl<T: Real> Tolerance<T> {
    pub fn with_xtol(mut self, abs: T, rel: T) -> Self {
        self.xtol_abs = abs;
        self.xtol_rel = rel;
        self
    }

    pub fn with_ftol(mut self, ftol: T) -> Self {
        self.ftol = ftol;
        self
    }
}

/// Root of `f` in `[a, b]` where `f(a)` and `f(b)` differ in sign.
pub fn brent<T, F>(f: F, a: T, b: T, tol: Tolerance<T>) -> Result<T, RootError>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let mut f = f;
    let fa = f(a);
    let fb = f(b);
    brent_with_values(f, a, fa, b, fb, tol)
}

/// Same as [`brent`] when the end-point values are already known.
pub fn brent_with_values<T, F>(
    mut f: F,
    a: T,
    fa: T,
    b: T,
    fb: T,
    tol: Tolerance<T>,
) -> Result<T, RootError>
where
    T: Real,
    F: FnMut(T) -> T,
{
    if !fa.is_finite() {
        return Err(RootError::NotFinite { x: a.as_f64() });
    }
    if !fb.is_finite() {
        return Err(RootError::NotFinite { x: b.as_f64() });
    }
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if (fa > T::zero()) == (fb > T::zero()) {
        return Err(RootError::NoSignChange {
            a: a.as_f64(),
            fa: fa.as_f64(),
            b: b.as_f64(),
            fb: fb.as_f64(),
        });
    }

    let (mut a, mut fa, mut b, mut fb) = (a, fa, b, fb);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    let two = T::two();
    let three = T::lit(3.0);

    for _ in 0..tol.max_iter {
        if (fb > T::zero()) == (fc > T::zero()) {
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
        let tol1 = two * T::epsilon() * b.abs() + (tol.xtol_abs + tol.xtol_rel * b.abs()) / two;
        let xm = (c - b) / two;
        if xm.abs() <= tol1 || fb == T::zero() || fb.abs() <= tol.ftol {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qq * (qq - r) - (b - a) * (r - T::one()));
                q = (qq - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = three * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 {
            b + d
        } else if xm > T::zero() {
            b + tol1
        } else {
            b - tol1
        };
        fb = f(b);
        if !fb.is_finite() {
            return Err(RootError::NotFinite { x: b.as_f64() });
        }
    }
    Err(RootError::MaxIter)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = brent(|x: f64| x * x - 2.0, 0.0, 2.0, Tolerance::default()).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_same_sign() {
        let e = brent(|x: f64| x * x + 1.0, -1.0, 1.0, Tolerance::default()).unwrap_err();
        assert!(matches!(e, RootError::NoSignChange { .. }));
    }

    #[test]
    fn flat_then_steep() {
        let r = brent(
            |x: f64| (x - 0.3).powi(3) * 1e6 + 1e-300,
            -1.0,
            1.0,
            Tolerance::default(),
        )
        .unwrap();
        assert!((r - 0.3).abs() < 1e-5);
    }

    #[test]
    fn generic_f32() {
        let r = brent(|x: f32| x.cos() - x, 0.0, 1.0, Tolerance::default()).unwrap();
        assert!((r - 0.739_085_1).abs() < 1e-6);
    }
}

//! Regularization functions: smooth monotone sigmoids `φ` with `φ → 1` at
//! `+∞` and `φ → 0` at `−∞`, used to blend the two fields across `y = 0`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::scalar::Real;

pub trait Regularization<T: Real>: Send + Sync {
    fn value(&self, s: T) -> T;
    fn derivative(&self, s: T) -> T;
    /// Inverse on `(0, 1)`.
    fn inverse(&self, p: T) -> T;
    fn name(&self) -> &'static str;
}

/// `φ(s) = 1/2 + arctan(s)/π`. Algebraic approach to the limits, which
/// makes it smooth at infinity after the change `s ↦ 1/s`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ArctanSigmoid;

/// `φ(s) = (1 + tanh s)/2`. Exponential approach to the limits.
#[derive(Debug, Clone, Copy, Default)]
pub struct TanhSigmoid;

impl<T: Real> Regularization<T> for ArctanSigmoid {
    fn value(&self, s: T) -> T {
        T::half() + s.atan() / T::PI()
    }
    fn derivative(&self, s: T) -> T {
        T::one() / (T::PI() * (T::one() + s * s))
    }
    fn inverse(&self, p: T) -> T {
        (T::PI() * (p - T::half())).tan()
    }
    fn name(&self) -> &'static str {
        "arctan"
    }
}

impl<T: Real> Regularization<T> for TanhSigmoid {
    fn value(&self, s: T) -> T {
        // (1 + tanh s)/2 written as a logistic to keep relative accuracy for s ≪ 0
        T::one() / (T::one() + (-T::two() * s).exp())
    }
    fn derivative(&self, s: T) -> T {
        let c = s.cosh();
        T::half() / (c * c)
    }
    fn inverse(&self, p: T) -> T {
        (T::two() * p - T::one()).atanh()
    }
    fn name(&self) -> &'static str {
        "tanh"
    }
}

/// The built-in sigmoids, selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sigmoid {
    #[default]
    Arctan,
    Tanh,
}

impl Sigmoid {
    pub const ALL: [Sigmoid; 2] = [Sigmoid::Arctan, Sigmoid::Tanh];
}

impl<T: Real> Regularization<T> for Sigmoid {
    fn value(&self, s: T) -> T {
        match self {
            Sigmoid::Arctan => ArctanSigmoid.value(s),
            Sigmoid::Tanh => TanhSigmoid.value(s),
        }
    }
    fn derivative(&self, s: T) -> T {
        match self {
            Sigmoid::Arctan => ArctanSigmoid.derivative(s),
            Sigmoid::Tanh => TanhSigmoid.derivative(s),
        }
    }
    fn inverse(&self, p: T) -> T {
        match self {
            Sigmoid::Arctan => ArctanSigmoid.inverse(p),
            Sigmoid::Tanh => TanhSigmoid.inverse(p),
        }
    }
    fn name(&self) -> &'static str {
        match self {
            Sigmoid::Arctan => "arctan",
            Sigmoid::Tanh => "tanh",
        }
    }
}

impl fmt::Display for Sigmoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(Regularization::<f64>::name(self))
    }
}

impl FromStr for Sigmoid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "arctan" => Ok(Sigmoid::Arctan),
            "tanh" => Ok(Sigmoid::Tanh),
            other => Err(format!("unknown regularization function `{other}` (expected arctan or tanh)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check<R: Regularization<f64>>(phi: &R) {
        assert!((phi.value(1e6) - 1.0).abs() < 1e-6);
        assert!(phi.value(-1e6).abs() < 1e-6);
        assert_eq!(phi.value(0.0), 0.5);
        for i in 1..99 {
            let p = i as f64 / 100.0;
            assert!((phi.value(phi.inverse(p)) - p).abs() < 1e-12);
        }
        for i in -300..=300 {
            let s = i as f64 / 10.0;
            assert!(phi.derivative(s) > 0.0);
            let h = 1e-5;
            let fd = (phi.value(s + h) - phi.value(s - h)) / (2.0 * h);
            assert!((fd - phi.derivative(s)).abs() < 1e-8);
        }
    }

    #[test]
    fn builtins_are_admissible() {
        check(&ArctanSigmoid);
        check(&TanhSigmoid);
        check(&Sigmoid::Arctan);
        check(&Sigmoid::Tanh);
    }

    #[test]
    fn names_round_trip() {
        for s in Sigmoid::ALL {
            assert_eq!(s.to_string().parse::<Sigmoid>().unwrap(), s);
        }
        assert!("logistic".parse::<Sigmoid>().is_err());
    }
}

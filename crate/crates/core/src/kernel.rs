//! Kernels for hybrid transforms, supplied through a primitive `κ̄` of `κ`.

use alloc::format;
use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::{Error, Result};

/// A primitive `κ̄` of a locally integrable kernel `κ`.
pub trait KernelPrimitive {
    fn primitive(&self, t: f64) -> Result<Complex64>;
}

impl<F> KernelPrimitive for F
where
    F: Fn(f64) -> Complex64,
{
    fn primitive(&self, t: f64) -> Result<Complex64> {
        Ok(self(t))
    }
}

/// Built-in kernels, named after `κ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// `κ = exp`, `κ̄ = exp`.
    Exp,
    /// `κ = sin`, `κ̄ = -cos`.
    Sin,
    /// `κ = cos`, `κ̄ = sin`.
    Cos,
    /// `κ̄(t) = t^k / k`, that is `κ(t) = t^(k-1)`. `k` must be at least 1.
    Monomial(u32),
}

impl KernelPrimitive for Kernel {
    fn primitive(&self, t: f64) -> Result<Complex64> {
        let re = match *self {
            Kernel::Exp => libm::exp(t),
            Kernel::Sin => -libm::cos(t),
            Kernel::Cos => libm::sin(t),
            Kernel::Monomial(0) => return Err(Error::KernelDomain(t)),
            Kernel::Monomial(k) => libm::pow(t, f64::from(k)) / f64::from(k),
        };
        if re.is_finite() {
            Ok(Complex64::new(re, 0.0))
        } else {
            Err(Error::KernelDomain(t))
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kernel::Exp => f.write_str("exp"),
            Kernel::Sin => f.write_str("sin"),
            Kernel::Cos => f.write_str("cos"),
            Kernel::Monomial(k) => write!(f, "monomial:{k}"),
        }
    }
}

impl FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp" => Ok(Kernel::Exp),
            "sin" => Ok(Kernel::Sin),
            "cos" => Ok(Kernel::Cos),
            _ => {
                let k = s
                    .strip_prefix("monomial:")
                    .and_then(|k| k.parse::<u32>().ok())
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| Error::InvalidParameter(unknown(s)))?;
                Ok(Kernel::Monomial(k))
            }
        }
    }
}

fn unknown(s: &str) -> String {
    format!("unknown kernel {s:?} (expected exp, sin, cos or monomial:K with K >= 1)")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn builtins() {
        assert_eq!(
            Kernel::Exp.primitive(0.0).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        assert_eq!(
            Kernel::Sin.primitive(0.0).unwrap(),
            Complex64::new(-1.0, 0.0)
        );
        assert_eq!(
            Kernel::Cos.primitive(0.0).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert_eq!(Kernel::Monomial(1).primitive(3.5).unwrap().re, 3.5);
        assert_eq!(Kernel::Monomial(2).primitive(3.0).unwrap().re, 4.5);
        assert_eq!(Kernel::Exp.primitive(1e4), Err(Error::KernelDomain(1e4)));
    }

    #[test]
    fn closures_are_kernels() {
        let k = |t: f64| Complex64::new(0.0, t);
        assert_eq!(k.primitive(2.0).unwrap(), Complex64::new(0.0, 2.0));
    }

    #[test]
    fn names_roundtrip() {
        for k in [Kernel::Exp, Kernel::Sin, Kernel::Cos, Kernel::Monomial(3)] {
            assert_eq!(k.to_string().parse::<Kernel>().unwrap(), k);
        }
        assert!("monomial:0".parse::<Kernel>().is_err());
        assert!("gauss".parse::<Kernel>().is_err());
    }
}

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Analytic primitives understood by every scalar algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Tan,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Exp, Func::Ln, Func::Sin, Func::Cos, Func::Tan, Func::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Value of the function at `z`, or a domain error.
    pub fn value(self, z: Complex64) -> Result<Complex64> {
        let out = match self {
            Func::Exp => z.exp(),
            Func::Ln => {
                if z == Complex64::new(0.0, 0.0) {
                    return Err(Error::Domain("ln of zero".into()));
                }
                z.ln()
            }
            Func::Sin => z.sin(),
            Func::Cos => z.cos(),
            Func::Tan => {
                if z.cos() == Complex64::new(0.0, 0.0) {
                    return Err(Error::Domain("tan at a pole".into()));
                }
                z.tan()
            }
            Func::Sqrt => z.sqrt(),
        };
        finite(out, self.name())
    }

    /// Value, first and second derivative at `z`.
    pub fn jet(self, z: Complex64) -> Result<[Complex64; 3]> {
        let one = Complex64::new(1.0, 0.0);
        let f = self.value(z)?;
        let jet = match self {
            Func::Exp => [f, f, f],
            Func::Ln => {
                let inv = one / z;
                [f, inv, -inv * inv]
            }
            Func::Sin => {
                let c = z.cos();
                [f, c, -f]
            }
            Func::Cos => {
                let s = z.sin();
                [f, -s, -f]
            }
            Func::Tan => {
                let sec2 = one + f * f;
                [f, sec2, 2.0 * f * sec2]
            }
            Func::Sqrt => {
                if f == Complex64::new(0.0, 0.0) {
                    return Err(Error::Domain("derivative of sqrt at zero".into()));
                }
                let d1 = one / (2.0 * f);
                [f, d1, -d1 / (2.0 * z)]
            }
        };
        for part in jet {
            finite(part, self.name())?;
        }
        Ok(jet)
    }
}

fn finite(z: Complex64, what: &str) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Domain(format!("{what} produced a non-finite value")))
    }
}

/// A number system over which wavefunctions and expressions can be evaluated.
///
/// Implemented by plain complex numbers and by [`DualBi`](super::DualBi), so one
/// wavefunction definition serves ordinary evaluation and exact differentiation.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_complex(z: Complex64) -> Self;

    /// The plain (non-infinitesimal) part.
    fn value(&self) -> Complex64;

    /// True when any infinitesimal component is nonzero.
    fn has_infinitesimal(&self) -> bool;

    fn apply(self, f: Func) -> Result<Self>;

    fn recip(self) -> Result<Self>;

    fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    fn scale(self, z: Complex64) -> Self {
        self * Self::from_complex(z)
    }

    fn try_div(self, rhs: Self) -> Result<Self> {
        Ok(self * rhs.recip()?)
    }

    /// Integer power by repeated squaring; negative exponents go through `recip`.
    fn powi(self, n: i64) -> Result<Self> {
        let mut base = if n < 0 { self.recip()? } else { self };
        let mut k = n.unsigned_abs();
        let mut acc = Self::from_real(1.0);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            k >>= 1;
            if k > 0 {
                base = base * base;
            }
        }
        Ok(acc)
    }

    /// `self ^ exponent`. Exact repeated multiplication for plain integer
    /// exponents, principal branch `exp(exponent * ln(self))` otherwise.
    fn pow(self, exponent: Self) -> Result<Self> {
        let e = exponent.value();
        if !exponent.has_infinitesimal() && e.im == 0.0 && e.re.fract() == 0.0 && e.re.abs() <= 1e9 {
            return self.powi(e.re as i64);
        }
        (exponent * self.apply(Func::Ln)?).apply(Func::Exp)
    }
}

impl Scalar for Complex64 {
    fn from_complex(z: Complex64) -> Self {
        z
    }

    fn value(&self) -> Complex64 {
        *self
    }

    fn has_infinitesimal(&self) -> bool {
        false
    }

    fn apply(self, f: Func) -> Result<Self> {
        f.value(self)
    }

    fn recip(self) -> Result<Self> {
        if self == Complex64::new(0.0, 0.0) {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(self.inv())
    }

    fn try_div(self, rhs: Self) -> Result<Self> {
        if rhs == Complex64::new(0.0, 0.0) {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(self / rhs)
    }
}

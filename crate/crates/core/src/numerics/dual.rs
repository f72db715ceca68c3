//! Truncated two-infinitesimal algebra.
//!
//! A [`DualBi`] is `v + dq·εQ + db·εβ + dqb·εQεβ` with `εQ² = εβ² = 0`. Seeding
//! the pointer coordinate with `εQ` and the width parameter with `εβ` makes the
//! `εQεβ` slot of any analytic expression equal to its mixed second derivative.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::scalar::{Func, Scalar};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DualBi {
    pub v: Complex64,
    pub dq: Complex64,
    pub db: Complex64,
    pub dqb: Complex64,
}

impl DualBi {
    pub const fn new(v: Complex64, dq: Complex64, db: Complex64, dqb: Complex64) -> Self {
        DualBi { v, dq, db, dqb }
    }

    /// Real-valued shorthand, mostly for tests.
    pub const fn real(v: f64, dq: f64, db: f64, dqb: f64) -> Self {
        DualBi::new(
            Complex64::new(v, 0.0),
            Complex64::new(dq, 0.0),
            Complex64::new(db, 0.0),
            Complex64::new(dqb, 0.0),
        )
    }

    pub const fn constant(v: Complex64) -> Self {
        DualBi::new(v, ZERO, ZERO, ZERO)
    }

    /// `v + εQ`: the pointer-coordinate seed.
    pub const fn seed_q(v: Complex64) -> Self {
        DualBi::new(v, ONE, ZERO, ZERO)
    }

    /// `v + εβ`: the width-parameter seed.
    pub const fn seed_beta(v: Complex64) -> Self {
        DualBi::new(v, ZERO, ONE, ZERO)
    }

    /// Chain rule through a function with value `f0`, derivatives `f1`, `f2` at `self.v`.
    fn compose(self, [f0, f1, f2]: [Complex64; 3]) -> Self {
        DualBi {
            v: f0,
            dq: f1 * self.dq,
            db: f1 * self.db,
            dqb: f1 * self.dqb + f2 * self.dq * self.db,
        }
    }

    fn infinitesimal_free(&self) -> bool {
        self.dq == ZERO && self.db == ZERO && self.dqb == ZERO
    }
}

/// Truncated product.
pub fn dual_mul(a: DualBi, b: DualBi) -> DualBi {
    DualBi {
        v: a.v * b.v,
        dq: a.v * b.dq + a.dq * b.v,
        db: a.v * b.db + a.db * b.v,
        dqb: a.v * b.dqb + a.dqb * b.v + a.dq * b.db + a.db * b.dq,
    }
}

/// Lift an analytic primitive to the dual algebra.
pub fn dual_apply(f: Func, a: DualBi) -> Result<DualBi> {
    if f == Func::Sqrt && a.v == ZERO && a.infinitesimal_free() {
        return Ok(DualBi::constant(ZERO));
    }
    Ok(a.compose(f.jet(a.v)?))
}

impl Add for DualBi {
    type Output = DualBi;
    fn add(self, rhs: DualBi) -> DualBi {
        DualBi::new(self.v + rhs.v, self.dq + rhs.dq, self.db + rhs.db, self.dqb + rhs.dqb)
    }
}

impl Sub for DualBi {
    type Output = DualBi;
    fn sub(self, rhs: DualBi) -> DualBi {
        DualBi::new(self.v - rhs.v, self.dq - rhs.dq, self.db - rhs.db, self.dqb - rhs.dqb)
    }
}

impl Mul for DualBi {
    type Output = DualBi;
    fn mul(self, rhs: DualBi) -> DualBi {
        dual_mul(self, rhs)
    }
}

impl Neg for DualBi {
    type Output = DualBi;
    fn neg(self) -> DualBi {
        DualBi::new(-self.v, -self.dq, -self.db, -self.dqb)
    }
}

impl Scalar for DualBi {
    fn from_complex(z: Complex64) -> Self {
        DualBi::constant(z)
    }

    fn value(&self) -> Complex64 {
        self.v
    }

    fn has_infinitesimal(&self) -> bool {
        !self.infinitesimal_free()
    }

    fn apply(self, f: Func) -> Result<Self> {
        dual_apply(f, self)
    }

    fn recip(self) -> Result<Self> {
        if self.v == ZERO {
            return Err(Error::Domain("division by zero".into()));
        }
        let inv = self.v.inv();
        Ok(self.compose([inv, -inv * inv, 2.0 * inv * inv * inv]))
    }

    fn try_div(self, rhs: Self) -> Result<Self> {
        let mut q = self * rhs.recip()?;
        // Keep the value slot bit-identical to plain complex division.
        q.v = self.v / rhs.v;
        Ok(q)
    }

    fn scale(self, z: Complex64) -> Self {
        DualBi::new(self.v * z, self.dq * z, self.db * z, self.dqb * z)
    }
}

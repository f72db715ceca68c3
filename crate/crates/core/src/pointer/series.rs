use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{binomial, factorial, gaussian_moment};
use crate::quantum::{weak_moment, Observable, QuantumState};

pub const MAX_SERIES_ORDER: usize = 20;

/// Truncated Aharonov–Vaidman expansion of the post-selected pointer:
///
/// `exp(-β(Q - C_w)²/2) + e^{-βQ²/2} Σ_{n=2}^{order} ((Cⁿ)_w - C_wⁿ)/(n!√π) (-√(2β) i)ⁿ ∫(x + i√β Q/√2)ⁿ e^{-x²} dx`
///
/// The integral is expanded binomially over the Gaussian moments.
#[derive(Debug, Clone, PartialEq)]
pub struct AvSeries {
    weak_value: Complex64,
    /// `(Cⁿ)_w - C_wⁿ` for `n = 2..=order`.
    corrections: Vec<Complex64>,
}

impl AvSeries {
    pub fn new(pre: &QuantumState, post: &QuantumState, obs: &Observable, order: usize) -> Result<Self> {
        if !(1..=MAX_SERIES_ORDER).contains(&order) {
            return Err(Error::InvalidArgument(format!("series order must be in 1..={MAX_SERIES_ORDER}, got {order}")));
        }
        let weak_value = weak_moment(pre, post, obs, 1)?;
        let corrections = (2..=order)
            .map(|n| Ok(weak_moment(pre, post, obs, n as u32)? - weak_value.powu(n as u32)))
            .collect::<Result<_>>()?;
        Ok(AvSeries { weak_value, corrections })
    }

    pub fn order(&self) -> usize {
        self.corrections.len() + 1
    }

    pub fn weak_value(&self) -> Complex64 {
        self.weak_value
    }

    /// The `n`-th correction term (`n >= 2`) at `(Q, β)`.
    pub fn term(&self, n: usize, beta: f64, q: f64) -> Complex64 {
        let diff = self.corrections[n - 2];
        let z = Complex64::new(0.0, beta.sqrt() * q / std::f64::consts::SQRT_2);
        let integral: Complex64 =
            (0..=n).step_by(2).map(|k| z.powu((n - k) as u32) * (binomial(n, k) * gaussian_moment(k))).sum();
        let prefactor = Complex64::new(0.0, -(2.0 * beta).sqrt()).powu(n as u32) / (factorial(n) * PI.sqrt());
        diff * prefactor * integral * (-beta * q * q / 2.0).exp()
    }

    pub fn eval(&self, beta: f64, q: f64) -> Complex64 {
        let d = Complex64::new(q, 0.0) - self.weak_value;
        let leading = (-d * d * (beta / 2.0)).exp();
        (2..=self.order()).fold(leading, |acc, n| acc + self.term(n, beta, q))
    }
}

pub fn av_series_wavefunction(
    pre: &QuantumState,
    post: &QuantumState,
    obs: &Observable,
    beta: f64,
    q: f64,
    order: usize,
) -> Result<Complex64> {
    Ok(AvSeries::new(pre, post, obs, order)?.eval(beta, q))
}

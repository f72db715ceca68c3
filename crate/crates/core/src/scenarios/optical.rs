use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::{ExprWave, WaveExpr};
use crate::numerics::Scalar;
use crate::pointer::{shifted_gaussian, ScalarWave};
use crate::quantum::{Observable, QuantumState, OVERLAP_FLOOR};

/// Detector profile behind a polarizer / birefringent plate / polarizer setup.
/// The `x` component rides the Gaussian shifted to `y = -a`.
pub const OPTICAL_SOURCE: &str =
    "cos(alpha)*cos(alphap)*exp(-beta*(y+a)^2/2) + sin(alpha)*sin(alphap)*exp(-beta*y^2/2)";

/// Optical analog of a Stern–Gerlach weak measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalParams {
    /// Preselection polarizer angle from the x axis, radians.
    pub alpha: f64,
    /// Postselection polarizer angle, radians.
    pub alpha_prime: f64,
    /// Separation of the two polarization components, in pointer units.
    pub a: f64,
    /// Beam-waist parameter; the waist is `beta^{-1/2}`.
    pub beta: f64,
}

impl OpticalParams {
    pub fn new(alpha: f64, alpha_prime: f64, a: f64, beta: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidArgument(format!("separation a must be positive, got {a}")));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::InvalidArgument(format!("beta must be finite and non-negative, got {beta}")));
        }
        if !(alpha.is_finite() && alpha_prime.is_finite()) {
            return Err(Error::InvalidArgument("polarizer angles must be finite".into()));
        }
        let overlap = (alpha - alpha_prime).cos().abs();
        if overlap < OVERLAP_FLOOR {
            return Err(Error::OrthogonalSelection { overlap, floor: OVERLAP_FLOOR });
        }
        Ok(OpticalParams { alpha, alpha_prime, a, beta })
    }

    /// `α = π/4`, `α' = 3π/4 + ε`: crossed polarizers detuned by `ε`.
    pub fn crossed(epsilon: f64, a: f64, beta: f64) -> Result<Self> {
        use std::f64::consts::FRAC_PI_4;
        Self::new(FRAC_PI_4, 3.0 * FRAC_PI_4 + epsilon, a, beta)
    }

    /// Weights of the shifted (`x`) and unshifted (`y`) Gaussians.
    pub fn weights(&self) -> (f64, f64) {
        (self.alpha.cos() * self.alpha_prime.cos(), self.alpha.sin() * self.alpha_prime.sin())
    }

    pub fn expression_params(&self) -> HashMap<String, Complex64> {
        HashMap::from([
            ("alpha".to_string(), Complex64::new(self.alpha, 0.0)),
            ("alphap".to_string(), Complex64::new(self.alpha_prime, 0.0)),
            ("a".to_string(), Complex64::new(self.a, 0.0)),
        ])
    }

    /// The detector profile as a parsed expression in `y` and `beta`.
    pub fn expression_wave(&self) -> ExprWave {
        let expr = WaveExpr::parse(OPTICAL_SOURCE).expect("optical source parses");
        ExprWave::new(expr, "y", "beta", self.expression_params()).expect("optical source binds")
    }
}

/// `y ↦ cos α cos α' e^{-β(y+a)²/2} + sin α sin α' e^{-βy²/2}`, unnormalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalWave {
    pub params: OpticalParams,
}

impl ScalarWave for OpticalWave {
    fn eval<S: Scalar>(&self, y: S, beta: S) -> Result<S> {
        let (wx, wy) = self.params.weights();
        let x_ray = shifted_gaussian(y, beta, -self.params.a)?.scale(Complex64::new(wx, 0.0));
        let y_ray = shifted_gaussian(y, beta, 0.0)?.scale(Complex64::new(wy, 0.0));
        Ok(x_ray + y_ray)
    }
}

pub fn optical_wavefunction(p: &OpticalParams) -> OpticalWave {
    OpticalWave { params: *p }
}

/// `-a / (1 + tan α tan α')`.
pub fn optical_weak_value_closed_form(p: &OpticalParams) -> Result<Complex64> {
    let denom = 1.0 + p.alpha.tan() * p.alpha_prime.tan();
    if !denom.is_finite() || denom.abs() < OVERLAP_FLOOR {
        return Err(Error::OrthogonalSelection { overlap: denom.abs(), floor: OVERLAP_FLOOR });
    }
    Ok(Complex64::new(-p.a / denom, 0.0))
}

/// Polarization as a two-level system with `C = diag(-a, 0)`.
pub fn optical_equivalent_system(p: &OpticalParams) -> (QuantumState, QuantumState, Observable) {
    let pre = QuantumState::from_real(&[p.alpha.cos(), p.alpha.sin()]).expect("unit vector");
    let post = QuantumState::from_real(&[p.alpha_prime.cos(), p.alpha_prime.sin()]).expect("unit vector");
    let obs = Observable::diagonal(&[-p.a, 0.0]).expect("finite diagonal");
    (pre, post, obs)
}

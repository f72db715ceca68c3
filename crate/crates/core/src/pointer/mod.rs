//! Detector (pointer) wavefunctions.
//!
//! Every wavefunction here is unnormalized and analytic in both the pointer
//! coordinate `Q` and the width parameter `β`, including at `β = 0`.

mod grid;
mod series;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{DualBi, Func, Scalar};
use crate::quantum::{selection_overlap, spectral_coefficients, Observable, QuantumState};

pub use grid::{default_grid, grid_evaluate, GridSpec, GridTable, DEFAULT_GRID_POINTS};
pub use series::{av_series_wavefunction, AvSeries, MAX_SERIES_ORDER};

/// A wavefunction `Ψ(Q; β)` generic over the scalar algebra.
pub trait ScalarWave: Send + Sync {
    fn eval<S: Scalar>(&self, q: S, beta: S) -> Result<S>;
}

/// Object-safe view of a [`ScalarWave`], evaluable over both supported algebras.
pub trait Wave: Send + Sync {
    fn eval_complex(&self, q: Complex64, beta: Complex64) -> Result<Complex64>;
    fn eval_dual(&self, q: DualBi, beta: DualBi) -> Result<DualBi>;
}

impl<T: ScalarWave> Wave for T {
    fn eval_complex(&self, q: Complex64, beta: Complex64) -> Result<Complex64> {
        self.eval(q, beta)
    }

    fn eval_dual(&self, q: DualBi, beta: DualBi) -> Result<DualBi> {
        self.eval(q, beta)
    }
}

/// `exp(-β (Q - c)² / 2)`.
pub fn shifted_gaussian<S: Scalar>(q: S, beta: S, center: f64) -> Result<S> {
    let d = q - S::from_real(center);
    (-(beta * d * d).scale(Complex64::new(0.5, 0.0))).apply(Func::Exp)
}

/// Initial detector state `(β/π)^{1/4} exp(-β Q² / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPointer {
    beta: f64,
}

impl GaussianPointer {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidArgument(format!("pointer width parameter must be positive, got {beta}")));
        }
        Ok(GaussianPointer { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Standard deviation of the amplitude profile, `β^{-1/2}`.
    pub fn width(&self) -> f64 {
        self.beta.powf(-0.5)
    }

    /// Normalized amplitude at `q`.
    pub fn amplitude(&self, q: f64) -> f64 {
        (self.beta / std::f64::consts::PI).powf(0.25) * (-self.beta * q * q / 2.0).exp()
    }

    /// Pointer translated by `center`, as an unnormalized wave in `(Q, β)`.
    pub fn shifted(center: f64) -> ShiftedGaussian {
        ShiftedGaussian { center }
    }
}

/// `exp(-β (Q - center)² / 2)` as a [`Wave`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedGaussian {
    pub center: f64,
}

impl ScalarWave for ShiftedGaussian {
    fn eval<S: Scalar>(&self, q: S, beta: S) -> Result<S> {
        shifted_gaussian(q, beta, self.center)
    }
}

/// Detector wavefunction after post-selection, in spectral form:
/// `Σ_k a_k exp(-β (Q - c_k)² / 2)` with `a_k = <post|k><k|pre>`.
#[derive(Debug, Clone, PartialEq)]
pub struct PostselectedWave {
    coefficients: Vec<Complex64>,
    shifts: Vec<f64>,
    beta: f64,
}

impl PostselectedWave {
    pub fn new(coefficients: Vec<Complex64>, shifts: Vec<f64>, beta: f64) -> Result<Self> {
        if coefficients.len() != shifts.len() {
            return Err(Error::DimensionMismatch { expected: shifts.len(), found: coefficients.len() });
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::InvalidArgument(format!("beta must be finite and non-negative, got {beta}")));
        }
        Ok(PostselectedWave { coefficients, shifts, beta })
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn shifts(&self) -> &[f64] {
        &self.shifts
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.coefficients.clone(), self.shifts.clone(), beta)
    }

    /// Multiplies every coefficient by `factor`.
    pub fn scaled(&self, factor: Complex64) -> Self {
        PostselectedWave {
            coefficients: self.coefficients.iter().map(|a| a * factor).collect(),
            shifts: self.shifts.clone(),
            beta: self.beta,
        }
    }

    /// `Σ_k a_k`, which equals `<post|pre>`.
    pub fn overlap(&self) -> Complex64 {
        self.coefficients.iter().sum()
    }

    pub fn max_shift(&self) -> f64 {
        self.shifts.iter().map(|c| c.abs()).fold(0.0, f64::max)
    }

    /// `β · max|c_k|²`: small values mean the measurement is weak.
    pub fn weakness_parameter(&self) -> f64 {
        self.beta * self.max_shift().powi(2)
    }

    /// Evaluates at the stored `β`.
    pub fn at(&self, q: f64) -> Complex64 {
        self.eval(Complex64::new(q, 0.0), Complex64::new(self.beta, 0.0))
            .expect("exp of a finite argument cannot fail")
    }

    pub fn default_grid(&self) -> Result<GridSpec> {
        default_grid(self.beta, self.max_shift())
    }
}

impl ScalarWave for PostselectedWave {
    fn eval<S: Scalar>(&self, q: S, beta: S) -> Result<S> {
        let mut acc = S::from_real(0.0);
        for (a, &c) in self.coefficients.iter().zip(&self.shifts) {
            acc = acc + shifted_gaussian(q, beta, c)?.scale(*a);
        }
        Ok(acc)
    }
}

/// Applies the impulsive coupling `exp(-i P C)` between the selections: each
/// eigencomponent of `obs` translates the pointer by its eigenvalue.
pub fn synthesize_postselected(
    pre: &QuantumState,
    post: &QuantumState,
    obs: &Observable,
    beta: f64,
) -> Result<PostselectedWave> {
    selection_overlap(pre, post)?;
    let (shifts, coefficients) = spectral_coefficients(pre, post, obs)?.into_iter().unzip();
    PostselectedWave::new(coefficients, shifts, beta)
}

/// A wave multiplied by a constant.
#[derive(Debug, Clone)]
pub struct Scaled<W> {
    pub inner: W,
    pub factor: Complex64,
}

impl<W: ScalarWave> ScalarWave for Scaled<W> {
    fn eval<S: Scalar>(&self, q: S, beta: S) -> Result<S> {
        Ok(self.inner.eval(q, beta)?.scale(self.factor))
    }
}

//! Finite-dimensional states, observables and the direct weak-value ratio.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{eigh, Eigen, HermitianMatrix};

/// Selections with `|<post|pre>|` below this are treated as orthogonal.
pub const OVERLAP_FLOOR: f64 = 1e-12;

/// Largest power accepted by [`weak_moment`].
pub const MAX_MOMENT_POWER: u32 = 20;

/// Normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    /// Normalizes `amplitudes` to unit 2-norm.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("state must have at least one amplitude".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("state amplitudes must be finite".into()));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(QuantumState { amplitudes: amplitudes.into_iter().map(|z| z / norm).collect() })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `|k>`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::InvalidArgument(format!("basis index {k} out of range for dim {dim}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[k] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Multiplies every amplitude by `phase`, which must have unit modulus.
    pub fn with_phase(&self, phase: Complex64) -> Result<Self> {
        Self::new(self.amplitudes.iter().map(|z| z * phase).collect())
    }
}

/// An observable: a Hermitian matrix together with its spectral decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: HermitianMatrix,
    eigen: Eigen,
}

impl Observable {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let eigen = eigh(&matrix)?;
        Ok(Observable { matrix, eigen })
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::diagonal(values)?)
    }

    pub fn pauli_x() -> Self {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        Self::new(HermitianMatrix::from_rows(&[vec![o, l], vec![l, o]]).unwrap()).unwrap()
    }

    pub fn pauli_y() -> Self {
        let (o, i) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0));
        Self::new(HermitianMatrix::from_rows(&[vec![o, -i], vec![i, o]]).unwrap()).unwrap()
    }

    pub fn pauli_z() -> Self {
        Self::diagonal(&[1.0, -1.0]).unwrap()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn eigen(&self) -> &Eigen {
        &self.eigen
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Largest eigenvalue magnitude.
    pub fn spectral_radius(&self) -> f64 {
        self.eigen.values.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }
}

/// A weak value together with the selection overlap it was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakValue {
    pub value: Complex64,
    pub overlap: Complex64,
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner(a: &QuantumState, b: &QuantumState) -> Result<Complex64> {
    inner_raw(a.amplitudes(), b.amplitudes())
}

fn inner_raw(a: &[Complex64], b: &[Complex64]) -> Result<Complex64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    Ok(a.iter().zip(b).map(|(x, y)| x.conj() * y).sum())
}

fn check_dims(pre: &QuantumState, post: &QuantumState, obs: &Observable) -> Result<()> {
    for found in [post.dim(), obs.dim()] {
        if found != pre.dim() {
            return Err(Error::DimensionMismatch { expected: pre.dim(), found });
        }
    }
    Ok(())
}

/// `<post|pre>`, rejected when below [`OVERLAP_FLOOR`].
pub fn selection_overlap(pre: &QuantumState, post: &QuantumState) -> Result<Complex64> {
    let overlap = inner(post, pre)?;
    if overlap.norm() < OVERLAP_FLOOR {
        return Err(Error::OrthogonalSelection { overlap: overlap.norm(), floor: OVERLAP_FLOOR });
    }
    Ok(overlap)
}

/// `<post|C|pre> / <post|pre>`.
pub fn weak_value_direct(pre: &QuantumState, post: &QuantumState, obs: &Observable) -> Result<WeakValue> {
    check_dims(pre, post, obs)?;
    let overlap = selection_overlap(pre, post)?;
    let c_pre = obs.matrix().mul_vec(pre.amplitudes())?;
    let numerator = inner_raw(post.amplitudes(), &c_pre)?;
    Ok(WeakValue { value: numerator / overlap, overlap })
}

/// Spectral weights `(c_k, <post|k><k|pre>)` for each eigenpair of `obs`.
pub fn spectral_coefficients(
    pre: &QuantumState,
    post: &QuantumState,
    obs: &Observable,
) -> Result<Vec<(f64, Complex64)>> {
    check_dims(pre, post, obs)?;
    let eigen = obs.eigen();
    eigen
        .values
        .iter()
        .zip(&eigen.vectors)
        .map(|(&lambda, v)| Ok((lambda, inner_raw(post.amplitudes(), v)? * inner_raw(v, pre.amplitudes())?)))
        .collect()
}

/// `(C^n)_w = <post|C^n|pre> / <post|pre>`, summed over the spectrum.
pub fn weak_moment(pre: &QuantumState, post: &QuantumState, obs: &Observable, n: u32) -> Result<Complex64> {
    if n > MAX_MOMENT_POWER {
        return Err(Error::InvalidArgument(format!("weak_moment supports n <= {MAX_MOMENT_POWER}, got {n}")));
    }
    check_dims(pre, post, obs)?;
    let overlap = selection_overlap(pre, post)?;
    let sum: Complex64 = spectral_coefficients(pre, post, obs)?
        .into_iter()
        .map(|(lambda, a)| a * lambda.powi(n as i32))
        .sum();
    Ok(sum / overlap)
}

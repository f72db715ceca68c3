#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use weakval_core::numerics::HermitianMatrix;
use weakval_core::quantum::{inner, Observable, QuantumState};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    (0..dim).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}

pub fn random_state<R: Rng>(rng: &mut R, dim: usize) -> QuantumState {
    QuantumState::new(random_vector(rng, dim)).unwrap()
}

pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize) -> HermitianMatrix {
    let mut e = vec![c(0.0, 0.0); dim * dim];
    for r in 0..dim {
        e[r * dim + r] = c(rng.random_range(-1.0..1.0), 0.0);
        for col in (r + 1)..dim {
            let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            e[r * dim + col] = z;
            e[col * dim + r] = z.conj();
        }
    }
    HermitianMatrix::from_row_major(dim, e).unwrap()
}

/// Random observable rescaled so its spectral radius is `radius`.
pub fn random_observable<R: Rng>(rng: &mut R, dim: usize, radius: f64) -> Observable {
    let m = random_hermitian(rng, dim);
    let rho = Observable::new(m.clone()).unwrap().spectral_radius();
    let scaled = m.combine(radius / rho, &m, 0.0).unwrap();
    Observable::new(scaled).unwrap()
}

/// A post-selection whose overlap with `pre` has modulus exactly `overlap`.
pub fn post_with_overlap<R: Rng>(rng: &mut R, pre: &QuantumState, overlap: f64) -> QuantumState {
    let dim = pre.dim();
    let raw = random_vector(rng, dim);
    let proj = inner(pre, &QuantumState::new(raw.clone()).unwrap()).unwrap();
    let r_norm: f64 = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let perp: Vec<Complex64> =
        raw.iter().zip(pre.amplitudes()).map(|(x, p)| x / r_norm - p * proj).collect();
    let perp = QuantumState::new(perp).unwrap();
    let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    let amps = pre
        .amplitudes()
        .iter()
        .zip(perp.amplitudes())
        .map(|(p, q)| p * phase * overlap + q * (1.0 - overlap * overlap).sqrt())
        .collect();
    QuantumState::new(amps).unwrap()
}

pub fn frobenius_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

use num_complex::Complex64;

use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const MAX_DIM: usize = 64;
const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Dense complex Hermitian matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Builds from row-major entries. Deviations from Hermiticity up to 1e-12
    /// (relative to the largest entry, floored at 1) are symmetrized away.
    pub fn from_row_major(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: entries.len() });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("matrix entries must be finite".into()));
        }
        let scale = entries.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let mut sym = entries.clone();
        for r in 0..dim {
            for c in r..dim {
                let a = entries[r * dim + c];
                let b = entries[c * dim + r].conj();
                let defect = (a - b).norm();
                if defect > HERMITIAN_TOL * scale {
                    return Err(Error::NotHermitian { row: r, col: c, defect });
                }
                let avg = (a + b) * 0.5;
                sym[r * dim + c] = avg;
                sym[c * dim + r] = avg.conj();
            }
        }
        Ok(HermitianMatrix { dim, entries: sym })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
        }
        Self::from_row_major(dim, rows.iter().flatten().copied().collect())
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let dim = values.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (k, &x) in values.iter().enumerate() {
            entries[k * dim + k] = Complex64::new(x, 0.0);
        }
        Self::from_row_major(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.entries.chunks(self.dim).map(<[_]>::to_vec).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        Ok(self
            .entries
            .chunks(self.dim)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Real linear combination `alpha * self + gamma * other`.
    pub fn combine(&self, alpha: f64, other: &HermitianMatrix, gamma: f64) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a * alpha + b * gamma).collect();
        Self::from_row_major(self.dim, entries)
    }
}

/// Spectral decomposition: ascending eigenvalues with orthonormal eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

impl Eigen {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let n = self.values.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            for r in 0..n {
                for c in 0..n {
                    out[r * n + c] += v[r] * v[c].conj() * *lambda;
                }
            }
        }
        out
    }
}

/// Cyclic complex Jacobi eigensolver.
///
/// Each rotation first removes the phase of the pivot `a_pq`, then applies the
/// classical real Jacobi rotation to the resulting real 2x2 block. Sweeps run
/// until every off-diagonal magnitude is below `1e-14 * ‖m‖_F`.
pub fn eigh(m: &HermitianMatrix) -> Result<Eigen> {
    let n = m.dim();
    if n > MAX_DIM {
        return Err(Error::InvalidArgument(format!("eigh supports dim <= {MAX_DIM}, got {n}")));
    }
    let mut a = m.entries.clone();
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 0..n {
        v[k * n + k] = Complex64::new(1.0, 0.0);
    }
    let tol = OFF_DIAGONAL_TOL * m.frobenius_norm();

    let mut sweep = 0;
    loop {
        let off = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q].norm())
            .fold(0.0_f64, f64::max);
        if off <= tol {
            break;
        }
        if sweep == MAX_SWEEPS {
            return Err(Error::Convergence { sweeps: sweep, off_diagonal: off });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
        sweep += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values = order.iter().map(|&k| a[k * n + k].re).collect();
    let vectors = order.iter().map(|&k| (0..n).map(|r| v[r * n + k]).collect()).collect();
    Ok(Eigen { values, vectors })
}

fn rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let theta = (a[q * n + q].re - a[p * n + p].re) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // U = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;

    for k in 0..n {
        let (akp, akq) = (a[k * n + p], a[k * n + q]);
        a[k * n + p] = akp * u_pp + akq * u_qp;
        a[k * n + q] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[p * n + k], a[q * n + k]);
        a[p * n + k] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[q * n + k] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;

    for k in 0..n {
        let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
        v[k * n + p] = vkp * u_pp + vkq * u_qp;
        v[k * n + q] = vkp * u_pq + vkq * u_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::Xoshiro256PlusPlus;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(rng: &mut Xoshiro256PlusPlus, n: usize) -> HermitianMatrix {
        let mut e = vec![c(0.0, 0.0); n * n];
        for r in 0..n {
            e[r * n + r] = c(rng.random_range(-1.0..1.0), 0.0);
            for col in (r + 1)..n {
                let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                e[r * n + col] = z;
                e[col * n + r] = z.conj();
            }
        }
        HermitianMatrix::from_row_major(n, e).unwrap()
    }

    fn residual(m: &HermitianMatrix, eig: &Eigen) -> f64 {
        eig.values
            .iter()
            .zip(&eig.vectors)
            .map(|(l, v)| {
                let mv = m.mul_vec(v).unwrap();
                mv.iter().zip(v).map(|(a, b)| (a - b * l).norm_sqr()).sum::<f64>().sqrt()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn diagonal_input_is_already_solved() {
        let eig = eigh(&HermitianMatrix::diagonal(&[1.0, 2.0]).unwrap()).unwrap();
        assert_eq!(eig.values, vec![1.0, 2.0]);
        assert_eq!(eig.vectors, vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]);
    }

    #[test]
    fn pauli_spectra() {
        let x = HermitianMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let eig = eigh(&x).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-15 && (eig.values[1] - 1.0).abs() < 1e-15);

        let y = HermitianMatrix::from_rows(&[vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]).unwrap();
        let eig = eigh(&y).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-15 && (eig.values[1] - 1.0).abs() < 1e-15);
        assert!(residual(&y, &eig) < 1e-14);
    }

    #[test]
    fn random_five_by_five_residual() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(5);
        let m = random_hermitian(&mut rng, 5);
        let eig = eigh(&m).unwrap();
        assert!(residual(&m, &eig) <= 1e-10 * m.frobenius_norm());
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        let rec = eig.reconstruct();
        let err: f64 = rec.iter().zip(m.entries()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        assert!(err < 1e-9);
    }

    #[test]
    fn degenerate_spectrum() {
        let m = HermitianMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, 0.0), c(0.0, -1.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let eig = eigh(&m).unwrap();
        assert!((eig.values[0]).abs() < 1e-14);
        assert!((eig.values[1] - 2.0).abs() < 1e-14 && (eig.values[2] - 2.0).abs() < 1e-14);
        assert!(residual(&m, &eig) < 1e-13);
    }

    #[test]
    fn zero_matrix() {
        let eig = eigh(&HermitianMatrix::diagonal(&[0.0, 0.0, 0.0]).unwrap()).unwrap();
        assert_eq!(eig.values, vec![0.0; 3]);
    }

    #[test]
    fn rejects_non_hermitian_and_bad_shapes() {
        let bad = HermitianMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(2.0, 0.0), c(0.0, 0.0)]]);
        assert!(matches!(bad, Err(Error::NotHermitian { .. })));
        assert!(matches!(
            HermitianMatrix::from_row_major(2, vec![c(0.0, 0.0); 3]),
            Err(Error::DimensionMismatch { .. })
        ));
        let big = HermitianMatrix::diagonal(&vec![1.0; 65]).unwrap();
        assert!(matches!(eigh(&big), Err(Error::InvalidArgument(_))));
    }
}

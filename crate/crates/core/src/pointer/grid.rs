use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_GRID_POINTS: usize = 2001;
const DEFAULT_SPAN_WIDTHS: f64 = 6.0;

/// Uniform grid with inclusive endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        let spec = GridSpec { min, max, points };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::InvalidArgument(format!(
                "grid requires finite min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.points < 2 {
            return Err(Error::InvalidArgument(format!("grid needs at least 2 points, got {}", self.points)));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.points - 1) as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.step();
        (0..self.points).map(move |k| if k + 1 == self.points { self.max } else { self.min + k as f64 * h })
    }
}

/// `[-6σ, 6σ]` with `σ = β^{-1/2} + max|c_k|`, 2001 points.
pub fn default_grid(beta: f64, max_shift: f64) -> Result<GridSpec> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidArgument(format!("default grid needs beta > 0, got {beta}")));
    }
    let span = DEFAULT_SPAN_WIDTHS * (beta.powf(-0.5) + max_shift.abs());
    GridSpec::new(-span, span, DEFAULT_GRID_POINTS)
}

/// Samples of a complex-valued function on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridTable {
    pub spec: GridSpec,
    pub q: Vec<f64>,
    pub values: Vec<Complex64>,
}

pub fn grid_evaluate<F>(f: F, spec: GridSpec) -> Result<GridTable>
where
    F: Fn(f64) -> Result<Complex64>,
{
    spec.validate()?;
    let q: Vec<f64> = spec.nodes().collect();
    let values = q.iter().map(|&x| f(x)).collect::<Result<_>>()?;
    Ok(GridTable { spec, q, values })
}

impl GridTable {
    fn trapezoid<F: Fn(usize) -> f64>(&self, g: F) -> f64 {
        let n = self.q.len();
        let inner: f64 = (1..n - 1).map(&g).sum();
        (inner + 0.5 * (g(0) + g(n - 1))) * self.spec.step()
    }

    fn trapezoid_complex<F: Fn(usize) -> Complex64>(&self, g: F) -> Complex64 {
        let n = self.q.len();
        let inner: Complex64 = (1..n - 1).map(&g).sum();
        (inner + (g(0) + g(n - 1)) * 0.5) * self.spec.step()
    }

    pub fn abs2(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Trapezoid estimate of `∫ |Ψ|² dQ`.
    pub fn norm_sqr(&self) -> f64 {
        self.trapezoid(|k| self.values[k].norm_sqr())
    }

    /// Mean of `Q` under the density `|Ψ|² / ∫|Ψ|²`.
    pub fn density_mean(&self) -> Result<f64> {
        let total = self.norm_sqr();
        if !(total > 1e-300) {
            return Err(Error::DegenerateDensity { integral: total });
        }
        Ok(self.trapezoid(|k| self.q[k] * self.values[k].norm_sqr()) / total)
    }

    pub fn normalized(&self) -> Result<GridTable> {
        let norm = self.norm_sqr().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::DegenerateDensity { integral: norm * norm });
        }
        Ok(GridTable { spec: self.spec, q: self.q.clone(), values: self.values.iter().map(|z| z / norm).collect() })
    }

    /// L2 distance between the two profiles after unit-normalizing each and
    /// aligning their global phase.
    pub fn normalized_distance(&self, other: &GridTable) -> Result<f64> {
        if self.spec != other.spec {
            return Err(Error::InvalidArgument("grids differ".into()));
        }
        let u = self.normalized()?;
        let v = other.normalized()?;
        let ip = u.trapezoid_complex(|k| u.values[k].conj() * v.values[k]);
        let phase = if ip.norm() > 0.0 { ip / ip.norm() } else { Complex64::new(1.0, 0.0) };
        Ok(u.trapezoid(|k| (u.values[k] * phase - v.values[k]).norm_sqr()).max(0.0).sqrt())
    }

    /// CSV with header `Q,re,im,abs2`, 17 significant digits per value.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "Q,re,im,abs2")?;
        for (q, z) in self.q.iter().zip(&self.values) {
            writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", q, z.re, z.im, z.norm_sqr())?;
        }
        Ok(())
    }
}

//! Monte Carlo readout of the pointer after post-selection.
//!
//! Samples are drawn from `|Ψ(Q)|² / ∫|Ψ|²` by inverse-CDF on a grid: the CDF
//! is accumulated with the trapezoid rule and inverted by linear interpolation.
//!
//! Randomness comes from `Xoshiro256PlusPlus` seeded with `seed_from_u64`. The
//! index range is cut into fixed partitions of [`PARTITION_SIZE`] samples and
//! partition `k` draws from the base stream advanced by `k` calls to `jump()`,
//! so serial and parallel runs produce identical samples.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointer::{grid_evaluate, GridSpec, GridTable, PostselectedWave};

pub const PARTITION_SIZE: usize = 8192;

/// Weakness parameters above this trigger a warning.
pub const WEAKNESS_WARNING_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub n: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub std_error: f64,
}

impl SampleStats {
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        let n = samples.len();
        if n == 0 {
            return Err(Error::InvalidArgument("no samples".into()));
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = if n > 1 { samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64 } else { 0.0 };
        let std_dev = var.sqrt();
        Ok(SampleStats { n, mean, std_dev, std_error: std_dev / (n as f64).sqrt() })
    }
}

/// Inverse-CDF sampler over a tabulated density.
#[derive(Debug, Clone, PartialEq)]
pub struct PointerSampler {
    q: Vec<f64>,
    cdf: Vec<f64>,
}

impl PointerSampler {
    pub fn new(wave: &PostselectedWave, grid: GridSpec) -> Result<Self> {
        if !(wave.beta() > 0.0) {
            return Err(Error::InvalidArgument(format!("sampling needs beta > 0, got {}", wave.beta())));
        }
        Self::from_table(&grid_evaluate(|q| Ok(wave.at(q)), grid)?)
    }

    pub fn from_table(table: &GridTable) -> Result<Self> {
        let density = table.abs2();
        let h = table.spec.step();
        let mut cdf = Vec::with_capacity(density.len());
        let mut acc = 0.0;
        cdf.push(0.0);
        for w in density.windows(2) {
            acc += 0.5 * h * (w[0] + w[1]);
            cdf.push(acc);
        }
        if !(acc >= 1e-300) || !acc.is_finite() {
            return Err(Error::DegenerateDensity { integral: acc });
        }
        for c in &mut cdf {
            *c /= acc;
        }
        *cdf.last_mut().unwrap() = 1.0;
        Ok(PointerSampler { q: table.q.clone(), cdf })
    }

    pub fn cdf(&self) -> &[f64] {
        &self.cdf
    }

    /// Inverse CDF for `u ∈ [0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        let j = self.cdf.partition_point(|&c| c <= u).clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[j - 1], self.cdf[j]);
        let t = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.0 };
        self.q[j - 1] + t * (self.q[j] - self.q[j - 1])
    }

    fn partition(&self, rng: &mut Xoshiro256PlusPlus, len: usize) -> Vec<f64> {
        (0..len).map(|_| self.quantile(rng.random::<f64>())).collect()
    }

    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut base = Xoshiro256PlusPlus::seed_from_u64(seed);
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let len = PARTITION_SIZE.min(n - out.len());
            let mut rng = base.clone();
            out.extend(self.partition(&mut rng, len));
            base.jump();
        }
        out
    }

    /// Same samples as [`sample`](Self::sample), partitions drawn in parallel.
    pub fn sample_parallel(&self, n: usize, seed: u64) -> Vec<f64> {
        let base = Xoshiro256PlusPlus::seed_from_u64(seed);
        let partitions = n.div_ceil(PARTITION_SIZE);
        let chunks: Vec<Vec<f64>> = (0..partitions)
            .into_par_iter()
            .map(|k| {
                let mut rng = base.clone();
                for _ in 0..k {
                    rng.jump();
                }
                let len = PARTITION_SIZE.min(n - k * PARTITION_SIZE);
                self.partition(&mut rng, len)
            })
            .collect();
        chunks.concat()
    }
}

/// `n` pointer readouts on the wave's default grid.
pub fn sample_pointer(wave: &PostselectedWave, n: usize, seed: u64) -> Result<Vec<f64>> {
    sample_pointer_on(wave, wave.default_grid()?, n, seed)
}

pub fn sample_pointer_on(wave: &PostselectedWave, grid: GridSpec, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    Ok(PointerSampler::new(wave, grid)?.sample(n, seed))
}

/// Exact mean of the pointer density by grid quadrature.
pub fn grid_mean(wave: &PostselectedWave, grid: GridSpec) -> Result<f64> {
    grid_evaluate(|q| Ok(wave.at(q)), grid)?.density_mean()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyRatio {
    pub n: usize,
    pub n4: usize,
    /// `std_error(n) / std_error(4n)`; about 2 for i.i.d. readouts.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub stats: Vec<SampleStats>,
    pub ratios: Vec<StudyRatio>,
}

/// Sample statistics for each `n`, each run from the same seed.
pub fn sqrtn_study(wave: &PostselectedWave, n_values: &[usize], seed: u64) -> Result<StudyReport> {
    sqrtn_study_on(wave, wave.default_grid()?, n_values, seed)
}

pub fn sqrtn_study_on(wave: &PostselectedWave, grid: GridSpec, n_values: &[usize], seed: u64) -> Result<StudyReport> {
    sqrtn_study_with(&PointerSampler::new(wave, grid)?, n_values, seed)
}

/// [`sqrtn_study`] on an already tabulated density.
pub fn sqrtn_study_with(sampler: &PointerSampler, n_values: &[usize], seed: u64) -> Result<StudyReport> {
    if n_values.is_empty() || n_values.iter().any(|&n| n < 100) || n_values.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("study sizes must be ascending and each at least 100".into()));
    }
    let stats = n_values
        .iter()
        .map(|&n| SampleStats::from_samples(&sampler.sample(n, seed)))
        .collect::<Result<Vec<_>>>()?;
    let ratios = stats
        .iter()
        .flat_map(|a| stats.iter().filter(move |b| b.n == 4 * a.n).map(move |b| (a, b)))
        .map(|(a, b)| StudyRatio { n: a.n, n4: b.n, ratio: a.std_error / b.std_error })
        .collect();
    Ok(StudyReport { stats, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn gaussian_at(center: f64, beta: f64) -> PostselectedWave {
        PostselectedWave::new(vec![Complex64::new(1.0, 0.0)], vec![center], beta).unwrap()
    }

    #[test]
    fn symmetric_gaussian_mean() {
        let samples = sample_pointer(&gaussian_at(0.0, 1.0), 100_000, 7).unwrap();
        let s = SampleStats::from_samples(&samples).unwrap();
        assert!(s.mean.abs() <= 3.0 * s.std_error, "{s:?}");
        let expected_sd = (2.0f64).powf(-0.5);
        assert!((s.std_dev - expected_sd).abs() <= 0.05 * expected_sd, "{s:?}");
    }

    #[test]
    fn shifted_gaussian_mean() {
        let s = SampleStats::from_samples(&sample_pointer(&gaussian_at(2.5, 0.5), 100_000, 11).unwrap()).unwrap();
        assert!((s.mean - 2.5).abs() <= 3.0 * s.std_error, "{s:?}");
    }

    #[test]
    fn deterministic_and_parallel_consistent() {
        let wave = gaussian_at(1.0, 0.3);
        let sampler = PointerSampler::new(&wave, wave.default_grid().unwrap()).unwrap();
        let a = sampler.sample(20_000, 42);
        let b = sampler.sample(20_000, 42);
        let c = sampler.sample_parallel(20_000, 42);
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_ne!(a, sampler.sample(20_000, 43));
    }

    #[test]
    fn cdf_is_monotone_and_ends_at_one() {
        let wave = PostselectedWave::new(
            vec![Complex64::new(0.6, 0.1), Complex64::new(-0.4, 0.0)],
            vec![-1.0, 0.0],
            0.2,
        )
        .unwrap();
        let sampler = PointerSampler::new(&wave, wave.default_grid().unwrap()).unwrap();
        assert!(sampler.cdf().windows(2).all(|w| w[0] <= w[1]));
        assert!((sampler.cdf().last().unwrap() - 1.0).abs() <= 1e-12);
        assert_eq!(sampler.cdf()[0], 0.0);
    }

    #[test]
    fn degenerate_density() {
        let wave = PostselectedWave::new(vec![Complex64::new(0.0, 0.0)], vec![0.0], 1.0).unwrap();
        assert!(matches!(sample_pointer(&wave, 10, 1), Err(Error::DegenerateDensity { .. })));
        assert!(sample_pointer(&gaussian_at(0.0, 0.0), 10, 1).is_err());
        assert!(sample_pointer(&gaussian_at(0.0, 1.0), 0, 1).is_err());
    }

    #[test]
    fn study_ratio_and_determinism() {
        let wave = gaussian_at(0.0, 1.0);
        let r = sqrtn_study(&wave, &[1000, 4000], 5).unwrap();
        assert_eq!(r.ratios.len(), 1);
        assert!((r.ratios[0].ratio - 2.0).abs() <= 0.4, "{r:?}");
        let same = sqrtn_study(&wave, &[1000, 1000], 5).unwrap();
        assert_eq!(same.stats[0], same.stats[1]);
        assert!(sqrtn_study(&wave, &[4000, 1000], 5).is_err());
        assert!(sqrtn_study(&wave, &[50], 5).is_err());
    }

    #[test]
    fn stats_identity() {
        let s = SampleStats::from_samples(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.mean, 2.5);
        assert!((s.std_error * 2.0 - s.std_dev).abs() < 1e-15);
    }
}

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{dual_apply, mixed_fd, DualBi, Func, DEFAULT_STEP};
use crate::pointer::Wave;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Dual,
    FiniteDifference,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Dual => "dual",
            Method::FiniteDifference => "finite-difference",
        })
    }
}

/// A way of computing `∂β [∂Q ln Ψ |_{Q=0}] |_{β=0}` from a wavefunction.
pub trait Extractor: Send + Sync {
    fn name(&self) -> &'static str;

    fn method(&self) -> Method;

    fn extract(&self, wave: &dyn Wave) -> Result<Complex64>;
}

fn check_nonzero_at_origin(wave: &dyn Wave) -> Result<()> {
    let origin = wave.eval_complex(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))?;
    if !(origin.norm() >= f64::MIN_POSITIVE) {
        return Err(Error::ZeroWavefunction);
    }
    Ok(())
}

/// Exact mixed derivative through the two-infinitesimal algebra.
#[derive(Debug, Clone, Copy, Default)]
pub struct DualExtractor;

impl Extractor for DualExtractor {
    fn name(&self) -> &'static str {
        "dual"
    }

    fn method(&self) -> Method {
        Method::Dual
    }

    fn extract(&self, wave: &dyn Wave) -> Result<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        let psi = wave.eval_dual(DualBi::seed_q(zero), DualBi::seed_beta(zero))?;
        if !(psi.v.norm() >= f64::MIN_POSITIVE) {
            return Err(Error::ZeroWavefunction);
        }
        Ok(dual_apply(Func::Ln, psi)?.dqb)
    }
}

/// Stencil estimate, used as an independent cross-check.
#[derive(Debug, Clone, Copy)]
pub struct FiniteDifferenceExtractor {
    pub h_q: f64,
    pub h_beta: f64,
}

impl Default for FiniteDifferenceExtractor {
    fn default() -> Self {
        FiniteDifferenceExtractor { h_q: DEFAULT_STEP, h_beta: DEFAULT_STEP }
    }
}

impl Extractor for FiniteDifferenceExtractor {
    fn name(&self) -> &'static str {
        "finite-difference"
    }

    fn method(&self) -> Method {
        Method::FiniteDifference
    }

    fn extract(&self, wave: &dyn Wave) -> Result<Complex64> {
        check_nonzero_at_origin(wave)?;
        mixed_fd(|q, beta| wave.eval_complex(q, beta), self.h_q, self.h_beta)
    }
}

/// Extractors keyed by name.
pub struct ExtractorRegistry {
    entries: BTreeMap<&'static str, Box<dyn Extractor>>,
}

impl ExtractorRegistry {
    pub fn empty() -> Self {
        ExtractorRegistry { entries: BTreeMap::new() }
    }

    pub fn register(&mut self, extractor: Box<dyn Extractor>) {
        self.entries.insert(extractor.name(), extractor);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Extractor> {
        self.entries.get(name).map(|b| b.as_ref()).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "unknown extraction method `{name}` (available: {})",
                self.names().collect::<Vec<_>>().join(", ")
            ))
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }
}

impl Default for ExtractorRegistry {
    fn default() -> Self {
        let mut r = ExtractorRegistry::empty();
        r.register(Box::new(DualExtractor));
        r.register(Box::new(FiniteDifferenceExtractor::default()));
        r
    }
}

impl fmt::Debug for ExtractorRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}

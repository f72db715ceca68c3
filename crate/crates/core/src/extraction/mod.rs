//! Weak value as the mixed log-derivative of the detector wavefunction:
//!
//! `C_w = ∂β [ ∂Q ln Ψ(Q; β) |_{Q=0} ] |_{β=0}`.
//!
//! `Ψ` is evaluated in unnormalized form, which stays analytic at `β = 0`.
//! Overall constant factors drop out of the log-derivative.

mod registry;

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use registry::{DualExtractor, Extractor, ExtractorRegistry, FiniteDifferenceExtractor, Method};

use crate::error::Result;
use crate::expr::{ExprWave, WaveExpr};
use crate::pointer::{synthesize_postselected, Wave};
use crate::quantum::{weak_value_direct, Observable, QuantumState};

/// Largest accepted `|dual - finite-difference|` before a result is flagged.
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtractionResult {
    pub weak_value: Complex64,
    pub method: Method,
    /// Value from the cross-check method, when one ran.
    pub cross_check: Option<Complex64>,
    /// `|primary - cross_check|`.
    pub cross_check_delta: Option<f64>,
    pub consistent: bool,
}

/// Runs `primary`, and `cross` (if any) as an independent check.
pub fn extract_with(wave: &dyn Wave, primary: &dyn Extractor, cross: Option<&dyn Extractor>) -> Result<ExtractionResult> {
    let weak_value = primary.extract(wave)?;
    let cross_check = cross.map(|x| x.extract(wave)).transpose()?;
    let cross_check_delta = cross_check.map(|x| (x - weak_value).norm());
    Ok(ExtractionResult {
        weak_value,
        method: primary.method(),
        cross_check,
        cross_check_delta,
        consistent: cross_check_delta.is_none_or(|d| d <= CROSS_CHECK_TOLERANCE),
    })
}

/// Dual-number extraction cross-checked by finite differences with default steps.
pub fn extract_weak_value(wave: &dyn Wave) -> Result<ExtractionResult> {
    extract_with(wave, &DualExtractor, Some(&FiniteDifferenceExtractor::default()))
}

pub fn extract_from_expression(
    expr: &WaveExpr,
    pointer_var: &str,
    width_var: &str,
    params: &HashMap<String, Complex64>,
) -> Result<ExtractionResult> {
    let wave = ExprWave::new(expr.clone(), pointer_var, width_var, params.clone())?;
    extract_weak_value(&wave)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub direct: Complex64,
    pub extracted: Complex64,
    pub abs_error: f64,
}

/// Compares the direct ratio `<post|C|pre>/<post|pre>` against dual-number
/// extraction from the synthesized detector wavefunction.
pub fn equivalence_report(pre: &QuantumState, post: &QuantumState, obs: &Observable) -> Result<EquivalenceReport> {
    let direct = weak_value_direct(pre, post, obs)?.value;
    let wave = synthesize_postselected(pre, post, obs, 0.0)?;
    let extracted = DualExtractor.extract(&wave)?;
    Ok(EquivalenceReport { direct, extracted, abs_error: (direct - extracted).norm() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::pointer::{GaussianPointer, Scaled};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shifted_gaussian_gives_its_center() {
        for center in [-3.0, 0.0, 0.7, 12.5] {
            let r = extract_weak_value(&GaussianPointer::shifted(center)).unwrap();
            assert!((r.weak_value - center).norm() < 1e-14);
            assert!(r.consistent);
            assert!(r.cross_check_delta.unwrap() < 1e-6);
        }
    }

    #[test]
    fn spin_imaginary_value() {
        let pre = QuantumState::from_real(&[1.0, 1.0]).unwrap();
        let post = QuantumState::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let obs = Observable::pauli_z();
        let wave = synthesize_postselected(&pre, &post, &obs, 1.0).unwrap();
        let r = extract_weak_value(&wave).unwrap();
        let direct = weak_value_direct(&pre, &post, &obs).unwrap().value;
        assert!((r.weak_value - c(0.0, 1.0)).norm() < 1e-15);
        assert!((r.weak_value - direct).norm() < 1e-15);
    }

    #[test]
    fn constant_factor_is_irrelevant() {
        let pre = QuantumState::new(vec![c(0.3, 0.2), c(0.9, -0.1), c(0.1, 0.5)]).unwrap();
        let post = QuantumState::new(vec![c(0.6, 0.0), c(0.3, 0.3), c(-0.2, 0.6)]).unwrap();
        let obs = Observable::diagonal(&[2.0, -1.0, 0.5]).unwrap();
        let wave = synthesize_postselected(&pre, &post, &obs, 0.5).unwrap();
        let base = DualExtractor.extract(&wave).unwrap();
        let factor = Complex64::from_polar(7.0, std::f64::consts::PI / 5.0);
        let scaled = DualExtractor.extract(&Scaled { inner: wave.clone(), factor }).unwrap();
        assert!((scaled - base).norm() < 1e-12);
        let rescaled = DualExtractor.extract(&wave.scaled(factor)).unwrap();
        assert!((rescaled - base).norm() < 1e-12);
    }

    #[test]
    fn symmetric_expression_gives_zero() {
        let e = WaveExpr::parse("exp(-beta*Q^2/2)").unwrap();
        let r = extract_from_expression(&e, "Q", "beta", &HashMap::new()).unwrap();
        assert_eq!(r.weak_value, c(0.0, 0.0));
    }

    #[test]
    fn vanishing_wavefunction() {
        let e = WaveExpr::parse("Q*exp(-beta*Q^2/2)").unwrap();
        let r = extract_from_expression(&e, "Q", "beta", &HashMap::new());
        assert!(matches!(r, Err(Error::ZeroWavefunction)));
        let wave = ExprWave::new(e, "Q", "beta", HashMap::new()).unwrap();
        assert!(matches!(FiniteDifferenceExtractor::default().extract(&wave), Err(Error::ZeroWavefunction)));
    }

    #[test]
    fn registry_lookup() {
        let reg = ExtractorRegistry::default();
        assert_eq!(reg.names().collect::<Vec<_>>(), vec!["dual", "finite-difference"]);
        assert_eq!(reg.get("dual").unwrap().method(), Method::Dual);
        assert_eq!(reg.get("finite-difference").unwrap().method(), Method::FiniteDifference);
        assert!(matches!(reg.get("simpson"), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn eigenstate_equivalence() {
        let obs = Observable::diagonal(&[0.5, -2.0, 3.0]).unwrap();
        let pre = QuantumState::basis(3, 2).unwrap();
        let post = QuantumState::from_real(&[0.1, 0.2, 0.9]).unwrap();
        let rep = equivalence_report(&pre, &post, &obs).unwrap();
        assert!((rep.direct - 3.0).norm() < 1e-15);
        assert!((rep.extracted - 3.0).norm() < 1e-15);
    }
}

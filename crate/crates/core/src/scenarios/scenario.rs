use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::expr::{ExprWave, WaveExpr};
use crate::numerics::HermitianMatrix;
use crate::pointer::{synthesize_postselected, GridSpec, PostselectedWave};
use crate::quantum::{selection_overlap, Observable, QuantumState, OVERLAP_FLOOR};

/// Complex number in a scenario file: `[re, im]`, or a bare real number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude(pub Complex64);

impl Serialize for Amplitude {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Amplitude {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Real(f64),
            Pair([f64; 2]),
        }
        Ok(match Repr::deserialize(d).map_err(|_| serde::de::Error::custom("expected a number or [re, im]"))? {
            Repr::Real(x) => Amplitude(Complex64::new(x, 0.0)),
            Repr::Pair([re, im]) => Amplitude(Complex64::new(re, im)),
        })
    }
}

fn amps(z: &[Amplitude]) -> Vec<Complex64> {
    z.iter().map(|a| a.0).collect()
}

/// Expression-defined detector wavefunction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpressionSpec {
    pub source: String,
    pub pointer_var: String,
    pub width_var: String,
    #[serde(default)]
    pub params: BTreeMap<String, Amplitude>,
}

impl ExpressionSpec {
    pub fn wave(&self) -> Result<ExprWave> {
        let expr = WaveExpr::parse(&self.source)?;
        let params = self.params.iter().map(|(k, v)| (k.clone(), v.0)).collect();
        ExprWave::new(expr, &self.pointer_var, &self.width_var, params)
    }
}

/// One weak-measurement run, as stored in a JSON scenario file.
///
/// Supplies the wavefunction either as a matrix system (`dim`, `pre`, `post`,
/// `observable`) or as an `expression`, never both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pre: Option<Vec<Amplitude>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub post: Option<Vec<Amplitude>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable: Option<Vec<Vec<Amplitude>>>,
    pub beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    pub ensemble_n: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expression: Option<ExpressionSpec>,
}

/// Pre-selection, post-selection and observable.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSystem {
    pub pre: QuantumState,
    pub post: QuantumState,
    pub obs: Observable,
}

/// A validated scenario's wavefunction source.
#[derive(Debug, Clone)]
pub enum ScenarioSystem {
    Matrix(MatrixSystem),
    Expression(ExprWave),
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn matrix(name: &str, pre: &QuantumState, post: &QuantumState, obs: &Observable, beta: f64) -> Self {
        let wrap = |v: &[Complex64]| v.iter().map(|&z| Amplitude(z)).collect::<Vec<_>>();
        Scenario {
            name: name.to_string(),
            dim: Some(pre.dim()),
            pre: Some(wrap(pre.amplitudes())),
            post: Some(wrap(post.amplitudes())),
            observable: Some(obs.matrix().rows().iter().map(|r| wrap(r)).collect()),
            beta,
            grid: None,
            ensemble_n: 100_000,
            seed: 1,
            expression: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.system().map(|_| ())
    }

    fn has_matrix_fields(&self) -> bool {
        self.dim.is_some() || self.pre.is_some() || self.post.is_some() || self.observable.is_some()
    }

    /// Checks every invariant and builds the wavefunction source.
    pub fn system(&self) -> Result<ScenarioSystem> {
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(invalid(format!("beta must be finite and non-negative, got {}", self.beta)));
        }
        if let Some(grid) = &self.grid {
            grid.validate().map_err(|e| invalid(format!("grid: {e}")))?;
        }
        if self.ensemble_n == 0 {
            return Err(invalid("ensemble_n must be at least 1"));
        }
        match (self.has_matrix_fields(), &self.expression) {
            (true, Some(_)) => Err(invalid(
                "exactly one of the matrix system (dim/pre/post/observable) and expression may be given, found both",
            )),
            (false, None) => Err(invalid(
                "exactly one of the matrix system (dim/pre/post/observable) and expression must be given, found neither",
            )),
            (false, Some(expr)) => {
                Ok(ScenarioSystem::Expression(expr.wave().map_err(|e| invalid(format!("expression: {e}")))?))
            }
            (true, None) => self.matrix_system().map(ScenarioSystem::Matrix),
        }
    }

    fn matrix_system(&self) -> Result<MatrixSystem> {
        let (Some(dim), Some(pre), Some(post), Some(observable)) = (self.dim, &self.pre, &self.post, &self.observable)
        else {
            return Err(invalid("matrix system needs all of dim, pre, post, observable"));
        };
        if pre.len() != dim || post.len() != dim || observable.len() != dim {
            return Err(invalid(format!("pre, post and observable must all have dim = {dim} entries")));
        }
        let rows: Vec<Vec<Complex64>> = observable.iter().map(|r| amps(r)).collect();
        let matrix = HermitianMatrix::from_rows(&rows).map_err(|e| invalid(format!("observable: {e}")))?;
        let obs = Observable::new(matrix).map_err(|e| invalid(format!("observable: {e}")))?;
        let pre = QuantumState::new(amps(pre)).map_err(|e| invalid(format!("pre: {e}")))?;
        let post = QuantumState::new(amps(post)).map_err(|e| invalid(format!("post: {e}")))?;
        selection_overlap(&pre, &post).map_err(|_| {
            invalid(format!("selection overlap |<post|pre>| is below the floor {OVERLAP_FLOOR:e}"))
        })?;
        Ok(MatrixSystem { pre, post, obs })
    }

    /// Detector wavefunction at the scenario's `beta` (matrix scenarios only).
    pub fn postselected_wave(&self) -> Result<PostselectedWave> {
        match self.system()? {
            ScenarioSystem::Matrix(m) => synthesize_postselected(&m.pre, &m.post, &m.obs, self.beta),
            ScenarioSystem::Expression(_) => {
                Err(Error::InvalidArgument(format!("scenario `{}` is expression-defined, not a matrix system", self.name)))
            }
        }
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Scenario::from_json(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Writes atomically: a temporary file in the target directory is renamed into place.
pub fn save_scenario(s: &Scenario, path: &Path) -> Result<()> {
    s.validate()?;
    let text = s.to_json()?;
    write_atomic(path, text.as_bytes())
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let file_name = path.file_name().ok_or_else(|| Error::Io(format!("{}: not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp-{}", file_name.to_string_lossy(), std::process::id()));
    let result = (|| -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(Error::Io(format!("{}: {e}", path.display())));
    }
    Ok(())
}

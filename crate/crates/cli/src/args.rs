//! Argument types and value parsers.

use std::collections::HashMap;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use weakval_core::expr::{evaluate, parse};
use weakval_core::extraction::Method;
use weakval_core::pointer::GridSpec;
use weakval_core::scenarios::{load_scenario, preset, Scenario};

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct ScenarioSource {
    /// Bundled preset name.
    #[arg(long)]
    pub preset: Option<String>,
    /// Path to a scenario JSON file.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
}

impl ScenarioSource {
    pub fn load(&self) -> weakval_core::Result<Scenario> {
        match (&self.preset, &self.scenario) {
            (Some(name), _) => preset(name),
            (None, Some(path)) => load_scenario(path),
            (None, None) => unreachable!("clap enforces one scenario source"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Dual,
    FiniteDifference,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Dual => Method::Dual,
            MethodArg::FiniteDifference => Method::FiniteDifference,
        }
    }
}

/// `name=value`, where value is a constant expression such as `pi/6`.
pub fn parse_param(text: &str) -> Result<(String, Complex64), String> {
    let (name, value) = text.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{text}`"))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(format!("missing parameter name in `{text}`"));
    }
    let ast = parse(value).map_err(|e| format!("value of `{name}`: {e}"))?;
    let z = evaluate::<Complex64>(&ast, &HashMap::new()).map_err(|e| format!("value of `{name}`: {e}"))?;
    Ok((name.to_string(), z))
}

/// `min,max,points`.
pub fn parse_grid(text: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [min, max, points] = parts.as_slice() else {
        return Err(format!("expected MIN,MAX,POINTS, got `{text}`"));
    };
    let num = |s: &str| s.parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    let grid = GridSpec { min: num(min)?, max: num(max)?, points: parse_count(points)? };
    grid.validate().map_err(|e| e.to_string())?;
    Ok(grid)
}

/// Positive integer, also accepting exact scientific notation such as `1e5`.
pub fn parse_count(text: &str) -> Result<usize, String> {
    if let Ok(n) = text.parse::<usize>() {
        return Ok(n);
    }
    let x: f64 = text.parse().map_err(|_| format!("`{text}` is not a count"))?;
    if x >= 0.0 && x.fract() == 0.0 && x <= 1e15 {
        Ok(x as usize)
    } else {
        Err(format!("`{text}` is not a whole number"))
    }
}

/// A comma-separated list, parsed as one argument.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

pub fn parse_counts(text: &str) -> Result<List<usize>, String> {
    text.split(',').map(|s| parse_count(s.trim())).collect::<Result<_, _>>().map(List)
}

/// `a..b` (inclusive) or a comma list.
pub fn parse_orders(text: &str) -> Result<List<usize>, String> {
    if let Some((a, b)) = text.split_once("..") {
        let a = parse_count(a.trim())?;
        let b = parse_count(b.trim_start_matches('=').trim())?;
        if a > b {
            return Err(format!("empty order range `{text}`"));
        }
        return Ok(List((a..=b).collect()));
    }
    parse_counts(text)
}

pub fn parse_betas(text: &str) -> Result<List<f64>, String> {
    text.split(',')
        .map(|s| {
            let b: f64 = s.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
            if b > 0.0 && b.is_finite() {
                Ok(b)
            } else {
                Err(format!("beta must be positive, got {b}"))
            }
        })
        .collect::<Result<_, _>>()
        .map(List)
}

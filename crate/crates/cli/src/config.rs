//! Experiment configuration: one TOML file per experiment, with a
//! `command` field naming the experiment kind and exactly one parameter
//! section matching it.  Grids are explicit arrays — nonempty and strictly
//! increasing — so that a config diff shows precisely what ran.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use spectral_approx::ScalarSymbol;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Must equal the invoked subcommand.
    pub command: String,
    /// Seed for every random corpus drawn by the run.
    #[serde(default)]
    pub seed: u64,
    /// Output directory; overridden by `--out`.
    pub out_dir: Option<PathBuf>,
    pub kernel: Option<KernelParams>,
    pub bernstein: Option<BernsteinParams>,
    pub jackson: Option<JacksonParams>,
    pub ritz: Option<RitzParams>,
    pub counterexample: Option<CounterexampleParams>,
    pub inverse: Option<InverseParams>,
}

/// Sweep of the kernel integral lower bound.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelParams {
    pub theta: Vec<f64>,
    pub k: Vec<u32>,
}

/// Difference-vs-symbol inequality sweep over a random corpus.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BernsteinParams {
    pub count: usize,
    pub modes: usize,
    pub eigenvalue_max: f64,
    pub k: Vec<u32>,
    pub h: Vec<f64>,
    pub symbols: Vec<String>,
    pub alpha: Vec<f64>,
}

/// Best-approximation-vs-modulus inequality sweep over a random corpus.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JacksonParams {
    pub count: usize,
    pub modes: usize,
    pub eigenvalue_max: f64,
    pub k: Vec<u32>,
    pub r: Vec<f64>,
    pub symbols: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RitzParams {
    /// `"constant"`, `"cosine"` (the built-in `2 + cos 2t`), or `"custom"`
    /// with explicit cosine coefficients.
    pub potential: String,
    pub potential_value: Option<f64>,
    pub potential_coefficients: Option<Vec<f64>>,
    pub truncation: usize,
    /// Smoothness exponent of the reference operator power in the a priori
    /// bound.
    pub alpha: f64,
    /// Difference order used by the bounds and the rate experiment.
    pub smoothness_order: u32,
    pub n_grid: Vec<usize>,
    /// `"geometric"` (coefficients `p^m`) or `"power"`
    /// (coefficients `(1+m)^-p`).
    pub solution: String,
    pub solution_parameter: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleParams {
    pub alpha: f64,
    pub truncation: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InverseParams {
    pub alpha: Vec<f64>,
    pub k: u32,
    pub symbol: String,
    pub spectrum_bound: f64,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        let config: ExperimentConfig = toml::from_str(&text)?;
        config.validate()?;
        Ok(config)
    }

    /// Structural checks: known command, exactly the matching parameter
    /// sections, and every grid nonempty and strictly increasing.
    pub fn validate(&self) -> Result<(), CliError> {
        let has = |name: &str, present: bool, wanted: bool| -> Result<(), CliError> {
            if present && !wanted {
                return Err(CliError::Config(format!(
                    "section [{name}] does not belong to command '{}'",
                    self.command
                )));
            }
            Ok(())
        };
        let is_ineq = self.command == "check-inequalities";
        let is_ritz = self.command == "ritz-run";
        let is_counter = self.command == "counterexample";
        let is_inverse = self.command == "inverse-rate";
        if !(is_ineq || is_ritz || is_counter || is_inverse) {
            return Err(CliError::Config(format!("unknown command '{}'", self.command)));
        }
        has("kernel", self.kernel.is_some(), is_ineq)?;
        has("bernstein", self.bernstein.is_some(), is_ineq)?;
        has("jackson", self.jackson.is_some(), is_ineq)?;
        has("ritz", self.ritz.is_some(), is_ritz)?;
        has("counterexample", self.counterexample.is_some(), is_counter)?;
        has("inverse", self.inverse.is_some(), is_inverse)?;

        if is_ineq && self.kernel.is_none() && self.bernstein.is_none() && self.jackson.is_none()
        {
            return Err(CliError::Config(
                "check-inequalities needs at least one of [kernel], [bernstein], [jackson]".into(),
            ));
        }

        if let Some(kernel) = &self.kernel {
            grid_f64("kernel.theta", &kernel.theta)?;
            grid_u32("kernel.k", &kernel.k)?;
        }
        if let Some(b) = &self.bernstein {
            corpus("bernstein", b.count, b.modes, b.eigenvalue_max)?;
            grid_u32("bernstein.k", &b.k)?;
            grid_f64("bernstein.h", &b.h)?;
            grid_f64("bernstein.alpha", &b.alpha)?;
            symbols("bernstein.symbols", &b.symbols)?;
        }
        if let Some(j) = &self.jackson {
            corpus("jackson", j.count, j.modes, j.eigenvalue_max)?;
            grid_u32("jackson.k", &j.k)?;
            grid_f64("jackson.r", &j.r)?;
            symbols("jackson.symbols", &j.symbols)?;
            if j.k.first().is_some_and(|&k| k == 0) {
                return Err(CliError::Config("jackson.k entries must be at least 1".into()));
            }
        }
        if let Some(r) = &self.ritz {
            grid_usize("ritz.n_grid", &r.n_grid)?;
            match r.potential.as_str() {
                "constant" | "cosine" => {}
                "custom" => {
                    if r.potential_coefficients.as_ref().is_none_or(|c| c.is_empty()) {
                        return Err(CliError::Config(
                            "potential 'custom' needs nonempty potential_coefficients".into(),
                        ));
                    }
                }
                other => {
                    return Err(CliError::Config(format!(
                        "unknown potential '{other}' (expected constant, cosine, or custom)"
                    )))
                }
            }
            match r.solution.as_str() {
                "geometric" => {
                    if !(r.solution_parameter > 0.0 && r.solution_parameter < 1.0) {
                        return Err(CliError::Config(
                            "geometric solution needs a ratio in (0, 1)".into(),
                        ));
                    }
                }
                "power" => {
                    if !(r.solution_parameter > 0.0) {
                        return Err(CliError::Config(
                            "power solution needs a positive exponent".into(),
                        ));
                    }
                }
                other => {
                    return Err(CliError::Config(format!(
                        "unknown solution '{other}' (expected geometric or power)"
                    )))
                }
            }
        }
        if let Some(c) = &self.counterexample {
            if !(c.alpha >= 1.0) {
                return Err(CliError::Config("counterexample.alpha must be at least 1".into()));
            }
            if c.truncation < 1000 {
                return Err(CliError::Config(
                    "counterexample.truncation must be at least 1000".into(),
                ));
            }
        }
        if let Some(inv) = &self.inverse {
            grid_f64("inverse.alpha", &inv.alpha)?;
            if inv.k == 0 {
                return Err(CliError::Config("inverse.k must be at least 1".into()));
            }
            if !(inv.spectrum_bound >= 4.0) {
                return Err(CliError::Config("inverse.spectrum_bound must be at least 4".into()));
            }
            symbol_by_name(&inv.symbol)?;
        }
        Ok(())
    }
}

fn grid_f64(name: &str, grid: &[f64]) -> Result<(), CliError> {
    if grid.is_empty() {
        return Err(CliError::Config(format!("{name} must be a nonempty grid")));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Config(format!("{name} contains a non-finite value")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Config(format!("{name} must be strictly increasing")));
    }
    Ok(())
}

fn grid_u32(name: &str, grid: &[u32]) -> Result<(), CliError> {
    if grid.is_empty() {
        return Err(CliError::Config(format!("{name} must be a nonempty grid")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Config(format!("{name} must be strictly increasing")));
    }
    Ok(())
}

fn grid_usize(name: &str, grid: &[usize]) -> Result<(), CliError> {
    if grid.is_empty() {
        return Err(CliError::Config(format!("{name} must be a nonempty grid")));
    }
    if grid.first().is_some_and(|&n| n == 0) {
        return Err(CliError::Config(format!("{name} entries must be positive")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Config(format!("{name} must be strictly increasing")));
    }
    Ok(())
}

fn corpus(name: &str, count: usize, modes: usize, eigenvalue_max: f64) -> Result<(), CliError> {
    if count == 0 || modes == 0 {
        return Err(CliError::Config(format!("{name} corpus needs count >= 1 and modes >= 1")));
    }
    if !(eigenvalue_max > 0.0) {
        return Err(CliError::Config(format!("{name}.eigenvalue_max must be positive")));
    }
    Ok(())
}

fn symbols(name: &str, list: &[String]) -> Result<(), CliError> {
    if list.is_empty() {
        return Err(CliError::Config(format!("{name} must name at least one symbol")));
    }
    for s in list {
        symbol_by_name(s)?;
    }
    Ok(())
}

/// The named scalar symbols exposed through configs.
pub fn symbol_by_name(name: &str) -> Result<ScalarSymbol, CliError> {
    match name {
        "one" => Ok(ScalarSymbol::one()),
        "abs" => Ok(ScalarSymbol::abs()),
        "square" => Ok(ScalarSymbol::square()),
        other => Err(CliError::Config(format!(
            "unknown symbol '{other}' (expected one, abs, or square)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig, CliError> {
        let config: ExperimentConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    #[test]
    fn kernel_config_parses() {
        let config = parse(
            r#"
            command = "check-inequalities"
            seed = 7
            [kernel]
            theta = [1.0, 2.0, 3.0]
            k = [1, 2]
            "#,
        )
        .expect("valid config");
        assert_eq!(config.command, "check-inequalities");
        assert_eq!(config.seed, 7);
        assert_eq!(config.kernel.unwrap().theta.len(), 3);
    }

    #[test]
    fn empty_grid_is_a_config_error() {
        let err = parse(
            r#"
            command = "check-inequalities"
            [kernel]
            theta = []
            k = [1]
            "#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("nonempty"), "got: {err}");
    }

    #[test]
    fn unsorted_grid_is_a_config_error() {
        let err = parse(
            r#"
            command = "check-inequalities"
            [kernel]
            theta = [2.0, 1.0]
            k = [1]
            "#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("increasing"), "got: {err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(parse(
            r#"
            command = "counterexample"
            typo_field = 3
            [counterexample]
            alpha = 1.0
            truncation = 10000
            "#,
        )
        .is_err());
    }

    #[test]
    fn section_must_match_command() {
        let err = parse(
            r#"
            command = "counterexample"
            [counterexample]
            alpha = 1.0
            truncation = 10000
            [kernel]
            theta = [1.0]
            k = [1]
            "#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("does not belong"), "got: {err}");
    }

    #[test]
    fn unknown_symbol_is_rejected() {
        let err = parse(
            r#"
            command = "inverse-rate"
            [inverse]
            alpha = [0.5, 1.0]
            k = 1
            symbol = "cube"
            spectrum_bound = 4096.0
            "#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("unknown symbol"), "got: {err}");
    }

    #[test]
    fn ritz_solution_selectors_are_validated() {
        let base = |solution: &str, p: f64| {
            format!(
                r#"
                command = "ritz-run"
                [ritz]
                potential = "cosine"
                truncation = 128
                alpha = 1.0
                smoothness_order = 1
                n_grid = [2, 4, 8, 12, 16, 24]
                solution = "{solution}"
                solution_parameter = {p}
                "#
            )
        };
        assert!(parse(&base("geometric", 0.5)).is_ok());
        assert!(parse(&base("geometric", 1.5)).is_err());
        assert!(parse(&base("power", 6.0)).is_ok());
        assert!(parse(&base("sinusoidal", 1.0)).is_err());
    }
}

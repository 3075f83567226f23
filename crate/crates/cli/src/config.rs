//! Run configuration: a flat `key = value` file, one entry per line.
//!
//! ```text
//! # saddle with a two-cycle window
//! case = saddle.3
//! epsilon = 0.1
//! phi = tanh
//! ```
//!
//! `#` starts a comment, blank lines are ignored, keys may appear once.
//! Numbers use Rust float syntax, which parses every printed `f64` back to
//! the same value.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use vi3_core::regularization::Sigmoid;
use vi3_core::verify::golden::GOLDEN;
use vi3_core::NormalForm;

/// Rejected input: unknown key, bad value, inadmissible parameters.
#[derive(Debug)]
pub struct InvalidInput(pub String);

impl fmt::Display for InvalidInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvalidInput {}

pub fn invalid(msg: impl Into<String>) -> anyhow::Error {
    InvalidInput(msg.into()).into()
}

/// Normal-form parameter that `sweep` can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    BetaMinus,
    GammaMinus,
    Drift,
    AlphaPlus,
    DeltaPlus,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::BetaMinus => "beta_minus",
            SweepParam::GammaMinus => "gamma_minus",
            SweepParam::Drift => "drift",
            SweepParam::AlphaPlus => "alpha_plus",
            SweepParam::DeltaPlus => "delta_plus",
        }
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        [SweepParam::BetaMinus, SweepParam::GammaMinus, SweepParam::Drift, SweepParam::AlphaPlus, SweepParam::DeltaPlus]
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("cannot sweep `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    /// Golden case the parameters were taken from, if any.
    pub case: Option<String>,
    pub beta_minus: Option<f64>,
    pub gamma_minus: Option<f64>,
    pub drift: Option<f64>,
    pub alpha_plus: Option<f64>,
    pub beta_plus: f64,
    pub delta_plus: Option<f64>,
    pub gamma_plus: f64,
    pub phi: Sigmoid,
    pub epsilon: f64,
    pub lambda_tilde: f64,
    /// Margin of the SDI scan window; the library default when absent.
    pub theta: Option<f64>,
    pub grid: usize,
    pub n_scan: usize,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub lambda_steps: usize,
    pub target_cycles: Option<usize>,
    pub sweep_param: SweepParam,
    pub sweep_min: Option<f64>,
    pub sweep_max: Option<f64>,
    pub sweep_steps: usize,
    pub seed: u64,
    pub random_draws: usize,
    pub lemma_draws: usize,
    pub hausdorff_c: f64,
    pub output_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let verify = vi3_core::verify::VerifyConfig::default();
        RunConfig {
            case: None,
            beta_minus: None,
            gamma_minus: None,
            drift: None,
            alpha_plus: None,
            beta_plus: 0.0,
            delta_plus: None,
            gamma_plus: 0.0,
            phi: Sigmoid::Arctan,
            epsilon: verify.epsilon,
            lambda_tilde: 0.0,
            theta: None,
            grid: 512,
            n_scan: 64,
            lambda_min: None,
            lambda_max: None,
            lambda_steps: 33,
            target_cycles: None,
            sweep_param: SweepParam::AlphaPlus,
            sweep_min: None,
            sweep_max: None,
            sweep_steps: 21,
            seed: verify.seed,
            random_draws: verify.random_draws,
            lemma_draws: verify.lemma_draws,
            hausdorff_c: verify.hausdorff_c,
            output_dir: None,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> anyhow::Result<T>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e| invalid(format!("{key} = {value}: {e}")))
}

impl RunConfig {
    /// Apply one `key = value` entry.
    pub fn set(&mut self, key: &str, value: &str) -> anyhow::Result<()> {
        match key {
            "case" => {
                let gc = GOLDEN
                    .iter()
                    .find(|g| g.id == value)
                    .ok_or_else(|| invalid(format!("unknown golden case `{value}`")))?;
                self.case = Some(gc.id.to_string());
                let nf = gc.normal_form();
                self.beta_minus = Some(nf.beta_minus());
                self.gamma_minus = Some(nf.gamma_minus());
                self.drift = Some(nf.drift());
                self.alpha_plus = Some(nf.alpha_plus());
                self.delta_plus = Some(nf.delta_plus());
                self.beta_plus = nf.beta_plus();
                self.gamma_plus = nf.gamma_plus();
            }
            "beta_minus" => self.beta_minus = Some(parse(key, value)?),
            "gamma_minus" => self.gamma_minus = Some(parse(key, value)?),
            "drift" => self.drift = Some(parse(key, value)?),
            "alpha_plus" => self.alpha_plus = Some(parse(key, value)?),
            "beta_plus" => self.beta_plus = parse(key, value)?,
            "delta_plus" => self.delta_plus = Some(parse(key, value)?),
            "gamma_plus" => self.gamma_plus = parse(key, value)?,
            "phi" => self.phi = parse(key, value)?,
            "epsilon" => self.epsilon = parse(key, value)?,
            "lambda_tilde" => self.lambda_tilde = parse(key, value)?,
            "theta" => self.theta = Some(parse(key, value)?),
            "grid" => self.grid = parse(key, value)?,
            "n_scan" => self.n_scan = parse(key, value)?,
            "lambda_min" => self.lambda_min = Some(parse(key, value)?),
            "lambda_max" => self.lambda_max = Some(parse(key, value)?),
            "lambda_steps" => self.lambda_steps = parse(key, value)?,
            "target_cycles" => self.target_cycles = Some(parse(key, value)?),
            "sweep_param" => self.sweep_param = parse(key, value)?,
            "sweep_min" => self.sweep_min = Some(parse(key, value)?),
            "sweep_max" => self.sweep_max = Some(parse(key, value)?),
            "sweep_steps" => self.sweep_steps = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "random_draws" => self.random_draws = parse(key, value)?,
            "lemma_draws" => self.lemma_draws = parse(key, value)?,
            "hausdorff_c" => self.hausdorff_c = parse(key, value)?,
            "output_dir" => self.output_dir = Some(PathBuf::from(value)),
            _ => return Err(invalid(format!("unknown configuration key `{key}`"))),
        }
        Ok(())
    }

    /// Parse a whole file body. `case` is applied first so that explicit
    /// coefficients in the same file override it.
    pub fn parse_str(&mut self, text: &str) -> anyhow::Result<()> {
        let mut entries = BTreeMap::new();
        let mut order = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| invalid(format!("line {}: expected `key = value`, got `{line}`", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(invalid(format!("line {}: duplicate key `{key}`", n + 1)));
            }
            order.push(key.to_string());
        }
        if let Some(case) = entries.get("case") {
            self.set("case", case)?;
        }
        for key in order.iter().filter(|k| *k != "case") {
            self.set(key, &entries[key])?;
        }
        Ok(())
    }

    pub fn load(&mut self, path: &Path) -> anyhow::Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        self.parse_str(&text)
    }

    pub fn normal_form(&self) -> anyhow::Result<NormalForm<f64>> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| invalid(format!("missing parameter `{name}` (set it or choose a `case`)")))
        };
        NormalForm::new(
            need(self.beta_minus, "beta_minus")?,
            need(self.gamma_minus, "gamma_minus")?,
            need(self.drift, "drift")?,
            need(self.alpha_plus, "alpha_plus")?,
            self.beta_plus,
            need(self.delta_plus, "delta_plus")?,
            self.gamma_plus,
        )
        .map_err(|e| invalid(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_overrides_case() {
        let mut cfg = RunConfig::default();
        cfg.parse_str("# two-cycle setup\nalpha_plus = -1.5 # steeper\ncase = saddle.3\n\nphi = tanh\n").unwrap();
        assert_eq!(cfg.case.as_deref(), Some("saddle.3"));
        assert_eq!(cfg.alpha_plus, Some(-1.5));
        assert_eq!(cfg.beta_minus, Some(-1.0));
        assert_eq!(cfg.phi, Sigmoid::Tanh);
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        let err = RunConfig::default().parse_str("alpha = 1").unwrap_err();
        assert!(err.downcast_ref::<InvalidInput>().is_some());
        assert!(RunConfig::default().parse_str("epsilon = 0.1\nepsilon = 0.2").is_err());
        assert!(RunConfig::default().parse_str("epsilon 0.1").is_err());
        assert!(RunConfig::default().parse_str("epsilon = abc").is_err());
    }

    #[test]
    fn floats_round_trip() {
        let v = -20.0f64 / 19.0;
        let mut cfg = RunConfig::default();
        cfg.parse_str(&format!("alpha_plus = {v:.16e}")).unwrap();
        assert_eq!(cfg.alpha_plus, Some(v));
        cfg.set("epsilon", &format!("{}", 0.1f64 / 3.0)).unwrap();
        assert_eq!(cfg.epsilon, 0.1 / 3.0);
    }

    #[test]
    fn inadmissible_parameters_are_invalid_input() {
        let mut cfg = RunConfig::default();
        cfg.parse_str("beta_minus = -1\ngamma_minus = 1\ndrift = 1\nalpha_plus = -1\ndelta_plus = 1").unwrap();
        let err = cfg.normal_form().unwrap_err();
        assert!(err.downcast_ref::<InvalidInput>().is_some());
        cfg.drift = None;
        assert!(cfg.normal_form().is_err());
    }
}

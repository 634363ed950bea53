//! Run settings: a flat key-value TOML file overlaid by command-line flags.

use std::path::Path;

use credit_curve::fitting::{EmMode, FitConfig, Loss, WeightMode};
use credit_curve::valuation::DEFAULT_GRID_STEP;
use credit_curve::{Compounding, RecoveryModel, RecoverySchedule};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// Keys accepted in the `--config` file. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub as_of: Option<String>,
    pub recovery: Option<String>,
    pub fix_c: Option<f64>,
    pub em_alpha: Option<String>,
    pub alpha_rating_dependent: Option<bool>,
    pub horizon: Option<f64>,
    pub convergence_fraction: Option<f64>,
    pub grid_step: Option<f64>,
    pub seed: Option<u64>,
    pub multistart: Option<usize>,
    pub weighting: Option<String>,
    pub loss: Option<String>,
    pub compounding: Option<String>,
    pub tenors: Option<Vec<f64>>,
    pub allow_underdetermined: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct Settings {
    pub as_of: Option<chrono::NaiveDate>,
    pub recovery: RecoveryModel,
    pub fit: FitConfig,
    pub horizon: f64,
    pub convergence_fraction: f64,
    pub compounding: Compounding,
    pub tenors: Vec<f64>,
    pub allow_underdetermined: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            as_of: None,
            recovery: RecoveryModel::Schedule(RecoverySchedule::default()),
            fit: FitConfig::default(),
            horizon: 0.25,
            convergence_fraction: 1.0,
            compounding: Compounding::Continuous,
            tenors: vec![2.0, 5.0, 10.0],
            allow_underdetermined: false,
        }
    }
}

impl Settings {
    /// Applies the file's keys on top of the defaults.
    pub fn from_file(file: &FileConfig) -> CliResult<Self> {
        let mut s = Settings::default();
        if let Some(d) = &file.as_of {
            s.as_of = Some(parse_date(d)?);
        }
        if let Some(r) = &file.recovery {
            s.recovery = parse_recovery(r)?;
        }
        s.fit.fix_c = file.fix_c;
        if let Some(e) = &file.em_alpha {
            s.fit.em = parse_em(e)?;
        }
        if let Some(v) = file.alpha_rating_dependent {
            s.fit.alpha_rating_dependent = v;
        }
        if let Some(h) = file.horizon {
            s.horizon = h;
        }
        if let Some(f) = file.convergence_fraction {
            s.convergence_fraction = f;
        }
        s.fit.grid_step = file.grid_step.unwrap_or(DEFAULT_GRID_STEP);
        if let Some(seed) = file.seed {
            s.fit.seed = seed;
        }
        if let Some(m) = file.multistart {
            s.fit.multistart_count = m;
        }
        if let Some(w) = &file.weighting {
            s.fit.weight_mode = parse_weighting(w)?;
        }
        if let Some(l) = &file.loss {
            s.fit.loss = parse_loss(l)?;
        }
        if let Some(c) = &file.compounding {
            s.compounding = parse_compounding(c)?;
        }
        if let Some(t) = &file.tenors {
            s.tenors = t.clone();
        }
        if let Some(a) = file.allow_underdetermined {
            s.allow_underdetermined = a;
        }
        Ok(s)
    }

    pub fn validate(&self) -> CliResult<()> {
        self.fit.validate()?;
        if !(self.horizon > 0.0) {
            return Err(CliError::Input(format!("horizon must be > 0, got {}", self.horizon)));
        }
        if !(0.0..=1.0).contains(&self.convergence_fraction) {
            return Err(CliError::Input(format!(
                "convergence fraction must lie in [0, 1], got {}",
                self.convergence_fraction
            )));
        }
        if self.tenors.iter().any(|t| !(*t > 0.0)) {
            return Err(CliError::Input("report tenors must be > 0".into()));
        }
        Ok(())
    }
}

pub fn parse_date(s: &str) -> CliResult<chrono::NaiveDate> {
    chrono::NaiveDate::parse_from_str(s.trim(), "%Y-%m-%d")
        .map_err(|_| CliError::Input(format!("bad date '{s}', expected YYYY-MM-DD")))
}

/// `schedule`, `schedule:<floor>`, `fixed:<value>` or a bare number.
pub fn parse_recovery(s: &str) -> CliResult<RecoveryModel> {
    let s = s.trim();
    let bad = || CliError::Input(format!("bad recovery '{s}', expected schedule, schedule:<floor> or fixed:<value>"));
    match s.split_once(':') {
        None if s == "schedule" => Ok(RecoveryModel::Schedule(RecoverySchedule::default())),
        None => fixed_recovery(s.parse().map_err(|_| bad())?),
        Some(("schedule", v)) => Ok(RecoveryModel::Schedule(RecoverySchedule::new(v.parse().map_err(|_| bad())?)?)),
        Some(("fixed", v)) => fixed_recovery(v.parse().map_err(|_| bad())?),
        Some(_) => Err(bad()),
    }
}

fn fixed_recovery(v: f64) -> CliResult<RecoveryModel> {
    if !(0.0..1.0).contains(&v) {
        return Err(CliError::Input(format!("recovery must lie in [0, 1), got {v}")));
    }
    Ok(RecoveryModel::Fixed(v))
}

/// `off`, `fit` or `fixed:<alpha>`.
pub fn parse_em(s: &str) -> CliResult<EmMode> {
    let s = s.trim();
    match s.split_once(':') {
        None if s == "off" => Ok(EmMode::Off),
        None if s == "fit" => Ok(EmMode::Fit),
        Some(("fixed", v)) => {
            let a: f64 = v.parse().map_err(|_| CliError::Input(format!("bad alpha '{v}'")))?;
            Ok(EmMode::Fixed(a))
        }
        _ => Err(CliError::Input(format!("bad em-alpha '{s}', expected off, fit or fixed:<value>"))),
    }
}

pub fn parse_weighting(s: &str) -> CliResult<WeightMode> {
    match s.trim() {
        "issue-size" => Ok(WeightMode::IssueSize),
        "issue-size-duration" => Ok(WeightMode::IssueSizeDuration),
        "equal" => Ok(WeightMode::Equal),
        other => {
            Err(CliError::Input(format!("bad weighting '{other}', expected issue-size, issue-size-duration or equal")))
        }
    }
}

pub fn parse_loss(s: &str) -> CliResult<Loss> {
    match s.trim() {
        "robust" => Ok(Loss::Robust),
        "squared" => Ok(Loss::Squared),
        other => Err(CliError::Input(format!("bad loss '{other}', expected robust or squared"))),
    }
}

/// `continuous` or `periodic:<m>`.
pub fn parse_compounding(s: &str) -> CliResult<Compounding> {
    let s = s.trim();
    match s.split_once(':') {
        None if s == "continuous" => Ok(Compounding::Continuous),
        Some(("periodic", m)) => match m.parse::<u32>() {
            Ok(m) if m > 0 => Ok(Compounding::Periodic(m)),
            _ => Err(CliError::Input(format!("bad compounding frequency '{m}'"))),
        },
        _ => Err(CliError::Input(format!("bad compounding '{s}', expected continuous or periodic:<m>"))),
    }
}

//! Fit records and their tabular renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use credit_curve::fitting::{FitConfig, FitResult, FittedCurve};
use credit_curve::valuation::{self, DiscountGrid};
use credit_curve::{Anchor, RatingGrid, RecoveryModel, RiskfreeCurve, SurvivalParams};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::input::InstrumentRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitMode {
    SingleName,
    RatingGrid,
}

/// One fitted curve and the instruments it was fitted to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupFit {
    /// Issuer for single-name fits; `None` for the rating grid.
    pub issuer: Option<String>,
    /// Indices into [`FitRun::instruments`].
    pub members: Vec<usize>,
    pub result: FitResult,
}

/// Everything needed to regenerate a fit report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRun {
    pub as_of: Option<String>,
    pub mode: FitMode,
    pub config: FitConfig,
    pub recovery: RecoveryModel,
    pub riskfree: RiskfreeCurve,
    pub instruments: Vec<InstrumentRecord>,
    pub sovereign_spreads: Vec<Option<f64>>,
    pub fits: Vec<GroupFit>,
}

impl FitRun {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fit run serialises") + "\n"
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("bad fit result file: {e}")))
    }

    /// Curve applying to each instrument, by index.
    pub fn curve_of(&self, index: usize) -> Option<&FittedCurve> {
        self.fits.iter().find(|g| g.members.contains(&index)).map(|g| &g.result.curve)
    }
}

/// Curves to value instruments against.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveSource {
    All(FittedCurve),
    ByIssuer(BTreeMap<String, FittedCurve>),
}

impl CurveSource {
    pub fn for_record(&self, rec: &InstrumentRecord) -> CliResult<SurvivalParams> {
        let curve = match self {
            CurveSource::All(c) => c,
            CurveSource::ByIssuer(m) => m
                .get(&rec.issuer)
                .ok_or_else(|| CliError::Input(format!("no fitted curve for issuer '{}'", rec.issuer)))?,
        };
        curve.params_for(rec.instrument.rating()).map_err(|e| CliError::Input(format!("{}: {e}", rec.id)))
    }

    pub fn grid(&self) -> Option<&RatingGrid> {
        match self {
            CurveSource::All(FittedCurve::Grid(g)) => Some(g),
            _ => None,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CurveFile {
    Single { a: f64, b: f64, c: f64 },
    Grid { aa: Anchor, bbb: Anchor, b: Anchor, c: f64 },
}

/// Reads a curve from a `fit_result.json` or a TOML file with `a, b, c` or `aa, bbb, b, c`.
pub fn load_curve(path: &Path) -> CliResult<CurveSource> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    if path.extension().is_some_and(|e| e == "json") {
        let run = FitRun::from_json(&text)?;
        return Ok(match run.mode {
            FitMode::RatingGrid => CurveSource::All(run.fits[0].result.curve),
            FitMode::SingleName => CurveSource::ByIssuer(
                run.fits.iter().filter_map(|g| Some((g.issuer.clone()?, g.result.curve))).collect(),
            ),
        });
    }
    let parsed: CurveFile = toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let curve = match parsed {
        CurveFile::Single { a, b, c } => FittedCurve::Single(SurvivalParams::new(a, b, c)?),
        CurveFile::Grid { aa, bbb, b, c } => FittedCurve::Grid(RatingGrid::new([aa, bbb, b], c)?),
    };
    Ok(CurveSource::All(curve))
}

const BP: f64 = 1e4;

pub(crate) fn opt_rating(rec: &InstrumentRecord) -> String {
    rec.instrument.rating().map_or(String::new(), |r| r.to_string())
}

pub(crate) fn flag(residual: f64) -> &'static str {
    if residual.abs() < 0.005 {
        "fair"
    } else if residual > 0.0 {
        "cheap"
    } else {
        "rich"
    }
}

/// Per-instrument fit output, in natural units.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub index: usize,
    pub recovery: f64,
    pub market_price: f64,
    pub par_adjusted_spread: f64,
    pub model_spread: f64,
    /// `α s_sov(T)` after any rating scaling.
    pub sovereign: f64,
    pub residual: f64,
}

impl ReportRow {
    pub fn basis(&self) -> f64 {
        self.par_adjusted_spread - self.model_spread - self.sovereign
    }
}

pub fn report_rows(run: &FitRun) -> CliResult<Vec<ReportRow>> {
    let max_t = run.instruments.iter().map(|r| r.instrument.tenor()).fold(0.0, f64::max);
    let grid = DiscountGrid::new(&run.riskfree, run.config.grid_step, max_t)?;
    let mut rows = Vec::with_capacity(run.instruments.len());
    for g in &run.fits {
        let alpha = g.result.alpha.unwrap_or(0.0);
        for (&i, &residual) in g.members.iter().zip(&g.result.residuals) {
            let rec = &run.instruments[i];
            let inst = &rec.instrument;
            let rating = inst.rating();
            let k = grid.kernels(&g.result.curve.params_for(rating)?, inst.tenor())?;
            let recovery = run.recovery.recovery(rating, rec.recovery)?;
            let market = inst.market_value(&run.riskfree, run.config.grid_step)?;
            let a_eff = match (run.config.alpha_rating_dependent, rating) {
                (true, Some(r)) => alpha * (f64::from(r.index()) / 9.0).min(1.0),
                _ => alpha,
            };
            rows.push(ReportRow {
                index: i,
                recovery,
                market_price: market.price(),
                par_adjusted_spread: valuation::par_adjusted_spread(inst.coupon(), market, &k),
                model_spread: valuation::par_cds_spread(&k, recovery),
                sovereign: a_eff * run.sovereign_spreads[i].unwrap_or(0.0),
                residual,
            });
        }
    }
    Ok(rows)
}

/// Per-instrument fit report.
pub fn render_report(run: &FitRun) -> CliResult<String> {
    let mut out = String::from(
        "id,issuer,kind,rating,tenor_y,coupon_pct,market_price_pts,recovery,model_price_pts,\
         par_adj_spread_bp,model_spread_bp,sovereign_bp,basis_bp,residual_pts,flag\n",
    );
    for r in report_rows(run)? {
        let rec = &run.instruments[r.index];
        writeln!(
            out,
            "{},{},{},{},{:.6},{:.6},{:.6},{:.4},{:.6},{:.4},{:.4},{:.4},{:.4},{:.6},{}",
            rec.id,
            rec.issuer,
            rec.kind(),
            opt_rating(rec),
            rec.instrument.tenor(),
            rec.instrument.coupon() * 100.0,
            r.market_price,
            r.recovery,
            r.market_price + r.residual,
            r.par_adjusted_spread * BP,
            r.model_spread * BP,
            r.sovereign * BP,
            r.basis() * BP,
            r.residual,
            flag(r.residual)
        )
        .expect("write to string");
    }
    Ok(out)
}

/// Fitted parameters and fit diagnostics, one row per value.
pub fn render_params(run: &FitRun) -> String {
    let mut out = String::from("group,param,value\n");
    let mut row = |group: &str, name: &str, v: String| {
        writeln!(out, "{group},{name},{v}").expect("write to string");
    };
    for g in &run.fits {
        let group = g.issuer.clone().unwrap_or_else(|| "grid".into());
        match g.result.curve {
            FittedCurve::Single(p) => {
                row(&group, "a", format!("{:.10}", p.a));
                row(&group, "b", format!("{:.10}", p.b));
                row(&group, "c", format!("{:.10}", p.c));
            }
            FittedCurve::Grid(gr) => {
                for (anchor, name) in gr.anchors().iter().zip(["AA", "BBB", "B"]) {
                    row(&group, &format!("{name}.a"), format!("{:.10}", anchor.a));
                    row(&group, &format!("{name}.b"), format!("{:.10}", anchor.b));
                }
                row(&group, "c", format!("{:.10}", gr.c()));
            }
        }
        if let Some(a) = g.result.alpha {
            row(&group, "alpha", format!("{a:.10}"));
        }
        let d = &g.result.diagnostics;
        row(&group, "objective", format!("{:.6e}", g.result.objective));
        row(&group, "converged", d.converged.to_string());
        row(&group, "underdetermined", d.underdetermined.to_string());
        row(&group, "iterations", d.iterations.to_string());
        row(&group, "evaluations", d.evaluations.to_string());
        row(&group, "best_start", d.best_start.to_string());
    }
    out
}

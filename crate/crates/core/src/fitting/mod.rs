//! Robust weighted calibration of survival curves to bond and CDS quotes.
//!
//! Each instrument contributes a price residual
//!
//! ```text
//! ΔP/100 = 1 - P/100 + (c - r̂ - s(T) - α s_sov(T)) Π(T)
//! ```
//!
//! (`r̂` dropped for CDS, `α = 0` unless the sovereign adjustment is on) and the
//! fit minimises `Σ w_j ρ(ΔP_j)` over the curve parameters with a Nelder–Mead
//! search in unconstrained coordinates: logs for hazards, a logistic map for the
//! bounded shape `c` and for `α`, and squared log-increments between rating
//! anchors so the grid can never cross.

mod grid;
mod simplex;
mod single;

use serde::{Deserialize, Serialize};

pub use grid::fit_rating_grid;
pub use simplex::{minimize, SimplexOptions, SimplexOutcome};
pub use single::fit_single_name;

use crate::error::{CreditError, Result};
use crate::ratecurve::RiskfreeCurve;
use crate::survival::{Rating, RatingGrid, RecoveryModel, SurvivalCurve, SurvivalParams, SHAPE_BOUNDS};
use crate::valuation::{self, DiscountGrid, Instrument, MarketValue, DEFAULT_GRID_STEP};

/// Penalty applied to each price residual (in points per 100).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Loss {
    /// `sqrt(1 + x²) - 1`: quadratic near zero, linear in the tails.
    Robust,
    /// `x²`.
    Squared,
}

impl Loss {
    pub fn rho(self, x: f64) -> f64 {
        match self {
            // x²/(sqrt(1+x²)+1) avoids cancellation for small x
            Loss::Robust => {
                let x2 = x * x;
                x2 / ((1.0 + x2).sqrt() + 1.0)
            }
            Loss::Squared => x * x,
        }
    }
}

/// How instruments are weighted in the objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightMode {
    /// Amount outstanding.
    IssueSize,
    /// Amount outstanding times the riskfree annuity to maturity.
    IssueSizeDuration,
    Equal,
}

/// Treatment of the sovereign-spread coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EmMode {
    Off,
    /// Fit `α` in `[0, 1]` jointly with the curve.
    Fit,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub weight_mode: WeightMode,
    pub loss: Loss,
    pub c_bounds: (f64, f64),
    pub fix_c: Option<f64>,
    pub multistart_count: usize,
    pub seed: u64,
    pub grid_step: f64,
    pub em: EmMode,
    /// Scale `α` by `min(1, r/9)` so better-rated issuers load less on the sovereign.
    pub alpha_rating_dependent: bool,
    /// Log-hazard slope per notch used to place anchors the data cannot reach.
    pub prior_notch_slope: f64,
    pub simplex: SimplexOptions,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            weight_mode: WeightMode::IssueSize,
            loss: Loss::Robust,
            c_bounds: SHAPE_BOUNDS,
            fix_c: None,
            multistart_count: 5,
            seed: 0x5eed,
            grid_step: DEFAULT_GRID_STEP,
            em: EmMode::Off,
            alpha_rating_dependent: false,
            prior_notch_slope: 4f64.ln() / 6.0,
            simplex: SimplexOptions::default(),
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.c_bounds;
        if !(lo > 0.0) || !(hi >= lo) || !hi.is_finite() {
            return Err(CreditError::InvalidInput(format!("invalid c bounds [{lo}, {hi}]")));
        }
        if let Some(c) = self.fix_c {
            if !(c > 0.0) || !c.is_finite() {
                return Err(CreditError::InvalidInput(format!("fixed c must be > 0, got {c}")));
            }
        }
        if let EmMode::Fixed(a) = self.em {
            if !(0.0..=1.0).contains(&a) {
                return Err(CreditError::InvalidInput(format!("alpha must lie in [0, 1], got {a}")));
            }
        }
        if self.multistart_count == 0 {
            return Err(CreditError::InvalidInput("need at least one start".into()));
        }
        if !(self.grid_step > 0.0) {
            return Err(CreditError::InvalidInput("grid step must be > 0".into()));
        }
        let s = &self.simplex;
        if !(s.f_tol > 0.0) || !(s.x_tol > 0.0) || !(s.f_rel_tol >= 0.0) || !(s.initial_step > 0.0) {
            return Err(CreditError::InvalidInput("optimizer tolerances must be > 0".into()));
        }
        Ok(())
    }

    fn shape_coordinate(&self) -> ShapeCoordinate {
        match self.fix_c {
            Some(c) => ShapeCoordinate::Fixed(c),
            None if self.c_bounds.0 == self.c_bounds.1 => ShapeCoordinate::Fixed(self.c_bounds.0),
            None => ShapeCoordinate::Free(self.c_bounds),
        }
    }
}

/// A calibration instrument together with fit-time overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitInstrument {
    pub instrument: Instrument,
    /// Recovery to use instead of the recovery model.
    pub recovery: Option<f64>,
    /// Sovereign par spread at the instrument's maturity, for the EM adjustment.
    pub sovereign_spread: Option<f64>,
}

impl From<Instrument> for FitInstrument {
    fn from(instrument: Instrument) -> Self {
        Self { instrument, recovery: None, sovereign_spread: None }
    }
}

/// Fitted curve family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FittedCurve {
    Single(SurvivalParams),
    Grid(RatingGrid),
}

impl FittedCurve {
    /// Curve for an instrument of the given rating (ignored for a single-name curve).
    pub fn params_for(&self, rating: Option<Rating>) -> Result<SurvivalParams> {
        match (self, rating) {
            (FittedCurve::Single(p), _) => Ok(*p),
            (FittedCurve::Grid(g), Some(r)) => Ok(g.params_for_rating(r)),
            (FittedCurve::Grid(_), None) => {
                Err(CreditError::InvalidInput("rating-grid curves need a rating for every instrument".into()))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics {
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Some parameters were pinned by ties or priors rather than data.
    pub underdetermined: bool,
    pub starts: usize,
    /// Index of the start that produced the reported optimum.
    pub best_start: usize,
    /// Best objective after each iteration of the winning start.
    pub descent: Vec<f64>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub curve: FittedCurve,
    pub alpha: Option<f64>,
    /// `ΔP` per 100 for each instrument, in input order.
    pub residuals: Vec<f64>,
    pub objective: f64,
    pub diagnostics: FitDiagnostics,
}

/// Price residual `ΔP` per 100 (model minus market; positive means the instrument looks cheap).
pub fn price_residual<S: SurvivalCurve>(
    instrument: &Instrument,
    survival: &S,
    riskfree: &RiskfreeCurve,
    recovery: f64,
    grid_step: f64,
) -> Result<f64> {
    price_residual_em(instrument, survival, riskfree, recovery, 0.0, 0.0, grid_step)
}

/// Price residual with the sovereign term: the model spread becomes `s(T) + α s_sov(T)`.
pub fn price_residual_em<S: SurvivalCurve>(
    instrument: &Instrument,
    survival: &S,
    riskfree: &RiskfreeCurve,
    recovery: f64,
    sovereign_spread: f64,
    alpha: f64,
    grid_step: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(CreditError::Domain(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    instrument.validate()?;
    let market = instrument.market_value(riskfree, grid_step)?;
    let k = valuation::kernels(riskfree, survival, instrument.tenor(), grid_step)?;
    Ok(valuation::price_residual(instrument.coupon(), market, &k, recovery, alpha * sovereign_spread))
}

#[derive(Debug, Clone, Copy)]
enum ShapeCoordinate {
    Fixed(f64),
    Free((f64, f64)),
}

fn logistic(x: f64, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) / (1.0 + (-x).exp())
}

fn logit(v: f64, lo: f64, hi: f64) -> f64 {
    let p = ((v - lo) / (hi - lo)).clamp(1e-9, 1.0 - 1e-9);
    (p / (1.0 - p)).ln()
}

/// An instrument reduced to what the objective needs.
#[derive(Debug, Clone)]
pub(crate) struct Prepared {
    tenor: f64,
    coupon: f64,
    market: MarketValue,
    weight: f64,
    rating: Option<Rating>,
    recovery: f64,
    sovereign: f64,
}

pub(crate) struct Problem {
    items: Vec<Prepared>,
    /// Ratings present, ascending, with the longest maturity at each.
    horizons: Vec<(Rating, f64)>,
    max_tenor: f64,
    grid: DiscountGrid,
    loss: Loss,
    alpha_rating_dependent: bool,
}

impl Problem {
    pub(crate) fn new(
        instruments: &[FitInstrument],
        riskfree: &RiskfreeCurve,
        recovery: &RecoveryModel,
        config: &FitConfig,
    ) -> Result<Self> {
        config.validate()?;
        if instruments.is_empty() {
            return Err(CreditError::InvalidInput("no instruments".into()));
        }
        let max_tenor = instruments.iter().map(|i| i.instrument.tenor()).fold(0.0, f64::max);
        let grid = DiscountGrid::new(riskfree, config.grid_step, max_tenor.max(config.grid_step))?;
        let mut items = Vec::with_capacity(instruments.len());
        for fi in instruments {
            let inst = &fi.instrument;
            inst.validate()?;
            let rating = inst.rating();
            let rec = recovery.recovery(rating, fi.recovery)?;
            if !(0.0..1.0).contains(&rec) {
                return Err(CreditError::InvalidInput(format!("recovery must be in [0, 1), got {rec}")));
            }
            let weight = match config.weight_mode {
                WeightMode::IssueSize => inst.issue_size(),
                WeightMode::Equal => 1.0,
                WeightMode::IssueSizeDuration => {
                    inst.issue_size() * grid.kernels(&crate::survival::FlatHazard(0.0), inst.tenor())?.pi
                }
            };
            items.push(Prepared {
                tenor: inst.tenor(),
                coupon: inst.coupon(),
                market: inst.market_value(riskfree, config.grid_step)?,
                weight,
                rating,
                recovery: rec,
                sovereign: fi.sovereign_spread.unwrap_or(0.0),
            });
        }
        let total: f64 = items.iter().map(|p| p.weight).sum();
        let n = items.len() as f64;
        for p in &mut items {
            p.weight *= n / total;
        }
        let mut horizons: Vec<(Rating, f64)> = Vec::new();
        for it in &items {
            if let Some(r) = it.rating {
                match horizons.iter_mut().find(|(hr, _)| *hr == r) {
                    Some(h) => h.1 = h.1.max(it.tenor),
                    None => horizons.push((r, it.tenor)),
                }
            }
        }
        horizons.sort_by_key(|h| h.0);
        Ok(Self {
            items,
            horizons,
            max_tenor,
            grid,
            loss: config.loss,
            alpha_rating_dependent: config.alpha_rating_dependent,
        })
    }

    fn effective_alpha(&self, alpha: f64, rating: Option<Rating>) -> f64 {
        match (self.alpha_rating_dependent, rating) {
            (true, Some(r)) => alpha * (f64::from(r.index()) / 9.0).min(1.0),
            _ => alpha,
        }
    }

    /// Residuals for every instrument under `curve`.
    pub(crate) fn residuals(&self, curve: &FittedCurve, alpha: f64) -> Vec<f64> {
        let mut out = vec![f64::NAN; self.items.len()];
        match curve {
            FittedCurve::Single(p) => {
                let table = self.grid.table_until(p, self.max_tenor);
                for (o, it) in out.iter_mut().zip(&self.items) {
                    *o = self.residual_of(it, table.at(it.tenor), alpha);
                }
            }
            FittedCurve::Grid(g) => {
                for &(r, horizon) in &self.horizons {
                    let table = self.grid.table_until(&g.params_for_rating(r), horizon);
                    for (o, it) in out.iter_mut().zip(&self.items) {
                        if it.rating == Some(r) {
                            *o = self.residual_of(it, table.at(it.tenor), alpha);
                        }
                    }
                }
            }
        }
        out
    }

    fn residual_of(&self, it: &Prepared, k: Result<valuation::RiskyKernels>, alpha: f64) -> f64 {
        match k {
            Ok(k) => valuation::price_residual(
                it.coupon,
                it.market,
                &k,
                it.recovery,
                self.effective_alpha(alpha, it.rating) * it.sovereign,
            ),
            Err(_) => f64::NAN,
        }
    }

    pub(crate) fn objective_of(&self, residuals: &[f64]) -> f64 {
        residuals.iter().zip(&self.items).map(|(r, it)| it.weight * self.loss.rho(*r)).sum()
    }

    /// Rough hazard level implied by the quotes: spreads against a riskless curve
    /// divided by loss given default, median over instruments.
    pub(crate) fn hazard_guess(&self) -> f64 {
        let flat = crate::survival::FlatHazard(0.0);
        let mut guesses: Vec<f64> = self
            .items
            .iter()
            .filter_map(|it| {
                let k = self.grid.kernels(&flat, it.tenor).ok()?;
                let s = valuation::par_adjusted_spread(it.coupon, it.market, &k);
                let g = s / (1.0 - it.recovery);
                (g.is_finite() && g > 0.0).then_some(g)
            })
            .collect();
        if guesses.is_empty() {
            return 0.01;
        }
        guesses.sort_by(f64::total_cmp);
        guesses[guesses.len() / 2].clamp(1e-4, 2.0)
    }

    pub(crate) fn distinct_tenors(&self) -> usize {
        let mut t: Vec<f64> = self.items.iter().map(|i| i.tenor).collect();
        t.sort_by(f64::total_cmp);
        t.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        t.len()
    }

    pub(crate) fn distinct_ratings(&self) -> Vec<Rating> {
        self.horizons.iter().map(|h| h.0).collect()
    }
}

/// Runs the seeded multistart search and returns the best outcome with its start index.
pub(crate) fn multistart<F>(
    objective: F,
    first: Vec<f64>,
    config: &FitConfig,
    perturb: impl Fn(&mut rand_chacha::ChaCha8Rng, &[f64]) -> Vec<f64>,
) -> (SimplexOutcome, usize, usize)
where
    F: Fn(&[f64]) -> f64,
{
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(config.seed);
    let mut best: Option<(SimplexOutcome, usize)> = None;
    let mut total_evals = 0;
    for s in 0..config.multistart_count {
        let x0 = if s == 0 { first.clone() } else { perturb(&mut rng, &first) };
        let out = minimize(&objective, &x0, &config.simplex);
        total_evals += out.evaluations;
        let better = match &best {
            None => true,
            Some((b, _)) => out.value < b.value,
        };
        if better {
            best = Some((out, s));
        }
    }
    let (out, idx) = best.expect("at least one start");
    (out, idx, total_evals)
}

pub(crate) struct Shape {
    coord: ShapeCoordinate,
}

impl Shape {
    pub(crate) fn from_config(config: &FitConfig) -> Self {
        Self { coord: config.shape_coordinate() }
    }

    pub(crate) fn is_free(&self) -> bool {
        matches!(self.coord, ShapeCoordinate::Free(_))
    }

    pub(crate) fn decode(&self, x: Option<f64>) -> f64 {
        match (self.coord, x) {
            (ShapeCoordinate::Fixed(c), _) => c,
            (ShapeCoordinate::Free((lo, hi)), Some(x)) => logistic(x, lo, hi),
            (ShapeCoordinate::Free((lo, hi)), None) => 0.5 * (lo + hi),
        }
    }

    pub(crate) fn encode(&self, c: f64) -> Option<f64> {
        match self.coord {
            ShapeCoordinate::Fixed(_) => None,
            ShapeCoordinate::Free((lo, hi)) => Some(logit(c, lo, hi)),
        }
    }
}

pub(crate) fn decode_alpha(mode: EmMode, x: Option<f64>) -> Option<f64> {
    match (mode, x) {
        (EmMode::Off, _) => None,
        (EmMode::Fixed(a), _) => Some(a),
        (EmMode::Fit, Some(x)) => Some(logistic(x, 0.0, 1.0)),
        (EmMode::Fit, None) => Some(0.5),
    }
}

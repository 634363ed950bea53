//! Risky valuation kernels and spread measures.
//!
//! Everything here rests on three integrals over `[0, T]`:
//!
//! ```text
//! Π(T)  =  ∫ B Q dt          (risky PV01)
//! Ξ(T)  = -∫ B dQ            (PV of one unit paid at default)
//! r̂Π(T) = -∫ Q dB            (risky-weighted riskfree forward)
//! ```
//!
//! evaluated with the trapezium rule on a uniform grid whose last step is
//! shortened to land on `T`. The discretised forms telescope, so
//! `B(T)Q(T) + Ξ + r̂Π = 1` holds to rounding for any grid.
//!
//! Coupons are treated as paid continuously and bond prices as full (invoice)
//! values per 100 face.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, CreditError, Result};
use crate::ratecurve::{Compounding, RiskfreeCurve};
use crate::roots::{brent, expand_upper};
use crate::survival::{FlatHazard, Rating, SurvivalCurve, SurvivalParams};

/// Default quadrature step: one month.
pub const DEFAULT_GRID_STEP: f64 = 1.0 / 12.0;
/// Default recovery used to convert a traded CDS spread into an upfront.
pub const DEFAULT_QUOTING_RECOVERY: f64 = 0.40;
/// Issue size (USD millions) assumed when none is given, the liquid CDS convention.
pub const DEFAULT_ISSUE_SIZE: f64 = 1000.0;

/// The integrals `Π`, `Ξ`, `r̂` at one tenor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskyKernels {
    /// Risky PV01 `Π(T)`, in years.
    pub pi: f64,
    /// Recovery-leg factor `Ξ(T)`.
    pub xi: f64,
    /// `r̂(T)·Π(T)`, kept separately so parity can be checked without a division.
    pub rhat_pi: f64,
    /// Risky discount factor `B(T)Q(T)`.
    pub bq: f64,
    pub tenor: f64,
}

impl RiskyKernels {
    /// Risky-discount-weighted average riskfree forward `r̂(T)`.
    pub fn rhat(&self) -> f64 {
        self.rhat_pi / self.pi
    }

    /// `B(T)Q(T) + Ξ + r̂Π - 1`, zero up to rounding.
    pub fn parity_error(&self) -> f64 {
        self.bq + self.xi + self.rhat_pi - 1.0
    }
}

/// Riskfree discount factors sampled on a uniform grid, reusable across survival curves.
#[derive(Debug, Clone)]
pub struct DiscountGrid {
    curve: RiskfreeCurve,
    step: f64,
    discounts: Vec<f64>,
}

impl DiscountGrid {
    /// Samples `curve` at `0, h, 2h, ...` far enough to cover tenors up to `max_tenor`.
    pub fn new(curve: &RiskfreeCurve, step: f64, max_tenor: f64) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(CreditError::Domain(format!("grid step must be > 0, got {step}")));
        }
        if !(max_tenor > 0.0) || !max_tenor.is_finite() {
            return Err(CreditError::Domain(format!("tenor must be > 0, got {max_tenor}")));
        }
        let nodes = (max_tenor / step).ceil() as usize + 1;
        let discounts = (0..nodes).map(|j| (-curve.log_discount(j as f64 * step)).exp()).collect();
        Ok(Self { curve: curve.clone(), step, discounts })
    }

    pub fn curve(&self) -> &RiskfreeCurve {
        &self.curve
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn max_tenor(&self) -> f64 {
        (self.discounts.len() - 1) as f64 * self.step
    }

    /// Cumulative kernels for one survival curve over the whole grid.
    pub fn table<S: SurvivalCurve + Clone>(&self, survival: &S) -> KernelTable<'_, S> {
        self.table_until(survival, self.max_tenor())
    }

    /// Cumulative kernels covering tenors up to `horizon` only.
    pub fn table_until<S: SurvivalCurve + Clone>(&self, survival: &S, horizon: f64) -> KernelTable<'_, S> {
        let needed = (horizon.max(0.0) / self.step).ceil() as usize + 1;
        let n = needed.min(self.discounts.len());
        let mut q = Vec::with_capacity(n);
        let mut cum = Vec::with_capacity(n);
        let mut acc = [0.0; 3];
        let mut q_prev = 1.0;
        let mut b_prev = 1.0;
        q.push(1.0);
        cum.push(acc);
        for j in 1..n {
            let qj = survival.survival(j as f64 * self.step);
            let bj = self.discounts[j];
            accumulate(&mut acc, self.step, b_prev, bj, q_prev, qj);
            q.push(qj);
            cum.push(acc);
            q_prev = qj;
            b_prev = bj;
        }
        KernelTable { grid: self, survival: survival.clone(), q, cum }
    }

    /// Kernels at a single tenor without building a full table.
    pub fn kernels<S: SurvivalCurve>(&self, survival: &S, tenor: f64) -> Result<RiskyKernels> {
        let (full, _) = self.split(tenor)?;
        let mut acc = [0.0; 3];
        let mut q_prev = 1.0;
        let mut b_prev = 1.0;
        for j in 1..=full {
            let qj = survival.survival(j as f64 * self.step);
            let bj = self.discounts[j];
            accumulate(&mut acc, self.step, b_prev, bj, q_prev, qj);
            q_prev = qj;
            b_prev = bj;
        }
        Ok(self.finish(acc, full, b_prev, q_prev, survival.survival(tenor), tenor))
    }

    /// Number of whole grid steps before the final (possibly short) step ending at `tenor`.
    fn split(&self, tenor: f64) -> Result<(usize, f64)> {
        if !(tenor > 0.0) || !tenor.is_finite() {
            return Err(CreditError::Domain(format!("tenor must be > 0, got {tenor}")));
        }
        if tenor > self.max_tenor() * (1.0 + 1e-12) {
            return Err(CreditError::Domain(format!("tenor {tenor} beyond discount grid ({})", self.max_tenor())));
        }
        let k = (tenor / self.step).round();
        let full = if k >= 1.0 && (k * self.step - tenor).abs() <= 1e-10 * self.step {
            k as usize - 1
        } else {
            (tenor / self.step).floor() as usize
        };
        Ok((full, tenor - full as f64 * self.step))
    }

    fn finish(&self, mut acc: [f64; 3], full: usize, b_prev: f64, q_prev: f64, q_t: f64, tenor: f64) -> RiskyKernels {
        let last = tenor - full as f64 * self.step;
        let b_t = (-self.curve.log_discount(tenor)).exp();
        accumulate(&mut acc, last, b_prev, b_t, q_prev, q_t);
        RiskyKernels { pi: acc[0], xi: acc[1], rhat_pi: acc[2], bq: b_t * q_t, tenor }
    }
}

#[inline]
fn accumulate(acc: &mut [f64; 3], dt: f64, b0: f64, b1: f64, q0: f64, q1: f64) {
    acc[0] += 0.5 * (b0 * q0 + b1 * q1) * dt;
    acc[1] += 0.5 * (b0 + b1) * (q0 - q1);
    acc[2] += (b0 - b1) * 0.5 * (q0 + q1);
}

/// Running kernel sums for one survival curve; [`KernelTable::at`] adds the final
/// partial step for any tenor on the grid.
#[derive(Debug, Clone)]
pub struct KernelTable<'g, S> {
    grid: &'g DiscountGrid,
    survival: S,
    q: Vec<f64>,
    cum: Vec<[f64; 3]>,
}

impl<S: SurvivalCurve> KernelTable<'_, S> {
    pub fn at(&self, tenor: f64) -> Result<RiskyKernels> {
        let (full, _) = self.grid.split(tenor)?;
        if full >= self.q.len() {
            return Err(CreditError::Domain(format!("tenor {tenor} beyond kernel table")));
        }
        Ok(self.grid.finish(
            self.cum[full],
            full,
            self.grid.discounts[full],
            self.q[full],
            self.survival.survival(tenor),
            tenor,
        ))
    }
}

/// Trapezium kernels for `(B, Q)` at tenor `T` with the given grid step.
pub fn kernels<S: SurvivalCurve>(
    curve: &RiskfreeCurve,
    survival: &S,
    tenor: f64,
    grid_step: f64,
) -> Result<RiskyKernels> {
    DiscountGrid::new(curve, grid_step, tenor)?.kernels(survival, tenor)
}

/// A fixed-coupon bullet bond.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BondSpec {
    /// Annual coupon rate as a decimal.
    pub coupon: f64,
    /// Years to maturity.
    pub tenor: f64,
    /// Full price per 100 face.
    pub price: f64,
    pub recovery: f64,
    /// Amount outstanding, USD millions.
    pub issue_size: f64,
    pub rating: Option<Rating>,
}

impl BondSpec {
    pub fn new(coupon: f64, tenor: f64, price: f64, recovery: f64) -> Result<Self> {
        let spec = Self { coupon, tenor, price, recovery, issue_size: 1.0, rating: None };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_issue_size(mut self, size: f64) -> Self {
        self.issue_size = size;
        self
    }

    pub fn with_rating(mut self, rating: Rating) -> Self {
        self.rating = Some(rating);
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (v, name) in [
            (self.coupon, "coupon"),
            (self.tenor, "tenor"),
            (self.price, "price"),
            (self.recovery, "recovery"),
            (self.issue_size, "issue size"),
        ] {
            ensure_finite(v, name)?;
        }
        if self.coupon < 0.0 {
            return Err(CreditError::InvalidInput(format!("coupon must be >= 0, got {}", self.coupon)));
        }
        if self.tenor <= 0.0 {
            return Err(CreditError::InvalidInput(format!("tenor must be > 0, got {}", self.tenor)));
        }
        if self.price <= 0.0 {
            return Err(CreditError::InvalidInput(format!("price must be > 0, got {}", self.price)));
        }
        if !(0.0..1.0).contains(&self.recovery) {
            return Err(CreditError::InvalidInput(format!("recovery must be in [0, 1), got {}", self.recovery)));
        }
        if self.issue_size <= 0.0 {
            return Err(CreditError::InvalidInput("issue size must be > 0".into()));
        }
        Ok(())
    }
}

/// How a CDS is quoted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CdsQuote {
    /// Traded (flat-hazard) spread as a decimal.
    Spread(f64),
    /// Upfront per unit notional paid by the protection buyer.
    Upfront(f64),
}

/// A standard running-coupon CDS quote.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdsSpec {
    pub coupon: f64,
    pub tenor: f64,
    pub quote: CdsQuote,
    pub quoting_recovery: f64,
    pub issue_size: f64,
    pub rating: Option<Rating>,
}

impl CdsSpec {
    pub fn new(coupon: f64, tenor: f64, quote: CdsQuote) -> Result<Self> {
        let spec = Self {
            coupon,
            tenor,
            quote,
            quoting_recovery: DEFAULT_QUOTING_RECOVERY,
            issue_size: DEFAULT_ISSUE_SIZE,
            rating: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_rating(mut self, rating: Rating) -> Self {
        self.rating = Some(rating);
        self
    }

    /// Whether the coupon is one of the standard 100bp / 500bp running coupons.
    pub fn has_standard_coupon(&self) -> bool {
        (self.coupon - 0.01).abs() < 1e-12 || (self.coupon - 0.05).abs() < 1e-12
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite(self.coupon, "coupon")?;
        ensure_finite(self.tenor, "tenor")?;
        ensure_finite(self.quoting_recovery, "quoting recovery")?;
        if self.coupon < 0.0 {
            return Err(CreditError::InvalidInput("CDS coupon must be >= 0".into()));
        }
        if self.tenor <= 0.0 {
            return Err(CreditError::InvalidInput(format!("tenor must be > 0, got {}", self.tenor)));
        }
        if !(0.0..1.0).contains(&self.quoting_recovery) {
            return Err(CreditError::InvalidInput("quoting recovery must be in [0, 1)".into()));
        }
        if !(self.issue_size > 0.0) {
            return Err(CreditError::InvalidInput("issue size must be > 0".into()));
        }
        match self.quote {
            CdsQuote::Spread(s) if !(s >= 0.0) || !s.is_finite() => {
                Err(CreditError::Domain(format!("traded spread must be >= 0, got {s}")))
            }
            CdsQuote::Upfront(u) if !u.is_finite() => Err(CreditError::InvalidInput("upfront must be finite".into())),
            _ => Ok(()),
        }
    }
}

/// Either kind of calibration instrument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Instrument {
    Bond(BondSpec),
    Cds(CdsSpec),
}

impl Instrument {
    pub fn tenor(&self) -> f64 {
        match self {
            Instrument::Bond(b) => b.tenor,
            Instrument::Cds(c) => c.tenor,
        }
    }

    pub fn coupon(&self) -> f64 {
        match self {
            Instrument::Bond(b) => b.coupon,
            Instrument::Cds(c) => c.coupon,
        }
    }

    pub fn issue_size(&self) -> f64 {
        match self {
            Instrument::Bond(b) => b.issue_size,
            Instrument::Cds(c) => c.issue_size,
        }
    }

    pub fn rating(&self) -> Option<Rating> {
        match self {
            Instrument::Bond(b) => b.rating,
            Instrument::Cds(c) => c.rating,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Instrument::Bond(b) => b.validate(),
            Instrument::Cds(c) => c.validate(),
        }
    }

    /// The market value expressed against par: `P/100 - 1` for a bond, `-u` for a CDS.
    pub fn market_value(&self, curve: &RiskfreeCurve, grid_step: f64) -> Result<MarketValue> {
        match self {
            Instrument::Bond(b) => Ok(MarketValue::BondPrice(b.price)),
            Instrument::Cds(c) => Ok(MarketValue::CdsUpfront(cds_upfront(c, curve, grid_step)?)),
        }
    }
}

/// A market quote reduced to what the residual needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MarketValue {
    /// Full price per 100.
    BondPrice(f64),
    /// Upfront per unit notional.
    CdsUpfront(f64),
}

impl MarketValue {
    /// `P/100 - 1` for bonds, `-u` for CDS (the CDSW-style price).
    pub fn premium_over_par(self) -> f64 {
        match self {
            MarketValue::BondPrice(p) => p / 100.0 - 1.0,
            MarketValue::CdsUpfront(u) => -u,
        }
    }

    /// Price per 100 (`100(1 - u)` for a CDS).
    pub fn price(self) -> f64 {
        100.0 * (1.0 + self.premium_over_par())
    }

    pub fn is_bond(self) -> bool {
        matches!(self, MarketValue::BondPrice(_))
    }
}

/// Model bond price per 100: `c Π + B(T)Q(T) + ℛ Ξ`.
pub fn bond_model_price(spec: &BondSpec, k: &RiskyKernels) -> f64 {
    model_price(spec.coupon, spec.recovery, k)
}

pub(crate) fn model_price(coupon: f64, recovery: f64, k: &RiskyKernels) -> f64 {
    100.0 * (coupon * k.pi + k.bq + recovery * k.xi)
}

/// Par CDS spread `(1 - ℛ) Ξ / Π`.
pub fn par_cds_spread(k: &RiskyKernels, recovery: f64) -> f64 {
    (1.0 - recovery) * k.xi / k.pi
}

/// Par-adjusted spread of a bond: `c - r̂ - (P/100 - 1)/Π`.
pub fn par_adjusted_spread_bond(spec: &BondSpec, k: &RiskyKernels) -> f64 {
    spec.coupon - k.rhat() - (spec.price / 100.0 - 1.0) / k.pi
}

/// Par-adjusted spread from a market value against a curve with RPV01 `Π`:
/// `c - r̂ - (P/100 - 1)/Π` for bonds, `c + u/Π` for CDS.
pub fn par_adjusted_spread(coupon: f64, market: MarketValue, k: &RiskyKernels) -> f64 {
    let funding = if market.is_bond() { k.rhat() } else { 0.0 };
    coupon - funding - market.premium_over_par() / k.pi
}

/// Par-adjusted spread of a CDS on the model curve: `c + u/Π`, converting a traded
/// spread to an upfront first.
pub fn par_adjusted_spread_cds(q: &CdsSpec, k: &RiskyKernels, curve: &RiskfreeCurve, grid_step: f64) -> Result<f64> {
    let u = cds_upfront(q, curve, grid_step)?;
    Ok(q.coupon + u / k.pi)
}

/// Flat-hazard RPV01 used by the standard quoting convention.
pub fn quoting_rpv01(
    spread: f64,
    quoting_recovery: f64,
    tenor: f64,
    curve: &RiskfreeCurve,
    grid_step: f64,
) -> Result<f64> {
    if !(spread >= 0.0) {
        return Err(CreditError::Domain(format!("traded spread must be >= 0, got {spread}")));
    }
    if !(0.0..1.0).contains(&quoting_recovery) {
        return Err(CreditError::Domain(format!("quoting recovery must be in [0, 1), got {quoting_recovery}")));
    }
    let hazard = FlatHazard::new(spread / (1.0 - quoting_recovery))?;
    Ok(kernels(curve, &hazard, tenor, grid_step)?.pi)
}

/// Upfront `u = (s̃ - c) Π̃` for a spread-quoted CDS, where `Π̃` uses the flat hazard
/// `s̃ / (1 - ℛ_quote)`. Upfront-quoted contracts return their quote.
pub fn cds_traded_spread_to_upfront(q: &CdsSpec, curve: &RiskfreeCurve, grid_step: f64) -> Result<f64> {
    cds_upfront(q, curve, grid_step)
}

fn cds_upfront(q: &CdsSpec, curve: &RiskfreeCurve, grid_step: f64) -> Result<f64> {
    match q.quote {
        CdsQuote::Spread(s) => {
            let pi = quoting_rpv01(s, q.quoting_recovery, q.tenor, curve, grid_step)?;
            Ok((s - q.coupon) * pi)
        }
        CdsQuote::Upfront(u) => Ok(u),
    }
}

/// Traded spread whose flat-hazard conversion reproduces the upfront `u`.
pub fn cds_upfront_to_traded_spread(
    coupon: f64,
    tenor: f64,
    upfront: f64,
    quoting_recovery: f64,
    curve: &RiskfreeCurve,
    grid_step: f64,
) -> Result<f64> {
    let grid = DiscountGrid::new(curve, grid_step, tenor)?;
    let lgd = 1.0 - quoting_recovery;
    let value = |s: f64| -> f64 {
        let pi = grid.kernels(&FlatHazard(s / lgd), tenor).map(|k| k.pi).unwrap_or(f64::NAN);
        (s - coupon) * pi - upfront
    };
    if value(0.0) > 0.0 {
        return Err(CreditError::NoBracket { what: "traded spread from upfront".into(), lo: 0.0, hi: 0.0 });
    }
    let (lo, hi) = expand_upper(value, 0.0, coupon.max(0.01) * 2.0, 2.0, 100.0, "traded spread from upfront")?;
    brent(value, lo, hi, 1e-15, 0.0, "traded spread from upfront")
}

/// Bond price per 100 from a yield, treating the coupon stream as a geometric
/// series with `m` payments a year.
pub fn price_from_yield(coupon: f64, tenor: f64, yield_: f64, m: u32) -> Result<f64> {
    if m == 0 {
        return Err(CreditError::InvalidInput("compounding frequency must be >= 1".into()));
    }
    let mf = f64::from(m);
    if !(yield_ > -mf) {
        return Err(CreditError::Domain(format!("yield must exceed -m, got {yield_}")));
    }
    if !(tenor >= 0.0) {
        return Err(CreditError::Domain(format!("tenor must be >= 0, got {tenor}")));
    }
    let log_v = -mf * tenor * (yield_ / mf).ln_1p();
    let v = log_v.exp();
    // (1 - v)/y, continuous through y = 0 where it equals T
    let annuity = if yield_ == 0.0 { tenor } else { -log_v.exp_m1() / yield_ };
    Ok(100.0 * (coupon * annuity + v))
}

/// Yield reproducing `price` under [`price_from_yield`], to `|ΔP| <= 1e-10`.
pub fn yield_from_price(coupon: f64, tenor: f64, price: f64, m: u32) -> Result<f64> {
    if !(price > 0.0) {
        return Err(CreditError::Domain(format!("price must be > 0, got {price}")));
    }
    if !(tenor > 0.0) {
        return Err(CreditError::Domain(format!("tenor must be > 0, got {tenor}")));
    }
    let mf = f64::from(m.max(1));
    let f = |y: f64| price_from_yield(coupon, tenor, y, m).map(|p| p - price).unwrap_or(f64::NAN);
    let lo = -mf * (1.0 - 1e-9);
    let lo = [-0.5, -0.9 * mf, lo]
        .into_iter()
        .find(|&y| y > -mf && f(y) > 0.0)
        .ok_or_else(|| CreditError::NoBracket { what: "yield".into(), lo: -mf, hi: 1.0 })?;
    let (a, b) = expand_upper(f, lo, 1.0, 2.0, 1e4, "yield")?;
    brent(f, a, b, 1e-16, 1e-10, "yield")
}

/// Cash flows `(time, amount per unit face)` of the bond: coupons of `c/m` counted
/// back from maturity, plus principal.
pub fn bond_cashflows(coupon: f64, tenor: f64, m: u32) -> Vec<(f64, f64)> {
    let mf = f64::from(m.max(1));
    let mut flows = Vec::new();
    let mut k = 0usize;
    loop {
        let t = tenor - k as f64 / mf;
        if t <= 1e-12 {
            break;
        }
        flows.push((t, coupon / mf));
        k += 1;
    }
    flows.reverse();
    if let Some(last) = flows.last_mut() {
        last.1 += 1.0;
    }
    flows
}

/// Z-spread: the constant added to the riskfree zero rates (compounding `m`)
/// that reprices the bond's cash flows to its market price.
pub fn z_spread(spec: &BondSpec, curve: &RiskfreeCurve, m: u32) -> Result<f64> {
    if !(spec.price > 0.0) {
        return Err(CreditError::Domain("price must be > 0".into()));
    }
    let comp = Compounding::Periodic(m.max(1));
    let mf = f64::from(m.max(1));
    let flows: Vec<(f64, f64, f64)> = bond_cashflows(spec.coupon, spec.tenor, m)
        .into_iter()
        .map(|(t, cf)| Ok((t, cf, curve.zero_rate(t, comp)?)))
        .collect::<Result<_>>()?;
    let target = spec.price / 100.0;
    let pv = |s: f64| -> f64 {
        flows.iter().map(|&(t, cf, z)| cf * (-mf * t * ((z + s) / mf).ln_1p()).exp()).sum::<f64>() - target
    };
    let z_min = flows.iter().map(|f| f.2).fold(f64::INFINITY, f64::min);
    let floor = -mf - z_min;
    let lo = [-0.5, 0.5 * (floor - 0.5), floor * (1.0 - 1e-9)]
        .into_iter()
        .find(|&s| s > floor && pv(s) > 0.0)
        .ok_or_else(|| CreditError::NoBracket { what: "z-spread".into(), lo: floor, hi: 1.0 })?;
    let (a, b) = expand_upper(pv, lo, 1.0, 2.0, 1e4, "z-spread")?;
    brent(pv, a, b, 1e-16, 1e-14, "z-spread")
}

/// Par swap rate and the fixed/floating swap PV01s used by the asset-swap spread.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssetSwapInputs {
    pub par_swap_rate: f64,
    pub fixed_pv01: f64,
    pub float_pv01: f64,
}

impl AssetSwapInputs {
    pub fn new(par_swap_rate: f64, fixed_pv01: f64, float_pv01: f64) -> Result<Self> {
        if !(fixed_pv01 > 0.0) || !(float_pv01 > 0.0) {
            return Err(CreditError::InvalidInput("swap PV01s must be > 0".into()));
        }
        ensure_finite(par_swap_rate, "par swap rate")?;
        Ok(Self { par_swap_rate, fixed_pv01, float_pv01 })
    }

    /// Derives the inputs from a swap discount curve: fixed leg paid `m` times a
    /// year back from maturity, floating leg quarterly.
    pub fn from_swap_curve(curve: &RiskfreeCurve, tenor: f64, fixed_frequency: u32) -> Result<Self> {
        let annuity = |freq: u32| -> Result<f64> {
            bond_cashflows(0.0, tenor, freq)
                .iter()
                .try_fold(0.0, |acc, &(t, _)| Ok(acc + curve.discount_factor(t)? / f64::from(freq.max(1))))
        };
        let fixed = annuity(fixed_frequency)?;
        let float = annuity(4)?;
        let rate = (1.0 - curve.discount_factor(tenor)?) / fixed;
        Self::new(rate, fixed, float)
    }
}

/// Asset-swap spread `(1 - P/100 + (c - R) Π°_B) / Π°_F`.
pub fn asset_swap_spread(spec: &BondSpec, inputs: &AssetSwapInputs) -> f64 {
    (1.0 - spec.price / 100.0 + (spec.coupon - inputs.par_swap_rate) * inputs.fixed_pv01) / inputs.float_pv01
}

/// Price residual `ΔP` per 100, model minus market (positive = instrument cheap):
///
/// `ΔP/100 = 1 - P/100 + (c - r̂ - s - extra) Π`, with `r̂` dropped for CDS, where
/// `s` is the model par spread at the instrument's tenor and `extra` an additive
/// spread adjustment (zero except for the sovereign term).
pub fn price_residual(coupon: f64, market: MarketValue, k: &RiskyKernels, recovery: f64, extra_spread: f64) -> f64 {
    let s = par_cds_spread(k, recovery);
    let funding = if market.is_bond() { k.rhat() } else { 0.0 };
    100.0 * (-market.premium_over_par() + (coupon - funding - s - extra_spread) * k.pi)
}

/// Rescales both hazards of `base` by a common factor so that the model reprices
/// `instrument` exactly (`|ΔP| <= 1e-8`). Returns the fitted parameters and the factor.
pub fn exact_fit_to_instrument(
    instrument: &Instrument,
    base: &SurvivalParams,
    curve: &RiskfreeCurve,
    recovery: f64,
    grid_step: f64,
) -> Result<(SurvivalParams, f64)> {
    instrument.validate()?;
    let market = instrument.market_value(curve, grid_step)?;
    let tenor = instrument.tenor();
    let coupon = instrument.coupon();
    let grid = DiscountGrid::new(curve, grid_step, tenor)?;
    let residual = |log_factor: f64| -> f64 {
        let f = log_factor.exp();
        let p = SurvivalParams { a: base.a * f, b: base.b * f, c: base.c };
        grid.kernels(&p, tenor).map(|k| price_residual(coupon, market, &k, recovery, 0.0)).unwrap_or(f64::NAN)
    };
    let r0 = residual(0.0);
    if r0.abs() <= 1e-10 {
        return Ok((*base, 1.0));
    }
    // Walk outward in log-factor until the residual changes sign.
    let dir = if r0 > 0.0 { 1.0 } else { -1.0 };
    let mut prev = 0.0;
    let mut bracket = None;
    let mut step = 0.25;
    while step <= 64.0 {
        let x = dir * step;
        let r = residual(x);
        if r.is_finite() && r.signum() != r0.signum() {
            bracket = Some(if prev < x { (prev, x) } else { (x, prev) });
            break;
        }
        prev = x;
        step *= 2.0;
    }
    let (lo, hi) = bracket.ok_or_else(|| CreditError::NoBracket {
        what: "hazard scale reproducing the instrument price".into(),
        lo: (-64f64).exp(),
        hi: 64f64.exp(),
    })?;
    let x = brent(residual, lo, hi, 1e-15, 1e-9, "exact fit")?;
    let factor = x.exp();
    Ok((base.scaled(factor)?, factor))
}

/// Flat hazard that prices a single instrument exactly.
pub fn exact_fit_flat_hazard(
    instrument: &Instrument,
    curve: &RiskfreeCurve,
    recovery: f64,
    grid_step: f64,
) -> Result<f64> {
    let base = SurvivalParams::new(0.02, 0.02, 0.1)?;
    let (p, _) = exact_fit_to_instrument(instrument, &base, curve, recovery, grid_step)?;
    Ok(p.a)
}

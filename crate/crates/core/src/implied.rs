//! Flat-hazard comparisons between bonds of the same issuer.

use crate::error::{CreditError, Result};
use crate::ratecurve::RiskfreeCurve;
use crate::roots::{brent, expand_upper};
use crate::survival::FlatHazard;
use crate::valuation::{exact_fit_flat_hazard, price_residual, DiscountGrid, Instrument};

/// Flat hazard at which the instruments' price residuals sum to zero, so one
/// looks as rich as the other looks cheap.
pub fn balanced_flat_hazard(
    instruments: &[Instrument],
    riskfree: &RiskfreeCurve,
    recovery: f64,
    grid_step: f64,
) -> Result<f64> {
    if instruments.is_empty() {
        return Err(CreditError::InvalidInput("no instruments".into()));
    }
    let max_t = instruments.iter().map(Instrument::tenor).fold(0.0, f64::max);
    let grid = DiscountGrid::new(riskfree, grid_step, max_t)?;
    let markets = instruments
        .iter()
        .map(|i| {
            i.validate()?;
            i.market_value(riskfree, grid_step)
        })
        .collect::<Result<Vec<_>>>()?;
    let total = |lambda: f64| -> f64 {
        instruments
            .iter()
            .zip(&markets)
            .map(|(inst, &m)| {
                grid.kernels(&FlatHazard(lambda), inst.tenor())
                    .map(|k| price_residual(inst.coupon(), m, &k, recovery, 0.0))
                    .unwrap_or(f64::NAN)
            })
            .sum()
    };
    if total(0.0) <= 0.0 {
        return Err(CreditError::NoBracket { what: "balancing flat hazard".into(), lo: 0.0, hi: 0.0 });
    }
    let (lo, hi) = expand_upper(total, 0.0, 0.05, 2.0, 50.0, "balancing flat hazard")?;
    brent(total, lo, hi, 1e-15, 1e-12, "balancing flat hazard")
}

/// Recovery at which a single flat hazard prices both instruments exactly,
/// searched in `[lo, hi]`. Returns `(recovery, hazard)`.
pub fn implied_recovery(
    first: &Instrument,
    second: &Instrument,
    riskfree: &RiskfreeCurve,
    grid_step: f64,
    bounds: (f64, f64),
) -> Result<(f64, f64)> {
    let gap = |r: f64| -> f64 {
        match (
            exact_fit_flat_hazard(first, riskfree, r, grid_step),
            exact_fit_flat_hazard(second, riskfree, r, grid_step),
        ) {
            (Ok(a), Ok(b)) => a - b,
            _ => f64::NAN,
        }
    };
    let r = brent(gap, bounds.0, bounds.1, 1e-12, 0.0, "implied recovery")?;
    Ok((r, exact_fit_flat_hazard(first, riskfree, r, grid_step)?))
}

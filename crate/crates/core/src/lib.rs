//! Credit spread curves built from parametric survival functions.
//!
//! The crate covers the riskfree discount curve, single-name and rating-grid
//! survival curves, recovery-aware valuation of bonds and CDS, robust curve
//! fitting, and carry / rolldown / relative-value attribution.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod error;
pub mod fitting;
pub mod implied;
pub mod ratecurve;
pub mod roots;
pub mod survival;
pub mod valuation;

pub use error::{CreditError, Result};
pub use fitting::{
    fit_rating_grid, fit_single_name, EmMode, FitConfig, FitInstrument, FitResult, FittedCurve, Loss, WeightMode,
};
pub use ratecurve::{Compounding, RiskfreeCurve};
pub use survival::{
    Anchor, FlatHazard, Rating, RatingGrid, RecoveryModel, RecoverySchedule, SurvivalCurve, SurvivalParams,
};
pub use valuation::{BondSpec, CdsQuote, CdsSpec, Instrument, MarketValue, RiskyKernels};

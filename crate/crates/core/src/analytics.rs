//! Carry, rolldown and relative value over a horizon, with rating transitions.
//!
//! Notation: `c'` is the coupon net of funding (`c - r̂` for a bond, `c` for a CDS),
//! `s̄` the instrument's par-adjusted spread, `ŝ` the model par spread and `Π` the
//! model RPV01, all off the issuer's curve. Returns are per unit notional.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, CreditError, Result};
use crate::ratecurve::RiskfreeCurve;
use crate::survival::{Rating, RatingGrid, RecoveryModel, SurvivalCurve};
use crate::valuation::{self, DiscountGrid, MarketValue};

/// Which of the two equivalent splittings of total return to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decomposition {
    /// Carry at the instrument's spread, RV measured at the end of the horizon.
    Standard,
    /// Carry at the model spread, RV measured at the start of the horizon.
    ModelCarry,
}

/// Everything the return formulas need for one instrument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnInputs {
    pub c_prime: f64,
    pub sbar: f64,
    /// `ŝ(T)`.
    pub shat: f64,
    /// `ŝ(T - Δt)`.
    pub shat_rolled: f64,
    /// `Π(T)`.
    pub pi: f64,
    /// `Π(T - Δt)`.
    pub pi_rolled: f64,
    pub tenor: f64,
    pub horizon: f64,
}

impl ReturnInputs {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        c_prime: f64,
        sbar: f64,
        shat: f64,
        shat_rolled: f64,
        pi: f64,
        pi_rolled: f64,
        tenor: f64,
        horizon: f64,
    ) -> Result<Self> {
        for (v, name) in [
            (c_prime, "c'"),
            (sbar, "par-adjusted spread"),
            (shat, "model spread"),
            (shat_rolled, "rolled model spread"),
            (pi, "RPV01"),
            (pi_rolled, "rolled RPV01"),
        ] {
            ensure_finite(v, name)?;
        }
        check_horizon(tenor, horizon)?;
        if !(pi > 0.0) || !(pi_rolled > 0.0) {
            return Err(CreditError::Domain("RPV01 must be > 0".into()));
        }
        Ok(Self { c_prime, sbar, shat, shat_rolled, pi, pi_rolled, tenor, horizon })
    }

    /// Builds the inputs from a market quote and a model curve.
    ///
    /// `c'` uses `r̂(T)` for bonds. Model spreads are par CDS spreads at `recovery`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_model<S: SurvivalCurve>(
        coupon: f64,
        market: MarketValue,
        survival: &S,
        riskfree: &RiskfreeCurve,
        recovery: f64,
        tenor: f64,
        horizon: f64,
        grid_step: f64,
    ) -> Result<Self> {
        check_horizon(tenor, horizon)?;
        let grid = DiscountGrid::new(riskfree, grid_step, tenor)?;
        let k = grid.kernels(survival, tenor)?;
        let k_rolled = grid.kernels(survival, tenor - horizon)?;
        let c_prime = if market.is_bond() { coupon - k.rhat() } else { coupon };
        Self::new(
            c_prime,
            valuation::par_adjusted_spread(coupon, market, &k),
            valuation::par_cds_spread(&k, recovery),
            valuation::par_cds_spread(&k_rolled, recovery),
            k.pi,
            k_rolled.pi,
            tenor,
            horizon,
        )
    }

    /// Components and total with the RV term scaled by `convergence_fraction`.
    pub fn decompose(&self, variant: Decomposition, convergence_fraction: f64) -> Result<ReturnDecomposition> {
        check_fraction(convergence_fraction)?;
        let carry = match variant {
            Decomposition::Standard => carry(self),
            Decomposition::ModelCarry => model_carry(self),
        };
        let rolldown = rolldown(self);
        let rv = convergence_fraction * relative_value(self, variant);
        Ok(ReturnDecomposition {
            carry,
            rolldown,
            rv,
            total: carry + rolldown + rv,
            horizon: self.horizon,
            variant,
            convergence_fraction,
        })
    }
}

fn check_horizon(tenor: f64, horizon: f64) -> Result<()> {
    ensure_finite(tenor, "tenor")?;
    ensure_finite(horizon, "horizon")?;
    if !(horizon > 0.0) || horizon >= tenor {
        return Err(CreditError::Domain(format!("horizon must lie in (0, T) with T = {tenor}, got {horizon}")));
    }
    Ok(())
}

fn check_fraction(f: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&f) {
        return Err(CreditError::Domain(format!("convergence fraction must lie in [0, 1], got {f}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnDecomposition {
    pub carry: f64,
    pub rolldown: f64,
    pub rv: f64,
    pub total: f64,
    pub horizon: f64,
    pub variant: Decomposition,
    pub convergence_fraction: f64,
}

/// `c'Δt + (s̄ - c')(Π(T) - Π(T-Δt))`.
pub fn carry(x: &ReturnInputs) -> f64 {
    x.c_prime * x.horizon + (x.sbar - x.c_prime) * (x.pi - x.pi_rolled)
}

/// Carry at the model spread: `c'Δt + (ŝ(T) - c')(Π(T) - Π(T-Δt))`.
pub fn model_carry(x: &ReturnInputs) -> f64 {
    x.c_prime * x.horizon + (x.shat - x.c_prime) * (x.pi - x.pi_rolled)
}

/// `(ŝ(T) - ŝ(T-Δt)) Π(T-Δt)`.
pub fn rolldown(x: &ReturnInputs) -> f64 {
    (x.shat - x.shat_rolled) * x.pi_rolled
}

/// `(s̄ - ŝ(T)) Π(T-Δt)` (standard) or `(s̄ - ŝ(T)) Π(T)` (model carry).
pub fn relative_value(x: &ReturnInputs, variant: Decomposition) -> f64 {
    let pi = match variant {
        Decomposition::Standard => x.pi_rolled,
        Decomposition::ModelCarry => x.pi,
    };
    (x.sbar - x.shat) * pi
}

/// `c'Δt + (s̄ - c')Π(T) - (ŝ(T-Δt) - c')Π(T-Δt)`.
pub fn total_return(x: &ReturnInputs) -> f64 {
    x.c_prime * x.horizon + (x.sbar - x.c_prime) * x.pi - (x.shat_rolled - x.c_prime) * x.pi_rolled
}

/// PL from selling protection at traded spread `s̃₀` and unwinding at `s̃₁` after `Δt`,
/// each leg valued with its own flat-hazard quoting RPV01.
#[allow(clippy::too_many_arguments)]
pub fn cds_unwind_return(
    coupon: f64,
    traded_spread_start: f64,
    traded_spread_end: f64,
    tenor: f64,
    horizon: f64,
    quoting_recovery: f64,
    riskfree: &RiskfreeCurve,
    grid_step: f64,
) -> Result<f64> {
    check_horizon(tenor, horizon)?;
    let pi0 = valuation::quoting_rpv01(traded_spread_start, quoting_recovery, tenor, riskfree, grid_step)?;
    let pi1 = valuation::quoting_rpv01(traded_spread_end, quoting_recovery, tenor - horizon, riskfree, grid_step)?;
    Ok(coupon * horizon + (traded_spread_start - coupon) * pi0 - (traded_spread_end - coupon) * pi1)
}

/// Probabilities of each rating (AAA..CCC) and of default over the horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionInputs {
    /// 18 rating states followed by default.
    pub probabilities: Vec<f64>,
    /// `1 - recovery` realised on default.
    pub default_loss: f64,
}

pub const TRANSITION_STATES: usize = Rating::MAX as usize + 1;

impl TransitionInputs {
    pub fn new(probabilities: Vec<f64>, default_loss: f64) -> Result<Self> {
        if probabilities.len() != TRANSITION_STATES {
            return Err(CreditError::InvalidInput(format!(
                "transition row needs {TRANSITION_STATES} entries (AAA..CCC, default), got {}",
                probabilities.len()
            )));
        }
        for (i, &p) in probabilities.iter().enumerate() {
            ensure_finite(p, "transition probability")?;
            if p < 0.0 {
                return Err(CreditError::InvalidInput(format!("transition probability {} is negative", i + 1)));
            }
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(CreditError::InvalidInput(format!("transition probabilities sum to {sum}, not 1")));
        }
        if !(0.0..=1.0).contains(&default_loss) {
            return Err(CreditError::InvalidInput(format!("default loss must lie in [0, 1], got {default_loss}")));
        }
        Ok(Self { probabilities, default_loss })
    }

    /// Stay in `rating` with certainty.
    pub fn stay(rating: Rating, default_loss: f64) -> Result<Self> {
        let mut p = vec![0.0; TRANSITION_STATES];
        p[usize::from(rating.index()) - 1] = 1.0;
        Self::new(p, default_loss)
    }

    pub fn default_probability(&self) -> f64 {
        self.probabilities[TRANSITION_STATES - 1]
    }
}

/// An instrument held over the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub coupon: f64,
    pub market: MarketValue,
    pub tenor: f64,
    pub rating: Rating,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateReturn {
    /// Destination rating; `None` is default.
    pub state: Option<Rating>,
    pub probability: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedReturn {
    pub expected: f64,
    pub states: Vec<StateReturn>,
}

/// Probability-weighted total return over all rating transitions.
///
/// Each surviving state reprices the position wholly on the destination curve at
/// `T - Δt`, with the destination rating's recovery; the unconverged part of the
/// starting basis `(1 - φ)(s̄ - ŝ(T))` is carried into the end spread. Default
/// pays `ℛ - P/100` plus half the horizon's carry. Zero-probability states are skipped.
#[allow(clippy::too_many_arguments)]
pub fn expected_return_with_transitions(
    position: &Position,
    horizon: f64,
    grid: &RatingGrid,
    recovery: &RecoveryModel,
    riskfree: &RiskfreeCurve,
    transitions: &TransitionInputs,
    convergence_fraction: f64,
    grid_step: f64,
) -> Result<ExpectedReturn> {
    check_fraction(convergence_fraction)?;
    check_horizon(position.tenor, horizon)?;
    let t = position.tenor;
    let dgrid = DiscountGrid::new(riskfree, grid_step, t)?;
    let origin = grid.params_for_rating(position.rating);
    let k0 = dgrid.kernels(&origin, t)?;
    let rec0 = recovery.recovery(Some(position.rating), None)?;
    let c_prime = if position.market.is_bond() { position.coupon - k0.rhat() } else { position.coupon };
    let sbar = valuation::par_adjusted_spread(position.coupon, position.market, &k0);
    let basis = sbar - valuation::par_cds_spread(&k0, rec0);
    let start = c_prime * horizon + (sbar - c_prime) * k0.pi;

    let mut states = Vec::new();
    let mut expected = 0.0;
    for (i, &p) in transitions.probabilities.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let (state, total) = if i + 1 == TRANSITION_STATES {
            let pl = (1.0 - transitions.default_loss) - position.market.price() / 100.0 + 0.5 * c_prime * horizon;
            (None, pl)
        } else {
            let rating = Rating::new(i as u8 + 1)?;
            let k = dgrid.kernels(&grid.params_for_rating(rating), t - horizon)?;
            let shat_end = valuation::par_cds_spread(&k, recovery.recovery(Some(rating), None)?);
            let s_end = shat_end + (1.0 - convergence_fraction) * basis;
            (Some(rating), start - (s_end - c_prime) * k.pi)
        };
        expected += p * total;
        states.push(StateReturn { state, probability: p, total });
    }
    Ok(ExpectedReturn { expected, states })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratecurve::Compounding;
    use crate::survival::{Anchor, FlatHazard, RecoverySchedule, SurvivalParams};
    use crate::valuation::{cds_upfront_to_traded_spread, kernels, DEFAULT_GRID_STEP, DEFAULT_QUOTING_RECOVERY};
    use proptest::prelude::*;

    fn inputs(c: f64, sbar: f64, shat: f64, shat_r: f64, pi: f64, pi_r: f64) -> ReturnInputs {
        ReturnInputs::new(c, sbar, shat, shat_r, pi, pi_r, 5.0, 0.25).unwrap()
    }

    #[test]
    fn par_instrument_carry_is_coupon_accrual() {
        let x = inputs(0.05, 0.05, 0.04, 0.038, 4.3, 4.1);
        assert_eq!(carry(&x), 0.05 * 0.25);
    }

    #[test]
    fn flat_closed_form_carry() {
        let pi = |t: f64| (1.0 - (-0.03 * t).exp()) / 0.03;
        let x = ReturnInputs::new(0.05, 0.03, 0.03, 0.03, pi(5.0), pi(4.75), 5.0, 0.25).unwrap();
        let want = 0.0125 + (-0.02) * (pi(5.0) - pi(4.75));
        assert!((carry(&x) - want).abs() < 1e-15);
        // flat curve on-curve: rolldown and RV vanish, total is the carry
        assert_eq!(rolldown(&x), 0.0);
        assert_eq!(relative_value(&x, Decomposition::Standard), 0.0);
        assert!((total_return(&x) - carry(&x)).abs() < 1e-15);
    }

    #[test]
    fn rv_substitution_and_variant_gap() {
        let x = inputs(0.04, 0.025, 0.02, 0.019, 4.2, 4.0);
        assert!((relative_value(&x, Decomposition::Standard) - 0.020).abs() < 1e-15);
        let gap = relative_value(&x, Decomposition::ModelCarry) - relative_value(&x, Decomposition::Standard);
        assert!((gap - 0.005 * 0.2).abs() < 1e-15);
    }

    #[test]
    fn horizon_must_be_inside_tenor() {
        assert!(ReturnInputs::new(0.05, 0.03, 0.03, 0.03, 4.0, 3.9, 5.0, 5.0).is_err());
        assert!(ReturnInputs::new(0.05, 0.03, 0.03, 0.03, 4.0, 3.9, 5.0, 0.0).is_err());
        let x = inputs(0.05, 0.03, 0.03, 0.03, 4.0, 3.9);
        assert!(x.decompose(Decomposition::Standard, 1.2).is_err());
    }

    fn rf() -> RiskfreeCurve {
        RiskfreeCurve::new(vec![(1.0, 0.02), (10.0, 0.035)], Compounding::Continuous).unwrap()
    }

    #[test]
    fn rolldown_sign_follows_curve_slope() {
        let step = DEFAULT_GRID_STEP;
        let mv = MarketValue::BondPrice(100.0);
        let roll = |a, b| {
            let p = SurvivalParams::new(a, b, 0.1).unwrap();
            rolldown(&ReturnInputs::from_model(0.05, mv, &p, &rf(), 0.4, 7.0, 0.5, step).unwrap())
        };
        assert!(roll(0.02, 0.02).abs() < 1e-7);
        assert!(roll(0.01, 0.05) > 0.0);
        assert!(roll(0.05, 0.01) < 0.0);
    }

    #[test]
    fn short_horizon_limit_matches_pi_derivative() {
        // on-curve: total/Δt -> c' + (s̄ - c') B(T)Q(T)
        let curve = RiskfreeCurve::flat(0.03, Compounding::Continuous).unwrap();
        let lam = FlatHazard(0.02);
        let t = 6.0;
        let step = 1e-4;
        let k = kernels(&curve, &lam, t, step).unwrap();
        let sbar = valuation::par_cds_spread(&k, 0.4);
        let coupon = 0.05;
        let dt = 1e-3;
        let k_r = kernels(&curve, &lam, t - dt, step).unwrap();
        let x =
            ReturnInputs::new(coupon, sbar, sbar, valuation::par_cds_spread(&k_r, 0.4), k.pi, k_r.pi, t, dt).unwrap();
        let limit = coupon + (sbar - coupon) * k.bq;
        assert!((total_return(&x) / dt - limit).abs() < 1e-5, "{} vs {limit}", total_return(&x) / dt);
        assert!((carry(&x) / dt - limit).abs() < 1e-5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn decompositions_sum_to_total(
            c in -0.02f64..0.12, sbar in -0.01f64..0.2, shat in 0.0f64..0.2, shat_r in 0.0f64..0.2,
            pi in 0.5f64..15.0, shrink in 0.5f64..0.999, t in 1.0f64..30.0, frac in 0.001f64..0.9,
        ) {
            let x = ReturnInputs::new(c, sbar, shat, shat_r, pi, pi * shrink, t, t * frac).unwrap();
            let total = total_return(&x);
            for v in [Decomposition::Standard, Decomposition::ModelCarry] {
                let d = x.decompose(v, 1.0).unwrap();
                prop_assert!((d.total - total).abs() <= 1e-12 * (1.0 + total.abs()));
            }
        }
    }

    #[test]
    fn cds_unwind_agrees_with_total_return() {
        let step = DEFAULT_GRID_STEP;
        let p = SurvivalParams::new(0.01, 0.04, 0.1).unwrap();
        let (c, t, dt, s0) = (0.01, 5.0, 0.5, 0.0185);
        let q = valuation::CdsSpec::new(c, t, valuation::CdsQuote::Spread(s0)).unwrap();
        let market = MarketValue::CdsUpfront(valuation::cds_traded_spread_to_upfront(&q, &rf(), step).unwrap());
        let x = ReturnInputs::from_model(c, market, &p, &rf(), 0.4, t, dt, step).unwrap();
        // end traded spread equivalent to the model par spread at T - Δt
        let k_r = kernels(&rf(), &p, t - dt, step).unwrap();
        let u1 = (x.shat_rolled - c) * k_r.pi;
        let s1 = cds_upfront_to_traded_spread(c, t - dt, u1, DEFAULT_QUOTING_RECOVERY, &rf(), step).unwrap();
        let via_traded = cds_unwind_return(c, s0, s1, t, dt, DEFAULT_QUOTING_RECOVERY, &rf(), step).unwrap();
        assert!((via_traded - total_return(&x)).abs() < 1e-10, "{via_traded} vs {}", total_return(&x));
    }

    fn grid() -> RatingGrid {
        RatingGrid::new([Anchor { a: 0.002, b: 0.006 }, Anchor { a: 0.008, b: 0.02 }, Anchor { a: 0.04, b: 0.07 }], 0.1)
            .unwrap()
    }

    fn position() -> Position {
        Position { coupon: 0.055, market: MarketValue::BondPrice(98.0), tenor: 7.0, rating: Rating::BBB }
    }

    #[test]
    fn staying_put_reproduces_total_return() {
        let rec = RecoveryModel::Schedule(RecoverySchedule::default());
        let step = DEFAULT_GRID_STEP;
        let pos = position();
        let trans = TransitionInputs::stay(pos.rating, 0.6).unwrap();
        let er = expected_return_with_transitions(&pos, 0.5, &grid(), &rec, &rf(), &trans, 1.0, step).unwrap();
        let p = grid().params_for_rating(pos.rating);
        let r = rec.recovery(Some(pos.rating), None).unwrap();
        let x = ReturnInputs::from_model(pos.coupon, pos.market, &p, &rf(), r, pos.tenor, 0.5, step).unwrap();
        assert!((er.expected - total_return(&x)).abs() < 1e-14);

        // partial convergence matches the scaled standard decomposition
        let er = expected_return_with_transitions(&pos, 0.5, &grid(), &rec, &rf(), &trans, 0.3, step).unwrap();
        let d = x.decompose(Decomposition::Standard, 0.3).unwrap();
        assert!((er.expected - d.total).abs() < 1e-14);
    }

    #[test]
    fn certain_default_loses_price_over_recovery() {
        let rec = RecoveryModel::Fixed(0.4);
        let pos = Position { market: MarketValue::BondPrice(80.0), ..position() };
        let mut p = vec![0.0; TRANSITION_STATES];
        p[TRANSITION_STATES - 1] = 1.0;
        let trans = TransitionInputs::new(p, 0.6).unwrap();
        let er =
            expected_return_with_transitions(&pos, 0.5, &grid(), &rec, &rf(), &trans, 1.0, DEFAULT_GRID_STEP).unwrap();
        let k = kernels(&rf(), &grid().params_for_rating(pos.rating), pos.tenor, DEFAULT_GRID_STEP).unwrap();
        let accrued = 0.5 * (pos.coupon - k.rhat()) * 0.5;
        assert!((er.expected - (-0.40 + accrued)).abs() < 1e-14);
    }

    #[test]
    fn mixture_is_linear() {
        let rec = RecoveryModel::Schedule(RecoverySchedule::default());
        let step = DEFAULT_GRID_STEP;
        let pos = position();
        let run = |p: Vec<f64>| {
            let t = TransitionInputs::new(p, 0.6).unwrap();
            expected_return_with_transitions(&pos, 1.0, &grid(), &rec, &rf(), &t, 1.0, step).unwrap().expected
        };
        let mut up = vec![0.0; TRANSITION_STATES];
        up[7] = 1.0;
        let mut down = vec![0.0; TRANSITION_STATES];
        down[10] = 1.0;
        let mix: Vec<f64> = up.iter().zip(&down).map(|(a, b)| 0.3 * a + 0.7 * b).collect();
        assert!((run(mix) - (0.3 * run(up.clone()) + 0.7 * run(down.clone()))).abs() < 1e-14);
        assert!(run(up) > run(down));
    }

    #[test]
    fn transition_row_validation() {
        assert!(TransitionInputs::new(vec![0.5; 2], 0.6).is_err());
        let mut p = vec![0.0; TRANSITION_STATES];
        p[0] = 0.9;
        assert!(TransitionInputs::new(p.clone(), 0.6).is_err());
        p[1] = 0.1;
        assert!(TransitionInputs::new(p.clone(), 0.6).is_ok());
        p[1] = -0.1;
        p[2] = 0.2;
        assert!(TransitionInputs::new(p, 0.6).is_err());
    }
}

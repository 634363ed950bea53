//! Computations behind the page, in plain Rust.

use credit_curve::implied::{balanced_flat_hazard, implied_recovery};
use credit_curve::valuation::{kernels, par_cds_spread, price_residual, BondSpec, DEFAULT_GRID_STEP};
use credit_curve::{
    Anchor, Compounding, FlatHazard, Instrument, Rating, RatingGrid, RecoverySchedule, Result, RiskfreeCurve,
    SurvivalParams,
};

const POINTS: usize = 120;

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub tenors: Vec<f64>,
    pub survival: Vec<f64>,
    pub hazard: Vec<f64>,
    pub spread_bp: Vec<f64>,
}

pub fn profile(a: f64, b: f64, c: f64, rate: f64, recovery: f64, max_tenor: f64) -> Result<Profile> {
    let p = SurvivalParams::new(a, b, c)?;
    let rf = RiskfreeCurve::flat(rate, Compounding::Continuous)?;
    let mut out = Profile { tenors: vec![], survival: vec![], hazard: vec![], spread_bp: vec![] };
    for i in 1..=POINTS {
        let t = max_tenor * i as f64 / POINTS as f64;
        let k = kernels(&rf, &p, t, DEFAULT_GRID_STEP)?;
        out.tenors.push(t);
        out.survival.push(p.survival_probability(t)?);
        out.hazard.push(p.forward_hazard(t)?);
        out.spread_bp.push(par_cds_spread(&k, recovery) * 1e4);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BondQuote {
    pub coupon: f64,
    pub tenor: f64,
    pub price: f64,
}

impl BondQuote {
    fn instrument(self) -> Result<Instrument> {
        Ok(Instrument::Bond(BondSpec::new(self.coupon, self.tenor, self.price, 0.0)?))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub recovery: Vec<f64>,
    pub hazard: Vec<f64>,
    pub residual_first: Vec<f64>,
    pub residual_second: Vec<f64>,
    pub crossover: Option<(f64, f64)>,
}

/// Balancing flat hazard and each bond's price residual for recoveries 0 to 90%.
pub fn sweep(first: BondQuote, second: BondQuote, rate: f64) -> Result<Sweep> {
    let rf = RiskfreeCurve::flat(rate, Compounding::Continuous)?;
    let bonds = [first.instrument()?, second.instrument()?];
    let mut out = Sweep {
        recovery: vec![],
        hazard: vec![],
        residual_first: vec![],
        residual_second: vec![],
        crossover: implied_recovery(&bonds[0], &bonds[1], &rf, DEFAULT_GRID_STEP, (0.0, 0.95)).ok(),
    };
    for i in 0..=90 {
        let rec = f64::from(i) / 100.0;
        let lam = balanced_flat_hazard(&bonds, &rf, rec, DEFAULT_GRID_STEP)?;
        let res = |b: &Instrument| -> Result<f64> {
            let k = kernels(&rf, &FlatHazard(lam), b.tenor(), DEFAULT_GRID_STEP)?;
            Ok(price_residual(b.coupon(), b.market_value(&rf, DEFAULT_GRID_STEP)?, &k, rec, 0.0))
        };
        out.recovery.push(rec);
        out.hazard.push(lam);
        out.residual_first.push(res(&bonds[0])?);
        out.residual_second.push(res(&bonds[1])?);
    }
    Ok(out)
}

pub fn grid_spreads(anchors: [(f64, f64); 3], c: f64, rate: f64, tenors: &[f64], floor: f64) -> Result<Vec<f64>> {
    let grid = RatingGrid::new(anchors.map(|(a, b)| Anchor { a, b }), c)?;
    let rf = RiskfreeCurve::flat(rate, Compounding::Continuous)?;
    let sched = RecoverySchedule::new(floor)?;
    let mut out = Vec::with_capacity(18 * tenors.len());
    for r in Rating::all() {
        let p = grid.params_for_rating(r);
        for &t in tenors {
            let k = kernels(&rf, &p, t, DEFAULT_GRID_STEP)?;
            out.push(par_cds_spread(&k, sched.recovery_for_rating(r)) * 1e4);
        }
    }
    Ok(out)
}

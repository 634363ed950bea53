//! Riskfree discounting curve.
//!
//! Pillars are quoted as zero rates at a stated compounding. Internally the curve
//! stores the log-discount `-ln B(T)` at each pillar and interpolates it linearly
//! in `T`, which makes instantaneous forwards piecewise constant. Beyond the last
//! pillar (and before the first) the zero rate is held flat.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, CreditError, Result};

/// How a zero rate converts into a discount factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Compounding {
    /// `B(T) = exp(-zT)`.
    Continuous,
    /// `B(T) = (1 + z/m)^(-mT)`.
    Periodic(u32),
}

impl Compounding {
    /// `-ln B(T)` for zero rate `z` at tenor `t`.
    pub fn log_discount(self, z: f64, t: f64) -> f64 {
        match self {
            Compounding::Continuous => z * t,
            Compounding::Periodic(m) => {
                let m = f64::from(m);
                m * t * (z / m).ln_1p()
            }
        }
    }

    /// Zero rate reproducing a log-discount `y = -ln B(T)` at tenor `t > 0`.
    pub fn rate_from_log_discount(self, y: f64, t: f64) -> f64 {
        match self {
            Compounding::Continuous => y / t,
            Compounding::Periodic(m) => {
                let m = f64::from(m);
                m * (y / (m * t)).exp_m1()
            }
        }
    }

    fn validate(self) -> Result<()> {
        match self {
            Compounding::Periodic(0) => {
                Err(CreditError::InvalidInput("compounding frequency must be at least 1 per year".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Riskfree discount curve `B(T)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RiskfreeCurveRaw", into = "RiskfreeCurveRaw")]
pub struct RiskfreeCurve {
    tenors: Vec<f64>,
    zero_rates: Vec<f64>,
    compounding: Compounding,
    /// `-ln B` at each pillar.
    log_discounts: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RiskfreeCurveRaw {
    tenors: Vec<f64>,
    zero_rates: Vec<f64>,
    compounding: Compounding,
}

impl TryFrom<RiskfreeCurveRaw> for RiskfreeCurve {
    type Error = CreditError;
    fn try_from(raw: RiskfreeCurveRaw) -> Result<Self> {
        Self::new(raw.tenors.into_iter().zip(raw.zero_rates).collect(), raw.compounding)
    }
}

impl From<RiskfreeCurve> for RiskfreeCurveRaw {
    fn from(c: RiskfreeCurve) -> Self {
        Self { tenors: c.tenors, zero_rates: c.zero_rates, compounding: c.compounding }
    }
}

impl RiskfreeCurve {
    /// Builds a curve from `(tenor_years, zero_rate)` pillars.
    ///
    /// Tenors must be positive and strictly increasing; at least one pillar is required.
    pub fn new(pillars: Vec<(f64, f64)>, compounding: Compounding) -> Result<Self> {
        compounding.validate()?;
        if pillars.is_empty() {
            return Err(CreditError::InvalidInput("riskfree curve needs at least one pillar".into()));
        }
        let mut tenors = Vec::with_capacity(pillars.len());
        let mut zero_rates = Vec::with_capacity(pillars.len());
        let mut log_discounts = Vec::with_capacity(pillars.len());
        for (i, &(t, z)) in pillars.iter().enumerate() {
            ensure_finite(t, "pillar tenor")?;
            ensure_finite(z, "pillar zero rate")?;
            if t <= 0.0 {
                return Err(CreditError::InvalidInput(format!("pillar tenors must be > 0, got tenors[{i}]={t}")));
            }
            if let Some(&prev) = tenors.last() {
                if t <= prev {
                    return Err(CreditError::InvalidInput(format!(
                        "pillar tenors must be strictly increasing, got {prev} then {t}"
                    )));
                }
            }
            if let Compounding::Periodic(m) = compounding {
                if z <= -f64::from(m) {
                    return Err(CreditError::InvalidInput(format!("zero rate {z} is below -m")));
                }
            }
            tenors.push(t);
            zero_rates.push(z);
            log_discounts.push(compounding.log_discount(z, t));
        }
        Ok(Self { tenors, zero_rates, compounding, log_discounts })
    }

    /// Single-pillar curve with a flat zero rate.
    pub fn flat(rate: f64, compounding: Compounding) -> Result<Self> {
        Self::new(vec![(1.0, rate)], compounding)
    }

    pub fn tenors(&self) -> &[f64] {
        &self.tenors
    }

    pub fn zero_rates(&self) -> &[f64] {
        &self.zero_rates
    }

    pub fn compounding(&self) -> Compounding {
        self.compounding
    }

    /// `-ln B(t)`, assuming `t >= 0`.
    pub fn log_discount(&self, t: f64) -> f64 {
        let n = self.tenors.len();
        let first = self.tenors[0];
        let last = self.tenors[n - 1];
        if t <= first {
            return self.log_discounts[0] * (t / first);
        }
        if t >= last {
            return self.log_discounts[n - 1] * (t / last);
        }
        // first < t < last, so there is an interior segment
        let i = self.tenors.partition_point(|&x| x <= t);
        let (t0, t1) = (self.tenors[i - 1], self.tenors[i]);
        let (y0, y1) = (self.log_discounts[i - 1], self.log_discounts[i]);
        y0 + (y1 - y0) * (t - t0) / (t1 - t0)
    }

    /// Discount factor `B(T)`.
    pub fn discount_factor(&self, t: f64) -> Result<f64> {
        check_tenor(t)?;
        Ok((-self.log_discount(t)).exp())
    }

    /// Instantaneous forward `f(t) = -B'(t)/B(t)`. Right-continuous at pillars.
    pub fn instantaneous_forward(&self, t: f64) -> Result<f64> {
        check_tenor(t)?;
        let n = self.tenors.len();
        let first = self.tenors[0];
        let last = self.tenors[n - 1];
        if t < first {
            return Ok(self.log_discounts[0] / first);
        }
        if t >= last {
            return Ok(self.log_discounts[n - 1] / last);
        }
        let i = self.tenors.partition_point(|&x| x <= t);
        let (t0, t1) = (self.tenors[i - 1], self.tenors[i]);
        Ok((self.log_discounts[i] - self.log_discounts[i - 1]) / (t1 - t0))
    }

    /// Zero rate `z` with `B(T) = (1 + z/m)^(-mT)` (or `exp(-zT)` for continuous).
    pub fn zero_rate(&self, t: f64, compounding: Compounding) -> Result<f64> {
        compounding.validate()?;
        if !(t > 0.0) || !t.is_finite() {
            return Err(CreditError::Domain(format!("zero rate needs T > 0, got {t}")));
        }
        Ok(compounding.rate_from_log_discount(self.log_discount(t), t))
    }
}

fn check_tenor(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        return Err(CreditError::Domain(format!("tenor must be >= 0, got {t}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn two_pillar() -> RiskfreeCurve {
        RiskfreeCurve::new(vec![(2.0, 0.01), (10.0, 0.03)], Compounding::Periodic(2)).unwrap()
    }

    #[test]
    fn zero_curve_discounts_to_one() {
        let c = RiskfreeCurve::flat(0.0, Compounding::Periodic(2)).unwrap();
        assert_eq!(c.discount_factor(10.0).unwrap(), 1.0);
        assert_eq!(c.instantaneous_forward(3.0).unwrap(), 0.0);
    }

    #[test]
    fn flat_continuous_closed_form() {
        let c = RiskfreeCurve::flat(0.02, Compounding::Continuous).unwrap();
        assert_relative_eq!(c.discount_factor(5.0).unwrap(), (-0.1f64).exp(), max_relative = 1e-15);
        assert_relative_eq!(c.discount_factor(5.0).unwrap(), 0.904837, epsilon = 1e-6);
        for t in [0.0, 0.5, 7.0, 40.0] {
            assert_relative_eq!(c.instantaneous_forward(t).unwrap(), 0.02, max_relative = 1e-14);
        }
    }

    #[test]
    fn discount_at_zero_is_one() {
        assert_eq!(two_pillar().discount_factor(0.0).unwrap(), 1.0);
    }

    #[test]
    fn negative_tenor_rejected() {
        let c = two_pillar();
        assert!(matches!(c.discount_factor(-1.0), Err(CreditError::Domain(_))));
        assert!(matches!(c.instantaneous_forward(-0.1), Err(CreditError::Domain(_))));
        assert!(matches!(c.zero_rate(0.0, Compounding::Periodic(2)), Err(CreditError::Domain(_))));
    }

    #[test]
    fn invalid_pillars_rejected() {
        assert!(RiskfreeCurve::new(vec![], Compounding::Continuous).is_err());
        assert!(RiskfreeCurve::new(vec![(1.0, 0.01), (1.0, 0.02)], Compounding::Continuous).is_err());
        assert!(RiskfreeCurve::new(vec![(0.0, 0.01)], Compounding::Continuous).is_err());
        assert!(RiskfreeCurve::new(vec![(1.0, 0.01)], Compounding::Periodic(0)).is_err());
    }

    #[test]
    fn zero_rate_inverts_definition() {
        // B(10) = exp(-0.3) => z = 2(e^{0.015} - 1)
        let c = RiskfreeCurve::flat(0.03, Compounding::Continuous).unwrap();
        let z = c.zero_rate(10.0, Compounding::Periodic(2)).unwrap();
        assert_relative_eq!(z, 2.0 * (0.015f64.exp() - 1.0), max_relative = 1e-14);
        assert_relative_eq!(z, 0.030226, epsilon = 1e-6);

        let unit = RiskfreeCurve::flat(0.0, Compounding::Continuous).unwrap();
        assert_eq!(unit.zero_rate(5.0, Compounding::Periodic(2)).unwrap(), 0.0);
    }

    #[test]
    fn forward_matches_finite_difference_between_pillars() {
        let c = two_pillar();
        let t = 5.3;
        let h = 1e-5;
        let fd = (c.log_discount(t + h) - c.log_discount(t - h)) / (2.0 * h);
        assert_relative_eq!(c.instantaneous_forward(t).unwrap(), fd, max_relative = 1e-8);
    }

    #[test]
    fn flat_extrapolation_of_zero_rate() {
        let c = two_pillar();
        let z_short = c.zero_rate(0.5, Compounding::Periodic(2)).unwrap();
        let z_long = c.zero_rate(30.0, Compounding::Periodic(2)).unwrap();
        assert_relative_eq!(z_short, 0.01, max_relative = 1e-12);
        assert_relative_eq!(z_long, 0.03, max_relative = 1e-12);
    }
}

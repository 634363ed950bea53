//! Parametric survival curves and the rating scale.
//!
//! The single-name curve is
//!
//! ```text
//! Q(T) = (1 + cT)^((b - a)/c) · exp(-bT),    h(T) = (a + bcT) / (1 + cT)
//! ```
//!
//! where `h` is the forward hazard: it starts at `a`, tends to `b` and moves
//! monotonically in between at a speed set by `c`. A rating grid holds `(a, b)`
//! at AA, BBB and B and interpolates their logarithms linearly in the rating
//! index, with a shared `c`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, CreditError, Result};

/// Default bounds on the shape parameter when fitting.
pub const SHAPE_BOUNDS: (f64, f64) = (0.05, 0.2);

/// Anything that can produce survival probabilities `Q(t)`.
pub trait SurvivalCurve {
    /// `Q(t)` for `t >= 0`; callers guarantee the domain.
    fn survival(&self, t: f64) -> f64;
}

/// The `(a, b, c)` triple of the single-name hazard curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurvivalParams {
    /// Short-end forward hazard.
    pub a: f64,
    /// Long-end forward hazard.
    pub b: f64,
    /// Shape (time-scaling) parameter.
    pub c: f64,
}

impl SurvivalParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        for (v, name) in [(a, "a"), (b, "b"), (c, "c")] {
            ensure_finite(v, name)?;
            if v <= 0.0 {
                return Err(CreditError::InvalidInput(format!("survival parameter {name} must be > 0, got {v}")));
            }
        }
        Ok(Self { a, b, c })
    }

    /// Survival probability `Q(T)`.
    pub fn survival_probability(&self, t: f64) -> Result<f64> {
        check_tenor(t)?;
        Ok(self.survival(t))
    }

    /// Forward hazard `-d ln Q / dT`.
    pub fn forward_hazard(&self, t: f64) -> Result<f64> {
        check_tenor(t)?;
        Ok(self.hazard(t))
    }

    fn hazard(&self, t: f64) -> f64 {
        (self.a + self.b * self.c * t) / (1.0 + self.c * t)
    }

    /// The same curve with both hazard levels multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.a * factor, self.b * factor, self.c)
    }
}

impl SurvivalCurve for SurvivalParams {
    fn survival(&self, t: f64) -> f64 {
        let log_q = (self.b - self.a) / self.c * (self.c * t).ln_1p() - self.b * t;
        log_q.exp()
    }
}

/// Constant hazard `Q(T) = exp(-λT)`, `λ >= 0`. Used for the quoting convention
/// on CDS and for flat-hazard diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatHazard(pub f64);

impl FlatHazard {
    pub fn new(lambda: f64) -> Result<Self> {
        ensure_finite(lambda, "hazard rate")?;
        if lambda < 0.0 {
            return Err(CreditError::Domain(format!("hazard rate must be >= 0, got {lambda}")));
        }
        Ok(Self(lambda))
    }
}

impl SurvivalCurve for FlatHazard {
    fn survival(&self, t: f64) -> f64 {
        (-self.0 * t).exp()
    }
}

fn check_tenor(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        return Err(CreditError::Domain(format!("tenor must be >= 0, got {t}")));
    }
    Ok(())
}

const SYMBOLS: [&str; 18] = [
    "AAA", "AA+", "AA", "AA-", "A+", "A", "A-", "BBB+", "BBB", "BBB-", "BB+", "BB", "BB-", "B+", "B", "B-", "CCC+",
    "CCC",
];

/// Position on the linear rating scale, AAA = 1 through CCC = 18.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Rating(u8);

impl Rating {
    pub const AA: Rating = Rating(3);
    pub const BBB: Rating = Rating(9);
    pub const B: Rating = Rating(15);
    pub const MIN: u8 = 1;
    pub const MAX: u8 = 18;

    pub fn new(index: u8) -> Result<Self> {
        if (Self::MIN..=Self::MAX).contains(&index) {
            Ok(Self(index))
        } else {
            Err(CreditError::InvalidInput(format!("rating index must be in 1..=18, got {index}")))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn symbol(self) -> &'static str {
        SYMBOLS[usize::from(self.0 - 1)]
    }

    pub fn all() -> impl Iterator<Item = Rating> {
        (Self::MIN..=Self::MAX).map(Rating)
    }

    /// The scale as a printable list, used in parse errors.
    pub fn scale_description() -> String {
        SYMBOLS.iter().enumerate().map(|(i, s)| format!("{s}={}", i + 1)).collect::<Vec<_>>().join(", ")
    }
}

impl TryFrom<u8> for Rating {
    type Error = CreditError;
    fn try_from(v: u8) -> Result<Self> {
        Rating::new(v)
    }
}

impl From<Rating> for u8 {
    fn from(r: Rating) -> u8 {
        r.0
    }
}

impl FromStr for Rating {
    type Err = CreditError;
    fn from_str(s: &str) -> Result<Self> {
        let sym = s.trim().to_ascii_uppercase();
        SYMBOLS.iter().position(|&x| x == sym).map(|i| Rating(i as u8 + 1)).ok_or_else(|| {
            CreditError::InvalidInput(format!("unknown rating '{s}'; expected one of {}", Rating::scale_description()))
        })
    }
}

impl fmt::Display for Rating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Short- and long-end hazards at one anchor rating.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub a: f64,
    pub b: f64,
}

/// Seven-parameter multi-rating curve family: `(a, b)` at AA, BBB and B plus a shared `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RatingGridRaw", into = "RatingGridRaw")]
pub struct RatingGrid {
    anchors: [Anchor; 3],
    c: f64,
}

#[derive(Serialize, Deserialize)]
struct RatingGridRaw {
    aa: Anchor,
    bbb: Anchor,
    b: Anchor,
    c: f64,
}

impl TryFrom<RatingGridRaw> for RatingGrid {
    type Error = CreditError;
    fn try_from(raw: RatingGridRaw) -> Result<Self> {
        RatingGrid::new([raw.aa, raw.bbb, raw.b], raw.c)
    }
}

impl From<RatingGrid> for RatingGridRaw {
    fn from(g: RatingGrid) -> Self {
        Self { aa: g.anchors[0], bbb: g.anchors[1], b: g.anchors[2], c: g.c }
    }
}

const ANCHOR_INDEX: [f64; 3] = [3.0, 9.0, 15.0];

impl RatingGrid {
    /// Anchors in the order AA, BBB, B. Both `a` and `b` must be positive and
    /// non-decreasing down the scale, and `c` must lie in [`SHAPE_BOUNDS`].
    pub fn new(anchors: [Anchor; 3], c: f64) -> Result<Self> {
        ensure_finite(c, "c")?;
        let (lo, hi) = SHAPE_BOUNDS;
        if !(lo..=hi).contains(&c) {
            return Err(CreditError::InvalidInput(format!("shape c must lie in [{lo}, {hi}], got {c}")));
        }
        for (anchor, name) in anchors.iter().zip(["AA", "BBB", "B"]) {
            ensure_finite(anchor.a, "anchor a")?;
            ensure_finite(anchor.b, "anchor b")?;
            if anchor.a <= 0.0 || anchor.b <= 0.0 {
                return Err(CreditError::InvalidInput(format!("{name} anchor hazards must be > 0")));
            }
        }
        for w in anchors.windows(2) {
            if w[1].a < w[0].a || w[1].b < w[0].b {
                return Err(CreditError::InvalidInput(
                    "anchor hazards must be non-decreasing from AA to BBB to B".into(),
                ));
            }
        }
        Ok(Self { anchors, c })
    }

    pub fn anchors(&self) -> &[Anchor; 3] {
        &self.anchors
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Curve parameters for a rating, by log-linear interpolation between anchors
    /// and log-linear extrapolation of the end segments.
    pub fn params_for_rating(&self, rating: Rating) -> SurvivalParams {
        let r = f64::from(rating.index());
        let seg = if r <= ANCHOR_INDEX[1] { 0 } else { 1 };
        let (lo, hi) = (&self.anchors[seg], &self.anchors[seg + 1]);
        let w = (r - ANCHOR_INDEX[seg]) / (ANCHOR_INDEX[seg + 1] - ANCHOR_INDEX[seg]);
        let interp = |x0: f64, x1: f64| {
            if w == 0.0 {
                x0
            } else if w == 1.0 {
                x1
            } else {
                (x0.ln() + w * (x1.ln() - x0.ln())).exp()
            }
        };
        SurvivalParams { a: interp(lo.a, hi.a), b: interp(lo.b, hi.b), c: self.c }
    }

    /// Checks that forward hazards are ordered by rating at every tenor in `tenors`.
    pub fn check_no_crossing(&self, tenors: &[f64]) -> Result<()> {
        for &t in tenors {
            check_tenor(t)?;
            let mut prev: Option<(Rating, f64)> = None;
            for r in Rating::all() {
                let h = self.params_for_rating(r).hazard(t);
                if let Some((pr, ph)) = prev {
                    if h < ph {
                        return Err(CreditError::InvalidInput(format!(
                            "curves cross at T={t}: {pr} hazard {ph} exceeds {r} hazard {h}"
                        )));
                    }
                }
                prev = Some((r, h));
            }
        }
        Ok(())
    }
}

/// Recovery that declines linearly down the rating scale: `max(0.70 - 0.03 r, floor)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoverySchedule {
    pub floor: f64,
}

impl Default for RecoverySchedule {
    fn default() -> Self {
        Self { floor: 0.05 }
    }
}

impl RecoverySchedule {
    pub fn new(floor: f64) -> Result<Self> {
        ensure_finite(floor, "recovery floor")?;
        if !(0.0..1.0).contains(&floor) {
            return Err(CreditError::InvalidInput(format!("recovery floor must be in [0, 1), got {floor}")));
        }
        Ok(Self { floor })
    }

    pub fn recovery_for_rating(&self, rating: Rating) -> f64 {
        // Integer percent arithmetic keeps the scale's round values exact.
        let pct = 70 - 3 * i32::from(rating.index());
        (f64::from(pct) / 100.0).max(self.floor)
    }
}

/// How recovery is assigned to an instrument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RecoveryModel {
    Fixed(f64),
    Schedule(RecoverySchedule),
}

impl RecoveryModel {
    /// Recovery for an instrument of the given rating; `override_value` wins when present.
    pub fn recovery(&self, rating: Option<Rating>, override_value: Option<f64>) -> Result<f64> {
        if let Some(v) = override_value {
            return Ok(v);
        }
        match (self, rating) {
            (RecoveryModel::Fixed(v), _) => Ok(*v),
            (RecoveryModel::Schedule(s), Some(r)) => Ok(s.recovery_for_rating(r)),
            (RecoveryModel::Schedule(_), None) => {
                Err(CreditError::InvalidInput("rating-linked recovery requires a rating on every instrument".into()))
            }
        }
    }
}

use rand::Rng;

use super::single::{check_em, fit_problem};
use super::{
    decode_alpha, multistart, EmMode, FitConfig, FitDiagnostics, FitInstrument, FitResult, FittedCurve, Problem, Shape,
};
use crate::error::{CreditError, Result};
use crate::ratecurve::RiskfreeCurve;
use crate::survival::{Anchor, Rating, RatingGrid, RecoveryModel, SHAPE_BOUNDS};

const ANCHORS: [f64; 3] = [3.0, 9.0, 15.0];

/// Which anchors the data reaches.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Coverage {
    Full,
    /// No rating below BBB: the B anchor continues the AA→BBB slope.
    Upper,
    /// No rating above BBB: the AA anchor continues the BBB→B slope.
    Lower,
}

/// Fits the seven-parameter rating grid to a multi-issuer universe.
///
/// Anchors are parametrised as log-hazards at the first anchor plus squared
/// log-increments, so hazards are non-decreasing down the scale and the
/// fitted curves never cross.
pub fn fit_rating_grid(
    instruments: &[FitInstrument],
    riskfree: &RiskfreeCurve,
    recovery: &RecoveryModel,
    config: &FitConfig,
) -> Result<FitResult> {
    let (lo, hi) = SHAPE_BOUNDS;
    let within = |c: f64| (lo..=hi).contains(&c);
    if !within(config.c_bounds.0) || !within(config.c_bounds.1) || config.fix_c.is_some_and(|c| !within(c)) {
        return Err(CreditError::InvalidInput(format!("rating-grid shape c must lie in [{lo}, {hi}]")));
    }
    for (i, fi) in instruments.iter().enumerate() {
        if fi.instrument.rating().is_none() {
            return Err(CreditError::InvalidInput(format!("instrument {} has no rating", i + 1)));
        }
    }
    let problem = Problem::new(instruments, riskfree, recovery, config)?;
    check_em(&problem, config)?;
    let ratings = problem.distinct_ratings();
    if ratings.len() == 1 {
        return single_rating(&problem, ratings[0], config);
    }
    let coverage = if ratings[ratings.len() - 1] <= Rating::BBB {
        Coverage::Upper
    } else if ratings[0] >= Rating::BBB {
        Coverage::Lower
    } else {
        Coverage::Full
    };

    let mut notes = Vec::new();
    match coverage {
        Coverage::Upper => notes.push("no ratings below BBB: B anchor extrapolated from the AA-BBB slope".to_string()),
        Coverage::Lower => notes.push("no ratings above BBB: AA anchor extrapolated from the BBB-B slope".to_string()),
        Coverage::Full => {}
    }
    let underdetermined = problem.distinct_tenors() < 2;
    if underdetermined {
        notes.push("all maturities coincide: short and long hazards are not separately identified".to_string());
    }

    let shape = Shape::from_config(config);
    let fit_alpha = config.em == EmMode::Fit;
    let n_hazard = if coverage == Coverage::Full { 6 } else { 4 };
    let decode = |x: &[f64]| -> (Option<RatingGrid>, Option<f64>) {
        let c = shape.decode(if shape.is_free() { Some(x[n_hazard]) } else { None });
        let alpha = decode_alpha(config.em, if fit_alpha { x.last().copied() } else { None });
        let first = Anchor { a: x[0].exp(), b: x[1].exp() };
        let step = |from: Anchor, va: f64, vb: f64, sign: f64| Anchor {
            a: from.a * (sign * va * va).exp(),
            b: from.b * (sign * vb * vb).exp(),
        };
        let anchors = match coverage {
            Coverage::Full => {
                let bbb = step(first, x[2], x[3], 1.0);
                [first, bbb, step(bbb, x[4], x[5], 1.0)]
            }
            Coverage::Upper => {
                let bbb = step(first, x[2], x[3], 1.0);
                [first, bbb, step(bbb, x[2], x[3], 1.0)]
            }
            Coverage::Lower => [step(first, x[2], x[3], -1.0), first, step(first, x[2], x[3], 1.0)],
        };
        (RatingGrid::new(anchors, c).ok(), alpha)
    };
    let objective = |x: &[f64]| -> f64 {
        match decode(x) {
            (Some(g), alpha) => {
                let r = problem.residuals(&FittedCurve::Grid(g), alpha.unwrap_or(0.0));
                problem.objective_of(&r)
            }
            (None, _) => f64::INFINITY,
        }
    };

    // start from the prior slope through the median hazard level
    let median_rating = f64::from(ratings[ratings.len() / 2].index());
    let first_anchor = if coverage == Coverage::Lower { ANCHORS[1] } else { ANCHORS[0] };
    let level = problem.hazard_guess().ln() + config.prior_notch_slope * (first_anchor - median_rating);
    let v = (6.0 * config.prior_notch_slope).max(1e-4).sqrt();
    let mut x0 = vec![level, level];
    x0.extend(std::iter::repeat_n(v, n_hazard - 2));
    if let Some(xc) = shape.encode(shape.decode(None)) {
        x0.push(xc);
    }
    if fit_alpha {
        x0.push(0.0);
    }

    let (out, best_start, evaluations) = multistart(objective, x0, config, |rng, first| {
        let mut x = first.to_vec();
        x[0] += rng.random_range(-1.0..1.0);
        x[1] += rng.random_range(-1.0..1.0);
        for v in x.iter_mut().take(n_hazard).skip(2) {
            *v *= rng.random_range(0.3..1.5);
        }
        for v in x.iter_mut().skip(n_hazard) {
            *v = rng.random_range(-2.0..2.0);
        }
        x
    });

    let (grid, alpha) = decode(&out.x);
    let grid =
        grid.ok_or_else(|| CreditError::NoConvergence { what: "rating-grid fit".into(), iterations: out.iterations })?;
    let tenors: Vec<f64> = (0..=60).map(|i| f64::from(i) * 0.5).collect();
    grid.check_no_crossing(&tenors)?;
    let curve = FittedCurve::Grid(grid);
    let residuals = problem.residuals(&curve, alpha.unwrap_or(0.0));
    let objective = problem.objective_of(&residuals);
    Ok(FitResult {
        curve,
        alpha,
        residuals,
        objective,
        diagnostics: FitDiagnostics {
            iterations: out.iterations,
            evaluations,
            converged: out.converged,
            underdetermined,
            starts: config.multistart_count,
            best_start,
            descent: out.descent,
            notes,
        },
    })
}

/// One rating only: fit that rating's curve and hang the anchors off it with the prior slope.
fn single_rating(problem: &Problem, rating: Rating, config: &FitConfig) -> Result<FitResult> {
    let mut fit = fit_problem(problem, config)?;
    let r = f64::from(rating.index());
    let p = fit.params;
    let anchors = ANCHORS.map(|k| {
        let m = (config.prior_notch_slope * (k - r)).exp();
        Anchor { a: p.a * m, b: p.b * m }
    });
    let grid = RatingGrid::new(anchors, p.c)?;
    fit.diagnostics.underdetermined = true;
    fit.diagnostics.notes.push(format!(
        "single rating {rating}: anchors placed with prior slope {:.4} per notch",
        config.prior_notch_slope
    ));
    let curve = FittedCurve::Grid(grid);
    let residuals = problem.residuals(&curve, fit.alpha.unwrap_or(0.0));
    let objective = problem.objective_of(&residuals);
    Ok(FitResult { curve, alpha: fit.alpha, residuals, objective, diagnostics: fit.diagnostics })
}

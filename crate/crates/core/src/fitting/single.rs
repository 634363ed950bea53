use rand::Rng;

use super::{
    decode_alpha, multistart, EmMode, FitConfig, FitDiagnostics, FitInstrument, FitResult, FittedCurve, Problem, Shape,
};
use crate::error::{CreditError, Result};
use crate::ratecurve::RiskfreeCurve;
use crate::survival::{RecoveryModel, SurvivalParams};

pub(crate) struct SingleFit {
    pub params: SurvivalParams,
    pub alpha: Option<f64>,
    pub residuals: Vec<f64>,
    pub objective: f64,
    pub diagnostics: FitDiagnostics,
}

/// Fits one curve `(a, b, c)` to all instruments of an issuer.
///
/// With every maturity identical the data pins only the overall hazard level,
/// so `a` and `b` are tied (a flat hazard) and the result is flagged underdetermined.
pub fn fit_single_name(
    instruments: &[FitInstrument],
    riskfree: &RiskfreeCurve,
    recovery: &RecoveryModel,
    config: &FitConfig,
) -> Result<FitResult> {
    let problem = Problem::new(instruments, riskfree, recovery, config)?;
    let fit = fit_problem(&problem, config)?;
    Ok(FitResult {
        curve: FittedCurve::Single(fit.params),
        alpha: fit.alpha,
        residuals: fit.residuals,
        objective: fit.objective,
        diagnostics: fit.diagnostics,
    })
}

pub(crate) fn check_em(problem: &Problem, config: &FitConfig) -> Result<()> {
    if config.em == EmMode::Fit && problem.items.iter().all(|i| i.sovereign == 0.0) {
        return Err(CreditError::InvalidInput(
            "fitting alpha needs a sovereign spread for at least one instrument".into(),
        ));
    }
    Ok(())
}

pub(crate) fn fit_problem(problem: &Problem, config: &FitConfig) -> Result<SingleFit> {
    check_em(problem, config)?;
    let shape = Shape::from_config(config);
    let tied = problem.distinct_tenors() < 2;
    let fit_alpha = config.em == EmMode::Fit;
    let mut notes = Vec::new();
    if tied {
        notes.push("all maturities coincide: a and b tied, curve is a flat hazard".to_string());
    }

    // layout: [ln a, ln b]? or [ln λ], then logit c if free and untied, then logit α if fitted
    let n_hazard = if tied { 1 } else { 2 };
    let has_c = !tied && shape.is_free();
    let decode = |x: &[f64]| -> (Option<SurvivalParams>, Option<f64>) {
        let (a, b) = if tied { (x[0].exp(), x[0].exp()) } else { (x[0].exp(), x[1].exp()) };
        let c = shape.decode(if has_c { Some(x[n_hazard]) } else { None });
        let alpha = decode_alpha(config.em, if fit_alpha { x.last().copied() } else { None });
        (SurvivalParams::new(a, b, c).ok(), alpha)
    };
    let objective = |x: &[f64]| -> f64 {
        match decode(x) {
            (Some(p), alpha) => {
                let r = problem.residuals(&FittedCurve::Single(p), alpha.unwrap_or(0.0));
                problem.objective_of(&r)
            }
            (None, _) => f64::INFINITY,
        }
    };

    let lam = problem.hazard_guess().ln();
    let mut x0 = vec![lam; n_hazard];
    if has_c {
        x0.push(shape.encode(shape.decode(None)).unwrap_or(0.0));
    }
    if fit_alpha {
        x0.push(0.0);
    }
    let (out, best_start, evaluations) = multistart(objective, x0, config, |rng, first| {
        let mut x = first.to_vec();
        for v in x.iter_mut().take(n_hazard) {
            *v += rng.random_range(-1.5..1.5);
        }
        for v in x.iter_mut().skip(n_hazard) {
            *v = rng.random_range(-2.0..2.0);
        }
        x
    });

    let (params, alpha) = decode(&out.x);
    let params = params
        .ok_or_else(|| CreditError::NoConvergence { what: "single-name fit".into(), iterations: out.iterations })?;
    let residuals = problem.residuals(&FittedCurve::Single(params), alpha.unwrap_or(0.0));
    let objective = problem.objective_of(&residuals);
    Ok(SingleFit {
        params,
        alpha,
        residuals,
        objective,
        diagnostics: FitDiagnostics {
            iterations: out.iterations,
            evaluations,
            converged: out.converged,
            underdetermined: tied,
            starts: config.multistart_count,
            best_start,
            descent: out.descent,
            notes,
        },
    })
}

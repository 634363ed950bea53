use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use credit_curve::analytics::{self, Decomposition, Position, ReturnInputs, TransitionInputs, TRANSITION_STATES};
use credit_curve::fitting::{fit_rating_grid, fit_single_name, FitInstrument, FittedCurve};
use credit_curve::valuation::{self, AssetSwapInputs, DiscountGrid};
use credit_curve::{CdsQuote, Instrument, Rating, RecoveryModel};

use crate::config::{self, FileConfig, Settings};
use crate::error::{CliError, CliResult};
use crate::input::{self, parse_rating, UniversePaths, UniverseSnapshot};
use crate::report::{self, flag, opt_rating, CurveSource, FitMode, FitRun, GroupFit};
use crate::{CommonArgs, HistoryArgs};

const BP: f64 = 1e4;
const SEMIANNUAL: u32 = 2;

pub fn settings(a: &CommonArgs) -> CliResult<Settings> {
    let file = match &a.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let mut s = Settings::from_file(&file)?;
    if let Some(d) = &a.as_of {
        s.as_of = Some(config::parse_date(d)?);
    }
    if let Some(r) = &a.recovery {
        s.recovery = config::parse_recovery(r)?;
    }
    if a.fix_c.is_some() {
        s.fit.fix_c = a.fix_c;
    }
    if let Some(e) = &a.em_alpha {
        s.fit.em = config::parse_em(e)?;
    }
    if let Some(h) = a.horizon {
        s.horizon = h;
    }
    if let Some(f) = a.convergence_fraction {
        s.convergence_fraction = f;
    }
    if let Some(g) = a.grid_step {
        s.fit.grid_step = g;
    }
    if let Some(seed) = a.seed {
        s.fit.seed = seed;
    }
    if let Some(t) = &a.tenors {
        s.tenors = t.clone();
    }
    s.allow_underdetermined |= a.allow_underdetermined;
    s.validate()?;
    Ok(s)
}

fn paths(a: &CommonArgs) -> UniversePaths {
    UniversePaths {
        riskfree: a.riskfree.clone(),
        bonds: a.bonds.clone(),
        cds: a.cds.clone(),
        sovereign: a.sovereign.clone(),
    }
}

/// Writes `content` to `dir/name`, or to stdout without a directory.
fn emit(dir: Option<&Path>, name: &str, content: &str) -> CliResult<()> {
    match dir {
        Some(d) => {
            std::fs::create_dir_all(d).map_err(|e| CliError::io(d, e))?;
            let p = d.join(name);
            std::fs::write(&p, content).map_err(|e| CliError::io(&p, e))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn require_curve(a: &CommonArgs) -> CliResult<CurveSource> {
    let p = a.curve.as_ref().ok_or_else(|| CliError::Input("--curve is required".into()))?;
    report::load_curve(p)
}

fn fit_instruments(snap: &UniverseSnapshot) -> Vec<FitInstrument> {
    snap.instruments
        .iter()
        .map(|r| FitInstrument {
            instrument: r.instrument.clone(),
            recovery: r.recovery,
            sovereign_spread: r.country.as_deref().and_then(|c| snap.sovereign.spread(c, r.instrument.tenor())),
        })
        .collect()
}

/// Fits a snapshot: one curve per issuer, or one rating grid for everything.
pub fn run_fit(snap: &UniverseSnapshot, mode: FitMode, s: &Settings) -> CliResult<FitRun> {
    let inputs = fit_instruments(snap);
    let fits = match mode {
        FitMode::RatingGrid => {
            let result = fit_rating_grid(&inputs, &snap.riskfree, &s.recovery, &s.fit)?;
            vec![GroupFit { issuer: None, members: (0..inputs.len()).collect(), result }]
        }
        FitMode::SingleName => {
            let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
            for (i, r) in snap.instruments.iter().enumerate() {
                groups.entry(r.issuer.as_str()).or_default().push(i);
            }
            let mut fits = Vec::with_capacity(groups.len());
            for (issuer, members) in groups {
                let subset: Vec<FitInstrument> = members.iter().map(|&i| inputs[i].clone()).collect();
                let result = fit_single_name(&subset, &snap.riskfree, &s.recovery, &s.fit)
                    .map_err(|e| CliError::Input(format!("issuer {issuer}: {e}")))?;
                fits.push(GroupFit { issuer: Some(issuer.to_string()), members, result });
            }
            fits
        }
    };
    Ok(FitRun {
        as_of: snap.as_of.map(|d| d.to_string()),
        mode,
        config: s.fit.clone(),
        recovery: s.recovery,
        riskfree: snap.riskfree.clone(),
        instruments: snap.instruments.clone(),
        sovereign_spreads: inputs.iter().map(|f| f.sovereign_spread).collect(),
        fits,
    })
}

/// Errors for fits the caller should not trust; outputs are written before this is checked.
pub fn check_fit(run: &FitRun, allow_underdetermined: bool) -> CliResult<()> {
    for g in &run.fits {
        let name = g.issuer.as_deref().unwrap_or("rating grid");
        let d = &g.result.diagnostics;
        if d.underdetermined && !allow_underdetermined {
            return Err(CliError::Underdetermined(format!("{name}: {}", d.notes.join("; "))));
        }
        if !d.converged {
            return Err(CliError::NoConvergence(format!(
                "{name}: stopped after {} evaluations at objective {:.6e}",
                d.evaluations, g.result.objective
            )));
        }
    }
    Ok(())
}

pub fn fit(a: &CommonArgs, mode: FitMode) -> CliResult<()> {
    let s = settings(a)?;
    let snap = input::load_universe(&paths(a), s.as_of, s.compounding)?;
    let run = run_fit(&snap, mode, &s)?;
    let out = a.out.as_deref();
    if out.is_some() {
        emit(out, "fit_result.json", &run.to_json())?;
        emit(out, "fit_params.csv", &report::render_params(&run))?;
    }
    emit(out, "fit_report.csv", &report::render_report(&run)?)?;
    for g in &run.fits {
        for n in &g.result.diagnostics.notes {
            eprintln!("note: {}: {n}", g.issuer.as_deref().unwrap_or("grid"));
        }
    }
    check_fit(&run, s.allow_underdetermined)
}

pub fn report(fit_result: &Path, out: Option<&Path>) -> CliResult<()> {
    let text = std::fs::read_to_string(fit_result).map_err(|e| CliError::io(fit_result, e))?;
    let run = FitRun::from_json(&text)?;
    emit(out, "fit_report.csv", &report::render_report(&run)?)
}

fn discount_grid(snap: &UniverseSnapshot, step: f64) -> CliResult<DiscountGrid> {
    let max_t = snap.instruments.iter().map(|r| r.instrument.tenor()).fold(0.0, f64::max);
    Ok(DiscountGrid::new(&snap.riskfree, step, max_t)?)
}

pub fn value(a: &CommonArgs) -> CliResult<()> {
    let s = settings(a)?;
    let curves = require_curve(a)?;
    let snap = input::load_universe(&paths(a), s.as_of, s.compounding)?;
    let step = s.fit.grid_step;
    let grid = discount_grid(&snap, step)?;
    let mut out = String::from(
        "id,issuer,kind,rating,tenor_y,recovery,survival,rpv01_y,recovery_leg,rhat_pct,market_price_pts,\
         model_price_pts,par_adj_spread_bp,model_spread_bp,residual_pts,flag\n",
    );
    for rec in &snap.instruments {
        let inst = &rec.instrument;
        let p = curves.for_record(rec)?;
        let recovery = s.recovery.recovery(inst.rating(), rec.recovery)?;
        let k = grid.kernels(&p, inst.tenor())?;
        let market = inst.market_value(&snap.riskfree, step)?;
        let residual = valuation::price_residual(inst.coupon(), market, &k, recovery, 0.0);
        writeln!(
            out,
            "{},{},{},{},{:.6},{:.4},{:.8},{:.8},{:.8},{:.6},{:.6},{:.6},{:.4},{:.4},{:.6},{}",
            rec.id,
            rec.issuer,
            rec.kind(),
            opt_rating(rec),
            inst.tenor(),
            recovery,
            p.survival_probability(inst.tenor())?,
            k.pi,
            k.xi,
            k.rhat() * 100.0,
            market.price(),
            market.price() + residual,
            valuation::par_adjusted_spread(inst.coupon(), market, &k) * BP,
            valuation::par_cds_spread(&k, recovery) * BP,
            residual,
            flag(residual)
        )
        .expect("write to string");
    }
    emit(a.out.as_deref(), "value.csv", &out)
}

pub fn spread(a: &CommonArgs) -> CliResult<()> {
    let s = settings(a)?;
    let curves = a.curve.as_ref().map(|p| report::load_curve(p)).transpose()?;
    let snap = input::load_universe(&paths(a), s.as_of, s.compounding)?;
    let step = s.fit.grid_step;
    let grid = discount_grid(&snap, step)?;
    let mut out = String::from(
        "id,issuer,kind,rating,tenor_y,coupon_pct,market_price_pts,yield_pct,z_spread_bp,asset_swap_bp,\
         upfront_pct,traded_spread_bp,par_adj_spread_bp\n",
    );
    for rec in &snap.instruments {
        let inst = &rec.instrument;
        let market = inst.market_value(&snap.riskfree, step)?;
        let (yld, z, asw, upfront, traded) = match inst {
            Instrument::Bond(b) => {
                let asw_in = AssetSwapInputs::from_swap_curve(&snap.riskfree, b.tenor, SEMIANNUAL)?;
                (
                    format!("{:.6}", valuation::yield_from_price(b.coupon, b.tenor, b.price, SEMIANNUAL)? * 100.0),
                    format!("{:.4}", valuation::z_spread(b, &snap.riskfree, SEMIANNUAL)? * BP),
                    format!("{:.4}", valuation::asset_swap_spread(b, &asw_in) * BP),
                    String::new(),
                    String::new(),
                )
            }
            Instrument::Cds(q) => {
                let u = valuation::cds_traded_spread_to_upfront(q, &snap.riskfree, step)?;
                let st = match q.quote {
                    CdsQuote::Spread(st) => st,
                    CdsQuote::Upfront(u) => valuation::cds_upfront_to_traded_spread(
                        q.coupon,
                        q.tenor,
                        u,
                        q.quoting_recovery,
                        &snap.riskfree,
                        step,
                    )?,
                };
                (String::new(), String::new(), String::new(), format!("{:.6}", u * 100.0), format!("{:.4}", st * BP))
            }
        };
        let sbar = match &curves {
            Some(c) => {
                let k = grid.kernels(&c.for_record(rec)?, inst.tenor())?;
                format!("{:.4}", valuation::par_adjusted_spread(inst.coupon(), market, &k) * BP)
            }
            None => String::new(),
        };
        writeln!(
            out,
            "{},{},{},{},{:.6},{:.6},{:.6},{yld},{z},{asw},{upfront},{traded},{sbar}",
            rec.id,
            rec.issuer,
            rec.kind(),
            opt_rating(rec),
            inst.tenor(),
            inst.coupon() * 100.0,
            market.price(),
        )
        .expect("write to string");
    }
    emit(a.out.as_deref(), "spread.csv", &out)
}

/// Reads `from_rating,AAA,...,CCC,D` rows.
pub fn load_transitions(path: &Path) -> CliResult<BTreeMap<Rating, Vec<f64>>> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(file);
    let mut out = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != TRANSITION_STATES + 1 {
            return Err(CliError::row(
                path,
                line,
                format!("expected from_rating plus {TRANSITION_STATES} probabilities, got {} fields", rec.len()),
            ));
        }
        let from = parse_rating(&rec[0]).map_err(|m| CliError::row(path, line, m))?;
        let probs = rec
            .iter()
            .skip(1)
            .map(|v| v.parse::<f64>().map_err(|_| CliError::row(path, line, format!("bad probability '{v}'"))))
            .collect::<CliResult<Vec<f64>>>()?;
        out.insert(from, probs);
    }
    Ok(out)
}

pub fn analytics(a: &CommonArgs) -> CliResult<()> {
    let s = settings(a)?;
    let curves = require_curve(a)?;
    let snap = input::load_universe(&paths(a), s.as_of, s.compounding)?;
    let transitions = a.transitions.as_deref().map(load_transitions).transpose()?;
    let step = s.fit.grid_step;
    let (h, phi) = (s.horizon, s.convergence_fraction);
    let mut out = String::from(
        "id,issuer,kind,rating,tenor_y,horizon_y,convergence_fraction,c_prime_pct,par_adj_spread_bp,\
         model_spread_bp,model_spread_rolled_bp,carry_pts,rolldown_pts,rv_pts,total_pts,\
         carry_model_pts,rv_model_pts,total_model_pts,expected_pts\n",
    );
    let pts = |v: f64| format!("{:.6}", v * 100.0);
    for rec in &snap.instruments {
        let inst = &rec.instrument;
        if inst.tenor() <= h {
            eprintln!("note: {}: matures within the horizon, skipped", rec.id);
            continue;
        }
        let p = curves.for_record(rec)?;
        let recovery = s.recovery.recovery(inst.rating(), rec.recovery)?;
        let market = inst.market_value(&snap.riskfree, step)?;
        let x = ReturnInputs::from_model(inst.coupon(), market, &p, &snap.riskfree, recovery, inst.tenor(), h, step)?;
        let std = x.decompose(Decomposition::Standard, phi)?;
        // the two splittings only agree at full convergence
        let (carry_m, rv_m, total_m) = if phi == 1.0 {
            let m = x.decompose(Decomposition::ModelCarry, 1.0)?;
            (pts(m.carry), pts(m.rv), pts(m.total))
        } else {
            (String::new(), String::new(), String::new())
        };
        let expected = match (&transitions, curves.grid(), inst.rating()) {
            (Some(t), Some(g), Some(r)) => {
                let row = t.get(&r).ok_or_else(|| CliError::Input(format!("no transition row for {r}")))?;
                let trans = TransitionInputs::new(row.clone(), 1.0 - recovery)?;
                let pos = Position { coupon: inst.coupon(), market, tenor: inst.tenor(), rating: r };
                let rec_model = match rec.recovery {
                    Some(v) => RecoveryModel::Fixed(v),
                    None => s.recovery,
                };
                pts(analytics::expected_return_with_transitions(
                    &pos,
                    h,
                    g,
                    &rec_model,
                    &snap.riskfree,
                    &trans,
                    phi,
                    step,
                )?
                .expected)
            }
            _ => String::new(),
        };
        writeln!(
            out,
            "{},{},{},{},{:.6},{:.6},{:.4},{:.6},{:.4},{:.4},{:.4},{},{},{},{},{carry_m},{rv_m},{total_m},{expected}",
            rec.id,
            rec.issuer,
            rec.kind(),
            opt_rating(rec),
            inst.tenor(),
            h,
            phi,
            x.c_prime * 100.0,
            x.sbar * BP,
            x.shat * BP,
            x.shat_rolled * BP,
            pts(std.carry),
            pts(std.rolldown),
            pts(std.rv),
            pts(std.total),
        )
        .expect("write to string");
    }
    emit(a.out.as_deref(), "analytics.csv", &out)
}

/// `(series, value)` rows describing one fitted date.
pub fn history_rows(run: &FitRun, s: &Settings) -> CliResult<Vec<(String, String)>> {
    let mut rows = Vec::new();
    for line in report::render_params(run).lines().skip(1) {
        let mut parts = line.splitn(3, ',');
        let (g, p, v) = (parts.next().unwrap_or(""), parts.next().unwrap_or(""), parts.next().unwrap_or(""));
        if matches!(p, "converged" | "underdetermined" | "iterations" | "evaluations" | "best_start") {
            continue;
        }
        rows.push((format!("param.{g}.{p}"), v.to_string()));
    }
    let max_t = s.tenors.iter().copied().fold(0.0, f64::max);
    let grid = DiscountGrid::new(&run.riskfree, run.config.grid_step, max_t)?;
    let mut spread_row = |label: &str, curve: &FittedCurve, rating: Option<Rating>| -> CliResult<()> {
        let recovery = match s.recovery.recovery(rating, None) {
            Ok(r) => r,
            Err(_) => return Ok(()),
        };
        let p = curve.params_for(rating)?;
        for &t in &s.tenors {
            let k = grid.kernels(&p, t)?;
            rows.push((
                format!("model_spread_bp.{t}y.{label}"),
                format!("{:.4}", valuation::par_cds_spread(&k, recovery) * BP),
            ));
        }
        Ok(())
    };
    for g in &run.fits {
        match (&g.issuer, &g.result.curve) {
            (None, curve) => {
                for r in Rating::all() {
                    spread_row(r.symbol(), curve, Some(r))?;
                }
            }
            (Some(issuer), curve) => {
                let rating = g.members.first().and_then(|&i| run.instruments[i].instrument.rating());
                spread_row(issuer, curve, rating)?;
            }
        }
    }
    for r in report::report_rows(run)? {
        let id = &run.instruments[r.index].id;
        rows.push((format!("basis_bp.{id}"), format!("{:.4}", r.basis() * BP)));
        rows.push((format!("residual_pts.{id}"), format!("{:.6}", r.residual)));
    }
    Ok(rows)
}

pub fn history(a: &HistoryArgs) -> CliResult<()> {
    let c = &a.common;
    let s = settings(c)?;
    let mode = match a.mode.as_str() {
        "grid" => FitMode::RatingGrid,
        "single" => FitMode::SingleName,
        m => return Err(CliError::Input(format!("bad mode '{m}', expected grid or single"))),
    };
    let snaps = input::load_snapshots(&paths(c), s.as_of, s.compounding)?;
    let mut out = String::from("date,series,value\n");
    let mut failures = Vec::new();
    for snap in &snaps {
        let date = snap.as_of.map_or_else(|| "undated".to_string(), |d| d.to_string());
        let result = run_fit(snap, mode, &s).and_then(|run| {
            check_fit(&run, s.allow_underdetermined)?;
            history_rows(&run, &s)
        });
        match result {
            Ok(rows) => {
                for (series, value) in rows {
                    writeln!(out, "{date},{series},{value}").expect("write to string");
                }
            }
            Err(e) => {
                eprintln!("{date}: skipped: {e}");
                failures.push((date, e));
            }
        }
    }
    emit(c.out.as_deref(), "history.csv", &out)?;
    if !failures.is_empty() {
        eprintln!("{} of {} dates failed", failures.len(), snaps.len());
        if failures.len() == snaps.len() {
            return Err(failures.remove(0).1);
        }
    }
    Ok(())
}

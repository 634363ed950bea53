//! Acceptance suite: one PASS/FAIL line per criterion.

use std::path::Path;
use std::process::Command;

use credit_curve::analytics::{cds_unwind_return, Decomposition, ReturnInputs};
use credit_curve::fitting::{fit_rating_grid, fit_single_name, EmMode, FitConfig, FitInstrument, FittedCurve};
use credit_curve::implied::{balanced_flat_hazard, implied_recovery};
use credit_curve::valuation::{
    self, bond_model_price, cds_traded_spread_to_upfront, cds_upfront_to_traded_spread, exact_fit_flat_hazard, kernels,
    par_adjusted_spread, price_residual, yield_from_price, z_spread, BondSpec, CdsQuote, CdsSpec, MarketValue,
    DEFAULT_GRID_STEP, DEFAULT_QUOTING_RECOVERY,
};
use credit_curve::{
    Anchor, Compounding, FlatHazard, Instrument, Rating, RatingGrid, RecoveryModel, RecoverySchedule, RiskfreeCurve,
    SurvivalParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_riskfree(rng: &mut ChaCha8Rng) -> RiskfreeCurve {
    let mut t = 0.0;
    let pillars: Vec<(f64, f64)> = (0..rng.random_range(1..6))
        .map(|_| {
            t += rng.random_range(0.25..8.0);
            (t, rng.random_range(-0.005..0.08))
        })
        .collect();
    let comp = if rng.random_bool(0.5) { Compounding::Continuous } else { Compounding::Periodic(2) };
    RiskfreeCurve::new(pillars, comp).unwrap()
}

fn random_params(rng: &mut ChaCha8Rng) -> SurvivalParams {
    if rng.random_bool(0.3) {
        let l = rng.random_range(0.0005..0.3);
        SurvivalParams::new(l, l, 0.1).unwrap()
    } else {
        SurvivalParams::new(rng.random_range(0.0005..0.3), rng.random_range(0.0005..0.5), rng.random_range(0.05..0.2))
            .unwrap()
    }
}

fn parity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let rf = random_riskfree(&mut rng);
        let p = random_params(&mut rng);
        let t = rng.random_range(0.05..30.0);
        let k = kernels(&rf, &p, t, DEFAULT_GRID_STEP).unwrap();
        worst = worst.max(k.parity_error().abs());
    }
    outcome(worst <= 1e-12, format!("max |B(T)Q(T)+Xi+rhat*Pi-1| = {worst:.2e} over 1000 random curves"))
}

fn flat_closed_forms() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut ratios = Vec::new();
    for r in [0.0, 0.02, 0.05, 0.1] {
        for lam in [0.001, 0.02, 0.05, 0.1] {
            if r + lam > 0.2 {
                continue;
            }
            let rf = RiskfreeCurve::flat(r, Compounding::Continuous).unwrap();
            for t in [0.5, 1.0, 5.0, 10.0, 20.0, 30.0] {
                let pi = -(-(r + lam) * t).exp_m1() / (r + lam);
                let coarse = kernels(&rf, &FlatHazard(lam), t, DEFAULT_GRID_STEP).unwrap();
                let fine = kernels(&rf, &FlatHazard(lam), t, DEFAULT_GRID_STEP / 4.0).unwrap();
                let e_pi = (coarse.pi - pi).abs() / pi;
                let e_xi = (coarse.xi - lam * pi).abs() / (lam * pi);
                worst = worst.max(e_pi).max(e_xi);
                let fine_err = (fine.pi - pi).abs();
                if fine_err > 1e-13 * pi {
                    ratios.push((coarse.pi - pi).abs() / fine_err);
                }
            }
        }
    }
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().copied().fold(0.0, f64::max);
    let pass = worst <= 5e-4 && min > 14.0 && max < 18.0;
    outcome(pass, format!("max rel error {worst:.2e}; error ratio on quartering step in [{min:.2}, {max:.2}]"))
}

/// Published COLOM table: recovery and error-balancing flat hazard.
const COLOM_TABLE: [(f64, f64); 6] =
    [(0.0, 0.0277), (0.2, 0.0341), (0.4, 0.0442), (0.535, 0.0551), (0.6, 0.0626), (0.8, 0.1065)];

struct Colom {
    rate: f64,
    bonds: [Instrument; 2],
}

impl Colom {
    fn new(price_4pct: f64) -> Self {
        let bonds = [
            Instrument::Bond(BondSpec::new(0.04, 7.88, price_4pct, 0.0).unwrap()),
            Instrument::Bond(BondSpec::new(0.08125, 8.11, 125.50, 0.0).unwrap()),
        ];
        // proxy rate: least squares against the table's hazard column, golden section on [1.5%, 2.5%]
        let sse = |r: f64| -> f64 {
            let rf = RiskfreeCurve::flat(r, Compounding::Continuous).unwrap();
            COLOM_TABLE
                .iter()
                .map(|&(rec, lam)| match balanced_flat_hazard(&bonds, &rf, rec, DEFAULT_GRID_STEP) {
                    Ok(l) => (l - lam).powi(2),
                    Err(_) => 1.0,
                })
                .sum()
        };
        let (mut a, mut b) = (0.015, 0.025);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        while b - a > 1e-8 {
            let (x1, x2) = (b - g * (b - a), a + g * (b - a));
            if sse(x1) <= sse(x2) {
                b = x2;
            } else {
                a = x1;
            }
        }
        Self { rate: 0.5 * (a + b), bonds }
    }

    fn rf(&self) -> RiskfreeCurve {
        RiskfreeCurve::flat(self.rate, Compounding::Continuous).unwrap()
    }

    fn residuals(&self, lam: f64, rec: f64) -> [f64; 2] {
        let rf = self.rf();
        self.bonds.clone().map(|b| {
            let k = kernels(&rf, &FlatHazard(lam), b.tenor(), DEFAULT_GRID_STEP).unwrap();
            price_residual(b.coupon(), b.market_value(&rf, DEFAULT_GRID_STEP).unwrap(), &k, rec, 0.0)
        })
    }

    fn sbar(&self, bond: &Instrument, lam: f64) -> f64 {
        let rf = self.rf();
        let k = kernels(&rf, &FlatHazard(lam), bond.tenor(), DEFAULT_GRID_STEP).unwrap();
        par_adjusted_spread(bond.coupon(), bond.market_value(&rf, DEFAULT_GRID_STEP).unwrap(), &k)
    }

    fn crossover(&self) -> Option<(f64, f64)> {
        implied_recovery(&self.bonds[0], &self.bonds[1], &self.rf(), DEFAULT_GRID_STEP, (0.0, 0.95)).ok()
    }
}

fn colom_hazard_and_signs(c: &Colom) -> Outcome {
    let rf = c.rf();
    let Some((rx, lx)) = c.crossover() else { return outcome(false, "no crossover recovery found") };
    let lams: Vec<f64> = (0..=16)
        .map(|i| balanced_flat_hazard(&c.bonds, &rf, 0.05 * f64::from(i), DEFAULT_GRID_STEP).unwrap())
        .collect();
    let increasing = lams.windows(2).all(|w| w[1] > w[0]);
    let mut signs_ok = true;
    for &(rec, _) in &COLOM_TABLE {
        // the table's own crossover row carries no sign
        if rec == 0.535 {
            continue;
        }
        let lam = balanced_flat_hazard(&c.bonds, &rf, rec, DEFAULT_GRID_STEP).unwrap();
        let [d4, d8] = c.residuals(lam, rec);
        // below the table's crossover the 4% is rich and the 8.125% cheap
        let want_rich = rec < 0.535;
        signs_ok &= if want_rich { d4 < 0.0 && d8 > 0.0 } else { d4 > 0.0 && d8 < 0.0 };
    }
    let rx_ok = (rx - 0.535).abs() <= 0.04;
    let lx_ok = (lx / 0.0551 - 1.0).abs() <= 0.10;
    outcome(
        increasing && signs_ok && rx_ok && lx_ok,
        format!(
            "proxy rate {:.4}%; hazard increasing in R: {increasing}; table sign pattern: {signs_ok}; \
             crossover R = {:.2}% (want 53.5 +/- 4); hazard there {lx:.4} (want 0.0551 +/- 10%)",
            c.rate * 100.0,
            rx * 100.0
        ),
    )
}

fn colom_par_adjusted(c: &Colom) -> Outcome {
    let rf = c.rf();
    let Some((rx, lx)) = c.crossover() else { return outcome(false, "no crossover recovery found") };
    let s4 = c.sbar(&c.bonds[0], lx) * 1e4;
    let s8 = c.sbar(&c.bonds[1], lx) * 1e4;
    let l4 = exact_fit_flat_hazard(&c.bonds[0], &rf, 0.0, DEFAULT_GRID_STEP).unwrap();
    let l8 = exact_fit_flat_hazard(&c.bonds[1], &rf, 0.0, DEFAULT_GRID_STEP).unwrap();
    let gap = (c.sbar(&c.bonds[1], l8) - c.sbar(&c.bonds[0], l4)) * 1e4;
    let pass = (s4 - s8).abs() <= 2.0 && (s4 - 260.0).abs() <= 15.0 && (gap - 40.0).abs() <= 5.0;
    outcome(
        pass,
        format!(
            "at R = {:.2}%: sbar {s4:.1}bp / {s8:.1}bp (want equal, 260 +/- 15); at R = 0: hazards {l4:.4} / {l8:.4}, \
             sbar gap {gap:.1}bp (want 40 +/- 5)",
            rx * 100.0
        ),
    )
}

fn premium_discount() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut y_bad, mut z_bad, mut y_bad_flat_hazard) = (0, 0, 0);
    let mut example = String::new();
    let mut worst_sbar: f64 = 0.0;
    for i in 0..400 {
        // yields compare against a flat riskfree curve, where the coupon effect is purely a credit effect;
        // Z-spreads also run on shaped curves
        let flat = i % 2 == 0;
        let rf = if flat {
            RiskfreeCurve::flat(rng.random_range(0.0..0.08), Compounding::Continuous).unwrap()
        } else {
            random_riskfree(&mut rng)
        };
        let p = random_params(&mut rng);
        let t = rng.random_range(2.0..20.0);
        let k = kernels(&rf, &p, t, DEFAULT_GRID_STEP).unwrap();
        let lo = rng.random_range(0.0..0.05);
        let hi = lo + rng.random_range(0.01..0.06);
        let spec = |c: f64| {
            let price = bond_model_price(&BondSpec::new(c, t, 100.0, 0.4).unwrap(), &k);
            BondSpec::new(c, t, price, 0.4).unwrap()
        };
        let (b_lo, b_hi) = (spec(lo), spec(hi));
        let y = |b: &BondSpec| yield_from_price(b.coupon, t, b.price, 2).unwrap();
        let z = |b: &BondSpec| z_spread(b, &rf, 2).unwrap();
        let s = |b: &BondSpec| par_adjusted_spread(b.coupon, MarketValue::BondPrice(b.price), &k);
        if flat && y(&b_hi) <= y(&b_lo) {
            y_bad += 1;
            y_bad_flat_hazard += usize::from(p.a == p.b);
            example = format!(
                "; e.g. a={:.4} b={:.4} c={:.3} T={t:.2}: yields {:.4}% at {:.2}% coupon vs {:.4}% at {:.2}%",
                p.a,
                p.b,
                p.c,
                y(&b_lo) * 100.0,
                lo * 100.0,
                y(&b_hi) * 100.0,
                hi * 100.0
            );
        }
        if z(&b_hi) <= z(&b_lo) {
            z_bad += 1;
        }
        worst_sbar = worst_sbar.max((s(&b_hi) - s(&b_lo)).abs());
    }
    outcome(
        y_bad == 0 && z_bad == 0 && worst_sbar <= 1e-10,
        format!(
            "400 same-curve pairs, R = 0.4: yield ordering violations {y_bad} of 200 on flat riskfree \
             ({y_bad_flat_hazard} with flat hazard), Z-spread ordering violations {z_bad} of 400; \
             max sbar gap {worst_sbar:.2e}{example}"
        ),
    )
}

fn single_name_round_trip() -> Outcome {
    let truth = SurvivalParams::new(0.01, 0.05, 0.1).unwrap();
    let rf = RiskfreeCurve::new(vec![(1.0, 0.015), (5.0, 0.025), (10.0, 0.03), (30.0, 0.035)], Compounding::Continuous)
        .unwrap();
    let bonds: Vec<FitInstrument> =
        [(1.5, 0.03), (3.0, 0.045), (4.5, 0.05), (6.0, 0.04), (8.0, 0.06), (10.0, 0.055), (15.0, 0.065), (25.0, 0.07)]
            .iter()
            .map(|&(t, c)| {
                let k = kernels(&rf, &truth, t, DEFAULT_GRID_STEP).unwrap();
                let price = bond_model_price(&BondSpec::new(c, t, 100.0, 0.4).unwrap(), &k);
                Instrument::Bond(BondSpec::new(c, t, price, 0.4).unwrap()).into()
            })
            .collect();
    let cfg = FitConfig { fix_c: Some(0.1), ..Default::default() };
    let fit = fit_single_name(&bonds, &rf, &RecoveryModel::Fixed(0.4), &cfg).unwrap();
    let FittedCurve::Single(p) = fit.curve else { unreachable!() };
    let pass = (p.a - 0.01).abs() < 1e-4 && (p.b - 0.05).abs() < 1e-4 && fit.objective < 1e-16;
    outcome(pass, format!("8 bonds, c fixed: a = {:.8}, b = {:.8}, objective {:.2e}", p.a, p.b, fit.objective))
}

fn grid_fit() -> Outcome {
    let truth = RatingGrid::new(
        [Anchor { a: 0.003, b: 0.008 }, Anchor { a: 0.01, b: 0.025 }, Anchor { a: 0.045, b: 0.08 }],
        0.12,
    )
    .unwrap();
    let rf = RiskfreeCurve::new(vec![(1.0, 0.02), (5.0, 0.03), (10.0, 0.035), (30.0, 0.04)], Compounding::Continuous)
        .unwrap();
    let sched = RecoverySchedule::default();
    let alpha_true = 0.45;
    let build = |alpha: Option<f64>| -> Vec<FitInstrument> {
        let mut out = Vec::new();
        for (i, r) in [Rating::AA, Rating::BBB, Rating::B].into_iter().enumerate() {
            let p = truth.params_for_rating(r);
            let rec = sched.recovery_for_rating(r);
            for (j, &(t, c)) in
                [(2.0, 0.03), (4.0, 0.04), (7.0, 0.05), (10.0, 0.055), (15.0, 0.06), (25.0, 0.065)].iter().enumerate()
            {
                let k = kernels(&rf, &p, t, DEFAULT_GRID_STEP).unwrap();
                let sov = 0.01 + 0.003 * ((i + 2 * j) % 5) as f64 + 0.0005 * t;
                let extra = alpha.map_or(0.0, |a| a * sov);
                let price = 100.0 * (1.0 + (c - k.rhat() - valuation::par_cds_spread(&k, rec) - extra) * k.pi);
                let spec = BondSpec::new(c, t, price, rec).unwrap().with_rating(r).with_issue_size(500.0);
                out.push(FitInstrument {
                    instrument: Instrument::Bond(spec),
                    recovery: None,
                    sovereign_spread: alpha.map(|_| sov),
                });
            }
        }
        out
    };
    let rec = RecoveryModel::Schedule(sched);
    let fit = fit_rating_grid(&build(None), &rf, &rec, &FitConfig::default()).unwrap();
    let FittedCurve::Grid(g) = fit.curve else { unreachable!() };
    let worst = g
        .anchors()
        .iter()
        .zip(truth.anchors())
        .flat_map(|(x, y)| [(x.a / y.a - 1.0).abs(), (x.b / y.b - 1.0).abs()])
        .fold(0.0, f64::max);
    let tenors: Vec<f64> = (1..=50).map(|i| f64::from(i) * 0.6).collect();
    let no_cross = g.check_no_crossing(&tenors).is_ok();

    let cfg = FitConfig { em: EmMode::Fit, ..Default::default() };
    let em = fit_rating_grid(&build(Some(alpha_true)), &rf, &rec, &cfg).unwrap();
    let alpha = em.alpha.unwrap_or(f64::NAN);
    outcome(
        worst < 1e-3 && no_cross && (alpha - alpha_true).abs() <= 0.05,
        format!(
            "max relative anchor error {worst:.2e}; no crossing at 50 tenors: {no_cross}; EM alpha {alpha:.4} (true 0.45)"
        ),
    )
}

fn decompositions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let t = rng.random_range(0.5..30.0);
        let pi = rng.random_range(0.3..15.0);
        let x = ReturnInputs::new(
            rng.random_range(-0.02..0.12),
            rng.random_range(-0.01..0.3),
            rng.random_range(0.0..0.3),
            rng.random_range(0.0..0.3),
            pi,
            pi * rng.random_range(0.3..0.999),
            t,
            t * rng.random_range(0.001..0.95),
        )
        .unwrap();
        let total = credit_curve::analytics::total_return(&x);
        for v in [Decomposition::Standard, Decomposition::ModelCarry] {
            worst = worst.max((x.decompose(v, 1.0).unwrap().total - total).abs());
        }
    }

    let mut worst_cds: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let rf = random_riskfree(&mut rng);
        let p = random_params(&mut rng);
        let c = if rng.random_bool(0.5) { 0.01 } else { 0.05 };
        let t = rng.random_range(1.0..10.0);
        let dt = t * rng.random_range(0.02..0.5);
        let s0 = rng.random_range(0.001..0.08);
        let q = CdsSpec::new(c, t, CdsQuote::Spread(s0)).unwrap();
        let market = MarketValue::CdsUpfront(cds_traded_spread_to_upfront(&q, &rf, DEFAULT_GRID_STEP).unwrap());
        let x = ReturnInputs::from_model(c, market, &p, &rf, 0.4, t, dt, DEFAULT_GRID_STEP).unwrap();
        let k_rolled = kernels(&rf, &p, t - dt, DEFAULT_GRID_STEP).unwrap();
        let u1 = (x.shat_rolled - c) * k_rolled.pi;
        let s1 = match cds_upfront_to_traded_spread(c, t - dt, u1, DEFAULT_QUOTING_RECOVERY, &rf, DEFAULT_GRID_STEP) {
            Ok(s) => s,
            // upfront beyond what a non-negative traded spread can reach
            Err(_) => continue,
        };
        let pl = cds_unwind_return(c, s0, s1, t, dt, DEFAULT_QUOTING_RECOVERY, &rf, DEFAULT_GRID_STEP).unwrap();
        worst_cds = worst_cds.max((pl - credit_curve::analytics::total_return(&x)).abs());
    }
    outcome(
        worst <= 1e-12 && worst_cds <= 1e-10,
        format!("max |components - total| {worst:.2e} over 1000 cases; max CDS unwind vs total {worst_cds:.2e}"),
    )
}

fn write_grid_universe(dir: &Path) {
    let truth = RatingGrid::new(
        [Anchor { a: 0.002, b: 0.007 }, Anchor { a: 0.009, b: 0.022 }, Anchor { a: 0.04, b: 0.075 }],
        0.1,
    )
    .unwrap();
    let rf = RiskfreeCurve::new(vec![(1.0, 0.02), (5.0, 0.03), (10.0, 0.035), (30.0, 0.04)], Compounding::Continuous)
        .unwrap();
    std::fs::write(dir.join("riskfree.csv"), "tenor_years,zero_rate\n1,0.02\n5,0.03\n10,0.035\n30,0.04\n").unwrap();
    let sched = RecoverySchedule::default();
    let mut bonds = String::from("id,issuer,sector,coupon_pct,tenor_years,price,issue_size,rating\n");
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for i in 0..30 {
        let r = Rating::new(rng.random_range(2..=16)).unwrap();
        let t: f64 = rng.random_range(1.0..20.0);
        let c: f64 = rng.random_range(0.02..0.08);
        let k = kernels(&rf, &truth.params_for_rating(r), t, DEFAULT_GRID_STEP).unwrap();
        let price = bond_model_price(&BondSpec::new(c, t, 100.0, sched.recovery_for_rating(r)).unwrap(), &k)
            + rng.random_range(-0.5..0.5);
        bonds.push_str(&format!(
            "B{i:02},ISS{},corp,{:.4},{t:.4},{price:.4},{},{}\n",
            i % 7,
            c * 100.0,
            250 + 50 * (i % 5),
            r.symbol()
        ));
    }
    std::fs::write(dir.join("bonds.csv"), bonds).unwrap();
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    write_grid_universe(dir.path());
    let bin = env!("CARGO_BIN_EXE_creditcurve");
    let run = |out: &str| {
        Command::new(bin)
            .args(["fit-grid", "--riskfree"])
            .arg(dir.path().join("riskfree.csv"))
            .arg("--bonds")
            .arg(dir.path().join("bonds.csv"))
            .arg("--out")
            .arg(dir.path().join(out))
            .output()
            .unwrap()
    };
    let (a, b) = (run("a"), run("b"));
    if !a.status.success() || !b.status.success() {
        return outcome(false, format!("fit-grid failed: {}", String::from_utf8_lossy(&a.stderr)));
    }
    let mut identical = true;
    for f in ["fit_result.json", "fit_report.csv", "fit_params.csv"] {
        let x = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let y = std::fs::read(dir.path().join("b").join(f)).unwrap();
        identical &= x == y;
    }
    let re = Command::new(bin)
        .args(["report", "--fit-result"])
        .arg(dir.path().join("a/fit_result.json"))
        .arg("--out")
        .arg(dir.path().join("c"))
        .output()
        .unwrap();
    let round_trip = re.status.success()
        && std::fs::read(dir.path().join("a/fit_report.csv")).unwrap()
            == std::fs::read(dir.path().join("c/fit_report.csv")).unwrap();
    outcome(
        identical && round_trip,
        format!("two fit-grid runs byte-identical: {identical}; report re-emitted from saved result identical: {round_trip}"),
    )
}

fn main() {
    let colom = Colom::new(101.10);
    let results = [
        ("1", "parity identity", parity()),
        ("2", "flat-curve closed forms and trapezium order", flat_closed_forms()),
        ("3", "COLOM two-bond hazard and residual signs", colom_hazard_and_signs(&colom)),
        ("4", "COLOM par-adjusted spreads", colom_par_adjusted(&colom)),
        ("5", "premium/discount property", premium_discount()),
        ("6a", "single-name synthetic round trip", single_name_round_trip()),
        (
            "6b",
            "COLOM full-universe fit parameters",
            outcome(false, "not run: the full COLOM bond list, prices and discount curve are not available"),
        ),
        ("7", "rating-grid round trip, no crossing, EM alpha", grid_fit()),
        ("8", "return decompositions and CDS unwind identity", decompositions()),
        ("9", "fit-grid determinism", determinism()),
    ];
    let mut failed = 0;
    for (id, name, o) in &results {
        println!("{} criterion {id}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    // the 4% bond's quoted 3.98% yield corresponds to a price near 100.10, not 101.10
    let alt = Colom::new(100.10);
    let y = yield_from_price(0.04, 7.88, 101.10, 2).unwrap() * 100.0;
    let y_alt = yield_from_price(0.04, 7.88, 100.10, 2).unwrap() * 100.0;
    println!(
        "INFO COLOM with 4% bond at 100.10 instead of 101.10 (yield {y_alt:.2}% vs {y:.2}% at 101.10, table 3.98%): \
         criterion 3 {}, criterion 4 {}",
        if colom_hazard_and_signs(&alt).pass { "passes" } else { "fails" },
        if colom_par_adjusted(&alt).pass { "passes" } else { "fails" },
    );
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    // strict mode turns any FAIL into a failing test binary; the default keeps the rest of a workspace run going
    if failed > 0 && std::env::var_os("ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}

//! Quote and curve file ingestion.
//!
//! All inputs are comma-separated with a header row. Rates are decimals unless the
//! column name carries a unit (`_pct`, `_bp`).

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use credit_curve::valuation::{DEFAULT_ISSUE_SIZE, DEFAULT_QUOTING_RECOVERY};
use credit_curve::{BondSpec, CdsQuote, CdsSpec, Compounding, Instrument, Rating, RiskfreeCurve};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

const DAYS_PER_YEAR: f64 = 365.25;

/// One quoted instrument with its identifiers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstrumentRecord {
    pub id: String,
    pub issuer: String,
    pub sector: Option<String>,
    pub country: Option<String>,
    /// Carries the effective rating (internal override when present).
    pub instrument: Instrument,
    pub external_rating: Option<Rating>,
    pub recovery: Option<f64>,
}

impl InstrumentRecord {
    pub fn kind(&self) -> &'static str {
        match self.instrument {
            Instrument::Bond(_) => "bond",
            Instrument::Cds(_) => "cds",
        }
    }
}

/// Sovereign par-spread pillars by country, interpolated linearly in tenor.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SovereignCurves(pub BTreeMap<String, Vec<(f64, f64)>>);

impl SovereignCurves {
    pub fn spread(&self, country: &str, tenor: f64) -> Option<f64> {
        let pts = self.0.get(country)?;
        let first = pts.first()?;
        let last = pts.last()?;
        if tenor <= first.0 {
            return Some(first.1);
        }
        if tenor >= last.0 {
            return Some(last.1);
        }
        let i = pts.partition_point(|p| p.0 <= tenor);
        let (t0, s0) = pts[i - 1];
        let (t1, s1) = pts[i];
        Some(s0 + (s1 - s0) * (tenor - t0) / (t1 - t0))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct UniverseSnapshot {
    pub as_of: Option<NaiveDate>,
    pub instruments: Vec<InstrumentRecord>,
    pub riskfree: RiskfreeCurve,
    pub sovereign: SovereignCurves,
}

/// Where to read a universe from.
#[derive(Debug, Clone, Default)]
pub struct UniversePaths {
    pub riskfree: Option<PathBuf>,
    pub bonds: Option<PathBuf>,
    pub cds: Option<PathBuf>,
    pub sovereign: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
struct RiskfreeRow {
    tenor_years: f64,
    zero_rate: f64,
    as_of: Option<String>,
}

#[derive(Debug, Deserialize)]
struct BondRow {
    id: String,
    issuer: String,
    sector: Option<String>,
    coupon_pct: f64,
    maturity: Option<String>,
    tenor_years: Option<f64>,
    price: f64,
    issue_size: Option<f64>,
    rating: Option<String>,
    internal_rating: Option<String>,
    recovery: Option<f64>,
    country: Option<String>,
    as_of: Option<String>,
}

#[derive(Debug, Deserialize)]
struct CdsRow {
    id: String,
    issuer: String,
    sector: Option<String>,
    coupon_bp: f64,
    maturity: Option<String>,
    tenor_years: Option<f64>,
    spread_bp: Option<f64>,
    upfront_pct: Option<f64>,
    quoting_recovery: Option<f64>,
    issue_size: Option<f64>,
    rating: Option<String>,
    internal_rating: Option<String>,
    recovery: Option<f64>,
    country: Option<String>,
    as_of: Option<String>,
}

#[derive(Debug, Deserialize)]
struct SovereignRow {
    country: String,
    tenor_years: f64,
    spread_bp: f64,
}

fn reader(path: &Path) -> CliResult<csv::Reader<std::fs::File>> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(file))
}

/// Deserialises every row, tagging errors with the file line.
fn rows<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<Vec<(u64, T)>> {
    let mut rdr = reader(path)?;
    let headers = rdr.headers().map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?.clone();
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::row(path, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let row = rec.deserialize(Some(&headers)).map_err(|e| {
            let message = match e.kind() {
                csv::ErrorKind::Deserialize { err, .. } => match err.field().and_then(|i| headers.get(i as usize)) {
                    Some(col) => format!("column '{col}': {}", err.kind()),
                    None => err.kind().to_string(),
                },
                _ => e.to_string(),
            };
            CliError::row(path, line, message)
        })?;
        out.push((line, row));
    }
    Ok(out)
}

/// Parses a rating symbol (`BBB-`) or a scale index (`10`).
pub fn parse_rating(s: &str) -> Result<Rating, String> {
    if let Ok(i) = s.parse::<u8>() {
        return Rating::new(i)
            .map_err(|_| format!("rating index {i} outside 1..18; scale: {}", Rating::scale_description()));
    }
    s.parse::<Rating>().map_err(|e| e.to_string())
}

fn tenor_of(maturity: &Option<String>, tenor: Option<f64>, as_of: Option<NaiveDate>) -> Result<f64, String> {
    let t = match (maturity, tenor) {
        (Some(m), _) => {
            let m = NaiveDate::parse_from_str(m, "%Y-%m-%d").map_err(|_| format!("bad maturity '{m}'"))?;
            let d = as_of.ok_or("maturity dates need an as-of date (--as-of, config or as_of column)")?;
            (m - d).num_days() as f64 / DAYS_PER_YEAR
        }
        (None, Some(t)) => t,
        (None, None) => return Err("need maturity or tenor_years".into()),
    };
    if !(t > 0.0) {
        return Err(format!("instrument has matured (tenor {t:.4}y)"));
    }
    Ok(t)
}

fn row_date(s: &Option<String>, default: Option<NaiveDate>) -> Result<Option<NaiveDate>, String> {
    match s {
        Some(d) => NaiveDate::parse_from_str(d, "%Y-%m-%d").map(Some).map_err(|_| format!("bad as_of '{d}'")),
        None => Ok(default),
    }
}

fn ratings(ext: &Option<String>, internal: &Option<String>) -> Result<(Option<Rating>, Option<Rating>), String> {
    let ext = ext.as_deref().map(parse_rating).transpose()?;
    let internal = internal.as_deref().map(parse_rating).transpose()?;
    Ok((ext, internal.or(ext)))
}

/// Reads the riskfree file. Rows with an `as_of` column are grouped by date.
pub fn load_riskfree(path: &Path, compounding: Compounding) -> CliResult<BTreeMap<Option<NaiveDate>, RiskfreeCurve>> {
    let mut groups: BTreeMap<Option<NaiveDate>, Vec<(f64, f64)>> = BTreeMap::new();
    for (line, row) in rows::<RiskfreeRow>(path)? {
        let d = row_date(&row.as_of, None).map_err(|m| CliError::row(path, line, m))?;
        groups.entry(d).or_default().push((row.tenor_years, row.zero_rate));
    }
    if groups.is_empty() {
        return Err(CliError::Input(format!("{}: no riskfree pillars", path.display())));
    }
    groups
        .into_iter()
        .map(|(d, mut pillars)| {
            pillars.sort_by(|a, b| a.0.total_cmp(&b.0));
            let curve = RiskfreeCurve::new(pillars, compounding)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Ok((d, curve))
        })
        .collect()
}

pub fn load_sovereign(path: &Path) -> CliResult<SovereignCurves> {
    let mut map: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for (line, row) in rows::<SovereignRow>(path)? {
        if !(row.tenor_years > 0.0) {
            return Err(CliError::row(path, line, "tenor_years must be > 0"));
        }
        map.entry(row.country).or_default().push((row.tenor_years, row.spread_bp * 1e-4));
    }
    for pts in map.values_mut() {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    Ok(SovereignCurves(map))
}

type Dated<T> = Vec<(Option<NaiveDate>, T)>;

fn load_bonds(path: &Path, as_of: Option<NaiveDate>) -> CliResult<Dated<(u64, InstrumentRecord)>> {
    let mut out = Vec::new();
    for (line, r) in rows::<BondRow>(path)? {
        let rec = (|| -> Result<_, String> {
            let date = row_date(&r.as_of, as_of)?;
            let tenor = tenor_of(&r.maturity, r.tenor_years, date)?;
            let (external, effective) = ratings(&r.rating, &r.internal_rating)?;
            let mut spec = BondSpec::new(r.coupon_pct / 100.0, tenor, r.price, r.recovery.unwrap_or(0.0))
                .map_err(|e| e.to_string())?
                .with_issue_size(r.issue_size.unwrap_or(DEFAULT_ISSUE_SIZE));
            if let Some(rt) = effective {
                spec = spec.with_rating(rt);
            }
            let inst = Instrument::Bond(spec);
            inst.validate().map_err(|e| e.to_string())?;
            Ok((
                date,
                InstrumentRecord {
                    id: r.id.clone(),
                    issuer: r.issuer.clone(),
                    sector: r.sector.clone(),
                    country: r.country.clone(),
                    instrument: inst,
                    external_rating: external,
                    recovery: r.recovery,
                },
            ))
        })()
        .map_err(|m| CliError::row(path, line, m))?;
        out.push((rec.0, (line, rec.1)));
    }
    Ok(out)
}

fn load_cds(path: &Path, as_of: Option<NaiveDate>) -> CliResult<Dated<(u64, InstrumentRecord)>> {
    let mut out = Vec::new();
    for (line, r) in rows::<CdsRow>(path)? {
        let rec = (|| -> Result<_, String> {
            let date = row_date(&r.as_of, as_of)?;
            let tenor = tenor_of(&r.maturity, r.tenor_years, date)?;
            let (external, effective) = ratings(&r.rating, &r.internal_rating)?;
            let quote = match (r.spread_bp, r.upfront_pct) {
                (Some(s), None) => CdsQuote::Spread(s * 1e-4),
                (None, Some(u)) => CdsQuote::Upfront(u / 100.0),
                _ => return Err("give exactly one of spread_bp and upfront_pct".into()),
            };
            let mut spec = CdsSpec::new(r.coupon_bp * 1e-4, tenor, quote).map_err(|e| e.to_string())?;
            spec.quoting_recovery = r.quoting_recovery.unwrap_or(DEFAULT_QUOTING_RECOVERY);
            spec.issue_size = r.issue_size.unwrap_or(DEFAULT_ISSUE_SIZE);
            if let Some(rt) = effective {
                spec = spec.with_rating(rt);
            }
            let inst = Instrument::Cds(spec);
            inst.validate().map_err(|e| e.to_string())?;
            Ok((
                date,
                InstrumentRecord {
                    id: r.id.clone(),
                    issuer: r.issuer.clone(),
                    sector: r.sector.clone(),
                    country: r.country.clone(),
                    instrument: inst,
                    external_rating: external,
                    recovery: r.recovery,
                },
            ))
        })()
        .map_err(|m| CliError::row(path, line, m))?;
        out.push((rec.0, (line, rec.1)));
    }
    Ok(out)
}

/// Loads all quote files and splits them into one snapshot per as-of date, in date order.
pub fn load_snapshots(
    paths: &UniversePaths,
    as_of: Option<NaiveDate>,
    compounding: Compounding,
) -> CliResult<Vec<UniverseSnapshot>> {
    let rf_path = paths.riskfree.as_ref().ok_or_else(|| CliError::Input("--riskfree is required".into()))?;
    if paths.bonds.is_none() && paths.cds.is_none() {
        return Err(CliError::Input("no instruments: give --bonds and/or --cds".into()));
    }
    let curves = load_riskfree(rf_path, compounding)?;
    let sovereign = match &paths.sovereign {
        Some(p) => load_sovereign(p)?,
        None => SovereignCurves::default(),
    };

    let mut dated: BTreeMap<Option<NaiveDate>, Vec<(PathBuf, u64, InstrumentRecord)>> = BTreeMap::new();
    if let Some(p) = &paths.bonds {
        for (d, (line, rec)) in load_bonds(p, as_of)? {
            dated.entry(d).or_default().push((p.clone(), line, rec));
        }
    }
    if let Some(p) = &paths.cds {
        for (d, (line, rec)) in load_cds(p, as_of)? {
            dated.entry(d).or_default().push((p.clone(), line, rec));
        }
    }
    if dated.is_empty() {
        return Err(CliError::Input("no instruments".into()));
    }

    let mut out = Vec::with_capacity(dated.len());
    for (date, recs) in dated {
        let riskfree = curves
            .get(&date)
            .or_else(|| curves.get(&None))
            .ok_or_else(|| {
                CliError::Input(format!(
                    "no riskfree curve for {}",
                    date.map_or("undated quotes".to_string(), |d| d.to_string())
                ))
            })?
            .clone();
        let mut seen = BTreeSet::new();
        let mut instruments = Vec::with_capacity(recs.len());
        for (path, line, rec) in recs {
            if !seen.insert(rec.id.clone()) {
                return Err(CliError::row(&path, line, format!("duplicate identifier '{}'", rec.id)));
            }
            instruments.push(rec);
        }
        out.push(UniverseSnapshot { as_of: date, instruments, riskfree, sovereign: sovereign.clone() });
    }
    Ok(out)
}

/// Loads a single-date universe.
pub fn load_universe(
    paths: &UniversePaths,
    as_of: Option<NaiveDate>,
    compounding: Compounding,
) -> CliResult<UniverseSnapshot> {
    let mut snaps = load_snapshots(paths, as_of, compounding)?;
    if snaps.len() > 1 {
        return Err(CliError::Input(format!(
            "quotes span {} as-of dates; use the history command or filter the files",
            snaps.len()
        )));
    }
    Ok(snaps.remove(0))
}

//! Rolling-window analysis of daily log-losses: the ratios
//! `Δ^ES_q / Δ^Q_p` and `Δ^ES_q / Δ^ex_r` of the empirical estimators.
//!
//! A row dated `d` is computed from the `w` losses ending at `d`; it is the
//! strictly trailing estimate for the trading day after `d`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use chrono::{Datelike, Days, NaiveDate, Weekday};
use rayon::prelude::*;
use serde::Serialize;

use crate::calibration::{rule_of_thumb, LevelTriple};
use crate::error::{Error, Result};
use crate::montecarlo::{sample, stream_rng};
use crate::probspace::{DiscreteDistribution, Distribution};
use crate::variability::{delta_es, delta_ex, delta_q};

pub const DEFAULT_WINDOW: usize = 253;
const DATE_FORMAT: &str = "%Y-%m-%d";

#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    dates: Vec<NaiveDate>,
    prices: Vec<f64>,
}

impl PriceSeries {
    pub fn new(dates: Vec<NaiveDate>, prices: Vec<f64>) -> Result<Self> {
        if dates.len() != prices.len() {
            return Err(Error::Data("dates and prices differ in length".into()));
        }
        if dates.len() < 2 {
            return Err(Error::Data("need at least two prices".into()));
        }
        check_dates(&dates)?;
        if let Some((d, p)) = dates.iter().zip(&prices).find(|(_, p)| !(p.is_finite() && **p > 0.0)) {
            return Err(Error::Data(format!("non-positive price {p} on {d}")));
        }
        Ok(PriceSeries { dates, prices })
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LossSeries {
    dates: Vec<NaiveDate>,
    losses: Vec<f64>,
}

impl LossSeries {
    pub fn new(dates: Vec<NaiveDate>, losses: Vec<f64>) -> Result<Self> {
        if dates.len() != losses.len() {
            return Err(Error::Data("dates and losses differ in length".into()));
        }
        check_dates(&dates)?;
        if let Some(d) = dates.iter().zip(&losses).find(|(_, l)| !l.is_finite()).map(|(d, _)| d) {
            return Err(Error::Data(format!("non-finite loss on {d}")));
        }
        Ok(LossSeries { dates, losses })
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn losses(&self) -> &[f64] {
        &self.losses
    }

    pub fn len(&self) -> usize {
        self.losses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.losses.is_empty()
    }

    /// `a + b·ℓ` for every loss.
    pub fn affine(&self, a: f64, b: f64) -> LossSeries {
        LossSeries {
            dates: self.dates.clone(),
            losses: self.losses.iter().map(|l| a + b * l).collect(),
        }
    }
}

fn check_dates(dates: &[NaiveDate]) -> Result<()> {
    match dates.windows(2).find(|w| w[1] <= w[0]) {
        Some(w) => Err(Error::Data(format!(
            "dates must increase strictly: {} followed by {}",
            w[0], w[1]
        ))),
        None => Ok(()),
    }
}

/// Which levels the ratios are computed at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TripleSource {
    Explicit(LevelTriple),
    /// Index into [`rule_of_thumb`].
    RuleOfThumb(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RollingConfig {
    pub window: usize,
    pub levels: TripleSource,
}

impl Default for RollingConfig {
    fn default() -> Self {
        RollingConfig {
            window: DEFAULT_WINDOW,
            levels: TripleSource::RuleOfThumb(1),
        }
    }
}

impl RollingConfig {
    /// The validated triple.
    pub fn triple(&self) -> Result<LevelTriple> {
        let t = match self.levels {
            TripleSource::Explicit(t) => t,
            TripleSource::RuleOfThumb(i) => *rule_of_thumb()
                .get(i)
                .ok_or_else(|| Error::InvalidParameter(format!("no rule-of-thumb triple {i}")))?,
        };
        let check = |name: &'static str, v: f64, ok: bool, domain: &'static str| {
            if ok {
                Ok(())
            } else {
                Err(Error::LevelOutOfDomain { what: name, level: v, domain })
            }
        };
        check("p", t.p, t.p > 0.5 && t.p < 1.0, "(1/2,1)")?;
        check("q", t.q, t.q > 0.0 && t.q < 1.0, "(0,1)")?;
        check("r", t.r, t.r > 0.5 && t.r < 1.0, "(1/2,1)")?;
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub date: NaiveDate,
    /// `Δ^ES_q / Δ^Q_p`; `None` when `Δ^Q_p = 0`.
    pub ratio_es_q: Option<f64>,
    /// `Δ^ES_q / Δ^ex_r`; `None` when `Δ^ex_r = 0`.
    pub ratio_es_ex: Option<f64>,
}

fn parse_date(s: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(s.trim(), DATE_FORMAT).map_err(|e| Error::Data(format!("bad date `{s}`: {e}")))
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|e| Error::Data(format!("bad number `{s}`: {e}")))
}

/// Reads two named columns from a headed CSV file.
fn read_columns(path: &Path, value_column: &str) -> Result<(Vec<NaiveDate>, Vec<f64>)> {
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Data(format!("{}: missing column `{name}`", path.display())))
    };
    let (di, vi) = (find("date")?, find(value_column)?);
    let mut dates = Vec::new();
    let mut values = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let at = |e: Error| Error::Data(format!("{} row {}: {e}", path.display(), line + 2));
        dates.push(parse_date(rec.get(di).unwrap_or("")).map_err(at)?);
        values.push(parse_f64(rec.get(vi).unwrap_or("")).map_err(at)?);
    }
    Ok((dates, values))
}

/// Loads a `date,close` CSV with header; dates are ISO-8601.
pub fn load_prices(path: &Path) -> Result<PriceSeries> {
    let (dates, prices) = read_columns(path, "close")?;
    PriceSeries::new(dates, prices)
}

/// Loads a `date,loss` CSV with header.
pub fn load_losses(path: &Path) -> Result<LossSeries> {
    let (dates, losses) = read_columns(path, "loss")?;
    LossSeries::new(dates, losses)
}

pub fn write_losses(losses: &LossSeries, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "date,loss")?;
    for (d, l) in losses.dates.iter().zip(&losses.losses) {
        writeln!(w, "{},{}", d.format(DATE_FORMAT), l)?;
    }
    w.flush()?;
    Ok(())
}

/// `ℓ_t = -ln(P_t / P_{t-1})`, dated by the later price.
pub fn to_log_losses(prices: &PriceSeries) -> LossSeries {
    let losses = prices
        .prices
        .windows(2)
        .map(|w| -(w[1] / w[0]).ln())
        .collect();
    LossSeries {
        dates: prices.dates[1..].to_vec(),
        losses,
    }
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den > 0.0 && den.is_finite()).then(|| num / den)
}

/// One row per window of `w` consecutive losses; `len - w + 1` rows.
pub fn rolling_ratios(losses: &LossSeries, cfg: &RollingConfig) -> Result<Vec<RatioRow>> {
    let t = cfg.triple()?;
    let w = cfg.window;
    if w < 2 {
        return Err(Error::InvalidParameter(format!("window {w} < 2")));
    }
    if losses.len() < w {
        return Err(Error::Data(format!(
            "{} losses is shorter than the window {w}",
            losses.len()
        )));
    }
    (0..=losses.len() - w)
        .into_par_iter()
        .map(|start| {
            let mut window = losses.losses[start..start + w].to_vec();
            window.sort_by(f64::total_cmp);
            let law = Distribution::Discrete(DiscreteDistribution::empirical_sorted(&window));
            let des = delta_es(&law, t.q)?;
            Ok(RatioRow {
                date: losses.dates[start + w - 1],
                ratio_es_q: ratio(des, delta_q(&law, t.p)?),
                ratio_es_ex: ratio(des, delta_ex(&law, t.r)?),
            })
        })
        .collect()
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV `date,ratio_es_q,ratio_es_ex`; missing ratios are empty fields.
pub fn export_ratios(rows: &[RatioRow], path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "date,ratio_es_q,ratio_es_ex")?;
    for r in rows {
        writeln!(w, "{},{},{}", r.date.format(DATE_FORMAT), opt(r.ratio_es_q), opt(r.ratio_es_ex))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_ratios(path: &Path) -> Result<Vec<RatioRow>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let field = |i| rec.get(i).unwrap_or("").trim();
        let cell = |i| match field(i) {
            "" => Ok(None),
            s => parse_f64(s).map(Some),
        };
        rows.push(RatioRow {
            date: parse_date(field(0))?,
            ratio_es_q: cell(1)?,
            ratio_es_ex: cell(2)?,
        });
    }
    Ok(rows)
}

/// Median of the present values, `None` if there are none.
pub fn median(values: impl IntoIterator<Item = Option<f64>>) -> Option<f64> {
    let mut v: Vec<f64> = values.into_iter().flatten().collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

pub fn synthetic_start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2000, 1, 3).expect("valid date")
}

/// `n` iid losses drawn from `dist`, dated on consecutive weekdays from
/// `start`.
pub fn synthetic_losses(dist: &Distribution, n: usize, seed: u64, start: NaiveDate) -> Result<LossSeries> {
    let mut rng = stream_rng(seed, 0);
    let losses = sample(dist, n, &mut rng);
    let mut dates = Vec::with_capacity(n);
    let mut d = start;
    while dates.len() < n {
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            dates.push(d);
        }
        d = d
            .checked_add_days(Days::new(1))
            .ok_or_else(|| Error::InvalidParameter("date range overflow".into()))?;
    }
    LossSeries::new(dates, losses)
}

//! The `varmetrics` command line.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::asymptotics::{asymptotic_variance, Estimator, DEFAULT_TOL};
use crate::calibration::{calibration_curve, match_levels, parse_grid, write_curve, LevelTriple};
use crate::error::Error;
use crate::marketdata::{
    export_ratios, load_losses, load_prices, median, rolling_ratios, synthetic_losses, synthetic_start,
    to_log_losses, write_losses, RollingConfig, TripleSource, DEFAULT_WINDOW,
};
use crate::montecarlo::{export_histogram, run_simulation, Profile, SimConfig, DEFAULT_BINS};
use crate::probspace::{parse_distribution, parse_real, Distribution};
use crate::riskmeasures::{Level, RiskMeasure};
use crate::variability::table1::{run_table1, Table1Config};
use crate::variability::{delta_ex_unrestricted, VariabilityKind};

const SPEC_HELP: &str = "\
Distribution specs:
  normal(mu,sigma)   exp(rate)   t(nu)   pareto(alpha)
  discrete(v1:p1,v2:p2,...)     values strictly increasing, weights summing to 1
Numbers may be decimals or fractions, e.g. discrete(0:2/3,5:1/3).";

#[derive(Debug, Parser)]
#[command(name = "varmetrics", version, about = "Variability measures induced by VaR, ES and expectiles", after_help = SPEC_HELP)]
pub struct Cli {
    /// Print a JSON object instead of CSV or a bare value.
    #[arg(long, global = true)]
    pub json: bool,
    /// Significant digits in printed numbers.
    #[arg(long, global = true, default_value_t = 10, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub precision: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a risk measure or a variability measure.
    #[command(after_help = SPEC_HELP)]
    Measure(MeasureArgs),
    /// Asymptotic variance of an empirical estimator.
    #[command(after_help = SPEC_HELP)]
    Asymvar(AsymvarArgs),
    /// Monte Carlo check of asymptotic normality.
    #[command(after_help = SPEC_HELP)]
    Simulate(SimulateArgs),
    /// Match levels (p, q, r) equalizing the three measures.
    #[command(after_help = SPEC_HELP)]
    Calibrate(CalibrateArgs),
    /// Rolling-window ratio series on daily data.
    Rolling(RollingArgs),
    /// Write iid synthetic losses as `date,loss` CSV.
    #[command(name = "synth-losses", after_help = SPEC_HELP)]
    SynthLosses(SynthArgs),
    /// Built-in property suites.
    Selftest(SelftestArgs),
}

fn dist_arg(s: &str) -> Result<Distribution, String> {
    parse_distribution(s).map_err(|e| e.to_string())
}

fn real_arg(s: &str) -> Result<f64, String> {
    parse_real(s).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[arg(long, value_parser = dist_arg)]
    pub dist: Distribution,
    /// varl, varr, es, esl, ex, dq, des, dex, range, var, std, mad, mmd, gini, reldev, ginicoef
    #[arg(long)]
    pub measure: String,
    #[arg(long, value_parser = real_arg)]
    pub p: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AsymvarArgs {
    #[arg(long, value_parser = dist_arg)]
    pub dist: Distribution,
    /// dq, des or dex
    #[arg(long, value_parser = |s: &str| s.parse::<Estimator>().map_err(|e| e.to_string()))]
    pub estimator: Estimator,
    #[arg(long, value_parser = real_arg)]
    pub p: f64,
    /// Absolute quadrature tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ProfileArg {
    Desk,
    Full,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_parser = dist_arg)]
    pub dist: Distribution,
    #[arg(long, value_parser = |s: &str| s.parse::<Estimator>().map_err(|e| e.to_string()))]
    pub estimator: Estimator,
    #[arg(long, value_parser = real_arg)]
    pub p: f64,
    /// Sample size; defaults to the profile's.
    #[arg(long)]
    pub n: Option<usize>,
    /// Replications; defaults to the profile's.
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long, value_enum, default_value = "desk")]
    pub profile: ProfileArg,
    #[arg(long, default_value_t = 20210101)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,
    /// Histogram CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("levels").required(true).args(["p", "grid"])))]
pub struct CalibrateArgs {
    #[arg(long, value_parser = dist_arg)]
    pub dist: Distribution,
    #[arg(long, value_parser = real_arg)]
    pub p: Option<f64>,
    /// `start:stop:step`
    #[arg(long)]
    pub grid: Option<String>,
    /// Curve CSV (columns p,q,r); printed when absent.
    #[arg(long, requires = "grid")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["prices", "losses"])))]
pub struct RollingArgs {
    /// `date,close` CSV.
    #[arg(long)]
    pub prices: Option<PathBuf>,
    /// `date,loss` CSV.
    #[arg(long)]
    pub losses: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
    #[arg(long, value_parser = real_arg, requires_all = ["q", "r"])]
    pub p: Option<f64>,
    #[arg(long, value_parser = real_arg, requires_all = ["p", "r"])]
    pub q: Option<f64>,
    #[arg(long, value_parser = real_arg, requires_all = ["p", "q"])]
    pub r: Option<f64>,
    /// Rule-of-thumb triple index 0, 1 or 2 (default 1).
    #[arg(long, conflicts_with = "p")]
    pub rule: Option<usize>,
    /// Ratio CSV; a summary is printed either way.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_parser = dist_arg)]
    pub dist: Distribution,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 20210101)]
    pub seed: u64,
    /// First date (ISO-8601); later dates skip weekends.
    #[arg(long)]
    pub start: Option<chrono::NaiveDate>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[command(subcommand)]
    pub suite: Suite,
}

#[derive(Debug, Subcommand)]
pub enum Suite {
    /// Property grid of the variability measures.
    Table1 {
        #[arg(long, default_value_t = Table1Config::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = Table1Config::default().trials)]
        trials: usize,
    },
}

/// `x` with `digits` significant digits, trailing zeros dropped.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim(mantissa), exp)
    }
}

struct Out<'a> {
    w: &'a mut dyn Write,
    digits: usize,
}

impl Out<'_> {
    fn num(&self, x: f64) -> String {
        format_sig(x, self.digits)
    }

    /// The printed value as JSON: the same rounded number, or a string for
    /// non-finite values.
    fn json(&self, x: f64) -> Value {
        if x.is_finite() {
            json!(self.num(x).parse::<f64>().expect("formatted number parses"))
        } else {
            json!(self.num(x))
        }
    }

    fn opt(&self, x: Option<f64>) -> String {
        x.map(|v| self.num(v)).unwrap_or_default()
    }

    fn opt_json(&self, x: Option<f64>) -> Value {
        x.map(|v| self.json(v)).unwrap_or(Value::Null)
    }

    fn line(&mut self, s: impl AsRef<str>) -> anyhow::Result<()> {
        writeln!(self.w, "{}", s.as_ref())?;
        Ok(())
    }

    fn object(&mut self, map: Map<String, Value>) -> anyhow::Result<()> {
        self.line(serde_json::to_string(&Value::Object(map))?)
    }
}

fn obj(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Parses `args`, runs the command and returns the exit status: 0 on
/// success, 1 on domain errors, 2 on usage errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().ansi().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::Spec { .. }) | Some(Error::InvalidParameter(_)) if e.chain().count() == 1 => 2,
                _ => 1,
            }
        }
    }
}

fn dispatch(cli: &Cli, w: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    let mut out = Out {
        w,
        digits: cli.precision as usize,
    };
    let json = cli.json;
    match &cli.command {
        Command::Measure(a) => measure(a, &mut out, err, json),
        Command::Asymvar(a) => {
            let r = asymptotic_variance(&a.dist, a.estimator, a.p, a.tol)?;
            if json {
                out.object(obj(vec![
                    ("sigma_sq", out.json(r.sigma_sq)),
                    ("est_abs_error", out.json(r.est_abs_error)),
                    ("method", json!(r.method.to_string())),
                ]))?;
            } else {
                out.line("sigma_sq,est_abs_error,method")?;
                let row = format!("{},{},{}", out.num(r.sigma_sq), out.num(r.est_abs_error), r.method);
                out.line(row)?;
            }
            Ok(0)
        }
        Command::Simulate(a) => simulate(a, &mut out, json),
        Command::Calibrate(a) => calibrate(a, &mut out, json),
        Command::Rolling(a) => rolling(a, &mut out, json),
        Command::SynthLosses(a) => {
            let losses = synthetic_losses(&a.dist, a.n, a.seed, a.start.unwrap_or_else(synthetic_start))?;
            write_losses(&losses, &a.out).with_context(|| format!("writing {}", a.out.display()))?;
            if json {
                out.object(obj(vec![("n", json!(losses.len())), ("out", json!(a.out.display().to_string()))]))?;
            } else {
                out.line(format!("{}", losses.len()))?;
            }
            Ok(0)
        }
        Command::Selftest(SelftestArgs {
            suite: Suite::Table1 { seed, trials },
        }) => {
            let report = run_table1(Table1Config {
                seed: *seed,
                trials: *trials,
            });
            if json {
                let cells: Vec<Value> = report
                    .cells
                    .iter()
                    .map(|c| {
                        json!({
                            "property": c.property.label(),
                            "column": c.column.label(),
                            "expected": c.expected,
                            "passed": c.passed,
                            "detail": c.detail,
                        })
                    })
                    .collect();
                out.object(obj(vec![
                    ("seed", json!(report.seed)),
                    ("trials", json!(report.trials)),
                    ("all_passed", json!(report.all_passed())),
                    ("cells", Value::Array(cells)),
                    ("failures", json!(report.failures())),
                ]))?;
            } else {
                write!(out.w, "{report}")?;
            }
            Ok(if report.all_passed() { 0 } else { 1 })
        }
    }
}

fn measure(a: &MeasureArgs, out: &mut Out, err: &mut dyn Write, json: bool) -> anyhow::Result<i32> {
    let name = a.measure.trim().to_ascii_lowercase();
    let value = if let Ok(m) = name.parse::<RiskMeasure>() {
        let p = a.p.ok_or_else(|| Error::InvalidParameter(format!("`{m}` needs --p")))?;
        m.evaluate(&a.dist, Level::new(p)?)?
    } else if let Ok(kind) = name.parse::<VariabilityKind>() {
        match (kind, a.p) {
            (VariabilityKind::DeltaEx, Some(p)) if p > 0.0 && p <= 0.5 => {
                writeln!(
                    err,
                    "warning: dex at p = {p} <= 1/2 is the signed difference ex_p - ex_(1-p), not a variability measure"
                )?;
                delta_ex_unrestricted(&a.dist, Level::new(p)?)?
            }
            _ => kind.evaluate(&a.dist, a.p)?,
        }
    } else {
        bail!(Error::InvalidParameter(format!("unknown measure `{}`", a.measure)));
    };
    if json {
        let mut map = obj(vec![
            ("dist", json!(a.dist.to_string())),
            ("measure", json!(name)),
            ("value", out.json(value)),
        ]);
        if let Some(p) = a.p {
            map.insert("p".into(), json!(p));
        }
        out.object(map)?;
    } else {
        let s = out.num(value);
        out.line(s)?;
    }
    Ok(0)
}

fn simulate(a: &SimulateArgs, out: &mut Out, json: bool) -> anyhow::Result<i32> {
    let profile = match a.profile {
        ProfileArg::Desk => Profile::Desk,
        ProfileArg::Full => Profile::Full,
    };
    let (n0, r0) = profile.sizes();
    let mut cfg = SimConfig::new(a.dist.clone(), a.estimator, a.p, a.n.unwrap_or(n0), a.reps.unwrap_or(r0), a.seed);
    cfg.bins = a.bins;
    let r = run_simulation(&cfg)?;
    if let Some(path) = &a.out {
        export_histogram(&r, path).with_context(|| format!("writing {}", path.display()))?;
    }
    if json {
        out.object(obj(vec![
            ("estimator", json!(a.estimator.to_string())),
            ("p", json!(a.p)),
            ("n", json!(cfg.n)),
            ("reps", json!(cfg.reps)),
            ("seed", json!(cfg.seed)),
            ("target", out.json(r.target)),
            ("mean", out.json(r.mean)),
            ("variance", out.json(r.variance)),
            ("sigma_sq", out.opt_json(r.sigma_sq)),
            ("ks_distance", out.opt_json(r.ks_distance)),
        ]))?;
    } else {
        out.line("estimator,p,n,reps,seed,target,mean,variance,sigma_sq,ks_distance")?;
        let row = format!(
            "{},{},{},{},{},{},{},{},{},{}",
            a.estimator,
            a.p,
            cfg.n,
            cfg.reps,
            cfg.seed,
            out.num(r.target),
            out.num(r.mean),
            out.num(r.variance),
            out.opt(r.sigma_sq),
            out.opt(r.ks_distance)
        );
        out.line(row)?;
    }
    Ok(0)
}

fn triple_json(out: &Out, t: &LevelTriple) -> Value {
    json!({ "p": t.p, "q": out.json(t.q), "r": out.json(t.r) })
}

fn calibrate(a: &CalibrateArgs, out: &mut Out, json: bool) -> anyhow::Result<i32> {
    let curve = match (&a.grid, a.p) {
        (Some(g), _) => calibration_curve(&a.dist, &parse_grid(g)?)?,
        (None, Some(p)) => vec![match_levels(&a.dist, p)?],
        (None, None) => unreachable!("clap requires --p or --grid"),
    };
    if let Some(path) = &a.out {
        write_curve(&curve, path).with_context(|| format!("writing {}", path.display()))?;
    }
    if json {
        if a.grid.is_some() {
            let rows = curve.iter().map(|t| triple_json(out, t)).collect();
            out.object(obj(vec![("curve", Value::Array(rows))]))?;
        } else {
            let v = triple_json(out, &curve[0]);
            out.line(v.to_string())?;
        }
    } else if a.out.is_none() {
        out.line("p,q,r")?;
        for t in &curve {
            let row = format!("{},{},{}", t.p, out.num(t.q), out.num(t.r));
            out.line(row)?;
        }
    } else {
        out.line(format!("{}", curve.len()))?;
    }
    Ok(0)
}

fn rolling(a: &RollingArgs, out: &mut Out, json: bool) -> anyhow::Result<i32> {
    let losses = match (&a.prices, &a.losses) {
        (Some(p), _) => to_log_losses(&load_prices(p).with_context(|| format!("reading {}", p.display()))?),
        (None, Some(l)) => load_losses(l).with_context(|| format!("reading {}", l.display()))?,
        (None, None) => unreachable!("clap requires an input"),
    };
    let levels = match (a.p, a.q, a.r) {
        (Some(p), Some(q), Some(r)) => TripleSource::Explicit(LevelTriple { p, q, r }),
        _ => TripleSource::RuleOfThumb(a.rule.unwrap_or(1)),
    };
    let cfg = RollingConfig {
        window: a.window,
        levels,
    };
    let rows = rolling_ratios(&losses, &cfg)?;
    if let Some(path) = &a.out {
        export_ratios(&rows, path).with_context(|| format!("writing {}", path.display()))?;
    }
    let med_q = median(rows.iter().map(|r| r.ratio_es_q));
    let med_ex = median(rows.iter().map(|r| r.ratio_es_ex));
    if json {
        out.object(obj(vec![
            ("rows", json!(rows.len())),
            ("median_ratio_es_q", out.opt_json(med_q)),
            ("median_ratio_es_ex", out.opt_json(med_ex)),
        ]))?;
    } else if a.out.is_some() {
        out.line("rows,median_ratio_es_q,median_ratio_es_ex")?;
        let row = format!("{},{},{}", rows.len(), out.opt(med_q), out.opt(med_ex));
        out.line(row)?;
    } else {
        out.line("date,ratio_es_q,ratio_es_ex")?;
        for r in &rows {
            let row = format!("{},{},{}", r.date, out.opt(r.ratio_es_q), out.opt(r.ratio_es_ex));
            out.line(row)?;
        }
    }
    Ok(0)
}

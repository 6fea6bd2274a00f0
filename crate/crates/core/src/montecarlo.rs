//! Monte Carlo check of the asymptotic normality of the empirical
//! estimators.
//!
//! Replication `i` draws from its own ChaCha stream `(seed, i)`, so results
//! do not depend on how replications are scheduled across threads.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::asymptotics::{asymptotic_variance, Estimator, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::probspace::special::{norm_cdf, norm_pdf};
use crate::probspace::{DiscreteDistribution, Distribution};
use crate::riskmeasures::quantile_right_discrete;

pub const DEFAULT_BINS: usize = 60;

/// Sample size and replication count presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// `n = 5000`, `R = 1000`.
    Desk,
    /// `n = 10_000`, `R = 5000`.
    Full,
}

impl Profile {
    pub fn sizes(self) -> (usize, usize) {
        match self {
            Profile::Desk => (5000, 1000),
            Profile::Full => (10_000, 5000),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub dist: Distribution,
    pub estimator: Estimator,
    pub p: f64,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub bins: usize,
}

impl SimConfig {
    pub fn new(dist: Distribution, estimator: Estimator, p: f64, n: usize, reps: usize, seed: u64) -> Self {
        SimConfig {
            dist,
            estimator,
            p,
            n,
            reps,
            seed,
            bins: DEFAULT_BINS,
        }
    }

    pub fn with_profile(dist: Distribution, estimator: Estimator, p: f64, profile: Profile, seed: u64) -> Self {
        let (n, reps) = profile.sizes();
        Self::new(dist, estimator, p, n, reps, seed)
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!("sample size {} < 2", self.n)));
        }
        if self.reps < 1 {
            return Err(Error::InvalidParameter("need at least one replication".into()));
        }
        if self.bins < 1 {
            return Err(Error::InvalidParameter("need at least one histogram bin".into()));
        }
        Ok(())
    }
}

/// Histogram of the raw errors `Δ̂ − Δ` with the limiting normal density
/// `N(0, σ²/n)` at each bin midpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    /// Missing when no reference variance is available.
    pub normal_density: Vec<Option<f64>>,
}

impl Histogram {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// True value of the measure.
    pub target: f64,
    pub estimates: Vec<f64>,
    /// `√n (Δ̂_i − Δ)`.
    pub errors: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
    /// Reference `σ²` from the asymptotic formula, when the law is regular.
    pub sigma_sq: Option<f64>,
    /// Kolmogorov–Smirnov distance of the errors to `N(0, σ²)`.
    pub ks_distance: Option<f64>,
    pub histogram: Histogram,
}

/// Uniform on `(0, 1)` from the top 53 bits, never 0 or 1.
fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// The generator for replication `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws `n` observations by inverse-cdf transform.
pub fn sample(dist: &Distribution, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match dist {
        Distribution::Parametric(d) => (0..n).map(|_| d.quantile(uniform(rng))).collect(),
        Distribution::Discrete(d) => (0..n)
            .map(|_| quantile_right_discrete(d, uniform(rng)))
            .collect(),
    }
}

/// The estimator applied to the empirical law of a sample.
pub fn estimate(estimator: Estimator, mut sample: Vec<f64>, p: f64) -> Result<f64> {
    if sample.iter().any(|x| !x.is_finite()) {
        return Err(Error::Data("non-finite observation".into()));
    }
    sample.sort_by(f64::total_cmp);
    let law = Distribution::Discrete(DiscreteDistribution::empirical_sorted(&sample));
    estimator.evaluate(&law, p)
}

fn replicate(dist: &Distribution, est: Estimator, p: f64, n: usize, seed: u64, stream: u64) -> Result<f64> {
    let mut rng = stream_rng(seed, stream);
    estimate(est, sample(dist, n, &mut rng), p)
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var)
}

/// `sup_x |F_R(x) − Φ(x/σ)|` for the empirical cdf `F_R` of `xs`.
pub fn ks_distance_normal(xs: &[f64], sigma: f64) -> f64 {
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    let r = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = if sigma > 0.0 {
                norm_cdf(x / sigma)
            } else if x >= 0.0 {
                1.0
            } else {
                0.0
            };
            ((i + 1) as f64 / r - f).max(f - i as f64 / r)
        })
        .fold(0.0, f64::max)
}

fn histogram(raw: &[f64], sigma_sq: Option<f64>, n: usize, bins: usize) -> Histogram {
    let (mean, var) = mean_var(raw);
    let spread = match sigma_sq {
        Some(s) if s > 0.0 => (s / n as f64).sqrt(),
        _ => var.sqrt(),
    };
    let half = if spread > 0.0 { 4.0 * spread } else { 0.5 };
    let (lo, hi) = (mean - half, mean + half);
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
    let mut counts = vec![0usize; bins];
    for &x in raw {
        let k = ((x - lo) / width).floor();
        let k = if k < 0.0 { 0 } else { (k as usize).min(bins - 1) };
        counts[k] += 1;
    }
    let normal_density = (0..bins)
        .map(|i| {
            sigma_sq.filter(|s| *s > 0.0).map(|s| {
                let sd = (s / n as f64).sqrt();
                norm_pdf(0.5 * (edges[i] + edges[i + 1]) / sd) / sd
            })
        })
        .collect();
    Histogram {
        edges,
        counts,
        normal_density,
    }
}

/// Runs `reps` replications of the estimator on samples of size `n`.
pub fn run_simulation(cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let target = cfg.estimator.evaluate(&cfg.dist, cfg.p)?;
    if !target.is_finite() {
        return Err(Error::Divergent(format!(
            "{} is infinite for {}",
            cfg.estimator, cfg.dist
        )));
    }
    let sigma_sq = match asymptotic_variance(&cfg.dist, cfg.estimator, cfg.p, DEFAULT_TOL) {
        Ok(r) => Some(r.sigma_sq),
        Err(Error::Irregular(_)) => None,
        Err(e) => return Err(e),
    };
    let estimates: Vec<f64> = (0..cfg.reps as u64)
        .into_par_iter()
        .map(|i| replicate(&cfg.dist, cfg.estimator, cfg.p, cfg.n, cfg.seed, i))
        .collect::<Result<_>>()?;
    let root_n = (cfg.n as f64).sqrt();
    let raw: Vec<f64> = estimates.iter().map(|e| e - target).collect();
    let errors: Vec<f64> = raw.iter().map(|e| root_n * e).collect();
    let (mean, variance) = mean_var(&errors);
    let ks_distance = sigma_sq.map(|s| ks_distance_normal(&errors, s.sqrt()));
    let histogram = histogram(&raw, sigma_sq, cfg.n, cfg.bins);
    Ok(SimResult {
        target,
        estimates,
        errors,
        mean,
        variance,
        sigma_sq,
        ks_distance,
        histogram,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub mae: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Least-squares slope of `ln MAE` on `ln n`; `None` when some MAE is 0.
    pub slope: Option<f64>,
}

/// Mean absolute error of the estimator for each sample size in `n_grid`.
pub fn consistency_sweep(
    dist: &Distribution,
    estimator: Estimator,
    p: f64,
    n_grid: &[usize],
    reps: usize,
    seed: u64,
) -> Result<SweepResult> {
    if n_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("sample sizes must increase".into()));
    }
    if n_grid.first().is_some_and(|&n| n < 2) || reps < 1 {
        return Err(Error::InvalidParameter("need n >= 2 and at least one replication".into()));
    }
    let target = estimator.evaluate(dist, p)?;
    let mut rows = Vec::with_capacity(n_grid.len());
    for (k, &n) in n_grid.iter().enumerate() {
        let errs: Vec<f64> = (0..reps as u64)
            .into_par_iter()
            .map(|i| replicate(dist, estimator, p, n, seed, ((k as u64) << 32) | i).map(|e| (e - target).abs()))
            .collect::<Result<_>>()?;
        rows.push(SweepRow {
            n,
            mae: errs.iter().sum::<f64>() / reps as f64,
        });
    }
    let slope = if rows.len() >= 2 && rows.iter().all(|r| r.mae > 0.0) {
        let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.mae.ln()).collect();
        let (mx, _) = mean_var(&xs);
        let (my, _) = mean_var(&ys);
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        Some(sxy / sxx)
    } else {
        None
    };
    Ok(SweepResult { rows, slope })
}

/// Writes `bin_left,bin_right,count,normal_density_at_midpoint`; a missing
/// density is an empty field. Values use the shortest round-trip format.
pub fn export_histogram(result: &SimResult, path: &Path) -> Result<()> {
    write_histogram(&result.histogram, path)
}

pub fn write_histogram(h: &Histogram, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "bin_left,bin_right,count,normal_density_at_midpoint")?;
    for i in 0..h.counts.len() {
        let dens = h.normal_density[i].map(|d| d.to_string()).unwrap_or_default();
        writeln!(w, "{},{},{},{}", h.edges[i], h.edges[i + 1], h.counts[i], dens)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_histogram(path: &Path) -> Result<Histogram> {
    let mut rdr = csv::Reader::from_path(path)?;
    let mut edges = Vec::new();
    let mut counts = Vec::new();
    let mut normal_density = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Data(format!("bad number `{s}`: {e}")));
        let left = num(field(0))?;
        let right = num(field(1))?;
        if edges.is_empty() {
            edges.push(left);
        }
        edges.push(right);
        counts.push(
            field(2)
                .parse::<usize>()
                .map_err(|e| Error::Data(format!("bad count: {e}")))?,
        );
        normal_density.push(match field(3) {
            "" => None,
            s => Some(num(s)?),
        });
    }
    Ok(Histogram {
        edges,
        counts,
        normal_density,
    })
}

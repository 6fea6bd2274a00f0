//! Matching levels `(p, q, r)` so that `Δ^Q_p = Δ^ES_q = Δ^ex_r` on a
//! continuous benchmark law.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::probspace::Distribution;
use crate::variability::{delta_es, delta_ex, delta_q};

/// Distance kept from the ends of a level interval when bracketing.
const EDGE: f64 = 1e-10;
pub const DEFAULT_GRID_STEP: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelTriple {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

/// The rounded triples that equalize the three measures for normal risks.
pub fn rule_of_thumb() -> [LevelTriple; 3] {
    [
        LevelTriple { p: 0.9, q: 0.75, r: 0.97 },
        LevelTriple { p: 0.95, q: 0.875, r: 0.99 },
        LevelTriple { p: 0.99, q: 0.97, r: 0.999 },
    ]
}

fn tolerance(target: f64) -> f64 {
    1e-9 * (1.0 + target)
}

/// Bisection for the level in `[lo, hi]` at which the nondecreasing map `f`
/// hits `target`. The bracket must span the target.
fn solve_level(f: impl Fn(f64) -> Result<f64>, target: f64, mut lo: f64, mut hi: f64, what: &str) -> Result<f64> {
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    if !(f_lo <= target && target <= f_hi) {
        return Err(Error::Unattainable {
            target,
            reason: format!("{what} ranges over [{f_lo}, {f_hi}] on levels [{lo}, {hi}]"),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let level = 0.5 * (lo + hi);
    let residual = (f(level)? - target).abs();
    if residual >= tolerance(target) {
        return Err(Error::Unattainable {
            target,
            reason: format!("{what} residual {residual} after bisection; the map is not continuous here"),
        });
    }
    Ok(level)
}

/// Levels `q` and `r` with `Δ^ES_q = Δ^ex_r = Δ^Q_p`.
pub fn match_levels(dist: &Distribution, p: f64) -> Result<LevelTriple> {
    if dist.as_parametric().is_none() {
        return Err(Error::InvalidParameter(
            "level matching needs a continuous law".into(),
        ));
    }
    if !dist.has_finite_mean() {
        return Err(Error::InfiniteMean);
    }
    if !(p > 0.5 && p < 1.0) {
        return Err(Error::LevelOutOfDomain {
            what: "level matching",
            level: p,
            domain: "(1/2,1)",
        });
    }
    let target = delta_q(dist, p)?;
    let q = solve_level(|l| delta_es(dist, l), target, EDGE, 1.0 - EDGE, "the inter-ES difference")?;
    let r = solve_level(
        |l| delta_ex(dist, l),
        target,
        0.5 + EDGE,
        1.0 - EDGE,
        "the inter-expectile difference",
    )?;
    Ok(LevelTriple { p, q, r })
}

/// `match_levels` at each grid point, in grid order.
pub fn calibration_curve(dist: &Distribution, p_grid: &[f64]) -> Result<Vec<LevelTriple>> {
    p_grid.par_iter().map(|&p| match_levels(dist, p)).collect()
}

/// Levels `start, start + step, ...` up to `stop` inclusive, computed as
/// `start + k·step` to avoid drift.
pub fn level_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(start <= stop) || !start.is_finite() || !stop.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "bad grid {start}:{stop}:{step}"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|k| start + k as f64 * step).collect())
}

/// Parses `start:stop:step`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::InvalidParameter(format!("grid `{s}` is not start:stop:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    level_grid(nums[0], nums[1], nums[2])
}

/// The grid `0.505, 0.51, ..., 0.995`.
pub fn default_grid() -> Vec<f64> {
    (101..=199).map(|k| k as f64 * DEFAULT_GRID_STEP).collect()
}

/// Writes the curve as CSV with columns `p,q,r`.
pub fn write_curve(curve: &[LevelTriple], path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "p,q,r")?;
    for t in curve {
        writeln!(w, "{},{},{}", t.p, t.q, t.r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probspace::{make_discrete, make_exponential, make_normal, make_student_t};

    fn normal() -> Distribution {
        make_normal(0.0, 1.0).unwrap().into()
    }

    #[test]
    fn normal_rule_of_thumb() {
        for t in rule_of_thumb() {
            let m = match_levels(&normal(), t.p).unwrap();
            assert!((m.q - t.q).abs() <= 0.01, "{m:?}");
            assert!((m.r - t.r).abs() <= 0.005, "{m:?}");
        }
    }

    #[test]
    fn round_trip_residuals() {
        let d: Distribution = make_student_t(4.0).unwrap().into();
        let m = match_levels(&d, 0.93).unwrap();
        let target = delta_q(&d, 0.93).unwrap();
        assert!((delta_es(&d, m.q).unwrap() - target).abs() < tolerance(target));
        assert!((delta_ex(&d, m.r).unwrap() - target).abs() < tolerance(target));
    }

    #[test]
    fn exponential_tail_ratio() {
        let d: Distribution = make_exponential(1.0).unwrap().into();
        let m = match_levels(&d, 0.99).unwrap();
        let ratio = (1.0 - m.q) / (1.0 - m.p);
        assert!((ratio / std::f64::consts::E - 1.0).abs() < 0.1, "{ratio}");
    }

    #[test]
    fn location_scale_invariance() {
        let a = match_levels(&normal(), 0.8).unwrap();
        let b = match_levels(&make_normal(-3.0, 7.5).unwrap().into(), 0.8).unwrap();
        assert!((a.q - b.q).abs() < 1e-8 && (a.r - b.r).abs() < 1e-8);
    }

    #[test]
    fn rejects_discrete_and_bad_levels() {
        let d: Distribution = make_discrete(&[0.0, 1.0], &[0.5, 0.5]).unwrap().into();
        assert!(match_levels(&d, 0.9).is_err());
        assert!(match_levels(&normal(), 0.5).is_err());
        assert!(match_levels(&normal(), 1.0).is_err());
    }

    #[test]
    fn unattainable_target_is_reported() {
        let f = |l: f64| Ok(l.min(0.5));
        match solve_level(f, 0.7, 0.0, 1.0, "a capped map") {
            Err(Error::Unattainable { target, .. }) => assert_eq!(target, 0.7),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn grids() {
        let g = parse_grid("0.6:0.99:0.01").unwrap();
        assert_eq!(g.len(), 40);
        assert!((g[39] - 0.99).abs() < 1e-12);
        assert_eq!(default_grid().len(), 99);
        assert!(parse_grid("0.6:0.9").is_err());
        assert!(parse_grid("0.9:0.6:0.1").is_err());
    }
}

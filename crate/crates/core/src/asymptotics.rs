//! Asymptotic variances of the empirical inter-quantile, inter-ES and
//! inter-expectile estimators under iid sampling from a law with a positive
//! density on its support.
//!
//! All three are quadratic forms `∫∫ d(u) d(v) (u∧v − uv) / (g(u) g(v))` in
//! a step weight `d` on the unit interval, with `g = f ∘ F^-1`. The step
//! weight splits the square into rectangular blocks. Off-diagonal blocks
//! factor into two closed-form single integrals. Diagonal blocks reduce to
//! one adaptive quadrature because the inner integral
//! `A(v) = ∫_a^v u / g(u) du = v Q(v) − a Q(a) − ∫_a^v Q` has a closed form.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::probspace::{Distribution, ParametricDistribution};
use crate::quadrature::{integrate, Tolerance};
use crate::riskmeasures::{es, es_left, expectile, Level};

/// Default absolute tolerance on a reported variance.
pub const DEFAULT_TOL: f64 = 1e-8;

/// The three empirical estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    DeltaQ,
    DeltaEs,
    DeltaEx,
}

impl Estimator {
    pub const ALL: [Estimator; 3] = [Estimator::DeltaQ, Estimator::DeltaEs, Estimator::DeltaEx];

    pub fn name(self) -> &'static str {
        match self {
            Estimator::DeltaQ => "dq",
            Estimator::DeltaEs => "des",
            Estimator::DeltaEx => "dex",
        }
    }

    /// The population value of the measure.
    pub fn evaluate(self, dist: &Distribution, p: f64) -> Result<f64> {
        match self {
            Estimator::DeltaQ => crate::variability::delta_q(dist, p),
            Estimator::DeltaEs => crate::variability::delta_es(dist, p),
            Estimator::DeltaEx => crate::variability::delta_ex(dist, p),
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Estimator::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown estimator `{s}` (dq, des, dex)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Quadrature,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymVarReport {
    pub sigma_sq: f64,
    pub method: Method,
    pub est_abs_error: f64,
}

/// The quantile density `g = f ∘ F^-1` of a parametric law.
#[derive(Debug, Clone, Copy)]
pub struct QuantileDensity<'a>(pub &'a ParametricDistribution);

impl QuantileDensity<'_> {
    pub fn eval(&self, t: f64) -> Result<f64> {
        g_eval(self.0, t)
    }
}

/// `f(F^-1(t))` for `t in (0, 1)`.
pub fn g_eval(dist: &ParametricDistribution, t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::LevelOutOfDomain {
            what: "the quantile density",
            level: t,
            domain: "(0,1)",
        });
    }
    let g = dist.density_at_quantile(t);
    if g > 0.0 && g.is_finite() {
        Ok(g)
    } else {
        Err(Error::Irregular(format!("density {g} at the {t}-quantile")))
    }
}

fn check_level(p: f64) -> Result<()> {
    if p > 0.5 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::LevelOutOfDomain {
            what: "the asymptotic variance",
            level: p,
            domain: "(1/2,1)",
        })
    }
}

/// `2 + delta` moments for some `delta > 0`, decided by family.
fn check_moments(dist: &ParametricDistribution, what: &str) -> Result<()> {
    if dist.moment_index() > 2.0 {
        Ok(())
    } else {
        Err(Error::Divergent(format!(
            "{what} needs more than two finite moments; {dist} has moment index {}",
            dist.moment_index()
        )))
    }
}

/// Asymptotic variance of the empirical inter-quantile difference.
pub fn sigma_q_sq(dist: &ParametricDistribution, p: f64) -> Result<AsymVarReport> {
    check_level(p)?;
    let (gp, gq) = (g_eval(dist, p)?, g_eval(dist, 1.0 - p)?);
    let v = p * (1.0 - p) / (gp * gp) + p * (1.0 - p) / (gq * gq)
        - 2.0 * (1.0 - p) * (1.0 - p) / (gp * gq);
    Ok(AsymVarReport {
        sigma_sq: v.max(0.0),
        method: Method::ClosedForm,
        est_abs_error: 0.0,
    })
}

/// Closed-form pieces of the block integrals for one law.
struct Blocks<'a> {
    dist: &'a ParametricDistribution,
    law: Distribution,
    tol: Tolerance,
}

impl<'a> Blocks<'a> {
    fn new(dist: &'a ParametricDistribution, tol: f64) -> Self {
        Blocks {
            dist,
            law: Distribution::Parametric(*dist),
            tol: Tolerance::absolute(tol),
        }
    }

    /// `∫_a^b Q(u) du`, from whichever tail avoids cancellation.
    fn q_integral(&self, a: f64, b: f64) -> f64 {
        let upper = |s: f64| {
            if s <= 0.0 {
                self.law.mean().expect("finite mean")
            } else if s >= 1.0 {
                0.0
            } else {
                (1.0 - s) * es(&self.law, Level::new(s).unwrap())
            }
        };
        let lower = |s: f64| {
            if s <= 0.0 {
                0.0
            } else if s >= 1.0 {
                self.law.mean().expect("finite mean")
            } else {
                s * es_left(&self.law, Level::new(s).unwrap())
            }
        };
        if b <= 0.5 {
            lower(b) - lower(a)
        } else {
            upper(a) - upper(b)
        }
    }

    /// `s Q(s)`, with the limit 0 at `s = 0`.
    fn s_q(&self, s: f64) -> f64 {
        if s <= 0.0 {
            0.0
        } else {
            s * self.dist.quantile(s)
        }
    }

    /// `(1 - s) Q(s)`, with the limit 0 at `s = 1`.
    fn sbar_q(&self, s: f64) -> f64 {
        if s >= 1.0 {
            0.0
        } else {
            (1.0 - s) * self.dist.quantile(s)
        }
    }

    /// `∫_a^b u / g(u) du = ∫_a^b u dQ(u)`.
    fn left_factor(&self, a: f64, b: f64) -> f64 {
        self.s_q(b) - self.s_q(a) - self.q_integral(a, b)
    }

    /// `∫_c^d (1 - v) / g(v) dv = ∫_c^d (1 - v) dQ(v)`.
    fn right_factor(&self, c: f64, d: f64) -> f64 {
        self.sbar_q(d) - self.sbar_q(c) + self.q_integral(c, d)
    }

    /// `I(J, J)` for `J = [a, b]`, returned with its error estimate.
    fn diagonal(&self, a: f64, b: f64, tol: Tolerance) -> (f64, f64) {
        if b <= a {
            return (0.0, 0.0);
        }
        if b >= 1.0 {
            return self.upper_diagonal(a, tol);
        }
        let integrand = |v: f64| {
            let g = self.dist.density_at_quantile(v);
            if !(g > 0.0) || !g.is_finite() {
                return 0.0;
            }
            let inner = self.left_factor(a, v);
            let r = (1.0 - v) / g * inner;
            if r.is_finite() {
                r
            } else {
                0.0
            }
        };
        let r = integrate(integrand, a, b, tol);
        (2.0 * r.value, 2.0 * r.abs_error)
    }

    /// `I(J, J)` for `J = [a, 1]`, integrated over the tail probability
    /// `s = 1 - v`: near `v = 1` the integrand is unbounded and `1 - v`
    /// itself has too few significant digits.
    fn upper_diagonal(&self, a: f64, tol: Tolerance) -> (f64, f64) {
        let d = self.dist;
        let (sa, qa) = (1.0 - a, d.quantile(a));
        let ta = d.tail_integral(sa);
        let integrand = |s: f64| {
            let g = d.density_at_tail_quantile(s);
            if !(g > 0.0) || !g.is_finite() {
                return 0.0;
            }
            // vQ(v) - aQ(a) - ∫_a^v Q at v = 1 - s.
            let inner = (1.0 - s) * d.tail_quantile(s) - a * qa - (ta - d.tail_integral(s));
            let r = s / g * inner;
            if r.is_finite() {
                r
            } else {
                0.0
            }
        };
        let r = integrate(integrand, 0.0, sa, tol);
        (2.0 * r.value, 2.0 * r.abs_error)
    }

    /// `I(J_i, J_j)` for `J_i = [a, b]` left of `J_j = [c, d]`.
    fn off_diagonal(&self, (a, b): (f64, f64), (c, d): (f64, f64)) -> f64 {
        if b <= a || d <= c {
            return 0.0;
        }
        self.left_factor(a, b) * self.right_factor(c, d)
    }

    /// `∫∫ d(u) d(v) K(u, v) / (g(u) g(v))` for a step weight with value
    /// `weights[i]` on `[cuts[i], cuts[i+1]]`. Blocks are accumulated in a
    /// fixed order.
    fn quadratic_form(&self, cuts: &[f64], weights: &[f64]) -> (f64, f64) {
        let m = weights.len();
        let mut total = 0.0;
        let mut err = 0.0;
        // Split the error budget so that the weighted sum meets `self.tol`.
        let active = weights.iter().filter(|w| **w != 0.0).count().max(1) as f64;
        for i in 0..m {
            if weights[i] == 0.0 {
                continue;
            }
            let ji = (cuts[i], cuts[i + 1]);
            let budget = Tolerance::absolute(self.tol.abs / (2.0 * active * weights[i] * weights[i]));
            let (dv, de) = self.diagonal(ji.0, ji.1, budget);
            total += weights[i] * weights[i] * dv;
            err += weights[i] * weights[i] * de;
            for j in i + 1..m {
                if weights[j] == 0.0 {
                    continue;
                }
                let jj = (cuts[j], cuts[j + 1]);
                total += 2.0 * weights[i] * weights[j] * self.off_diagonal(ji, jj);
            }
        }
        (total, err)
    }
}

/// Asymptotic variance of the empirical inter-ES difference.
pub fn sigma_es_sq(dist: &ParametricDistribution, p: f64, tol: f64) -> Result<AsymVarReport> {
    check_level(p)?;
    check_moments(dist, "the inter-ES asymptotic variance")?;
    let b = Blocks::new(dist, tol);
    let w = 1.0 / (1.0 - p);
    let (v, e) = b.quadratic_form(&[0.0, 1.0 - p, p, 1.0], &[-w, 0.0, w]);
    Ok(AsymVarReport {
        sigma_sq: v.max(0.0),
        method: Method::Quadrature,
        est_abs_error: e,
    })
}

/// The pieces `s_p`, `s_{1-p}` and `c_p` of the inter-expectile variance,
/// `sigma^2 = s_p + s_{1-p} - 2 c_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectileTerms {
    pub s_p: f64,
    pub s_1mp: f64,
    pub c_p: f64,
    /// `F(ex_p)` and `F(ex_{1-p})`.
    pub level_p: f64,
    pub level_1mp: f64,
    pub est_abs_error: f64,
}

/// Value of the normalized expectile weight for level `r` below and above
/// `F(ex_r)`, and the normalizer `(1 - 2r) F(ex_r) + r`.
fn expectile_weight(r: f64, level: f64) -> (f64, f64, f64) {
    let norm = (1.0 - 2.0 * r) * level + r;
    ((1.0 - r) / norm, r / norm, norm)
}

pub fn expectile_terms(dist: &ParametricDistribution, p: f64, tol: f64) -> Result<ExpectileTerms> {
    check_level(p)?;
    check_moments(dist, "the inter-expectile asymptotic variance")?;
    let law = Distribution::Parametric(*dist);
    let lp = Level::new(p)?;
    let t_hi = dist.cdf(expectile(&law, lp)?);
    let t_lo = dist.cdf(expectile(&law, lp.complement())?);
    let (hp_lo, hp_hi, _) = expectile_weight(p, t_hi);
    let (hq_lo, hq_hi, _) = expectile_weight(1.0 - p, t_lo);
    let cuts = [0.0, t_lo, t_hi, 1.0];
    let wp = [hp_lo, hp_lo, hp_hi];
    let wq = [hq_lo, hq_hi, hq_hi];
    let b = Blocks::new(dist, tol);
    // Six distinct blocks on the three-interval partition.
    let mut diag = [(0.0, 0.0); 3];
    for (i, d) in diag.iter_mut().enumerate() {
        let weight = (wp[i].abs() + wq[i].abs()).powi(2);
        *d = b.diagonal(cuts[i], cuts[i + 1], Tolerance::absolute(tol / (3.0 * weight)));
    }
    let mut off = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i + 1..3 {
            off[i][j] = b.off_diagonal((cuts[i], cuts[i + 1]), (cuts[j], cuts[j + 1]));
            off[j][i] = off[i][j];
        }
    }
    let form = |x: &[f64; 3], y: &[f64; 3]| {
        let mut v = 0.0;
        let mut e = 0.0;
        for i in 0..3 {
            v += x[i] * y[i] * diag[i].0;
            e += (x[i] * y[i]).abs() * diag[i].1;
            for j in 0..3 {
                if i != j {
                    v += x[i] * y[j] * off[i][j];
                }
            }
        }
        (v, e)
    };
    let (s_p, e1) = form(&wp, &wp);
    let (s_1mp, e2) = form(&wq, &wq);
    let (c_p, e3) = form(&wp, &wq);
    Ok(ExpectileTerms {
        s_p,
        s_1mp,
        c_p,
        level_p: t_hi,
        level_1mp: t_lo,
        est_abs_error: e1 + e2 + 2.0 * e3,
    })
}

/// Asymptotic variance of the empirical inter-expectile difference.
pub fn sigma_ex_sq(dist: &ParametricDistribution, p: f64, tol: f64) -> Result<AsymVarReport> {
    let t = expectile_terms(dist, p, tol)?;
    Ok(AsymVarReport {
        sigma_sq: (t.s_p + t.s_1mp - 2.0 * t.c_p).max(0.0),
        method: Method::Quadrature,
        est_abs_error: t.est_abs_error,
    })
}

/// Dispatches on the estimator. Discrete laws violate the density
/// assumption and are rejected.
pub fn asymptotic_variance(
    dist: &Distribution,
    estimator: Estimator,
    p: f64,
    tol: f64,
) -> Result<AsymVarReport> {
    let Distribution::Parametric(d) = dist else {
        return Err(Error::Irregular(
            "asymptotic variances need a law with a positive density".into(),
        ));
    };
    match estimator {
        Estimator::DeltaQ => sigma_q_sq(d, p),
        Estimator::DeltaEs => sigma_es_sq(d, p, tol),
        Estimator::DeltaEx => sigma_ex_sq(d, p, tol),
    }
}

//! Left and right quantiles, upper and lower Expected Shortfall, and
//! expectiles.
//!
//! Finitely supported laws (including empirical laws of samples) are
//! evaluated exactly from the quantile step function; parametric laws use
//! closed forms. Empirical quantiles are the order-statistic infima, never
//! interpolated.

mod discrete;
mod parametric;

use std::fmt;
use std::str::FromStr;

pub use discrete::{
    es_discrete, es_left_discrete, expectile_discrete, quantile_left_discrete,
    quantile_right_discrete,
};

use crate::error::{Error, Result};
use crate::probspace::Distribution;

/// A probability level strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Level(f64);

impl Level {
    pub fn new(p: f64) -> Result<Level> {
        if p > 0.0 && p < 1.0 {
            Ok(Level(p))
        } else {
            Err(Error::LevelOutOfDomain {
                what: "a probability level",
                level: p,
                domain: "(0,1)",
            })
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `1 - p`.
    pub fn complement(self) -> Level {
        Level(1.0 - self.0)
    }
}

impl TryFrom<f64> for Level {
    type Error = Error;

    fn try_from(p: f64) -> Result<Level> {
        Level::new(p)
    }
}

/// Right quantile `Q_p(X) = inf{x : P(X <= x) > p}`.
pub fn quantile_right(dist: &Distribution, p: Level) -> f64 {
    match dist {
        Distribution::Parametric(d) => d.quantile(p.get()),
        Distribution::Discrete(d) => quantile_right_discrete(d, p.get()),
    }
}

/// Left quantile `Q^-_p(X) = inf{x : P(X <= x) >= p}`.
pub fn quantile_left(dist: &Distribution, p: Level) -> f64 {
    match dist {
        Distribution::Parametric(d) => d.quantile(p.get()),
        Distribution::Discrete(d) => quantile_left_discrete(d, p.get()),
    }
}

/// Upper Expected Shortfall, the average of `Q_r` over `r in (p, 1)`.
/// Returns `+inf` when the upper tail is not integrable.
pub fn es(dist: &Distribution, p: Level) -> f64 {
    match dist {
        Distribution::Parametric(d) => parametric::es(d, p.get()),
        Distribution::Discrete(d) => es_discrete(d, p.get()),
    }
}

/// Lower Expected Shortfall, the average of `Q_r` over `r in (0, p)`.
/// Returns `-inf` when the lower tail is not integrable.
pub fn es_left(dist: &Distribution, p: Level) -> f64 {
    match dist {
        Distribution::Parametric(d) => parametric::es_left(d, p.get()),
        Distribution::Discrete(d) => es_left_discrete(d, p.get()),
    }
}

/// The expectile at level `p`: the root of
/// `p E[(X - x)_+] = (1 - p) E[(X - x)_-]`.
pub fn expectile(dist: &Distribution, p: Level) -> Result<f64> {
    match dist {
        Distribution::Parametric(d) => parametric::expectile(d, p.get()),
        Distribution::Discrete(d) => Ok(expectile_discrete(d, p.get())),
    }
}

/// The five base risk measures, named as on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiskMeasure {
    /// `varl`
    QuantileLeft,
    /// `varr`
    QuantileRight,
    /// `es`
    Es,
    /// `esl`
    EsLeft,
    /// `ex`
    Expectile,
}

impl RiskMeasure {
    pub const ALL: [RiskMeasure; 5] = [
        RiskMeasure::QuantileLeft,
        RiskMeasure::QuantileRight,
        RiskMeasure::Es,
        RiskMeasure::EsLeft,
        RiskMeasure::Expectile,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RiskMeasure::QuantileLeft => "varl",
            RiskMeasure::QuantileRight => "varr",
            RiskMeasure::Es => "es",
            RiskMeasure::EsLeft => "esl",
            RiskMeasure::Expectile => "ex",
        }
    }

    pub fn evaluate(self, dist: &Distribution, p: Level) -> Result<f64> {
        Ok(match self {
            RiskMeasure::QuantileLeft => quantile_left(dist, p),
            RiskMeasure::QuantileRight => quantile_right(dist, p),
            RiskMeasure::Es => es(dist, p),
            RiskMeasure::EsLeft => es_left(dist, p),
            RiskMeasure::Expectile => expectile(dist, p)?,
        })
    }
}

impl fmt::Display for RiskMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RiskMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RiskMeasure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown risk measure `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probspace::{make_discrete, make_exponential, make_finite_rv, make_normal, make_pareto};
    use approx::assert_abs_diff_eq;

    fn lv(p: f64) -> Level {
        Level::new(p).unwrap()
    }

    fn one_to_ten() -> Distribution {
        make_finite_rv(&(1..=10).map(f64::from).collect::<Vec<_>>())
            .unwrap()
            .into()
    }

    #[test]
    fn level_domain() {
        assert!(Level::new(0.0).is_err());
        assert!(Level::new(1.0).is_err());
        assert!(Level::new(f64::NAN).is_err());
        assert_eq!(Level::new(0.25).unwrap().complement().get(), 0.75);
    }

    #[test]
    fn sample_quantiles_are_order_statistics() {
        let d = one_to_ten();
        assert_eq!(quantile_right(&d, lv(0.9)), 10.0);
        assert_eq!(quantile_left(&d, lv(0.9)), 9.0);
        assert_eq!(quantile_right(&d, lv(0.05)), 1.0);
        assert_eq!(quantile_left(&d, lv(0.05)), 1.0);
        assert_eq!(quantile_right(&d, lv(0.55)), 6.0);
        assert_eq!(quantile_left(&d, lv(0.55)), 6.0);
    }

    #[test]
    fn two_point_left_quantile_at_half() {
        let d: Distribution = make_discrete(&[-1.0, 1.0], &[0.5, 0.5]).unwrap().into();
        assert_eq!(quantile_left(&d, lv(0.5)), -1.0);
        assert_eq!(quantile_right(&d, lv(0.5)), 1.0);
    }

    #[test]
    fn bernoulli_right_quantile_is_zero() {
        let (p, eps) = (0.9, 0.05);
        let q = 1.0 - p - eps;
        let d: Distribution = make_discrete(&[0.0, 1.0], &[1.0 - q, q]).unwrap().into();
        assert_eq!(quantile_right(&d, lv(p)), 0.0);
        assert_eq!(quantile_left(&d, lv(1.0 - p)), 0.0);
    }

    #[test]
    fn sample_es_examples() {
        let d = one_to_ten();
        assert_eq!(es(&d, lv(0.9)), 10.0);
        assert_eq!(es_left(&d, lv(0.1)), 1.0);
        assert_abs_diff_eq!(es(&d, lv(0.75)), (0.05 * 8.0 + 0.1 * 9.0 + 0.1 * 10.0) / 0.25, epsilon = 1e-13);
    }

    #[test]
    fn parametric_es_closed_forms() {
        let n: Distribution = make_normal(0.0, 1.0).unwrap().into();
        assert_abs_diff_eq!(es(&n, lv(0.9)), 1.754_983_319_033_24, epsilon = 1e-9);
        let par: Distribution = make_pareto(4.0).unwrap().into();
        assert_abs_diff_eq!(es(&par, lv(0.9)), 4.0 / 3.0 * 0.1_f64.powf(-0.25), epsilon = 1e-12);
        let e: Distribution = make_exponential(1.0).unwrap().into();
        assert_abs_diff_eq!(es_left(&e, lv(0.5)), 2.0 * (0.5 * 0.5_f64.ln() + 0.5), epsilon = 1e-14);
        assert_abs_diff_eq!(es_left(&e, lv(0.5)), 0.3069, epsilon = 1e-4);
        assert_abs_diff_eq!(es(&e, lv(0.5)), 1.0 + 2.0_f64.ln(), epsilon = 1e-14);
    }

    #[test]
    fn heavy_tails_give_infinite_es() {
        let par: Distribution = make_pareto(1.0).unwrap().into();
        assert_eq!(es(&par, lv(0.5)), f64::INFINITY);
        assert!(es_left(&par, lv(0.5)).is_finite());
        let cauchy: Distribution = crate::probspace::make_student_t(1.0).unwrap().into();
        assert_eq!(es(&cauchy, lv(0.5)), f64::INFINITY);
        assert_eq!(es_left(&cauchy, lv(0.5)), f64::NEG_INFINITY);
        assert_eq!(expectile(&cauchy, lv(0.5)), Err(Error::InfiniteMean));
    }

    #[test]
    fn expectile_examples() {
        let two: Distribution = make_discrete(&[-1.0, 1.0], &[0.5, 0.5]).unwrap().into();
        assert_abs_diff_eq!(expectile(&two, lv(0.1)).unwrap(), -0.8, epsilon = 1e-15);
        assert_eq!(expectile(&two, lv(0.5)).unwrap(), 0.0);
        let y: Distribution = make_discrete(&[0.0, 5.0], &[2.0 / 3.0, 1.0 / 3.0]).unwrap().into();
        let diff = expectile(&y, lv(0.1)).unwrap() - expectile(&y, lv(0.9)).unwrap();
        assert!((diff + 800.0 / 209.0).abs() < 1e-12 * 800.0 / 209.0);
        for d in [
            make_normal(2.0, 3.0).unwrap(),
            make_exponential(0.5).unwrap(),
            make_pareto(3.0).unwrap(),
        ] {
            let dist: Distribution = d.into();
            assert_abs_diff_eq!(
                expectile(&dist, lv(0.5)).unwrap(),
                dist.mean().unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn point_mass_is_returned_exactly() {
        for m in [-3.7, 0.0, 0.1, 1e6] {
            let d: Distribution = make_discrete(&[m], &[1.0]).unwrap().into();
            for p in [0.01, 0.3, 0.5, 0.9, 0.999] {
                for rm in RiskMeasure::ALL {
                    assert_eq!(rm.evaluate(&d, lv(p)).unwrap(), m, "{rm} at {p}");
                }
            }
        }
    }

    #[test]
    fn risk_measure_names_round_trip() {
        for rm in RiskMeasure::ALL {
            assert_eq!(rm.name().parse::<RiskMeasure>().unwrap(), rm);
        }
        assert!("var".parse::<RiskMeasure>().is_err());
    }
}

//! Variability measures induced by quantiles, Expected Shortfall and
//! expectiles, the range, the classic deviation measures and mixtures of
//! inter-ES differences.

mod classic;
mod mixture;
pub mod table1;

use std::fmt;
use std::str::FromStr;

pub use classic::{gini_coefficient, gini_d, mad, mmd, relative_deviation, std_dev, variance};
pub use mixture::{mixture_es, MixtureMeasure};

use crate::error::{Error, Result};
use crate::probspace::Distribution;
use crate::riskmeasures::{es, es_left, expectile, quantile_left, quantile_right, Level};

/// Inter-quantile difference `Q_p - Q^-_{1-p}`, for `p in [1/2, 1)`.
pub fn delta_q(dist: &Distribution, p: f64) -> Result<f64> {
    if !(0.5..1.0).contains(&p) {
        return Err(Error::LevelOutOfDomain {
            what: "the inter-quantile difference",
            level: p,
            domain: "[1/2,1)",
        });
    }
    let p = Level::new(p)?;
    Ok(quantile_right(dist, p) - quantile_left(dist, p.complement()))
}

/// Inter-ES difference `ES_p - ES^-_{1-p}`, for `p in (0, 1]`; `p = 1` is
/// the range. Infinite off `L^1`.
pub fn delta_es(dist: &Distribution, p: f64) -> Result<f64> {
    if p == 1.0 {
        return Ok(range_measure(dist));
    }
    let p = Level::new(p).map_err(|_| Error::LevelOutOfDomain {
        what: "the inter-ES difference",
        level: p,
        domain: "(0,1]",
    })?;
    Ok(es(dist, p) - es_left(dist, p.complement()))
}

/// Inter-expectile difference `ex_p - ex_{1-p}`, for `p in (1/2, 1)`.
/// Infinite off `L^1`.
pub fn delta_ex(dist: &Distribution, p: f64) -> Result<f64> {
    if !(p > 0.5 && p < 1.0) {
        return Err(Error::LevelOutOfDomain {
            what: "the inter-expectile difference",
            level: p,
            domain: "(1/2,1)",
        });
    }
    delta_ex_unrestricted(dist, Level::new(p)?)
}

/// `ex_p - ex_{1-p}` at any level in `(0, 1)`. Below `1/2` this is the
/// negative of the variability measure at `1 - p`; it is provided for the
/// classical counterexamples stated at small levels.
pub fn delta_ex_unrestricted(dist: &Distribution, p: Level) -> Result<f64> {
    if !dist.has_finite_mean() {
        return Ok(f64::INFINITY);
    }
    Ok(expectile(dist, p)? - expectile(dist, p.complement())?)
}

/// `ess-sup X - ess-inf X`.
pub fn range_measure(dist: &Distribution) -> f64 {
    let (lo, hi) = dist.support_bounds();
    hi - lo
}

/// Residuals of the identities `Δ^Q_p = -2 Q^-_{1-p}`, `Δ^ES_p = -2 ES^-_{1-p}`
/// and `Δ^ex_p = 2 ex_p`, which hold when `X` and `-X` have the same law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricResiduals {
    pub delta_q: f64,
    pub delta_es: f64,
    pub delta_ex: f64,
}

impl SymmetricResiduals {
    pub fn max(&self) -> f64 {
        self.delta_q.max(self.delta_es).max(self.delta_ex)
    }
}

/// Evaluates [`SymmetricResiduals`] at `p in [1/2, 1)`. The caller asserts
/// that the law is symmetric about zero.
pub fn symmetric_identities_check(dist: &Distribution, p: f64) -> Result<SymmetricResiduals> {
    let dq = delta_q(dist, p)?;
    let lv = Level::new(p)?;
    let des = delta_es(dist, p)?;
    let dex = delta_ex_unrestricted(dist, lv)?;
    Ok(SymmetricResiduals {
        delta_q: (dq + 2.0 * quantile_left(dist, lv.complement())).abs(),
        delta_es: (des + 2.0 * es_left(dist, lv.complement())).abs(),
        delta_ex: (dex - 2.0 * expectile(dist, lv)?).abs(),
    })
}

/// Every variability measure of the crate, named as on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VariabilityKind {
    DeltaQ,
    DeltaEs,
    DeltaEx,
    Range,
    Variance,
    Std,
    Mad,
    Mmd,
    GiniD,
    RelativeDeviation,
    GiniCoefficient,
}

impl VariabilityKind {
    pub const ALL: [VariabilityKind; 11] = [
        VariabilityKind::DeltaQ,
        VariabilityKind::DeltaEs,
        VariabilityKind::DeltaEx,
        VariabilityKind::Range,
        VariabilityKind::Variance,
        VariabilityKind::Std,
        VariabilityKind::Mad,
        VariabilityKind::Mmd,
        VariabilityKind::GiniD,
        VariabilityKind::RelativeDeviation,
        VariabilityKind::GiniCoefficient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VariabilityKind::DeltaQ => "dq",
            VariabilityKind::DeltaEs => "des",
            VariabilityKind::DeltaEx => "dex",
            VariabilityKind::Range => "range",
            VariabilityKind::Variance => "var",
            VariabilityKind::Std => "std",
            VariabilityKind::Mad => "mad",
            VariabilityKind::Mmd => "mmd",
            VariabilityKind::GiniD => "gini",
            VariabilityKind::RelativeDeviation => "reldev",
            VariabilityKind::GiniCoefficient => "ginicoef",
        }
    }

    /// Whether the measure is indexed by a probability level.
    pub fn takes_level(self) -> bool {
        matches!(
            self,
            VariabilityKind::DeltaQ | VariabilityKind::DeltaEs | VariabilityKind::DeltaEx
        )
    }

    /// Evaluates the measure; `p` is required exactly when
    /// [`takes_level`](Self::takes_level) is true.
    pub fn evaluate(self, dist: &Distribution, p: Option<f64>) -> Result<f64> {
        let level = || {
            p.ok_or_else(|| Error::InvalidParameter(format!("`{}` needs a level", self.name())))
        };
        match self {
            VariabilityKind::DeltaQ => delta_q(dist, level()?),
            VariabilityKind::DeltaEs => delta_es(dist, level()?),
            VariabilityKind::DeltaEx => delta_ex(dist, level()?),
            VariabilityKind::Range => Ok(range_measure(dist)),
            VariabilityKind::Variance => Ok(variance(dist)),
            VariabilityKind::Std => Ok(std_dev(dist)),
            VariabilityKind::Mad => Ok(mad(dist)),
            VariabilityKind::Mmd => Ok(mmd(dist)),
            VariabilityKind::GiniD => Ok(gini_d(dist)),
            VariabilityKind::RelativeDeviation => relative_deviation(dist),
            VariabilityKind::GiniCoefficient => gini_coefficient(dist),
        }
    }
}

impl fmt::Display for VariabilityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VariabilityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        VariabilityKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown variability measure `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probspace::{
        make_discrete, make_exponential, make_normal, make_pareto, make_student_t, DiscreteDistribution,
    };
    use approx::assert_abs_diff_eq;

    fn disc(x: &[f64], w: &[f64]) -> Distribution {
        make_discrete(x, w).unwrap().into()
    }

    #[test]
    fn level_domains() {
        let n: Distribution = make_normal(0.0, 1.0).unwrap().into();
        assert!(delta_q(&n, 0.5).is_ok());
        assert!(delta_q(&n, 0.4).is_err());
        assert!(delta_q(&n, 1.0).is_err());
        assert!(delta_es(&n, 0.2).is_ok());
        assert!(delta_es(&n, 0.0).is_err());
        assert!(delta_ex(&n, 0.5).is_err());
        assert!(delta_ex(&n, 0.51).is_ok());
    }

    #[test]
    fn delta_q_examples() {
        let n: Distribution = make_normal(0.0, 1.0).unwrap().into();
        assert_abs_diff_eq!(delta_q(&n, 0.95).unwrap(), 3.289_707_253_902_944_5, epsilon = 1e-12);
        let par: Distribution = make_pareto(4.0).unwrap().into();
        let expect = 0.1_f64.powf(-0.25) - 0.9_f64.powf(-0.25);
        assert_abs_diff_eq!(delta_q(&par, 0.9).unwrap(), expect, epsilon = 1e-12);
        assert_abs_diff_eq!(expect, 0.751_589_3, epsilon = 1e-7);
        let bern = disc(&[0.0, 1.0], &[0.95, 0.05]);
        assert_eq!(delta_q(&bern, 0.9).unwrap(), 0.0);
    }

    #[test]
    fn delta_es_examples() {
        let two = disc(&[0.0, 1.0], &[0.5, 0.5]);
        for p in [0.5, 0.7, 0.99] {
            assert_abs_diff_eq!(delta_es(&two, p).unwrap(), 1.0, epsilon = 1e-15);
        }
        let d = disc(&[-3.0, 0.0, 0.5, 4.0], &[0.2, 0.3, 0.1, 0.4]);
        assert_abs_diff_eq!(delta_es(&d, 0.5).unwrap(), 2.0 * mmd(&d), epsilon = 1e-14);
        let n: Distribution = make_normal(0.0, 1.0).unwrap().into();
        let z = crate::probspace::special::norm_quantile(0.875);
        let expect = 2.0 * crate::probspace::special::norm_pdf(z) / 0.125;
        assert_abs_diff_eq!(delta_es(&n, 0.875).unwrap(), expect, epsilon = 1e-12);
        assert_eq!(delta_es(&two, 1.0).unwrap(), 1.0);
        let cauchy: Distribution = make_student_t(1.0).unwrap().into();
        assert_eq!(delta_es(&cauchy, 0.9).unwrap(), f64::INFINITY);
    }

    #[test]
    fn delta_ex_examples() {
        let x = make_discrete(&[-1.0, 1.0], &[0.5, 0.5]).unwrap();
        let y = make_discrete(&[0.0, 5.0], &[2.0 / 3.0, 1.0 / 3.0]).unwrap();
        let xd: Distribution = x.clone().into();
        assert_abs_diff_eq!(delta_ex(&xd, 0.9).unwrap(), 1.6, epsilon = 1e-15);
        let z: Distribution = DiscreteDistribution::mixture(&[(0.9, &x), (0.1, &y)]).unwrap().into();
        let got = delta_ex(&z, 0.9).unwrap();
        assert!((got - 2531.0 / 1311.0).abs() < 1e-12 * 2531.0 / 1311.0);
        let t: Distribution = make_student_t(1.0).unwrap().into();
        assert_eq!(delta_ex(&t, 0.9).unwrap(), f64::INFINITY);
    }

    #[test]
    fn range_examples() {
        assert_eq!(range_measure(&disc(&[0.0, 5.0], &[0.5, 0.5])), 5.0);
        assert_eq!(range_measure(&make_normal(0.0, 1.0).unwrap().into()), f64::INFINITY);
        assert_eq!(range_measure(&disc(&[3.0], &[1.0])), 0.0);
        assert_eq!(range_measure(&make_exponential(1.0).unwrap().into()), f64::INFINITY);
    }

    #[test]
    fn symmetric_identities() {
        let n: Distribution = make_normal(0.0, 1.0).unwrap().into();
        for p in [0.5, 0.6, 0.9, 0.99] {
            assert!(symmetric_identities_check(&n, p).unwrap().max() < 1e-9);
        }
        let d = disc(&[-1.0, 0.0, 1.0], &[1.0 / 3.0; 3]);
        let r = symmetric_identities_check(&d, 0.75).unwrap();
        assert_eq!(r.delta_q, 0.0);
        assert_eq!(r.delta_ex, 0.0);
        assert!(r.delta_es < 1e-15);
        let t: Distribution = make_student_t(4.0).unwrap().into();
        assert!(symmetric_identities_check(&t, 0.9).unwrap().max() < 1e-8);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in VariabilityKind::ALL {
            assert_eq!(k.name().parse::<VariabilityKind>().unwrap(), k);
        }
        let two = disc(&[0.0, 1.0], &[0.5, 0.5]);
        assert!(VariabilityKind::DeltaQ.evaluate(&two, None).is_err());
        assert_eq!(VariabilityKind::Range.evaluate(&two, None).unwrap(), 1.0);
    }
}

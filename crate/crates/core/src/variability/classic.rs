//! Variance, standard deviation, MAD, MMD, Gini deviation and the two
//! relative measures. Each returns `+inf` off its effective domain.

use crate::error::{Error, Result};
use crate::probspace::{DiscreteDistribution, Distribution, Family, ParametricDistribution};
use crate::quadrature::{integrate, Tolerance};
use crate::riskmeasures::{quantile_right, Level};

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_286_948_079_451_560_772_586;

pub fn variance(dist: &Distribution) -> f64 {
    match dist {
        Distribution::Parametric(d) => d.variance(),
        Distribution::Discrete(d) => {
            if d.is_point_mass() {
                return 0.0;
            }
            let m = d.mean();
            d.support()
                .iter()
                .zip(d.probs())
                .map(|(x, w)| w * (x - m) * (x - m))
                .sum()
        }
    }
}

pub fn std_dev(dist: &Distribution) -> f64 {
    variance(dist).sqrt()
}

/// Mean absolute deviation `E|X - E X| = 2 E(X - E X)_+`.
pub fn mad(dist: &Distribution) -> f64 {
    match dist.mean() {
        Ok(m) => 2.0 * dist.stop_loss(m),
        Err(_) => f64::INFINITY,
    }
}

/// Mean median deviation `E|X - Q_{1/2}(X)|`.
pub fn mmd(dist: &Distribution) -> f64 {
    let Ok(mean) = dist.mean() else {
        return f64::INFINITY;
    };
    let med = quantile_right(dist, Level::new(0.5).expect("1/2 is a level"));
    match dist {
        Distribution::Discrete(d) => d
            .support()
            .iter()
            .zip(d.probs())
            .map(|(x, w)| w * (x - med).abs())
            .sum(),
        // E|X - m| = 2 E(X - m)_+ + m - E X
        Distribution::Parametric(_) => (2.0 * dist.stop_loss(med) + med - mean).max(0.0),
    }
}

/// Gini deviation `E|X_1 - X_2| / 2` for independent copies.
pub fn gini_d(dist: &Distribution) -> f64 {
    match dist {
        Distribution::Discrete(d) => gini_d_discrete(d),
        Distribution::Parametric(d) => gini_d_parametric(d),
    }
}

/// `sum_i w_i x_i (F(x_i) + F(x_{i-1}) - 1)`, anchored at the minimum.
fn gini_d_discrete(d: &DiscreteDistribution) -> f64 {
    let (x, w, cum) = (d.support(), d.probs(), d.cumulative());
    let x0 = x[0];
    let mut prev = 0.0;
    let mut total = 0.0;
    for i in 0..x.len() {
        total += w[i] * (x[i] - x0) * (cum[i] + prev - 1.0);
        prev = cum[i];
    }
    total.max(0.0)
}

fn gini_d_parametric(d: &ParametricDistribution) -> f64 {
    let base = match d.family() {
        Family::Normal => FRAC_1_SQRT_PI,
        Family::Exponential => 0.5,
        Family::Pareto { alpha } if alpha > 1.0 => alpha / ((alpha - 1.0) * (2.0 * alpha - 1.0)),
        Family::StudentT { nu } if nu > 1.0 => {
            // int_0^1 Q(u)(2u - 1) du, twice the upper half by symmetry.
            let z = d.standardized();
            let r = integrate(
                |u| {
                    let q = z.quantile(u);
                    if q.is_finite() {
                        q * (2.0 * u - 1.0)
                    } else {
                        0.0
                    }
                },
                0.5,
                1.0,
                Tolerance::absolute(1e-12),
            );
            2.0 * r.value
        }
        _ => f64::INFINITY,
    };
    base * d.scale()
}

/// Mean of a law that must live on `[0, inf)` with `P(X > 0) > 0`.
fn positive_mean(dist: &Distribution) -> Result<f64> {
    let (lo, hi) = dist.support_bounds();
    if lo < 0.0 {
        return Err(Error::InvalidSupport(
            "relative measures need a nonnegative random variable".into(),
        ));
    }
    if hi <= 0.0 {
        return Err(Error::InvalidSupport(
            "relative measures need P(X > 0) > 0".into(),
        ));
    }
    dist.mean()
}

/// `SD(X) / E X` for nonnegative `X`.
pub fn relative_deviation(dist: &Distribution) -> Result<f64> {
    let m = positive_mean(dist)?;
    Ok(std_dev(dist) / m)
}

/// `E|X_1 - X_2| / (2 E X)` for nonnegative `X`.
pub fn gini_coefficient(dist: &Distribution) -> Result<f64> {
    let m = positive_mean(dist)?;
    Ok(gini_d(dist) / m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probspace::{make_discrete, make_exponential, make_normal, make_pareto, make_student_t};
    use approx::assert_abs_diff_eq;

    fn disc(x: &[f64], w: &[f64]) -> Distribution {
        make_discrete(x, w).unwrap().into()
    }

    fn gini_double_sum(d: &Distribution) -> f64 {
        let d = d.as_discrete().unwrap();
        let (x, w) = (d.support(), d.probs());
        let mut s = 0.0;
        for i in 0..x.len() {
            for j in 0..x.len() {
                s += w[i] * w[j] * (x[i] - x[j]).abs();
            }
        }
        0.5 * s
    }

    #[test]
    fn two_point_values() {
        let d = disc(&[0.0, 1.0], &[0.5, 0.5]);
        assert_eq!(gini_d(&d), 0.25);
        assert_eq!(variance(&d), 0.25);
        assert_eq!(mad(&d), 0.5);
        assert_eq!(mmd(&d), 0.5);
    }

    #[test]
    fn point_mass_is_zero() {
        let d = disc(&[2.5], &[1.0]);
        for v in [variance(&d), std_dev(&d), mad(&d), mmd(&d), gini_d(&d)] {
            assert_eq!(v, 0.0);
        }
        assert_eq!(relative_deviation(&d).unwrap(), 0.0);
        assert_eq!(gini_coefficient(&d).unwrap(), 0.0);
    }

    #[test]
    fn gini_matches_double_sum() {
        let d = disc(&[-3.0, -1.0, 0.25, 2.0, 9.0], &[0.1, 0.3, 0.2, 0.15, 0.25]);
        assert_abs_diff_eq!(gini_d(&d), gini_double_sum(&d), epsilon = 1e-14);
    }

    #[test]
    fn parametric_gini_closed_forms_match_quadrature() {
        for d in [
            make_normal(1.0, 2.0).unwrap(),
            make_exponential(0.5).unwrap(),
            make_pareto(3.0).unwrap(),
            make_student_t(4.0).unwrap(),
        ] {
            let oracle = integrate(
                |u| {
                    let q = d.quantile(u);
                    if q.is_finite() { q * (2.0 * u - 1.0) } else { 0.0 }
                },
                0.0,
                1.0,
                Tolerance::absolute(1e-11),
            )
            .value;
            assert_abs_diff_eq!(gini_d(&d.into()), oracle, epsilon = 1e-7);
        }
    }

    #[test]
    fn parametric_mad_and_mmd() {
        let n: Distribution = make_normal(0.0, 3.0).unwrap().into();
        let expect = 3.0 * (2.0 / std::f64::consts::PI).sqrt();
        assert_abs_diff_eq!(mad(&n), expect, epsilon = 1e-14);
        assert_abs_diff_eq!(mmd(&n), expect, epsilon = 1e-14);
        // Exponential(1): E|X - ln 2| = ln 2.
        let e: Distribution = make_exponential(1.0).unwrap().into();
        assert_abs_diff_eq!(mmd(&e), 2.0_f64.ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(mad(&e), 2.0 / std::f64::consts::E, epsilon = 1e-14);
    }

    #[test]
    fn relative_measures() {
        let e: Distribution = make_exponential(1.0).unwrap().into();
        assert_abs_diff_eq!(relative_deviation(&e).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(gini_coefficient(&e).unwrap(), 0.5, epsilon = 1e-14);
        let n: Distribution = make_normal(5.0, 1.0).unwrap().into();
        assert!(relative_deviation(&n).is_err());
        assert!(gini_coefficient(&disc(&[-1.0, 1.0], &[0.5, 0.5])).is_err());
        assert!(gini_coefficient(&disc(&[0.0], &[1.0])).is_err());
    }

    #[test]
    fn effective_domains() {
        let p: Distribution = make_pareto(1.5).unwrap().into();
        assert_eq!(variance(&p), f64::INFINITY);
        assert!(mad(&p).is_finite());
        assert!(gini_d(&p).is_finite());
        let p: Distribution = make_pareto(0.5).unwrap().into();
        assert_eq!(mad(&p), f64::INFINITY);
        assert_eq!(gini_d(&p), f64::INFINITY);
        assert_eq!(mmd(&p), f64::INFINITY);
    }
}

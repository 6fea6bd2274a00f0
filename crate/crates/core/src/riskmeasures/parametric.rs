//! Closed forms on the standard families and a safeguarded Newton solver for
//! the expectile.
//!
//! Everything is computed for the standardized law `Z` and mapped back
//! through `shift + scale * Z`; all five measures are location and positive
//! scale equivariant.

use crate::error::{Error, Result};
use crate::probspace::special::{norm_pdf, norm_quantile, StudentT};
use crate::probspace::{Family, ParametricDistribution};

fn map_back(d: &ParametricDistribution, z: f64) -> f64 {
    if z.is_infinite() {
        z
    } else {
        d.shift() + d.scale() * z
    }
}

pub(super) fn es(d: &ParametricDistribution, p: f64) -> f64 {
    let z = match d.family() {
        Family::Normal => norm_pdf(norm_quantile(p)) / (1.0 - p),
        Family::Exponential => 1.0 - (-p).ln_1p(),
        Family::StudentT { nu } if nu > 1.0 => {
            let t = StudentT::new(nu);
            let q = t.quantile(p);
            (nu + q * q) / (nu - 1.0) * t.pdf(q) / (1.0 - p)
        }
        Family::Pareto { alpha } if alpha > 1.0 => {
            alpha / (alpha - 1.0) * ((-p).ln_1p() * (-1.0 / alpha)).exp()
        }
        _ => f64::INFINITY,
    };
    map_back(d, z)
}

pub(super) fn es_left(d: &ParametricDistribution, p: f64) -> f64 {
    let z = match d.family() {
        Family::Normal => -norm_pdf(norm_quantile(p)) / p,
        Family::Exponential => {
            // ((1-p) ln(1-p) + p) / p, by its series when p is small.
            if p < 1e-3 {
                let mut term = p;
                let mut sum = 0.0;
                for k in 2..12 {
                    sum += term / (k * (k - 1)) as f64;
                    term *= p;
                }
                sum
            } else {
                ((1.0 - p) * (-p).ln_1p() + p) / p
            }
        }
        Family::StudentT { nu } if nu > 1.0 => {
            let t = StudentT::new(nu);
            let q = t.quantile(p);
            -(nu + q * q) / (nu - 1.0) * t.pdf(q) / p
        }
        Family::StudentT { .. } => f64::NEG_INFINITY,
        Family::Pareto { alpha } => {
            let l = (-p).ln_1p();
            if alpha == 1.0 {
                -l / p
            } else {
                let a = 1.0 - 1.0 / alpha;
                // [1 - (1-p)^a] / (a p)
                -(a * l).exp_m1() / (a * p)
            }
        }
    };
    map_back(d, z)
}

/// Expectile of the standardized law by Newton's method on `psi`, kept inside
/// a sign-change bracket.
pub(super) fn expectile(d: &ParametricDistribution, p: f64) -> Result<f64> {
    if !d.has_finite_mean() {
        return Err(Error::InfiniteMean);
    }
    let z = d.standardized();
    let mu = z.mean()?;
    if p == 0.5 {
        return d.mean();
    }
    let psi = |x: f64| (2.0 * p - 1.0) * z.stop_loss(x) + (1.0 - p) * (mu - x);
    let dpsi = |x: f64| -(p - (2.0 * p - 1.0) * z.cdf(x));
    let abs_mean = mu.abs() + 2.0 * z.stop_loss(mu);
    let target = 1e-12 * (1.0 + abs_mean);

    let mut lo = z.quantile(1e-6);
    let mut hi = z.quantile(1.0 - 1e-6);
    let mut width = (hi - lo).max(1.0);
    while psi(lo) <= 0.0 {
        lo -= width;
        width *= 2.0;
    }
    width = (hi - lo).max(1.0);
    while psi(hi) >= 0.0 {
        hi += width;
        width *= 2.0;
    }
    let mut x = mu.clamp(lo, hi);
    for _ in 0..200 {
        let fx = psi(x);
        if fx.abs() < target {
            break;
        }
        if fx > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let mut next = x - fx / dpsi(x);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if next == x || hi - lo <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
            x = next;
            break;
        }
        x = next;
    }
    Ok(map_back(d, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probspace::{make_exponential, make_normal, make_pareto, make_student_t};
    use crate::quadrature::{integrate, Tolerance};

    // Kronrod nodes next to an endpoint can round onto it.
    fn finite_or_zero(x: f64) -> f64 {
        if x.is_finite() {
            x
        } else {
            0.0
        }
    }

    fn es_by_quadrature(d: &ParametricDistribution, p: f64) -> f64 {
        integrate(|u| finite_or_zero(d.quantile(u)), p, 1.0, Tolerance::absolute(1e-11)).value / (1.0 - p)
    }

    fn es_left_by_quadrature(d: &ParametricDistribution, p: f64) -> f64 {
        integrate(|u| finite_or_zero(d.quantile(u)), 0.0, p, Tolerance::absolute(1e-11)).value / p
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let laws = [
            make_normal(1.0, 2.0).unwrap(),
            make_exponential(3.0).unwrap(),
            make_student_t(4.0).unwrap(),
            make_student_t(10.0).unwrap().location_scale(-1.0, 0.5).unwrap(),
            make_pareto(4.0).unwrap(),
            make_pareto(0.7).unwrap(),
        ];
        for d in &laws {
            for p in [0.1, 0.5, 0.9, 0.99] {
                let left = es_left(d, p);
                assert!((left - es_left_by_quadrature(d, p)).abs() < 1e-7, "{d} esl {p}");
                if d.has_finite_mean() {
                    let right = es(d, p);
                    let oracle = es_by_quadrature(d, p);
                    assert!((right - oracle).abs() < 1e-6 * (1.0 + right.abs()), "{d} es {p}: {right} vs {oracle}");
                }
            }
        }
    }

    #[test]
    fn exponential_left_es_series_branch() {
        let d = make_exponential(1.0).unwrap();
        for p in [1e-8_f64, 1e-4, 9.99e-4, 1.001e-3] {
            let exact = ((1.0 - p) * (-p).ln_1p() + p) / p;
            assert!((es_left(&d, p) - exact).abs() < 1e-9 * p.max(1e-6));
        }
    }

    #[test]
    fn pareto_unit_index_left_es() {
        let d = make_pareto(1.0).unwrap();
        assert!((es_left(&d, 0.5) - 2.0 * 2.0_f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn expectile_solves_first_order_condition() {
        let laws = [
            make_normal(0.0, 1.0).unwrap(),
            make_exponential(1.0).unwrap(),
            make_student_t(3.0).unwrap(),
            make_pareto(2.5).unwrap(),
            make_pareto(1.1).unwrap(),
        ];
        for d in &laws {
            let mu = d.mean().unwrap();
            for p in [1e-4, 0.02, 0.3, 0.7, 0.9, 0.999] {
                let e = expectile(d, p).unwrap();
                let identity = mu + (2.0 * p - 1.0) / (1.0 - p) * d.stop_loss(e);
                assert!((e - identity).abs() < 1e-9, "{d} at {p}: {e} vs {identity}");
            }
        }
    }

    #[test]
    fn normal_expectile_is_odd() {
        let d = make_normal(0.0, 1.0).unwrap();
        for p in [0.6, 0.9, 0.99] {
            assert!((expectile(&d, p).unwrap() + expectile(&d, 1.0 - p).unwrap()).abs() < 1e-11);
        }
    }
}

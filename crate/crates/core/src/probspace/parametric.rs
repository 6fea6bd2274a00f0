use std::fmt;

use super::special::{self, StudentT};
use crate::error::{Error, Result};

/// The standardized base law of a [`ParametricDistribution`].
///
/// Normal is the standard normal, exponential has rate 1 and Pareto has
/// minimum 1 (`P(X > x) = x^-alpha` for `x >= 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Normal,
    Exponential,
    StudentT { nu: f64 },
    Pareto { alpha: f64 },
}

/// A continuous law `shift + scale * Z` where `Z` follows a standard [`Family`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametricDistribution {
    family: Family,
    shift: f64,
    scale: f64,
}

fn positive(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

pub fn make_normal(mu: f64, sigma: f64) -> Result<ParametricDistribution> {
    if !mu.is_finite() {
        return Err(Error::InvalidParameter(format!("mean must be finite, got {mu}")));
    }
    Ok(ParametricDistribution {
        family: Family::Normal,
        shift: mu,
        scale: positive("sigma", sigma)?,
    })
}

pub fn make_exponential(rate: f64) -> Result<ParametricDistribution> {
    Ok(ParametricDistribution {
        family: Family::Exponential,
        shift: 0.0,
        scale: 1.0 / positive("rate", rate)?,
    })
}

pub fn make_student_t(nu: f64) -> Result<ParametricDistribution> {
    Ok(ParametricDistribution {
        family: Family::StudentT {
            nu: positive("degrees of freedom", nu)?,
        },
        shift: 0.0,
        scale: 1.0,
    })
}

pub fn make_pareto(alpha: f64) -> Result<ParametricDistribution> {
    Ok(ParametricDistribution {
        family: Family::Pareto {
            alpha: positive("tail index", alpha)?,
        },
        shift: 0.0,
        scale: 1.0,
    })
}

impl ParametricDistribution {
    /// The law of `shift + scale * X`.
    pub fn location_scale(&self, shift: f64, scale: f64) -> Result<ParametricDistribution> {
        if !shift.is_finite() {
            return Err(Error::InvalidParameter(format!("shift must be finite, got {shift}")));
        }
        let scale = positive("scale", scale)?;
        Ok(ParametricDistribution {
            family: self.family,
            shift: shift + scale * self.shift,
            scale: scale * self.scale,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self.family, Family::Normal | Family::StudentT { .. })
    }

    fn standardize(&self, x: f64) -> f64 {
        (x - self.shift) / self.scale
    }

    fn destandardize(&self, z: f64) -> f64 {
        self.shift + self.scale * z
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let z = self.standardize(x);
        match self.family {
            Family::Normal => special::norm_cdf(z),
            Family::Exponential => {
                if z <= 0.0 {
                    0.0
                } else {
                    -(-z).exp_m1()
                }
            }
            Family::StudentT { nu } => StudentT::new(nu).cdf(z),
            Family::Pareto { alpha } => {
                if z <= 1.0 {
                    0.0
                } else {
                    1.0 - z.powf(-alpha)
                }
            }
        }
    }

    /// Survival function `P(X > x)`.
    pub fn sf(&self, x: f64) -> f64 {
        let z = self.standardize(x);
        match self.family {
            Family::Normal => special::norm_sf(z),
            Family::Exponential => {
                if z <= 0.0 {
                    1.0
                } else {
                    (-z).exp()
                }
            }
            Family::StudentT { nu } => StudentT::new(nu).sf(z),
            Family::Pareto { alpha } => {
                if z <= 1.0 {
                    1.0
                } else {
                    z.powf(-alpha)
                }
            }
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        let z = self.standardize(x);
        let f = match self.family {
            Family::Normal => special::norm_pdf(z),
            Family::Exponential => {
                if z < 0.0 {
                    0.0
                } else {
                    (-z).exp()
                }
            }
            Family::StudentT { nu } => StudentT::new(nu).pdf(z),
            Family::Pareto { alpha } => {
                if z < 1.0 {
                    0.0
                } else {
                    alpha * z.powf(-alpha - 1.0)
                }
            }
        };
        f / self.scale
    }

    /// Quantile function; the law is continuous and strictly increasing on its
    /// support, so left and right quantiles coincide on `(0, 1)`.
    pub fn quantile(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return self.support().0;
        }
        if p >= 1.0 {
            return self.support().1;
        }
        let z = match self.family {
            Family::Normal => special::norm_quantile(p),
            Family::Exponential => -(-p).ln_1p(),
            Family::StudentT { nu } => StudentT::new(nu).quantile(p),
            Family::Pareto { alpha } => (-(-p).ln_1p() / alpha).exp(),
        };
        self.destandardize(z)
    }

    /// The quantile density composition `f(F^-1(u))`.
    pub fn density_at_quantile(&self, u: f64) -> f64 {
        let g = match self.family {
            Family::Normal => special::norm_pdf(special::norm_quantile(u)),
            Family::Exponential => 1.0 - u,
            Family::StudentT { nu } => {
                let t = StudentT::new(nu);
                t.pdf(t.quantile(u))
            }
            Family::Pareto { alpha } => alpha * (1.0 - u).powf(1.0 + 1.0 / alpha),
        };
        g / self.scale
    }

    /// `Q(1 - s)`, accurate for tiny upper-tail probabilities `s`.
    pub fn tail_quantile(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return self.support().1;
        }
        if s >= 1.0 {
            return self.support().0;
        }
        let z = match self.family {
            Family::Normal => -special::norm_quantile(s),
            Family::Exponential => -s.ln(),
            Family::StudentT { nu } => -StudentT::new(nu).quantile(s),
            Family::Pareto { alpha } => (-s.ln() / alpha).exp(),
        };
        self.destandardize(z)
    }

    /// `f(Q(1 - s))`.
    pub fn density_at_tail_quantile(&self, s: f64) -> f64 {
        let g = match self.family {
            Family::Normal => special::norm_pdf(special::norm_quantile(s)),
            Family::Exponential => s,
            Family::StudentT { nu } => {
                let t = StudentT::new(nu);
                t.pdf(t.quantile(s))
            }
            Family::Pareto { alpha } => alpha * s.powf(1.0 + 1.0 / alpha),
        };
        g / self.scale
    }

    /// `∫_{1-s}^1 Q(u) du`; infinite without a finite mean.
    pub fn tail_integral(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        if !self.has_finite_mean() {
            return f64::INFINITY;
        }
        let z = match self.family {
            Family::Normal => special::norm_pdf(special::norm_quantile(s)),
            Family::Exponential => s * (1.0 - s.ln()),
            Family::StudentT { nu } => {
                let t = StudentT::new(nu);
                let q = t.quantile(s);
                (nu + q * q) / (nu - 1.0) * t.pdf(q)
            }
            Family::Pareto { alpha } => alpha / (alpha - 1.0) * s.powf(1.0 - 1.0 / alpha),
        };
        self.shift * s + self.scale * z
    }

    /// `(ess-inf, ess-sup)`, with infinite endpoints where unbounded.
    pub fn support(&self) -> (f64, f64) {
        match self.family {
            Family::Normal | Family::StudentT { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Family::Exponential => (self.shift, f64::INFINITY),
            Family::Pareto { .. } => (self.destandardize(1.0), f64::INFINITY),
        }
    }

    /// Largest `k` such that `E|X|^q` is finite for every `q < k`.
    pub fn moment_index(&self) -> f64 {
        match self.family {
            Family::Normal | Family::Exponential => f64::INFINITY,
            Family::StudentT { nu } => nu,
            Family::Pareto { alpha } => alpha,
        }
    }

    pub fn has_finite_mean(&self) -> bool {
        self.moment_index() > 1.0
    }

    pub fn mean(&self) -> Result<f64> {
        let m = match self.family {
            Family::Normal => 0.0,
            Family::Exponential => 1.0,
            Family::StudentT { nu } if nu > 1.0 => 0.0,
            Family::Pareto { alpha } if alpha > 1.0 => alpha / (alpha - 1.0),
            _ => return Err(Error::InfiniteMean),
        };
        Ok(self.destandardize(m))
    }

    /// Variance, `+inf` when the second moment diverges.
    pub fn variance(&self) -> f64 {
        let v = match self.family {
            Family::Normal | Family::Exponential => 1.0,
            Family::StudentT { nu } if nu > 2.0 => nu / (nu - 2.0),
            Family::Pareto { alpha } if alpha > 2.0 => {
                alpha / ((alpha - 1.0) * (alpha - 1.0) * (alpha - 2.0))
            }
            _ => f64::INFINITY,
        };
        v * self.scale * self.scale
    }

    /// Stop-loss transform `E[(X - x)_+]`, `+inf` without a finite mean.
    pub fn stop_loss(&self, x: f64) -> f64 {
        if !self.has_finite_mean() {
            return f64::INFINITY;
        }
        let z = self.standardize(x);
        let pi = match self.family {
            // Symmetric laws: pi(z) = -z + pi(-z) avoids cancellation for z < 0.
            Family::Normal if z < 0.0 => -z + special::norm_pdf(z) + z * special::norm_sf(-z),
            Family::Normal => special::norm_pdf(z) - z * special::norm_sf(z),
            Family::StudentT { nu } if z < 0.0 => {
                let t = StudentT::new(nu);
                -z + (nu + z * z) / (nu - 1.0) * t.pdf(z) + z * t.sf(-z)
            }
            Family::Exponential => {
                if z >= 0.0 {
                    (-z).exp()
                } else {
                    1.0 - z
                }
            }
            Family::StudentT { nu } => {
                let t = StudentT::new(nu);
                (nu + z * z) / (nu - 1.0) * t.pdf(z) - z * t.sf(z)
            }
            Family::Pareto { alpha } => {
                if z <= 1.0 {
                    alpha / (alpha - 1.0) - z
                } else {
                    z.powf(1.0 - alpha) / (alpha - 1.0)
                }
            }
        };
        // Cancellation in the far left tail can produce values below x - mean.
        let floor = self.mean().map(|m| (m - x).max(0.0)).unwrap_or(0.0);
        (self.scale * pi).max(floor)
    }

    /// The base law with shift 0 and scale 1.
    pub(crate) fn standardized(&self) -> ParametricDistribution {
        ParametricDistribution {
            family: self.family,
            shift: 0.0,
            scale: 1.0,
        }
    }
}

impl fmt::Display for ParametricDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.family {
            Family::Normal => return write!(f, "normal({},{})", self.shift, self.scale),
            Family::Exponential if self.shift == 0.0 => {
                return write!(f, "exp({})", 1.0 / self.scale)
            }
            Family::Exponential => "exp(1)".to_string(),
            Family::StudentT { nu } => format!("t({nu})"),
            Family::Pareto { alpha } => format!("pareto({alpha})"),
        };
        if self.shift == 0.0 && self.scale == 1.0 {
            write!(f, "{base}")
        } else {
            write!(f, "{}+{}*{}", self.shift, self.scale, base)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constructor_examples() {
        let n = make_normal(0.0, 1.0).unwrap();
        assert_eq!(n.quantile(0.5), 0.0);
        assert_abs_diff_eq!(n.quantile(0.9), 1.2816, epsilon = 1e-4);
        assert_eq!(make_normal(3.0, 2.0).unwrap().cdf(3.0), 0.5);

        let par = make_pareto(4.0).unwrap();
        assert_eq!(par.cdf(1.0), 0.0);
        assert_abs_diff_eq!(par.quantile(0.9), 0.1_f64.powf(-0.25), epsilon = 1e-12);
        assert_abs_diff_eq!(par.mean().unwrap(), 4.0 / 3.0, epsilon = 1e-15);

        let e = make_exponential(1.0).unwrap();
        for &p in &[0.1, 0.5, 0.99] {
            assert_abs_diff_eq!(e.quantile(p), -(1.0_f64 - p).ln(), epsilon = 1e-14);
        }
        assert_eq!(make_student_t(4.0).unwrap().cdf(0.0), 0.5);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(make_normal(0.0, 0.0).is_err());
        assert!(make_normal(0.0, -1.0).is_err());
        assert!(make_pareto(0.0).is_err());
        assert!(make_exponential(-2.0).is_err());
        assert!(make_student_t(f64::NAN).is_err());
        let n = make_normal(0.0, 1.0).unwrap();
        assert!(n.location_scale(1.0, 0.0).is_err());
    }

    #[test]
    fn mean_requires_integrability() {
        assert_eq!(make_student_t(1.0).unwrap().mean(), Err(Error::InfiniteMean));
        assert_eq!(make_pareto(0.8).unwrap().mean(), Err(Error::InfiniteMean));
        assert_eq!(make_student_t(1.5).unwrap().mean(), Ok(0.0));
    }

    #[test]
    fn stop_loss_matches_mean_far_left() {
        for d in [
            make_normal(1.0, 2.0).unwrap(),
            make_exponential(2.0).unwrap(),
            make_student_t(5.0).unwrap(),
            make_pareto(3.0).unwrap(),
        ] {
            let m = d.mean().unwrap();
            // Far enough left that the lower-tail excess is below the tolerance even
            // for the polynomial t tail.
            let x = d.quantile(1e-14) - 1.0;
            assert!((d.stop_loss(x) - (m - x)).abs() < 1e-9, "{d}: {} vs {}", d.stop_loss(x), m - x);
        }
    }

    #[test]
    fn location_scale_composes() {
        let d = make_exponential(2.0).unwrap().location_scale(1.0, 3.0).unwrap();
        // 1 + 3 * Exp(rate 2)
        assert_abs_diff_eq!(d.mean().unwrap(), 2.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.quantile(0.5), 1.0 + 1.5 * 2.0_f64.ln(), epsilon = 1e-14);
        assert_eq!(d.support().0, 1.0);
    }
}

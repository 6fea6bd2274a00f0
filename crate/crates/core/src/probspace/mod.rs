//! Distribution abstractions: continuous parametric laws, finitely supported
//! laws, and random variables on a finite uniform probability space.
//!
//! All values are immutable after construction.

mod discrete;
mod parametric;
pub(crate) mod special;
mod spec;

use std::fmt;

pub use discrete::{law_of, make_discrete, make_finite_rv, DiscreteDistribution, FiniteRV, LEVEL_TIE_TOL};
pub use parametric::{
    make_exponential, make_normal, make_pareto, make_student_t, Family, ParametricDistribution,
};
pub use spec::{parse_distribution, parse_real};

/// Either kind of law accepted by the measure functions.
#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    Parametric(ParametricDistribution),
    Discrete(DiscreteDistribution),
}

impl Distribution {
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Distribution::Parametric(d) => d.cdf(x),
            Distribution::Discrete(d) => d.cdf(x),
        }
    }

    /// `(ess-inf, ess-sup)`.
    pub fn support_bounds(&self) -> (f64, f64) {
        match self {
            Distribution::Parametric(d) => d.support(),
            Distribution::Discrete(d) => (d.min(), d.max()),
        }
    }

    pub fn has_finite_mean(&self) -> bool {
        match self {
            Distribution::Parametric(d) => d.has_finite_mean(),
            Distribution::Discrete(_) => true,
        }
    }

    pub fn mean(&self) -> crate::Result<f64> {
        match self {
            Distribution::Parametric(d) => d.mean(),
            Distribution::Discrete(d) => Ok(d.mean()),
        }
    }

    /// `E[(X - x)_+]`, `+inf` without a finite mean.
    pub fn stop_loss(&self, x: f64) -> f64 {
        match self {
            Distribution::Parametric(d) => d.stop_loss(x),
            Distribution::Discrete(d) => d.stop_loss(x),
        }
    }

    pub fn as_parametric(&self) -> Option<&ParametricDistribution> {
        match self {
            Distribution::Parametric(d) => Some(d),
            Distribution::Discrete(_) => None,
        }
    }

    pub fn as_discrete(&self) -> Option<&DiscreteDistribution> {
        match self {
            Distribution::Discrete(d) => Some(d),
            Distribution::Parametric(_) => None,
        }
    }
}

impl From<ParametricDistribution> for Distribution {
    fn from(d: ParametricDistribution) -> Self {
        Distribution::Parametric(d)
    }
}

impl From<DiscreteDistribution> for Distribution {
    fn from(d: DiscreteDistribution) -> Self {
        Distribution::Discrete(d)
    }
}

impl From<&FiniteRV> for Distribution {
    fn from(rv: &FiniteRV) -> Self {
        Distribution::Discrete(law_of(rv))
    }
}

impl From<FiniteRV> for Distribution {
    fn from(rv: FiniteRV) -> Self {
        Distribution::Discrete(law_of(&rv))
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distribution::Parametric(d) => write!(f, "{d}"),
            Distribution::Discrete(d) => {
                write!(f, "discrete(")?;
                for (i, (x, p)) in d.support().iter().zip(d.probs()).enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}:{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

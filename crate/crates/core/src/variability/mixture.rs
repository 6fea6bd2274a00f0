use std::fmt;
use std::sync::Arc;

use super::{delta_es, range_measure};
use crate::error::{Error, Result};
use crate::probspace::Distribution;
use crate::quadrature::{integrate, integrate_with_breaks, Tolerance};

type Density = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A finite measure on `(0, 1]`: point masses plus an optional density.
#[derive(Clone)]
pub struct MixtureMeasure {
    atoms: Vec<(f64, f64)>,
    density: Option<Density>,
    tol: Tolerance,
}

impl fmt::Debug for MixtureMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MixtureMeasure")
            .field("atoms", &self.atoms)
            .field("density", &self.density.as_ref().map(|_| "<fn>"))
            .field("tol", &self.tol)
            .finish()
    }
}

impl MixtureMeasure {
    /// `atoms` are `(location, weight)` pairs with locations in `(0, 1]`.
    /// The density, if any, must be nonnegative on `(0, 1)`; it is
    /// integrated to the absolute tolerance `tol`.
    pub fn new(
        atoms: Vec<(f64, f64)>,
        density: Option<Density>,
        tol: f64,
    ) -> Result<MixtureMeasure> {
        for &(p, w) in &atoms {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "mixture atom at {p} is outside (0,1]"
                )));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "mixture atom weight {w} is not positive"
                )));
            }
        }
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance {tol} is not positive")));
        }
        let measure = MixtureMeasure {
            atoms,
            density,
            tol: Tolerance::absolute(tol),
        };
        if !(measure.total_mass() > 0.0) {
            return Err(Error::InvalidParameter("mixture measure has no mass".into()));
        }
        Ok(measure)
    }

    pub fn dirac(p: f64) -> Result<MixtureMeasure> {
        Self::new(vec![(p, 1.0)], None, 1e-10)
    }

    pub fn with_density(f: impl Fn(f64) -> f64 + Send + Sync + 'static, tol: f64) -> Result<Self> {
        Self::new(vec![], Some(Arc::new(f)), tol)
    }

    /// `(1 - x) dx`, which represents the Gini deviation.
    pub fn gini_deviation() -> MixtureMeasure {
        Self::with_density(|x| 1.0 - x, 1e-10).expect("valid density")
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|a| a.1).sum();
        let dens = self
            .density
            .as_ref()
            .map_or(0.0, |f| integrate(|x| f(x), 0.0, 1.0, self.tol).value);
        atoms + dens
    }
}

/// `∫ Δ^ES_p(X) dμ(p)`. Atoms are summed exactly; the density part is
/// integrated with the breakpoints of the piecewise-smooth map
/// `p -> Δ^ES_p` for discrete laws.
pub fn mixture_es(dist: &Distribution, mu: &MixtureMeasure) -> Result<f64> {
    let mut total = 0.0;
    for &(p, w) in &mu.atoms {
        total += w * delta_es(dist, p)?;
    }
    let Some(density) = &mu.density else {
        return Ok(total);
    };
    if !dist.has_finite_mean() {
        return Ok(f64::INFINITY);
    }
    let mut breaks = vec![0.0, 1.0];
    if let Distribution::Discrete(d) = dist {
        for &c in d.cumulative() {
            breaks.push(c);
            breaks.push(1.0 - c);
        }
        breaks.retain(|b| (0.0..=1.0).contains(b));
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
    }
    let range = range_measure(dist);
    let integrand = |p: f64| {
        if p <= 0.0 {
            return 0.0;
        }
        let h = density(p);
        if h == 0.0 {
            return 0.0;
        }
        let v = if p >= 1.0 { range } else { delta_es(dist, p).unwrap_or(f64::NAN) };
        h * v
    };
    let r = integrate_with_breaks(integrand, &breaks, mu.tol);
    Ok(total + r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probspace::{make_discrete, make_normal};
    use crate::variability::gini_d;

    #[test]
    fn dirac_gives_inter_es() {
        let d: Distribution = make_discrete(&[0.0, 1.0, 3.0], &[0.2, 0.5, 0.3]).unwrap().into();
        let mu = MixtureMeasure::dirac(0.8).unwrap();
        assert_eq!(mixture_es(&d, &mu).unwrap(), delta_es(&d, 0.8).unwrap());
        let mu = MixtureMeasure::dirac(1.0).unwrap();
        assert_eq!(mixture_es(&d, &mu).unwrap(), 3.0);
    }

    #[test]
    fn gini_density_on_two_points() {
        let d: Distribution = make_discrete(&[0.0, 1.0], &[0.5, 0.5]).unwrap().into();
        let v = mixture_es(&d, &MixtureMeasure::gini_deviation()).unwrap();
        assert!((v - 0.25).abs() < 1e-9, "{v}");
    }

    #[test]
    fn gini_density_on_normal() {
        let d: Distribution = make_normal(0.0, 2.0).unwrap().into();
        let v = mixture_es(&d, &MixtureMeasure::gini_deviation()).unwrap();
        assert!((v - gini_d(&d)).abs() < 1e-7, "{v}");
    }

    #[test]
    fn validation() {
        assert!(MixtureMeasure::dirac(0.0).is_err());
        assert!(MixtureMeasure::dirac(1.2).is_err());
        assert!(MixtureMeasure::new(vec![(0.5, -1.0)], None, 1e-8).is_err());
        assert!(MixtureMeasure::with_density(|_| 0.0, 1e-8).is_err());
        assert!((MixtureMeasure::gini_deviation().total_mass() - 0.5).abs() < 1e-12);
    }
}

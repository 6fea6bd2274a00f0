use crate::error::{Error, Result};

/// Tolerance used when comparing cumulative probabilities with a level, so
/// that `9/10` computed as a running sum still counts as equal to `p = 0.9`.
pub const LEVEL_TIE_TOL: f64 = 1e-12;

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A law with finitely many support points.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    support: Vec<f64>,
    probs: Vec<f64>,
    /// `cum[i] = P(X <= support[i])`; the last entry is exactly 1.
    cum: Vec<f64>,
}

/// Validated construction from user-supplied support points and weights.
pub fn make_discrete(support: &[f64], probs: &[f64]) -> Result<DiscreteDistribution> {
    if support.is_empty() {
        return Err(Error::InvalidSupport("support is empty".into()));
    }
    if support.len() != probs.len() {
        return Err(Error::InvalidSupport(format!(
            "{} support points but {} weights",
            support.len(),
            probs.len()
        )));
    }
    if let Some(x) = support.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidSupport(format!("non-finite support point {x}")));
    }
    if let Some(w) = support.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSupport(format!(
            "support must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
        return Err(Error::InvalidSupport(format!("weight {p} is not positive")));
    }
    let total = compensated_sum(probs.iter().copied());
    if (total - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::InvalidSupport(format!(
            "weights sum to {total}, not 1"
        )));
    }
    Ok(DiscreteDistribution::from_sorted_unchecked(
        support.to_vec(),
        probs.to_vec(),
    ))
}

fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

impl DiscreteDistribution {
    fn from_sorted_unchecked(support: Vec<f64>, probs: Vec<f64>) -> Self {
        let mut cum = Vec::with_capacity(probs.len());
        let mut sum = 0.0;
        let mut comp = 0.0;
        for &w in &probs {
            let y = w - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            cum.push(sum);
        }
        if let Some(last) = cum.last_mut() {
            *last = 1.0;
        }
        DiscreteDistribution { support, probs, cum }
    }

    /// Builds a law from unsorted weighted points, merging equal values and
    /// normalizing the weights. Weights must be nonnegative with positive sum.
    pub fn from_weighted(points: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut pts: Vec<(f64, f64)> = points.into_iter().filter(|(_, w)| *w != 0.0).collect();
        if pts.is_empty() {
            return Err(Error::InvalidSupport("no positive weight".into()));
        }
        if pts.iter().any(|(x, w)| !x.is_finite() || !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidSupport(
                "points must be finite with nonnegative weights".into(),
            ));
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let total = compensated_sum(pts.iter().map(|p| p.1));
        let mut support: Vec<f64> = Vec::with_capacity(pts.len());
        let mut probs: Vec<f64> = Vec::with_capacity(pts.len());
        for (x, w) in pts {
            match support.last() {
                Some(&last) if last == x => *probs.last_mut().unwrap() += w,
                _ => {
                    support.push(x);
                    probs.push(w);
                }
            }
        }
        for p in &mut probs {
            *p /= total;
        }
        Ok(Self::from_sorted_unchecked(support, probs))
    }

    /// Empirical law of a sample: each observation carries weight `1/n`.
    /// Cumulative probabilities are formed from integer counts, so they are
    /// exactly `k/n` up to one rounding.
    pub fn empirical(sample: &[f64]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::InvalidSupport("empty sample".into()));
        }
        if sample.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidSupport("non-finite observation".into()));
        }
        let mut sorted = sample.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self::empirical_sorted(&sorted))
    }

    /// As [`DiscreteDistribution::empirical`] for an already sorted, finite sample.
    pub(crate) fn empirical_sorted(sorted: &[f64]) -> Self {
        let n = sorted.len() as f64;
        let mut support = Vec::with_capacity(sorted.len());
        let mut probs = Vec::with_capacity(sorted.len());
        let mut cum = Vec::with_capacity(sorted.len());
        let mut i = 0;
        while i < sorted.len() {
            let x = sorted[i];
            let mut j = i + 1;
            while j < sorted.len() && sorted[j] == x {
                j += 1;
            }
            support.push(x);
            probs.push((j - i) as f64 / n);
            cum.push(j as f64 / n);
            i = j;
        }
        DiscreteDistribution { support, probs, cum }
    }

    pub fn point_mass(m: f64) -> Result<Self> {
        make_discrete(&[m], &[1.0])
    }

    /// Probability mixture `sum_k w_k F_k` of laws (not of random variables).
    pub fn mixture(components: &[(f64, &DiscreteDistribution)]) -> Result<Self> {
        if components.iter().any(|(w, _)| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidParameter("mixture weights must be nonnegative".into()));
        }
        let total: f64 = components.iter().map(|c| c.0).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidParameter(format!(
                "mixture weights sum to {total}, not 1"
            )));
        }
        Self::from_weighted(components.iter().flat_map(|(w, law)| {
            law.support
                .iter()
                .zip(&law.probs)
                .map(move |(&x, &p)| (x, w * p))
        }))
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `P(X <= support[i])` for each support point.
    pub fn cumulative(&self) -> &[f64] {
        &self.cum
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_point_mass(&self) -> bool {
        self.support.len() == 1
    }

    pub fn min(&self) -> f64 {
        self.support[0]
    }

    pub fn max(&self) -> f64 {
        *self.support.last().unwrap()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self.support.partition_point(|&s| s <= x) {
            0 => 0.0,
            k => self.cum[k - 1],
        }
    }

    pub fn mean(&self) -> f64 {
        compensated_sum(self.support.iter().zip(&self.probs).map(|(x, w)| x * w))
    }

    /// Stop-loss transform `E[(X - x)_+]`.
    pub fn stop_loss(&self, x: f64) -> f64 {
        let start = self.support.partition_point(|&s| s <= x);
        compensated_sum(
            self.support[start..]
                .iter()
                .zip(&self.probs[start..])
                .map(|(s, w)| w * (s - x)),
        )
    }

    /// Law of `a + b X`; `b` may be negative or zero.
    pub fn affine(&self, a: f64, b: f64) -> Self {
        if b == 0.0 {
            return Self::from_sorted_unchecked(vec![a], vec![1.0]);
        }
        let mut pts: Vec<(f64, f64)> = self
            .support
            .iter()
            .zip(&self.probs)
            .map(|(&x, &w)| (a + b * x, w))
            .collect();
        if b < 0.0 {
            pts.reverse();
        }
        // After an affine map distinct points may round to the same value.
        if pts.windows(2).all(|w| w[0].0 < w[1].0) {
            let (support, probs) = pts.into_iter().unzip();
            Self::from_sorted_unchecked(support, probs)
        } else {
            Self::from_weighted(pts).expect("affine image of a valid law")
        }
    }

    pub fn negate(&self) -> Self {
        self.affine(0.0, -1.0)
    }
}

/// A random variable on the uniform `n`-point probability space, given by its
/// value on each atom. Arithmetic is pointwise, so two `FiniteRV`s of equal
/// length live on the same space and may be combined.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteRV {
    atoms: Vec<f64>,
}

pub fn make_finite_rv(atoms: &[f64]) -> Result<FiniteRV> {
    FiniteRV::new(atoms.to_vec())
}

/// The distribution of a [`FiniteRV`], with equal atom values merged.
pub fn law_of(rv: &FiniteRV) -> DiscreteDistribution {
    let mut sorted = rv.atoms.clone();
    sorted.sort_by(f64::total_cmp);
    DiscreteDistribution::empirical_sorted(&sorted)
}

impl FiniteRV {
    pub fn new(atoms: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidSupport("a finite random variable needs at least one atom".into()));
        }
        if atoms.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidSupport("atom values must be finite".into()));
        }
        Ok(FiniteRV { atoms })
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn law(&self) -> DiscreteDistribution {
        law_of(self)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> FiniteRV {
        FiniteRV {
            atoms: self.atoms.iter().map(|&x| f(x)).collect(),
        }
    }

    fn zip_with(&self, other: &FiniteRV, f: impl Fn(f64, f64) -> f64) -> Result<FiniteRV> {
        if self.len() != other.len() {
            return Err(Error::InvalidParameter(format!(
                "random variables live on spaces of size {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(FiniteRV {
            atoms: self
                .atoms
                .iter()
                .zip(&other.atoms)
                .map(|(&x, &y)| f(x, y))
                .collect(),
        })
    }

    pub fn add(&self, other: &FiniteRV) -> Result<FiniteRV> {
        self.zip_with(other, |x, y| x + y)
    }

    /// Pointwise `lambda X + (1 - lambda) Y`.
    pub fn convex_combination(&self, lambda: f64, other: &FiniteRV) -> Result<FiniteRV> {
        self.zip_with(other, |x, y| lambda * x + (1.0 - lambda) * y)
    }

    pub fn scale(&self, lambda: f64) -> FiniteRV {
        self.map(|x| lambda * x)
    }

    pub fn shift(&self, c: f64) -> FiniteRV {
        self.map(|x| x + c)
    }

    pub fn negate(&self) -> FiniteRV {
        self.map(|x| -x)
    }

    /// Clips every atom into `[-m, m]`.
    pub fn truncate(&self, m: f64) -> FiniteRV {
        self.map(|x| x.clamp(-m, m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn law_of_counts_atoms() {
        let law = law_of(&make_finite_rv(&[1.0, 1.0, 2.0]).unwrap());
        assert_eq!(law.support(), &[1.0, 2.0]);
        assert!((law.probs()[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((law.probs()[1] - 1.0 / 3.0).abs() < 1e-15);

        let pm = law_of(&make_finite_rv(&[5.0]).unwrap());
        assert!(pm.is_point_mass());
        assert_eq!(pm.support(), &[5.0]);

        let three = law_of(&make_finite_rv(&[1.0, -1.0, 0.0]).unwrap());
        assert_eq!(three.support(), &[-1.0, 0.0, 1.0]);
        assert!(three.probs().iter().all(|&p| (p - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn make_discrete_validation() {
        assert!(make_discrete(&[-1.0, 1.0], &[0.5, 0.5]).is_ok());
        assert!(make_discrete(&[1.0, -1.0], &[0.5, 0.5]).is_err());
        assert!(make_discrete(&[1.0, 1.0], &[0.5, 0.5]).is_err());
        assert!(make_discrete(&[0.0, 1.0], &[0.5, 0.6]).is_err());
        assert!(make_discrete(&[0.0, 1.0], &[1.0, 0.0]).is_err());
        assert!(make_discrete(&[], &[]).is_err());
        assert!(make_discrete(&[0.0], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn mixture_merges_supports() {
        let x = make_discrete(&[-1.0, 1.0], &[0.5, 0.5]).unwrap();
        let y = make_discrete(&[0.0, 5.0], &[2.0 / 3.0, 1.0 / 3.0]).unwrap();
        let z = DiscreteDistribution::mixture(&[(0.9, &x), (0.1, &y)]).unwrap();
        assert_eq!(z.support(), &[-1.0, 0.0, 1.0, 5.0]);
        let expect = [0.45, 1.0 / 15.0, 0.45, 1.0 / 30.0];
        for (p, e) in z.probs().iter().zip(expect) {
            assert!((p - e).abs() < 1e-15);
        }
        assert_eq!(*z.cumulative().last().unwrap(), 1.0);
    }

    #[test]
    fn negation_reverses_support() {
        let d = make_discrete(&[0.0, 5.0], &[2.0 / 3.0, 1.0 / 3.0]).unwrap();
        let n = d.negate();
        assert_eq!(n.support(), &[-5.0, 0.0]);
        assert!((n.probs()[0] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn pointwise_ops_require_equal_spaces() {
        let x = make_finite_rv(&[1.0, 2.0]).unwrap();
        let y = make_finite_rv(&[1.0, 2.0, 3.0]).unwrap();
        assert!(x.add(&y).is_err());
        assert_eq!(x.add(&x).unwrap().atoms(), &[2.0, 4.0]);
        assert!(make_finite_rv(&[]).is_err());
    }
}

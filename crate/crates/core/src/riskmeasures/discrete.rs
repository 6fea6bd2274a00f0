//! Exact evaluation on finitely supported laws.
//!
//! The quantile function of a discrete law is a step function with value
//! `x_i` on `[F(x_{i-1}), F(x_i))`, so every tail average is a finite sum.
//! Sums are anchored at the boundary atom, which makes point masses and
//! two-point laws come out exact.

use crate::probspace::{DiscreteDistribution, LEVEL_TIE_TOL};

/// Index of the first atom with `F(x_i) > p`, counting `F(x_i)` within
/// [`LEVEL_TIE_TOL`] of `p` as equal.
fn first_above(d: &DiscreteDistribution, p: f64) -> usize {
    let cum = d.cumulative();
    cum.partition_point(|&c| c <= p + LEVEL_TIE_TOL).min(cum.len() - 1)
}

/// Index of the first atom with `F(x_i) >= p` (up to tie tolerance).
fn first_at_least(d: &DiscreteDistribution, p: f64) -> usize {
    let cum = d.cumulative();
    cum.partition_point(|&c| c < p - LEVEL_TIE_TOL).min(cum.len() - 1)
}

pub fn quantile_right_discrete(d: &DiscreteDistribution, p: f64) -> f64 {
    d.support()[first_above(d, p)]
}

pub fn quantile_left_discrete(d: &DiscreteDistribution, p: f64) -> f64 {
    d.support()[first_at_least(d, p)]
}

pub fn es_discrete(d: &DiscreteDistribution, p: f64) -> f64 {
    let (x, w) = (d.support(), d.probs());
    let k = first_above(d, p);
    let anchor = x[k];
    let excess: f64 = (k + 1..x.len()).map(|i| w[i] * (x[i] - anchor)).sum();
    anchor + excess / (1.0 - p)
}

pub fn es_left_discrete(d: &DiscreteDistribution, p: f64) -> f64 {
    let (x, w) = (d.support(), d.probs());
    // Last atom whose step starts strictly below p.
    let k = first_at_least(d, p);
    let anchor = x[k];
    let shortfall: f64 = (0..k).map(|i| w[i] * (anchor - x[i])).sum();
    anchor - shortfall / p
}

/// The expectile by an exact scan of the piecewise-linear `psi`.
///
/// On `[x_k, x_{k+1}]` the atoms above and below are fixed, so the root of
/// `p E(X - x)_+ = (1 - p) E(X - x)_-` is an explicit ratio. The segment is
/// the first one with `psi(x_{k+1}) <= 0`.
pub fn expectile_discrete(d: &DiscreteDistribution, p: f64) -> f64 {
    let (x, w) = (d.support(), d.probs());
    let n = x.len();
    if p == 0.5 || n == 1 {
        return d.mean();
    }
    // Solve in the upper half only, so that ex_p(X) = -ex_{1-p}(-X) holds
    // bit for bit and symmetric laws give exactly opposite expectiles.
    if p < 0.5 {
        return -expectile_discrete(&d.negate(), 1.0 - p);
    }
    let total_sw: f64 = x.iter().zip(w).map(|(a, b)| a * b).sum();
    // psi(x_{k+1}) with atoms <= k below and > k+1 above.
    let mut s_lo = 0.0;
    let mut w_lo = 0.0;
    let mut k = n - 1;
    for j in 0..n - 1 {
        s_lo += x[j] * w[j];
        w_lo += w[j];
        let t = x[j + 1];
        let s_up = total_sw - s_lo - x[j + 1] * w[j + 1];
        let w_up = 1.0 - w_lo - w[j + 1];
        let psi = p * (s_up - t * w_up) - (1.0 - p) * (t * w_lo - s_lo);
        if psi <= 0.0 {
            k = j;
            break;
        }
    }
    let anchor = x[k];
    let (mut up, mut up_w, mut lo, mut lo_w) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        if i > k {
            up += w[i] * (x[i] - anchor);
            up_w += w[i];
        } else {
            lo += w[i] * (anchor - x[i]);
            lo_w += w[i];
        }
    }
    let root = anchor + (p * up - (1.0 - p) * lo) / (p * up_w + (1.0 - p) * lo_w);
    let hi = if k + 1 < n { x[k + 1] } else { anchor };
    root.clamp(anchor, hi)
}

//! Scalar special functions for the standard families.

use std::f64::consts::{PI, SQRT_2};

use statrs::function::beta::beta_reg;
use statrs::function::erf::erfc_inv;
use statrs::function::gamma::ln_gamma;

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_677_939_946_059_934_381_868;

pub(crate) fn norm_pdf(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * z * z).exp()
}

pub(crate) fn norm_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

pub(crate) fn norm_sf(z: f64) -> f64 {
    0.5 * libm::erfc(z / SQRT_2)
}

pub(crate) fn norm_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    // erfc_inv is good to about 1e-11; one Halley step on the tail
    // probability brings it to full precision.
    let (tail, sign) = if p < 0.5 { (p, -1.0) } else { (1.0 - p, 1.0) };
    let z = -SQRT_2 * erfc_inv(2.0 * tail);
    let err = norm_cdf(z) - tail;
    let u = err / norm_pdf(z);
    let z = z - u / (1.0 + 0.5 * z * u);
    sign * -z
}

/// Student-t with `nu` degrees of freedom.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StudentT {
    nu: f64,
    log_norm: f64,
}

impl StudentT {
    pub(crate) fn new(nu: f64) -> Self {
        let log_norm = ln_gamma(0.5 * (nu + 1.0)) - ln_gamma(0.5 * nu) - 0.5 * (nu * PI).ln();
        StudentT { nu, log_norm }
    }

    pub(crate) fn pdf(&self, t: f64) -> f64 {
        if !t.is_finite() {
            return 0.0;
        }
        (self.log_norm - 0.5 * (self.nu + 1.0) * (t * t / self.nu).ln_1p()).exp()
    }

    /// P(T > |t|), evaluated without cancellation in either regime.
    fn upper_tail_abs(&self, t: f64) -> f64 {
        let t = t.abs();
        if t.is_infinite() {
            return 0.0;
        }
        let t2 = t * t;
        let x = self.nu / (self.nu + t2);
        if x < 0.5 {
            0.5 * beta_reg(0.5 * self.nu, 0.5, x)
        } else {
            0.5 * (1.0 - beta_reg(0.5, 0.5 * self.nu, t2 / (self.nu + t2)))
        }
    }

    pub(crate) fn cdf(&self, t: f64) -> f64 {
        if t >= 0.0 {
            1.0 - self.upper_tail_abs(t)
        } else {
            self.upper_tail_abs(t)
        }
    }

    pub(crate) fn sf(&self, t: f64) -> f64 {
        self.cdf(-t)
    }

    pub(crate) fn quantile(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return f64::NEG_INFINITY;
        }
        if p >= 1.0 {
            return f64::INFINITY;
        }
        if p == 0.5 {
            return 0.0;
        }
        if p < 0.5 {
            -self.upper_quantile(p)
        } else {
            self.upper_quantile(1.0 - p)
        }
    }

    /// The t >= 0 with P(T > t) = s, for s in (0, 1/2).
    fn upper_quantile(&self, s: f64) -> f64 {
        let nu = self.nu;
        if nu == 1.0 {
            return 1.0 / (PI * s).tan();
        }
        if nu == 2.0 {
            let p = 1.0 - s;
            return (2.0 * p - 1.0) / (2.0 * p * s).sqrt();
        }
        // Bracket [lo, hi] with sf(lo) >= s > sf(hi).
        let mut lo = 0.0_f64;
        let mut hi = 1.0_f64;
        while self.upper_tail_abs(hi) >= s {
            lo = hi;
            hi *= 2.0;
            if !hi.is_finite() {
                return f64::INFINITY;
            }
        }
        // Cornish-Fisher start, clipped into the bracket.
        let z = norm_quantile(1.0 - s);
        let mut t = z + (z * z * z + z) / (4.0 * nu);
        if !(t > lo && t < hi) {
            t = 0.5 * (lo + hi);
        }
        let ln_s = s.ln();
        for _ in 0..200 {
            let tail = self.upper_tail_abs(t);
            if tail > s {
                lo = t;
            } else {
                hi = t;
            }
            // Newton on ln sf(t) - ln s; d/dt ln sf = -pdf/sf.
            let step = (tail.ln() - ln_s) * tail / self.pdf(t);
            let mut next = t + step;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if (next - t).abs() <= 1e-15 * (1.0 + t.abs()) || hi - lo <= 1e-15 * (1.0 + hi) {
                return next;
            }
            t = next;
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_quantile_round_trip() {
        for &p in &[1e-12, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.9, 0.999, 1.0 - 1e-9] {
            let z = norm_quantile(p);
            assert!((norm_cdf(z) - p).abs() < 1e-15_f64.max(1e-14 * p), "p={p}");
        }
    }

    #[test]
    fn normal_cdf_reference_values() {
        assert!((norm_cdf(1.644_853_626_951_472_2) - 0.95).abs() < 2e-16);
        assert!((norm_sf(3.0) / 1.349_898_031_630_094_5e-3 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cauchy_and_two_dof_closed_forms() {
        let c = StudentT::new(1.0);
        for &t in &[-3.0, -0.5, 0.0, 0.2, 4.0] {
            let expect = 0.5 + (t as f64).atan() / PI;
            assert!((c.cdf(t) - expect).abs() < 1e-14);
        }
        let t2 = StudentT::new(2.0);
        for &t in &[-3.0_f64, 0.7, 10.0] {
            let expect = 0.5 + t / (2.0 * (2.0 + t * t).sqrt());
            assert!((t2.cdf(t) - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn student_quantile_round_trip() {
        for &nu in &[1.5, 3.0, 4.0, 10.0, 30.0] {
            let d = StudentT::new(nu);
            for &p in &[1e-9, 0.001, 0.1, 0.4, 0.6, 0.9, 0.99, 1.0 - 1e-8] {
                let t = d.quantile(p);
                assert!((d.cdf(t) - p).abs() < 1e-12, "nu={nu} p={p}");
            }
        }
    }
}

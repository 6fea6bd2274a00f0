//! Property-based checks of the measures on random finite laws.

use proptest::prelude::*;

use varmetrics::probspace::{DiscreteDistribution, Distribution, FiniteRV};
use varmetrics::riskmeasures::{es, es_left, expectile, quantile_left, quantile_right, Level};
use varmetrics::variability::{delta_es, delta_ex, delta_q, mmd, VariabilityKind};

fn law_strategy() -> impl Strategy<Value = DiscreteDistribution> {
    prop::collection::vec((-40i32..=40, 1u32..=1000), 1..12).prop_map(|pts| {
        DiscreteDistribution::from_weighted(pts.into_iter().map(|(k, w)| (k as f64 / 4.0, w as f64))).unwrap()
    })
}

fn atoms_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-40i32..=40).prop_map(|k| k as f64 / 4.0), 1..16)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a == b) || (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

/// Levels that every measure accepts.
const LEVELS: [f64; 4] = [0.55, 0.75, 0.9, 0.975];

fn eval(kind: VariabilityKind, d: &Distribution, p: f64) -> Option<f64> {
    kind.evaluate(d, kind.takes_level().then_some(p)).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn atom_order_is_irrelevant(mut atoms in atoms_strategy(), seed in any::<u64>()) {
        let x = FiniteRV::new(atoms.clone()).unwrap();
        let n = atoms.len();
        atoms.rotate_left((seed % n as u64) as usize);
        atoms.reverse();
        let y = FiniteRV::new(atoms).unwrap();
        let (dx, dy): (Distribution, Distribution) = (x.law().into(), y.law().into());
        for kind in VariabilityKind::ALL {
            for p in LEVELS {
                prop_assert_eq!(eval(kind, &dx, p), eval(kind, &dy, p), "{}", kind);
            }
        }
    }

    #[test]
    fn location_scale_and_reflection(law in law_strategy(), shift in -10i32..10, scale in 1u32..8) {
        let (c, lam) = (shift as f64 / 2.0, scale as f64 / 2.0);
        let d: Distribution = law.clone().into();
        let moved: Distribution = law.affine(c, lam).into();
        let neg: Distribution = law.negate().into();
        for kind in [
            VariabilityKind::DeltaQ, VariabilityKind::DeltaEs, VariabilityKind::DeltaEx,
            VariabilityKind::Range, VariabilityKind::Std, VariabilityKind::Mad,
            VariabilityKind::Mmd, VariabilityKind::GiniD, VariabilityKind::Variance,
        ] {
            let power = if kind == VariabilityKind::Variance { 2 } else { 1 };
            for p in LEVELS {
                let base = eval(kind, &d, p).unwrap();
                let m = eval(kind, &moved, p).unwrap();
                prop_assert!(close(m, lam.powi(power) * base, 1e-12), "{} p={}: {} vs {}", kind, p, m, base);
                let r = eval(kind, &neg, p).unwrap();
                prop_assert!(close(r, base, 1e-12), "{} p={}: {} vs {}", kind, p, r, base);
                prop_assert!(base >= 0.0);
            }
        }
    }

    #[test]
    fn nondecreasing_in_level(law in law_strategy()) {
        let d: Distribution = law.into();
        let grid: Vec<f64> = (1..40).map(|k| 0.5 + k as f64 / 80.0).collect();
        for w in grid.windows(2) {
            prop_assert!(delta_q(&d, w[1]).unwrap() >= delta_q(&d, w[0]).unwrap());
            prop_assert!(delta_es(&d, w[1]).unwrap() >= delta_es(&d, w[0]).unwrap() - 1e-12);
            prop_assert!(delta_ex(&d, w[1]).unwrap() >= delta_ex(&d, w[0]).unwrap() - 1e-12);
        }
    }

    #[test]
    fn ordering_of_risk_measures(law in law_strategy(), k in 1u32..99) {
        let p = k as f64 / 100.0;
        let l = Level::new(p).unwrap();
        let d: Distribution = law.clone().into();
        let (lo, hi) = (law.min(), law.max());
        let (ql, qr) = (quantile_left(&d, l), quantile_right(&d, l));
        prop_assert!(lo <= ql && ql <= qr && qr <= hi);
        prop_assert!(es(&d, l) >= qr - 1e-12 && es(&d, l) <= hi + 1e-12);
        prop_assert!(es_left(&d, l) <= ql + 1e-12 && es_left(&d, l) >= lo - 1e-12);
        let e = expectile(&d, l).unwrap();
        prop_assert!(lo <= e && e <= hi);
        // The first-order condition p E(X-e)+ = (1-p) E(e-X)+.
        let up = d.stop_loss(e);
        let down = e - law.mean() + up;
        prop_assert!((p * up - (1.0 - p) * down).abs() < 1e-10 * (1.0 + hi.abs().max(lo.abs())));
    }

    #[test]
    fn median_level_is_twice_mmd(law in law_strategy()) {
        let d: Distribution = law.into();
        prop_assert!(close(delta_es(&d, 0.5).unwrap(), 2.0 * mmd(&d), 1e-12));
    }

    #[test]
    fn mean_of_es_and_left_es(law in law_strategy(), k in 1u32..99) {
        // p ES^-_p + (1-p) ES_p = E X.
        let p = k as f64 / 100.0;
        let l = Level::new(p).unwrap();
        let d: Distribution = law.clone().into();
        let m = p * es_left(&d, l) + (1.0 - p) * es(&d, l);
        prop_assert!(close(m, law.mean(), 1e-12));
    }
}

use varmetrics::asymptotics::Estimator;
use varmetrics::montecarlo::{
    estimate, export_histogram, read_histogram, run_simulation, sample, stream_rng, SimConfig,
};
use varmetrics::probspace::{make_normal, make_pareto, Distribution};

fn normal() -> Distribution {
    make_normal(0.0, 1.0).unwrap().into()
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let cfg = SimConfig::new(make_pareto(4.0).unwrap().into(), Estimator::DeltaEx, 0.9, 300, 64, 99);
    let run_on = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_simulation(&cfg).unwrap())
    };
    let (a, b) = (run_on(1), run_on(4));
    assert_eq!(a.estimates, b.estimates);
    assert_eq!(a.histogram, b.histogram);
}

#[test]
fn replication_i_uses_stream_i() {
    let cfg = SimConfig::new(normal(), Estimator::DeltaEs, 0.8, 200, 5, 1234);
    let r = run_simulation(&cfg).unwrap();
    for i in [0u64, 3] {
        let mut rng = stream_rng(1234, i);
        let x = sample(&normal(), 200, &mut rng);
        assert_eq!(estimate(Estimator::DeltaEs, x, 0.8).unwrap(), r.estimates[i as usize]);
    }
    let other = run_simulation(&SimConfig { seed: 1235, ..cfg }).unwrap();
    assert_ne!(other.estimates, r.estimates);
}

#[test]
fn standardized_errors_are_centred() {
    for est in Estimator::ALL {
        let r = run_simulation(&SimConfig::new(normal(), est, 0.9, 2000, 400, 7)).unwrap();
        let sigma = r.sigma_sq.unwrap().sqrt();
        assert!(r.mean.abs() < 4.0 * sigma / 20.0, "{est}: mean {}", r.mean);
        assert_eq!(r.errors.len(), 400);
        assert!(r.ks_distance.unwrap() < 0.1);
    }
}

#[test]
fn histogram_file_round_trips() {
    let r = run_simulation(&SimConfig::new(normal(), Estimator::DeltaQ, 0.75, 400, 150, 5)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    export_histogram(&r, &path).unwrap();
    let back = read_histogram(&path).unwrap();
    assert_eq!(back, r.histogram);
    let header = std::fs::read_to_string(&path).unwrap();
    assert!(header.starts_with("bin_left,bin_right,count,normal_density_at_midpoint\n"));
    // Sixty bins centred on the mean, each 8σ/(60√n) wide.
    let width = back.edges[1] - back.edges[0];
    let sd = (r.sigma_sq.unwrap() / 400.0).sqrt();
    assert!((width - 8.0 * sd / 60.0).abs() < 1e-12);
}

#[test]
fn divergent_targets_are_errors() {
    let cauchy_like: Distribution = make_pareto(1.0).unwrap().into();
    assert!(run_simulation(&SimConfig::new(cauchy_like, Estimator::DeltaEs, 0.9, 100, 4, 0)).is_err());
}

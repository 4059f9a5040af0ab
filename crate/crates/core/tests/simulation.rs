use aoi_core::analytic::aoi_hybrid_exact;
use aoi_core::model::SystemConfig;
use aoi_core::sim::{replicate_hybrid, simulate_hybrid, EventKind, Horizon, SimConfig, TraceEvent};

/// Two-sided one-sample Kolmogorov–Smirnov statistic against Exp(rate).
fn ks_exponential(mut xs: Vec<f64>, rate: f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = 1.0 - (-rate * x).exp();
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn delivery_ages_are_exponential() {
    let mu = [0.5, 1.0, 3.0];
    let system = SystemConfig::new(mu.to_vec(), vec![2.0]).unwrap();
    let cfg = SimConfig {
        horizon: Horizon::Time(2.2e5),
        warmup_fraction: 0.0,
        replications: 1,
        seed: 99,
    };
    let mut ages: Vec<Vec<f64>> = vec![Vec::new(); mu.len()];
    let mut sink = |e: &TraceEvent| {
        if e.kind == EventKind::Type1 {
            ages[e.device - 1].push(e.delivered_age);
        }
    };
    replicate_hybrid(&system, &cfg, 0, Some(&mut sink)).unwrap();
    for (i, samples) in ages.into_iter().enumerate() {
        let samples: Vec<f64> = samples.into_iter().take(100_000).collect();
        assert_eq!(samples.len(), 100_000, "device {}", i + 1);
        let d = ks_exponential(samples, mu[i]);
        // critical value at α = 0.01
        let crit = 1.628 / (100_000f64).sqrt();
        assert!(d < crit, "device {}: D = {d}, critical {crit}", i + 1);
    }
}

#[test]
fn estimator_covers_analytic_value() {
    for n in 1..=3 {
        for lambda in [0.0, 1.0] {
            let lam = if lambda > 0.0 { vec![lambda] } else { vec![] };
            let system = SystemConfig::new(vec![1.0; n], lam).unwrap();
            let exact = aoi_hybrid_exact(&system).unwrap().value;
            let mut covered = 0;
            for seed in 0..20 {
                let cfg = SimConfig {
                    horizon: Horizon::Time(1e4),
                    warmup_fraction: 0.1,
                    replications: 10,
                    seed,
                };
                let r = simulate_hybrid(&system, &cfg).unwrap();
                if (r.mean_aoi - exact).abs() <= 3.0 * r.half_width_95 {
                    covered += 1;
                }
            }
            assert!(covered >= 19, "N={n} λ={lambda}: {covered}/20");
        }
    }
}

#[test]
fn monitor_age_never_rises_at_a_delivery() {
    let system = SystemConfig::new(vec![0.4, 1.7, 1.0, 2.5], vec![0.3, 0.2]).unwrap();
    let cfg = SimConfig {
        horizon: Horizon::Time(5e4),
        warmup_fraction: 0.0,
        replications: 1,
        seed: 4,
    };
    let mut count = 0u64;
    let mut sink = |e: &TraceEvent| {
        assert!(e.monitor_age_after <= e.monitor_age_before);
        if e.kind == EventKind::Type2 {
            assert_eq!(e.monitor_age_after, 0.0);
        }
        count += 1;
    };
    let rep = replicate_hybrid(&system, &cfg, 0, Some(&mut sink)).unwrap();
    assert_eq!(rep.events, count);
}

#[test]
fn repeated_runs_are_bit_identical() {
    let system = SystemConfig::new(vec![1.0, 2.0], vec![0.5]).unwrap();
    let cfg = SimConfig {
        horizon: Horizon::Time(1e4),
        warmup_fraction: 0.1,
        replications: 3,
        seed: 2024,
    };
    let a = simulate_hybrid(&system, &cfg).unwrap();
    let b = simulate_hybrid(&system, &cfg).unwrap();
    assert_eq!(a.mean_aoi.to_bits(), b.mean_aoi.to_bits());
    assert_eq!(a.half_width_95.to_bits(), b.half_width_95.to_bits());
    assert_eq!(a.events_processed, b.events_processed);
}

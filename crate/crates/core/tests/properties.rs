use aoi_core::analytic::{
    aoi_basic_exact, aoi_basic_homogeneous, aoi_homogeneous, aoi_hybrid_exact,
    aoi_hybrid_homogeneous, aoi_hybrid_homogeneous_collapsed,
};
use aoi_core::model::{
    enumerate_states, p_index, p_tilde_index, state_weight, SystemConfig, Variant,
    DEFAULT_STATE_CAP,
};
use aoi_core::optimizer::{optimal_deployment, optimal_deployments};
use aoi_core::shs::{build_basic_model, build_hybrid_model, closed_form_check, solve};
use aoi_core::sim::{aoi_time_average, AgeEvent};
use proptest::prelude::*;

/// Product-measure oracle for the homogeneous system: with `θ = λ/(μ+λ)`,
/// `Δ = Σ_{r=0}^{N} s_r / (μ+λ)` where `s_0 = 1` and
/// `s_r = s_{r-1} (1-θ) (N-r+1)/N`.
fn homogeneous_oracle(n: usize, mu_total: f64, lambda_total: f64) -> f64 {
    let total = mu_total + lambda_total;
    let keep = mu_total / total;
    let mut s = 1.0;
    let mut acc = 1.0;
    for r in 1..=n {
        s *= keep * (n - r + 1) as f64 / n as f64;
        acc += s;
    }
    acc / total
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn rate() -> impl Strategy<Value = f64> {
    0.05f64..5.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn index_bounds(q in prop::collection::vec(1usize..=5, 1..=6)) {
        let n = q.len();
        let p = p_index(&q);
        prop_assert!((2..=n + 1).contains(&p));
        let pt = p_tilde_index(&q, 4);
        prop_assert!((1..=n + 1).contains(&pt));
        // a repeat sits right after the distinct prefix
        if p <= n {
            prop_assert!(q[..p - 1].contains(&q[p - 1]));
        }
    }

    #[test]
    fn weights_normalise(mu in prop::collection::vec(rate(), 1..=4), lambda in prop::collection::vec(rate(), 0..=2)) {
        let c = SystemConfig::new(mu, lambda).unwrap();
        let variant = c.variant();
        let total = c.total_rate();
        let n = c.n_type1();
        let sum: f64 = enumerate_states(&c, variant, DEFAULT_STATE_CAP)
            .unwrap()
            .map(|q| state_weight(&q, &c, variant) / total.powi(n as i32))
            .sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_matches_homogeneous(n in 1usize..=6, mu in rate(), lambda in 0.0f64..4.0) {
        let basic = aoi_basic_exact(&SystemConfig::basic(vec![mu; n]).unwrap()).unwrap().value;
        let hom = aoi_basic_homogeneous(n, n as f64 * mu).unwrap().value;
        prop_assert!(rel(basic, hom) < 1e-10);
        if n <= 5 && lambda > 0.0 {
            let c = SystemConfig::new(vec![mu; n], vec![lambda]).unwrap();
            let exact = aoi_hybrid_exact(&c).unwrap().value;
            let hom = aoi_hybrid_homogeneous(n, n as f64 * mu, lambda).unwrap().value;
            prop_assert!(rel(exact, hom) < 1e-10);
        }
    }

    #[test]
    fn homogeneous_forms_match_oracle(n in 1usize..=1500, mu_each in rate(), lambda in 0.0f64..50.0) {
        let mu_total = n as f64 * mu_each;
        let oracle = homogeneous_oracle(n, mu_total, lambda);
        let collapsed = aoi_hybrid_homogeneous_collapsed(n, mu_total, lambda).unwrap().value;
        prop_assert!(rel(collapsed, oracle) < 1e-10, "{} vs {}", collapsed, oracle);
        if n <= 200 {
            let full = aoi_hybrid_homogeneous(n, mu_total, lambda).unwrap().value;
            prop_assert!(rel(full, oracle) < 1e-10);
        }
    }

    #[test]
    fn permutation_invariant(mu in prop::collection::vec(rate(), 2..=5), lambda in 0.0f64..3.0, shift in 0usize..5) {
        let mut rotated = mu.clone();
        rotated.rotate_left(shift % mu.len());
        let lam = if lambda > 0.0 { vec![lambda] } else { vec![] };
        let a = aoi_hybrid_exact(&SystemConfig::new(mu, lam.clone()).unwrap()).unwrap().value;
        let b = aoi_hybrid_exact(&SystemConfig::new(rotated, lam).unwrap()).unwrap().value;
        prop_assert!(rel(a, b) < 1e-12);
    }

    #[test]
    fn rate_scaling(mu in prop::collection::vec(rate(), 1..=4), lambda in 0.0f64..3.0, c in 0.1f64..10.0) {
        let lam = if lambda > 0.0 { vec![lambda] } else { vec![] };
        let base = aoi_hybrid_exact(&SystemConfig::new(mu.clone(), lam.clone()).unwrap()).unwrap().value;
        let scaled_mu: Vec<f64> = mu.iter().map(|x| x * c).collect();
        let scaled_lam: Vec<f64> = lam.iter().map(|x| x * c).collect();
        let scaled = aoi_hybrid_exact(&SystemConfig::new(scaled_mu, scaled_lam).unwrap()).unwrap().value;
        prop_assert!(rel(scaled * c, base) < 1e-12);
    }

    #[test]
    fn more_type2_rate_lowers_age(mu in prop::collection::vec(rate(), 1..=4), lambda in 0.0f64..3.0, extra in 0.01f64..3.0) {
        let lo = aoi_hybrid_exact(&SystemConfig::new(mu.clone(), vec![lambda]).unwrap()).unwrap().value;
        let hi = aoi_hybrid_exact(&SystemConfig::new(mu, vec![lambda + extra]).unwrap()).unwrap().value;
        prop_assert!(hi < lo);
    }

    #[test]
    fn shs_matches_enumeration(mu in prop::collection::vec(rate(), 1..=4), lambda in prop::collection::vec(rate(), 0..=2)) {
        let c = SystemConfig::new(mu, lambda).unwrap();
        let (model, exact) = if c.m_type2() == 0 {
            (build_basic_model(&c).unwrap(), aoi_basic_exact(&c).unwrap().value)
        } else {
            (build_hybrid_model(&c).unwrap(), aoi_hybrid_exact(&c).unwrap().value)
        };
        let sol = solve(&model).unwrap();
        prop_assert!(rel(sol.aoi, exact) < 1e-10);
        prop_assert!(sol.pi.iter().all(|p| *p >= 0.0));
        prop_assert!((sol.pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(sol.v.iter().all(|x| *x >= -1e-12));
        prop_assert!(closed_form_check(&model, &sol).max_rel() < 1e-9);
    }

    #[test]
    fn sawtooth_sums_segments(steps in prop::collection::vec((0.0f64..3.0, 0.0f64..1.0), 1..40), tail in 0.0f64..2.0) {
        let mut events = vec![AgeEvent { time: 0.0, age: 0.0 }];
        let mut t = 0.0;
        for (dt, frac) in steps {
            let age_before = events.last().unwrap().age + (t + dt - events.last().unwrap().time);
            t += dt;
            events.push(AgeEvent { time: t, age: age_before * frac });
        }
        let horizon = t + tail + 1e-3;
        let got = aoi_time_average(&events, horizon).unwrap();
        // area under each segment as a difference of squares
        let mut area = 0.0;
        for (i, e) in events.iter().enumerate() {
            let end = events.get(i + 1).map_or(horizon, |n| n.time);
            let a = e.age + (end - e.time);
            area += (a * a - e.age * e.age) / 2.0;
        }
        let want = area / horizon;
        prop_assert!(rel(got, want) < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn optimum_is_never_beaten(k in 1.0f64..12.0, d in 1.0f64..60.0, mu in 0.2f64..3.0, lambda in 0.2f64..3.0) {
        let best = optimal_deployment(k, d, mu, lambda).unwrap();
        prop_assert!(best.n as f64 + k * best.m as f64 <= d * (1.0 + 1e-12));
        for m in 0..=((d / k) as usize) {
            for n in 0..=((d - k * m as f64).max(0.0) as usize) {
                if n + m == 0 {
                    continue;
                }
                let v = aoi_homogeneous(n, mu, m as f64 * lambda).unwrap().value;
                prop_assert!(best.aoi <= v * (1.0 + 1e-12), "({}, {}) beats ({}, {})", n, m, best.n, best.m);
            }
        }
    }

    #[test]
    fn optimum_improves_with_budget(k in 1.0f64..20.0, mu in 0.2f64..3.0, lambda in 0.2f64..3.0) {
        let grid: Vec<f64> = (1..=60).map(|i| 5.0 * i as f64).collect();
        let optima = optimal_deployments(k, &grid, mu, lambda).unwrap();
        prop_assert!(optima.windows(2).all(|w| w[1].aoi <= w[0].aoi));
    }
}

#[test]
fn type2_rate_monotone_on_grid() {
    for n in 1..=10 {
        let values: Vec<f64> = (0..10)
            .map(|i| {
                aoi_hybrid_homogeneous(n, n as f64, 0.3 * i as f64)
                    .unwrap()
                    .value
            })
            .collect();
        assert!(values.windows(2).all(|w| w[1] <= w[0]), "N={n}");
    }
}

#[test]
fn hybrid_with_zero_lambda_equals_basic() {
    let mu = vec![0.7, 1.9, 1.1];
    let b = aoi_basic_exact(&SystemConfig::basic(mu.clone()).unwrap()).unwrap();
    let h = aoi_hybrid_exact(&SystemConfig::new(mu, vec![0.0]).unwrap()).unwrap();
    assert_eq!(b.value, h.value);
    assert_eq!(
        Variant::Basic,
        SystemConfig::new(vec![1.0], vec![]).unwrap().variant()
    );
}

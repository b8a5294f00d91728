#![allow(dead_code)]

use hypotest::{DensityModel, HypothesisPair};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub const CASES: u32 = 256;

/// A runner with a fixed seed and no failure persistence, so every run
/// sees the same cases.
pub fn runner(seed: u8) -> TestRunner {
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

pub fn check<S: Strategy>(seed: u8, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>)
where
    S::Value: std::fmt::Debug,
{
    if let Err(e) = runner(seed).run(&strategy, test) {
        panic!("{e}");
    }
}

pub fn gaussian_mean_pair() -> impl Strategy<Value = HypothesisPair> {
    (-3.0..3.0f64, 0.05..3.0f64, 0.1..10.0f64, 1usize..60, any::<bool>()).prop_map(|(m0, delta, v, n, up)| {
        let m1 = if up { m0 + delta } else { m0 - delta };
        HypothesisPair::new(DensityModel::gaussian(m0, v).unwrap(), DensityModel::gaussian(m1, v).unwrap(), n).unwrap()
    })
}

pub fn gaussian_quadratic_pair() -> impl Strategy<Value = HypothesisPair> {
    (-2.0..2.0f64, -2.0..2.0f64, 0.2..4.0f64, 1.2..4.0f64, any::<bool>()).prop_map(|(m0, m1, v0, scale, wider)| {
        let v1 = if wider { v0 * scale } else { v0 / scale };
        HypothesisPair::new(DensityModel::gaussian(m0, v0).unwrap(), DensityModel::gaussian(m1, v1).unwrap(), 1).unwrap()
    })
}

pub fn exponential_pair() -> impl Strategy<Value = HypothesisPair> {
    (0.2..5.0f64, 1.1..4.0f64, any::<bool>(), 1usize..12).prop_map(|(r0, scale, up, n)| {
        let r1 = if up { r0 * scale } else { r0 / scale };
        HypothesisPair::new(DensityModel::exponential(r0).unwrap(), DensityModel::exponential(r1).unwrap(), n).unwrap()
    })
}

pub fn continuous_pair() -> impl Strategy<Value = HypothesisPair> {
    prop_oneof![gaussian_mean_pair(), gaussian_quadratic_pair(), exponential_pair()]
}

pub fn tabulated_masses(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01..1.0f64, n).prop_map(|w| {
        let total: f64 = w.iter().sum();
        w.into_iter().map(|x| x / total).collect()
    })
}

pub fn discrete_pair() -> impl Strategy<Value = HypothesisPair> {
    let poisson = (0.1..8.0f64, 1.1..3.0f64, any::<bool>(), 1usize..6).prop_map(|(r0, scale, up, n)| {
        let r1 = if up { r0 * scale } else { r0 / scale };
        HypothesisPair::new(DensityModel::poisson(r0).unwrap(), DensityModel::poisson(r1).unwrap(), n).unwrap()
    });
    let bernoulli = (0.05..0.95f64, 0.05..0.95f64, 1usize..40).prop_filter_map("distinct p", |(a, b, n)| {
        HypothesisPair::new(DensityModel::bernoulli(a).unwrap(), DensityModel::bernoulli(b).unwrap(), n).ok()
    });
    let binomial = (1u64..20, 0.05..0.95f64, 0.05..0.95f64, 1usize..4).prop_filter_map("distinct p", |(t, a, b, n)| {
        HypothesisPair::new(DensityModel::binomial(t, a).unwrap(), DensityModel::binomial(t, b).unwrap(), n).ok()
    });
    let tabulated = (2usize..9)
        .prop_flat_map(|n| (tabulated_masses(n), tabulated_masses(n)))
        .prop_filter_map("distinct masses", |(a, b)| {
            let support: Vec<i64> = (0..a.len() as i64).collect();
            HypothesisPair::new(
                DensityModel::tabulated(support.clone(), a).unwrap(),
                DensityModel::tabulated(support, b).unwrap(),
                1,
            )
            .ok()
        });
    prop_oneof![poisson, bernoulli, binomial, tabulated]
}

pub fn analytic_pair() -> impl Strategy<Value = HypothesisPair> {
    prop_oneof![continuous_pair(), discrete_pair()]
}

/// Costs with |ln(c0/c1)| ≤ 3.
pub fn cost_pair() -> impl Strategy<Value = (f64, f64)> {
    (-3.0..3.0f64, -2.0..2.0f64).prop_map(|(log_ratio, log_c1)| {
        let c1 = log_c1.exp();
        (c1 * log_ratio.exp(), c1)
    })
}

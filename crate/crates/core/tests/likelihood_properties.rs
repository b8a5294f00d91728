mod common;

use common::{analytic_pair, check, gaussian_mean_pair};
use hypotest::testdesign::Region;
use hypotest::{HypothesisPair, Observation, ThresholdTest};
use proptest::prelude::*;

fn mixed_sample(pair: &HypothesisPair, seed: u64) -> Vec<Observation> {
    let n = pair.sample_size();
    let a = pair.p0().sample(n, seed).unwrap();
    let b = pair.p1().sample(n, seed ^ 0x9e37_79b9).unwrap();
    a.into_iter().zip(b).enumerate().map(|(i, (x, y))| if i % 2 == 0 { x } else { y }).collect()
}

#[test]
fn log_ratio_is_additive_over_observations() {
    check(11, (analytic_pair(), any::<u64>()), |(pair, seed)| {
        let obs = mixed_sample(&pair, seed);
        let total = pair.log_likelihood_ratio(&obs).unwrap();
        let parts: Vec<f64> = obs.iter().map(|x| pair.single_llr(x).unwrap()).collect();
        let sum: f64 = parts.iter().sum();
        let scale = parts.iter().map(|p| p.abs()).sum::<f64>().max(1.0);
        prop_assert!((total - sum).abs() <= 1e-13 * scale, "{total} vs {sum}");
        Ok(())
    });
}

#[test]
fn swapping_hypotheses_negates_the_ratio() {
    check(12, (analytic_pair(), any::<u64>()), |(pair, seed)| {
        let swapped = pair.swapped();
        for x in mixed_sample(&pair, seed) {
            let a = pair.single_llr(&x).unwrap();
            let b = swapped.single_llr(&x).unwrap();
            prop_assert_eq!(a, -b);
        }
        Ok(())
    });
}

#[test]
fn mean_cutoff_reproduces_the_ratio_region() {
    check(13, (gaussian_mean_pair(), -4.0..4.0f64, any::<u64>()), |(pair, t, seed)| {
        let red = pair.gaussian_reduction().unwrap();
        prop_assume!(red.mean0 < red.mean1);
        let cutoff = pair.mean_threshold(t).unwrap();
        let test = ThresholdTest::deterministic(t);
        let n = pair.sample_size();
        // 10^4 samples over the whole property run, centred on the cutoff
        // so that both outcomes occur.
        let shifted = hypotest::DensityModel::gaussian(cutoff, red.variance).unwrap();
        for i in 0..40u64 {
            let obs = shifted.sample(n, seed.wrapping_add(i)).unwrap();
            let llr = pair.log_likelihood_ratio(&obs).unwrap();
            let xbar = obs.iter().map(Observation::value).sum::<f64>() / n as f64;
            if test.region(llr) == Region::Boundary {
                continue;
            }
            prop_assert_eq!(llr >= t, xbar >= cutoff, "llr {} t {} x̄ {} c {}", llr, t, xbar, cutoff);
        }
        Ok(())
    });
}

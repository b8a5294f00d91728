//! Seeded simulation of error rates and realized costs.
//!
//! Trial `i` uses ChaCha8 stream `i` of the run seed. Within a trial the
//! generator first draws the N observations under H0, then one uniform for
//! the boundary coin, then N observations under H1 and a second uniform.
//! Every policy evaluated in the same run sees the same samples and the
//! same coins (common random numbers). Results are accumulated as integer
//! outcome counts, so they do not depend on how rayon splits the trials.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::likelihood::HypothesisPair;
use crate::scalar::Real;
use crate::testdesign::{cost_optimal_test, neyman_pearson_test, CostModel, Decision, ThresholdTest};

/// Smallest accepted number of trials.
pub const MIN_TRIALS: usize = 1000;

const CI_SIGMAS: f64 = 3.0;
const CHUNK: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport<R> {
    pub trials: usize,
    pub seed: u64,
    pub alpha_hat: R,
    pub beta_hat: R,
    /// 3·sqrt(r(1 − r)/M) at the empirical rate.
    pub alpha_ci_halfwidth: R,
    pub beta_ci_halfwidth: R,
}

impl<R: Real> SimulationReport<R> {
    fn from_counts(trials: usize, seed: u64, rejections_h0: u64, acceptances_h1: u64) -> Self {
        let m = R::from_usize(trials).expect("fits");
        let rate = |k: u64| R::from_u64(k).expect("fits") / m;
        let half = |r: R| R::lit(CI_SIGMAS) * (r * (R::one() - r) / m).sqrt();
        let (alpha_hat, beta_hat) = (rate(rejections_h0), rate(acceptances_h1));
        Self {
            trials,
            seed,
            alpha_hat,
            beta_hat,
            alpha_ci_halfwidth: half(alpha_hat),
            beta_ci_halfwidth: half(beta_hat),
        }
    }

    /// Empirical cost c0·α̂ + c1·β̂.
    pub fn cost_hat(&self, cost: &CostModel<R>) -> R {
        cost.c0() * self.alpha_hat + cost.c1() * self.beta_hat
    }

    pub fn alpha_covers(&self, alpha: R) -> bool {
        (self.alpha_hat - alpha).abs() <= self.alpha_ci_halfwidth
    }

    pub fn beta_covers(&self, beta: R) -> bool {
        (self.beta_hat - beta).abs() <= self.beta_ci_halfwidth
    }
}

/// Paired comparison of the Neyman-Pearson and cost-optimal policies on
/// common samples.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyComparison<R> {
    pub np_test: ThresholdTest<R>,
    pub optimal_test: ThresholdTest<R>,
    pub np: SimulationReport<R>,
    pub optimal: SimulationReport<R>,
    pub np_cost_hat: R,
    pub optimal_cost_hat: R,
    /// Ĵ_NP − Ĵ*.
    pub difference: R,
    /// 3σ halfwidth of the paired per-trial cost difference.
    pub difference_ci_halfwidth: R,
}

impl<R: Real> PolicyComparison<R> {
    /// The cost-optimal policy is cheaper by more than the paired CI.
    pub fn gap_is_significant(&self) -> bool {
        self.difference > self.difference_ci_halfwidth
    }
}

/// Joint decision counts. Bit `2p` of a cell index is policy `p` rejecting
/// under H0, bit `2p + 1` is policy `p` rejecting under H1.
#[derive(Debug, Clone, PartialEq, Eq)]
struct JointCounts {
    cells: Vec<u64>,
}

impl JointCounts {
    fn new(policies: usize) -> Self {
        Self {
            cells: vec![0; 1 << (2 * policies)],
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.cells.iter_mut().zip(other.cells) {
            *a += b;
        }
        self
    }

    fn rejections(&self, policy: usize, under_h1: bool) -> u64 {
        let bit = 2 * policy + usize::from(under_h1);
        self.cells
            .iter()
            .enumerate()
            .filter(|(cell, _)| cell >> bit & 1 == 1)
            .map(|(_, &c)| c)
            .sum()
    }
}

fn check_trials(trials: usize) -> Result<()> {
    if trials < MIN_TRIALS {
        return Err(Error::param("trials", format!("need at least {MIN_TRIALS}, got {trials}")));
    }
    Ok(())
}

fn simulate<R: Real>(pair: &HypothesisPair<R>, policies: &[ThresholdTest<R>], trials: usize, seed: u64) -> Result<JointCounts> {
    assert!(policies.len() <= 4, "at most four policies per run");
    let n = pair.sample_size();
    let base = ChaCha8Rng::seed_from_u64(seed);
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| -> Result<JointCounts> {
            let mut counts = JointCounts::new(policies.len());
            let start = chunk * CHUNK;
            let end = (start + CHUNK).min(trials);
            for trial in start..end {
                let mut rng = base.clone();
                rng.set_stream(trial as u64);
                let llr0 = pair.sum_llr((0..n).map(|_| pair.p0().draw(&mut rng)))?;
                let u0 = R::open01(&mut rng);
                let llr1 = pair.sum_llr((0..n).map(|_| pair.p1().draw(&mut rng)))?;
                let u1 = R::open01(&mut rng);
                let mut cell = 0usize;
                for (p, test) in policies.iter().enumerate() {
                    if test.decide_llr(llr0, u0) == Decision::RejectH0 {
                        cell |= 1 << (2 * p);
                    }
                    if test.decide_llr(llr1, u1) == Decision::RejectH0 {
                        cell |= 1 << (2 * p + 1);
                    }
                }
                counts.cells[cell] += 1;
            }
            Ok(counts)
        })
        .try_reduce(|| JointCounts::new(policies.len()), |a, b| Ok(a.merge(b)))
}

/// Empirical α̂ and β̂ of `test` from `trials` seeded samples under each
/// hypothesis.
pub fn estimate_error_rates<R: Real>(test: &ThresholdTest<R>, pair: &HypothesisPair<R>, trials: usize, seed: u64) -> Result<SimulationReport<R>> {
    check_trials(trials)?;
    let counts = simulate(pair, std::slice::from_ref(test), trials, seed)?;
    let rej0 = counts.rejections(0, false);
    let acc1 = trials as u64 - counts.rejections(0, true);
    Ok(SimulationReport::from_counts(trials, seed, rej0, acc1))
}

/// Runs the size-`np_size` Neyman-Pearson test and the cost-optimal test on
/// common random samples and reports both empirical costs with a paired CI
/// for their difference.
pub fn compare_policies<R: Real>(
    pair: &HypothesisPair<R>,
    cost: &CostModel<R>,
    np_size: R,
    trials: usize,
    seed: u64,
) -> Result<PolicyComparison<R>> {
    check_trials(trials)?;
    let np_test = neyman_pearson_test(pair, np_size)?;
    let optimal_test = cost_optimal_test(pair, cost);
    compare_tests(pair, cost, np_test, optimal_test, trials, seed)
}

/// [`compare_policies`] for two arbitrary tests; the first plays the role of
/// the Neyman-Pearson policy.
pub fn compare_tests<R: Real>(
    pair: &HypothesisPair<R>,
    cost: &CostModel<R>,
    np_test: ThresholdTest<R>,
    optimal_test: ThresholdTest<R>,
    trials: usize,
    seed: u64,
) -> Result<PolicyComparison<R>> {
    check_trials(trials)?;
    let counts = simulate(pair, &[np_test, optimal_test], trials, seed)?;
    let m = trials as u64;
    let np = SimulationReport::from_counts(trials, seed, counts.rejections(0, false), m - counts.rejections(0, true));
    let optimal = SimulationReport::from_counts(trials, seed, counts.rejections(1, false), m - counts.rejections(1, true));

    // Per-trial cost difference d = c0(rNP₀ − r*₀) − c1(rNP₁ − r*₁).
    let (c0, c1) = (cost.c0(), cost.c1());
    let bit = |cell: usize, b: usize| R::from_usize(cell >> b & 1).expect("bit");
    let diffs: Vec<(R, R)> = counts
        .cells
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(cell, &k)| {
            let d = c0 * (bit(cell, 0) - bit(cell, 2)) - c1 * (bit(cell, 1) - bit(cell, 3));
            (d, R::from_u64(k).expect("fits"))
        })
        .collect();
    let mr = R::from_u64(m).expect("fits");
    let mean = diffs.iter().fold(R::zero(), |acc, &(d, k)| acc + d * k) / mr;
    let ss = diffs.iter().fold(R::zero(), |acc, &(d, k)| acc + (d - mean) * (d - mean) * k);
    let var = ss / (mr - R::one());
    let difference_ci_halfwidth = R::lit(CI_SIGMAS) * (var / mr).sqrt();

    let np_cost_hat = np.cost_hat(cost);
    let optimal_cost_hat = optimal.cost_hat(cost);
    Ok(PolicyComparison {
        np_test,
        optimal_test,
        np,
        optimal,
        np_cost_hat,
        optimal_cost_hat,
        difference: np_cost_hat - optimal_cost_hat,
        difference_ci_halfwidth,
    })
}

//! Cost-optimal and Neyman-Pearson threshold tests, their error rates and
//! expected cost.
//!
//! Every test here rejects H0 when ln Λ(x) lies above a threshold `t`; on
//! the boundary ln Λ(x) = t it rejects with probability γ. The cost-optimal
//! test uses t = ln(c0/c1) and γ = 1. Neyman-Pearson tests pick `t` so that
//! the size is exactly the requested α, randomizing on an atom when the
//! likelihood ratio is discrete.
//!
//! Error rates are evaluated from the exact law of ln Λ where one is
//! available (see [`llr_law`]); anything else is reported as
//! [`Error::NotAnalyticallyEvaluable`] and left to [`crate::montecarlo`].

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distributions::{DensityModel, Family, Observation, DEFAULT_TAIL_RESIDUAL};
use crate::error::{Error, Result};
use crate::likelihood::{GaussianMeanReduction, HypothesisPair};
use crate::scalar::Real;
use crate::special::{erlang_tails, normal_quantile};

/// Error costs: `c0` for rejecting a true H0, `c1` for rejecting a true H1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel<R> {
    c0: R,
    c1: R,
}

impl<R: Real> CostModel<R> {
    pub fn new(c0: R, c1: R) -> Result<Self> {
        for (field, c) in [("c0", c0), ("c1", c1)] {
            if !(c.is_finite() && c > R::zero()) {
                return Err(Error::param(field, format!("cost must be finite and > 0, got {c}")));
            }
        }
        let ratio = c0 / c1;
        if !(ratio.is_finite() && ratio > R::zero()) {
            return Err(Error::param("c0", "ratio c0/c1 must be finite and positive"));
        }
        Ok(Self { c0, c1 })
    }

    pub fn c0(&self) -> R {
        self.c0
    }

    pub fn c1(&self) -> R {
        self.c1
    }

    pub fn ratio(&self) -> R {
        self.c0 / self.c1
    }

    pub fn log_ratio(&self) -> R {
        self.ratio().ln()
    }
}

/// Where a log-likelihood ratio falls relative to a test threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Above,
    Boundary,
    Below,
}

/// Reject H0 iff ln Λ > t; reject with probability γ iff ln Λ = t.
///
/// Equality is judged with a relative tolerance of 1e-9 (for `f64`), so that
/// ratios which tie in exact arithmetic but differ in the last bits after
/// summation are treated alike by [`decide`] and by [`error_rates`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdTest<R> {
    llr_threshold: R,
    boundary_randomization: R,
}

impl<R: Real> ThresholdTest<R> {
    pub fn new(llr_threshold: R, boundary_randomization: R) -> Result<Self> {
        if llr_threshold.is_nan() {
            return Err(Error::param("llr_threshold", "must not be NaN"));
        }
        if !(boundary_randomization >= R::zero() && boundary_randomization <= R::one()) {
            return Err(Error::param(
                "boundary_randomization",
                format!("must lie in [0, 1], got {boundary_randomization}"),
            ));
        }
        Ok(Self {
            llr_threshold,
            boundary_randomization,
        })
    }

    /// Deterministic test including the boundary.
    pub fn deterministic(llr_threshold: R) -> Self {
        Self::new(llr_threshold, R::one()).expect("valid threshold")
    }

    /// Empty critical region.
    pub fn always_accept() -> Self {
        Self {
            llr_threshold: R::infinity(),
            boundary_randomization: R::zero(),
        }
    }

    /// Full critical region.
    pub fn always_reject() -> Self {
        Self::deterministic(R::neg_infinity())
    }

    pub fn llr_threshold(&self) -> R {
        self.llr_threshold
    }

    pub fn boundary_randomization(&self) -> R {
        self.boundary_randomization
    }

    pub fn is_randomized(&self) -> bool {
        self.boundary_randomization > R::zero() && self.boundary_randomization < R::one()
    }

    fn tolerance(&self) -> R {
        let t = self.llr_threshold;
        if t.is_finite() {
            R::lit(1e-9).max(R::lit(64.0) * R::epsilon()) * t.abs().max(R::one())
        } else {
            R::zero()
        }
    }

    pub fn region(&self, llr: R) -> Region {
        let t = self.llr_threshold;
        if llr == t {
            return Region::Boundary;
        }
        let d = llr - t;
        if d.is_finite() && d.abs() <= self.tolerance() {
            Region::Boundary
        } else if llr > t {
            Region::Above
        } else {
            Region::Below
        }
    }

    /// Decision for a given ln Λ, with `uniform` in [0, 1) used only on the
    /// boundary of a randomized test.
    pub fn decide_llr(&self, llr: R, uniform: R) -> Decision {
        let reject = match self.region(llr) {
            Region::Above => true,
            Region::Below => false,
            Region::Boundary => {
                let g = self.boundary_randomization;
                g >= R::one() || (g > R::zero() && uniform < g)
            }
        };
        if reject {
            Decision::RejectH0
        } else {
            Decision::AcceptH0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    AcceptH0,
    RejectH0,
}

/// Size α = P0(reject), Type II error β = P1(accept), power = 1 − β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRates<R> {
    pub alpha: R,
    pub beta: R,
    pub power: R,
}

impl<R: Real> ErrorRates<R> {
    fn new(alpha: R, beta: R) -> Self {
        let clamp = |x: R| x.max(R::zero()).min(R::one());
        let beta = clamp(beta);
        Self {
            alpha: clamp(alpha),
            beta,
            power: R::one() - beta,
        }
    }

    pub fn cost(&self, cost: &CostModel<R>) -> R {
        cost.c0() * self.alpha + cost.c1() * self.beta
    }
}

/// One atom of a discrete law of ln Λ: its value and its mass under each
/// hypothesis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LlrAtom<R> {
    pub llr: R,
    pub mass0: R,
    pub mass1: R,
}

/// Exact law of ln Λ under both hypotheses, where one is known in closed
/// form.
#[derive(Debug, Clone, PartialEq)]
pub enum LlrLaw<R> {
    /// Equal-variance gaussians: ln Λ is affine in x̄.
    GaussianMean(GaussianMeanReduction<R>),
    /// Gaussians with different variances, one observation: ln Λ is
    /// quadratic in x.
    GaussianQuadratic {
        mean0: R,
        var0: R,
        mean1: R,
        var1: R,
    },
    /// Exponentials: ln Λ is affine in the Erlang-distributed sum.
    ExponentialSum { rate0: R, rate1: R, sample_size: usize },
    /// Discrete ln Λ, atoms sorted by decreasing value with ties merged.
    Atoms(Vec<LlrAtom<R>>),
}

/// The analytic law of ln Λ for `pair`, or `NotAnalyticallyEvaluable`.
pub fn llr_law<R: Real>(pair: &HypothesisPair<R>) -> Result<LlrLaw<R>> {
    let n = pair.sample_size();
    if let Some(red) = pair.gaussian_reduction() {
        return Ok(LlrLaw::GaussianMean(red));
    }
    let not_analytic = || {
        Error::NotAnalyticallyEvaluable(format!(
            "{} vs {} with N = {n}",
            pair.p0().family().name(),
            pair.p1().family().name()
        ))
    };
    match (pair.p0().family(), pair.p1().family()) {
        (
            Family::Gaussian { mean: m0, variance: v0 },
            Family::Gaussian { mean: m1, variance: v1 },
        ) => {
            if n == 1 {
                Ok(LlrLaw::GaussianQuadratic {
                    mean0: *m0,
                    var0: *v0,
                    mean1: *m1,
                    var1: *v1,
                })
            } else {
                Err(not_analytic())
            }
        }
        (Family::Exponential { rate: r0 }, Family::Exponential { rate: r1 }) => Ok(LlrLaw::ExponentialSum {
            rate0: *r0,
            rate1: *r1,
            sample_size: n,
        }),
        _ if !pair.p0().is_discrete() => Err(not_analytic()),
        _ if n == 1 => Ok(LlrLaw::Atoms(enumerate_atoms(pair)?)),
        _ => {
            let stat = sum_statistic_pair(pair)?.ok_or_else(not_analytic)?;
            Ok(LlrLaw::Atoms(enumerate_atoms(&stat)?))
        }
    }
}

/// For same-family discrete pairs with an additive sufficient statistic, the
/// pair of laws of Σxᵢ (as an N = 1 pair). Its ln Λ equals the full-sample
/// ln Λ because the combinatorial factors cancel.
fn sum_statistic_pair<R: Real>(pair: &HypothesisPair<R>) -> Result<Option<HypothesisPair<R>>> {
    let n = pair.sample_size();
    let nr = R::from_usize(n).expect("fits");
    let models = match (pair.p0().family(), pair.p1().family()) {
        (Family::Poisson { rate: a }, Family::Poisson { rate: b }) => {
            Some((DensityModel::poisson(nr * *a)?, DensityModel::poisson(nr * *b)?))
        }
        (Family::Bernoulli { p: a }, Family::Bernoulli { p: b }) => {
            Some((DensityModel::binomial(n as u64, *a)?, DensityModel::binomial(n as u64, *b)?))
        }
        (Family::Binomial { trials: ta, p: a }, Family::Binomial { trials: tb, p: b }) if ta == tb => {
            let total = ta * n as u64;
            Some((DensityModel::binomial(total, *a)?, DensityModel::binomial(total, *b)?))
        }
        _ => None,
    };
    models.map(|(p0, p1)| HypothesisPair::new(p0, p1, 1)).transpose()
}

fn enumerate_atoms<R: Real>(pair: &HypothesisPair<R>) -> Result<Vec<LlrAtom<R>>> {
    let residual = R::lit(DEFAULT_TAIL_RESIDUAL);
    let mut support = BTreeSet::new();
    for model in [pair.p0(), pair.p1()] {
        let atoms = model.atoms(residual).expect("discrete model");
        support.extend(atoms.into_iter().map(|(k, _)| k));
    }
    let mut atoms = Vec::with_capacity(support.len());
    for k in support {
        let x = Observation::Count(k);
        let mass0 = pair.p0().density(&x)?;
        let mass1 = pair.p1().density(&x)?;
        if mass0 == R::zero() && mass1 == R::zero() {
            continue;
        }
        atoms.push(LlrAtom {
            llr: pair.single_llr(&x)?,
            mass0,
            mass1,
        });
    }
    atoms.sort_by(|a, b| b.llr.partial_cmp(&a.llr).unwrap_or(Ordering::Equal));
    let mut merged: Vec<LlrAtom<R>> = Vec::with_capacity(atoms.len());
    for atom in atoms {
        match merged.last_mut() {
            Some(last) if ThresholdTest::deterministic(last.llr).region(atom.llr) == Region::Boundary => {
                last.mass0 = last.mass0 + atom.mass0;
                last.mass1 = last.mass1 + atom.mass1;
            }
            _ => merged.push(atom),
        }
    }
    Ok(merged)
}

impl<R: Real> LlrLaw<R> {
    /// (α, β) of `test` under this law.
    pub fn error_rates(&self, test: &ThresholdTest<R>) -> ErrorRates<R> {
        let t = test.llr_threshold();
        // The trivial tests are exact for every law, including enumerated
        // atoms whose masses sum to 1 only up to rounding.
        if t == R::infinity() && test.boundary_randomization() == R::zero() {
            return ErrorRates::new(R::zero(), R::one());
        }
        if t == R::neg_infinity() && test.boundary_randomization() == R::one() {
            return ErrorRates::new(R::one(), R::zero());
        }
        if let LlrLaw::Atoms(atoms) = self {
            let g = test.boundary_randomization();
            let (mut alpha, mut beta) = (R::zero(), R::zero());
            for atom in atoms {
                match test.region(atom.llr) {
                    Region::Above => alpha = alpha + atom.mass0,
                    Region::Below => beta = beta + atom.mass1,
                    Region::Boundary => {
                        alpha = alpha + g * atom.mass0;
                        beta = beta + (R::one() - g) * atom.mass1;
                    }
                }
            }
            return ErrorRates::new(alpha, beta);
        }
        // Continuous laws: ln Λ is finite almost surely and has no atoms.
        if t == R::infinity() {
            return ErrorRates::new(R::zero(), R::one());
        }
        if t == R::neg_infinity() {
            return ErrorRates::new(R::one(), R::zero());
        }
        match self {
            LlrLaw::GaussianMean(red) => {
                let c = red.mean_at_llr(t);
                let sd = red.mean_sd();
                let h0 = DensityModel::gaussian(red.mean0, sd * sd).expect("valid");
                let h1 = DensityModel::gaussian(red.mean1, sd * sd).expect("valid");
                if red.slope() > R::zero() {
                    ErrorRates::new(h0.sf(c), h1.cdf(c))
                } else {
                    ErrorRates::new(h0.cdf(c), h1.sf(c))
                }
            }
            LlrLaw::GaussianQuadratic {
                mean0,
                var0,
                mean1,
                var1,
            } => {
                let h0 = DensityModel::gaussian(*mean0, *var0).expect("valid");
                let h1 = DensityModel::gaussian(*mean1, *var1).expect("valid");
                let half = R::lit(0.5);
                let a = half / *var0 - half / *var1;
                let b = *mean1 / *var1 - *mean0 / *var0;
                let c = *mean0 * *mean0 * half / *var0 - *mean1 * *mean1 * half / *var1
                    + half * (*var0 / *var1).ln()
                    - t;
                let disc = b * b - R::lit(4.0) * a * c;
                let interval = |m: &DensityModel<R>, lo: R, hi: R| {
                    // P(lo ≤ X ≤ hi), evaluated on the side with less cancellation
                    if lo > m.mean() {
                        m.sf(lo) - m.sf(hi)
                    } else {
                        m.cdf(hi) - m.cdf(lo)
                    }
                };
                if disc <= R::zero() {
                    // The quadratic never changes sign.
                    return if a > R::zero() {
                        ErrorRates::new(R::one(), R::zero())
                    } else {
                        ErrorRates::new(R::zero(), R::one())
                    };
                }
                let sq = disc.sqrt();
                let q = -half * (b + b.signum() * sq);
                let (mut r1, mut r2) = (q / a, c / q);
                if r1 > r2 {
                    std::mem::swap(&mut r1, &mut r2);
                }
                let inside0 = interval(&h0, r1, r2);
                let inside1 = interval(&h1, r1, r2);
                if a > R::zero() {
                    ErrorRates::new(R::one() - inside0, inside1)
                } else {
                    ErrorRates::new(inside0, R::one() - inside1)
                }
            }
            LlrLaw::ExponentialSum {
                rate0,
                rate1,
                sample_size,
            } => {
                let n = R::from_usize(*sample_size).expect("fits");
                let cut = (n * (*rate1 / *rate0).ln() - t) / (*rate1 - *rate0);
                let (lo0, hi0) = erlang_tails(*sample_size as u64, *rate0, cut);
                let (lo1, hi1) = erlang_tails(*sample_size as u64, *rate1, cut);
                if rate1 > rate0 {
                    // ln Λ decreases in the sum: reject for small sums.
                    ErrorRates::new(lo0, hi1)
                } else {
                    ErrorRates::new(hi0, lo1)
                }
            }
            LlrLaw::Atoms(_) => unreachable!("handled above"),
        }
    }
}

/// The test minimizing c0·α + c1·β: reject iff ln Λ ≥ ln(c0/c1).
pub fn cost_optimal_test<R: Real>(_pair: &HypothesisPair<R>, cost: &CostModel<R>) -> ThresholdTest<R> {
    ThresholdTest::deterministic(cost.log_ratio())
}

/// The most powerful test of exact size `size`.
pub fn neyman_pearson_test<R: Real>(pair: &HypothesisPair<R>, size: R) -> Result<ThresholdTest<R>> {
    if !(size > R::zero() && size < R::one()) {
        return Err(Error::param("size", format!("must lie in (0, 1), got {size}")));
    }
    match llr_law(pair)? {
        LlrLaw::GaussianMean(red) => {
            let z = normal_quantile(size);
            // Upper-tail cutoff −Φ⁻¹(size) keeps precision for small sizes.
            let cutoff = if red.slope() > R::zero() {
                red.mean0 - red.mean_sd() * z
            } else {
                red.mean0 + red.mean_sd() * z
            };
            Ok(ThresholdTest::deterministic(red.llr_at_mean(cutoff)))
        }
        LlrLaw::Atoms(atoms) => Ok(randomized_np(&atoms, size)),
        law => Ok(bisect_np(&law, size)),
    }
}

fn randomized_np<R: Real>(atoms: &[LlrAtom<R>], size: R) -> ThresholdTest<R> {
    let mut above = R::zero();
    for atom in atoms {
        if above + atom.mass0 > size {
            let gamma = ((size - above) / atom.mass0).max(R::zero()).min(R::one());
            return ThresholdTest::new(atom.llr, gamma).expect("valid");
        }
        above = above + atom.mass0;
    }
    // Truncated tails left the total P0 mass at or below `size`.
    let last = atoms.last().map_or(R::neg_infinity(), |a| a.llr);
    ThresholdTest::deterministic(last)
}

fn bisect_np<R: Real>(law: &LlrLaw<R>, size: R) -> ThresholdTest<R> {
    let alpha = |t: R| law.error_rates(&ThresholdTest::deterministic(t)).alpha;
    let (mut lo, mut hi) = (-R::one(), R::one());
    while alpha(lo) < size && lo > -R::max_value() / R::lit(4.0) {
        lo = lo * R::lit(2.0);
    }
    while alpha(hi) > size && hi < R::max_value() / R::lit(4.0) {
        hi = hi * R::lit(2.0);
    }
    for _ in 0..400 {
        let mid = R::lit(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if alpha(mid) > size {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ThresholdTest::deterministic(R::lit(0.5) * (lo + hi))
}

/// α and β of `test`, from the exact law of ln Λ.
pub fn error_rates<R: Real>(test: &ThresholdTest<R>, pair: &HypothesisPair<R>) -> Result<ErrorRates<R>> {
    Ok(llr_law(pair)?.error_rates(test))
}

/// J = c0·α + c1·β.
pub fn expected_cost<R: Real>(test: &ThresholdTest<R>, pair: &HypothesisPair<R>, cost: &CostModel<R>) -> Result<R> {
    Ok(error_rates(test, pair)?.cost(cost))
}

/// Applies `test` to a sample. The boundary coin only matters for
/// randomized tests and is drawn from a ChaCha8 generator seeded by `seed`.
pub fn decide<R: Real>(
    test: &ThresholdTest<R>,
    pair: &HypothesisPair<R>,
    observations: &[Observation<R>],
    seed: u64,
) -> Result<Decision> {
    let llr = pair.log_likelihood_ratio(observations)?;
    let uniform = if test.is_randomized() && test.region(llr) == Region::Boundary {
        R::lit(ChaCha8Rng::seed_from_u64(seed).random::<f64>())
    } else {
        R::zero()
    };
    Ok(test.decide_llr(llr, uniform))
}

/// For the equal-variance gaussian pair with m0 < m1, the x̄ cutoff of `test`.
pub fn mean_cutoff<R: Real>(test: &ThresholdTest<R>, pair: &HypothesisPair<R>) -> Option<R> {
    pair.mean_threshold(test.llr_threshold()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn example_pair() -> HypothesisPair<f64> {
        HypothesisPair::new(
            DensityModel::gaussian(0.0, 36.0).unwrap(),
            DensityModel::gaussian(1.2, 36.0).unwrap(),
            100,
        )
        .unwrap()
    }

    fn poisson_pair() -> HypothesisPair<f64> {
        HypothesisPair::new(DensityModel::poisson(1.0).unwrap(), DensityModel::poisson(2.0).unwrap(), 1).unwrap()
    }

    #[test]
    fn cost_model_validation() {
        assert!(CostModel::new(0.0, 1.0).is_err());
        assert!(CostModel::new(1.0, f64::INFINITY).is_err());
        assert!(CostModel::new(1e-300, 1e300).is_err());
        assert!(CostModel::new(2.0, 1.0).is_ok());
    }

    #[test]
    fn threshold_test_validation() {
        assert!(ThresholdTest::new(0.0, 1.5).is_err());
        assert!(ThresholdTest::new(f64::NAN, 0.5).is_err());
        assert!(ThresholdTest::new(f64::INFINITY, 0.0).is_ok());
    }

    #[test]
    fn cost_optimal_cutoffs() {
        let pair = example_pair();
        for (c0, t, cutoff) in [(1.0, 0.0, 0.6), (E * E, 2.0, 1.2), (E.powi(3), 3.0, 1.5)] {
            let test = cost_optimal_test(&pair, &CostModel::new(c0, 1.0).unwrap());
            assert!((test.llr_threshold() - t).abs() < 1e-12);
            assert_eq!(test.boundary_randomization(), 1.0);
            assert!((mean_cutoff(&test, &pair).unwrap() - cutoff).abs() < 1e-12);
        }
    }

    #[test]
    fn optimal_error_rates_match_normal_tails() {
        // 40-digit values of Φ at the x̄ cutoffs 0.6 and 0.9.
        let pair = example_pair();
        let rates = error_rates(&ThresholdTest::deterministic(0.0), &pair).unwrap();
        assert!((rates.alpha - 0.158_655_253_931_457_05).abs() < 1e-14);
        assert!((rates.beta - 0.158_655_253_931_457_05).abs() < 1e-14);
        let rates = error_rates(&ThresholdTest::deterministic(1.0), &pair).unwrap();
        assert!((rates.alpha - 0.066_807_201_268_858_07).abs() < 1e-14);
        assert!((rates.beta - 0.308_537_538_725_986_9).abs() < 1e-14);
        assert_eq!(rates.power, 1.0 - rates.beta);
    }

    #[test]
    fn neyman_pearson_gaussian() {
        let pair = example_pair();
        let test = neyman_pearson_test(&pair, 0.05).unwrap();
        let cutoff = mean_cutoff(&test, &pair).unwrap();
        assert!((cutoff - 0.986_912_176_170_883_6).abs() < 1e-12);
        let rates = error_rates(&test, &pair).unwrap();
        assert!((rates.alpha - 0.05).abs() < 1e-14);
        assert!((rates.beta - 0.361_239_968_687_664_9).abs() < 1e-12);
        let median = neyman_pearson_test(&pair, 0.5).unwrap();
        assert!(mean_cutoff(&median, &pair).unwrap().abs() < 1e-14);
        assert!(neyman_pearson_test(&pair, 1.0).is_err());
        assert!(neyman_pearson_test(&pair, 0.0).is_err());
    }

    #[test]
    fn neyman_pearson_poisson_is_randomized_at_one() {
        let pair = poisson_pair();
        let test = neyman_pearson_test(&pair, 0.5).unwrap();
        let llr_at_one = pair.single_llr(&Observation::Count(1)).unwrap();
        assert!((test.llr_threshold() - llr_at_one).abs() < 1e-15);
        assert!((test.boundary_randomization() - 0.640_859_085_770_477_4).abs() < 1e-12);
        // randomized size by direct enumeration of the Poisson(1) pmf
        let mut size = 0.0;
        let mut pmf = (-1.0f64).exp();
        for k in 0..60 {
            if k >= 2 {
                size += pmf;
            } else if k == 1 {
                size += test.boundary_randomization() * pmf;
            }
            pmf /= (k + 1) as f64;
        }
        assert!((size - 0.5).abs() < 1e-12);
    }

    #[test]
    fn poisson_equal_costs_rejects_from_two() {
        let pair = poisson_pair();
        let test = cost_optimal_test(&pair, &CostModel::new(1.0, 1.0).unwrap());
        let rates = error_rates(&test, &pair).unwrap();
        assert!((rates.alpha - (1.0 - 2.0 / E)).abs() < 1e-13);
        assert!((rates.beta - 3.0 * (-2.0f64).exp()).abs() < 1e-13);
    }

    #[test]
    fn trivial_tests_cost_one_error_type() {
        let pair = example_pair();
        let cost = CostModel::new(3.0, 0.7).unwrap();
        let accept = expected_cost(&ThresholdTest::always_accept(), &pair, &cost).unwrap();
        let reject = expected_cost(&ThresholdTest::always_reject(), &pair, &cost).unwrap();
        assert_eq!(accept, 0.7);
        assert_eq!(reject, 3.0);
        let pp = poisson_pair();
        assert_eq!(expected_cost(&ThresholdTest::always_accept(), &pp, &cost).unwrap(), 0.7);
        assert!((expected_cost(&ThresholdTest::always_reject(), &pp, &cost).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn example_expected_costs() {
        let pair = example_pair();
        let unit = CostModel::new(1.0, 1.0).unwrap();
        let j_star = expected_cost(&cost_optimal_test(&pair, &unit), &pair, &unit).unwrap();
        assert!((j_star - 0.317_310_507_862_914_1).abs() < 1e-13);
        let j_np = expected_cost(&neyman_pearson_test(&pair, 0.05).unwrap(), &pair, &unit).unwrap();
        assert!((j_np - 0.411_239_968_687_664_9).abs() < 1e-12);
        let cube = CostModel::new(E.powi(3), 1.0).unwrap();
        let j_star = expected_cost(&cost_optimal_test(&pair, &cube), &pair, &cube).unwrap();
        assert!((j_star - 0.816_186_923_455_527_8).abs() < 1e-12);
    }

    #[test]
    fn decide_examples() {
        let pair = example_pair();
        let test = cost_optimal_test(&pair, &CostModel::new(1.0, 1.0).unwrap());
        let at = |x: f64| vec![Observation::Real(x); 100];
        assert_eq!(decide(&test, &pair, &at(0.7), 0).unwrap(), Decision::RejectH0);
        assert_eq!(decide(&test, &pair, &at(0.5), 0).unwrap(), Decision::AcceptH0);
        assert_eq!(decide(&test, &pair, &at(0.6), 0).unwrap(), Decision::RejectH0);
        assert!(decide(&test, &pair, &at(0.6)[..3], 0).is_err());
    }

    #[test]
    fn randomized_decide_is_seeded() {
        let pair = poisson_pair();
        let test = neyman_pearson_test(&pair, 0.5).unwrap();
        let x = [Observation::Count(1)];
        let rejections = (0..10_000u64)
            .filter(|&s| decide(&test, &pair, &x, s).unwrap() == Decision::RejectH0)
            .count();
        // Bernoulli(0.6409) over 10^4 seeds, 4σ ≈ 0.019
        assert!((rejections as f64 / 1e4 - 0.6409).abs() < 0.02);
        assert_eq!(decide(&test, &pair, &x, 7).unwrap(), decide(&test, &pair, &x, 7).unwrap());
        assert_eq!(decide(&test, &pair, &[Observation::Count(3)], 1).unwrap(), Decision::RejectH0);
        assert_eq!(decide(&test, &pair, &[Observation::Count(0)], 1).unwrap(), Decision::AcceptH0);
    }

    #[test]
    fn unsupported_cases_are_signalled() {
        let pair = HypothesisPair::new(
            DensityModel::gaussian(0.0, 1.0).unwrap(),
            DensityModel::exponential(1.0_f64).unwrap(),
            1,
        )
        .unwrap();
        let test = ThresholdTest::deterministic(0.0);
        assert!(matches!(error_rates(&test, &pair), Err(Error::NotAnalyticallyEvaluable(_))));
        let mixed = HypothesisPair::new(
            DensityModel::poisson(1.0).unwrap(),
            DensityModel::binomial(4, 0.5).unwrap(),
            3,
        )
        .unwrap();
        assert!(matches!(error_rates(&test, &mixed), Err(Error::NotAnalyticallyEvaluable(_))));
        let unequal = HypothesisPair::new(
            DensityModel::gaussian(0.0, 1.0).unwrap(),
            DensityModel::gaussian(0.0, 2.0).unwrap(),
            2,
        )
        .unwrap();
        assert!(matches!(expected_cost(&test, &unequal, &CostModel::new(1.0, 1.0).unwrap()), Err(Error::NotAnalyticallyEvaluable(_))));
    }

    #[test]
    fn quadratic_law_against_high_precision_values() {
        let pair = HypothesisPair::new(
            DensityModel::gaussian(0.0_f64, 1.0).unwrap(),
            DensityModel::gaussian(0.5, 4.0).unwrap(),
            1,
        )
        .unwrap();
        // reject outside the two roots of the quadratic ln Λ(x) = t (mpmath, 30 digits)
        let table = [
            (-0.5, 0.435_140_309_386_630_32, 0.291_841_983_687_125_71),
            (0.0, 0.167_375_825_532_371_38, 0.492_288_392_406_736_17),
            (0.7, 0.053_664_142_176_021_562, 0.645_570_562_058_089_34),
            (2.0, 0.007_711_370_196_935_886_6, 0.799_276_585_287_488_58),
        ];
        for (t, a, b) in table {
            let rates = error_rates(&ThresholdTest::deterministic(t), &pair).unwrap();
            assert!((rates.alpha - a).abs() < 1e-13, "t={t}: {} vs {a}", rates.alpha);
            assert!((rates.beta - b).abs() < 1e-13, "t={t}: {} vs {b}", rates.beta);
        }
    }

    #[test]
    fn exponential_law_and_np() {
        let pair = HypothesisPair::new(
            DensityModel::exponential(1.0_f64).unwrap(),
            DensityModel::exponential(0.5).unwrap(),
            3,
        )
        .unwrap();
        let test = neyman_pearson_test(&pair, 0.1).unwrap();
        let rates = error_rates(&test, &pair).unwrap();
        assert!((rates.alpha - 0.1).abs() < 1e-12);
        // reject for large sums; the cutoff is the 0.9 quantile of Gamma(3, 1)
        // = 5.3223203378..., and β = P(Gamma(3, 0.5) ≤ cutoff)
        let s = (3.0 * 0.5f64.ln() - test.llr_threshold()) / (0.5 - 1.0);
        assert!((s - 5.322_320_337_834_211).abs() < 1e-9, "{s}");
    }

    #[test]
    fn single_precision_design() {
        let pair = HypothesisPair::new(
            DensityModel::gaussian(0.0f32, 36.0).unwrap(),
            DensityModel::gaussian(1.2f32, 36.0).unwrap(),
            100,
        )
        .unwrap();
        let rates = error_rates(&ThresholdTest::deterministic(0.0f32), &pair).unwrap();
        assert!((rates.alpha - 0.158_655_25).abs() < 1e-5);
    }
}

//! Log-likelihood ratios for i.i.d. samples.
//!
//! Everything stays in log space: for the N = 100 gaussian samples of the
//! worked example the raw ratio Λ overflows long before the test threshold
//! is reached, while ln Λ is a sum of moderate terms.

use crate::distributions::{DensityModel, Family, Observation};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Two simple hypotheses on a common base measure with an i.i.d. sample of
/// size `sample_size`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisPair<R> {
    p0: DensityModel<R>,
    p1: DensityModel<R>,
    sample_size: usize,
}

/// The sufficient-statistic form of the equal-variance gaussian pair:
/// ln Λ = slope · (x̄ − midpoint) with slope = NΔ/σ².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMeanReduction<R> {
    pub mean0: R,
    pub mean1: R,
    pub variance: R,
    pub sample_size: usize,
}

impl<R: Real> GaussianMeanReduction<R> {
    fn n(&self) -> R {
        R::from_usize(self.sample_size).expect("sample size fits")
    }

    pub fn slope(&self) -> R {
        self.n() * (self.mean1 - self.mean0) / self.variance
    }

    pub fn midpoint(&self) -> R {
        R::lit(0.5) * (self.mean0 + self.mean1)
    }

    /// Standard deviation of x̄ under either hypothesis.
    pub fn mean_sd(&self) -> R {
        (self.variance / self.n()).sqrt()
    }

    pub fn llr_at_mean(&self, xbar: R) -> R {
        self.slope() * (xbar - self.midpoint())
    }

    /// The x̄ value where ln Λ equals `llr_threshold`.
    pub fn mean_at_llr(&self, llr_threshold: R) -> R {
        llr_threshold / self.slope() + self.midpoint()
    }
}

impl<R: Real> HypothesisPair<R> {
    pub fn new(p0: DensityModel<R>, p1: DensityModel<R>, sample_size: usize) -> Result<Self> {
        if p0.base_measure() != p1.base_measure() {
            return Err(Error::MismatchedBaseMeasure {
                p0: p0.base_measure().name(),
                p1: p1.base_measure().name(),
            });
        }
        if p0 == p1 {
            return Err(Error::IdenticalHypotheses);
        }
        if sample_size == 0 {
            return Err(Error::param("sample_size", "must be a positive integer"));
        }
        Ok(Self { p0, p1, sample_size })
    }

    pub fn p0(&self) -> &DensityModel<R> {
        &self.p0
    }

    pub fn p1(&self) -> &DensityModel<R> {
        &self.p1
    }

    pub fn sample_size(&self) -> usize {
        self.sample_size
    }

    /// The same pair with the roles of H0 and H1 exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            p0: self.p1.clone(),
            p1: self.p0.clone(),
            sample_size: self.sample_size,
        }
    }

    /// ln p1(x) − ln p0(x) for a single observation.
    pub fn single_llr(&self, x: &Observation<R>) -> Result<R> {
        let l0 = self.p0.log_density(x)?;
        let l1 = self.p1.log_density(x)?;
        let ninf = R::neg_infinity();
        match (l0 == ninf, l1 == ninf) {
            (true, true) => Err(Error::ImpossibleObservation(x.to_string())),
            (true, false) => Ok(R::infinity()),
            (false, true) => Ok(ninf),
            (false, false) => Ok(l1 - l0),
        }
    }

    /// ln Λ for the product density of `observations`.
    pub fn log_likelihood_ratio(&self, observations: &[Observation<R>]) -> Result<R> {
        if observations.len() != self.sample_size {
            return Err(Error::LengthMismatch {
                expected: self.sample_size,
                found: observations.len(),
            });
        }
        self.sum_llr(observations.iter().copied())
    }

    /// Σ single-observation ratios without the length check; used by the
    /// simulator to avoid materializing samples.
    pub fn sum_llr<I>(&self, observations: I) -> Result<R>
    where
        I: IntoIterator<Item = Observation<R>>,
    {
        let mut total = R::zero();
        let mut pos_inf: Option<Observation<R>> = None;
        let mut neg_inf: Option<Observation<R>> = None;
        for x in observations {
            let l = self.single_llr(&x)?;
            if l == R::infinity() {
                pos_inf = Some(x);
            } else if l == R::neg_infinity() {
                neg_inf = Some(x);
            } else {
                total = total + l;
            }
        }
        match (pos_inf, neg_inf) {
            // One observation rules out H0, another rules out H1.
            (Some(a), Some(b)) => Err(Error::ImpossibleObservation(format!("{a} and {b} jointly"))),
            (Some(_), None) => Ok(R::infinity()),
            (None, Some(_)) => Ok(R::neg_infinity()),
            (None, None) => Ok(total),
        }
    }

    /// The closed-form x̄ reduction, when both hypotheses are gaussian with
    /// a common variance.
    pub fn gaussian_reduction(&self) -> Option<GaussianMeanReduction<R>> {
        match (self.p0.family(), self.p1.family()) {
            (
                Family::Gaussian { mean: m0, variance: v0 },
                Family::Gaussian { mean: m1, variance: v1 },
            ) if v0 == v1 => Some(GaussianMeanReduction {
                mean0: *m0,
                mean1: *m1,
                variance: *v0,
                sample_size: self.sample_size,
            }),
            _ => None,
        }
    }

    /// The sample-mean cutoff c with {ln Λ ≥ t} = {x̄ ≥ c}.
    pub fn mean_threshold(&self, llr_threshold: R) -> Result<R> {
        let red = self.gaussian_reduction().ok_or_else(|| {
            Error::UnsupportedReduction(format!(
                "mean cutoff needs two gaussians with equal variance, got {} vs {}",
                self.p0.family().name(),
                self.p1.family().name()
            ))
        })?;
        if red.mean0 >= red.mean1 {
            return Err(Error::param("mean", "the x̄ reduction requires m0 < m1"));
        }
        Ok(red.mean_at_llr(llr_threshold))
    }

    /// The pair of sampling distributions of x̄ (N = 1), whose likelihood
    /// ratio equals that of the full sample.
    pub fn mean_statistic_pair(&self) -> Result<Self> {
        let red = self.gaussian_reduction().ok_or_else(|| {
            Error::UnsupportedReduction("x̄ statistic pair needs equal-variance gaussians".into())
        })?;
        let v = red.mean_sd() * red.mean_sd();
        Self::new(DensityModel::gaussian(red.mean0, v)?, DensityModel::gaussian(red.mean1, v)?, 1)
    }
}

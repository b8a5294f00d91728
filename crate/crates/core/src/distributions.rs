//! Distribution families evaluated against a base measure.
//!
//! A [`DensityModel`] is either absolutely continuous with respect to
//! Lebesgue measure on the reals (gaussian, exponential) or a probability
//! mass function with respect to counting measure on the integers (poisson,
//! bernoulli, binomial, tabulated). Densities are always taken against the
//! model's own [`BaseMeasure`], so a pdf and a pmf can sit behind the same
//! interface.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::{ln_binomial, normal_cdf, normal_quantile, normal_sf, poisson_ln_pmf};

/// Mass left out when a countably supported model is enumerated.
pub const DEFAULT_TAIL_RESIDUAL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseMeasure {
    LebesgueOnReals,
    CountingOnIntegers,
}

impl BaseMeasure {
    pub fn name(self) -> &'static str {
        match self {
            BaseMeasure::LebesgueOnReals => "lebesgue-on-reals",
            BaseMeasure::CountingOnIntegers => "counting-on-integers",
        }
    }
}

impl fmt::Display for BaseMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A single observed value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Observation<R> {
    Real(R),
    Count(i64),
}

impl<R: Real> Observation<R> {
    /// The observation as a real number (counts are converted).
    pub fn value(&self) -> R {
        match *self {
            Observation::Real(x) => x,
            Observation::Count(k) => R::from_i64(k).expect("count fits"),
        }
    }
}

impl<R: fmt::Display> fmt::Display for Observation<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observation::Real(x) => write!(f, "{x}"),
            Observation::Count(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family<R> {
    Gaussian { mean: R, variance: R },
    Poisson { rate: R },
    Bernoulli { p: R },
    Binomial { trials: u64, p: R },
    Exponential { rate: R },
    /// Finite support; atoms are sorted ascending and distinct.
    Tabulated { support: Vec<i64>, masses: Vec<R> },
}

impl<R> Family<R> {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Gaussian { .. } => "gaussian",
            Family::Poisson { .. } => "poisson",
            Family::Bernoulli { .. } => "bernoulli",
            Family::Binomial { .. } => "binomial",
            Family::Exponential { .. } => "exponential",
            Family::Tabulated { .. } => "tabulated",
        }
    }

    pub fn base_measure(&self) -> BaseMeasure {
        match self {
            Family::Gaussian { .. } | Family::Exponential { .. } => BaseMeasure::LebesgueOnReals,
            _ => BaseMeasure::CountingOnIntegers,
        }
    }
}

/// A validated distribution. Construct through the family constructors.
#[derive(Debug, Clone)]
pub struct DensityModel<R> {
    family: Family<R>,
    // Cached normalizing term of the log-density:
    // gaussian −½ln(2πσ²), exponential ln(rate), poisson −rate.
    log_norm: R,
    // Tabulated cumulative masses, same order as the support.
    cumulative: Vec<R>,
}

impl<R: PartialEq> PartialEq for DensityModel<R> {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
    }
}

fn check_positive<R: Real>(field: &'static str, x: R) -> Result<()> {
    if x.is_finite() && x > R::zero() {
        Ok(())
    } else {
        Err(Error::param(field, format!("must be finite and > 0, got {x}")))
    }
}

fn check_open_unit<R: Real>(field: &'static str, p: R) -> Result<()> {
    if p > R::zero() && p < R::one() {
        Ok(())
    } else {
        Err(Error::param(field, format!("must lie in (0, 1), got {p}")))
    }
}

impl<R: Real> DensityModel<R> {
    pub fn gaussian(mean: R, variance: R) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::param("mean", format!("must be finite, got {mean}")));
        }
        check_positive("variance", variance)?;
        let log_norm = -R::lit(0.5) * (R::TAU() * variance).ln();
        Ok(Self::from_parts(Family::Gaussian { mean, variance }, log_norm))
    }

    pub fn poisson(rate: R) -> Result<Self> {
        check_positive("rate", rate)?;
        Ok(Self::from_parts(Family::Poisson { rate }, -rate))
    }

    pub fn bernoulli(p: R) -> Result<Self> {
        check_open_unit("p", p)?;
        Ok(Self::from_parts(Family::Bernoulli { p }, R::zero()))
    }

    pub fn binomial(trials: u64, p: R) -> Result<Self> {
        if trials == 0 {
            return Err(Error::param("trials", "must be a positive integer"));
        }
        check_open_unit("p", p)?;
        Ok(Self::from_parts(Family::Binomial { trials, p }, R::zero()))
    }

    pub fn exponential(rate: R) -> Result<Self> {
        check_positive("rate", rate)?;
        Ok(Self::from_parts(Family::Exponential { rate }, rate.ln()))
    }

    /// A finite distribution on integer atoms. Atoms are sorted on
    /// construction; they must be distinct, and the masses must be a
    /// probability vector within 1e-12.
    pub fn tabulated(support: Vec<i64>, masses: Vec<R>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::param("support", "must not be empty"));
        }
        if support.len() != masses.len() {
            return Err(Error::param(
                "masses",
                format!("has {} entries but support has {}", masses.len(), support.len()),
            ));
        }
        if let Some(bad) = masses.iter().find(|m| !(m.is_finite() && **m >= R::zero())) {
            return Err(Error::param("masses", format!("entries must be finite and ≥ 0, got {bad}")));
        }
        let total = masses.iter().fold(R::zero(), |a, &b| a + b);
        if (total - R::one()).abs() > R::lit(1e-12).max(R::epsilon() * R::lit(16.0)) {
            return Err(Error::param("masses", format!("must sum to 1, sum is {total}")));
        }
        let mut pairs: Vec<(i64, R)> = support.into_iter().zip(masses).collect();
        pairs.sort_by_key(|&(k, _)| k);
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::param("support", "atoms must be distinct"));
        }
        let (support, masses): (Vec<i64>, Vec<R>) = pairs.into_iter().unzip();
        let mut model = Self::from_parts(Family::Tabulated { support, masses }, R::zero());
        if let Family::Tabulated { masses, .. } = &model.family {
            let mut acc = R::zero();
            model.cumulative = masses
                .iter()
                .map(|&m| {
                    acc = acc + m;
                    acc
                })
                .collect();
        }
        Ok(model)
    }

    fn from_parts(family: Family<R>, log_norm: R) -> Self {
        Self {
            family,
            log_norm,
            cumulative: Vec::new(),
        }
    }

    pub fn family(&self) -> &Family<R> {
        &self.family
    }

    pub fn base_measure(&self) -> BaseMeasure {
        self.family.base_measure()
    }

    pub fn is_discrete(&self) -> bool {
        self.base_measure() == BaseMeasure::CountingOnIntegers
    }

    pub fn mean(&self) -> R {
        match &self.family {
            Family::Gaussian { mean, .. } => *mean,
            Family::Poisson { rate } => *rate,
            Family::Bernoulli { p } => *p,
            Family::Binomial { trials, p } => R::from_u64(*trials).expect("fits") * *p,
            Family::Exponential { rate } => rate.recip(),
            Family::Tabulated { support, masses } => support
                .iter()
                .zip(masses)
                .fold(R::zero(), |acc, (&k, &m)| acc + R::from_i64(k).expect("fits") * m),
        }
    }

    pub fn variance(&self) -> R {
        match &self.family {
            Family::Gaussian { variance, .. } => *variance,
            Family::Poisson { rate } => *rate,
            Family::Bernoulli { p } => *p * (R::one() - *p),
            Family::Binomial { trials, p } => R::from_u64(*trials).expect("fits") * *p * (R::one() - *p),
            Family::Exponential { rate } => (*rate * *rate).recip(),
            Family::Tabulated { support, masses } => {
                let mean = self.mean();
                support.iter().zip(masses).fold(R::zero(), |acc, (&k, &m)| {
                    let d = R::from_i64(k).expect("fits") - mean;
                    acc + d * d * m
                })
            }
        }
    }

    fn incompatible(&self, x: &Observation<R>) -> Error {
        Error::IncompatibleObservation {
            observation: x.to_string(),
            expected: self.base_measure().name(),
        }
    }

    /// ln p(x) with respect to the base measure; −∞ off the support.
    pub fn log_density(&self, x: &Observation<R>) -> Result<R> {
        match (&self.family, *x) {
            (Family::Gaussian { mean, variance }, Observation::Real(v)) if v.is_finite() => {
                let d = v - *mean;
                Ok(self.log_norm - R::lit(0.5) * d * d / *variance)
            }
            (Family::Exponential { rate }, Observation::Real(v)) if v.is_finite() => Ok(if v < R::zero() {
                R::neg_infinity()
            } else {
                self.log_norm - *rate * v
            }),
            (Family::Gaussian { .. } | Family::Exponential { .. }, _) => Err(self.incompatible(x)),
            (_, Observation::Real(_)) => Err(self.incompatible(x)),
            (_, Observation::Count(k)) => Ok(self.log_mass(k)),
        }
    }

    pub fn density(&self, x: &Observation<R>) -> Result<R> {
        self.log_density(x).map(R::exp)
    }

    // Counting-measure families only.
    fn log_mass(&self, k: i64) -> R {
        let ninf = R::neg_infinity();
        match &self.family {
            Family::Poisson { rate } => {
                if k < 0 {
                    ninf
                } else {
                    poisson_ln_pmf(*rate, k as u64)
                }
            }
            Family::Bernoulli { p } => match k {
                0 => (R::one() - *p).ln(),
                1 => p.ln(),
                _ => ninf,
            },
            Family::Binomial { trials, p } => {
                if k < 0 || k as u64 > *trials {
                    ninf
                } else {
                    let k = k as u64;
                    let kr = R::from_u64(k).expect("fits");
                    let rest = R::from_u64(*trials - k).expect("fits");
                    ln_binomial::<R>(*trials, k) + kr * p.ln() + rest * (-*p).ln_1p()
                }
            }
            Family::Tabulated { support, masses } => match support.binary_search(&k) {
                Ok(i) => masses[i].ln(),
                Err(_) => ninf,
            },
            Family::Gaussian { .. } | Family::Exponential { .. } => unreachable!("continuous family"),
        }
    }

    fn mass(&self, k: i64) -> R {
        self.log_mass(k).exp()
    }

    /// P(X ≤ x). For counting-measure models this is the step function
    /// evaluated at ⌊x⌋.
    pub fn cdf(&self, x: R) -> R {
        if x.is_nan() {
            return x;
        }
        match &self.family {
            Family::Gaussian { mean, variance } => normal_cdf((x - *mean) / variance.sqrt()),
            Family::Exponential { rate } => {
                if x <= R::zero() {
                    R::zero()
                } else {
                    -(-*rate * x).exp_m1()
                }
            }
            Family::Tabulated { support, .. } => {
                if x == R::infinity() {
                    return R::one();
                }
                let idx = support.partition_point(|&k| R::from_i64(k).expect("fits") <= x);
                if idx == 0 {
                    R::zero()
                } else {
                    self.cumulative[idx - 1].min(R::one())
                }
            }
            _ => {
                if x < R::zero() {
                    return R::zero();
                }
                let top = match &self.family {
                    Family::Bernoulli { .. } => 1,
                    Family::Binomial { trials, .. } => *trials as i64,
                    _ => i64::MAX,
                };
                let floor = x.floor();
                if floor >= R::from_i64(top).unwrap_or(R::infinity()) {
                    return R::one();
                }
                let kmax = floor.to_i64().expect("finite floor");
                let total = (0..=kmax).fold(R::zero(), |acc, k| acc + self.mass(k));
                total.min(R::one())
            }
        }
    }

    /// P(X > x), computed directly where the upper tail would otherwise lose
    /// precision.
    pub fn sf(&self, x: R) -> R {
        match &self.family {
            Family::Gaussian { mean, variance } => normal_sf((x - *mean) / variance.sqrt()),
            Family::Exponential { rate } => {
                if x <= R::zero() {
                    R::one()
                } else {
                    (-*rate * x).exp()
                }
            }
            _ => (R::one() - self.cdf(x)).max(R::zero()),
        }
    }

    /// Inverse cdf. Continuous families return the x with cdf(x) = q;
    /// counting families return the smallest atom with cdf ≥ q.
    pub fn quantile(&self, q: R) -> Result<Observation<R>> {
        if !(q > R::zero() && q < R::one()) {
            return Err(Error::param("q", format!("must lie in (0, 1), got {q}")));
        }
        Ok(match &self.family {
            Family::Gaussian { mean, variance } => Observation::Real(*mean + variance.sqrt() * normal_quantile(q)),
            Family::Exponential { rate } => Observation::Real(-(-q).ln_1p() / *rate),
            Family::Tabulated { support, .. } => {
                let idx = self.cumulative.partition_point(|&c| c < q).min(support.len() - 1);
                Observation::Count(support[idx])
            }
            _ => {
                let mut k = 0i64;
                let mut acc = self.mass(0);
                while acc < q {
                    k += 1;
                    let m = self.mass(k);
                    if m == R::zero() && R::from_i64(k).expect("fits") > self.mean() {
                        // Float mass sum falls short of q by rounding; the
                        // last atom with positive mass is the answer.
                        k -= 1;
                        break;
                    }
                    acc = acc + m;
                }
                Observation::Count(k)
            }
        })
    }

    /// Atoms of a counting-measure model, in ascending order, covering all
    /// but at most `residual` of the mass. `None` for continuous models.
    pub fn atoms(&self, residual: R) -> Option<Vec<(i64, R)>> {
        match &self.family {
            Family::Gaussian { .. } | Family::Exponential { .. } => None,
            Family::Tabulated { support, masses } => Some(support.iter().copied().zip(masses.iter().copied()).collect()),
            Family::Bernoulli { p } => Some(vec![(0, R::one() - *p), (1, *p)]),
            Family::Binomial { trials, .. } => Some((0..=*trials as i64).map(|k| (k, self.mass(k))).collect()),
            Family::Poisson { rate } => {
                let mut out = Vec::new();
                let mut acc = R::zero();
                let mut k = 0i64;
                loop {
                    let m = self.mass(k);
                    acc = acc + m;
                    out.push((k, m));
                    let kr = R::from_i64(k).expect("fits");
                    if kr > *rate && R::one() - acc < residual {
                        break;
                    }
                    // Rounding can stall `acc` just below 1 - residual.
                    if kr > *rate && m < residual * R::epsilon() {
                        break;
                    }
                    k += 1;
                }
                Some(out)
            }
        }
    }

    /// One draw using the caller's generator.
    pub fn draw<G: Rng + ?Sized>(&self, rng: &mut G) -> Observation<R> {
        match &self.family {
            Family::Gaussian { mean, variance } => Observation::Real(*mean + variance.sqrt() * R::standard_normal(rng)),
            Family::Exponential { rate } => Observation::Real(-R::open01(rng).ln() / *rate),
            Family::Bernoulli { p } => Observation::Count(i64::from(R::open01(rng) < *p)),
            Family::Binomial { trials, p } => {
                let dist = Binomial::new(*trials, p.as_f64()).expect("validated parameters");
                Observation::Count(dist.sample(rng) as i64)
            }
            Family::Poisson { rate } => {
                let dist = Poisson::new(rate.as_f64()).expect("validated parameters");
                Observation::Count(dist.sample(rng) as i64)
            }
            Family::Tabulated { support, .. } => {
                let u = R::open01(rng);
                let idx = self.cumulative.partition_point(|&c| c < u).min(support.len() - 1);
                Observation::Count(support[idx])
            }
        }
    }

    /// `count` i.i.d. draws from a ChaCha8 generator seeded with `seed`.
    pub fn sample(&self, count: usize, seed: u64) -> Result<Vec<Observation<R>>> {
        if count == 0 {
            return Err(Error::param("count", "must be positive"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..count).map(|_| self.draw(&mut rng)).collect())
    }
}

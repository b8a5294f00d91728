//! Finite-instance verification of the convex relaxation.
//!
//! On a finite space with counting measure the cost of a critical region C
//! is `c1 + Σ_{i∈C} (c0·q0[i] − c1·q1[i])`. Relaxing indicators to
//! allocations f: atoms → [0, 1] gives a linear program over a box, solved
//! pointwise by taking f = 1 where the coefficient is negative. This module
//! computes that pointwise solution, the exhaustive minimum over all 2^n
//! indicators, and the directional derivative J'(f*; f − f*) whose
//! nonnegativity certifies optimality.
//!
//! The code is generic over [`Field`], so the same checks run in `f64` and in
//! exact rational arithmetic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::distributions::Observation;
use crate::error::{Error, Result};
use crate::likelihood::HypothesisPair;
use crate::scalar::{Field, Real};
use crate::testdesign::CostModel;

/// Largest atom count accepted by [`brute_force_indicator_minimum`].
pub const MAX_ENUMERATION_ATOMS: usize = 22;

/// Two probability vectors over the same n atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteInstance<T> {
    q0: Vec<T>,
    q1: Vec<T>,
}

fn sum<T: Field>(xs: &[T]) -> T {
    xs.iter().fold(T::zero(), |acc, x| acc + x.clone())
}

fn check_probability_vector<T: Field>(field: &'static str, q: &[T]) -> Result<()> {
    if q.iter().any(|x| *x < T::zero()) {
        return Err(Error::param(field, "entries must be nonnegative"));
    }
    let total = sum(q);
    if (total.clone() - T::one()).abs() > T::normalization_tolerance() {
        return Err(Error::param(field, format!("must sum to 1, sum is {total:?}")));
    }
    Ok(())
}

impl<T: Field> FiniteInstance<T> {
    pub fn new(q0: Vec<T>, q1: Vec<T>) -> Result<Self> {
        if q0.is_empty() {
            return Err(Error::param("q0", "must have at least one atom"));
        }
        if q0.len() != q1.len() {
            return Err(Error::LengthMismatch {
                expected: q0.len(),
                found: q1.len(),
            });
        }
        check_probability_vector("q0", &q0)?;
        check_probability_vector("q1", &q1)?;
        Ok(Self { q0, q1 })
    }

    pub fn n(&self) -> usize {
        self.q0.len()
    }

    pub fn q0(&self) -> &[T] {
        &self.q0
    }

    pub fn q1(&self) -> &[T] {
        &self.q1
    }

    /// The integrand c0·q0[i] − c1·q1[i].
    pub fn coefficients(&self, cost: &LinearCost<T>) -> Vec<T> {
        self.q0
            .iter()
            .zip(&self.q1)
            .map(|(a, b)| cost.c0.clone() * a.clone() - cost.c1.clone() * b.clone())
            .collect()
    }

    /// Relaxed objective Σ f[i]·(c0·q0[i] − c1·q1[i]) (the cost minus c1).
    pub fn objective(&self, cost: &LinearCost<T>, f: &RelaxedAllocation<T>) -> Result<T> {
        self.check_len(f)?;
        Ok(self
            .coefficients(cost)
            .into_iter()
            .zip(&f.values)
            .fold(T::zero(), |acc, (c, v)| acc + c * v.clone()))
    }

    fn check_len(&self, f: &RelaxedAllocation<T>) -> Result<()> {
        if f.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                found: f.len(),
            });
        }
        Ok(())
    }
}

impl FiniteInstance<f64> {
    /// The same instance in another field, renormalized there so that an
    /// exact type sees vectors summing to exactly one.
    pub fn lift<U: Field>(&self) -> Option<FiniteInstance<U>> {
        let lift_vec = |q: &[f64]| -> Option<Vec<U>> {
            let raw = q.iter().map(|&x| U::from_f64_exact(x)).collect::<Option<Vec<U>>>()?;
            let total = sum(&raw);
            Some(raw.into_iter().map(|x| x / total.clone()).collect())
        };
        FiniteInstance::new(lift_vec(&self.q0)?, lift_vec(&self.q1)?).ok()
    }
}

/// The two positive error costs, in the instance's field.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearCost<T> {
    c0: T,
    c1: T,
}

impl<T: Field> LinearCost<T> {
    pub fn new(c0: T, c1: T) -> Result<Self> {
        if c0 <= T::zero() {
            return Err(Error::param("c0", "cost must be > 0"));
        }
        if c1 <= T::zero() {
            return Err(Error::param("c1", "cost must be > 0"));
        }
        Ok(Self { c0, c1 })
    }

    pub fn c0(&self) -> &T {
        &self.c0
    }

    pub fn c1(&self) -> &T {
        &self.c1
    }
}

impl<R: Real + Field> From<&CostModel<R>> for LinearCost<R> {
    fn from(cost: &CostModel<R>) -> Self {
        Self {
            c0: cost.c0(),
            c1: cost.c1(),
        }
    }
}

impl LinearCost<f64> {
    pub fn lift<U: Field>(&self) -> Option<LinearCost<U>> {
        LinearCost::new(U::from_f64_exact(self.c0)?, U::from_f64_exact(self.c1)?).ok()
    }
}

/// A [0, 1]-valued function on the atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedAllocation<T> {
    values: Vec<T>,
}

impl<T: Field> RelaxedAllocation<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.iter().any(|v| *v < T::zero() || *v > T::one()) {
            return Err(Error::param("f", "entries must lie in [0, 1]"));
        }
        Ok(Self { values })
    }

    /// Indicator of `subset` on `n` atoms.
    pub fn indicator(n: usize, subset: &[usize]) -> Self {
        let mut values = vec![T::zero(); n];
        for &i in subset {
            values[i] = T::one();
        }
        Self { values }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// A copy with atom `i` set to `value` (0 or 1 for vertex moves).
    pub fn with(&self, i: usize, value: T) -> Self {
        let mut values = self.values.clone();
        values[i] = value;
        Self { values }
    }

    /// Atoms where the allocation equals one.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.values[i] == T::one()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedSolution<T> {
    pub allocation: RelaxedAllocation<T>,
    /// Σ f*·(c0·q0 − c1·q1).
    pub value: T,
}

impl<T: Field> RelaxedSolution<T> {
    pub fn expected_cost(&self, cost: &LinearCost<T>) -> T {
        self.value.clone() + cost.c1.clone()
    }
}

/// Pointwise minimizer of the relaxed problem. Atoms with a zero
/// coefficient get f* = 1, matching the `ln Λ ≥ ln(c0/c1)` convention.
pub fn relaxed_minimum<T: Field>(inst: &FiniteInstance<T>, cost: &LinearCost<T>) -> RelaxedSolution<T> {
    let coeffs = inst.coefficients(cost);
    let mut value = T::zero();
    let values = coeffs
        .into_iter()
        .map(|c| {
            if c <= T::zero() {
                value = value.clone() + c;
                T::one()
            } else {
                T::zero()
            }
        })
        .collect();
    RelaxedSolution {
        allocation: RelaxedAllocation { values },
        value,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorMinimum<T> {
    /// Sorted atom indices of the best critical region.
    pub best_subset: Vec<usize>,
    pub value: T,
}

/// Exhaustive minimum of Σ_{i∈C} (c0·q0[i] − c1·q1[i]) over all 2^n subsets.
///
/// Among minimizers the one with the most atoms wins, which is the region
/// that includes every zero-coefficient atom.
pub fn brute_force_indicator_minimum<T: Field>(inst: &FiniteInstance<T>, cost: &LinearCost<T>) -> Result<IndicatorMinimum<T>> {
    let n = inst.n();
    if n > MAX_ENUMERATION_ATOMS {
        return Err(Error::EnumerationTooLarge {
            n,
            max: MAX_ENUMERATION_ATOMS,
        });
    }
    let coeffs: Vec<T> = (0..n)
        .map(|i| cost.c0.clone() * inst.q0[i].clone() - cost.c1.clone() * inst.q1[i].clone())
        .collect();
    let mut best_mask = 0u32;
    let mut best_value = T::zero();
    let mut best_count = 0u32;
    for mask in 1u32..(1u32 << n) {
        let mut value = T::zero();
        for (i, c) in coeffs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                value = value + c.clone();
            }
        }
        let count = mask.count_ones();
        if value < best_value || (value == best_value && count > best_count) {
            best_mask = mask;
            best_value = value;
            best_count = count;
        }
    }
    Ok(IndicatorMinimum {
        best_subset: (0..n).filter(|&i| best_mask >> i & 1 == 1).collect(),
        value: best_value,
    })
}

/// J'(f*; f − f*) = Σ (f[i] − f*[i])·(c0·q0[i] − c1·q1[i]).
pub fn directional_derivative<T: Field>(
    inst: &FiniteInstance<T>,
    cost: &LinearCost<T>,
    f_star: &RelaxedAllocation<T>,
    f: &RelaxedAllocation<T>,
) -> Result<T> {
    inst.check_len(f_star)?;
    inst.check_len(f)?;
    Ok(inst
        .coefficients(cost)
        .into_iter()
        .zip(f.values.iter().zip(&f_star.values))
        .fold(T::zero(), |acc, (c, (a, b))| acc + (a.clone() - b.clone()) * c))
}

/// The most negative single-atom vertex move away from `f`, if any exists.
/// `None` means `f` satisfies the variational inequality.
pub fn improving_direction<T: Field>(
    inst: &FiniteInstance<T>,
    cost: &LinearCost<T>,
    f: &RelaxedAllocation<T>,
) -> Result<Option<(RelaxedAllocation<T>, T)>> {
    inst.check_len(f)?;
    let mut best: Option<(RelaxedAllocation<T>, T)> = None;
    for i in 0..f.len() {
        for target in [T::zero(), T::one()] {
            let g = f.with(i, target);
            let d = directional_derivative(inst, cost, f, &g)?;
            if d < T::zero() && best.as_ref().is_none_or(|(_, b)| d < *b) {
                best = Some((g, d));
            }
        }
    }
    Ok(best)
}

/// Grid for bringing a continuous N = 1 pair onto finitely many atoms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<R> {
    pub lo: R,
    pub hi: R,
    pub n: usize,
}

impl<R: Real> Grid<R> {
    pub fn new(lo: R, hi: R, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::param("grid", format!("need finite lo < hi, got {lo}:{hi}")));
        }
        if n < 2 {
            return Err(Error::param("grid", "need at least 2 points"));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn points(&self) -> Vec<R> {
        let step = (self.hi - self.lo) / R::from_usize(self.n - 1).expect("fits");
        (0..self.n)
            .map(|i| self.lo + step * R::from_usize(i).expect("fits"))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Discretized<R> {
    pub instance: FiniteInstance<R>,
    /// Location of each atom.
    pub points: Vec<R>,
}

/// Brings an N = 1 pair onto finitely many atoms.
///
/// Continuous pairs are evaluated at the grid points and each density vector
/// is renormalized; the grid must capture at least 99% of both
/// distributions. Counting-measure pairs ignore the grid and keep the atoms
/// covering all but 1e-12 of each mass.
pub fn discretize<R: Real + Field>(pair: &HypothesisPair<R>, grid: Option<&Grid<R>>) -> Result<Discretized<R>> {
    if pair.sample_size() != 1 {
        return Err(Error::param(
            "sample_size",
            "discretization works on a single observation; reduce to a statistic first",
        ));
    }
    let (points, raw0, raw1): (Vec<R>, Vec<R>, Vec<R>) = if pair.p0().is_discrete() {
        let residual = R::lit(1e-12);
        let mut atoms: Vec<i64> = Vec::new();
        for model in [pair.p0(), pair.p1()] {
            atoms.extend(model.atoms(residual).expect("discrete").into_iter().map(|(k, _)| k));
        }
        atoms.sort_unstable();
        atoms.dedup();
        let obs: Vec<Observation<R>> = atoms.iter().map(|&k| Observation::Count(k)).collect();
        let dens = |m: &crate::distributions::DensityModel<R>| obs.iter().map(|o| m.density(o)).collect::<Result<Vec<R>>>();
        (
            atoms.iter().map(|&k| R::from_i64(k).expect("fits")).collect(),
            dens(pair.p0())?,
            dens(pair.p1())?,
        )
    } else {
        let grid = grid.ok_or_else(|| Error::param("grid", "continuous pairs need a grid"))?;
        for (name, model) in [("p0", pair.p0()), ("p1", pair.p1())] {
            let captured = model.cdf(grid.hi) - model.cdf(grid.lo);
            if captured < R::lit(0.99) {
                return Err(Error::GridRefused {
                    lo: grid.lo.as_f64(),
                    hi: grid.hi.as_f64(),
                    hypothesis: name,
                    captured: captured.as_f64(),
                });
            }
        }
        let points = grid.points();
        let dens = |m: &crate::distributions::DensityModel<R>| {
            points.iter().map(|&x| m.density(&Observation::Real(x))).collect::<Result<Vec<R>>>()
        };
        let (a, b) = (dens(pair.p0())?, dens(pair.p1())?);
        (points, a, b)
    };
    let normalize = |v: Vec<R>| {
        let total = v.iter().fold(R::zero(), |a, &b| a + b);
        v.into_iter().map(|x| x / total).collect::<Vec<R>>()
    };
    Ok(Discretized {
        instance: FiniteInstance::new(normalize(raw0), normalize(raw1))?,
        points,
    })
}

/// Settings for [`verify_random_instances`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerificationConfig {
    pub instances: usize,
    pub max_atoms: usize,
    pub random_directions: usize,
    pub seed: u64,
}

impl Default for VerificationConfig {
    fn default() -> Self {
        Self {
            instances: 100,
            max_atoms: 12,
            random_directions: 1000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceCheck {
    pub index: usize,
    pub n: usize,
    pub c0: f64,
    pub c1: f64,
    pub relaxed_value: f64,
    pub brute_force_value: f64,
    /// Most negative J'(f*; f − f*) over the tested directions.
    pub min_derivative: f64,
    pub directions_tested: usize,
}

impl InstanceCheck {
    pub fn gap(&self) -> f64 {
        (self.relaxed_value - self.brute_force_value).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationSummary {
    pub config: VerificationConfig,
    pub checks: Vec<InstanceCheck>,
}

impl VerificationSummary {
    pub fn tight_count(&self, tolerance: f64) -> usize {
        self.checks.iter().filter(|c| c.gap() <= tolerance).count()
    }

    pub fn max_gap(&self) -> f64 {
        self.checks.iter().map(InstanceCheck::gap).fold(0.0, f64::max)
    }

    pub fn min_derivative(&self) -> f64 {
        self.checks.iter().map(|c| c.min_derivative).fold(f64::INFINITY, f64::min)
    }
}

/// A random instance with 1..=max_atoms atoms, about 15% zero entries, and
/// costs log-uniform on [e⁻³, e³].
pub fn random_instance<G: Rng + ?Sized>(rng: &mut G, max_atoms: usize) -> (FiniteInstance<f64>, LinearCost<f64>) {
    let n = rng.random_range(1..=max_atoms.max(1));
    let vector = |rng: &mut G| {
        let mut v: Vec<f64> = (0..n)
            .map(|_| if rng.random::<f64>() < 0.15 { 0.0 } else { rng.random::<f64>() })
            .collect();
        if v.iter().all(|&x| x == 0.0) {
            let i = rng.random_range(0..n);
            v[i] = 1.0;
        }
        let total: f64 = v.iter().sum();
        v.into_iter().map(|x| x / total).collect::<Vec<f64>>()
    };
    let q0 = vector(rng);
    let q1 = vector(rng);
    let c0 = rng.random_range(-3.0..3.0f64).exp();
    let c1 = rng.random_range(-3.0..3.0f64).exp();
    (
        FiniteInstance::new(q0, q1).expect("normalized"),
        LinearCost::new(c0, c1).expect("positive"),
    )
}

/// Checks one instance: relaxed vs exhaustive minimum, and the variational
/// inequality over `random_directions` uniform allocations plus the 2n
/// single-atom vertex moves from f*.
pub fn check_instance<G: Rng + ?Sized>(
    inst: &FiniteInstance<f64>,
    cost: &LinearCost<f64>,
    random_directions: usize,
    rng: &mut G,
) -> Result<(f64, f64, f64, usize)> {
    let relaxed = relaxed_minimum(inst, cost);
    let brute = brute_force_indicator_minimum(inst, cost)?;
    let n = inst.n();
    let mut min_derivative = f64::INFINITY;
    let mut tested = 0;
    for _ in 0..random_directions {
        let f = RelaxedAllocation::new((0..n).map(|_| rng.random::<f64>()).collect())?;
        min_derivative = min_derivative.min(directional_derivative(inst, cost, &relaxed.allocation, &f)?);
        tested += 1;
    }
    for i in 0..n {
        for target in [0.0, 1.0] {
            let f = relaxed.allocation.with(i, target);
            min_derivative = min_derivative.min(directional_derivative(inst, cost, &relaxed.allocation, &f)?);
            tested += 1;
        }
    }
    Ok((relaxed.value, brute.value, min_derivative, tested))
}

/// Random-instance tightness and optimality-certificate sweep. Instance `i`
/// draws from ChaCha8 stream `i` of `seed`, so the result does not depend on
/// how the work is scheduled.
pub fn verify_random_instances(config: VerificationConfig) -> Result<VerificationSummary> {
    if config.max_atoms == 0 || config.max_atoms > MAX_ENUMERATION_ATOMS {
        return Err(Error::param(
            "max_atoms",
            format!("must lie in 1..={MAX_ENUMERATION_ATOMS}"),
        ));
    }
    let checks = (0..config.instances)
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(index as u64);
            let (inst, cost) = random_instance(&mut rng, config.max_atoms);
            let (relaxed_value, brute_force_value, min_derivative, directions_tested) =
                check_instance(&inst, &cost, config.random_directions, &mut rng)?;
            Ok(InstanceCheck {
                index,
                n: inst.n(),
                c0: cost.c0,
                c1: cost.c1,
                relaxed_value,
                brute_force_value,
                min_derivative,
                directions_tested,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationSummary { config, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DensityModel;
    use num_rational::{BigRational, Ratio};

    fn cost(c0: f64, c1: f64) -> LinearCost<f64> {
        LinearCost::new(c0, c1).unwrap()
    }

    #[test]
    fn separable_instance() {
        let inst = FiniteInstance::new(vec![1.0, 0.0], vec![0.0, 1.0]).unwrap();
        let c = cost(2.0, 3.0);
        let sol = relaxed_minimum(&inst, &c);
        assert_eq!(sol.allocation.values(), &[0.0, 1.0]);
        assert_eq!(sol.value, -3.0);
        assert_eq!(sol.expected_cost(&c), 0.0);
    }

    #[test]
    fn identical_vectors_tie_everywhere() {
        let q = vec![0.25, 0.25, 0.5];
        let inst = FiniteInstance::new(q.clone(), q).unwrap();
        let c = cost(1.0, 1.0);
        let sol = relaxed_minimum(&inst, &c);
        assert_eq!(sol.allocation.values(), &[1.0, 1.0, 1.0]);
        assert_eq!(sol.value, 0.0);
        assert_eq!(sol.expected_cost(&c), 1.0);
        let brute = brute_force_indicator_minimum(&inst, &c).unwrap();
        assert_eq!(brute.best_subset, vec![0, 1, 2]);
    }

    #[test]
    fn single_atom() {
        let inst = FiniteInstance::new(vec![1.0], vec![1.0]).unwrap();
        for (c0, c1, expect) in [(1.0, 2.0, vec![0]), (2.0, 1.0, vec![]), (1.5, 1.5, vec![0])] {
            let brute = brute_force_indicator_minimum(&inst, &cost(c0, c1)).unwrap();
            assert_eq!(brute.best_subset, expect);
        }
    }

    #[test]
    fn enumeration_guard() {
        let q = vec![1.0 / 23.0; 23];
        let inst = FiniteInstance::new(q.clone(), q).unwrap();
        assert!(matches!(
            brute_force_indicator_minimum(&inst, &cost(1.0, 1.0)),
            Err(Error::EnumerationTooLarge { n: 23, .. })
        ));
    }

    #[test]
    fn instance_validation() {
        assert!(FiniteInstance::new(vec![0.5, 0.6], vec![0.5, 0.5]).is_err());
        assert!(FiniteInstance::new(vec![1.5, -0.5], vec![0.5, 0.5]).is_err());
        assert!(FiniteInstance::new(vec![1.0], vec![0.5, 0.5]).is_err());
        assert!(FiniteInstance::<f64>::new(vec![], vec![]).is_err());
        assert!(RelaxedAllocation::new(vec![0.5, 1.2]).is_err());
        assert!(LinearCost::new(0.0, 1.0).is_err());
    }

    #[test]
    fn derivative_zero_direction_and_violation() {
        let inst = FiniteInstance::new(vec![0.2, 0.8], vec![0.7, 0.3]).unwrap();
        let c = cost(1.0, 1.0);
        let sol = relaxed_minimum(&inst, &c);
        let d = directional_derivative(&inst, &c, &sol.allocation, &sol.allocation).unwrap();
        assert_eq!(d, 0.0);
        // all-zeros is not optimal: atom 0 has coefficient −0.5
        let zeros = RelaxedAllocation::indicator(2, &[]);
        let toward = RelaxedAllocation::indicator(2, &[0]);
        let d = directional_derivative(&inst, &c, &zeros, &toward).unwrap();
        assert!(d < 0.0);
        assert!((d + 0.5).abs() < 1e-15);
        let (_, best) = improving_direction(&inst, &c, &zeros).unwrap().unwrap();
        assert!(best < 0.0);
        assert!(improving_direction(&inst, &c, &sol.allocation).unwrap().is_none());
        let short = RelaxedAllocation::indicator(1, &[]);
        assert!(directional_derivative(&inst, &c, &sol.allocation, &short).is_err());
    }

    #[test]
    fn exact_rational_tightness() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..40 {
            let (inst, c) = random_instance(&mut rng, 8);
            let exact: FiniteInstance<BigRational> = inst.lift().unwrap();
            let ec = c.lift::<BigRational>().unwrap();
            let relaxed = relaxed_minimum(&exact, &ec);
            let brute = brute_force_indicator_minimum(&exact, &ec).unwrap();
            assert_eq!(relaxed.value, brute.value);
            assert_eq!(relaxed.allocation.support(), brute.best_subset);
        }
    }

    #[test]
    fn small_rationals() {
        let r = |a, b| Ratio::new(a, b);
        let inst = FiniteInstance::new(vec![r(1, 2), r(1, 4), r(1, 4)], vec![r(1, 4), r(1, 4), r(1, 2)]).unwrap();
        let c = LinearCost::new(r(1, 1), r(1, 1)).unwrap();
        let sol = relaxed_minimum(&inst, &c);
        assert_eq!(sol.allocation.support(), vec![1, 2]);
        assert_eq!(sol.value, r(-1, 4));
        // exact tolerance: 1/3 + 2/3 passes, 1/3 + 1/3 does not
        assert!(FiniteInstance::new(vec![r(1, 3), r(2, 3)], vec![r(1, 2), r(1, 2)]).is_ok());
        assert!(FiniteInstance::new(vec![r(1, 3), r(1, 3)], vec![r(1, 2), r(1, 2)]).is_err());
    }

    #[test]
    fn discretize_gaussian_and_poisson() {
        let pair = HypothesisPair::new(DensityModel::gaussian(0.0, 1.0).unwrap(), DensityModel::gaussian(1.0, 1.0).unwrap(), 1).unwrap();
        let grid = Grid::new(-8.0, 9.0, 1001).unwrap();
        let d = discretize(&pair, Some(&grid)).unwrap();
        assert_eq!(d.instance.n(), 1001);
        assert!((d.instance.q0().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((d.instance.q1().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let narrow = Grid::new(-1.0, 1.0, 50).unwrap();
        assert!(matches!(discretize(&pair, Some(&narrow)), Err(Error::GridRefused { .. })));
        assert!(discretize(&pair, None).is_err());

        let pp = HypothesisPair::new(DensityModel::poisson(1.0).unwrap(), DensityModel::poisson(2.0).unwrap(), 1).unwrap();
        let d = discretize(&pp, None).unwrap();
        // residual of Poisson(2) beyond the last atom, found by summing the pmf
        let k_star = *d.points.last().unwrap() as u64;
        let mut pmf = (-2.0f64).exp();
        let mut cdf = 0.0;
        for k in 0..=k_star {
            cdf += pmf;
            pmf *= 2.0 / (k + 1) as f64;
        }
        assert!(1.0 - cdf < 1e-12);
        assert_eq!(d.points[0], 0.0);
    }

    #[test]
    fn discretize_tabulated_passes_through() {
        let pair = HypothesisPair::new(
            DensityModel::tabulated(vec![2, 0, 1], vec![0.2, 0.5, 0.3]).unwrap(),
            DensityModel::tabulated(vec![0, 1, 2], vec![0.1, 0.3, 0.6]).unwrap(),
            1,
        )
        .unwrap();
        let d = discretize(&pair, None).unwrap();
        assert_eq!(d.points, vec![0.0, 1.0, 2.0]);
        for (got, want) in d.instance.q0().iter().zip([0.5_f64, 0.3, 0.2]).chain(d.instance.q1().iter().zip([0.1_f64, 0.3, 0.6])) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn sweep_is_deterministic() {
        let cfg = VerificationConfig {
            instances: 10,
            max_atoms: 6,
            random_directions: 50,
            seed: 3,
        };
        let a = verify_random_instances(cfg).unwrap();
        let b = verify_random_instances(cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.tight_count(1e-12), 10);
        assert!(verify_random_instances(VerificationConfig { max_atoms: 30, ..cfg }).is_err());
    }
}

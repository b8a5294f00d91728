//! Design of likelihood-ratio tests between two simple hypotheses.
//!
//! When the costs of the two error types are known, the test minimizing
//! `c0·α + c1·β` rejects H0 exactly when ln Λ(x) ≥ ln(c0/c1); its size is an
//! output of the optimization instead of a fixed input. This crate builds
//! that test, evaluates its error rates analytically, calibrates the
//! classical fixed-size Neyman-Pearson test for comparison, validates both
//! by seeded simulation, and checks on finite instances that the convex
//! relaxation over [0, 1]-valued tests is tight.
//!
//! The numeric core is generic over the scalar type ([`Real`] for `f32` and
//! `f64`; [`Field`] for the relaxation oracle, which also runs on exact
//! rationals). The aliases at the crate root fix `f64`.

pub mod comparison;
pub mod distributions;
pub mod error;
pub mod likelihood;
pub mod montecarlo;
pub mod relaxation;
pub mod scalar;
pub mod special;
pub mod testdesign;

pub use distributions::{BaseMeasure, Family, Observation as GenericObservation};
pub use error::{Error, Result};
pub use scalar::{Field, Real};
pub use testdesign::{cost_optimal_test, decide, error_rates, expected_cost, neyman_pearson_test, Decision};

pub type DensityModel = distributions::DensityModel<f64>;
pub type Observation = distributions::Observation<f64>;
pub type HypothesisPair = likelihood::HypothesisPair<f64>;
pub type CostModel = testdesign::CostModel<f64>;
pub type ThresholdTest = testdesign::ThresholdTest<f64>;
pub type ErrorRates = testdesign::ErrorRates<f64>;
pub type FiniteInstance = relaxation::FiniteInstance<f64>;
pub type RelaxedAllocation = relaxation::RelaxedAllocation<f64>;
pub type ExactInstance = relaxation::FiniteInstance<num_rational::BigRational>;
pub type SimulationReport = montecarlo::SimulationReport<f64>;
pub type PolicyComparison = montecarlo::PolicyComparison<f64>;

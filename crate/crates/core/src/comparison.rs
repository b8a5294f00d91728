//! Analytic side-by-side reports of the cost-optimal and fixed-size tests.

use crate::distributions::DensityModel;
use crate::error::Result;
use crate::likelihood::HypothesisPair;
use crate::scalar::Real;
use crate::testdesign::{cost_optimal_test, error_rates, mean_cutoff, neyman_pearson_test, CostModel, ErrorRates, ThresholdTest};

#[derive(Debug, Clone, PartialEq)]
pub struct DesignReport<R> {
    pub test: ThresholdTest<R>,
    pub rates: ErrorRates<R>,
    pub expected_cost: R,
    /// x̄ cutoff, for equal-variance gaussian pairs with m0 < m1.
    pub mean_cutoff: Option<R>,
}

impl<R: Real> DesignReport<R> {
    pub fn evaluate(test: ThresholdTest<R>, pair: &HypothesisPair<R>, cost: &CostModel<R>) -> Result<Self> {
        let rates = error_rates(&test, pair)?;
        Ok(Self {
            test,
            rates,
            expected_cost: rates.cost(cost),
            mean_cutoff: mean_cutoff(&test, pair),
        })
    }
}

/// The cost-optimal test and its error rates and cost.
pub fn design<R: Real>(pair: &HypothesisPair<R>, cost: &CostModel<R>) -> Result<DesignReport<R>> {
    DesignReport::evaluate(cost_optimal_test(pair, cost), pair, cost)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison<R> {
    pub cost: CostModel<R>,
    pub np_size: R,
    pub neyman_pearson: DesignReport<R>,
    pub cost_optimal: DesignReport<R>,
}

impl<R: Real> Comparison<R> {
    /// J(C_NP) − J(C*), never negative up to rounding.
    pub fn excess_cost(&self) -> R {
        self.neyman_pearson.expected_cost - self.cost_optimal.expected_cost
    }
}

pub fn compare_designs<R: Real>(pair: &HypothesisPair<R>, cost: &CostModel<R>, np_size: R) -> Result<Comparison<R>> {
    Ok(Comparison {
        cost: *cost,
        np_size,
        neyman_pearson: DesignReport::evaluate(neyman_pearson_test(pair, np_size)?, pair, cost)?,
        cost_optimal: design(pair, cost)?,
    })
}

/// Mean-shift example: N(0, 36) against N(1.2, 36) with 100 observations.
pub fn normal_mean_example() -> HypothesisPair<f64> {
    HypothesisPair::new(
        DensityModel::gaussian(0.0, 36.0).expect("valid"),
        DensityModel::gaussian(1.2, 36.0).expect("valid"),
        100,
    )
    .expect("distinct hypotheses")
}

/// Size of the fixed-size test compared against in the cost table.
pub const TABLE_NP_SIZE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostSetting {
    pub label: &'static str,
    pub c0: f64,
}

/// c0 ∈ {1, e, e², e³} with c1 = 1.
pub fn table_cost_settings() -> [CostSetting; 4] {
    [
        CostSetting { label: "1", c0: 1.0 },
        CostSetting { label: "e", c0: 1f64.exp() },
        CostSetting { label: "e^2", c0: 2f64.exp() },
        CostSetting { label: "e^3", c0: 3f64.exp() },
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub setting: CostSetting,
    pub comparison: Comparison<f64>,
}

/// One row per cost setting, each comparing the size-`np_size` test with
/// the cost-optimal test on `pair` (c1 = 1).
pub fn cost_table(pair: &HypothesisPair<f64>, settings: &[CostSetting], np_size: f64) -> Result<Vec<TableRow>> {
    settings
        .iter()
        .map(|&setting| {
            let cost = CostModel::new(setting.c0, 1.0)?;
            Ok(TableRow {
                setting,
                comparison: compare_designs(pair, &cost, np_size)?,
            })
        })
        .collect()
}

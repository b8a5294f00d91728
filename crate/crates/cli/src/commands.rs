use anyhow::{anyhow, bail, Result};
use hypotest::comparison::{cost_table, table_cost_settings, DesignReport};
use hypotest::montecarlo::{compare_policies, estimate_error_rates};
use hypotest::relaxation::{
    brute_force_indicator_minimum, directional_derivative, discretize, relaxed_minimum, verify_random_instances, Grid,
    LinearCost, VerificationConfig, MAX_ENUMERATION_ATOMS,
};
use hypotest::testdesign::mean_cutoff;
use hypotest::{cost_optimal_test, error_rates, neyman_pearson_test, Error as CoreError, RelaxedAllocation, ThresholdTest};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::{parse_grid, DesignArgs, SimulateArgs, TableArgs, VerifyArgs};
use crate::format::{exact, fixed, render_pairs, render_table, sig6, CsvTable};
use crate::scenario::{Resolved, Scenario};

/// Text for stdout plus the CSV form of the same results.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    pub csv: CsvTable,
}

/// Tolerances used by `verify-relaxation` when judging tightness and the
/// variational inequality.
pub const TIGHTNESS_TOLERANCE: f64 = 1e-12;
pub const DERIVATIVE_TOLERANCE: f64 = -1e-12;

fn config_lines(r: &Resolved, origin: &str) -> Vec<(String, String)> {
    let cost = |v: &crate::scenario::CostValue, x: f64| match v {
        crate::scenario::CostValue::Number(_) => sig6(x),
        crate::scenario::CostValue::Expr(s) => format!("{s} = {}", sig6(x)),
    };
    vec![
        ("scenario".into(), origin.to_string()),
        ("p0".into(), r.scenario.p0.describe()),
        ("p1".into(), r.scenario.p1.describe()),
        ("sample_size".into(), r.scenario.sample_size.to_string()),
        ("c0".into(), cost(&r.scenario.costs.c0, r.cost.c0())),
        ("c1".into(), cost(&r.scenario.costs.c1, r.cost.c1())),
        ("np_size".into(), sig6(r.np_size)),
    ]
}

fn opt(x: Option<f64>, f: fn(f64) -> String) -> String {
    x.map_or_else(String::new, f)
}

fn not_analytic(e: &CoreError) -> bool {
    matches!(e, CoreError::NotAnalyticallyEvaluable(_))
}

pub fn design(args: &DesignArgs) -> Result<Report> {
    let (r, origin) = args.scenario.resolve()?;
    let test = cost_optimal_test(&r.pair, &r.cost);
    let config = config_lines(&r, &origin);
    let mut pairs = vec![("rule".to_string(), "reject H0 iff ln Λ ≥ ln(c0/c1)".to_string())];
    pairs.push(("ln_threshold".into(), sig6(test.llr_threshold())));
    let cutoff = mean_cutoff(&test, &r.pair);
    if let Some(c) = cutoff {
        pairs.push(("mean_cutoff".into(), sig6(c)));
    }
    let mut csv = CsvTable::new(&["ln_threshold", "mean_cutoff", "alpha", "beta", "expected_cost"]);
    match DesignReport::evaluate(test, &r.pair, &r.cost) {
        Ok(rep) => {
            pairs.push(("alpha*".into(), sig6(rep.rates.alpha)));
            pairs.push(("beta*".into(), sig6(rep.rates.beta)));
            pairs.push(("J*".into(), sig6(rep.expected_cost)));
            csv.push(vec![
                exact(test.llr_threshold()),
                opt(cutoff, exact),
                exact(rep.rates.alpha),
                exact(rep.rates.beta),
                exact(rep.expected_cost),
            ]);
        }
        Err(e) if not_analytic(&e) => {
            pairs.push(("error rates".into(), format!("{e}; see `hypotest simulate`")));
            csv.push(vec![exact(test.llr_threshold()), opt(cutoff, exact), String::new(), String::new(), String::new()]);
        }
        Err(e) => return Err(e.into()),
    }
    Ok(Report {
        text: format!("{}\n{}", render_pairs(&config), render_pairs(&pairs)),
        csv,
    })
}

fn test_row(name: &str, rep: &DesignReport<f64>) -> Vec<String> {
    vec![
        name.to_string(),
        sig6(rep.test.llr_threshold()),
        sig6(rep.test.boundary_randomization()),
        opt(rep.mean_cutoff, sig6),
        sig6(rep.rates.alpha),
        sig6(rep.rates.beta),
        sig6(rep.expected_cost),
    ]
}

fn test_csv_row(name: &str, rep: &DesignReport<f64>) -> Vec<String> {
    vec![
        name.to_string(),
        exact(rep.test.llr_threshold()),
        exact(rep.test.boundary_randomization()),
        opt(rep.mean_cutoff, exact),
        exact(rep.rates.alpha),
        exact(rep.rates.beta),
        exact(rep.expected_cost),
    ]
}

const TEST_COLUMNS: [&str; 7] = ["test", "ln_threshold", "gamma", "mean_cutoff", "alpha", "beta", "expected_cost"];

pub fn np(args: &DesignArgs) -> Result<Report> {
    let (r, origin) = args.scenario.resolve()?;
    let test = neyman_pearson_test(&r.pair, r.np_size)?;
    let rep = DesignReport::evaluate(test, &r.pair, &r.cost)?;
    let config = config_lines(&r, &origin);
    let mut pairs = vec![("rule".to_string(), "reject H0 iff ln Λ > t; with probability gamma at ln Λ = t".to_string())];
    pairs.push(("ln_threshold".into(), sig6(test.llr_threshold())));
    pairs.push(("gamma".into(), sig6(test.boundary_randomization())));
    if let Some(c) = rep.mean_cutoff {
        pairs.push(("mean_cutoff".into(), sig6(c)));
    }
    pairs.push(("alpha".into(), sig6(rep.rates.alpha)));
    pairs.push(("beta".into(), sig6(rep.rates.beta)));
    pairs.push(("power".into(), sig6(rep.rates.power)));
    pairs.push(("J".into(), sig6(rep.expected_cost)));
    let mut csv = CsvTable::new(&TEST_COLUMNS);
    csv.push(test_csv_row("neyman-pearson", &rep));
    Ok(Report {
        text: format!("{}\n{}", render_pairs(&config), render_pairs(&pairs)),
        csv,
    })
}

pub fn compare(args: &DesignArgs) -> Result<Report> {
    let (r, origin) = args.scenario.resolve()?;
    let cmp = hypotest::comparison::compare_designs(&r.pair, &r.cost, r.np_size)?;
    let mut text = render_pairs(&config_lines(&r, &origin));
    text.push('\n');
    let np_name = format!("neyman-pearson({})", sig6(r.np_size));
    text.push_str(&render_table(
        &TEST_COLUMNS,
        &[test_row(&np_name, &cmp.neyman_pearson), test_row("cost-optimal", &cmp.cost_optimal)],
    ));
    text.push_str(&format!("\nexcess cost J(C_NP) - J(C*): {}\n", sig6(cmp.excess_cost())));
    let mut csv = CsvTable::new(&TEST_COLUMNS);
    csv.push(test_csv_row("neyman-pearson", &cmp.neyman_pearson));
    csv.push(test_csv_row("cost-optimal", &cmp.cost_optimal));
    Ok(Report { text, csv })
}

const SIM_COLUMNS: [&str; 12] = [
    "policy",
    "ln_threshold",
    "gamma",
    "alpha_hat",
    "alpha_ci_halfwidth",
    "alpha",
    "beta_hat",
    "beta_ci_halfwidth",
    "beta",
    "cost_hat",
    "cost_ci_halfwidth",
    "expected_cost",
];

pub fn simulate(args: &SimulateArgs) -> Result<Report> {
    let (r, origin) = args.scenario.resolve()?;
    let mut pairs = config_lines(&r, &origin);
    pairs.push(("trials".into(), args.trials.to_string()));
    pairs.push(("seed".into(), args.seed.to_string()));
    pairs.push(("rng".into(), "ChaCha8, stream = trial index".into()));
    let mut text = render_pairs(&pairs);
    text.push('\n');

    let mark = |covers: Option<bool>| match covers {
        Some(true) => "yes",
        Some(false) => "NO",
        None => "n/a",
    };
    let header = ["policy", "alpha_hat", "±3σ", "alpha", "in CI", "beta_hat", "±3σ", "beta", "in CI", "J_hat"];
    let mut rows = Vec::new();
    let mut csv = CsvTable::new(&SIM_COLUMNS);
    let mut add = |name: &str, test: &ThresholdTest, rep: &hypotest::SimulationReport| {
        let analytic = error_rates(test, &r.pair).ok();
        rows.push(vec![
            name.to_string(),
            sig6(rep.alpha_hat),
            sig6(rep.alpha_ci_halfwidth),
            opt(analytic.map(|a| a.alpha), sig6),
            mark(analytic.map(|a| rep.alpha_covers(a.alpha))).to_string(),
            sig6(rep.beta_hat),
            sig6(rep.beta_ci_halfwidth),
            opt(analytic.map(|a| a.beta), sig6),
            mark(analytic.map(|a| rep.beta_covers(a.beta))).to_string(),
            sig6(rep.cost_hat(&r.cost)),
        ]);
        csv.push(vec![
            name.to_string(),
            exact(test.llr_threshold()),
            exact(test.boundary_randomization()),
            exact(rep.alpha_hat),
            exact(rep.alpha_ci_halfwidth),
            opt(analytic.map(|a| a.alpha), exact),
            exact(rep.beta_hat),
            exact(rep.beta_ci_halfwidth),
            opt(analytic.map(|a| a.beta), exact),
            exact(rep.cost_hat(&r.cost)),
            String::new(),
            opt(analytic.map(|a| a.cost(&r.cost)), exact),
        ]);
    };

    match compare_policies(&r.pair, &r.cost, r.np_size, args.trials, args.seed) {
        Ok(cmp) => {
            add("neyman-pearson", &cmp.np_test, &cmp.np);
            add("cost-optimal", &cmp.optimal_test, &cmp.optimal);
            text.push_str(&render_table(&header, &rows));
            text.push_str(&format!(
                "\nJ_hat(C_NP) - J_hat(C*): {} ± {} (paired, 3σ); significant: {}\n",
                sig6(cmp.difference),
                sig6(cmp.difference_ci_halfwidth),
                if cmp.gap_is_significant() { "yes" } else { "no" }
            ));
            let mut diff = vec![String::new(); SIM_COLUMNS.len()];
            diff[0] = "difference".into();
            diff[9] = exact(cmp.difference);
            diff[10] = exact(cmp.difference_ci_halfwidth);
            csv.push(diff);
        }
        // Without an analytic law the Neyman-Pearson test cannot be
        // calibrated; simulate the cost-optimal test alone.
        Err(e) if not_analytic(&e) => {
            let test = cost_optimal_test(&r.pair, &r.cost);
            let rep = estimate_error_rates(&test, &r.pair, args.trials, args.seed)?;
            add("cost-optimal", &test, &rep);
            text.push_str(&render_table(&header, &rows));
            text.push_str(&format!("\nneyman-pearson: skipped ({e})\n"));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(Report { text, csv })
}

const VERIFY_COLUMNS: [&str; 9] = [
    "instance",
    "atoms",
    "c0",
    "c1",
    "relaxed_min",
    "indicator_min",
    "gap",
    "min_directional_derivative",
    "directions",
];

pub fn verify_relaxation(args: &VerifyArgs) -> Result<Report> {
    if let Some(path) = &args.scenario {
        return verify_scenario(args, Scenario::load(path)?.resolve()?, &path.display().to_string());
    }
    if args.grid.is_some() {
        bail!("`--grid` needs `--scenario`");
    }
    let config = VerificationConfig {
        instances: args.instances,
        max_atoms: args.max_atoms,
        random_directions: args.directions,
        seed: args.seed,
    };
    let summary = verify_random_instances(config)?;
    let pairs = vec![
        ("instances".to_string(), config.instances.to_string()),
        ("max_atoms".into(), config.max_atoms.to_string()),
        ("directions".into(), format!("{} random + 2n single-atom flips", config.random_directions)),
        ("seed".into(), config.seed.to_string()),
        ("rng".into(), "ChaCha8, stream = instance index".into()),
    ];
    let mut text = render_pairs(&pairs);
    let tight = summary.tight_count(TIGHTNESS_TOLERANCE);
    let min_d = summary.min_derivative();
    text.push_str(&format!("\nmax |relaxed - indicator| gap: {:e}\n", summary.max_gap()));
    text.push_str(&format!("min directional derivative:   {:e}\n", min_d));
    let holds = min_d >= DERIVATIVE_TOLERANCE;
    text.push_str(&format!(
        "{}/{} tight, min directional derivative {} -1e-12\n",
        tight,
        summary.checks.len(),
        if holds { "≥" } else { "<" }
    ));
    let mut csv = CsvTable::new(&VERIFY_COLUMNS);
    for c in &summary.checks {
        csv.push(vec![
            c.index.to_string(),
            c.n.to_string(),
            exact(c.c0),
            exact(c.c1),
            exact(c.relaxed_value),
            exact(c.brute_force_value),
            exact(c.gap()),
            exact(c.min_derivative),
            c.directions_tested.to_string(),
        ]);
    }
    Ok(Report { text, csv })
}

fn verify_scenario(args: &VerifyArgs, r: Resolved, origin: &str) -> Result<Report> {
    let pair = if r.pair.sample_size() > 1 && r.pair.gaussian_reduction().is_some() {
        r.pair.mean_statistic_pair()?
    } else {
        r.pair.clone()
    };
    let grid = match &args.grid {
        Some(text) => {
            let (lo, hi, n) = parse_grid(text)?;
            Some(Grid::new(lo, hi, n).map_err(|e| anyhow!("{e}"))?)
        }
        None => None,
    };
    let d = discretize(&pair, grid.as_ref())?;
    let cost = LinearCost::from(&r.cost);
    let relaxed = relaxed_minimum(&d.instance, &cost);
    let n = d.instance.n();
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut min_d = f64::INFINITY;
    let mut tested = 0usize;
    for _ in 0..args.directions {
        let f = RelaxedAllocation::new((0..n).map(|_| rng.random::<f64>()).collect())?;
        min_d = min_d.min(directional_derivative(&d.instance, &cost, &relaxed.allocation, &f)?);
        tested += 1;
    }
    for i in 0..n {
        for v in [0.0, 1.0] {
            let f = relaxed.allocation.with(i, v);
            min_d = min_d.min(directional_derivative(&d.instance, &cost, &relaxed.allocation, &f)?);
            tested += 1;
        }
    }
    let brute = if n <= MAX_ENUMERATION_ATOMS {
        Some(brute_force_indicator_minimum(&d.instance, &cost)?.value)
    } else {
        None
    };
    let mut pairs = config_lines(&r, origin);
    pairs.push(("grid".into(), args.grid.clone().unwrap_or_else(|| "support atoms".into())));
    pairs.push(("directions".into(), format!("{} random + 2n single-atom flips", args.directions)));
    pairs.push(("seed".into(), args.seed.to_string()));
    let mut text = render_pairs(&pairs);
    text.push('\n');
    let region = relaxed.allocation.support();
    let mut out = vec![
        ("atoms".to_string(), n.to_string()),
        ("critical atoms".into(), region.len().to_string()),
        ("relaxed min J".into(), sig6(relaxed.expected_cost(&cost))),
    ];
    match brute {
        Some(b) => out.push(("indicator min J".into(), sig6(b + r.cost.c1()))),
        None => out.push(("indicator min J".into(), format!("skipped ({n} atoms > {MAX_ENUMERATION_ATOMS})"))),
    }
    out.push(("min directional derivative".into(), format!("{min_d:e}")));
    text.push_str(&render_pairs(&out));
    let gap = brute.map(|b| (relaxed.value - b).abs());
    let tight = gap.map_or("n/a".to_string(), |g| if g <= TIGHTNESS_TOLERANCE { "1/1".into() } else { "0/1".into() });
    text.push_str(&format!(
        "{tight} tight, min directional derivative {} -1e-12\n",
        if min_d >= DERIVATIVE_TOLERANCE { "≥" } else { "<" }
    ));
    let mut csv = CsvTable::new(&VERIFY_COLUMNS);
    csv.push(vec![
        "0".into(),
        n.to_string(),
        exact(r.cost.c0()),
        exact(r.cost.c1()),
        exact(relaxed.value),
        opt(brute, exact),
        opt(gap, exact),
        exact(min_d),
        tested.to_string(),
    ]);
    Ok(Report { text, csv })
}

/// Decimal places of each cell in the reference table, by row:
/// (J_NP, alpha*, beta*, J*).
pub const REFERENCE_DECIMALS: [[usize; 4]; 4] = [[2, 4, 4, 4], [6, 5, 5, 6], [7, 5, 1, 9], [7, 5, 2, 8]];

const TABLE_COLUMNS: [&str; 12] = [
    "c0_label",
    "c0",
    "np_ln_threshold",
    "np_mean_cutoff",
    "np_alpha",
    "np_beta",
    "j_np",
    "ln_threshold",
    "mean_cutoff",
    "alpha_star",
    "beta_star",
    "j_star",
];

pub fn reproduce_table(args: &TableArgs) -> Result<Report> {
    let (r, origin) = args.scenario.resolve()?;
    let settings = table_cost_settings();
    let rows = cost_table(&r.pair, &settings, r.np_size)?;
    let mut pairs = config_lines(&r, &origin);
    pairs.retain(|(k, _)| k != "c0");
    pairs.push((
        "rounding".into(),
        if args.paper_rounding { "reference-table precision" } else { "6 significant digits" }.into(),
    ));
    let mut text = render_pairs(&pairs);
    text.push('\n');
    let mut display = Vec::new();
    let mut csv = CsvTable::new(&TABLE_COLUMNS);
    for (i, row) in rows.iter().enumerate() {
        let np = &row.comparison.neyman_pearson;
        let opt_ = &row.comparison.cost_optimal;
        let cells = [np.expected_cost, opt_.rates.alpha, opt_.rates.beta, opt_.expected_cost];
        let shown: Vec<String> = if args.paper_rounding {
            cells.iter().zip(REFERENCE_DECIMALS[i]).map(|(&x, d)| fixed(x, d)).collect()
        } else {
            cells.iter().map(|&x| sig6(x)).collect()
        };
        let mut line = vec![format!("c0 = {}", row.setting.label)];
        line.extend(shown);
        line.push(opt(opt_.mean_cutoff, sig6));
        display.push(line);
        csv.push(vec![
            row.setting.label.to_string(),
            exact(row.setting.c0),
            exact(np.test.llr_threshold()),
            opt(np.mean_cutoff, exact),
            exact(np.rates.alpha),
            exact(np.rates.beta),
            exact(np.expected_cost),
            exact(opt_.test.llr_threshold()),
            opt(opt_.mean_cutoff, exact),
            exact(opt_.rates.alpha),
            exact(opt_.rates.beta),
            exact(opt_.expected_cost),
        ]);
    }
    text.push_str(&render_table(&["", "J(C_NP)", "alpha*", "beta*", "J(C*)", "x̄ cutoff"], &display));
    Ok(Report { text, csv })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::ScenarioArgs;

    fn design_args(c0: &str) -> DesignArgs {
        DesignArgs {
            scenario: ScenarioArgs {
                c0: Some(c0.parse().unwrap()),
                ..ScenarioArgs::default()
            },
            output: Default::default(),
        }
    }

    #[test]
    fn design_row_two() {
        let rep = design(&design_args("e")).unwrap();
        let row = &rep.csv.rows[0];
        let val = |i: usize| row[i].parse::<f64>().unwrap();
        assert!((val(1) - 0.9).abs() < 1e-12);
        assert!((val(2) - 0.066_807_201_268_858_066).abs() < 1e-15);
        assert!((val(3) - 0.308_537_538_725_986_9).abs() < 1e-15);
        assert!(rep.text.contains("alpha*:       0.0668072\n"), "{}", rep.text);
    }

    #[test]
    fn table_rows_in_reference_precision() {
        let args = TableArgs {
            scenario: ScenarioArgs::default(),
            output: Default::default(),
            paper_rounding: true,
        };
        let rep = reproduce_table(&args).unwrap();
        let row: Vec<&str> = rep.text.lines().find(|l| l.starts_with("c0 = e^2")).unwrap().split_whitespace().collect();
        assert_eq!(row[3..], ["0.7306928", "0.02275", "0.5", "0.668102001", "1.2"]);
        assert_eq!(rep.csv.rows.len(), 4);
    }
}

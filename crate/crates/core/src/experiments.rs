//! Monte Carlo sweeps over noise amplitudes and the estimators that turn
//! exit records into rate comparisons.
//!
//! A [`SweepPlan`] fixes the noise triplet, the potential, an `eps` grid,
//! and per-point path counts; [`run_batch`] executes it with one
//! independent, counter-derived random stream per `(grid point, path)`
//! pair, so results are byte-identical for a given master seed regardless
//! of how many worker threads participate.
//!
//! Estimation follows the asymptotic theory: exit times at small `eps` are
//! approximately exponential, so [`estimate`] reports the mean with a
//! normal-theory confidence interval, the censored fraction, and a
//! Kolmogorov–Smirnov distance of the mean-normalized sample against
//! Exp(1); [`fit_log_rate`] regresses observed `ln(mean exit)` on the
//! predicted log-rates across the grid (the theory says slope 1 in the
//! small-`eps` limit); [`survival_check`] tests the universal upper bound
//! `P(sigma > t) <= exp(-C t / 2)` pointwise with binomial margins.

use crate::asymptotics::{predict_rate, RatePrediction, Regime};
use crate::dynamics::{self, ExitRecord, ExitSide, Potential, SimConfig, SimMode};
use crate::error::{Error, Result};
use crate::measures::{LevyTriplet, TailSpec};
use crate::numerics;
use crate::stats;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Censored fraction above which a grid point is flagged and excluded from
/// rate fits by default.
pub const CENSOR_FLAG_THRESHOLD: f64 = 0.05;

/// Censoring-horizon policy for a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TMaxPolicy {
    /// The same horizon at every grid point.
    Fixed(f64),
    /// Horizon = factor / predicted rate constant at each grid point
    /// (factor 20 leaves a censored mass of roughly `e^{-20}` when the
    /// exit law is near-exponential).
    MultipleOfPredicted(f64),
}

impl Default for TMaxPolicy {
    fn default() -> Self {
        TMaxPolicy::MultipleOfPredicted(20.0)
    }
}

/// Potential selection in serializable plans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialChoice {
    Quadratic,
    Quartic,
}

impl PotentialChoice {
    pub fn build(self) -> Potential {
        match self {
            PotentialChoice::Quadratic => Potential::quadratic(),
            PotentialChoice::Quartic => Potential::quartic(),
        }
    }
}

fn default_step_h() -> f64 {
    0.01
}

/// A full sweep specification, JSON-serializable.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPlan {
    /// Jump measure of the driving noise.
    pub measure: TailSpec,
    /// Gaussian variance of the noise.
    #[serde(default)]
    pub d: f64,
    /// Deterministic drift of the noise.
    #[serde(default)]
    pub mu: f64,
    pub potential: PotentialChoice,
    /// Strictly decreasing noise amplitudes.
    pub eps_grid: Vec<f64>,
    /// Paths per grid point, at least 100.
    pub n_paths: usize,
    #[serde(default)]
    pub t_max: TMaxPolicy,
    pub mode: SimMode,
    #[serde(default = "default_step_h")]
    pub step_h: f64,
    #[serde(default)]
    pub cutoff_g: Option<f64>,
    #[serde(default)]
    pub ar_threshold: Option<f64>,
    /// Common starting point (default: the bottom of the well).
    #[serde(default)]
    pub x0: f64,
    pub master_seed: u64,
    /// Predictor regime used for horizons and rate comparisons.
    pub regime: Regime,
}

impl SweepPlan {
    pub fn validate(&self) -> Result<()> {
        if self.eps_grid.is_empty() {
            return Err(Error::Config("eps_grid must be nonempty".into()));
        }
        for pair in self.eps_grid.windows(2) {
            if !(pair[1] < pair[0]) {
                return Err(Error::Config(format!(
                    "eps_grid must be strictly decreasing, got {} before {}",
                    pair[0], pair[1]
                )));
            }
        }
        for &eps in &self.eps_grid {
            if !(eps >= 0.0 && eps.is_finite()) {
                return Err(Error::Config(format!("eps must be finite and >= 0, got {eps}")));
            }
            if eps == 0.0 {
                if let TMaxPolicy::MultipleOfPredicted(_) = self.t_max {
                    return Err(Error::Config(
                        "eps = 0 has no predicted rate; use a fixed t_max policy".into(),
                    ));
                }
            }
        }
        if self.n_paths < 100 {
            return Err(Error::Config(format!(
                "n_paths must be at least 100 for meaningful estimates, got {}",
                self.n_paths
            )));
        }
        match self.t_max {
            TMaxPolicy::Fixed(v) if !(v > 0.0 && v.is_finite()) => {
                return Err(Error::Config(format!("fixed t_max must be positive, got {v}")))
            }
            TMaxPolicy::MultipleOfPredicted(m) if !(m > 0.0 && m.is_finite()) => {
                return Err(Error::Config(format!("t_max multiple must be positive, got {m}")))
            }
            _ => {}
        }
        if !(self.x0.abs() < 1.0) {
            return Err(Error::Config(format!("x0 must lie inside (-1, 1), got {}", self.x0)));
        }
        LevyTriplet::new(self.d, self.measure.clone(), self.mu)?;
        Ok(())
    }

    pub fn triplet(&self) -> Result<LevyTriplet> {
        LevyTriplet::new(self.d, self.measure.clone(), self.mu)
    }

    /// Rate prediction for one grid point under the plan's regime.
    pub fn prediction(&self, eps: f64) -> Result<RatePrediction> {
        predict_rate(&self.measure, eps, &self.regime)
    }

    /// Censoring horizon at one grid point.
    pub fn horizon(&self, eps: f64) -> Result<f64> {
        match self.t_max {
            TMaxPolicy::Fixed(v) => Ok(v),
            TMaxPolicy::MultipleOfPredicted(m) => {
                let pred = self.prediction(eps)?;
                if !(pred.rate_constant > 0.0) {
                    return Err(Error::Config(format!(
                        "predicted rate vanishes at eps = {eps}; use a fixed t_max"
                    )));
                }
                Ok(m / pred.rate_constant)
            }
        }
    }

    fn config(&self, eps: f64, t_max: f64, seed: u64) -> SimConfig {
        SimConfig {
            eps,
            x0: self.x0,
            t_max,
            mode: self.mode,
            step_h: self.step_h,
            cutoff_g: self.cutoff_g,
            ar_threshold: self.ar_threshold,
            seed,
        }
    }
}

/// Runs the plan: for grid point `lane` and path `i`, the stream seed is
/// derived from `(master_seed, lane, i)`, so the output is a pure function
/// of the plan — the records come back grouped by `eps` in grid order,
/// identical for any worker count.
pub fn run_batch(plan: &SweepPlan) -> Result<Vec<(f64, Vec<ExitRecord>)>> {
    plan.validate()?;
    let triplet = plan.triplet()?;
    let potential = plan.potential.build();
    let mut out = Vec::with_capacity(plan.eps_grid.len());
    for (lane, &eps) in plan.eps_grid.iter().enumerate() {
        let t_max = plan
            .horizon(eps)
            .map_err(|e| Error::Config(format!("grid point eps = {eps}: {e}")))?;
        let records: Vec<ExitRecord> = (0..plan.n_paths)
            .into_par_iter()
            .map(|i| {
                let seed = numerics::derive_seed(plan.master_seed, lane as u64, i as u64);
                let cfg = plan.config(eps, t_max, seed);
                dynamics::simulate_exit(&triplet, &potential, &cfg).map_err(|e| {
                    Error::Config(format!("grid point eps = {eps}, path {i}: {e}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        out.push((eps, records));
    }
    Ok(out)
}

/// Summary of one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub eps: f64,
    /// Mean over uncensored exit times.
    pub mean_exit: f64,
    /// `1.96 * stddev / sqrt(n_uncensored)`.
    pub ci95_halfwidth: f64,
    pub censored_fraction: f64,
    /// KS distance of `sigma / mean` against Exp(1), uncensored sample.
    pub ks_stat: f64,
    pub n_left: u64,
    pub n_right: u64,
    /// Predicted `ln E sigma` from the regime predictor.
    pub predicted_log_rate: f64,
    /// Observed `ln(mean_exit)`.
    pub log_mean: f64,
}

impl EstimateResult {
    /// Flagged points carry too much censoring to trust the mean; rate
    /// fits exclude them by default.
    pub fn flagged(&self) -> bool {
        self.censored_fraction > CENSOR_FLAG_THRESHOLD
    }

    pub fn csv_header() -> &'static str {
        "eps,mean_exit,ci95,censored_fraction,ks_stat,predicted_log_rate,log_mean,n_left,n_right"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.eps,
            self.mean_exit,
            self.ci95_halfwidth,
            self.censored_fraction,
            self.ks_stat,
            self.predicted_log_rate,
            self.log_mean,
            self.n_left,
            self.n_right
        )
    }
}

/// Estimates the exit-law summary for one grid point.
///
/// Requires at least 30 uncensored records; otherwise the mean is not
/// trustworthy and the error advises a larger horizon.
pub fn estimate(
    eps: f64,
    records: &[ExitRecord],
    prediction: &RatePrediction,
) -> Result<EstimateResult> {
    let times: Vec<f64> = records.iter().filter_map(|r| r.exit_time).collect();
    let n = times.len();
    if n < 30 {
        return Err(Error::Estimation(format!(
            "only {n} of {} paths exited: increase t_max or n_paths",
            records.len()
        )));
    }
    let mean = times.iter().sum::<f64>() / n as f64;
    let var = times.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / (n as f64 - 1.0);
    let ci95 = 1.96 * (var / n as f64).sqrt();
    let normalized: Vec<f64> = times.iter().map(|t| t / mean).collect();
    let ks = stats::ks_statistic_exp1(&normalized)?;
    let n_left = records.iter().filter(|r| r.exit_side == ExitSide::Left).count() as u64;
    let n_right = records.iter().filter(|r| r.exit_side == ExitSide::Right).count() as u64;
    Ok(EstimateResult {
        eps,
        mean_exit: mean,
        ci95_halfwidth: ci95,
        censored_fraction: 1.0 - n as f64 / records.len() as f64,
        ks_stat: ks,
        n_left,
        n_right,
        predicted_log_rate: prediction.log_mean_exit,
        log_mean: mean.ln(),
    })
}

/// Least-squares line of observed `log_mean` against `predicted_log_rate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Fits `log_mean ~ slope * predicted_log_rate + intercept` over the
/// unflagged grid points.  The asymptotic theory predicts slope 1 (with the
/// intercept absorbing prefactor conventions).
pub fn fit_log_rate(results: &[EstimateResult]) -> Result<FitResult> {
    let usable: Vec<&EstimateResult> = results.iter().filter(|r| !r.flagged()).collect();
    if usable.len() < 3 {
        return Err(Error::Estimation(format!(
            "need at least 3 unflagged grid points for a rate fit, have {}",
            usable.len()
        )));
    }
    let n = usable.len() as f64;
    let mean_x = usable.iter().map(|r| r.predicted_log_rate).sum::<f64>() / n;
    let mean_y = usable.iter().map(|r| r.log_mean).sum::<f64>() / n;
    let sxx: f64 = usable.iter().map(|r| (r.predicted_log_rate - mean_x).powi(2)).sum();
    if sxx < 1e-12 {
        return Err(Error::Estimation(
            "predictor values are (nearly) identical across grid points; slope undefined".into(),
        ));
    }
    let sxy: f64 = usable
        .iter()
        .map(|r| (r.predicted_log_rate - mean_x) * (r.log_mean - mean_y))
        .sum();
    let syy: f64 = usable.iter().map(|r| (r.log_mean - mean_y).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(FitResult { slope, intercept, r_squared })
}

/// One point of a survival-bound comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalPoint {
    pub t: f64,
    /// Empirical `P(sigma > t)`; censored paths count as surviving.
    pub empirical: f64,
    /// `exp(-c t / 2)`.
    pub bound: f64,
    /// Four binomial standard deviations.
    pub margin: f64,
    pub violated: bool,
}

/// Pointwise comparison of empirical survival against the universal
/// sub-exponential upper bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalReport {
    pub rate_constant: f64,
    pub n: usize,
    pub points: Vec<SurvivalPoint>,
}

impl SurvivalReport {
    pub fn passed(&self) -> bool {
        self.points.iter().all(|p| !p.violated)
    }
}

/// Checks `P(sigma > t) <= exp(-c t / 2) + 4 sigma_binomial` on `t_grid`.
///
/// `c` is the predicted rate constant; the bound holds for every noise
/// amplitude (not only asymptotically), which is exactly what this check
/// exercises.  Censored records count as surviving any `t`.
pub fn survival_check(records: &[ExitRecord], c: f64, t_grid: &[f64]) -> Result<SurvivalReport> {
    if records.is_empty() {
        return Err(Error::Estimation("survival check needs at least one record".into()));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Parameter(format!("rate constant must be positive, got {c}")));
    }
    let n = records.len();
    let mut points = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if !(t >= 0.0) {
            return Err(Error::Parameter(format!("survival times must be >= 0, got {t}")));
        }
        let surviving = records
            .iter()
            .filter(|r| match r.exit_time {
                Some(s) => s > t,
                None => true,
            })
            .count();
        let empirical = surviving as f64 / n as f64;
        let bound = (-c * t / 2.0).exp();
        let margin = 4.0 * (empirical * (1.0 - empirical) / n as f64).sqrt();
        points.push(SurvivalPoint { t, empirical, bound, margin, violated: empirical > bound + margin });
    }
    Ok(SurvivalReport { rate_constant: c, n, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn quick_plan() -> SweepPlan {
        SweepPlan {
            measure: TailSpec::exp_power(0.5).unwrap(),
            d: 0.0,
            mu: 0.0,
            potential: PotentialChoice::Quadratic,
            eps_grid: vec![0.3, 0.25],
            n_paths: 100,
            t_max: TMaxPolicy::MultipleOfPredicted(20.0),
            mode: SimMode::PdmpExact,
            step_h: 0.01,
            cutoff_g: None,
            ar_threshold: None,
            x0: 0.0,
            master_seed: 0xFACE,
            regime: Regime::SubExp,
        }
    }

    fn synthetic_records(mean: f64, n: usize, seed: u64) -> Vec<ExitRecord> {
        let mut rng = numerics::stream_rng(seed, 0, 0);
        (0..n)
            .map(|i| {
                let u: f64 = rng.gen();
                ExitRecord {
                    exit_time: Some(-mean * (1.0 - u).ln()),
                    exit_side: if i % 2 == 0 { ExitSide::Left } else { ExitSide::Right },
                    n_large_jumps: 1,
                    seed: i as u64,
                }
            })
            .collect()
    }

    fn dummy_prediction(log_mean: f64) -> RatePrediction {
        RatePrediction {
            regime: Regime::SubExp,
            rate_constant: (-log_mean).exp(),
            log_mean_exit: log_mean,
            detail: Default::default(),
        }
    }

    #[test]
    fn plan_round_trips_through_json_with_defaults() {
        let text = r#"{
            "measure": {"kind": "exp_power", "alpha": 0.5},
            "potential": "quadratic",
            "eps_grid": [0.09, 0.07, 0.05],
            "n_paths": 2000,
            "mode": "pdmp_exact",
            "master_seed": 42,
            "regime": "sub_exp"
        }"#;
        let plan: SweepPlan = serde_json::from_str(text).unwrap();
        assert_eq!(plan.t_max, TMaxPolicy::MultipleOfPredicted(20.0));
        assert_eq!(plan.step_h, 0.01);
        assert_eq!(plan.x0, 0.0);
        assert_eq!(plan.d, 0.0);
        plan.validate().unwrap();
        let text2 = serde_json::to_string(&plan).unwrap();
        let plan2: SweepPlan = serde_json::from_str(&text2).unwrap();
        assert_eq!(plan.eps_grid, plan2.eps_grid);
        // unknown fields are rejected
        let bad = text.replace("\"master_seed\": 42", "\"master_seed\": 42, \"bogus\": 1");
        assert!(serde_json::from_str::<SweepPlan>(&bad).is_err());
    }

    #[test]
    fn plan_validation_rejects_bad_grids_and_counts() {
        let mut plan = quick_plan();
        plan.eps_grid = vec![0.25, 0.3];
        assert!(plan.validate().is_err());
        plan.eps_grid = vec![0.3, 0.3];
        assert!(plan.validate().is_err());
        plan.eps_grid = vec![];
        assert!(plan.validate().is_err());
        let mut plan = quick_plan();
        plan.n_paths = 10;
        assert!(plan.validate().is_err());
        let mut plan = quick_plan();
        plan.eps_grid = vec![0.3, 0.0];
        assert!(plan.validate().is_err(), "eps = 0 incompatible with predicted horizons");
        plan.t_max = TMaxPolicy::Fixed(5.0);
        plan.validate().unwrap();
    }

    #[test]
    fn batch_is_deterministic_and_thread_count_invariant() {
        let plan = quick_plan();
        let a = run_batch(&plan).unwrap();
        let b = run_batch(&plan).unwrap();
        assert_eq!(a, b, "same plan, same records");
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = single.install(|| run_batch(&plan)).unwrap();
        assert_eq!(a, c, "one worker vs ambient pool");
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let d = four.install(|| run_batch(&plan)).unwrap();
        assert_eq!(a, d, "four workers vs ambient pool");
        // a different master seed changes the records
        let mut plan2 = plan.clone();
        plan2.master_seed ^= 1;
        let e = run_batch(&plan2).unwrap();
        assert_ne!(a, e);
    }

    #[test]
    fn zero_noise_batch_is_fully_censored() {
        let mut plan = quick_plan();
        plan.eps_grid = vec![0.0];
        plan.t_max = TMaxPolicy::Fixed(5.0);
        let out = run_batch(&plan).unwrap();
        assert_eq!(out.len(), 1);
        assert!(out[0].1.iter().all(|r| r.is_censored()));
    }

    #[test]
    fn estimator_recovers_exponential_parameters() {
        let records = synthetic_records(5.0, 2000, 0xE57);
        let est = estimate(0.1, &records, &dummy_prediction(5.0f64.ln())).unwrap();
        assert!((est.mean_exit - 5.0).abs() < est.ci95_halfwidth, "mean {}", est.mean_exit);
        assert!(est.ks_stat < 1.36 / (2000f64).sqrt() * 1.5, "ks {}", est.ks_stat);
        assert_eq!(est.censored_fraction, 0.0);
        assert_eq!(est.n_left + est.n_right, 2000);
        assert!(!est.flagged());
    }

    #[test]
    fn estimator_point_mass_has_known_ks_distance() {
        let records: Vec<ExitRecord> = (0..100)
            .map(|i| ExitRecord {
                exit_time: Some(7.0),
                exit_side: ExitSide::Right,
                n_large_jumps: 0,
                seed: i,
            })
            .collect();
        let est = estimate(0.1, &records, &dummy_prediction(1.0)).unwrap();
        assert_relative_eq!(est.mean_exit, 7.0, epsilon = 1e-12);
        assert_relative_eq!(est.ks_stat, 1.0 - (-1.0f64).exp(), epsilon = 1e-12);
    }

    #[test]
    fn estimator_requires_enough_uncensored_paths() {
        let censored = ExitRecord {
            exit_time: None,
            exit_side: ExitSide::Censored,
            n_large_jumps: 0,
            seed: 0,
        };
        let records = vec![censored; 100];
        assert!(estimate(0.1, &records, &dummy_prediction(1.0)).is_err());
        let mut mixed = records;
        for r in mixed.iter_mut().take(29) {
            r.exit_time = Some(1.0);
            r.exit_side = ExitSide::Right;
        }
        assert!(estimate(0.1, &mixed, &dummy_prediction(1.0)).is_err(), "29 < 30");
    }

    #[test]
    fn estimator_consistency_over_repeated_trials() {
        // mean error within 3/sqrt(N) and KS below its 5% critical value in
        // at least 95 of 100 trials
        let n = 500usize;
        let mut mean_ok = 0;
        let mut ks_ok = 0;
        for trial in 0..100u64 {
            let records = synthetic_records(1.0, n, 0x7EA0 + trial);
            let est = estimate(0.1, &records, &dummy_prediction(0.0)).unwrap();
            if (est.mean_exit - 1.0).abs() < 3.0 / (n as f64).sqrt() {
                mean_ok += 1;
            }
            if est.ks_stat < 1.36 / (n as f64).sqrt() {
                ks_ok += 1;
            }
        }
        assert!(mean_ok >= 95, "mean within 3 sigma in {mean_ok}/100 trials");
        assert!(ks_ok >= 95, "KS below critical value in {ks_ok}/100 trials");
    }

    fn estimate_with(predicted: f64, log_mean: f64, censored: f64) -> EstimateResult {
        EstimateResult {
            eps: 0.1,
            mean_exit: log_mean.exp(),
            ci95_halfwidth: 0.1,
            censored_fraction: censored,
            ks_stat: 0.02,
            n_left: 50,
            n_right: 50,
            predicted_log_rate: predicted,
            log_mean,
        }
    }

    #[test]
    fn fit_recovers_synthetic_slopes() {
        let exact: Vec<EstimateResult> =
            [2.0, 3.0, 4.0, 5.0].iter().map(|&p| estimate_with(p, p, 0.0)).collect();
        let fit = fit_log_rate(&exact).unwrap();
        assert_relative_eq!(fit.slope, 1.0, epsilon = 1e-12);
        assert_relative_eq!(fit.intercept, 0.0, epsilon = 1e-12);
        assert_relative_eq!(fit.r_squared, 1.0, epsilon = 1e-12);

        let shifted: Vec<EstimateResult> =
            [2.0, 3.0, 4.0, 5.0].iter().map(|&p| estimate_with(p, p + 3f64.ln(), 0.0)).collect();
        let fit = fit_log_rate(&shifted).unwrap();
        assert_relative_eq!(fit.slope, 1.0, epsilon = 1e-12);
        assert_relative_eq!(fit.intercept, 3f64.ln(), epsilon = 1e-12);

        let damped: Vec<EstimateResult> =
            [2.0, 3.0, 4.0, 5.0].iter().map(|&p| estimate_with(p, 0.8 * p, 0.0)).collect();
        let fit = fit_log_rate(&damped).unwrap();
        assert_relative_eq!(fit.slope, 0.8, epsilon = 1e-12);
    }

    #[test]
    fn fit_excludes_flagged_points_and_validates_input() {
        // a heavily censored outlier must not disturb the fit
        let mut results: Vec<EstimateResult> =
            [2.0, 3.0, 4.0].iter().map(|&p| estimate_with(p, p, 0.0)).collect();
        results.push(estimate_with(5.0, 0.0, 0.5));
        let fit = fit_log_rate(&results).unwrap();
        assert_relative_eq!(fit.slope, 1.0, epsilon = 1e-12);

        assert!(fit_log_rate(&results[..2]).is_err(), "two points are not enough");
        let degenerate: Vec<EstimateResult> =
            (0..4).map(|i| estimate_with(2.0, 2.0 + i as f64 * 0.01, 0.0)).collect();
        assert!(fit_log_rate(&degenerate).is_err(), "flat predictor");
    }

    #[test]
    fn survival_bound_holds_for_exponential_records() {
        let c = 0.2;
        let records = synthetic_records(1.0 / c, 2000, 0x5EED);
        let t_grid: Vec<f64> = vec![0.0, 2.0, 5.0, 10.0, 25.0, 50.0];
        let report = survival_check(&records, c, &t_grid).unwrap();
        assert!(report.passed(), "violations: {:?}", report.points);
        assert_eq!(report.points[0].empirical, 1.0);
        assert_eq!(report.points[0].bound, 1.0);
    }

    #[test]
    fn survival_check_flags_rates_that_are_too_slow() {
        // records four times slower than claimed: survival e^{-ct/4} crosses
        // the bound e^{-ct/2} decisively at moderate t
        let c = 0.2;
        let records = synthetic_records(4.0 / c, 2000, 0x5EED2);
        let t_grid: Vec<f64> = vec![8.0 / c, 12.0 / c];
        let report = survival_check(&records, c, &t_grid).unwrap();
        assert!(!report.passed(), "negative control must be flagged");
    }

    #[test]
    fn survival_check_validates_input() {
        assert!(survival_check(&[], 0.1, &[1.0]).is_err());
        let records = synthetic_records(1.0, 100, 1);
        assert!(survival_check(&records, -0.1, &[1.0]).is_err());
        assert!(survival_check(&records, 0.1, &[-1.0]).is_err());
    }

    #[test]
    fn csv_row_matches_header_arity() {
        let est = estimate_with(2.0, 2.0, 0.0);
        let header_cols = EstimateResult::csv_header().split(',').count();
        let row_cols = est.csv_row().split(',').count();
        assert_eq!(header_cols, row_cols);
    }
}

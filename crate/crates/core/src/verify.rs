//! Monte Carlo validation suites for the analytic probability bounds.
//!
//! Each suite simulates the exact object a bound speaks about and checks
//! that the empirical frequency never exceeds the bound by more than four
//! binomial standard deviations.  The bounds are asymptotic tools and often
//! wildly conservative at desk scale — a vacuous bound (value above 1) still
//! *holds*; what the suites rule out is an implementation whose formula is
//! wrong in a direction that matters.

use crate::error::{Error, Result};
use crate::measures::{LevyTriplet, TailSpec};
use crate::numerics;
use crate::processes;
use serde::Serialize;

/// Which side of an inequality an empirical frequency is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSide {
    /// Violated when `p_hat > bound + margin`.
    Upper,
    /// Violated when `p_hat < bound - margin`.
    Lower,
}

/// Outcome of one Monte Carlo bound comparison.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub label: String,
    pub n: u64,
    pub p_hat: f64,
    pub bound: f64,
    /// Four binomial standard deviations of `p_hat`.
    pub margin: f64,
    pub side: BoundSide,
    /// Present when the configuration sits outside the bound's validated
    /// applicability regime: the value is still reported, not asserted.
    pub skipped: Option<String>,
}

impl CheckOutcome {
    pub fn violated(&self) -> bool {
        if self.skipped.is_some() {
            return false;
        }
        match self.side {
            BoundSide::Upper => self.p_hat > self.bound + self.margin,
            BoundSide::Lower => self.p_hat < self.bound - self.margin,
        }
    }
}

/// True when no check in the list is violated.
pub fn all_hold(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|c| !c.violated())
}

fn binomial_margin(p_hat: f64, n: u64) -> f64 {
    4.0 * (p_hat * (1.0 - p_hat) / n as f64).sqrt()
}

/// Default sample size of the verification suites.
pub const DEFAULT_SAMPLES: u64 = 100_000;

/// Validates the bound on `P(sum of k conditional large-jump magnitudes
/// exceeds r)` over the default grid: tail indices 0.5 and 2, `k` from 1 to
/// 3, `r = 1.5 k g`, `delta = 0.1`.
pub fn sum_bound_suite(n: u64, seed: u64) -> Result<Vec<CheckOutcome>> {
    if n < 1000 {
        return Err(Error::Parameter(format!("need at least 1000 samples, got {n}")));
    }
    let mut outcomes = Vec::new();
    let mut lane = 0u64;
    for &(alpha, g) in &[(0.5, 2.0), (2.0, 1.5)] {
        let spec = TailSpec::exp_power(alpha)?;
        for k in 1..=3usize {
            let r = 1.5 * k as f64 * g;
            let bound = processes::big_sum_bound(&spec, k, r, g, 0.1)?;
            let mut rng = numerics::stream_rng(seed, lane, 0);
            lane += 1;
            let mut hits = 0u64;
            for _ in 0..n {
                let mut sum = 0.0;
                for _ in 0..k {
                    sum += spec.sample_large_jump(g, &mut rng)?.abs();
                }
                if sum > r {
                    hits += 1;
                }
            }
            let p_hat = hits as f64 / n as f64;
            outcomes.push(CheckOutcome {
                label: format!("jump-sum bound: alpha={alpha}, k={k}, g={g}, r={r}, delta=0.1"),
                n,
                p_hat,
                bound,
                margin: binomial_margin(p_hat, n),
                side: BoundSide::Upper,
                skipped: None,
            });
        }
    }
    Ok(outcomes)
}

/// Configuration of one small-jump supremum check.
#[derive(Debug, Clone, Copy)]
pub struct SupBoundConfig {
    /// Jump-size cap of the small part (measure: tail index 0.5, support
    /// edge 1, truncated at `g`).
    pub g: f64,
    /// Supremum threshold.
    pub f_level: f64,
    pub horizon: f64,
    pub delta: f64,
    pub n: u64,
}

/// Ratio `f_level / (g * horizon)` below which the supremum bound is
/// reported but not asserted (the underlying estimate only kicks in deep in
/// its regime).
pub const SUP_BOUND_REGIME_GATE: f64 = 20.0;

/// Validates the small-jump supremum bound for one configuration by exact
/// compound Poisson simulation (no Gaussian part, no drift, jumps in
/// `[1, g]`).
pub fn sup_bound_check(cfg: &SupBoundConfig, seed: u64) -> Result<CheckOutcome> {
    if cfg.n < 1000 {
        return Err(Error::Parameter(format!("need at least 1000 samples, got {}", cfg.n)));
    }
    let bound = processes::small_sup_bound(cfg.g, cfg.f_level, cfg.horizon, cfg.delta)?;
    let spec = TailSpec::exp_power(0.5)?.truncated(cfg.g)?;
    let triplet = LevyTriplet::pure_jump(spec);
    let dec = processes::decompose(&triplet, 1.0)?;
    let mut hits = 0u64;
    for i in 0..cfg.n {
        let mut rng = numerics::stream_rng(seed, 0, i);
        let path = dec.sample_large_path(cfg.horizon, &mut rng)?;
        let mut sum = 0.0;
        let mut sup = 0.0f64;
        for ev in &path.events {
            sum += ev.size;
            sup = sup.max(sum.abs());
        }
        if sup > cfg.f_level {
            hits += 1;
        }
    }
    let p_hat = hits as f64 / cfg.n as f64;
    let ratio = cfg.f_level / (cfg.g * cfg.horizon);
    let skipped = if ratio < SUP_BOUND_REGIME_GATE {
        Some(format!(
            "threshold/(cap*horizon) = {ratio:.3} is below the validated regime ({SUP_BOUND_REGIME_GATE}); \
             bound reported, not asserted"
        ))
    } else {
        None
    };
    Ok(CheckOutcome {
        label: format!(
            "small-jump supremum bound: g={}, f={}, T={}, delta={}",
            cfg.g, cfg.f_level, cfg.horizon, cfg.delta
        ),
        n: cfg.n,
        p_hat,
        bound,
        margin: binomial_margin(p_hat, cfg.n),
        side: BoundSide::Upper,
        skipped,
    })
}

/// Default configurations of the supremum suite — all inside the validated
/// regime `f/(g*T) >= 20`.
pub fn sup_bound_suite(n: u64, seed: u64) -> Result<Vec<CheckOutcome>> {
    let configs = [
        SupBoundConfig { g: 2.0, f_level: 8.0, horizon: 0.2, delta: 0.0, n },
        SupBoundConfig { g: 2.0, f_level: 12.0, horizon: 0.3, delta: 0.0, n },
        SupBoundConfig { g: 3.0, f_level: 18.0, horizon: 0.25, delta: 0.1, n },
    ];
    configs.iter().enumerate().map(|(i, cfg)| sup_bound_check(cfg, seed ^ i as u64)).collect()
}

/// Validates the short-horizon envelope: synthetic exit times drawn from an
/// exact exponential law with rate `c` must stay inside
/// `[lower(t), upper(t)]` (within binomial margins) on a grid of `t`.
pub fn envelope_suite(c: f64, horizon: f64, n: u64, seed: u64) -> Result<Vec<CheckOutcome>> {
    use rand::Rng;
    if n < 1000 {
        return Err(Error::Parameter(format!("need at least 1000 samples, got {n}")));
    }
    if !(c > 0.0 && horizon > 0.0 && c * horizon < 1.0) {
        return Err(Error::Domain(format!(
            "need c > 0, horizon > 0, c*horizon < 1; got c={c}, horizon={horizon}"
        )));
    }
    let mut rng = numerics::stream_rng(seed, 0, 0);
    let samples: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln() / c).collect();
    let mut outcomes = Vec::new();
    for &ct in &[0.5, 1.0, 2.0, 5.0] {
        let t = ct / c;
        let (upper, lower) = crate::asymptotics::short_time_envelope(c, horizon, t)?;
        let surviving = samples.iter().filter(|&&s| s > t).count();
        let p_hat = surviving as f64 / n as f64;
        let margin = binomial_margin(p_hat, n);
        outcomes.push(CheckOutcome {
            label: format!("exit-law envelope upper: c={c}, T={horizon}, t={t}"),
            n,
            p_hat,
            bound: upper,
            margin,
            side: BoundSide::Upper,
            skipped: None,
        });
        outcomes.push(CheckOutcome {
            label: format!("exit-law envelope lower: c={c}, T={horizon}, t={t}"),
            n,
            p_hat,
            bound: lower,
            margin,
            side: BoundSide::Lower,
            skipped: None,
        });
    }
    Ok(outcomes)
}

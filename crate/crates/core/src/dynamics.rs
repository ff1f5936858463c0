//! The perturbed gradient flow and its first exit from `(-1, 1)`.
//!
//! The state obeys `dX_t = -U'(X_{t-}) dt + eps dL_t` started inside the
//! interval, where `U` is a double-barrier potential with its well at the
//! origin (`U'(0) = 0`, `x U'(x) > 0` inside, so the drift pulls every
//! interior point toward 0) and `L` is the driving noise with triplet
//! `(d, nu, mu)`.  The quantity of interest is
//! `sigma = inf { t >= 0 : |X_t| >= 1 }` — the boundary is closed, touching
//! `|x| = 1` exits.
//!
//! Two simulation modes:
//!
//! * **PdmpExact** — for pure-jump finite-activity noise (`d = 0`,
//!   `mu = 0`, jump support bounded away from 0) the path is piecewise
//!   deterministic: the flow between jumps is integrated exactly (or by
//!   high-order steps), jumps arrive as a Poisson stream, and exit can only
//!   happen at a jump instant because the flow contracts toward the well.
//!   Cost per path scales with the *jump count*, which is what makes mean
//!   exit times of 10^3–10^4 time units affordable.
//! * **EulerJumpAdapted** — general triplets: jumps below a threshold are
//!   replaced by a Brownian motion matching their second moment, a residual
//!   medium compound Poisson band is simulated exactly, and the drift is
//!   stepped explicitly on a grid merged with the jump times, evaluating
//!   `U'` at the left limit and applying each jump after the drift step.

use crate::error::{Error, Result};
use crate::measures::LevyTriplet;
use crate::numerics;
use crate::processes::{self, JumpEvent, PathEvents};
use rand_distr::{Distribution, Exp, StandardNormal};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Largest substep used by the numerical flow integrator.
const FLOW_SUBSTEP: f64 = 0.01;
/// Grid resolution of [`Potential::check_conditions`].
const CHECK_GRID: usize = 1000;

type Gradient = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Potential shape, represented by its gradient `U'`.
#[derive(Clone)]
pub enum PotentialKind {
    /// `U(x) = x^2 / 2`, `U'(x) = x`.
    Quadratic,
    /// `U(x) = x^4 / 4`, `U'(x) = x^3`.
    Quartic,
    /// User-supplied gradient with a declared Lipschitz constant.
    CustomGradient { gradient: Gradient, lipschitz: f64 },
}

/// A confining double-barrier potential on `[-1, 1]`.
#[derive(Clone)]
pub struct Potential {
    kind: PotentialKind,
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PotentialKind::Quadratic => write!(f, "Potential::Quadratic"),
            PotentialKind::Quartic => write!(f, "Potential::Quartic"),
            PotentialKind::CustomGradient { lipschitz, .. } => {
                write!(f, "Potential::CustomGradient {{ lipschitz: {lipschitz} }}")
            }
        }
    }
}

/// Outcome of the grid check of the potential conditions.
#[derive(Debug, Clone, Default)]
pub struct ConditionReport {
    /// `U'(0) = 0` within 1e-12.
    pub gradient_zero_at_origin: bool,
    /// Interior grid points where `x U'(x) <= 0` (endpoints exempt:
    /// the drift may vanish at `x = +-1`).
    pub sign_violations: Vec<f64>,
    /// Grid midpoints where a finite-difference slope exceeds the declared
    /// Lipschitz constant.
    pub lipschitz_violations: Vec<f64>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.gradient_zero_at_origin
            && self.sign_violations.is_empty()
            && self.lipschitz_violations.is_empty()
    }
}

impl Potential {
    pub fn quadratic() -> Self {
        Potential { kind: PotentialKind::Quadratic }
    }

    pub fn quartic() -> Self {
        Potential { kind: PotentialKind::Quartic }
    }

    /// A custom gradient, validated on the check grid at construction.
    pub fn custom<F>(gradient: F, lipschitz: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let pot = Self::custom_unchecked(gradient, lipschitz)?;
        let report = pot.check_conditions();
        if !report.passed() {
            return Err(Error::Parameter(format!(
                "gradient fails the confinement conditions: {} sign violation(s), \
                 {} Lipschitz violation(s), origin ok: {}",
                report.sign_violations.len(),
                report.lipschitz_violations.len(),
                report.gradient_zero_at_origin
            )));
        }
        Ok(pot)
    }

    /// A custom gradient without validation, for building diagnostics on
    /// potentials expected to fail.
    pub fn custom_unchecked<F>(gradient: F, lipschitz: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(lipschitz > 0.0 && lipschitz.is_finite()) {
            return Err(Error::Parameter(format!(
                "Lipschitz constant must be positive, got {lipschitz}"
            )));
        }
        Ok(Potential {
            kind: PotentialKind::CustomGradient { gradient: Arc::new(gradient), lipschitz },
        })
    }

    /// `U'(x)`.
    pub fn gradient(&self, x: f64) -> f64 {
        match &self.kind {
            PotentialKind::Quadratic => x,
            PotentialKind::Quartic => x * x * x,
            PotentialKind::CustomGradient { gradient, .. } => gradient(x),
        }
    }

    fn lipschitz(&self) -> f64 {
        match &self.kind {
            PotentialKind::Quadratic => 1.0,
            PotentialKind::Quartic => 3.0,
            PotentialKind::CustomGradient { lipschitz, .. } => *lipschitz,
        }
    }

    /// Grid check of the confinement conditions: `U'(0) = 0`, `x U'(x) > 0`
    /// on the interior of `(-1, 1)` minus the origin (the endpoints are
    /// exempt — the drift may vanish there), and finite-difference slopes
    /// within the Lipschitz constant.
    pub fn check_conditions(&self) -> ConditionReport {
        let mut report = ConditionReport {
            gradient_zero_at_origin: self.gradient(0.0).abs() <= 1e-12,
            ..Default::default()
        };
        let lip = self.lipschitz() * (1.0 + 1e-6) + 1e-12;
        let h = 2.0 / CHECK_GRID as f64;
        let mut prev = self.gradient(-1.0);
        for i in 0..=CHECK_GRID {
            let x = -1.0 + i as f64 * h;
            let grad = self.gradient(x);
            if i > 0 && i < CHECK_GRID && x.abs() > 1e-9 && x * grad <= 0.0 {
                report.sign_violations.push(x);
            }
            if i > 0 && ((grad - prev) / h).abs() > lip {
                report.lipschitz_violations.push(x - h / 2.0);
            }
            prev = grad;
        }
        report
    }

    /// The unperturbed flow `y' = -U'(y)` after time `dt`, started at `x`.
    ///
    /// Quadratic potentials use the exact solution `x e^{-dt}`; everything
    /// else is integrated by classical 4th-order steps of length at most
    /// 0.01.  The result is clamped to `|y| <= |x|`: under the confinement
    /// conditions the flow contracts toward the well, so any overshoot is
    /// integration error.
    pub fn flow(&self, x: f64, dt: f64) -> f64 {
        debug_assert!(dt >= 0.0, "flow needs nonnegative dt");
        if dt == 0.0 || x == 0.0 {
            return x;
        }
        let y = match &self.kind {
            PotentialKind::Quadratic => x * (-dt).exp(),
            _ => {
                let steps = (dt / FLOW_SUBSTEP).ceil().max(1.0);
                let h = dt / steps;
                let mut y = x;
                for _ in 0..steps as u64 {
                    let k1 = -self.gradient(y);
                    let k2 = -self.gradient(y + 0.5 * h * k1);
                    let k3 = -self.gradient(y + 0.5 * h * k2);
                    let k4 = -self.gradient(y + h * k3);
                    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                }
                y
            }
        };
        if y.abs() > x.abs() {
            y.signum() * x.abs()
        } else {
            y
        }
    }
}

/// Simulation scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMode {
    /// Event-driven exact simulation; requires `d = 0`, `mu = 0`, and a
    /// jump support bounded away from zero (finite activity).
    PdmpExact,
    /// Jump-adapted explicit scheme with Gaussian replacement of the small
    /// jumps; accepts any triplet.
    EulerJumpAdapted,
}

/// Parameters of one simulated path.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Noise amplitude; zero is allowed and never exits.
    pub eps: f64,
    /// Starting point, strictly inside `(-1, 1)`.
    pub x0: f64,
    /// Censoring horizon.
    pub t_max: f64,
    pub mode: SimMode,
    /// Drift-grid step of the Euler scheme.
    pub step_h: f64,
    /// Small/large decomposition cutoff (Euler); `None` picks
    /// `max(support edge, 1)`.
    pub cutoff_g: Option<f64>,
    /// Jumps below this level are replaced by Brownian motion matching
    /// their second moment (Euler); `None` uses the cutoff, leaving no
    /// medium band.
    pub ar_threshold: Option<f64>,
    /// Per-path random-stream seed.
    pub seed: u64,
}

impl SimConfig {
    pub fn new(eps: f64, x0: f64, t_max: f64, mode: SimMode, seed: u64) -> Result<Self> {
        let cfg = SimConfig {
            eps,
            x0,
            t_max,
            mode,
            step_h: 0.01,
            cutoff_g: None,
            ar_threshold: None,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps >= 0.0 && self.eps.is_finite()) {
            return Err(Error::Config(format!("eps must be finite and >= 0, got {}", self.eps)));
        }
        if !(self.x0.abs() < 1.0) {
            return Err(Error::Config(format!(
                "starting point must lie strictly inside (-1, 1), got {}",
                self.x0
            )));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::Config(format!("t_max must be positive, got {}", self.t_max)));
        }
        if !(self.step_h > 0.0 && self.step_h.is_finite()) {
            return Err(Error::Config(format!("step_h must be positive, got {}", self.step_h)));
        }
        for (name, v) in [("cutoff_g", self.cutoff_g), ("ar_threshold", self.ar_threshold)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::Config(format!("{name} must be positive, got {v}")));
                }
            }
        }
        if let (Some(ar), Some(g)) = (self.ar_threshold, self.cutoff_g) {
            if ar > g {
                return Err(Error::Config(format!(
                    "ar_threshold {ar} must not exceed cutoff_g {g}"
                )));
            }
        }
        Ok(())
    }
}

/// Which side the path exited, if it did.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitSide {
    Left,
    Right,
    Censored,
}

/// Outcome of one path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExitRecord {
    /// First time `|X| >= 1`; `None` iff censored at `t_max`.
    pub exit_time: Option<f64>,
    pub exit_side: ExitSide,
    /// Large jumps consumed before termination (all jumps in PDMP mode,
    /// jumps at or above the cutoff in Euler mode).
    pub n_large_jumps: u64,
    pub seed: u64,
}

impl ExitRecord {
    pub fn is_censored(&self) -> bool {
        self.exit_side == ExitSide::Censored
    }
}

/// Simulates one path to exit or censoring.
pub fn simulate_exit(
    triplet: &LevyTriplet,
    pot: &Potential,
    cfg: &SimConfig,
) -> Result<ExitRecord> {
    simulate_exit_with_events(triplet, pot, cfg).map(|(record, _)| record)
}

/// As [`simulate_exit`], additionally returning the large-jump events the
/// path consumed (times and unscaled sizes), for event dumps.
pub fn simulate_exit_with_events(
    triplet: &LevyTriplet,
    pot: &Potential,
    cfg: &SimConfig,
) -> Result<(ExitRecord, PathEvents)> {
    cfg.validate()?;
    match cfg.mode {
        SimMode::PdmpExact => simulate_pdmp(triplet, pot, cfg),
        SimMode::EulerJumpAdapted => simulate_euler(triplet, pot, cfg),
    }
}

fn record(
    exit: Option<(f64, ExitSide)>,
    n_large_jumps: u64,
    seed: u64,
    horizon: f64,
    events: Vec<JumpEvent>,
) -> (ExitRecord, PathEvents) {
    let (exit_time, exit_side) = match exit {
        Some((t, side)) => (Some(t), side),
        None => (None, ExitSide::Censored),
    };
    (
        ExitRecord { exit_time, exit_side, n_large_jumps, seed },
        PathEvents { horizon, events },
    )
}

fn side_of(x: f64) -> ExitSide {
    if x > 0.0 {
        ExitSide::Right
    } else {
        ExitSide::Left
    }
}

fn simulate_pdmp(
    triplet: &LevyTriplet,
    pot: &Potential,
    cfg: &SimConfig,
) -> Result<(ExitRecord, PathEvents)> {
    if triplet.d != 0.0 {
        return Err(Error::Config(
            "exact event-driven mode needs a vanishing Gaussian part (d = 0)".into(),
        ));
    }
    if triplet.mu != 0.0 {
        return Err(Error::Config(
            "exact event-driven mode needs a driftless noise (mu = 0): the flow between \
             jumps is integrated for the potential alone"
                .into(),
        ));
    }
    let edge = triplet.nu.support_edge();
    if !(edge > 0.0) {
        return Err(Error::Config(
            "exact event-driven mode needs finite jump activity (support edge above zero)".into(),
        ));
    }
    let rate = triplet.nu.mass_above(edge)?;
    let mut rng = numerics::stream_rng(cfg.seed, 0, 0);
    let mut events = Vec::new();
    let mut x = cfg.x0;
    let mut t = 0.0;
    let mut n: u64 = 0;
    if rate > 0.0 {
        let gap = Exp::new(rate).map_err(|e| Error::Parameter(format!("bad jump rate: {e}")))?;
        loop {
            let next = t + gap.sample(&mut rng);
            if next > cfg.t_max {
                break;
            }
            // Between jumps the flow contracts toward the well, so the path
            // cannot exit there; advance it exactly to the jump instant.
            x = pot.flow(x, next - t);
            let w = triplet.nu.sample_large_jump(edge, &mut rng)?;
            x += cfg.eps * w;
            t = next;
            n += 1;
            events.push(JumpEvent { time: t, size: w });
            if x.abs() >= 1.0 {
                return Ok(record(Some((t, side_of(x))), n, cfg.seed, t, events));
            }
        }
    }
    Ok(record(None, n, cfg.seed, cfg.t_max, events))
}

fn simulate_euler(
    triplet: &LevyTriplet,
    pot: &Potential,
    cfg: &SimConfig,
) -> Result<(ExitRecord, PathEvents)> {
    let edge = triplet.nu.support_edge();
    let cutoff = cfg.cutoff_g.unwrap_or_else(|| edge.max(1.0));
    let ar = cfg.ar_threshold.unwrap_or(cutoff).min(cutoff);
    let dec = processes::decompose(triplet, cutoff)?;

    // Jumps below `ar` enter as Brownian motion with the matching second
    // moment; the sum with the genuine Gaussian part is one variance.
    let variance_rate = triplet.d + triplet.nu.second_moment_below(ar)?;
    // Residual band [ar, cutoff): exact compound Poisson.
    let medium_rate = (triplet.nu.mass_above(ar)? - dec.large_rate()).max(0.0);

    let mut rng = numerics::stream_rng(cfg.seed, 0, 0);
    let large_gap = if dec.large_rate() > 0.0 {
        Some(Exp::new(dec.large_rate()).map_err(|e| Error::Parameter(e.to_string()))?)
    } else {
        None
    };
    let medium_gap = if medium_rate > 0.0 {
        Some(Exp::new(medium_rate).map_err(|e| Error::Parameter(e.to_string()))?)
    } else {
        None
    };

    let mut events = Vec::new();
    let mut x = cfg.x0;
    let mut t = 0.0;
    let mut n: u64 = 0;
    let mut next_large = large_gap.map_or(f64::INFINITY, |g| g.sample(&mut rng));
    let mut next_medium = medium_gap.map_or(f64::INFINITY, |g| g.sample(&mut rng));

    loop {
        let next_grid = t + cfg.step_h;
        let next = next_grid.min(next_large).min(next_medium).min(cfg.t_max);
        let dt = next - t;
        // Explicit drift from the left limit plus the Gaussian increment.
        let mut x_new = x - pot.gradient(x) * dt;
        if variance_rate > 0.0 && cfg.eps > 0.0 && dt > 0.0 {
            let z: f64 = StandardNormal.sample(&mut rng);
            x_new += cfg.eps * (variance_rate * dt).sqrt() * z;
        }
        x = x_new;
        t = next;
        // Jumps apply after the drift step at their instant.
        if t == next_large {
            let w = dec.sample_jump(&mut rng)?;
            x += cfg.eps * w;
            n += 1;
            events.push(JumpEvent { time: t, size: w });
            next_large = t + large_gap.unwrap().sample(&mut rng);
        } else if t == next_medium {
            let w = dec.small().nu.sample_large_jump(ar, &mut rng)?;
            x += cfg.eps * w;
            next_medium = t + medium_gap.unwrap().sample(&mut rng);
        }
        if x.abs() >= 1.0 {
            return Ok(record(Some((t, side_of(x))), n, cfg.seed, t, events));
        }
        if t >= cfg.t_max {
            return Ok(record(None, n, cfg.seed, cfg.t_max, events));
        }
    }
}

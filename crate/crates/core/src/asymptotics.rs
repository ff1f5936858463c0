//! Exit-rate predictions and the variational problems behind them.
//!
//! As `eps -> 0` the first exit time of the damped jump diffusion is
//! asymptotically exponential, and its rate is governed by the cheapest way
//! the noise can cover the distance to the boundary:
//!
//! * heavy (power-law) tails exit in one huge jump: the mean grows like
//!   `eps^-r / 2`;
//! * sub-exponential light tails (`f(u) = c u^alpha l(u)`, `alpha < 1`) still
//!   exit in a single jump of size `~1/eps`: rate `2 exp(-f(1/eps))`;
//! * super-exponential tails (`alpha > 1`) find it cheaper to pile up many
//!   moderate jumps inside one relaxation window: the log-rate is
//!   `d_alpha |ln eps| / (eps q_eps)` with `q_eps` the tail quantile at
//!   level `eps` and `d_alpha = alpha (alpha-1)^(1/alpha - 1)`;
//! * jumps truncated at `theta/eps` force a ladder of `~1/theta` jumps:
//!   the single-jump exponent is multiplied by
//!   `phi(theta) = floor(1/theta) theta^alpha + (1 - floor(1/theta) theta)^alpha`;
//! * purely Gaussian noise gives the classical `exp(2 min(U(-1), U(1)) / eps^2)`
//!   scaling in the barrier heights.
//!
//! The minimization of `sum_i f(x_i)` over jump-size configurations
//! `sum_i x_i = a`, `0 <= x_i <= theta a` is solved in closed form for the
//! pure power `f(x) = x^alpha` (boundary configurations win for
//! `alpha <= 1`, the barycenter for `alpha >= 1` — the phase transition at
//! `alpha = 1` is exactly the sub/super-exponential switch) and by
//! exhaustive grid search for arbitrary objectives.

use crate::error::{Error, Result};
use crate::measures::{TailForm, TailSpec};
use crate::numerics;
use serde::{Deserialize, Serialize};

/// `alpha (alpha - 1)^(1/alpha - 1)` for `alpha > 1`; always in `(1, 2]`.
pub fn superexp_constant_closed(alpha: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("constant defined for alpha > 1 only, got {alpha}")));
    }
    Ok(alpha * (alpha - 1.0).powf(1.0 / alpha - 1.0))
}

/// The same constant obtained from its variational characterization
/// `inf_{y > 0} (y^(1-alpha) + y)`, by golden-section search on
/// `[1e-6, 1e6]` to bracket width `1e-12`.
///
/// Kept alongside the closed form as an executable cross-check; the two must
/// agree to `1e-9`.
pub fn superexp_constant_variational(alpha: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("constant defined for alpha > 1 only, got {alpha}")));
    }
    let objective = |y: f64| y.powf(1.0 - alpha) + y;
    let (_, value) = numerics::golden_section_min(objective, 1e-6, 1e6, 1e-12);
    Ok(value)
}

/// Location of the variational minimum, `(alpha - 1)^(1/alpha)`.
pub fn superexp_minimizer(alpha: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("minimizer defined for alpha > 1 only, got {alpha}")));
    }
    Ok((alpha - 1.0).powf(1.0 / alpha))
}

/// Floor of `1/theta` that tolerates the representation error of ratios
/// like `1/(1/3)`.
fn inverse_floor(theta: f64) -> f64 {
    let inv = 1.0 / theta;
    let fl = inv.floor();
    if inv - fl > 1.0 - 1e-9 {
        fl + 1.0
    } else {
        fl
    }
}

/// Exponent-scaling factor for jumps truncated at `theta/eps`:
///
/// ```text
///   phi(theta) = floor(1/theta) theta^alpha + (1 - floor(1/theta) theta)^alpha,
/// ```
///
/// with the convention `0^alpha = 0` when `1/theta` is an integer.
/// Equals 1 for `theta >= 1` (a single unconstrained jump suffices) and
/// `k^(1-alpha)` at `theta = 1/k`; nonincreasing in `theta`.
pub fn bounded_jump_exponent(theta: f64, alpha: f64) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(Error::Domain(format!("theta must be positive, got {theta}")));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    if theta.is_infinite() {
        return Ok(1.0);
    }
    let m = inverse_floor(theta);
    let rem = (1.0 - m * theta).max(0.0);
    let rem_term = if rem < 1e-12 { 0.0 } else { rem.powf(alpha) };
    Ok(m * theta.powf(alpha) + rem_term)
}

// ---------------------------------------------------------------------------
// Constrained minimization over jump configurations
// ---------------------------------------------------------------------------

/// Closed-form minimum of `sum_i x_i^alpha` over
/// `{ sum_i x_i = a, 0 <= x_i <= theta a, i = 1..k }`.
///
/// * `alpha <= 1` (concave): mass concentrates on the box boundary —
///   `floor(1/theta)` coordinates at the cap `theta a` plus one remainder;
///   for `theta >= 1` a single jump of size `a` is optimal, giving `a^alpha`.
/// * `alpha >= 1` (convex): the barycenter `x_i = a/k` is optimal.
///
/// Feasibility requires `k theta >= 1`; `theta` may be `f64::INFINITY` for
/// an unconstrained box.
pub fn simplex_min_closed(alpha: f64, a: f64, theta: f64, k: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("total mass must be positive, got {a}")));
    }
    if !(theta > 0.0) || k == 0 {
        return Err(Error::Domain(format!("need theta > 0 and k >= 1, got theta={theta}, k={k}")));
    }
    if theta.is_finite() && (k as f64) * theta < 1.0 - 1e-12 {
        return Err(Error::Infeasible(format!(
            "k = {k} jumps capped at theta a = {theta} a cannot sum to a"
        )));
    }
    if alpha <= 1.0 {
        if theta >= 1.0 {
            Ok(a.powf(alpha))
        } else {
            let m = inverse_floor(theta);
            let rem = (a - m * theta * a).max(0.0);
            let rem_term = if rem < 1e-12 * a { 0.0 } else { rem.powf(alpha) };
            Ok(m * (theta * a).powf(alpha) + rem_term)
        }
    } else {
        Ok(k as f64 * (a / k as f64).powf(alpha))
    }
}

/// Exhaustive minimum of an arbitrary objective `sum_i obj(x_i)` over the
/// discretized simplex `{ sum x_i = a, lo <= x_i <= hi }` with `grid_n`
/// levels, enumerating only sorted tuples.
///
/// The objective is evaluated once per grid level and the enumeration runs
/// over nondecreasing integer compositions, so `k = 5`, `grid_n = 400` stays
/// in the tens of millions of additions.
pub fn simplex_min_grid(
    objective: &dyn Fn(f64) -> f64,
    a: f64,
    lo: f64,
    hi: f64,
    k: usize,
    grid_n: usize,
) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("total mass must be positive, got {a}")));
    }
    if k == 0 || k > 5 {
        return Err(Error::Domain(format!("exhaustive search supports 1 <= k <= 5, got {k}")));
    }
    if grid_n < 50 {
        return Err(Error::Domain(format!("grid_n must be at least 50, got {grid_n}")));
    }
    if !(lo >= 0.0 && lo <= hi) {
        return Err(Error::Domain(format!("bad box [{lo}, {hi}]")));
    }
    let h = a / grid_n as f64;
    let lo_level = ((lo / h) - 1e-9).ceil().max(0.0) as usize;
    let cap_level = if hi >= a { grid_n } else { ((hi / h) + 1e-9).floor() as usize };
    if k * cap_level < grid_n || k * lo_level > grid_n {
        return Err(Error::Infeasible(format!(
            "no tuple of {k} levels in [{lo_level}, {cap_level}] sums to {grid_n}"
        )));
    }
    let values: Vec<f64> = (0..=cap_level).map(|j| objective(j as f64 * h)).collect();

    // Depth-first over nondecreasing tuples; `min_level` enforces sortedness,
    // the bounds prune branches that cannot reach the target sum.
    fn descend(
        values: &[f64],
        parts_left: usize,
        min_level: usize,
        remaining: usize,
        cap: usize,
        acc: f64,
        best: &mut f64,
    ) {
        if parts_left == 1 {
            if remaining >= min_level && remaining <= cap {
                let total = acc + values[remaining];
                if total < *best {
                    *best = total;
                }
            }
            return;
        }
        let upper = (remaining / parts_left).min(cap);
        let lower = min_level.max(remaining.saturating_sub((parts_left - 1) * cap));
        for level in lower..=upper {
            descend(values, parts_left - 1, level, remaining - level, cap, acc + values[level], best);
        }
    }

    let mut best = f64::INFINITY;
    descend(&values, k, lo_level, grid_n, cap_level, 0.0, &mut best);
    if best.is_infinite() {
        return Err(Error::Infeasible("discretized simplex is empty".into()));
    }
    Ok(best)
}

/// Exhaustive minimum over `{ sum x_i = a, 0 <= x_i <= theta a }`; the grid
/// counterpart of [`simplex_min_closed`] for arbitrary objectives.
pub fn simplex_min_brute(
    objective: &dyn Fn(f64) -> f64,
    a: f64,
    theta: f64,
    k: usize,
    grid_n: usize,
) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(Error::Domain(format!("theta must be positive, got {theta}")));
    }
    let hi = if theta.is_finite() { (theta * a).min(a) } else { a };
    simplex_min_grid(objective, a, 0.0, hi, k, grid_n)
}

// ---------------------------------------------------------------------------
// Rate predictions
// ---------------------------------------------------------------------------

/// Scaling regime of the expected exit time as `eps -> 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Power-law jump tail `u^-r`: polynomial growth `eps^-r / 2`.
    PowerTail,
    /// Exponentially light tail with index `alpha < 1`: single-jump exits,
    /// `ln E sigma ~ f(1/eps)`.
    SubExp,
    /// Index `alpha > 1`: multi-jump exits,
    /// `ln E sigma ~ d_alpha |ln eps| / (eps q_eps)`.
    SuperExp,
    /// Sub-exponential tail truncated at `theta/eps`: the single-jump
    /// exponent is scaled by `phi(theta)`.
    BoundedSubExp { theta: f64 },
    /// Pure Gaussian noise with the given barrier heights `U(-1)`, `U(1)`:
    /// `ln E sigma ~ 2 min(barriers) / eps^2`.
    Gaussian { barrier_left: f64, barrier_right: f64 },
}

/// Intermediate quantities behind a prediction, for reporting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ExponentDetail {
    /// `f(1/eps)` on the untruncated tail.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_tail_at_inv_eps: Option<f64>,
    /// Tail quantile `q_eps = sup { u : nu([u, oo)) >= eps }`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantile_at_eps: Option<f64>,
    /// `d_alpha`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub superexp_constant: Option<f64>,
    /// `phi(theta)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounded_exponent_factor: Option<f64>,
    /// `min(U(-1), U(1))` for the Gaussian regime.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub barrier_height: Option<f64>,
}

/// Predicted exit-law scaling at one `eps`.
///
/// `rate_constant` is the exponential rate of the limiting exit law
/// (`C_eps`, `D_eps`, `C_{eps,theta}`, ...); `log_mean_exit` is the
/// leading-order prediction for `ln E sigma`.  For the single-jump regimes
/// the two differ by the `ln 2` of the two-sided tail convention
/// (`-ln C = f(1/eps) - ln 2`); they agree exactly in the other regimes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatePrediction {
    pub regime: Regime,
    pub rate_constant: f64,
    pub log_mean_exit: f64,
    pub detail: ExponentDetail,
}

/// Computes the rate prediction for `spec` at noise amplitude `eps`.
///
/// Predictions concern the asymptotics of the *base* measure: a truncation
/// bound on `spec` is ignored here and enters only through the
/// `BoundedSubExp` regime's `theta`.  Regime/spec consistency is enforced
/// where the family makes it checkable (`SubExp` needs a tail index
/// `alpha < 1` when one exists, `SuperExp` needs `alpha > 1`, `PowerTail`
/// needs a power-law family); tabulated tails carry no index, so `SubExp`
/// and `BoundedSubExp` accept them at the caller's responsibility and
/// `SuperExp` (which needs `alpha` itself) rejects them.
pub fn predict_rate(spec: &TailSpec, eps: f64, regime: &Regime) -> Result<RatePrediction> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    let base = spec.clone().untruncated();
    let mut detail = ExponentDetail::default();
    let (rate_constant, log_mean_exit) = match regime {
        Regime::PowerTail => {
            let r = match base.form() {
                TailForm::PowerLaw { power } => *power,
                _ => {
                    return Err(Error::Config(
                        "power_tail regime needs a power_law jump measure".into(),
                    ))
                }
            };
            if eps >= 1.0 {
                return Err(Error::Domain(format!("power_tail regime needs eps < 1, got {eps}")));
            }
            // E sigma ~ eps^-r / 2
            (2.0 * eps.powf(r), -r * eps.ln() - 2.0f64.ln())
        }
        Regime::SubExp => {
            if let Some(alpha) = base.tail_index() {
                if alpha >= 1.0 {
                    return Err(Error::Config(format!(
                        "sub_exp regime needs tail index < 1, spec has {alpha}"
                    )));
                }
            } else if matches!(base.form(), TailForm::PowerLaw { .. }) {
                return Err(Error::Config("power-law tails belong to the power_tail regime".into()));
            }
            let inv = 1.0 / eps;
            if inv < base.support_edge() {
                return Err(Error::Domain(format!(
                    "eps = {eps} too large: 1/eps below the support edge"
                )));
            }
            let f = base.log_tail(inv)?;
            detail.log_tail_at_inv_eps = Some(f);
            (2.0 * (-f).exp(), f)
        }
        Regime::SuperExp => {
            let alpha = base.tail_index().ok_or_else(|| {
                Error::Config("super_exp regime needs a family with a tail index".into())
            })?;
            if alpha <= 1.0 {
                return Err(Error::Config(format!(
                    "super_exp regime needs tail index > 1, spec has {alpha}"
                )));
            }
            if eps >= 1.0 {
                return Err(Error::Domain(format!("super_exp regime needs eps < 1, got {eps}")));
            }
            let d = superexp_constant_closed(alpha)?;
            let q = base.quantile(eps)?;
            let exponent = d * (-eps.ln()) / (eps * q);
            detail.superexp_constant = Some(d);
            detail.quantile_at_eps = Some(q);
            ((-exponent).exp(), exponent)
        }
        Regime::BoundedSubExp { theta } => {
            let alpha = base.tail_index().ok_or_else(|| {
                Error::Config("bounded_sub_exp regime needs a family with a tail index".into())
            })?;
            if alpha >= 1.0 {
                return Err(Error::Config(format!(
                    "bounded_sub_exp regime needs tail index < 1, spec has {alpha}"
                )));
            }
            let inv = 1.0 / eps;
            if inv < base.support_edge() {
                return Err(Error::Domain(format!(
                    "eps = {eps} too large: 1/eps below the support edge"
                )));
            }
            let phi = bounded_jump_exponent(*theta, alpha)?;
            let f = base.log_tail(inv)?;
            detail.log_tail_at_inv_eps = Some(f);
            detail.bounded_exponent_factor = Some(phi);
            ((-phi * f).exp(), phi * f)
        }
        Regime::Gaussian { barrier_left, barrier_right } => {
            if !(*barrier_left > 0.0 && *barrier_right > 0.0) {
                return Err(Error::Domain("barrier heights must be positive".into()));
            }
            let well = barrier_left.min(*barrier_right);
            detail.barrier_height = Some(well);
            let log_mean = 2.0 * well / (eps * eps);
            ((-log_mean).exp(), log_mean)
        }
    };
    Ok(RatePrediction { regime: regime.clone(), rate_constant, log_mean_exit, detail })
}

// ---------------------------------------------------------------------------
// Short-horizon exit-law envelope
// ---------------------------------------------------------------------------

/// Converts a uniform short-horizon exit estimate into a two-sided envelope
/// on the exit-time law.
///
/// If from every starting point the exit probability within `horizon` is at
/// least `c * horizon` (and the restarted chain never exceeds it), then
///
/// ```text
///   (1 - c h) exp(t ln(1 - c h) / h)  <=  P(sigma > t)  <=  (1 - c h)^-1 exp(-c t).
/// ```
///
/// Requires `c * horizon < 1`; as `c * horizon -> 0` both sides pinch to
/// `exp(-c t)`.  Returns `(upper, lower)`.
pub fn short_time_envelope(c: f64, horizon: f64, t: f64) -> Result<(f64, f64)> {
    if !(c > 0.0 && horizon > 0.0) {
        return Err(Error::Domain(format!("need c > 0 and horizon > 0, got c={c}, horizon={horizon}")));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time must be nonnegative, got {t}")));
    }
    let ch = c * horizon;
    if ch >= 1.0 {
        return Err(Error::Domain(format!(
            "c * horizon = {ch} >= 1: the envelope is vacuous at this horizon"
        )));
    }
    let upper = ((-c * t).exp() / (1.0 - ch)).max(0.0);
    let lower = ((1.0 - ch) * (t * (1.0 - ch).ln() / horizon).exp()).max(0.0);
    Ok((upper, lower))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn superexp_constant_known_values() {
        assert_relative_eq!(superexp_constant_closed(2.0).unwrap(), 2.0, epsilon = 1e-14);
        assert_relative_eq!(
            superexp_constant_closed(1.5).unwrap(),
            1.8898815748423097,
            epsilon = 1e-12
        );
    }

    #[test]
    fn superexp_constant_variational_matches_closed_form() {
        for &alpha in &[1.1, 1.25, 1.5, 2.0, 2.5, 3.0, 5.0] {
            let closed = superexp_constant_closed(alpha).unwrap();
            let varia = superexp_constant_variational(alpha).unwrap();
            assert!((closed - varia).abs() < 1e-9, "alpha={alpha}: {closed} vs {varia}");
            assert!(closed > 1.0 && closed <= 2.0, "alpha={alpha}: {closed} outside (1, 2]");
        }
    }

    #[test]
    fn superexp_minimizer_location() {
        // at alpha = 3/2 the minimizer is (1/2)^(2/3)
        let y = superexp_minimizer(1.5).unwrap();
        assert_relative_eq!(y, 0.5f64.powf(2.0 / 3.0), epsilon = 1e-12);
        let obj = |y: f64| y.powf(-0.5) + y;
        let (y_num, _) = numerics::golden_section_min(obj, 1e-6, 1e6, 1e-12);
        assert_relative_eq!(y, y_num, epsilon = 1e-6);
    }

    #[test]
    fn superexp_constant_approaches_one_from_above() {
        // exact value at alpha = 1.001 is 1.00793...; the limit is 1
        let d = superexp_constant_closed(1.001).unwrap();
        assert!(d > 1.0 && d - 1.0 < 1e-2, "d = {d}");
        let v = superexp_constant_variational(1.001).unwrap();
        assert!((d - v).abs() < 1e-9);
    }

    #[test]
    fn superexp_constant_rejects_alpha_at_or_below_one() {
        assert!(superexp_constant_closed(1.0).is_err());
        assert!(superexp_constant_closed(0.5).is_err());
        assert!(superexp_constant_variational(1.0).is_err());
    }

    #[test]
    fn bounded_exponent_known_values() {
        // theta = 1/3, alpha = 1/2: 3 * (1/3)^(1/2) = sqrt(3)
        assert_relative_eq!(
            bounded_jump_exponent(1.0 / 3.0, 0.5).unwrap(),
            3.0f64.sqrt(),
            epsilon = 1e-12
        );
        // theta = 0.4, alpha = 1/2: 2 * 0.4^0.5 + 0.2^0.5
        assert_relative_eq!(
            bounded_jump_exponent(0.4, 0.5).unwrap(),
            2.0 * 0.4f64.sqrt() + 0.2f64.sqrt(),
            epsilon = 1e-12
        );
        // theta >= 1: one jump suffices
        assert_eq!(bounded_jump_exponent(1.0, 0.5).unwrap(), 1.0);
        assert_eq!(bounded_jump_exponent(2.5, 0.5).unwrap(), 1.0);
        assert_eq!(bounded_jump_exponent(f64::INFINITY, 0.5).unwrap(), 1.0);
    }

    #[test]
    fn bounded_exponent_at_reciprocal_integers() {
        for k in 1..=6u32 {
            for &alpha in &[0.3, 0.5, 0.8] {
                let phi = bounded_jump_exponent(1.0 / k as f64, alpha).unwrap();
                assert_relative_eq!(phi, (k as f64).powf(1.0 - alpha), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn bounded_exponent_nonincreasing_in_theta() {
        let alpha = 0.5;
        let mut last = f64::INFINITY;
        for i in 1..=200 {
            let theta = i as f64 * 0.01;
            let phi = bounded_jump_exponent(theta, alpha).unwrap();
            assert!(phi <= last + 1e-12, "phi increased at theta={theta}");
            last = phi;
        }
    }

    #[test]
    fn simplex_closed_known_values() {
        // unconstrained concave: one jump
        assert_relative_eq!(simplex_min_closed(0.5, 1.0, f64::INFINITY, 3).unwrap(), 1.0);
        // convex: equal split
        assert_relative_eq!(
            simplex_min_closed(2.0, 1.0, f64::INFINITY, 3).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-14
        );
        // concave with a binding box
        assert_relative_eq!(
            simplex_min_closed(0.5, 1.0, 0.3, 4).unwrap(),
            3.0 * 0.3f64.sqrt() + 0.1f64.sqrt(),
            epsilon = 1e-12
        );
        // alpha = 1 is flat: mass is mass
        assert_relative_eq!(simplex_min_closed(1.0, 2.0, 0.4, 3).unwrap(), 2.0, epsilon = 1e-12);
        assert_relative_eq!(simplex_min_closed(1.0, 2.0, f64::INFINITY, 3).unwrap(), 2.0);
    }

    #[test]
    fn simplex_closed_rejects_infeasible_boxes() {
        assert!(matches!(simplex_min_closed(2.0, 1.0, 0.3, 2), Err(Error::Infeasible(_))));
        assert!(matches!(simplex_min_closed(0.5, 1.0, 0.3, 3), Err(Error::Infeasible(_))));
        assert!(simplex_min_closed(0.5, 1.0, 0.3, 4).is_ok());
    }

    #[test]
    fn simplex_brute_matches_closed_on_small_cases() {
        let cases = [(0.5, 0.5, 2), (0.5, 1.0, 3), (2.0, 0.5, 2), (2.0, f64::INFINITY, 3)];
        for &(alpha, theta, k) in &cases {
            let obj = move |x: f64| x.powf(alpha);
            let closed = simplex_min_closed(alpha, 1.0, theta, k).unwrap();
            let brute = simplex_min_brute(&obj, 1.0, theta, k, 200).unwrap();
            assert!(
                (closed - brute).abs() < 0.02,
                "alpha={alpha} theta={theta} k={k}: closed={closed} brute={brute}"
            );
        }
    }

    #[test]
    fn simplex_brute_single_part_returns_objective_at_total() {
        let obj = |x: f64| x * x;
        assert_relative_eq!(simplex_min_brute(&obj, 3.0, 1.0, 1, 100).unwrap(), 9.0);
        // k = 1 with theta < 1 cannot reach the total
        assert!(simplex_min_brute(&obj, 3.0, 0.5, 1, 100).is_err());
    }

    #[test]
    fn simplex_brute_validates_inputs() {
        let obj = |x: f64| x;
        assert!(simplex_min_brute(&obj, 1.0, 1.0, 6, 100).is_err());
        assert!(simplex_min_brute(&obj, 1.0, 1.0, 2, 10).is_err());
        assert!(simplex_min_brute(&obj, -1.0, 1.0, 2, 100).is_err());
    }

    // -- predictions ---------------------------------------------------------

    #[test]
    fn subexp_prediction_values() {
        let spec = TailSpec::exp_power(0.5).unwrap();
        let p = predict_rate(&spec, 0.25, &Regime::SubExp).unwrap();
        // f(4) = 2: rate 2 e^-2, log-mean f(1/eps)
        assert_relative_eq!(p.rate_constant, 0.2706705664732254, epsilon = 1e-9);
        assert_relative_eq!(p.log_mean_exit, 2.0, epsilon = 1e-12);
        assert_relative_eq!(
            p.log_mean_exit,
            -(p.rate_constant.ln()) + 2.0f64.ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn superexp_prediction_matches_analytic_exponent() {
        let spec = TailSpec::exp_power(2.0).unwrap();
        let p = predict_rate(&spec, 0.25, &Regime::SuperExp).unwrap();
        // for f(u) = u^alpha the quantile is |ln eps|^(1/alpha), so the
        // exponent collapses to d_alpha eps^-1 |ln eps|^(1 - 1/alpha)
        let lneps: f64 = 4.0f64.ln();
        let direct = 2.0 * lneps.sqrt() / 0.25;
        assert_relative_eq!(p.log_mean_exit, direct, epsilon = 1e-9);
        assert_relative_eq!(p.log_mean_exit, 9.419280180328, epsilon = 1e-6);
        assert_relative_eq!(p.detail.quantile_at_eps.unwrap(), lneps.sqrt(), epsilon = 1e-8);
        assert_relative_eq!(p.rate_constant, (-p.log_mean_exit).exp(), epsilon = 1e-12);
    }

    #[test]
    fn bounded_prediction_scales_single_jump_exponent() {
        let spec = TailSpec::exp_power(0.5).unwrap();
        let p = predict_rate(&spec, 0.04, &Regime::BoundedSubExp { theta: 0.5 }).unwrap();
        // f(25) = 5, phi(1/2) = sqrt(2)
        assert_relative_eq!(p.log_mean_exit, 2.0f64.sqrt() * 5.0, epsilon = 1e-9);
        // truncation on the spec itself must not change the prediction
        let trunc = TailSpec::exp_power(0.5).unwrap().truncated(0.5 / 0.04).unwrap();
        let p2 = predict_rate(&trunc, 0.04, &Regime::BoundedSubExp { theta: 0.5 }).unwrap();
        assert_relative_eq!(p.log_mean_exit, p2.log_mean_exit, epsilon = 1e-12);
    }

    #[test]
    fn power_tail_and_gaussian_predictions() {
        let spec = TailSpec::power_law(2.0, 1.0).unwrap();
        let p = predict_rate(&spec, 0.1, &Regime::PowerTail).unwrap();
        assert_relative_eq!(p.log_mean_exit, (100.0f64 / 2.0).ln(), epsilon = 1e-12);
        assert_relative_eq!(p.rate_constant, 0.02, epsilon = 1e-12);

        let g = Regime::Gaussian { barrier_left: 0.5, barrier_right: 0.7 };
        let spec = TailSpec::exp_power(0.5).unwrap();
        let p = predict_rate(&spec, 0.1, &g).unwrap();
        assert_relative_eq!(p.log_mean_exit, 2.0 * 0.5 / 0.01, epsilon = 1e-12);
    }

    #[test]
    fn prediction_rejects_regime_spec_mismatches() {
        let sub = TailSpec::exp_power(0.5).unwrap();
        let sup = TailSpec::exp_power(2.0).unwrap();
        let pl = TailSpec::power_law(2.0, 1.0).unwrap();
        let table = TailSpec::table_tail(vec![(1.0, 0.5), (2.0, 0.1)]).unwrap();
        assert!(predict_rate(&sub, 0.1, &Regime::SuperExp).is_err());
        assert!(predict_rate(&sup, 0.1, &Regime::SubExp).is_err());
        assert!(predict_rate(&pl, 0.1, &Regime::SubExp).is_err());
        assert!(predict_rate(&sub, 0.1, &Regime::PowerTail).is_err());
        assert!(predict_rate(&table, 0.1, &Regime::SuperExp).is_err());
        // tables carry no index: single-jump regimes accept them
        assert!(predict_rate(&table, 0.4, &Regime::SubExp).is_ok());
        // eps too large for the support edge
        assert!(predict_rate(&sub, 1.5, &Regime::SubExp).is_err());
        assert!(predict_rate(&sub, -0.1, &Regime::SubExp).is_err());
    }

    // -- envelope -------------------------------------------------------------

    #[test]
    fn envelope_values_and_ordering() {
        let (upper, lower) = short_time_envelope(0.1, 1.0, 10.0).unwrap();
        assert_relative_eq!(upper, (-1.0f64).exp() / 0.9, epsilon = 1e-12);
        assert!(lower > 0.0 && lower <= upper);
        // at t = 0 the envelope brackets 1
        let (u0, l0) = short_time_envelope(0.1, 1.0, 0.0).unwrap();
        assert!(l0 <= 1.0 && 1.0 <= u0);
    }

    #[test]
    fn envelope_pinches_to_exponential() {
        // c * horizon = 1e-4, c t = 1: both sides within 1% of e^-1
        let c = 1e-4;
        let t = 1.0 / c;
        let (upper, lower) = short_time_envelope(c, 1.0, t).unwrap();
        let target = (-1.0f64).exp();
        assert!((upper / target - 1.0).abs() < 0.01, "upper {upper}");
        assert!((lower / target - 1.0).abs() < 0.01, "lower {lower}");
    }

    #[test]
    fn envelope_rejects_vacuous_horizon() {
        assert!(short_time_envelope(1.0, 1.0, 5.0).is_err());
        assert!(short_time_envelope(2.0, 0.6, 5.0).is_err());
        assert!(short_time_envelope(-1.0, 0.5, 5.0).is_err());
    }

    #[test]
    fn regime_serde_round_trip() {
        let regimes = vec![
            Regime::SubExp,
            Regime::SuperExp,
            Regime::PowerTail,
            Regime::BoundedSubExp { theta: 0.5 },
            Regime::Gaussian { barrier_left: 0.5, barrier_right: 0.5 },
        ];
        for r in regimes {
            let js = serde_json::to_string(&r).unwrap();
            let back: Regime = serde_json::from_str(&js).unwrap();
            assert_eq!(r, back);
        }
        assert_eq!(serde_json::to_string(&Regime::SubExp).unwrap(), r#""sub_exp""#);
    }
}

//! Splitting the driving noise at a jump-size cutoff.
//!
//! For a cutoff `g` the driving process splits into independent parts
//! `L = xi + eta`: `xi` collects the Gaussian part, the drift, and every
//! jump of magnitude below `g`; `eta` is a compound Poisson process of the
//! jumps with magnitude at least `g`, with rate `beta = nu([-g, g]^c)` and
//! i.i.d. sizes from the conditional law beyond the cutoff.  Exit happens —
//! in the light-tail regimes studied here — essentially at the large-jump
//! epochs, so `eta`'s event skeleton is the backbone of both the exact
//! simulation and the probability bounds.
//!
//! Two evaluable bounds accompany the decomposition:
//!
//! * [`small_sup_bound`] controls the running supremum of the small-jump
//!   part over a short horizon,
//! * [`big_sum_bound`] controls the probability that `k` large-jump
//!   magnitudes sum past a target, the combinatorial step behind the
//!   bounded-jump (many-jump) exit rates.

use crate::asymptotics;
use crate::error::{Error, Result};
use crate::measures::{LevyTriplet, TailSpec};
use rand::Rng;
use rand_distr::{Distribution, Exp};
use std::io;

/// One large jump: epoch and signed size (noise amplitude not applied).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpEvent {
    pub time: f64,
    pub size: f64,
}

/// The large-jump skeleton of one path over `[0, horizon]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEvents {
    pub horizon: f64,
    pub events: Vec<JumpEvent>,
}

impl PathEvents {
    pub fn count(&self) -> usize {
        self.events.len()
    }

    /// Header matching [`PathEvents::write_csv_rows`].
    pub fn csv_header() -> &'static str {
        "path_id,time,size"
    }

    /// Appends one `path_id,time,size` row per event.
    pub fn write_csv_rows<W: io::Write>(&self, path_id: u64, out: &mut W) -> io::Result<()> {
        for ev in &self.events {
            writeln!(out, "{},{},{}", path_id, ev.time, ev.size)?;
        }
        Ok(())
    }
}

/// The two halves of a driving process split at `cutoff`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    cutoff: f64,
    small: LevyTriplet,
    large_rate: f64,
    source: TailSpec,
}

/// Splits `triplet` at jump magnitude `g`.
///
/// The small part keeps the Gaussian variance and drift and the jump
/// measure restricted to `[-g, g]`; the large part is compound Poisson with
/// rate `nu([-g, g]^c)`.  Requires `g` at or above the support edge of the
/// jump measure.
pub fn decompose(triplet: &LevyTriplet, g: f64) -> Result<Decomposition> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(Error::Domain(format!("cutoff must be positive and finite, got {g}")));
    }
    if g < triplet.nu.support_edge() {
        return Err(Error::Domain(format!(
            "cutoff {g} below the support edge {} of the jump measure",
            triplet.nu.support_edge()
        )));
    }
    let small_nu = triplet.nu.clone().truncated(g)?;
    let small = LevyTriplet::new(triplet.d, small_nu, triplet.mu)?;
    let large_rate = triplet.nu.mass_above(g)?;
    Ok(Decomposition { cutoff: g, small, large_rate, source: triplet.nu.clone() })
}

impl Decomposition {
    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Triplet of the small part: original `d` and `mu`, jumps restricted
    /// to `[-cutoff, cutoff]`.
    pub fn small(&self) -> &LevyTriplet {
        &self.small
    }

    /// Arrival rate `beta` of jumps with magnitude at least the cutoff.
    pub fn large_rate(&self) -> f64 {
        self.large_rate
    }

    /// One signed jump from the conditional law beyond the cutoff.
    pub fn sample_jump<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        if self.large_rate == 0.0 {
            return Err(Error::Domain("jump measure carries no mass beyond the cutoff".into()));
        }
        self.source.sample_large_jump(self.cutoff, rng)
    }

    /// Samples the large-jump skeleton on `[0, horizon]`: exponential
    /// interarrivals with mean `1/beta`, i.i.d. conditional sizes.
    ///
    /// Stream layout (fixed for reproducibility): each event consumes one
    /// exponential gap, then one sign draw, then the magnitude draws.
    pub fn sample_large_path<R: Rng + ?Sized>(
        &self,
        horizon: f64,
        rng: &mut R,
    ) -> Result<PathEvents> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::Domain(format!("horizon must be positive, got {horizon}")));
        }
        let mut events = Vec::new();
        if self.large_rate > 0.0 {
            let gap = Exp::new(self.large_rate)
                .map_err(|e| Error::Parameter(format!("bad arrival rate: {e}")))?;
            let mut t = 0.0;
            loop {
                t += gap.sample(rng);
                if t > horizon {
                    break;
                }
                let size = self.sample_jump(rng)?;
                events.push(JumpEvent { time: t, size });
            }
        }
        Ok(PathEvents { horizon, events })
    }
}

/// Tail bound for the running supremum of the small-jump part: for a
/// process with jumps capped at `g` and cumulated activity seen over
/// `[0, horizon]`,
///
/// ```text
///   P( sup_{t <= horizon} |xi_t| > f_level )
///       <= exp( -(1 - delta) (f_level / g) ln(f_level / (g horizon)) ).
/// ```
///
/// Requires `g >= 1`, `f_level >= g` and `f_level > g * horizon` (otherwise
/// the logarithm is nonpositive and the bound vacuous).  `delta = 0` gives
/// the sharpest printed form; the bound's applicability regime (cutoffs
/// large relative to the horizon) is the caller's responsibility — see the
/// Monte Carlo validation, which gates on `f_level / (g * horizon) >= 20`.
pub fn small_sup_bound(g: f64, f_level: f64, horizon: f64, delta: f64) -> Result<f64> {
    if !(g >= 1.0 && g.is_finite()) {
        return Err(Error::Domain(format!("cutoff must be >= 1, got {g}")));
    }
    if !(f_level >= g) {
        return Err(Error::Domain(format!(
            "threshold {f_level} must be at least the cutoff {g}"
        )));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::Domain(format!("horizon must be positive, got {horizon}")));
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::Domain(format!("delta must lie in [0, 1), got {delta}")));
    }
    let ratio = f_level / (g * horizon);
    if ratio <= 1.0 {
        return Err(Error::Domain(format!(
            "threshold/(cutoff*horizon) = {ratio} <= 1: the bound is vacuous here"
        )));
    }
    Ok((-(1.0 - delta) * (f_level / g) * ratio.ln()).exp())
}

/// Bound on the probability that `k` i.i.d. large-jump magnitudes (each at
/// least `g`, law conditional on exceeding `g`) sum past `r`:
///
/// ```text
///   (2/beta)^k (2 + ln(r/g)/ln(1+delta))^k
///       * exp( -inf{ sum_i f(x_i) : sum_i x_i = (1-delta) r, x_i in [g, r] } )
/// ```
///
/// with `beta` the two-sided mass beyond `g` and `f` the log-tail (clamped
/// at `g`, which the box makes immaterial).  The infimum is evaluated by the
/// exhaustive grid minimizer, so `k <= 5`.  The value is a bound, not a
/// probability — it may exceed 1 when loose.
pub fn big_sum_bound(spec: &TailSpec, k: usize, r: f64, g: f64, delta: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("need at least one jump".into()));
    }
    if !(g > 0.0 && g >= spec.support_edge()) {
        return Err(Error::Domain(format!(
            "cutoff {g} must be positive and at least the support edge {}",
            spec.support_edge()
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    if !(r > k as f64 * g) {
        return Err(Error::Domain(format!("target {r} must exceed k*g = {}", k as f64 * g)));
    }
    let a = (1.0 - delta) * r;
    if !(a > k as f64 * g) {
        return Err(Error::Domain(format!(
            "(1-delta)*r = {a} must exceed k*g = {}; pick a smaller delta",
            k as f64 * g
        )));
    }
    let beta = spec.mass_above(g)?;
    if beta == 0.0 {
        return Err(Error::Domain("jump measure carries no mass beyond the cutoff".into()));
    }
    let objective = |x: f64| spec.log_tail(x.max(g)).unwrap_or(f64::INFINITY);
    let exponent = asymptotics::simplex_min_grid(&objective, a, g, r, k, 400)?;
    let per_jump = 2.0 / beta * (2.0 + (r / g).ln() / (1.0 + delta).ln());
    Ok(per_jump.powi(k as i32) * (-exponent).exp())
}

//! First exit times of one-dimensional jump diffusions under small noise.
//!
//! The library studies the solution of
//!
//! ```text
//!     dX_t = -U'(X_t) dt + eps dL_t,        X_0 = x in (-1, 1),
//! ```
//!
//! where `U` is a potential well with its minimum at the origin and `L` is a
//! symmetric pure-jump (plus optional Brownian) noise whose jump tail
//! `nu([u, oo)) = exp(-f(u))` is exponentially light.  The quantity of
//! interest is the first time `|X|` reaches 1 and how its law scales as
//! `eps -> 0`.
//!
//! Crate layout:
//!
//! * [`measures`] — jump-tail specifications, tail/quantile evaluation,
//!   conditional sampling of large jumps, truncation.
//! * [`processes`] — splitting the noise at a cutoff into small-jump and
//!   large-jump components, path-event sampling, and analytic tail bounds for
//!   each component.
//! * [`dynamics`] — potentials, the deterministic flow, and two exit-time
//!   simulators (an exact event-driven one and a jump-adapted Euler scheme).
//! * [`asymptotics`] — closed-form exit-rate predictions for the four scaling
//!   regimes, the variational constant behind the super-exponential regime,
//!   and constrained minimization over jump-size configurations.
//! * [`experiments`] — reproducible parallel sweeps over `eps` grids,
//!   estimation, goodness of fit, and survival-bound checks.
//! * [`verify`] — Monte Carlo validity suites for the analytic bounds.

pub mod asymptotics;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod measures;
pub mod numerics;
pub mod processes;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};

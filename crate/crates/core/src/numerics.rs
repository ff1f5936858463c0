//! Small numerical toolbox: root bracketing/bisection, golden-section
//! minimization, adaptive Simpson quadrature, and the seed-derivation scheme
//! used for reproducible parallel Monte Carlo.

use crate::error::{Error, Result};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Solves `f(x) = target` for a nondecreasing `f` on `[lo, hi]` by bisection.
///
/// Requires `f(lo) <= target` and `f(hi) >= target` (infinite `f(hi)` is
/// fine).  Terminates when the bracket is narrower than `tol` and returns the
/// bracket midpoint.
pub fn bisect_nondecreasing(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    target: f64,
    tol: f64,
) -> Result<f64> {
    if !(lo <= hi) {
        return Err(Error::Numerical(format!("bad bisection bracket [{lo}, {hi}]")));
    }
    if f(lo) > target {
        return Err(Error::Numerical(format!(
            "bisection bracket does not contain target: f({lo}) > {target}"
        )));
    }
    // 200 halvings take any finite bracket below any positive tolerance.
    for _ in 0..200 {
        if hi - lo < tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Doubles `hi` from `start` until `f(hi) >= target`, then bisects.
///
/// For unbounded nondecreasing `f`; `max_doublings` caps the bracket search.
pub fn solve_nondecreasing_unbounded(
    f: impl Fn(f64) -> f64,
    start: f64,
    target: f64,
    tol: f64,
) -> Result<f64> {
    let mut hi = if start > 0.0 { start * 2.0 } else { 1.0 };
    let mut doublings = 0;
    while f(hi) < target {
        hi *= 2.0;
        doublings += 1;
        if doublings > 1100 {
            return Err(Error::Numerical(format!(
                "no upper bracket found solving for target {target}"
            )));
        }
    }
    bisect_nondecreasing(f, start, hi, target, tol)
}

/// Minimizes a unimodal `f` on `[lo, hi]` by golden-section search.
///
/// Stops once the bracket is narrower than `tol`; returns `(argmin, min)`.
pub fn golden_section_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    // The bracket shrinks by the golden ratio each step; 400 iterations is
    // far beyond what any (lo, hi, tol) used in this crate needs.
    for _ in 0..400 {
        if b - a < tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to relative tolerance
/// `rel_tol`.
///
/// A first whole-interval pass sets the absolute error budget as
/// `rel_tol * |estimate|`; the usual 1/15 Richardson criterion then drives
/// recursive refinement.  Intended for smooth integrands (every integrand in
/// this crate is a tail function or a tempered density, both C^1 away from
/// zero).
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    let whole = simpson(f, a, b);
    let budget = (whole.abs() * rel_tol).max(1e-300);
    adaptive(f, a, b, budget, whole, 50)
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let m = 0.5 * (a + b);
    (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
}

fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, budget: f64, whole: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let left = simpson(f, a, m);
    let right = simpson(f, m, b);
    let refined = left + right;
    if depth == 0 || (refined - whole).abs() <= 15.0 * budget {
        return refined + (refined - whole) / 15.0;
    }
    adaptive(f, a, m, budget / 2.0, left, depth - 1)
        + adaptive(f, m, b, budget / 2.0, right, depth - 1)
}

/// Integrates `f` on `[a, b]` splitting geometrically first.
///
/// Tail integrands can span many orders of magnitude over `[a, b]`; slicing
/// into octaves before handing each slice to the adaptive routine keeps the
/// per-slice dynamic range small.  Slices whose contribution is negligible
/// relative to the running sum are still computed (there are only
/// `log2(b/a)` of them), so no tail mass is dropped.
pub fn integrate_geometric(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    if a <= 0.0 {
        return integrate(f, a, b, rel_tol);
    }
    let mut total = 0.0;
    let mut lo = a;
    while lo < b {
        let hi = (lo * 2.0).min(b);
        total += integrate(f, lo, hi, rel_tol);
        lo = hi;
    }
    total
}

// ---------------------------------------------------------------------------
// Deterministic stream seeding
// ---------------------------------------------------------------------------

/// One round of the SplitMix64 generator (Steele, Lea, Flood 2014).
///
/// Used only for key derivation, never as the simulation generator.
#[inline]
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a 256-bit ChaCha key for the stream `(master, lane, index)`.
///
/// The scheme is fixed and documented so results are reproducible across
/// machines, thread counts and future versions:
///
/// 1. seed the SplitMix64 state with `master`;
/// 2. absorb `lane` and then `index`, each by XORing the word multiplied by
///    an odd constant and advancing the state once;
/// 3. the next four SplitMix64 outputs, little-endian, form the key.
///
/// `lane` distinguishes grid points of a sweep, `index` the path within a
/// grid point.  Streams for different `(master, lane, index)` triples are
/// independent for every practical purpose, which is what makes the parallel
/// sweeps order-independent and byte-reproducible.
pub fn stream_seed(master: u64, lane: u64, index: u64) -> [u8; 32] {
    let mut state = master;
    let _ = splitmix64(&mut state);
    state ^= lane.wrapping_mul(0xA24B_AED4_963E_E407);
    let _ = splitmix64(&mut state);
    state ^= index.wrapping_mul(0x9FB2_1C65_1E98_DF25);
    let _ = splitmix64(&mut state);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    key
}

/// The simulation generator for one stream.
pub fn stream_rng(master: u64, lane: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(stream_seed(master, lane, index))
}

/// A single 64-bit seed derived by the same absorption schedule as
/// [`stream_seed`], for records that carry their per-path seed.
pub fn derive_seed(master: u64, lane: u64, index: u64) -> u64 {
    let mut state = master;
    let _ = splitmix64(&mut state);
    state ^= lane.wrapping_mul(0xA24B_AED4_963E_E407);
    let _ = splitmix64(&mut state);
    state ^= index.wrapping_mul(0x9FB2_1C65_1E98_DF25);
    let _ = splitmix64(&mut state);
    splitmix64(&mut state)
}

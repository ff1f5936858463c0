//! Goodness-of-fit statistics used by the exit-time diagnostics: a
//! Kolmogorov–Smirnov distance against the unit exponential law and a
//! chi-square test of event counts against a Poisson law.

use crate::error::{Error, Result};
use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, Poisson};

/// Kolmogorov–Smirnov sup-distance between the empirical law of `samples`
/// and Exp(1).
///
/// The samples must already be normalized (exit times divided by their mean
/// or by a predicted scale); this function does not rescale.  A point mass
/// at 1 scores `1 - e^{-1} ≈ 0.632`.
pub fn ks_statistic_exp1(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Estimation("KS statistic needs at least one sample".into()));
    }
    let mut sorted = samples.to_vec();
    for &x in &sorted {
        if !(x >= 0.0 && x.is_finite()) {
            return Err(Error::Estimation(format!("KS sample must be finite and >= 0, got {x}")));
        }
    }
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let cdf = 1.0 - (-x).exp();
        let above = (i as f64 + 1.0) / n - cdf;
        let below = cdf - i as f64 / n;
        d = d.max(above).max(below);
    }
    Ok(d)
}

/// Chi-square goodness-of-fit p-value for i.i.d. counts against
/// Poisson(`lambda`).
///
/// Adjacent count bins are pooled left to right until each carries an
/// expected mass of at least five observations (the usual validity rule);
/// the degrees of freedom are `bins - 1` since `lambda` is prescribed, not
/// estimated.
pub fn chi_square_poisson_gof(counts: &[u64], lambda: f64) -> Result<f64> {
    if counts.len() < 50 {
        return Err(Error::Estimation(format!(
            "need at least 50 observations for a stable chi-square test, got {}",
            counts.len()
        )));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Parameter(format!("Poisson mean must be positive, got {lambda}")));
    }
    let n = counts.len() as f64;
    let max_count = *counts.iter().max().unwrap();
    // Cover the observed range plus enough of the upper tail that the final
    // pooled bin's mass is honest.
    let k_hi = max_count.max((lambda + 12.0 * lambda.sqrt() + 20.0).ceil() as u64);
    let pois = Poisson::new(lambda).map_err(|e| Error::Parameter(e.to_string()))?;

    let mut observed_by_k = vec![0u64; (k_hi + 1) as usize];
    for &c in counts {
        observed_by_k[c as usize] += 1;
    }
    let mut expected_by_k: Vec<f64> = (0..=k_hi).map(|k| n * pois.pmf(k)).collect();
    // Fold the un-enumerated upper tail into the last cell.
    let covered: f64 = (0..=k_hi).map(|k| pois.pmf(k)).sum();
    *expected_by_k.last_mut().unwrap() += n * (1.0 - covered).max(0.0);

    // Pool adjacent cells until each pooled bin expects >= 5 observations.
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut acc_exp = 0.0;
    let mut acc_obs = 0.0;
    for k in 0..=k_hi as usize {
        acc_exp += expected_by_k[k];
        acc_obs += observed_by_k[k] as f64;
        if acc_exp >= 5.0 {
            bins.push((acc_obs, acc_exp));
            acc_exp = 0.0;
            acc_obs = 0.0;
        }
    }
    if acc_exp > 0.0 || acc_obs > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += acc_obs;
                last.1 += acc_exp;
            }
            None => bins.push((acc_obs, acc_exp)),
        }
    }
    if bins.len() < 2 {
        return Err(Error::Estimation(
            "count distribution too concentrated for a chi-square test".into(),
        ));
    }
    let stat: f64 = bins.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let dof = (bins.len() - 1) as f64;
    let chi = ChiSquared::new(dof).map_err(|e| Error::Numerical(e.to_string()))?;
    Ok(1.0 - chi.cdf(stat))
}

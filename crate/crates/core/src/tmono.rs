//! `t`-monotone densities: laws of `𝔟_t · Y` with `𝔟_t ~ Beta(1, t)`
//! independent of `Y`.

use serde::{Deserialize, Serialize};

use crate::check::{CheckResult, Tally};
use crate::dist::{density_raw, log_center, mellin_domain, survival_raw, DistributionSpec};
use crate::error::{Error, Result};
use crate::mellin::{
    check_log_convexity, mellin, mellin_distance, LogMellinProfile, MellinValue,
};
use crate::quad::Tolerance;
use crate::special::ln_mellin_beta_t;

/// Highest difference order handled by [`check_k_monotone`].
pub const MAX_MONOTONE_ORDER: usize = 6;
/// Intervals in the default difference grid.
pub const GRID_INTERVALS: usize = 256;
pub const DEFAULT_MONOTONE_TOL: f64 = 1e-7;

/// Law of `𝔟_t · Y`.
pub fn beta_mix(y_spec: &DistributionSpec, t: f64) -> Result<DistributionSpec> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("mixing order must be positive, got {t}")));
    }
    y_spec.validate()?;
    Ok(DistributionSpec::product(DistributionSpec::beta_t(t), y_spec.clone()))
}

/// Uniform grid of `GRID_INTERVALS + 1` points over `[0, R]`, where `R` is
/// `1.25 ×` the right end of a bounded support, or the point where the
/// survival function drops to `1e-6`. If the density blows up at the
/// origin the grid starts half a step inside.
pub fn default_monotone_grid(spec: &DistributionSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let tol = Tolerance::default();
    let (_, hi) = spec.support();
    let right = if hi.is_finite() {
        1.25 * hi
    } else {
        let mut x = log_center(spec, 0.0).clamp(-700.0, 700.0).exp().max(1e-300);
        let mut found = None;
        for _ in 0..2000 {
            if survival_raw(spec, x, &tol)? <= 1e-6 {
                found = Some(x);
                break;
            }
            x *= 1.25;
        }
        found.ok_or_else(|| Error::InvalidArgument(format!("{spec}: survival never reaches 1e-6")))?
    };
    let h = right / GRID_INTERVALS as f64;
    let start = if density_raw(spec, 0.0, &tol).map_or(true, |f| !f.is_finite()) {
        0.5 * h
    } else {
        0.0
    };
    Ok((0..=GRID_INTERVALS).map(|i| start + i as f64 * h).collect())
}

/// Density-based `k`-monotonicity certificate: `(−1)^j Δ^j f ≥ −tol·max|f|`
/// for `j = 0..=k`, where `Δ^j` is the `j`-th divided difference rescaled to
/// the size of a forward difference. Equivalent to requiring that the
/// `(k−2)`-th difference be nonincreasing and convex.
pub fn check_k_monotone(
    spec: &DistributionSpec,
    k: usize,
    grid: &[f64],
    tol: f64,
) -> Result<CheckResult> {
    spec.validate()?;
    let qtol = Tolerance::default();
    let fs: Vec<f64> = {
        use rayon::prelude::*;
        grid.par_iter()
            .map(|&x| {
                let f = density_raw(spec, x, &qtol)?;
                if f.is_finite() {
                    Ok(f)
                } else {
                    Err(Error::DensityUnavailable(format!("{spec} is unbounded at {x}")))
                }
            })
            .collect::<Result<_>>()?
    };
    check_k_monotone_values(grid, &fs, k, tol)
}

/// [`check_k_monotone`] on tabulated density values, e.g. read from a
/// two-column CSV.
pub fn check_k_monotone_values(xs: &[f64], fs: &[f64], k: usize, tol: f64) -> Result<CheckResult> {
    if k == 0 || k > MAX_MONOTONE_ORDER {
        return Err(Error::InvalidArgument(format!(
            "monotonicity order must be in 1..={MAX_MONOTONE_ORDER}, got {k}"
        )));
    }
    if xs.len() != fs.len() || xs.len() < k + 1 {
        return Err(Error::InvalidArgument(format!(
            "need at least {} matching grid points, got {} x and {} f",
            k + 1,
            xs.len(),
            fs.len()
        )));
    }
    if xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("grid must be strictly increasing".into()));
    }
    let scale = fs.iter().fold(0.0f64, |m, f| m.max(f.abs()));
    let mut tally = Tally::new(format!("{k}-monotone density"), tol);
    // divided differences, level by level
    let mut dd = fs.to_vec();
    let mut factorial = 1.0;
    for j in 0..=k {
        if j > 0 {
            factorial *= j as f64;
            dd = (0..dd.len() - 1)
                .map(|i| (dd[i + 1] - dd[i]) / (xs[i + j] - xs[i]))
                .collect();
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        for (i, d) in dd.iter().enumerate() {
            let step = if j == 0 { 1.0 } else { (xs[i + j] - xs[i]) / j as f64 };
            let forward = d * factorial * step.powi(j as i32);
            let excess = -(sign * forward) / scale.max(f64::MIN_POSITIVE);
            tally.observe(excess, || format!("order {j} at x = {}", xs[i]));
        }
    }
    Ok(tally.finish())
}

/// `𝔟_t · Y ≐ 𝔟_s · (Beta(1+s, t−s) · Y)` in Mellin distance; `s = t`
/// makes the middle factor the point mass at 1.
pub fn check_downward_closure(
    y_spec: &DistributionSpec,
    t: f64,
    s: f64,
    lambdas: &[f64],
    tol: f64,
) -> Result<CheckResult> {
    if !(s > 0.0 && s <= t && t.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "downward closure needs 0 < s <= t, got s = {s}, t = {t}"
        )));
    }
    let lhs = beta_mix(y_spec, t)?;
    let middle = if s == t {
        DistributionSpec::point_mass(1.0)
    } else {
        DistributionSpec::beta(1.0 + s, t - s)
    };
    let rhs = beta_mix(&DistributionSpec::product(middle, y_spec.clone()), s)?;
    let d = mellin_distance(&lhs, &rhs, lambdas)?;
    let mut tally = Tally::new("downward closure", tol);
    tally.observe(d, || format!("s = {s}, t = {t}"));
    Ok(tally.finish())
}

/// `sup_x |(1 − x/t)₊^t − e^{−x}|` on `x_grid` for each `t`.
pub fn cm_limit_sups(t_list: &[f64], x_grid: &[f64]) -> Result<Vec<f64>> {
    if t_list.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::InvalidArgument("t values must be positive".into()));
    }
    if x_grid.iter().any(|x| !(*x >= 0.0)) {
        return Err(Error::InvalidArgument("x values must be nonnegative".into()));
    }
    Ok(t_list
        .iter()
        .map(|&t| {
            x_grid
                .iter()
                .map(|&x| (truncated_power(x, t) - (-x).exp()).abs())
                .fold(0.0, f64::max)
        })
        .collect())
}

fn truncated_power(x: f64, t: f64) -> f64 {
    if x >= t {
        0.0
    } else {
        (t * (-x / t).ln_1p()).exp()
    }
}

/// Passes iff the sups from [`cm_limit_sups`] strictly decrease along the
/// increasing `t_list` and the last one is below `e / (2 t_max)`.
pub fn check_cm_limit(t_list: &[f64], x_grid: &[f64]) -> Result<CheckResult> {
    if t_list.is_empty() || t_list.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("t list must be nonempty and increasing".into()));
    }
    let sups = cm_limit_sups(t_list, x_grid)?;
    let mut tally = Tally::new("completely monotone limit", 0.0);
    for i in 1..sups.len() {
        // strict decrease: sup_i − sup_{i−1} must be negative
        let diff = sups[i] - sups[i - 1];
        tally.observe(if diff < 0.0 { diff } else { diff.max(f64::MIN_POSITIVE) }, || {
            format!("t = {}", t_list[i])
        });
    }
    let t_max = *t_list.last().unwrap();
    let bound = std::f64::consts::E / (2.0 * t_max);
    let last = *sups.last().unwrap();
    tally.observe(if last < bound { last - bound } else { (last - bound).max(f64::MIN_POSITIVE) }, || {
        format!("bound at t = {t_max}")
    });
    let mut result = tally.finish();
    let listed: Vec<String> = t_list
        .iter()
        .zip(&sups)
        .map(|(t, s)| format!("t={t}: {s:.4e}"))
        .collect();
    result.detail = format!("sups [{}]; bound {bound:.4e}; {}", listed.join(", "), result.detail);
    Ok(result)
}

/// Mellin transform of the mixing variable recovered from `Z`, with a
/// certificate that it can be the transform of a probability law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveredMixing {
    pub t: f64,
    pub values: Vec<MellinValue>,
    pub certificate: CheckResult,
}

/// `M_Z(λ) / M_{𝔟_t}(λ)` on `lambdas`. The certificate checks finiteness,
/// positivity and log-convexity of the recovered profile (with `g(0) = 0`
/// added), all necessary for a Mellin transform.
pub fn recover_mixing_mellin(
    z_spec: &DistributionSpec,
    t: f64,
    lambdas: &[f64],
) -> Result<RecoveredMixing> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("mixing order must be positive, got {t}")));
    }
    z_spec.validate()?;
    let dom = mellin_domain(z_spec);
    let mut values = Vec::with_capacity(lambdas.len());
    for &l in lambdas {
        if !(dom.contains(l) && l > -1.0) {
            return Err(Error::OutOfDomain {
                lambda: l,
                domain: dom.to_string(),
            });
        }
        let mz = mellin(z_spec, l, 1e-10)?;
        let ln = mz.ln_value - ln_mellin_beta_t(t, l);
        let value = ln.exp();
        values.push(MellinValue {
            lambda: l,
            value,
            ln_value: ln,
            abs_error: value * mz.abs_error / mz.value.max(f64::MIN_POSITIVE),
            method: mz.method,
        });
    }

    let mut points: Vec<(f64, f64, f64)> = values
        .iter()
        .map(|v| (v.lambda, v.ln_value, v.abs_error / v.value.max(f64::MIN_POSITIVE)))
        .collect();
    if !points.iter().any(|p| p.0 == 0.0) {
        points.push((0.0, 0.0, 0.0));
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut positivity = Tally::new("positive finite values", 0.0);
    for v in &values {
        let bad = !(v.value > 0.0 && v.value.is_finite());
        positivity.observe(if bad { 1.0 } else { -1.0 }, || format!("lambda = {}", v.lambda));
    }
    let profile = LogMellinProfile {
        lambdas: points.iter().map(|p| p.0).collect(),
        g_values: points.iter().map(|p| p.1).collect(),
        g_errors: points.iter().map(|p| p.2).collect(),
    };
    let noise = 4.0 * profile.g_errors.iter().fold(0.0f64, |m, e| m.max(*e)) + 1e-10;
    let convexity = check_log_convexity(&profile, noise);
    let certificate = CheckResult::all("mixing transform certificate", &[positivity.finish(), convexity]);
    Ok(RecoveredMixing {
        t,
        values,
        certificate,
    })
}

/// Recovered `M_Y` against the Mellin transform of a candidate `Y`.
pub fn recovered_distance(recovered: &RecoveredMixing, y_spec: &DistributionSpec) -> Result<f64> {
    let mut worst = 0.0f64;
    for v in &recovered.values {
        let my = mellin(y_spec, v.lambda, 1e-10)?;
        worst = worst.max(crate::mellin::ln_gap(v.ln_value, my.ln_value));
    }
    Ok(worst)
}

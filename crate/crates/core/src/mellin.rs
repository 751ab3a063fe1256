//! Mellin transforms `λ ↦ E[X^λ]` and the structural checks built on them.
//!
//! Values are carried in log space: moments of order 40 of a log-normal
//! already overflow `f64`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::{CheckResult, Tally};
use crate::dist::{
    density_below_top, density_raw, log_center, mellin_domain, survival_raw, DistributionSpec,
};
use crate::error::{Error, Result};
use crate::levy::levy_exponent;
use crate::quad::{integrate_line, Line, Tolerance};
use crate::special::{ln_beta, ln_gamma, ln_mellin_beta_t};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MellinMethod {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

/// Which representation to integrate when no closed form is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MellinPath {
    /// Closed forms and composition rules first, quadrature for the rest.
    #[default]
    Auto,
    /// `λ ∫ x^{λ−1} S(x) dx` (or `−λ ∫ x^{λ−1} F(x) dx` for `λ < 0`) on the
    /// spec itself, ignoring any closed form.
    Survival,
    /// `∫ x^λ f(x) dx` on the spec itself.
    Density,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MellinValue {
    pub lambda: f64,
    pub value: f64,
    pub ln_value: f64,
    pub abs_error: f64,
    pub method: MellinMethod,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogMellinProfile {
    pub lambdas: Vec<f64>,
    pub g_values: Vec<f64>,
    /// Absolute error of each `g` value.
    pub g_errors: Vec<f64>,
}

/// `0.25, 0.5, …, 5.0`.
pub fn default_lambda_grid() -> Vec<f64> {
    (1..=20).map(|i| i as f64 * 0.25).collect()
}

/// Log of `E[X^λ]` with its relative error.
#[derive(Clone, Copy, Debug)]
pub(crate) struct LnMellin {
    pub ln: f64,
    pub rel_err: f64,
    pub closed: bool,
}

impl LnMellin {
    fn exact(ln: f64) -> Self {
        LnMellin {
            ln,
            rel_err: 4.0 * f64::EPSILON * ln.abs().max(1.0),
            closed: true,
        }
    }

    fn combine(self, other: LnMellin, sign: f64) -> Self {
        LnMellin {
            ln: self.ln + sign * other.ln,
            rel_err: self.rel_err + other.rel_err,
            closed: self.closed && other.closed,
        }
    }
}

/// Evaluates `E[X^λ]`; `tol` is a relative tolerance for quadrature paths.
pub fn mellin(spec: &DistributionSpec, lambda: f64, tol: f64) -> Result<MellinValue> {
    mellin_with(spec, lambda, tol, MellinPath::Auto)
}

pub fn mellin_with(
    spec: &DistributionSpec,
    lambda: f64,
    tol: f64,
    path: MellinPath,
) -> Result<MellinValue> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("lambda must be finite, got {lambda}")));
    }
    spec.validate()?;
    let qtol = Tolerance::new(1e-10f64.min(tol), tol);
    let est = match path {
        MellinPath::Auto => ln_mellin_est(spec, lambda, &qtol)?,
        MellinPath::Survival => {
            check_domain(spec, lambda)?;
            survival_path(spec, lambda, &qtol)?
        }
        MellinPath::Density => {
            check_domain(spec, lambda)?;
            density_path(spec, lambda, &qtol)?
        }
    };
    let value = est.ln.exp();
    Ok(MellinValue {
        lambda,
        value,
        ln_value: est.ln,
        abs_error: value * est.rel_err,
        method: if est.closed {
            MellinMethod::ClosedForm
        } else {
            MellinMethod::Quadrature
        },
    })
}

/// Empirical `E[X^λ]` from `n` seeded draws; `abs_error` is the standard error.
pub fn mellin_monte_carlo(
    spec: &DistributionSpec,
    lambda: f64,
    n: usize,
    seed: u64,
) -> Result<MellinValue> {
    let batch = crate::dist::sample(spec, n, seed)?;
    let (m, se) = batch.moment(lambda);
    Ok(MellinValue {
        lambda,
        value: m,
        ln_value: m.ln(),
        abs_error: se,
        method: MellinMethod::MonteCarlo,
    })
}

fn check_domain(spec: &DistributionSpec, lambda: f64) -> Result<()> {
    let dom = mellin_domain(spec);
    if dom.contains(lambda) {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            lambda,
            domain: dom.to_string(),
        })
    }
}

/// `ln E[X^λ]` without validating the spec.
pub(crate) fn ln_mellin_raw(spec: &DistributionSpec, lambda: f64, tol: &Tolerance) -> Result<f64> {
    Ok(ln_mellin_est(spec, lambda, tol)?.ln)
}

pub(crate) fn ln_mellin_est(
    spec: &DistributionSpec,
    lambda: f64,
    tol: &Tolerance,
) -> Result<LnMellin> {
    use DistributionSpec::*;
    if lambda == 0.0 {
        return Ok(LnMellin::exact(0.0));
    }
    check_domain(spec, lambda)?;
    if let Some(v) = closed_leaf(spec, lambda) {
        return Ok(LnMellin::exact(v));
    }
    match spec {
        Scaled { base, factor } => {
            let b = ln_mellin_est(base, lambda, tol)?;
            Ok(LnMellin {
                ln: lambda * factor.ln() + b.ln,
                ..b
            })
        }
        SizeBiased { base, t } => {
            let top = ln_mellin_est(base, t + lambda, tol)?;
            let bottom = ln_mellin_est(base, *t, tol)?;
            Ok(top.combine(bottom, -1.0))
        }
        Excess { base, t } => {
            if *t == 0.0 {
                return ln_mellin_est(base, lambda, tol);
            }
            let top = ln_mellin_est(base, t + lambda, tol)?;
            let bottom = ln_mellin_est(base, *t, tol)?;
            Ok(LnMellin::exact(ln_mellin_beta_t(*t, lambda))
                .combine(top, 1.0)
                .combine(bottom, -1.0))
        }
        ProductIndep { a, b } => {
            Ok(ln_mellin_est(a, lambda, tol)?.combine(ln_mellin_est(b, lambda, tol)?, 1.0))
        }
        Power { base, exponent } => ln_mellin_est(base, exponent * lambda, tol),
        GridSurvival { .. } => survival_path(spec, lambda, tol),
        PerturbedLogNormal { .. } => density_path(spec, lambda, tol),
        _ => Err(Error::InvalidSpec(format!("no Mellin rule for {spec}"))),
    }
}

/// Closed forms of the analytic families (and Lévy laws); `None` otherwise.
fn closed_leaf(spec: &DistributionSpec, lambda: f64) -> Option<f64> {
    use DistributionSpec::*;
    Some(match spec {
        Exponential { rate } => ln_gamma(lambda + 1.0) - lambda * rate.ln(),
        Gamma { shape } => ln_gamma(shape + lambda) - ln_gamma(*shape),
        Beta { a, b } => ln_beta(a + lambda, *b) - ln_beta(*a, *b),
        BetaT { t } => ln_mellin_beta_t(*t, lambda),
        LogNormal { mu, sigma2 } => mu * lambda + 0.5 * sigma2 * lambda * lambda,
        Uniform { lo, hi } => ln_uniform_moment(*lo, *hi, lambda),
        PerturbedLogNormal { mu, sigma2, eps } if *eps == 0.0 => {
            mu * lambda + 0.5 * sigma2 * lambda * lambda
        }
        Levy { levy } => levy_exponent(levy, lambda),
        _ => return None,
    })
}

/// `ln[(hi^p − lo^p) / (p (hi − lo))]` with `p = λ + 1`, stable for large
/// `|p|` and at `p = 0`.
fn ln_uniform_moment(lo: f64, hi: f64, lambda: f64) -> f64 {
    let p = lambda + 1.0;
    let width = (hi - lo).ln();
    if lo == 0.0 {
        return lambda * hi.ln() - p.ln();
    }
    let r = (lo / hi).ln();
    if (p * r).abs() < 1e-8 {
        // (hi^p − lo^p)/p → hi^p·(−r)·(1 + p r/2)
        return p * hi.ln() + (-r).ln() + (p * r * 0.5).ln_1p() - width;
    }
    if p > 0.0 {
        p * hi.ln() + (-(p * r).exp_m1()).ln() - p.ln() - width
    } else {
        p * lo.ln() + (-(-p * r).exp_m1()).ln() - (-p).ln() - width
    }
}

/// Closed-form log-Mellin if the spec is built only from closed-form leaves.
pub fn closed_ln_mellin(spec: &DistributionSpec, lambda: f64) -> Option<f64> {
    use DistributionSpec::*;
    if lambda == 0.0 {
        return Some(0.0);
    }
    if !mellin_domain(spec).contains(lambda) {
        return None;
    }
    if let Some(v) = closed_leaf(spec, lambda) {
        return Some(v);
    }
    match spec {
        Scaled { base, factor } => Some(lambda * factor.ln() + closed_ln_mellin(base, lambda)?),
        SizeBiased { base, t } => {
            Some(closed_ln_mellin(base, t + lambda)? - closed_ln_mellin(base, *t)?)
        }
        Excess { base, t } => Some(
            ln_mellin_beta_t(*t, lambda) + closed_ln_mellin(base, t + lambda)?
                - closed_ln_mellin(base, *t)?,
        ),
        ProductIndep { a, b } => Some(closed_ln_mellin(a, lambda)? + closed_ln_mellin(b, lambda)?),
        Power { base, exponent } => closed_ln_mellin(base, exponent * lambda),
        _ => None,
    }
}

/// Integration window in `y = ln x` from the support.
fn support_window(spec: &DistributionSpec) -> (Option<f64>, Option<f64>) {
    let (lo, hi) = spec.support();
    let lower = if lo > 0.0 { Some(lo.ln()) } else { None };
    let upper = if hi.is_finite() { Some(hi.ln()) } else { None };
    (lower, upper)
}

fn integration_center(spec: &DistributionSpec, lambda: f64) -> f64 {
    let c = log_center(spec, lambda);
    if c.is_finite() {
        c.clamp(-700.0, 700.0)
    } else {
        0.0
    }
}

fn quadrature_result(integral: f64, abs_error: f64, shift: f64) -> Result<LnMellin> {
    if !(integral > 0.0) || !integral.is_finite() {
        return Err(Error::QuadratureFailure(format!(
            "Mellin integral evaluated to {integral}"
        )));
    }
    Ok(LnMellin {
        ln: integral.ln() + shift,
        rel_err: abs_error / integral,
        closed: false,
    })
}

/// The survival-function representation. Integrands are scaled by
/// `e^{−λc}` so that huge moments stay representable.
pub(crate) fn survival_path(
    spec: &DistributionSpec,
    lambda: f64,
    tol: &Tolerance,
) -> Result<LnMellin> {
    if lambda == 0.0 {
        return Ok(LnMellin::exact(0.0));
    }
    let inner = tol.inner();
    let c = integration_center(spec, lambda);
    let shift = lambda * c;
    let (lower, upper) = support_window(spec);
    if lambda > 0.0 {
        // λ ∫ e^{λy} S(e^y) dy; below the support S = 1 and the piece is lo^λ.
        let mut line = Line::around(c);
        let mut head = 0.0;
        if let Some(l) = lower {
            line = line.above(l);
            head = (lambda * l - shift).exp();
        }
        if let Some(u) = upper {
            line = line.below(u);
        }
        let est = integrate_line(
            |y| {
                let s = survival_raw(spec, y.exp(), &inner)?;
                Ok(if s > 0.0 {
                    lambda * (lambda * y - shift + s.ln()).exp()
                } else {
                    0.0
                })
            },
            line,
            tol,
        )?;
        quadrature_result(est.value + head, est.abs_error, shift)
    } else {
        // −λ ∫ e^{λy} F(e^y) dy; above the support F = 1 and the piece is hi^λ.
        let mut line = Line::around(c);
        let mut tail = 0.0;
        if let Some(l) = lower {
            line = line.above(l);
        }
        if let Some(u) = upper {
            line = line.below(u);
            tail = (lambda * u - shift).exp();
        }
        let est = integrate_line(
            |y| {
                let f = 1.0 - survival_raw(spec, y.exp(), &inner)?;
                Ok(if f > 0.0 {
                    -lambda * (lambda * y - shift + f.ln()).exp()
                } else {
                    0.0
                })
            },
            line,
            tol,
        )?;
        quadrature_result(est.value + tail, est.abs_error, shift)
    }
}

/// `∫ e^{(λ+1)y} f(e^y) dy`, scaled like [`survival_path`].
pub(crate) fn density_path(
    spec: &DistributionSpec,
    lambda: f64,
    tol: &Tolerance,
) -> Result<LnMellin> {
    let inner = tol.inner();
    let c = integration_center(spec, lambda);
    let shift = lambda * c;
    let (lower, mut upper) = support_window(spec);
    // A singular top end is integrated in ln(hi − x) over the upper half.
    let (lo, hi) = spec.support();
    let mut top = (0.0, 0.0);
    if hi.is_finite() && density_below_top(spec, 0.5 * (hi - lo)).is_some() {
        let mid = 0.5 * (lo + hi);
        upper = Some(mid.ln());
        let est = integrate_line(
            |w| {
                let gap = w.exp();
                let f = density_below_top(spec, gap).unwrap_or(0.0);
                Ok(if f > 0.0 {
                    (w + lambda * (hi - gap).ln() - shift + f.ln()).exp()
                } else {
                    0.0
                })
            },
            Line::around((0.5 * (hi - lo)).ln() - 1.0).below((hi - mid).ln()),
            tol,
        )?;
        top = (est.value, est.abs_error);
    }
    let mut line = Line::around(c);
    if let Some(l) = lower {
        line = line.above(l);
    }
    if let Some(u) = upper {
        line = line.below(u);
    }
    let est = integrate_line(
        |y| {
            let f = density_raw(spec, y.exp(), &inner)?;
            Ok(if f > 0.0 {
                ((lambda + 1.0) * y - shift + f.ln()).exp()
            } else {
                0.0
            })
        },
        line,
        tol,
    )?;
    quadrature_result(est.value + top.0, est.abs_error + top.1, shift)
}

/// `g(λ) = ln E[X^λ]` on a grid, evaluated in parallel.
pub fn log_mellin_profile(spec: &DistributionSpec, lambdas: &[f64]) -> Result<LogMellinProfile> {
    log_mellin_profile_with(spec, lambdas, 1e-8)
}

pub fn log_mellin_profile_with(
    spec: &DistributionSpec,
    lambdas: &[f64],
    tol: f64,
) -> Result<LogMellinProfile> {
    if lambdas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("lambda grid must be strictly increasing".into()));
    }
    let vals: Vec<MellinValue> = lambdas
        .par_iter()
        .map(|&l| mellin(spec, l, tol))
        .collect::<Result<_>>()?;
    Ok(LogMellinProfile {
        lambdas: lambdas.to_vec(),
        g_values: vals.iter().map(|v| v.ln_value).collect(),
        g_errors: vals
            .iter()
            .map(|v| if v.value > 0.0 { v.abs_error / v.value } else { 0.0 })
            .collect(),
    })
}

/// Chord test on consecutive triples: `g(λ₁) ≤ w g(λ₀) + (1−w) g(λ₂) + tol`
/// (the midpoint test on a uniform grid).
pub fn check_log_convexity(profile: &LogMellinProfile, tol: f64) -> CheckResult {
    convexity_tally(profile, "log-convexity", tol, 0.0)
}

/// Strict variant: each chord must clear the curve by a relative slack of
/// `1e-9`. Meaningful only for non-deterministic laws.
pub fn check_strict_log_convexity(profile: &LogMellinProfile) -> CheckResult {
    convexity_tally(profile, "strict log-convexity", 0.0, 1e-9)
}

fn convexity_tally(profile: &LogMellinProfile, name: &str, tol: f64, slack: f64) -> CheckResult {
    let n = profile.lambdas.len();
    if n < 3 || profile.g_values.len() != n {
        return CheckResult::failed(name, "needs at least three grid points");
    }
    let (l, g) = (&profile.lambdas, &profile.g_values);
    let mut tally = Tally::new(name, tol);
    for i in 1..n - 1 {
        let w = (l[i + 1] - l[i]) / (l[i + 1] - l[i - 1]);
        let chord = w * g[i - 1] + (1.0 - w) * g[i + 1];
        let excess = g[i] - chord + slack * chord.abs().max(1.0);
        tally.observe(excess, || format!("lambda = {}", l[i]));
    }
    tally.finish()
}

/// `t ↦ E[X^{λ+t}] / E[X^t]` along `t_grid`.
pub fn ratio_curve(spec: &DistributionSpec, lambda: f64, t_grid: &[f64]) -> Result<Vec<f64>> {
    spec.validate()?;
    let tol = Tolerance::default();
    t_grid
        .iter()
        .map(|&t| Ok((ln_mellin_raw(spec, lambda + t, &tol)? - ln_mellin_raw(spec, t, &tol)?).exp()))
        .collect()
}

/// Passes iff the ratio curve is nondecreasing, comparing logs within `tol`.
pub fn check_ratio_monotone(
    spec: &DistributionSpec,
    lambda: f64,
    t_grid: &[f64],
    tol: f64,
) -> Result<CheckResult> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    let ratios = ratio_curve(spec, lambda, t_grid)?;
    let mut tally = Tally::new("ratio monotonicity", tol);
    for i in 1..ratios.len() {
        tally.observe(ratios[i - 1].ln() - ratios[i].ln(), || {
            format!("t = {} -> {}", t_grid[i - 1], t_grid[i])
        });
    }
    Ok(tally.finish())
}

/// `E[X^λ]^{1/λ} ≤ E[X^{λ₀}]^{1/λ₀}` for each pair, relative tolerance.
pub fn check_lyapunov(
    spec: &DistributionSpec,
    lambda_pairs: &[(f64, f64)],
    tol: f64,
) -> Result<CheckResult> {
    spec.validate()?;
    let qtol = Tolerance::default();
    let mut tally = Tally::new("Lyapunov inequality", tol);
    for &(l, l0) in lambda_pairs {
        if !(l > 0.0 && l <= l0) {
            return Err(Error::InvalidArgument(format!(
                "Lyapunov pairs need 0 < lambda <= lambda0, got ({l}, {l0})"
            )));
        }
        let a = ln_mellin_raw(spec, l, &qtol)? / l;
        let b = ln_mellin_raw(spec, l0, &qtol)? / l0;
        // (e^a − e^b)/e^b
        tally.observe((a - b).exp_m1(), || format!("pair ({l}, {l0})"));
    }
    Ok(tally.finish())
}

/// `max_λ |M_A(λ) − M_B(λ)| / max(M_A(λ), 1)`.
pub fn mellin_distance(a: &DistributionSpec, b: &DistributionSpec, lambdas: &[f64]) -> Result<f64> {
    mellin_distance_with(a, b, lambdas, 1e-10, MellinPath::Auto)
}

pub fn mellin_distance_with(
    a: &DistributionSpec,
    b: &DistributionSpec,
    lambdas: &[f64],
    tol: f64,
    path: MellinPath,
) -> Result<f64> {
    let gaps: Vec<f64> = lambdas
        .par_iter()
        .map(|&l| {
            let ma = mellin_with(a, l, tol, path)?.ln_value;
            let mb = mellin_with(b, l, tol, path)?.ln_value;
            Ok(ln_gap(ma, mb))
        })
        .collect::<Result<_>>()?;
    Ok(gaps.into_iter().fold(0.0, f64::max))
}

/// `|e^a − e^b| / max(e^a, 1)` without overflow.
pub(crate) fn ln_gap(a: f64, b: f64) -> f64 {
    if a >= 0.0 {
        (b - a).exp_m1().abs()
    } else {
        (a.exp() - b.exp()).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::DistributionSpec as D;
    use crate::special::gamma_fn;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn examples() {
        assert_eq!(mellin(&D::exponential(1.0), 0.0, 1e-8).unwrap().value, 1.0);
        let v = mellin(&D::lognormal(0.0, 1.0), 2.0, 1e-8).unwrap();
        assert!(rel(v.value, 2.0f64.exp()) < 1e-14);
        assert_eq!(v.method, MellinMethod::ClosedForm);
        let u = mellin(&D::uniform(0.0, 1.0), 3.5, 1e-8).unwrap();
        assert!(rel(u.value, 1.0 / 4.5) < 1e-14);
        let q = mellin_with(&D::uniform(0.0, 1.0), 3.5, 1e-10, MellinPath::Survival).unwrap();
        assert!(rel(q.value, 1.0 / 4.5) < 1e-9);
        assert_eq!(q.method, MellinMethod::Quadrature);
    }

    #[test]
    fn out_of_domain_is_reported() {
        let e = mellin(&D::exponential(1.0), -1.0, 1e-8);
        assert!(matches!(e, Err(Error::OutOfDomain { .. })));
        assert!(mellin(&D::gamma(2.0), -1.5, 1e-8).is_ok());
    }

    #[test]
    fn profile_examples() {
        let p = log_mellin_profile(&D::exponential(1.0), &[1.0, 2.0]).unwrap();
        assert!(p.g_values[0].abs() < 1e-14);
        assert!((p.g_values[1] - 2f64.ln()).abs() < 1e-14);
        let g = log_mellin_profile(&D::gamma(2.0), &[1.0]).unwrap();
        assert!((g.g_values[0] - 2f64.ln()).abs() < 1e-14);
        let grid = [-1.0, 0.5, 2.0, 7.0];
        let ln = log_mellin_profile(&D::lognormal(0.3, 0.7), &grid).unwrap();
        for (l, g) in grid.iter().zip(&ln.g_values) {
            assert!((g - (0.3 * l + 0.35 * l * l)).abs() < 1e-13);
        }
    }

    #[test]
    fn uniform_moment_near_minus_one() {
        let spec = D::uniform(1.0, 3.0);
        let exact = 3f64.ln() / 2.0;
        let v = mellin(&spec, -1.0, 1e-8).unwrap().value;
        assert!(rel(v, exact) < 1e-14);
        let near = mellin(&spec, -1.0 + 1e-10, 1e-8).unwrap().value;
        assert!(rel(near, exact) < 1e-9);
        let big = mellin(&spec, 800.0, 1e-8).unwrap().ln_value;
        assert!((big - (801.0 * 3f64.ln() - 801f64.ln() - 2f64.ln())).abs() < 1e-10);
    }

    #[test]
    fn convexity_checks() {
        let grid = default_lambda_grid();
        let p = log_mellin_profile(&D::lognormal(0.0, 1.0), &grid).unwrap();
        assert!(check_log_convexity(&p, 0.0).passed);
        assert!(check_strict_log_convexity(&p).passed);
        let det = log_mellin_profile(&D::point_mass(3.0), &grid).unwrap();
        let r = check_log_convexity(&det, 1e-12);
        assert!(r.passed && r.worst.abs() < 1e-12);
        assert!(!check_strict_log_convexity(&det).passed);
        let g1: Vec<f64> = (1..=8).map(|i| i as f64 * 0.5).collect();
        assert!(check_log_convexity(&log_mellin_profile(&D::gamma(1.0), &g1).unwrap(), 0.0).passed);
        let concave = LogMellinProfile {
            lambdas: vec![0.0, 1.0, 2.0],
            g_values: vec![0.0, 1.0, 0.0],
            g_errors: vec![0.0; 3],
        };
        assert!(!check_log_convexity(&concave, 1e-9).passed);
    }

    #[test]
    fn ratio_examples() {
        let r = ratio_curve(&D::exponential(1.0), 1.0, &[0.0, 1.0, 2.0, 3.0]).unwrap();
        for (i, v) in r.iter().enumerate() {
            assert!(rel(*v, i as f64 + 1.0) < 1e-13);
        }
        assert!(check_ratio_monotone(&D::exponential(1.0), 1.0, &[0.0, 1.0, 2.0, 3.0], 0.0)
            .unwrap()
            .passed);
        assert!(check_ratio_monotone(&D::point_mass(2.0), 1.0, &[0.0, 1.0, 5.0], 1e-12)
            .unwrap()
            .passed);
        let ln = ratio_curve(&D::lognormal(0.0, 1.0), 1.0, &[0.0, 2.0]).unwrap();
        assert!(rel(ln[1], 2.5f64.exp()) < 1e-13);
    }

    #[test]
    fn lyapunov_examples() {
        let e = check_lyapunov(&D::exponential(1.0), &[(1.0, 2.0), (1.5, 1.5)], 1e-12).unwrap();
        assert!(e.passed);
        let u = check_lyapunov(&D::uniform(0.0, 1.0), &[(0.5, 3.0)], 0.0).unwrap();
        assert!(u.passed);
        assert!(check_lyapunov(&D::uniform(0.0, 1.0), &[(2.0, 1.0)], 0.0).is_err());
    }

    #[test]
    fn distance_examples() {
        let grid: Vec<f64> = (1..=8).map(|i| i as f64 * 0.5).collect();
        let d = mellin_distance(&D::gamma(2.0), &D::size_biased(D::exponential(1.0), 1.0), &grid)
            .unwrap();
        assert!(d < 1e-10);
        assert_eq!(mellin_distance(&D::gamma(2.0), &D::gamma(2.0), &grid).unwrap(), 0.0);
    }

    #[test]
    fn grid_survival_quadrature() {
        // S(x) = (1 − x)^2 on a fine grid, i.e. BetaT(2)
        let pts: Vec<(f64, f64)> = (0..=400)
            .map(|i| {
                let x = i as f64 / 400.0;
                (x, (1.0 - x).powi(2))
            })
            .collect();
        let spec = D::grid(&pts).unwrap();
        for &l in &[0.5, 1.0, 3.0] {
            let v = mellin(&spec, l, 1e-10).unwrap().value;
            let exact = 2.0 * gamma_fn(l + 1.0) / gamma_fn(l + 3.0);
            assert!(rel(v, exact) < 1e-6, "{l}: {v} vs {exact}");
        }
        let v = mellin(&spec, -0.5, 1e-10).unwrap().value;
        let exact = 2.0 * gamma_fn(0.5) / gamma_fn(2.5);
        assert!(rel(v, exact) < 1e-4, "{v} vs {exact}");
    }

    #[test]
    fn perturbed_lognormal_moments() {
        let spec = D::perturbed_lognormal(0.0, 1.0, 0.5);
        for k in 0..=8 {
            let v = mellin(&spec, k as f64, 1e-10).unwrap().value;
            let exact = (0.5 * (k * k) as f64).exp();
            assert!(rel(v, exact) < 1e-8, "{k}: {v}");
        }
    }

    #[test]
    fn monte_carlo_method() {
        let v = mellin_monte_carlo(&D::exponential(1.0), 2.0, 50_000, 3).unwrap();
        assert_eq!(v.method, MellinMethod::MonteCarlo);
        assert!((v.value - 2.0).abs() < 4.0 * v.abs_error);
    }

    fn family() -> impl Strategy<Value = D> {
        prop_oneof![
            (0.2f64..4.0).prop_map(D::exponential),
            (0.3f64..6.0).prop_map(D::gamma),
            (0.3f64..4.0, 0.3f64..4.0).prop_map(|(a, b)| D::beta(a, b)),
            (0.2f64..6.0).prop_map(D::beta_t),
            (-1.0f64..1.0, 0.05f64..2.0).prop_map(|(m, s)| D::lognormal(m, s)),
            (0.0f64..1.0, 0.1f64..2.0).prop_map(|(lo, w)| D::uniform(lo, lo + w)),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn normalized_at_zero(spec in family(), t in 0.0f64..3.0) {
            let derived = D::excess(D::size_biased(spec.clone(), t), 1.0);
            prop_assert_eq!(mellin(&spec, 0.0, 1e-8).unwrap().value, 1.0);
            prop_assert_eq!(mellin(&derived, 0.0, 1e-8).unwrap().value, 1.0);
        }

        #[test]
        fn size_bias_composition(spec in family(), t in 0.0f64..5.0, l in 0.25f64..4.0) {
            let sb = D::size_biased(spec.clone(), t);
            let lhs = mellin(&sb, l, 1e-10).unwrap().value;
            let rhs = mellin(&spec, t + l, 1e-10).unwrap().value / mellin(&spec, t, 1e-10).unwrap().value;
            prop_assert!(rel(lhs, rhs) < 1e-8);
        }

        #[test]
        fn survival_quadrature_matches_closed_form(spec in family(), l in 0.25f64..5.0) {
            let closed = mellin(&spec, l, 1e-10).unwrap().value;
            let quad = mellin_with(&spec, l, 1e-10, MellinPath::Survival).unwrap().value;
            prop_assert!(rel(quad, closed) < 1e-7, "{} at {}: {} vs {}", spec, l, quad, closed);
        }

        #[test]
        fn density_quadrature_matches_closed_form(spec in family(), l in -0.2f64..5.0) {
            let closed = mellin(&spec, l, 1e-10).unwrap().value;
            let quad = mellin_with(&spec, l, 1e-10, MellinPath::Density).unwrap().value;
            prop_assert!(rel(quad, closed) < 1e-7, "{} at {}: {} vs {}", spec, l, quad, closed);
        }

        #[test]
        fn analytic_profiles_are_log_convex(spec in family(), start in 0.0f64..1.0, step in 0.05f64..0.5) {
            let grid: Vec<f64> = (0..10).map(|i| start + step * i as f64).collect();
            let p = log_mellin_profile(&spec, &grid).unwrap();
            prop_assert!(check_log_convexity(&p, 1e-12).passed);
        }
    }
}

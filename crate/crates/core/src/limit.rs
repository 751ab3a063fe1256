//! Normalized biased families `X_t = X_(t) / ρ_t` and
//! `Z_t = t 𝔟_t X_(t) / ρ_t`, their exponential × log-normal limits, and
//! numeric convergence diagnostics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::{CheckResult, Tally};
use crate::dist::{mellin_domain, sample, survival_raw, DistributionSpec};
use crate::error::{Error, Result};
use crate::excess::excess;
use crate::ks::ks_two_sample;
use crate::mellin::{ln_mellin_est, mellin, mellin_with, MellinPath};
use crate::quad::Tolerance;
use crate::rng::mix_index;
use crate::size_bias::size_bias;
use crate::special::{ln_gamma, ln_mellin_beta_t};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizationCurve {
    pub alpha: f64,
    pub t_grid: Vec<f64>,
    pub rho: Vec<f64>,
    /// Whether `ρ` is nondecreasing along the grid (relative slack `1e-12`).
    pub monotone: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CEstimate {
    pub t: f64,
    pub s: f64,
    pub value: f64,
}

/// The pair `X_∞ = LogNormal(a − c/2, c)` and `Z_∞ = 𝔢 · X_∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitLaw {
    pub a: f64,
    pub c: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Bias,
    Excess,
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bias" => Ok(FamilyKind::Bias),
            "excess" => Ok(FamilyKind::Excess),
            other => Err(Error::InvalidArgument(format!(
                "family kind must be bias or excess, got {other}"
            ))),
        }
    }
}

fn require_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")))
    }
}

fn ln_m(spec: &DistributionSpec, lambda: f64) -> Result<f64> {
    Ok(ln_mellin_est(spec, lambda, &Tolerance::default())?.ln)
}

fn ln_rho(spec: &DistributionSpec, alpha: f64, t: f64) -> Result<f64> {
    Ok(ln_m(spec, t + 1.0)? - ln_m(spec, t)? - alpha.ln())
}

/// `ρ_t = E[X^{t+1}] / (α E[X^t])` on `t_grid`, so that `E[X_t] = α`
/// for every `t`.
pub fn rho_curve(spec: &DistributionSpec, alpha: f64, t_grid: &[f64]) -> Result<NormalizationCurve> {
    spec.validate()?;
    require_alpha(alpha)?;
    let dom = mellin_domain(spec);
    for &t in t_grid {
        for l in [t, t + 1.0] {
            if !dom.contains(l) {
                return Err(Error::OutOfDomain {
                    lambda: l,
                    domain: dom.to_string(),
                });
            }
        }
    }
    let rho: Vec<f64> = t_grid
        .par_iter()
        .map(|&t| Ok(ln_rho(spec, alpha, t)?.exp()))
        .collect::<Result<_>>()?;
    let monotone = rho.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
    Ok(NormalizationCurve {
        alpha,
        t_grid: t_grid.to_vec(),
        rho,
        monotone,
    })
}

/// `(1/s) [g(t+1+s) − g(t+1) − g(t+s) + g(t)]` with `g = ln E[X^·]`.
pub fn estimate_c(spec: &DistributionSpec, t: f64, s: f64) -> Result<CEstimate> {
    spec.validate()?;
    if !(s > 0.0 && s.is_finite() && t.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "estimate_c needs finite t and s > 0, got t = {t}, s = {s}"
        )));
    }
    let g = |l: f64| ln_m(spec, l);
    let value = (g(t + 1.0 + s)? - g(t + 1.0)? - g(t + s)? + g(t)?) / s;
    Ok(CEstimate { t, s, value })
}

/// Fitted `c`: the estimate at the largest grid `t` with step `s`, plus
/// a convergence flag comparing steps `0.5, 1, 2` there.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CFit {
    pub t: f64,
    pub s: f64,
    pub c: f64,
    pub by_step: Vec<CEstimate>,
    pub spread: f64,
    pub converged: bool,
}

/// Largest spread across steps still flagged as converged.
pub const C_SPREAD_TOL: f64 = 1e-3;

pub fn fit_c(spec: &DistributionSpec, t_grid: &[f64], s: f64) -> Result<CFit> {
    let t = t_grid
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if !t.is_finite() {
        return Err(Error::InvalidArgument("t grid is empty".into()));
    }
    let c = estimate_c(spec, t, s)?.value;
    // second differences of g carry rounding of order eps·|g|
    let noise = 16.0 * f64::EPSILON * ln_m(spec, t + 1.0 + s)?.abs().max(1.0) / s;
    let c = if c.abs() <= noise { 0.0 } else { c };
    let by_step = [0.5, 1.0, 2.0]
        .iter()
        .map(|&step| estimate_c(spec, t, step))
        .collect::<Result<Vec<_>>>()?;
    let hi = by_step.iter().map(|e| e.value).fold(f64::NEG_INFINITY, f64::max);
    let lo = by_step.iter().map(|e| e.value).fold(f64::INFINITY, f64::min);
    let spread = hi - lo;
    Ok(CFit {
        t,
        s,
        c: c.max(0.0),
        by_step,
        spread,
        converged: spread <= C_SPREAD_TOL,
    })
}

impl LimitLaw {
    pub fn alpha(&self) -> f64 {
        self.a.exp()
    }

    /// `X_∞`; the point mass at `α` when `c = 0`.
    pub fn x_inf(&self) -> DistributionSpec {
        if self.c == 0.0 {
            DistributionSpec::point_mass(self.alpha())
        } else {
            DistributionSpec::lognormal(self.a - 0.5 * self.c, self.c)
        }
    }

    pub fn z_inf(&self) -> DistributionSpec {
        DistributionSpec::product(DistributionSpec::exponential(1.0), self.x_inf())
    }

    /// `ln E[X_∞^λ] = (a − c/2) λ + c λ² / 2`.
    pub fn ln_mellin_x(&self, lambda: f64) -> f64 {
        (self.a - 0.5 * self.c) * lambda + 0.5 * self.c * lambda * lambda
    }

    /// `ln E[Z_∞^λ] = ln Γ(λ+1) + ln E[X_∞^λ]`, for `λ > −1`.
    pub fn ln_mellin_z(&self, lambda: f64) -> f64 {
        ln_gamma(lambda + 1.0) + self.ln_mellin_x(lambda)
    }
}

pub fn limit_law(alpha: f64, c: f64) -> Result<LimitLaw> {
    require_alpha(alpha)?;
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("c must be >= 0, got {c}")));
    }
    Ok(LimitLaw { a: alpha.ln(), c })
}

/// `X_t = X_(t) / ρ_t` (bias) or `Z_t = E_t(X) · t / ρ_t` (excess).
pub fn normalized_family(
    spec: &DistributionSpec,
    alpha: f64,
    t: f64,
    kind: FamilyKind,
) -> Result<DistributionSpec> {
    require_alpha(alpha)?;
    let biased = match kind {
        FamilyKind::Bias => size_bias(spec, t)?,
        FamilyKind::Excess => {
            if !(t > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "the excess family needs t > 0, got {t}"
                )));
            }
            excess(spec, t)?
        }
    };
    let dom = mellin_domain(spec);
    if !dom.contains(t + 1.0) {
        return Err(Error::OutOfDomain {
            lambda: t + 1.0,
            domain: dom.to_string(),
        });
    }
    let rho = ln_rho(spec, alpha, t)?.exp();
    let factor = match kind {
        FamilyKind::Bias => 1.0 / rho,
        FamilyKind::Excess => t / rho,
    };
    biased.scale(factor)
}

/// `(X_∞)_(s) = e^{cs} X_∞` and `Z_∞ = e^{−cs} 𝔟_s (Z_∞)_(s)`, compared as
/// relative gaps of Mellin transforms evaluated through the composition
/// rules.
pub fn check_fixed_point(law: &LimitLaw, s: f64, lambdas: &[f64], tol: f64) -> Result<CheckResult> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::InvalidArgument(format!("s must be >= 0, got {s}")));
    }
    let x = law.x_inf();
    let z = law.z_inf();
    let x_biased = DistributionSpec::size_biased(x.clone(), s);
    let x_scaled = x.scale((law.c * s).exp())?;
    let z_rhs = DistributionSpec::product(
        DistributionSpec::beta_t(s),
        DistributionSpec::size_biased(z.clone(), s),
    )
    .scale((-law.c * s).exp())?;

    let rel = |a: f64, b: f64| (a - b).exp_m1().abs();
    let mut xs = Tally::new("X fixed point", tol);
    let mut zs = Tally::new("Z fixed point", tol);
    for &l in lambdas {
        if !(l > -1.0) {
            return Err(Error::InvalidArgument(format!("lambda must exceed -1, got {l}")));
        }
        let lhs = mellin(&x_biased, l, 1e-12)?.ln_value;
        let rhs = mellin(&x_scaled, l, 1e-12)?.ln_value;
        // closed form: e^{csλ} E[X_∞^λ]
        let closed = law.c * s * l + law.ln_mellin_x(l);
        xs.observe(rel(lhs, rhs).max(rel(lhs, closed)), || format!("lambda = {l}"));

        let zl = mellin(&z_rhs, l, 1e-12)?.ln_value;
        let closed_z = -law.c * s * l + ln_mellin_beta_t(s, l) + law.ln_mellin_z(s + l)
            - law.ln_mellin_z(s);
        zs.observe(
            rel(zl, law.ln_mellin_z(l)).max(rel(closed_z, law.ln_mellin_z(l))),
            || format!("lambda = {l}"),
        );
    }
    let mut r = CheckResult::all("limit fixed points", &[xs.finish(), zs.finish()]);
    r.detail = format!("a = {}, c = {}, s = {s}; {}", law.a, law.c, r.detail);
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MellinErrorRow {
    pub t: f64,
    pub lambda: f64,
    pub value: f64,
    pub limit: f64,
    pub rel_error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsRow {
    pub t: f64,
    pub statistic: f64,
    pub n: usize,
    pub seed_z_t: u64,
    pub seed_z_inf: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UiRow {
    pub t: f64,
    pub x: f64,
    /// `E[X_t^λ 1{X_t > x}]`.
    pub value: f64,
    /// Maximum of `value` over the ladder entries `t' ≥ t`.
    pub ladder_sup: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UiTail {
    pub lambda: f64,
    pub x_ladder: Vec<f64>,
    pub rows: Vec<UiRow>,
    pub note: String,
}

/// Thresholds for the report verdict.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportThresholds {
    /// Largest acceptable KS statistic at the final `t`.
    pub ks: f64,
    /// Largest acceptable Mellin relative error at the final `t`.
    pub mellin: f64,
    /// Slack allowed when checking that errors decrease along the grid.
    pub trend_slack: f64,
}

impl Default for ReportThresholds {
    fn default() -> Self {
        ReportThresholds {
            ks: 0.01,
            mellin: 0.05,
            trend_slack: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub spec: DistributionSpec,
    pub alpha: f64,
    pub t_grid: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub n_samples: usize,
    pub seed: u64,
    pub s: f64,
    pub thresholds: ReportThresholds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub config: ReportConfig,
    pub curve: NormalizationCurve,
    pub c_estimates: Vec<CEstimate>,
    pub c_fit: CFit,
    pub limit: LimitLaw,
    pub mellin_errors: Vec<MellinErrorRow>,
    pub ks_stats: Vec<KsRow>,
    pub ui_tail: UiTail,
    pub verdict: CheckResult,
    pub notes: Vec<String>,
}

pub const EVIDENCE_NOTE: &str =
    "numeric evidence on finite grids of t and lambda, not a proof of convergence";
pub const UI_NOTE: &str =
    "ladder_sup is the maximum over the finite t ladder t' >= t, not a supremum over all t";

/// Default `x` ladder of the tail diagnostic: `α·2^k`, `k = 1..=5`.
pub fn default_x_ladder(alpha: f64) -> Vec<f64> {
    (1..=5).map(|k| alpha * f64::from(1u32 << k)).collect()
}

/// Builds the full report. `n_samples = 0` skips the KS part.
pub fn convergence_report(
    spec: &DistributionSpec,
    alpha: f64,
    t_grid: &[f64],
    lambdas: &[f64],
    n_samples: usize,
    seed: u64,
    s: f64,
) -> Result<ConvergenceReport> {
    convergence_report_with(spec, alpha, t_grid, lambdas, n_samples, seed, s, ReportThresholds::default())
}

#[allow(clippy::too_many_arguments)]
pub fn convergence_report_with(
    spec: &DistributionSpec,
    alpha: f64,
    t_grid: &[f64],
    lambdas: &[f64],
    n_samples: usize,
    seed: u64,
    s: f64,
    thresholds: ReportThresholds,
) -> Result<ConvergenceReport> {
    spec.validate()?;
    require_alpha(alpha)?;
    if t_grid.is_empty() || t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("t grid must be nonempty and increasing".into()));
    }
    if t_grid[0] <= 0.0 {
        return Err(Error::InvalidArgument("t grid must be positive".into()));
    }
    if lambdas.is_empty() || lambdas.iter().any(|l| !(*l > -1.0 && l.is_finite())) {
        return Err(Error::InvalidArgument("lambda grid must be nonempty with values > -1".into()));
    }
    if !(s > 0.0) {
        return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
    }

    let curve = rho_curve(spec, alpha, t_grid)?;
    let c_estimates: Vec<CEstimate> = t_grid
        .par_iter()
        .map(|&t| estimate_c(spec, t, s))
        .collect::<Result<_>>()?;
    let c_fit = fit_c(spec, t_grid, s)?;
    let limit = limit_law(alpha, c_fit.c)?;

    let per_t: Vec<(Vec<MellinErrorRow>, Option<KsRow>)> = t_grid
        .par_iter()
        .enumerate()
        .map(|(i, &t)| {
            let x_t = normalized_family(spec, alpha, t, FamilyKind::Bias)?;
            let rows = lambdas
                .iter()
                .map(|&l| {
                    let v = mellin(&x_t, l, 1e-10)?.ln_value;
                    let lim = limit.ln_mellin_x(l);
                    Ok(MellinErrorRow {
                        t,
                        lambda: l,
                        value: v.exp(),
                        limit: lim.exp(),
                        rel_error: (v - lim).exp_m1().abs(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let ks = if n_samples > 0 {
                let z_t = normalized_family(spec, alpha, t, FamilyKind::Excess)?;
                let seed_z_t = mix_index(seed, "z_t", i as u64);
                let seed_z_inf = mix_index(seed, "z_inf", i as u64);
                let a = sample(&z_t, n_samples, seed_z_t)?;
                let b = sample(&limit.z_inf(), n_samples, seed_z_inf)?;
                Some(KsRow {
                    t,
                    statistic: ks_two_sample(&a.values, &b.values)?,
                    n: n_samples,
                    seed_z_t,
                    seed_z_inf,
                })
            } else {
                None
            };
            Ok((rows, ks))
        })
        .collect::<Result<_>>()?;
    let mellin_errors: Vec<MellinErrorRow> = per_t.iter().flat_map(|p| p.0.clone()).collect();
    let ks_stats: Vec<KsRow> = per_t.iter().filter_map(|p| p.1).collect();

    let ui_lambda = lambdas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ui_tail = ui_tail_table(spec, alpha, t_grid, ui_lambda, &default_x_ladder(alpha))?;

    let verdict = report_verdict(t_grid, lambdas, &mellin_errors, &ks_stats, &thresholds);
    let mut notes = vec![EVIDENCE_NOTE.to_string(), UI_NOTE.to_string()];
    if !c_fit.converged {
        notes.push(format!(
            "c estimates at t = {} disagree across steps by {:.3e}",
            c_fit.t, c_fit.spread
        ));
    }
    if !curve.monotone {
        notes.push("rho is not monotone on the grid".into());
    }
    Ok(ConvergenceReport {
        config: ReportConfig {
            spec: spec.clone(),
            alpha,
            t_grid: t_grid.to_vec(),
            lambdas: lambdas.to_vec(),
            n_samples,
            seed,
            s,
            thresholds,
        },
        curve,
        c_estimates,
        c_fit,
        limit,
        mellin_errors,
        ks_stats,
        ui_tail,
        verdict,
        notes,
    })
}

fn ui_tail_table(
    spec: &DistributionSpec,
    alpha: f64,
    t_grid: &[f64],
    lambda: f64,
    x_ladder: &[f64],
) -> Result<UiTail> {
    let tol = Tolerance::default();
    let per_t: Vec<Vec<f64>> = t_grid
        .par_iter()
        .map(|&t| {
            let x_t = normalized_family(spec, alpha, t, FamilyKind::Bias)?;
            let m = mellin(&x_t, lambda, 1e-10)?.value;
            let tilted = size_bias(&x_t, lambda)?;
            x_ladder
                .iter()
                .map(|&x| Ok(m * survival_raw(&tilted, x, &tol)?))
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(t_grid.len() * x_ladder.len());
    for (i, &t) in t_grid.iter().enumerate() {
        for (j, &x) in x_ladder.iter().enumerate() {
            let ladder_sup = per_t[i..].iter().map(|r| r[j]).fold(0.0, f64::max);
            rows.push(UiRow {
                t,
                x,
                value: per_t[i][j],
                ladder_sup,
            });
        }
    }
    Ok(UiTail {
        lambda,
        x_ladder: x_ladder.to_vec(),
        rows,
        note: UI_NOTE.into(),
    })
}

fn report_verdict(
    t_grid: &[f64],
    lambdas: &[f64],
    mellin_errors: &[MellinErrorRow],
    ks_stats: &[KsRow],
    th: &ReportThresholds,
) -> CheckResult {
    // worst Mellin error per t
    let per_t: Vec<f64> = t_grid
        .iter()
        .enumerate()
        .map(|(i, _)| {
            mellin_errors[i * lambdas.len()..(i + 1) * lambdas.len()]
                .iter()
                .map(|r| r.rel_error)
                .fold(0.0, f64::max)
        })
        .collect();
    let mut trend = Tally::new("Mellin errors decrease", th.trend_slack);
    for i in 1..per_t.len() {
        trend.observe(per_t[i] - per_t[i - 1], || format!("t = {}", t_grid[i]));
    }
    let mut last = Tally::new("final Mellin error", th.mellin);
    last.observe(*per_t.last().unwrap(), || format!("t = {}", t_grid[t_grid.len() - 1]));
    let mut parts = vec![trend.finish(), last.finish()];
    if !ks_stats.is_empty() {
        let mut ks_trend = Tally::new("KS statistics decrease", 0.0);
        for w in ks_stats.windows(2) {
            ks_trend.observe(w[1].statistic - w[0].statistic, || format!("t = {}", w[1].t));
        }
        let mut ks_last = Tally::new("final KS statistic", th.ks);
        let k = ks_stats.last().unwrap();
        ks_last.observe(k.statistic, || format!("t = {}", k.t));
        parts.push(ks_trend.finish());
        parts.push(ks_last.finish());
    }
    CheckResult::all("convergence verdict", &parts)
}

impl ConvergenceReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per `(t, λ)` Mellin entry, per `t` for `ρ`, `c` and KS, and
    /// per `(t, x)` tail entry.
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["kind", "t", "lambda", "x", "value", "reference", "error"])?;
        let e = String::new;
        let f = |v: f64| format!("{v:.17e}");
        for (t, rho) in self.curve.t_grid.iter().zip(&self.curve.rho) {
            w.write_record(["rho", &f(*t), &e(), &e(), &f(*rho), &e(), &e()])?;
        }
        for c in &self.c_estimates {
            w.write_record(["c", &f(c.t), &f(c.s), &e(), &f(c.value), &f(self.limit.c), &e()])?;
        }
        for r in &self.mellin_errors {
            w.write_record([
                "mellin",
                &f(r.t),
                &f(r.lambda),
                &e(),
                &f(r.value),
                &f(r.limit),
                &f(r.rel_error),
            ])?;
        }
        for k in &self.ks_stats {
            w.write_record(["ks", &f(k.t), &e(), &e(), &f(k.statistic), &e(), &e()])?;
        }
        for u in &self.ui_tail.rows {
            w.write_record([
                "ui_tail",
                &f(u.t),
                &f(self.ui_tail.lambda),
                &f(u.x),
                &f(u.value),
                &f(u.ladder_sup),
                &e(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub lambda: f64,
    pub lognormal: f64,
    pub perturbed: f64,
    pub rel_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndeterminacyReport {
    pub mu: f64,
    pub sigma2: f64,
    pub eps: f64,
    pub integer_moments: Vec<MomentRow>,
    pub probe: MomentRow,
    pub max_integer_gap: f64,
}

/// Integer moments `k = 0..=k_max` and the moment at `lambda_probe` of
/// LogNormal(μ, σ²) and of its sine-perturbed companion, both by density
/// quadrature.
pub fn indeterminacy_demo(
    mu: f64,
    sigma2: f64,
    eps: f64,
    k_max: usize,
    lambda_probe: f64,
) -> Result<IndeterminacyReport> {
    let ln = DistributionSpec::lognormal(mu, sigma2);
    let pert = DistributionSpec::perturbed_lognormal(mu, sigma2, eps);
    ln.validate()?;
    pert.validate()?;
    if !(sigma2 > 0.0) {
        return Err(Error::InvalidArgument("the demonstration needs sigma2 > 0".into()));
    }
    let row = |l: f64| -> Result<MomentRow> {
        if l == 0.0 {
            return Ok(MomentRow {
                lambda: l,
                lognormal: 1.0,
                perturbed: 1.0,
                rel_gap: 0.0,
            });
        }
        let a = mellin_with(&ln, l, 1e-12, MellinPath::Density)?;
        let b = mellin_with(&pert, l, 1e-12, MellinPath::Density)?;
        Ok(MomentRow {
            lambda: l,
            lognormal: a.value,
            perturbed: b.value,
            rel_gap: (b.ln_value - a.ln_value).exp_m1().abs(),
        })
    };
    let integer_moments: Vec<MomentRow> = (0..=k_max)
        .into_par_iter()
        .map(|k| row(k as f64))
        .collect::<Result<_>>()?;
    let max_integer_gap = integer_moments.iter().map(|r| r.rel_gap).fold(0.0, f64::max);
    Ok(IndeterminacyReport {
        mu,
        sigma2,
        eps,
        integer_moments,
        probe: row(lambda_probe)?,
        max_integer_gap,
    })
}

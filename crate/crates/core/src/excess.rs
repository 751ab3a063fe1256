//! The stationary-excess operator `E_t`, with survival
//! `E[(X − x)₊^t] / E[X^t]`. In law `E_t(X) = 𝔟_t · X_(t)` where `𝔟_t` is
//! Beta(1, t) and independent of the size-biased `X_(t)`.

use crate::check::{CheckResult, Tally};
use crate::dist::{mellin_domain, DistributionSpec};
use crate::error::{Error, Result};
use crate::mellin::{ln_gap, ln_mellin_est, mellin_with, MellinMethod, MellinPath, MellinValue};
use crate::quad::Tolerance;
use crate::special::ln_mellin_beta_t;

/// Deepest supported nesting of [`iterate_discrete`].
pub const MAX_ITERATION_DEPTH: usize = 8;

fn require_order(spec: &DistributionSpec, t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("excess order must be >= 0, got {t}")));
    }
    let dom = mellin_domain(spec);
    if !dom.contains(t) {
        return Err(Error::OutOfDomain {
            lambda: t,
            domain: dom.to_string(),
        });
    }
    Ok(())
}

/// Law of `E_t(X)`; `t = 0` returns the spec unchanged.
pub fn excess(spec: &DistributionSpec, t: f64) -> Result<DistributionSpec> {
    spec.validate()?;
    require_order(spec, t)?;
    if t == 0.0 {
        return Ok(spec.clone());
    }
    Ok(DistributionSpec::excess(spec.clone(), t))
}

/// `E[E_t(X)^λ] = Γ(λ+1) Γ(t+1)/Γ(λ+t+1) · E[X^{λ+t}] / E[X^t]`.
pub fn excess_mellin(spec: &DistributionSpec, t: f64, lambda: f64) -> Result<MellinValue> {
    spec.validate()?;
    require_order(spec, t)?;
    if lambda == 0.0 {
        return Ok(MellinValue {
            lambda,
            value: 1.0,
            ln_value: 0.0,
            abs_error: 0.0,
            method: MellinMethod::ClosedForm,
        });
    }
    if !(lambda > -1.0) {
        return Err(Error::OutOfDomain {
            lambda,
            domain: mellin_domain(&DistributionSpec::excess(spec.clone(), t)).to_string(),
        });
    }
    let tol = Tolerance::default();
    let top = ln_mellin_est(spec, lambda + t, &tol)?;
    let bottom = ln_mellin_est(spec, t, &tol)?;
    let ln = ln_mellin_beta_t(t, lambda) + top.ln - bottom.ln;
    let value = ln.exp();
    Ok(MellinValue {
        lambda,
        value,
        ln_value: ln,
        abs_error: value * (top.rel_err + bottom.rel_err + 4.0 * f64::EPSILON),
        method: if top.closed && bottom.closed {
            MellinMethod::ClosedForm
        } else {
            MellinMethod::Quadrature
        },
    })
}

/// `E_t(E_s(X)) = E_{s+t}(X)` in Mellin distance, composition rules only.
pub fn check_semigroup(
    spec: &DistributionSpec,
    s: f64,
    t: f64,
    lambdas: &[f64],
    tol: f64,
) -> Result<CheckResult> {
    check_semigroup_with(spec, s, t, lambdas, tol, MellinPath::Auto)
}

/// As [`check_semigroup`]; `MellinPath::Survival` integrates the nested
/// survival functions instead of using the Gamma-ratio rule.
pub fn check_semigroup_with(
    spec: &DistributionSpec,
    s: f64,
    t: f64,
    lambdas: &[f64],
    tol: f64,
    path: MellinPath,
) -> Result<CheckResult> {
    spec.validate()?;
    require_order(spec, s + t)?;
    let nested = excess(&excess(spec, s)?, t)?;
    let direct = excess(spec, s + t)?;
    let qtol = (0.01 * tol).clamp(1e-12, 1e-6);
    distance_check("excess semigroup", &nested, &direct, lambdas, tol, qtol, path)
}

/// `E_1 ∘ ⋯ ∘ E_1` applied `n` times.
pub fn iterate_discrete(spec: &DistributionSpec, n: usize) -> Result<DistributionSpec> {
    if n == 0 {
        return Err(Error::InvalidArgument("iteration count must be at least 1".into()));
    }
    if n > MAX_ITERATION_DEPTH {
        return Err(Error::QuadratureFailure(format!(
            "iteration depth {n} exceeds the supported {MAX_ITERATION_DEPTH}"
        )));
    }
    let mut out = spec.clone();
    for _ in 0..n {
        out = excess(&out, 1.0)?;
    }
    Ok(out)
}

/// `E_1^n(X) = E_n(X)` in Mellin distance.
pub fn check_iteration(
    spec: &DistributionSpec,
    n: usize,
    lambdas: &[f64],
    tol: f64,
    path: MellinPath,
) -> Result<CheckResult> {
    let iterated = iterate_discrete(spec, n)?;
    let direct = excess(spec, n as f64)?;
    let qtol = (0.01 * tol).clamp(1e-12, 1e-6);
    distance_check("discrete iteration", &iterated, &direct, lambdas, tol, qtol, path)
}

/// `E_t(E_s(X)) = E_s(E_t(X))` in Mellin distance.
pub fn check_commutativity(
    spec: &DistributionSpec,
    s: f64,
    t: f64,
    lambdas: &[f64],
    tol: f64,
) -> Result<CheckResult> {
    let st = excess(&excess(spec, s)?, t)?;
    let ts = excess(&excess(spec, t)?, s)?;
    distance_check("excess commutativity", &st, &ts, lambdas, tol, 1e-10, MellinPath::Auto)
}

fn distance_check(
    name: &str,
    a: &DistributionSpec,
    b: &DistributionSpec,
    lambdas: &[f64],
    tol: f64,
    qtol: f64,
    path: MellinPath,
) -> Result<CheckResult> {
    use rayon::prelude::*;
    let gaps: Vec<(f64, f64)> = lambdas
        .par_iter()
        .map(|&l| {
            let ma = mellin_with(a, l, qtol, path)?.ln_value;
            // the reference side always uses the composition rules
            let mb = mellin_with(b, l, qtol, MellinPath::Auto)?.ln_value;
            Ok((l, ln_gap(ma, mb)))
        })
        .collect::<Result<_>>()?;
    let mut tally = Tally::new(name, tol);
    for (l, g) in gaps {
        tally.observe(g, || format!("lambda = {l}"));
    }
    Ok(tally.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{sample, survival, DistributionSpec as D};
    use crate::mellin::{mellin, mellin_distance};
    use crate::size_bias::size_bias;
    use crate::special::ln_gamma;
    use proptest::prelude::*;

    fn lgrid() -> Vec<f64> {
        (1..=10).map(|i| i as f64 * 0.5).collect()
    }

    #[test]
    fn exponential_is_a_fixed_point() {
        for &t in &[0.5, 1.0, 2.5] {
            let e = excess(&D::exponential(2.0), t).unwrap();
            assert!(mellin_distance(&e, &D::exponential(2.0), &lgrid()).unwrap() < 1e-8);
        }
    }

    #[test]
    fn uniform_becomes_beta_t() {
        let e = excess(&D::uniform(0.0, 1.0), 1.5).unwrap();
        assert!(mellin_distance(&e, &D::beta_t(2.5), &lgrid()).unwrap() < 1e-12);
        // survival (1 − x)^{t+1} through the quadrature path
        let s = survival(&e, 0.3).unwrap();
        assert!((s - 0.7f64.powf(2.5)).abs() < 1e-9);
    }

    #[test]
    fn zero_order_is_identity() {
        let d = D::lognormal(0.2, 0.7);
        assert_eq!(excess(&d, 0.0).unwrap(), d);
    }

    #[test]
    fn invalid_orders() {
        assert!(matches!(
            excess(&D::exponential(1.0), -0.5),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            excess_mellin(&D::exponential(1.0), 1.0, -1.5),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn mellin_examples() {
        let v = excess_mellin(&D::exponential(1.0), 3.0, 2.0).unwrap();
        assert!((v.value - 2.0).abs() < 1e-13);
        assert_eq!(excess_mellin(&D::lognormal(0.0, 1.0), 1.0, 0.0).unwrap().value, 1.0);
        let u = excess_mellin(&D::uniform(0.0, 1.0), 1.0, 1.0).unwrap();
        assert!((u.value - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn excess_mellin_agrees_with_wrapper() {
        let d = D::gamma(1.7);
        for &l in &lgrid() {
            let a = excess_mellin(&d, 0.8, l).unwrap().value;
            let b = mellin(&excess(&d, 0.8).unwrap(), l, 1e-10).unwrap().value;
            assert!((a - b).abs() / b < 1e-12);
        }
    }

    #[test]
    fn semigroup_examples() {
        let ln = D::lognormal(0.0, 1.0);
        assert!(check_semigroup(&ln, 1.0, 2.0, &lgrid(), 1e-5).unwrap().passed);
        let r = check_semigroup(&ln, 0.0, 2.0, &lgrid(), 0.0).unwrap();
        assert!(r.passed, "{r}");
        let u = D::uniform(0.0, 1.0);
        let nested = excess(&excess(&u, 1.0).unwrap(), 1.0).unwrap();
        assert!(mellin_distance(&nested, &D::beta_t(3.0), &lgrid()).unwrap() < 1e-8);
    }

    #[test]
    fn semigroup_by_survival_quadrature() {
        let ln = D::lognormal(0.0, 1.0);
        let r = check_semigroup_with(&ln, 1.0, 2.0, &[0.5, 1.0, 2.0], 1e-5, MellinPath::Survival)
            .unwrap();
        assert!(r.passed, "{r}");
    }

    #[test]
    fn iteration_examples() {
        let u = D::uniform(0.0, 1.0);
        assert_eq!(iterate_discrete(&u, 1).unwrap(), excess(&u, 1.0).unwrap());
        let r = check_iteration(&u, 3, &lgrid(), 1e-6, MellinPath::Auto).unwrap();
        assert!(r.passed, "{r}");
        let e5 = iterate_discrete(&D::exponential(1.0), 5).unwrap();
        assert!(mellin_distance(&e5, &D::exponential(1.0), &lgrid()).unwrap() < 1e-6);
        assert!(iterate_discrete(&u, 0).is_err());
        assert!(matches!(iterate_discrete(&u, 9), Err(Error::QuadratureFailure(_))));
    }

    #[test]
    fn iteration_on_uniform_by_quadrature() {
        let u = D::uniform(0.0, 1.0);
        let r = check_iteration(&u, 2, &[0.5, 1.5], 1e-6, MellinPath::Survival).unwrap();
        assert!(r.passed, "{r}");
    }

    #[test]
    fn commutes() {
        let d = D::gamma(0.6);
        assert!(check_commutativity(&d, 0.7, 2.2, &lgrid(), 1e-6).unwrap().passed);
    }

    #[test]
    fn sampler_matches_moments() {
        let d = D::lognormal(0.0, 0.5);
        let e = excess(&d, 1.5).unwrap();
        let batch = sample(&e, 100_000, 5).unwrap();
        for &l in &[0.5, 1.0, 2.0] {
            let exact = excess_mellin(&d, 1.5, l).unwrap().value;
            let (m, se) = batch.moment(l);
            assert!((m - exact).abs() < 4.0 * se, "lambda {l}: {m} vs {exact} (se {se})");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn factorization(shape in 0.3f64..4.0, t in 0.1f64..4.0, l in 0.1f64..5.0) {
            let d = D::gamma(shape);
            let lhs = mellin(&excess(&d, t).unwrap(), l, 1e-10).unwrap().ln_value;
            let beta = ln_gamma(t + 1.0) + ln_gamma(l + 1.0) - ln_gamma(l + t + 1.0);
            let biased = mellin(&size_bias(&d, t).unwrap(), l, 1e-10).unwrap().ln_value;
            prop_assert!(ln_gap(lhs, beta + biased) < 1e-7);
        }

        #[test]
        fn exponential_fixed_point(theta in 0.2f64..5.0, t in 0.0f64..6.0, l in 0.0f64..5.0) {
            let v = excess_mellin(&D::exponential(theta), t, l).unwrap();
            let exact = ln_gamma(l + 1.0) - l * theta.ln();
            prop_assert!((v.ln_value - exact).exp_m1().abs() < 1e-7);
        }

        #[test]
        fn commutativity(mu in -1.0f64..1.0, s2 in 0.1f64..2.0, s in 0.1f64..3.0, t in 0.1f64..3.0) {
            let d = D::lognormal(mu, s2);
            prop_assert!(check_commutativity(&d, s, t, &lgrid(), 1e-6).unwrap().passed);
        }
    }
}

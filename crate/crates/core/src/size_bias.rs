//! The size-biasing operator `X ↦ X_(t)`, reweighting by `x^t / E[X^t]`.

use crate::check::{CheckResult, Tally};
use crate::dist::{mellin_domain, survival_raw, DistributionSpec};
use crate::error::{Error, Result};
use crate::mellin::mellin_distance;
use crate::quad::Tolerance;

/// Law of `X_(t)`. Closed-form families are promoted; anything else is
/// wrapped.
pub fn size_bias(spec: &DistributionSpec, t: f64) -> Result<DistributionSpec> {
    spec.validate()?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("bias order must be >= 0, got {t}")));
    }
    let dom = mellin_domain(spec);
    if !dom.contains(t) {
        return Err(Error::OutOfDomain {
            lambda: t,
            domain: dom.to_string(),
        });
    }
    Ok(size_bias_unchecked(spec, t))
}

pub(crate) fn size_bias_unchecked(spec: &DistributionSpec, t: f64) -> DistributionSpec {
    if t == 0.0 {
        return spec.clone();
    }
    promote(spec, t).unwrap_or_else(|| DistributionSpec::size_biased(spec.clone(), t))
}

/// Closed-form `X_(t)` when the family is closed under biasing.
pub fn promote(spec: &DistributionSpec, t: f64) -> Option<DistributionSpec> {
    use DistributionSpec::*;
    if t == 0.0 {
        return Some(spec.clone());
    }
    if spec.is_deterministic() {
        return Some(spec.clone());
    }
    Some(match spec {
        Gamma { shape } => Gamma { shape: shape + t },
        Exponential { rate } => DistributionSpec::scaled(Gamma { shape: 1.0 + t }, 1.0 / rate),
        Beta { a, b } => Beta { a: a + t, b: *b },
        BetaT { t: b } => Beta { a: 1.0 + t, b: *b },
        Uniform { lo, hi } if *lo == 0.0 => DistributionSpec::scaled(Beta { a: 1.0 + t, b: 1.0 }, *hi),
        // the law of e^{σ²t}·X
        LogNormal { mu, sigma2 } => LogNormal {
            mu: mu + sigma2 * t,
            sigma2: *sigma2,
        },
        Scaled { base, factor } => DistributionSpec::scaled(size_bias_unchecked(base, t), *factor),
        SizeBiased { base, t: s } => size_bias_unchecked(base, s + t),
        ProductIndep { a, b } => {
            DistributionSpec::product(size_bias_unchecked(a, t), size_bias_unchecked(b, t))
        }
        Power { base, exponent } => {
            DistributionSpec::power(size_bias_unchecked(base, exponent * t), *exponent)
        }
        Excess { base, t: s } if *s > 0.0 => DistributionSpec::product(
            Beta { a: 1.0 + t, b: *s },
            size_bias_unchecked(base, s + t),
        ),
        Levy { levy } => Levy {
            levy: levy.tilt(t),
        },
        _ => return None,
    })
}

/// `E[X^t 1{X > x}] / E[X^t]`, the survival function of `X_(t)`.
pub fn biased_survival(spec: &DistributionSpec, t: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::InvalidArgument(format!("x must be >= 0, got {x}")));
    }
    spec.validate()?;
    let dom = mellin_domain(spec);
    if !dom.contains(t) {
        return Err(Error::OutOfDomain {
            lambda: t,
            domain: dom.to_string(),
        });
    }
    crate::dist::survival_raw(&DistributionSpec::size_biased(spec.clone(), t), x, &Tolerance::default())
}

fn distance_tally(name: &str, tol: f64, pairs: &[(&str, f64)]) -> CheckResult {
    let mut tally = Tally::new(name, tol);
    for (label, d) in pairs {
        tally.observe(*d, || (*label).to_string());
    }
    tally.finish()
}

/// Verifies the biasing properties by Mellin distance on `lambdas`:
/// scaling commutes with biasing; `M_{X_(t)}(λ) = M(t+λ)/M(t)`;
/// `(X_(s))_(t) = X_(s+t)`; `(X^s)_(t) = (X_(st))^s`; and
/// `(XY)_(t) = X_(t) Y_(t)` with `Y` an independent Beta(1, 1) copy.
pub fn check_properties(
    spec: &DistributionSpec,
    s: f64,
    t: f64,
    lambdas: &[f64],
    tol: f64,
) -> Result<CheckResult> {
    spec.validate()?;
    let bias = |d: &DistributionSpec, o: f64| size_bias(d, o);
    let wrap = |d: &DistributionSpec, o: f64| DistributionSpec::size_biased(d.clone(), o);

    // scale then bias vs bias then scale
    let k = 3.0;
    let p0 = mellin_distance(&wrap(&spec.scale(k)?, t), &bias(spec, t)?.scale(k)?, lambdas)?;

    // Mellin of the wrapper against the ratio of moments (via the promotion)
    let p1 = mellin_distance(&wrap(spec, t), &bias(spec, t)?, lambdas)?;

    let p2 = mellin_distance(&wrap(&wrap(spec, s), t), &bias(spec, s + t)?, lambdas)?;

    let pw = DistributionSpec::power(spec.clone(), s);
    let p3 = if mellin_domain(spec).contains(s * t) {
        mellin_distance(
            &wrap(&pw, t),
            &DistributionSpec::power(bias(spec, s * t)?, s),
            lambdas,
        )?
    } else {
        return Err(Error::OutOfDomain {
            lambda: s * t,
            domain: mellin_domain(spec).to_string(),
        });
    };

    let partner = DistributionSpec::beta(1.0, 1.0);
    let p4 = mellin_distance(
        &wrap(&DistributionSpec::product(spec.clone(), partner.clone()), t),
        &DistributionSpec::product(bias(spec, t)?, bias(&partner, t)?),
        lambdas,
    )?;

    let mut result = distance_tally(
        "size-bias properties",
        tol,
        &[
            ("scaling", p0),
            ("moment ratio", p1),
            ("semigroup", p2),
            ("power", p3),
            ("product", p4),
        ],
    );
    result.detail = format!(
        "scaling {p0:.2e}, ratio {p1:.2e}, semigroup {p2:.2e}, power {p3:.2e}, product {p4:.2e}; {}",
        result.detail
    );
    Ok(result)
}

/// `P(X_(t) > x) ≥ P(X > x) − tol` on `x_grid`.
pub fn check_dominance(
    spec: &DistributionSpec,
    t: f64,
    x_grid: &[f64],
    tol: f64,
) -> Result<CheckResult> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("bias order must be >= 0, got {t}")));
    }
    let biased = size_bias(spec, t)?;
    let qtol = Tolerance::default();
    let mut tally = Tally::new("stochastic dominance", tol);
    for &x in x_grid {
        if !(x >= 0.0) {
            return Err(Error::InvalidArgument(format!("x must be >= 0, got {x}")));
        }
        let base = survival_raw(spec, x, &qtol)?;
        let up = survival_raw(&biased, x, &qtol)?;
        tally.observe(base - up, || format!("x = {x}"));
    }
    Ok(tally.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{survival, DistributionSpec as D};
    use crate::levy::LevySpec;
    use crate::mellin::mellin;
    use proptest::prelude::*;

    fn lgrid() -> Vec<f64> {
        (1..=8).map(|i| i as f64 * 0.5).collect()
    }

    #[test]
    fn promotion_examples() {
        assert_eq!(size_bias(&D::gamma(2.0), 1.5).unwrap(), D::gamma(3.5));
        let d = D::lognormal(0.0, 1.0);
        assert_eq!(size_bias(&d, 0.0).unwrap(), d);
        let b = size_bias(&d, 2.0).unwrap();
        let m = mellin(&b, 1.0, 1e-10).unwrap().value;
        assert!((m - 2.5f64.exp()).abs() < 1e-12 * m);
        assert!(size_bias(&D::exponential(1.0), -1.0).is_err());
        assert!(matches!(
            size_bias(&D::Levy { levy: LevySpec::compound_poisson(0.0, 0.0, 1.0, 1.0) }, 0.5),
            Ok(D::Levy { .. })
        ));
    }

    #[test]
    fn biased_survival_examples() {
        assert_eq!(biased_survival(&D::exponential(1.0), 1.0, 0.0).unwrap(), 1.0);
        let u = biased_survival(&D::uniform(0.0, 1.0), 1.0, 0.5).unwrap();
        assert!((u - 0.75).abs() < 1e-9);
        let g = biased_survival(&D::exponential(1.0), 2.0, 1.0).unwrap();
        assert!((g - 2.5 * (-1.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn property_examples() {
        let r = check_properties(&D::gamma(1.0), 1.0, 2.0, &lgrid(), 1e-10).unwrap();
        assert!(r.passed, "{r}");
        let r = check_properties(&D::uniform(0.0, 1.0), 1.0, 1.0, &lgrid(), 1e-8).unwrap();
        assert!(r.passed, "{r}");
    }

    #[test]
    fn scale_commutes_with_bias() {
        let d = D::uniform(0.0, 1.0);
        let a = size_bias(&d.scale(3.0).unwrap(), 2.0).unwrap();
        let b = D::size_biased(d, 2.0).scale(3.0).unwrap();
        assert!(mellin_distance(&a, &b, &lgrid()).unwrap() < 1e-10);
    }

    #[test]
    fn dominance_examples() {
        let xs: Vec<f64> = (0..=10).map(|i| i as f64 * 0.5).collect();
        assert!(check_dominance(&D::exponential(1.0), 1.0, &xs, 1e-9).unwrap().passed);
        let r = check_dominance(&D::gamma(2.0), 0.0, &xs, 0.0).unwrap();
        assert!(r.passed && r.worst == 0.0);
        let us: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
        assert!(check_dominance(&D::uniform(0.0, 1.0), 3.0, &us, 1e-9).unwrap().passed);
    }

    #[test]
    fn grid_bias_uses_integration_by_parts() {
        let pts: Vec<(f64, f64)> = (0..=50).map(|i| (i as f64 / 50.0, 1.0 - i as f64 / 50.0)).collect();
        let g = D::grid(&pts).unwrap();
        for &x in &[0.1, 0.5, 0.9] {
            let v = biased_survival(&g, 2.0, x).unwrap();
            assert!((v - (1.0 - x * x * x)).abs() < 1e-8, "{x}: {v}");
        }
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
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn semigroup(spec in family(), s in 0.0f64..3.0, t in 0.0f64..3.0) {
            let lhs = D::size_biased(D::size_biased(spec.clone(), s), t);
            let rhs = size_bias(&spec, s + t).unwrap();
            prop_assert!(mellin_distance(&lhs, &rhs, &lgrid()).unwrap() < 1e-8);
        }

        #[test]
        fn promotions_agree_with_wrapper(spec in family(), t in 0.0f64..5.0) {
            let promoted = size_bias(&spec, t).unwrap();
            let wrapped = D::size_biased(spec, t);
            prop_assert!(mellin_distance(&promoted, &wrapped, &lgrid()).unwrap() < 1e-8);
        }

        #[test]
        fn biased_survival_matches_promoted_law(spec in family(), t in 0.1f64..4.0, q in 0.05f64..0.95) {
            let promoted = size_bias(&spec, t).unwrap();
            let (lo, hi) = spec.support();
            let x = if hi.is_finite() { lo + q * (hi - lo) } else { q * 4.0 };
            let direct = biased_survival(&spec, t, x).unwrap();
            let closed = survival(&promoted, x).unwrap();
            prop_assert!((direct - closed).abs() < 1e-8, "{} t={} x={}: {} vs {}", spec, t, x, direct, closed);
        }

        #[test]
        fn dominance_holds(spec in family(), t in 0.0f64..5.0) {
            let (lo, hi) = spec.support();
            let top = if hi.is_finite() { hi } else { 8.0 };
            let xs: Vec<f64> = (0..=16).map(|i| lo + (top - lo) * i as f64 / 16.0).collect();
            prop_assert!(check_dominance(&spec, t, &xs, 1e-9).unwrap().passed);
        }
    }
}

//! Seeded batteries of the structural identities, shared by the
//! `check-suite` command and the acceptance tests.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::check::{CheckResult, Tally};
use crate::dist::{sample, DistributionSpec};
use crate::error::Result;
use crate::excess::{
    check_commutativity, check_iteration, check_semigroup, excess, excess_mellin,
};
use crate::levy::{
    check_delta_decay, check_exponent_shape, delta_formula, dist_from_levy, levy_exponent,
    LevySpec,
};
use crate::limit::{check_fixed_point, estimate_c, indeterminacy_demo, limit_law};
use crate::mellin::{
    check_log_convexity, check_lyapunov, check_ratio_monotone, default_lambda_grid, ln_gap,
    log_mellin_profile, mellin, mellin_distance, MellinPath,
};
use crate::rng::{mix, rng_from_seed, Rng};
use crate::size_bias::{check_dominance, check_properties};
use crate::tmono::{
    beta_mix, check_cm_limit, check_downward_closure, check_k_monotone, default_monotone_grid,
    recover_mixing_mellin, recovered_distance,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub seed: u64,
    pub passed: bool,
    pub results: Vec<CheckResult>,
}

impl SuiteReport {
    fn new(name: &str, seed: u64, results: Vec<CheckResult>) -> Self {
        SuiteReport {
            name: name.into(),
            seed,
            passed: results.iter().all(|r| r.passed),
            results,
        }
    }
}

fn gap_tally(name: &str, tol: f64, gaps: impl IntoIterator<Item = (String, f64)>) -> CheckResult {
    let mut t = Tally::new(name, tol);
    for (at, g) in gaps {
        t.observe(g, || at);
    }
    t.finish()
}

/// Draws an analytic family with random parameters.
pub fn random_family(rng: &mut Rng) -> DistributionSpec {
    use DistributionSpec as D;
    match rng.random_range(0..7u32) {
        0 => D::exponential(rng.random_range(0.2..5.0)),
        1 => D::gamma(rng.random_range(0.2..6.0)),
        2 => D::beta(rng.random_range(0.3..5.0), rng.random_range(0.3..5.0)),
        3 => D::beta_t(rng.random_range(0.2..6.0)),
        4 => D::lognormal(rng.random_range(-1.0..1.0), rng.random_range(0.05..1.5)),
        5 => {
            let lo = if rng.random_bool(0.5) { 0.0 } else { rng.random_range(0.05..2.0) };
            D::uniform(lo, lo + rng.random_range(0.1..3.0))
        }
        _ => D::Levy {
            levy: LevySpec::compound_poisson(
                rng.random_range(-0.5..0.5),
                rng.random_range(0.05..1.0),
                rng.random_range(0.2..2.0),
                rng.random_range(0.2..2.0),
            ),
        },
    }
}

/// `𝔤_a = 𝔟_{a,b} 𝔤_{a+b}`, `𝔟_{a,b+c} = 𝔟_{a,b} 𝔟_{a+b,c}`,
/// `(𝔟_{a,b})_(t) = 𝔟_{a+t,b}` and `(𝔤_a)_(t) = 𝔤_{a+t}` over random
/// triples, compared through the Mellin composition rules.
pub fn beta_gamma_algebra(draws: usize, seed: u64, tol: f64) -> Result<CheckResult> {
    use DistributionSpec as D;
    let mut rng = rng_from_seed(mix(seed, "beta-gamma"));
    let lambdas = default_lambda_grid();
    let mut tally = Tally::new("beta-gamma algebra", tol);
    for i in 0..draws {
        let a = rng.random_range(0.1..5.0);
        let b = rng.random_range(0.1..5.0);
        let c = rng.random_range(0.1..5.0);
        let pairs = [
            ("gamma split", D::gamma(a), D::product(D::beta(a, b), D::gamma(a + b))),
            (
                "beta split",
                D::beta(a, b + c),
                D::product(D::beta(a, b), D::beta(a + b, c)),
            ),
            ("beta bias", D::size_biased(D::beta(a, b), c), D::beta(a + c, b)),
            ("gamma bias", D::size_biased(D::gamma(a), c), D::gamma(a + c)),
        ];
        for (label, lhs, rhs) in &pairs {
            let d = mellin_distance(lhs, rhs, &lambdas)?;
            tally.observe(d, || format!("draw {i} {label} (a={a:.4}, b={b:.4}, c={c:.4})"));
        }
    }
    Ok(tally.finish())
}

/// Log-convexity, ratio monotonicity, Lyapunov, dominance and the biasing
/// properties over `draws` random (family, t, s, λ).
pub fn structural_suite(draws: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = rng_from_seed(mix(seed, "structural"));
    let grid = default_lambda_grid();
    let mut results = Vec::with_capacity(draws + 1);
    results.push(beta_gamma_algebra(100, seed, 1e-10)?);
    for i in 0..draws {
        let spec = random_family(&mut rng);
        let t = rng.random_range(0.1..4.0);
        let s = rng.random_range(0.1..3.0);
        let lambda = rng.random_range(0.25..5.0);

        let convex = check_log_convexity(&log_mellin_profile(&spec, &grid)?, 1e-9);
        let t_grid = [0.0, 0.25 * t, 0.5 * t, t, 2.0 * t];
        let ratio = check_ratio_monotone(&spec, lambda, &t_grid, 1e-10)?;
        let lyap = check_lyapunov(
            &spec,
            &[(0.5 * lambda, lambda), (lambda, lambda), (lambda, 2.0 * lambda)],
            1e-10,
        )?;
        let mean = mellin(&spec, 1.0, 1e-10)?.value;
        let xs: Vec<f64> = [0.1, 0.5, 1.0, 2.0, 4.0].iter().map(|k| k * mean).collect();
        let dom = check_dominance(&spec, t, &xs, 1e-9)?;
        let props = check_properties(&spec, s, t, &[0.5, lambda, 3.0], 1e-8)?;
        results.push(CheckResult::all(
            format!("draw {i}: {spec} t={t:.3} s={s:.3} lambda={lambda:.3}"),
            &[convex, ratio, lyap, dom, props],
        ));
    }
    Ok(SuiteReport::new("structural", seed, results))
}

/// Beta-mixture certificates, downward closure, recovery, the
/// completely-monotone limit, and the expected rejection of the flat
/// density as 2-monotone.
pub fn t_monotone_suite(seed: u64) -> Result<SuiteReport> {
    use DistributionSpec as D;
    let mut rng = rng_from_seed(mix(seed, "t-monotone"));
    let grid = default_lambda_grid();
    let mixers = |rng: &mut Rng| match rng.random_range(0..5u32) {
        0 => D::gamma(rng.random_range(0.5..4.0)),
        1 => D::exponential(rng.random_range(0.3..3.0)),
        2 => D::lognormal(rng.random_range(-0.5..0.5), rng.random_range(0.05..0.8)),
        3 => {
            let lo = rng.random_range(0.0..1.0);
            D::uniform(lo, lo + rng.random_range(0.2..2.0))
        }
        _ => D::point_mass(rng.random_range(0.5..2.0)),
    };

    let mut certs = Vec::new();
    for _ in 0..8 {
        let y = mixers(&mut rng);
        let t = rng.random_range(1.0..6.0);
        let z = beta_mix(&y, t)?;
        let k = t.floor() as usize;
        let mut r = check_k_monotone(&z, k, &default_monotone_grid(&z)?, 1e-7)?;
        r.name = format!("{k}-monotone beta mixture of {y}, t={t:.3}");
        certs.push(r);
    }
    let certificates = CheckResult::all("beta-mixture certificates", &certs);

    let mut closures = Vec::new();
    for _ in 0..20 {
        let y = mixers(&mut rng);
        let t = rng.random_range(0.2..5.0);
        let s = t * rng.random_range(0.05..0.95);
        closures.push(check_downward_closure(&y, t, s, &grid, 1e-8)?);
    }
    let closure = CheckResult::all("downward closure", &closures);

    let mut recoveries = Tally::new("recovery inverts mixing", 1e-7);
    let mut certified = Vec::new();
    for _ in 0..10 {
        let y = mixers(&mut rng);
        let t = rng.random_range(0.2..5.0);
        let rec = recover_mixing_mellin(&beta_mix(&y, t)?, t, &grid)?;
        let d = recovered_distance(&rec, &y)?;
        recoveries.observe(d, || format!("{y}, t={t:.3}"));
        certified.push(rec.certificate);
    }
    let recovery = CheckResult::all(
        "recovery",
        &[recoveries.finish(), CheckResult::all("recovered transforms certified", &certified)],
    );

    let xs: Vec<f64> = (0..=200).map(|i| i as f64 * 0.05).collect();
    let cm = check_cm_limit(&[1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0], &xs)?;

    let u = D::uniform(0.0, 1.0);
    let flat = check_k_monotone(&u, 2, &default_monotone_grid(&u)?, 1e-7)?;
    let flat_rec = recover_mixing_mellin(&u, 2.0, &grid)?;
    let rejected = CheckResult {
        name: "Uniform(0, 1) rejected as 2-monotone".into(),
        passed: !flat.passed && !flat_rec.certificate.passed,
        worst: if flat.passed { f64::INFINITY } else { -flat.worst },
        checked: 2,
        detail: format!(
            "difference certificate: {}; recovered transform: {}",
            if flat.passed { "accepted" } else { "rejected" },
            if flat_rec.certificate.passed { "accepted" } else { "rejected" }
        ),
    };

    Ok(SuiteReport::new(
        "t-monotone",
        seed,
        vec![certificates, closure, recovery, cm, rejected],
    ))
}

/// Fixed point, semigroup, iteration and commutativity of the excess
/// operator.
pub fn excess_suite(seed: u64) -> Result<SuiteReport> {
    use DistributionSpec as D;
    let grid = default_lambda_grid();
    let mut rng = rng_from_seed(mix(seed, "excess"));

    let mut fixed = Tally::new("exponential fixed point", 1e-7);
    for &t in &[0.5, 1.0, 2.0, 5.0] {
        for &l in &grid {
            let v = excess_mellin(&D::exponential(1.0), t, l)?;
            let exact = crate::special::ln_gamma(l + 1.0);
            fixed.observe((v.ln_value - exact).exp_m1().abs(), || format!("t={t}, lambda={l}"));
        }
    }
    let semigroup = check_semigroup(&D::lognormal(0.0, 1.0), 1.0, 2.0, &grid, 1e-5)?;
    let iteration = check_iteration(&D::uniform(0.0, 1.0), 3, &grid, 1e-6, MellinPath::Auto)?;

    let mut comm = Vec::new();
    let mut fact = Tally::new("beta factorization", 1e-7);
    for _ in 0..20 {
        let spec = random_family(&mut rng);
        let s = rng.random_range(0.1..3.0);
        let t = rng.random_range(0.1..3.0);
        comm.push(check_commutativity(&spec, s, t, &grid, 1e-6)?);
        let e = excess(&spec, t)?;
        let factored = D::product(D::beta_t(t), crate::size_bias::size_bias(&spec, t)?);
        let d = mellin_distance(&e, &factored, &grid)?;
        fact.observe(d, || format!("{spec}, t={t:.3}"));
    }
    Ok(SuiteReport::new(
        "excess",
        seed,
        vec![
            fixed.finish(),
            semigroup,
            iteration,
            CheckResult::all("commutativity", &comm),
            fact.finish(),
        ],
    ))
}

/// Lévy exponent shape, the delta formula, the correction decay and the
/// `c` estimate of the compound-Poisson example.
pub fn levy_suite(seed: u64) -> Result<SuiteReport> {
    let mut rng = rng_from_seed(mix(seed, "levy"));
    let lambdas: Vec<f64> = (0..=40).map(|i| i as f64 * 0.25).collect();
    let t_grid: Vec<f64> = (1..=50).map(f64::from).collect();
    let mut shapes = Vec::new();
    let mut decays = Vec::new();
    let mut fd = Tally::new("delta formula vs finite differences", 1e-10);
    for _ in 0..20 {
        let spec = if rng.random_bool(0.5) {
            LevySpec::compound_poisson(
                rng.random_range(-1.0..1.0),
                rng.random_range(0.0..2.0),
                rng.random_range(0.1..3.0),
                rng.random_range(0.1..3.0),
            )
        } else {
            let n = rng.random_range(1..4usize);
            let atoms: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.random_range(0.1..3.0), rng.random_range(0.05..3.0)))
                .collect();
            LevySpec::atoms(rng.random_range(-1.0..1.0), rng.random_range(0.0..2.0), &atoms)
        };
        shapes.push(check_exponent_shape(&spec, &lambdas, 1e-10)?);
        decays.push(check_delta_decay(&spec, &t_grid, 1.0, 1e-14)?);
        for &t in &[0.5, 3.0, 20.0] {
            let s = rng.random_range(0.1..3.0);
            let g = |l: f64| levy_exponent(&spec, l);
            let diff = g(t + 1.0 + s) - g(t + 1.0) - g(t + s) + g(t);
            let f = delta_formula(&spec, t, s);
            fd.observe((f - diff).abs() / (1.0 + diff.abs()), || format!("{spec:?} t={t}"));
        }
    }

    let example = dist_from_levy(&LevySpec::compound_poisson(0.0, 0.4, 1.0, 1.0))?;
    let cs: Vec<f64> = t_grid
        .iter()
        .map(|&t| Ok(estimate_c(&example, t, 1.0)?.value))
        .collect::<Result<_>>()?;
    let mut trend = Tally::new("c estimates decrease", 0.0);
    for i in 1..cs.len() {
        trend.observe(cs[i] - cs[i - 1], || format!("t = {}", t_grid[i]));
    }
    let mut near = Tally::new("c(50) near sigma2", 0.01);
    near.observe((cs[cs.len() - 1] - 0.4).abs(), || "t = 50".into());

    let gauss = dist_from_levy(&LevySpec::gaussian(0.3, 0.7))?;
    let mut lognormal = Tally::new("Gaussian exponent is log-normal", 1e-10);
    lognormal.observe(
        mellin_distance(&gauss, &DistributionSpec::lognormal(0.3, 0.7), &default_lambda_grid())?,
        || "lambda grid".into(),
    );

    let atoms = dist_from_levy(&LevySpec::atoms(0.1, 0.0, &[(1.0, 0.5), (0.5, 1.5)]))?;
    let batch = sample(&atoms, 100_000, mix(seed, "levy-sample"))?;
    let mut mc = Tally::new("sampler moments within 4 standard errors", 0.0);
    for &l in &[0.5, 1.0, 2.0] {
        let (m, se) = batch.moment(l);
        let exact = mellin(&atoms, l, 1e-10)?.value;
        mc.observe((m - exact).abs() - 4.0 * se, || format!("lambda = {l}"));
    }

    Ok(SuiteReport::new(
        "levy",
        seed,
        vec![
            CheckResult::all("exponent shape", &shapes),
            CheckResult::all("correction decay", &decays),
            fd.finish(),
            trend.finish(),
            near.finish(),
            lognormal.finish(),
            mc.finish(),
        ],
    ))
}

/// Fixed points of the limit laws, the functional equation, log-normal
/// self-similarity and the integer-moment part of the indeterminacy
/// demonstration.
pub fn limit_suite(seed: u64) -> Result<SuiteReport> {
    let mut rng = rng_from_seed(mix(seed, "limit"));
    let grid = default_lambda_grid();

    let mut fixed = Vec::new();
    for &alpha in &FIXED_POINT_ALPHAS {
        for &c in &FIXED_POINT_CS {
            for &s in &FIXED_POINT_STEPS {
                fixed.push(check_fixed_point(&limit_law(alpha, c)?, s, &grid, 1e-12)?);
            }
        }
    }

    let mut functional = Tally::new("functional equation", 1e-12);
    for _ in 0..200 {
        let law = limit_law(rng.random_range(0.1..10.0), rng.random_range(0.0..3.0))?;
        let s = rng.random_range(0.0..4.0);
        let m = rng.random_range(0.0..4.0);
        let lhs = law.ln_mellin_x(s + m);
        let rhs = law.c * s * m + law.ln_mellin_x(s) + law.ln_mellin_x(m);
        functional.observe(ln_gap(lhs, rhs), || format!("s={s:.3}, mu={m:.3}"));
    }

    let mut selfsim = Tally::new("log-normal c estimates", 1e-10);
    for &s2 in &[0.3, 1.0] {
        let spec = DistributionSpec::lognormal(0.0, s2);
        for &t in &[1.0, 5.0, 20.0, 40.0] {
            for &s in &[0.5, 1.0, 2.0] {
                let c = estimate_c(&spec, t, s)?.value;
                selfsim.observe((c - s2).abs(), || format!("sigma2={s2}, t={t}, s={s}"));
            }
        }
    }

    let demo = indeterminacy_demo(0.0, 1.0, 0.5, 8, 0.5)?;
    let mut integer = gap_tally(
        "perturbed log-normal integer moments",
        1e-6,
        demo.integer_moments
            .iter()
            .map(|r| (format!("k = {}", r.lambda), r.rel_gap)),
    );
    integer.detail = format!(
        "{}; gap at lambda = {} is {:.3e}",
        integer.detail, demo.probe.lambda, demo.probe.rel_gap
    );

    Ok(SuiteReport::new(
        "limit",
        seed,
        vec![
            CheckResult::all("limit fixed points", &fixed),
            functional.finish(),
            selfsim.finish(),
            integer,
        ],
    ))
}

pub const FIXED_POINT_ALPHAS: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 5.0];
pub const FIXED_POINT_CS: [f64; 5] = [0.0, 0.1, 0.5, 1.0, 2.0];
pub const FIXED_POINT_STEPS: [f64; 5] = [0.0, 0.5, 1.0, 2.5, 5.0];

/// Every battery, in a fixed order.
pub fn full_suite(seed: u64, structural_draws: usize) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        structural_suite(structural_draws, seed)?,
        t_monotone_suite(seed)?,
        excess_suite(seed)?,
        levy_suite(seed)?,
        limit_suite(seed)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_families_validate() {
        let mut rng = rng_from_seed(1);
        for _ in 0..200 {
            random_family(&mut rng).validate().unwrap();
        }
    }

    #[test]
    fn suites_pass_and_are_reproducible() {
        let a = structural_suite(10, 3).unwrap();
        for r in &a.results {
            assert!(r.passed, "{r}");
        }
        assert_eq!(a, structural_suite(10, 3).unwrap());
        for report in [t_monotone_suite(3), excess_suite(3), levy_suite(3), limit_suite(3)] {
            let report = report.unwrap();
            for r in &report.results {
                assert!(r.passed, "{}: {r}", report.name);
            }
        }
    }
}

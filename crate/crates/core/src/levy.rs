//! Laws whose logarithm is infinitely divisible.
//!
//! `X = e^L` with log-Mellin transform
//!
//! ```text
//! g(λ) = dλ + σ²λ²/2 + ∫ (e^{-λx} − 1 + λx·1{x ≤ 1}) π(dx)
//! ```
//!
//! The jump measure `π` lives on `(0, ∞)` and enters `L` with a negative
//! sign, so `L = d + b + σN − S` where `b = ∫_{x≤1} x π(dx)` and `S` is the
//! compound-Poisson sum of jumps drawn from `π`. Only finite jump measures
//! are supported: exponential jumps or a finite set of atoms.

use rand::Rng as _;
use rand_distr::{Distribution, Gamma, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::check::{CheckResult, Tally};
use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::quad::{self, Line, Tolerance};
use crate::rng::Rng;
use crate::special::{gamma_p, normal_pdf, normal_sf};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub mass: f64,
    pub atom: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Jumps {
    Empty,
    /// `π(dx) = rate · (1/m) e^{-x/m} dx` with `m = jump_mean`.
    CompoundPoisson { rate: f64, jump_mean: f64 },
    FiniteAtoms { atoms: Vec<Atom> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevySpec {
    pub d: f64,
    pub sigma2: f64,
    pub jumps: Jumps,
}

impl LevySpec {
    pub fn gaussian(d: f64, sigma2: f64) -> Self {
        LevySpec {
            d,
            sigma2,
            jumps: Jumps::Empty,
        }
    }

    pub fn compound_poisson(d: f64, sigma2: f64, rate: f64, jump_mean: f64) -> Self {
        LevySpec {
            d,
            sigma2,
            jumps: Jumps::CompoundPoisson { rate, jump_mean },
        }
    }

    pub fn atoms(d: f64, sigma2: f64, atoms: &[(f64, f64)]) -> Self {
        LevySpec {
            d,
            sigma2,
            jumps: Jumps::FiniteAtoms {
                atoms: atoms
                    .iter()
                    .map(|&(mass, atom)| Atom { mass, atom })
                    .collect(),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.d.is_finite() {
            return Err(Error::InvalidSpec("levy drift must be finite".into()));
        }
        if !(self.sigma2 >= 0.0 && self.sigma2.is_finite()) {
            return Err(Error::InvalidSpec("levy sigma2 must be >= 0".into()));
        }
        match &self.jumps {
            Jumps::Empty => Ok(()),
            Jumps::CompoundPoisson { rate, jump_mean } => {
                if *rate > 0.0 && *jump_mean > 0.0 && rate.is_finite() && jump_mean.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidSpec(
                        "compound Poisson needs rate > 0 and jump_mean > 0".into(),
                    ))
                }
            }
            Jumps::FiniteAtoms { atoms } => {
                if atoms
                    .iter()
                    .all(|a| a.mass > 0.0 && a.atom > 0.0 && a.mass.is_finite() && a.atom.is_finite())
                {
                    Ok(())
                } else {
                    Err(Error::InvalidSpec(
                        "atoms need positive mass and location".into(),
                    ))
                }
            }
        }
    }

    pub fn has_jumps(&self) -> bool {
        match &self.jumps {
            Jumps::Empty => false,
            Jumps::FiniteAtoms { atoms } => !atoms.is_empty(),
            Jumps::CompoundPoisson { .. } => true,
        }
    }

    /// Total mass of the jump measure.
    pub fn jump_rate(&self) -> f64 {
        match &self.jumps {
            Jumps::Empty => 0.0,
            Jumps::CompoundPoisson { rate, .. } => *rate,
            Jumps::FiniteAtoms { atoms } => atoms.iter().map(|a| a.mass).sum(),
        }
    }

    /// `∫_{(0,1]} x π(dx)`.
    pub fn compensator(&self) -> f64 {
        match &self.jumps {
            Jumps::Empty => 0.0,
            Jumps::CompoundPoisson { rate, jump_mean } => {
                // ∫_0^1 x (r/m) e^{-x/m} dx = r m (1 − e^{-1/m}(1 + 1/m))
                let beta = 1.0 / jump_mean;
                rate * jump_mean * gamma_p(2.0, beta)
            }
            Jumps::FiniteAtoms { atoms } => atoms
                .iter()
                .filter(|a| a.atom <= 1.0)
                .map(|a| a.mass * a.atom)
                .sum(),
        }
    }

    /// Left end of the real Mellin domain (exclusive for exponential jumps).
    pub fn lower_lambda(&self) -> f64 {
        match &self.jumps {
            Jumps::CompoundPoisson { jump_mean, .. } => -1.0 / jump_mean,
            _ => f64::NEG_INFINITY,
        }
    }

    /// Drift of `L` once the compensator is folded in: `L = shift + σN − S`.
    fn shift(&self) -> f64 {
        self.d + self.compensator()
    }

    /// Exponentially tilted spec: the law of `ln X_(t)`, i.e. `g_t(λ) = g(λ+t) − g(t)`.
    pub fn tilt(&self, t: f64) -> LevySpec {
        let tilted_comp;
        let jumps = match &self.jumps {
            Jumps::Empty => {
                tilted_comp = 0.0;
                Jumps::Empty
            }
            Jumps::CompoundPoisson { rate, jump_mean } => {
                let r = rate / (1.0 + t * jump_mean);
                let m = jump_mean / (1.0 + t * jump_mean);
                tilted_comp = r * m * gamma_p(2.0, 1.0 / m);
                Jumps::CompoundPoisson {
                    rate: r,
                    jump_mean: m,
                }
            }
            Jumps::FiniteAtoms { atoms } => {
                let atoms: Vec<Atom> = atoms
                    .iter()
                    .map(|a| Atom {
                        mass: a.mass * (-t * a.atom).exp(),
                        atom: a.atom,
                    })
                    .collect();
                tilted_comp = atoms
                    .iter()
                    .filter(|a| a.atom <= 1.0)
                    .map(|a| a.mass * a.atom)
                    .sum();
                Jumps::FiniteAtoms { atoms }
            }
        };
        LevySpec {
            d: self.d + self.sigma2 * t + self.compensator() - tilted_comp,
            sigma2: self.sigma2,
            jumps,
        }
    }

    /// Enumerate jump-count configurations of a finite atom set as
    /// `(probability, total jump size)`.
    fn atom_configurations(atoms: &[Atom]) -> Result<Vec<(f64, f64)>> {
        let mut out = vec![(1.0, 0.0)];
        for a in atoms {
            let pmf = poisson_pmf_table(a.mass);
            let mut next = Vec::with_capacity(out.len() * pmf.len());
            for &(p, s) in &out {
                for (k, &q) in pmf.iter().enumerate() {
                    let pq = p * q;
                    if pq > 1e-22 {
                        next.push((pq, s + k as f64 * a.atom));
                    }
                }
            }
            if next.len() > 500_000 {
                return Err(Error::QuadratureFailure(
                    "too many atom configurations to enumerate".into(),
                ));
            }
            out = next;
        }
        Ok(out)
    }

    /// `P(L > y)`.
    pub fn log_survival(&self, y: f64) -> Result<f64> {
        let sigma = self.sigma2.sqrt();
        let z = y - self.shift();
        match &self.jumps {
            Jumps::Empty => Ok(if sigma > 0.0 {
                normal_sf(z / sigma)
            } else if z < 0.0 {
                1.0
            } else {
                0.0
            }),
            Jumps::FiniteAtoms { atoms } => {
                let configs = Self::atom_configurations(atoms)?;
                Ok(configs
                    .iter()
                    .map(|&(p, s)| {
                        p * if sigma > 0.0 {
                            normal_sf((z + s) / sigma)
                        } else if z + s < 0.0 {
                            1.0
                        } else {
                            0.0
                        }
                    })
                    .sum::<f64>()
                    .min(1.0))
            }
            Jumps::CompoundPoisson { rate, jump_mean } => {
                let pmf = poisson_pmf_table(*rate);
                let mut total = 0.0;
                for (n, &p) in pmf.iter().enumerate() {
                    let term = if n == 0 {
                        if sigma > 0.0 {
                            normal_sf(z / sigma)
                        } else if z < 0.0 {
                            1.0
                        } else {
                            0.0
                        }
                    } else if sigma > 0.0 {
                        gamma_expectation(n as f64, *jump_mean, |g| normal_sf((z + g) / sigma))?
                    } else if z < 0.0 {
                        gamma_p(n as f64, -z / jump_mean)
                    } else {
                        0.0
                    };
                    total += p * term;
                }
                Ok(total.min(1.0))
            }
        }
    }

    /// Density of `L` at `y`; requires a Gaussian component.
    pub fn log_density(&self, y: f64) -> Result<f64> {
        let sigma = self.sigma2.sqrt();
        if sigma == 0.0 {
            return Err(Error::DensityUnavailable(
                "log-infinitely-divisible law without Gaussian part".into(),
            ));
        }
        let z = y - self.shift();
        let phi = |u: f64| normal_pdf(u / sigma) / sigma;
        match &self.jumps {
            Jumps::Empty => Ok(phi(z)),
            Jumps::FiniteAtoms { atoms } => Ok(Self::atom_configurations(atoms)?
                .iter()
                .map(|&(p, s)| p * phi(z + s))
                .sum()),
            Jumps::CompoundPoisson { rate, jump_mean } => {
                let pmf = poisson_pmf_table(*rate);
                let mut total = 0.0;
                for (n, &p) in pmf.iter().enumerate() {
                    let term = if n == 0 {
                        phi(z)
                    } else {
                        gamma_expectation(n as f64, *jump_mean, |g| phi(z + g))?
                    };
                    total += p * term;
                }
                Ok(total)
            }
        }
    }

    /// Draws `n` values of `L`.
    pub fn sample_log(&self, n: usize, rng: &mut Rng) -> Result<Vec<f64>> {
        let sigma = self.sigma2.sqrt();
        let shift = self.shift();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let gauss: f64 = if sigma > 0.0 {
                sigma * rng.sample::<f64, _>(StandardNormal)
            } else {
                0.0
            };
            let jumps = match &self.jumps {
                Jumps::Empty => 0.0,
                Jumps::CompoundPoisson { rate, jump_mean } => {
                    let k = poisson_draw(*rate, rng)?;
                    if k == 0 {
                        0.0
                    } else {
                        Gamma::new(k as f64, *jump_mean)
                            .map_err(|e| Error::InvalidSpec(e.to_string()))?
                            .sample(rng)
                    }
                }
                Jumps::FiniteAtoms { atoms } => {
                    let mut s = 0.0;
                    for a in atoms {
                        s += poisson_draw(a.mass, rng)? as f64 * a.atom;
                    }
                    s
                }
            };
            out.push(shift + gauss - jumps);
        }
        Ok(out)
    }
}

fn poisson_draw(rate: f64, rng: &mut Rng) -> Result<u64> {
    let p = Poisson::new(rate).map_err(|e| Error::InvalidSpec(e.to_string()))?;
    Ok(p.sample(rng) as u64)
}

/// Poisson pmf truncated once the remaining tail mass is below 1e-17.
fn poisson_pmf_table(rate: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut p = (-rate).exp();
    let mut k = 0u32;
    loop {
        out.push(p);
        k += 1;
        p *= rate / k as f64;
        // past the mode the tail is below a geometric series in rate/(k+1)
        let ratio = rate / (k as f64 + 1.0);
        if (ratio < 1.0 && p / (1.0 - ratio) < 1e-18) || k > 10_000 {
            break;
        }
    }
    out
}

/// `E[h(G)]` for `G ~ Gamma(shape n, scale m)`, integrated in log coordinates.
fn gamma_expectation<H: Fn(f64) -> f64>(n: f64, m: f64, h: H) -> Result<f64> {
    let ln_norm = crate::special::ln_gamma(n) + n * m.ln();
    let est = quad::integrate_line(
        |w| {
            let g = w.exp();
            let hv = h(g);
            if hv == 0.0 {
                return Ok(0.0);
            }
            Ok(hv * (n * w - g / m - ln_norm).exp())
        },
        Line::around((n * m).ln()),
        &Tolerance::relative(1e-11),
    )?;
    Ok(est.value)
}

/// `g(λ)`; `+∞` below the Mellin domain of exponential jumps.
pub fn levy_exponent(spec: &LevySpec, lambda: f64) -> f64 {
    let base = spec.d * lambda + 0.5 * spec.sigma2 * lambda * lambda;
    match &spec.jumps {
        Jumps::Empty => base,
        Jumps::CompoundPoisson { rate, jump_mean } => {
            if lambda <= -1.0 / jump_mean {
                return f64::INFINITY;
            }
            // ∫(e^{-λx} − 1)π(dx) = −rλm/(1+λm)
            base - rate * lambda * jump_mean / (1.0 + lambda * jump_mean)
                + lambda * spec.compensator()
        }
        Jumps::FiniteAtoms { atoms } => {
            base + atoms
                .iter()
                .map(|a| {
                    let lin = if a.atom <= 1.0 { lambda * a.atom } else { 0.0 };
                    a.mass * ((-lambda * a.atom).exp_m1() + lin)
                })
                .sum::<f64>()
        }
    }
}

/// `Δ₁Δ_s g(t) = σ²s + ∫ e^{-tx}(1 − e^{-x})(1 − e^{-sx}) π(dx)`.
pub fn delta_formula(spec: &LevySpec, t: f64, s: f64) -> f64 {
    let gauss = spec.sigma2 * s;
    match &spec.jumps {
        Jumps::Empty => gauss,
        Jumps::CompoundPoisson { rate, jump_mean } => {
            let beta = 1.0 / jump_mean;
            let k = |c: f64| 1.0 / (c + beta);
            gauss + rate / jump_mean * (k(t) - k(t + 1.0) - k(t + s) + k(t + 1.0 + s))
        }
        Jumps::FiniteAtoms { atoms } => {
            gauss
                + atoms
                    .iter()
                    .map(|a| {
                        a.mass
                            * (-t * a.atom).exp()
                            * (-(-a.atom).exp_m1())
                            * (-(-s * a.atom).exp_m1())
                    })
                    .sum::<f64>()
        }
    }
}

/// The law of `X = e^L`.
pub fn dist_from_levy(spec: &LevySpec) -> Result<DistributionSpec> {
    spec.validate()?;
    Ok(DistributionSpec::Levy { levy: spec.clone() })
}

/// `g(0) = 0`, `g` convex and `g'` concave, by midpoint tests on
/// `lambdas` (increasing, uniformly spaced, at least four points).
pub fn check_exponent_shape(spec: &LevySpec, lambdas: &[f64], tol: f64) -> Result<CheckResult> {
    spec.validate()?;
    if lambdas.len() < 4 || lambdas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument(
            "shape check needs at least four increasing lambdas".into(),
        ));
    }
    let g: Vec<f64> = lambdas.iter().map(|&l| levy_exponent(spec, l)).collect();
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::OutOfDomain {
            lambda: lambdas[0],
            domain: format!("({}, inf)", spec.lower_lambda()),
        });
    }
    let mut origin = Tally::new("g(0) = 0", 0.0);
    origin.observe(levy_exponent(spec, 0.0).abs(), || "lambda = 0".into());
    let mut convex = Tally::new("g convex", tol);
    let mut concave = Tally::new("g' concave", tol);
    let slopes: Vec<f64> = (0..g.len() - 1)
        .map(|i| (g[i + 1] - g[i]) / (lambdas[i + 1] - lambdas[i]))
        .collect();
    for i in 1..g.len() - 1 {
        let w = (lambdas[i + 1] - lambdas[i]) / (lambdas[i + 1] - lambdas[i - 1]);
        convex.observe(g[i] - (w * g[i - 1] + (1.0 - w) * g[i + 1]), || {
            format!("lambda = {}", lambdas[i])
        });
    }
    for i in 1..slopes.len() - 1 {
        concave.observe(0.5 * (slopes[i - 1] + slopes[i + 1]) - slopes[i], || {
            format!("lambda = {}", lambdas[i])
        });
    }
    Ok(CheckResult::all(
        "Levy exponent shape",
        &[origin.finish(), convex.finish(), concave.finish()],
    ))
}

/// `Δ₁Δ_s g(t) − σ²s` is nonnegative and nonincreasing along `t_grid`.
pub fn check_delta_decay(spec: &LevySpec, t_grid: &[f64], s: f64, tol: f64) -> Result<CheckResult> {
    spec.validate()?;
    if !(s > 0.0) || t_grid.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::InvalidArgument("delta decay needs t > 0 and s > 0".into()));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("t grid must be increasing".into()));
    }
    let excess: Vec<f64> = t_grid
        .iter()
        .map(|&t| delta_formula(spec, t, s) - spec.sigma2 * s)
        .collect();
    let mut sign = Tally::new("correction nonnegative", tol);
    let mut trend = Tally::new("correction nonincreasing", tol);
    for (i, &e) in excess.iter().enumerate() {
        sign.observe(-e, || format!("t = {}", t_grid[i]));
        if i > 0 {
            trend.observe(e - excess[i - 1], || format!("t = {}", t_grid[i]));
        }
    }
    Ok(CheckResult::all("delta correction decay", &[sign.finish(), trend.finish()]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use proptest::prelude::*;

    fn second_difference(spec: &LevySpec, t: f64, s: f64) -> f64 {
        let g = |l| levy_exponent(spec, l);
        g(t + 1.0 + s) - g(t + 1.0) - g(t + s) + g(t)
    }

    #[test]
    fn gaussian_exponent() {
        let spec = LevySpec::gaussian(0.0, 1.0);
        assert_eq!(levy_exponent(&spec, 2.0), 2.0);
        assert_eq!(levy_exponent(&spec, 0.0), 0.0);
    }

    #[test]
    fn single_atom_exponent() {
        let spec = LevySpec::atoms(0.0, 0.0, &[(1.0, 0.5)]);
        let expected = (-0.5f64).exp() - 1.0 + 0.5;
        assert!((levy_exponent(&spec, 1.0) - expected).abs() < 1e-15);
        assert!((expected - 0.10653).abs() < 1e-5);
    }

    #[test]
    fn delta_of_pure_gaussian() {
        let spec = LevySpec::gaussian(0.3, 0.4);
        for &(t, s) in &[(1.0, 1.0), (5.0, 0.5), (50.0, 2.0)] {
            assert!((delta_formula(&spec, t, s) - 0.4 * s).abs() < 1e-15);
        }
    }

    #[test]
    fn delta_at_single_atom() {
        let spec = LevySpec::atoms(0.0, 0.0, &[(2.0, 1.0)]);
        let e1 = (-1.0f64).exp();
        let expected = 2.0 * e1 * (1.0 - e1).powi(2);
        assert!((delta_formula(&spec, 1.0, 1.0) - expected).abs() < 1e-15);
        assert!((expected - 0.29400).abs() < 1e-5);
    }

    #[test]
    fn compound_poisson_compensator_matches_quadrature() {
        let spec = LevySpec::compound_poisson(0.0, 0.0, 1.5, 0.7);
        let est = quad::integrate(
            |x: f64| Ok(x * 1.5 / 0.7 * (-x / 0.7).exp()),
            0.0,
            1.0,
            &Tolerance::relative(1e-13),
        )
        .unwrap();
        assert!((spec.compensator() - est.value).abs() < 1e-13);
    }

    #[test]
    fn tilt_matches_shifted_exponent() {
        let specs = [
            LevySpec::compound_poisson(0.2, 0.4, 1.0, 1.0),
            LevySpec::atoms(-0.1, 0.3, &[(0.5, 0.4), (1.2, 2.0)]),
            LevySpec::gaussian(1.0, 2.0),
        ];
        for spec in &specs {
            for &t in &[0.5, 2.0, 7.0] {
                let tilted = spec.tilt(t);
                for &l in &[0.25, 1.0, 3.0] {
                    let lhs = levy_exponent(&tilted, l);
                    let rhs = levy_exponent(spec, l + t) - levy_exponent(spec, t);
                    assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()), "{spec:?} t={t} l={l}");
                }
            }
        }
    }

    #[test]
    fn log_survival_is_a_tail_probability() {
        let spec = LevySpec::compound_poisson(0.0, 0.4, 1.0, 1.0);
        let mut prev = 1.0;
        for i in -40..=40 {
            let v = spec.log_survival(i as f64 * 0.25).unwrap();
            assert!(v <= prev + 1e-12 && v >= 0.0);
            prev = v;
        }
        assert!(spec.log_survival(-60.0).unwrap() > 1.0 - 1e-12);
        assert!(spec.log_survival(30.0).unwrap() < 1e-12);
    }

    #[test]
    fn log_density_integrates_survival() {
        let spec = LevySpec::compound_poisson(0.1, 0.5, 1.0, 0.8);
        let (a, b) = (-0.7, 0.9);
        let mass = quad::integrate(|y| spec.log_density(y), a, b, &Tolerance::relative(1e-10))
            .unwrap()
            .value;
        let diff = spec.log_survival(a).unwrap() - spec.log_survival(b).unwrap();
        assert!((mass - diff).abs() < 1e-9);
    }

    #[test]
    fn sampled_log_mean_matches_exponent_slope() {
        let spec = LevySpec::compound_poisson(0.0, 0.4, 1.0, 1.0);
        let mut rng = rng_from_seed(5);
        let n = 100_000;
        let xs = spec.sample_log(n, &mut rng).unwrap();
        let mean = xs.iter().sum::<f64>() / n as f64;
        // E[L] = g'(0) = d + compensator − rate·m
        let exact = spec.compensator() - 1.0;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        assert!((mean - exact).abs() < 4.0 * (var / n as f64).sqrt());
    }

    #[test]
    fn shape_and_decay_checks() {
        let grid: Vec<f64> = (0..=40).map(|i| i as f64 * 0.25).collect();
        let t_grid: Vec<f64> = (1..=50).map(f64::from).collect();
        for spec in [
            LevySpec::compound_poisson(0.0, 0.4, 1.0, 1.0),
            LevySpec::atoms(0.2, 0.1, &[(2.0, 1.0), (0.3, 0.2)]),
            LevySpec::gaussian(0.0, 1.0),
        ] {
            let r = check_exponent_shape(&spec, &grid, 1e-12).unwrap();
            assert!(r.passed, "{r}");
            let r = check_delta_decay(&spec, &t_grid, 1.0, 0.0).unwrap();
            assert!(r.passed, "{r}");
        }
        assert!(check_exponent_shape(&LevySpec::gaussian(0.0, 1.0), &[0.0, 1.0], 0.0).is_err());
    }

    proptest! {
        #[test]
        fn delta_matches_finite_differences(
            d in -1.0f64..1.0, s2 in 0.0f64..2.0, rate in 0.1f64..3.0, m in 0.1f64..3.0,
            t in 0.1f64..20.0, s in 0.1f64..3.0
        ) {
            let spec = LevySpec::compound_poisson(d, s2, rate, m);
            let fd = second_difference(&spec, t, s);
            prop_assert!((delta_formula(&spec, t, s) - fd).abs() < 1e-10 * (1.0 + fd.abs()));
        }

        #[test]
        fn exponent_is_convex_with_concave_slope(
            s2 in 0.0f64..2.0, mass in 0.1f64..3.0, atom in 0.05f64..3.0, lam in 0.1f64..10.0
        ) {
            let spec = LevySpec::atoms(0.0, s2, &[(mass, atom), (0.5, 1.5)]);
            let h = 0.05;
            let g = |l| levy_exponent(&spec, l);
            prop_assert!(g(lam) <= 0.5 * (g(lam - h) + g(lam + h)) + 1e-12);
            let slope = |l: f64| (g(l + h) - g(l)) / h;
            prop_assert!(slope(lam) >= 0.5 * (slope(lam - h) + slope(lam + h)) - 1e-10);
        }
    }
}

//! Thin wrappers over the gamma-family special functions.

use statrs::function::{beta, erf, gamma};

#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    gamma::ln_gamma(x)
}

#[inline]
pub fn gamma_fn(x: f64) -> f64 {
    gamma::gamma(x)
}

/// `ln B(a, b)`.
#[inline]
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Regularized upper incomplete gamma `Q(a, x)`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if !x.is_finite() {
        return 0.0;
    }
    gamma::gamma_ur(a, x)
}

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return 1.0;
    }
    gamma::gamma_lr(a, x)
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn beta_reg(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        beta::beta_reg(a, b, x)
    }
}

/// Upper tail of the standard normal, `P(N > z)`.
#[inline]
pub fn normal_sf(z: f64) -> f64 {
    0.5 * erf::erfc(z / std::f64::consts::SQRT_2)
}

#[inline]
pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `ln Γ(t+1) + ln Γ(λ+1) − ln Γ(λ+t+1)`, the log-Mellin transform of the
/// Beta(1, t) law at `λ`. Zero for `t = 0`.
pub fn ln_mellin_beta_t(t: f64, lambda: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    ln_gamma(t + 1.0) + ln_gamma(lambda + 1.0) - ln_gamma(lambda + t + 1.0)
}

//! Adaptive Gauss–Kronrod quadrature.
//!
//! Two entry points: [`integrate`] over a finite interval, and
//! [`integrate_line`] for integrands already expressed in a logarithmic
//! coordinate `y = ln x`, where the useful mass may sit anywhere on the real
//! line. The line integrator scans outward from a centre hint with growing
//! steps until the integrand is negligible, then refines the scanned panels
//! adaptively.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Stopping rule for the adaptive integrators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
    /// When false, an exhausted budget returns the best estimate instead of
    /// an error. Inner integrals run this way; the outer error estimate
    /// still sees their noise.
    pub strict: bool,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-10,
            rel: 1e-8,
            max_panels: 1 << 15,
            strict: true,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance {
            abs,
            rel,
            ..Default::default()
        }
    }

    /// Purely relative tolerance, used where tail values are tiny but must
    /// keep their relative accuracy (survival functions far in the tail).
    pub fn relative(rel: f64) -> Self {
        Tolerance {
            abs: 0.0,
            rel,
            ..Default::default()
        }
    }

    /// Tolerance for an inner integral feeding an outer one.
    pub fn inner(&self) -> Self {
        Tolerance {
            abs: 0.0,
            rel: (self.rel * 0.1).max(1e-13),
            max_panels: (self.max_panels / 8).max(512),
            strict: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
    pub panels: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn finite(v: f64, at: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::QuadratureFailure(format!(
            "integrand is not finite ({v}) at {at}"
        )))
    }
}

/// One 15-point Kronrod panel with the QUADPACK error heuristic.
fn gk15<F>(f: &F, a: f64, b: f64) -> Result<Panel>
where
    F: Fn(f64) -> Result<f64>,
{
    let centr = 0.5 * (a + b);
    let hlgth = 0.5 * (b - a);
    let dhlgth = hlgth.abs();

    let fc = finite(f(centr)?, centr)?;
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for j in 0..3 {
        let jtw = 2 * j + 1;
        let absc = hlgth * XGK[jtw];
        let f1 = finite(f(centr - absc)?, centr - absc)?;
        let f2 = finite(f(centr + absc)?, centr + absc)?;
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += WG[j] * (f1 + f2);
        resk += WGK[jtw] * (f1 + f2);
        resabs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let jtwm1 = 2 * j;
        let absc = hlgth * XGK[jtwm1];
        let f1 = finite(f(centr - absc)?, centr - absc)?;
        let f2 = finite(f(centr + absc)?, centr + absc)?;
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += WGK[jtwm1] * (f1 + f2);
        resabs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let result = resk * hlgth;
    resabs *= dhlgth;
    resasc *= dhlgth;
    let mut abserr = ((resk - resg) * hlgth).abs();
    if resasc != 0.0 && abserr != 0.0 {
        abserr = resasc * (1.0f64).min((200.0 * abserr / resasc).powf(1.5));
    }
    let uflow = f64::MIN_POSITIVE;
    if resabs > uflow / (50.0 * f64::EPSILON) {
        abserr = abserr.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Panel {
        a,
        b,
        value: result,
        error: abserr,
    })
}

/// Globally adaptive integration over the union of consecutive panels
/// defined by `breaks` (sorted, at least two points).
pub fn integrate_panels<F>(f: F, breaks: &[f64], tol: &Tolerance) -> Result<Estimate>
where
    F: Fn(f64) -> Result<f64>,
{
    if breaks.len() < 2 {
        return Err(Error::InvalidArgument(
            "quadrature needs at least two breakpoints".into(),
        ));
    }
    let mut heap = BinaryHeap::new();
    let mut settled_value = 0.0;
    let mut settled_error = 0.0;
    let mut total = 0.0;
    let mut error = 0.0;
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let p = gk15(&f, w[0], w[1])?;
        total += p.value;
        error += p.error;
        heap.push(p);
    }
    let mut panels = heap.len();

    loop {
        if error <= tol.abs.max(tol.rel * total.abs()) {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        // Panels narrower than the floating-point grid cannot be refined.
        if mid <= worst.a || mid >= worst.b || (worst.b - worst.a) <= 4.0 * f64::EPSILON * mid.abs()
        {
            settled_value += worst.value;
            settled_error += worst.error;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        if panels >= tol.max_panels {
            heap.push(worst);
            let (v, e) = totals(&heap, settled_value, settled_error);
            // same slack as the final acceptance test below
            if e <= tol.abs.max(tol.rel * v.abs()) * 10.0 || !tol.strict {
                break;
            }
            return Err(Error::QuadratureFailure(format!(
                "panel budget {} exhausted (estimate {v:e}, error {e:e})",
                tol.max_panels
            )));
        }
        let left = gk15(&f, worst.a, mid)?;
        let right = gk15(&f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        panels += 1;
        if panels % 256 == 0 {
            // the running sums lose the small errors to cancellation
            (total, error) = totals(&heap, settled_value, settled_error);
        }
    }

    let (value, abs_error) = totals(&heap, settled_value, settled_error);
    if tol.strict && abs_error > tol.abs.max(tol.rel * value.abs()) * 10.0 {
        return Err(Error::QuadratureFailure(format!(
            "could not reach tolerance (estimate {value:e}, error {abs_error:e})"
        )));
    }
    Ok(Estimate {
        value,
        abs_error,
        panels,
    })
}

fn totals(heap: &BinaryHeap<Panel>, v0: f64, e0: f64) -> (f64, f64) {
    // Re-sum to shed drift accumulated by the running updates.
    let mut v = v0;
    let mut e = e0;
    for p in heap.iter() {
        v += p.value;
        e += p.error;
    }
    (v, e)
}

/// Adaptive integration over a finite interval `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<Estimate>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "finite interval required, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            abs_error: 0.0,
            panels: 0,
        });
    }
    if a > b {
        let e = integrate(f, b, a, tol)?;
        return Ok(Estimate {
            value: -e.value,
            ..e
        });
    }
    integrate_panels(f, &[a, b], tol)
}

/// Bounds and centre for [`integrate_line`].
#[derive(Clone, Copy, Debug)]
pub struct Line {
    pub center: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl Line {
    pub fn around(center: f64) -> Self {
        Line {
            center,
            lower: None,
            upper: None,
        }
    }

    pub fn below(self, upper: f64) -> Self {
        Line {
            upper: Some(upper),
            ..self
        }
    }

    pub fn above(self, lower: f64) -> Self {
        Line {
            lower: Some(lower),
            ..self
        }
    }
}

// Log-coordinates beyond these limits map to 0 or +inf in f64.
const Y_MIN: f64 = -745.0;
const Y_MAX: f64 = 709.0;
const NEGLIGIBLE: f64 = 1e-18;

/// Integrate `f(y)` over `y ∈ (lower, upper)` where either limit may be
/// infinite. The integrand must decay towards infinite limits.
pub fn integrate_line<F>(f: F, line: Line, tol: &Tolerance) -> Result<Estimate>
where
    F: Fn(f64) -> Result<f64>,
{
    let lo = line.lower.unwrap_or(Y_MIN).max(Y_MIN);
    let hi = line.upper.unwrap_or(Y_MAX).min(Y_MAX);
    if !(lo < hi) {
        return Ok(Estimate {
            value: 0.0,
            abs_error: 0.0,
            panels: 0,
        });
    }
    let c = line.center.clamp(lo, hi);
    let fc = f(c)?;
    let mut peak = fc.abs();

    let right = scan(&f, c, hi, 1.0, line.upper.is_some(), &mut peak)?;
    let left = scan(&f, c, lo, -1.0, line.lower.is_some(), &mut peak)?;

    let mut breaks: Vec<f64> = left.into_iter().rev().collect();
    breaks.push(c);
    breaks.extend(right);
    breaks.dedup();
    if breaks.len() < 2 {
        return Ok(Estimate {
            value: 0.0,
            abs_error: 0.0,
            panels: 0,
        });
    }
    integrate_panels(f, &breaks, tol)
}

/// Walk from `c` towards `limit` with growing steps, returning breakpoints.
/// Stops once the integrand has been negligible for two consecutive points,
/// or at the limit.
fn scan<F>(f: &F, c: f64, limit: f64, dir: f64, hard_limit: bool, peak: &mut f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut out = Vec::new();
    if c == limit {
        return Ok(out);
    }
    let mut y = c;
    let mut step = 0.25;
    let mut quiet = 0;
    let mut k = 0;
    loop {
        let next = y + dir * step;
        let reached = if dir > 0.0 { next >= limit } else { next <= limit };
        if reached {
            if !hard_limit {
                let v = f(limit)?;
                if v.abs() > 1e-6 * peak.max(f64::MIN_POSITIVE) && v.abs() > 1e-250 {
                    return Err(Error::QuadratureFailure(format!(
                        "integrand does not decay (value {v:e} at y = {limit})"
                    )));
                }
            }
            out.push(limit);
            return Ok(out);
        }
        y = next;
        out.push(y);
        let v = f(y)?.abs();
        if v > *peak {
            *peak = v;
        }
        if *peak > 0.0 && v <= NEGLIGIBLE * *peak && (y - c).abs() >= 2.0 {
            quiet += 1;
            if quiet >= 2 {
                return Ok(out);
            }
        } else {
            quiet = 0;
        }
        k += 1;
        if k % 2 == 0 && step < 16.0 {
            step *= 2.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let e = integrate(|x| Ok(x * x * x - 2.0 * x), 0.0, 2.0, &Tolerance::default()).unwrap();
        assert!((e.value - 0.0).abs() < 1e-14);
        let e = integrate(|x| Ok(x.powi(6)), -1.0, 1.0, &Tolerance::default()).unwrap();
        assert!((e.value - 2.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn reversed_interval_flips_sign() {
        let e = integrate(|x| Ok(x), 1.0, 0.0, &Tolerance::default()).unwrap();
        assert!((e.value + 0.5).abs() < 1e-15);
    }

    #[test]
    fn endpoint_singularity_converges() {
        // ∫_0^1 x^{-1/2} dx = 2
        let tol = Tolerance::new(1e-10, 1e-10);
        let e = integrate(|x| Ok(x.powf(-0.5)), 0.0, 1.0, &tol).unwrap();
        assert!((e.value - 2.0).abs() < 1e-8, "{e:?}");
    }

    #[test]
    fn gaussian_on_the_line() {
        let e = integrate_line(
            |y| Ok((-0.5 * (y - 30.0) * (y - 30.0)).exp()),
            Line::around(29.0),
            &Tolerance::default(),
        )
        .unwrap();
        let exact = (2.0 * std::f64::consts::PI).sqrt();
        assert!((e.value - exact).abs() < 1e-10);
    }

    #[test]
    fn gamma_function_in_log_coordinates() {
        // Γ(s) = ∫ e^{s y} exp(-e^y) dy
        for &s in &[0.3, 1.0, 4.5] {
            let e = integrate_line(
                |y| Ok((s * y - y.exp()).exp()),
                Line::around(0.0),
                &Tolerance::relative(1e-12),
            )
            .unwrap();
            let exact = crate::special::gamma_fn(s);
            assert!((e.value / exact - 1.0).abs() < 1e-11, "s={s} {e:?}");
        }
    }

    #[test]
    fn bounded_line_with_kink() {
        // ∫_{-inf}^{0} e^{y} (1 - e^{y}) dy = 1 - 1/2
        let e = integrate_line(
            |y| Ok(y.exp() * (1.0 - y.exp())),
            Line::around(-1.0).below(0.0),
            &Tolerance::default(),
        )
        .unwrap();
        assert!((e.value - 0.5).abs() < 1e-10);
    }

    #[test]
    fn non_decaying_integrand_is_reported() {
        let r = integrate_line(|_| Ok(1.0), Line::around(0.0), &Tolerance::default());
        assert!(matches!(r, Err(Error::QuadratureFailure(_))));
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let tol = Tolerance {
            abs: 0.0,
            rel: 1e-15,
            max_panels: 4,
            strict: true,
        };
        let r = integrate(|x: f64| Ok((1.0 / x).sin()), 1e-6, 1.0, &tol);
        assert!(matches!(r, Err(Error::QuadratureFailure(_))));
    }
}

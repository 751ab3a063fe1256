//! Shape-preserving piecewise-cubic Hermite interpolation (Fritsch–Carlson
//! slopes, as in the classic PCHIP scheme). Monotone data yields a monotone
//! interpolant, which keeps tabulated survival functions valid.

#[derive(Clone, Debug)]
pub struct Pchip {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl Pchip {
    /// `xs` must be strictly increasing with at least two points.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        assert!(xs.len() >= 2 && xs.len() == ys.len());
        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let m: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / h[k]).collect();
        let mut ds = vec![0.0; n];
        if n == 2 {
            ds[0] = m[0];
            ds[1] = m[0];
        } else {
            for k in 1..n - 1 {
                if m[k - 1] == 0.0 || m[k] == 0.0 || m[k - 1].signum() != m[k].signum() {
                    ds[k] = 0.0;
                } else {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    ds[k] = (w1 + w2) / (w1 / m[k - 1] + w2 / m[k]);
                }
            }
            ds[0] = end_slope(h[0], h[1], m[0], m[1]);
            ds[n - 1] = end_slope(h[n - 2], h[n - 3], m[n - 2], m[n - 3]);
        }
        Pchip { xs, ys, ds }
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    fn segment(&self, x: f64) -> usize {
        match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            i if i >= self.xs.len() => self.xs.len() - 2,
            i => i - 1,
        }
    }

    /// Evaluates the interpolant; constant extrapolation outside the knots.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let k = self.segment(x);
        let (x0, x1) = (self.xs[k], self.xs[k + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let (y0, y1) = (self.ys[k], self.ys[k + 1]);
        let (d0, d1) = (self.ds[k], self.ds[k + 1]);
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
    }

    /// Solves `eval(x) = y` for a nonincreasing interpolant by bracketing on
    /// the knots and bisecting to `x_tol`.
    pub fn invert_decreasing(&self, y: f64, x_tol: f64) -> f64 {
        let n = self.xs.len();
        if y >= self.ys[0] {
            return self.xs[0];
        }
        if y <= self.ys[n - 1] {
            return self.xs[n - 1];
        }
        // first knot with value <= y
        let j = self.ys.partition_point(|&v| v > y);
        let (mut a, mut b) = (self.xs[j - 1], self.xs[j]);
        while b - a > x_tol * (1.0 + a.abs()) {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if self.eval(mid) > y {
                a = mid;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    }
}

fn end_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}

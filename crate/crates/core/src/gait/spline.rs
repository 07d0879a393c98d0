//! Periodic cubic spline interpolation.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// C² periodic cubic spline through `(x_i, y_i)` with period `period`.
#[derive(Debug, Clone)]
pub struct PeriodicSpline<T> {
    x: Vec<T>,
    y: Vec<T>,
    /// Second derivatives at the knots.
    m: Vec<T>,
    period: T,
}

impl<T: Scalar> PeriodicSpline<T> {
    /// Knots must be strictly increasing and span less than one period.
    pub fn new(x: Vec<T>, y: Vec<T>, period: T) -> Result<Self> {
        let n = x.len();
        if n != y.len() {
            return Err(Error::LengthMismatch {
                left: n,
                right: y.len(),
            });
        }
        if n < 3 {
            return Err(Error::TooFewSamples { min: 3, got: n });
        }
        if !(period > T::zero()) || x.windows(2).any(|w| !(w[1] > w[0])) || !(x[n - 1] - x[0] < period)
        {
            return Err(Error::invalid("spline knots", "must increase strictly within one period"));
        }
        let h: Vec<T> = (0..n)
            .map(|i| if i + 1 < n { x[i + 1] - x[i] } else { x[0] + period - x[n - 1] })
            .collect();
        let six = T::lit(6.0);
        let two = T::lit(2.0);
        let mut sub = vec![T::zero(); n];
        let mut diag = vec![T::zero(); n];
        let mut sup = vec![T::zero(); n];
        let mut rhs = vec![T::zero(); n];
        for i in 0..n {
            let prev = (i + n - 1) % n;
            let next = (i + 1) % n;
            sub[i] = h[prev];
            diag[i] = two * (h[prev] + h[i]);
            sup[i] = h[i];
            rhs[i] = six * ((y[next] - y[i]) / h[i] - (y[i] - y[prev]) / h[prev]);
        }
        let m = solve_cyclic(&sub, &diag, &sup, &rhs);
        Ok(Self { x, y, m, period })
    }

    pub fn period(&self) -> T {
        self.period
    }

    fn locate(&self, x: T) -> (usize, T, T) {
        let n = self.x.len();
        let x0 = self.x[0];
        let mut u = (x - x0) % self.period;
        if u < T::zero() {
            u = u + self.period;
        }
        let xx = x0 + u;
        // Last knot whose abscissa is <= xx.
        let i = match self.x.partition_point(|&k| k <= xx) {
            0 => 0,
            p => p - 1,
        };
        let h = if i + 1 < n {
            self.x[i + 1] - self.x[i]
        } else {
            x0 + self.period - self.x[n - 1]
        };
        (i, xx - self.x[i], h)
    }

    /// Value, first and second derivative at `x`.
    pub fn eval_all(&self, x: T) -> (T, T, T) {
        let n = self.x.len();
        let (i, t, h) = self.locate(x);
        let j = (i + 1) % n;
        let (yi, yj, mi, mj) = (self.y[i], self.y[j], self.m[i], self.m[j]);
        let a = h - t;
        let six = T::lit(6.0);
        let two = T::lit(2.0);
        let ci = yi / h - mi * h / six;
        let cj = yj / h - mj * h / six;
        let value = mi * a * a * a / (six * h) + mj * t * t * t / (six * h) + ci * a + cj * t;
        let d1 = -mi * a * a / (two * h) + mj * t * t / (two * h) - ci + cj;
        let d2 = (mi * a + mj * t) / h;
        (value, d1, d2)
    }

    pub fn eval(&self, x: T) -> T {
        self.eval_all(x).0
    }
}

/// Solves a cyclic tridiagonal system; row `i` reads
/// `sub[i]·x[i−1] + diag[i]·x[i] + sup[i]·x[i+1] = rhs[i]` with indices mod n.
fn solve_cyclic<T: Scalar>(sub: &[T], diag: &[T], sup: &[T], rhs: &[T]) -> Vec<T> {
    let n = diag.len();
    let alpha = sup[n - 1]; // row n-1, column 0
    let beta = sub[0]; // row 0, column n-1
    let gamma = -diag[0];
    let mut b = diag.to_vec();
    b[0] = diag[0] - gamma;
    b[n - 1] = diag[n - 1] - alpha * beta / gamma;
    let x = solve_tridiagonal(sub, &b, sup, rhs);
    let mut u = vec![T::zero(); n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = solve_tridiagonal(sub, &b, sup, &u);
    let fact = (x[0] + beta * x[n - 1] / gamma) / (T::one() + z[0] + beta * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(&xi, &zi)| xi - fact * zi).collect()
}

/// Thomas algorithm; `sub[0]` and `sup[n−1]` are ignored.
fn solve_tridiagonal<T: Scalar>(sub: &[T], diag: &[T], sup: &[T], rhs: &[T]) -> Vec<T> {
    let n = diag.len();
    let mut c = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - sub[i] * c[i - 1];
        c[i] = if i + 1 < n { sup[i] / denom } else { T::zero() };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
    }
    let mut x = vec![T::zero(); n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

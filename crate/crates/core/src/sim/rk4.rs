//! Classic fixed-step fourth-order Runge–Kutta.

use crate::scalar::Scalar;

fn axpy<T: Scalar, const N: usize>(x: &[T; N], h: T, k: &[T; N]) -> [T; N] {
    let mut out = *x;
    for (o, ki) in out.iter_mut().zip(k) {
        *o = *o + h * *ki;
    }
    out
}

/// One RK4 step of `ẋ = f(t, x)` from `t` to `t + h`.
pub fn rk4_step<T: Scalar, const N: usize, E>(
    f: &mut impl FnMut(T, &[T; N]) -> Result<[T; N], E>,
    t: T,
    x: &[T; N],
    h: T,
) -> Result<[T; N], E> {
    let half = h / T::lit(2.0);
    let k1 = f(t, x)?;
    let k2 = f(t + half, &axpy(x, half, &k1))?;
    let k3 = f(t + half, &axpy(x, half, &k2))?;
    let k4 = f(t + h, &axpy(x, h, &k3))?;
    let sixth = h / T::lit(6.0);
    let two = T::lit(2.0);
    let mut out = *x;
    for i in 0..N {
        out[i] = out[i] + sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::convert::Infallible;

    use super::*;

    fn harmonic_error(h: f64) -> f64 {
        let mut f = |_t: f64, x: &[f64; 2]| Ok::<_, Infallible>([x[1], -x[0]]);
        let mut x = [1.0, 0.0];
        let n = (1.0 / h).round() as usize;
        for i in 0..n {
            x = rk4_step(&mut f, i as f64 * h, &x, h).unwrap();
        }
        ((x[0] - 1f64.cos()).powi(2) + (x[1] + 1f64.sin()).powi(2)).sqrt()
    }

    #[test]
    fn fourth_order_convergence() {
        let ratio = harmonic_error(0.02) / harmonic_error(0.01);
        assert!((14.0..18.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn exact_for_cubic_in_time() {
        let mut f = |t: f64, _x: &[f64; 1]| Ok::<_, Infallible>([3.0 * t * t]);
        let x = rk4_step(&mut f, 0.0f64, &[0.0], 2.0).unwrap();
        assert!((x[0] - 8.0).abs() < 1e-12);
    }
}

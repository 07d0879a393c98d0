use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn non_empty<T>(x: &[T], what: &str) -> Result<()> {
    if x.is_empty() {
        return Err(Error::EmptyWindow(format!("{what} of an empty series")));
    }
    Ok(())
}

pub fn mean<T: Scalar>(x: &[T]) -> Result<T> {
    non_empty(x, "mean")?;
    let sum = x.iter().fold(T::zero(), |acc, &v| acc + v);
    Ok(sum / T::from_usize(x.len()).expect("length fits the scalar type"))
}

pub fn rms<T: Scalar>(x: &[T]) -> Result<T> {
    non_empty(x, "rms")?;
    let sum = x.iter().fold(T::zero(), |acc, &v| acc + v * v);
    Ok((sum / T::from_usize(x.len()).expect("length fits the scalar type")).sqrt())
}

/// Sample Pearson correlation coefficient, clamped to `[-1, 1]`.
///
/// A series whose spread is at rounding level counts as constant and makes
/// the coefficient undefined.
pub fn pearson_r<T: Scalar>(a: &[T], b: &[T]) -> Result<T> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::TooFewSamples { min: 2, got: a.len() });
    }
    let ma = mean(a)?;
    let mb = mean(b)?;
    let (mut sab, mut saa, mut sbb) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab = sab + dx * dy;
        saa = saa + dx * dx;
        sbb = sbb + dy * dy;
    }
    let n = T::from_usize(a.len()).expect("length fits the scalar type");
    let flat = |s: T, series: &[T]| {
        let scale = series.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let tol = n * T::epsilon() * scale * T::lit(4.0);
        s <= tol * tol
    };
    if flat(saa, a) {
        return Err(Error::UndefinedCorrelation("first series"));
    }
    if flat(sbb, b) {
        return Err(Error::UndefinedCorrelation("second series"));
    }
    let r = sab / (saa.sqrt() * sbb.sqrt());
    Ok(r.max(-T::one()).min(T::one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rms_of_constant() {
        assert_eq!(rms(&[-3.0f64; 7]).unwrap(), 3.0);
        assert!(matches!(rms::<f64>(&[]), Err(Error::EmptyWindow(_))));
    }

    #[test]
    fn pearson_extremes() {
        let x: Vec<f64> = (0..50).map(|i| (i as f64 * 0.37).sin() + 0.01 * i as f64).collect();
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson_r(&x, &x).unwrap() - 1.0).abs() < 1e-12);
        assert!((pearson_r(&x, &neg).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn pearson_rejects_degenerate_input() {
        let x = [1.0, 2.0, 3.0];
        assert!(matches!(pearson_r(&x, &[0.1; 3]), Err(Error::UndefinedCorrelation("second series"))));
        assert!(matches!(pearson_r(&x, &[1.0, 2.0]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(pearson_r(&[1.0], &[2.0]), Err(Error::TooFewSamples { .. })));
    }

    #[test]
    fn pearson_in_f32() {
        let x = [1.0f32, 2.0, 4.0, 8.0];
        let y = [2.0f32, 4.1, 7.9, 16.2];
        assert!(pearson_r(&x, &y).unwrap() > 0.99);
    }
}

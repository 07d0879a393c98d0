//! Digital Butterworth filters as cascaded biquads, designed by the
//! prewarped bilinear transform, and zero-phase forward-backward filtering.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `H(z) = (b0 + b1 z⁻¹ + b2 z⁻²) / (1 + a1 z⁻¹ + a2 z⁻²)`; `a[0]` is 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad {
    pub b: [f64; 3],
    pub a: [f64; 3],
}

impl Biquad {
    fn response(&self, z: Complex64) -> Complex64 {
        let zi = z.inv();
        let num = self.b[0] + zi * (self.b[1] + zi * self.b[2]);
        let den = self.a[0] + zi * (self.a[1] + zi * self.a[2]);
        num / den
    }

    fn dc_gain(&self) -> f64 {
        let den: f64 = self.a.iter().sum();
        self.b.iter().sum::<f64>() / den
    }
}

/// Second-order sections applied in sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Sos {
    pub sections: Vec<Biquad>,
}

#[derive(Clone, Copy)]
enum Band {
    Low,
    High,
    Pass,
}

fn check_freq(what: &'static str, f: f64, fs: f64) -> Result<()> {
    if !(fs.is_finite() && fs > 0.0) {
        return Err(Error::invalid("sample rate", format!("must be > 0, got {fs}")));
    }
    if !(f.is_finite() && f > 0.0 && f < fs / 2.0) {
        return Err(Error::invalid(what, format!("{f} Hz must lie in (0, {}) Hz", fs / 2.0)));
    }
    Ok(())
}

/// Prewarped analog frequency, rad/s.
fn warp(f: f64, fs: f64) -> f64 {
    2.0 * fs * (PI * f / fs).tan()
}

fn prototype_poles(order: usize) -> Vec<Complex64> {
    (1..=order)
        .map(|k| {
            let angle = PI * (2 * k + order - 1) as f64 / (2 * order) as f64;
            Complex64::from_polar(1.0, angle)
        })
        .collect()
}

fn bilinear(s: Complex64, fs: f64) -> Complex64 {
    (2.0 * fs + s) / (2.0 * fs - s)
}

/// Groups digital poles into real-coefficient denominators: one per
/// conjugate pair, real poles two at a time, a leftover real pole alone.
fn denominators(poles: &[Complex64]) -> Vec<([f64; 3], usize)> {
    let tol = 1e-10;
    let mut dens = Vec::new();
    let mut reals = Vec::new();
    for p in poles {
        if p.im > tol {
            dens.push(([1.0, -2.0 * p.re, p.norm_sqr()], 2));
        } else if p.im.abs() <= tol {
            reals.push(p.re);
        }
    }
    reals.sort_by(f64::total_cmp);
    for chunk in reals.chunks(2) {
        match chunk {
            [p1, p2] => dens.push(([1.0, -(p1 + p2), p1 * p2], 2)),
            [p] => dens.push(([1.0, -p, 0.0], 1)),
            _ => unreachable!(),
        }
    }
    dens
}

impl Sos {
    pub fn butter_lowpass(order: usize, cutoff: f64, fs: f64) -> Result<Self> {
        check_freq("lowpass cutoff", cutoff, fs)?;
        Self::design(order, Band::Low, cutoff, cutoff, fs)
    }

    pub fn butter_highpass(order: usize, cutoff: f64, fs: f64) -> Result<Self> {
        check_freq("highpass cutoff", cutoff, fs)?;
        Self::design(order, Band::High, cutoff, cutoff, fs)
    }

    /// Bandpass from an `order`-pole lowpass prototype (2·`order` poles in total).
    pub fn butter_bandpass(order: usize, low: f64, high: f64, fs: f64) -> Result<Self> {
        check_freq("bandpass low edge", low, fs)?;
        check_freq("bandpass high edge", high, fs)?;
        if low >= high {
            return Err(Error::invalid("bandpass", format!("low edge {low} >= high edge {high}")));
        }
        Self::design(order, Band::Pass, low, high, fs)
    }

    fn design(order: usize, band: Band, f1: f64, f2: f64, fs: f64) -> Result<Self> {
        if order == 0 {
            return Err(Error::invalid("filter order", "must be >= 1"));
        }
        let proto = prototype_poles(order);
        let w1 = warp(f1, fs);
        let w2 = warp(f2, fs);
        let analog: Vec<Complex64> = match band {
            Band::Low => proto.iter().map(|p| p * w1).collect(),
            Band::High => proto.iter().map(|p| w1 / p).collect(),
            Band::Pass => {
                let bw = w2 - w1;
                let w0sq = w1 * w2;
                proto
                    .iter()
                    .flat_map(|p| {
                        let half = p * bw / 2.0;
                        let root = (half * half - w0sq).sqrt();
                        [half + root, half - root]
                    })
                    .collect()
            }
        };
        let digital: Vec<Complex64> = analog.iter().map(|&s| bilinear(s, fs)).collect();
        let mut sections: Vec<Biquad> = denominators(&digital)
            .into_iter()
            .map(|(a, n)| {
                let b = match (band, n) {
                    (Band::Low, 2) => [1.0, 2.0, 1.0],
                    (Band::Low, _) => [1.0, 1.0, 0.0],
                    (Band::High, 2) => [1.0, -2.0, 1.0],
                    (Band::High, _) => [1.0, -1.0, 0.0],
                    (Band::Pass, _) => [1.0, 0.0, -1.0],
                };
                Biquad { b, a }
            })
            .collect();
        // Unit gain in the passband: at DC, Nyquist or the center frequency.
        let z_ref = match band {
            Band::Low => Complex64::new(1.0, 0.0),
            Band::High => Complex64::new(-1.0, 0.0),
            Band::Pass => {
                let w0 = 2.0 * ((w1 * w2).sqrt() / (2.0 * fs)).atan();
                Complex64::from_polar(1.0, w0)
            }
        };
        let sos = Self { sections: sections.clone() };
        let gain = sos.response_at(z_ref).norm();
        if !(gain.is_finite() && gain > 0.0) {
            return Err(Error::invalid("filter design", "degenerate passband gain"));
        }
        for v in &mut sections[0].b {
            *v /= gain;
        }
        Ok(Self { sections })
    }

    fn response_at(&self, z: Complex64) -> Complex64 {
        self.sections.iter().map(|s| s.response(z)).product()
    }

    /// Complex frequency response at `f` Hz.
    pub fn response(&self, f: f64, fs: f64) -> Complex64 {
        self.response_at(Complex64::from_polar(1.0, 2.0 * PI * f / fs))
    }

    /// Section states for a unit step already in steady state.
    fn step_state(&self) -> Vec<[f64; 2]> {
        let mut input = 1.0;
        self.sections
            .iter()
            .map(|s| {
                let y = s.dc_gain() * input;
                let z1 = s.b[2] * input - s.a[2] * y;
                let z0 = s.b[1] * input - s.a[1] * y + z1;
                input = y;
                [z0, z1]
            })
            .collect()
    }

    fn run(&self, x: &[f64], mut state: Vec<[f64; 2]>) -> Vec<f64> {
        let mut out = x.to_vec();
        for (s, z) in self.sections.iter().zip(state.iter_mut()) {
            for v in out.iter_mut() {
                let xin = *v;
                let y = s.b[0] * xin + z[0];
                z[0] = s.b[1] * xin - s.a[1] * y + z[1];
                z[1] = s.b[2] * xin - s.a[2] * y;
                *v = y;
            }
        }
        out
    }

    /// Causal filtering from rest.
    pub fn filter(&self, x: &[f64]) -> Vec<f64> {
        self.run(x, vec![[0.0; 2]; self.sections.len()])
    }

    /// Zero-phase filtering: forward then backward over the signal extended
    /// by `padlen` samples of odd reflection at each end, each pass started
    /// in the steady state for its first sample.
    pub fn filtfilt(&self, x: &[f64], padlen: usize) -> Result<Vec<f64>> {
        let n = x.len();
        if n <= padlen || n < 2 {
            return Err(Error::SignalTooShort { len: n, min: padlen.max(1) });
        }
        let mut ext = Vec::with_capacity(n + 2 * padlen);
        ext.extend((1..=padlen).rev().map(|i| 2.0 * x[0] - x[i]));
        ext.extend_from_slice(x);
        ext.extend((1..=padlen).map(|i| 2.0 * x[n - 1] - x[n - 1 - i]));

        let zi = self.step_state();
        let scaled = |v: f64| zi.iter().map(|z| [z[0] * v, z[1] * v]).collect::<Vec<_>>();
        let mut y = self.run(&ext, scaled(ext[0]));
        y.reverse();
        let mut y = self.run(&y, scaled(y[0]));
        y.reverse();
        Ok(y[padlen..padlen + n].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowpass_half_power_at_cutoff() {
        let sos = Sos::butter_lowpass(2, 4.0, 1000.0).unwrap();
        assert!((sos.response(0.0, 1000.0).norm() - 1.0).abs() < 1e-12);
        let g = sos.response(4.0, 1000.0).norm();
        assert!((g - 0.5f64.sqrt()).abs() < 1e-9, "{g}");
        // Second-order rolloff: about −40 dB/decade well above cutoff.
        assert!(sos.response(40.0, 1000.0).norm() < 0.012);
    }

    #[test]
    fn bandpass_edges_and_center() {
        let fs = 1000.0;
        let sos = Sos::butter_bandpass(4, 30.0, 450.0, fs).unwrap();
        assert_eq!(sos.sections.len(), 4);
        for f in [30.0, 450.0] {
            assert!((sos.response(f, fs).norm() - 0.5f64.sqrt()).abs() < 1e-9);
        }
        assert!(sos.response(120.0, fs).norm() > 0.99);
        assert!(sos.response(0.0, fs).norm() < 1e-12);
        assert!(sos.response(3.0, fs).norm() < 1e-3);
    }

    #[test]
    fn odd_order_highpass() {
        let sos = Sos::butter_highpass(3, 50.0, 1000.0).unwrap();
        assert_eq!(sos.sections.len(), 2);
        assert!((sos.response(50.0, 1000.0).norm() - 0.5f64.sqrt()).abs() < 1e-9);
        assert!((sos.response(500.0, 1000.0).norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn filtfilt_has_no_phase_lag() {
        let fs = 1000.0;
        let sos = Sos::butter_lowpass(2, 20.0, fs).unwrap();
        let x: Vec<f64> = (0..2000).map(|i| (2.0 * PI * 2.0 * i as f64 / fs).sin()).collect();
        let y = sos.filtfilt(&x, 100).unwrap();
        let (mut best, mut at) = (f64::MIN, 0);
        for (i, v) in y.iter().enumerate().take(1000).skip(500) {
            if *v > best {
                best = *v;
                at = i;
            }
        }
        // A 2 Hz sine peaks at sample 625 of each 500-sample period.
        assert_eq!(at, 625);
        assert!(sos.filtfilt(&x[..50], 100).is_err());
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Sos::butter_lowpass(2, 600.0, 1000.0).is_err());
        assert!(Sos::butter_bandpass(4, 450.0, 30.0, 1000.0).is_err());
        assert!(Sos::butter_lowpass(0, 4.0, 1000.0).is_err());
    }
}

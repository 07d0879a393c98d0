//! Synthetic normal-gait trajectory.
//!
//! Six-harmonic Fourier series fitted by least squares to approximate adult
//! normative sagittal hip and knee flexion curves (typical values at 5%
//! increments from published gait-lab norms, e.g. Winter's normal-cadence
//! data). Fit residuals are about 0.13° at the hip and 0.29° at the knee.
//! The shape is used for every walking speed in the supported range; speed
//! only sets the cycle timing chosen by the caller.

use std::f64::consts::TAU;

use super::{GaitSample, GaitTrajectory};
use crate::error::{Error, Result};

pub const SYNTHETIC_HARMONICS: usize = 6;

/// `[a0, a1, b1, …, a6, b6]` in degrees: `a0 + Σ aₖcos(kφ) + bₖsin(kφ)`, `φ = 2π·gc/100`.
pub const FOURIER_HIP_DEG: [f64; 13] = [
    13.05,
    19.780_020_605_6,
    -2.063_390_993_8,
    -2.379_837_387_6,
    -2.797_666_638_6,
    -0.622_620_711_7,
    1.669_546_254_9,
    0.1,
    0.0,
    -0.1,
    0.2,
    0.079_837_387_6,
    0.151_859_735_5,
];

pub const FOURIER_KNEE_DEG: [f64; 13] = [
    21.4,
    -0.610_793_227_4,
    -18.344_351_704_8,
    -14.809_926_025_2,
    6.658_646_787_6,
    -0.160_648,
    4.852_299_764,
    -0.380_901_699_4,
    -0.864_526_535_9,
    -1.0,
    0.4,
    0.059_926_025_2,
    0.353_444_419_2,
];

pub(crate) fn fourier_deg(coeffs: &[f64; 13], gc_percent: f64) -> f64 {
    let phi = TAU * gc_percent / 100.0;
    (1..=SYNTHETIC_HARMONICS).fold(coeffs[0], |acc, k| {
        let kf = k as f64;
        acc + coeffs[2 * k - 1] * (kf * phi).cos() + coeffs[2 * k] * (kf * phi).sin()
    })
}

/// Normal-gait trajectory sampled at 1% of the gait cycle.
pub fn synthetic_normal_gait(walking_speed: f64) -> Result<GaitTrajectory> {
    if !(0.1..=2.0).contains(&walking_speed) {
        return Err(Error::invalid(
            "walking_speed",
            format!("{walking_speed} m/s outside [0.1, 2.0]"),
        ));
    }
    let samples = (0..100)
        .map(|i| {
            let gc = i as f64;
            GaitSample {
                gc_percent: gc,
                hip: fourier_deg(&FOURIER_HIP_DEG, gc).to_radians(),
                knee: fourier_deg(&FOURIER_KNEE_DEG, gc).to_radians(),
            }
        })
        .collect();
    Ok(GaitTrajectory {
        samples,
        source: format!("synthetic normal gait, {SYNTHETIC_HARMONICS}-harmonic normative fit"),
        nominal_speed: Some(walking_speed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::JointLimits;
    use crate::gait::{to_kinematics, DEFAULT_CYCLE_DURATION};

    /// Reference normative curves the coefficients were fitted to, (gc %, hip°, knee°).
    const NORMATIVE: [(f64, f64, f64); 20] = [
        (0.0, 30.0, 4.0),
        (5.0, 29.0, 11.0),
        (10.0, 26.0, 17.0),
        (15.0, 22.0, 19.0),
        (20.0, 17.0, 17.0),
        (25.0, 12.0, 13.0),
        (30.0, 7.0, 9.0),
        (35.0, 3.0, 6.0),
        (40.0, -1.0, 5.0),
        (45.0, -5.0, 5.0),
        (50.0, -8.0, 8.0),
        (55.0, -10.0, 15.0),
        (60.0, -7.0, 28.0),
        (65.0, 0.0, 47.0),
        (70.0, 10.0, 60.0),
        (75.0, 19.0, 58.0),
        (80.0, 26.0, 48.0),
        (85.0, 30.0, 33.0),
        (90.0, 31.0, 18.0),
        (95.0, 30.0, 7.0),
    ];

    #[test]
    fn fit_error_below_three_degrees() {
        let (mut se_h, mut se_k) = (0.0, 0.0);
        for (gc, hip, knee) in NORMATIVE {
            se_h += (fourier_deg(&FOURIER_HIP_DEG, gc) - hip).powi(2);
            se_k += (fourier_deg(&FOURIER_KNEE_DEG, gc) - knee).powi(2);
        }
        let n = NORMATIVE.len() as f64;
        assert!((se_h / n).sqrt() < 3.0);
        assert!((se_k / n).sqrt() < 3.0);
        assert!((se_h / n).sqrt() < 0.2 && (se_k / n).sqrt() < 0.4);
    }

    #[test]
    fn ranges_match_normal_gait() {
        let t = synthetic_normal_gait(0.556).unwrap();
        let deg = |f: fn(&GaitSample) -> f64| t.samples.iter().map(f).map(f64::to_degrees).collect::<Vec<_>>();
        let hip = deg(|s| s.hip);
        let knee = deg(|s| s.knee);
        let min = |v: &[f64]| v.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = |v: &[f64]| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!((-12.0..=-8.0).contains(&min(&hip)), "hip min {}", min(&hip));
        assert!((28.0..=32.0).contains(&max(&hip)), "hip max {}", max(&hip));
        assert!((0.0..=6.0).contains(&min(&knee)), "knee min {}", min(&knee));
        assert!((57.0..=63.0).contains(&max(&knee)), "knee max {}", max(&knee));
        let peak_gc = t.samples.iter().max_by(|a, b| a.knee.total_cmp(&b.knee)).unwrap().gc_percent;
        assert!((65.0..=76.0).contains(&peak_gc), "knee peak at {peak_gc}%");
        let limits = JointLimits::default();
        for s in &t.samples {
            assert!(limits.contains_deg("hip", s.hip.to_degrees()));
            assert!(limits.contains_deg("knee", s.knee.to_degrees()));
        }
    }

    #[test]
    fn swing_is_faster_than_stance() {
        let kin = to_kinematics(&synthetic_normal_gait(0.556).unwrap(), DEFAULT_CYCLE_DURATION).unwrap();
        let mut swing = [0.0; 2];
        let mut stance = [0.0; 2];
        let (mut ns, mut nt) = (0.0, 0.0);
        for (k, s) in kin.states.iter().enumerate() {
            let v = [s.theta_dot.hip.abs(), s.theta_dot.knee.abs()];
            if kin.gc_percent_of(k) >= 60.0 {
                swing = [swing[0] + v[0], swing[1] + v[1]];
                ns += 1.0;
            } else {
                stance = [stance[0] + v[0], stance[1] + v[1]];
                nt += 1.0;
            }
        }
        for j in 0..2 {
            assert!(swing[j] / ns > stance[j] / nt);
        }
    }

    #[test]
    fn speed_out_of_range() {
        assert!(synthetic_normal_gait(0.05).is_err());
        assert!(synthetic_normal_gait(2.5).is_err());
        assert!(synthetic_normal_gait(f64::NAN).is_err());
    }
}

//! Vertical ground-reaction force profile and the joint torques it induces.

use std::f64::consts::{FRAC_PI_2, PI};

use super::GrfModelParams;
use crate::pair::Pair;

const RISE: f64 = 1.0 / 6.0;

/// Stance-normalized profile: quarter-sine loading to the first peak, a
/// raised-cosine dip to `valley` between the peaks, quarter-sine unloading.
fn profile(u: f64, peak: f64, valley: f64) -> f64 {
    if u < RISE {
        peak * (FRAC_PI_2 * u / RISE).sin()
    } else if u > 1.0 - RISE {
        peak * (FRAC_PI_2 * (1.0 - u) / RISE).sin()
    } else {
        let phase = (u - RISE) / (1.0 - 2.0 * RISE);
        peak - (peak - valley) * (1.0 - (2.0 * PI * phase).cos()) / 2.0
    }
}

/// Vertical GRF (N) at `gc_percent` and the induced joint torques (N·m).
///
/// Double-bump stance profile with peaks of `peak_scale × body_weight` one
/// sixth and five sixths into the stance window (10% and 50% GC for the
/// default 0–60% window). Zero during swing.
pub fn grf_torque(gc_percent: f64, params: &GrfModelParams) -> (f64, Pair<f64>) {
    let (start, end) = params.stance_window;
    let gc = gc_percent.clamp(0.0, 100.0);
    if !(end > start) || gc < start || gc >= end {
        return (0.0, Pair::zero());
    }
    let u = (gc - start) / (end - start);
    let force = params.body_weight * profile(u, params.peak_scale, params.valley_scale);
    (force, params.lever_model * force)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swing_has_no_force() {
        let p = GrfModelParams::default();
        assert_eq!(grf_torque(80.0, &p), (0.0, Pair::zero()));
        assert_eq!(grf_torque(60.0, &p).0, 0.0);
    }

    #[test]
    fn first_peak_at_ten_percent() {
        let p = GrfModelParams::default();
        let (f, tau) = grf_torque(10.0, &p);
        assert!((f - 1.1 * p.body_weight).abs() < 1e-9);
        assert!((tau.hip - f * p.lever_model.hip).abs() < 1e-12);
        assert!((grf_torque(50.0, &p).0 - 1.1 * p.body_weight).abs() < 1e-9);
        assert!(grf_torque(30.0, &p).0 < f);
    }

    #[test]
    fn impulse_close_to_stance_fraction() {
        // Composite Simpson over the stance window; the profile is smooth on each piece.
        let p = GrfModelParams::default();
        let n = 6000;
        let h = 100.0 / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * grf_torque(i as f64 * h, &p).0;
        }
        let mean_over_cycle = acc * h / 3.0 / 100.0;
        let target = p.body_weight * 0.6;
        assert!((mean_over_cycle / target - 1.0).abs() < 0.10, "{mean_over_cycle} vs {target}");
    }
}

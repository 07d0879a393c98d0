//! Gait-cycle kinematics: file ingest, synthesis, periodic-spline
//! resampling and differentiation.

mod csv_io;
mod spline;
mod synthetic;

pub use csv_io::{format_significant, load_trajectory, save_trajectory, trajectory_from_str, trajectory_to_string, GAIT_CSV_HEADER};
pub use spline::PeriodicSpline;
pub use synthetic::{synthetic_normal_gait, FOURIER_HIP_DEG, FOURIER_KNEE_DEG, SYNTHETIC_HARMONICS};

use serde::{Deserialize, Serialize};

use crate::body::JointState;
use crate::error::{Error, Result};
use crate::pair::Pair;

/// Control-loop and resampling grid, s.
pub const KINEMATICS_DT: f64 = 0.001;
/// Default duration of one gait cycle, s.
pub const DEFAULT_CYCLE_DURATION: f64 = 1.4;
/// 2 km/h, m/s.
pub const DEFAULT_WALKING_SPEED: f64 = 2.0 / 3.6;
/// Allowed mismatch between the 0% and 100% samples, degrees.
pub const CLOSURE_TOLERANCE_DEG: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaitSample {
    /// Percent of the gait cycle, 0 ≤ gc < 100.
    pub gc_percent: f64,
    /// Hip angle, rad.
    pub hip: f64,
    /// Knee angle, rad.
    pub knee: f64,
}

/// Joint angles over one gait cycle, treated as periodic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaitTrajectory {
    pub samples: Vec<GaitSample>,
    pub source: String,
    /// Walking speed the trajectory was generated for, when known.
    #[serde(default)]
    pub nominal_speed: Option<f64>,
}

impl GaitTrajectory {
    pub fn new(samples: Vec<GaitSample>, source: impl Into<String>) -> Self {
        Self {
            samples,
            source: source.into(),
            nominal_speed: None,
        }
    }

    /// Pose held for the whole cycle.
    pub fn constant(hip: f64, knee: f64, n: usize) -> Self {
        let samples = (0..n)
            .map(|i| GaitSample {
                gc_percent: 100.0 * i as f64 / n as f64,
                hip,
                knee,
            })
            .collect();
        Self::new(samples, "constant pose")
    }

    fn splines(&self) -> Result<(PeriodicSpline<f64>, PeriodicSpline<f64>)> {
        let gc: Vec<f64> = self.samples.iter().map(|s| s.gc_percent).collect();
        let hip = self.samples.iter().map(|s| s.hip).collect();
        let knee = self.samples.iter().map(|s| s.knee).collect();
        Ok((
            PeriodicSpline::new(gc.clone(), hip, 100.0)?,
            PeriodicSpline::new(gc, knee, 100.0)?,
        ))
    }
}

/// Uniformly sampled states over one cycle, with the spline kept for
/// evaluation between grid points.
#[derive(Debug, Clone)]
pub struct GaitKinematics {
    pub dt: f64,
    pub cycle_duration: f64,
    pub states: Vec<JointState<f64>>,
    pub walking_speed: Option<f64>,
    hip: PeriodicSpline<f64>,
    knee: PeriodicSpline<f64>,
}

impl GaitKinematics {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Gait-cycle percent of grid sample `k` (wraps every cycle).
    pub fn gc_percent_of(&self, k: usize) -> f64 {
        let n = self.states.len();
        100.0 * (k % n) as f64 / n as f64
    }

    pub fn gc_percent_at(&self, t: f64) -> f64 {
        (100.0 * t / self.cycle_duration).rem_euclid(100.0)
    }

    /// State at an arbitrary time, periodic in the cycle duration.
    pub fn state_at(&self, t: f64) -> JointState<f64> {
        let gc = 100.0 * t / self.cycle_duration;
        self.state_at_gc(gc, 100.0 / self.cycle_duration)
    }

    fn state_at_gc(&self, gc: f64, rate: f64) -> JointState<f64> {
        let (h, dh, ddh) = self.hip.eval_all(gc);
        let (k, dk, ddk) = self.knee.eval_all(gc);
        let rate2 = rate * rate;
        JointState::new(
            Pair::new(h, k),
            Pair::new(dh * rate, dk * rate),
            Pair::new(ddh * rate2, ddk * rate2),
        )
    }
}

/// Resamples a trajectory onto the 1 ms grid for a cycle of
/// `cycle_duration` seconds. Rates come from the analytic spline
/// derivatives, computed on the gait-percent axis and then scaled by
/// `100 / cycle_duration`.
pub fn to_kinematics(traj: &GaitTrajectory, cycle_duration: f64) -> Result<GaitKinematics> {
    to_kinematics_with_dt(traj, cycle_duration, KINEMATICS_DT)
}

pub fn to_kinematics_with_dt(
    traj: &GaitTrajectory,
    cycle_duration: f64,
    grid_dt: f64,
) -> Result<GaitKinematics> {
    if !(cycle_duration.is_finite() && cycle_duration > 0.0) {
        return Err(Error::invalid("cycle_duration", format!("must be > 0, got {cycle_duration}")));
    }
    if !(grid_dt.is_finite() && grid_dt > 0.0) {
        return Err(Error::invalid("grid dt", format!("must be > 0, got {grid_dt}")));
    }
    if traj.samples.len() < 4 {
        return Err(Error::TooFewSamples {
            min: 4,
            got: traj.samples.len(),
        });
    }
    let n = (cycle_duration / grid_dt).round() as usize;
    if n < 100 {
        return Err(Error::invalid(
            "cycle_duration",
            format!("{cycle_duration} s gives {n} grid samples, need at least 100"),
        ));
    }
    let (hip, knee) = traj.splines()?;
    let mut kin = GaitKinematics {
        dt: cycle_duration / n as f64,
        cycle_duration,
        states: Vec::with_capacity(n),
        walking_speed: traj.nominal_speed,
        hip,
        knee,
    };
    let rate = 100.0 / cycle_duration;
    kin.states = (0..n)
        .map(|k| kin.state_at_gc(100.0 * k as f64 / n as f64, rate))
        .collect();
    Ok(kin)
}

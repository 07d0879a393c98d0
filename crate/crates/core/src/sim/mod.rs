//! Closed-loop simulation of a virtual subject wearing the modeled robot,
//! and the open-loop torque playback over a gait cycle.

mod closed_loop;
mod grf;
mod playback;
mod rk4;
mod trace;

use serde::{Deserialize, Serialize};

use crate::body::{BodyModel, SegmentParams};
use crate::dynamics::DragAssembly;
use crate::environment::{builtin_by_name, EnvironmentSpec};
use crate::error::{Error, Result};
use crate::pair::Pair;

pub use closed_loop::{muscular_fidelity, run_closed_loop};
pub use grf::grf_torque;
pub use playback::torque_playback;
pub use rk4::rk4_step;
pub use trace::{SimTrace, TraceMeta, TraceMode, TRACE_CSV_HEADER};

/// Largest joint speed before a run is declared diverged, rad/s.
pub const DIVERGENCE_SPEED: f64 = 50.0;
/// Fraction of a cycle the actuators may spend saturated before a warning.
pub const SATURATION_WARN_FRACTION: f64 = 0.10;

fn check_pair_nonneg(what: &'static str, p: Pair<f64>) -> Result<()> {
    if !p.is_finite() {
        return Err(Error::NonFinite(what));
    }
    if p.hip < 0.0 || p.knee < 0.0 {
        return Err(Error::invalid(what, format!("must be >= 0, got ({}, {})", p.hip, p.knee)));
    }
    Ok(())
}

fn check_pair_pos(what: &'static str, p: Pair<f64>) -> Result<()> {
    check_pair_nonneg(what, p)?;
    if p.hip == 0.0 || p.knee == 0.0 {
        return Err(Error::invalid(what, "must be > 0"));
    }
    Ok(())
}

/// Inertial, friction and actuator description of the exoskeleton.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RobotModel {
    pub links: BodyModel<f64>,
    /// N·m·s/rad.
    pub friction_viscous: Pair<f64>,
    /// N·m.
    pub friction_coulomb: Pair<f64>,
    /// N·m, symmetric.
    pub actuator_limit: Pair<f64>,
    /// First-order lag between commanded and delivered torque, s.
    pub actuator_time_constant: f64,
}

impl Default for RobotModel {
    /// Uniform 2.5 kg thigh and 1.5 kg shank links matching the default leg lengths.
    fn default() -> Self {
        let human = BodyModel::<f64>::anthropometric();
        Self {
            links: BodyModel {
                thigh: SegmentParams::uniform_rod(human.thigh.length, 0.03, 2.5),
                shank: SegmentParams::uniform_rod(human.shank.length, 0.03, 1.5),
                rho_body: human.rho_body,
            },
            friction_viscous: Pair::splat(0.5),
            friction_coulomb: Pair::splat(0.3),
            actuator_limit: Pair::splat(80.0),
            actuator_time_constant: 0.002,
        }
    }
}

impl RobotModel {
    /// A robot that adds nothing to the leg: no mass, no friction.
    pub fn transparent(human: &BodyModel<f64>) -> Self {
        Self {
            links: BodyModel {
                thigh: SegmentParams::massless(human.thigh.length, 0.0),
                shank: SegmentParams::massless(human.shank.length, 0.0),
                rho_body: human.rho_body,
            },
            friction_viscous: Pair::zero(),
            friction_coulomb: Pair::zero(),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.links.thigh.validate_relaxed("robot thigh")?;
        self.links.shank.validate_relaxed("robot shank")?;
        check_pair_nonneg("friction_viscous", self.friction_viscous)?;
        check_pair_nonneg("friction_coulomb", self.friction_coulomb)?;
        check_pair_pos("actuator_limit", self.actuator_limit)?;
        if !(self.actuator_time_constant.is_finite() && self.actuator_time_constant > 0.0) {
            return Err(Error::invalid("actuator_time_constant", "must be > 0"));
        }
        Ok(())
    }

    /// Viscous plus Coulomb joint friction, with `sgn(0) = 0`.
    pub fn friction(&self, theta_dot: Pair<f64>) -> Pair<f64> {
        let sgn = |v: f64| if v > 0.0 { 1.0 } else if v < 0.0 { -1.0 } else { 0.0 };
        self.friction_viscous.scale(theta_dot) + self.friction_coulomb.scale(theta_dot.map(sgn))
    }
}

/// PD gains acting on the interaction-torque error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ControllerGains {
    pub kp: Pair<f64>,
    /// s.
    pub kd: Pair<f64>,
    /// Time constant of the first-order filter on the derivative term, s.
    pub derivative_filter: f64,
}

impl Default for ControllerGains {
    fn default() -> Self {
        Self {
            kp: Pair::splat(5.0),
            kd: Pair::splat(0.01),
            derivative_filter: 0.005,
        }
    }
}

impl ControllerGains {
    pub fn validate(&self) -> Result<()> {
        check_pair_nonneg("kp", self.kp)?;
        check_pair_nonneg("kd", self.kd)?;
        if !(self.derivative_filter.is_finite() && self.derivative_filter > 0.0) {
            return Err(Error::invalid("derivative_filter", "must be > 0"));
        }
        Ok(())
    }
}

/// Vertical ground-reaction force model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GrfModelParams {
    /// N.
    pub body_weight: f64,
    /// Gait-cycle percent interval of foot contact.
    pub stance_window: (f64, f64),
    /// Height of the two peaks relative to body weight.
    pub peak_scale: f64,
    /// Mid-stance minimum relative to body weight.
    pub valley_scale: f64,
    /// Torque per newton of vertical force at the hip and knee, m.
    pub lever_model: Pair<f64>,
}

impl Default for GrfModelParams {
    fn default() -> Self {
        Self {
            body_weight: 70.0 * 9.81,
            stance_window: (0.0, 60.0),
            peak_scale: 1.1,
            valley_scale: 0.95,
            lever_model: Pair::new(0.05, 0.03),
        }
    }
}

impl GrfModelParams {
    /// No ground contact at all.
    pub fn none() -> Self {
        Self {
            body_weight: 0.0,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.stance_window;
        if !(a.is_finite() && b.is_finite() && 0.0 <= a && a < b && b <= 100.0) {
            return Err(Error::invalid(
                "stance_window",
                format!("need 0 <= start < end <= 100, got ({a}, {b})"),
            ));
        }
        for (what, v) in [
            ("body_weight", self.body_weight),
            ("peak_scale", self.peak_scale),
            ("valley_scale", self.valley_scale),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(what, format!("must be >= 0, got {v}")));
            }
        }
        if !self.lever_model.is_finite() {
            return Err(Error::NonFinite("lever_model"));
        }
        Ok(())
    }
}

/// The simulated wearer: feedforward torque for the desired gait in the
/// virtual environment plus a tracking PD on the joint angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SubjectModel {
    /// N·m/rad.
    pub kp: Pair<f64>,
    /// N·m·s/rad.
    pub kd: Pair<f64>,
}

impl Default for SubjectModel {
    fn default() -> Self {
        Self {
            kp: Pair::new(200.0, 100.0),
            kd: Pair::new(20.0, 10.0),
        }
    }
}

impl SubjectModel {
    pub fn passive() -> Self {
        Self {
            kp: Pair::zero(),
            kd: Pair::zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    /// Control and integration step, s.
    pub dt: f64,
    pub n_cycles: usize,
    pub virtual_env: EnvironmentSpec<f64>,
    pub real_env: EnvironmentSpec<f64>,
    /// Standard deviation of the interaction-torque sensor noise, N·m.
    pub sensor_noise_std: f64,
    /// Relative error of every estimated model (`estimate = truth × (1 + e)`).
    pub model_error: f64,
    pub seed: u64,
    /// RK4 steps per control step. Commands and noise are held across them.
    pub integrator_substeps: usize,
    pub subject: SubjectModel,
    pub grf: GrfModelParams,
    pub drag_assembly: DragAssembly,
}

impl Default for SimConfig {
    fn default() -> Self {
        let earth = builtin_by_name("earth").expect("earth is built in");
        Self {
            dt: 0.001,
            n_cycles: 3,
            virtual_env: earth.clone(),
            real_env: earth,
            sensor_noise_std: 0.0,
            model_error: 0.0,
            seed: 0,
            integrator_substeps: 2,
            subject: SubjectModel::default(),
            grf: GrfModelParams::default(),
            drag_assembly: DragAssembly::Printed,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0 && self.dt <= 0.01) {
            return Err(Error::invalid("dt", format!("must be in (0, 0.01], got {}", self.dt)));
        }
        if self.integrator_substeps < 1 {
            return Err(Error::invalid("integrator_substeps", "must be >= 1"));
        }
        if self.n_cycles < 1 {
            return Err(Error::invalid("n_cycles", "must be >= 1"));
        }
        self.virtual_env.validate()?;
        self.real_env.validate()?;
        if !(self.sensor_noise_std.is_finite() && self.sensor_noise_std >= 0.0) {
            return Err(Error::invalid("sensor_noise_std", "must be >= 0"));
        }
        if !(self.model_error.is_finite() && self.model_error > -1.0) {
            return Err(Error::invalid("model_error", "must be > -1"));
        }
        check_pair_nonneg("subject.kp", self.subject.kp)?;
        check_pair_nonneg("subject.kd", self.subject.kd)?;
        self.grf.validate()
    }
}

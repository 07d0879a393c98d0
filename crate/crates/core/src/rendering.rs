//! Robot-side torque laws: self-compensation and the environment-rendering
//! command that makes the wearer feel a virtual environment.

use serde::{Deserialize, Serialize};

use crate::body::{BodyModel, JointState};
use crate::dynamics::{coriolis_vector, gravity_vector, inertia_matrix, ResolvedEnvironment};
use crate::environment::EnvironmentSpec;
use crate::error::{Error, Result};
use crate::pair::Pair;
use crate::scalar::Scalar;

/// Every torque signal of the control structure at one instant.
///
/// The external torque on the wearer is `τ_E = τ_R − (M_Rθ̈ + V_R + G_R + τ_GRF)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ControlTorques<T> {
    pub tau_ref: Pair<T>,
    pub tau_imp: Pair<T>,
    pub tau_int: Pair<T>,
    pub tau_comp: Pair<T>,
    pub tau_r: Pair<T>,
    pub tau_grf: Pair<T>,
    pub tau_m: Pair<T>,
}

impl<T: Scalar> ControlTorques<T> {
    pub fn is_finite(&self) -> bool {
        [
            self.tau_ref,
            self.tau_imp,
            self.tau_int,
            self.tau_comp,
            self.tau_r,
            self.tau_grf,
            self.tau_m,
        ]
        .iter()
        .all(Pair::is_finite)
    }
}

/// `τ_Comp = τ̂_GRF + M̂_R(θ)θ̈ + V̂_R(θ, θ̇) + Ĝ_R(θ)` from the estimated robot model.
pub fn compensation_torque<T: Scalar>(
    robot: &BodyModel<T>,
    state: &JointState<T>,
    tau_grf: Pair<T>,
    g_real: T,
) -> Result<Pair<T>> {
    if !state.is_finite() {
        return Err(Error::NonFinite("joint state"));
    }
    if !tau_grf.is_finite() {
        return Err(Error::NonFinite("tau_grf"));
    }
    let m = inertia_matrix(robot, state.theta)?;
    let v = coriolis_vector(robot, state.theta, state.theta_dot)?;
    let g = gravity_vector(robot, state.theta, g_real)?;
    Ok(tau_grf + m.mul_vec(state.theta_ddot) + v + g)
}

/// Environment-rendering part of the command:
/// `(Ĝ_H + B̂_H + D̂_H)(real) − (G* + B* + D*)(virtual)`.
///
/// Identical environments cancel at the argument level and give exactly zero.
pub fn rendering_torque<T: Scalar>(
    human: &BodyModel<T>,
    state: &JointState<T>,
    real: &ResolvedEnvironment<T>,
    virtual_env: &ResolvedEnvironment<T>,
) -> Result<Pair<T>> {
    if real == virtual_env {
        // Still validate the inputs the other branch would have touched.
        real.torque(human, state)?;
        return Ok(Pair::zero());
    }
    Ok(real.torque(human, state)?.total - virtual_env.torque(human, state)?.total)
}

/// Joint torque the actuators must produce:
/// `τ_R = (Ĝ_H + B̂_H + D̂_H)(real) + τ_Comp − (G* + B* + D*)(virtual)`.
pub fn robot_torque_command<T: Scalar>(
    human_est: &BodyModel<T>,
    robot_est: &BodyModel<T>,
    state: &JointState<T>,
    real_env: &EnvironmentSpec<T>,
    virtual_env: &EnvironmentSpec<T>,
    tau_grf: Pair<T>,
) -> Result<Pair<T>> {
    let real = ResolvedEnvironment::new(real_env.clone())?;
    let virt = ResolvedEnvironment::new(virtual_env.clone())?;
    robot_torque_command_resolved(human_est, robot_est, state, &real, &virt, tau_grf)
}

pub fn robot_torque_command_resolved<T: Scalar>(
    human_est: &BodyModel<T>,
    robot_est: &BodyModel<T>,
    state: &JointState<T>,
    real: &ResolvedEnvironment<T>,
    virtual_env: &ResolvedEnvironment<T>,
    tau_grf: Pair<T>,
) -> Result<Pair<T>> {
    let comp = compensation_torque(robot_est, state, tau_grf, real.spec.g)?;
    if real == virtual_env {
        real.torque(human_est, state)?;
        return Ok(comp);
    }
    Ok(comp + rendering_torque(human_est, state, real, virtual_env)?)
}

use crate::body::BodyModel;
use crate::dynamics::{rigid_body_torque, ResolvedEnvironment};
use crate::environment::{builtin_by_name, EnvironmentSpec};
use crate::error::Result;
use crate::gait::GaitKinematics;
use crate::pair::Pair;
use crate::rendering::{rendering_torque, ControlTorques};

use super::trace::{SimTrace, TraceMeta, TraceMode};

/// Open-loop evaluation of one gait cycle in `env`.
///
/// For every grid sample: the environment torque breakdown, the muscular
/// torque needed to follow the gait there, and the ideal rendering torque
/// a massless, frictionless robot would apply if the wearer were actually
/// on Earth (`tau_r = tau_int = tau_ref`). No ground contact is modeled.
pub fn torque_playback(
    body: &BodyModel<f64>,
    env: &EnvironmentSpec<f64>,
    kin: &GaitKinematics,
) -> Result<SimTrace> {
    body.validate()?;
    let virt = ResolvedEnvironment::new(env.clone())?;
    let real = ResolvedEnvironment::new(builtin_by_name("earth").expect("earth is built in"))?;
    let meta = TraceMeta {
        mode: TraceMode::Playback,
        environment: env.name.clone(),
        dt: kin.dt,
        cycle_duration: kin.cycle_duration,
        seed: None,
        warnings: Vec::new(),
        config: serde_json::Value::Null,
    };
    let mut trace = SimTrace::with_capacity(kin.len(), meta);
    for (k, state) in kin.states.iter().enumerate() {
        let breakdown = virt.torque(body, state)?;
        let tau_m = rigid_body_torque(body, state)? + breakdown.total;
        let tau_ref = rendering_torque(body, state, &real, &virt)?;
        let torques = ControlTorques {
            tau_ref,
            tau_imp: Pair::zero(),
            tau_int: tau_ref,
            tau_comp: Pair::zero(),
            tau_r: tau_ref,
            tau_grf: Pair::zero(),
            tau_m,
        };
        trace.push(k as f64 * kin.dt, kin.gc_percent_of(k), *state, torques, breakdown, 0.0);
    }
    Ok(trace)
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::body::{BodyModel, JointState};
use crate::dynamics::{
    coriolis_vector, gravity_vector, inertia_matrix, required_muscular_torque_resolved,
    ResolvedEnvironment,
};
use crate::environment::EnvironmentSpec;
use crate::error::{Error, Result};
use crate::gait::GaitKinematics;
use crate::pair::Pair;
use crate::rendering::{compensation_torque, rendering_torque, ControlTorques};

use super::grf::grf_torque;
use super::rk4::rk4_step;
use super::trace::{SimTrace, TraceMeta, TraceMode};
use super::{
    ControllerGains, RobotModel, SimConfig, DIVERGENCE_SPEED, SATURATION_WARN_FRACTION,
};

/// Integrated state: joint angles, joint rates, delivered actuator torque
/// and the derivative-filter state, hip before knee in each pair.
type State = [f64; 8];

fn unpack(x: &State) -> (Pair<f64>, Pair<f64>, Pair<f64>, Pair<f64>) {
    (
        Pair::new(x[0], x[1]),
        Pair::new(x[2], x[3]),
        Pair::new(x[4], x[5]),
        Pair::new(x[6], x[7]),
    )
}

fn pack(a: Pair<f64>, b: Pair<f64>, c: Pair<f64>, d: Pair<f64>) -> State {
    [a.hip, a.knee, b.hip, b.knee, c.hip, c.knee, d.hip, d.knee]
}

struct Eval {
    deriv: State,
    state: JointState<f64>,
    torques: ControlTorques<f64>,
    grf: f64,
    error: Pair<f64>,
    saturated: [bool; 2],
}

/// Everything the right-hand side needs, with estimates precomputed.
struct Loop<'a> {
    human: &'a BodyModel<f64>,
    robot: &'a RobotModel,
    gains: &'a ControllerGains,
    kin: &'a GaitKinematics,
    cfg: &'a SimConfig,
    real: ResolvedEnvironment<f64>,
    virt: ResolvedEnvironment<f64>,
    human_est: BodyModel<f64>,
    robot_est: RobotModel,
    est_scale: f64,
}

impl<'a> Loop<'a> {
    fn eval(&self, t: f64, x: &State, noise: Pair<f64>) -> Result<Eval> {
        let (theta, omega, tau_a, filt) = unpack(x);
        let g = self.real.spec.g;

        let desired = self.kin.state_at(t);
        let (grf, tau_grf) = grf_torque(self.kin.gc_percent_at(t), &self.cfg.grf);
        let subject = &self.cfg.subject;
        let tau_m = required_muscular_torque_resolved(self.human, &desired, &self.virt)?
            + subject.kp.scale(desired.theta - theta)
            + subject.kd.scale(desired.theta_dot - omega);

        // Coupled plant: human and robot links share the joint coordinates.
        let links = &self.robot.links;
        let friction = self.robot.friction(omega);
        let mass = inertia_matrix(self.human, theta)? + inertia_matrix(links, theta)?;
        let v_h = coriolis_vector(self.human, theta, omega)?;
        let v_r = coriolis_vector(links, theta, omega)?;
        let g_r = gravity_vector(links, theta, g)?;
        let at_rest = JointState::new(theta, omega, Pair::zero());
        let env_real = self.real.torque(self.human, &at_rest)?.total;
        let rhs = tau_m + tau_a - tau_grf - v_h - v_r - env_real - g_r - friction;
        let theta_ddot = mass.solve(rhs).ok_or(Error::invalid("plant", "singular inertia matrix"))?;
        let state = JointState::new(theta, omega, theta_ddot);

        // Load cell between actuator and cuff, with the estimated GRF torque removed.
        let m_r = inertia_matrix(links, theta)?;
        let load_cell = tau_a - (m_r.mul_vec(theta_ddot) + v_r + g_r + friction);
        let grf_est = tau_grf * self.est_scale;
        let tau_int = load_cell - grf_est + noise;

        let tau_ref = rendering_torque(&self.human_est, &state, &self.real, &self.virt)?;
        let err = tau_ref - tau_int;
        let tf = self.gains.derivative_filter;
        let d_err = (err - filt) * (1.0 / tf);
        let tau_comp = compensation_torque(&self.robot_est.links, &state, grf_est, g)?
            + self.robot_est.friction(omega);
        let command = tau_ref + self.gains.kp.scale(err) + self.gains.kd.scale(d_err) + tau_comp;

        let lim = self.robot.actuator_limit;
        let saturated = [command.hip.abs() > lim.hip, command.knee.abs() > lim.knee];
        let delivered = command.zip_with(lim, |u, l| u.clamp(-l, l));
        let tau_a_dot = (delivered - tau_a) * (1.0 / self.robot.actuator_time_constant);

        Ok(Eval {
            deriv: pack(omega, theta_ddot, tau_a_dot, d_err),
            state,
            torques: ControlTorques {
                tau_ref,
                tau_imp: Pair::zero(),
                tau_int,
                tau_comp,
                tau_r: tau_a,
                tau_grf,
                tau_m,
            },
            grf,
            error: err,
            saturated,
        })
    }

    /// Starting point on the desired trajectory with the actuator already
    /// delivering its steady command and the derivative filter settled.
    fn initial_state(&self) -> Result<State> {
        let d = self.kin.state_at(0.0);
        // The steady actuator torque solves `command(τ_a) = τ_a`, which is
        // affine in τ_a away from saturation. A couple of Newton steps with
        // a finite-difference Jacobian settle it.
        let residual = |tau_a: Pair<f64>| -> Result<(Pair<f64>, Pair<f64>)> {
            let mut x = pack(d.theta, d.theta_dot, tau_a, Pair::zero());
            let e0 = self.eval(0.0, &x, Pair::zero())?.error;
            x[6] = e0.hip;
            x[7] = e0.knee;
            let ev = self.eval(0.0, &x, Pair::zero())?;
            let tc = self.robot.actuator_time_constant;
            Ok((ev.deriv_tau() * tc, ev.error))
        };
        let mut tau_a = Pair::zero();
        for _ in 0..3 {
            let (f0, _) = residual(tau_a)?;
            let h = 1e-3;
            let (f1, _) = residual(tau_a + Pair::new(h, 0.0))?;
            let (f2, _) = residual(tau_a + Pair::new(0.0, h))?;
            let j = crate::pair::Mat2::new(
                (f1.hip - f0.hip) / h,
                (f2.hip - f0.hip) / h,
                (f1.knee - f0.knee) / h,
                (f2.knee - f0.knee) / h,
            );
            match j.solve(f0) {
                Some(step) if step.is_finite() => tau_a = tau_a - step,
                _ => break,
            }
        }
        let (_, err) = residual(tau_a)?;
        Ok(pack(d.theta, d.theta_dot, tau_a, err))
    }
}

impl Eval {
    fn deriv_tau(&self) -> Pair<f64> {
        Pair::new(self.deriv[4], self.deriv[5])
    }
}

/// Simulates the wearer and robot over `cfg.n_cycles` gait cycles.
///
/// The continuous-time loop (plant, first-order actuator, filtered PD on the
/// interaction-torque error, continuously acting subject) is integrated with
/// fixed-step RK4, `cfg.integrator_substeps` steps per control step of
/// `cfg.dt`. Sensor noise is drawn once per control step and held.
/// The step is adjusted so a cycle holds a whole number of steps.
pub fn run_closed_loop(
    human: &BodyModel<f64>,
    robot: &RobotModel,
    gains: &ControllerGains,
    kin: &GaitKinematics,
    cfg: &SimConfig,
) -> Result<SimTrace> {
    human.validate()?;
    robot.validate()?;
    gains.validate()?;
    cfg.validate()?;

    let est_scale = 1.0 + cfg.model_error;
    let mut robot_est = robot.clone();
    robot_est.links = robot.links.scale_inertia(est_scale);
    robot_est.friction_viscous = robot.friction_viscous * est_scale;
    robot_est.friction_coulomb = robot.friction_coulomb * est_scale;
    let lp = Loop {
        human,
        robot,
        gains,
        kin,
        cfg,
        real: ResolvedEnvironment::new(cfg.real_env.clone())?.with_assembly(cfg.drag_assembly),
        virt: ResolvedEnvironment::new(cfg.virtual_env.clone())?.with_assembly(cfg.drag_assembly),
        human_est: human.scale_inertia(est_scale),
        robot_est,
        est_scale,
    };

    let per_cycle = ((kin.cycle_duration / cfg.dt).round() as usize).max(1);
    let dt = kin.cycle_duration / per_cycle as f64;
    let n_steps = per_cycle * cfg.n_cycles;

    let noise_dist = Normal::new(0.0, cfg.sensor_noise_std)
        .map_err(|e| Error::invalid("sensor_noise_std", e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let meta = TraceMeta {
        mode: TraceMode::ClosedLoop,
        environment: cfg.virtual_env.name.clone(),
        dt,
        cycle_duration: kin.cycle_duration,
        seed: Some(cfg.seed),
        warnings: Vec::new(),
        config: serde_json::Value::Null,
    };
    let mut trace = SimTrace::with_capacity(n_steps, meta);
    let mut x = lp.initial_state()?;
    let mut saturated_steps = [0usize; 2];

    for k in 0..n_steps {
        let t = k as f64 * dt;
        let noise = if cfg.sensor_noise_std > 0.0 {
            Pair::new(noise_dist.sample(&mut rng), noise_dist.sample(&mut rng))
        } else {
            Pair::zero()
        };
        let ev = lp.eval(t, &x, noise)?;
        let breakdown = lp.virt.torque(human, &ev.state)?;
        trace.push(t, kin.gc_percent_at(t), ev.state, ev.torques, breakdown, ev.grf);
        for (count, sat) in saturated_steps.iter_mut().zip(ev.saturated) {
            *count += usize::from(sat);
        }
        if (k + 1) % per_cycle == 0 {
            let cycle = k / per_cycle;
            for (joint, count) in ["hip", "knee"].iter().zip(saturated_steps.iter_mut()) {
                let frac = *count as f64 / per_cycle as f64;
                if frac > SATURATION_WARN_FRACTION {
                    trace.meta.warnings.push(format!(
                        "{joint} actuator saturated for {:.1}% of cycle {cycle}",
                        100.0 * frac
                    ));
                }
                *count = 0;
            }
        }

        let mut rhs = |tau: f64, s: &State| lp.eval(tau, s, noise).map(|e| e.deriv);
        let sub = cfg.integrator_substeps;
        let h = dt / sub as f64;
        for i in 0..sub {
            x = rk4_step(&mut rhs, t + i as f64 * h, &x, h).map_err(|e| Error::Diverged {
                step: k,
                reason: e.to_string(),
            })?;
        }
        if let Some(reason) = divergence(&x) {
            return Err(Error::Diverged { step: k, reason });
        }
    }

    let (theta, omega, _, _) = unpack(&x);
    let t_end = n_steps as f64 * dt;
    let last = lp.eval(t_end, &x, Pair::zero())?;
    trace.end_state = Some(JointState::new(theta, omega, last.state.theta_ddot));
    Ok(trace)
}

fn divergence(x: &State) -> Option<String> {
    if x.iter().any(|v| !v.is_finite()) {
        return Some("non-finite state".into());
    }
    let speed = x[2].abs().max(x[3].abs());
    (speed > DIVERGENCE_SPEED)
        .then(|| format!("joint speed {speed:.1} rad/s exceeds {DIVERGENCE_SPEED} rad/s"))
}

/// Relative RMS difference between the recorded muscular torque and the
/// torque needed to move the leg along the realized kinematics inside
/// `env`, over samples with `t >= from_time`. Both joints are pooled.
pub fn muscular_fidelity(
    trace: &SimTrace,
    human: &BodyModel<f64>,
    env: &EnvironmentSpec<f64>,
    from_time: f64,
) -> Result<f64> {
    let env = ResolvedEnvironment::new(env.clone())?;
    let mut num = 0.0;
    let mut den = 0.0;
    let mut n = 0usize;
    for k in (0..trace.len()).filter(|&k| trace.t[k] >= from_time) {
        let required = required_muscular_torque_resolved(human, &trace.states[k], &env)?;
        let diff = trace.torques[k].tau_m - required;
        num += diff.dot(diff);
        den += required.dot(required);
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyWindow(format!("no samples after t = {from_time}")));
    }
    if den == 0.0 {
        return Ok(num.sqrt());
    }
    Ok((num / den).sqrt())
}


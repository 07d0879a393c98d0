//! Closed-form rigid-body and environment torques of the two-link leg.
//!
//! With `h_c = X₂cosθ₂ − Y₂sinθ₂` and `h_s = X₂sinθ₂ + Y₂cosθ₂`:
//!
//! ```text
//! M11 = J₁ + J₂ + m₂L₁² + 2L₁h_c     M12 = M21 = J₂ + L₁h_c     M22 = J₂
//! V1  = −L₁h_s(θ̇₂² + 2θ̇₁θ̇₂)          V2  = L₁h_s θ̇₁²
//! G1  = g[X₁sinθ₁ + Y₁cosθ₁ + X₂sinθ₁₂ + Y₂cosθ₁₂]
//! G2  = g[X₂sinθ₁₂ + Y₂cosθ₁₂]
//! ```
//!
//! The inertia entries are the Lagrangian completion of the lumped Coriolis
//! vector: `∂M12/∂θ₂ = −L₁h_s`, which is what makes V the Christoffel form of M.

use serde::{Deserialize, Serialize};

use crate::body::{BodyModel, JointState};
use crate::environment::{EnvironmentSpec, FluidConstants};
use crate::error::{Error, Result};
use crate::pair::{Mat2, Pair};
use crate::scalar::Scalar;

fn ensure_finite<T: Scalar>(v: Pair<T>, what: &'static str) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

fn ensure_body<T: Scalar>(body: &BodyModel<T>) -> Result<()> {
    if body.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite("body model"))
    }
}

pub fn inertia_matrix<T: Scalar>(body: &BodyModel<T>, theta: Pair<T>) -> Result<Mat2<T>> {
    ensure_body(body)?;
    ensure_finite(theta, "theta")?;
    let (t, s) = (&body.thigh, &body.shank);
    let l1 = t.length;
    let h_c = s.first_moment_axial * theta.knee.cos() - s.first_moment_transverse * theta.knee.sin();
    let coupling = l1 * h_c;
    let m12 = s.moment + coupling;
    Ok(Mat2::new(
        t.moment + s.moment + s.mass * l1 * l1 + T::lit(2.0) * coupling,
        m12,
        m12,
        s.moment,
    ))
}

pub fn coriolis_vector<T: Scalar>(
    body: &BodyModel<T>,
    theta: Pair<T>,
    theta_dot: Pair<T>,
) -> Result<Pair<T>> {
    ensure_body(body)?;
    ensure_finite(theta, "theta")?;
    ensure_finite(theta_dot, "theta_dot")?;
    let s = &body.shank;
    let h = body.thigh.length
        * (s.first_moment_axial * theta.knee.sin() + s.first_moment_transverse * theta.knee.cos());
    let (w1, w2) = (theta_dot.hip, theta_dot.knee);
    Ok(Pair::new(-h * (w2 * w2 + T::lit(2.0) * w1 * w2), h * w1 * w1))
}

pub fn gravity_vector<T: Scalar>(body: &BodyModel<T>, theta: Pair<T>, g: T) -> Result<Pair<T>> {
    ensure_body(body)?;
    ensure_finite(theta, "theta")?;
    if !g.is_finite() {
        return Err(Error::NonFinite("g"));
    }
    if g < T::zero() {
        return Err(Error::invalid("g", format!("must be >= 0, got {g}")));
    }
    let (t, s) = (&body.thigh, &body.shank);
    let th12 = theta.hip + theta.knee;
    let shank = s.first_moment_axial * th12.sin() + s.first_moment_transverse * th12.cos();
    let thigh = t.first_moment_axial * theta.hip.sin() + t.first_moment_transverse * theta.hip.cos();
    Ok(Pair::new(g * (thigh + shank), g * shank))
}

/// Archimedes torque, `B = −(ρ_F/ρ_H)·G`, acting at the segment centers of mass.
pub fn buoyancy_vector<T: Scalar>(
    body: &BodyModel<T>,
    theta: Pair<T>,
    env: &EnvironmentSpec<T>,
) -> Result<Pair<T>> {
    body.validate_density()?;
    env.validate()?;
    let ratio = env.density_ratio(body.rho_body);
    let g = gravity_vector(body, theta, env.g)?;
    Ok(g.map(|v| -(ratio * v)))
}

/// How the per-segment drag torques are combined into joint torques.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DragAssembly {
    /// `D = [τ_D1 − τ_D2, τ_D2]`.
    #[default]
    Printed,
    /// `D = [τ_D1 + τ_D2, τ_D2]`: the knee-segment torque added at the hip.
    Additive,
}

/// Integrated drag torques of the thigh (about the hip) and of the shank
/// (about the knee), before assembly into joint torques.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentDrag<T> {
    pub thigh: T,
    pub shank: T,
}

/// Quadratic-drag torques on both segments, integrated along their length:
///
/// ```text
/// τ_D1 = −ρ C_D r₁ (L₁⁴θ̇₁²/4) sgn θ̇₁
/// τ_D2 = −ρ C_D r₂ (L₁²L₂²θ̇₁²/2 sgn θ̇₁ + L₂⁴θ̇₁₂²/4 sgn θ̇₁₂
///                  + L₁L₂³θ̇₁θ̇₁₂cosθ₂/3 (sgn θ̇₁ + sgn θ̇₁₂))
/// ```
pub fn segment_drag<T: Scalar>(
    body: &BodyModel<T>,
    theta: Pair<T>,
    theta_dot: Pair<T>,
    rho_fluid: T,
    drag_coeff: T,
) -> Result<SegmentDrag<T>> {
    ensure_body(body)?;
    ensure_finite(theta, "theta")?;
    ensure_finite(theta_dot, "theta_dot")?;
    if !(rho_fluid.is_finite() && drag_coeff.is_finite()) {
        return Err(Error::NonFinite("fluid constants"));
    }
    let l = T::lit;
    let (l1, l2) = (body.thigh.length, body.shank.length);
    let (r1, r2) = (body.thigh.radius, body.shank.radius);
    let w1 = theta_dot.hip;
    let w12 = theta_dot.hip + theta_dot.knee;
    let (s1, s12) = (w1.sgn(), w12.sgn());
    let k = rho_fluid * drag_coeff;

    let l1_2 = l1 * l1;
    let l2_2 = l2 * l2;
    let thigh = -(k * r1 * (l1_2 * l1_2 * w1 * w1 / l(4.0)) * s1);
    let shank = -(k
        * r2
        * (l1_2 * l2_2 * w1 * w1 / l(2.0) * s1
            + l2_2 * l2_2 * w12 * w12 / l(4.0) * s12
            + l1 * l2_2 * l2 * w1 * w12 * theta.knee.cos() / l(3.0) * (s1 + s12)));
    Ok(SegmentDrag { thigh, shank })
}

pub fn drag_torque_vector<T: Scalar>(
    body: &BodyModel<T>,
    theta: Pair<T>,
    theta_dot: Pair<T>,
    env: &EnvironmentSpec<T>,
    fc: &FluidConstants<T>,
) -> Result<Pair<T>> {
    drag_torque_vector_with(body, theta, theta_dot, env, fc, DragAssembly::Printed)
}

pub fn drag_torque_vector_with<T: Scalar>(
    body: &BodyModel<T>,
    theta: Pair<T>,
    theta_dot: Pair<T>,
    env: &EnvironmentSpec<T>,
    fc: &FluidConstants<T>,
    assembly: DragAssembly,
) -> Result<Pair<T>> {
    let d = segment_drag(body, theta, theta_dot, env.rho_fluid, fc.drag_coeff)?;
    Ok(match assembly {
        DragAssembly::Printed => Pair::new(d.thigh - d.shank, d.shank),
        DragAssembly::Additive => Pair::new(d.thigh + d.shank, d.shank),
    })
}

/// Per-joint environment torques and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TorqueBreakdown<T> {
    pub gravity: Pair<T>,
    pub buoyancy: Pair<T>,
    pub drag: Pair<T>,
    pub total: Pair<T>,
}

impl<T: Scalar> TorqueBreakdown<T> {
    pub fn new(gravity: Pair<T>, buoyancy: Pair<T>, drag: Pair<T>) -> Self {
        Self {
            gravity,
            buoyancy,
            drag,
            total: gravity + buoyancy + drag,
        }
    }

    pub fn zero() -> Self {
        Self::new(Pair::zero(), Pair::zero(), Pair::zero())
    }
}

/// An environment with its fluid constants resolved once.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedEnvironment<T> {
    pub spec: EnvironmentSpec<T>,
    pub fluid: FluidConstants<T>,
    pub assembly: DragAssembly,
}

impl<T: Scalar> ResolvedEnvironment<T> {
    pub fn new(spec: EnvironmentSpec<T>) -> Result<Self> {
        let fluid = spec.fluid_constants()?;
        Ok(Self {
            spec,
            fluid,
            assembly: DragAssembly::Printed,
        })
    }

    pub fn with_assembly(mut self, assembly: DragAssembly) -> Self {
        self.assembly = assembly;
        self
    }

    pub fn torque(&self, body: &BodyModel<T>, state: &JointState<T>) -> Result<TorqueBreakdown<T>> {
        let gravity = gravity_vector(body, state.theta, self.spec.g)?;
        let buoyancy = buoyancy_vector(body, state.theta, &self.spec)?;
        let drag = drag_torque_vector_with(
            body,
            state.theta,
            state.theta_dot,
            &self.spec,
            &self.fluid,
            self.assembly,
        )?;
        Ok(TorqueBreakdown::new(gravity, buoyancy, drag))
    }
}

/// Gravity, buoyancy and drag torques of `env` at `state`.
pub fn environment_torque<T: Scalar>(
    body: &BodyModel<T>,
    state: &JointState<T>,
    env: &EnvironmentSpec<T>,
) -> Result<TorqueBreakdown<T>> {
    ResolvedEnvironment::new(env.clone())?.torque(body, state)
}

/// Inertial plus Coriolis torque `M(θ)θ̈ + V(θ, θ̇)`.
pub fn rigid_body_torque<T: Scalar>(body: &BodyModel<T>, state: &JointState<T>) -> Result<Pair<T>> {
    ensure_finite(state.theta_ddot, "theta_ddot")?;
    let m = inertia_matrix(body, state.theta)?;
    let v = coriolis_vector(body, state.theta, state.theta_dot)?;
    Ok(m.mul_vec(state.theta_ddot) + v)
}

/// Muscular torque needed to follow `state` inside `env`.
pub fn required_muscular_torque<T: Scalar>(
    body: &BodyModel<T>,
    state: &JointState<T>,
    env: &EnvironmentSpec<T>,
) -> Result<Pair<T>> {
    required_muscular_torque_resolved(body, state, &ResolvedEnvironment::new(env.clone())?)
}

pub fn required_muscular_torque_resolved<T: Scalar>(
    body: &BodyModel<T>,
    state: &JointState<T>,
    env: &ResolvedEnvironment<T>,
) -> Result<Pair<T>> {
    Ok(rigid_body_torque(body, state)? + env.torque(body, state)?.total)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;
    use crate::environment::builtin_by_name;

    fn body() -> BodyModel<f64> {
        BodyModel::anthropometric()
    }

    #[test]
    fn inertia_symmetric_and_coupling_at_right_angle() {
        let b = body();
        let m = inertia_matrix(&b, Pair::new(0.3, FRAC_PI_2)).unwrap();
        assert_eq!(m.m12, m.m21);
        assert!((m.m12 - b.shank.moment).abs() < 1e-12);
        assert_eq!(m.m22, b.shank.moment);
    }

    #[test]
    fn inertia_rejects_nan() {
        assert!(inertia_matrix(&body(), Pair::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn coriolis_cases() {
        let b = body();
        assert_eq!(
            coriolis_vector(&b, Pair::new(0.4, 1.1), Pair::zero()).unwrap(),
            Pair::zero()
        );
        let w = 1.7;
        let v = coriolis_vector(&b, Pair::new(0.2, FRAC_PI_2), Pair::new(w, 0.0)).unwrap();
        assert!(v.hip.abs() < 1e-15);
        let expected = b.thigh.length * b.shank.first_moment_axial * w * w;
        assert!((v.knee - expected).abs() < 1e-12);
    }

    #[test]
    fn gravity_cases() {
        let b = body();
        assert_eq!(gravity_vector(&b, Pair::zero(), 9.81).unwrap(), Pair::zero());
        let g = gravity_vector(&b, Pair::new(FRAC_PI_2, 0.0), 9.81).unwrap();
        let (x1, x2) = (b.thigh.first_moment_axial, b.shank.first_moment_axial);
        assert!((g.hip - 9.81 * (x1 + x2)).abs() < 1e-12);
        assert!((g.knee - 9.81 * x2).abs() < 1e-12);
        assert!(gravity_vector(&b, Pair::zero(), -1.0).is_err());
    }

    #[test]
    fn gravity_scales_with_planet_ratio() {
        let b = body();
        let th = Pair::new(0.35, 0.8);
        let earth = gravity_vector(&b, th, 9.81).unwrap();
        for g in [1.63, 3.71, 24.5] {
            let scaled = gravity_vector(&b, th, g).unwrap();
            let alpha = g / 9.81;
            assert!((scaled.hip - alpha * earth.hip).abs() <= 1e-14 * earth.hip.abs().max(1.0));
        }
    }

    #[test]
    fn buoyancy_neutral_and_vacuum() {
        let b = body();
        let th = Pair::new(0.5, 0.7);
        let g = gravity_vector(&b, th, 9.81).unwrap();
        let neutral = EnvironmentSpec::new("neutral", 9.81, 1041.0, 1e-3);
        assert_eq!(buoyancy_vector(&b, th, &neutral).unwrap(), -g);
        let vac = EnvironmentSpec::new("vac", 9.81, 0.0, 1.0);
        assert_eq!(buoyancy_vector(&b, th, &vac).unwrap(), Pair::new(-0.0, -0.0));
        let mut bad = b;
        bad.rho_body = 0.0;
        assert!(buoyancy_vector(&bad, th, &neutral).is_err());
    }

    #[test]
    fn water_buoyancy_ratio() {
        let b = body();
        let th = Pair::new(0.5, 0.7);
        let water = builtin_by_name("water").unwrap();
        let g = gravity_vector(&b, th, 9.81).unwrap();
        let bb = buoyancy_vector(&b, th, &water).unwrap();
        assert!((bb.hip.abs() / g.hip.abs() - 0.9589).abs() < 1e-4);
    }

    #[test]
    fn drag_zero_at_rest() {
        let b = body();
        let w = builtin_by_name("water").unwrap();
        let fc = w.fluid_constants().unwrap();
        let d = drag_torque_vector(&b, Pair::new(0.1, 0.2), Pair::zero(), &w, &fc).unwrap();
        assert_eq!(d, Pair::new(0.0, -0.0));
    }

    #[test]
    fn thigh_drag_hand_value() {
        // Shank stationary in space: θ̇₁₂ = 0, so only the thigh term and the
        // θ̇₁² term of the shank survive.
        let mut b = body();
        b.thigh.length = 0.4;
        b.thigh.radius = 0.1;
        let d = segment_drag(&b, Pair::new(0.0, 0.5), Pair::new(2.0, -2.0), 998.2, 1.17).unwrap();
        let expected = -998.2 * 1.17 * 0.1 * 0.4f64.powi(4) * 4.0 / 4.0;
        assert!((d.thigh - expected).abs() < 1e-12);
        assert!((d.thigh + 2.99).abs() < 0.01);
    }

    #[test]
    fn drag_assembly_variants() {
        let b = body();
        let w = builtin_by_name("honey").unwrap();
        let fc = w.fluid_constants().unwrap();
        let (th, wd) = (Pair::new(0.2, 0.9), Pair::new(1.3, -0.4));
        let seg = segment_drag(&b, th, wd, w.rho_fluid, fc.drag_coeff).unwrap();
        let printed = drag_torque_vector(&b, th, wd, &w, &fc).unwrap();
        let additive = drag_torque_vector_with(&b, th, wd, &w, &fc, DragAssembly::Additive).unwrap();
        assert_eq!(printed, Pair::new(seg.thigh - seg.shank, seg.shank));
        assert_eq!(additive, Pair::new(seg.thigh + seg.shank, seg.shank));
    }

    #[test]
    fn breakdown_total_is_componentwise_sum() {
        let b = body();
        let s = JointState::new(Pair::new(0.2, 0.9), Pair::new(1.3, -0.4), Pair::new(0.0, 2.0));
        let t = environment_torque(&b, &s, &builtin_by_name("honey").unwrap()).unwrap();
        assert_eq!(t.total, t.gravity + t.buoyancy + t.drag);
    }

    #[test]
    fn vacuum_static_total_is_gravity() {
        let b = body();
        let s = JointState::at_rest(Pair::new(0.4, 0.3));
        let vac = EnvironmentSpec::new("vac", 9.81, 0.0, 1.0);
        let t = environment_torque(&b, &s, &vac).unwrap();
        assert_eq!(t.total, t.gravity);
        let tau = required_muscular_torque(&b, &s, &vac).unwrap();
        assert_eq!(tau, t.gravity);
    }

    #[test]
    fn neutral_buoyancy_static_needs_no_muscle() {
        let b = body();
        let s = JointState::at_rest(Pair::new(0.4, 0.3));
        let neutral = EnvironmentSpec::new("neutral", 9.81, 1041.0, 1e-3);
        let t = environment_torque(&b, &s, &neutral).unwrap();
        assert_eq!(t.total.norm(), 0.0);
        assert_eq!(required_muscular_torque(&b, &s, &neutral).unwrap().norm(), 0.0);
    }

    #[test]
    fn works_in_f32() {
        let b = BodyModel::<f32>::anthropometric();
        let env = builtin_by_name::<f32>("water").unwrap();
        let s = JointState::new(Pair::new(0.2f32, 0.4), Pair::new(1.0, 2.0), Pair::zero());
        let t = environment_torque(&b, &s, &env).unwrap();
        assert!(t.total.is_finite());
    }
}

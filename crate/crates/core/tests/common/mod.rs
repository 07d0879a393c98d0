//! Independent reference computations shared by the integration tests.
//! Nothing here calls the closed forms it is used to check.
#![allow(dead_code)]

use exoverse_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A physically valid leg with randomized proportions.
pub fn random_body(r: &mut impl Rng) -> BodyModel64 {
    let seg = |r: &mut dyn rand::RngCore, len: (f64, f64), mass: (f64, f64)| {
        let length = r.random_range(len.0..len.1);
        let mass = r.random_range(mass.0..mass.1);
        let com = r.random_range(0.3..0.6) * length;
        let off = r.random_range(-0.05..0.05) * length;
        // Moment about the joint: parallel axis plus a positive centroidal part.
        let centroidal = mass * (r.random_range(0.2..0.35) * length).powi(2);
        SegmentParams {
            length,
            radius: r.random_range(0.03..0.12),
            mass,
            moment: centroidal + mass * (com * com + off * off),
            first_moment_axial: mass * com,
            first_moment_transverse: mass * off,
        }
    };
    BodyModel {
        thigh: seg(r, (0.3, 0.5), (4.0, 12.0)),
        shank: seg(r, (0.3, 0.5), (2.0, 6.0)),
        rho_body: r.random_range(950.0..1100.0),
    }
}

pub fn random_pair(r: &mut impl Rng, lo: f64, hi: f64) -> Pair64 {
    Pair::new(r.random_range(lo..hi), r.random_range(lo..hi))
}

/// Eigenvalues of a symmetric 2×2 matrix from the characteristic polynomial.
pub fn sym_eigen(m: &Mat2x64) -> (f64, f64) {
    let mean = 0.5 * (m.m11 + m.m22);
    let diff = 0.5 * (m.m11 - m.m22);
    let rad = (diff * diff + m.m12 * m.m21).sqrt();
    (mean - rad, mean + rad)
}

/// Coriolis/centrifugal torque from Christoffel symbols of the inertia
/// matrix, with its partial derivatives taken by central differences.
pub fn christoffel_coriolis(body: &BodyModel64, theta: Pair64, theta_dot: Pair64) -> Pair64 {
    let h = 1e-5;
    let m_at = |t: Pair64| {
        let m = inertia_matrix(body, t).unwrap();
        [[m.m11, m.m12], [m.m21, m.m22]]
    };
    // dm[k][i][j] = ∂M_ij/∂θ_k
    let mut dm = [[[0.0; 2]; 2]; 2];
    for (k, step) in [Pair::new(h, 0.0), Pair::new(0.0, h)].into_iter().enumerate() {
        let plus = m_at(theta + step);
        let minus = m_at(theta - step);
        for i in 0..2 {
            for j in 0..2 {
                dm[k][i][j] = (plus[i][j] - minus[i][j]) / (2.0 * h);
            }
        }
    }
    let qd = theta_dot.to_array();
    let mut v = [0.0; 2];
    for (i, vi) in v.iter_mut().enumerate() {
        for j in 0..2 {
            for k in 0..2 {
                let c = 0.5 * (dm[k][i][j] + dm[j][i][k] - dm[i][j][k]);
                *vi += c * qd[j] * qd[k];
            }
        }
    }
    Pair::from(v)
}

fn simpson(n: usize, len: f64, f: impl Fn(f64) -> f64) -> f64 {
    assert!(n % 2 == 0);
    let h = len / n as f64;
    let mut acc = f(0.0) + f(len);
    for i in 1..n {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    acc * h / 3.0
}

fn sgn(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Thigh and shank drag torques from the per-element torque densities,
/// integrated with composite Simpson over `n` elements per segment.
pub fn simpson_segment_drag(
    body: &BodyModel64,
    theta: Pair64,
    theta_dot: Pair64,
    rho: f64,
    cd: f64,
    n: usize,
) -> (f64, f64) {
    let (l1, l2) = (body.thigh.length, body.shank.length);
    let (r1, r2) = (body.thigh.radius, body.shank.radius);
    let w1 = theta_dot.hip;
    let w12 = theta_dot.hip + theta_dot.knee;
    let thigh = simpson(n, l1, |s| -rho * cd * r1 * s * (s * w1).powi(2) * sgn(w1));
    let shank = simpson(n, l2, |s| {
        -rho * cd
            * r2
            * s
            * (l1 * l1 * w1 * w1 * sgn(w1)
                + s * s * w12 * w12 * sgn(w12)
                + l1 * s * w1 * w12 * theta.knee.cos() * (sgn(w1) + sgn(w12)))
    });
    (thigh, shank)
}

/// The muscular torque left over when the robot applies `tau_r`, from the
/// wearer's equation of motion with the robot and ground as external loads.
pub fn muscular_from_robot_torque(
    human: &BodyModel64,
    robot: &BodyModel64,
    state: &JointState64,
    real: &EnvironmentSpec64,
    tau_grf: Pair64,
    tau_r: Pair64,
) -> Pair64 {
    let m_h = inertia_matrix(human, state.theta).unwrap();
    let m_r = inertia_matrix(robot, state.theta).unwrap();
    let v_h = coriolis_vector(human, state.theta, state.theta_dot).unwrap();
    let v_r = coriolis_vector(robot, state.theta, state.theta_dot).unwrap();
    let g_r = gravity_vector(robot, state.theta, real.g).unwrap();
    let env = environment_torque(human, state, real).unwrap().total;
    m_h.mul_vec(state.theta_ddot) + v_h + env + m_r.mul_vec(state.theta_ddot) + v_r + g_r + tau_grf
        - tau_r
}

pub fn time_it<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t0 = std::time::Instant::now();
    let out = f();
    (out, t0.elapsed().as_secs_f64())
}

mod common;

use common::*;
use exoverse_core::*;
use exoverse_core::dynamics::rigid_body_torque;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn inertia_symmetric_positive_definite() {
    let mut r = rng(1);
    for _ in 0..10_000 {
        let body = random_body(&mut r);
        let theta = random_pair(&mut r, -3.2, 3.2);
        let m = inertia_matrix(&body, theta).unwrap();
        assert_eq!(m.m12, m.m21);
        let (lo, hi) = sym_eigen(&m);
        assert!(lo > 0.0, "eigenvalues {lo} {hi} at {theta:?}");
    }
}

#[test]
fn coriolis_matches_christoffel_symbols() {
    let mut r = rng(2);
    for _ in 0..10_000 {
        let body = random_body(&mut r);
        let theta = random_pair(&mut r, -3.0, 3.0);
        let omega = random_pair(&mut r, -8.0, 8.0);
        let v = coriolis_vector(&body, theta, omega).unwrap();
        let oracle = christoffel_coriolis(&body, theta, omega);
        let scale = body.thigh.length * body.shank.first_moment_axial.hypot(body.shank.first_moment_transverse)
            * omega.norm().powi(2);
        assert!(
            (v - oracle).norm() <= 1e-6 * v.norm().max(1e-3 * scale),
            "{v:?} vs {oracle:?}"
        );
    }
}

#[test]
fn closed_form_drag_matches_element_integration() {
    let mut r = rng(3);
    for _ in 0..10_000 {
        let body = random_body(&mut r);
        let theta = random_pair(&mut r, -1.0, 2.5);
        let omega = random_pair(&mut r, -10.0, 10.0);
        let rho = r.random_range(1.0..1500.0);
        let cd = r.random_range(0.5..20.0);
        let d = segment_drag(&body, theta, omega, rho, cd).unwrap();
        let (thigh, shank) = simpson_segment_drag(&body, theta, omega, rho, cd, 1000);
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-12);
        assert!(rel(d.thigh, thigh) < 1e-3, "thigh {} vs {thigh}", d.thigh);
        // Shank terms can cancel; compare against the largest term magnitude too.
        let term = rho * cd * body.shank.radius * body.shank.length.powi(4) * omega.norm().powi(2);
        assert!((d.shank - shank).abs() <= 1e-3 * shank.abs().max(1e-9 * term), "shank {} vs {shank}", d.shank);
    }
}

#[test]
fn thigh_drag_never_does_positive_work() {
    let mut r = rng(4);
    let water = builtin_by_name::<f64>("water").unwrap();
    let fc = water.fluid_constants().unwrap();
    for _ in 0..100_000 {
        let body = random_body(&mut r);
        let theta = random_pair(&mut r, -1.0, 2.5);
        let omega = random_pair(&mut r, -10.0, 10.0);
        let d = segment_drag(&body, theta, omega, water.rho_fluid, fc.drag_coeff).unwrap();
        assert!(d.thigh * omega.hip <= 0.0);
    }
}

#[test]
fn eq_of_motion_substitution_recovers_virtual_dynamics() {
    let mut r = rng(5);
    let envs = builtin_environments::<f64>();
    for _ in 0..10_000 {
        let human = random_body(&mut r);
        let robot = random_body(&mut r);
        let state = JointState::new(
            random_pair(&mut r, -0.5, 2.0),
            random_pair(&mut r, -6.0, 6.0),
            random_pair(&mut r, -40.0, 40.0),
        );
        let real = &envs[r.random_range(0..envs.len())];
        let virt = &envs[r.random_range(0..envs.len())];
        let grf = random_pair(&mut r, -50.0, 50.0);
        let tau_r = robot_torque_command(&human, &robot, &state, real, virt, grf).unwrap();
        let tau_m = muscular_from_robot_torque(&human, &robot, &state, real, grf, tau_r);
        let target = required_muscular_torque(&human, &state, virt).unwrap();
        assert!((tau_m - target).max_abs() < 1e-9, "{tau_m:?} vs {target:?}");
    }
}

#[test]
fn compensation_term_by_term() {
    let mut r = rng(6);
    for _ in 0..1000 {
        let robot = random_body(&mut r);
        let state = JointState::new(
            random_pair(&mut r, -0.5, 2.0),
            random_pair(&mut r, -6.0, 6.0),
            random_pair(&mut r, -40.0, 40.0),
        );
        let grf = random_pair(&mut r, -50.0, 50.0);
        let comp = compensation_torque(&robot, &state, grf, 9.81).unwrap();
        let parts = grf
            + rigid_body_torque(&robot, &state).unwrap()
            + gravity_vector(&robot, state.theta, 9.81).unwrap();
        assert!((comp - parts).max_abs() < 1e-9);
    }
}

fn state_strategy() -> impl Strategy<Value = (Pair64, Pair64)> {
    (-0.5f64..2.0, -0.5f64..2.4, -8.0f64..8.0, -8.0f64..8.0)
        .prop_map(|(a, b, c, d)| (Pair::new(a, b), Pair::new(c, d)))
}

proptest! {
    #[test]
    fn drag_is_quadratic_in_rate((theta, omega) in state_strategy(), alpha in 0.0f64..5.0) {
        let body = BodyModel64::default();
        let honey = builtin_by_name::<f64>("honey").unwrap();
        let fc = honey.fluid_constants().unwrap();
        let d1 = drag_torque_vector(&body, theta, omega * alpha, &honey, &fc).unwrap();
        let d0 = drag_torque_vector(&body, theta, omega, &honey, &fc).unwrap();
        let expect = d0 * (alpha * alpha);
        prop_assert!((d1 - expect).max_abs() <= 1e-9 * (1.0 + expect.max_abs()));
    }

    #[test]
    fn gravity_is_linear_in_g((theta, _) in state_strategy(), g in 0.0f64..30.0) {
        let body = BodyModel64::default();
        let unit = gravity_vector(&body, theta, 1.0).unwrap();
        let scaled = gravity_vector(&body, theta, g).unwrap();
        prop_assert!((scaled - unit * g).max_abs() <= 1e-12 * (1.0 + scaled.max_abs()));
    }

    #[test]
    fn buoyancy_is_density_ratio_of_gravity((theta, _) in state_strategy(), rho in 0.0f64..2000.0) {
        let body = BodyModel64::default();
        let env = EnvironmentSpec::<f64>::new("fluid", 9.81, rho, 0.01);
        let b = buoyancy_vector(&body, theta, &env).unwrap();
        let g = gravity_vector(&body, theta, 9.81).unwrap();
        let ratio = rho / body.rho_body;
        prop_assert!((b + g * ratio).max_abs() <= 1e-12 * (1.0 + g.max_abs()));
    }

    #[test]
    fn same_environment_command_is_pure_compensation(
        (theta, omega) in state_strategy(),
        acc in (-30.0f64..30.0, -30.0f64..30.0),
        idx in 0usize..8,
    ) {
        let env = builtin_environments::<f64>().swap_remove(idx);
        let state = JointState::new(theta, omega, Pair::new(acc.0, acc.1));
        let human = BodyModel64::default();
        let robot = exoverse_core::sim::RobotModel::default().links;
        let grf = Pair::new(12.0, -3.0);
        let cmd = robot_torque_command(&human, &robot, &state, &env, &env, grf).unwrap();
        let comp = compensation_torque(&robot, &state, grf, env.g).unwrap();
        prop_assert_eq!(cmd, comp);
    }
}

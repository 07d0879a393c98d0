use std::path::PathBuf;

use exoverse_core::error::{Error, GaitRowError};
use exoverse_core::gait::*;
use exoverse_core::JointLimits;
use proptest::prelude::*;

fn reference_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/reference_gait.csv")
}

#[test]
fn shipped_reference_gait_round_trips() {
    let path = reference_path();
    let original = std::fs::read_to_string(&path).unwrap();
    let traj = load_trajectory(&path).unwrap();
    assert_eq!(traj.samples.len(), 100);
    assert_eq!(trajectory_to_string(&traj), original);

    let dir = tempfile::tempdir().unwrap();
    let copy = dir.path().join("copy.csv");
    save_trajectory(&traj, &copy).unwrap();
    let again = load_trajectory(&copy).unwrap();
    assert_eq!(again, traj);
}

#[test]
fn reference_gait_drives_kinematics() {
    let traj = load_trajectory(reference_path()).unwrap();
    let kin = to_kinematics(&traj, 1.4).unwrap();
    assert_eq!(kin.len(), 1400);
    assert!((kin.dt * kin.len() as f64 - 1.4).abs() < 1e-12);
    let (first, last) = (kin.states[0], kin.states[kin.len() - 1]);
    // One grid step apart across the cycle boundary.
    assert!((first.theta - last.theta).max_abs() < 0.01);
}

#[test]
fn errors_name_the_offending_row() {
    let text = "# test\ngc_percent,hip_deg,knee_deg\n0,10,20\n50,11,21\n40,12,22\n";
    match trajectory_from_str(text, &JointLimits::default()) {
        Err(Error::GaitRow { row: 5, kind: GaitRowError::NonMonotone { .. } }) => {}
        other => panic!("{other:?}"),
    }
    let text = "gc_percent,hip_deg\n0,10\n";
    assert!(trajectory_from_str(text, &JointLimits::default()).is_err());
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.csv");
    match load_trajectory(&missing) {
        Err(Error::Io { path, .. }) => assert_eq!(path, missing),
        other => panic!("{other:?}"),
    }
}

fn trajectory_strategy() -> impl Strategy<Value = GaitTrajectory> {
    (4usize..60).prop_flat_map(|n| {
        (
            prop::collection::vec(-25.0f64..100.0, n),
            prop::collection::vec(1.0f64..120.0, n),
            prop::collection::vec(0.05f64..1.0, n),
        )
            .prop_map(|(hip, knee, gaps)| {
                let total: f64 = gaps.iter().sum();
                let mut gc = 0.0;
                let samples = hip
                    .iter()
                    .zip(&knee)
                    .zip(&gaps)
                    .map(|((h, k), g)| {
                        let s = GaitSample {
                            gc_percent: gc,
                            hip: h.to_radians(),
                            knee: k.to_radians(),
                        };
                        gc += 99.0 * g / total;
                        s
                    })
                    .collect();
                GaitTrajectory::new(samples, "prop")
            })
    })
}

proptest! {
    #[test]
    fn save_then_load_is_a_fixed_point(traj in trajectory_strategy()) {
        let text = trajectory_to_string(&traj);
        let loaded = trajectory_from_str(&text, &JointLimits::default()).unwrap();
        prop_assert_eq!(loaded.samples.len(), traj.samples.len());
        for (a, b) in loaded.samples.iter().zip(&traj.samples) {
            prop_assert!((a.gc_percent - b.gc_percent).abs() <= 5e-6 * b.gc_percent.abs().max(1.0));
            prop_assert!((a.hip - b.hip).abs() <= 5e-6 * b.hip.abs().max(1e-3));
        }
        prop_assert_eq!(trajectory_to_string(&loaded), text);
    }

    #[test]
    fn halving_duration_doubles_rates(k in 0usize..700) {
        let traj = synthetic_normal_gait(0.55).unwrap();
        let slow = to_kinematics(&traj, 1.4).unwrap();
        let fast = to_kinematics(&traj, 0.7).unwrap();
        let (s, f) = (slow.states[2 * k], fast.states[k]);
        prop_assert!((f.theta - s.theta).max_abs() < 1e-12);
        prop_assert!((f.theta_dot - s.theta_dot * 2.0).max_abs() < 1e-9);
        prop_assert!((f.theta_ddot - s.theta_ddot * 4.0).max_abs() < 1e-7);
    }
}

//! Virtual-environment torque rendering for a planar two-link leg worn in a
//! lower-limb exoskeleton.
//!
//! The crate computes the gravitational, buoyant and drag joint torques a
//! wearer would feel in a configurable environment, the robot command that
//! renders them, a closed-loop simulation of the torque-feedback controller
//! around a modeled leg, and the reductions (RMS decomposition, Pearson
//! correlation, EMG envelopes, phase averages) used to analyse the results.
//!
//! The dynamics are generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below are what the simulator, file formats and CLI use.

pub mod analysis;
pub mod body;
pub mod dynamics;
pub mod environment;
pub mod error;
pub mod gait;
pub mod pair;
pub mod rendering;
pub mod scalar;
pub mod sim;

pub use body::{BodyModel, JointLimits, JointState, SegmentParams};
pub use dynamics::{
    buoyancy_vector, coriolis_vector, drag_torque_vector, drag_torque_vector_with,
    environment_torque, gravity_vector, inertia_matrix, required_muscular_torque, segment_drag,
    DragAssembly, ResolvedEnvironment, TorqueBreakdown,
};
pub use environment::{
    builtin_by_name, builtin_environments, drag_coefficient, reynolds_number, EnvironmentSpec,
    FluidConstants,
};
pub use error::{Error, Result};
pub use pair::{Mat2, Pair};
pub use rendering::{compensation_torque, robot_torque_command, ControlTorques};
pub use scalar::Scalar;

pub type Pair64 = Pair<f64>;
pub type Mat2x64 = Mat2<f64>;
pub type JointState64 = JointState<f64>;
pub type SegmentParams64 = SegmentParams<f64>;
pub type BodyModel64 = BodyModel<f64>;
pub type EnvironmentSpec64 = EnvironmentSpec<f64>;
pub type FluidConstants64 = FluidConstants<f64>;
pub type TorqueBreakdown64 = TorqueBreakdown<f64>;
pub type ControlTorques64 = ControlTorques<f64>;

pub type Pair32 = Pair<f32>;
pub type JointState32 = JointState<f32>;
pub type BodyModel32 = BodyModel<f32>;
pub type EnvironmentSpec32 = EnvironmentSpec<f32>;

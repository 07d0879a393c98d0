use std::path::Path;

use anyhow::{bail, Context, Result};
use exoverse_core::environment::{builtin_names, EnvironmentRecord};
use exoverse_core::gait::{
    load_trajectory, synthetic_normal_gait, to_kinematics, GaitKinematics, GaitTrajectory,
    DEFAULT_CYCLE_DURATION, DEFAULT_WALKING_SPEED,
};
use exoverse_core::sim::{ControllerGains, RobotModel, SimConfig};
use exoverse_core::{builtin_by_name, BodyModel64, EnvironmentSpec64};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SEED_ENV_VAR: &str = "EXOVERSE_SEED";

/// Everything `simulate` needs. Field names mirror the library types.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// `synthetic` or a gait CSV path, relative to the working directory.
    pub gait: String,
    pub walking_speed: f64,
    pub cycle_duration: f64,
    pub human: BodyModel64,
    pub robot: RobotModel,
    pub gains: ControllerGains,
    pub sim: SimConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            gait: "synthetic".into(),
            walking_speed: DEFAULT_WALKING_SPEED,
            cycle_duration: DEFAULT_CYCLE_DURATION,
            human: BodyModel64::default(),
            robot: RobotModel::default(),
            gains: ControllerGains::default(),
            sim: SimConfig::default(),
        }
    }
}

impl RunConfig {
    /// Parses a config document. `sim.virtual_env` and `sim.real_env` may be
    /// catalog names or full environment objects. Returns the config and
    /// whether the file set a seed.
    pub fn from_json(text: &str) -> Result<(Self, bool)> {
        let mut value: Value = serde_json::from_str(text).context("config is not valid JSON")?;
        let mut has_seed = false;
        if let Some(sim) = value.get_mut("sim").and_then(Value::as_object_mut) {
            has_seed = sim.contains_key("seed");
            for key in ["virtual_env", "real_env"] {
                if let Some(v) = sim.get_mut(key) {
                    let env = environment_from_value(v.clone()).with_context(|| format!("sim.{key}"))?;
                    *v = serde_json::to_value(env)?;
                }
            }
        }
        let cfg: Self = serde_json::from_value(value).context("invalid config")?;
        Ok((cfg, has_seed))
    }

    pub fn load(path: &Path) -> Result<(Self, bool)> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("config {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        self.human.validate()?;
        self.robot.validate()?;
        self.gains.validate()?;
        self.sim.validate()?;
        Ok(())
    }

    pub fn kinematics(&self) -> Result<GaitKinematics> {
        kinematics(&self.gait, self.walking_speed, self.cycle_duration)
    }
}

/// Seed precedence: flag, then `EXOVERSE_SEED`, then the config file, then the default.
pub fn resolve_seed(flag: Option<u64>, file_seed: Option<u64>, default: u64) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Ok(text) = std::env::var(SEED_ENV_VAR) {
        return text
            .trim()
            .parse()
            .with_context(|| format!("{SEED_ENV_VAR}={text:?} is not an unsigned integer"));
    }
    Ok(file_seed.unwrap_or(default))
}

fn unknown_env(name: &str) -> anyhow::Error {
    anyhow::anyhow!("unknown environment `{name}`; valid names: {}", builtin_names().join(", "))
}

pub fn environment_from_value(v: Value) -> Result<EnvironmentSpec64> {
    match v {
        Value::String(name) => builtin_by_name(&name).ok_or_else(|| unknown_env(&name)),
        obj @ Value::Object(_) => {
            let rec: EnvironmentRecord = serde_json::from_value(obj).context("invalid environment object")?;
            Ok(rec.into_spec()?)
        }
        other => bail!("environment must be a name or an object, got {other}"),
    }
}

/// A catalog name, or a path to a JSON file holding one environment object.
pub fn resolve_environment(arg: &str) -> Result<EnvironmentSpec64> {
    if let Some(env) = builtin_by_name(arg) {
        return Ok(env);
    }
    let path = Path::new(arg);
    if path.extension().is_some_and(|e| e == "json") || path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read environment file {arg}"))?;
        let v: Value = serde_json::from_str(&text).with_context(|| format!("{arg} is not valid JSON"))?;
        return environment_from_value(v).with_context(|| format!("environment file {arg}"));
    }
    Err(unknown_env(arg))
}

pub fn load_gait(spec: &str, walking_speed: f64) -> Result<GaitTrajectory> {
    if spec == "synthetic" {
        return Ok(synthetic_normal_gait(walking_speed)?);
    }
    let path = Path::new(spec);
    if !path.exists() {
        bail!("gait file not found: {}", path.display());
    }
    Ok(load_trajectory(path)?)
}

pub fn kinematics(spec: &str, walking_speed: f64, cycle_duration: f64) -> Result<GaitKinematics> {
    Ok(to_kinematics(&load_gait(spec, walking_speed)?, cycle_duration)?)
}

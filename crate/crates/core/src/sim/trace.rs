//! Simulation output: uniformly sampled signals plus run metadata, with
//! CSV and JSON-sidecar persistence.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::body::JointState;
use crate::dynamics::TorqueBreakdown;
use crate::error::{Error, Result};
use crate::pair::Pair;
use crate::rendering::ControlTorques;

pub const TRACE_CSV_HEADER: &str = "t,theta1,theta2,dtheta1,dtheta2,tau_M1,tau_M2,tau_R1,tau_R2,tau_int1,tau_int2,grav1,grav2,buoy1,buoy2,drag1,drag2,grf";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceMode {
    Playback,
    ClosedLoop,
    /// Read back from a CSV file without a sidecar.
    Imported,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub mode: TraceMode,
    /// Environment the torque breakdown columns refer to.
    pub environment: String,
    pub dt: f64,
    pub cycle_duration: f64,
    pub seed: Option<u64>,
    #[serde(default)]
    pub warnings: Vec<String>,
    /// Inputs that produced the trace, as given.
    #[serde(default)]
    pub config: serde_json::Value,
}

/// Signals recorded at `t[k] = k·dt`. Every series has the same length.
///
/// `env` holds the torque breakdown of the virtual environment at the
/// realized state. `end_state` is the state after the final step of a
/// closed-loop run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimTrace {
    pub t: Vec<f64>,
    pub gc_percent: Vec<f64>,
    pub states: Vec<JointState<f64>>,
    pub torques: Vec<ControlTorques<f64>>,
    pub env: Vec<TorqueBreakdown<f64>>,
    pub grf: Vec<f64>,
    pub end_state: Option<JointState<f64>>,
    pub meta: TraceMeta,
}

fn csv_columns() -> Vec<&'static str> {
    TRACE_CSV_HEADER.split(',').collect()
}

fn pick(p: Pair<f64>, joint: usize) -> f64 {
    if joint == 1 {
        p.hip
    } else {
        p.knee
    }
}

impl SimTrace {
    pub(crate) fn with_capacity(n: usize, meta: TraceMeta) -> Self {
        Self {
            t: Vec::with_capacity(n),
            gc_percent: Vec::with_capacity(n),
            states: Vec::with_capacity(n),
            torques: Vec::with_capacity(n),
            env: Vec::with_capacity(n),
            grf: Vec::with_capacity(n),
            end_state: None,
            meta,
        }
    }

    pub(crate) fn push(
        &mut self,
        t: f64,
        gc: f64,
        state: JointState<f64>,
        torques: ControlTorques<f64>,
        env: TorqueBreakdown<f64>,
        grf: f64,
    ) {
        self.t.push(t);
        self.gc_percent.push(gc);
        self.states.push(state);
        self.torques.push(torques);
        self.env.push(env);
        self.grf.push(grf);
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn samples_per_cycle(&self) -> usize {
        ((self.meta.cycle_duration / self.meta.dt).round() as usize).max(1)
    }

    /// Number of complete cycles recorded.
    pub fn complete_cycles(&self) -> usize {
        self.len() / self.samples_per_cycle()
    }

    /// Names accepted by [`SimTrace::column`]: the CSV columns plus `gc`,
    /// `ddtheta1/2`, `tau_ref1/2`, `tau_comp1/2`, `tau_grf1/2`.
    pub fn column_names() -> Vec<&'static str> {
        let mut names = csv_columns();
        names.extend([
            "gc", "ddtheta1", "ddtheta2", "tau_ref1", "tau_ref2", "tau_comp1", "tau_comp2",
            "tau_grf1", "tau_grf2",
        ]);
        names
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let joint = |s: &str| -> Option<(String, usize)> {
            let (stem, last) = s.split_at(s.len().checked_sub(1)?);
            match last {
                "1" => Some((stem.to_string(), 1)),
                "2" => Some((stem.to_string(), 2)),
                _ => None,
            }
        };
        let n = self.len();
        let get = |f: &dyn Fn(usize) -> f64| (0..n).map(f).collect::<Vec<_>>();
        match name {
            "t" => return Ok(self.t.clone()),
            "gc" => return Ok(self.gc_percent.clone()),
            "grf" => return Ok(self.grf.clone()),
            _ => {}
        }
        let (stem, j) = joint(name).ok_or_else(|| Error::UnknownColumn(name.to_string()))?;
        let out = match stem.as_str() {
            "theta" => get(&|k| pick(self.states[k].theta, j)),
            "dtheta" => get(&|k| pick(self.states[k].theta_dot, j)),
            "ddtheta" => get(&|k| pick(self.states[k].theta_ddot, j)),
            "tau_M" => get(&|k| pick(self.torques[k].tau_m, j)),
            "tau_R" => get(&|k| pick(self.torques[k].tau_r, j)),
            "tau_int" => get(&|k| pick(self.torques[k].tau_int, j)),
            "tau_ref" => get(&|k| pick(self.torques[k].tau_ref, j)),
            "tau_comp" => get(&|k| pick(self.torques[k].tau_comp, j)),
            "tau_grf" => get(&|k| pick(self.torques[k].tau_grf, j)),
            "grav" => get(&|k| pick(self.env[k].gravity, j)),
            "buoy" => get(&|k| pick(self.env[k].buoyancy, j)),
            "drag" => get(&|k| pick(self.env[k].drag, j)),
            _ => return Err(Error::UnknownColumn(name.to_string())),
        };
        Ok(out)
    }

    /// CSV text with [`TRACE_CSV_HEADER`]. Values use the shortest
    /// representation that round-trips, so reading back is lossless.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::with_capacity(self.len() * 200);
        out.push_str(TRACE_CSV_HEADER);
        out.push('\n');
        for k in 0..self.len() {
            let s = &self.states[k];
            let c = &self.torques[k];
            let e = &self.env[k];
            let row = [
                self.t[k],
                s.theta.hip,
                s.theta.knee,
                s.theta_dot.hip,
                s.theta_dot.knee,
                c.tau_m.hip,
                c.tau_m.knee,
                c.tau_r.hip,
                c.tau_r.knee,
                c.tau_int.hip,
                c.tau_int.knee,
                e.gravity.hip,
                e.gravity.knee,
                e.buoyancy.hip,
                e.buoyancy.knee,
                e.drag.hip,
                e.drag.knee,
                self.grf[k],
            ];
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }

    /// Parses CSV written by [`SimTrace::to_csv_string`]. Signals that are
    /// not stored in the file (accelerations, `tau_ref`, `tau_comp`,
    /// `tau_grf`) come back as zero. Without `meta`, `dt` is taken from the
    /// first two time stamps and the whole file is treated as one cycle.
    pub fn from_csv_str(text: &str, meta: Option<TraceMeta>) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
        if header.join(",") != TRACE_CSV_HEADER {
            return Err(Error::invalid(
                "trace header",
                format!("expected `{TRACE_CSV_HEADER}`, got `{}`", header.join(",")),
            ));
        }
        let mut rows: Vec<[f64; 18]> = Vec::new();
        for (i, rec) in reader.records().enumerate() {
            let rec = rec?;
            let mut row = [0.0; 18];
            for (j, field) in rec.iter().enumerate().take(18) {
                row[j] = field.parse().map_err(|_| {
                    Error::invalid("trace row", format!("line {}: bad value `{field}`", i + 2))
                })?;
            }
            if rec.len() != 18 {
                return Err(Error::invalid(
                    "trace row",
                    format!("line {}: expected 18 fields, got {}", i + 2, rec.len()),
                ));
            }
            rows.push(row);
        }
        let meta = match meta {
            Some(m) => m,
            None => {
                let dt = match rows.len() {
                    0 | 1 => 0.001,
                    _ => rows[1][0] - rows[0][0],
                };
                TraceMeta {
                    mode: TraceMode::Imported,
                    environment: String::new(),
                    dt,
                    cycle_duration: dt * rows.len().max(1) as f64,
                    seed: None,
                    warnings: Vec::new(),
                    config: serde_json::Value::Null,
                }
            }
        };
        let mut trace = Self::with_capacity(rows.len(), meta);
        for r in &rows {
            let p = |a: usize| Pair::new(r[a], r[a + 1]);
            let gc = (100.0 * r[0] / trace.meta.cycle_duration).rem_euclid(100.0);
            let torques = ControlTorques {
                tau_m: p(5),
                tau_r: p(7),
                tau_int: p(9),
                ..ControlTorques::default()
            };
            let state = JointState::new(p(1), p(3), Pair::zero());
            trace.push(r[0], gc, state, torques, TorqueBreakdown::new(p(11), p(13), p(15)), r[17]);
        }
        Ok(trace)
    }

    pub fn meta_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.meta)?)
    }

    /// Sidecar location for a CSV path: same stem, `.json` extension.
    pub fn sidecar_path(csv_path: &Path) -> PathBuf {
        csv_path.with_extension("json")
    }

    /// Writes the CSV and its JSON sidecar.
    pub fn save(&self, csv_path: &Path) -> Result<()> {
        fs::write(csv_path, self.to_csv_string()).map_err(|e| Error::io(csv_path, e))?;
        let side = Self::sidecar_path(csv_path);
        fs::write(&side, self.meta_json()?).map_err(|e| Error::io(&side, e))?;
        Ok(())
    }

    /// Reads a CSV trace, using the sidecar next to it when present.
    pub fn load(csv_path: &Path) -> Result<Self> {
        let text = fs::read_to_string(csv_path).map_err(|e| Error::io(csv_path, e))?;
        let side = Self::sidecar_path(csv_path);
        let meta = if side.exists() {
            let mtext = fs::read_to_string(&side).map_err(|e| Error::io(&side, e))?;
            Some(serde_json::from_str(&mtext)?)
        } else {
            None
        };
        Self::from_csv_str(&text, meta)
    }
}

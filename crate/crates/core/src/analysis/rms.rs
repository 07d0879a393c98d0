use serde::{Deserialize, Serialize};

use crate::environment::{builtin_names, display_label};
use crate::error::{Error, Result};
use crate::sim::SimTrace;

use super::stats::rms;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RmsComponents {
    pub gravity: f64,
    pub buoyancy: f64,
    pub drag: f64,
}

impl RmsComponents {
    /// Buoyancy RMS over gravity RMS; `None` without gravity.
    pub fn buoyancy_ratio(&self) -> Option<f64> {
        (self.gravity > 0.0).then(|| self.buoyancy / self.gravity)
    }
}

/// RMS torque components of one environment at both joints, N·m.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RmsRow {
    pub environment: String,
    pub hip: RmsComponents,
    pub knee: RmsComponents,
}

/// Sample indices inside the whole-cycle part of the trace, optionally
/// restricted to `lo <= gc < hi` (`hi = 100` includes the cycle end).
fn window_indices(trace: &SimTrace, window: Option<(f64, f64)>) -> Result<Vec<usize>> {
    if trace.is_empty() {
        return Err(Error::EmptyWindow("trace has no samples".into()));
    }
    let n = trace.complete_cycles() * trace.samples_per_cycle();
    if n == 0 {
        return Err(Error::EmptyWindow("trace is shorter than one gait cycle".into()));
    }
    let idx: Vec<usize> = match window {
        None => (0..n).collect(),
        Some((lo, hi)) => {
            if !(0.0..100.0).contains(&lo) || !(hi > lo && hi <= 100.0) {
                return Err(Error::invalid(
                    "gc window",
                    format!("need 0 <= lo < hi <= 100, got ({lo}, {hi})"),
                ));
            }
            (0..n)
                .filter(|&k| {
                    let gc = trace.gc_percent[k];
                    gc >= lo && (gc < hi || hi >= 100.0)
                })
                .collect()
        }
    };
    if idx.is_empty() {
        return Err(Error::EmptyWindow(format!("no samples in gc window {window:?}")));
    }
    Ok(idx)
}

/// RMS of the gravity, buoyancy and drag torque series of a trace, over
/// whole cycles only so the result does not depend on how long a periodic
/// trace runs.
pub fn rms_components(trace: &SimTrace, window: Option<(f64, f64)>) -> Result<RmsRow> {
    let idx = window_indices(trace, window)?;
    let series = |f: &dyn Fn(usize) -> f64| -> Result<f64> {
        rms(&idx.iter().map(|&k| f(k)).collect::<Vec<_>>())
    };
    let e = &trace.env;
    Ok(RmsRow {
        environment: trace.meta.environment.clone(),
        hip: RmsComponents {
            gravity: series(&|k| e[k].gravity.hip)?,
            buoyancy: series(&|k| e[k].buoyancy.hip)?,
            drag: series(&|k| e[k].drag.hip)?,
        },
        knee: RmsComponents {
            gravity: series(&|k| e[k].gravity.knee)?,
            buoyancy: series(&|k| e[k].buoyancy.knee)?,
            drag: series(&|k| e[k].drag.knee)?,
        },
    })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RmsTable {
    pub rows: Vec<RmsRow>,
}

fn fmt_ratio(r: Option<f64>) -> String {
    r.map_or_else(String::new, |v| format!("{v:.4}"))
}

impl RmsTable {
    pub fn new(mut rows: Vec<RmsRow>) -> Self {
        // Catalog order first (fluids, then planets); anything else after, stable.
        let names = builtin_names();
        rows.sort_by_key(|r| names.iter().position(|n| *n == r.environment).unwrap_or(names.len()));
        Self { rows }
    }

    pub fn row(&self, environment: &str) -> Option<&RmsRow> {
        self.rows.iter().find(|r| r.environment == environment)
    }

    fn lines(&self) -> impl Iterator<Item = (&str, &'static str, &RmsComponents)> {
        self.rows.iter().flat_map(|r| {
            [("hip", &r.hip), ("knee", &r.knee)]
                .into_iter()
                .map(move |(j, c)| (r.environment.as_str(), j, c))
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:<16} {:<5} {:>10} {:>10} {:>10} {:>8}\n",
            "environment", "joint", "gravity", "buoyancy", "drag", "B/G"
        );
        for (env, joint, c) in self.lines() {
            out.push_str(&format!(
                "{:<16} {:<5} {:>10.3} {:>10.3} {:>10.3} {:>8}\n",
                display_label(env),
                joint,
                c.gravity,
                c.buoyancy,
                c.drag,
                fmt_ratio(c.buoyancy_ratio())
            ));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("environment,joint,gravity,buoyancy,drag,buoyancy_to_gravity\n");
        for (env, joint, c) in self.lines() {
            out.push_str(&format!(
                "{env},{joint},{},{},{},{}\n",
                c.gravity,
                c.buoyancy,
                c.drag,
                fmt_ratio(c.buoyancy_ratio())
            ));
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

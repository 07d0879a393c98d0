use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use exoverse_core::analysis::{
    emg_envelope, pearson_r, phase_average, rms_components, EnvelopeParams, RmsTable,
};
use exoverse_core::environment::{catalog_from_json, catalog_to_json, display_label};
use exoverse_core::sim::{run_closed_loop, torque_playback, SimTrace};
use exoverse_core::{builtin_environments, BodyModel64, EnvironmentSpec64};
use serde_json::json;

use crate::args::{AnalyzeArgs, EnvsArgs, PlaybackArgs, SimulateArgs};
use crate::config::{kinematics, resolve_environment, resolve_seed, RunConfig};
use crate::manifest::RunManifest;

/// Reference Reynolds numbers and drag coefficients for the built-in catalog.
pub const REFERENCE_TABLE: [(&str, f64, f64); 8] = [
    ("water", 109_800.0, 1.17),
    ("olive_oil", 880.0, 0.99),
    ("honey", 31.0, 1.84),
    ("peanut_butter", 0.56, 15.1),
    ("earth", 733.0, 1.03),
    ("moon", 733.0, 1.03),
    ("mars", 733.0, 1.03),
    ("jupiter", 733.0, 1.03),
];
pub const REFERENCE_TOLERANCE: f64 = 0.01;

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect()
}

fn is_file_input(arg: &str) -> bool {
    arg != "synthetic" && Path::new(arg).is_file()
}

fn save_trace(trace: &SimTrace, name: &str, m: &mut RunManifest) -> Result<()> {
    let path = m.out_dir.join(name);
    trace.save(&path)?;
    m.record_output(&path)?;
    m.record_output(&SimTrace::sidecar_path(&path))?;
    Ok(())
}

/// Returns the process exit code.
pub fn envs(a: &EnvsArgs, m: &mut RunManifest) -> Result<i32> {
    let mut catalog = builtin_environments::<f64>();
    if let Some(path) = &a.env_file {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let extra = catalog_from_json(&text).with_context(|| format!("environment file {}", path.display()))?;
        m.add_input(path)?;
        catalog.extend(extra);
    }
    let doc = catalog_to_json(&catalog)?;
    m.config = serde_json::from_str(&doc)?;
    m.write_output("envs.json", &(doc.clone() + "\n"))?;

    if a.json {
        println!("{doc}");
    } else {
        println!(
            "{:<16} {:>7} {:>9} {:>10} {:>12} {:>7}",
            "environment", "g", "rho", "mu", "Re", "C_D"
        );
        for e in &catalog {
            let fc = e.fluid_constants()?;
            println!(
                "{:<16} {:>7.2} {:>9.2} {:>10.3e} {:>12.2} {:>7.3}",
                display_label(&e.name),
                e.g,
                e.rho_fluid,
                e.mu_fluid,
                fc.reynolds,
                fc.drag_coeff
            );
        }
    }

    if !a.check {
        return Ok(0);
    }
    let mut failures = 0;
    for (name, re_ref, cd_ref) in REFERENCE_TABLE {
        let e = catalog.iter().find(|e| e.name == name).context("built-in environment missing")?;
        let fc = e.fluid_constants()?;
        let dev_re = (fc.reynolds / re_ref - 1.0).abs();
        let dev_cd = (fc.drag_coeff / cd_ref - 1.0).abs();
        let ok = dev_re <= REFERENCE_TOLERANCE && dev_cd <= REFERENCE_TOLERANCE;
        failures += usize::from(!ok);
        eprintln!(
            "{} {name}: Re {:.4} vs {re_ref} ({:.2}%), C_D {:.4} vs {cd_ref} ({:.2}%)",
            if ok { "ok  " } else { "FAIL" },
            fc.reynolds,
            100.0 * dev_re,
            fc.drag_coeff,
            100.0 * dev_cd
        );
    }
    if failures > 0 {
        m.warnings.push(format!("{failures} environments deviate from the reference table"));
        return Ok(1);
    }
    Ok(0)
}

pub fn playback(a: &PlaybackArgs, m: &mut RunManifest) -> Result<i32> {
    let envs: Vec<EnvironmentSpec64> = if a.all_envs {
        builtin_environments()
    } else {
        a.env.iter().map(|s| resolve_environment(s)).collect::<Result<_>>()?
    };
    for s in a.env.iter().filter(|s| is_file_input(s)) {
        m.add_input(Path::new(s))?;
    }
    let kin = kinematics(&a.gait, a.walking_speed, a.cycle_duration)?;
    if is_file_input(&a.gait) {
        m.add_input(Path::new(&a.gait))?;
    }
    let body = BodyModel64::default();
    m.config = json!({
        "environments": envs,
        "gait": a.gait,
        "walking_speed": a.walking_speed,
        "cycle_duration": a.cycle_duration,
        "human": body,
        "rms": a.rms,
    });

    let mut rows = Vec::new();
    for env in &envs {
        let mut trace = torque_playback(&body, env, &kin)?;
        trace.meta.config = m.config.clone();
        save_trace(&trace, &format!("playback_{}.csv", file_stem(&env.name)), m)?;
        if a.rms {
            rows.push(rms_components(&trace, None)?);
        }
    }
    if a.rms {
        let table = RmsTable::new(rows);
        print!("{}", table.to_text());
        m.write_output("rms.csv", &table.to_csv())?;
        m.write_output("rms.json", &(table.to_json()? + "\n"))?;
    }
    Ok(0)
}

fn parse_sweep(spec: &str) -> Result<Vec<EnvironmentSpec64>> {
    let (key, values) = spec.split_once('=').context("--sweep expects key=a,b,c")?;
    if key.trim() != "env" {
        bail!("--sweep supports only `env`, got `{key}`");
    }
    let envs: Vec<EnvironmentSpec64> = values
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| resolve_environment(s.trim()))
        .collect::<Result<_>>()?;
    if envs.is_empty() {
        bail!("--sweep lists no environments");
    }
    let mut names: Vec<&str> = envs.iter().map(|e| e.name.as_str()).collect();
    names.sort_unstable();
    if names.windows(2).any(|w| w[0] == w[1]) {
        bail!("--sweep lists an environment twice");
    }
    Ok(envs)
}

pub fn simulate(a: &SimulateArgs, m: &mut RunManifest) -> Result<i32> {
    let (mut cfg, file_has_seed) = RunConfig::load(&a.config)?;
    m.add_input(&a.config)?;
    let file_seed = file_has_seed.then_some(cfg.sim.seed);
    cfg.sim.seed = resolve_seed(a.seed, file_seed, cfg.sim.seed)?;
    m.seed = Some(cfg.sim.seed);
    cfg.validate()?;
    let kin = cfg.kinematics()?;
    if is_file_input(&cfg.gait) {
        m.add_input(Path::new(&cfg.gait))?;
    }

    let runs: Vec<RunConfig> = match &a.sweep {
        None => vec![cfg.clone()],
        Some(spec) => parse_sweep(spec)?
            .into_iter()
            .map(|env| {
                let mut c = cfg.clone();
                c.sim.virtual_env = env;
                c
            })
            .collect(),
    };
    m.config = if runs.len() == 1 {
        serde_json::to_value(&runs[0])?
    } else {
        serde_json::to_value(&runs)?
    };

    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = runs
            .iter()
            .map(|c| s.spawn(|| run_closed_loop(&c.human, &c.robot, &c.gains, &kin, &c.sim)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("simulation thread panicked")).collect()
    });

    let mut first_error = None;
    for (c, result) in runs.iter().zip(results) {
        let name = &c.sim.virtual_env.name;
        match result {
            Ok(mut trace) => {
                trace.meta.config = serde_json::to_value(c)?;
                for w in &trace.meta.warnings {
                    eprintln!("warning: {name}: {w}");
                    m.warnings.push(format!("{name}: {w}"));
                }
                save_trace(&trace, &format!("simulate_{}.csv", file_stem(name)), m)?;
            }
            Err(e) => {
                m.warnings.push(format!("{name}: {e}"));
                first_error.get_or_insert(anyhow::Error::new(e).context(format!("environment {name}")));
            }
        }
    }
    match first_error {
        Some(e) => Err(e),
        None => Ok(0),
    }
}

pub fn analyze(a: &AnalyzeArgs, m: &mut RunManifest) -> Result<i32> {
    if !(a.rms || a.pearson.is_some() || a.envelope || a.phase) {
        bail!("nothing to do: pass at least one of --rms, --pearson, --envelope, --phase");
    }
    let mut trace = SimTrace::load(&a.trace)?;
    m.add_input(&a.trace)?;
    let side = SimTrace::sidecar_path(&a.trace);
    if side.exists() {
        m.add_input(&side)?;
    }
    if let Some(c) = a.cycle_duration {
        if !(c.is_finite() && c > 0.0) {
            bail!("--cycle-duration must be > 0");
        }
        trace.meta.cycle_duration = c;
    }
    m.config = json!({
        "trace": a.trace,
        "rms": a.rms,
        "pearson": a.pearson,
        "envelope": a.envelope,
        "fs": a.fs,
        "phase": a.phase,
        "columns": a.columns,
        "bins": a.bins,
        "cycle_duration": trace.meta.cycle_duration,
    });
    let needs_columns = a.envelope || a.phase;
    if needs_columns {
        for c in &a.columns {
            trace.column(c)?;
        }
    }

    if a.rms {
        let mut row = rms_components(&trace, None)?;
        if row.environment.is_empty() {
            row.environment = a.trace.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        }
        let table = RmsTable::new(vec![row]);
        print!("{}", table.to_text());
        m.write_output("analyze_rms.csv", &table.to_csv())?;
        m.write_output("analyze_rms.json", &(table.to_json()? + "\n"))?;
    }

    if let Some(cols) = &a.pearson {
        let (ca, cb) = (&cols[0], &cols[1]);
        let pa = phase_average(&trace, ca, a.bins)?;
        let pb = phase_average(&trace, cb, a.bins)?;
        let r = pearson_r(&pa.mean, &pb.mean)?;
        println!("pearson r({ca}, {cb}) = {r}");
        let doc = json!({ "column_a": ca, "column_b": cb, "r": r, "bins": a.bins, "cycles": pa.cycles });
        m.write_output("pearson.json", &(serde_json::to_string_pretty(&doc)? + "\n"))?;
    }

    if a.envelope {
        let fs = a.fs.context("--envelope needs --fs")?;
        let params = EnvelopeParams::new(fs);
        let envs: Vec<Vec<f64>> = a
            .columns
            .iter()
            .map(|c| Ok(emg_envelope(&trace.column(c)?, &params)?))
            .collect::<Result<_>>()?;
        let mut out = String::from("t");
        for c in &a.columns {
            out.push_str(&format!(",{c}_envelope"));
        }
        out.push('\n');
        for k in 0..trace.len() {
            out.push_str(&trace.t[k].to_string());
            for e in &envs {
                out.push_str(&format!(",{}", e[k]));
            }
            out.push('\n');
        }
        m.write_output("envelope.csv", &out)?;
    }

    if a.phase {
        let profiles = a
            .columns
            .iter()
            .map(|c| Ok(phase_average(&trace, c, a.bins)?))
            .collect::<Result<Vec<_>>>()?;
        if let Some(w) = profiles.iter().find_map(|p| p.warning.clone()) {
            eprintln!("warning: {w}");
            m.warnings.push(w);
        }
        let mut out = String::from("gc_percent");
        for c in &a.columns {
            out.push_str(&format!(",{c}_mean,{c}_std"));
        }
        out.push('\n');
        for b in 0..a.bins {
            out.push_str(&profiles[0].gc_percent[b].to_string());
            for p in &profiles {
                out.push_str(&format!(",{},{}", p.mean[b], p.std[b]));
            }
            out.push('\n');
        }
        m.write_output("phase.csv", &out)?;
    }
    Ok(0)
}

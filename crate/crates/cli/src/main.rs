mod args;
mod commands;
mod config;
mod manifest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;

use args::{Cli, Command};
use manifest::{FileDigest, RunManifest};

/// Exit status for bad input or configuration.
const EXIT_INPUT: u8 = 2;
/// Exit status for a diverged simulation.
const EXIT_DIVERGED: u8 = 3;

fn out_dir(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Envs(a) => Some(&a.out.out),
        Command::Playback(a) => Some(&a.out.out),
        Command::Simulate(a) => Some(&a.out.out),
        Command::Analyze(a) => Some(&a.out.out),
        Command::Replay(_) => None,
    }
}

fn set_out_dir(cmd: &mut Command, dir: PathBuf) {
    match cmd {
        Command::Envs(a) => a.out.out = dir,
        Command::Playback(a) => a.out.out = dir,
        Command::Simulate(a) => a.out.out = dir,
        Command::Analyze(a) => a.out.out = dir,
        Command::Replay(_) => {}
    }
}

fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Envs(_) => "envs",
        Command::Playback(_) => "playback",
        Command::Simulate(_) => "simulate",
        Command::Analyze(_) => "analyze",
        Command::Replay(_) => "replay",
    }
}

/// Runs one recorded subcommand and always leaves its manifest behind.
fn run_recorded(cmd: &Command, args: &[String]) -> (Result<i32>, Option<RunManifest>) {
    let dir = out_dir(cmd).expect("recorded subcommand").clone();
    if let Err(e) = fs::create_dir_all(&dir) {
        return (Err(e).context(format!("cannot create {}", dir.display())), None);
    }
    let mut m = RunManifest::new(name(cmd), args, &dir);
    let result = match cmd {
        Command::Envs(a) => commands::envs(a, &mut m),
        Command::Playback(a) => commands::playback(a, &mut m),
        Command::Simulate(a) => commands::simulate(a, &mut m),
        Command::Analyze(a) => commands::analyze(a, &mut m),
        Command::Replay(_) => unreachable!(),
    };
    if let Err(e) = &result {
        m.warnings.push(format!("failed: {e:#}"));
    }
    match m.save() {
        Ok(_) => (result, Some(m)),
        Err(e) if result.is_ok() => (Err(e), Some(m)),
        Err(_) => (result, Some(m)),
    }
}

fn replay(manifest_path: &Path, out: Option<PathBuf>) -> Result<i32> {
    let recorded = RunManifest::load(manifest_path)?;
    for input in &recorded.inputs {
        let now = FileDigest::of(&input.path).with_context(|| format!("recorded input {}", input.path.display()))?;
        if now.sha256 != input.sha256 {
            bail!("input {} changed since the recorded run", input.path.display());
        }
    }
    let argv = std::iter::once("exoverse".to_string()).chain(recorded.args.iter().cloned());
    let mut cli = Cli::try_parse_from(argv).context("recorded arguments no longer parse")?;
    if matches!(cli.command, Command::Replay(_)) {
        bail!("manifest records a replay");
    }
    set_out_dir(&mut cli.command, out.unwrap_or_else(|| recorded.out_dir.clone()));
    if let (Command::Simulate(a), Some(seed)) = (&mut cli.command, recorded.seed) {
        a.seed = Some(seed);
    }
    let (result, fresh) = run_recorded(&cli.command, &recorded.args);
    let code = result?;
    let fresh = fresh.expect("manifest written");

    let file_name = |d: &FileDigest| d.path.file_name().map(|n| n.to_owned());
    let mut mismatches = 0;
    for old in &recorded.outputs {
        match fresh.outputs.iter().find(|d| file_name(d) == file_name(old)) {
            Some(new) if new.sha256 == old.sha256 => println!("identical  {}", new.path.display()),
            Some(new) => {
                mismatches += 1;
                println!("DIFFERENT  {}", new.path.display());
            }
            None => {
                mismatches += 1;
                println!("MISSING    {}", old.path.display());
            }
        }
    }
    if mismatches > 0 {
        eprintln!("replay: {mismatches} outputs differ from the manifest");
        return Ok(1);
    }
    Ok(code)
}

fn is_divergence(e: &anyhow::Error) -> bool {
    e.chain()
        .any(|c| matches!(c.downcast_ref::<exoverse_core::Error>(), Some(exoverse_core::Error::Diverged { .. })))
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Replay(a) => replay(&a.manifest, a.out.clone()),
        cmd => run_recorded(cmd, &args).0,
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_divergence(&e) { EXIT_DIVERGED } else { EXIT_INPUT })
        }
    }
}

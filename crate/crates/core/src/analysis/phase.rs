use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::SimTrace;

/// One bin per gait-cycle percent, 0 through 100.
pub const DEFAULT_PHASE_BINS: usize = 101;

/// Mean and population standard deviation across cycles at evenly spaced
/// gait-cycle percentages (first bin 0%, last bin 100%).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseProfile {
    pub gc_percent: Vec<f64>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub cycles: usize,
    pub warning: Option<String>,
}

pub fn phase_average(trace: &SimTrace, column: &str, n_bins: usize) -> Result<PhaseProfile> {
    phase_average_series(&trace.column(column)?, trace.samples_per_cycle(), n_bins)
}

/// Phase statistics of a series sampled `samples_per_cycle` times per cycle.
///
/// Each cycle is linearly interpolated at the bin positions; the 100% bin
/// uses the first sample of the next cycle, or wraps to the start of the
/// same cycle for the last one. A trailing partial cycle is ignored.
pub fn phase_average_series(
    values: &[f64],
    samples_per_cycle: usize,
    n_bins: usize,
) -> Result<PhaseProfile> {
    if n_bins < 2 {
        return Err(Error::invalid("n_bins", format!("need at least 2, got {n_bins}")));
    }
    if samples_per_cycle < 2 {
        return Err(Error::invalid("samples_per_cycle", "need at least 2"));
    }
    let n = samples_per_cycle;
    let cycles = values.len() / n;
    if cycles == 0 {
        return Err(Error::EmptyWindow(format!(
            "{} samples do not cover one {n}-sample cycle",
            values.len()
        )));
    }
    let gc_percent: Vec<f64> = (0..n_bins).map(|b| 100.0 * b as f64 / (n_bins - 1) as f64).collect();
    let sample = |c: usize, gc: f64| -> f64 {
        let pos = gc / 100.0 * n as f64;
        let i = (pos.floor() as usize).min(n - 1);
        let frac = pos - i as f64;
        let base = c * n;
        let next = if base + i + 1 < values.len() { base + i + 1 } else { base + (i + 1) % n };
        values[base + i] * (1.0 - frac) + values[next] * frac
    };
    let mut mean = Vec::with_capacity(n_bins);
    let mut std = Vec::with_capacity(n_bins);
    for &gc in &gc_percent {
        let vals: Vec<f64> = (0..cycles).map(|c| sample(c, gc)).collect();
        let m = vals.iter().sum::<f64>() / cycles as f64;
        let var = vals.iter().map(|v| (v - m).powi(2)).sum::<f64>() / cycles as f64;
        mean.push(m);
        std.push(var.sqrt());
    }
    let warning = (cycles < 2).then(|| "only one cycle: standard deviation is zero by construction".to_string());
    Ok(PhaseProfile {
        gc_percent,
        mean,
        std,
        cycles,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize, offset: f64) -> Vec<f64> {
        (0..n).map(|k| (k as f64 / n as f64 * 6.3).sin() + offset).collect()
    }

    #[test]
    fn identical_cycles_have_no_spread() {
        let v: Vec<f64> = [cycle(200, 0.0), cycle(200, 0.0), cycle(200, 0.0)].concat();
        let p = phase_average_series(&v, 200, 101).unwrap();
        assert_eq!(p.cycles, 3);
        assert!(p.warning.is_none());
        // The 100% bin of each cycle reads the next cycle's first sample,
        // except for the last cycle which wraps; all equal here.
        assert!(p.std.iter().all(|&s| s < 1e-12));
    }

    #[test]
    fn single_cycle_warns() {
        let p = phase_average_series(&cycle(100, 0.0), 100, 11).unwrap();
        assert!(p.std.iter().all(|&s| s == 0.0));
        assert!(p.warning.is_some());
    }

    #[test]
    fn offset_cycles_give_half_offset_std() {
        let v: Vec<f64> = vec![1.0; 100].into_iter().chain(vec![1.5; 100]).collect();
        let p = phase_average_series(&v, 100, 51).unwrap();
        for (b, s) in p.std.iter().enumerate().take(50) {
            assert!((s - 0.25).abs() < 1e-12, "bin {b}: {s}");
        }
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(phase_average_series(&[0.0; 10], 10, 1).is_err());
        assert!(phase_average_series(&[0.0; 5], 10, 11).is_err());
    }
}

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::filter::Sos;

/// Surface-EMG linear envelope settings. `bandpass_order` counts the poles
/// of the lowpass prototype, as in the usual `butter(order, [lo, hi])` design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvelopeParams {
    pub sample_rate: f64,
    pub bandpass: (f64, f64),
    pub bandpass_order: usize,
    pub lowpass: f64,
    pub lowpass_order: usize,
}

impl EnvelopeParams {
    /// 30–450 Hz fourth-order bandpass and 4 Hz second-order lowpass.
    pub fn new(sample_rate: f64) -> Self {
        Self {
            sample_rate,
            bandpass: (30.0, 450.0),
            bandpass_order: 4,
            lowpass: 4.0,
            lowpass_order: 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fs = self.sample_rate;
        if !(fs.is_finite() && fs > 0.0) {
            return Err(Error::invalid("sample_rate", format!("must be > 0, got {fs}")));
        }
        let (lo, hi) = self.bandpass;
        if !(lo > 0.0 && lo < hi && hi < fs / 2.0) {
            return Err(Error::invalid(
                "bandpass",
                format!("need 0 < {lo} < {hi} < {} Hz", fs / 2.0),
            ));
        }
        if !(self.lowpass > 0.0 && self.lowpass < fs / 2.0) {
            return Err(Error::invalid("lowpass", format!("{} Hz outside (0, {})", self.lowpass, fs / 2.0)));
        }
        if self.bandpass_order == 0 || self.lowpass_order == 0 {
            return Err(Error::invalid("filter order", "must be >= 1"));
        }
        Ok(())
    }

    /// Three times the longest filter time constant `1/(2π f_c)`, in samples.
    pub fn warmup_samples(&self) -> usize {
        let f_min = self.bandpass.0.min(self.lowpass);
        (3.0 * self.sample_rate / (2.0 * PI * f_min)).ceil() as usize
    }
}

/// Bandpass, full-wave rectify, lowpass; both filters applied forward and
/// backward. Zero-phase lowpassing of a rectified signal can undershoot
/// slightly below zero, so the result is clamped at 0.
pub fn emg_envelope(raw: &[f64], params: &EnvelopeParams) -> Result<Vec<f64>> {
    params.validate()?;
    let warmup = params.warmup_samples();
    if raw.len() <= warmup {
        return Err(Error::SignalTooShort {
            len: raw.len(),
            min: warmup,
        });
    }
    if raw.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("EMG sample"));
    }
    let fs = params.sample_rate;
    let (lo, hi) = params.bandpass;
    let bp = Sos::butter_bandpass(params.bandpass_order, lo, hi, fs)?;
    let lp = Sos::butter_lowpass(params.lowpass_order, params.lowpass, fs)?;
    let band = bp.filtfilt(raw, warmup)?;
    let rectified: Vec<f64> = band.iter().map(|v| v.abs()).collect();
    Ok(lp.filtfilt(&rectified, warmup)?.into_iter().map(|v| v.max(0.0)).collect())
}

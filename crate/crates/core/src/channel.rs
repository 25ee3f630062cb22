//! Simulated acoustic channel: gain, low-pass band limit, additive white
//! Gaussian noise, applied in that order.
//!
//! # Noise generator
//!
//! Noise comes from a fixed algorithm so runs are bit-reproducible:
//!
//! 1. State is a `u64` initialised to the seed and advanced by the MMIX
//!    linear congruential step
//!    `state = state * 6364136223846793005 + 1442695040888963407 (mod 2^64)`.
//! 2. Each uniform draw advances the state once and takes its top 53 bits:
//!    `u = ((state >> 11) + 1) / 2^53`, which lies in (0, 1].
//! 3. Box-Muller turns two uniforms `u1, u2` into two normals
//!    `sqrt(-2 ln u1) cos(2 pi u2)` and `sqrt(-2 ln u1) sin(2 pi u2)`,
//!    used in that order.
//!
//! SNR is measured against the mean power of the whole buffer handed to
//! [`apply_awgn`], gaps included.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::decode::DecodeResult;
use crate::error::{Error, Result};
use crate::synth::AudioBuffer;

pub const DEFAULT_FIR_TAPS: usize = 511;
/// Cutoff modelling the upper limit of adult hearing.
pub const HUMAN_HEARING_CUTOFF_HZ: f64 = 20_000.0;

const LCG_MULTIPLIER: u64 = 6_364_136_223_846_793_005;
const LCG_INCREMENT: u64 = 1_442_695_040_888_963_407;

/// Seeded Gaussian source; see the module docs for the exact algorithm.
#[derive(Debug, Clone)]
pub struct NoiseGenerator {
    state: u64,
    spare: Option<f64>,
}

impl NoiseGenerator {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed,
            spare: None,
        }
    }

    /// Uniform draw in (0, 1].
    pub fn next_uniform(&mut self) -> f64 {
        self.state = self
            .state
            .wrapping_mul(LCG_MULTIPLIER)
            .wrapping_add(LCG_INCREMENT);
        ((self.state >> 11) + 1) as f64 / (1u64 << 53) as f64
    }

    /// Standard normal draw.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.next_uniform();
        let u2 = self.next_uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    /// `None` is a noiseless channel.
    pub snr_db: Option<f64>,
    pub lowpass_cutoff_hz: Option<f64>,
    pub gain: f64,
    pub seed: u64,
    pub fir_taps: usize,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self {
            snr_db: None,
            lowpass_cutoff_hz: None,
            gain: 1.0,
            seed: 0,
            fir_taps: DEFAULT_FIR_TAPS,
        }
    }
}

impl ChannelConfig {
    /// Band-limited to human hearing, noiseless.
    pub fn audible() -> Self {
        Self {
            lowpass_cutoff_hz: Some(HUMAN_HEARING_CUTOFF_HZ),
            ..Self::default()
        }
    }

    pub fn validate(&self, sample_rate_hz: u32) -> Result<()> {
        if !(self.gain > 0.0) || !self.gain.is_finite() {
            return Err(Error::Config(format!(
                "gain must be positive, got {}",
                self.gain
            )));
        }
        if let Some(snr) = self.snr_db {
            if snr.is_nan() {
                return Err(Error::Config("snr must be a number".into()));
            }
        }
        if let Some(cutoff) = self.lowpass_cutoff_hz {
            check_lowpass(cutoff, self.fir_taps, sample_rate_hz)?;
        }
        Ok(())
    }
}

fn check_lowpass(cutoff_hz: f64, taps: usize, sample_rate_hz: u32) -> Result<()> {
    let nyquist = f64::from(sample_rate_hz) / 2.0;
    if !(cutoff_hz > 0.0 && cutoff_hz < nyquist) {
        return Err(Error::Domain(format!(
            "cutoff {cutoff_hz} Hz must lie in (0, {nyquist}) for sample rate {sample_rate_hz} Hz"
        )));
    }
    if taps == 0 || taps % 2 == 0 {
        return Err(Error::Domain(format!(
            "filter length must be odd and positive, got {taps}"
        )));
    }
    Ok(())
}

/// Adds white Gaussian noise at `snr_db` below the buffer's mean power.
/// An infinite SNR returns the buffer unchanged.
pub fn apply_awgn(buffer: &AudioBuffer, snr_db: f64, seed: u64) -> Result<AudioBuffer> {
    if buffer.is_empty() {
        return Err(Error::Domain("cannot add noise to an empty buffer".into()));
    }
    if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
        return Err(Error::Domain(format!("invalid snr {snr_db} dB")));
    }
    if snr_db == f64::INFINITY {
        return Ok(buffer.clone());
    }
    let sigma = (buffer.mean_power() / 10f64.powf(snr_db / 10.0)).sqrt();
    let mut rng = NoiseGenerator::new(seed);
    let samples = buffer
        .samples
        .iter()
        .map(|s| s + sigma * rng.next_gaussian())
        .collect();
    Ok(AudioBuffer::new(samples, buffer.sample_rate_hz))
}

/// Hamming-windowed sinc low-pass taps, normalized to unit DC gain.
pub fn lowpass_taps(cutoff_hz: f64, taps: usize, sample_rate_hz: u32) -> Result<Vec<f64>> {
    check_lowpass(cutoff_hz, taps, sample_rate_hz)?;
    if taps == 1 {
        return Ok(vec![1.0]);
    }
    let fc = cutoff_hz / f64::from(sample_rate_hz);
    let centre = (taps / 2) as f64;
    let last = (taps - 1) as f64;
    let mut h: Vec<f64> = (0..taps)
        .map(|n| {
            let t = n as f64 - centre;
            let sinc = if t == 0.0 {
                2.0 * fc
            } else {
                (2.0 * PI * fc * t).sin() / (PI * t)
            };
            let window = 0.54 - 0.46 * (2.0 * PI * n as f64 / last).cos();
            sinc * window
        })
        .collect();
    let sum: f64 = h.iter().sum();
    h.iter_mut().for_each(|v| *v /= sum);
    Ok(h)
}

/// Low-pass filters `buffer`, compensating the centre-tap delay so the
/// output keeps the input's length and timeline. Samples beyond the ends
/// count as zero.
pub fn apply_lowpass(buffer: &AudioBuffer, cutoff_hz: f64, fir_taps: usize) -> Result<AudioBuffer> {
    let h = lowpass_taps(cutoff_hz, fir_taps, buffer.sample_rate_hz)?;
    let x = &buffer.samples;
    let n = x.len();
    let half = h.len() / 2;
    let out = (0..n)
        .map(|i| {
            // y[i] = sum_k h[k] x[i + half - k]
            let k_lo = (i + half + 1).saturating_sub(n);
            let k_hi = (i + half).min(h.len() - 1);
            (k_lo..=k_hi).map(|k| h[k] * x[i + half - k]).sum()
        })
        .collect();
    Ok(AudioBuffer::new(out, buffer.sample_rate_hz))
}

/// Gain, then low-pass, then noise.
pub fn apply_channel(buffer: &AudioBuffer, config: &ChannelConfig) -> Result<AudioBuffer> {
    config.validate(buffer.sample_rate_hz)?;
    let mut out = AudioBuffer::new(
        buffer.samples.iter().map(|s| s * config.gain).collect(),
        buffer.sample_rate_hz,
    );
    if let Some(cutoff) = config.lowpass_cutoff_hz {
        out = apply_lowpass(&out, cutoff, config.fir_taps)?;
    }
    if let Some(snr) = config.snr_db {
        out = apply_awgn(&out, snr, config.seed)?;
    }
    Ok(out)
}

/// Symbol error statistics for one transmission.
#[derive(Debug, Clone, PartialEq)]
pub struct SerReport {
    pub total: usize,
    pub errors: usize,
    pub ser: f64,
    /// Counts of (sent, received) pairs; `None` marks a failed symbol.
    pub confusion: BTreeMap<(char, Option<char>), usize>,
}

impl SerReport {
    /// Errors on symbols where `sent` was transmitted.
    pub fn errors_for(&self, sent: char) -> usize {
        self.confusion
            .iter()
            .filter(|((s, r), _)| *s == sent && *r != Some(sent))
            .map(|(_, n)| n)
            .sum()
    }
}

/// Compares the transmitted text with the receiver's detections.
pub fn measure_ser(sent: &str, received: &DecodeResult) -> Result<SerReport> {
    let sent_len = sent.chars().count();
    if sent_len != received.symbol_count || received.detections.len() != sent_len {
        return Err(Error::Alignment {
            sent: sent_len,
            received: received.symbol_count,
        });
    }
    let mut confusion = BTreeMap::new();
    let mut errors = 0;
    for (s, detection) in sent.chars().zip(&received.detections) {
        let r = detection.detected_char;
        if r != Some(s) {
            errors += 1;
        }
        *confusion.entry((s, r)).or_insert(0) += 1;
    }
    Ok(SerReport {
        total: sent_len,
        errors,
        ser: if sent_len == 0 {
            0.0
        } else {
            errors as f64 / sent_len as f64
        },
        confusion,
    })
}

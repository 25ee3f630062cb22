//! Text to tone synthesis.
//!
//! Each character becomes a fixed-length sine burst at its alphabet
//! frequency, shaped by raised-cosine edges and followed by a silent gap.
//! Framing (symbol length, gap, fade) is shared with the decoder through
//! [`SynthParams`] and [`crate::decode::DecodeParams`].

mod wav;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::freqmap::FrequencyTable;

pub use wav::{read_wav, write_wav, WAV_HEADER_LEN};

/// Framing and level of synthesized symbols.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthParams {
    pub sample_rate_hz: u32,
    pub symbol_duration_s: f64,
    pub gap_duration_s: f64,
    pub fade_duration_s: f64,
    pub amplitude: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            sample_rate_hz: 192_000,
            symbol_duration_s: 0.040,
            gap_duration_s: 0.010,
            fade_duration_s: 0.002,
            amplitude: 0.8,
        }
    }
}

impl SynthParams {
    pub fn validate(&self) -> Result<()> {
        if self.sample_rate_hz == 0 {
            return Err(Error::Config("sample rate must be positive".into()));
        }
        if !(self.symbol_duration_s > 0.0) || !self.symbol_duration_s.is_finite() {
            return Err(Error::Config(format!(
                "symbol duration must be positive, got {}",
                self.symbol_duration_s
            )));
        }
        if !(self.gap_duration_s >= 0.0) || !self.gap_duration_s.is_finite() {
            return Err(Error::Config(format!(
                "gap duration must be non-negative, got {}",
                self.gap_duration_s
            )));
        }
        if !(self.fade_duration_s >= 0.0) || 2.0 * self.fade_duration_s > self.symbol_duration_s {
            return Err(Error::Config(format!(
                "fade duration {} must be non-negative and at most half the symbol duration {}",
                self.fade_duration_s, self.symbol_duration_s
            )));
        }
        if !(self.amplitude > 0.0 && self.amplitude <= 1.0) {
            return Err(Error::Config(format!(
                "amplitude must be in (0, 1], got {}",
                self.amplitude
            )));
        }
        if self.symbol_samples() == 0 {
            return Err(Error::Config(
                "symbol duration rounds to zero samples".into(),
            ));
        }
        Ok(())
    }

    pub fn symbol_samples(&self) -> usize {
        seconds_to_samples(self.symbol_duration_s, self.sample_rate_hz)
    }

    pub fn gap_samples(&self) -> usize {
        seconds_to_samples(self.gap_duration_s, self.sample_rate_hz)
    }

    pub fn fade_samples(&self) -> usize {
        seconds_to_samples(self.fade_duration_s, self.sample_rate_hz)
    }

    /// Nyquist frequency of the sample rate.
    pub fn nyquist_hz(&self) -> f64 {
        f64::from(self.sample_rate_hz) / 2.0
    }
}

pub(crate) fn seconds_to_samples(seconds: f64, sample_rate_hz: u32) -> usize {
    (seconds * f64::from(sample_rate_hz)).round() as usize
}

/// Mono real-valued audio.
///
/// Synthesis keeps samples within [-1, 1]. Channel noise can push samples
/// past full scale; [`write_wav`] clamps on quantization.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    pub samples: Vec<f64>,
    pub sample_rate_hz: u32,
}

impl AudioBuffer {
    pub fn new(samples: Vec<f64>, sample_rate_hz: u32) -> Self {
        Self {
            samples,
            sample_rate_hz,
        }
    }

    pub fn silence(len: usize, sample_rate_hz: u32) -> Self {
        Self::new(vec![0.0; len], sample_rate_hz)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / f64::from(self.sample_rate_hz)
    }

    /// Mean squared amplitude; zero for an empty buffer.
    pub fn mean_power(&self) -> f64 {
        mean_power(&self.samples)
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, s| m.max(s.abs()))
    }

    /// True when every sample lies within [-1, 1].
    pub fn is_full_scale(&self) -> bool {
        self.samples.iter().all(|s| (-1.0..=1.0).contains(s))
    }
}

pub(crate) fn mean_power(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().map(|s| s * s).sum::<f64>() / samples.len() as f64
}

/// Renders one tone burst, phase starting at zero.
pub fn synth_symbol(frequency_hz: f64, params: &SynthParams) -> Result<AudioBuffer> {
    params.validate()?;
    let mut samples = vec![0.0; params.symbol_samples()];
    render_symbol(&mut samples, frequency_hz, params)?;
    Ok(AudioBuffer::new(samples, params.sample_rate_hz))
}

fn render_symbol(out: &mut [f64], frequency_hz: f64, params: &SynthParams) -> Result<()> {
    if !(frequency_hz > 0.0) {
        return Err(Error::Domain(format!(
            "tone frequency must be positive, got {frequency_hz}"
        )));
    }
    if frequency_hz >= params.nyquist_hz() {
        return Err(Error::Aliasing {
            frequency_hz,
            sample_rate_hz: params.sample_rate_hz,
        });
    }
    let step = 2.0 * PI * frequency_hz / f64::from(params.sample_rate_hz);
    for (k, s) in out.iter_mut().enumerate() {
        *s = params.amplitude * (step * k as f64).sin();
    }
    let n = out.len();
    let fade = params.fade_samples().min(n / 2);
    for k in 0..fade {
        let gain = 0.5 * (1.0 - (PI * k as f64 / fade as f64).cos());
        out[k] *= gain;
        out[n - 1 - k] *= gain;
    }
    Ok(())
}

/// Encodes printable ASCII text as consecutive tone frames.
///
/// Each character contributes `symbol_samples()` of tone followed by
/// `gap_samples()` of silence.
pub fn encode_text(
    text: &str,
    table: &FrequencyTable,
    params: &SynthParams,
) -> Result<AudioBuffer> {
    params.validate()?;
    let frequencies = text
        .chars()
        .enumerate()
        .map(|(index, c)| {
            table
                .by_char(c)
                .map(|tone| tone.frequency_hz)
                .ok_or(Error::Unmappable {
                    index,
                    code_point: u32::from(c),
                })
        })
        .collect::<Result<Vec<_>>>()?;

    let symbol_len = params.symbol_samples();
    let frame_len = symbol_len + params.gap_samples();
    let mut samples = vec![0.0; frequencies.len() * frame_len];
    for (frame, &frequency) in samples.chunks_exact_mut(frame_len).zip(&frequencies) {
        render_symbol(&mut frame[..symbol_len], frequency, params)?;
    }
    Ok(AudioBuffer::new(samples, params.sample_rate_hz))
}

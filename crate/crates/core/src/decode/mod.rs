//! Tone to text receiver.
//!
//! The buffer is cut into fixed frames matching the synthesis framing. The
//! symbol part of each frame, minus an analysis margin at both edges, runs
//! through a Goertzel bank tuned to every alphabet tone below Nyquist. The
//! strongest tone wins if the frame carries energy and the winner beats the
//! runner-up by `min_confidence`.

mod goertzel;

use std::ops::Range;

use crate::error::{Error, Result};
use crate::freqmap::FrequencyTable;
use crate::synth::{mean_power, seconds_to_samples, AudioBuffer, SynthParams};

pub use goertzel::{goertzel_power, GoertzelBank, MIN_SEGMENT_LEN};

/// Placeholder for symbols that could not be decoded.
pub const SUBSTITUTION_MARKER: char = '?';

/// Half a semitone, as a frequency ratio.
const QUARTER_TONE: f64 = 1.029_302_236_643_492; // 2^(1/24)

/// Receiver framing and decision thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodeParams {
    pub symbol_duration_s: f64,
    pub gap_duration_s: f64,
    /// Trimmed from both edges of each symbol before analysis.
    pub analysis_margin_s: f64,
    /// Minimum ratio of best to second-best tone power.
    pub min_confidence: f64,
    /// Minimum mean squared amplitude of the analysis window.
    pub min_energy: f64,
}

impl Default for DecodeParams {
    fn default() -> Self {
        Self::from_synth(&SynthParams::default())
    }
}

impl DecodeParams {
    /// Receiver parameters matching a transmitter's framing; the margin
    /// equals the fade length.
    pub fn from_synth(params: &SynthParams) -> Self {
        Self {
            symbol_duration_s: params.symbol_duration_s,
            gap_duration_s: params.gap_duration_s,
            analysis_margin_s: params.fade_duration_s,
            min_confidence: 2.0,
            min_energy: 1e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
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
        if !(self.analysis_margin_s >= 0.0)
            || 2.0 * self.analysis_margin_s >= self.symbol_duration_s
        {
            return Err(Error::Config(format!(
                "analysis margin {} must be non-negative and less than half the symbol duration",
                self.analysis_margin_s
            )));
        }
        if !(self.min_confidence >= 1.0) {
            return Err(Error::Config(format!(
                "min confidence must be at least 1, got {}",
                self.min_confidence
            )));
        }
        if !(self.min_energy >= 0.0) {
            return Err(Error::Config(format!(
                "min energy must be non-negative, got {}",
                self.min_energy
            )));
        }
        Ok(())
    }
}

/// Outcome class of one symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectionStatus {
    Detected,
    /// Analysis window below the energy threshold.
    Silent,
    /// Winner did not beat the runner-up by `min_confidence`.
    Ambiguous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolDetection {
    pub index: usize,
    pub status: DetectionStatus,
    pub detected_char: Option<char>,
    /// Frequency of the strongest tone; 0 for silent symbols.
    pub target_frequency_hz: f64,
    pub power: f64,
    /// Best over second-best power; 1 for silent symbols.
    pub confidence: f64,
    /// Parabolic estimate of the offset from the winning tone, for
    /// diagnostics only.
    pub cents_error: f64,
}

impl SymbolDetection {
    fn silent(index: usize) -> Self {
        Self {
            index,
            status: DetectionStatus::Silent,
            detected_char: None,
            target_frequency_hz: 0.0,
            power: 0.0,
            confidence: 1.0,
            cents_error: 0.0,
        }
    }

    /// Character for the text rendering: the detection or the marker.
    pub fn display_char(&self) -> char {
        self.detected_char.unwrap_or(SUBSTITUTION_MARKER)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub text: String,
    pub detections: Vec<SymbolDetection>,
    pub symbol_count: usize,
    pub failed_count: usize,
}

impl DecodeResult {
    fn from_detections(detections: Vec<SymbolDetection>) -> Self {
        Self {
            text: detections
                .iter()
                .map(SymbolDetection::display_char)
                .collect(),
            symbol_count: detections.len(),
            failed_count: detections
                .iter()
                .filter(|d| d.detected_char.is_none())
                .count(),
            detections,
        }
    }
}

/// Goertzel bank over the table entries below Nyquist, with the analysis
/// window geometry for one sample rate.
#[derive(Debug, Clone)]
pub struct ToneBank<'t> {
    table: &'t FrequencyTable,
    bank: GoertzelBank,
    sample_rate_hz: u32,
}

impl<'t> ToneBank<'t> {
    pub fn new(table: &'t FrequencyTable, sample_rate_hz: u32) -> Result<Self> {
        let nyquist = f64::from(sample_rate_hz) / 2.0;
        let targets: Vec<f64> = table
            .entries()
            .iter()
            .map(|e| e.frequency_hz)
            .take_while(|&f| f < nyquist)
            .collect();
        Ok(Self {
            table,
            bank: GoertzelBank::new(&targets, sample_rate_hz)?,
            sample_rate_hz,
        })
    }

    /// Number of table entries the bank can hear.
    pub fn audible_len(&self) -> usize {
        self.bank.len()
    }

    /// Power per table entry (table order); entries at or above Nyquist
    /// read zero.
    pub fn powers(&self, window: &[f64]) -> Vec<f64> {
        let mut powers = self.bank.powers(window);
        powers.resize(self.table.len(), 0.0);
        powers
    }

    fn detect(&self, index: usize, window: &[f64], params: &DecodeParams) -> SymbolDetection {
        if window.len() < MIN_SEGMENT_LEN
            || self.bank.is_empty()
            || mean_power(window) < params.min_energy
        {
            return SymbolDetection::silent(index);
        }
        let powers = self.bank.powers(window);
        // Strict comparisons keep the lower frequency on ties.
        let (mut best, mut second) = (0usize, None::<usize>);
        for i in 1..powers.len() {
            if powers[i] > powers[best] {
                second = Some(best);
                best = i;
            } else if second.map_or(true, |s| powers[i] > powers[s]) {
                second = Some(i);
            }
        }
        let best_power = powers[best];
        let confidence = match second {
            Some(s) if powers[s] > 0.0 => best_power / powers[s],
            _ => f64::INFINITY,
        };
        let tone = &self.table.entries()[best];
        let detected = confidence >= params.min_confidence && best_power > 0.0;
        SymbolDetection {
            index,
            status: if detected {
                DetectionStatus::Detected
            } else {
                DetectionStatus::Ambiguous
            },
            detected_char: detected.then_some(tone.character),
            target_frequency_hz: tone.frequency_hz,
            power: best_power,
            confidence,
            cents_error: self.refine_cents(window, tone.frequency_hz, best_power),
        }
    }

    fn refine_cents(&self, window: &[f64], frequency_hz: f64, centre: f64) -> f64 {
        let below = goertzel_power(window, self.sample_rate_hz, frequency_hz / QUARTER_TONE);
        let above = goertzel_power(window, self.sample_rate_hz, frequency_hz * QUARTER_TONE);
        let (Ok(below), Ok(above)) = (below, above) else {
            return 0.0;
        };
        let curvature = below - 2.0 * centre + above;
        if curvature >= 0.0 {
            return 0.0;
        }
        // Vertex of the parabola through the three points, in quarter tones.
        let offset = 0.5 * (below - above) / curvature;
        (offset.clamp(-1.0, 1.0)) * 50.0
    }
}

/// Sample ranges of the symbol portions of each frame in a buffer of
/// `len` samples, untrimmed.
///
/// Frames advance by the synthesizer's per-segment rounding
/// (`round(symbol * rate) + round(gap * rate)`). A trailing partial frame
/// is kept if it covers the trimmed analysis window.
pub fn symbol_windows(len: usize, sample_rate_hz: u32, params: &DecodeParams) -> Vec<Range<usize>> {
    let symbol = seconds_to_samples(params.symbol_duration_s, sample_rate_hz);
    let frame = symbol + seconds_to_samples(params.gap_duration_s, sample_rate_hz);
    let margin = seconds_to_samples(params.analysis_margin_s, sample_rate_hz);
    if frame == 0 {
        return Vec::new();
    }
    let needed = symbol.saturating_sub(margin);
    (0..len)
        .step_by(frame)
        .filter(|&start| len - start >= needed)
        .map(|start| start..(start + symbol).min(len))
        .collect()
}

fn trim(segment: &[f64], margin: usize, symbol: usize) -> &[f64] {
    let end = symbol.saturating_sub(margin).min(segment.len());
    let start = margin.min(end);
    &segment[start..end]
}

fn check_rate(table: &FrequencyTable, sample_rate_hz: u32) -> Result<()> {
    if table.is_empty() {
        return Err(Error::Config("empty frequency table".into()));
    }
    let lowest = table.first().frequency_hz;
    if f64::from(sample_rate_hz) < 2.0 * lowest {
        return Err(Error::Config(format!(
            "sample rate {sample_rate_hz} Hz is below twice the lowest tone ({lowest:.2} Hz)"
        )));
    }
    Ok(())
}

/// Classifies one symbol segment (the tone part of a frame).
pub fn detect_symbol(
    segment: &[f64],
    sample_rate_hz: u32,
    table: &FrequencyTable,
    params: &DecodeParams,
) -> Result<SymbolDetection> {
    params.validate()?;
    check_rate(table, sample_rate_hz)?;
    let bank = ToneBank::new(table, sample_rate_hz)?;
    let symbol = seconds_to_samples(params.symbol_duration_s, sample_rate_hz);
    let margin = seconds_to_samples(params.analysis_margin_s, sample_rate_hz);
    Ok(bank.detect(0, trim(segment, margin, symbol), params))
}

/// Decodes a whole buffer frame by frame.
pub fn decode_audio(
    buffer: &AudioBuffer,
    table: &FrequencyTable,
    params: &DecodeParams,
) -> Result<DecodeResult> {
    params.validate()?;
    check_rate(table, buffer.sample_rate_hz)?;
    let rate = buffer.sample_rate_hz;
    let bank = ToneBank::new(table, rate)?;
    let symbol = seconds_to_samples(params.symbol_duration_s, rate);
    let margin = seconds_to_samples(params.analysis_margin_s, rate);
    let detections = symbol_windows(buffer.len(), rate, params)
        .into_iter()
        .enumerate()
        .map(|(index, range)| {
            bank.detect(index, trim(&buffer.samples[range], margin, symbol), params)
        })
        .collect();
    Ok(DecodeResult::from_detections(detections))
}

/// Per-symbol normalized tone powers (table order) for every frame; the
/// raw material of the tone grid.
pub fn symbol_power_matrix(
    buffer: &AudioBuffer,
    table: &FrequencyTable,
    params: &DecodeParams,
) -> Result<Vec<Vec<f64>>> {
    params.validate()?;
    check_rate(table, buffer.sample_rate_hz)?;
    let rate = buffer.sample_rate_hz;
    let bank = ToneBank::new(table, rate)?;
    let symbol = seconds_to_samples(params.symbol_duration_s, rate);
    let margin = seconds_to_samples(params.analysis_margin_s, rate);
    Ok(symbol_windows(buffer.len(), rate, params)
        .into_iter()
        .map(|range| {
            let window = trim(&buffer.samples[range], margin, symbol);
            if mean_power(window) < params.min_energy {
                vec![0.0; table.len()]
            } else {
                bank.powers(window)
            }
        })
        .collect())
}

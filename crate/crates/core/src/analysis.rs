//! Spectrograms, tone-grid images and information rate.
//!
//! Images are binary PPM (P6), 8 bits per channel. Intensities in [0, 1]
//! map onto a black-red-yellow-white ramp:
//!
//! ```text
//! r = clamp(3t, 0, 1), g = clamp(3t - 1, 0, 1), b = clamp(3t - 2, 0, 1)
//! byte = round(255 * channel)
//! ```

use std::sync::Arc;

use rustfft::{num_complex::Complex, Fft, FftPlanner};

use crate::decode::{symbol_power_matrix, DecodeParams};
use crate::error::{Error, Result};
use crate::freqmap::{FrequencyTable, ALPHABET_SIZE};
use crate::synth::{AudioBuffer, SynthParams};

pub const DEFAULT_WINDOW: usize = 4096;
pub const DEFAULT_HOP: usize = 1024;
pub const DEFAULT_DB_FLOOR: f64 = -80.0;
/// Reference speech throughput in bits per second. Not a measured value
/// of this codec; only the `exceeds_speech` flag depends on it.
pub const DEFAULT_SPEECH_BASELINE_BPS: f64 = 39.0;

/// Magnitude spectra of overlapping Hann-windowed frames, normalized by
/// the window's coherent gain so a bin-centred sine of amplitude `a` peaks
/// at `a / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    /// `frames[t][bin]`, `window_size / 2 + 1` bins per frame.
    pub frames: Vec<Vec<f64>>,
    pub window_size: usize,
    pub hop: usize,
    pub sample_rate_hz: u32,
}

impl Spectrogram {
    pub fn bin_count(&self) -> usize {
        self.window_size / 2 + 1
    }

    pub fn bin_frequency_hz(&self, bin: usize) -> f64 {
        bin as f64 * f64::from(self.sample_rate_hz) / self.window_size as f64
    }
}

fn hann(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos())
        .collect()
}

pub fn stft(buffer: &AudioBuffer, window_size: usize, hop: usize) -> Result<Spectrogram> {
    if window_size < 64 || !window_size.is_power_of_two() {
        return Err(Error::Domain(format!(
            "window size must be a power of two >= 64, got {window_size}"
        )));
    }
    if hop == 0 || hop > window_size {
        return Err(Error::Domain(format!(
            "hop must be in 1..={window_size}, got {hop}"
        )));
    }
    if buffer.len() < window_size {
        return Err(Error::Domain(format!(
            "buffer of {} samples is shorter than the {window_size}-sample window",
            buffer.len()
        )));
    }
    let window = hann(window_size);
    let gain: f64 = window.iter().sum();
    let fft: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft_forward(window_size);
    let count = (buffer.len() - window_size) / hop + 1;
    let mut scratch = vec![Complex::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let mut data = vec![Complex::new(0.0, 0.0); window_size];
    let frames = (0..count)
        .map(|t| {
            let start = t * hop;
            for ((d, s), w) in data
                .iter_mut()
                .zip(&buffer.samples[start..start + window_size])
                .zip(&window)
            {
                *d = Complex::new(s * w, 0.0);
            }
            fft.process_with_scratch(&mut data, &mut scratch);
            data[..=window_size / 2]
                .iter()
                .map(|c| c.norm() / gain)
                .collect()
        })
        .collect();
    Ok(Spectrogram {
        frames,
        window_size,
        hop,
        sample_rate_hz: buffer.sample_rate_hz,
    })
}

/// Colour of an intensity in [0, 1].
pub fn heat_color(t: f64) -> [u8; 3] {
    let channel = |x: f64| (255.0 * x.clamp(0.0, 1.0)).round() as u8;
    [
        channel(3.0 * t),
        channel(3.0 * t - 1.0),
        channel(3.0 * t - 2.0),
    ]
}

fn ppm(width: usize, height: usize, pixel: impl Fn(usize, usize) -> [u8; 3]) -> Vec<u8> {
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.reserve(width * height * 3);
    for row in 0..height {
        for col in 0..width {
            out.extend_from_slice(&pixel(row, col));
        }
    }
    out
}

/// Renders a spectrogram as P6: one column per frame, one row per bin,
/// low frequencies at the bottom, levels in dB relative to the loudest bin
/// mapped from `[db_floor, 0]` onto the colour ramp.
pub fn render_spectrogram(spec: &Spectrogram, db_floor: f64) -> Result<Vec<u8>> {
    if !(db_floor < 0.0) || !db_floor.is_finite() {
        return Err(Error::Domain(format!(
            "dB floor must be negative, got {db_floor}"
        )));
    }
    if spec.frames.is_empty() || spec.frames[0].is_empty() {
        return Err(Error::Domain("empty spectrogram".into()));
    }
    let max = spec.frames.iter().flatten().fold(0.0f64, |m, &v| m.max(v));
    if !(max > 0.0) {
        return Err(Error::Domain("silent input".into()));
    }
    let bins = spec.frames[0].len();
    Ok(ppm(spec.frames.len(), bins, |row, col| {
        let magnitude = spec.frames[col][bins - 1 - row];
        let db = (20.0 * (magnitude / max).log10()).clamp(db_floor, 0.0);
        heat_color((db - db_floor) / -db_floor)
    }))
}

/// Renders per-symbol tone powers as P6: one column per symbol frame, one
/// row per character (space at the top), each column scaled to its
/// strongest tone. Silent frames stay dark.
pub fn render_tone_grid(
    buffer: &AudioBuffer,
    table: &FrequencyTable,
    params: &DecodeParams,
) -> Result<Vec<u8>> {
    let matrix = symbol_power_matrix(buffer, table, params)?;
    let columns: Vec<Vec<f64>> = matrix
        .into_iter()
        .map(|powers| {
            let max = powers.iter().fold(0.0f64, |m, &p| m.max(p));
            if max > 0.0 {
                powers.iter().map(|p| p / max).collect()
            } else {
                powers
            }
        })
        .collect();
    Ok(ppm(columns.len(), table.len(), |row, col| {
        heat_color(columns[col][row])
    }))
}

/// Throughput of the tone alphabet at a given framing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateReport {
    pub bits_per_symbol: f64,
    pub symbols_per_second: f64,
    pub bits_per_second: f64,
    pub speech_baseline_bps: f64,
    pub exceeds_speech: bool,
}

pub fn info_rate(params: &SynthParams, speech_baseline_bps: f64) -> Result<RateReport> {
    params.validate()?;
    if !(speech_baseline_bps > 0.0) || !speech_baseline_bps.is_finite() {
        return Err(Error::Domain(format!(
            "speech baseline must be positive, got {speech_baseline_bps}"
        )));
    }
    let bits_per_symbol = (ALPHABET_SIZE as f64).log2();
    let symbols_per_second = 1.0 / (params.symbol_duration_s + params.gap_duration_s);
    let bits_per_second = bits_per_symbol * symbols_per_second;
    Ok(RateReport {
        bits_per_symbol,
        symbols_per_second,
        bits_per_second,
        speech_baseline_bps,
        exceeds_speech: bits_per_second > speech_baseline_bps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decode::decode_audio;
    use crate::freqmap::build_table;
    use crate::synth::encode_text;
    use std::f64::consts::PI;

    fn sine(f: f64, n: usize, rate: u32, amp: f64) -> AudioBuffer {
        AudioBuffer::new(
            (0..n)
                .map(|k| amp * (2.0 * PI * f * k as f64 / f64::from(rate)).sin())
                .collect(),
            rate,
        )
    }

    fn pixels(img: &[u8]) -> (usize, usize, &[u8]) {
        let newlines: Vec<usize> = img
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == b'\n')
            .map(|(i, _)| i)
            .take(3)
            .collect();
        let dims = std::str::from_utf8(&img[newlines[0] + 1..newlines[1]]).unwrap();
        let (w, h) = dims.split_once(' ').unwrap();
        (
            w.parse().unwrap(),
            h.parse().unwrap(),
            &img[newlines[2] + 1..],
        )
    }

    #[test]
    fn frame_count_and_bins() {
        let buf = AudioBuffer::silence(192_000, 192_000);
        let spec = stft(&buf, 4096, 1024).unwrap();
        assert_eq!(spec.frames.len(), 184);
        assert_eq!(spec.frames[0].len(), 2049);
        assert!(spec.frames.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn base_tone_peaks_at_expected_bin() {
        let spec = stft(&sine(220.0, 48_000, 192_000, 0.8), 4096, 1024).unwrap();
        let expected = (220.0f64 * 4096.0 / 192_000.0).round() as usize;
        for frame in &spec.frames {
            let argmax = frame
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .unwrap()
                .0;
            assert_eq!(argmax, expected);
        }
    }

    #[test]
    fn bin_centred_peak_is_half_amplitude() {
        // Bin 100 of a 1024-point window at 48 kHz.
        let f = 100.0 * 48_000.0 / 1024.0;
        let spec = stft(&sine(f, 8192, 48_000, 1.0), 1024, 512).unwrap();
        for frame in &spec.frames {
            assert!((frame[100] - 0.5).abs() < 0.01);
        }
    }

    #[test]
    fn stft_preconditions() {
        let buf = AudioBuffer::silence(1000, 8000);
        assert!(stft(&buf, 100, 10).is_err());
        assert!(stft(&buf, 32, 8).is_err());
        assert!(stft(&buf, 256, 0).is_err());
        assert!(stft(&buf, 256, 257).is_err());
        assert!(stft(&buf, 2048, 256).is_err());
    }

    #[test]
    fn spectrogram_image() {
        let spec = stft(&sine(3000.0, 16_384, 48_000, 0.5), 256, 128).unwrap();
        let img = render_spectrogram(&spec, -80.0).unwrap();
        assert!(img.starts_with(b"P6\n127 129\n255\n"));
        let (w, h, px) = pixels(&img);
        assert_eq!(px.len(), w * h * 3);
        // Brightest row (sum of red+green+blue across the image width).
        let row_energy = |r: usize| -> u32 {
            px[r * w * 3..(r + 1) * w * 3]
                .iter()
                .map(|&b| u32::from(b))
                .sum()
        };
        let brightest = (0..h).max_by_key(|&r| row_energy(r)).unwrap();
        let bin = (3000.0f64 * 256.0 / 48_000.0).round() as usize;
        assert_eq!(brightest, h - 1 - bin);
        assert_eq!(img, render_spectrogram(&spec, -80.0).unwrap());
    }

    #[test]
    fn silent_spectrogram_is_rejected() {
        let spec = stft(&AudioBuffer::silence(512, 8000), 256, 256).unwrap();
        let err = render_spectrogram(&spec, -80.0).unwrap_err();
        assert!(err.to_string().contains("silent input"));
        let empty = Spectrogram {
            frames: vec![],
            window_size: 256,
            hop: 1,
            sample_rate_hz: 8000,
        };
        assert!(render_spectrogram(&empty, -80.0).is_err());
        assert!(render_spectrogram(&spec, 0.0).is_err());
    }

    fn brightest_rows(img: &[u8]) -> Vec<Option<usize>> {
        let (w, h, px) = pixels(img);
        (0..w)
            .map(|c| {
                let level = |r: usize| {
                    let i = (r * w + c) * 3;
                    u32::from(px[i]) + u32::from(px[i + 1]) + u32::from(px[i + 2])
                };
                let best = (0..h)
                    .max_by_key(|&r| (level(r), std::cmp::Reverse(r)))
                    .unwrap();
                (level(best) > 0).then_some(best)
            })
            .collect()
    }

    #[test]
    fn tone_grid_rows() {
        let table = build_table();
        let params = SynthParams::default();
        let decode = DecodeParams::default();
        let space = encode_text(" ", &table, &params).unwrap();
        let img = render_tone_grid(&space, &table, &decode).unwrap();
        assert!(img.starts_with(b"P6\n1 95\n255\n"));
        assert_eq!(brightest_rows(&img), [Some(0)]);

        let tilde = encode_text("~", &table, &params).unwrap();
        assert_eq!(
            brightest_rows(&render_tone_grid(&tilde, &table, &decode).unwrap()),
            [Some(94)]
        );

        let silence = AudioBuffer::silence(9600, 192_000);
        let img = render_tone_grid(&silence, &table, &decode).unwrap();
        let (_, _, px) = pixels(&img);
        assert!(px.iter().all(|&b| b == 0));
    }

    #[test]
    fn tone_grid_agrees_with_decoder() {
        let table = build_table();
        let text = "Grid 0K? ~{|}";
        let audio = encode_text(text, &table, &SynthParams::default()).unwrap();
        let decode = DecodeParams::default();
        let rows = brightest_rows(&render_tone_grid(&audio, &table, &decode).unwrap());
        let decoded = decode_audio(&audio, &table, &decode).unwrap();
        for (row, d) in rows.iter().zip(&decoded.detections) {
            let c = d.detected_char.unwrap();
            assert_eq!(row.unwrap(), c as usize - 32);
        }
    }

    #[test]
    fn rates() {
        let report = info_rate(&SynthParams::default(), 39.0).unwrap();
        assert!((report.symbols_per_second - 20.0).abs() < 1e-12);
        assert!((report.bits_per_second - 131.40).abs() <= 0.01);
        assert!((report.bits_per_symbol - 6.5699).abs() < 1e-4);
        assert!(report.exceeds_speech);

        let slow = SynthParams {
            symbol_duration_s: 0.9,
            gap_duration_s: 0.1,
            fade_duration_s: 0.0,
            ..SynthParams::default()
        };
        let report = info_rate(&slow, 39.0).unwrap();
        assert!((report.bits_per_second - 95f64.log2()).abs() < 1e-12);
        assert!(!report.exceeds_speech);
        assert!(info_rate(&slow, 0.0).is_err());
    }

    #[test]
    fn rate_scales_inversely_with_frame() {
        let base = info_rate(&SynthParams::default(), 39.0).unwrap();
        let doubled = SynthParams {
            symbol_duration_s: 0.080,
            gap_duration_s: 0.020,
            ..SynthParams::default()
        };
        let half = info_rate(&doubled, 39.0).unwrap();
        assert!((base.bits_per_second / half.bits_per_second - 2.0).abs() < 1e-12);
    }
}

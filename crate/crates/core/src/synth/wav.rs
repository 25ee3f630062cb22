//! Mono 16-bit PCM RIFF/WAVE reading and writing.

use std::io::{Read, Write};

use super::AudioBuffer;
use crate::error::{Error, Result};

/// Size of the canonical header written by [`write_wav`].
pub const WAV_HEADER_LEN: usize = 44;

const FORMAT_PCM: u16 = 1;
const BITS_PER_SAMPLE: u16 = 16;
const BLOCK_ALIGN: u16 = BITS_PER_SAMPLE / 8;

fn quantize(sample: f64) -> i16 {
    (sample * 32767.0).round().clamp(-32768.0, 32767.0) as i16
}

fn dequantize(sample: i16) -> f64 {
    f64::from(sample) / 32768.0
}

/// Writes `buffer` as a 44-byte-header mono 16-bit PCM WAV file and returns
/// the number of bytes written.
pub fn write_wav<W: Write>(buffer: &AudioBuffer, mut sink: W) -> Result<usize> {
    let data_len = u32::try_from(buffer.len() * usize::from(BLOCK_ALIGN))
        .ok()
        .filter(|len| *len <= u32::MAX - 36)
        .ok_or_else(|| Error::Domain("buffer too long for a RIFF file".into()))?;
    let byte_rate = buffer.sample_rate_hz * u32::from(BLOCK_ALIGN);

    let mut bytes = Vec::with_capacity(WAV_HEADER_LEN + data_len as usize);
    bytes.extend_from_slice(b"RIFF");
    bytes.extend_from_slice(&(36 + data_len).to_le_bytes());
    bytes.extend_from_slice(b"WAVE");
    bytes.extend_from_slice(b"fmt ");
    bytes.extend_from_slice(&16u32.to_le_bytes());
    bytes.extend_from_slice(&FORMAT_PCM.to_le_bytes());
    bytes.extend_from_slice(&1u16.to_le_bytes());
    bytes.extend_from_slice(&buffer.sample_rate_hz.to_le_bytes());
    bytes.extend_from_slice(&byte_rate.to_le_bytes());
    bytes.extend_from_slice(&BLOCK_ALIGN.to_le_bytes());
    bytes.extend_from_slice(&BITS_PER_SAMPLE.to_le_bytes());
    bytes.extend_from_slice(b"data");
    bytes.extend_from_slice(&data_len.to_le_bytes());
    for &s in &buffer.samples {
        bytes.extend_from_slice(&quantize(s).to_le_bytes());
    }
    sink.write_all(&bytes)?;
    sink.flush()?;
    Ok(bytes.len())
}

struct Format {
    tag: u16,
    channels: u16,
    sample_rate_hz: u32,
    bits_per_sample: u16,
}

fn u16_at(bytes: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([bytes[at], bytes[at + 1]])
}

fn u32_at(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([bytes[at], bytes[at + 1], bytes[at + 2], bytes[at + 3]])
}

/// Reads a mono 16-bit PCM WAV stream. Chunks other than `fmt ` and `data`
/// are skipped.
pub fn read_wav<R: Read>(mut source: R) -> Result<AudioBuffer> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;

    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" {
        return Err(Error::Format("riff: missing RIFF signature".into()));
    }
    if &bytes[8..12] != b"WAVE" {
        return Err(Error::Format("wave: missing WAVE form type".into()));
    }

    let mut format: Option<Format> = None;
    let mut pos = 12;
    loop {
        if pos + 8 > bytes.len() {
            return Err(Error::Format("data: no data chunk found".into()));
        }
        let id = &bytes[pos..pos + 4];
        let size = u32_at(&bytes, pos + 4) as usize;
        let body = pos + 8;
        match id {
            b"fmt " => {
                if size < 16 || body + 16 > bytes.len() {
                    return Err(Error::Format(format!("fmt: chunk size {size} too small")));
                }
                format = Some(Format {
                    tag: u16_at(&bytes, body),
                    channels: u16_at(&bytes, body + 2),
                    sample_rate_hz: u32_at(&bytes, body + 4),
                    bits_per_sample: u16_at(&bytes, body + 14),
                });
            }
            b"data" => {
                let format =
                    format.ok_or_else(|| Error::Format("fmt: data chunk before fmt".into()))?;
                if format.tag != FORMAT_PCM {
                    return Err(Error::Format(format!("format_tag={}", format.tag)));
                }
                if format.channels != 1 {
                    return Err(Error::Format(format!("channels={}", format.channels)));
                }
                if format.bits_per_sample != BITS_PER_SAMPLE {
                    return Err(Error::Format(format!(
                        "bits_per_sample={}",
                        format.bits_per_sample
                    )));
                }
                if format.sample_rate_hz == 0 {
                    return Err(Error::Format("sample_rate=0".into()));
                }
                if size % 2 != 0 {
                    return Err(Error::Format(format!("data: odd size {size}")));
                }
                if body + size > bytes.len() {
                    return Err(Error::Format(format!(
                        "data: truncated, header declares {size} bytes but {} present",
                        bytes.len() - body
                    )));
                }
                let samples = bytes[body..body + size]
                    .chunks_exact(2)
                    .map(|pair| dequantize(i16::from_le_bytes([pair[0], pair[1]])))
                    .collect();
                return Ok(AudioBuffer::new(samples, format.sample_rate_hz));
            }
            _ => {}
        }
        // Chunks are padded to even length.
        pos = body + size + (size & 1);
    }
}

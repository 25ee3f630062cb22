//! Semitone tone codec for printable ASCII.
//!
//! Each character from space (32) to tilde (126) is a sine tone one equal
//! tempered semitone above the previous one, starting at 220 Hz. The crate
//! synthesizes text into tones, decodes tones back to text with a Goertzel
//! filter bank, archives tone sequences as ABC notation, simulates a noisy
//! band-limited channel, and renders spectrograms and tone grids.
//!
//! ```
//! use tonal_core::{build_table, decode_audio, encode_text, DecodeParams, SynthParams};
//!
//! let table = build_table();
//! let audio = encode_text("HELLO", &table, &SynthParams::default()).unwrap();
//! let result = decode_audio(&audio, &table, &DecodeParams::default()).unwrap();
//! assert_eq!(result.text, "HELLO");
//! ```

// Parameter checks use `!(x > 0.0)` on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod abc;
pub mod analysis;
pub mod channel;
pub mod decode;
pub mod error;
pub mod freqmap;
pub mod selftest;
pub mod synth;

pub use abc::{parse_abc, to_abc, AbcDocument, AbcNote};
pub use analysis::{
    info_rate, render_spectrogram, render_tone_grid, stft, RateReport, Spectrogram,
};
pub use channel::{
    apply_awgn, apply_channel, apply_lowpass, measure_ser, ChannelConfig, SerReport,
};
pub use decode::{
    decode_audio, detect_symbol, goertzel_power, DecodeParams, DecodeResult, DetectionStatus,
    SymbolDetection,
};
pub use error::{Error, Result};
pub use freqmap::{
    build_table, frequency_of, nearest_char, note_name, octave_span, CharTone, FrequencyTable,
};
pub use selftest::{run_selftest, CheckOutcome};
pub use synth::{encode_text, read_wav, synth_symbol, write_wav, AudioBuffer, SynthParams};

use std::io;

/// Errors produced by the codec.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An ASCII code outside the printable range 32..=126.
    #[error("ascii code {0} outside the printable range 32..=126")]
    CodeOutOfRange(i64),

    /// A character in the input text has no tone.
    #[error("cannot encode character at index {index}: code point U+{code_point:04X}")]
    Unmappable { index: usize, code_point: u32 },

    /// A tone at or above the Nyquist frequency of the sample rate.
    #[error(
        "aliasing: {frequency_hz:.2} Hz is not below Nyquist for sample rate {sample_rate_hz} Hz"
    )]
    Aliasing {
        frequency_hz: f64,
        sample_rate_hz: u32,
    },

    /// Invalid synthesis, decoding or channel parameters.
    #[error("configuration error: {0}")]
    Config(String),

    /// Malformed WAV input; the message names the violated field.
    #[error("wav format error: {0}")]
    Format(String),

    /// Malformed ABC body.
    #[error("abc parse error at line {line}, column {column}: unexpected token {token:?}")]
    AbcParse {
        line: usize,
        column: usize,
        token: String,
    },

    /// ABC pitch outside the 95-tone alphabet.
    #[error("abc pitch {token:?} maps to semitone {semitone}, outside 0..=94")]
    AbcRange { token: String, semitone: i64 },

    /// Sent and received sequences have different lengths.
    #[error("alignment error: sent {sent} symbols, received {received}")]
    Alignment { sent: usize, received: usize },

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

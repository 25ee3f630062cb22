use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "tonal",
    version,
    about = "Encode text as semitone tones and decode it back"
)]
#[command(propagate_version = true, arg_required_else_help = true)]
pub struct Cli {
    /// key = value file with default flag values
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the character/frequency table as CSV
    Table,
    /// Synthesize text into a WAV file
    Encode(EncodeArgs),
    /// Decode a WAV file back into text
    Decode(DecodeArgs),
    /// Export or import ABC notation
    #[command(subcommand)]
    Abc(AbcCommand),
    /// Pass a WAV file through a simulated channel
    Channel(ChannelArgs),
    /// Encode, transmit and decode in one go, then report the symbol error rate
    Chirp(ChirpArgs),
    /// Render an STFT spectrogram as a PPM image
    Spectrogram(SpectrogramArgs),
    /// Render the per-symbol tone grid as a PPM image
    Grid(GridArgs),
    /// Report the information rate of a framing
    Rate(RateArgs),
    /// Run the built-in consistency checks
    Selftest(SelftestArgs),
}

#[derive(Debug, Args, Default)]
pub struct FramingArgs {
    /// Tone duration in milliseconds
    #[arg(long)]
    pub symbol_ms: Option<f64>,
    /// Silence between tones in milliseconds
    #[arg(long)]
    pub gap_ms: Option<f64>,
    /// Raised-cosine fade length in milliseconds
    #[arg(long)]
    pub fade_ms: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct SignalArgs {
    /// Sample rate in Hz
    #[arg(long)]
    pub rate: Option<u32>,
    /// Peak amplitude, 0 < A <= 1
    #[arg(long)]
    pub amp: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct ChannelFlags {
    /// Add white Gaussian noise at this SNR
    #[arg(long, allow_negative_numbers = true)]
    pub snr_db: Option<f64>,
    /// Low-pass cutoff in Hz
    #[arg(long)]
    pub lowpass_hz: Option<f64>,
    /// Linear gain applied first
    #[arg(long, allow_negative_numbers = true)]
    pub gain: Option<f64>,
    /// Noise seed
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false, args = ["text", "infile"])]
pub struct EncodeArgs {
    /// Text to encode
    #[arg(long)]
    pub text: Option<String>,
    /// Read the text from a file (one trailing newline is dropped)
    #[arg(long, value_name = "PATH")]
    pub infile: Option<PathBuf>,
    /// Output WAV file
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    #[command(flatten)]
    pub signal: SignalArgs,
    #[command(flatten)]
    pub framing: FramingArgs,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    /// Input WAV file
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    #[command(flatten)]
    pub framing: FramingArgs,
    /// Minimum best/second power ratio for a detection
    #[arg(long)]
    pub min_confidence: Option<f64>,
    /// Write a per-symbol CSV report
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum AbcCommand {
    /// Write text as an ABC tune
    Export(AbcExportArgs),
    /// Print the text carried by an ABC tune
    Import(AbcImportArgs),
}

#[derive(Debug, Args)]
pub struct AbcExportArgs {
    #[arg(long)]
    pub text: String,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    #[command(flatten)]
    pub framing: FramingArgs,
}

#[derive(Debug, Args)]
pub struct AbcImportArgs {
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct ChannelArgs {
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    #[command(flatten)]
    pub channel: ChannelFlags,
}

#[derive(Debug, Args)]
pub struct ChirpArgs {
    #[arg(long)]
    pub text: String,
    #[command(flatten)]
    pub channel: ChannelFlags,
    #[command(flatten)]
    pub signal: SignalArgs,
    #[command(flatten)]
    pub framing: FramingArgs,
}

#[derive(Debug, Args)]
pub struct SpectrogramArgs {
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    /// STFT window length in samples
    #[arg(long)]
    pub window: Option<usize>,
    /// STFT hop in samples
    #[arg(long)]
    pub hop: Option<usize>,
    /// Darkest level in dB relative to the peak
    #[arg(long, allow_negative_numbers = true)]
    pub db_floor: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    #[command(flatten)]
    pub framing: FramingArgs,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[arg(long)]
    pub symbol_ms: Option<f64>,
    #[arg(long)]
    pub gap_ms: Option<f64>,
    /// Reference speech throughput in bits/s
    #[arg(long)]
    pub baseline_bps: Option<f64>,
    /// Also write the report as CSV
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Reference table CSV with `ascii` and `frequency_hz` columns
    /// (defaults to the embedded table)
    #[arg(long, value_name = "PATH")]
    pub fixture: Option<PathBuf>,
}

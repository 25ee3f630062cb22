use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use tonal_core::analysis::{
    DEFAULT_DB_FLOOR, DEFAULT_HOP, DEFAULT_SPEECH_BASELINE_BPS, DEFAULT_WINDOW,
};
use tonal_core::channel::DEFAULT_FIR_TAPS;
use tonal_core::freqmap::GOLDEN_FREQUENCIES;
use tonal_core::{
    apply_channel, build_table, decode_audio, encode_text, info_rate, measure_ser, parse_abc,
    read_wav, render_spectrogram, render_tone_grid, run_selftest, stft, to_abc, write_wav,
    AudioBuffer, ChannelConfig, DecodeParams, SynthParams,
};

use crate::args::*;
use crate::config::ConfigFile;
use crate::error::{CliError, CliResult};

pub fn run(command: Command, cfg: &ConfigFile) -> CliResult<()> {
    match command {
        Command::Table => table(),
        Command::Encode(a) => encode(a, cfg),
        Command::Decode(a) => decode(a, cfg),
        Command::Abc(AbcCommand::Export(a)) => abc_export(a, cfg),
        Command::Abc(AbcCommand::Import(a)) => abc_import(a),
        Command::Channel(a) => channel(a, cfg),
        Command::Chirp(a) => chirp(a, cfg),
        Command::Spectrogram(a) => spectrogram(a, cfg),
        Command::Grid(a) => grid(a, cfg),
        Command::Rate(a) => rate(a, cfg),
        Command::Selftest(a) => selftest(a),
    }
}

fn synth_params(
    cfg: &ConfigFile,
    signal: &SignalArgs,
    framing: &FramingArgs,
) -> CliResult<SynthParams> {
    let d = SynthParams::default();
    let params = SynthParams {
        sample_rate_hz: cfg.resolve(signal.rate, "rate", d.sample_rate_hz)?,
        symbol_duration_s: cfg.resolve(
            framing.symbol_ms,
            "symbol-ms",
            d.symbol_duration_s * 1e3,
        )? / 1e3,
        gap_duration_s: cfg.resolve(framing.gap_ms, "gap-ms", d.gap_duration_s * 1e3)? / 1e3,
        fade_duration_s: cfg.resolve(framing.fade_ms, "fade-ms", d.fade_duration_s * 1e3)? / 1e3,
        amplitude: cfg.resolve(signal.amp, "amp", d.amplitude)?,
    };
    params.validate()?;
    Ok(params)
}

fn decode_params(
    cfg: &ConfigFile,
    framing: &FramingArgs,
    min_confidence: Option<f64>,
) -> CliResult<DecodeParams> {
    let synth = synth_params(cfg, &SignalArgs::default(), framing)?;
    let mut params = DecodeParams::from_synth(&synth);
    params.min_confidence = cfg.resolve(min_confidence, "min-confidence", params.min_confidence)?;
    params.validate()?;
    Ok(params)
}

fn channel_config(cfg: &ConfigFile, flags: &ChannelFlags) -> CliResult<ChannelConfig> {
    Ok(ChannelConfig {
        snr_db: cfg.resolve_opt(flags.snr_db, "snr-db")?,
        lowpass_cutoff_hz: cfg.resolve_opt(flags.lowpass_hz, "lowpass-hz")?,
        gain: cfg.resolve(flags.gain, "gain", 1.0)?,
        seed: cfg.resolve(flags.seed, "seed", 0)?,
        fir_taps: DEFAULT_FIR_TAPS,
    })
}

fn load_wav(path: &Path) -> CliResult<AudioBuffer> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    read_wav(BufReader::new(file)).map_err(|e| match e {
        tonal_core::Error::Io(source) => CliError::io(path, source),
        tonal_core::Error::Format(msg) => CliError::Data(format!("{}: {msg}", path.display())),
        other => other.into(),
    })
}

fn save_wav(path: &Path, buffer: &AudioBuffer) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut sink = BufWriter::new(file);
    write_wav(buffer, &mut sink).map_err(|e| match e {
        tonal_core::Error::Io(source) => CliError::io(path, source),
        other => other.into(),
    })?;
    sink.flush().map_err(|e| CliError::io(path, e))?;
    eprintln!(
        "wrote {} ({} samples, {:.3} s at {} Hz)",
        path.display(),
        buffer.len(),
        buffer.duration_s(),
        buffer.sample_rate_hz
    );
    Ok(())
}

fn save_bytes(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))?;
    eprintln!("wrote {} ({} bytes)", path.display(), bytes.len());
    Ok(())
}

fn read_text(path: &Path) -> CliResult<String> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let mut text = String::from_utf8(bytes)
        .map_err(|_| CliError::Data(format!("{}: not valid UTF-8", path.display())))?;
    if text.ends_with('\n') {
        text.pop();
        if text.ends_with('\r') {
            text.pop();
        }
    }
    Ok(text)
}

fn table() -> CliResult<()> {
    let mut out = csv::Writer::from_writer(io::stdout().lock());
    out.write_record([
        "ascii",
        "char",
        "semitone",
        "frequency_hz",
        "note",
        "ultrasonic",
    ])?;
    for e in build_table().entries() {
        out.write_record([
            e.ascii_code.to_string(),
            e.character.to_string(),
            e.semitone_index.to_string(),
            format!("{:.2}", e.frequency_hz),
            e.note_name.clone(),
            e.ultrasonic.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

fn encode(a: EncodeArgs, cfg: &ConfigFile) -> CliResult<()> {
    let params = synth_params(cfg, &a.signal, &a.framing)?;
    let text = match (&a.text, &a.infile) {
        (Some(t), _) => t.clone(),
        (None, Some(path)) => read_text(path)?,
        (None, None) => {
            return Err(CliError::Usage(
                "one of --text or --infile is required".into(),
            ))
        }
    };
    let audio = encode_text(&text, &build_table(), &params)?;
    save_wav(&a.out, &audio)
}

fn decode(a: DecodeArgs, cfg: &ConfigFile) -> CliResult<()> {
    let params = decode_params(cfg, &a.framing, a.min_confidence)?;
    let audio = load_wav(&a.input)?;
    let result = decode_audio(&audio, &build_table(), &params)?;

    if let Some(path) = &a.report {
        let file = File::create(path).map_err(|e| CliError::io(path, e))?;
        let mut report = csv::Writer::from_writer(BufWriter::new(file));
        report.write_record([
            "index",
            "char",
            "freq_hz",
            "power",
            "confidence",
            "cents_error",
        ])?;
        for d in &result.detections {
            report.write_record([
                d.index.to_string(),
                d.display_char().to_string(),
                format!("{:.2}", d.target_frequency_hz),
                format!("{:.6e}", d.power),
                format!("{:.4}", d.confidence),
                format!("{:.2}", d.cents_error),
            ])?;
        }
        report.flush().map_err(|e| CliError::io(path, e))?;
    }

    println!("{}", result.text);
    eprintln!(
        "decoded {} symbols, {} failed",
        result.symbol_count, result.failed_count
    );
    Ok(())
}

fn abc_export(a: AbcExportArgs, cfg: &ConfigFile) -> CliResult<()> {
    let params = synth_params(cfg, &SignalArgs::default(), &a.framing)?;
    let doc = to_abc(&a.text, &params)?;
    save_bytes(&a.out, doc.as_bytes())
}

fn abc_import(a: AbcImportArgs) -> CliResult<()> {
    let doc = read_text(&a.input)?;
    let text =
        parse_abc(&doc).map_err(|e| CliError::Data(format!("{}: {e}", a.input.display())))?;
    println!("{text}");
    Ok(())
}

fn channel(a: ChannelArgs, cfg: &ConfigFile) -> CliResult<()> {
    let config = channel_config(cfg, &a.channel)?;
    let audio = load_wav(&a.input)?;
    let heard = apply_channel(&audio, &config)?;
    save_wav(&a.out, &heard)
}

fn chirp(a: ChirpArgs, cfg: &ConfigFile) -> CliResult<()> {
    let params = synth_params(cfg, &a.signal, &a.framing)?;
    let config = channel_config(cfg, &a.channel)?;
    let table = build_table();
    let audio = encode_text(&a.text, &table, &params)?;
    let heard = apply_channel(&audio, &config)?;
    let result = decode_audio(&heard, &table, &DecodeParams::from_synth(&params))?;
    let report = measure_ser(&a.text, &result)?;
    println!("sent:     {}", a.text);
    println!("received: {}", result.text);
    println!(
        "ser:      {:.4} ({} of {} symbols)",
        report.ser, report.errors, report.total
    );
    Ok(())
}

fn spectrogram(a: SpectrogramArgs, cfg: &ConfigFile) -> CliResult<()> {
    let window = cfg.resolve(a.window, "window", DEFAULT_WINDOW)?;
    let hop = cfg.resolve(a.hop, "hop", DEFAULT_HOP)?;
    let db_floor = cfg.resolve(a.db_floor, "db-floor", DEFAULT_DB_FLOOR)?;
    let audio = load_wav(&a.input)?;
    let image = render_spectrogram(&stft(&audio, window, hop)?, db_floor)?;
    save_bytes(&a.out, &image)
}

fn grid(a: GridArgs, cfg: &ConfigFile) -> CliResult<()> {
    let params = decode_params(cfg, &a.framing, None)?;
    let audio = load_wav(&a.input)?;
    let image = render_tone_grid(&audio, &build_table(), &params)?;
    save_bytes(&a.out, &image)
}

fn rate(a: RateArgs, cfg: &ConfigFile) -> CliResult<()> {
    let framing = FramingArgs {
        symbol_ms: a.symbol_ms,
        gap_ms: a.gap_ms,
        fade_ms: None,
    };
    let params = synth_params(cfg, &SignalArgs::default(), &framing)?;
    let baseline = cfg.resolve(a.baseline_bps, "baseline-bps", DEFAULT_SPEECH_BASELINE_BPS)?;
    let r = info_rate(&params, baseline)?;

    let rows = [
        ("bits_per_symbol", format!("{:.4}", r.bits_per_symbol)),
        ("symbols_per_second", format!("{:.4}", r.symbols_per_second)),
        ("bits_per_second", format!("{:.2}", r.bits_per_second)),
        (
            "speech_baseline_bps",
            format!("{:.2}", r.speech_baseline_bps),
        ),
        ("exceeds_speech", r.exceeds_speech.to_string()),
    ];
    let mut out = io::stdout().lock();
    for (name, value) in &rows {
        writeln!(out, "{name:<20} {value:>10}")?;
    }

    if let Some(path) = &a.csv {
        let file = File::create(path).map_err(|e| CliError::io(path, e))?;
        let mut w = csv::Writer::from_writer(BufWriter::new(file));
        w.write_record(rows.iter().map(|(name, _)| *name))?;
        w.write_record(rows.iter().map(|(_, value)| value.as_str()))?;
        w.flush().map_err(|e| CliError::io(path, e))?;
    }
    Ok(())
}

fn load_fixture(path: &Path) -> CliResult<Vec<(u8, f64)>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::Reader::from_reader(BufReader::new(file));
    let bad = |msg: String| CliError::Data(format!("{}: {msg}", path.display()));
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| bad(format!("missing column {name:?}")))
    };
    let (ascii_col, freq_col) = (column("ascii")?, column("frequency_hz")?);
    let mut fixture = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or("").trim().to_string();
        let ascii = field(ascii_col)
            .parse()
            .map_err(|_| bad(format!("row {}: bad ascii code", row + 1)))?;
        let freq = field(freq_col)
            .parse()
            .map_err(|_| bad(format!("row {}: bad frequency", row + 1)))?;
        fixture.push((ascii, freq));
    }
    Ok(fixture)
}

fn selftest(a: SelftestArgs) -> CliResult<()> {
    let fixture = match &a.fixture {
        Some(path) => load_fixture(path)?,
        None => GOLDEN_FREQUENCIES.to_vec(),
    };
    let outcomes = run_selftest(&fixture);
    let mut out = io::stdout().lock();
    for o in &outcomes {
        writeln!(out, "{o}")?;
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::SelftestFailed {
            failed,
            total: outcomes.len(),
        })
    }
}

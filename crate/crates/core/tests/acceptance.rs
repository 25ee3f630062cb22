//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tonal_core::abc::parse_notes;
use tonal_core::analysis::{
    render_spectrogram, render_tone_grid, stft, DEFAULT_SPEECH_BASELINE_BPS,
};
use tonal_core::channel::{
    apply_channel, lowpass_taps, measure_ser, ChannelConfig, DEFAULT_FIR_TAPS,
};
use tonal_core::freqmap::GOLDEN_FREQUENCIES;
use tonal_core::{
    build_table, decode_audio, encode_text, goertzel_power, info_rate, octave_span, parse_abc,
    to_abc, write_wav, DecodeParams, FrequencyTable, SynthParams,
};

type Outcome = Result<String, String>;
type Artifacts = (Vec<u8>, Vec<u8>, Vec<u8>);
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_text(rng: &mut ChaCha8Rng, max_len: usize) -> String {
    let len = rng.random_range(1..=max_len);
    (0..len)
        .map(|_| char::from(rng.random_range(32u8..=126)))
        .collect()
}

fn alphabet(table: &FrequencyTable) -> String {
    table.entries().iter().map(|e| e.character).collect()
}

fn round_trip(text: &str, table: &FrequencyTable) -> Result<(), String> {
    let params = SynthParams::default();
    let audio = encode_text(text, table, &params).map_err(|e| e.to_string())?;
    let result = decode_audio(&audio, table, &DecodeParams::from_synth(&params))
        .map_err(|e| e.to_string())?;
    ensure(result.text == text && result.failed_count == 0, || {
        format!(
            "{text:?} decoded as {:?} with {} failures",
            result.text, result.failed_count
        )
    })
}

fn golden_table() -> Outcome {
    let table = build_table();
    let mut worst: f64 = 0.0;
    for &(code, expected) in &GOLDEN_FREQUENCIES {
        let actual = table
            .by_char(char::from(code))
            .ok_or(format!("no entry for {code}"))?
            .frequency_hz;
        let diff = (actual - expected).abs();
        worst = worst.max(diff);
        ensure(diff <= 0.01, || {
            format!("ascii {code}: {actual:.4} Hz vs {expected:.2} Hz")
        })?;
    }
    ensure(GOLDEN_FREQUENCIES.len() == 95 && table.len() == 95, || {
        "table size is not 95".into()
    })?;
    for (c, anchor) in [
        (' ', 220.00),
        (',', 440.00),
        ('A', 1479.98),
        ('a', 9397.27),
        ('~', 50175.42),
    ] {
        let f = table.by_char(c).unwrap().frequency_hz;
        ensure((f - anchor).abs() <= 0.01, || format!("anchor {c:?}: {f}"))?;
    }
    Ok(format!(
        "95/95 within 0.01 Hz (max deviation {worst:.4} Hz)"
    ))
}

fn octave_span_check() -> Outcome {
    let span = octave_span(&build_table());
    ensure((span - 7.8333).abs() <= 0.0005, || format!("span {span}"))?;
    Ok(format!("{span:.4} octaves"))
}

fn exhaustive_round_trip() -> Outcome {
    let table = build_table();
    for entry in table.entries() {
        round_trip(&entry.character.to_string(), &table)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0003);
    let mut symbols = 0;
    for _ in 0..200 {
        let text = random_text(&mut rng, 128);
        symbols += text.len();
        round_trip(&text, &table)?;
    }
    Ok(format!(
        "95 single characters and 200 random strings ({symbols} symbols) recovered"
    ))
}

fn ultrasonic_partition() -> Outcome {
    let table = build_table();
    let params = SynthParams::default();
    let config = ChannelConfig::audible();
    let cutoff = config.lowpass_cutoff_hz.unwrap();

    // Stopband of the channel filter, one octave above cutoff to Nyquist.
    let taps =
        lowpass_taps(cutoff, DEFAULT_FIR_TAPS, params.sample_rate_hz).map_err(|e| e.to_string())?;
    let rate = f64::from(params.sample_rate_hz);
    let worst_db = (0..=2000)
        .map(|i| 2.0 * cutoff + (rate / 2.0 - 2.0 * cutoff) * f64::from(i) / 2000.0)
        .map(|f| {
            let (mut re, mut im) = (0.0, 0.0);
            for (k, h) in taps.iter().enumerate() {
                let ph = -2.0 * PI * f * k as f64 / rate;
                re += h * ph.cos();
                im += h * ph.sin();
            }
            10.0 * (re * re + im * im).log10()
        })
        .fold(f64::NEG_INFINITY, f64::max);
    ensure(worst_db <= -50.0, || {
        format!("stopband only {worst_db:.1} dB")
    })?;

    let text = alphabet(&table);
    let audio = encode_text(&text, &table, &params).map_err(|e| e.to_string())?;
    let heard = apply_channel(&audio, &config).map_err(|e| e.to_string())?;
    let result = decode_audio(&heard, &table, &DecodeParams::from_synth(&params))
        .map_err(|e| e.to_string())?;
    let failed: Vec<u8> = text
        .bytes()
        .zip(&result.detections)
        .filter(|(c, d)| d.detected_char != Some(char::from(*c)))
        .map(|(c, _)| c)
        .collect();
    ensure(failed == (111..=126).collect::<Vec<u8>>(), || {
        format!("failed set {failed:?}")
    })?;
    Ok(format!(
        "ascii 32..=110 decoded, 111..=126 lost (stopband {worst_db:.1} dB)"
    ))
}

fn information_rate() -> Outcome {
    let params = SynthParams {
        symbol_duration_s: 0.040,
        gap_duration_s: 0.010,
        ..SynthParams::default()
    };
    let report = info_rate(&params, DEFAULT_SPEECH_BASELINE_BPS).map_err(|e| e.to_string())?;
    ensure((report.bits_per_second - 131.40).abs() <= 0.01, || {
        format!("{} bits/s", report.bits_per_second)
    })?;
    ensure(report.exceeds_speech, || "does not exceed baseline".into())?;
    Ok(format!(
        "{:.2} bits/s > {} bits/s baseline",
        report.bits_per_second, report.speech_baseline_bps
    ))
}

fn goertzel_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0006);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let rate: u32 = [8_000, 44_100, 48_000, 96_000, 192_000][rng.random_range(0..5)];
        let n = rng.random_range(8..8_000);
        let segment: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let target = rng.random_range(0.0..f64::from(rate) / 2.0);
        let fast = goertzel_power(&segment, rate, target).map_err(|e| e.to_string())?;
        let (mut re, mut im) = (0.0, 0.0);
        for (k, &x) in segment.iter().enumerate() {
            let ph = -2.0 * PI * target * k as f64 / f64::from(rate);
            re += x * ph.cos();
            im += x * ph.sin();
        }
        let direct = (re * re + im * im) / (n as f64).powi(2);
        let rel = ((fast - direct) / direct).abs();
        worst = worst.max(rel);
        ensure(rel <= 1e-6, || {
            format!("n={n} rate={rate} f={target}: {fast} vs {direct}")
        })?;
    }
    Ok(format!("100 segments, max relative error {worst:.2e}"))
}

fn abc_round_trip() -> Outcome {
    let table = build_table();
    let params = SynthParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0007);
    let mut texts = vec![alphabet(&table)];
    texts.extend((0..200).map(|_| random_text(&mut rng, 128)));
    for text in &texts {
        let doc = to_abc(text, &params).map_err(|e| e.to_string())?;
        let back = parse_abc(&doc).map_err(|e| e.to_string())?;
        ensure(&back == text, || format!("{text:?} came back as {back:?}"))?;
        for token in doc.lines().skip(5).flat_map(str::split_whitespace) {
            ensure(!token.contains('_') && !token.contains('='), || {
                format!("non-sharp accidental in {token:?}")
            })?;
            let note = parse_notes(token).map_err(|e| e.to_string())?;
            ensure(note.len() == 1 && note[0].to_string() == token, || {
                format!("non-canonical token {token:?}")
            })?;
        }
    }
    Ok("alphabet and 200 random strings, sharps only, canonical octaves".into())
}

fn noise_degradation() -> Outcome {
    let table = build_table();
    let params = SynthParams::default();
    let decode = DecodeParams::from_synth(&params);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0008);
    let text: String = (0..500)
        .map(|_| char::from(rng.random_range(32u8..=126)))
        .collect();
    let audio = encode_text(&text, &table, &params).map_err(|e| e.to_string())?;

    let mut sers = Vec::new();
    for snr in [Some(0.0), Some(6.0), Some(12.0), Some(24.0), None] {
        let config = ChannelConfig {
            snr_db: snr,
            seed: 8,
            ..ChannelConfig::default()
        };
        let heard = apply_channel(&audio, &config).map_err(|e| e.to_string())?;
        let result = decode_audio(&heard, &table, &decode).map_err(|e| e.to_string())?;
        let report = measure_ser(&text, &result).map_err(|e| e.to_string())?;
        sers.push(report.ser);
    }
    ensure(sers[4] == 0.0, || {
        format!("SER at infinite SNR is {}", sers[4])
    })?;
    ensure(sers.windows(2).all(|w| w[1] <= w[0]), || {
        format!("SER not monotone: {sers:?}")
    })?;
    ensure(sers[3] <= 0.01, || format!("SER at 24 dB is {}", sers[3]))?;
    Ok(format!(
        "SER at 0/6/12/24/inf dB = {:.3}/{:.3}/{:.3}/{:.3}/{:.3}",
        sers[0], sers[1], sers[2], sers[3], sers[4]
    ))
}

fn u32_at(b: &[u8], i: usize) -> u32 {
    u32::from_le_bytes(b[i..i + 4].try_into().unwrap())
}

fn u16_at(b: &[u8], i: usize) -> u16 {
    u16::from_le_bytes(b[i..i + 2].try_into().unwrap())
}

fn bit_exact_artifacts() -> Outcome {
    let table = build_table();
    let params = SynthParams::default();
    let config = ChannelConfig {
        snr_db: Some(12.0),
        seed: 99,
        ..ChannelConfig::audible()
    };
    let render = || -> Result<Artifacts, String> {
        let audio = encode_text("Bit exact ~", &table, &params).map_err(|e| e.to_string())?;
        let heard = apply_channel(&audio, &config).map_err(|e| e.to_string())?;
        let mut wav = Vec::new();
        write_wav(&heard, &mut wav).map_err(|e| e.to_string())?;
        let spec = stft(&heard, 4096, 1024).map_err(|e| e.to_string())?;
        let spectrogram = render_spectrogram(&spec, -80.0).map_err(|e| e.to_string())?;
        let grid = render_tone_grid(&heard, &table, &DecodeParams::from_synth(&params))
            .map_err(|e| e.to_string())?;
        Ok((wav, spectrogram, grid))
    };
    let first = render()?;
    let second = render()?;
    ensure(first == second, || "repeated runs differ".into())?;

    let (wav, spectrogram, grid) = first;
    let samples = 11 * (params.symbol_samples() + params.gap_samples());
    let data_len = (samples * 2) as u32;
    ensure(
        &wav[0..4] == b"RIFF" && &wav[8..16] == b"WAVEfmt " && &wav[36..40] == b"data",
        || "chunk ids".into(),
    )?;
    let fields = (
        u32_at(&wav, 4),
        u32_at(&wav, 16),
        u16_at(&wav, 20),
        u16_at(&wav, 22),
        u32_at(&wav, 24),
        u32_at(&wav, 28),
        u16_at(&wav, 32),
        u16_at(&wav, 34),
        u32_at(&wav, 40),
    );
    ensure(
        fields == (36 + data_len, 16, 1, 1, 192_000, 384_000, 2, 16, data_len),
        || format!("header fields {fields:?}"),
    )?;
    ensure(wav.len() == 44 + data_len as usize, || "file length".into())?;
    ensure(
        spectrogram.starts_with(b"P6\n") && grid.starts_with(b"P6\n11 95\n255\n"),
        || "ppm headers".into(),
    )?;
    Ok(format!(
        "wav {} bytes, spectrogram {} bytes, grid {} bytes identical across runs",
        wav.len(),
        spectrogram.len(),
        grid.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 golden frequency table", 1, golden_table),
        ("2 octave span", 1, octave_span_check),
        ("3 exhaustive round trip", 30, exhaustive_round_trip),
        ("4 ultrasonic partition", 30, ultrasonic_partition),
        ("5 information rate", 1, information_rate),
        ("6 goertzel vs direct DFT", 10, goertzel_oracle),
        ("7 abc round trip", 5, abc_round_trip),
        ("8 noise degradation", 60, noise_degradation),
        ("9 bit-exact artifacts", 10, bit_exact_artifacts),
    ];
    let mut failures = 0;
    for (name, budget_s, check) in criteria {
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if outcome.is_ok() && elapsed > Duration::from_secs(budget_s) {
            outcome = Err(format!("took {elapsed:.2?}, budget {budget_s} s"));
        }
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{elapsed:.2?}]"),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {name}: {detail} [{elapsed:.2?}]");
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Built-in consistency checks run by `tonal selftest`.

use std::fmt;

use crate::abc::{parse_abc, to_abc};
use crate::channel::{apply_channel, ChannelConfig};
use crate::decode::{decode_audio, DecodeParams};
use crate::error::Result;
use crate::freqmap::{build_table, golden_mismatches, FrequencyTable};
use crate::synth::{encode_text, SynthParams};

/// Tolerance of the golden comparison: the fixture's printed precision.
pub const GOLDEN_TOLERANCE_HZ: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {}", self.name, self.detail)
    }
}

/// The 95 printable characters in ascending order.
pub fn alphabet(table: &FrequencyTable) -> String {
    table.entries().iter().map(|e| e.character).collect()
}

fn outcome(name: &'static str, result: Result<(bool, String)>) -> CheckOutcome {
    match result {
        Ok((passed, detail)) => CheckOutcome {
            name,
            passed,
            detail,
        },
        Err(e) => CheckOutcome {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

/// Runs every check against `fixture`, normally
/// [`crate::freqmap::GOLDEN_FREQUENCIES`].
pub fn run_selftest(fixture: &[(u8, f64)]) -> Vec<CheckOutcome> {
    let table = build_table();
    let params = SynthParams::default();
    let decode = DecodeParams::from_synth(&params);
    let text = alphabet(&table);

    let golden = {
        let mismatches = golden_mismatches(&table, fixture, GOLDEN_TOLERANCE_HZ);
        let detail = match mismatches.first() {
            None => format!(
                "{} frequencies within {GOLDEN_TOLERANCE_HZ} Hz",
                fixture.len()
            ),
            Some(m) => format!(
                "{} mismatches, first at ascii {} (expected {:?}, generated {:?})",
                mismatches.len(),
                m.ascii_code,
                m.expected_hz,
                m.actual_hz
            ),
        };
        CheckOutcome {
            name: "golden-table",
            passed: mismatches.is_empty(),
            detail,
        }
    };

    let round_trip = outcome(
        "alphabet-round-trip",
        encode_text(&text, &table, &params)
            .and_then(|audio| decode_audio(&audio, &table, &decode))
            .map(|r| {
                let ok = r.text == text && r.failed_count == 0;
                (
                    ok,
                    format!("{} symbols, {} failed", r.symbol_count, r.failed_count),
                )
            }),
    );

    let abc = outcome(
        "abc-round-trip",
        to_abc(&text, &params)
            .and_then(|doc| parse_abc(&doc))
            .map(|back| (back == text, format!("{} notes", back.chars().count()))),
    );

    let partition = outcome(
        "audible-partition",
        encode_text(&text, &table, &params)
            .and_then(|audio| apply_channel(&audio, &ChannelConfig::audible()))
            .and_then(|heard| decode_audio(&heard, &table, &decode))
            .map(|r| {
                let failed: Vec<u8> = text
                    .bytes()
                    .zip(&r.detections)
                    .filter(|(c, d)| d.detected_char != Some(char::from(*c)))
                    .map(|(c, _)| c)
                    .collect();
                let expected: Vec<u8> = table
                    .entries()
                    .iter()
                    .filter(|e| e.ultrasonic)
                    .map(|e| e.ascii_code)
                    .collect();
                let detail = match (failed.first(), failed.last()) {
                    (Some(lo), Some(hi)) => {
                        format!(
                            "{} lost through 20 kHz low-pass, ascii {lo}..={hi}",
                            failed.len()
                        )
                    }
                    _ => "nothing lost through 20 kHz low-pass".to_string(),
                };
                (failed == expected, detail)
            }),
    );

    vec![golden, round_trip, abc, partition]
}

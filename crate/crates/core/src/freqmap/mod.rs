//! Character to frequency mapping.
//!
//! Every printable ASCII character (codes 32..=126) is assigned one equal
//! tempered semitone above its predecessor, starting from 220 Hz for the
//! space character:
//!
//! ```text
//! f(code) = 220 * 2^((code - 32) / 12)
//! ```
//!
//! The resulting 95 tones span a little under eight octaves, from 220 Hz up
//! to 50175.42 Hz for `~`. Codes 111 (`o`) and above land above 20 kHz.

mod golden;

use std::fmt;
use std::ops::Range;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub use golden::GOLDEN_FREQUENCIES;

/// Frequency of the space character.
pub const BASE_FREQUENCY_HZ: f64 = 220.0;
/// First mapped ASCII code (space).
pub const FIRST_CODE: u8 = 32;
/// Last mapped ASCII code (`~`).
pub const LAST_CODE: u8 = 126;
/// Number of tones in the alphabet.
pub const ALPHABET_SIZE: usize = (LAST_CODE - FIRST_CODE) as usize + 1;
/// Tones strictly above this are outside adult hearing.
pub const ULTRASONIC_THRESHOLD_HZ: f64 = 20_000.0;

const PITCH_CLASSES: [&str; 12] = [
    "C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B",
];
/// Semitones from C3 up to the base tone A3.
const BASE_OFFSET_FROM_C: usize = 9;
const BASE_OCTAVE: usize = 3;

/// One row of the alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct CharTone {
    pub ascii_code: u8,
    pub character: char,
    pub semitone_index: u8,
    pub frequency_hz: f64,
    pub note_name: String,
    pub ultrasonic: bool,
}

impl CharTone {
    fn from_semitone(semitone_index: u8) -> Self {
        let ascii_code = FIRST_CODE + semitone_index;
        let frequency_hz = semitone_frequency(semitone_index as f64);
        Self {
            ascii_code,
            character: ascii_code as char,
            semitone_index,
            frequency_hz,
            note_name: pitch_name(semitone_index as usize),
            ultrasonic: frequency_hz > ULTRASONIC_THRESHOLD_HZ,
        }
    }
}

impl fmt::Display for CharTone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} ({}) {:.2} Hz {}",
            self.character, self.ascii_code, self.frequency_hz, self.note_name
        )
    }
}

/// Ordered set of character tones, ascending in frequency.
///
/// The canonical table holds all 95 entries; [`FrequencyTable::slice`] yields
/// contiguous sub-tables.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTable {
    entries: Vec<CharTone>,
}

impl FrequencyTable {
    /// The shared canonical table.
    pub fn canonical() -> &'static FrequencyTable {
        static TABLE: OnceLock<FrequencyTable> = OnceLock::new();
        TABLE.get_or_init(build_table)
    }

    pub fn entries(&self) -> &[CharTone] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn first(&self) -> &CharTone {
        &self.entries[0]
    }

    pub fn last(&self) -> &CharTone {
        &self.entries[self.entries.len() - 1]
    }

    /// Entry for a character, if the table covers it.
    pub fn by_char(&self, character: char) -> Option<&CharTone> {
        let code = u32::from(character);
        let first = u32::from(self.first().ascii_code);
        let offset = code.checked_sub(first)? as usize;
        self.entries.get(offset)
    }

    /// Contiguous sub-table by position (not by ASCII code).
    pub fn slice(&self, range: Range<usize>) -> Result<FrequencyTable> {
        if range.start >= range.end || range.end > self.entries.len() {
            return Err(Error::Domain(format!(
                "sub-table range {range:?} is empty or exceeds {} entries",
                self.entries.len()
            )));
        }
        Ok(FrequencyTable {
            entries: self.entries[range].to_vec(),
        })
    }

    /// Entry closest to `frequency_hz` in cents, with the signed cents error
    /// `1200 * log2(frequency_hz / entry)`.
    ///
    /// Frequencies outside the table clamp to the end entries.
    pub fn nearest(&self, frequency_hz: f64) -> Result<(&CharTone, f64)> {
        if !(frequency_hz > 0.0) || !frequency_hz.is_finite() {
            return Err(Error::Domain(format!(
                "frequency must be positive and finite, got {frequency_hz}"
            )));
        }
        let mut best = &self.entries[0];
        let mut best_cents = cents_between(frequency_hz, best.frequency_hz);
        for entry in &self.entries[1..] {
            let cents = cents_between(frequency_hz, entry.frequency_hz);
            if cents.abs() < best_cents.abs() {
                best = entry;
                best_cents = cents;
            }
        }
        Ok((best, best_cents))
    }
}

impl<'a> IntoIterator for &'a FrequencyTable {
    type Item = &'a CharTone;
    type IntoIter = std::slice::Iter<'a, CharTone>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

fn semitone_frequency(semitone: f64) -> f64 {
    BASE_FREQUENCY_HZ * (semitone / 12.0).exp2()
}

fn cents_between(frequency_hz: f64, reference_hz: f64) -> f64 {
    1200.0 * (frequency_hz / reference_hz).log2()
}

fn pitch_name(semitone_index: usize) -> String {
    let from_c = BASE_OFFSET_FROM_C + semitone_index;
    format!(
        "{}{}",
        PITCH_CLASSES[from_c % 12],
        BASE_OCTAVE + from_c / 12
    )
}

/// Builds the canonical 95-entry table.
pub fn build_table() -> FrequencyTable {
    FrequencyTable {
        entries: (0..ALPHABET_SIZE as u8)
            .map(CharTone::from_semitone)
            .collect(),
    }
}

/// Frequency of a printable ASCII code.
pub fn frequency_of(ascii_code: i64) -> Result<f64> {
    if !(i64::from(FIRST_CODE)..=i64::from(LAST_CODE)).contains(&ascii_code) {
        return Err(Error::CodeOutOfRange(ascii_code));
    }
    Ok(semitone_frequency(
        (ascii_code - i64::from(FIRST_CODE)) as f64,
    ))
}

/// Nearest alphabet character to a frequency, in the canonical table.
pub fn nearest_char(frequency_hz: f64) -> Result<(CharTone, f64)> {
    FrequencyTable::canonical()
        .nearest(frequency_hz)
        .map(|(tone, cents)| (tone.clone(), cents))
}

/// Scientific pitch name of a semitone index, with 220 Hz as A3.
pub fn note_name(semitone_index: i64) -> Result<String> {
    if !(0..ALPHABET_SIZE as i64).contains(&semitone_index) {
        return Err(Error::Domain(format!(
            "semitone index {semitone_index} outside 0..={}",
            ALPHABET_SIZE - 1
        )));
    }
    Ok(pitch_name(semitone_index as usize))
}

/// Span of the table in octaves: `log2(last / first)`.
pub fn octave_span(table: &FrequencyTable) -> f64 {
    (table.last().frequency_hz / table.first().frequency_hz).log2()
}

/// A row where the generated table and a reference fixture disagree.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldenMismatch {
    pub ascii_code: u8,
    pub expected_hz: Option<f64>,
    pub actual_hz: Option<f64>,
}

/// Compares `table` with `fixture` row by row at `tolerance_hz`.
///
/// Rows missing from either side are reported too. An empty result means
/// the table matches.
pub fn golden_mismatches(
    table: &FrequencyTable,
    fixture: &[(u8, f64)],
    tolerance_hz: f64,
) -> Vec<GoldenMismatch> {
    let mut mismatches = Vec::new();
    for &(ascii_code, expected) in fixture {
        let actual = table.by_char(ascii_code as char).map(|t| t.frequency_hz);
        let ok = matches!(actual, Some(a) if (a - expected).abs() <= tolerance_hz);
        if !ok {
            mismatches.push(GoldenMismatch {
                ascii_code,
                expected_hz: Some(expected),
                actual_hz: actual,
            });
        }
    }
    for entry in table {
        if !fixture.iter().any(|&(code, _)| code == entry.ascii_code) {
            mismatches.push(GoldenMismatch {
                ascii_code: entry.ascii_code,
                expected_hz: None,
                actual_hz: Some(entry.frequency_hz),
            });
        }
    }
    mismatches
}

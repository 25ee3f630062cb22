//! ABC notation export and import.
//!
//! One note per character, all of unit length; timing lives in the `Q:` and
//! `L:` headers. Pitches are spelled with sharps only. Octaves up to B4 use
//! uppercase letters with trailing commas (`A,` is A3, the space character);
//! C5 and above use lowercase letters with apostrophes (`g''''''` is G11,
//! the tilde). The parser also accepts the non-canonical spellings, such as
//! `C'` for `c`.
//!
//! ```text
//! X:1
//! T:Tonal message
//! Q:1/4=1200
//! L:1/4
//! K:none
//! ^c'' ^a' f'' f'' ^g''
//! ```

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::freqmap::{ALPHABET_SIZE, FIRST_CODE};
use crate::synth::SynthParams;

/// Note tokens per body line.
pub const NOTES_PER_LINE: usize = 64;
pub const KEY_FIELD: &str = "K:none";
pub const DEFAULT_TITLE: &str = "Tonal message";

/// Pitch classes from C, sharps only.
const SPELLING: [(char, bool); 12] = [
    ('C', false),
    ('C', true),
    ('D', false),
    ('D', true),
    ('E', false),
    ('F', false),
    ('F', true),
    ('G', false),
    ('G', true),
    ('A', false),
    ('A', true),
    ('B', false),
];

/// Octave written with bare uppercase letters.
const REFERENCE_OCTAVE: i64 = 4;
/// Semitone index 0 (A3) counted in semitones from C0.
const BASE_FROM_C0: i64 = 3 * 12 + 9;

/// One ABC note: letter, optional sharp, octave relative to the uppercase
/// reference octave (C4..B4).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AbcNote {
    pub pitch_class: char,
    pub sharp: bool,
    pub octave_offset: i64,
}

impl AbcNote {
    pub fn from_semitone(semitone_index: usize) -> Self {
        let from_c0 = BASE_FROM_C0 + semitone_index as i64;
        let (pitch_class, sharp) = SPELLING[from_c0.rem_euclid(12) as usize];
        Self {
            pitch_class,
            sharp,
            octave_offset: from_c0.div_euclid(12) - REFERENCE_OCTAVE,
        }
    }

    /// Semitone index relative to A3; may fall outside the alphabet.
    pub fn semitone(&self) -> i64 {
        let class = SPELLING
            .iter()
            .position(|&(letter, sharp)| letter == self.pitch_class && !sharp)
            .expect("pitch class is a letter A-G") as i64;
        (REFERENCE_OCTAVE + self.octave_offset) * 12 + class + i64::from(self.sharp) - BASE_FROM_C0
    }
}

impl fmt::Display for AbcNote {
    /// Canonical spelling.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sharp {
            f.write_char('^')?;
        }
        if self.octave_offset >= 1 {
            f.write_char(self.pitch_class.to_ascii_lowercase())?;
            for _ in 1..self.octave_offset {
                f.write_char('\'')?;
            }
        } else {
            f.write_char(self.pitch_class)?;
            for _ in self.octave_offset..0 {
                f.write_char(',')?;
            }
        }
        Ok(())
    }
}

/// A tune: fixed header block and a flat sequence of unit notes.
#[derive(Debug, Clone, PartialEq)]
pub struct AbcDocument {
    pub reference_number: u32,
    pub title: String,
    /// Quarter-note beats per minute.
    pub tempo_bpm: u32,
    /// Unit note length as (numerator, denominator).
    pub unit_length: (u32, u32),
    pub notes: Vec<AbcNote>,
}

impl AbcDocument {
    /// Builds the document for `text`, with the tempo chosen so that one
    /// unit note lasts one symbol plus its gap.
    pub fn from_text(text: &str, params: &SynthParams, title: &str) -> Result<Self> {
        params.validate()?;
        let notes = text
            .chars()
            .enumerate()
            .map(|(index, c)| {
                let code = u32::from(c);
                let semitone = code.wrapping_sub(u32::from(FIRST_CODE)) as usize;
                if semitone < ALPHABET_SIZE {
                    Ok(AbcNote::from_semitone(semitone))
                } else {
                    Err(Error::Unmappable {
                        index,
                        code_point: code,
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let frame_s = params.symbol_duration_s + params.gap_duration_s;
        Ok(Self {
            reference_number: 1,
            title: title.lines().next().unwrap_or("").to_string(),
            tempo_bpm: (60.0 / frame_s).round().max(1.0) as u32,
            unit_length: (1, 4),
            notes,
        })
    }
}

impl fmt::Display for AbcDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "X:{}", self.reference_number)?;
        writeln!(f, "T:{}", self.title)?;
        writeln!(f, "Q:1/4={}", self.tempo_bpm)?;
        writeln!(f, "L:{}/{}", self.unit_length.0, self.unit_length.1)?;
        writeln!(f, "{KEY_FIELD}")?;
        for line in self.notes.chunks(NOTES_PER_LINE) {
            for (i, note) in line.iter().enumerate() {
                if i > 0 {
                    f.write_char(' ')?;
                }
                write!(f, "{note}")?;
            }
            f.write_char('\n')?;
        }
        Ok(())
    }
}

/// Renders `text` as an ABC document.
pub fn to_abc(text: &str, params: &SynthParams) -> Result<String> {
    Ok(AbcDocument::from_text(text, params, DEFAULT_TITLE)?.to_string())
}

fn is_header(line: &str) -> bool {
    let mut chars = line.chars();
    matches!(
        (chars.next(), chars.next()),
        (Some(c), Some(':')) if c.is_ascii_alphabetic()
    )
}

fn offending_token(chars: &[(usize, char)], from: usize) -> String {
    chars[from..]
        .iter()
        .map(|&(_, c)| c)
        .take_while(|c| !c.is_whitespace())
        .collect()
}

/// Parses the note tokens of a document body. Header lines (`<letter>:`)
/// and `%` comment lines are skipped.
pub fn parse_notes(document: &str) -> Result<Vec<AbcNote>> {
    let mut notes = Vec::new();
    for (line_no, line) in document.lines().enumerate() {
        if is_header(line) || line.starts_with('%') {
            continue;
        }
        let chars: Vec<(usize, char)> = line.chars().enumerate().collect();
        let mut i = 0;
        while i < chars.len() {
            let (_, c) = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            let error = |at: usize| Error::AbcParse {
                line: line_no + 1,
                column: chars[at].0 + 1,
                token: offending_token(&chars, at),
            };
            let sharp = c == '^';
            if sharp {
                i += 1;
            }
            let letter = match chars.get(i) {
                Some(&(_, l @ ('A'..='G' | 'a'..='g'))) => l,
                _ => return Err(error(start)),
            };
            i += 1;
            let mut octave_offset = i64::from(letter.is_ascii_lowercase());
            while let Some(&(_, mark @ (',' | '\''))) = chars.get(i) {
                octave_offset += if mark == '\'' { 1 } else { -1 };
                i += 1;
            }
            if let Some(&(_, next)) = chars.get(i) {
                if !(next.is_whitespace() || next == '^' || next.is_ascii_alphabetic()) {
                    return Err(error(start));
                }
            }
            notes.push(AbcNote {
                pitch_class: letter.to_ascii_uppercase(),
                sharp,
                octave_offset,
            });
            let token: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            let semitone = notes.last().map(AbcNote::semitone).unwrap_or_default();
            if !(0..ALPHABET_SIZE as i64).contains(&semitone) {
                return Err(Error::AbcRange { token, semitone });
            }
        }
    }
    Ok(notes)
}

/// Recovers the text encoded in an ABC document.
pub fn parse_abc(document: &str) -> Result<String> {
    Ok(parse_notes(document)?
        .iter()
        .map(|note| char::from(FIRST_CODE + note.semitone() as u8))
        .collect())
}

//! Single-bin Fourier evaluation by the Goertzel recurrence.
//!
//! ```text
//! s[n] = x[n] + 2 cos(w) s[n-1] - s[n-2],   w = 2 pi f / rate
//! |X(w)|^2 = s[N-1]^2 + s[N-2]^2 - 2 cos(w) s[N-1] s[N-2]
//! ```
//!
//! Powers are normalized by `N^2`, so a unit sine centred on the target
//! reads 0.25.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Shortest segment accepted by [`goertzel_power`].
pub const MIN_SEGMENT_LEN: usize = 8;

fn check_target(target_hz: f64, sample_rate_hz: u32) -> Result<()> {
    let nyquist = f64::from(sample_rate_hz) / 2.0;
    if !(target_hz >= 0.0) || target_hz >= nyquist {
        return Err(Error::Domain(format!(
            "target {target_hz} Hz must lie in [0, {nyquist}) for sample rate {sample_rate_hz} Hz"
        )));
    }
    Ok(())
}

/// Normalized power `|sum x[k] e^{-2 pi i f k / rate}|^2 / N^2`.
pub fn goertzel_power(segment: &[f64], sample_rate_hz: u32, target_hz: f64) -> Result<f64> {
    if segment.len() < MIN_SEGMENT_LEN {
        return Err(Error::Domain(format!(
            "segment of {} samples is shorter than {MIN_SEGMENT_LEN}",
            segment.len()
        )));
    }
    check_target(target_hz, sample_rate_hz)?;
    let coeff = 2.0 * (2.0 * PI * target_hz / f64::from(sample_rate_hz)).cos();
    let (mut s1, mut s2) = (0.0f64, 0.0f64);
    for &x in segment {
        let s0 = x + coeff * s1 - s2;
        s2 = s1;
        s1 = s0;
    }
    let n = segment.len() as f64;
    Ok(((s1 * s1 + s2 * s2 - coeff * s1 * s2) / (n * n)).max(0.0))
}

/// Goertzel filters for a fixed set of targets, run in lockstep over one
/// pass of the segment.
#[derive(Debug, Clone)]
pub struct GoertzelBank {
    coeffs: Vec<f64>,
}

impl GoertzelBank {
    pub fn new(targets_hz: &[f64], sample_rate_hz: u32) -> Result<Self> {
        for &f in targets_hz {
            check_target(f, sample_rate_hz)?;
        }
        let rate = f64::from(sample_rate_hz);
        Ok(Self {
            coeffs: targets_hz
                .iter()
                .map(|f| 2.0 * (2.0 * PI * f / rate).cos())
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Normalized power at every target, in construction order. An empty
    /// segment yields all zeros.
    pub fn powers(&self, segment: &[f64]) -> Vec<f64> {
        let k = self.coeffs.len();
        let mut s1 = vec![0.0f64; k];
        let mut s2 = vec![0.0f64; k];
        for &x in segment {
            for ((c, a), b) in self.coeffs.iter().zip(s1.iter_mut()).zip(s2.iter_mut()) {
                let s0 = x + c * *a - *b;
                *b = *a;
                *a = s0;
            }
        }
        if segment.is_empty() {
            return vec![0.0; k];
        }
        let n2 = (segment.len() as f64).powi(2);
        self.coeffs
            .iter()
            .zip(s1.iter().zip(&s2))
            .map(|(c, (a, b))| ((a * a + b * b - c * a * b) / n2).max(0.0))
            .collect()
    }
}

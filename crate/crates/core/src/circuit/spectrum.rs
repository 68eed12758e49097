//! Dominant-frequency estimation for uniformly sampled real signals.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Shortest series accepted by [`estimate_dominant_frequency`].
pub const MIN_SAMPLES: usize = 1 << 10;

const ZERO_PAD: usize = 8;

/// Angular frequency (rad/s) of the strongest spectral line in `series`,
/// sampled every `dt` seconds.
///
/// The mean is removed and a Hann window applied before an 8× zero-padded
/// DFT; the peak bin is refined by a parabola through the log-magnitudes of
/// its two neighbours.
pub fn estimate_dominant_frequency(series: &[f64], dt: f64) -> Result<f64> {
    if series.len() < MIN_SAMPLES {
        return Err(Error::Estimation(format!(
            "series has {} samples, need at least {MIN_SAMPLES}",
            series.len()
        )));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Estimation(format!("invalid sample spacing {dt}")));
    }
    let n = series.len();
    let mean = series.iter().sum::<f64>() / n as f64;
    let spread = series.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    if !(spread > 0.0) || !spread.is_finite() {
        return Err(Error::Estimation("series is constant".into()));
    }

    let len = (n * ZERO_PAD).next_power_of_two();
    let mut buf = vec![Complex::new(0.0, 0.0); len];
    for (i, v) in series.iter().enumerate() {
        let w = 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / (n - 1) as f64).cos();
        buf[i] = Complex::new((v - mean) / spread * w, 0.0);
    }
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);

    let half = len / 2;
    let mags: Vec<f64> = buf[..=half].iter().map(|c| c.norm()).collect();
    let (peak, &peak_mag) = mags
        .iter()
        .enumerate()
        .skip(1)
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty spectrum");
    if !(peak_mag > 0.0) {
        return Err(Error::Estimation("no spectral content".into()));
    }

    let offset = if peak > 0 && peak < half && mags[peak - 1] > 0.0 && mags[peak + 1] > 0.0 {
        let (a, b, c) = (mags[peak - 1].ln(), peak_mag.ln(), mags[peak + 1].ln());
        let denom = a - 2.0 * b + c;
        if denom < 0.0 {
            0.5 * (a - c) / denom
        } else {
            0.0
        }
    } else {
        0.0
    };
    let bin = peak as f64 + offset;
    Ok(2.0 * std::f64::consts::PI * bin / (len as f64 * dt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sample(n: usize, dt: f64, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..n).map(|i| f(i as f64 * dt)).collect()
    }

    #[test]
    fn pure_tone_within_a_tenth_of_a_percent() {
        // ~20.37 periods over 2048 samples.
        let w = 2.0 * PI * 1.37e9;
        let n = 2048;
        let dt = 20.37 * 2.0 * PI / w / n as f64;
        let est = estimate_dominant_frequency(&sample(n, dt, |t| (w * t + 0.4).sin()), dt).unwrap();
        assert!((est - w).abs() / w < 1e-3, "{}", (est - w).abs() / w);
    }

    #[test]
    fn larger_of_two_tones_wins() {
        let dt = 1e-3;
        let s = sample(4096, dt, |t| 0.3 * (2.0 * PI * 40.0 * t).cos() + (2.0 * PI * 95.0 * t).cos());
        let est = estimate_dominant_frequency(&s, dt).unwrap();
        assert!((est / (2.0 * PI) - 95.0).abs() < 0.1, "{est}");
    }

    #[test]
    fn offset_does_not_matter() {
        let dt = 1e-3;
        let s = sample(2048, dt, |t| 5.0 + (2.0 * PI * 50.0 * t).cos());
        let est = estimate_dominant_frequency(&s, dt).unwrap();
        assert!((est / (2.0 * PI) - 50.0).abs() < 0.05);
    }

    #[test]
    fn rejects_short_and_constant() {
        assert!(matches!(estimate_dominant_frequency(&[1.0; 100], 1.0), Err(Error::Estimation(_))));
        assert!(matches!(estimate_dominant_frequency(&[2.0; 2048], 1.0), Err(Error::Estimation(_))));
        assert!(estimate_dominant_frequency(&vec![0.0; 2048], 0.0).is_err());
    }
}

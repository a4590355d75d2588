//! Spectrogram painting: each image row drives one sine oscillator, each
//! column is a fixed slice of time. Decoding runs a Hann-windowed STFT and
//! pools magnitudes back onto the pixel grid.

use std::f64::consts::PI;

use rustfft::{num_complex::Complex, FftPlanner};

use super::wav::{WavAudio, DEFAULT_SAMPLE_RATE};
use crate::error::{Error, Result};
use crate::imagesteg::RasterImage;

/// Peak level of painted audio, as a fraction of i16 full scale.
pub const HEADROOM: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectroParams {
    pub sample_rate: u32,
    pub f_min: f64,
    pub f_max: f64,
    pub samples_per_column: usize,
    pub fft_size: usize,
    /// Hann window length used when decoding; zero-padded up to `fft_size`.
    pub window_len: usize,
}

impl Default for SpectroParams {
    fn default() -> Self {
        Self {
            sample_rate: DEFAULT_SAMPLE_RATE,
            f_min: 500.0,
            f_max: 5000.0,
            samples_per_column: 1024,
            fft_size: 4096,
            window_len: 4096,
        }
    }
}

impl SpectroParams {
    pub fn validate(&self) -> Result<()> {
        let nyquist = self.sample_rate as f64 / 2.0;
        if self.sample_rate == 0 {
            return Err(Error::InvalidParameter(
                "sample rate must be positive".into(),
            ));
        }
        if !(self.f_min >= 0.0 && self.f_min < self.f_max && self.f_max <= nyquist) {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= f_min < f_max <= {nyquist} Hz, got {}..{}",
                self.f_min, self.f_max
            )));
        }
        if self.samples_per_column == 0 || self.fft_size < self.samples_per_column {
            return Err(Error::InvalidParameter(format!(
                "need 0 < samples_per_column <= fft_size, got {} and {}",
                self.samples_per_column, self.fft_size
            )));
        }
        if self.window_len == 0 || self.window_len > self.fft_size {
            return Err(Error::InvalidParameter(format!(
                "need 0 < window_len <= fft_size, got {}",
                self.window_len
            )));
        }
        Ok(())
    }

    /// Oscillator frequency for `row` of a `height`-row image; row 0 is `f_max`.
    pub fn row_frequency(&self, row: usize, height: usize) -> f64 {
        if height < 2 {
            return self.f_max;
        }
        let frac = (height - 1 - row) as f64 / (height - 1) as f64;
        self.f_min + frac * (self.f_max - self.f_min)
    }
}

/// Synthesizes audio whose spectrogram shows `image`.
pub fn spectro_encode(image: &RasterImage, params: &SpectroParams) -> Result<WavAudio> {
    params.validate()?;
    let gray = image.to_grayscale();
    let (w, h) = (gray.width() as usize, gray.height() as usize);
    if h < 2 {
        return Err(Error::InvalidParameter(format!(
            "image height must be at least 2, got {h}"
        )));
    }
    let spc = params.samples_per_column;
    let rate = params.sample_rate as f64;
    let omegas: Vec<f64> = (0..h)
        .map(|r| 2.0 * PI * params.row_frequency(r, h) / rate)
        .collect();

    let mut mix = vec![0.0f64; w * spc];
    for c in 0..w {
        for (r, omega) in omegas.iter().enumerate() {
            let amp = gray.get(c as u32, r as u32, 0) as f64 / 255.0;
            if amp == 0.0 {
                continue;
            }
            let start = c * spc;
            for (k, m) in mix[start..start + spc].iter_mut().enumerate() {
                *m += amp * (omega * (start + k) as f64).sin();
            }
        }
    }

    let peak = mix.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = if peak > 0.0 {
        HEADROOM * i16::MAX as f64 / peak
    } else {
        0.0
    };
    let samples = mix.iter().map(|x| (x * scale).round() as i16).collect();
    WavAudio::new(params.sample_rate, samples)
}

fn hann(len: usize) -> Vec<f64> {
    (0..len)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / len as f64).cos())
        .collect()
}

/// Magnitude STFT with one frame per column slot, each frame centred on its
/// slot and zero-padded at the signal edges. Returns `frames × (fft_size/2+1)`.
pub fn stft_magnitudes(samples: &[i16], params: &SpectroParams) -> Vec<Vec<f64>> {
    let n = params.fft_size;
    let hop = params.samples_per_column;
    let window = hann(params.window_len);
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    let frames = samples.len().div_ceil(hop);
    let mut buf = vec![Complex::new(0.0, 0.0); n];
    let mut out = Vec::with_capacity(frames);
    for k in 0..frames {
        let centre = (k * hop + hop / 2) as isize;
        let start = centre - (window.len() / 2) as isize;
        buf.fill(Complex::new(0.0, 0.0));
        for (i, (slot, w)) in buf.iter_mut().zip(&window).enumerate() {
            let idx = start + i as isize;
            if idx >= 0 && (idx as usize) < samples.len() {
                *slot = Complex::new(samples[idx as usize] as f64 * w, 0.0);
            }
        }
        fft.process(&mut buf);
        out.push(buf[..=n / 2].iter().map(|c| c.norm()).collect());
    }
    out
}

/// Recovers an `out_height × out_width` picture from painted audio.
pub fn spectro_decode(
    audio: &WavAudio,
    out_height: usize,
    out_width: usize,
    params: &SpectroParams,
) -> Result<RasterImage> {
    params.validate()?;
    if audio.samples().len() < params.fft_size {
        return Err(Error::AudioTooShort {
            samples: audio.samples().len(),
            needed: params.fft_size,
        });
    }
    if out_height == 0 || out_width == 0 {
        return Err(Error::InvalidParameter(
            "output dimensions must be positive".into(),
        ));
    }
    let spectra = stft_magnitudes(audio.samples(), params);
    let bin_hz = audio.sample_rate() as f64 / params.fft_size as f64;
    let top_bin = params.fft_size / 2;

    let row_bins: Vec<(usize, usize)> = (0..out_height)
        .map(|r| {
            let (lo, hi) = if out_height == 1 {
                (params.f_min, params.f_max)
            } else {
                let half = (params.f_max - params.f_min) / (out_height - 1) as f64 / 2.0;
                let f = params.row_frequency(r, out_height);
                (f - half, f + half)
            };
            let first = ((lo / bin_hz).ceil().max(0.0) as usize).min(top_bin);
            let last = ((hi / bin_hz).floor().max(0.0) as usize).min(top_bin);
            (first, last.max(first))
        })
        .collect();

    let frames = spectra.len();
    let mut grid = vec![0.0f64; out_height * out_width];
    for c in 0..out_width {
        let f0 = c * frames / out_width;
        let f1 = ((c + 1) * frames / out_width).max(f0 + 1).min(frames);
        for (r, &(b0, b1)) in row_bins.iter().enumerate() {
            let mut m = 0.0f64;
            for spectrum in &spectra[f0..f1] {
                for &v in &spectrum[b0..=b1] {
                    m = m.max(v);
                }
            }
            grid[r * out_width + c] = m;
        }
    }

    let peak = grid.iter().cloned().fold(0.0, f64::max);
    let samples = grid
        .iter()
        .map(|&m| {
            if peak > 0.0 {
                (m / peak * 255.0).round() as u8
            } else {
                0
            }
        })
        .collect();
    RasterImage::new(out_width as u32, out_height as u32, 1, samples)
}

/// Fraction of pixels on which two binary-thresholded rasters agree.
/// Pixels at or above `threshold` count as lit.
pub fn binary_accuracy(a: &RasterImage, b: &RasterImage, threshold: u8) -> f64 {
    assert_eq!(
        (a.width(), a.height(), a.channels()),
        (b.width(), b.height(), b.channels()),
        "rasters must share dimensions"
    );
    if a.samples().is_empty() {
        return 1.0;
    }
    let agree = a
        .samples()
        .iter()
        .zip(b.samples())
        .filter(|(&x, &y)| (x >= threshold) == (y >= threshold))
        .count();
    agree as f64 / a.samples().len() as f64
}

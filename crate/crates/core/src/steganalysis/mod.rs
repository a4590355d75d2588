//! Detection: the chi-square pairs-of-values attack on LSB embedding, and
//! signature scanning for data appended after a host file.

mod gamma;

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

pub use gamma::{ln_gamma, regularized_gamma_p, regularized_gamma_q};

use crate::audiosteg::decode_wav;
use crate::error::{Error, Result};
use crate::filesteg::{find, scan_trailer, TrailerFinding, TrailerKind, ZIP_LOCAL_HEADER};
use crate::imagesteg::{decode_bmp, RasterImage};

/// Pairs whose expected count falls below this are dropped.
pub const MIN_EXPECTED: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub df: usize,
    /// Probability that the pairs were equalized by embedding.
    pub p: f64,
}

/// Chi-square test over value pairs (2k, 2k+1) of a histogram.
pub fn chi_square_pairs(histogram: &[u64]) -> Result<ChiSquare> {
    let mut statistic = 0.0;
    let mut kept = 0usize;
    for pair in histogram.chunks_exact(2) {
        let expected = (pair[0] + pair[1]) as f64 / 2.0;
        if expected < MIN_EXPECTED {
            continue;
        }
        let d = pair[0] as f64 - expected;
        statistic += d * d / expected;
        kept += 1;
    }
    if kept < 2 {
        return Err(Error::DegenerateHistogram(kept));
    }
    let df = kept - 1;
    let p = regularized_gamma_q(df as f64 / 2.0, statistic / 2.0);
    Ok(ChiSquare { statistic, df, p })
}

pub fn byte_histogram(samples: &[u8]) -> [u64; 256] {
    let mut h = [0u64; 256];
    for &s in samples {
        h[s as usize] += 1;
    }
    h
}

/// Histogram of 16-bit samples indexed by their two's-complement bit pattern,
/// so that pairs differ only in bit 0.
pub fn sample_histogram(samples: &[i16]) -> Vec<u64> {
    let mut h = vec![0u64; 65_536];
    for &s in samples {
        h[s as u16 as usize] += 1;
    }
    h
}

/// Embedding probability for an image, from the histogram of all sample bytes.
pub fn chi_square_attack(image: &RasterImage) -> Result<f64> {
    chi_square_pairs(&byte_histogram(image.samples())).map(|c| c.p)
}

/// Largest p over consecutive windows of `window` samples. Windows too
/// sparse to test are skipped.
pub fn chi_square_windowed(samples: &[u8], window: usize) -> Result<f64> {
    if window == 0 {
        return Err(Error::InvalidParameter("window must be positive".into()));
    }
    samples
        .chunks(window)
        .filter_map(|w| chi_square_pairs(&byte_histogram(w)).ok())
        .map(|c| c.p)
        .reduce(f64::max)
        .ok_or(Error::DegenerateHistogram(0))
}

/// Host trailer findings plus the first ZIP local header inside a non-ZIP
/// trailer, sorted by offset.
pub fn signature_scan(data: &[u8]) -> Vec<TrailerFinding> {
    let Some(trailer) = scan_trailer(data) else {
        return Vec::new();
    };
    let mut findings = vec![trailer.clone()];
    if trailer.trailer_kind != TrailerKind::Zip {
        if let Some(rel) = find(&data[trailer.trailer_offset..], &ZIP_LOCAL_HEADER) {
            let offset = trailer.trailer_offset + rel;
            findings.push(TrailerFinding {
                host_format: trailer.host_format,
                trailer_offset: offset,
                trailer_kind: TrailerKind::Zip,
                trailer_len: data.len() - offset,
            });
        }
    }
    findings.sort_by_key(|f| f.trailer_offset);
    findings.dedup_by_key(|f| f.trailer_offset);
    findings
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Clean,
    Suspicious,
    StegoDetected,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Clean => "clean",
            Verdict::Suspicious => "suspicious",
            Verdict::StegoDetected => "stego-detected",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// p at or above this (or any signature) means stego-detected.
    pub detected: f64,
    /// p at or above this means suspicious.
    pub suspicious: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            detected: 0.95,
            suspicious: 0.5,
        }
    }
}

impl Thresholds {
    pub fn verdict(&self, p: Option<f64>, signatures: usize) -> Verdict {
        match p {
            _ if signatures > 0 => Verdict::StegoDetected,
            Some(p) if p >= self.detected => Verdict::StegoDetected,
            Some(p) if p >= self.suspicious => Verdict::Suspicious,
            _ => Verdict::Clean,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AnalysisOptions {
    pub thresholds: Thresholds,
    /// Test consecutive windows of this many samples and keep the maximum p.
    pub window: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub target: String,
    /// `None` when the file is not a supported raster/PCM carrier or its
    /// histogram is too sparse to test.
    pub chi_square_p: Option<f64>,
    pub signatures: Vec<TrailerFinding>,
    pub verdict: Verdict,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let p = self
            .chi_square_p
            .map_or_else(|| "n/a".to_string(), |p| format!("{p:.6}"));
        let _ = writeln!(
            out,
            "{}: verdict={} chi_square_p={} signatures={}",
            self.target,
            self.verdict.as_str(),
            p,
            self.signatures.len()
        );
        for s in &self.signatures {
            let _ = writeln!(
                out,
                "  {:?} trailer at offset {} ({} bytes, {:?} host)",
                s.trailer_kind, s.trailer_offset, s.trailer_len, s.host_format
            );
        }
        out
    }
}

fn chi_square_for(data: &[u8], window: Option<usize>) -> Option<f64> {
    if let Ok(img) = decode_bmp(data) {
        return match window {
            Some(w) => chi_square_windowed(img.samples(), w).ok(),
            None => chi_square_attack(&img).ok(),
        };
    }
    if let Ok(audio) = decode_wav(data) {
        let samples = audio.samples();
        return match window {
            Some(w) => samples
                .chunks(w.max(1))
                .filter_map(|c| chi_square_pairs(&sample_histogram(c)).ok())
                .map(|c| c.p)
                .reduce(f64::max),
            None => chi_square_pairs(&sample_histogram(samples))
                .ok()
                .map(|c| c.p),
        };
    }
    None
}

pub fn analyze_bytes(target: &str, data: &[u8], options: &AnalysisOptions) -> AnalysisReport {
    let chi_square_p = chi_square_for(data, options.window);
    let signatures = signature_scan(data);
    let verdict = options.thresholds.verdict(chi_square_p, signatures.len());
    AnalysisReport {
        target: target.to_string(),
        chi_square_p,
        signatures,
        verdict,
    }
}

/// Analyzes a file, or every regular file under a directory (in parallel),
/// returning reports ordered by path.
pub fn analyze_path(path: &Path, options: &AnalysisOptions) -> Result<Vec<AnalysisReport>> {
    if path.is_file() {
        let data = std::fs::read(path)?;
        return Ok(vec![analyze_bytes(
            &path.display().to_string(),
            &data,
            options,
        )]);
    }
    let mut files = Vec::new();
    for entry in walkdir::WalkDir::new(path).sort_by_file_name() {
        let entry = entry.map_err(|e| Error::Io(e.to_string()))?;
        if entry.file_type().is_file() {
            files.push(entry.into_path());
        }
    }
    let mut reports = files
        .par_iter()
        .map(|p| {
            std::fs::read(p)
                .map(|data| analyze_bytes(&p.display().to_string(), &data, options))
                .map_err(Error::from)
        })
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| a.target.cmp(&b.target));
    Ok(reports)
}

use crate::error::{Error, Result};

pub const DEFAULT_SAMPLE_RATE: u32 = 44_100;
const PCM_FORMAT: u16 = 1;

/// Mono 16-bit PCM audio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WavAudio {
    sample_rate: u32,
    samples: Vec<i16>,
}

impl WavAudio {
    pub fn new(sample_rate: u32, samples: Vec<i16>) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::InvalidParameter(
                "sample rate must be positive".into(),
            ));
        }
        Ok(Self {
            sample_rate,
            samples,
        })
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn samples(&self) -> &[i16] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [i16] {
        &mut self.samples
    }

    pub fn duration_secs(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}

fn u16_le(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_le(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(b[at..at + 4].try_into().unwrap())
}

/// Parses a RIFF/WAVE file holding mono 16-bit PCM. Unknown chunks are skipped.
pub fn decode_wav(bytes: &[u8]) -> Result<WavAudio> {
    if bytes.len() < 12 || &bytes[..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        if bytes.len() < 12 && (b"RIFF".starts_with(&bytes[..bytes.len().min(4)])) {
            return Err(Error::Truncated("RIFF header".into()));
        }
        return Err(Error::UnsupportedWav("not a RIFF/WAVE file".into()));
    }
    let mut pos = 12;
    let mut format: Option<(u16, u16, u32, u16)> = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let len = u32_le(bytes, pos + 4) as usize;
        let body_start = pos + 8;
        match id {
            b"fmt " => {
                if len < 16 || body_start + 16 > bytes.len() {
                    return Err(Error::Truncated("fmt chunk".into()));
                }
                let b = &bytes[body_start..];
                format = Some((u16_le(b, 0), u16_le(b, 2), u32_le(b, 4), u16_le(b, 14)));
            }
            b"data" => {
                let (code, channels, rate, bits) =
                    format.ok_or_else(|| Error::UnsupportedWav("data chunk before fmt".into()))?;
                if code != PCM_FORMAT {
                    return Err(Error::UnsupportedWav(format!("format code {code}")));
                }
                if channels != 1 {
                    return Err(Error::UnsupportedWav(format!("{channels} channels")));
                }
                if bits != 16 {
                    return Err(Error::UnsupportedWav(format!("{bits} bits per sample")));
                }
                if body_start + len > bytes.len() {
                    return Err(Error::Truncated(format!(
                        "data chunk declares {len} bytes, {} present",
                        bytes.len() - body_start
                    )));
                }
                let samples = bytes[body_start..body_start + len]
                    .chunks_exact(2)
                    .map(|s| i16::from_le_bytes([s[0], s[1]]))
                    .collect();
                return WavAudio::new(rate, samples)
                    .map_err(|_| Error::UnsupportedWav("zero sample rate".into()));
            }
            _ => {}
        }
        pos = body_start + len + (len & 1);
    }
    Err(Error::Truncated("no data chunk".into()))
}

/// Writes the canonical 44-byte header followed by little-endian samples.
pub fn encode_wav(audio: &WavAudio) -> Vec<u8> {
    let data_len = audio.samples.len() * 2;
    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&((36 + data_len) as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&PCM_FORMAT.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&audio.sample_rate.to_le_bytes());
    out.extend_from_slice(&(audio.sample_rate * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for s in &audio.samples {
        out.extend_from_slice(&s.to_le_bytes());
    }
    out
}

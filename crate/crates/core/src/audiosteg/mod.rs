//! Audio carriers: WAV codec, per-sample LSB coding, and spectrogram painting.

mod font;
mod spectro;
mod wav;

pub use font::{
    glyph, rasterize_text, CELL_HEIGHT, CELL_WIDTH, FONT_5X7, GLYPH_HEIGHT, GLYPH_WIDTH,
};
pub use spectro::{
    binary_accuracy, spectro_decode, spectro_encode, stft_magnitudes, SpectroParams, HEADROOM,
};
pub use wav::{decode_wav, encode_wav, WavAudio, DEFAULT_SAMPLE_RATE};

use crate::bitcodec::{bytes_to_bits, frame_payload, unframe_bits};
use crate::error::Result;
use crate::imagesteg::Capacity;

/// One bit per sample.
pub fn audio_lsb_capacity(audio: &WavAudio) -> Capacity {
    Capacity::from_bits(audio.samples().len())
}

pub fn audio_lsb_embed(audio: &WavAudio, payload: &[u8]) -> Result<WavAudio> {
    audio_lsb_capacity(audio).check(payload.len())?;
    let frame = frame_payload(payload);
    let mut out = audio.clone();
    for (s, bit) in out.samples_mut().iter_mut().zip(bytes_to_bits(&frame)) {
        *s = (*s & !1) | bit as i16;
    }
    Ok(out)
}

pub fn audio_lsb_extract(audio: &WavAudio) -> Result<Vec<u8>> {
    unframe_bits(audio.samples().iter().map(|s| s & 1 == 1))
}

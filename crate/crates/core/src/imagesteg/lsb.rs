use super::RasterImage;
use crate::bitcodec::{bytes_to_bits, frame_payload, framed_len, unframe_bits, FRAME_OVERHEAD};
use crate::error::{Error, Result};

/// Embedding capacity of a carrier, in bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capacity {
    /// Raw bytes the carrier can hold, frame included.
    pub total_bytes: usize,
    /// Largest payload that fits once the frame overhead is paid.
    pub usable_bytes: usize,
}

impl Capacity {
    pub fn from_bits(bits: usize) -> Self {
        let total_bytes = bits / 8;
        Self {
            total_bytes,
            usable_bytes: total_bytes.saturating_sub(FRAME_OVERHEAD),
        }
    }

    pub(crate) fn check(&self, payload_len: usize) -> Result<()> {
        if framed_len(payload_len) > self.total_bytes {
            return Err(Error::CapacityExceeded {
                capacity: self.usable_bytes,
                requested: payload_len,
            });
        }
        Ok(())
    }
}

/// One bit per sample byte.
pub fn lsb_capacity(image: &RasterImage) -> Capacity {
    Capacity::from_bits(image.samples().len())
}

pub fn lsb_embed(image: &RasterImage, payload: &[u8]) -> Result<RasterImage> {
    lsb_capacity(image).check(payload.len())?;
    let frame = frame_payload(payload);
    let mut out = image.clone();
    for (sample, bit) in out.samples_mut().iter_mut().zip(bytes_to_bits(&frame)) {
        *sample = (*sample & !1) | bit as u8;
    }
    Ok(out)
}

pub fn lsb_extract(image: &RasterImage) -> Result<Vec<u8>> {
    unframe_bits(image.samples().iter().map(|s| s & 1 == 1))
}
